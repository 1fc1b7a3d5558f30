use std::sync::Arc;

use crate::error::Result;
use crate::exact::ScaledExponent;
use crate::linear::{kernel, span_close, Subspace, Vector};
use crate::residue::{ModuleData, Tally};

type SE = ScaledExponent;

/// Vectors killed by every mode that lowers degree by more than `n`, i.e.
/// `u_j w = 0` whenever `wt u - j - 1 < -n`. With `n = 0` on a twisted
/// module this is the space of lowest weight vectors.
pub fn omega_n(m: &ModuleData, n: i64) -> Result<Subspace> {
    let space = m.space().clone();
    let alg = m.algebra().clone();
    let step = SE::new(1, space.scale());
    let mut kept = Vec::new();
    for d in space.degrees().collect::<Vec<_>>() {
        let range = space.component(d);
        let mut images = vec![Vector::zero(); range.len()];
        // shifts s with -d <= s < -n; below -d every mode lands in negative degree
        let mut s = SE::zero() - d;
        let mut tag = 0usize;
        while s < SE::int(-n) {
            for u in 0..alg.dim() {
                let j = SE::int(alg.weight(u) - 1) - s;
                if !m.in_mode_coset(u, j) {
                    continue;
                }
                for (k, w) in range.clone().enumerate() {
                    let x = m.act(u, j, w)?;
                    // stack the maps by offsetting each one's target indices
                    images[k].add_vec(&x.map_indices(|i| i + tag * space.dim()));
                }
                tag += 1;
            }
            s = s + step;
        }
        let local = kernel(&images);
        kept.extend(local.into_iter().map(|v| v.map_indices(|k| range.start + k)));
    }
    span_close(&Arc::clone(&space), kept)
}

/// `o(x) w = 0` for every `x` in `generators` and every basis vector `w`
/// of `omega`.
pub fn generators_annihilate(m: &ModuleData, omega: &Subspace, generators: &[Vector]) -> Result<Tally> {
    let basis = omega.basis();
    let mut tally = Tally::default();
    for (i, x) in generators.iter().enumerate() {
        for (k, w) in basis.iter().enumerate() {
            let image = m.o_action(x, w).map(|y| (y, Vector::zero()));
            tally.record(|| format!("generator {i} on lowest vector {k}"), image, false)?;
        }
    }
    Ok(tally)
}
