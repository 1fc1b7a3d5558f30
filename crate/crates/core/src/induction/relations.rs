use num_traits::Zero;

use super::normal::NormalForms;
use crate::error::Result;
use crate::exact::ScaledExponent;
use crate::linear::{Echelon, Vector};
use crate::vertex::binom_se;
use crate::zhu::ZhuKind;

type SE = ScaledExponent;

/// Enumeration windows for the relation space. Every window is finite; the
/// stabilization checks compare results across widened windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWindow {
    /// Weight bound for the outer element `u` of each relation.
    pub left_weight: i64,
    /// Weight bound for the inner element `v` of each relation.
    pub right_weight: i64,
    /// Closure under single modes of algebra elements up to this weight.
    pub closure_weight: i64,
    /// How many values of `m` below the largest admissible one are used.
    pub extra_m: i64,
    /// Seed relations on every normal form entry rather than on `W` only.
    pub all_tails: bool,
}

impl Default for RelationWindow {
    fn default() -> Self {
        RelationWindow { left_weight: 4, right_weight: 4, closure_weight: 1, extra_m: 0, all_tails: false }
    }
}

/// Counts reported alongside a relation space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationStats {
    pub generated: usize,
    pub skipped: usize,
    pub closure_steps: usize,
    pub closure_skipped: usize,
}

fn seed_tails(nf: &NormalForms, window: &RelationWindow) -> Vec<usize> {
    if window.all_tails {
        (0..nf.dim()).collect()
    } else {
        (0..nf.context().dim()).map(|w| nf.pure(w)).collect()
    }
}

/// Residue relation `sum_j C(l,j) (u_{j+m} v)(N-j-m-2) x` on the normal
/// form basis element `x`, with `l` and the bound on `m` depending on the
/// degree of `x`. Returns every `m` in the window for the given target
/// degree `d`.
pub fn j_relations_at(nf: &NormalForms, u: usize, v: usize, x: usize, d: SE, extra_m: i64) -> Result<Vec<Vector>> {
    let alg = nf.algebra();
    let (wu, wv) = (alg.weight(u), alg.weight(v));
    let deg_x = nf.degree(x);
    let n_mode = SE::int(wu + wv) + deg_x - d;
    if !n_mode.same_coset(&(nf.mode_offset(u) + nf.mode_offset(v))) {
        return Ok(Vec::new());
    }
    let (l, bound) = match nf.context().kind() {
        ZhuKind::Level(n) => {
            let l = SE::int(wu + n) + deg_x;
            (l, n_mode - 2 - wu - wv - 2 * n - deg_x - deg_x)
        }
        ZhuKind::Twisted(_) => {
            let l = nf.twisted_exponent(u, deg_x);
            (l, n_mode - 2 - wv - deg_x - l)
        }
    };
    let m_max = bound.floor();
    let stop = wu + wv;
    if stop - (m_max - extra_m) - 1 > alg.cutoff() {
        return Err(crate::error::Error::Precision(format!(
            "residue relation for {} and {} needs iterates of weight {}",
            alg.label(u),
            alg.label(v),
            stop - (m_max - extra_m) - 1
        )));
    }
    let ex = Vector::unit(x);
    let mut out = Vec::new();
    for m in (m_max - extra_m)..=m_max {
        let mut rel = Vector::zero();
        let mut j = 0i64;
        while j + m < stop {
            let c = binom_se(l, j);
            if !c.is_zero() {
                let y = alg.mode(u, j + m, v)?;
                if !y.is_zero() {
                    rel.add_scaled(&nf.act_vec(&y, n_mode - j - m - 2, &ex)?, &c);
                }
            }
            j += 1;
        }
        if !rel.is_zero() {
            out.push(rel);
        }
    }
    Ok(out)
}

/// All residue relations of degree `d` inside the window, with precision
/// blocked ones counted.
pub fn j_relations(nf: &NormalForms, d: SE, window: &RelationWindow, stats: &mut RelationStats) -> Result<Vec<Vector>> {
    let alg = nf.algebra();
    let mut out = Vec::new();
    let xs = seed_tails(nf, window);
    for x in xs {
        for u in alg.basis_upto(window.left_weight) {
            for v in alg.basis_upto(window.right_weight) {
                match j_relations_at(nf, u, v, x, d, window.extra_m) {
                    Ok(rels) => {
                        stats.generated += rels.len();
                        out.extend(rels);
                    }
                    Err(e) if e.is_precision() => stats.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// Consistency relations of the rewriting ideal landing in degree `d`:
/// `u(p) v(q) x` reduced right to left minus its product relation
/// expansion, for `u, v` in the generator window and `x` a normal form
/// entry.
pub fn consistency_relations(nf: &NormalForms, d: SE, window: &RelationWindow, stats: &mut RelationStats) -> Result<Vec<Vector>> {
    let alg = nf.algebra();
    let step = SE::new(1, nf.space().scale());
    let mut out = Vec::new();
    let xs = seed_tails(nf, window);
    for x in xs {
        let deg_x = nf.degree(x);
        for v in alg.basis_upto(window.right_weight) {
            // mid degree wt v - q - 1 + deg x ranges over [0, cutoff]
            let top_q = SE::int(alg.weight(v) - 1) + deg_x;
            let mut q = nf.mode_offset(v).least_in_coset_above(top_q - nf.cutoff() - step);
            while q <= top_q {
                let mid = top_q - q;
                for u in alg.basis_upto(window.left_weight) {
                    let p = SE::int(alg.weight(u) - 1) + mid - d;
                    if !nf.in_coset(u, p) {
                        continue;
                    }
                    match nf.consistency_relation(u, p, v, q, x) {
                        Ok(r) if !r.is_zero() => {
                            stats.generated += 1;
                            out.push(r);
                        }
                        Ok(_) => {}
                        Err(e) if e.is_precision() => stats.skipped += 1,
                        Err(e) => return Err(e),
                    }
                }
                q = q + 1;
            }
        }
    }
    Ok(out)
}

/// Smallest submodule (for the given closure window) containing `seeds`:
/// the span is repeatedly enlarged by single modes of algebra elements.
pub fn close_under_modes(nf: &NormalForms, seeds: Vec<Vector>, window: &RelationWindow, stats: &mut RelationStats) -> Result<Echelon> {
    let alg = nf.algebra();
    let mut span = Echelon::new();
    let mut queue = seeds;
    let step = SE::new(1, nf.space().scale());
    while let Some(x) = queue.pop() {
        if !span.insert(x.clone()) {
            continue;
        }
        let Some(deg) = nf.space().homogeneous_degree(&x) else { continue };
        for a in alg.basis_upto(window.closure_weight) {
            // every mode landing in degrees 0..=cutoff
            let top = SE::int(alg.weight(a) - 1) + deg;
            let mut p = nf.mode_offset(a).least_in_coset_above(top - nf.cutoff() - step);
            while p <= top {
                stats.closure_steps += 1;
                match nf.act(a, p, &x) {
                    Ok(y) if !y.is_zero() => queue.push(y),
                    Ok(_) => {}
                    Err(e) if e.is_precision() => stats.closure_skipped += 1,
                    Err(e) => return Err(e),
                }
                p = p + 1;
            }
        }
    }
    Ok(span)
}
