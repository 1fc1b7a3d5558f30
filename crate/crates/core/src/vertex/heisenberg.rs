use super::algebra::TruncatedVertexAlgebra;
use super::automorphism::Automorphism;
use super::fock::{monomial_label, partitions, Monomial};
use crate::error::Result;
use crate::exact::{q2, ScaledExponent};
use crate::linear::{GradedSpace, Vector};

/// Rank one free boson truncated at weight `cutoff`, with basis the
/// monomials `a(-n_1)...a(-n_k)1` and `omega = a(-1)^2 1 / 2`. Structure
/// constants come from the mode-algebra model in [`super::fock`].
pub fn build_heisenberg(cutoff: i64) -> Result<TruncatedVertexAlgebra> {
    let (space, basis) = heisenberg_space(cutoff)?;
    let vacuum = Vector::unit(0);
    let conformal = (cutoff >= 2).then(|| {
        let i = basis.iter().position(|m| *m == vec![1, 1]).unwrap();
        Vector::from_entries([(i, q2(1, 2))])
    });
    let dim = basis.len();
    TruncatedVertexAlgebra::from_oracle(space, basis, vacuum, conformal, Automorphism::identity(dim))
}

fn heisenberg_space(cutoff: i64) -> Result<(GradedSpace, Vec<Monomial>)> {
    let mut components = Vec::new();
    let mut basis = Vec::new();
    for w in 0..=cutoff.max(0) {
        let parts = partitions(w, &|_| true);
        components.push((ScaledExponent::int(w), parts.iter().map(|m| monomial_label(m, 1, "1")).collect()));
        basis.extend(parts);
    }
    Ok((GradedSpace::new(1, components)?, basis))
}

/// The involution `a -> -a`: a monomial lies in `V^1` exactly when it has
/// an odd number of factors.
pub fn parity_automorphism(cutoff: i64) -> Result<Automorphism> {
    let (_, basis) = heisenberg_space(cutoff)?;
    Automorphism::from_labels(2, basis.iter().map(|m| (m.len() % 2) as i64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_dimensions_are_partition_numbers() {
        let v = build_heisenberg(4).unwrap();
        let dims: Vec<usize> = (0..=4).map(|w| v.space().dim_at(ScaledExponent::int(w))).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5]);
    }

    #[test]
    fn level_one_pairing() {
        let v = build_heisenberg(4).unwrap();
        let a = v.space().index_of("a(-1)").unwrap();
        assert!(v.mode(a, 0, a).unwrap().is_zero());
        assert_eq!(v.mode(a, 1, a).unwrap(), Vector::unit(0));
        assert!(v.mode(a, -5, a).unwrap_err().is_precision());
    }

    #[test]
    fn skew_symmetry_holds() {
        let v = build_heisenberg(4).unwrap();
        assert!(v.check_skew_symmetry(4).unwrap().is_empty());
    }

    #[test]
    fn parity_is_compatible() {
        let v = build_heisenberg(4).unwrap();
        let g = parity_automorphism(4).unwrap();
        let v = v.with_automorphism(g, None).unwrap();
        let parts = v.eigenspace_decompose();
        assert_eq!(parts[0].rank() + parts[1].rank(), v.dim());
        let even = (0..v.dim()).filter(|i| v.label(*i).matches("a(").count() % 2 == 0).count();
        assert_eq!(parts[0].rank(), even);
    }
}
