use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use proptest::prelude::*;

use vertex_induce::exact::{binomial_expand, q, q2, Rational, ScaledExponent as SE, Var};
use vertex_induce::induction::{universal_map, InduceParams, InducedModule};
use vertex_induce::linear::{Echelon, Matrix, Vector};
use vertex_induce::residue::{check_associativity_triple, check_jacobi, load_module, JacobiPlan, ModuleData};
use vertex_induce::vertex::{build_heisenberg, TruncatedVertexAlgebra};
use vertex_induce::zhu::{generators_annihilate, o_n_generators, omega_n, AModule, ZhuKind};

fn heis() -> Arc<TruncatedVertexAlgebra> {
    static A: OnceLock<Arc<TruncatedVertexAlgebra>> = OnceLock::new();
    A.get_or_init(|| Arc::new(build_heisenberg(6).unwrap())).clone()
}

fn exponent() -> impl Strategy<Value = SE> {
    (-40i64..40, prop::sample::select(vec![1i64, 2, 3, 4])).prop_map(|(n, s)| SE::new(n, s))
}

fn lambda() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q2(n, d))
}

fn vector(len: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, len).prop_map(|cs| Vector::from_entries(cs.into_iter().enumerate().map(|(i, c)| (i, q(c)))))
}

/// `l (l-1) ... (l-i+1) / i!`
fn falling_binomial(l: &Rational, i: u64) -> Rational {
    (0..i).fold(Rational::one(), |acc, j| acc * (l - q(j as i64)) / q(j as i64 + 1))
}

proptest! {
    #[test]
    fn coset_successor_is_least_strictly_above(x in exponent(), bound in exponent()) {
        let y = x.least_in_coset_above(bound);
        prop_assert!(y > bound);
        prop_assert!(y.same_coset(&x));
        prop_assert!(y - 1 <= bound);
    }

    #[test]
    fn floor_and_ceil_bracket(x in exponent()) {
        let r = x.to_rational();
        prop_assert!(q(x.floor()) <= r && r < q(x.floor() + 1));
        prop_assert!(q(x.ceil() - 1) < r && r <= q(x.ceil()));
        prop_assert_eq!(x.is_integer(), x.floor() == x.ceil());
    }

    #[test]
    fn binomial_expansion_coefficients(l in exponent(), order in 0u64..6) {
        let vars = [Var::X0, Var::X2];
        let s = binomial_expand(&vars, l, Var::X0, Var::X2, order).unwrap();
        let top = l.to_rational();
        for i in 0..=order {
            let expect = falling_binomial(&top, i);
            let got = s.coefficient(&[l - i as i64, SE::int(i as i64)]).unwrap().cloned().unwrap_or_else(Rational::zero);
            prop_assert_eq!(got, expect, "i = {}", i);
        }
    }

    #[test]
    fn echelon_membership_matches_rank(vs in prop::collection::vec(vector(5), 1..6), probe in vector(5)) {
        let mut e = Echelon::new();
        for v in &vs {
            e.insert(v.clone());
        }
        prop_assert_eq!(e.rank(), Matrix::from_columns(5, &vs).rank());
        for v in &vs {
            prop_assert!(e.contains(v));
        }
        let r = e.reduce(&probe);
        prop_assert_eq!(e.reduce(&r), r.clone());
        let mut with = vs.clone();
        with.push(probe.clone());
        let grows = Matrix::from_columns(5, &with).rank() > e.rank();
        prop_assert_eq!(!r.is_zero(), grows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_modules_are_weakly_associative(l in lambda(), u in 0usize..4, v in 0usize..4, w in 0usize..4) {
        let alg = heis();
        let basis: Vec<usize> = alg.basis_upto(2).collect();
        let m = ModuleData::fock(alg, Some(l), SE::int(2)).unwrap();
        let r = check_associativity_triple(&m, basis[u], basis[v], w).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn fock_jacobi_components_vanish(l in lambda(), seed in any::<u64>()) {
        let m = ModuleData::fock(heis(), Some(l), SE::int(2)).unwrap();
        let t = check_jacobi(&m, 2, &JacobiPlan { samples: 20, seed, exhaustive_limit: 0 }).unwrap();
        prop_assert!(t.passed(), "{:?}", t.failures.first());
    }

    #[test]
    fn module_text_round_trips(l in lambda()) {
        let m = ModuleData::fock(heis(), Some(l), SE::int(2)).unwrap();
        let text = m.to_text(4).unwrap();
        let again = load_module(heis(), &text).unwrap();
        prop_assert_eq!(again.to_text(4).unwrap(), text);
    }

    #[test]
    fn level_zero_generators_kill_vacuum(l in lambda()) {
        let alg = heis();
        let m = ModuleData::fock(alg.clone(), Some(l), SE::int(2)).unwrap();
        let gens = o_n_generators(&alg, 0, 3).unwrap();
        let t = generators_annihilate(&m, &omega_n(&m, 0).unwrap(), &gens).unwrap();
        prop_assert!(t.passed() && t.checked == gens.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn induced_module_is_the_fock_module(l in lambda()) {
        let cutoff = SE::int(2);
        let fock = ModuleData::fock(Arc::new(build_heisenberg(7).unwrap()), Some(l), cutoff).unwrap();
        let (ctx, images) = AModule::from_omega(&fock, ZhuKind::Level(0), &omega_n(&fock, 0).unwrap()).unwrap();
        let ctx = Arc::new(ctx);
        let params = InduceParams::new(&ctx, cutoff);
        let s = InducedModule::build(ctx, params).unwrap();
        let dims: Vec<usize> = s.graded_dims().into_iter().map(|(_, n)| n).collect();
        prop_assert_eq!(dims, vec![1, 1, 2]);
        let u = universal_map(&s, &fock, &images, 2).unwrap();
        prop_assert!(u.passed(), "{:?} {:?}", u.ranks, u.relation_failures);
    }
}
