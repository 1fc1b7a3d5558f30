//! Weight-filtered Zhu algebras, their modules, and lowest weight spaces.

mod amodule;
mod omega;
mod quotient;

pub use amodule::AModule;
pub use omega::{generators_annihilate, omega_n};
pub use quotient::{
    extended_element_g, extended_element_n, membership_sweep, mult_g, mult_n, o_g_generators, o_n_generators, residue_element, translation_elements,
    span_oracle_dims, ZhuKind, ZhuQuotient,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::{q, q2, ScaledExponent};
    use crate::linear::Vector;
    use crate::residue::ModuleData;
    use crate::vertex::{build_heisenberg, parity_automorphism, TruncatedVertexAlgebra};

    fn heis(cutoff: i64) -> Arc<TruncatedVertexAlgebra> {
        Arc::new(build_heisenberg(cutoff).unwrap())
    }

    #[test]
    fn level_zero_quotient_is_polynomial_filtered() {
        let alg = heis(7);
        for cap in 3..=5 {
            let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), cap).unwrap();
            assert_eq!(z.filtered_dims(), span_oracle_dims(&alg, &ZhuKind::Level(0), cap).unwrap());
            assert!(z.is_commutative());
            assert!(z.verify(None).unwrap().is_empty());
        }
    }

    #[test]
    fn vacuum_generators() {
        let alg = heis(4);
        let a = alg.space().index_of("a(-1)").unwrap();
        let vac = alg.vacuum().leading().unwrap().0;
        // u o 1 at level 0 is u_{-2}1 + (wt u) u
        let x = residue_element(&alg, a, vac, ScaledExponent::int(1), 2).unwrap();
        let mut expect = Vector::unit(alg.space().index_of("a(-2)").unwrap());
        expect.add_at(a, &q(1));
        assert_eq!(x, expect);
        assert!(residue_element(&alg, vac, a, ScaledExponent::int(0), 2).unwrap().is_zero());
    }

    #[test]
    fn vacuum_is_left_unit() {
        let alg = heis(5);
        let vac = alg.vacuum().leading().unwrap().0;
        for v in alg.basis_upto(3) {
            assert_eq!(mult_n(&alg, 1, vac, v).unwrap(), Vector::unit(v));
            assert_eq!(mult_n(&alg, 0, vac, v).unwrap(), Vector::unit(v));
        }
    }

    #[test]
    fn twisted_quotient_kills_odd_part() {
        let alg = heis(6);
        let g = parity_automorphism(6).unwrap();
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Twisted(g.clone()), 3).unwrap();
        assert_eq!(z.filtered_dims(), span_oracle_dims(&alg, &ZhuKind::Twisted(g), 3).unwrap());
        assert!(z.verify(None).unwrap().is_empty());
    }

    #[test]
    fn identity_twist_matches_level_zero() {
        let alg = heis(6);
        let z0 = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 4).unwrap();
        let zg = ZhuQuotient::build(alg.clone(), ZhuKind::Twisted(crate::vertex::Automorphism::identity(alg.dim())), 4).unwrap();
        assert_eq!(z0.filtered_dims(), zg.filtered_dims());
        assert_eq!(z0.mult_table(), zg.mult_table());
    }

    #[test]
    fn level_one_is_unital_and_associative() {
        let alg = heis(8);
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(1), 4).unwrap();
        assert_eq!(z.filtered_dims(), span_oracle_dims(&alg, &ZhuKind::Level(1), 4).unwrap());
        assert!(z.verify(None).unwrap().is_empty());
    }

    #[test]
    fn extended_family_lies_in_span() {
        let alg = heis(7);
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 4).unwrap();
        let mut tested = 0;
        for u in alg.basis_upto(2) {
            for v in alg.basis_upto(2) {
                for m in 0..=2 {
                    for k in 0..=m {
                        let x = extended_element_n(&alg, 0, u, v, m, k).unwrap();
                        if z.within_cap(&x) {
                            assert!(z.contains(&x).unwrap(), "u={u} v={v} m={m} k={k}");
                            tested += 1;
                        }
                    }
                }
            }
        }
        assert!(tested > 10);
    }

    #[test]
    fn membership_sweeps_pass() {
        let alg = heis(7);
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 4).unwrap();
        let t = membership_sweep(&z, 2, 3).unwrap();
        assert!(t.passed() && t.checked > 20, "{t:?}");
        let z1 = ZhuQuotient::build(alg.clone(), ZhuKind::Level(1), 5).unwrap();
        let t1 = membership_sweep(&z1, 1, 2).unwrap();
        assert!(t1.passed() && t1.checked > 0, "{t1:?}");
        let g = parity_automorphism(7).unwrap();
        let zg = ZhuQuotient::build(alg.clone(), ZhuKind::Twisted(g), 3).unwrap();
        let tg = membership_sweep(&zg, 2, 2).unwrap();
        assert!(tg.passed() && tg.checked > 5, "{tg:?}");
    }

    #[test]
    fn generators_kill_lowest_weight_space() {
        let alg = heis(6);
        let m = ModuleData::fock(alg.clone(), Some(q2(3, 2)), ScaledExponent::int(3)).unwrap();
        let om = omega_n(&m, 0).unwrap();
        let gens = o_n_generators(&alg, 0, 4).unwrap();
        let t = generators_annihilate(&m, &om, &gens).unwrap();
        assert!(t.passed() && t.checked == gens.len(), "{t:?}");

        let g = parity_automorphism(6).unwrap();
        let tw = ModuleData::fock(alg.clone(), None, ScaledExponent::new(3, 2)).unwrap();
        let omg = omega_n(&tw, 0).unwrap();
        let gens = o_g_generators(&alg, &g, 3).unwrap();
        let t = generators_annihilate(&tw, &omg, &gens).unwrap();
        assert!(t.passed() && t.checked > 0, "{t:?}");

        // degree one vectors are not lowest weight vectors
        let top = crate::linear::span_close(m.space(), m.space().component(ScaledExponent::int(1)).map(Vector::unit)).unwrap();
        let gens = o_n_generators(&alg, 0, 4).unwrap();
        assert!(!generators_annihilate(&m, &top, &gens).unwrap().passed());
    }

    #[test]
    fn omega_of_fock_is_vacuum_line() {
        let alg = heis(5);
        let m = ModuleData::fock(alg.clone(), Some(q2(3, 2)), ScaledExponent::int(3)).unwrap();
        let om = omega_n(&m, 0).unwrap();
        assert_eq!(om.basis(), vec![Vector::unit(m.space().index_of("v").unwrap())]);
        let om1 = omega_n(&m, 1).unwrap();
        assert_eq!(om1.rank(), 2);
        assert!(om.is_subspace_of(&om1));
        let tw = ModuleData::fock(alg.clone(), None, ScaledExponent::new(3, 2)).unwrap();
        assert_eq!(omega_n(&tw, 0).unwrap().rank(), 1);
    }

    #[test]
    fn omega_action_is_scalar_lambda() {
        let alg = heis(5);
        let m = ModuleData::fock(alg.clone(), Some(q2(3, 2)), ScaledExponent::int(2)).unwrap();
        let om = omega_n(&m, 0).unwrap();
        let (am, _) = AModule::from_omega(&m, ZhuKind::Level(0), &om).unwrap();
        let a = alg.space().index_of("a(-1)").unwrap();
        assert_eq!(am.rho(a).unwrap().get(0, 0), &q2(3, 2));
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 3).unwrap();
        assert!(am.verify_against(&z).unwrap().is_empty());
    }

    #[test]
    fn amodule_text_round_trip() {
        let alg = heis(5);
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 3).unwrap();
        let m = ModuleData::fock(alg.clone(), Some(q(2)), ScaledExponent::int(1)).unwrap();
        let (am, _) = AModule::from_omega(&m, ZhuKind::Level(0), &omega_n(&m, 0).unwrap()).unwrap();
        let text = am.to_text();
        let again = AModule::from_text(alg.clone(), ZhuKind::Level(0), &text, None).unwrap();
        assert_eq!(again.to_text(), text);
        // only the quotient representatives are given; the rest follow from the quotient
        let reps: Vec<String> = z.quotient().representatives().iter().map(|r| alg.label(*r).to_string()).collect();
        let mut short = "[amodule]\ndim 1\n".to_string();
        for r in &reps {
            let u = alg.space().index_of(r).unwrap();
            short.push_str(&format!("[rho {r}]\n{}\n", am.rho(u).unwrap().get(0, 0)));
        }
        let filled = AModule::from_text(alg.clone(), ZhuKind::Level(0), &short, Some(&z)).unwrap();
        let a2 = alg.space().index_of("a(-2)").unwrap();
        assert_eq!(filled.rho(a2).unwrap().get(0, 0), &q(-2));
        for u in alg.basis_upto(3) {
            assert_eq!(filled.rho(u).unwrap(), am.rho(u).unwrap(), "{}", alg.label(u));
        }
        assert!(filled.verify_against(&z).unwrap().is_empty());
    }
}
