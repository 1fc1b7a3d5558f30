//! Acceptance run: ten criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use vertex_induce::exact::{q2, Rational, ScaledExponent as SE};
use vertex_induce::induction::{
    check_admissibility, check_confluence, check_embedding, universal_map, InduceParams, InducedModule,
};
use vertex_induce::linear::Vector;
use vertex_induce::residue::{check_associativity_triple, JacobiPlan, ModuleData, Tally};
use vertex_induce::vertex::{build_heisenberg, parity_automorphism, Automorphism, TruncatedVertexAlgebra};
use vertex_induce::zhu::{
    generators_annihilate, membership_sweep, o_g_generators, o_n_generators, omega_n, span_oracle_dims, AModule,
    ZhuKind, ZhuQuotient,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn heis(cutoff: i64) -> Arc<TruncatedVertexAlgebra> {
    Arc::new(build_heisenberg(cutoff).unwrap())
}

/// Number of partitions of `n` with parts drawn from `allowed`, by the
/// usual coin-change recurrence.
fn partition_count(n: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in (1..=n).filter(|&p| allowed(p)) {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

struct Induced {
    fock: ModuleData,
    images: Vec<Vector>,
    module: Arc<InducedModule>,
}

fn induce_from_fock(vcut: i64, lambda: Option<Rational>, kind: ZhuKind, cutoff: SE) -> Induced {
    let fock = ModuleData::fock(heis(vcut), lambda, cutoff).unwrap();
    let (ctx, images) = AModule::from_omega(&fock, kind, &omega_n(&fock, 0).unwrap()).unwrap();
    let ctx = Arc::new(ctx);
    let params = InduceParams::new(&ctx, cutoff);
    let module = Arc::new(InducedModule::build(ctx, params).unwrap());
    Induced { fock, images, module }
}

fn level_zero() -> Induced {
    induce_from_fock(9, Some(q2(1, 2)), ZhuKind::Level(0), SE::int(4))
}

fn twisted() -> Induced {
    induce_from_fock(9, None, ZhuKind::Twisted(parity_automorphism(9).unwrap()), SE::new(5, 2))
}

#[derive(Default)]
struct Sweep {
    weak: Tally,
    product: Tally,
    truncation: Tally,
    components: Tally,
    inconsistent: usize,
    triples: usize,
}

fn sweep(m: &ModuleData, weight: i64) -> Sweep {
    let alg = m.algebra().clone();
    let mut s = Sweep::default();
    for u in alg.basis_upto(weight) {
        for v in alg.basis_upto(weight) {
            for w in 0..m.dim() {
                let r = check_associativity_triple(m, u, v, w).unwrap();
                s.triples += 1;
                s.inconsistent += !r.equivalence_consistent() as usize;
                s.weak.merge(r.weak_associativity);
                s.product.merge(r.product_formula);
                s.truncation.merge(r.truncation);
                s.components.merge(r.component_forms);
            }
        }
    }
    s
}

fn weak_associativity_forward() -> Outcome {
    let m = ModuleData::fock(heis(6), Some(q2(1, 2)), SE::int(4)).map_err(|e| e.to_string())?;
    let s = sweep(&m, 3);
    for (name, t) in [("weak associativity", &s.weak), ("product formula", &s.product), ("truncation", &s.truncation), ("component forms", &s.components)] {
        ensure(t.passed(), || format!("{name} failed at {}", t.failures[0].position))?;
        ensure(t.checked > 0, || format!("{name} compared nothing"))?;
    }
    ensure(s.inconsistent == 0, || format!("{} triples disagree between formulations", s.inconsistent))?;
    Ok(format!(
        "{} triples; weak {}, product {}, truncation {}, components {} comparisons",
        s.triples, s.weak.checked, s.product.checked, s.truncation.checked, s.components.checked
    ))
}

fn weak_associativity_converse() -> Outcome {
    let m = ModuleData::fock(heis(6), Some(q2(1, 2)), SE::int(4)).unwrap();
    let idx = |l: &str| m.space().index_of(l).unwrap();
    let a = m.algebra().space().index_of("a(-1)").unwrap();
    let bad = m.perturbed(a, SE::int(-1), idx("v"), &Vector::unit(idx("a(-1)a(-1)v"))).unwrap();
    let s = sweep(&bad, 2);
    ensure(!s.weak.passed(), || "weak associativity missed the perturbation".into())?;
    let residue = s.product.failures.first().or(s.truncation.failures.first());
    let witness = residue.ok_or("residue formulation missed the perturbation")?;
    // on a broken module the formulations agree globally, not triple by triple
    Ok(format!(
        "weak {} failures, product {}, truncation {}, {} of {} triples split; witness {}",
        s.weak.failures.len(),
        s.product.failures.len(),
        s.truncation.failures.len(),
        s.inconsistent,
        s.triples,
        witness.position
    ))
}

fn generators_annihilate_lowest_space() -> Outcome {
    let alg = heis(6);
    let m = ModuleData::fock(alg.clone(), Some(q2(3, 2)), SE::int(3)).unwrap();
    let gens = o_n_generators(&alg, 0, 4).unwrap();
    let t = generators_annihilate(&m, &omega_n(&m, 0).unwrap(), &gens).unwrap();
    ensure(t.passed() && t.checked == gens.len(), || format!("level zero: {t:?}"))?;
    let g = parity_automorphism(6).unwrap();
    let tw = ModuleData::fock(alg.clone(), None, SE::new(3, 2)).unwrap();
    let tgens = o_g_generators(&alg, &g, 3).unwrap();
    let tt = generators_annihilate(&tw, &omega_n(&tw, 0).unwrap(), &tgens).unwrap();
    ensure(tt.passed() && tt.checked + tt.vacuous == tgens.len(), || format!("twisted: {tt:?}"))?;
    Ok(format!("{} level zero generators, {} twisted generators", gens.len(), tgens.len()))
}

fn membership_sweeps() -> Outcome {
    let alg = heis(7);
    let mut parts = Vec::new();
    let g = parity_automorphism(7).unwrap();
    for (kind, cap, weight, max_m) in [
        (ZhuKind::Level(0), 4, 2, 3),
        (ZhuKind::Level(1), 5, 1, 2),
        (ZhuKind::Twisted(g), 3, 2, 2),
    ] {
        let z = ZhuQuotient::build(alg.clone(), kind.clone(), cap).unwrap();
        let t = membership_sweep(&z, weight, max_m).unwrap();
        ensure(t.passed(), || format!("{}: {:?}", kind.describe(), t.failures.first().map(|c| &c.position)))?;
        ensure(t.checked > 0, || format!("{}: nothing under the cap", kind.describe()))?;
        parts.push(format!("{} {}", kind.describe(), t.checked));
    }
    Ok(parts.join(", "))
}

fn level_zero_quotient_dims() -> Outcome {
    let alg = heis(7);
    let mut previous: Option<Vec<usize>> = None;
    let mut out = Vec::new();
    for cap in 3..=5 {
        let z = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), cap).unwrap();
        let dims = z.filtered_dims();
        let oracle = span_oracle_dims(&alg, &ZhuKind::Level(0), cap).unwrap();
        ensure(dims == oracle, || format!("cap {cap}: {dims:?} vs oracle {oracle:?}"))?;
        if let Some(p) = &previous {
            ensure(dims.starts_with(p), || format!("cap {cap}: {dims:?} does not extend {p:?}"))?;
        }
        let failures = z.verify(None).unwrap();
        ensure(failures.is_empty(), || format!("cap {cap}: {}", failures[0]))?;
        ensure(z.is_commutative(), || format!("cap {cap}: not commutative"))?;
        out.push(format!("{dims:?}"));
        previous = Some(dims);
    }
    Ok(out.join(" "))
}

fn identity_twist_degenerates() -> Outcome {
    let alg = heis(6);
    let z0 = ZhuQuotient::build(alg.clone(), ZhuKind::Level(0), 4).unwrap();
    let zg = ZhuQuotient::build(alg.clone(), ZhuKind::Twisted(Automorphism::identity(alg.dim())), 4).unwrap();
    ensure(z0.filtered_dims() == zg.filtered_dims(), || "quotient dims differ".into())?;
    ensure(z0.mult_table() == zg.mult_table(), || "multiplication tables differ".into())?;

    let cutoff = SE::int(2);
    let build = |kind| {
        let fock = ModuleData::fock(heis(9), Some(q2(1, 2)), cutoff).unwrap();
        let (ctx, _) = AModule::from_omega(&fock, kind, &omega_n(&fock, 0).unwrap()).unwrap();
        let ctx = Arc::new(ctx);
        let mut params = InduceParams::new(&ctx, cutoff);
        params.frame = 9;
        params.window.left_weight = 9;
        params.window.right_weight = 9;
        InducedModule::build(ctx, params).unwrap()
    };
    let s0 = build(ZhuKind::Level(0));
    let sg = build(ZhuKind::Twisted(Automorphism::identity(s0.algebra().dim())));
    ensure(s0.graded_dims() == sg.graded_dims(), || "induced dims differ".into())?;
    let mut compared = 0;
    for i in 0..s0.dim() {
        ensure(s0.label(i) == sg.label(i), || format!("basis {i} differs"))?;
        for u in s0.algebra().basis_upto(2) {
            for n in -4..=3 {
                match (s0.act(u, SE::int(n), i), sg.act(u, SE::int(n), i)) {
                    (Ok(a), Ok(b)) => {
                        ensure(a == b, || format!("{}({n}) on {}", s0.algebra().label(u), s0.label(i)))?;
                        compared += 1;
                    }
                    (Err(a), Err(b)) if a.is_precision() && b.is_precision() => {}
                    (a, b) => return Err(format!("{a:?} vs {b:?}")),
                }
            }
        }
    }
    Ok(format!("quotient dims {:?}; {compared} action entries equal", z0.filtered_dims()))
}

fn induced_modules_admissible(fixtures: &[(&str, &Induced)]) -> Outcome {
    let plan = JacobiPlan { samples: 200, seed: 7, exhaustive_limit: 0 };
    let mut out = Vec::new();
    for (name, f) in fixtures {
        let r = check_admissibility(&f.module, 2, &plan).unwrap();
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        ensure(r.jacobi.checked + r.jacobi.vacuous >= 200, || format!("{name}: only {} Jacobi tuples", r.jacobi.checked))?;
        ensure(r.weak_associativity.checked > 0, || format!("{name}: no weak associativity comparisons"))?;
        out.push(format!("{name} {} triples, {} Jacobi", r.triples, r.jacobi.checked));
    }
    Ok(out.join(", "))
}

fn lowest_space_embeds(fixtures: &[(&str, &Induced)]) -> Outcome {
    let mut out = Vec::new();
    for (name, f) in fixtures {
        let r = check_embedding(&f.module, 1).unwrap();
        ensure(r.injective(), || format!("{name}: base dimension {} of {}", r.base_dim, r.expected))?;
        let mut n = 0;
        for (tag, t) in &r.annihilation {
            ensure(t.passed(), || format!("{name} {tag}: {:?}", t.failures.first().map(|c| &c.position)))?;
            ensure(t.checked > 0, || format!("{name} {tag}: nothing checked"))?;
            n += t.checked;
        }
        out.push(format!("{name} {n} elements zero"));
    }
    Ok(out.join(", "))
}

fn induced_dims_and_universal_map(level: &Induced, tw: &Induced) -> Outcome {
    let dims = |s: &InducedModule| s.graded_dims().into_iter().map(|(_, n)| n).collect::<Vec<_>>();
    let expect: Vec<usize> = (0..=4).map(|d| partition_count(d, |_| true)).collect();
    ensure(dims(&level.module) == expect, || format!("level zero {:?} vs {expect:?}", dims(&level.module)))?;
    let expect_tw: Vec<usize> = (0..=5).map(|d| partition_count(d, |p| p % 2 == 1)).collect();
    ensure(dims(&tw.module) == expect_tw, || format!("twisted {:?} vs {expect_tw:?}", dims(&tw.module)))?;
    for (name, f) in [("level zero", level), ("twisted", tw)] {
        let u = universal_map(&f.module, &f.fock, &f.images, 2).unwrap();
        ensure(u.is_well_defined(), || format!("{name}: {:?}", u.relation_failures))?;
        ensure(u.is_isomorphism(), || format!("{name}: ranks {:?}", u.ranks))?;
        ensure(u.intertwining.passed() && u.intertwining.checked > 0, || format!("{name}: {:?}", u.intertwining.failures))?;
    }
    Ok(format!("level zero {expect:?}, twisted {expect_tw:?}"))
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_vertex-induce")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism_and_confluence() -> Outcome {
    let args = ["induce", "--heisenberg", "6", "--fock", "1/2", "--cutoff", "2", "--format", "structured"];
    let first = run_cli(&args);
    ensure(first == run_cli(&args), || "structured induce output differs between runs".into())?;
    let zargs = ["zhu", "--heisenberg", "6", "--twist", "parity", "--cutoff", "3"];
    ensure(run_cli(&zargs) == run_cli(&zargs), || "zhu output differs between runs".into())?;

    let cutoff = SE::int(2);
    let fock = ModuleData::fock(heis(12), Some(q2(1, 2)), cutoff).unwrap();
    let (ctx, _) = AModule::from_omega(&fock, ZhuKind::Level(0), &omega_n(&fock, 0).unwrap()).unwrap();
    let ctx = Arc::new(ctx);
    let mut params = InduceParams::new(&ctx, cutoff);
    params.frame = 12;
    params.window.left_weight = 6;
    params.window.right_weight = 6;
    let s = InducedModule::build(ctx, params).unwrap();
    let r = check_confluence(&s, 2, 3).unwrap();
    ensure(r.passed(), || format!("{:?}", r.failures.first()))?;
    ensure(r.skipped == 0, || format!("{} words beyond precision", r.skipped))?;
    Ok(format!("byte-identical reruns; {} three-mode words agree", r.words))
}

fn main() {
    let mut criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("weak associativity and residue formulas on the Fock module", Box::new(weak_associativity_forward)),
        ("a perturbed module fails both formulations", Box::new(weak_associativity_converse)),
        ("relation generators kill lowest weight vectors", Box::new(generators_annihilate_lowest_space)),
        ("extended elements lie in the relation span", Box::new(membership_sweeps)),
        ("level zero quotient matches the span oracle", Box::new(level_zero_quotient_dims)),
        ("identity twist reproduces level zero", Box::new(identity_twist_degenerates)),
    ];
    let level = Arc::new(catch_unwind(level_zero));
    let tw = Arc::new(catch_unwind(twisted));
    let with_fixtures = |f: fn(&Induced, &Induced) -> Outcome| {
        let (level, tw) = (level.clone(), tw.clone());
        Box::new(move || match (level.as_ref(), tw.as_ref()) {
            (Ok(l), Ok(t)) => f(l, t),
            _ => Err("building the induced modules failed".into()),
        }) as Box<dyn Fn() -> Outcome>
    };
    criteria.push((
        "induced modules pass the admissibility suite",
        with_fixtures(|l, t| induced_modules_admissible(&[("level zero", l), ("twisted", t)])),
    ));
    criteria.push((
        "lowest space embeds and annihilation elements vanish",
        with_fixtures(|l, t| lowest_space_embeds(&[("level zero", l), ("twisted", t)])),
    ));
    criteria.push(("induced dims count partitions and map onto Fock", with_fixtures(induced_dims_and_universal_map)));
    criteria.push(("reruns are identical and reduction is confluent", Box::new(determinism_and_confluence)));

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
