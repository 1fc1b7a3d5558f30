//! Pipelines behind the command line: load inputs, run one construction
//! with its checks, and collect a report with one record per check.
//!
//! Reports contain no timings or addresses, so identical configurations
//! give byte-identical output.

use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Rational, ScaledExponent};
use crate::induction::{
    check_admissibility, check_confluence, check_embedding, universal_map, ConfluenceReport, InduceParams, InducedModule,
};
use crate::residue::{check_associativity_triple, check_jacobi, load_module, JacobiPlan, ModuleData, Tally};
use crate::vertex::{build_heisenberg, load_algebra, parity_automorphism, Automorphism, TruncatedVertexAlgebra};
use crate::zhu::{
    generators_annihilate, membership_sweep, o_g_generators, o_n_generators, omega_n, span_oracle_dims, AModule, ZhuKind,
    ZhuQuotient,
};

type SE = ScaledExponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Axioms, automorphism and skew symmetry of an algebra.
    CheckAlgebra,
    /// The associative algebra of a level or twist, with its checks.
    Zhu,
    /// The induced module of a lowest weight space or algebra module.
    Induce,
    /// Weak associativity against its residue reformulation, and Jacobi
    /// components, on a module.
    VerifyModule,
    /// Generators of the relation ideal act by zero on lowest weight vectors.
    VerifyAnnihilation,
    /// The induced module of a module's lowest weight space maps onto it.
    VerifyUniversal,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckAlgebra => "check-algebra",
            Command::Zhu => "zhu",
            Command::Induce => "induce",
            Command::VerifyModule => "verify-module",
            Command::VerifyAnnihilation => "verify-annihilation",
            Command::VerifyUniversal => "verify-universal",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraSource {
    File(PathBuf),
    /// The built-in rank one free boson truncated at this weight.
    Heisenberg(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleSource {
    File(PathBuf),
    /// Fock module of the built-in free boson with this zero-mode eigenvalue.
    Fock(Rational),
    /// Fock module twisted by `a -> -a`.
    TwistedFock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Identity,
    /// `a -> -a` on the built-in free boson.
    Parity,
    /// The automorphism stored with the algebra.
    FromAlgebra,
}

impl std::str::FromStr for Twist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Twist::Identity),
            "parity" => Ok(Twist::Parity),
            "algebra" => Ok(Twist::FromAlgebra),
            _ => Err(Error::Invalid(format!("unknown twist `{s}` (expected identity, parity or algebra)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KindChoice {
    Level(i64),
    Twisted(Twist),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    /// Pretty-printed JSON.
    Structured,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub algebra: AlgebraSource,
    pub module: Option<ModuleSource>,
    /// Algebra-module text file used by `induce` instead of a module.
    pub context: Option<PathBuf>,
    pub kind: KindChoice,
    /// Degree cutoff of modules, and the cap of `zhu`.
    pub cutoff: SE,
    /// Largest algebra weight used by the checks and generator families.
    pub weight: i64,
    pub seed: u64,
    /// Jacobi components drawn when the window is too large to enumerate.
    pub samples: usize,
    /// Windows with at most this many tuples are enumerated fully.
    pub exhaustive_limit: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command, algebra: AlgebraSource) -> Self {
        RunConfig {
            command,
            algebra,
            module: None,
            context: None,
            kind: KindChoice::Level(0),
            cutoff: SE::int(2),
            weight: 2,
            seed: 0,
            samples: 200,
            exhaustive_limit: 2000,
            format: Format::Text,
        }
    }

    fn jacobi_plan(&self) -> JacobiPlan {
        JacobiPlan { samples: self.samples, seed: self.seed, exhaustive_limit: self.exhaustive_limit }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing was left to compare once vacuous and out-of-window
    /// positions were set aside.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// Library function that performs the check.
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub facts: Vec<Fact>,
    pub records: Vec<CheckRecord>,
}

impl Report {
    fn new(command: Command) -> Self {
        Report { command: command.name().into(), facts: Vec::new(), records: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn record(&self, check_id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check_id == check_id)
    }

    pub fn fact(&self, name: &str) -> Option<&str> {
        self.facts.iter().find(|f| f.name == name).map(|f| f.value.as_str())
    }

    fn fact_push(&mut self, name: &str, value: impl ToString) {
        self.facts.push(Fact { name: name.into(), value: value.to_string() });
    }

    fn tally(&mut self, id: &str, anchor: &str, t: &Tally) {
        let status = if !t.passed() {
            Status::Fail
        } else if t.checked > 0 {
            Status::Pass
        } else {
            Status::Vacuous
        };
        let witness = t.failures.first().map(|c| format!("{}: {} vs {}", c.position, c.lhs, c.rhs));
        let detail = format!(
            "checked {}, vacuous {}, skipped {}, failed {}",
            t.checked,
            t.vacuous,
            t.skipped,
            t.failures.len()
        );
        self.records.push(CheckRecord { check_id: id.into(), anchor: anchor.into(), status, detail, witness });
    }

    fn boolean(&mut self, id: &str, anchor: &str, ok: bool, detail: impl ToString, witness: Option<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.records.push(CheckRecord { check_id: id.into(), anchor: anchor.into(), status, detail: detail.to_string(), witness });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Text => {
                let mut out = format!("command: {}\n", self.command);
                for f in &self.facts {
                    out.push_str(&format!("{}: {}\n", f.name, f.value));
                }
                for r in &self.records {
                    let tag = match r.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Vacuous => "VACUOUS",
                    };
                    out.push_str(&format!("{tag:<8}{} [{}] {}\n", r.check_id, r.anchor, r.detail));
                    if let Some(w) = &r.witness {
                        out.push_str(&format!("        witness: {w}\n"));
                    }
                }
                out.push_str(&format!("{} checks, {} failed\n", self.records.len(), self.failures()));
                out
            }
        }
    }
}

/// Process exit status for an outcome: 0 when every check passed, 1 for a
/// failed check or axiom violation, 2 for unreadable or malformed input,
/// 3 when a computation needed data beyond a cutoff.
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(Error::Axiom(_)) => 1,
        Err(Error::Precision(_)) => 3,
        Err(Error::Parse(_) | Error::Io(_) | Error::Invalid(_) | Error::Mismatch(_)) => 2,
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_algebra_source(src: &AlgebraSource) -> Result<Arc<TruncatedVertexAlgebra>> {
    match src {
        AlgebraSource::File(p) => Ok(Arc::new(load_algebra(&read(p)?)?)),
        AlgebraSource::Heisenberg(n) => Ok(Arc::new(build_heisenberg(*n)?)),
    }
}

pub fn load_module_source(alg: &Arc<TruncatedVertexAlgebra>, src: &ModuleSource, cutoff: SE) -> Result<ModuleData> {
    match src {
        ModuleSource::File(p) => load_module(alg.clone(), &read(p)?),
        ModuleSource::Fock(l) => ModuleData::fock(alg.clone(), Some(l.clone()), cutoff),
        ModuleSource::TwistedFock => ModuleData::fock(alg.clone(), None, cutoff),
    }
}

pub fn resolve_kind(alg: &TruncatedVertexAlgebra, choice: &KindChoice) -> Result<ZhuKind> {
    let g = match choice {
        KindChoice::Level(n) if *n < 0 => return Err(Error::Invalid(format!("negative level {n}"))),
        KindChoice::Level(n) => return Ok(ZhuKind::Level(*n)),
        KindChoice::Twisted(Twist::Identity) => Automorphism::identity(alg.dim()),
        KindChoice::Twisted(Twist::Parity) => {
            let g = parity_automorphism(alg.cutoff())?;
            if g.labels().len() != alg.dim() {
                return Err(Error::Invalid("the parity twist needs the built-in free boson".into()));
            }
            g
        }
        KindChoice::Twisted(Twist::FromAlgebra) => alg.automorphism().clone(),
    };
    Ok(ZhuKind::Twisted(g))
}

fn base_level(kind: &ZhuKind) -> i64 {
    match kind {
        ZhuKind::Level(n) => *n,
        ZhuKind::Twisted(_) => 0,
    }
}

fn require_module(cfg: &RunConfig) -> Result<&ModuleSource> {
    cfg.module
        .as_ref()
        .ok_or_else(|| Error::Invalid(format!("`{}` needs a module", cfg.command.name())))
}

fn dims_text(dims: &[(SE, usize)]) -> String {
    dims.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(" ")
}

/// Runs the configured pipeline.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    if cfg.cutoff < SE::zero() {
        return Err(Error::Invalid(format!("negative cutoff {}", cfg.cutoff)));
    }
    let alg = load_algebra_source(&cfg.algebra)?;
    let mut report = Report::new(cfg.command);
    match cfg.command {
        Command::CheckAlgebra => check_algebra(cfg, &alg, &mut report)?,
        Command::Zhu => zhu(cfg, &alg, &mut report)?,
        Command::Induce => induce(cfg, &alg, &mut report)?,
        Command::VerifyModule => verify_module(cfg, &alg, &mut report)?,
        Command::VerifyAnnihilation => verify_annihilation(cfg, &alg, &mut report)?,
        Command::VerifyUniversal => verify_universal(cfg, &alg, &mut report)?,
    }
    Ok(report)
}

/// Axiom violations become failed records; other errors propagate.
fn axiom_outcome(r: Result<()>) -> Result<Option<String>> {
    match r {
        Ok(()) => Ok(None),
        Err(Error::Axiom(m)) => Ok(Some(m)),
        Err(e) => Err(e),
    }
}

fn check_algebra(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    report.fact_push("dimension", alg.dim());
    report.fact_push("cutoff", alg.cutoff());
    report.fact_push("conformal vector", if alg.conformal().is_some() { "yes" } else { "no" });
    let axioms = axiom_outcome(alg.check_axioms())?;
    report.boolean("algebra.axioms", "TruncatedVertexAlgebra::check_axioms", axioms.is_none(), "vacuum, creation, grading, truncation", axioms);
    let g = axiom_outcome(alg.check_automorphism(Some(alg.cutoff())))?;
    report.boolean(
        "algebra.automorphism",
        "TruncatedVertexAlgebra::check_automorphism",
        g.is_none(),
        format!("order {}", alg.automorphism().order()),
        g,
    );
    let skew = alg.check_skew_symmetry(cfg.weight)?;
    report.boolean(
        "algebra.skew_symmetry",
        "TruncatedVertexAlgebra::check_skew_symmetry",
        skew.is_empty(),
        format!("basis pairs up to weight {}", cfg.weight),
        skew.first().cloned(),
    );
    Ok(())
}

fn zhu(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    let kind = resolve_kind(alg, &cfg.kind)?;
    let cap = cfg.cutoff.to_integer().ok_or_else(|| Error::Invalid(format!("cap {} must be an integer", cfg.cutoff)))?;
    let z = ZhuQuotient::build(alg.clone(), kind.clone(), cap)?;
    report.fact_push("kind", kind.describe());
    report.fact_push("cap", cap);
    report.fact_push("dimension", z.dim());
    report.fact_push("filtered dims", format!("{:?}", z.filtered_dims()));
    report.fact_push("commutative", z.is_commutative());
    let failures = z.verify(None)?;
    report.boolean(
        "zhu.structure",
        "ZhuQuotient::verify",
        failures.is_empty(),
        "unit, well-definedness, associativity",
        failures.first().cloned(),
    );
    let oracle = span_oracle_dims(alg, &kind, cap)?;
    report.boolean(
        "zhu.span_oracle",
        "span_oracle_dims",
        oracle == z.filtered_dims(),
        format!("oracle {oracle:?}"),
        (oracle != z.filtered_dims()).then(|| format!("{:?} vs {oracle:?}", z.filtered_dims())),
    );
    report.tally("zhu.membership", "membership_sweep", &membership_sweep(&z, cfg.weight, cfg.weight)?);
    Ok(())
}

fn verify_module(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    let m = load_module_source(alg, require_module(cfg)?, cfg.cutoff)?;
    report.fact_push("module dimension", m.dim());
    report.fact_push("graded dims", dims_text(&m.space().degrees().map(|d| (d, m.space().dim_at(d))).collect::<Vec<_>>()));
    let vacuum = axiom_outcome(m.check_vacuum())?;
    report.boolean("module.vacuum", "ModuleData::check_vacuum", vacuum.is_none(), "vacuum acts as identity", vacuum);
    let mut weak = Tally::default();
    let mut product = Tally::default();
    let mut truncation = Tally::default();
    let mut components = Tally::default();
    let mut triples = 0;
    let mut inconsistent = Vec::new();
    for u in alg.basis_upto(cfg.weight) {
        for v in alg.basis_upto(cfg.weight) {
            for w in 0..m.dim() {
                let r = check_associativity_triple(&m, u, v, w)?;
                triples += 1;
                if !r.equivalence_consistent() {
                    inconsistent.push(format!("u={} v={} w={}", alg.label(u), alg.label(v), m.space().label(w)));
                }
                weak.merge(r.weak_associativity);
                product.merge(r.product_formula);
                truncation.merge(r.truncation);
                components.merge(r.component_forms);
            }
        }
    }
    report.fact_push("triples", triples);
    report.tally("module.weak_associativity", "check_weak_associativity", &weak);
    report.tally("module.product_formula", "lhs_product/rhs_iterate", &product);
    report.tally("module.truncation", "truncation_sum", &truncation);
    report.tally("module.component_forms", "component_iterate_sum/component_iterate_series", &components);
    report.boolean(
        "module.equivalence",
        "AssociativityReport::equivalence_consistent",
        inconsistent.is_empty(),
        "both formulations agree on every triple",
        inconsistent.first().cloned(),
    );
    report.tally("module.jacobi", "check_jacobi", &check_jacobi(&m, cfg.weight, &cfg.jacobi_plan())?);
    Ok(())
}

fn verify_annihilation(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    let kind = resolve_kind(alg, &cfg.kind)?;
    let m = load_module_source(alg, require_module(cfg)?, cfg.cutoff)?;
    let omega = omega_n(&m, base_level(&kind))?;
    let generators = match &kind {
        ZhuKind::Level(n) => o_n_generators(alg, *n, cfg.weight)?,
        ZhuKind::Twisted(g) => o_g_generators(alg, g, cfg.weight)?,
    };
    report.fact_push("kind", kind.describe());
    report.fact_push("lowest space dimension", omega.rank());
    report.fact_push("generators", generators.len());
    report.tally("annihilation.generators", "generators_annihilate", &generators_annihilate(&m, &omega, &generators)?);
    Ok(())
}

/// The algebra module an induced module starts from, with the images of
/// its basis in the module it came from when there is one.
fn induction_context(
    cfg: &RunConfig,
    alg: &Arc<TruncatedVertexAlgebra>,
    kind: &ZhuKind,
) -> Result<(Arc<AModule>, Option<(ModuleData, Vec<crate::linear::Vector>)>)> {
    if let Some(path) = &cfg.context {
        let am = AModule::from_text(alg.clone(), kind.clone(), &read(path)?, None)?;
        return Ok((Arc::new(am), None));
    }
    let m = load_module_source(alg, require_module(cfg)?, cfg.cutoff)?;
    let omega = omega_n(&m, base_level(kind))?;
    let (am, images) = AModule::from_omega(&m, kind.clone(), &omega)?;
    Ok((Arc::new(am), Some((m, images))))
}

fn build_induced(cfg: &RunConfig, am: Arc<AModule>, report: &mut Report) -> Result<Arc<InducedModule>> {
    let params = InduceParams::new(&am, cfg.cutoff);
    let s = Arc::new(InducedModule::build(am, params)?);
    report.fact_push("frame", s.params().frame);
    report.fact_push("graded dims", dims_text(&s.graded_dims()));
    let labels: Vec<&str> = (0..s.dim()).map(|i| s.label(i)).collect();
    report.fact_push("basis", labels.join(" "));
    let st = s.stats();
    report.fact_push("relations", format!("generated {}, skipped {}, rank {}", st.generated, st.skipped, s.relations().rank()));
    Ok(s)
}

fn confluence(report: &mut Report, r: &ConfluenceReport, length: usize) {
    report.boolean(
        &format!("induce.confluence.{length}"),
        "reduce_word/reduce_word_outer_first",
        r.passed(),
        format!("words {}, skipped {}, equal normal forms {}", r.words, r.skipped, r.agree_on_normal_forms),
        r.failures.first().cloned(),
    );
}

fn induce(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    let kind = resolve_kind(alg, &cfg.kind)?;
    report.fact_push("kind", kind.describe());
    let (am, _) = induction_context(cfg, alg, &kind)?;
    report.fact_push("lowest space dimension", am.dim());
    let s = build_induced(cfg, am, report)?;
    let e = check_embedding(&s, cfg.weight)?;
    report.boolean(
        "induce.embedding",
        "check_embedding",
        e.injective(),
        format!("degree {} has dimension {} for {} lowest vectors", e.base_degree, e.base_dim, e.expected),
        e.witness.clone(),
    );
    for (tag, t) in &e.annihilation {
        report.tally(&format!("induce.annihilation[{tag}]"), "annihilation_element", t);
    }
    let a = check_admissibility(&s, cfg.weight, &cfg.jacobi_plan())?;
    report.boolean("induce.vacuum", "ModuleData::check_vacuum", a.vacuum.is_none(), "vacuum acts as identity", a.vacuum.clone());
    report.boolean("induce.grading", "check_admissibility", a.grading.is_none(), "modes shift degree by wt u - n - 1", a.grading.clone());
    report.fact_push("triples", a.triples);
    report.tally("induce.weak_associativity", "check_weak_associativity", &a.weak_associativity);
    report.tally("induce.product_formula", "lhs_product/rhs_iterate", &a.product_formula);
    report.tally("induce.truncation", "truncation_sum", &a.truncation);
    report.tally("induce.component_forms", "component_iterate_sum/component_iterate_series", &a.component_forms);
    report.tally("induce.jacobi", "check_jacobi", &a.jacobi);
    confluence(report, &check_confluence(&s, cfg.weight, 2)?, 2);
    Ok(())
}

fn verify_universal(cfg: &RunConfig, alg: &Arc<TruncatedVertexAlgebra>, report: &mut Report) -> Result<()> {
    require_module(cfg)?;
    let kind = resolve_kind(alg, &cfg.kind)?;
    report.fact_push("kind", kind.describe());
    let (am, target) = induction_context(cfg, alg, &kind)?;
    let (m, images) = target.expect("a module was given");
    let s = build_induced(cfg, am, report)?;
    let u = universal_map(&s, &m, &images, cfg.weight)?;
    report.boolean(
        "universal.relations",
        "universal_map",
        u.relation_failures.is_empty(),
        format!("relations mapped to zero {}, skipped {}", u.relations_checked, u.relations_skipped),
        u.relation_failures.first().cloned(),
    );
    report.boolean("universal.restriction", "universal_map", u.restricts_to_f, "restricts to the given lowest vectors", None);
    report.boolean("universal.graded", "universal_map", u.graded, "preserves degree", None);
    let ranks: Vec<String> = u.ranks.iter().map(|(d, a, b, r)| format!("{d}:{a}/{b}/{r}")).collect();
    let bad = u.ranks.iter().find(|(_, a, b, r)| a != b || a != r);
    report.boolean(
        "universal.bijective",
        "universal_map",
        u.is_isomorphism(),
        format!("degree:source/target/rank {}", ranks.join(" ")),
        bad.map(|(d, a, b, r)| format!("degree {d}: source {a}, target {b}, rank {r}")),
    );
    report.boolean(
        "universal.intertwining",
        "universal_map",
        u.intertwining.passed() && u.intertwining.checked > 0,
        format!("checked {}, skipped {}", u.intertwining.checked, u.intertwining.skipped),
        u.intertwining.failures.first().cloned(),
    );
    Ok(())
}
