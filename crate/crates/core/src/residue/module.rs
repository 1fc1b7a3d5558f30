use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};


use crate::error::{Error, ParseError, Result};
use crate::exact::{Rational, ScaledExponent};
use crate::io::{format_vector_entries, parse_sections, parse_vector};
use crate::linear::{GradedSpace, Vector};
use crate::vertex::fock::{monomial_label, FockModel, Monomial};
use crate::vertex::{Automorphism, TruncatedVertexAlgebra};

pub type ActionKey = (usize, ScaledExponent, usize);

#[derive(Debug)]
struct FockActions {
    model: FockModel,
    algebra_basis: Vec<Monomial>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    cache: HashMap<ActionKey, Vector>,
}

/// Lazily computed mode actions `u_n w` on basis elements.
pub trait ModeOracle: Send + Sync + std::fmt::Debug {
    fn act(&self, u: usize, n: ScaledExponent, w: usize) -> Result<Vector>;
}

#[derive(Debug)]
enum ActionSource {
    Table(HashMap<ActionKey, Vector>),
    Adjoint,
    Fock(Mutex<FockActions>),
    Oracle(Arc<dyn ModeOracle>),
}

impl Clone for ActionSource {
    fn clone(&self) -> Self {
        match self {
            ActionSource::Table(t) => ActionSource::Table(t.clone()),
            ActionSource::Adjoint => ActionSource::Adjoint,
            ActionSource::Oracle(o) => ActionSource::Oracle(o.clone()),
            ActionSource::Fock(m) => {
                let f = m.lock().unwrap();
                ActionSource::Fock(Mutex::new(FockActions {
                    model: f.model.clone(),
                    algebra_basis: f.algebra_basis.clone(),
                    basis: f.basis.clone(),
                    index: f.index.clone(),
                    cache: f.cache.clone(),
                }))
            }
        }
    }
}

/// A graded space `W` truncated at degree `cutoff` together with the
/// components `u_n w` of a (possibly twisted) vertex operator map.
#[derive(Clone, Debug)]
pub struct ModuleData {
    algebra: Arc<TruncatedVertexAlgebra>,
    twist: Automorphism,
    space: Arc<GradedSpace>,
    cutoff: ScaledExponent,
    source: ActionSource,
    overrides: HashMap<ActionKey, Vector>,
}

impl ModuleData {
    fn assemble(
        algebra: Arc<TruncatedVertexAlgebra>,
        twist: Automorphism,
        space: GradedSpace,
        cutoff: ScaledExponent,
        source: ActionSource,
    ) -> Result<Self> {
        if twist.labels().len() != algebra.dim() {
            return Err(Error::Invalid("twist labels do not match the algebra basis".into()));
        }
        if space.scale() % twist.order() != 0 {
            return Err(Error::Invalid(format!(
                "module grading scale {} is not a multiple of the twist order {}",
                space.scale(),
                twist.order()
            )));
        }
        if let Some(d) = space.degrees().next() {
            if d < ScaledExponent::zero() {
                return Err(Error::Invalid("module degrees must be nonnegative".into()));
            }
        }
        if let Some(d) = space.max_degree() {
            if d > cutoff {
                return Err(Error::Invalid(format!("module has degree {d} above its cutoff {cutoff}")));
            }
        }
        Ok(ModuleData { algebra, twist, space: Arc::new(space), cutoff, source, overrides: HashMap::new() })
    }

    /// Module given by an explicit action table; checks grading, modes and
    /// the vacuum axiom.
    pub fn from_table(
        algebra: Arc<TruncatedVertexAlgebra>,
        twist: Automorphism,
        space: GradedSpace,
        cutoff: ScaledExponent,
        table: HashMap<ActionKey, Vector>,
    ) -> Result<Self> {
        let m = Self::assemble(algebra, twist, space, cutoff, ActionSource::Table(table))?;
        m.check_table_entries()?;
        m.check_vacuum()?;
        Ok(m)
    }

    /// Module whose actions are computed on demand by `oracle`.
    pub fn from_oracle(
        algebra: Arc<TruncatedVertexAlgebra>,
        twist: Automorphism,
        space: GradedSpace,
        cutoff: ScaledExponent,
        oracle: Arc<dyn ModeOracle>,
    ) -> Result<Self> {
        Self::assemble(algebra, twist, space, cutoff, ActionSource::Oracle(oracle))
    }

    /// The algebra as a module over itself.
    pub fn adjoint(algebra: Arc<TruncatedVertexAlgebra>) -> Result<Self> {
        let space = (**algebra.space()).clone();
        let cutoff = ScaledExponent::int(algebra.cutoff());
        let twist = Automorphism::identity(algebra.dim());
        Self::assemble(algebra, twist, space, cutoff, ActionSource::Adjoint)
    }

    /// Fock module of the free boson built from `build_heisenberg`:
    /// untwisted with zero mode `lambda`, or twisted by the parity
    /// involution when `lambda` is `None`.
    pub fn fock(algebra: Arc<TruncatedVertexAlgebra>, lambda: Option<Rational>, cutoff: ScaledExponent) -> Result<Self> {
        let algebra_basis = heisenberg_basis(&algebra)?;
        let (model, twist) = match lambda {
            Some(l) => (FockModel::untwisted(l), Automorphism::identity(algebra.dim())),
            None => (
                FockModel::twisted(),
                Automorphism::from_labels(2, algebra_basis.iter().map(|m| (m.len() % 2) as i64).collect())?,
            ),
        };
        let scale = model.scale();
        let mut components = Vec::new();
        let mut basis = Vec::new();
        let top = (cutoff * scale).floor();
        for k in 0..=top {
            let d = ScaledExponent::new(k, scale);
            let monos = model.basis_at(d);
            if monos.is_empty() {
                continue;
            }
            components.push((d, monos.iter().map(|m| monomial_label(m, scale, "v")).collect()));
            basis.extend(monos);
        }
        let space = GradedSpace::new(scale, components)?;
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let actions = FockActions { model, algebra_basis, basis, index, cache: HashMap::new() };
        Self::assemble(algebra, twist, space, cutoff, ActionSource::Fock(Mutex::new(actions)))
    }

    pub fn algebra(&self) -> &Arc<TruncatedVertexAlgebra> {
        &self.algebra
    }

    pub fn twist(&self) -> &Automorphism {
        &self.twist
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cutoff(&self) -> ScaledExponent {
        self.cutoff
    }

    pub fn degree(&self, w: usize) -> ScaledExponent {
        self.space.degree(w)
    }

    pub fn degree_of(&self, x: &Vector) -> Option<ScaledExponent> {
        self.space.homogeneous_degree(x)
    }

    /// Residue class `r/T + Z` in which the modes of `u` live.
    pub fn mode_offset(&self, u: usize) -> ScaledExponent {
        ScaledExponent::new(self.twist.label(u), self.twist.order())
    }

    pub fn in_mode_coset(&self, u: usize, n: ScaledExponent) -> bool {
        n.same_coset(&self.mode_offset(u))
    }

    /// `u_n w` for basis elements. Zero off the mode coset or below degree
    /// zero; a precision error above the cutoff.
    pub fn act(&self, u: usize, n: ScaledExponent, w: usize) -> Result<Vector> {
        if !self.in_mode_coset(u, n) {
            return Ok(Vector::zero());
        }
        let target = self.degree(w) + self.algebra.weight(u) - n - 1;
        if target < ScaledExponent::zero() {
            return Ok(Vector::zero());
        }
        if target > self.cutoff {
            return Err(Error::Precision(format!(
                "{}_{n} {} has degree {target} above the module cutoff {}",
                self.algebra.label(u),
                self.space.label(w),
                self.cutoff
            )));
        }
        let key = (u, n, w);
        if let Some(x) = self.overrides.get(&key) {
            return Ok(x.clone());
        }
        match &self.source {
            ActionSource::Table(t) => Ok(t.get(&key).cloned().unwrap_or_default()),
            ActionSource::Oracle(o) => o.act(u, n, w),
            ActionSource::Adjoint => {
                let n = n.to_integer().expect("adjoint modes are integers");
                self.algebra.mode(u, n, w)
            }
            ActionSource::Fock(m) => {
                let mut f = m.lock().unwrap();
                if let Some(x) = f.cache.get(&key) {
                    return Ok(x.clone());
                }
                let (bu, bw) = (f.algebra_basis[u].clone(), f.basis[w].clone());
                let state = f.model.mode(&bu, n, &bw);
                let x = Vector::from_entries(state.into_iter().map(|(mono, c)| (f.index[&mono], c)));
                f.cache.insert(key, x.clone());
                Ok(x)
            }
        }
    }

    /// Bilinear extension: `a_n x` for `a` in the algebra and `x` in `W`.
    pub fn act_vec(&self, a: &Vector, n: ScaledExponent, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (i, c) in a.iter() {
            for (j, d) in x.iter() {
                let y = self.act(i, n, j)?;
                out.add_scaled(&y, &(c * d));
            }
        }
        Ok(out)
    }

    /// Modes `n` of `u` on `w` whose result lands in degrees `0..=cutoff`.
    pub fn mode_window(&self, u: usize, w: usize) -> Vec<ScaledExponent> {
        let top = self.degree(w) + self.algebra.weight(u) - 1;
        // least mode in the class with target degree at most the cutoff
        let mut n = self.mode_offset(u).least_in_coset_above(top - self.cutoff - 1);
        if n < top - self.cutoff {
            n = n + 1;
        }
        let mut out = Vec::new();
        while n <= top {
            out.push(n);
            n = n + 1;
        }
        out
    }

    /// `o(a)` on `x`, extended linearly over the homogeneous parts of `a`:
    /// each basis component `e` acts by `e_{wt e - 1}`.
    pub fn o_action(&self, a: &Vector, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (i, c) in a.iter() {
            let n = ScaledExponent::int(self.algebra.weight(i) - 1);
            for (j, d) in x.iter() {
                out.add_scaled(&self.act(i, n, j)?, &(c * d));
            }
        }
        Ok(out)
    }

    pub fn perturbed(&self, u: usize, n: ScaledExponent, w: usize, delta: &Vector) -> Result<Self> {
        let mut out = self.clone();
        let mut x = self.act(u, n, w)?;
        x.add_vec(delta);
        out.overrides.insert((u, n, w), x);
        Ok(out)
    }

    /// Materializes every in-window action with `u` of weight at most
    /// `max_weight` into a table-backed copy.
    pub fn materialize(&self, max_weight: i64) -> Result<Self> {
        let mut table = HashMap::new();
        for u in self.algebra.basis_upto(max_weight) {
            for w in 0..self.dim() {
                for n in self.mode_window(u, w) {
                    let x = self.act(u, n, w)?;
                    if !x.is_zero() {
                        table.insert((u, n, w), x);
                    }
                }
            }
        }
        let mut out = self.clone();
        out.source = ActionSource::Table(table);
        out.overrides.clear();
        Ok(out)
    }

    fn check_table_entries(&self) -> Result<()> {
        let ActionSource::Table(t) = &self.source else { return Ok(()) };
        let mut keys: Vec<_> = t.keys().copied().collect();
        keys.sort();
        for (u, n, w) in keys {
            let x = &t[&(u, n, w)];
            if x.is_zero() {
                continue;
            }
            let name = format!("{}_{n} {}", self.algebra.label(u), self.space.label(w));
            if !self.in_mode_coset(u, n) {
                return Err(Error::Axiom(format!("{name}: mode outside {}+Z", self.mode_offset(u))));
            }
            let target = self.degree(w) + self.algebra.weight(u) - n - 1;
            if self.degree_of(x) != Some(target) {
                return Err(Error::Axiom(format!(
                    "grading: {name} should have degree {target}, got {}",
                    self.space.format_vector(x)
                )));
            }
        }
        Ok(())
    }

    /// `Y_W(1, x) = 1_W` on the whole truncated window.
    pub fn check_vacuum(&self) -> Result<()> {
        let vac = self.algebra.vacuum().clone();
        for w in 0..self.dim() {
            let ew = Vector::unit(w);
            for n in self.mode_window(0, w) {
                let got = self.act_vec(&vac, n, &ew)?;
                let expect = if n == ScaledExponent::int(-1) { ew.clone() } else { Vector::zero() };
                if got != expect {
                    return Err(Error::Axiom(format!(
                        "vacuum: 1_{n} {} = {}",
                        self.space.label(w),
                        self.space.format_vector(&got)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Text form of all actions by algebra elements of weight at most
    /// `max_weight`.
    pub fn to_text(&self, max_weight: i64) -> Result<String> {
        let mut s = String::new();
        writeln!(s, "[module]\nscale {}\ncutoff {}", self.space.scale(), self.cutoff).unwrap();
        if !self.twist.is_identity() {
            writeln!(s, "twist algebra").unwrap();
        }
        writeln!(s, "[module-space]").unwrap();
        for d in self.space.degrees() {
            let labels: Vec<&str> = self.space.component(d).map(|i| self.space.label(i)).collect();
            writeln!(s, "{d} {} {}", labels.len(), labels.join(" ")).unwrap();
        }
        for u in self.algebra.basis_upto(max_weight) {
            for w in 0..self.dim() {
                for n in self.mode_window(u, w) {
                    let x = self.act(u, n, w)?;
                    if !x.is_zero() {
                        writeln!(
                            s,
                            "[action {} {n} {}]\n{}",
                            self.algebra.label(u),
                            self.space.label(w),
                            format_vector_entries(&self.space, &x)
                        )
                        .unwrap();
                    }
                }
            }
        }
        Ok(s)
    }
}

/// Recovers the Fock monomials behind the labels of `build_heisenberg`.
fn heisenberg_basis(algebra: &TruncatedVertexAlgebra) -> Result<Vec<Monomial>> {
    (0..algebra.dim())
        .map(|i| {
            let label = algebra.label(i);
            if label == "1" {
                return Ok(Vec::new());
            }
            label
                .strip_suffix(')')
                .map(|body| {
                    body.split(")a(")
                        .map(|t| t.trim_start_matches("a(").parse::<i64>().map(|k| -k))
                        .collect::<Result<Vec<_>, _>>()
                })
                .and_then(|r| r.ok())
                .ok_or_else(|| Error::Invalid(format!("`{label}` is not a free boson basis label")))
        })
        .collect()
}

/// Parses a module definition against `algebra`.
pub fn load_module(algebra: Arc<TruncatedVertexAlgebra>, text: &str) -> Result<ModuleData> {
    let sections = parse_sections(text)?;
    let mut scale = 1i64;
    let mut cutoff: Option<ScaledExponent> = None;
    let mut twisted = false;
    let mut components = Vec::new();
    for sec in &sections {
        match sec.name.as_str() {
            "module" => {
                for (line, toks) in &sec.body {
                    match (toks.first().map(String::as_str), toks.len()) {
                        (Some("scale"), 2) => scale = toks[1].parse().map_err(|_| ParseError::BadNumber(toks[1].clone()))?,
                        (Some("cutoff"), 2) => cutoff = Some(toks[1].parse()?),
                        (Some("twist"), 2) => twisted = toks[1] == "algebra",
                        _ => return Err(sec.error(*line, "expected `scale T`, `cutoff D` or `twist identity|algebra`").into()),
                    }
                }
            }
            "module-space" => {
                for (line, toks) in &sec.body {
                    if toks.len() < 2 {
                        return Err(sec.error(*line, "expected `degree dim labels...`").into());
                    }
                    let d: ScaledExponent = toks[0].parse()?;
                    let n: usize = toks[1].parse().map_err(|_| ParseError::BadNumber(toks[1].clone()))?;
                    if toks.len() != n + 2 {
                        return Err(sec.error(*line, "label count does not match the dimension").into());
                    }
                    components.push((d, toks[2..].to_vec()));
                }
            }
            "action" => {}
            other => return Err(sec.error(sec.line, format!("unknown section [{other}]")).into()),
        }
    }
    let space = GradedSpace::new(scale, components)?;
    let mut table = HashMap::new();
    for sec in sections.iter().filter(|s| s.name == "action") {
        if sec.args.len() != 3 {
            return Err(sec.error(sec.line, "expected [action u n w]").into());
        }
        let u = algebra.space().index_of(&sec.args[0])?;
        let n: ScaledExponent = sec.args[1].parse()?;
        let w = space.index_of(&sec.args[2])?;
        let x = parse_vector(&space, &sec.tokens())?;
        if table.insert((u, n, w), x).is_some() {
            return Err(sec.error(sec.line, "duplicate action entry").into());
        }
    }
    let twist = if twisted { algebra.automorphism().clone() } else { Automorphism::identity(algebra.dim()) };
    let cutoff = cutoff.or(space.max_degree()).unwrap_or(ScaledExponent::zero());
    ModuleData::from_table(algebra, twist, space, cutoff, table)
}

/// Per-degree dimensions, in degree order.
pub fn graded_dims(space: &GradedSpace) -> BTreeMap<ScaledExponent, usize> {
    space.degrees().map(|d| (d, space.dim_at(d))).collect()
}

