use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use super::automorphism::Automorphism;
use super::fock::{FockModel, Monomial};
use crate::error::{Error, ParseError, Result};
use crate::exact::{binomial, parse_rational, q, sign, Rational, ScaledExponent};
use crate::io::{format_vector_entries, parse_sections, parse_vector, Section};
use crate::linear::{GradedSpace, Matrix, Subspace, Vector};

pub type ModeKey = (usize, i64, usize);

#[derive(Debug)]
struct OracleTable {
    model: FockModel,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    cache: HashMap<ModeKey, Vector>,
}

#[derive(Debug)]
enum ModeSource {
    Table(HashMap<ModeKey, Vector>),
    Oracle(Mutex<OracleTable>),
}

impl Clone for ModeSource {
    fn clone(&self) -> Self {
        match self {
            ModeSource::Table(t) => ModeSource::Table(t.clone()),
            ModeSource::Oracle(m) => {
                let o = m.lock().unwrap();
                ModeSource::Oracle(Mutex::new(OracleTable {
                    model: o.model.clone(),
                    basis: o.basis.clone(),
                    index: o.index.clone(),
                    cache: o.cache.clone(),
                }))
            }
        }
    }
}

/// A vertex algebra truncated at weight `cutoff`. Products landing above
/// the cutoff are not stored; asking for one is a precision error, so no
/// downstream result ever silently depends on missing data.
#[derive(Clone, Debug)]
pub struct TruncatedVertexAlgebra {
    space: Arc<GradedSpace>,
    cutoff: i64,
    vacuum: Vector,
    conformal: Option<Vector>,
    source: ModeSource,
    overrides: HashMap<ModeKey, Vector>,
    automorphism: Automorphism,
}

impl TruncatedVertexAlgebra {
    /// Builds an algebra from explicit structure constants and verifies the
    /// load-time axioms.
    pub fn from_table(
        space: GradedSpace,
        vacuum: Vector,
        conformal: Option<Vector>,
        table: HashMap<ModeKey, Vector>,
        automorphism: Option<Automorphism>,
    ) -> Result<Self> {
        let dim = space.dim();
        let alg = Self::assemble(space, vacuum, conformal, ModeSource::Table(table), automorphism.unwrap_or(Automorphism::identity(dim)))?;
        alg.check_table_entries()?;
        alg.check_axioms()?;
        alg.check_automorphism(None)?;
        Ok(alg)
    }

    pub(crate) fn from_oracle(
        space: GradedSpace,
        basis: Vec<Monomial>,
        vacuum: Vector,
        conformal: Option<Vector>,
        automorphism: Automorphism,
    ) -> Result<Self> {
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let oracle = OracleTable { model: FockModel::untwisted(Rational::zero()), basis, index, cache: HashMap::new() };
        let alg = Self::assemble(space, vacuum, conformal, ModeSource::Oracle(Mutex::new(oracle)), automorphism)?;
        alg.check_axioms()?;
        Ok(alg)
    }

    fn assemble(
        space: GradedSpace,
        vacuum: Vector,
        conformal: Option<Vector>,
        source: ModeSource,
        automorphism: Automorphism,
    ) -> Result<Self> {
        if space.scale() != 1 {
            return Err(Error::Invalid("vertex algebra weights must be integers".into()));
        }
        if let Some(d) = space.degrees().next() {
            if d < ScaledExponent::zero() {
                return Err(Error::Invalid(format!("negative weight {d}; the algebra must be N-graded")));
            }
        }
        let cutoff = space.max_degree().and_then(|d| d.to_integer()).unwrap_or(0);
        if space.homogeneous_degree(&vacuum) != Some(ScaledExponent::zero()) {
            return Err(Error::Axiom("vacuum must be a nonzero weight 0 vector".into()));
        }
        if let Some(w) = &conformal {
            if space.homogeneous_degree(w) != Some(ScaledExponent::int(2)) {
                return Err(Error::Axiom("conformal vector must have weight 2".into()));
            }
        }
        if automorphism.labels().len() != space.dim() {
            return Err(Error::Invalid("automorphism labels do not match the basis".into()));
        }
        Ok(TruncatedVertexAlgebra {
            space: Arc::new(space),
            cutoff,
            vacuum,
            conformal,
            source,
            overrides: HashMap::new(),
            automorphism,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.space.degree(i).numerator()
    }

    /// Weight of a homogeneous vector.
    pub fn weight_of(&self, v: &Vector) -> Option<i64> {
        self.space.homogeneous_degree(v).map(|d| d.numerator())
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn vacuum(&self) -> &Vector {
        &self.vacuum
    }

    pub fn conformal(&self) -> Option<&Vector> {
        self.conformal.as_ref()
    }

    pub fn automorphism(&self) -> &Automorphism {
        &self.automorphism
    }

    /// Eigen label of basis element `i`.
    pub fn eigen(&self, i: usize) -> i64 {
        self.automorphism.label(i)
    }

    /// Basis indices of weight at most `w`.
    pub fn basis_upto(&self, w: i64) -> std::ops::Range<usize> {
        0..self.space.dim_upto(ScaledExponent::int(w))
    }

    /// Replaces the automorphism after checking it against the structure.
    pub fn with_automorphism(mut self, g: Automorphism, check_weight: Option<i64>) -> Result<Self> {
        if g.labels().len() != self.dim() {
            return Err(Error::Invalid("automorphism labels do not match the basis".into()));
        }
        self.automorphism = g;
        self.check_automorphism(check_weight)?;
        Ok(self)
    }

    /// True when `u_n v` would land above the cutoff.
    pub fn overflows(&self, u: usize, n: i64, v: usize) -> bool {
        self.weight(u) + self.weight(v) - n - 1 > self.cutoff
    }

    /// Mode indices `n` for which `u_n v` lies in weights `0..=cutoff`.
    pub fn mode_range(&self, u: usize, v: usize) -> std::ops::RangeInclusive<i64> {
        let s = self.weight(u) + self.weight(v) - 1;
        (s - self.cutoff)..=s
    }

    /// True when basis element `u` is the vacuum itself.
    pub fn is_vacuum(&self, u: usize) -> bool {
        self.vacuum.len() == 1 && self.vacuum.leading().is_some_and(|(i, c)| i == u && c.is_one())
    }

    /// `u_n v` for basis elements. Vacuum modes are exact at every weight.
    pub fn mode(&self, u: usize, n: i64, v: usize) -> Result<Vector> {
        let target = self.weight(u) + self.weight(v) - n - 1;
        if target < 0 {
            return Ok(Vector::zero());
        }
        if target > self.cutoff && self.is_vacuum(u) && !self.overrides.contains_key(&(u, n, v)) {
            return Ok(Vector::zero());
        }
        if target > self.cutoff {
            return Err(Error::Precision(format!(
                "{}_{n} {} has weight {target} above the cutoff {}",
                self.label(u),
                self.label(v),
                self.cutoff
            )));
        }
        let key = (u, n, v);
        if let Some(x) = self.overrides.get(&key) {
            return Ok(x.clone());
        }
        match &self.source {
            ModeSource::Table(t) => Ok(t.get(&key).cloned().unwrap_or_default()),
            ModeSource::Oracle(m) => {
                let mut o = m.lock().unwrap();
                if let Some(x) = o.cache.get(&key) {
                    return Ok(x.clone());
                }
                let (bu, bv) = (o.basis[u].clone(), o.basis[v].clone());
                let state = o.model.mode(&bu, ScaledExponent::int(n), &bv);
                let x = Vector::from_entries(state.into_iter().map(|(mono, c)| (o.index[&mono], c)));
                o.cache.insert(key, x.clone());
                Ok(x)
            }
        }
    }

    /// Bilinear extension of [`Self::mode`].
    pub fn mode_vec(&self, a: &Vector, n: i64, b: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let p = self.mode(i, n, j)?;
                out.add_scaled(&p, &(x * y));
            }
        }
        Ok(out)
    }

    /// Copy with `u_n v` replaced by `u_n v + delta`; axioms are not
    /// rechecked, which is the point.
    pub fn perturbed(&self, u: usize, n: i64, v: usize, delta: &Vector) -> Result<Self> {
        let mut out = self.clone();
        let mut x = self.mode(u, n, v)?;
        x.add_vec(delta);
        out.overrides.insert((u, n, v), x);
        Ok(out)
    }

    /// `L(-1) v = omega_0 v`.
    pub fn l_minus_one(&self, v: &Vector) -> Result<Vector> {
        let w = self
            .conformal
            .as_ref()
            .ok_or_else(|| Error::Invalid("the algebra has no conformal vector".into()))?;
        self.mode_vec(w, 0, v)
    }

    fn check_table_entries(&self) -> Result<()> {
        let ModeSource::Table(t) = &self.source else { return Ok(()) };
        let mut keys: Vec<_> = t.keys().copied().collect();
        keys.sort_unstable();
        for (u, n, v) in keys {
            let x = &t[&(u, n, v)];
            if x.is_zero() {
                continue;
            }
            let target = self.weight(u) + self.weight(v) - n - 1;
            let triple = format!("({}, {n}, {})", self.label(u), self.label(v));
            if n >= self.weight(u) + self.weight(v) {
                return Err(Error::Axiom(format!("lower truncation: {triple} must vanish, got {}", self.space.format_vector(x))));
            }
            if target > self.cutoff {
                return Err(Error::Axiom(format!("{triple} lies above the cutoff")));
            }
            if self.weight_of(x) != Some(target) {
                return Err(Error::Axiom(format!(
                    "grading: {triple} should have weight {target}, got {}",
                    self.space.format_vector(x)
                )));
            }
        }
        Ok(())
    }

    /// Vacuum, creation and (when a conformal vector is present) `L(0)`
    /// grading axioms over the whole truncated table.
    pub fn check_axioms(&self) -> Result<()> {
        let dim = self.dim();
        for v in 0..dim {
            let ev = Vector::unit(v);
            let wv = self.weight(v);
            for n in (wv - 1 - self.cutoff)..=(wv - 1) {
                let got = self.mode_vec(&self.vacuum, n, &ev)?;
                let expect = if n == -1 { ev.clone() } else { Vector::zero() };
                if got != expect {
                    return Err(Error::Axiom(format!(
                        "vacuum: 1_{n} {} = {} but expected {}",
                        self.label(v),
                        self.space.format_vector(&got),
                        self.space.format_vector(&expect)
                    )));
                }
            }
            for n in -1..wv {
                if wv - n - 1 > self.cutoff {
                    continue;
                }
                let got = self.mode_vec(&ev, n, &self.vacuum)?;
                let expect = if n == -1 { ev.clone() } else { Vector::zero() };
                if got != expect {
                    return Err(Error::Axiom(format!(
                        "creation: {}_{n} 1 = {} but expected {}",
                        self.label(v),
                        self.space.format_vector(&got),
                        self.space.format_vector(&expect)
                    )));
                }
            }
            if let Some(w) = &self.conformal {
                let got = self.mode_vec(w, 1, &ev)?;
                let expect = ev.scaled(&q(wv));
                if got != expect {
                    return Err(Error::Axiom(format!(
                        "L(0) {} = {} but the weight is {wv}",
                        self.label(v),
                        self.space.format_vector(&got)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that eigen labels add under every product with both factors
    /// of weight at most `check_weight` (all stored products when `None`).
    pub fn check_automorphism(&self, check_weight: Option<i64>) -> Result<()> {
        let g = &self.automorphism;
        g.check_matrices(|w| self.space.component(ScaledExponent::int(w)))?;
        if g.is_identity() {
            return Ok(());
        }
        let bound = check_weight.unwrap_or(self.cutoff).min(self.cutoff);
        let idx = self.basis_upto(bound);
        for u in idx.clone() {
            for v in idx.clone() {
                for n in self.mode_range(u, v) {
                    let x = self.mode(u, n, v)?;
                    let expect = (g.label(u) + g.label(v)).rem_euclid(g.order());
                    let bad = x.indices().find(|i| g.label(*i) != expect);
                    if let Some(bad) = bad {
                        return Err(Error::Axiom(format!(
                            "automorphism: {}_{n} {} has a component on {} outside V^{expect}",
                            self.label(u),
                            self.label(v),
                            self.label(bad)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `V^r` for each `r = 0..T`, as spans of basis elements.
    pub fn eigenspace_decompose(&self) -> Vec<Subspace> {
        let g = &self.automorphism;
        (0..g.order())
            .map(|r| {
                let mut s = Subspace::zero(self.space.clone());
                for i in (0..self.dim()).filter(|i| g.label(*i) == r) {
                    s.insert(Vector::unit(i)).expect("basis vector lies in the space");
                }
                s
            })
            .collect()
    }

    /// Components of `Y(u,x)v = e^{x L(-1)} Y(v,-x)u` for all basis pairs
    /// with both weights at most `max_weight`. Returns the failing triples.
    pub fn check_skew_symmetry(&self, max_weight: i64) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        let idx = self.basis_upto(max_weight.min(self.cutoff));
        for u in idx.clone() {
            for v in idx.clone() {
                for n in self.mode_range(u, v) {
                    let lhs = self.mode(u, n, v)?;
                    let top = self.weight(u) + self.weight(v) - n - 1;
                    let mut rhs = Vector::zero();
                    let mut fact = Rational::one();
                    for i in 0..=top.max(0) {
                        if i > 0 {
                            fact *= q(i);
                        }
                        let mut term = self.mode(v, n + i, u)?;
                        for _ in 0..i {
                            term = self.l_minus_one(&term)?;
                        }
                        rhs.add_scaled(&term, &(sign(n + i + 1) / &fact));
                    }
                    if lhs != rhs {
                        failures.push(format!(
                            "{}_{n} {}: {} vs {}",
                            self.label(u),
                            self.label(v),
                            self.space.format_vector(&lhs),
                            self.space.format_vector(&rhs)
                        ));
                    }
                }
            }
        }
        Ok(failures)
    }

    /// Writes the text form of every product among basis elements of
    /// weight at most `max_weight` (the whole table when it equals the
    /// cutoff).
    pub fn to_text(&self, max_weight: i64) -> Result<String> {
        let mut s = String::new();
        let bound = max_weight.min(self.cutoff);
        writeln!(s, "[space]").unwrap();
        for d in self.space.degrees() {
            if d.numerator() > bound {
                continue;
            }
            let labels: Vec<&str> = self.space.component(d).map(|i| self.label(i)).collect();
            writeln!(s, "{d} {} {}", labels.len(), labels.join(" ")).unwrap();
        }
        writeln!(s, "[vacuum]\n{}", format_vector_entries(&self.space, &self.vacuum)).unwrap();
        if let Some(w) = &self.conformal {
            if bound >= 2 {
                writeln!(s, "[omega]\n{}", format_vector_entries(&self.space, w)).unwrap();
            }
        }
        let idx = self.basis_upto(bound);
        for u in idx.clone() {
            for v in idx.clone() {
                let sw = self.weight(u) + self.weight(v) - 1;
                for n in (sw - bound)..=sw {
                    let x = self.mode(u, n, v)?;
                    if !x.is_zero() {
                        writeln!(s, "[mode {} {n} {}]\n{}", self.label(u), self.label(v), format_vector_entries(&self.space, &x))
                            .unwrap();
                    }
                }
            }
        }
        let g = &self.automorphism;
        if !g.is_identity() {
            writeln!(s, "[automorphism]\norder {}", g.order()).unwrap();
            for i in idx {
                if g.label(i) != 0 {
                    writeln!(s, "eigen {} {}", self.label(i), g.label(i)).unwrap();
                }
            }
        }
        Ok(s)
    }
}

fn body_line_error(sec: &Section, line: usize, msg: &str) -> ParseError {
    sec.error(line, msg.to_string())
}

/// Parses an algebra definition (see the crate README for the grammar).
pub fn load_algebra(text: &str) -> Result<TruncatedVertexAlgebra> {
    let sections = parse_sections(text)?;
    let space_sec = sections
        .iter()
        .find(|s| s.name == "space")
        .ok_or(ParseError::Syntax { line: 0, message: "missing [space] section".into() })?;
    let mut components = Vec::new();
    for (line, toks) in &space_sec.body {
        if toks.len() < 2 {
            return Err(body_line_error(space_sec, *line, "expected `weight dim labels...`").into());
        }
        let w: i64 = toks[0].parse().map_err(|_| ParseError::BadNumber(toks[0].clone()))?;
        let d: usize = toks[1].parse().map_err(|_| ParseError::BadNumber(toks[1].clone()))?;
        if toks.len() != d + 2 {
            return Err(body_line_error(space_sec, *line, "label count does not match the dimension").into());
        }
        components.push((ScaledExponent::int(w), toks[2..].to_vec()));
    }
    let space = GradedSpace::new(1, components)?;
    let mut vacuum = None;
    let mut conformal = None;
    let mut table: HashMap<ModeKey, Vector> = HashMap::new();
    let mut order = 1i64;
    let mut labels = vec![0i64; space.dim()];
    let mut matrices: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut has_automorphism = false;
    for sec in &sections {
        match sec.name.as_str() {
            "space" => {}
            "vacuum" => vacuum = Some(parse_vector(&space, &sec.tokens())?),
            "omega" => conformal = Some(parse_vector(&space, &sec.tokens())?),
            "mode" => {
                if sec.args.len() != 3 {
                    return Err(sec.error(sec.line, "expected [mode u n v]").into());
                }
                let u = space.index_of(&sec.args[0])?;
                let n: i64 = sec.args[1].parse().map_err(|_| ParseError::BadNumber(sec.args[1].clone()))?;
                let v = space.index_of(&sec.args[2])?;
                let x = parse_vector(&space, &sec.tokens())?;
                if table.insert((u, n, v), x).is_some() {
                    return Err(sec.error(sec.line, "duplicate mode entry").into());
                }
            }
            "automorphism" => {
                has_automorphism = true;
                let mut iter = sec.body.iter().peekable();
                while let Some((line, toks)) = iter.next() {
                    match toks.first().map(String::as_str) {
                        Some("order") if toks.len() == 2 => {
                            order = toks[1].parse().map_err(|_| ParseError::BadNumber(toks[1].clone()))?;
                        }
                        Some("eigen") if toks.len() == 3 => {
                            let i = space.index_of(&toks[1])?;
                            labels[i] = toks[2].parse().map_err(|_| ParseError::BadNumber(toks[2].clone()))?;
                        }
                        Some("matrix") if toks.len() == 2 => {
                            let w: i64 = toks[1].parse().map_err(|_| ParseError::BadNumber(toks[1].clone()))?;
                            let d = space.dim_at(ScaledExponent::int(w));
                            let mut rows = Vec::new();
                            for _ in 0..d {
                                let (l, r) = iter.next().ok_or_else(|| body_line_error(sec, *line, "matrix ends early"))?;
                                if r.len() != d {
                                    return Err(body_line_error(sec, *l, "matrix row has the wrong length").into());
                                }
                                rows.push(r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?);
                            }
                            matrices.insert(w, Matrix::from_rows(rows));
                        }
                        _ => return Err(body_line_error(sec, *line, "expected `order T`, `eigen label r` or `matrix w`").into()),
                    }
                }
            }
            other => return Err(sec.error(sec.line, format!("unknown section [{other}]")).into()),
        }
    }
    let vacuum = vacuum.ok_or(ParseError::Syntax { line: 0, message: "missing [vacuum] section".into() })?;
    let automorphism = if has_automorphism {
        let mut g = Automorphism::from_labels(order, labels)?;
        for (w, m) in matrices {
            g = g.with_matrix(w, m);
        }
        Some(g)
    } else {
        None
    };
    TruncatedVertexAlgebra::from_table(space, vacuum, conformal, table, automorphism)
}

/// Binomial helper shared by the Zhu and residue code: `C(top, i)` for an
/// exponent-valued top.
pub fn binom_se(top: ScaledExponent, i: i64) -> Rational {
    if i < 0 {
        return Rational::zero();
    }
    binomial(&top.to_rational(), i as u64)
}
