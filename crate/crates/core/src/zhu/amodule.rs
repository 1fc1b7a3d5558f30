use std::sync::Arc;

use num_traits::Zero;

use super::quotient::{ZhuKind, ZhuQuotient};
use crate::error::{Error, ParseError, Result};
use crate::exact::{format_rational, parse_rational, ScaledExponent};
use crate::io::parse_sections;
use crate::linear::{Matrix, Subspace, Vector};
use crate::residue::ModuleData;
use crate::vertex::TruncatedVertexAlgebra;

/// A finite-dimensional module over a Zhu algebra, stored as one matrix
/// `rho(u)` per basis element of the algebra. Entries may be missing when
/// they could not be determined (weight beyond a cap or cutoff); asking for
/// one is a precision error.
#[derive(Clone, Debug)]
pub struct AModule {
    algebra: Arc<TruncatedVertexAlgebra>,
    kind: ZhuKind,
    dim: usize,
    rho: Vec<Option<Matrix>>,
}

/// Coordinates of `x` in the echelon basis of `sub`, checked exactly.
fn coordinates(sub: &Subspace, x: &Vector) -> Option<Vector> {
    let rows: Vec<(usize, &Vector)> = sub.echelon().rows().collect();
    let mut coords = Vector::zero();
    let mut rest = x.clone();
    for (k, (p, row)) in rows.iter().enumerate() {
        let c = x.get(*p);
        if !c.is_zero() {
            rest.add_scaled(row, &-c.clone());
            coords.add_at(k, &c);
        }
    }
    rest.is_zero().then_some(coords)
}

impl AModule {
    pub fn new(algebra: Arc<TruncatedVertexAlgebra>, kind: ZhuKind, dim: usize, rho: Vec<Option<Matrix>>) -> Result<Self> {
        if rho.len() != algebra.dim() {
            return Err(Error::Mismatch(format!("{} matrices for an algebra of dimension {}", rho.len(), algebra.dim())));
        }
        if let Some(m) = rho.iter().flatten().find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Mismatch(format!("{}x{} matrix on a {dim}-dimensional module", m.rows(), m.cols())));
        }
        Ok(AModule { algebra, kind, dim, rho })
    }

    /// The one-dimensional module on which `u` acts by `f(u)`.
    pub fn scalar(algebra: Arc<TruncatedVertexAlgebra>, kind: ZhuKind, f: impl Fn(usize) -> crate::exact::Rational) -> Result<Self> {
        let rho = (0..algebra.dim()).map(|u| Some(Matrix::scalar(1, &f(u)))).collect();
        Self::new(algebra, kind, 1, rho)
    }

    /// The action `v + O -> o(v)` restricted to `omega`, which must be
    /// stable under every `o(v)`. Returns the module and the basis of
    /// `omega` that its coordinates refer to.
    pub fn from_omega(m: &ModuleData, kind: ZhuKind, omega: &Subspace) -> Result<(Self, Vec<Vector>)> {
        let basis = omega.basis();
        let alg = m.algebra().clone();
        let mut rho = Vec::with_capacity(alg.dim());
        for u in 0..alg.dim() {
            let mut cols = Vec::with_capacity(basis.len());
            let mut missing = false;
            for b in &basis {
                match m.o_action(&Vector::unit(u), b) {
                    Ok(x) => cols.push(coordinates(omega, &x).ok_or_else(|| {
                        Error::Axiom(format!("o({}) does not preserve the lowest weight space", alg.label(u)))
                    })?),
                    Err(e) if e.is_precision() => missing = true,
                    Err(e) => return Err(e),
                }
            }
            rho.push((!missing).then(|| Matrix::from_columns(basis.len(), &cols)));
        }
        Ok((Self::new(alg, kind, basis.len(), rho)?, basis))
    }

    /// Parses `[amodule]` with `dim N`, then `[rho label]` sections of
    /// `N` rows each. The vacuum defaults to the identity; other labels left
    /// out are filled in through `zhu` when their weight is within its cap.
    pub fn from_text(algebra: Arc<TruncatedVertexAlgebra>, kind: ZhuKind, text: &str, zhu: Option<&ZhuQuotient>) -> Result<Self> {
        let sections = parse_sections(text)?;
        let mut dim = None;
        let mut rho: Vec<Option<Matrix>> = vec![None; algebra.dim()];
        for sec in &sections {
            match sec.name.as_str() {
                "amodule" => {
                    for (line, toks) in &sec.body {
                        match toks.as_slice() {
                            [k, n] if k == "dim" => {
                                dim = Some(n.parse::<usize>().map_err(|_| ParseError::BadNumber(n.clone()))?)
                            }
                            _ => return Err(sec.error(*line, "expected `dim N`").into()),
                        }
                    }
                }
                "rho" => {
                    let n = dim.ok_or_else(|| sec.error(sec.line, "[amodule] with `dim N` must come first"))?;
                    let [label] = sec.args.as_slice() else {
                        return Err(sec.error(sec.line, "expected [rho label]").into());
                    };
                    let u = algebra.space().index_of(label)?;
                    if sec.body.len() != n {
                        return Err(sec.error(sec.line, format!("expected {n} rows")).into());
                    }
                    let mut rows = Vec::with_capacity(n);
                    for (line, toks) in &sec.body {
                        if toks.len() != n {
                            return Err(sec.error(*line, format!("expected {n} entries")).into());
                        }
                        rows.push(toks.iter().map(|t| parse_rational(t)).collect::<std::result::Result<Vec<_>, _>>()?);
                    }
                    rho[u] = Some(Matrix::from_rows(rows));
                }
                other => return Err(sec.error(sec.line, format!("unknown section [{other}]")).into()),
            }
        }
        let dim = dim.ok_or_else(|| ParseError::Syntax { line: 0, message: "missing [amodule] section".into() })?;
        if let Some(vac) = algebra.vacuum().leading().map(|(i, _)| i) {
            rho[vac].get_or_insert_with(|| Matrix::identity(dim));
        }
        if let Some(z) = zhu {
            let given = rho.clone();
            for (u, slot) in rho.iter_mut().enumerate() {
                if slot.is_some() || algebra.weight(u) > z.cap() {
                    continue;
                }
                let c = z.project(&Vector::unit(u))?;
                let mut acc = Matrix::zeros(dim, dim);
                let mut ok = true;
                for (i, x) in c.iter() {
                    match &given[z.quotient().representative(i)] {
                        Some(m) => acc = acc.add(&m.scaled(x)),
                        None => ok = false,
                    }
                }
                if ok {
                    *slot = Some(acc);
                }
            }
        }
        Self::new(algebra, kind, dim, rho)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("[amodule]\ndim {}\n", self.dim);
        for (u, m) in self.rho.iter().enumerate() {
            let Some(m) = m else { continue };
            s.push_str(&format!("\n[rho {}]\n", self.algebra.label(u)));
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| format_rational(m.get(r, c))).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
        }
        s
    }

    pub fn algebra(&self) -> &Arc<TruncatedVertexAlgebra> {
        &self.algebra
    }

    pub fn kind(&self) -> &ZhuKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The degree at which the module sits inside an induced module.
    pub fn base_degree(&self) -> ScaledExponent {
        match self.kind {
            ZhuKind::Level(n) => ScaledExponent::int(n),
            ZhuKind::Twisted(_) => ScaledExponent::zero(),
        }
    }

    pub fn rho(&self, u: usize) -> Result<&Matrix> {
        self.rho[u]
            .as_ref()
            .ok_or_else(|| Error::Precision(format!("the action of {} is not determined", self.algebra.label(u))))
    }

    pub fn rho_vec(&self, a: &Vector) -> Result<Matrix> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (u, c) in a.iter() {
            out = out.add(&self.rho(u)?.scaled(c));
        }
        Ok(out)
    }

    /// Failures of the module structure against `zhu`: generators must act
    /// by zero, the unit by the identity, and products by composites.
    pub fn verify_against(&self, zhu: &ZhuQuotient) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        for (k, g) in zhu.generators().iter().enumerate() {
            match self.rho_vec(g) {
                Ok(m) if !m.is_zero() => failures.push(format!("generator {k} acts by a nonzero matrix")),
                Ok(_) => {}
                Err(e) if e.is_precision() => {}
                Err(e) => return Err(e),
            }
        }
        if let Ok(m) = self.rho_vec(self.algebra.vacuum()) {
            if m != Matrix::identity(self.dim) {
                failures.push("the vacuum does not act as the identity".into());
            }
        }
        let q = zhu.quotient();
        for (i, row) in zhu.mult_table().iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let Some(c) = entry else { continue };
                let (a, b) = (q.representative(i), q.representative(j));
                let (Ok(ra), Ok(rb), Ok(rc)) = (self.rho(a), self.rho(b), self.rho_vec(&q.lift(c))) else { continue };
                if ra.mul(rb) != rc {
                    failures.push(format!("rho does not respect the product of basis ({i}, {j})"));
                }
            }
        }
        Ok(failures)
    }

    /// True when `f: self -> other` (a `other.dim x self.dim` matrix)
    /// commutes with every determined action.
    pub fn intertwines(&self, other: &AModule, f: &Matrix) -> bool {
        (0..self.algebra.dim()).all(|u| match (self.rho(u), other.rho(u)) {
            (Ok(a), Ok(b)) => f.mul(a) == b.mul(f),
            _ => true,
        })
    }
}
