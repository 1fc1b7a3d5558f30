use super::module::InducedModule;
use super::normal::NfEntry;
use crate::error::{Error, Result};
use crate::exact::ScaledExponent;
use crate::linear::{Matrix, Vector};
use crate::residue::ModuleData;

type SE = ScaledExponent;

/// Outcome of an intertwining check over algebra elements up to a weight
/// and every mode landing in degrees `0..=cutoff` of the source.
#[derive(Clone, Debug)]
pub struct IntertwineReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl IntertwineReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn modes_into(s: &InducedModule, u: usize, i: usize) -> Vec<SE> {
    let alg = s.algebra();
    let top = s.space().degree(i) + alg.weight(u) - 1;
    let step = SE::new(1, s.space().scale());
    let mut n = s.normal_forms().mode_offset(u).least_in_coset_above(top - s.cutoff() - step);
    let mut out = Vec::new();
    while n <= top {
        out.push(n);
        n = n + 1;
    }
    out
}

/// Checks `phi(u_n x) = u_n phi(x)` over basis elements of `s`, where
/// `target_act(u, n, y)` applies the mode on the target side.
fn intertwines(
    s: &InducedModule,
    phi: &Matrix,
    weight: i64,
    target_act: &dyn Fn(usize, SE, &Vector) -> Result<Vector>,
) -> Result<IntertwineReport> {
    let mut report = IntertwineReport { checked: 0, skipped: 0, failures: Vec::new() };
    for u in s.algebra().basis_upto(weight) {
        for i in 0..s.dim() {
            for n in modes_into(s, u, i) {
                let lhs = match s.act(u, n, i) {
                    Ok(x) => phi.apply(&x),
                    Err(e) if e.is_precision() => {
                        report.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let rhs = match target_act(u, n, &phi.column(i)) {
                    Ok(y) => y,
                    Err(e) if e.is_precision() => {
                        report.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                report.checked += 1;
                if lhs != rhs && report.failures.len() < 8 {
                    report.failures.push(format!("{}({n}) on {}", s.algebra().label(u), s.label(i)));
                }
            }
        }
    }
    Ok(report)
}

/// The module map `S(W1) -> S(W2)` induced by an intertwiner `f: W1 -> W2`
/// (matrix of size `dim W2 x dim W1`): `u(m)w -> u(m)f(w)`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub matrix: Matrix,
    pub intertwining: IntertwineReport,
}

pub fn induced_map(f: &Matrix, s1: &InducedModule, s2: &InducedModule, weight: i64) -> Result<InducedMap> {
    let (c1, c2) = (s1.context(), s2.context());
    if f.rows() != c2.dim() || f.cols() != c1.dim() {
        return Err(Error::Invalid(format!(
            "map has shape {}x{}, expected {}x{}",
            f.rows(),
            f.cols(),
            c2.dim(),
            c1.dim()
        )));
    }
    if !c1.intertwines(c2, f) {
        return Err(Error::Invalid("the map does not intertwine the algebra actions".into()));
    }
    let nf2 = s2.normal_forms();
    let mut cols = Vec::with_capacity(s1.dim());
    for i in 0..s1.dim() {
        let mut y = Vector::zero();
        match s1.normal_forms().entry(s1.representative(i)) {
            NfEntry::Pure(w) => {
                for (w2, c) in f.column(w).iter() {
                    y.add_at(nf2.pure(w2), c);
                }
            }
            NfEntry::Pair { u, m, w } => {
                for (w2, c) in f.column(w).iter() {
                    y.add_scaled(&nf2.act(u, m, &Vector::unit(nf2.pure(w2)))?, c);
                }
            }
        }
        cols.push(s2.project(&y)?);
    }
    let matrix = Matrix::from_columns(s2.dim(), &cols);
    let intertwining = intertwines(s1, &matrix, weight, &|u, n, y| s2.act_vec(&Vector::unit(u), n, y))?;
    Ok(InducedMap { matrix, intertwining })
}

/// The map `S(W) -> M` extending `f: W -> Omega(M)` by `u(m)w -> u_m f(w)`,
/// with its well-definedness and isomorphism checks.
#[derive(Clone, Debug)]
pub struct UniversalMap {
    pub matrix: Matrix,
    /// Relation rows checked to map to zero, and those beyond precision.
    pub relations_checked: usize,
    pub relations_skipped: usize,
    pub relation_failures: Vec<String>,
    pub restricts_to_f: bool,
    pub graded: bool,
    /// Per degree: (degree, source dim, target dim, rank).
    pub ranks: Vec<(SE, usize, usize, usize)>,
    pub intertwining: IntertwineReport,
}

impl UniversalMap {
    pub fn is_well_defined(&self) -> bool {
        self.relation_failures.is_empty() && self.restricts_to_f && self.graded
    }

    /// Bijective in every degree up to the cutoff.
    pub fn is_isomorphism(&self) -> bool {
        self.ranks.iter().all(|(_, a, b, r)| a == b && a == r)
    }

    pub fn passed(&self) -> bool {
        self.is_well_defined() && self.is_isomorphism() && self.intertwining.passed()
    }
}

/// Image in `target` of a normal form vector of `s`.
fn normal_form_image(s: &InducedModule, target: &ModuleData, f: &[Vector], y: &Vector) -> Result<Vector> {
    let mut out = Vector::zero();
    for (i, c) in y.iter() {
        match s.normal_forms().entry(i) {
            NfEntry::Pure(w) => out.add_scaled(&f[w], c),
            NfEntry::Pair { u, m, w } => out.add_scaled(&target.act_vec(&Vector::unit(u), m, &f[w])?, c),
        }
    }
    Ok(out)
}

pub fn universal_map(s: &InducedModule, target: &ModuleData, f: &[Vector], weight: i64) -> Result<UniversalMap> {
    if f.len() != s.context().dim() {
        return Err(Error::Invalid(format!("expected {} images, got {}", s.context().dim(), f.len())));
    }
    let mut relations_checked = 0;
    let mut relations_skipped = 0;
    let mut relation_failures = Vec::new();
    for (_, row) in s.relations().rows() {
        match normal_form_image(s, target, f, row) {
            Ok(x) if x.is_zero() => relations_checked += 1,
            Ok(_) => {
                relations_checked += 1;
                if relation_failures.len() < 8 {
                    relation_failures.push(s.normal_forms().format(row));
                }
            }
            Err(e) if e.is_precision() => relations_skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut cols = Vec::with_capacity(s.dim());
    let mut graded = true;
    for i in 0..s.dim() {
        let x = normal_form_image(s, target, f, &Vector::unit(s.representative(i)))?;
        if !x.is_zero() && target.degree_of(&x) != Some(s.space().degree(i)) {
            graded = false;
        }
        cols.push(x);
    }
    let matrix = Matrix::from_columns(target.dim(), &cols);
    let mut restricts_to_f = true;
    for (w, fw) in f.iter().enumerate() {
        if matrix.apply(&s.embed(w)?) != *fw {
            restricts_to_f = false;
        }
    }
    let mut ranks = Vec::new();
    for (d, n) in s.graded_dims() {
        let src: Vec<Vector> = s.space().component(d).map(|i| matrix.column(i)).collect();
        let rank = Matrix::from_columns(target.dim(), &src).rank();
        ranks.push((d, n, target.space().dim_at(d), rank));
    }
    let intertwining = intertwines(s, &matrix, weight, &|u, n, y| target.act_vec(&Vector::unit(u), n, y))?;
    Ok(UniversalMap { matrix, relations_checked, relations_skipped, relation_failures, restricts_to_f, graded, ranks, intertwining })
}
