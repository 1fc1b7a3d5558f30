use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Echelon, GradedSpace, Vector};
use crate::error::{Error, Result};
use num_traits::One;

use crate::exact::{Rational, ScaledExponent};

/// A subspace of a graded space, held as a canonical echelon basis. The
/// span need not be homogeneous; when it is, the per-degree ranks are
/// meaningful.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: Arc<GradedSpace>,
    echelon: Echelon,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.echelon == other.echelon
    }
}

fn check_in(space: &GradedSpace, v: &Vector) -> Result<()> {
    match v.leading() {
        Some((i, _)) if i >= space.dim() => {
            Err(Error::Mismatch(format!("vector index {i} outside ambient space of dim {}", space.dim())))
        }
        _ => Ok(()),
    }
}

impl Subspace {
    pub fn zero(ambient: Arc<GradedSpace>) -> Self {
        Subspace { ambient, echelon: Echelon::new() }
    }

    pub fn full(ambient: Arc<GradedSpace>) -> Self {
        let n = ambient.dim();
        span_close(&ambient, (0..n).map(Vector::unit)).expect("unit vectors lie in the space")
    }

    pub fn ambient(&self) -> &Arc<GradedSpace> {
        &self.ambient
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.echelon.rows().map(|(_, r)| r.clone()).collect()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.echelon.contains(v)
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        self.echelon.reduce(v)
    }

    /// Rank of the degree-`d` part; exact for homogeneous subspaces.
    pub fn rank_at(&self, d: ScaledExponent) -> usize {
        let r = self.ambient.component(d);
        self.echelon.pivots().filter(|p| r.contains(p)).count()
    }

    /// Dimension of the intersection with the span of basis elements of
    /// degree at most `d`. Exact for any subspace because pivots sit at the
    /// largest index of each row.
    pub fn rank_upto(&self, d: ScaledExponent) -> usize {
        let end = self.ambient.dim_upto(d);
        self.echelon.pivots().filter(|p| *p < end).count()
    }

    pub fn insert(&mut self, v: Vector) -> Result<bool> {
        check_in(&self.ambient, &v)?;
        Ok(self.echelon.insert(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.echelon.rows().all(|(_, r)| other.contains(r))
    }
}

pub fn span_close(space: &Arc<GradedSpace>, vectors: impl IntoIterator<Item = Vector>) -> Result<Subspace> {
    let mut s = Subspace::zero(space.clone());
    for v in vectors {
        s.insert(v)?;
    }
    Ok(s)
}

/// `space / sub` with the complement basis given by the non-pivot basis
/// elements (the lexicographically least complement under pivot-at-max).
#[derive(Clone, Debug)]
pub struct Quotient {
    space: Arc<GradedSpace>,
    sub: Subspace,
    representatives: Vec<usize>,
    position: BTreeMap<usize, usize>,
}

impl Quotient {
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn ambient(&self) -> &Arc<GradedSpace> {
        self.sub.ambient()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Ambient index of the `i`th quotient basis element.
    pub fn representative(&self, i: usize) -> usize {
        self.representatives[i]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Exact projection to quotient coordinates.
    pub fn project(&self, v: &Vector) -> Vector {
        let r = self.sub.reduce(v);
        r.map_indices(|i| self.position[&i])
    }

    pub fn lift(&self, v: &Vector) -> Vector {
        v.map_indices(|i| self.representatives[i])
    }
}

pub fn quotient(space: &Arc<GradedSpace>, sub: &Subspace) -> Result<Quotient> {
    if sub.ambient() != space {
        return Err(Error::Mismatch("subspace belongs to a different ambient space".into()));
    }
    let representatives: Vec<usize> = (0..space.dim()).filter(|i| !sub.echelon.is_pivot(*i)).collect();
    let position = representatives.iter().enumerate().map(|(k, i)| (*i, k)).collect();
    let components = representatives
        .iter()
        .map(|i| (space.degree(*i), vec![space.label(*i).to_string()]))
        .collect();
    let qspace = Arc::new(GradedSpace::new(space.scale(), components)?);
    Ok(Quotient { space: qspace, sub: sub.clone(), representatives, position })
}

/// Intersection by the Zassenhaus construction: rows `(a_i | a_i)` and
/// `(b_j | 0)`, with the first half placed above the second so that rows
/// whose pivot falls in the second half span the intersection.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient() != b.ambient() {
        return Err(Error::Mismatch("intersect requires a common ambient space".into()));
    }
    let n = a.ambient().dim();
    let mut e = Echelon::new();
    for (_, r) in a.echelon.rows() {
        let mut doubled = r.map_indices(|i| i + n);
        doubled.add_vec(r);
        e.insert(doubled);
    }
    for (_, r) in b.echelon.rows() {
        e.insert(r.map_indices(|i| i + n));
    }
    let rows = e.rows().filter(|(p, _)| *p < n).map(|(_, r)| r.clone());
    span_close(a.ambient(), rows)
}

/// Kernel of the linear map sending the `i`th domain basis vector to
/// `images[i]`, as a list of domain vectors in echelon form.
pub fn kernel(images: &[Vector]) -> Vec<Vector> {
    let n = images.len();
    let mut e = Echelon::new();
    for (i, img) in images.iter().enumerate() {
        let mut row = img.map_indices(|j| j + n);
        row.add_at(i, &Rational::one());
        e.insert(row);
    }
    e.rows().filter(|(p, _)| *p < n).map(|(_, r)| r.clone()).collect()
}
