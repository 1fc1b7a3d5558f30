use std::collections::BTreeMap;

use num_traits::One;

use super::Vector;
use crate::exact::Rational;

/// Reduced row echelon basis with the pivot of each row at its largest
/// index. Every row has coefficient one at its pivot and zero at the pivots
/// of all other rows, so the basis is canonical for the span.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: BTreeMap<usize, Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl DoubleEndedIterator<Item = (usize, &Vector)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    pub fn pivots(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    /// Residue of `v` modulo the span; supported on non-pivot indices only.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut out = v.clone();
        let keys: Vec<usize> = v.indices().rev().filter(|i| self.rows.contains_key(i)).collect();
        for k in keys {
            if let Some(c) = out.get_ref(k).cloned() {
                out.add_scaled(&self.rows[&k], &-c);
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns false when it was already contained.
    pub fn insert(&mut self, v: Vector) -> bool {
        let mut r = self.reduce(&v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let inv = Rational::one() / lead;
        r.scale_in_place(&inv);
        for row in self.rows.values_mut() {
            if let Some(c) = row.get_ref(p).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn extend(&mut self, vs: impl IntoIterator<Item = Vector>) -> usize {
        vs.into_iter().map(|v| self.insert(v) as usize).sum()
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows.into_values().collect()
    }
}
