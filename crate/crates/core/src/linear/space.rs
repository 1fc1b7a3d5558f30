use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::error::{Error, ParseError, Result};
use crate::exact::ScaledExponent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub degree: ScaledExponent,
    pub label: String,
}

/// A `(1/T)Z`-graded space with finitely many nonzero components. Basis
/// elements are stored contiguously by increasing degree, so the global index
/// order is the (degree, label position) order used for pivoting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    scale: i64,
    basis: Vec<BasisElement>,
    ranges: BTreeMap<ScaledExponent, Range<usize>>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new(scale: i64, components: Vec<(ScaledExponent, Vec<String>)>) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::Invalid("grading scale must be positive".into()));
        }
        let mut by_degree: BTreeMap<ScaledExponent, Vec<String>> = BTreeMap::new();
        for (d, labels) in components {
            if scale % d.scale() != 0 {
                return Err(Error::Invalid(format!("degree {d} is not in (1/{scale})Z")));
            }
            by_degree.entry(d).or_default().extend(labels);
        }
        let mut basis = Vec::new();
        let mut ranges = BTreeMap::new();
        let mut index = HashMap::new();
        for (d, labels) in by_degree {
            if labels.is_empty() {
                continue;
            }
            let start = basis.len();
            for label in labels {
                if index.insert(label.clone(), basis.len()).is_some() {
                    return Err(Error::Invalid(format!("duplicate basis label `{label}`")));
                }
                basis.push(BasisElement { degree: d, label });
            }
            ranges.insert(d, start..basis.len());
        }
        Ok(GradedSpace { scale, basis, ranges, index })
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> ScaledExponent {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ParseError> {
        self.index.get(label).copied().ok_or_else(|| ParseError::UnknownLabel(label.to_string()))
    }

    pub fn degrees(&self) -> impl Iterator<Item = ScaledExponent> + '_ {
        self.ranges.keys().copied()
    }

    pub fn component(&self, d: ScaledExponent) -> Range<usize> {
        self.ranges.get(&d).cloned().unwrap_or(0..0)
    }

    pub fn dim_at(&self, d: ScaledExponent) -> usize {
        self.component(d).len()
    }

    /// Number of basis elements of degree at most `d`.
    pub fn dim_upto(&self, d: ScaledExponent) -> usize {
        self.ranges.range(..=d).map(|(_, r)| r.len()).sum()
    }

    pub fn max_degree(&self) -> Option<ScaledExponent> {
        self.ranges.keys().next_back().copied()
    }

    /// Degree of a vector whose support is homogeneous; None for zero or
    /// mixed vectors.
    pub fn homogeneous_degree(&self, v: &super::Vector) -> Option<ScaledExponent> {
        let mut it = v.indices().map(|i| self.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn format_vector(&self, v: &super::Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter().map(|(i, c)| format!("{c} {}", self.label(i))).collect::<Vec<_>>().join(" ")
    }
}
