use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linear::{Matrix, Vector};

/// A finite order automorphism presented in a basis of eigenvectors. Basis
/// element `i` spans part of `V^r` with `r = label(i)`, meaning the
/// eigenvalue `exp(2 pi i r / T)`; the eigenvalue itself is never formed.
/// Optional per-weight matrices give the action in the same basis and are
/// checked when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    order: i64,
    labels: Vec<i64>,
    matrices: BTreeMap<i64, Matrix>,
}

/// Kronecker indicator of the untwisted sector.
pub fn delta(r: i64) -> i64 {
    (r == 0) as i64
}

impl Automorphism {
    pub fn identity(dim: usize) -> Self {
        Automorphism { order: 1, labels: vec![0; dim], matrices: BTreeMap::new() }
    }

    pub fn from_labels(order: i64, labels: Vec<i64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::Invalid(format!("automorphism order {order} must be positive")));
        }
        if let Some(r) = labels.iter().find(|r| **r < 0 || **r >= order) {
            return Err(Error::Invalid(format!("eigen label {r} outside 0..{order}")));
        }
        Ok(Automorphism { order, labels, matrices: BTreeMap::new() })
    }

    pub fn with_matrix(mut self, weight: i64, m: Matrix) -> Self {
        self.matrices.insert(weight, m);
        self
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn label(&self, i: usize) -> i64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn matrices(&self) -> &BTreeMap<i64, Matrix> {
        &self.matrices
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// Common eigen label of the support of `v`; `None` for zero or mixed
    /// vectors.
    pub fn label_of(&self, v: &Vector) -> Option<i64> {
        let mut it = v.indices().map(|i| self.labels[i]);
        let first = it.next()?;
        it.all(|r| r == first).then_some(first)
    }

    /// Checks `g^T = 1` on every stored matrix, and for orders one and two
    /// that each matrix is the diagonal sign pattern dictated by the labels.
    pub fn check_matrices(&self, component: impl Fn(i64) -> std::ops::Range<usize>) -> Result<()> {
        for (w, m) in &self.matrices {
            let range = component(*w);
            if m.rows() != range.len() || m.cols() != range.len() {
                return Err(Error::Invalid(format!("automorphism matrix at weight {w} has the wrong size")));
            }
            let mut power = Matrix::identity(range.len());
            for _ in 0..self.order {
                power = power.mul(m);
            }
            if power != Matrix::identity(range.len()) {
                return Err(Error::Axiom(format!("g^{} is not the identity at weight {w}", self.order)));
            }
            if self.order <= 2 {
                let mut expect = Matrix::zeros(range.len(), range.len());
                for (k, i) in range.clone().enumerate() {
                    let sign = if self.labels[i] == 0 { 1 } else { -1 };
                    expect.set(k, k, crate::exact::q(sign));
                }
                if *m != expect {
                    return Err(Error::Axiom(format!(
                        "automorphism matrix at weight {w} disagrees with the eigen labels"
                    )));
                }
            }
        }
        Ok(())
    }
}
