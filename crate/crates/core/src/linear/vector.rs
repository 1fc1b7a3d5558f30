use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{Coefficient, Rational};

/// Sparse vector over the rationals, indexed by basis position. Zero entries
/// are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Vector(BTreeMap<usize, Rational>);

pub type GradedVector = Vector;

impl Vector {
    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Vector::zero();
        v.0.insert(i, Rational::one());
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v = Vector::zero();
        for (i, c) in entries {
            v.add_at(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_ref(&self, i: usize) -> Option<&Rational> {
        self.0.get(&i)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &Rational)> + '_ {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.0.iter().next_back().map(|(i, c)| (*i, c))
    }

    pub fn add_at(&mut self, i: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(i).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.0 {
            self.add_at(*i, &(x * c));
        }
    }

    pub fn add_vec(&mut self, other: &Vector) {
        for (i, x) in &other.0 {
            self.add_at(*i, x);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn scale_in_place(&mut self, c: &Rational) {
        if c.is_zero() {
            self.0.clear();
            return;
        }
        for x in self.0.values_mut() {
            *x *= c;
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn remove(&mut self, i: usize) -> Option<Rational> {
        self.0.remove(&i)
    }

    /// Re-indexes through `f`, merging collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> Vector {
        let mut out = Vector::zero();
        for (i, c) in &self.0 {
            out.add_at(f(*i), c);
        }
        out
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in &self.0 {
            if let Some(d) = other.0.get(i) {
                acc += c * d;
            }
        }
        acc
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(i, c)| (i, c.to_string()))).finish()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(i, c)| format!("{c}*e{i}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Coefficient for Vector {
    fn vanishes(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_vec(other);
    }
    fn scaled(&self, by: &Rational) -> Self {
        Vector::scaled(self, by)
    }
}

/// Dense matrix over the rationals; used for small endomorphisms such as
/// representations of a quotient algebra on a finite-dimensional module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        self.data[r * self.cols + c] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (j, x) in v.iter() {
            assert!(j < self.cols, "vector index out of range");
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out.add_at(i, &(a * x));
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_entries((0..self.rows).map(|i| (i, self.get(i, j).clone())))
    }

    pub fn from_columns(rows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, c) in v.iter() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut e = super::Echelon::new();
        for i in 0..self.rows {
            e.insert(Vector::from_entries((0..self.cols).map(|j| (j, self.get(i, j).clone()))));
        }
        e.rank()
    }
}
