//! Multivariate truncated formal Laurent series with exponents in `(1/T)Z`.
//!
//! A series carries, per variable, a [`Bounds`] certificate: `lower` is a
//! certified lower bound on the exponents of the *true* series (None when the
//! series is unbounded below in that variable) and `upper` is the largest
//! exponent up to which stored coefficients are exact (None when every
//! coefficient is known). Coefficients outside the certified region are
//! never reported as zero; asking for them is a precision error.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::exponent::ScaledExponent;
use super::rational::{binomial, is_nonneg_integer, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    X0,
    X1,
    X2,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::X => "x",
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::Y => "y",
        };
        f.write_str(s)
    }
}

/// Coefficients a series may carry: rationals, or vectors over the rationals.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn vanishes(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scaled(&self, by: &Rational) -> Self;
    fn neg(&self) -> Self {
        self.scaled(&-Rational::one())
    }
}

impl Coefficient for Rational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, by: &Rational) -> Self {
        self * by
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Bounds {
    pub lower: Option<ScaledExponent>,
    pub upper: Option<ScaledExponent>,
}

impl Bounds {
    pub const EXACT: Bounds = Bounds { lower: None, upper: None };

    pub fn new(lower: Option<ScaledExponent>, upper: Option<ScaledExponent>) -> Self {
        Bounds { lower, upper }
    }

    pub fn certifies(&self, e: ScaledExponent) -> bool {
        self.upper.is_none_or(|u| e <= u)
    }

    fn admits(&self, e: ScaledExponent) -> bool {
        self.lower.is_none_or(|l| e >= l) && self.certifies(e)
    }
}

fn min_opt_upper(a: Option<ScaledExponent>, b: Option<ScaledExponent>) -> Option<ScaledExponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_opt_lower(a: Option<ScaledExponent>, b: Option<ScaledExponent>) -> Option<ScaledExponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    }
}

pub type Exponents = Vec<ScaledExponent>;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<C: Coefficient = Rational> {
    vars: Vec<Var>,
    terms: BTreeMap<Exponents, C>,
    window: Vec<Bounds>,
}

impl<C: Coefficient> FormalSeries<C> {
    pub fn zero(vars: &[Var]) -> Self {
        FormalSeries {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
            window: vec![Bounds::EXACT; vars.len()],
        }
    }

    pub fn monomial(vars: &[Var], exponents: Exponents, coefficient: C) -> Self {
        assert_eq!(vars.len(), exponents.len());
        let mut s = Self::zero(vars);
        s.window = exponents.iter().map(|e| Bounds::new(Some(*e), None)).collect();
        if !coefficient.vanishes() {
            s.terms.insert(exponents, coefficient);
        }
        s
    }

    /// Builds a series from explicit terms and a window. Terms outside the
    /// window are rejected.
    pub fn from_terms(
        vars: &[Var],
        terms: impl IntoIterator<Item = (Exponents, C)>,
        window: Vec<Bounds>,
    ) -> Result<Self> {
        assert_eq!(vars.len(), window.len());
        let mut s = FormalSeries { vars: vars.to_vec(), terms: BTreeMap::new(), window };
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::Mismatch("exponent tuple length".into()));
            }
            if !e.iter().zip(&s.window).all(|(x, b)| b.admits(*x)) {
                return Err(Error::Precision(format!("term {e:?} lies outside the window")));
            }
            s.add_term(e, &c);
        }
        Ok(s)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn window(&self) -> &[Bounds] {
        &self.window
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn var_index(&self, v: Var) -> Result<usize> {
        self.vars
            .iter()
            .position(|x| *x == v)
            .ok_or_else(|| Error::Mismatch(format!("series has no variable {v}")))
    }

    fn add_term(&mut self, e: Exponents, c: &C) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                existing.add_assign_ref(c);
                if existing.vanishes() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn certifies(&self, e: &[ScaledExponent]) -> bool {
        e.iter().zip(&self.window).all(|(x, b)| b.certifies(*x))
    }

    fn prune(&mut self) {
        let window = self.window.clone();
        self.terms
            .retain(|e, _| e.iter().zip(&window).all(|(x, b)| b.certifies(*x)));
    }

    /// Coefficient at an exponent tuple, provided the window certifies it.
    pub fn coefficient(&self, e: &[ScaledExponent]) -> Result<Option<&C>> {
        if e.len() != self.vars.len() {
            return Err(Error::Mismatch("exponent tuple length".into()));
        }
        if !self.certifies(e) {
            return Err(Error::Precision(format!(
                "coefficient at {e:?} is outside the certified window"
            )));
        }
        Ok(self.terms.get(e))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::Mismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        let window: Vec<Bounds> = self
            .window
            .iter()
            .zip(&other.window)
            .map(|(a, b)| Bounds::new(min_opt_lower(a.lower, b.lower), min_opt_upper(a.upper, b.upper)))
            .collect();
        let mut out = FormalSeries { vars: self.vars.clone(), terms: self.terms.clone(), window };
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        FormalSeries {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            window: self.window.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, by: &Rational) -> Self {
        let mut out = Self::zero(&self.vars);
        out.window = self.window.clone();
        if Zero::is_zero(by) {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c.scaled(by))).collect();
        out
    }

    /// Coefficient of `var^-1`, as a series in the remaining variables.
    pub fn residue(&self, var: Var) -> Result<Self> {
        let idx = self.var_index(var)?;
        let minus_one = ScaledExponent::int(-1);
        if !self.window[idx].certifies(minus_one) {
            return Err(Error::Precision(format!(
                "window does not certify the {var}^-1 coefficient"
            )));
        }
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let mut window = self.window.clone();
        window.remove(idx);
        let mut out = FormalSeries { vars, terms: BTreeMap::new(), window };
        for (e, c) in &self.terms {
            if e[idx] == minus_one {
                let mut rest = e.clone();
                rest.remove(idx);
                out.add_term(rest, c);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: Var) -> Result<Self> {
        let idx = self.var_index(var)?;
        let mut out = Self::zero(&self.vars);
        out.window = self.window.clone();
        let b = &mut out.window[idx];
        b.lower = b.lower.map(|l| l - 1);
        b.upper = b.upper.map(|u| u - 1);
        for (e, c) in &self.terms {
            let factor = e[idx].to_rational();
            let mut shifted = e.clone();
            shifted[idx] = shifted[idx] - 1;
            out.add_term(shifted, &c.scaled(&factor));
        }
        Ok(out)
    }

    /// Multiplies by the monomial `prod var^e`.
    pub fn shift(&self, exponents: &[ScaledExponent]) -> Self {
        let mut out = Self::zero(&self.vars);
        out.window = self
            .window
            .iter()
            .zip(exponents)
            .map(|(b, s)| Bounds::new(b.lower.map(|l| l + *s), b.upper.map(|u| u + *s)))
            .collect();
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(exponents).map(|(a, b)| *a + *b).collect(), c.clone()))
            .collect();
        out
    }
}

impl FormalSeries<Rational> {
    pub fn constant(vars: &[Var], c: Rational) -> Self {
        Self::monomial(vars, vec![ScaledExponent::zero(); vars.len()], c)
    }

    /// Cauchy product of a scalar series with a series of any coefficient
    /// type, restricted to the region where every contribution is known.
    pub fn mul<C: Coefficient>(&self, other: &FormalSeries<C>) -> Result<FormalSeries<C>> {
        if self.vars != other.vars {
            return Err(Error::Mismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        let mut window = Vec::with_capacity(self.vars.len());
        for (v, (a, b)) in self.vars.iter().zip(self.window.iter().zip(&other.window)) {
            let mut upper: Option<ScaledExponent> = None;
            for (trunc, partner) in [(a, b), (b, a)] {
                if let Some(hi) = trunc.upper {
                    let lo = partner.lower.ok_or_else(|| {
                        Error::Precision(format!(
                            "empty product window in {v}: a truncated factor meets a factor unbounded below"
                        ))
                    })?;
                    upper = min_opt_upper(upper, Some(hi + lo));
                }
            }
            let lower = match (a.lower, b.lower) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            };
            window.push(Bounds::new(lower, upper));
        }
        let mut out = FormalSeries { vars: self.vars.clone(), terms: BTreeMap::new(), window };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| *x + *y).collect();
                if out.certifies(&e) {
                    out.add_term(e, &cb.scaled(ca));
                }
            }
        }
        Ok(out)
    }
}

/// `(first + second)^l` expanded in nonnegative integral powers of `second`,
/// keeping powers `second^0 .. second^max_order`.
pub fn binomial_expand(
    vars: &[Var],
    l: ScaledExponent,
    first: Var,
    second: Var,
    max_order: u64,
) -> Result<FormalSeries<Rational>> {
    let fi = vars.iter().position(|v| *v == first).ok_or_else(|| Error::Mismatch(format!("no {first}")))?;
    let si = vars.iter().position(|v| *v == second).ok_or_else(|| Error::Mismatch(format!("no {second}")))?;
    let top = l.to_rational();
    let finite = is_nonneg_integer(&top) && (l.numerator() as u64) <= max_order;
    let order = if finite { l.numerator() as u64 } else { max_order };
    let mut window = vec![Bounds::EXACT; vars.len()];
    for (i, w) in window.iter_mut().enumerate() {
        if i != fi && i != si {
            w.lower = Some(ScaledExponent::zero());
        }
    }
    window[si].lower = Some(ScaledExponent::zero());
    if finite {
        window[fi].lower = Some(ScaledExponent::zero());
    } else {
        window[si].upper = Some(ScaledExponent::int(max_order as i64));
    }
    let terms = (0..=order).filter_map(|i| {
        let c = binomial(&top, i);
        if c.vanishes() {
            return None;
        }
        let mut e = vec![ScaledExponent::zero(); vars.len()];
        e[fi] = l - i as i64;
        e[si] = ScaledExponent::int(i as i64);
        Some((e, c))
    });
    FormalSeries::from_terms(vars, terms, window)
}

/// The finite polynomial `sum_{i=0}^{k-q-1} C(p-l, i) x0^{p-l-i} x2^i` over
/// the variables `[x0, x2]`.
pub fn f_poly(
    p: ScaledExponent,
    l: ScaledExponent,
    k: ScaledExponent,
    q: ScaledExponent,
) -> Result<FormalSeries<Rational>> {
    let shift = (p - l)
        .to_integer()
        .ok_or_else(|| Error::Invalid(format!("p - l = {} is not an integer", p - l)))?;
    let count = (k - q)
        .to_integer()
        .ok_or_else(|| Error::Invalid(format!("k - q = {} is not an integer", k - q)))?;
    let vars = [Var::X0, Var::X2];
    let top = Rational::from_integer(shift.into());
    let n_terms = count.max(0) as u64;
    let window = vec![
        Bounds::new(Some(ScaledExponent::int(shift - n_terms as i64)), None),
        Bounds::new(Some(ScaledExponent::zero()), None),
    ];
    let terms = (0..n_terms).map(|i| {
        (
            vec![ScaledExponent::int(shift - i as i64), ScaledExponent::int(i as i64)],
            binomial(&top, i),
        )
    });
    FormalSeries::from_terms(&vars, terms, window)
}

impl<C: Coefficient + fmt::Display> fmt::Display for FormalSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, x) in self.vars.iter().zip(e) {
                if !x.is_zero() {
                    write!(f, "*{v}^{x}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{q, q2};

    fn se(n: i64) -> ScaledExponent {
        ScaledExponent::int(n)
    }

    const V: [Var; 2] = [Var::X0, Var::X2];

    fn mono(a: i64, b: i64, c: Rational) -> FormalSeries {
        FormalSeries::monomial(&V, vec![se(a), se(b)], c)
    }

    /// Dense coefficient table used as an oracle for term merging.
    fn table(s: &FormalSeries) -> BTreeMap<(ScaledExponent, ScaledExponent), Rational> {
        s.terms().map(|(e, c)| ((e[0], e[1]), c.clone())).collect()
    }

    #[test]
    fn add_identity_inverse_and_merge() {
        let a = mono(1, 0, q(1)).add(&mono(0, 1, q(1))).unwrap();
        assert_eq!(a.add(&FormalSeries::zero(&V)).unwrap().terms, a.terms);
        assert!(a.add(&a.neg()).unwrap().is_empty());
        let b = mono(1, 0, q(1)).add(&mono(0, 1, q(-1))).unwrap();
        let sum = a.add(&b).unwrap();
        let mut expected = BTreeMap::new();
        expected.insert((se(1), se(0)), q(2));
        assert_eq!(table(&sum), expected);
    }

    #[test]
    fn mismatched_variables() {
        let a = FormalSeries::<Rational>::zero(&[Var::X]);
        let b = FormalSeries::<Rational>::zero(&[Var::Y]);
        assert!(matches!(a.add(&b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn fractional_exponents_add() {
        let vx = [Var::X];
        let h = FormalSeries::monomial(&vx, vec![ScaledExponent::new(1, 2)], q(1));
        let sq = h.mul(&h).unwrap();
        assert_eq!(sq.coefficient(&[se(1)]).unwrap(), Some(&q(1)));
        assert_eq!(sq.len(), 1);
    }

    #[test]
    fn truncated_inverse_product() {
        // (1+x)^2 * (1+x)^-1 truncated at x^4 must equal 1 + x up to x^4.
        let vx = [Var::X0, Var::X];
        let sq = binomial_expand(&vx, se(2), Var::X0, Var::X, 10).unwrap();
        let inv = binomial_expand(&vx, se(-1), Var::X0, Var::X, 4).unwrap();
        let prod = sq.mul(&inv).unwrap();
        // brute-force convolution oracle on the x-direction coefficients
        let inv_c = |i: i64| if (0..=4).contains(&i) { q(if i % 2 == 0 { 1 } else { -1 }) } else { q(0) };
        let sq_c = |i: i64| match i { 0 => q(1), 1 => q(2), 2 => q(1), _ => q(0) };
        for n in 0..=4 {
            let conv: Rational = (0..=n).map(|i| sq_c(i) * inv_c(n - i)).sum();
            let got = prod.coefficient(&[se(1 - n), se(n)]).unwrap().cloned().unwrap_or_else(|| q(0));
            assert_eq!(got, conv);
        }
        assert_eq!(prod.coefficient(&[se(1), se(0)]).unwrap(), Some(&q(1)));
        assert_eq!(prod.coefficient(&[se(0), se(1)]).unwrap(), Some(&q(1)));
        assert!(prod.coefficient(&[se(-4), se(5)]).is_err());
    }

    #[test]
    fn residues() {
        let vx = [Var::X];
        let inv = FormalSeries::monomial(&vx, vec![se(-1)], q(1));
        assert_eq!(inv.residue(Var::X).unwrap().coefficient(&[]).unwrap(), Some(&q(1)));
        let s = FormalSeries::monomial(&vx, vec![se(2)], q(1))
            .add(&FormalSeries::monomial(&vx, vec![se(0)], q(3)))
            .unwrap();
        assert!(s.residue(Var::X).unwrap().is_empty());
        let t = mono(-1, 1, q(1)).add(&mono(-2, 0, q(5))).unwrap();
        let r = t.residue(Var::X0).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.coefficient(&[se(1)]).unwrap(), Some(&q(1)));
    }

    #[test]
    fn residue_outside_window_is_error() {
        let s = binomial_expand(&V, se(-1), Var::X2, Var::X0, 3).unwrap();
        assert!(s.residue(Var::X0).unwrap().is_empty());
        let shifted = s.shift(&[se(-5), se(0)]);
        assert!(shifted.residue(Var::X0).is_err());
    }

    #[test]
    fn binomial_expansion_cases() {
        let one = binomial_expand(&V, se(1), Var::X0, Var::X2, 5).unwrap();
        assert_eq!(table(&one), table(&mono(1, 0, q(1)).add(&mono(0, 1, q(1))).unwrap()));
        assert!(one.window().iter().all(|b| b.upper.is_none()));
        let zero = binomial_expand(&V, se(0), Var::X0, Var::X2, 5).unwrap();
        assert_eq!(table(&zero), table(&mono(0, 0, q(1))));
        let geo = binomial_expand(&V, se(-1), Var::X0, Var::X2, 2).unwrap();
        let expect = mono(-1, 0, q(1)).add(&mono(-2, 1, q(-1))).unwrap().add(&mono(-3, 2, q(1))).unwrap();
        assert_eq!(table(&geo), table(&expect));
    }

    #[test]
    fn f_poly_cases() {
        assert!(f_poly(se(3), se(1), se(2), se(2)).unwrap().is_empty());
        assert!(f_poly(se(3), se(1), se(2), se(5)).unwrap().is_empty());
        let single = f_poly(se(3), se(1), se(2), se(1)).unwrap();
        assert_eq!(table(&single), table(&mono(2, 0, q(1))));
        let three = f_poly(se(-1), se(1), se(3), se(0)).unwrap();
        let expect = mono(-2, 0, q(1)).add(&mono(-3, 1, q(-2))).unwrap().add(&mono(-4, 2, q(3))).unwrap();
        assert_eq!(table(&three), table(&expect));
        assert!(f_poly(ScaledExponent::new(1, 2), se(0), se(1), se(0)).is_err());
    }

    #[test]
    fn f_poly_is_truncated_binomial() {
        for pl in -3..4 {
            for kq in 0..5u64 {
                let f = f_poly(se(pl), se(0), se(kq as i64), se(0)).unwrap();
                let full = binomial_expand(&V, se(pl), Var::X0, Var::X2, 8).unwrap();
                let trunc: BTreeMap<_, _> = table(&full)
                    .into_iter()
                    .filter(|((_, b), _)| b.numerator() < kq as i64)
                    .collect();
                assert_eq!(table(&f), trunc);
            }
        }
    }

    #[test]
    fn rational_exponent_binomial() {
        let s = binomial_expand(&V, ScaledExponent::new(-1, 2), Var::X0, Var::X2, 2).unwrap();
        assert_eq!(
            s.coefficient(&[ScaledExponent::new(-5, 2), se(2)]).unwrap(),
            Some(&q2(3, 8))
        );
    }
}
