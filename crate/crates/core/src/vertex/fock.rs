//! Independent mode-algebra model of the rank one free boson.
//!
//! States are monomials `a(-k_1)...a(-k_r)|0>` stored as descending part
//! lists (numerators over the grading scale). The only inputs are the
//! commutator `[a(m), a(j)] = m delta(m+j, 0)` and the zero-mode eigenvalue.
//! Vertex operator modes of general states are obtained from the
//! Borcherds identity with `u = a(-n)v`:
//!
//! `(a_{-n} v)_t w = sum_i C(n+i-1, i) a_{m-n-i} (v_{t-m+i} w)
//!                   - sum_{i>=1} C(m, i) (a_{-n+i} v)_{t-i} w`
//!
//! where `m` is the least admissible mode above the degree of `w`, so that
//! `a_{m+i} w = 0` for every `i >= 0`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::exact::{binomial, q, Rational, ScaledExponent};

/// Descending list of parts, each a positive numerator over the scale.
pub type Monomial = Vec<i64>;
pub type State = BTreeMap<Monomial, Rational>;

fn add_to(state: &mut State, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = state.entry(m.clone()).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        state.remove(&m);
    }
}

fn insert_part(m: &Monomial, part: i64) -> Monomial {
    let mut out = m.clone();
    let pos = out.iter().position(|p| *p < part).unwrap_or(out.len());
    out.insert(pos, part);
    out
}

/// Partitions of `total` into parts from `allowed`, each listed descending.
pub fn partitions(total: i64, allowed: &dyn Fn(i64) -> bool) -> Vec<Monomial> {
    fn go(rest: i64, max: i64, allowed: &dyn Fn(i64) -> bool, acc: &mut Monomial, out: &mut Vec<Monomial>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            if allowed(p) {
                acc.push(p);
                go(rest - p, p, allowed, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        go(total, total, allowed, &mut Vec::new(), &mut out);
    }
    out
}

/// Heisenberg generator `a(k)` on the vertex algebra itself (zero mode
/// acts by zero).
fn algebra_alpha(k: i64, m: &Monomial) -> State {
    let mut out = State::new();
    match k.cmp(&0) {
        std::cmp::Ordering::Less => add_to(&mut out, insert_part(m, -k), Rational::one()),
        std::cmp::Ordering::Equal => {}
        std::cmp::Ordering::Greater => {
            let count = m.iter().filter(|p| **p == k).count() as i64;
            if count > 0 {
                let mut rest = m.clone();
                let pos = rest.iter().position(|p| *p == k).unwrap();
                rest.remove(pos);
                add_to(&mut out, rest, q(k * count));
            }
        }
    }
    out
}

/// A Fock module: untwisted with zero-mode eigenvalue `lambda` (scale 1),
/// or twisted by `a -> -a` with half-integral modes (scale 2).
#[derive(Clone, Debug)]
pub struct FockModel {
    twisted: bool,
    lambda: Rational,
    memo: HashMap<(Monomial, ScaledExponent, Monomial), State>,
}

impl FockModel {
    pub fn untwisted(lambda: Rational) -> Self {
        FockModel { twisted: false, lambda, memo: HashMap::new() }
    }

    pub fn twisted() -> Self {
        FockModel { twisted: true, lambda: Rational::zero(), memo: HashMap::new() }
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn scale(&self) -> i64 {
        if self.twisted {
            2
        } else {
            1
        }
    }

    pub fn degree(&self, m: &Monomial) -> ScaledExponent {
        ScaledExponent::new(m.iter().sum(), self.scale())
    }

    /// Basis monomials of the given degree.
    pub fn basis_at(&self, d: ScaledExponent) -> Vec<Monomial> {
        let t = self.scale();
        if (d.numerator() * t) % d.scale() != 0 {
            return Vec::new();
        }
        let total = d.numerator() * t / d.scale();
        if self.twisted {
            partitions(total, &|p| p % 2 == 1)
        } else {
            partitions(total, &|_| true)
        }
    }

    /// True when `a` has modes in `k + Z` on this module.
    fn alpha_coset(&self, k: ScaledExponent) -> bool {
        if self.twisted {
            !k.is_integer() && (k * 2).is_integer()
        } else {
            k.is_integer()
        }
    }

    /// `a(k)` on a module monomial.
    pub fn alpha(&self, k: ScaledExponent, m: &Monomial) -> State {
        let mut out = State::new();
        if !self.alpha_coset(k) {
            return out;
        }
        let units = k.numerator() * self.scale() / k.scale();
        match units.cmp(&0) {
            std::cmp::Ordering::Less => add_to(&mut out, insert_part(m, -units), Rational::one()),
            std::cmp::Ordering::Equal => add_to(&mut out, m.clone(), self.lambda.clone()),
            std::cmp::Ordering::Greater => {
                let count = m.iter().filter(|p| **p == units).count() as i64;
                if count > 0 {
                    let mut rest = m.clone();
                    let pos = rest.iter().position(|p| *p == units).unwrap();
                    rest.remove(pos);
                    add_to(&mut out, rest, k.to_rational() * q(count));
                }
            }
        }
        out
    }

    fn alpha_state(&self, k: ScaledExponent, s: &State) -> State {
        let mut out = State::new();
        for (m, c) in s {
            for (m2, c2) in self.alpha(k, m) {
                add_to(&mut out, m2, c * c2);
            }
        }
        out
    }

    /// Least mode of `a` strictly above `e`.
    fn least_alpha_mode_above(&self, e: ScaledExponent) -> ScaledExponent {
        let offset = if self.twisted { ScaledExponent::new(1, 2) } else { ScaledExponent::zero() };
        offset.least_in_coset_above(e)
    }

    /// `u_t w` for a vertex algebra monomial `u` (integer parts) acting on a
    /// module monomial `w`.
    pub fn mode(&mut self, u: &Monomial, t: ScaledExponent, w: &Monomial) -> State {
        let parity_twist = self.twisted && u.len() % 2 == 1;
        let t_ok = if parity_twist { !t.is_integer() && (t * 2).is_integer() } else { t.is_integer() };
        if !t_ok {
            return State::new();
        }
        let wt_u: i64 = u.iter().sum();
        let e = self.degree(w);
        if e + wt_u - t - 1 < ScaledExponent::zero() {
            return State::new();
        }
        let key = (u.clone(), t, w.clone());
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let result = self.compute_mode(u, t, w);
        self.memo.insert(key, result.clone());
        result
    }

    fn compute_mode(&mut self, u: &Monomial, t: ScaledExponent, w: &Monomial) -> State {
        let mut out = State::new();
        let Some((&n, v)) = u.split_first() else {
            if t == ScaledExponent::int(-1) {
                add_to(&mut out, w.clone(), Rational::one());
            }
            return out;
        };
        let v: Monomial = v.to_vec();
        let wt_v: i64 = v.iter().sum();
        let e = self.degree(w);
        let m = self.least_alpha_mode_above(e);
        // first sum: v_s w vanishes once s > e + wt v - 1
        let top = e + wt_v - 1 - t + m;
        let mut i = 0i64;
        while ScaledExponent::int(i) <= top {
            let inner = self.mode(&v, t - m + i, w);
            if !inner.is_empty() {
                let c = binomial(&q(n + i - 1), i as u64);
                let shifted = self.alpha_state(m - n - i, &inner);
                for (mono, x) in shifted {
                    add_to(&mut out, mono, &c * x);
                }
            }
            i += 1;
        }
        // second sum: a_{-n+i} v vanishes once i - n > wt v
        let m_rat = m.to_rational();
        for i in 1..=(n + wt_v) {
            let c = binomial(&m_rat, i as u64);
            if c.is_zero() {
                continue;
            }
            let lowered = algebra_alpha(i - n, &v);
            for (vm, vc) in lowered {
                let term = self.mode(&vm, t - i, w);
                for (mono, x) in term {
                    add_to(&mut out, mono, -(&c * &vc * x));
                }
            }
        }
        out
    }
}

/// Display label of a monomial: `a(-2)a(-1)` followed by `tail`.
pub fn monomial_label(m: &Monomial, scale: i64, tail: &str) -> String {
    let mut s = String::new();
    for p in m {
        s.push_str(&format!("a({})", ScaledExponent::new(-p, scale)));
    }
    if s.is_empty() || !tail.is_empty() && tail != "1" {
        s.push_str(tail);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn se(n: i64) -> ScaledExponent {
        ScaledExponent::int(n)
    }

    fn single(m: Monomial, c: i64) -> State {
        let mut s = State::new();
        add_to(&mut s, m, q(c));
        s
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|d| partitions(d, &|_| true).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        let odd: Vec<usize> = (0..6).map(|d| partitions(d, &|p| p % 2 == 1).len()).collect();
        assert_eq!(odd, vec![1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn heisenberg_pairing() {
        let mut v = FockModel::untwisted(q(0));
        let a = vec![1];
        assert!(v.mode(&a, se(0), &a).is_empty());
        assert_eq!(v.mode(&a, se(1), &a), single(vec![], 1));
        assert_eq!(v.mode(&a, se(-1), &a), single(vec![1, 1], 1));
    }

    #[test]
    fn derivative_field_modes() {
        // a(-2)1 = L(-1)a, so its t-mode is -t a(t-1)
        let mut v = FockModel::untwisted(q(0));
        for t in -3..3 {
            let w = vec![2, 1];
            let lhs = v.mode(&vec![2], se(t), &w);
            let mut rhs = State::new();
            for (m, c) in v.alpha(se(t - 1), &w) {
                add_to(&mut rhs, m, c * q(-t));
            }
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn zero_mode_on_lambda_vacuum() {
        let mut w = FockModel::untwisted(q(3));
        assert_eq!(w.mode(&vec![1], se(0), &vec![]), single(vec![], 3));
    }

    #[test]
    fn twisted_virasoro_lowest_weight() {
        // omega = 1/2 a(-1)^2 1 has L(0) = 1/16 on the twisted vacuum
        let mut w = FockModel::twisted();
        let l0 = w.mode(&vec![1, 1], se(1), &vec![]);
        let mut expect = State::new();
        add_to(&mut expect, vec![], crate::exact::q2(1, 8));
        assert_eq!(l0, expect);
    }
}
