use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{binomial_i, Rational, ScaledExponent};
use crate::linear::{quotient, span_close, GradedSpace, Quotient, Subspace, Vector};
use crate::residue::Tally;
use crate::vertex::{binom_se, delta, Automorphism, TruncatedVertexAlgebra};

type SE = ScaledExponent;

/// Which of the two families of associative algebras is meant.
#[derive(Clone, Debug, PartialEq)]
pub enum ZhuKind {
    Level(i64),
    Twisted(Automorphism),
}

impl ZhuKind {
    pub fn describe(&self) -> String {
        match self {
            ZhuKind::Level(n) => format!("level {n}"),
            ZhuKind::Twisted(g) if g.is_identity() => "twisted (identity)".into(),
            ZhuKind::Twisted(g) => format!("twisted (order {})", g.order()),
        }
    }
}

/// `Res_x (1+x)^alpha Y(u,x) v / x^s = sum_j C(alpha, j) u_{j-s} v`.
pub fn residue_element(alg: &TruncatedVertexAlgebra, u: usize, v: usize, alpha: SE, s: i64) -> Result<Vector> {
    let stop = alg.weight(u) + alg.weight(v);
    let mut out = Vector::zero();
    let mut j = 0i64;
    while j - s < stop {
        let c = binom_se(alpha, j);
        if !c.is_zero() {
            out.add_scaled(&alg.mode(u, j - s, v)?, &c);
        }
        j += 1;
    }
    Ok(out)
}

/// Exponent and pole order of the defining element of `O_g(V)` for `u`,
/// shifted by `k` and `m` as in the extended family.
fn twisted_shape(alg: &TruncatedVertexAlgebra, g: &Automorphism, u: usize, m: i64, k: i64) -> (SE, i64) {
    let r = g.label(u);
    let alpha = SE::int(alg.weight(u) - 1 + delta(r) + k) + SE::new(r, g.order());
    (alpha, m + delta(r) + 1)
}

/// Highest weight any term of the element can reach.
fn top_weight(alg: &TruncatedVertexAlgebra, u: usize, v: usize, s: i64) -> i64 {
    alg.weight(u) + alg.weight(v) + s - 1
}

fn max_weight(alg: &TruncatedVertexAlgebra, x: &Vector) -> Option<i64> {
    x.indices().map(|i| alg.weight(i)).max()
}

/// Generators of `O_n(V)` over basis pairs whose nonzero terms all have
/// weight at most `cap`. Pairs whose top term lies above the algebra
/// cutoff are left out. For `n >= 1` the family `(L(-1)+L(0))u` is added:
/// every residue generator has weight at least `n+1`, so without it the
/// vacuum would not be a unit of the quotient. For `n = 0` these elements
/// are already the generators with `v` the vacuum.
pub fn o_n_generators(alg: &TruncatedVertexAlgebra, n: i64, cap: i64) -> Result<Vec<Vector>> {
    check_cap(alg, cap)?;
    let mut out = pair_elements(alg, cap, |u, v| {
        let s = 2 * n + 2;
        Ok((top_weight(alg, u, v, s), SE::int(alg.weight(u) + n), s))
    })?;
    if n >= 1 {
        out.extend(translation_elements(alg, cap)?);
    }
    Ok(out)
}

/// `(L(-1)+L(0))u = u_{-2}1 + (wt u) u` for basis `u` of weight below `cap`.
pub fn translation_elements(alg: &TruncatedVertexAlgebra, cap: i64) -> Result<Vec<Vector>> {
    let vac = alg.vacuum().clone();
    let mut out = Vec::new();
    for u in alg.basis_upto(cap - 1) {
        let mut x = alg.mode_vec(&Vector::unit(u), -2, &vac)?;
        x.add_at(u, &Rational::from_integer(alg.weight(u).into()));
        if !x.is_zero() {
            out.push(x);
        }
    }
    Ok(out)
}

/// Generators of `O_g(V)` for `u` in an eigenspace of `g`.
pub fn o_g_generators(alg: &TruncatedVertexAlgebra, g: &Automorphism, cap: i64) -> Result<Vec<Vector>> {
    check_cap(alg, cap)?;
    pair_elements(alg, cap, |u, v| {
        let (alpha, s) = twisted_shape(alg, g, u, 0, 0);
        Ok((top_weight(alg, u, v, s), alpha, s))
    })
}

fn check_cap(alg: &TruncatedVertexAlgebra, cap: i64) -> Result<()> {
    if cap < 0 || cap > alg.cutoff() {
        return Err(Error::Invalid(format!("weight cap {cap} must lie in 0..={}", alg.cutoff())));
    }
    Ok(())
}

fn pair_elements(
    alg: &TruncatedVertexAlgebra,
    cap: i64,
    shape: impl Fn(usize, usize) -> Result<(i64, SE, i64)>,
) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for u in alg.basis_upto(cap) {
        for v in alg.basis_upto(cap) {
            let (top, alpha, s) = shape(u, v)?;
            if top > alg.cutoff() {
                continue;
            }
            let x = residue_element(alg, u, v, alpha, s)?;
            if !x.is_zero() && max_weight(alg, &x).unwrap() <= cap {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// `Res_x (1+x)^{wt u+n+k} Y(u,x) v / x^{m+2n+2}`.
pub fn extended_element_n(alg: &TruncatedVertexAlgebra, n: i64, u: usize, v: usize, m: i64, k: i64) -> Result<Vector> {
    residue_element(alg, u, v, SE::int(alg.weight(u) + n + k), m + 2 * n + 2)
}

/// `Res_x (1+x)^{wt u-1+delta_r+r/T+k} Y(u,x) v / x^{m+delta_r+1}`.
pub fn extended_element_g(alg: &TruncatedVertexAlgebra, g: &Automorphism, u: usize, v: usize, m: i64, k: i64) -> Result<Vector> {
    let (alpha, s) = twisted_shape(alg, g, u, m, k);
    residue_element(alg, u, v, alpha, s)
}

/// Extended elements for `u, v` up to `weight` and `max_m >= m >= k >= 0`
/// that lie under the cap, each tested for membership in the relation
/// span. Elements reaching above the cap are counted as skipped.
pub fn membership_sweep(z: &ZhuQuotient, weight: i64, max_m: i64) -> Result<Tally> {
    let alg = z.algebra();
    let mut tally = Tally::default();
    for u in alg.basis_upto(weight) {
        for v in alg.basis_upto(weight) {
            for m in 0..=max_m {
                for k in 0..=m {
                    let x = match z.kind() {
                        ZhuKind::Level(n) => extended_element_n(alg, *n, u, v, m, k),
                        ZhuKind::Twisted(g) => extended_element_g(alg, g, u, v, m, k),
                    };
                    let x = match x {
                        Ok(x) if z.within_cap(&x) => x,
                        Ok(_) => {
                            tally.skipped += 1;
                            continue;
                        }
                        Err(e) if e.is_precision() => {
                            tally.skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let class = z.project(&x).map(|c| (c, Vector::zero()));
                    tally.record(|| format!("u={} v={} m={m} k={k}", alg.label(u), alg.label(v)), class, false)?;
                }
            }
        }
    }
    Ok(tally)
}

/// `u *_n v` on basis elements.
pub fn mult_n(alg: &TruncatedVertexAlgebra, n: i64, u: usize, v: usize) -> Result<Vector> {
    let alpha = SE::int(alg.weight(u) + n);
    let mut out = Vector::zero();
    for m in 0..=n {
        let c = binomial_i(m + n, n as u64) * crate::exact::sign(m);
        out.add_scaled(&residue_element(alg, u, v, alpha, n + m + 1)?, &c);
    }
    Ok(out)
}

/// `u *_g v` on basis elements: zero off the fixed-point subalgebra.
pub fn mult_g(alg: &TruncatedVertexAlgebra, g: &Automorphism, u: usize, v: usize) -> Result<Vector> {
    if g.label(u) != 0 {
        return Ok(Vector::zero());
    }
    residue_element(alg, u, v, SE::int(alg.weight(u)), 1)
}

/// The weight-filtered truncation `(V_{<=cap} + O)/O` of a Zhu algebra,
/// with the product on quotient representatives.
#[derive(Clone, Debug)]
pub struct ZhuQuotient {
    kind: ZhuKind,
    algebra: Arc<TruncatedVertexAlgebra>,
    cap: i64,
    generators: Vec<Vector>,
    quotient: Quotient,
    /// `mult_table[i][j]` is the class of `rep_i * rep_j`, when that product
    /// stays inside the cap.
    mult_table: Vec<Vec<Option<Vector>>>,
}

/// `V_{<=cap}` as a graded space of its own; its indices agree with the
/// algebra's because the basis is ordered by weight.
fn capped_space(alg: &TruncatedVertexAlgebra, cap: i64) -> Result<Arc<GradedSpace>> {
    let comps = alg
        .basis_upto(cap)
        .map(|i| (SE::int(alg.weight(i)), vec![alg.label(i).to_string()]))
        .collect();
    Ok(Arc::new(GradedSpace::new(1, comps)?))
}

impl ZhuQuotient {
    /// Builds the quotient of `V_{<=cap}` by `O cap V_{<=cap}`, where `O` is
    /// spanned by every generator computable under the algebra cutoff.
    /// Cancellation among generators whose terms exceed the cap is what
    /// brings elements such as `(L(-1)+L(0))u` into the relations.
    pub fn build(alg: Arc<TruncatedVertexAlgebra>, kind: ZhuKind, cap: i64) -> Result<Self> {
        check_cap(&alg, cap)?;
        let window = alg.cutoff();
        let generators = match &kind {
            ZhuKind::Level(n) if *n < 0 => return Err(Error::Invalid(format!("level {n} is negative"))),
            ZhuKind::Level(n) => o_n_generators(&alg, *n, window)?,
            ZhuKind::Twisted(g) => o_g_generators(&alg, g, window)?,
        };
        let full = span_close(&capped_space(&alg, window)?, generators.iter().cloned())?;
        let ambient = capped_space(&alg, cap)?;
        let size = ambient.dim();
        let in_cap = full.echelon().rows().filter(|(p, _)| *p < size).map(|(_, r)| r.clone());
        let sub = span_close(&ambient, in_cap)?;
        let quotient = quotient(&ambient, &sub)?;
        let mut z = ZhuQuotient { kind, algebra: alg, cap, generators, quotient, mult_table: Vec::new() };
        let dim = z.quotient.dim();
        let mut table = vec![vec![None; dim]; dim];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let (a, b) = (z.quotient.representative(i), z.quotient.representative(j));
                *slot = z.product_class(&Vector::unit(a), &Vector::unit(b))?;
            }
        }
        z.mult_table = table;
        Ok(z)
    }

    pub fn kind(&self) -> &ZhuKind {
        &self.kind
    }

    pub fn algebra(&self) -> &Arc<TruncatedVertexAlgebra> {
        &self.algebra
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn relations(&self) -> &Subspace {
        self.quotient.subspace()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn mult_table(&self) -> &[Vec<Option<Vector>>] {
        &self.mult_table
    }

    pub fn unit(&self) -> Vector {
        self.quotient.project(self.algebra.vacuum())
    }

    /// Basis-level product of the chosen kind.
    pub fn mult(&self, u: usize, v: usize) -> Result<Vector> {
        match &self.kind {
            ZhuKind::Level(n) => mult_n(&self.algebra, *n, u, v),
            ZhuKind::Twisted(g) => mult_g(&self.algebra, g, u, v),
        }
    }

    pub fn mult_vec(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&self.mult(i, j)?, &(x * y));
            }
        }
        Ok(out)
    }

    /// True when every component of `x` has weight at most the cap.
    pub fn within_cap(&self, x: &Vector) -> bool {
        max_weight(&self.algebra, x).is_none_or(|w| w <= self.cap)
    }

    /// Class of `a * b`, or `None` when the product leaves the cap or needs
    /// weights above the algebra cutoff.
    pub fn product_class(&self, a: &Vector, b: &Vector) -> Result<Option<Vector>> {
        match self.mult_vec(a, b) {
            Ok(p) if self.within_cap(&p) => Ok(Some(self.quotient.project(&p))),
            Ok(_) => Ok(None),
            Err(e) if e.is_precision() => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Class of `x`, which must lie inside the cap.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        if !self.within_cap(x) {
            return Err(Error::Precision(format!("vector has weight above the cap {}", self.cap)));
        }
        Ok(self.quotient.project(x))
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.project(x)?.is_zero())
    }

    /// Dimension of the image of `V_{<=w}` for `w = 0..=cap`.
    pub fn filtered_dims(&self) -> Vec<usize> {
        let space = self.quotient.ambient();
        (0..=self.cap)
            .map(|w| {
                let w = SE::int(w);
                space.dim_upto(w) - self.relations().rank_upto(w)
            })
            .collect()
    }

    /// Indices into the quotient basis with representative weight `<= w`.
    pub fn basis_upto(&self, w: i64) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.algebra.weight(self.quotient.representative(*i)) <= w).collect()
    }

    /// Structural checks: generators project to zero, the product is well
    /// defined on generator perturbations, unital, and associative on
    /// in-cap triples. Each claimed element of `O` is tested in `referee`
    /// (a quotient of the same kind at a larger cap, or `self`), since
    /// near the cap the generators needed to absorb it may lie above the
    /// cap. Returns the list of failures.
    pub fn verify(&self, referee: Option<&ZhuQuotient>) -> Result<Vec<String>> {
        let judge = referee.unwrap_or(self);
        let lies_in_o = |x: &Vector| -> bool { !judge.within_cap(x) || judge.quotient.project(x).is_zero() };
        let mut failures = Vec::new();
        for (k, g) in self.generators.iter().enumerate() {
            if self.within_cap(g) && !self.quotient.project(g).is_zero() {
                failures.push(format!("generator {k} survives the projection"));
            }
        }
        let reps: Vec<Vector> = (0..self.dim()).map(|i| Vector::unit(self.quotient.representative(i))).collect();
        for (k, g) in self.generators.iter().enumerate().filter(|(_, g)| self.within_cap(g)) {
            for (i, b) in reps.iter().enumerate() {
                for (side, p) in [("left", self.try_mult(g, b)?), ("right", self.try_mult(b, g)?)] {
                    if p.is_some_and(|p| !lies_in_o(&p)) {
                        failures.push(format!("generator {k} times basis {i} on the {side} is not in O"));
                    }
                }
            }
        }
        let unit = self.algebra.vacuum().clone();
        for (i, b) in reps.iter().enumerate() {
            for p in [self.try_mult(&unit, b)?, self.try_mult(b, &unit)?].into_iter().flatten() {
                if !lies_in_o(&p.sub(b)) {
                    failures.push(format!("vacuum is not a unit on basis {i}"));
                }
            }
        }
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let Some(ab) = self.try_mult(a, b)?.filter(|x| self.within_cap(x)) else { continue };
                for (k, c) in reps.iter().enumerate() {
                    let Some(bc) = self.try_mult(b, c)?.filter(|x| self.within_cap(x)) else { continue };
                    let (Some(l), Some(r)) = (self.try_mult(&ab, c)?, self.try_mult(a, &bc)?) else { continue };
                    if !lies_in_o(&l.sub(&r)) {
                        failures.push(format!("product not associative on basis ({i}, {j}, {k})"));
                    }
                }
            }
        }
        if let ZhuKind::Twisted(g) = &self.kind {
            for u in self.algebra.basis_upto(self.cap) {
                if g.label(u) != 0 && !self.quotient.project(&Vector::unit(u)).is_zero() {
                    failures.push(format!("{} lies off the fixed points but survives", self.algebra.label(u)));
                }
            }
        }
        Ok(failures)
    }

    /// `a * b` in `V`, or `None` when it needs weights above the cutoff.
    fn try_mult(&self, a: &Vector, b: &Vector) -> Result<Option<Vector>> {
        match self.mult_vec(a, b) {
            Ok(p) => Ok(Some(p)),
            Err(e) if e.is_precision() => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Product of two classes through the table; `None` if any needed entry
    /// is missing.
    pub fn table_product(&self, a: &Vector, b: &Vector) -> Option<Vector> {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(self.mult_table[i][j].as_ref()?, &(x * y));
            }
        }
        Some(out)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.mult_table[i][j] == self.mult_table[j][i]))
    }

    /// Largest weight through which the filtered dimensions agree with
    /// those at a larger cap.
    pub fn stable_through(&self, larger: &ZhuQuotient) -> Option<i64> {
        let (a, b) = (self.filtered_dims(), larger.filtered_dims());
        let agree = a.iter().zip(&b).take_while(|(x, y)| x == y).count() as i64;
        (agree > 0).then_some(agree - 1)
    }
}

/// Independent computation of the filtered dimensions: generator rows are
/// rebuilt with a multiplicative binomial recurrence and ranked densely;
/// `dim(O cap V_{<=w}) = rank(O) - rank(O projected to weights above w)`.
pub fn span_oracle_dims(alg: &TruncatedVertexAlgebra, kind: &ZhuKind, cap: i64) -> Result<Vec<usize>> {
    check_cap(alg, cap)?;
    let mut rows = Vec::new();
    for u in 0..alg.dim() {
        for v in 0..alg.dim() {
            let (alpha, s) = match kind {
                ZhuKind::Level(n) => (SE::int(alg.weight(u) + n), 2 * n + 2),
                ZhuKind::Twisted(g) => twisted_shape(alg, g, u, 0, 0),
            };
            if top_weight(alg, u, v, s) > alg.cutoff() {
                continue;
            }
            let mut row = vec![Rational::zero(); alg.dim()];
            let mut c = Rational::from_integer(1.into());
            let a = alpha.to_rational();
            for j in 0..(alg.weight(u) + alg.weight(v) + s) {
                if !c.is_zero() {
                    for (i, x) in alg.mode(u, j - s, v)?.iter() {
                        row[i] += &c * x;
                    }
                }
                c = c * (&a - Rational::from_integer(j.into())) / Rational::from_integer((j + 1).into());
            }
            if !row.iter().all(Zero::is_zero) {
                rows.push(row);
            }
        }
    }
    if matches!(kind, ZhuKind::Level(n) if *n >= 1) {
        for u in alg.basis_upto(alg.cutoff() - 1) {
            let mut row = vec![Rational::zero(); alg.dim()];
            let lu = match alg.conformal() {
                Some(_) => alg.l_minus_one(&Vector::unit(u))?,
                None => alg.mode_vec(&Vector::unit(u), -2, alg.vacuum())?,
            };
            for (i, x) in lu.iter() {
                row[i] += x;
            }
            row[u] += Rational::from_integer(alg.weight(u).into());
            rows.push(row);
        }
    }
    let total = dense_rank(rows.clone());
    let mut dims = Vec::new();
    for w in 0..=cap {
        let lo = alg.basis_upto(w).len();
        let upper: Vec<Vec<Rational>> = rows.iter().map(|r| r[lo..].to_vec()).collect();
        let r_upper = dense_rank(upper);
        dims.push(lo - (total - r_upper));
    }
    Ok(dims)
}

/// Gaussian elimination on dense rows, pivoting left to right.
fn dense_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|r| !rows[*r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot;
            for j in c..cols {
                let d = &f * &rows[rank][j];
                rows[r][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}
