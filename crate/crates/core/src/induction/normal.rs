use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::ScaledExponent;
use crate::linear::{GradedSpace, Vector};
use crate::vertex::{binom_se, TruncatedVertexAlgebra};
use crate::zhu::{AModule, ZhuKind};

type SE = ScaledExponent;

/// A word `u_1(m_1) ... u_k(m_k) w` in the tensor algebra acting on `W`,
/// with the leftmost mode first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorWord {
    pub modes: Vec<(usize, SE)>,
    pub base: usize,
}

impl TensorWord {
    pub fn new(modes: Vec<(usize, SE)>, base: usize) -> Self {
        TensorWord { modes, base }
    }
}

/// Basis element of the normal form space: a vector of `W` sitting at the
/// base degree, or a single mode `u(m)w` of some other degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NfEntry {
    Pure(usize),
    Pair { u: usize, m: SE, w: usize },
}

/// The spanning set of single-mode words up to a degree cutoff, restricted
/// to modes of algebra elements of weight at most `frame`, together with the
/// rewriting of arbitrary words into it.
#[derive(Clone, Debug)]
pub struct NormalForms {
    ctx: Arc<AModule>,
    cutoff: SE,
    frame: i64,
    entries: Vec<NfEntry>,
    index: HashMap<NfEntry, usize>,
    space: Arc<GradedSpace>,
}

impl NormalForms {
    pub fn new(ctx: Arc<AModule>, cutoff: SE, frame: i64) -> Result<Self> {
        let alg = ctx.algebra().clone();
        if frame > alg.cutoff() {
            return Err(Error::Invalid(format!("frame weight {frame} exceeds the algebra cutoff {}", alg.cutoff())));
        }
        let scale = match ctx.kind() {
            ZhuKind::Level(_) => 1,
            ZhuKind::Twisted(g) => g.order(),
        };
        let base = ctx.base_degree();
        let mut entries = Vec::new();
        let mut comps = Vec::new();
        let wlabel = |i: usize| format!("w{i}");
        for i in 0..ctx.dim() {
            entries.push(NfEntry::Pure(i));
            comps.push((base, vec![wlabel(i)]));
        }
        for u in alg.basis_upto(frame) {
            let off = Self::offset_in(&ctx, u);
            // degree wt u - m - 1 + base in [0, cutoff]
            let mut m = off.least_in_coset_above(SE::int(alg.weight(u) - 1) + base - cutoff - SE::new(1, scale));
            while SE::int(alg.weight(u) - 1) + base - m >= SE::zero() {
                let d = SE::int(alg.weight(u) - 1) + base - m;
                if d != base {
                    for w in 0..ctx.dim() {
                        entries.push(NfEntry::Pair { u, m, w });
                        comps.push((d, vec![format!("[{}]({}){}", alg.label(u), m, wlabel(w))]));
                    }
                }
                m = m + 1;
            }
        }
        let space = Arc::new(GradedSpace::new(scale, comps.clone())?);
        // the graded space reorders by degree; follow it
        let mut index = HashMap::new();
        let mut ordered = vec![NfEntry::Pure(0); entries.len()];
        for (e, (_, label)) in entries.iter().zip(&comps) {
            let i = space.index_of(&label[0])?;
            ordered[i] = *e;
            index.insert(*e, i);
        }
        Ok(NormalForms { ctx, cutoff, frame, entries: ordered, index, space })
    }

    fn offset_in(ctx: &AModule, u: usize) -> SE {
        match ctx.kind() {
            ZhuKind::Level(_) => SE::zero(),
            ZhuKind::Twisted(g) => SE::new(g.label(u), g.order()),
        }
    }

    pub fn context(&self) -> &Arc<AModule> {
        &self.ctx
    }

    pub fn algebra(&self) -> &Arc<TruncatedVertexAlgebra> {
        self.ctx.algebra()
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn cutoff(&self) -> SE {
        self.cutoff
    }

    pub fn frame(&self) -> i64 {
        self.frame
    }

    pub fn entries(&self) -> &[NfEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> NfEntry {
        self.entries[i]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn base_degree(&self) -> SE {
        self.ctx.base_degree()
    }

    pub fn degree(&self, i: usize) -> SE {
        self.space.degree(i)
    }

    pub fn pure(&self, w: usize) -> usize {
        self.index[&NfEntry::Pure(w)]
    }

    pub fn mode_offset(&self, u: usize) -> SE {
        Self::offset_in(&self.ctx, u)
    }

    pub fn in_coset(&self, u: usize, m: SE) -> bool {
        m.same_coset(&self.mode_offset(u))
    }

    /// `n` at level `n`, zero in the twisted case; the extra term in the
    /// exponents of both relation families.
    fn level(&self) -> i64 {
        match self.ctx.kind() {
            ZhuKind::Level(n) => *n,
            ZhuKind::Twisted(_) => 0,
        }
    }

    fn check_target(&self, t: SE, what: impl FnOnce() -> String) -> Result<bool> {
        if t < SE::zero() {
            return Ok(false);
        }
        if t > self.cutoff {
            return Err(Error::Precision(format!("{} has degree {t} above the cutoff {}", what(), self.cutoff)));
        }
        Ok(true)
    }

    /// `u(p)w` for `w` in `W`: zero below degree zero, `rho(u)w` at the
    /// base degree, otherwise a normal form pair.
    fn on_pure(&self, u: usize, p: SE, w: usize) -> Result<Vector> {
        if !self.in_coset(u, p) {
            return Ok(Vector::zero());
        }
        let alg = self.algebra();
        let base = self.base_degree();
        let t = SE::int(alg.weight(u)) - p - 1 + base;
        if !self.check_target(t, || format!("{}({p})w{w}", alg.label(u)))? {
            return Ok(Vector::zero());
        }
        if t == base {
            let rho = self.ctx.rho(u)?;
            return Ok(Vector::from_entries((0..self.ctx.dim()).map(|i| (self.pure(i), rho.get(i, w).clone()))));
        }
        if alg.weight(u) > self.frame {
            return Err(Error::Precision(format!(
                "{}({p})w{w} needs weight {} beyond the normal form frame {}",
                alg.label(u),
                alg.weight(u),
                self.frame
            )));
        }
        Ok(Vector::unit(self.index[&NfEntry::Pair { u, m: p, w }]))
    }

    /// `y(s)w` for `y` in `V` and `w` in `W`.
    pub fn vec_on_pure(&self, y: &Vector, s: SE, w: usize) -> Result<Vector> {
        let mut out = Vector::zero();
        for (c, x) in y.iter() {
            out.add_scaled(&self.on_pure(c, s, w)?, x);
        }
        Ok(out)
    }

    /// `wt u + deg + delta_r + r/T` for integral `deg`: the least element of
    /// the mode class of `u` strictly above `wt u + deg`. This form stays
    /// in the mode class when `deg` is fractional.
    pub fn twisted_exponent(&self, u: usize, deg: SE) -> SE {
        self.mode_offset(u).least_in_coset_above(SE::int(self.algebra().weight(u)) + deg)
    }

    /// Exponents `(l, k)` of the product relation for `u(p) v(q) w'` where
    /// `w'` has degree `deg_w`.
    fn product_bounds(&self, u: usize, v: usize, deg_w: SE) -> (SE, SE) {
        let alg = self.algebra();
        let n = self.level();
        match self.ctx.kind() {
            ZhuKind::Level(_) => (SE::int(alg.weight(u)) + deg_w + n, SE::int(alg.weight(v)) + deg_w + n),
            ZhuKind::Twisted(_) => (self.twisted_exponent(u, deg_w), SE::int(alg.weight(v)) + deg_w),
        }
    }

    /// The right side of the product relation:
    /// `sum_{i<=k-q-1} sum_j C(p-l,i) C(l,j) (u_{p-l-i+j} v)(q+l+i-j) w'`,
    /// with each single mode applied to `w'` by `apply`.
    fn product_relation(
        &self,
        u: usize,
        p: SE,
        v: usize,
        q: SE,
        deg_w: SE,
        apply: &dyn Fn(&Vector, SE) -> Result<Vector>,
    ) -> Result<Vector> {
        let alg = self.algebra();
        let (l, k) = self.product_bounds(u, v, deg_w);
        let pl = (p - l).to_integer().ok_or_else(|| Error::Invalid(format!("mode {p} is not in the class of {l}")))?;
        let imax = (k - q - 1).floor();
        let stop = alg.weight(u) + alg.weight(v);
        let mut out = Vector::zero();
        for i in 0..=imax {
            let ci = crate::exact::binomial_i(pl, i as u64);
            if ci.is_zero() {
                continue;
            }
            let mut j = 0i64;
            while pl - i + j < stop {
                let cj = binom_se(l, j);
                if !cj.is_zero() {
                    let y = alg.mode(u, pl - i + j, v)?;
                    if !y.is_zero() {
                        out.add_scaled(&apply(&y, q + l + i - j)?, &(&ci * &cj));
                    }
                }
                j += 1;
            }
        }
        Ok(out)
    }

    fn act_entry(&self, u: usize, p: SE, e: NfEntry) -> Result<Vector> {
        match e {
            NfEntry::Pure(w) => self.on_pure(u, p, w),
            NfEntry::Pair { u: v, m: q, w } => {
                if !self.in_coset(u, p) {
                    return Ok(Vector::zero());
                }
                let alg = self.algebra();
                let base = self.base_degree();
                let d = SE::int(alg.weight(v)) - q - 1 + base;
                let t = d + alg.weight(u) - p - 1;
                if !self.check_target(t, || format!("{}({p}) on {}({q})w{w}", alg.label(u), alg.label(v)))? {
                    return Ok(Vector::zero());
                }
                self.product_relation(u, p, v, q, base, &|y, s| self.vec_on_pure(y, s, w))
            }
        }
    }

    /// `u(p) x` reduced to normal form.
    pub fn act(&self, u: usize, p: SE, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (i, c) in x.iter() {
            out.add_scaled(&self.act_entry(u, p, self.entries[i])?, c);
        }
        Ok(out)
    }

    /// `y(p) x` for a general algebra vector `y`.
    pub fn act_vec(&self, y: &Vector, p: SE, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (u, c) in y.iter() {
            out.add_scaled(&self.act(u, p, x)?, c);
        }
        Ok(out)
    }

    /// Formal degree of a word.
    pub fn word_degree(&self, word: &TensorWord) -> SE {
        let alg = self.algebra();
        word.modes.iter().fold(self.base_degree(), |d, (u, m)| d + alg.weight(*u) - *m - 1)
    }

    /// Right-to-left normalization: the innermost mode acts first.
    pub fn reduce_word(&self, word: &TensorWord) -> Result<Vector> {
        let mut x = Vector::unit(self.pure(word.base));
        let base = self.base_degree();
        let mut deg = base;
        for (u, m) in word.modes.iter().rev() {
            deg = deg + self.algebra().weight(*u) - *m - 1;
            if deg < SE::zero() {
                return Ok(Vector::zero());
            }
            x = self.act(*u, *m, &x)?;
        }
        Ok(x)
    }

    /// Alternative order for words of length at least two: the outermost
    /// pair `u(p) v(q)` is expanded by the product relation over the formal
    /// degree of the remaining tail, and the resulting single modes of
    /// iterates then act on the normalized tail.
    pub fn reduce_word_outer_first(&self, word: &TensorWord) -> Result<Vector> {
        if word.modes.len() < 2 {
            return self.reduce_word(word);
        }
        if self.word_degree(word) < SE::zero() {
            return Ok(Vector::zero());
        }
        let (u, p) = word.modes[0];
        let (v, q) = word.modes[1];
        let tail = TensorWord::new(word.modes[2..].to_vec(), word.base);
        let deg_tail = self.word_degree(&tail);
        let alg = self.algebra();
        if deg_tail < SE::zero() || SE::int(alg.weight(v)) - q - 1 + deg_tail < SE::zero() {
            return Ok(Vector::zero());
        }
        if !self.in_coset(u, p) || !self.in_coset(v, q) {
            return Ok(Vector::zero());
        }
        let inner = self.reduce_word(&tail)?;
        self.product_relation(u, p, v, q, deg_tail, &|y, s| self.act_vec(y, s, &inner))
    }

    /// Difference between the nested reduction of `u(p) v(q) x` and its
    /// product relation expansion over the degree of the normal form entry
    /// `x`. Both lie in the same class of the rewriting ideal, so the
    /// difference is a relation among normal forms.
    pub fn consistency_relation(&self, u: usize, p: SE, v: usize, q: SE, x: usize) -> Result<Vector> {
        if !self.in_coset(u, p) || !self.in_coset(v, q) {
            return Ok(Vector::zero());
        }
        let alg = self.algebra();
        let deg_x = self.degree(x);
        let mid = deg_x + alg.weight(v) - q - 1;
        if mid < SE::zero() || mid + alg.weight(u) - p - 1 < SE::zero() {
            return Ok(Vector::zero());
        }
        // the heaviest iterate of the expansion must fit the algebra
        let (l, k) = self.product_bounds(u, v, deg_x);
        if let Some(pl) = (p - l).to_integer().filter(|_| !alg.is_vacuum(u)) {
            let mut imax = (k - q - 1).floor();
            if pl >= 0 {
                imax = imax.min(pl);
            }
            let heaviest = alg.weight(u) + alg.weight(v) - pl + imax - 1;
            if heaviest > alg.cutoff() {
                return Err(Error::Precision(format!("product expansion needs weight {heaviest}")));
            }
        }
        let ex = Vector::unit(x);
        let nested = self.act(u, p, &self.act(v, q, &ex)?)?;
        let expanded = self.product_relation(u, p, v, q, deg_x, &|y, s| self.act_vec(y, s, &ex))?;
        Ok(nested.sub(&expanded))
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn format(&self, x: &Vector) -> String {
        self.space.format_vector(x)
    }
}
