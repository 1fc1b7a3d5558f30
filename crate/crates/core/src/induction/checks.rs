use std::sync::Arc;

use num_traits::Zero;

use super::module::InducedModule;
use super::normal::{NormalForms, TensorWord};
use crate::error::Result;
use crate::exact::ScaledExponent;
use crate::linear::Vector;
use crate::residue::{check_associativity_triple, check_jacobi, JacobiPlan, Tally};
use crate::vertex::binom_se;
use crate::zhu::ZhuKind;

type SE = ScaledExponent;

/// `W` embeds into the induced module, plus the annihilation elements
/// behind that fact, grouped by tag.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub base_degree: SE,
    pub base_dim: usize,
    pub expected: usize,
    /// A relation supported on `W`, if one exists.
    pub witness: Option<String>,
    pub annihilation: Vec<(String, Tally)>,
}

impl EmbeddingReport {
    pub fn injective(&self) -> bool {
        self.base_dim == self.expected && self.witness.is_none()
    }

    pub fn passed(&self) -> bool {
        self.injective() && self.annihilation.iter().all(|(_, t)| t.passed())
    }
}

/// `a(wt a - M + N - 1) sum_j C(e, j) (u_{j+m} v)(wt u_{j+m}v + M - 1) x`
/// where `x` is `b(wt b - N - 1) w`, or `w` itself when `b` is absent.
#[allow(clippy::too_many_arguments)]
pub fn annihilation_element(
    nf: &NormalForms,
    a: usize,
    u: usize,
    v: usize,
    b: Option<usize>,
    w: usize,
    big_m: SE,
    big_n: SE,
    m: i64,
    e: SE,
) -> Result<Vector> {
    let alg = nf.algebra();
    let pure = Vector::unit(nf.pure(w));
    let x = match b {
        Some(b) => nf.act(b, big_n * -1 + alg.weight(b) - 1, &pure)?,
        None => pure,
    };
    let mut inner = Vector::zero();
    let mut j = 0i64;
    while j + m < alg.weight(u) + alg.weight(v) {
        let c = binom_se(e, j);
        if !c.is_zero() {
            let y = alg.mode(u, j + m, v)?;
            if !y.is_zero() {
                let wt = alg.weight(u) + alg.weight(v) - j - m - 1;
                inner.add_scaled(&nf.act_vec(&y, big_m + wt - 1, &x)?, &c);
            }
        }
        j += 1;
    }
    nf.act(a, big_n - big_m + alg.weight(a) - 1, &inner)
}

fn record_zero(t: &mut Tally, position: impl FnOnce() -> String, value: Result<Vector>) -> Result<()> {
    t.record(position, value.map(|x| (x, Vector::zero())), false)
}

/// Checks that no relation lives in the base degree and that the
/// annihilation elements vanish for algebra elements up to `weight`.
pub fn check_embedding(s: &InducedModule, weight: i64) -> Result<EmbeddingReport> {
    let nf = s.normal_forms();
    let base = nf.base_degree();
    let witness = s
        .relations()
        .rows()
        .map(|(_, r)| r)
        .find(|r| nf.space().homogeneous_degree(r) == Some(base))
        .map(|r| nf.format(r));
    let mut report = EmbeddingReport {
        base_degree: base,
        base_dim: s.space().dim_at(base),
        expected: s.context().dim(),
        witness,
        annihilation: Vec::new(),
    };
    match s.context().kind().clone() {
        ZhuKind::Level(n) => level_annihilation(s, n, weight, &mut report)?,
        ZhuKind::Twisted(g) => twisted_annihilation(s, &g, weight, &mut report)?,
    }
    Ok(report)
}

fn level_annihilation(s: &InducedModule, n: i64, weight: i64, report: &mut EmbeddingReport) -> Result<()> {
    let nf = s.normal_forms();
    let alg = nf.algebra();
    let dw = s.context().dim();
    let basis: Vec<usize> = alg.basis_upto(weight).collect();
    let mut single = Tally::default();
    let mut double = Tally::default();
    for &a in &basis {
        for &u in &basis {
            for &v in &basis {
                for w in 0..dw {
                    for big_m in 0..=n {
                        for m in [big_m - 3 * n - 2, big_m - 3 * n - 3] {
                            let e = SE::int(alg.weight(u) + n);
                            let value = annihilation_element(nf, a, u, v, None, w, SE::int(big_m), SE::zero(), m, e);
                            record_zero(&mut single, || format!("a={} u={} v={} M={big_m} m={m}", alg.label(a), alg.label(u), alg.label(v)), value)?;
                        }
                    }
                    for &b in &basis {
                        for big_n in -n..=1 {
                            for big_m in (big_n + n - 1)..=(big_n + n) {
                                let m_max = big_m - 2 * big_n - 4 * n - 2;
                                let e = SE::int(alg.weight(u) + big_n + 2 * n);
                                let value = annihilation_element(nf, a, u, v, Some(b), w, SE::int(big_m), SE::int(big_n), m_max, e);
                                record_zero(
                                    &mut double,
                                    || format!("a={} u={} v={} b={} M={big_m} N={big_n} m={m_max}", alg.label(a), alg.label(u), alg.label(v), alg.label(b)),
                                    value,
                                )?;
                            }
                        }
                    }
                }
            }
        }
    }
    report.annihilation.push(("one mode on w, m <= M-3n-2".into(), single));
    report.annihilation.push(("two modes on w, m <= M-2N-4n-2".into(), double));
    Ok(())
}

fn twisted_annihilation(s: &InducedModule, g: &crate::vertex::Automorphism, weight: i64, report: &mut EmbeddingReport) -> Result<()> {
    let nf = s.normal_forms();
    let alg = nf.algebra();
    let t_ord = g.order();
    let dw = s.context().dim();
    let basis: Vec<usize> = alg.basis_upto(weight).collect();
    let mut negative_n = Tally::default();
    let mut m_above_n = Tally::default();
    let mut general = Tally::default();
    for &a in &basis {
        for &u in &basis {
            for &v in &basis {
                for &b in &basis {
                    let (d, r, sl, t) = (g.label(a), g.label(u), g.label(v), g.label(b));
                    if (d + r + sl + t).rem_euclid(t_ord) != 0 {
                        continue;
                    }
                    let n_class = SE::new(t_ord - t, t_ord);
                    let m_class = SE::new(r + sl, t_ord);
                    let mut big_n = n_class.least_in_coset_above(SE::int(-2));
                    while big_n <= SE::int(1) {
                        let mut big_m = m_class.least_in_coset_above(big_n - 2);
                        while big_m <= big_n + 1 {
                            let e = nf.twisted_exponent(u, big_n);
                            let m_max = (big_m - 2 - big_n - e + alg.weight(u)).floor();
                            let tally = if big_n < SE::zero() {
                                &mut negative_n
                            } else if big_m > big_n {
                                &mut m_above_n
                            } else {
                                &mut general
                            };
                            for w in 0..dw {
                                let value = annihilation_element(nf, a, u, v, Some(b), w, big_m, big_n, m_max, e);
                                record_zero(
                                    tally,
                                    || format!("a={} u={} v={} b={} M={big_m} N={big_n} m={m_max}", alg.label(a), alg.label(u), alg.label(v), alg.label(b)),
                                    value,
                                )?;
                            }
                            big_m = big_m + 1;
                        }
                        big_n = big_n + 1;
                    }
                }
            }
        }
    }
    report.annihilation.push(("case N<0".into(), negative_n));
    report.annihilation.push(("case N>=0, M>N".into(), m_above_n));
    report.annihilation.push(("case N>=M>=0".into(), general));
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct AdmissibilityReport {
    pub vacuum: Option<String>,
    pub grading: Option<String>,
    pub triples: usize,
    pub weak_associativity: Tally,
    pub product_formula: Tally,
    pub truncation: Tally,
    pub component_forms: Tally,
    pub jacobi: Tally,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.vacuum.is_none()
            && self.grading.is_none()
            && self.weak_associativity.passed()
            && self.product_formula.passed()
            && self.truncation.passed()
            && self.component_forms.passed()
            && self.jacobi.passed()
    }
}

/// Vacuum and grading on every basis element, the residue formulas on all
/// triples of algebra elements up to `weight`, and Jacobi components
/// chosen by `jacobi`.
pub fn check_admissibility(s: &Arc<InducedModule>, weight: i64, jacobi: &JacobiPlan) -> Result<AdmissibilityReport> {
    let md = s.module_data()?;
    let alg = s.algebra().clone();
    let mut report = AdmissibilityReport::default();
    if let Err(e) = md.check_vacuum() {
        if e.is_precision() {
            return Err(e);
        }
        report.vacuum = Some(e.to_string());
    }
    'grading: for u in alg.basis_upto(weight) {
        for i in 0..s.dim() {
            for n in md.mode_window(u, i) {
                let x = match s.act(u, n, i) {
                    Ok(x) => x,
                    Err(e) if e.is_precision() => continue,
                    Err(e) => return Err(e),
                };
                let expect = s.space().degree(i) + alg.weight(u) - n - 1;
                if !x.is_zero() && s.space().homogeneous_degree(&x) != Some(expect) {
                    report.grading = Some(format!("{}({n}) {} lands outside degree {expect}", alg.label(u), s.label(i)));
                    break 'grading;
                }
            }
        }
    }
    let basis: Vec<usize> = alg.basis_upto(weight).collect();
    for &u in &basis {
        for &v in &basis {
            for w in 0..s.dim() {
                let r = check_associativity_triple(&md, u, v, w)?;
                report.triples += 1;
                report.weak_associativity.merge(r.weak_associativity);
                report.product_formula.merge(r.product_formula);
                report.truncation.merge(r.truncation);
                report.component_forms.merge(r.component_forms);
            }
        }
    }
    report.jacobi = check_jacobi(&md, weight, jacobi)?;
    Ok(report)
}

/// Words `u1(m1) ... uk(mk) w` reduced innermost-first and outermost-first.
/// The two normal forms may differ by relations; they must agree in the
/// quotient.
#[derive(Clone, Debug, Default)]
pub struct ConfluenceReport {
    pub words: usize,
    pub skipped: usize,
    /// Words whose two reductions already coincide as normal forms.
    pub agree_on_normal_forms: usize,
    pub failures: Vec<String>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn words_into(nf: &NormalForms, basis: &[usize], length: usize, deg: SE, tail: &mut Vec<(usize, SE)>, out: &mut Vec<Vec<(usize, SE)>>) {
    if tail.len() == length {
        let mut modes = tail.clone();
        modes.reverse();
        out.push(modes);
        return;
    }
    let alg = nf.algebra();
    for &u in basis {
        let top = deg + alg.weight(u) - 1;
        let step = SE::new(1, nf.space().scale());
        let mut m = nf.mode_offset(u).least_in_coset_above(top - nf.cutoff() - step);
        while m <= top {
            let d = deg + alg.weight(u) - m - 1;
            tail.push((u, m));
            words_into(nf, basis, length, d, tail, out);
            tail.pop();
            m = m + 1;
        }
    }
}

/// Every word of `length` modes of algebra elements up to `weight` whose
/// partial degrees stay in `[0, cutoff]`. Words are confluent when the
/// difference of their two reductions lies in the relation span.
pub fn check_confluence(s: &InducedModule, weight: i64, length: usize) -> Result<ConfluenceReport> {
    let nf = s.normal_forms();
    let basis: Vec<usize> = nf.algebra().basis_upto(weight).collect();
    let mut report = ConfluenceReport::default();
    for w in 0..s.context().dim() {
        let mut words = Vec::new();
        words_into(nf, &basis, length, nf.base_degree(), &mut Vec::new(), &mut words);
        for modes in words {
            let word = TensorWord::new(modes, w);
            let pair = nf.reduce_word(&word).and_then(|a| Ok((nf.reduce_word_outer_first(&word)?, a)));
            match pair {
                Ok((a, b)) => {
                    report.words += 1;
                    if a == b {
                        report.agree_on_normal_forms += 1;
                    } else if !s.relations().reduce(&a.sub(&b)).is_zero() && report.failures.len() < 8 {
                        report.failures.push(describe_word(s, &word));
                    }
                }
                Err(e) if e.is_precision() => report.skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

fn describe_word(s: &InducedModule, word: &TensorWord) -> String {
    let alg = s.algebra();
    let mut out = String::new();
    for (u, m) in &word.modes {
        out.push_str(&format!("{}({m})", alg.label(*u)));
    }
    out.push_str(&format!("w{}", word.base));
    out
}
