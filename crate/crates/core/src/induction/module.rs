use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::normal::{NfEntry, NormalForms};
use super::relations::{close_under_modes, consistency_relations, j_relations, RelationStats, RelationWindow};
use crate::error::{Error, Result};
use crate::exact::ScaledExponent;
use crate::linear::{Echelon, GradedSpace, Vector};
use crate::residue::{ActionKey, ModeOracle, ModuleData};
use crate::vertex::{Automorphism, TruncatedVertexAlgebra};
use crate::zhu::{AModule, ZhuKind};

type SE = ScaledExponent;

/// Truncation parameters of an induced module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InduceParams {
    /// Degree cutoff `D` of the reported module.
    pub cutoff: SE,
    /// Largest algebra weight of a normal form pair.
    pub frame: i64,
    pub window: RelationWindow,
    /// Pairs this many weights above the spanning window must reduce into it.
    pub margin: i64,
}

impl InduceParams {
    /// Defaults that leave room for the relations needed up to `cutoff`.
    /// Twisted exponents exceed the untwisted ones by up to one, and their
    /// relations need two more weights of frame. The frame is clamped to the algebra cutoff; the
    /// stability check reports when that is too small.
    pub fn new(ctx: &AModule, cutoff: SE) -> Self {
        let extra = match ctx.kind() {
            ZhuKind::Level(_) => 1,
            ZhuKind::Twisted(_) => 3,
        };
        let frame = (span_weight(ctx.kind(), cutoff) + cutoff.ceil() + extra).min(ctx.algebra().cutoff());
        let window = RelationWindow { left_weight: frame, right_weight: frame, ..RelationWindow::default() };
        InduceParams { cutoff, frame, window, margin: 1 }
    }
}

fn grading_scale(kind: &ZhuKind) -> i64 {
    match kind {
        ZhuKind::Level(_) => 1,
        ZhuKind::Twisted(g) => g.order(),
    }
}

/// Pairs of weight at most this span the degree `d` component.
fn span_weight(kind: &ZhuKind, d: SE) -> i64 {
    let level = match kind {
        ZhuKind::Level(n) => *n,
        ZhuKind::Twisted(_) => 0,
    };
    (d * grading_scale(kind)).ceil() + level
}

/// The induced module truncated at degree `D`: normal forms modulo the
/// relation submodule, with a basis of low weight representatives.
#[derive(Debug)]
pub struct InducedModule {
    nf: NormalForms,
    params: InduceParams,
    relations: Echelon,
    stats: RelationStats,
    reps: Vec<usize>,
    position: HashMap<usize, usize>,
    space: Arc<GradedSpace>,
    cache: Mutex<HashMap<ActionKey, Vector>>,
}

impl InducedModule {
    pub fn build(ctx: Arc<AModule>, params: InduceParams) -> Result<Self> {
        Self::build_with(ctx, params, Vec::new())
    }

    /// As `build`, with additional relations among normal forms (indices as
    /// in `NormalForms::new(ctx, params.cutoff, params.frame)`) added to the
    /// seeds before closing under modes.
    pub fn build_with(ctx: Arc<AModule>, params: InduceParams, extra: Vec<Vector>) -> Result<Self> {
        if params.cutoff < SE::zero() {
            return Err(Error::Invalid(format!("negative cutoff {}", params.cutoff)));
        }
        let nf = NormalForms::new(ctx, params.cutoff, params.frame)?;
        let mut stats = RelationStats::default();
        let mut seeds = extra;
        for d in nf.space().degrees().collect::<Vec<_>>() {
            seeds.extend(j_relations(&nf, d, &params.window, &mut stats)?);
            seeds.extend(consistency_relations(&nf, d, &params.window, &mut stats)?);
        }
        let relations = close_under_modes(&nf, seeds, &params.window, &mut stats)?;
        Self::assemble(nf, params, relations, stats)
    }

    /// Quotient by an explicitly given relation span.
    fn assemble(nf: NormalForms, params: InduceParams, relations: Echelon, stats: RelationStats) -> Result<Self> {
        let kind = nf.context().kind().clone();
        let alg = nf.algebra().clone();
        let weight = |i: usize| match nf.entry(i) {
            NfEntry::Pure(_) => 0,
            NfEntry::Pair { u, .. } => alg.weight(u),
        };
        let mut reps = Vec::new();
        let mut comps = Vec::new();
        for d in nf.space().degrees().collect::<Vec<_>>() {
            let s = span_weight(&kind, d);
            let mut labels = Vec::new();
            for i in nf.space().component(d) {
                if relations.is_pivot(i) {
                    continue;
                }
                let w = weight(i);
                if w <= s {
                    reps.push(i);
                    labels.push(nf.label(i).to_string());
                } else if w <= s + params.margin {
                    return Err(Error::Precision(format!(
                        "degree {d}: {} does not reduce into pairs of weight at most {s}; widen the frame (now {})",
                        nf.label(i),
                        params.frame
                    )));
                }
            }
            if !labels.is_empty() {
                comps.push((d, labels));
            }
        }
        let space = Arc::new(GradedSpace::new(nf.space().scale(), comps)?);
        // the graded space keeps degree order, so reps line up with it
        let position = reps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        Ok(InducedModule { nf, params, relations, stats, reps, position, space, cache: Mutex::new(HashMap::new()) })
    }

    pub fn normal_forms(&self) -> &NormalForms {
        &self.nf
    }

    pub fn context(&self) -> &Arc<AModule> {
        self.nf.context()
    }

    pub fn algebra(&self) -> &Arc<TruncatedVertexAlgebra> {
        self.nf.algebra()
    }

    pub fn params(&self) -> &InduceParams {
        &self.params
    }

    pub fn stats(&self) -> &RelationStats {
        &self.stats
    }

    pub fn relations(&self) -> &Echelon {
        &self.relations
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn cutoff(&self) -> SE {
        self.params.cutoff
    }

    pub fn base_degree(&self) -> SE {
        self.nf.base_degree()
    }

    /// Normal form entry representing quotient basis element `i`.
    pub fn representative(&self, i: usize) -> usize {
        self.reps[i]
    }

    /// Dimensions per degree, including empty degrees up to the cutoff.
    pub fn graded_dims(&self) -> Vec<(SE, usize)> {
        let step = SE::new(1, self.nf.space().scale());
        let mut out = Vec::new();
        let mut d = SE::zero();
        while d <= self.params.cutoff {
            out.push((d, self.space.dim_at(d)));
            d = d + step;
        }
        out
    }

    /// Class of a normal form vector in quotient coordinates.
    pub fn project(&self, y: &Vector) -> Result<Vector> {
        let r = self.relations.reduce(y);
        let mut out = Vector::zero();
        for (i, c) in r.iter() {
            match self.position.get(&i) {
                Some(&k) => out.add_at(k, c),
                None => {
                    return Err(Error::Precision(format!(
                        "{} is not reduced into the certified window",
                        self.nf.label(i)
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Normal form vector of quotient coordinates `x`.
    pub fn lift(&self, x: &Vector) -> Vector {
        x.map_indices(|k| self.reps[k])
    }

    /// `u(n)` on quotient basis element `i`.
    pub fn act(&self, u: usize, n: SE, i: usize) -> Result<Vector> {
        let key = (u, n, i);
        if let Some(x) = self.cache.lock().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let y = self.nf.act(u, n, &Vector::unit(self.reps[i]))?;
        let x = self.project(&y)?;
        self.cache.lock().unwrap().insert(key, x.clone());
        Ok(x)
    }

    pub fn act_vec(&self, a: &Vector, n: SE, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (u, c) in a.iter() {
            for (i, d) in x.iter() {
                out.add_scaled(&self.act(u, n, i)?, &(c * d));
            }
        }
        Ok(out)
    }

    /// Image of `w` in `W` (the embedding of the base degree).
    pub fn embed(&self, w: usize) -> Result<Vector> {
        self.project(&Vector::unit(self.nf.pure(w)))
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn twist(&self) -> Automorphism {
        match self.context().kind() {
            ZhuKind::Level(_) => Automorphism::identity(self.algebra().dim()),
            ZhuKind::Twisted(g) => g.clone(),
        }
    }

    /// The module as residue-checkable data with lazily computed actions.
    pub fn module_data(self: &Arc<Self>) -> Result<ModuleData> {
        ModuleData::from_oracle(
            self.algebra().clone(),
            self.twist(),
            (*self.space).clone(),
            self.params.cutoff,
            self.clone() as Arc<dyn ModeOracle>,
        )
    }
}

impl ModeOracle for InducedModule {
    fn act(&self, u: usize, n: SE, w: usize) -> Result<Vector> {
        InducedModule::act(self, u, n, w)
    }
}
