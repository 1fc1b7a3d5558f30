//! Python bindings. Rationals and degrees cross the boundary as strings
//! such as `"-3/2"`, so nothing is rounded.

use std::path::PathBuf;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;

use vertex_induce::exact::{parse_rational, ScaledExponent};
use vertex_induce::induction::{check_embedding, universal_map, InduceParams, InducedModule as Induced};
use vertex_induce::linear::Vector;
use vertex_induce::report::{self, AlgebraSource, Format, KindChoice, ModuleSource, RunConfig};
use vertex_induce::residue::{load_module, ModuleData};
use vertex_induce::vertex::{build_heisenberg, load_algebra, TruncatedVertexAlgebra};
use vertex_induce::zhu::{omega_n, AModule, ZhuKind, ZhuQuotient};
use vertex_induce::Error;

create_exception!(vertex_induce, PrecisionError, PyException, "A result needs data beyond a cutoff.");
create_exception!(vertex_induce, AxiomError, PyException, "Input data violates an axiom.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Precision(_) => PrecisionError::new_err(e.to_string()),
        Error::Axiom(_) => AxiomError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn degree(s: &str) -> PyResult<ScaledExponent> {
    s.parse().map_err(|e: vertex_induce::ParseError| PyValueError::new_err(e.to_string()))
}

fn kind_choice(level: Option<i64>, twist: Option<&str>) -> PyResult<KindChoice> {
    match (level, twist) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("give a level or a twist, not both")),
        (_, Some(t)) => Ok(KindChoice::Twisted(t.parse().map_err(py_err)?)),
        (n, None) => Ok(KindChoice::Level(n.unwrap_or(0))),
    }
}

fn entries(labels: impl Fn(usize) -> String, v: &Vector) -> Vec<(String, String)> {
    v.iter().map(|(i, c)| (labels(i), c.to_string())).collect()
}

/// A weight-truncated vertex operator algebra.
#[pyclass(frozen, module = "vertex_induce")]
struct Algebra {
    inner: Arc<TruncatedVertexAlgebra>,
}

#[pymethods]
impl Algebra {
    /// Rank one free boson truncated at `cutoff`.
    #[staticmethod]
    fn heisenberg(cutoff: i64) -> PyResult<Self> {
        Ok(Algebra { inner: Arc::new(build_heisenberg(cutoff).map_err(py_err)?) })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Algebra { inner: Arc::new(load_algebra(text).map_err(py_err)?) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn cutoff(&self) -> i64 {
        self.inner.cutoff()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.dim()).map(|i| self.inner.label(i).to_string()).collect()
    }

    /// Raises `AxiomError` on the first violated axiom.
    fn check_axioms(&self) -> PyResult<()> {
        self.inner.check_axioms().map_err(py_err)
    }

    fn to_text(&self, max_weight: i64) -> PyResult<String> {
        self.inner.to_text(max_weight).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, cutoff={})", self.inner.dim(), self.inner.cutoff())
    }
}

/// A truncated module over an algebra, with exact mode actions.
#[pyclass(frozen, module = "vertex_induce")]
struct Module {
    inner: Arc<ModuleData>,
}

#[pymethods]
impl Module {
    /// Fock module of the built-in free boson; `lam=None` gives the one
    /// twisted by `a -> -a`.
    #[staticmethod]
    #[pyo3(signature = (algebra, lam, cutoff))]
    fn fock(algebra: &Algebra, lam: Option<&str>, cutoff: &str) -> PyResult<Self> {
        let lam = lam.map(parse_rational).transpose().map_err(|e| PyValueError::new_err(e.to_string()))?;
        let m = ModuleData::fock(algebra.inner.clone(), lam, degree(cutoff)?).map_err(py_err)?;
        Ok(Module { inner: Arc::new(m) })
    }

    #[staticmethod]
    fn from_text(algebra: &Algebra, text: &str) -> PyResult<Self> {
        Ok(Module { inner: Arc::new(load_module(algebra.inner.clone(), text).map_err(py_err)?) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.dim()).map(|i| self.inner.space().label(i).to_string()).collect()
    }

    fn graded_dims(&self) -> Vec<(String, usize)> {
        vertex_induce::residue::graded_dims(self.inner.space()).into_iter().map(|(d, n)| (d.to_string(), n)).collect()
    }

    /// `u_n w` as (label, coefficient) pairs.
    fn act(&self, u: &str, n: &str, w: &str) -> PyResult<Vec<(String, String)>> {
        let alg = self.inner.algebra();
        let ui = alg.space().index_of(u).map_err(|e| py_err(e.into()))?;
        let wi = self.inner.space().index_of(w).map_err(|e| py_err(e.into()))?;
        let x = self.inner.act(ui, degree(n)?, wi).map_err(py_err)?;
        Ok(entries(|i| self.inner.space().label(i).to_string(), &x))
    }

    fn to_text(&self, max_weight: i64) -> PyResult<String> {
        self.inner.to_text(max_weight).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Module(dim={}, cutoff={})", self.inner.dim(), self.inner.cutoff())
    }
}

/// The associative algebra of a level or twist, built up to a weight cap.
#[pyclass(frozen, module = "vertex_induce")]
struct ZhuAlgebra {
    inner: ZhuQuotient,
}

#[pymethods]
impl ZhuAlgebra {
    #[new]
    #[pyo3(signature = (algebra, cap, level=None, twist=None))]
    fn new(algebra: &Algebra, cap: i64, level: Option<i64>, twist: Option<&str>) -> PyResult<Self> {
        let kind = report::resolve_kind(&algebra.inner, &kind_choice(level, twist)?).map_err(py_err)?;
        Ok(ZhuAlgebra { inner: ZhuQuotient::build(algebra.inner.clone(), kind, cap).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Quotient dimension of the part spanned by weights up to 0, 1, ..., cap.
    fn filtered_dims(&self) -> Vec<usize> {
        self.inner.filtered_dims()
    }

    fn is_commutative(&self) -> bool {
        self.inner.is_commutative()
    }

    /// Unit, well-definedness and associativity failures; empty when sound.
    fn verify(&self) -> PyResult<Vec<String>> {
        self.inner.verify(None).map_err(py_err)
    }
}

/// The module induced from the lowest weight space of a module, truncated
/// at a degree.
#[pyclass(frozen, module = "vertex_induce")]
struct InducedModule {
    inner: Arc<Induced>,
    source: Arc<ModuleData>,
    images: Vec<Vector>,
}

#[pymethods]
impl InducedModule {
    #[new]
    #[pyo3(signature = (module, cutoff, level=None, twist=None))]
    fn new(module: &Module, cutoff: &str, level: Option<i64>, twist: Option<&str>) -> PyResult<Self> {
        let m = &module.inner;
        let kind = report::resolve_kind(m.algebra(), &kind_choice(level, twist)?).map_err(py_err)?;
        let n = match kind {
            ZhuKind::Level(n) => n,
            ZhuKind::Twisted(_) => 0,
        };
        let omega = omega_n(m, n).map_err(py_err)?;
        let (ctx, images) = AModule::from_omega(m, kind, &omega).map_err(py_err)?;
        let ctx = Arc::new(ctx);
        let params = InduceParams::new(&ctx, degree(cutoff)?);
        let inner = Arc::new(Induced::build(ctx, params).map_err(py_err)?);
        Ok(InducedModule { inner, source: m.clone(), images })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.dim()).map(|i| self.inner.label(i).to_string()).collect()
    }

    fn graded_dims(&self) -> Vec<(String, usize)> {
        self.inner.graded_dims().into_iter().map(|(d, n)| (d.to_string(), n)).collect()
    }

    /// `u_n` applied to the basis vector at `index`.
    fn act(&self, u: &str, n: &str, index: usize) -> PyResult<Vec<(String, String)>> {
        let alg = self.inner.algebra();
        let ui = alg.space().index_of(u).map_err(|e| py_err(e.into()))?;
        if index >= self.inner.dim() {
            return Err(PyValueError::new_err(format!("index {index} out of range")));
        }
        let x = self.inner.act(ui, degree(n)?, index).map_err(py_err)?;
        Ok(entries(|i| self.inner.label(i).to_string(), &x))
    }

    /// Whether the lowest weight space embeds with its full dimension.
    fn embeds(&self, weight: i64) -> PyResult<bool> {
        Ok(check_embedding(&self.inner, weight).map_err(py_err)?.injective())
    }

    /// Whether the canonical map onto the source module is a well-defined
    /// graded isomorphism intertwining modes up to `weight`.
    fn maps_isomorphically(&self, weight: i64) -> PyResult<bool> {
        Ok(universal_map(&self.inner, &self.source, &self.images, weight).map_err(py_err)?.passed())
    }
}

/// Runs a command-line pipeline and returns `(exit_code, report_text)`.
#[pyfunction]
#[pyo3(signature = (command, heisenberg=None, algebra=None, fock=None, twisted_fock=false, module=None, level=None, twist=None, cutoff="2", weight=2, seed=0, structured=false))]
#[allow(clippy::too_many_arguments)]
fn run(
    command: &str,
    heisenberg: Option<i64>,
    algebra: Option<PathBuf>,
    fock: Option<&str>,
    twisted_fock: bool,
    module: Option<PathBuf>,
    level: Option<i64>,
    twist: Option<&str>,
    cutoff: &str,
    weight: i64,
    seed: u64,
    structured: bool,
) -> PyResult<(i32, String)> {
    use vertex_induce::report::Command as C;
    let cmd = match command {
        "check-algebra" => C::CheckAlgebra,
        "zhu" => C::Zhu,
        "induce" => C::Induce,
        "verify-module" => C::VerifyModule,
        "verify-annihilation" => C::VerifyAnnihilation,
        "verify-universal" => C::VerifyUniversal,
        _ => return Err(PyValueError::new_err(format!("unknown command {command}"))),
    };
    let source = match (algebra, heisenberg) {
        (Some(p), _) => AlgebraSource::File(p),
        (None, Some(n)) => AlgebraSource::Heisenberg(n),
        (None, None) => return Err(PyValueError::new_err("give an algebra path or a heisenberg cutoff")),
    };
    let mut cfg = RunConfig::new(cmd, source);
    cfg.module = match (module, fock, twisted_fock) {
        (Some(p), _, _) => Some(ModuleSource::File(p)),
        (None, Some(l), _) => Some(ModuleSource::Fock(parse_rational(l).map_err(|e| PyValueError::new_err(e.to_string()))?)),
        (None, None, true) => Some(ModuleSource::TwistedFock),
        _ => None,
    };
    cfg.kind = kind_choice(level, twist)?;
    cfg.cutoff = degree(cutoff)?;
    cfg.weight = weight;
    cfg.seed = seed;
    cfg.format = if structured { Format::Structured } else { Format::Text };
    let outcome = report::run(&cfg);
    let code = report::exit_code(&outcome);
    match outcome {
        Ok(r) => Ok((code, r.render(cfg.format))),
        Err(e) => Ok((code, format!("error: {e}\n"))),
    }
}

#[pymodule]
#[pyo3(name = "vertex_induce")]
pub fn vertex_induce_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Module>()?;
    m.add_class::<ZhuAlgebra>()?;
    m.add_class::<InducedModule>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("PrecisionError", m.py().get_type::<PrecisionError>())?;
    m.add("AxiomError", m.py().get_type::<AxiomError>())?;
    Ok(())
}
