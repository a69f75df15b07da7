//! Python bindings: `import mhc`.

use std::collections::BTreeMap;

use mhc_core::dsl;
use mhc_core::ghc::Failure;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(mhc, MhcError, PyValueError, "Invalid expression, table, or reference.");

fn err(e: impl std::fmt::Display) -> PyErr {
    MhcError::new_err(e.to_string())
}

fn registry_or_empty(registry: Option<PyRef<'_, Registry>>) -> mhc_core::Registry {
    registry.map(|r| r.inner.clone()).unwrap_or_default()
}

fn poly_dict(p: &mhc_core::FPPolynomial) -> BTreeMap<(i64, i64), i64> {
    p.iter().collect()
}

/// Generator tables available to expressions by name.
#[pyclass(module = "mhc")]
#[derive(Default)]
pub struct Registry {
    inner: mhc_core::Registry,
}

#[pymethods]
impl Registry {
    #[new]
    fn new() -> Self {
        Registry::default()
    }

    /// Parse, validate and register a table given as text; returns the lint warnings.
    fn load_text(&mut self, text: &str) -> PyResult<Vec<String>> {
        let loaded = dsl::parse_table(text).map_err(err)?;
        let warnings = loaded.warnings.iter().map(ToString::to_string).collect();
        self.inner.register(loaded.table).map_err(err)?;
        Ok(warnings)
    }

    fn load(&mut self, path: std::path::PathBuf) -> PyResult<Vec<String>> {
        let text = std::fs::read_to_string(&path).map_err(|e| err(format!("{}: {e}", path.display())))?;
        self.load_text(&text)
    }

    fn names(&self) -> Vec<String> {
        self.inner.names().map(str::to_owned).collect()
    }

    fn __contains__(&self, name: &str) -> bool {
        self.inner.contains(name)
    }

    fn __getitem__(&self, name: &str) -> PyResult<VarietyTable> {
        let t = self.inner.get(name).ok_or_else(|| pyo3::exceptions::PyKeyError::new_err(name.to_owned()))?;
        Ok(VarietyTable { inner: t.as_ref().clone() })
    }

    fn __repr__(&self) -> String {
        format!("Registry({:?})", self.names())
    }
}

/// An element of the Grothendieck ring, in normal form.
#[pyclass(module = "mhc", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct MotivicClass {
    inner: mhc_core::MotivicClass,
}

#[pymethods]
impl MotivicClass {
    #[staticmethod]
    #[pyo3(signature = (text, registry=None))]
    fn parse(text: &str, registry: Option<PyRef<'_, Registry>>) -> PyResult<Self> {
        normalize(text, registry)
    }

    #[staticmethod]
    fn integer(n: i64) -> Self {
        MotivicClass { inner: mhc_core::MotivicClass::integer(n) }
    }

    /// `L^k`.
    #[staticmethod]
    #[pyo3(signature = (k=1))]
    fn lefschetz(k: i64) -> Self {
        MotivicClass { inner: mhc_core::MotivicClass::lefschetz_pow(k) }
    }

    /// `(lexp, symbols, coefficient)` triples in normal-form order.
    fn terms(&self) -> Vec<(i64, Vec<String>, i64)> {
        self.inner
            .terms()
            .map(|(t, c)| (t.lexp(), t.symbols().iter().map(|s| s.name().to_owned()).collect(), c))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn truncate(&self, m: i64) -> Self {
        MotivicClass { inner: self.inner.truncate(mhc_core::Precision(m)) }
    }

    fn equal_mod(&self, other: &MotivicClass, m: i64) -> bool {
        self.inner.equal_mod(&other.inner, mhc_core::Precision(m))
    }

    #[pyo3(signature = (registry=None))]
    fn realize_nu(&self, registry: Option<PyRef<'_, Registry>>) -> PyResult<FilteredHodgeClass> {
        let f = self.inner.realize_nu(&registry_or_empty(registry)).map_err(err)?;
        Ok(FilteredHodgeClass { inner: f.value, exact: f.soundness.is_exact() })
    }

    #[pyo3(signature = (registry=None))]
    fn realize_lambda(&self, registry: Option<PyRef<'_, Registry>>) -> PyResult<FilteredHodgeClass> {
        let f = self.inner.realize_lambda(&registry_or_empty(registry)).map_err(err)?;
        Ok(FilteredHodgeClass { inner: f.value, exact: f.soundness.is_exact() })
    }

    fn __add__(&self, other: &MotivicClass) -> Self {
        MotivicClass { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &MotivicClass) -> Self {
        MotivicClass { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &MotivicClass) -> Self {
        MotivicClass { inner: &self.inner * &other.inner }
    }

    fn __neg__(&self) -> Self {
        MotivicClass { inner: -&self.inner }
    }

    fn __eq__(&self, other: &MotivicClass) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MotivicClass('{}')", self.inner)
    }
}

/// An element of K(FHS), held as its associated graded.
#[pyclass(module = "mhc", frozen)]
pub struct FilteredHodgeClass {
    inner: mhc_core::FilteredHodgeClass,
    #[pyo3(get)]
    exact: bool,
}

#[pymethods]
impl FilteredHodgeClass {
    /// Filtered Poincaré coefficients `{(i, p): coef}`.
    fn fp(&self) -> BTreeMap<(i64, i64), i64> {
        poly_dict(&self.inner.fp())
    }

    /// Signed graded dimensions `{(w, p): dim}`.
    fn graded(&self) -> BTreeMap<(i64, i64), i64> {
        poly_dict(&self.inner.graded_dims())
    }

    fn __eq__(&self, other: &FilteredHodgeClass) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Graded coniveau data of a variety.
#[pyclass(module = "mhc", frozen)]
pub struct VarietyTable {
    inner: mhc_core::VarietyTable,
}

#[pymethods]
impl VarietyTable {
    /// Table of a single variety expression such as `"blowup(P3, curve(2), 2)"`.
    #[staticmethod]
    #[pyo3(signature = (text, registry=None))]
    fn from_expr(text: &str, registry: Option<PyRef<'_, Registry>>) -> PyResult<Self> {
        let reg = registry_or_empty(registry);
        let expr = dsl::parse(text, &reg).map_err(err)?;
        let v = expr.as_variety().ok_or_else(|| err(format!("`{text}` is not a single variety")))?;
        Ok(VarietyTable { inner: v.table(&reg).map_err(err)? })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.soundness().is_exact()
    }

    /// `{(i, p): dim Gr^p H^i}`.
    fn graded_dims(&self) -> BTreeMap<(i64, i64), i64> {
        self.inner.cells().map(|(k, h)| (k, h.dimension())).collect()
    }

    fn betti(&self) -> BTreeMap<i64, i64> {
        self.inner.poincare().iter().map(|((i, _), c)| (i, c)).collect()
    }

    fn nu(&self) -> FilteredHodgeClass {
        FilteredHodgeClass { inner: self.inner.nu(), exact: self.exact() }
    }

    fn lambda_(&self) -> FilteredHodgeClass {
        FilteredHodgeClass { inner: self.inner.lambda(), exact: self.exact() }
    }

    /// Table-file text.
    fn dump(&self) -> String {
        dsl::dump_table(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("VarietyTable(name='{}', dim={})", self.inner.name(), self.inner.dim())
    }
}

#[pyclass(module = "mhc", frozen, get_all)]
pub struct GhcReport {
    verdict: String,
    /// `(i, p, dim N^p H^i, dim F^p H^i)`.
    failures: Vec<(i64, i64, i64, i64)>,
    fp_nu: BTreeMap<(i64, i64), i64>,
    fp_lambda: BTreeMap<(i64, i64), i64>,
    exact: bool,
    mixed_sign: Vec<(i64, i64)>,
}

impl From<&mhc_core::GhcReport> for GhcReport {
    fn from(r: &mhc_core::GhcReport) -> Self {
        GhcReport {
            verdict: r.verdict.to_string(),
            failures: r.failures.iter().map(|f: &Failure| (f.degree, f.step, f.dim_coniveau, f.dim_level)).collect(),
            fp_nu: poly_dict(&r.fp_nu),
            fp_lambda: poly_dict(&r.fp_lambda),
            exact: r.soundness.is_exact(),
            mixed_sign: r.mixed_sign.clone(),
        }
    }
}

#[pymethods]
impl GhcReport {
    fn __repr__(&self) -> String {
        format!("GhcReport(verdict='{}', failures={:?})", self.verdict, self.failures)
    }
}

#[pyclass(module = "mhc", frozen, get_all)]
pub struct TransferReport {
    verdict: String,
    classes_equal: bool,
    difference: MotivicClass,
    degree_bound: i64,
    a: Py<GhcReport>,
    b: Py<GhcReport>,
}

#[pymethods]
impl TransferReport {
    fn __repr__(&self) -> String {
        format!("TransferReport(verdict='{}', classes_equal={})", self.verdict, self.classes_equal)
    }
}

/// Normal form of a ring expression.
#[pyfunction]
#[pyo3(signature = (text, registry=None))]
fn normalize(text: &str, registry: Option<PyRef<'_, Registry>>) -> PyResult<MotivicClass> {
    let inner = dsl::normalize(text, &registry_or_empty(registry)).map_err(err)?;
    Ok(MotivicClass { inner })
}

#[pyfunction]
#[pyo3(signature = (x, registry=None))]
fn ghc_check(x: &MotivicClass, registry: Option<PyRef<'_, Registry>>) -> PyResult<GhcReport> {
    let report = mhc_core::ghc_check(&x.inner, &registry_or_empty(registry)).map_err(err)?;
    Ok(GhcReport::from(&report))
}

#[pyfunction]
#[pyo3(signature = (x, registry=None))]
fn kernel_check(x: &MotivicClass, registry: Option<PyRef<'_, Registry>>) -> PyResult<bool> {
    mhc_core::kernel_check(&x.inner, &registry_or_empty(registry)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, m, registry=None))]
fn ghc_transfer(
    py: Python<'_>,
    a: &MotivicClass,
    b: &MotivicClass,
    m: i64,
    registry: Option<PyRef<'_, Registry>>,
) -> PyResult<TransferReport> {
    let r = mhc_core::ghc_transfer(&a.inner, &b.inner, mhc_core::Precision(m), &registry_or_empty(registry))
        .map_err(err)?;
    Ok(TransferReport {
        verdict: r.verdict.to_string(),
        classes_equal: r.classes_equal,
        difference: MotivicClass { inner: r.difference.clone() },
        degree_bound: r.degree_bound,
        a: Py::new(py, GhcReport::from(&r.a))?,
        b: Py::new(py, GhcReport::from(&r.b))?,
    })
}

#[pymodule]
fn mhc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MhcError", m.py().get_type::<MhcError>())?;
    m.add_class::<Registry>()?;
    m.add_class::<MotivicClass>()?;
    m.add_class::<FilteredHodgeClass>()?;
    m.add_class::<VarietyTable>()?;
    m.add_class::<GhcReport>()?;
    m.add_class::<TransferReport>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(ghc_check, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_check, m)?)?;
    m.add_function(wrap_pyfunction!(ghc_transfer, m)?)?;
    Ok(())
}
