//! Python bindings: bivectors, Lie bialgebras, Poisson Lie groups and the manifest runner.

use std::collections::HashMap;
use std::sync::Arc;

use poisred::bialgebra::{Cobracket, LieAlgebraSC, LieBialgebra, Table};
use poisred::group::{orbit_rank_scan, GroupChart, Side};
use poisred::manifest::{builtin, Manifest, BUILTIN};
use poisred::poisson::PoissonChart;
use poisred::runner::{self, RunOptions, DEFAULT_STEP};
use poisred::{parse, Chart, Domain, Error, Rational, ZeroTest};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<Rational> {
    Rational::parse(text).map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

fn table_strings(t: &Table) -> Vec<Vec<Vec<String>>> {
    t.iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(Rational::to_string).collect())
                .collect()
        })
        .collect()
}

/// Poisson bivector on a coordinate chart.
#[pyclass(name = "Bivector", module = "poisred_py", skip_from_py_object)]
#[derive(Clone)]
struct PyBivector {
    inner: PoissonChart,
}

#[pymethods]
impl PyBivector {
    /// `entries` maps coordinate pairs `(x, y)` to the expression `{x, y}`.
    #[new]
    #[pyo3(signature = (coords, entries, positive = Vec::new()))]
    fn new(
        coords: Vec<String>,
        entries: HashMap<(String, String), String>,
        positive: Vec<String>,
    ) -> PyResult<Self> {
        let mut chart = Chart::new("py", &coords).map_err(err)?;
        for c in &positive {
            chart = chart.with_domain(c, Domain::Positive).map_err(err)?;
        }
        let chart = Arc::new(chart);
        let index = |name: &str| {
            chart
                .index_of(name)
                .ok_or_else(|| PyValueError::new_err(format!("unknown coordinate `{name}`")))
        };
        let mut list = Vec::new();
        let mut keys: Vec<_> = entries.keys().cloned().collect();
        keys.sort();
        for (x, y) in keys {
            let e = parse(&entries[&(x.clone(), y.clone())], &chart).map_err(err)?;
            list.push((index(&x)?, index(&y)?, e));
        }
        let inner = PoissonChart::from_entries(chart.clone(), "pi", list).map_err(err)?;
        Ok(PyBivector { inner })
    }

    #[getter]
    fn coords(&self) -> Vec<String> {
        self.inner.chart().coords().to_vec()
    }

    fn bracket(&self, f: &str, g: &str) -> PyResult<String> {
        let c = self.inner.chart();
        let (f, g) = (parse(f, c).map_err(err)?, parse(g, c).map_err(err)?);
        Ok(self.inner.bracket(&f, &g).map_err(err)?.to_string_on(c))
    }

    /// Components of `X_f = {f, .}`.
    fn hamiltonian(&self, f: &str) -> PyResult<Vec<String>> {
        let c = self.inner.chart();
        let x = self
            .inner
            .hamiltonian_field(&parse(f, c).map_err(err)?)
            .map_err(err)?;
        Ok(x.vector_components()
            .map_err(err)?
            .iter()
            .map(|e| e.to_string_on(c))
            .collect())
    }

    #[pyo3(signature = (samples = 100, tol = 1e-9, seed = 42))]
    fn jacobi<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        tol: f64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let check = self
            .inner
            .check_jacobi(&ZeroTest { samples, tol, seed })
            .map_err(err)?;
        to_py(py, &check)
    }

    fn rank_at(&self, point: Vec<f64>) -> PyResult<usize> {
        self.inner.rank_at(&point).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Bivector({})", self.inner.pi())
    }
}

/// Finite-dimensional Lie bialgebra given by structure constants.
#[pyclass(name = "Bialgebra", module = "poisred_py", skip_from_py_object)]
#[derive(Clone)]
struct PyBialgebra {
    inner: LieBialgebra,
}

#[pymethods]
impl PyBialgebra {
    /// `bracket[(x, y)]` maps basis names to coefficients of `[x, y]`;
    /// `cobracket[z][(x, y)]` is the coefficient of `x ∧ y` in `δ(z)`.
    #[new]
    #[pyo3(signature = (basis, bracket, cobracket = HashMap::new()))]
    fn new(
        basis: Vec<String>,
        bracket: HashMap<(String, String), HashMap<String, String>>,
        cobracket: HashMap<String, HashMap<(String, String), String>>,
    ) -> PyResult<Self> {
        let index = |name: &str| {
            basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| PyValueError::new_err(format!("unknown basis element `{name}`")))
        };
        let mut c = Vec::new();
        for ((x, y), value) in &bracket {
            for (z, v) in value {
                c.push((index(x)?, index(y)?, index(z)?, rational(v)?));
            }
        }
        let mut d = Vec::new();
        for (z, value) in &cobracket {
            for ((x, y), v) in value {
                d.push((index(z)?, index(x)?, index(y)?, rational(v)?));
            }
        }
        let algebra = LieAlgebraSC::new(&basis, &c).map_err(err)?;
        let cob = Cobracket::new(basis.len(), &d).map_err(err)?;
        let inner = LieBialgebra::new(algebra, cob).map_err(err)?;
        Ok(PyBialgebra { inner })
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.inner.algebra.basis().to_vec()
    }

    /// Raises `ValueError` unless Jacobi and the cocycle condition hold.
    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    fn dual(&self) -> PyResult<PyBialgebra> {
        Ok(PyBialgebra {
            inner: self.inner.dualize().map_err(err)?,
        })
    }

    fn double_dual_roundtrip(&self) -> PyResult<bool> {
        self.inner.double_dual_roundtrip().map_err(err)
    }

    /// `c[i][j][k]`, the coefficient of `e_k` in `[e_i, e_j]`, as strings.
    fn structure_constants(&self) -> Vec<Vec<Vec<String>>> {
        table_strings(self.inner.algebra.table())
    }

    /// `d[i][j][k]`, the coefficient of `e_j ∧ e_k` in `δ(e_i)`, as strings.
    fn cobracket_constants(&self) -> Vec<Vec<Vec<String>>> {
        table_strings(self.inner.cobracket.table())
    }

    fn __repr__(&self) -> String {
        format!("Bialgebra({:?})", self.inner.algebra.basis())
    }
}

/// Poisson Lie group in a global chart.
#[pyclass(name = "PoissonLieGroup", module = "poisred_py", skip_from_py_object)]
#[derive(Clone)]
struct PyGroup {
    inner: GroupChart,
}

fn side(s: &str) -> PyResult<Side> {
    s.parse().map_err(err)
}

#[pymethods]
impl PyGroup {
    /// `mul` is written in the doubled coordinates `x1, x2` of the bivector chart.
    #[new]
    #[pyo3(signature = (bivector, mul, identity, inverse = None))]
    fn new(
        bivector: &PyBivector,
        mul: Vec<String>,
        identity: Vec<String>,
        inverse: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let e = identity
            .iter()
            .map(|s| rational(s))
            .collect::<PyResult<Vec<_>>>()?;
        let inner =
            GroupChart::parse(bivector.inner.clone(), &mul, e, inverse.as_deref()).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[pyo3(signature = (pairs = 50, tol = 1e-9, seed = 42))]
    fn multiplicative<'py>(
        &self,
        py: Python<'py>,
        pairs: usize,
        tol: f64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let check = self
            .inner
            .check_multiplicative(pairs, tol, seed)
            .map_err(err)?;
        to_py(py, &check)
    }

    /// Components of the dressing field of each basis element on the given side.
    fn dressing_fields(&self, side_name: &str) -> PyResult<Vec<Vec<String>>> {
        let c = self.inner.chart();
        let fields = self.inner.dressing_fields(side(side_name)?).map_err(err)?;
        fields
            .iter()
            .map(|x| {
                Ok(x.vector_components()
                    .map_err(err)?
                    .iter()
                    .map(|e| e.to_string_on(c))
                    .collect())
            })
            .collect()
    }

    /// Dimension of the dressing orbit through `point`.
    fn orbit_rank(&self, side_name: &str, point: Vec<f64>) -> PyResult<usize> {
        let fields = self.inner.dressing_fields(side(side_name)?).map_err(err)?;
        Ok(orbit_rank_scan(&fields, &[point]).map_err(err)?[0].1)
    }

    fn __repr__(&self) -> String {
        format!("PoissonLieGroup({:?})", self.inner.chart().coords())
    }
}

fn run_text<'py>(
    py: Python<'py>,
    text: &str,
    opts: RunOptions,
    strict: bool,
) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let m = Manifest::parse(text).map_err(err)?;
    let report = runner::run(&m, &m.checks, &opts);
    Ok((json_to_py(py, &report.to_json())?, report.exit_code(strict)))
}

/// Runs every check of a TOML manifest; returns `(report, exit_code)`.
#[pyfunction]
#[pyo3(signature = (text, samples = 100, tol = 1e-9, seed = 42, strict = false))]
fn run_manifest<'py>(
    py: Python<'py>,
    text: &str,
    samples: usize,
    tol: f64,
    seed: u64,
    strict: bool,
) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let opts = RunOptions {
        samples,
        tol,
        seed,
        step: DEFAULT_STEP,
        timing: false,
    };
    run_text(py, text, opts, strict)
}

/// Runs a built-in fixture manifest by name; returns `(report, exit_code)`.
#[pyfunction]
#[pyo3(signature = (name, samples = 100, tol = 1e-9, seed = 42, strict = false))]
fn run_fixture<'py>(
    py: Python<'py>,
    name: &str,
    samples: usize,
    tol: f64,
    seed: u64,
    strict: bool,
) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let text =
        builtin(name).ok_or_else(|| PyValueError::new_err(format!("unknown fixture `{name}`")))?;
    let opts = RunOptions {
        samples,
        tol,
        seed,
        step: DEFAULT_STEP,
        timing: false,
    };
    run_text(py, text, opts, strict)
}

#[pyfunction]
fn fixtures() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

#[pymodule]
fn poisred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBivector>()?;
    m.add_class::<PyBialgebra>()?;
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(run_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(run_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(fixtures, m)?)?;
    Ok(())
}
