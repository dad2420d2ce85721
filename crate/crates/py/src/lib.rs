//! Python bindings: graphs, exact zeta polynomials, voltage bundles, the
//! dihedral factorization and Grigorchuk tower diagnostics.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyMemoryError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ihara_core::dihedral::{build_blocks, build_dihedral_setup, dihedral_zeta_factors};
use ihara_core::graph::{families, HalfEdgeGraph};
use ihara_core::towers::{
    grigorchuk_log_zeta as closed_form, normalized_log_zeta, schreier_tower, Automaton, IntegrandReading,
    SchreierConvention, SeriesConfig, DEFAULT_MAX_DEPTH,
};
use ihara_core::voltage::{build_bundle, decomposed_adjacency, VoltageAssignment};
use ihara_core::zeta::{self as zeta, ZetaConfig, ZetaRational};
use ihara_core::{io, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit(msg) => PyMemoryError::new_err(msg),
        Error::NonConvergence(msg) => PyArithmeticError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rows(m: &ihara_core::graph::IntMatrix) -> Vec<Vec<i64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Finite multigraph in the dart model.
#[pyclass(name = "Graph", frozen)]
pub struct PyGraph {
    inner: HalfEdgeGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: usize, tails: Vec<usize>, involution: Vec<usize>) -> PyResult<Self> {
        let inner = HalfEdgeGraph::new(vertices, tails, involution).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_edges(vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = HalfEdgeGraph::from_edges(vertices, &edges).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_graph(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        Self {
            inner: families::cycle(n),
        }
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self {
            inner: families::complete(n),
        }
    }

    #[staticmethod]
    fn petersen() -> Self {
        Self {
            inner: families::petersen(),
        }
    }

    #[staticmethod]
    fn circulant(n: usize, connection_set: Vec<usize>) -> Self {
        Self {
            inner: families::circulant(n, &connection_set),
        }
    }

    fn to_json(&self) -> String {
        io::graph_to_json(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn dart_count(&self) -> usize {
        self.inner.dart_count()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn adjacency(&self) -> Vec<Vec<i64>> {
        rows(&self.inner.adjacency_matrix())
    }

    fn has_half_loops(&self) -> bool {
        self.inner.has_half_loops()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, darts={})",
            self.inner.vertex_count(),
            self.inner.dart_count()
        )
    }
}

/// `det(I - zT)` and the Bass form of a graph's reciprocal zeta function.
#[pyclass(name = "ZetaRational", frozen)]
pub struct PyZetaRational {
    inner: ZetaRational,
}

#[pymethods]
impl PyZetaRational {
    #[getter]
    fn hashimoto_det(&self) -> Vec<BigInt> {
        self.inner.hashimoto_det.coefficients().to_vec()
    }

    #[getter]
    fn bass_det(&self) -> Vec<BigInt> {
        self.inner.bass_det.coefficients().to_vec()
    }

    #[getter]
    fn bass_exponent(&self) -> i64 {
        self.inner.bass_exponent
    }

    fn bass_identity_holds(&self) -> bool {
        self.inner.bass_identity_holds()
    }

    /// `ζ(z)^{-1}` at a complex point.
    fn evaluate(&self, z: Complex64) -> Complex64 {
        zeta::evaluate_zeta_inverse(&self.inner, z).value
    }
}

#[pyfunction]
fn zeta_inverse(graph: &PyGraph) -> PyResult<PyZetaRational> {
    let inner = zeta::zeta_inverse(&graph.inner, &ZetaConfig::from_env()).map_err(to_py)?;
    Ok(PyZetaRational { inner })
}

/// `[N_1, ..., N_max_r]`, closed non-backtracking tailless walks.
#[pyfunction]
fn closed_geodesic_counts(graph: &PyGraph, max_r: usize) -> PyResult<Vec<u128>> {
    zeta::closed_geodesic_counts(&graph.inner, max_r).map_err(to_py)
}

/// Number of primitive cycle classes of each length up to `max_len`.
#[pyfunction]
#[pyo3(signature = (graph, max_len, node_budget = zeta::DEFAULT_NODE_BUDGET))]
fn primitive_cycle_counts(graph: &PyGraph, max_len: usize, node_budget: u64) -> PyResult<BTreeMap<usize, u64>> {
    Ok(zeta::primitive_cycle_oracle(&graph.inner, max_len, node_budget)
        .map_err(to_py)?
        .counts)
}

/// Voltage assignment on the darts of a base graph with values in Aut(fiber).
#[pyclass(name = "VoltageAssignment", frozen)]
pub struct PyVoltageAssignment {
    inner: VoltageAssignment,
}

#[pymethods]
impl PyVoltageAssignment {
    /// Darts missing from `voltages` get the inverse of their reverse's voltage, or the identity.
    #[new]
    fn new(base: &PyGraph, fiber: &PyGraph, voltages: BTreeMap<usize, Vec<usize>>) -> PyResult<Self> {
        let partial = voltages
            .into_iter()
            .map(|(d, images)| Ok((d, ihara_core::voltage::Permutation::new(images)?)))
            .collect::<ihara_core::Result<BTreeMap<_, _>>>()
            .map_err(to_py)?;
        let inner =
            VoltageAssignment::from_partial(base.inner.clone(), fiber.inner.clone(), &partial).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_voltage(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        io::voltage_to_json(&self.inner)
    }

    /// Total graph of the bundle.
    fn build_bundle(&self) -> PyGraph {
        PyGraph {
            inner: build_bundle(&self.inner).total,
        }
    }

    /// `Σ_γ A_γ ⊗ P_γ + I ⊗ A_F`.
    fn decomposed_adjacency(&self) -> Vec<Vec<i64>> {
        rows(&decomposed_adjacency(&self.inner))
    }
}

/// Factors `f`, `g_t`, `h` and their assembled product at `z` for seeded
/// random dihedral voltages on `base` with fiber the circulant `C_n(S)`,
/// together with the exact `ζ^{-1}(z)` of the bundle.
#[pyfunction]
#[pyo3(signature = (base, n, connection_set, z, seed = 0))]
fn dihedral_factors(
    py: Python<'_>,
    base: &PyGraph,
    n: usize,
    connection_set: Vec<usize>,
    z: Complex64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let setup = build_dihedral_setup(n, &connection_set).map_err(to_py)?;
    let va = setup.random_voltages(&base.inner, &mut ChaCha8Rng::seed_from_u64(seed));
    let fact = build_blocks(&setup, &va).map_err(to_py)?;
    let exact = zeta::zeta_inverse(&build_bundle(&va).total, &ZetaConfig::from_env()).map_err(to_py)?;
    let fz = dihedral_zeta_factors(&fact, z);
    let out = pyo3::types::PyDict::new(py);
    out.set_item("f", fz.f)?;
    out.set_item("g", fz.g)?;
    out.set_item("h", fz.h)?;
    out.set_item("assembled", fz.assembled)?;
    out.set_item("exact", exact.hashimoto_det.eval(z))?;
    out.set_item("disc_radius", fact.disc_radius())?;
    Ok(out.into_any().unbind())
}

/// Closed-form normalized log-zeta of the Grigorchuk limit graph.
#[pyfunction]
#[pyo3(signature = (z, raw = false))]
fn grigorchuk_log_zeta(z: Complex64, raw: bool) -> PyResult<Complex64> {
    let reading = if raw {
        IntegrandReading::Raw
    } else {
        IntegrandReading::Logarithmic
    };
    Ok(closed_form(z, reading).map_err(to_py)?.value)
}

/// Normalized log-zeta of Grigorchuk Schreier levels `1..=depth` at each `z`;
/// one list of per-level values for each sample point.
#[pyfunction]
#[pyo3(signature = (depth, z, doubled = true, order = 30))]
fn grigorchuk_tower(depth: usize, z: Vec<Complex64>, doubled: bool, order: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let convention = if doubled {
        SchreierConvention::Doubled
    } else {
        SchreierConvention::HalfLoops
    };
    let tower = schreier_tower(&Automaton::grigorchuk(), depth, convention, DEFAULT_MAX_DEPTH).map_err(to_py)?;
    let config = SeriesConfig {
        order,
        ..SeriesConfig::default()
    };
    let series = normalized_log_zeta(&tower, &config, &z).map_err(to_py)?;
    Ok((0..z.len())
        .map(|i| series.levels.iter().map(|l| l.values[i]).collect())
        .collect())
}

#[pymodule]
pub fn ihara(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyZetaRational>()?;
    m.add_class::<PyVoltageAssignment>()?;
    m.add_function(wrap_pyfunction!(zeta_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(closed_geodesic_counts, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_cycle_counts, m)?)?;
    m.add_function(wrap_pyfunction!(dihedral_factors, m)?)?;
    m.add_function(wrap_pyfunction!(grigorchuk_log_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(grigorchuk_tower, m)?)?;
    Ok(())
}
