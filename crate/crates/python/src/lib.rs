//! Python bindings for `fractaldf`.

use fractaldf::cli::{run_experiment, Cache, Experiment, RunConfig};
use fractaldf::geometry::{vertex_graph, FractalKind};
use fractaldf::harmonic::SgHarmonic;
use fractaldf::network::{rho_estimate as rho_fit, sc_rnv as rnv, sg_cell_resistance, SolverOptions};
use fractaldf::walk::{green_oo_exact, WalkParams};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: fractaldf::Error) -> PyErr {
    match e {
        fractaldf::Error::InvalidArgument(_) | fractaldf::Error::LevelCap { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn kind(s: &str) -> PyResult<FractalKind> {
    FractalKind::parse(s).map_err(err)
}

/// The level-n vertex set of the SG (`"sg"`) or SC (`"sc"`).
#[pyclass(name = "VertexGraph", frozen)]
struct PyVertexGraph {
    inner: fractaldf::VertexGraph,
}

#[pymethods]
impl PyVertexGraph {
    #[new]
    fn new(kind_tag: &str, level: usize) -> PyResult<Self> {
        Ok(PyVertexGraph { inner: vertex_graph(kind(kind_tag)?, level).map_err(err)? })
    }

    #[getter]
    fn level(&self) -> usize {
        self.inner.level
    }

    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    fn num_cells(&self) -> usize {
        self.inner.num_cells()
    }

    /// Euclidean coordinates of every vertex.
    fn coords(&self) -> Vec<(f64, f64)> {
        (0..self.inner.num_vertices()).map(|v| self.inner.coords_f64(v)).collect()
    }

    /// `(i, j, multiplicity)` triples.
    fn edges(&self) -> Vec<(u32, u32, u8)> {
        self.inner.edges().to_vec()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

/// `R_n(0^n, 1^n)` on the SG cell graph.
#[pyfunction]
fn sg_resistance(n: usize) -> PyResult<f64> {
    let last = (3usize.pow(n as u32) - 1) / 2;
    Ok(sg_cell_resistance(n, 0, last).map_err(err)?.value)
}

/// `R_n^V` between the left and right sides of the SC.
#[pyfunction]
fn sc_rnv(n: usize) -> PyResult<f64> {
    let g = vertex_graph(FractalKind::SC, n).map_err(err)?;
    Ok(rnv(&g, &SolverOptions::default()).map_err(err)?.value)
}

/// `(rho_hat, beta_star_hat)` from `(n, R_n)` pairs.
#[pyfunction]
fn rho_estimate(values: Vec<(usize, f64)>) -> PyResult<(f64, f64)> {
    let e = rho_fit(&values).map_err(err)?;
    Ok((e.rho_hat, e.beta_star_hat))
}

#[pyfunction]
fn walkdim_estimate(kind_tag: &str, values: Vec<(usize, f64)>) -> PyResult<f64> {
    fractaldf::besov::walkdim_estimate(&values, kind(kind_tag)?).map_err(err)
}

/// `(B_n, E_n)` of the SG harmonic function with the given boundary values.
#[pyfunction]
fn sg_harmonic_energies(boundary: (f64, f64, f64), n: usize) -> PyResult<(f64, f64)> {
    let g = vertex_graph(FractalKind::SG, n).map_err(err)?;
    let u = SgHarmonic::new(boundary.0, boundary.1, boundary.2).on_graph(&g).map_err(err)?;
    Ok((
        fractaldf::energy::sg_pointwise_energy_bn(&g, &u).map_err(err)?,
        fractaldf::energy::kigami_energy_en(&g, &u).map_err(err)?,
    ))
}

/// Exact bracket for `G(o, o)` on the tree truncated at `depth_cut`.
#[pyfunction]
fn green_oo_bracket(lambda: f64, depth_cut: usize) -> PyResult<(f64, f64)> {
    green_oo_exact(&WalkParams::new(lambda), depth_cut).map_err(err)
}

/// Runs a CLI experiment with a `key = value` config and returns the report body.
#[pyfunction]
#[pyo3(signature = (name, config = ""))]
fn run(name: &str, config: &str) -> PyResult<String> {
    let e = Experiment::parse(name).map_err(err)?;
    let cfg = RunConfig::parse(config).map_err(err)?;
    let report = run_experiment(e, &cfg, &Cache::new(cfg.cache.clone())).map_err(err)?;
    String::from_utf8(report.body_bytes().map_err(err)?).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn fractaldf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVertexGraph>()?;
    m.add_function(wrap_pyfunction!(sg_resistance, m)?)?;
    m.add_function(wrap_pyfunction!(sc_rnv, m)?)?;
    m.add_function(wrap_pyfunction!(rho_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(walkdim_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(sg_harmonic_energies, m)?)?;
    m.add_function(wrap_pyfunction!(green_oo_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
