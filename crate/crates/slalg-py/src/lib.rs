//! Python bindings for the exact homology engine.
//!
//! The module exposes the main object-level operations (semigroup
//! validation, band classification, strong-semilattice decomposition,
//! Betti numbers over the rationals) plus `run`, which accepts an
//! instance-description JSON string and returns the full report JSON —
//! the same interface as the command-line tool.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use slalg::algebras::{regular_bimodule, semigroup_algebra};
use slalg::cli::{execute, parse_instance, Instance, RunConfig};
use slalg::diagrams::build_convolution;
use slalg::homology::{betti as betti_impl, DEFAULT_RESOURCE_LIMIT};
use slalg::semigroups::{
    band_class, decompose_strong_semilattice, free_semilattice, validate_semigroup, BandClass,
    FiniteSemigroup,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn semigroup_from(labels: Vec<String>, table: Vec<Vec<usize>>) -> PyResult<FiniteSemigroup> {
    validate_semigroup(labels, table).map_err(err)
}

/// Check a multiplication table for closure and associativity.
/// Returns the element labels on success and raises ValueError otherwise.
#[pyfunction]
fn validate(labels: Vec<String>, table: Vec<Vec<usize>>) -> PyResult<Vec<String>> {
    let s = semigroup_from(labels, table)?;
    Ok(s.labels().to_vec())
}

/// The multiplication table of the free semilattice on `k` generators.
#[pyfunction]
fn free_semilattice_table(k: usize) -> PyResult<Vec<Vec<usize>>> {
    let l = free_semilattice(k).map_err(err)?;
    Ok(l.semigroup().table().to_vec())
}

/// Classify a band: "not a band", "band", "normal band",
/// "rectangular band", or "semilattice".
#[pyfunction]
fn classify_band(labels: Vec<String>, table: Vec<Vec<usize>>) -> PyResult<String> {
    let s = semigroup_from(labels, table)?;
    Ok(match band_class(&s) {
        BandClass::NotBand => "not a band",
        BandClass::Band => "band",
        BandClass::NormalBand => "normal band",
        BandClass::RectangularBand => "rectangular band",
        BandClass::Semilattice => "semilattice",
    }
    .to_string())
}

/// Decompose a semigroup as a strong semilattice of groups or of
/// left-zero × right-zero factors; returns the shape labels and the
/// fibre assignment of each element, or None when no decomposition
/// exists.
#[pyfunction]
fn decompose(
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
) -> PyResult<Option<(Vec<String>, Vec<usize>)>> {
    let s = semigroup_from(labels, table)?;
    let n = s.size();
    Ok(decompose_strong_semilattice(&s).map(|dec| {
        let shape = dec.data.shape.semigroup().labels().to_vec();
        let offsets = dec.data.offsets();
        let mut fibre_of = vec![0usize; n];
        for (g, &orig) in dec.original_of.iter().enumerate() {
            let e = offsets.iter().rposition(|&o| o <= g).unwrap();
            fibre_of[orig] = e;
        }
        (shape, fibre_of)
    }))
}

/// Rational Betti numbers of the semigroup algebra with regular
/// coefficients, in degrees 0..=max_degree.
#[pyfunction]
#[pyo3(signature = (labels, table, max_degree = 2))]
fn betti(labels: Vec<String>, table: Vec<Vec<usize>>, max_degree: usize) -> PyResult<Vec<usize>> {
    let s = semigroup_from(labels, table)?;
    let a = semigroup_algebra(&s);
    let rep = betti_impl(&a, &regular_bimodule(&a), max_degree, DEFAULT_RESOURCE_LIMIT)
        .map_err(err)?;
    Ok(rep.betti_vector())
}

/// Rational Betti numbers of an instance given as JSON text, in the
/// same format the command-line tool accepts.
#[pyfunction]
#[pyo3(signature = (instance_json, max_degree = 2))]
fn betti_of_instance(instance_json: &str, max_degree: usize) -> PyResult<Vec<usize>> {
    let inst = parse_instance(instance_json).map_err(err)?;
    let a = match inst.instance {
        Instance::Semigroup(s) => semigroup_algebra(&s),
        Instance::Diagram(d) => build_convolution(&d).map_err(err)?.algebra,
    };
    let rep = betti_impl(&a, &regular_bimodule(&a), max_degree, DEFAULT_RESOURCE_LIMIT)
        .map_err(err)?;
    Ok(rep.betti_vector())
}

/// Run a command ("validate", "homology", "cohomology", "decompose",
/// "diagonal", "verify") on an instance JSON string and return the
/// report as a JSON string. `suites` only applies to "verify".
#[pyfunction]
#[pyo3(signature = (command, instance_json, suites = None, max_degree = 2, resource_limit = None, direct_solve = false))]
fn run(
    command: &str,
    instance_json: &str,
    suites: Option<Vec<String>>,
    max_degree: usize,
    resource_limit: Option<usize>,
    direct_solve: bool,
) -> PyResult<String> {
    let cfg = RunConfig {
        max_degree,
        resource_limit: resource_limit.unwrap_or(DEFAULT_RESOURCE_LIMIT),
        direct_solve,
    };
    let suites = suites.unwrap_or_else(|| vec!["all".to_string()]);
    let refs: Vec<&str> = suites.iter().map(String::as_str).collect();
    let rep = execute(command, &refs, instance_json, &cfg, None).map_err(err)?;
    Ok(rep.to_json())
}

/// The bundled example instances as a dict of name -> JSON text.
#[pyfunction]
fn fixtures() -> Vec<(String, String)> {
    slalg::fixtures::shipped_fixtures()
}

#[pymodule]
fn slalg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(free_semilattice_table, m)?)?;
    m.add_function(wrap_pyfunction!(classify_band, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(betti, m)?)?;
    m.add_function(wrap_pyfunction!(betti_of_instance, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(fixtures, m)?)?;
    Ok(())
}
