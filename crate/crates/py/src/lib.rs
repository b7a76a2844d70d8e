// the pyfunction expansion converts PyErr into itself
#![allow(clippy::useless_conversion)]

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use globop::algebra::{check_all, LawBounds};
use globop::coherence::{verify as verify_axiom, Axiom};
use globop::collections::build_cn;
use globop::enumerate::enumerate_cells;
use globop::models::parse_algebra;
use globop::pasting::StarOrder;
use globop::term::Operad;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The collection C^n truncated at `max_dim`, in the collection text format.
#[pyfunction]
#[pyo3(signature = (n, max_dim = 3))]
pub fn collection(n: usize, max_dim: usize) -> PyResult<String> {
    Ok(build_cn(n, max_dim).map_err(value_err)?.to_text())
}

/// Normal forms of dimension `dim` with at most `size` constructors.
#[pyfunction]
#[pyo3(signature = (operad, dim, size, max_dim = 3))]
pub fn enumerate(operad: usize, dim: usize, size: usize, max_dim: usize) -> PyResult<Vec<String>> {
    let op = Operad::new(Arc::new(build_cn(operad, max_dim).map_err(value_err)?));
    Ok(enumerate_cells(&op, dim, size).iter().map(|t| t.to_string()).collect())
}

/// `(passed, report)` for "AD" or "CAD".
#[pyfunction]
#[pyo3(signature = (axiom, orientation = "both"))]
pub fn verify(axiom: &str, orientation: &str) -> PyResult<(bool, String)> {
    let axiom: Axiom = axiom.parse().map_err(value_err)?;
    let orders = match orientation {
        "both" => vec![StarOrder::Diagrammatic, StarOrder::Applicative],
        o => vec![o.parse::<StarOrder>().map_err(value_err)?],
    };
    let v = verify_axiom(axiom, &orders).map_err(value_err)?;
    Ok((v.passed(), v.report()))
}

/// `(ok, lines, witnesses)` for an algebra given in the algebra text format.
#[pyfunction]
#[pyo3(signature = (text, size = 3, leaves = 2))]
pub fn check_algebra(text: &str, size: usize, leaves: usize) -> PyResult<(bool, Vec<String>, Vec<String>)> {
    let alg = parse_algebra(text).map_err(value_err)?;
    let rep = check_all(alg.as_dyn(), LawBounds { size, leaves }).map_err(value_err)?;
    Ok((rep.ok, rep.lines, rep.witnesses))
}

#[pymodule]
fn globop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(collection, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(check_algebra, m)?)?;
    Ok(())
}
