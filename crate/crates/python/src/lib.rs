//! Python module `flagtutte`. Documents are the same JSON accepted by the
//! command line tool.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use flagtutte::io::{flag_to_json, matroid_to_json};
use flagtutte::{corpus, invariants, parse_document, verify, Error, FlagMatroid};

fn py_err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn flag_of(document: &str) -> Result<FlagMatroid, Error> {
    Ok(parse_document(document)?.input.into_flag())
}

/// `(polynomial, equivariant JSON, input hash)`.
fn compute_inner(invariant: &str, document: &str, equivariant: bool) -> Result<(String, Option<String>, u64), Error> {
    let r = invariants::compute(invariant, &flag_of(document)?, equivariant)?;
    Ok((r.polynomial.to_string(), r.equivariant.map(|e| e.to_json()), r.input_hash))
}

fn pseudo_bases_inner(document: &str) -> Result<Vec<Vec<usize>>, Error> {
    let fm = flag_of(document)?;
    let (m1, m2) = match fm.constituents() {
        [m] => (m, m),
        [a, b] => (a, b),
        _ => return Err(Error::Malformed(format!("expected a matroid quotient, got {} constituents", fm.len()))),
    };
    Ok(flagtutte::pseudo_bases(m1, m2)?.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect())
}

fn corpus_inner(kind: &str, max_n: usize, seed: u64) -> Result<Vec<String>, Error> {
    if max_n == 0 || max_n > 7 {
        return Err(Error::Malformed(format!("max_n must lie in 1..=7, got {max_n}")));
    }
    let docs: Vec<serde_json::Value> = match kind {
        "matroids" => corpus::matroids(max_n, seed).iter().map(matroid_to_json).collect(),
        "quotients" => corpus::quotients(max_n, seed)
            .into_iter()
            .map(|(a, b)| FlagMatroid::new(vec![a, b]).map(|f| flag_to_json(&f)))
            .collect::<Result<_, _>>()?,
        "flags" => corpus::flags(max_n, seed).iter().map(flag_to_json).collect(),
        other => return Err(Error::Malformed(format!("unknown corpus kind {other:?}"))),
    };
    Ok(docs.iter().map(serde_json::Value::to_string).collect())
}

/// Computes one invariant; returns a dict with `invariant`, `polynomial`,
/// `input_hash` and `equivariant` (JSON text or None).
#[pyfunction]
#[pyo3(signature = (invariant, document, equivariant = false))]
fn compute<'py>(py: Python<'py>, invariant: &str, document: &str, equivariant: bool) -> PyResult<Bound<'py, PyDict>> {
    let (polynomial, equivariant, hash) = compute_inner(invariant, document, equivariant).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("invariant", invariant)?;
    d.set_item("polynomial", polynomial)?;
    d.set_item("input_hash", format!("{hash:016x}"))?;
    d.set_item("equivariant", equivariant)?;
    Ok(d)
}

/// Runs an identity check; returns `(passed, report)`.
#[pyfunction]
#[pyo3(name = "verify", signature = (identity, document = None, seed = corpus::DEFAULT_SEED))]
fn verify_identity(identity: &str, document: Option<&str>, seed: u64) -> PyResult<(bool, String)> {
    let doc = document.map(parse_document).transpose().map_err(py_err)?;
    let report = verify::run_identity(identity, doc.as_ref(), seed).map_err(py_err)?;
    Ok((report.passed(), report.to_string()))
}

/// Pseudo-bases of a quotient as sorted lists of 1-based elements.
#[pyfunction]
fn pseudo_bases(document: &str) -> PyResult<Vec<Vec<usize>>> {
    pseudo_bases_inner(document).map_err(py_err)
}

/// The deterministic corpus as JSON documents.
#[pyfunction]
#[pyo3(signature = (kind = "matroids", max_n = 6, seed = corpus::DEFAULT_SEED))]
fn corpus_documents(kind: &str, max_n: usize, seed: u64) -> PyResult<Vec<String>> {
    corpus_inner(kind, max_n, seed).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "flagtutte")]
fn flagtutte_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_bases, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_documents, m)?)?;
    m.add("INVARIANTS", invariants::INVARIANTS.to_vec())?;
    m.add("IDENTITIES", verify::IDENTITIES.to_vec())?;
    Ok(())
}
