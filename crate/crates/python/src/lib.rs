use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use typeseq_core as core;
use typeseq_core::{FuzzMode, FuzzParams, RingDocument, RingModel, TypeSequenceReport};

create_exception!(typeseq, TypeseqError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    TypeseqError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(err)
}

/// A ring loaded from a JSON ring document, with its type sequence computed.
#[pyclass(frozen, module = "typeseq")]
struct Ring {
    doc: RingDocument,
    ring: RingModel,
    report: TypeSequenceReport,
}

impl Ring {
    fn from_model(doc: RingDocument, ring: RingModel) -> PyResult<Self> {
        let report = core::type_sequence(&ring).map_err(err)?;
        Ok(Ring { doc, ring, report })
    }
}

#[pymethods]
impl Ring {
    #[new]
    fn new(document: &str) -> PyResult<Self> {
        let doc = RingDocument::from_json(document).map_err(err)?;
        let loaded = doc.build().map_err(err)?;
        Ring::from_model(doc, loaded.ring)
    }

    /// dim_k K.
    #[getter]
    fn degree(&self) -> usize {
        self.ring.degree()
    }

    /// The conductor exponent N.
    #[getter]
    fn conductor(&self) -> usize {
        self.ring.conductor()
    }

    #[getter]
    fn semigroup(&self) -> Vec<usize> {
        self.ring.semigroup().s_list.clone()
    }

    #[getter]
    fn n_list(&self) -> Vec<usize> {
        self.report.n_list.clone()
    }

    #[getter]
    fn type_sequence(&self) -> Vec<usize> {
        self.report.t_list.clone()
    }

    #[getter]
    fn cm_type(&self) -> usize {
        self.report.cm_type
    }

    /// (length of the closure over R, length of R over the conductor).
    #[getter]
    fn lengths(&self) -> (usize, usize) {
        (self.report.ell_over, self.report.ell_rc)
    }

    #[getter]
    fn label(&self) -> &'static str {
        self.report.classification.label.as_str()
    }

    #[getter]
    fn is_gsr(&self) -> bool {
        self.ring.is_gsr()
    }

    fn associated_gsr(&self) -> PyResult<Ring> {
        let gsr = core::associated_gsr(&self.ring).map_err(err)?;
        Ring::from_model(self.doc.clone(), gsr)
    }

    /// Comparison with the associated GSR, as JSON.
    fn compare_gsr(&self) -> PyResult<String> {
        to_json(&core::compare_with_gsr(&self.ring).map_err(err)?)
    }

    /// Runs the invariant suite; returns `(name, passed, detail)` triples.
    fn check(&self) -> Vec<(&'static str, bool, Option<String>)> {
        core::run_suite(&self.ring)
            .checks
            .into_iter()
            .map(|c| (c.name, c.passed, c.detail))
            .collect()
    }

    /// Full analysis report as JSON.
    #[pyo3(signature = (emit_duals=false, emit_gsr=false, suite=false))]
    fn analyze(&self, emit_duals: bool, emit_gsr: bool, suite: bool) -> PyResult<String> {
        let mut doc = self.doc.clone();
        doc.options.emit_duals |= emit_duals;
        doc.options.emit_gsr |= emit_gsr;
        doc.options.suite |= suite;
        Ok(core::analyze(&doc).map_err(err)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!(
            "Ring(N={}, n={}, type_sequence={:?}, label={})",
            self.ring.conductor(),
            self.ring.degree(),
            self.report.t_list,
            self.label()
        )
    }
}

/// Analysis report for a JSON ring document.
#[pyfunction]
fn analyze_json(document: &str) -> PyResult<String> {
    let doc = RingDocument::from_json(document).map_err(err)?;
    Ok(core::analyze(&doc).map_err(err)?.to_json())
}

/// Combinatorial type sequence of the numerical semigroup with these generators.
#[pyfunction]
fn semigroup_type_sequence(generators: Vec<usize>) -> PyResult<Vec<usize>> {
    let s = core::semigroup_from_generators(&generators).map_err(err)?;
    core::semigroup_ts_oracle(&s).map_err(err)
}

/// Runs the invariant suite over a seeded random corpus; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (seed=42, count=200, max_n=4, max_conductor=12, mode="both"))]
fn fuzz(py: Python<'_>, seed: u64, count: usize, max_n: usize, max_conductor: usize, mode: &str) -> PyResult<String> {
    let params = FuzzParams {
        seed,
        max_n,
        max_conductor,
        count,
        mode: mode.parse::<FuzzMode>().map_err(err)?,
    };
    let report = py.detach(|| core::run_fuzz(&params)).map_err(err)?;
    to_json(&report)
}

#[pymodule]
fn typeseq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TypeseqError", m.py().get_type::<TypeseqError>())?;
    m.add_class::<Ring>()?;
    m.add_function(wrap_pyfunction!(analyze_json, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_type_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
