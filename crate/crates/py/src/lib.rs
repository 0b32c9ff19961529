//! Python bindings for bitsim.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bitsim_core::encoder::{self, BitCode};
use bitsim_core::engine::{all_pairs, sim_chunked, ChunkCache};
use bitsim_core::oracle::cross_check;
use bitsim_core::similarity::{self, check_properties, Subsumption};
use bitsim_core::{
    parse_expr, parse_tbox, AlgebraTables, EncodingContext, Error, SimilarityConfig,
};

type Matrix = (Vec<String>, Vec<Vec<Option<f64>>>);
type PropertyRows = Vec<(String, usize, usize, Option<String>)>;

create_exception!(
    bitsim,
    BitsimError,
    PyValueError,
    "Invalid input: parse, naming or encoding failure."
);
create_exception!(
    bitsim,
    UndefinedSimilarity,
    BitsimError,
    "Similarity is undefined for the given codes."
);

fn err(e: Error) -> PyErr {
    match e {
        Error::Undefined(_) => UndefinedSimilarity::new_err(e.to_string()),
        _ => BitsimError::new_err(e.to_string()),
    }
}

fn config(chunk: usize, penalty: bool) -> PyResult<SimilarityConfig> {
    if chunk == 0 {
        return Err(PyValueError::new_err("chunk must be at least 1"));
    }
    Ok(SimilarityConfig {
        generativity_penalty: penalty,
        chunk_size: chunk,
    })
}

/// A serialized bit-code.
#[pyclass(frozen, eq, hash, name = "Code", from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyCode {
    inner: BitCode,
}

#[pymethods]
impl PyCode {
    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    fn is_top(&self) -> bool {
        self.inner.is_top()
    }

    fn is_bottom(&self) -> bool {
        self.inner.is_bottom()
    }

    /// Positionwise projection of compound positions.
    fn projection(&self) -> PyCode {
        PyCode {
            inner: encoder::projection(&self.inner),
        }
    }

    fn __str__(&self) -> String {
        self.inner.serialize()
    }

    fn __repr__(&self) -> String {
        format!("Code('{}')", self.inner.serialize())
    }
}

/// A parsed terminology together with its encoding.
#[pyclass(frozen, name = "Context")]
struct PyContext {
    ctx: EncodingContext,
}

impl PyContext {
    fn code(&self, text: &str) -> PyResult<BitCode> {
        self.ctx
            .encode(&parse_expr(text).map_err(err)?)
            .map_err(err)
    }
}

#[pymethods]
impl PyContext {
    /// Parses a terminology in the line format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let tbox = parse_tbox(text).map_err(err)?;
        Ok(PyContext {
            ctx: EncodingContext::new(&tbox).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BitsimError::new_err(format!("{path}: {e}")))?;
        PyContext::new(&text)
    }

    /// Concept names, atomic ones first.
    fn concepts(&self) -> Vec<String> {
        self.ctx.tbox().concept_names()
    }

    #[getter]
    fn width(&self) -> usize {
        self.ctx.concept_width()
    }

    fn encode(&self, expr: &str) -> PyResult<PyCode> {
        Ok(PyCode {
            inner: self.code(expr)?,
        })
    }

    /// Reads a serialized code of this context.
    fn decode(&self, text: &str) -> PyResult<PyCode> {
        Ok(PyCode {
            inner: self.ctx.deserialize(text).map_err(err)?,
        })
    }

    #[pyo3(signature = (a, b, chunk = 64, penalty = false))]
    fn sim(&self, a: &str, b: &str, chunk: usize, penalty: bool) -> PyResult<f64> {
        let (x, y) = (self.code(a)?, self.code(b)?);
        Ok(
            sim_chunked(&x, &y, &config(chunk, penalty)?, &ChunkCache::default())
                .map_err(err)?
                .score,
        )
    }

    #[pyo3(signature = (a, b, penalty = false))]
    fn jaccard(&self, a: &str, b: &str, penalty: bool) -> PyResult<f64> {
        let (x, y) = (parse_expr(a).map_err(err)?, parse_expr(b).map_err(err)?);
        Ok(
            similarity::bitsim_jaccard(&x, &y, &self.ctx, &config(64, penalty)?)
                .map_err(err)?
                .score,
        )
    }

    /// True, False, or None when the codes cannot decide.
    fn subsumes(&self, a: &str, b: &str) -> PyResult<Option<bool>> {
        Ok(
            match similarity::subsumes(&self.code(a)?, &self.code(b)?).map_err(err)? {
                Subsumption::Holds => Some(true),
                Subsumption::Fails => Some(false),
                Subsumption::Unknown => None,
            },
        )
    }

    fn lcs(&self, a: &str, b: &str) -> PyResult<PyCode> {
        Ok(PyCode {
            inner: similarity::lcs_atomic(a, b, &self.ctx).map_err(err)?,
        })
    }

    /// Code-generativity of an expression or serialized code.
    fn fcg(&self, text: &str) -> PyResult<u64> {
        let code = match parse_expr(text) {
            Ok(e) => self.ctx.encode(&e).map_err(err)?,
            Err(_) => self.ctx.deserialize(text).map_err(err)?,
        };
        similarity::fcg(&code).map_err(err)
    }

    /// Similarity matrix over the given names (all concepts by default);
    /// undefined entries are None.
    #[pyo3(signature = (names = None, chunk = 64, penalty = false))]
    fn matrix(&self, names: Option<Vec<String>>, chunk: usize, penalty: bool) -> PyResult<Matrix> {
        let names = names.unwrap_or_else(|| self.concepts());
        let codes = names
            .iter()
            .map(|n| self.code(n))
            .collect::<PyResult<Vec<_>>>()?;
        let m = all_pairs(&codes, &config(chunk, penalty)?, &ChunkCache::default()).map_err(err)?;
        let rows = (0..m.size)
            .map(|i| (0..m.size).map(|j| m.get(i, j)).collect())
            .collect();
        Ok((names, rows))
    }

    /// Property suite rows as (property, trials, violations, first witness).
    #[pyo3(signature = (seed = 42, trials = 1000, penalty = false))]
    fn check(&self, seed: u64, trials: usize, penalty: bool) -> PyResult<PropertyRows> {
        let report =
            check_properties(self.ctx.tbox(), &config(64, penalty)?, seed, trials).map_err(err)?;
        Ok(report
            .rows
            .into_iter()
            .map(|r| (r.property, r.trials, r.violations, r.first_witness))
            .collect())
    }

    /// Oracle comparison as (summary line, discrepancy TSV, disagreement count).
    #[pyo3(signature = (trials = 1000, seed = 42))]
    fn crosscheck(&self, trials: usize, seed: u64) -> PyResult<(String, String, usize)> {
        let r = cross_check(self.ctx.tbox(), trials, seed).map_err(err)?;
        Ok((r.summary(), r.to_tsv(), r.disagreements()))
    }
}

/// Aggregate similarity of two codes from one context.
#[pyfunction]
#[pyo3(signature = (a, b, chunk = 64, penalty = false))]
fn sigma_hat(a: &PyCode, b: &PyCode, chunk: usize, penalty: bool) -> PyResult<f64> {
    Ok(
        similarity::sigma_hat(&a.inner, &b.inner, &config(chunk, penalty)?)
            .map_err(err)?
            .score,
    )
}

/// Names of failed algebra constraints; empty when the tables are sound.
#[pyfunction]
fn verify_tables() -> Vec<String> {
    bitsim_core::verify_tables(AlgebraTables::canonical())
        .failures()
        .map(|c| c.name.to_string())
        .collect()
}

#[pymodule]
fn bitsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyContext>()?;
    m.add_function(wrap_pyfunction!(sigma_hat, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tables, m)?)?;
    m.add("BitsimError", m.py().get_type::<BitsimError>())?;
    m.add(
        "UndefinedSimilarity",
        m.py().get_type::<UndefinedSimilarity>(),
    )?;
    Ok(())
}
