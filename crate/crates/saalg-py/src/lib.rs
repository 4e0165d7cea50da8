//! Python bindings. Algebras cross the boundary as presentations (JSON or
//! the `(x1 y2, y3) = 1` text form); reports come back as JSON strings.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use saalg::catalog::catalog_over_field;
use saalg::classify::{enumerate_and_classify, is_isomorphic, orbit_oracle_dim4, CatalogIndex, CensusMode, Verdict};
use saalg::engel::{check_group_laws, group_from_saa};
use saalg::field::{AnyField, Field, FieldSpec, Gf};
use saalg::saa_core::{Presentation, SAAlgebra};

create_exception!(saalg, SaalgError, PyException);

fn err(e: saalg::Error) -> PyErr {
    SaalgError::new_err(format!("{}: {e}", e.code()))
}

fn finite(spec: FieldSpec) -> PyResult<Gf> {
    match AnyField::new(spec).map_err(err)? {
        AnyField::Finite(g) => Ok(g),
        AnyField::Rational(_) => Err(err(saalg::Error::UnsupportedField)),
    }
}

fn field_flag(s: &str) -> PyResult<Gf> {
    finite(FieldSpec::parse_flag(s).map_err(err)?)
}

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match AnyField::new($spec).map_err(err)? {
            AnyField::Finite($f) => $body,
            AnyField::Rational($f) => $body,
        }
    };
}

fn series<F: Field>(f: &F, p: &Presentation) -> PyResult<(Vec<usize>, Vec<usize>, Option<usize>)> {
    let l = SAAlgebra::from_presentation(f, p).map_err(err)?;
    let s = l.central_series();
    Ok((s.lower_dims(), s.upper_dims(), s.class))
}

fn iso<F: Field>(f: &F, a: &Presentation, b: &Presentation, budget: Option<u64>) -> PyResult<String> {
    let la = SAAlgebra::from_presentation(f, a).map_err(err)?;
    let lb = SAAlgebra::from_presentation(f, b).map_err(err)?;
    Ok(match is_isomorphic(&la, &lb, budget).map_err(err)?.verdict {
        Verdict::Isomorphic(_) => "isomorphic",
        Verdict::NotIsomorphic => "none",
        Verdict::Unknown => "unknown",
    }
    .to_string())
}

/// A symplectic alternating algebra given by its presentation.
#[pyclass(name = "Algebra", module = "saalg")]
struct PyAlgebra {
    p: Presentation,
}

#[pymethods]
impl PyAlgebra {
    /// Parses JSON or text.
    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(PyAlgebra { p: Presentation::parse(s).map_err(err)? })
    }

    /// A catalog member over a finite field, e.g. `catalog("P8(2,3)", "gf7", ["3"])`.
    #[staticmethod]
    #[pyo3(signature = (label, field, params = Vec::new()))]
    fn catalog(label: &str, field: &str, params: Vec<String>) -> PyResult<Self> {
        let f = field_flag(field)?;
        let e = saalg::catalog::entry(label).map_err(err)?;
        let vals: Vec<u8> = params.iter().map(|s| f.parse_elem(s)).collect::<Result<_, _>>().map_err(err)?;
        Ok(PyAlgebra { p: e.presentation(&f, &vals).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.p.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.p.field.name()
    }

    fn to_json(&self) -> String {
        self.p.to_json()
    }

    fn to_text(&self) -> String {
        self.p.to_text()
    }

    fn lower_dims(&self) -> PyResult<Vec<usize>> {
        Ok(with_field!(self.p.field, |f| series(&f, &self.p))?.0)
    }

    fn upper_dims(&self) -> PyResult<Vec<usize>> {
        Ok(with_field!(self.p.field, |f| series(&f, &self.p))?.1)
    }

    /// `None` when the algebra is not nilpotent.
    fn nilpotency_class(&self) -> PyResult<Option<usize>> {
        Ok(with_field!(self.p.field, |f| series(&f, &self.p))?.2)
    }

    /// "isomorphic", "none" (exhaustive) or "unknown" (budget exhausted).
    #[pyo3(signature = (other, budget = None))]
    fn is_isomorphic(&self, other: &PyAlgebra, budget: Option<u64>) -> PyResult<String> {
        if self.p.field != other.p.field {
            return Err(err(saalg::Error::FieldMismatch));
        }
        with_field!(self.p.field, |f| iso(&f, &self.p, &other.p, budget))
    }

    /// Catalog key such as `P8(2,3)[1]`.
    #[pyo3(signature = (budget = None))]
    fn classify(&self, budget: Option<u64>) -> PyResult<String> {
        let f = finite(self.p.field)?;
        let l = SAAlgebra::from_presentation(&f, &self.p).map_err(err)?;
        let idx = CatalogIndex::new(&f, l.dim()).map_err(err)?.with_budget(budget);
        Ok(idx.classify(&l).map_err(err)?.key)
    }

    /// Power-commutator presentation of G(L); GF(3) only.
    fn group_presentation(&self) -> PyResult<String> {
        let f = finite(self.p.field)?;
        let l = SAAlgebra::from_presentation(&f, &self.p).map_err(err)?;
        Ok(group_from_saa(&l).map_err(err)?.presentation_text())
    }

    /// Runs the law checks on G(L) and returns the report as JSON.
    #[pyo3(signature = (samples = 1000, seed = 0))]
    fn group_laws(&self, samples: usize, seed: u64) -> PyResult<String> {
        let f = finite(self.p.field)?;
        let l = SAAlgebra::from_presentation(&f, &self.p).map_err(err)?;
        let g = group_from_saa(&l).map_err(err)?;
        let rep = check_group_laws(&g, samples, seed).map_err(err)?;
        Ok(serde_json::to_string(&rep).expect("report serializes"))
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, field={}, triples={})", self.p.dim(), self.p.field.name(), self.p.triples.len())
    }
}

/// Catalog keys of one dimension, abelian first.
#[pyfunction]
fn catalog_keys(field: &str, dim: usize) -> PyResult<Vec<String>> {
    let f = field_flag(field)?;
    Ok(catalog_over_field(&f, dim).map_err(err)?.iter().map(|m| m.key()).collect())
}

/// Census report as JSON; exhaustive unless `samples` is given.
#[pyfunction]
#[pyo3(signature = (field, n, samples = None, seed = 0))]
fn census(py: Python<'_>, field: &str, n: usize, samples: Option<u64>, seed: u64) -> PyResult<String> {
    let f = field_flag(field)?;
    let mode = match samples {
        Some(count) => CensusMode::Sample { count, seed },
        None => CensusMode::Exhaustive,
    };
    let rep = py.detach(|| enumerate_and_classify(&f, n, mode)).map_err(err)?;
    Ok(rep.to_json())
}

/// (forms, orbits, orbit sizes) for Sp_4 acting on trilinear forms.
#[pyfunction]
fn orbit_oracle(field: &str) -> PyResult<(usize, usize, Vec<usize>)> {
    let c = orbit_oracle_dim4(&field_flag(field)?).map_err(err)?;
    Ok((c.forms, c.orbits, c.sizes))
}

/// Runs the command-line interface in-process: (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = saalg::cli::run(std::iter::once("saalg".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "saalg")]
fn saalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SaalgError", m.py().get_type::<SaalgError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog_keys, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
