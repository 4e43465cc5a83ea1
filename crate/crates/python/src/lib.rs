//! Python bindings: assemblies, tilings, verification and the oracles.

use std::collections::BTreeSet;

use interlock::assembly::{export_obj, load_assembly, save_assembly, AnyAssembly, Assembly as CoreAssembly};
use interlock::contacts::find_contacts;
use interlock::generators::{
    cube_grid, interlocked_cubes, interlocked_cubes_centered, rhomblock, FramePolicy, GridSpec,
};
use interlock::geometry::{Rational, Scalar, DEFAULT_TOLERANCE};
use interlock::lozenge::{
    self, assemble_rhomblocks, boundary_frame, brick_tiling, fingerprint, flip_at, flip_shuffle,
    orientation_counts, tiling_from_json, tiling_to_json, validate_tiling, Variant,
};
use interlock::matrix::{
    build_matrix, edge_rank_check as core_edge_rank_check, reduce_rows, InterlockingMatrix, Mode,
};
use interlock::solver::{
    fm_oracle as core_fm_oracle, verify, verify_matrix as core_verify_matrix, Verdict as CoreVerdict,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

create_exception!(pyinterlock, InterlockError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    InterlockError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "full" => Ok(Mode::Full),
        "translational" => Ok(Mode::Translational),
        other => Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    }
}

fn parse_variant(v: &str) -> PyResult<Variant> {
    v.parse().map_err(PyValueError::new_err)
}

fn grid_policy(frame: Option<Vec<usize>>) -> FramePolicy {
    match frame {
        None => FramePolicy::Border,
        Some(ids) => FramePolicy::Explicit(ids.into_iter().collect()),
    }
}

/// Outcome of a verification run.
#[pyclass(frozen, skip_from_py_object)]
struct Verdict {
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    witness: Option<Vec<f64>>,
    doc: Value,
}

impl<S: Scalar> From<CoreVerdict<S>> for Verdict {
    fn from(v: CoreVerdict<S>) -> Self {
        Verdict {
            status: v.status.as_str().to_string(),
            witness: v
                .witness
                .as_ref()
                .map(|w| w.values().iter().map(|x| x.to_f64()).collect()),
            doc: v.to_json(),
        }
    }
}

#[pymethods]
impl Verdict {
    #[getter]
    fn interlocked(&self) -> bool {
        self.status == "interlocked"
    }

    /// The certificate as a dict.
    #[getter]
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.doc["certificate"])
    }

    fn to_json(&self) -> String {
        self.doc.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Verdict(status={:?})", self.status)
    }
}

/// A block assembly in either the exact or the floating backend.
#[pyclass(frozen, skip_from_py_object)]
struct Assembly {
    inner: AnyAssembly,
}

impl Assembly {
    fn matrix_rows(&self, mode: Mode, reduced: bool) -> Vec<Vec<f64>> {
        fn rows<S: Scalar>(a: &CoreAssembly<S>, mode: Mode, reduced: bool) -> Vec<Vec<f64>> {
            let m = build_matrix(a, mode);
            let m = if reduced { reduce_rows(&m) } else { m };
            m.dense()
                .iter()
                .map(|r| r.iter().map(|v| v.to_f64()).collect())
                .collect()
        }
        match &self.inner {
            AnyAssembly::Exact(a) => rows(a, mode, reduced),
            AnyAssembly::Float(a) => rows(a, mode, reduced),
        }
    }
}

#[pymethods]
impl Assembly {
    /// Parses an assembly document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(err)?;
        let loaded = load_assembly(&value).map_err(err)?;
        Ok(Assembly {
            inner: loaded.assembly,
        })
    }

    /// Unit cubes on an `nx × ny` grid; the border is framed unless `frame` is given.
    #[staticmethod]
    #[pyo3(signature = (nx, ny, frame=None))]
    fn cube_grid(nx: usize, ny: usize, frame: Option<Vec<usize>>) -> Self {
        Assembly {
            inner: cube_grid(&GridSpec::new(nx, ny, grid_policy(frame))).into(),
        }
    }

    /// Side-2 cubes on the skew lattice.
    #[staticmethod]
    #[pyo3(signature = (n, centered=false, frame=None))]
    fn skew_cubes(n: usize, centered: bool, frame: Option<Vec<usize>>) -> Self {
        let policy = grid_policy(frame);
        let a = if centered {
            interlocked_cubes_centered(n, &policy)
        } else {
            interlocked_cubes(n, &policy)
        };
        Assembly { inner: a.into() }
    }

    /// A single unframed RhomBlock.
    #[staticmethod]
    fn rhomblock() -> PyResult<Self> {
        let a = CoreAssembly::new(vec![rhomblock()], BTreeSet::new(), DEFAULT_TOLERANCE).map_err(err)?;
        Ok(Assembly { inner: a.into() })
    }

    fn to_json(&self) -> String {
        match &self.inner {
            AnyAssembly::Exact(a) => save_assembly(a).to_string(),
            AnyAssembly::Float(a) => save_assembly(a).to_string(),
        }
    }

    #[getter]
    fn backend(&self) -> &'static str {
        self.inner.backend().as_str()
    }

    #[getter]
    fn frame(&self) -> Vec<usize> {
        self.inner.frame().iter().copied().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn with_frame(&self, frame: Vec<usize>) -> PyResult<Self> {
        Ok(Assembly {
            inner: self.inner.with_frame(frame).map_err(err)?,
        })
    }

    /// The same blocks in the floating backend.
    fn to_float(&self) -> Self {
        Assembly {
            inner: self.inner.to_float().into(),
        }
    }

    /// The validity report as a dict.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.validate()).map_err(err)?)
    }

    fn contact_count(&self) -> usize {
        match &self.inner {
            AnyAssembly::Exact(a) => find_contacts(a).len(),
            AnyAssembly::Float(a) => find_contacts(a).len(),
        }
    }

    /// Dense interlocking matrix, as floats.
    #[pyo3(signature = (mode="full", reduced=true))]
    fn matrix(&self, mode: &str, reduced: bool) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.matrix_rows(parse_mode(mode)?, reduced))
    }

    #[pyo3(signature = (mode="full"))]
    fn verify(&self, py: Python<'_>, mode: &str) -> PyResult<Verdict> {
        let mode = parse_mode(mode)?;
        let inner = &self.inner;
        py.detach(|| match inner {
            AnyAssembly::Exact(a) => verify(a, mode).map(Verdict::from),
            AnyAssembly::Float(a) => verify(a, mode).map(Verdict::from),
        })
        .map_err(err)
    }

    fn export_obj(&self) -> String {
        match &self.inner {
            AnyAssembly::Exact(a) => export_obj(a),
            AnyAssembly::Float(a) => export_obj(a),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Assembly(blocks={}, frame={}, backend={})",
            self.inner.len(),
            self.inner.frame().len(),
            self.backend()
        )
    }
}

/// A lozenge tiling of a region of the triangular lattice.
#[pyclass(skip_from_py_object)]
struct Tiling {
    inner: lozenge::Tiling,
}

#[pymethods]
impl Tiling {
    /// The brick tiling of the hexagon with sides `a, b, c`.
    #[staticmethod]
    fn hexagon(a: i64, b: i64, c: i64) -> PyResult<Self> {
        if a < 1 || b < 1 || c < 1 {
            return Err(PyValueError::new_err(format!(
                "hexagon sides must be at least 1, got ({a}, {b}, {c})"
            )));
        }
        Ok(Tiling {
            inner: brick_tiling(a as usize, b as usize, c as usize).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(err)?;
        Ok(Tiling {
            inner: tiling_from_json(&value).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        tiling_to_json(&self.inner).to_string()
    }

    /// A copy after `steps` random hexagon flips.
    fn shuffled(&self, steps: usize, seed: u64) -> Self {
        Tiling {
            inner: flip_shuffle(&self.inner, steps, seed),
        }
    }

    /// Flips the unit hexagon around lattice point `(u, v)` in place.
    fn flip(&mut self, u: i64, v: i64) -> bool {
        flip_at(&mut self.inner, u, v)
    }

    fn is_valid(&self) -> bool {
        validate_tiling(&self.inner)
    }

    #[getter]
    fn lozenges(&self) -> Vec<(i64, i64, u8)> {
        self.inner
            .lozenges
            .iter()
            .map(|l| (l.u, l.v, l.orientation))
            .collect()
    }

    fn orientation_counts(&self) -> [usize; 3] {
        orientation_counts(&self.inner)
    }

    fn fingerprint(&self) -> String {
        fingerprint(&self.inner)
    }

    fn boundary_frame(&self) -> Vec<usize> {
        boundary_frame(&self.inner).into_iter().collect()
    }

    /// RhomBlock assembly; framed by the boundary unless `boundary=False`.
    #[pyo3(signature = (variant="first", boundary=true))]
    fn assemble(&self, variant: &str, boundary: bool) -> PyResult<Assembly> {
        let a = assemble_rhomblocks(&self.inner, parse_variant(variant)?).map_err(err)?;
        let a = if boundary {
            a.with_frame(boundary_frame(&self.inner)).map_err(err)?
        } else {
            a
        };
        Ok(Assembly { inner: a.into() })
    }

    fn __len__(&self) -> usize {
        self.inner.lozenges.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Tiling(lozenges={}, triangles={})",
            self.inner.lozenges.len(),
            self.inner.region.len()
        )
    }
}

fn exact_rows(rows: Vec<Vec<i64>>) -> PyResult<(Vec<Vec<Rational>>, usize)> {
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok((
        rows.into_iter()
            .map(|r| r.into_iter().map(Rational::from_i64).collect())
            .collect(),
        ncols,
    ))
}

/// Kernel and strict-LP classification of an integer matrix (exact backend).
#[pyfunction]
fn verify_matrix(rows: Vec<Vec<i64>>) -> PyResult<Verdict> {
    let (rows, ncols) = exact_rows(rows)?;
    let m: InterlockingMatrix<Rational> = InterlockingMatrix::from_dense(rows, ncols, 0.0);
    core_verify_matrix(&m).map(Verdict::from).map_err(err)
}

/// Fourier–Motzkin check of whether `{x : Ax ≥ 0}` is `{0}`.
#[pyfunction]
fn fm_trivial_cone(rows: Vec<Vec<i64>>) -> PyResult<bool> {
    let (rows, ncols) = exact_rows(rows)?;
    core_fm_oracle(&rows, ncols).map(|r| r.trivial_cone).map_err(err)
}

/// Rank and determinant report of the edge fan over `v1 v2` with apex `p`.
#[pyfunction]
#[pyo3(signature = (v1, v2, p, eps=1e-9))]
fn edge_rank_check<'py>(
    py: Python<'py>,
    v1: [f64; 2],
    v2: [f64; 2],
    p: [f64; 2],
    eps: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = core_edge_rank_check(v1, v2, p, eps).map_err(err)?;
    to_py(py, &serde_json::to_value(rep).map_err(err)?)
}

#[pymodule]
fn pyinterlock(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InterlockError", m.py().get_type::<InterlockError>())?;
    m.add_class::<Assembly>()?;
    m.add_class::<Tiling>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(verify_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(fm_trivial_cone, m)?)?;
    m.add_function(wrap_pyfunction!(edge_rank_check, m)?)?;
    Ok(())
}
