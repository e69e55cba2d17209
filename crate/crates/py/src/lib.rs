//! Python bindings: the constructed plane, the reduction compiler, sentence
//! evaluation and the verification suites.

use std::path::Path;

use normlogic::geometry::{construct_l1, intersect_circles, is_rotund, Vec2, L1};
use normlogic::harness::{cmd_verify, load_l1, Config, ConfigOverrides, ParamsDoc};
use normlogic::logic::{
    eval_bounded, eval_qf, parse_sentence, print_sentence, universal_matrix, Assignment, BoundedOutcome, Formula,
    Gadgets, Sampler, VectorTerm,
};
use normlogic::reduction::{bounded_nat_sat as nat_sat, compile as compile_q, parse_arith as parse_q, space_for_dimension};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn load_config(path: Option<&str>, seed: Option<u64>) -> PyResult<Config> {
    let overrides = ConfigOverrides { seed, ..Default::default() };
    Config::resolve(path.map(Path::new), &overrides).map_err(value_err)
}

/// The plane 𝓛₁ built from a configuration or loaded from a params file.
#[pyclass(frozen, module = "normlogic_py")]
struct Plane {
    inner: L1,
    hash: String,
}

#[pymethods]
impl Plane {
    /// Builds the plane; `config` is the path of a JSON config file.
    #[staticmethod]
    #[pyo3(signature = (config=None))]
    fn construct(config: Option<&str>) -> PyResult<Self> {
        let cfg = load_config(config, None)?;
        let m = cfg.resolved_m().map_err(value_err)?;
        let l1 = construct_l1(m, &cfg.construction_options()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let hash = ParamsDoc::from_l1(&l1).hash();
        Ok(Plane { inner: l1, hash })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let (l1, hash) = load_l1(Some(Path::new(path)), &Config::default()).map_err(value_err)?;
        Ok(Plane { inner: l1, hash })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.params.m
    }

    #[getter]
    fn q(&self) -> String {
        self.inner.params.q.to_string()
    }

    #[getter]
    fn r(&self) -> String {
        self.inner.params.r.to_string()
    }

    #[getter]
    fn d(&self) -> f64 {
        self.inner.params.d
    }

    /// `(w1, w2, w3)` as coordinate pairs.
    #[getter]
    fn w(&self) -> [(f64, f64); 3] {
        let p = &self.inner.params;
        [p.w1, p.w2, p.w3].map(|w| (w.x, w.y))
    }

    #[getter]
    fn params_hash(&self) -> String {
        self.hash.clone()
    }

    fn params_json(&self) -> String {
        ParamsDoc::from_l1(&self.inner).to_json()
    }

    fn norm(&self, x: f64, y: f64) -> f64 {
        self.inner.norm(Vec2::new(x, y))
    }

    /// `n` points of the unit circle at equally spaced angles.
    fn boundary(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let p = self.inner.boundary.boundary_point(std::f64::consts::TAU * i as f64 / n as f64);
                (p.x, p.y)
            })
            .collect()
    }

    #[pyo3(signature = (x, y, tol=1e-9))]
    fn is_rotund(&self, x: f64, y: f64, tol: f64) -> PyResult<bool> {
        is_rotund(&self.inner.space(), Vec2::new(x, y), tol).map_err(value_err)
    }

    /// Classification and components of `S(p, r) ∩ S(q, s)`. Components are
    /// lists of points: one for a point, two for a segment, three (with the
    /// corner in the middle) for a bent segment.
    #[pyo3(signature = (p, r, q, s, grid=16384, tol=1e-9))]
    fn intersect(
        &self,
        p: (f64, f64),
        r: f64,
        q: (f64, f64),
        s: f64,
        grid: usize,
        tol: f64,
    ) -> PyResult<(String, Vec<Vec<(f64, f64)>>)> {
        let rep = intersect_circles(&self.inner.space(), Vec2::new(p.0, p.1), r, Vec2::new(q.0, q.1), s, grid, tol)
            .map_err(value_err)?;
        let comps = rep
            .components
            .iter()
            .map(|c| c.points().into_iter().map(|v| (v.x, v.y)).collect())
            .collect();
        Ok((format!("{:?}", rep.classification), comps))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner.params;
        format!("Plane(M={}, q={}, r={}, d={:.12})", p.m, p.q, p.r, p.d)
    }
}

fn default_plane(plane: Option<&Plane>) -> PyResult<L1> {
    match plane {
        Some(p) => Ok(p.inner.clone()),
        None => Ok(Plane::construct(None)?.inner),
    }
}

/// Canonical form of an arithmetic formula; raises `ValueError` on a
/// syntax error.
#[pyfunction]
fn parse_arith(text: &str) -> PyResult<String> {
    parse_q(text).map(|q| q.to_string()).map_err(value_err)
}

/// First witness in `[0, bound]^k` in lexicographic order, or `None`.
#[pyfunction]
fn bounded_nat_sat(text: &str, bound: u64) -> PyResult<Option<Vec<u64>>> {
    Ok(nat_sat(&parse_q(text).map_err(value_err)?, bound))
}

/// Compiles an arithmetic formula into the sentences `A`, `B` (or `A'`,
/// `B'` when `dim > 2`). Returns a dict with the sentence texts, their
/// names, `m`, `k`, `aia_shape` and the variable lists.
#[pyfunction]
#[pyo3(signature = (formula, dim=2, plane=None))]
fn compile<'py>(py: Python<'py>, formula: &str, dim: usize, plane: Option<&Plane>) -> PyResult<Bound<'py, PyDict>> {
    let l1 = default_plane(plane)?;
    let q = parse_q(formula).map_err(value_err)?;
    let out = compile_q(&q, dim, &l1.params).map_err(value_err)?;
    let (na, nb) = out.sentence_names();
    let d = PyDict::new(py);
    d.set_item("names", (na, nb))?;
    d.set_item("a", print_sentence(&out.a))?;
    d.set_item("b", print_sentence(&out.b))?;
    d.set_item("m", out.manifest.m)?;
    d.set_item("k", out.manifest.k)?;
    d.set_item("q1", out.manifest.q1.clone())?;
    d.set_item("aia_shape", out.aia_shape)?;
    d.set_item("vectors", out.manifest.vectors.clone())?;
    d.set_item("scalars", out.manifest.scalars.clone())?;
    Ok(d)
}

/// The abbreviation `pW(e1, e2, w1, w2, w3)` or `Star` as sentence text.
#[pyfunction]
#[pyo3(signature = (name, plane=None))]
fn gadget(name: &str, plane: Option<&Plane>) -> PyResult<String> {
    let l1 = default_plane(plane)?;
    let g = Gadgets::from_params(&l1.params);
    let v = VectorTerm::var;
    let f = match name {
        "pW" => g.pw(v("e1"), v("e2"), v("w1"), v("w2"), v("w3")),
        "Star" => g.star(),
        other => return Err(value_err(format!("unknown gadget {other:?}; known: pW, Star"))),
    };
    Ok(print_sentence(&f))
}

fn matrix_of(f: Formula) -> PyResult<Formula> {
    if f.is_quantifier_free() {
        Ok(f)
    } else {
        Ok(universal_matrix(&f).map_err(value_err)?.1)
    }
}

/// Truth of a sentence (or of its universal matrix) at an assignment given
/// as JSON `{"vectors": {...}, "scalars": {...}}`.
#[pyfunction]
#[pyo3(signature = (sentence, assignment, plane=None, tol=1e-6))]
fn eval_at(sentence: &str, assignment: &str, plane: Option<&Plane>, tol: f64) -> PyResult<bool> {
    let l1 = default_plane(plane)?;
    let a: Assignment = serde_json::from_str(assignment).map_err(value_err)?;
    let d = a.vectors.values().next().map_or(2, |v| v.dim());
    let space = space_for_dimension(&l1, d).map_err(value_err)?;
    let f = matrix_of(parse_sentence(sentence).map_err(value_err)?)?;
    eval_qf(&space, &f, &a, tol).map_err(value_err)
}

/// Samples `budget` assignments for a counterexample to a universal
/// sentence. Returns `(True, None)` if none is found, else `(False, json)`.
#[pyfunction]
#[pyo3(signature = (sentence, budget, plane=None, dim=2, seed=42, tol=1e-6))]
fn search(
    sentence: &str,
    budget: usize,
    plane: Option<&Plane>,
    dim: usize,
    seed: u64,
    tol: f64,
) -> PyResult<(bool, Option<String>)> {
    let l1 = default_plane(plane)?;
    let space = space_for_dimension(&l1, dim).map_err(value_err)?;
    let f = parse_sentence(sentence).map_err(value_err)?;
    let (_, matrix) = universal_matrix(&f).map_err(value_err)?;
    let sampler = Sampler::for_l1(&l1, dim, seed).with_bindings_from(&matrix);
    match eval_bounded(&space, &f, &sampler, budget, tol).map_err(value_err)? {
        BoundedOutcome::HoldsOnSamples { .. } => Ok((true, None)),
        BoundedOutcome::Counterexample(a) => Ok((false, Some(serde_json::to_string(&a).map_err(value_err)?))),
    }
}

/// Runs verification suites and returns the reports as a JSON list.
#[pyfunction]
#[pyo3(signature = (suites, seed=42, config=None))]
fn verify(suites: Vec<String>, seed: u64, config: Option<&str>) -> PyResult<String> {
    let cfg = load_config(config, Some(seed))?;
    let reports = cmd_verify(&cfg, None, &suites, false).map_err(value_err)?;
    serde_json::to_string_pretty(&reports).map_err(value_err)
}

#[pymodule]
fn normlogic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Plane>()?;
    m.add_function(wrap_pyfunction!(parse_arith, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_nat_sat, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(gadget, m)?)?;
    m.add_function(wrap_pyfunction!(eval_at, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SUITES", normlogic::harness::suite_names())?;
    Ok(())
}
