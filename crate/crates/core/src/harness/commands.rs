use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::Config;
use super::files::{assignment_json, CompileManifest, ParamsDoc, SCHEMA};
use super::report::SuiteReport;
use super::suites::{self, sentence_a_seeds, sentence_b_seeds, SuiteContext};
use super::HarnessError;
use crate::geometry::{construct_l1, VecN, L1};
use crate::logic::{
    eval_bounded, eval_qf, parse_sentence, print_sentence, universal_matrix, Assignment, BoundedOutcome, Formula,
    Gadgets, Sampler, VectorTerm,
};
use crate::reduction::{compile_with, head_assignment, parse_arith, space_for_dimension};

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// The plane stored in `params`, or a fresh construction from `config`.
pub fn load_l1(params: Option<&Path>, config: &Config) -> Result<(L1, String), HarnessError> {
    let doc = match params {
        Some(p) => ParamsDoc::load(p)?,
        None => ParamsDoc::from_l1(&construct_l1(config.resolved_m()?, &config.construction_options())?),
    };
    let hash = doc.hash();
    Ok((doc.into_l1(), hash))
}

pub struct ConstructResult {
    pub l1: L1,
    pub params_json: String,
    pub params_hash: String,
    /// Human-readable summary with one line per checked constraint.
    pub summary: String,
    pub ok: bool,
}

/// Builds 𝓛₁ from `config`, writes the params file to `out` and, when
/// given, the canonical assignment of the head variables to `canonical`.
pub fn cmd_construct(config: &Config, out: &Path, canonical: Option<&Path>) -> Result<ConstructResult, HarnessError> {
    let m = config.resolved_m()?;
    let l1 = construct_l1(m, &config.construction_options())?;
    let doc = ParamsDoc::from_l1(&l1);
    let params_json = doc.to_json();
    write_file(out, &params_json)?;
    if let Some(path) = canonical {
        write_file(path, &assignment_json(&head_assignment(&l1, 2)))?;
    }
    let p = &l1.params;
    let mut summary = String::new();
    let _ = writeln!(summary, "M  = {}", p.m);
    let _ = writeln!(summary, "q  = {}", p.q);
    let _ = writeln!(summary, "r  = {}", p.r);
    let _ = writeln!(summary, "d  = {:.12}", p.d);
    for (name, w) in [("w1", p.w1), ("w2", p.w2), ("w3", p.w3)] {
        let _ = writeln!(summary, "{name} = ({:.12}, {:.12})", w.x, w.y);
    }
    let ctx = SuiteContext { config: config.clone(), l1: l1.clone(), params_hash: doc.hash() };
    let report = suites::run_suite(&ctx, "construction").expect("construction suite is registered");
    for c in &report.cases {
        let mark = if c.status == super::Status::Fail { "FAIL" } else { "ok" };
        let _ = writeln!(summary, "  [{mark}] {}", c.id);
    }
    let _ = writeln!(summary, "params_hash = {}", doc.hash());
    Ok(ConstructResult { l1, params_json, params_hash: doc.hash(), summary, ok: report.passed() })
}

pub struct CompileOptions {
    pub dimension: usize,
    pub out_dir: PathBuf,
    /// Emit a single abbreviation (`pW`) instead of the sentences.
    pub gadget: Option<String>,
}

pub struct CompileResult {
    pub manifest: CompileManifest,
    pub manifest_path: PathBuf,
}

/// Compiles `formula` into sentence files, seed files and `manifest.json`
/// in `opts.out_dir`.
pub fn cmd_compile(
    formula: &str,
    params: Option<&Path>,
    config: &Config,
    opts: &CompileOptions,
) -> Result<CompileResult, HarnessError> {
    let (l1, hash) = load_l1(params, config)?;
    let gadgets = Gadgets::from_params(&l1.params).with_vec_eq(config.vec_eq);
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| HarnessError::io(&opts.out_dir, e))?;
    let mut files = BTreeMap::new();
    let manifest = if let Some(name) = &opts.gadget {
        let v = VectorTerm::var;
        let f = match name.as_str() {
            "pW" => gadgets.pw(v("e1"), v("e2"), v("w1"), v("w2"), v("w3")),
            "Star" => gadgets.star(),
            other => return Err(HarnessError::Usage(format!("unknown gadget {other:?}; known: pW, Star"))),
        };
        let file = format!("{name}.lnp");
        write_file(&opts.out_dir.join(&file), &print_sentence(&f))?;
        files.insert(name.clone(), file);
        CompileManifest {
            schema: SCHEMA,
            input: name.clone(),
            dimension: opts.dimension,
            m: 0,
            k: 0,
            variables: crate::reduction::VariableManifest {
                m: 0,
                k: 0,
                q1: String::new(),
                triples: vec![],
                vectors: f.free_vars().into_keys().collect(),
                scalars: vec![],
            },
            files,
            params_hash: hash,
            aia_shape: false,
        }
    } else {
        let q = parse_arith(formula)?;
        let out = compile_with(&q, opts.dimension, &l1.params, &gadgets)?;
        let space = space_for_dimension(&l1, opts.dimension)?;
        let (na, nb) = out.sentence_names();
        for (name, f) in [(na, &out.a), (nb, &out.b)] {
            let file = format!("{name}.lnp");
            write_file(&opts.out_dir.join(&file), &print_sentence(f))?;
            files.insert(name.to_string(), file);
        }
        let seeds_a = sentence_a_seeds(&l1, opts.dimension);
        let seeds_b = sentence_b_seeds(&out.flat, &l1, &space);
        for (name, seeds) in [(na, seeds_a), (nb, seeds_b)] {
            let file = format!("{name}.seeds.json");
            let text = serde_json::to_string_pretty(&seeds).expect("seeds serialize") + "\n";
            write_file(&opts.out_dir.join(&file), &text)?;
            files.insert(format!("{name}.seeds"), file);
        }
        CompileManifest {
            schema: SCHEMA,
            input: q.to_string(),
            dimension: opts.dimension,
            m: out.manifest.m,
            k: out.manifest.k,
            variables: out.manifest.clone(),
            files,
            params_hash: hash,
            aia_shape: out.aia_shape,
        }
    };
    let manifest_path = opts.out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_file(&manifest_path, &text)?;
    Ok(CompileResult { manifest, manifest_path })
}

pub enum EvalMode {
    /// Evaluate the (universal matrix of the) sentence at an assignment.
    Assignment(PathBuf),
    /// Sample for a falsifying assignment.
    Search { budget: usize, seeds: Option<PathBuf> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalVerdict {
    Truth(bool),
    Bounded(BoundedOutcome),
}

impl EvalVerdict {
    pub fn is_positive(&self) -> bool {
        match self {
            EvalVerdict::Truth(t) => *t,
            EvalVerdict::Bounded(b) => b.holds(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            EvalVerdict::Truth(t) => format!("{t}\n"),
            EvalVerdict::Bounded(BoundedOutcome::HoldsOnSamples { samples }) => format!("HoldsOnSamples {samples}\n"),
            EvalVerdict::Bounded(BoundedOutcome::Counterexample(a)) => format!("Counterexample\n{}", assignment_json(a)),
        }
    }
}

/// Dimension of the vectors of `a`, if any.
fn assignment_dimension(a: &Assignment) -> Option<usize> {
    a.vectors.values().next().map(VecN::dim)
}

/// Evaluates the sentence in `sentence` over 𝓛₁ (or its 2-sum with a
/// euclidean space when `dimension > 2`).
pub fn cmd_eval(
    sentence: &Path,
    params: Option<&Path>,
    config: &Config,
    mode: &EvalMode,
    dimension: Option<usize>,
) -> Result<EvalVerdict, HarnessError> {
    let f = parse_sentence(&read_file(sentence)?)?;
    let (l1, _) = load_l1(params, config)?;
    let tol = config.tol_logic;
    match mode {
        EvalMode::Assignment(path) => {
            let a = super::files::load_assignment(path)?;
            let d = dimension.or_else(|| assignment_dimension(&a)).unwrap_or(2);
            let space = space_for_dimension(&l1, d)?;
            let matrix: Formula = if f.is_quantifier_free() { f } else { universal_matrix(&f)?.1 };
            Ok(EvalVerdict::Truth(eval_qf(&space, &matrix, &a, tol)?))
        }
        EvalMode::Search { budget, seeds } => {
            let d = dimension.unwrap_or(2);
            let space = space_for_dimension(&l1, d)?;
            let (_, matrix) = universal_matrix(&f)?;
            let mut sampler = Sampler::for_l1(&l1, d, config.seed).with_bindings_from(&matrix);
            if let Some(path) = seeds {
                let text = read_file(path)?;
                let list: Vec<Assignment> = serde_json::from_str(&text)
                    .map_err(|e| HarnessError::Usage(format!("{}: bad seed list: {e}", path.display())))?;
                sampler = sampler.with_seeds(list);
            }
            Ok(EvalVerdict::Bounded(eval_bounded(&space, &f, &sampler, *budget, tol)?))
        }
    }
}

/// `n` points of the unit circle of the plane, one `x y` pair per line.
pub fn dump_boundary(l1: &L1, n: usize) -> String {
    let mut out = String::new();
    for i in 0..n {
        let p = l1.boundary.boundary_point(std::f64::consts::TAU * i as f64 / n as f64);
        let _ = writeln!(out, "{:.17e} {:.17e}", p.x, p.y);
    }
    out
}

/// Runs the named suites. Unknown names are a usage error.
pub fn cmd_verify(
    config: &Config,
    params: Option<&Path>,
    names: &[String],
    timings: bool,
) -> Result<Vec<SuiteReport>, HarnessError> {
    for n in names {
        if !suites::suite_names().contains(&n.as_str()) {
            return Err(HarnessError::Usage(format!(
                "unknown suite {n:?}; known: {}",
                suites::suite_names().join(", ")
            )));
        }
    }
    let (l1, params_hash) = load_l1(params, config)?;
    let ctx = SuiteContext { config: config.clone(), l1, params_hash };
    Ok(names
        .iter()
        .map(|n| {
            let start = Instant::now();
            let mut r = suites::run_suite(&ctx, n).expect("checked above");
            if timings {
                r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            r
        })
        .collect())
}
