use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normlogic::harness::{
    cmd_compile, cmd_construct, cmd_eval, cmd_verify, dump_boundary, load_l1, suite_names, CompileOptions, Config,
    ConfigOverrides, EvalMode, HarnessError, EXIT_FAILURE, EXIT_OK,
};
use normlogic::logic::VecEqEncoding;
use normlogic::rational::{self, Rational};

#[derive(Parser)]
#[command(name = "normlogic", version, about = "Construct 𝓛₁, compile arithmetic into ∀⇒∀ sentences, evaluate and verify")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Config file (JSON); defaults to $NORMLOGIC_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "M", global = true)]
    m: Option<u32>,
    /// Comma-separated rationals, e.g. 1/8,1/10.
    #[arg(long, global = true)]
    q_candidates: Option<String>,
    #[arg(long, global = true, value_parser = parse_rational)]
    r_grid_step: Option<Rational>,
    #[arg(long, global = true)]
    tol_geom: Option<f64>,
    #[arg(long, global = true)]
    tol_logic: Option<f64>,
    #[arg(long, global = true)]
    tol_mult: Option<f64>,
    #[arg(long, global = true, value_parser = parse_count)]
    sample_budget: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    vec_eq: Option<VecEqArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VecEqArg {
    Primitive,
    NormZero,
}

#[derive(Subcommand)]
enum Command {
    /// Build 𝓛₁ and write its params file.
    Construct {
        #[arg(long, default_value = "params.json")]
        out: PathBuf,
        /// Also write the canonical assignment of e1, e2, w1, w2, w3, A, U1, U2.
        #[arg(long)]
        canonical: Option<PathBuf>,
    },
    /// Compile an arithmetic formula into sentence files and a manifest.
    Compile {
        /// Formula text, or "-" for stdin. Ignored with --gadget.
        #[arg(default_value = "")]
        formula: String,
        #[arg(long, short = 'd', default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Emit one abbreviation instead (pW or Star).
        #[arg(long)]
        gadget: Option<String>,
    },
    /// Evaluate a sentence at an assignment or search for a counterexample.
    Eval {
        sentence: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, conflicts_with = "search")]
        assignment: Option<PathBuf>,
        /// Sample budget, e.g. 1e5.
        #[arg(long, value_parser = parse_count)]
        search: Option<usize>,
        /// JSON list of assignments used as sampling seeds.
        #[arg(long, requires = "search")]
        seeds: Option<PathBuf>,
        #[arg(long, short = 'd')]
        dim: Option<usize>,
        /// Print N points of the unit circle instead of evaluating.
        #[arg(long)]
        dump_boundary: Option<usize>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long = "suite", conflicts_with = "all")]
        suites: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Write the JSON reports (a list) to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print JSON to stdout instead of the table.
        #[arg(long)]
        json: bool,
        /// Record wall time in the reports.
        #[arg(long)]
        timings: bool,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).ok_or_else(|| format!("not a rational: {s:?}"))
}

fn parse_rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(parse_rational).collect()
}

/// Counts written as integers or in exponent form (`1e5`).
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e15 => Ok(x as usize),
        _ => Err(format!("not a count: {s:?}")),
    }
}

impl GlobalArgs {
    fn config(&self) -> Result<Config, HarnessError> {
        let overrides = ConfigOverrides {
            m: self.m,
            q_candidates: self
                .q_candidates
                .as_deref()
                .map(parse_rational_list)
                .transpose()
                .map_err(HarnessError::Usage)?,
            r_grid_step: self.r_grid_step,
            tol_geom: self.tol_geom,
            tol_logic: self.tol_logic,
            tol_mult: self.tol_mult,
            sample_budget: self.sample_budget,
            seed: self.seed,
            vec_eq: self.vec_eq.map(|v| match v {
                VecEqArg::Primitive => VecEqEncoding::Primitive,
                VecEqArg::NormZero => VecEqEncoding::NormZero,
            }),
        };
        Config::resolve(self.config.as_deref(), &overrides)
    }
}

fn read_formula(text: &str) -> Result<String, HarnessError> {
    if text != "-" {
        return Ok(text.to_string());
    }
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| HarnessError::io(Path::new("<stdin>"), e))?;
    Ok(s)
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    let config = cli.global.config()?;
    match cli.command {
        Command::Construct { out, canonical } => {
            let r = cmd_construct(&config, &out, canonical.as_deref())?;
            print!("{}", r.summary);
            println!("wrote {}", out.display());
            Ok(if r.ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Compile { formula, dim, params, out_dir, gadget } => {
            let formula = read_formula(&formula)?;
            if gadget.is_none() && formula.trim().is_empty() {
                return Err(HarnessError::Usage("compile needs a formula or --gadget".into()));
            }
            let opts = CompileOptions { dimension: dim, out_dir, gadget };
            let r = cmd_compile(&formula, params.as_deref(), &config, &opts)?;
            let m = &r.manifest;
            println!("m = {}, k = {}, aia_shape = {}", m.m, m.k, m.aia_shape);
            for (name, file) in &m.files {
                println!("{name}: {}", opts.out_dir.join(file).display());
            }
            println!("manifest: {}", r.manifest_path.display());
            Ok(EXIT_OK)
        }
        Command::Eval { sentence, params, assignment, search, seeds, dim, dump_boundary: dump } => {
            if let Some(n) = dump {
                let (l1, _) = load_l1(params.as_deref(), &config)?;
                print!("{}", dump_boundary(&l1, n));
                return Ok(EXIT_OK);
            }
            let sentence = sentence.ok_or_else(|| HarnessError::Usage("eval needs a sentence file".into()))?;
            let mode = match (assignment, search) {
                (Some(a), None) => EvalMode::Assignment(a),
                (None, Some(budget)) => EvalMode::Search { budget, seeds },
                _ => return Err(HarnessError::Usage("eval needs exactly one of --assignment, --search".into())),
            };
            let verdict = cmd_eval(&sentence, params.as_deref(), &config, &mode, dim)?;
            print!("{}", verdict.render());
            Ok(if verdict.is_positive() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Verify { suites, all, params, report, json, timings } => {
            let names: Vec<String> =
                if all { suite_names().into_iter().map(String::from).collect() } else { suites };
            if names.is_empty() {
                return Err(HarnessError::Usage(format!("verify needs --suite NAME or --all; suites: {}", suite_names().join(", "))));
            }
            let reports = cmd_verify(&config, params.as_deref(), &names, timings)?;
            let text = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
            if let Some(path) = &report {
                std::fs::write(path, &text).map_err(|e| HarnessError::io(path, e))?;
            }
            if json {
                print!("{text}");
            } else {
                for r in &reports {
                    print!("{}", r.table());
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
