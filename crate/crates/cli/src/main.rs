use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cpt_core::cp::{classify_cp, gap_family, CpOptions, Decomposer, SubprocessDecomposer};
use cpt_core::experiment::{
    preprocess_pipeline, run_experiment, write_csv, Exclusion, ExperimentConfig, ExperimentKind,
};
use cpt_core::io::{
    decomposition_from_json, decomposition_to_json, generating_vector_from_json,
    hypergraph_from_text, tensor_from_json, tensor_to_json, vector_from_json, verdict_json,
    witness_json,
};
use cpt_core::spectral::{
    classify_dnn, classify_sdnn, copositivity_probe, DnnOptions, SearchOptions,
};
use cpt_core::structured::{
    cauchy_from_vector, circulant_from_root, hankel_from_vector, hilbert_tensor,
    toeplitz_from_band, ShiftFill,
};
use cpt_core::tcp::tcp_residual;
use cpt_core::{RankOneDecomposition, SymmetricTensor, Verdict};

const EXIT_NO: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "cpt", version, about = "Symmetric tensor certification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structured tensor and write it as JSON.
    Construct(ConstructArgs),
    /// Run DNN / SDNN / CP / copositivity checks on a tensor file.
    Classify(ClassifyArgs),
    /// Zero-entry and one-duplicated dominance checks.
    Preprocess {
        tensor: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Randomized preprocessing experiment, one CSV row per sample.
    Experiment(ExperimentArgs),
    /// Check a candidate solution of a tensor complementarity problem.
    Tcp {
        tensor: PathBuf,
        /// JSON array file.
        #[arg(long)]
        q: PathBuf,
        /// JSON array file.
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hankel,
    Cauchy,
    Hilbert,
    Circulant,
    Toeplitz,
    Laplacian,
    Gap,
    Rank1,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated values: Hankel or Cauchy generator, circulant root
    /// (row-major over n^(m-1) tuples), Toeplitz band (row-major over offsets
    /// -(n-1)..n-1) or the rank-one vector.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    /// Generating vector JSON file, instead of --values.
    #[arg(long, conflicts_with = "values")]
    vector: Option<PathBuf>,
    /// Hypergraph text file for --kind laplacian.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// 1-based coordinates and shift for --kind gap.
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Weight of the rank-one term.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    weight: f64,
    #[arg(short = 'o', long)]
    out: PathBuf,
    /// Also write the known decomposition (gap, rank1).
    #[arg(long)]
    decomposition_out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Dnn,
    Sdnn,
    Cp,
    Cop,
}

#[derive(Args)]
struct ClassifyArgs {
    tensor: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dnn,cp")]
    checks: Vec<Check>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shell command proposing a CP decomposition (tensor JSON on stdin).
    #[arg(long)]
    decomposer: Option<String>,
    /// Decomposition JSON file to verify as a certificate.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    grid_depth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentFamily {
    Hankel,
    Symmetric,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    family: ExperimentFamily,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record per-sample wall time (makes the CSV run-dependent).
    #[arg(long)]
    timing: bool,
}

/// Failures split by exit code: bad input or everything else.
enum Failure {
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

trait InputContext<T> {
    fn input(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> InputContext<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into()))
    }
}

fn main() -> ExitCode {
    // clap's own usage errors would exit with 2, which is reserved
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Construct(args) => construct(&args).map(|()| 0),
        Command::Classify(args) => classify(&args),
        Command::Preprocess { tensor, eps } => preprocess(&tensor, eps).map(|()| 0),
        Command::Experiment(args) => experiment(&args).map(|()| 0),
        Command::Tcp { tensor, q, x, tol } => tcp(&tensor, &q, &x, tol).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .input()
}

fn read_tensor(path: &Path) -> Result<SymmetricTensor, Failure> {
    tensor_from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .input()
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Input(anyhow!("{kind} needs {flag}")))
}

fn values(args: &ConstructArgs, kind: &str) -> Result<Vec<f64>, Failure> {
    if let Some(v) = &args.values {
        return Ok(v.clone());
    }
    let path = require(args.vector.as_ref(), "--values or --vector", kind)?;
    let (declared, v) = generating_vector_from_json(&read(path)?).input()?;
    match declared {
        Some(d) if d != kind => Err(Failure::Input(anyhow!(
            "{} holds a {d} vector, not {kind}",
            path.display()
        ))),
        _ => Ok(v),
    }
}

/// Checks the length of a row-major table over `count` tuples.
fn tuple_table(v: Vec<f64>, count: usize, what: &str) -> Result<Vec<f64>, Failure> {
    if v.len() != count {
        return Err(Failure::Input(anyhow!(
            "{what} needs {count} values, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn symmetric_fill(fill: ShiftFill, kind: &str) -> Result<SymmetricTensor, Failure> {
    if !fill.symmetric {
        return Err(Failure::Input(anyhow!(
            "the {kind} data does not define a symmetric tensor"
        )));
    }
    Ok(fill.tensor)
}

fn construct(args: &ConstructArgs) -> Result<(), Failure> {
    let mut decomposition: Option<RankOneDecomposition> = None;
    let tensor = match args.kind {
        Kind::Hankel => {
            let v = values(args, "hankel")?;
            let m = require(args.m, "--m", "hankel")?;
            let n = require(args.n, "--n", "hankel")?;
            hankel_from_vector(&v, m, n).input()?
        }
        Kind::Cauchy => {
            let c = values(args, "cauchy")?;
            cauchy_from_vector(&c, require(args.m, "--m", "cauchy")?).input()?
        }
        Kind::Hilbert => hilbert_tensor(
            require(args.m, "--m", "hilbert")?,
            require(args.n, "--n", "hilbert")?,
        )
        .input()?,
        Kind::Circulant => {
            let m = require(args.m, "--m", "circulant")?;
            let n = require(args.n, "--n", "circulant")?;
            let root = tuple_table(
                values(args, "circulant")?,
                n.pow(m as u32 - 1),
                "a circulant root",
            )?;
            let fill = circulant_from_root(
                |t| root[t.iter().fold(0, |acc, &j| acc * n + j)],
                m,
                n,
            )
            .input()?;
            symmetric_fill(fill, "circulant")?
        }
        Kind::Toeplitz => {
            let m = require(args.m, "--m", "toeplitz")?;
            let n = require(args.n, "--n", "toeplitz")?;
            let width = 2 * n - 1;
            let band = tuple_table(
                values(args, "toeplitz")?,
                width.pow(m as u32 - 1),
                "a Toeplitz band",
            )?;
            let shift = n as isize - 1;
            let fill = toeplitz_from_band(
                |t| band[t.iter().fold(0, |acc, &o| acc * width + (o + shift) as usize)],
                m,
                n,
            )
            .input()?;
            symmetric_fill(fill, "toeplitz")?
        }
        Kind::Laplacian => {
            let path = require(args.graph.as_ref(), "--graph", "laplacian")?;
            hypergraph_from_text(&read(path)?).input()?.signless_laplacian()
        }
        Kind::Gap => {
            let i = require(args.i, "--i", "gap")?;
            let j = require(args.j, "--j", "gap")?;
            if i == 0 || j == 0 {
                return Err(Failure::Input(anyhow!("--i and --j are 1-based")));
            }
            let (a, d) = gap_family(
                i - 1,
                j - 1,
                require(args.alpha, "--alpha", "gap")?,
                require(args.m, "--m", "gap")?,
                require(args.n, "--n", "gap")?,
            )
            .input()?;
            decomposition = Some(d);
            a
        }
        Kind::Rank1 => {
            let u = values(args, "rank1")?;
            let d = RankOneDecomposition::new(require(args.m, "--m", "rank1")?, vec![(args.weight, u)])
                .input()?;
            let a = d.reconstruct();
            decomposition = Some(d);
            a
        }
    };
    write(&args.out, &tensor_to_json(&tensor))?;
    if let Some(path) = &args.decomposition_out {
        let d = decomposition
            .ok_or_else(|| Failure::Input(anyhow!("this kind has no known decomposition")))?;
        write(path, &decomposition_to_json(&d))?;
    }
    Ok(())
}

fn classify(args: &ClassifyArgs) -> Result<u8, Failure> {
    let a = read_tensor(&args.tensor)?;
    let decomposition = match &args.decomposition {
        Some(p) => Some(decomposition_from_json(&read(p)?, a.order()).input()?),
        None => None,
    };
    let hook = args.decomposer.as_ref().map(|c| SubprocessDecomposer {
        command: c.clone(),
    });
    let dnn = DnnOptions {
        tol: args.tol,
        search: SearchOptions {
            restarts: args.restarts,
            seed: args.seed,
            ..Default::default()
        },
        decomposition: decomposition.clone(),
        scaling: None,
    };
    let mut report = serde_json::Map::new();
    let mut any_no = false;
    for check in &args.checks {
        let (name, verdict): (&str, Verdict) = match check {
            Check::Dnn => ("dnn", classify_dnn(&a, &dnn)),
            Check::Sdnn => ("sdnn", classify_sdnn(&a, &dnn)),
            Check::Cp => {
                let opts = CpOptions {
                    eps: args.tol,
                    decomposition: decomposition.clone(),
                    decomposer: hook.as_ref().map(|h| h as &dyn Decomposer),
                    ..Default::default()
                };
                ("cp", classify_cp(&a, &opts))
            }
            Check::Cop => (
                "copositive",
                copositivity_probe(&a, args.grid_depth, args.tol).input()?,
            ),
        };
        any_no |= verdict.is_no();
        report.insert(name.to_string(), verdict_json(&verdict));
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if any_no { EXIT_NO } else { 0 })
}

fn step_json(passed: bool, witness: Option<&cpt_core::Witness>) -> serde_json::Value {
    json!({"passed": passed, "witness": witness.map(witness_json)})
}

fn preprocess(path: &Path, eps: f64) -> Result<(), Failure> {
    let a = read_tensor(path)?;
    let r = preprocess_pipeline(&a, eps).input()?;
    let out = json!({
        "step0": step_json(r.step0.passed, r.step0.witness.as_ref()),
        "step1": r.step1.as_ref().map(|s| step_json(s.passed, s.witness.as_ref())),
        "forwarded": r.forwarded,
        "excluded_by": r.exclusion().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Result<(), Failure> {
    let kind = match args.family {
        ExperimentFamily::Hankel => {
            if args.t.is_some() {
                bail_input("hankel experiments take --r, not --t")?;
            }
            ExperimentKind::Hankel {
                r: require(args.r, "--r", "hankel")?,
            }
        }
        ExperimentFamily::Symmetric => {
            if args.r.is_some() {
                bail_input("symmetric experiments take --t, not --r")?;
            }
            ExperimentKind::Symmetric {
                t: require(args.t, "--t", "symmetric")?,
            }
        }
    };
    let cfg = ExperimentConfig {
        eps: args.eps,
        workers: args.workers,
        record_timing: args.timing,
        ..ExperimentConfig::new(kind, args.m, args.n, args.samples, args.seed)
    };
    cfg.validate().input()?;
    let summary = run_experiment(&cfg)?;
    let file = fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_csv(&summary.records, std::io::BufWriter::new(file))?;
    println!(
        "samples {}  step0 {}  step1 {}  forwarded {}  excluded {:.1}%",
        summary.records.len(),
        summary.count(Exclusion::Step0),
        summary.count(Exclusion::Step1),
        summary.count(Exclusion::None),
        summary.percentage()
    );
    Ok(())
}

fn bail_input(msg: &str) -> Result<(), Failure> {
    Err(Failure::Input(anyhow!("{msg}")))
}

fn tcp(tensor: &Path, q: &Path, x: &Path, tol: f64) -> Result<(), Failure> {
    let a = read_tensor(tensor)?;
    let q = vector_from_json(&read(q)?).input()?;
    let x = vector_from_json(&read(x)?).input()?;
    let r = tcp_residual(&a, &q, &x, tol).input()?;
    let out = json!({"feasible": r.feasible, "gap": r.gap, "solution": r.solution});
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}
