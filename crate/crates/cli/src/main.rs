//! Single command-line entry point for the exact continued-fraction and
//! AF-algebra toolkit.
//!
//! Subcommands mirror the library modules: `cf` and `jpa` for continued
//! fractions, `pl` for pseudo-lattices, `bratteli` for diagrams, `af` for
//! stable-isomorphism verdicts, `sample` for the genericity experiment.
//!
//! Exit codes: 0 success, 1 domain errors, 2 an Unknown verdict under
//! `--strict`, 64 usage errors.

mod config;

use std::fmt;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use config::{OutputFormat, RunConfig};
use toric_af::json::{
    digits_from_json, matrix_from_json, matrix_to_json, DiagramDto, ExactRealDto,
    ExpansionDto, IntDto, VerdictDto,
};
use toric_af::{
    build_toric_af, convergents, detect_period, jpa_expand, jpa_expand_detecting,
    module_equal, parse_exact_real, parse_exact_vector, projectivize, regular_cf, sample_genericity,
    stable_iso, BasisChange, BratteliDiagram, ExactReal, GenericityParams, JpaExpansion, Outcome,
    ProjectivePseudoLattice, PseudoLattice, StableIsoOptions, ToricAfAlgebra,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "toric-af",
    version,
    about = "Exact Jacobi-Perron continued fractions, pseudo-lattices and toric AF-algebra invariants",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    /// Force JSON output regardless of the configured format.
    #[arg(long, global = true)]
    json: bool,

    /// Exit with code 2 when a verdict comes back Unknown.
    #[arg(long, global = true)]
    strict: bool,

    /// Default RNG seed for commands that sample.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regular continued fractions.
    Cf {
        #[command(subcommand)]
        command: CfCommand,
    },
    /// Jacobi-Perron expansions, convergents and periodicity.
    Jpa {
        #[command(subcommand)]
        command: JpaCommand,
    },
    /// Pseudo-lattices: projectivization, basis changes, module equality.
    Pl {
        #[command(subcommand)]
        command: PlCommand,
    },
    /// Bratteli diagrams of toric AF-algebras.
    Bratteli {
        #[command(subcommand)]
        command: BratteliCommand,
    },
    /// Stable-isomorphism verdicts.
    Af {
        #[command(subcommand)]
        command: AfCommand,
    },
    /// Statistical experiments.
    Sample {
        #[command(subcommand)]
        command: SampleCommand,
    },
}

#[derive(Subcommand)]
enum CfCommand {
    /// Expand a positive real into its regular continued fraction.
    Expand {
        /// The value, e.g. `7/3` or `nf:t^2-2@[1,2]:(0,1)`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Maximum number of terms.
        #[arg(long)]
        terms: Option<usize>,
    },
}

#[derive(Subcommand)]
enum JpaCommand {
    /// Expand a positive vector with the Jacobi-Perron algorithm.
    Expand {
        /// Comma-separated exact reals, e.g. `1,nf:t^2-2@[1,2]:(0,1)`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Maximum number of steps.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Convergent matrix B_1..B_k and its last column.
    Convergents {
        /// Digit file (JSON array of arrays of decimal strings), `-` for stdin.
        #[arg(long)]
        digits: String,
        #[arg(long)]
        k: usize,
    },
    /// Detect the (preperiod, period) of an expansion's remainder states.
    Period {
        /// Expansion file produced by `jpa expand` (JSON), `-` for stdin.
        #[arg(long = "digits-state")]
        digits_state: String,
        /// State horizon when re-expanding from the initial state.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PlCommand {
    /// Projectivize (l_1..l_n) to (theta, scale).
    Project {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Apply a unimodular basis change (column action).
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Matrix file: JSON array of arrays of integers, `-` for stdin.
        #[arg(long)]
        matrix: String,
    },
    /// Exact equality of the generated Z-modules.
    Equal {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Args)]
struct FormatArg {
    /// Output format for diagrams: json or dot.
    #[arg(long, value_parser = ["json", "dot"], default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum BratteliCommand {
    /// Build the toric diagram of a digit sequence.
    Build {
        /// Digit file (JSON array of arrays of decimal strings), `-` for stdin.
        #[arg(long)]
        digits: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Telescope a diagram to the surviving levels.
    Telescope {
        /// Diagram file (JSON), `-` for stdin.
        #[arg(long)]
        diagram: String,
        /// Comma-separated strictly increasing 1-based levels, e.g. `2,4,6`.
        #[arg(long)]
        cuts: String,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum AfCommand {
    /// Stable-isomorphism verdict between two toric AF-algebras.
    #[command(name = "stable-iso")]
    StableIso {
        /// Comma-separated theta vector of the first algebra.
        #[arg(long = "theta-a", allow_hyphen_values = true)]
        theta_a: String,
        /// Comma-separated theta vector of the second algebra.
        #[arg(long = "theta-b", allow_hyphen_values = true)]
        theta_b: String,
        /// Optional witness matrix file (JSON array of arrays of integers).
        #[arg(long, requires = "scale")]
        witness: Option<String>,
        /// Scale paired with the witness matrix.
        #[arg(long, requires = "witness", allow_hyphen_values = true)]
        scale: Option<String>,
        /// Digit/state horizon for the searches.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SampleCommand {
    /// Measure the JPA convergence rate over uniform random vectors.
    Genericity {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        tol: f64,
        /// Trial-stream seed; falls back to the global --seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Write the angle histogram as CSV to this path.
        #[arg(long)]
        csv: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Core(toric_af::Error),
    Io(String),
    Json(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "{e}"),
        }
    }
}

impl From<toric_af::Error> for CliError {
    fn from(e: toric_af::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 64;
        }
    };
    let config = match RunConfig::load_from_env() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    match execute(&cli, &config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?)
    }
}

/// Digit input: a bare JSON array of arrays, or any object carrying a
/// `digits` field with that shape (so `jpa expand` output pipes straight
/// into `bratteli build --digits -`).
fn parse_digit_input(text: &str) -> CliResult<Vec<toric_af::DigitVector>> {
    let value: Value = serde_json::from_str(text)?;
    let raw = match &value {
        Value::Array(_) => serde_json::from_value::<Vec<Vec<String>>>(value.clone())?,
        Value::Object(map) => match map.get("digits") {
            Some(d) => serde_json::from_value::<Vec<Vec<String>>>(d.clone())?,
            None => {
                return Err(CliError::Json(
                    "expected a digit array or an object with a `digits` field".into(),
                ))
            }
        },
        _ => {
            return Err(CliError::Json(
                "expected a digit array or an object with a `digits` field".into(),
            ))
        }
    };
    Ok(digits_from_json(&raw)?)
}

struct Printer {
    json: bool,
    format: OutputFormat,
    approx_digits: usize,
}

impl Printer {
    fn new(cli: &Cli, config: &RunConfig) -> Self {
        Printer {
            json: cli.json || config.output_format == OutputFormat::Json,
            format: config.output_format,
            approx_digits: (config.precision_bits as f64 * 0.301).ceil().max(3.0) as usize,
        }
    }

    fn emit(&self, mut value: Value, text: impl FnOnce(&Self) -> String) {
        if self.json || !matches!(self.format, OutputFormat::Text) {
            if let Value::Object(map) = &mut value {
                map.insert("version".into(), Value::String(VERSION.into()));
            }
            println!("{}", serde_json::to_string(&value).unwrap());
        } else {
            println!("{}", text(self));
        }
    }

    fn approx(&self, x: &ExactReal) -> String {
        match x.to_f64() {
            Ok(v) => format!("{v:.prec$}", prec = self.approx_digits.min(17)),
            Err(_) => "?".into(),
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn execute(cli: &Cli, config: &RunConfig) -> CliResult<i32> {
    let printer = Printer::new(cli, config);
    match &cli.command {
        Command::Cf { command } => match command {
            CfCommand::Expand { x, terms } => {
                let value = parse_exact_real(x)?;
                let result = regular_cf(&value, terms.unwrap_or(config.horizon))?;
                let digits: Vec<String> = result.digits.iter().map(|b| b.to_string()).collect();
                printer.emit(
                    json!({
                        "digits": digits,
                        "terminated": result.terminated,
                        "inexact": result.inexact,
                    }),
                    |_| {
                        format!(
                            "digits: [{}]  terminated: {}{}",
                            result
                                .digits
                                .iter()
                                .map(|b| b.to_string())
                                .collect::<Vec<_>>()
                                .join(", "),
                            result.terminated,
                            if result.inexact { "  (inexact input)" } else { "" }
                        )
                    },
                );
                Ok(0)
            }
        },
        Command::Jpa { command } => match command {
            JpaCommand::Expand { lambda, steps } => {
                let vec = parse_exact_vector(lambda)?;
                let exp = jpa_expand(&vec, steps.unwrap_or(config.horizon))?;
                let dto = ExpansionDto::from(&exp);
                printer.emit(to_value(&dto), |p| {
                    let digit_rows: Vec<String> = exp
                        .digits()
                        .iter()
                        .map(|d| {
                            format!(
                                "({})",
                                d.entries()
                                    .iter()
                                    .map(|b| b.to_string())
                                    .collect::<Vec<_>>()
                                    .join(",")
                            )
                        })
                        .collect();
                    let state = exp.states().last().unwrap();
                    format!(
                        "rank {}  digits: {}  termination: {:?}\nlast state ~ [{}]",
                        exp.rank(),
                        digit_rows.join(" "),
                        exp.termination(),
                        state.iter().map(|x| p.approx(x)).collect::<Vec<_>>().join(", ")
                    )
                });
                Ok(0)
            }
            JpaCommand::Convergents { digits, k } => {
                let parsed = parse_digit_input(&read_input(digits)?)?;
                let (matrix, column) = convergents(&parsed, *k)?;
                printer.emit(
                    json!({
                        "k": k,
                        "matrix": matrix_to_json(&matrix),
                        "last_column": column.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                    }),
                    |_| {
                        format!(
                            "B_1..B_{k} last column: ({})",
                            column
                                .iter()
                                .map(|b| b.to_string())
                                .collect::<Vec<_>>()
                                .join(", ")
                        )
                    },
                );
                Ok(0)
            }
            JpaCommand::Period {
                digits_state,
                horizon,
            } => {
                let dto: ExpansionDto = serde_json::from_str(&read_input(digits_state)?)?;
                let exp = JpaExpansion::try_from(&dto)?;
                // scan the stored states first; if no repeat is recorded,
                // re-expand from the initial state up to the horizon
                let found = match detect_period(&exp)? {
                    Some(p) => Some(p),
                    None if !exp.terminated() => {
                        let budget = horizon.unwrap_or(config.periodicity_horizon);
                        let (_, p) = jpa_expand_detecting(&exp.states()[0], budget)?;
                        p
                    }
                    None => None,
                };
                printer.emit(
                    match found {
                        Some((p, l)) => json!({ "preperiod": p, "period": l }),
                        None => json!({ "preperiod": Value::Null, "period": Value::Null }),
                    },
                    |_| match found {
                        Some((p, l)) => format!("preperiod {p}, period {l}"),
                        None => "no period found".into(),
                    },
                );
                Ok(0)
            }
        },
        Command::Pl { command } => match command {
            PlCommand::Project { lambda } => {
                let vec = parse_exact_vector(lambda)?;
                let pl = PseudoLattice::new(vec, None)?;
                let (ppl, scale) = projectivize(&pl)?;
                printer.emit(
                    json!({
                        "thetas": ppl.thetas().iter().map(ExactRealDto::from).collect::<Vec<_>>(),
                        "scale": ExactRealDto::from(&scale),
                    }),
                    |p| {
                        format!(
                            "theta ~ [{}]  scale ~ {}",
                            ppl.thetas().iter().map(|x| p.approx(x)).collect::<Vec<_>>().join(", "),
                            p.approx(&scale)
                        )
                    },
                );
                Ok(0)
            }
            PlCommand::Transform { lambda, matrix } => {
                let vec = parse_exact_vector(lambda)?;
                let pl = PseudoLattice::new(vec, None)?;
                let rows: Vec<Vec<IntDto>> = serde_json::from_str(&read_input(matrix)?)?;
                let a = BasisChange::new(matrix_from_json(&rows)?)?;
                let out = toric_af::basis_change(&pl, &a)?;
                printer.emit(
                    json!({
                        "lambdas": out.lambdas().iter().map(ExactRealDto::from).collect::<Vec<_>>(),
                    }),
                    |p| {
                        format!(
                            "lambda' ~ [{}]",
                            out.lambdas().iter().map(|x| p.approx(x)).collect::<Vec<_>>().join(", ")
                        )
                    },
                );
                Ok(0)
            }
            PlCommand::Equal { a, b } => {
                let pa = PseudoLattice::new(parse_exact_vector(a)?, None)?;
                let pb = PseudoLattice::new(parse_exact_vector(b)?, None)?;
                let equal = module_equal(&pa, &pb)?;
                printer.emit(json!({ "equal": equal }), |_| format!("equal: {equal}"));
                Ok(0)
            }
        },
        Command::Bratteli { command } => match command {
            BratteliCommand::Build {
                digits,
                depth,
                format,
            } => {
                let parsed = parse_digit_input(&read_input(digits)?)?;
                let diagram = build_toric_af(&parsed, *depth)?;
                emit_diagram(&printer, &diagram, &format.format);
                Ok(0)
            }
            BratteliCommand::Telescope {
                diagram,
                cuts,
                format,
            } => {
                let dto: DiagramDto = serde_json::from_str(&read_input(diagram)?)?;
                let d = BratteliDiagram::try_from(&dto)?;
                let cut_list: Vec<usize> = cuts
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|e| CliError::Json(format!("bad cut {s:?}: {e}")))
                    })
                    .collect::<CliResult<_>>()?;
                let out = toric_af::telescope(&d, &cut_list)?;
                emit_diagram(&printer, &out, &format.format);
                Ok(0)
            }
        },
        Command::Af { command } => match command {
            AfCommand::StableIso {
                theta_a,
                theta_b,
                witness,
                scale,
                horizon,
            } => {
                let ta = ProjectivePseudoLattice::new(parse_exact_vector(theta_a)?)?;
                let tb = ProjectivePseudoLattice::new(parse_exact_vector(theta_b)?)?;
                let budget = horizon.unwrap_or(config.horizon);
                let alg_a = ToricAfAlgebra::from_theta(ta, budget)?;
                let alg_b = ToricAfAlgebra::from_theta(tb, budget)?;
                let mut options = StableIsoOptions {
                    horizon: budget,
                    ..Default::default()
                };
                if let (Some(wpath), Some(s)) = (witness, scale) {
                    let rows: Vec<Vec<IntDto>> = serde_json::from_str(&read_input(wpath)?)?;
                    let matrix = BasisChange::new(matrix_from_json(&rows)?)?;
                    options.witness = Some((matrix, parse_exact_real(s)?));
                }
                let verdict = stable_iso(&alg_a, &alg_b, &options)?;
                let dto = VerdictDto::from(&verdict);
                printer.emit(to_value(&dto), |_| {
                    let mut line = format!("{:?}", verdict.outcome).to_lowercase();
                    if let Some(s) = &verdict.separating {
                        line.push_str(&format!("  ({s})"));
                    }
                    line
                });
                if cli.strict && verdict.outcome == Outcome::Unknown {
                    return Ok(2);
                }
                Ok(0)
            }
        },
        Command::Sample { command } => match command {
            SampleCommand::Genericity {
                rank,
                trials,
                steps,
                tol,
                seed,
                workers,
                csv,
            } => {
                let params = GenericityParams {
                    rank: *rank,
                    trials: *trials,
                    steps: *steps,
                    tol: *tol,
                    seed: seed.or(cli.seed).unwrap_or(0),
                    workers: workers.unwrap_or(config.workers),
                };
                let report = sample_genericity(&params)?;
                if let Some(path) = csv {
                    std::fs::write(path, report.csv_histogram())
                        .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
                }
                printer.emit(to_value(&report), |_| {
                    format!(
                        "rank {}: rate {:.4} ({} converged, {} indeterminate of {})",
                        report.rank, report.rate, report.converged, report.indeterminate,
                        report.trials
                    )
                });
                Ok(0)
            }
        },
    }
}

fn emit_diagram(printer: &Printer, diagram: &BratteliDiagram, format: &str) {
    if format == "dot" {
        print!("{}", diagram.to_dot());
        return;
    }
    let dto = DiagramDto::from(diagram);
    printer.emit(to_value(&dto), |_| {
        let dims = toric_af::level_dimensions(diagram);
        let rows: Vec<String> = dims
            .iter()
            .map(|d| {
                format!(
                    "({})",
                    d.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        format!(
            "rank {}  levels {}  dimensions: {}",
            diagram.rank(),
            diagram.num_levels(),
            rows.join(" ")
        )
    });
}
