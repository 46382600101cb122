//! `eas`: solve, validate, generate, decode and compare scheduling instances.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 solver precondition not
//! met, 3 infeasible schedule or no certificate.

mod compare;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eas_core::generate::{random_instance, Family, WindowMode};
use eas_core::io::{parse_instance, serialize_instance};
use eas_core::reductions::{
    decode_certificate, knapsack_to_weas, ksum_to_eas_arbitrary_due, ksum_to_eas_arbitrary_release, KSumInput,
    KnapsackInput, Reduction, ReductionMeta,
};
use eas_core::{solve, validate_schedule, Algorithm, EasError, Epsilon, Instance, Schedule};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "eas", version, about = "Energy aware scheduling of unit jobs with harvested energy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print the result as JSON.
    Solve(SolveArgs),
    /// Check a schedule against an instance and print the feasibility report.
    Validate(ValidateArgs),
    /// Write a random or reduction-generated instance.
    Generate(GenerateArgs),
    /// Read a source-problem solution off a schedule of a generated instance.
    Decode(DecodeArgs),
    /// Run several solvers over a directory of instances.
    Compare(compare::CompareArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// dp, fast, greedy, exact-w, fptas or oracle.
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long)]
    input: PathBuf,
    /// Approximation parameter p/q for fptas.
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Option<Epsilon>,
    /// Make the oracle maximize total weight instead of job count.
    #[arg(long)]
    weighted: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    /// A schedule, or the output of `eas solve`.
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Source {
    Ksum,
    Knapsack,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    ArbRelease,
    ArbDue,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["random", "from"]))]
struct GenerateArgs {
    /// Job count, horizon, maximum energy, maximum harvest and seed.
    #[arg(long, num_args = 5, value_names = ["N", "T", "EMAX", "HMAX", "SEED"])]
    random: Option<Vec<u64>>,
    /// Give every job the same random window instead of one each.
    #[arg(long, requires = "random")]
    common_window: bool,
    /// Draw weights from 1 to this value.
    #[arg(long, requires = "random", default_value_t = 1)]
    wmax: u64,
    /// Build the instance from a k-SUM or knapsack input file.
    #[arg(long, requires_all = ["json", "out"])]
    from: Option<Source>,
    #[arg(long, requires = "from")]
    json: Option<PathBuf>,
    /// Which k-SUM construction to use.
    #[arg(long, value_enum, default_value_t = Variant::ArbRelease)]
    variant: Variant,
    /// Instance file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metadata file for reductions; defaults to `<out>.meta.json`.
    #[arg(long, requires = "from")]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    /// Metadata written by `eas generate --from`.
    #[arg(long)]
    meta: PathBuf,
    /// A schedule, or the output of `eas solve`.
    #[arg(long)]
    schedule: PathBuf,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: EasError| e.to_string())
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    s.parse().map_err(|e: EasError| e.to_string())
}

/// Why a command did not succeed, and the exit code that goes with it.
#[derive(Debug)]
enum Failure {
    Input(String),
    Core(EasError),
    Rejected(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Core(e) if e.is_parse_error() || matches!(e, EasError::BadInput(_)) => 1,
            Failure::Core(EasError::NoCertificate(_)) => 3,
            Failure::Core(_) => 2,
            Failure::Rejected(_) => 3,
        }
    }

    /// Short kebab-case tag such as `parse` or `not-common-window`.
    fn code(&self) -> &str {
        match self {
            Failure::Core(e) => e.code(),
            Failure::Input(m) | Failure::Rejected(m) => m.split(':').next().unwrap_or(m),
        }
    }
}

impl From<EasError> for Failure {
    fn from(e: EasError) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) | Failure::Rejected(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = Result<(), Failure>;

pub(crate) fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("io: cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("io: cannot write {}: {e}", path.display())))
}

pub(crate) fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| match e {
        EasError::Parse(m) => Failure::Input(format!("parse: {}: {m}", path.display())),
        other => Failure::Core(other),
    })
}

/// Accepts either `{"assignments": ...}` or a solve result holding one under
/// `"schedule"`.
fn load_schedule(path: &Path) -> Result<Schedule, Failure> {
    let bad = |m: String| Failure::Input(format!("parse: {}: {m}", path.display()));
    let mut value: serde_json::Value = serde_json::from_str(&read(path)?).map_err(|e| bad(e.to_string()))?;
    if let Some(inner) = value.get_mut("schedule") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("parse: {}: {e}", path.display())))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("outputs always serialize")
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    objective: i64,
    schedule: &'a Schedule,
    algo: Algorithm,
    leftover: i64,
    runtime_ms: f64,
}

fn cmd_solve(args: &SolveArgs) -> Outcome {
    let instance = load_instance(&args.input)?;
    let start = Instant::now();
    let result = solve(&instance, args.algo, args.epsilon, args.weighted)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    println!(
        "{}",
        to_json(&SolveOutput {
            objective: result.objective,
            schedule: &result.schedule,
            algo: result.algo,
            leftover: result.leftover,
            runtime_ms,
        })
    );
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Outcome {
    let instance = load_instance(&args.input)?;
    let schedule = load_schedule(&args.schedule)?;
    let report = validate_schedule(&instance, &schedule);
    println!("{}", to_json(&report));
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Rejected(format!("infeasible: {} violations", report.violations.len())))
    }
}

fn random_family(values: &[u64], common: bool, wmax: u64) -> Result<(Family, u64), Failure> {
    let &[n, horizon, emax, hmax, seed] = values else {
        return Err(Failure::Input("--random takes N T EMAX HMAX SEED".into()));
    };
    let bad = |m: &str| Err(Failure::Core(EasError::BadInput(m.into())));
    if n == 0 {
        return bad("the job count must be at least 1");
    }
    if horizon == 0 {
        return bad("the horizon must be at least 1");
    }
    if emax == 0 || wmax == 0 {
        return bad("EMAX and --wmax must be at least 1");
    }
    let int = |v: u64| i64::try_from(v).map_err(|_| Failure::Core(EasError::BadInput(format!("{v} is too large"))));
    let windows = if common { WindowMode::Common } else { WindowMode::Arbitrary };
    let family = Family {
        weight: (1, int(wmax)?),
        ..Family::fixed(n as usize, horizon as usize, (1, int(emax)?), (0, int(hmax)?), windows)
    };
    Ok((family, seed))
}

fn reduction(source: Source, variant: Variant, input: &Path) -> Result<Reduction, Failure> {
    Ok(match (source, variant) {
        (Source::Ksum, Variant::ArbRelease) => ksum_to_eas_arbitrary_release(&load_json::<KSumInput>(input)?)?,
        (Source::Ksum, Variant::ArbDue) => ksum_to_eas_arbitrary_due(&load_json::<KSumInput>(input)?)?,
        (Source::Knapsack, _) => knapsack_to_weas(&load_json::<KnapsackInput>(input)?)?,
    })
}

fn emit_instance(instance: &Instance, out: Option<&Path>) -> Outcome {
    let text = serialize_instance(instance) + "\n";
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(args: &GenerateArgs) -> Outcome {
    if let Some(values) = &args.random {
        let (family, seed) = random_family(values, args.common_window, args.wmax)?;
        return emit_instance(&random_instance(&family, seed)?, args.out.as_deref());
    }
    let (Some(source), Some(json), Some(out)) = (args.from, &args.json, &args.out) else {
        return Err(Failure::Input("--from needs --json and --out".into()));
    };
    let red = reduction(source, args.variant, json)?;
    emit_instance(&red.instance, Some(out))?;
    let meta_path = args.meta.clone().unwrap_or_else(|| {
        let mut name = out.clone().into_os_string();
        name.push(".meta.json");
        PathBuf::from(name)
    });
    write(&meta_path, &(serde_json::to_string(&red.meta).expect("metadata serializes") + "\n"))
}

fn cmd_decode(args: &DecodeArgs) -> Outcome {
    let meta: ReductionMeta = load_json(&args.meta)?;
    let schedule = load_schedule(&args.schedule)?;
    let certificate = decode_certificate(&meta, &schedule)?;
    println!("{}", to_json(&certificate));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Compare(a) => compare::cmd_compare(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("eas: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
