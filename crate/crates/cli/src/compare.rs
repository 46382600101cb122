//! Benchmark harness: every requested solver on every instance in a
//! directory, with exact ratios against the oracle where it is affordable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use eas_core::oracle::solve_oracle;
use eas_core::{solve, Algorithm, Epsilon, Instance};
use rayon::prelude::*;
use serde::Serialize;

use crate::{load_instance, parse_algo, parse_epsilon, Failure};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory of instance files (`*.json`, metadata files skipped).
    #[arg(long)]
    input_dir: PathBuf,
    /// Comma-separated solvers to run.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo, default_value = "dp,fast,greedy")]
    algos: Vec<Algorithm>,
    /// Approximation parameter p/q for fptas.
    #[arg(long, value_parser = parse_epsilon, default_value = "1/4")]
    epsilon: Epsilon,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    instance: String,
    algo: Algorithm,
    objective: Option<i64>,
    oracle: Option<i64>,
    ratio: Option<String>,
    runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `objective / oracle` as a reduced fraction plus four decimals. Both zero
/// counts as a ratio of one.
pub fn ratio(objective: i64, oracle: i64) -> String {
    if oracle == 0 {
        return if objective == 0 { "1/1 (1.0000)".into() } else { format!("{objective}/0 (inf)") };
    }
    let g = gcd(objective, oracle).max(1);
    let (p, q) = (objective / g, oracle / g);
    format!("{p}/{q} ({:.4})", p as f64 / q as f64)
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("io: cannot list {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            p.is_file() && name.ends_with(".json") && !name.ends_with(".meta.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

/// The oracle optimum per objective kind, or `None` when out of budget.
fn oracle_values(instance: &Instance, algos: &[Algorithm]) -> BTreeMap<bool, Option<i64>> {
    let kinds: std::collections::BTreeSet<bool> = algos.iter().map(|a| a.is_weighted()).collect();
    kinds
        .into_iter()
        .map(|weighted| (weighted, solve_oracle(instance, weighted).ok().map(|r| r.objective)))
        .collect()
}

fn rows_for(path: &Path, args: &CompareArgs) -> Vec<Row> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let failed = |algo, error: String| Row {
        instance: name.clone(),
        algo,
        objective: None,
        oracle: None,
        ratio: None,
        runtime_ms: 0.0,
        error: Some(error),
    };
    let instance = match load_instance(path) {
        Ok(i) => i,
        Err(e) => return args.algos.iter().map(|&a| failed(a, e.code().to_string())).collect(),
    };
    let oracle = oracle_values(&instance, &args.algos);
    args.algos
        .iter()
        .map(|&algo| {
            let start = Instant::now();
            let result = solve(&instance, algo, Some(args.epsilon), false);
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            match result {
                Ok(r) => {
                    let best = oracle[&algo.is_weighted()];
                    Row {
                        instance: name.clone(),
                        algo,
                        objective: Some(r.objective),
                        oracle: best,
                        ratio: best.map(|b| ratio(r.objective, b)),
                        runtime_ms,
                        error: None,
                    }
                }
                Err(e) => Row {
                    runtime_ms,
                    ..failed(algo, e.code().to_string())
                },
            }
        })
        .collect()
}

/// Runs every instance in parallel; rows come back in file order.
pub fn compare_dir(args: &CompareArgs) -> Result<Vec<Row>, Failure> {
    let files = instance_files(&args.input_dir)?;
    Ok(files.par_iter().flat_map_iter(|p| rows_for(p, args)).collect())
}

fn cell<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(T::to_string).unwrap_or_default()
}

/// Quotes a CSV field if it needs it.
fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from("instance,algo,objective,oracle,ratio,runtime_ms\n");
    for r in rows {
        let objective = match &r.error {
            Some(e) => format!("error:{e}"),
            None => cell(&r.objective),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            escape(&r.instance),
            r.algo,
            objective,
            cell(&r.oracle),
            cell(&r.ratio),
            r.runtime_ms
        );
    }
    out
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), Failure> {
    let rows = compare_dir(args)?;
    let text = match args.format {
        Format::Csv => render_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    match &args.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("io: cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
