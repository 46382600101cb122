//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON text. The work happens in the plain
//! `*_json` functions, which native tests call directly.

use eas_core::generate::{random_instance as draw, Family, WindowMode};
use eas_core::io::{parse_instance, serialize_instance};
use eas_core::oracle::solve_oracle;
use eas_core::{solve as run, Algorithm, Epsilon, Ledger, Schedule, Slot};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// A solver run in the shape the page draws: the schedule plus the energy
/// level before every slot.
#[derive(Debug, Serialize)]
pub struct Run {
    pub algo: Algorithm,
    pub objective: i64,
    pub schedule: Schedule,
    /// `E(1), ..., E(T + 1)`.
    pub ledger: Vec<i64>,
    /// `(slot, job)` pairs in slot order.
    pub by_slot: Vec<(Slot, u32)>,
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub algo: Algorithm,
    pub objective: Option<i64>,
    /// Best objective of the same kind, when the oracle can afford it.
    pub oracle: Option<i64>,
    pub error: Option<String>,
}

pub fn random_instance_json(jobs: u32, horizon: u32, emax: u32, hmax: u32, seed: u32, common: bool) -> Result<String, String> {
    if jobs == 0 || horizon == 0 || emax == 0 {
        return Err("jobs, horizon and maximum energy must be at least 1".into());
    }
    let windows = if common { WindowMode::Common } else { WindowMode::Arbitrary };
    let family = Family {
        weight: (1, 9),
        ..Family::fixed(jobs as usize, horizon as Slot, (1, emax.into()), (0, hmax.into()), windows)
    };
    draw(&family, seed.into()).map(|i| serialize_instance(&i)).map_err(|e| e.to_string())
}

fn parse_epsilon(epsilon: &str) -> Result<Option<Epsilon>, String> {
    if epsilon.trim().is_empty() {
        return Ok(None);
    }
    epsilon.parse().map(Some).map_err(|e: eas_core::EasError| e.to_string())
}

pub fn solve_json(instance: &str, algo: &str, epsilon: &str) -> Result<String, String> {
    let instance = parse_instance(instance).map_err(|e| e.to_string())?;
    let algo: Algorithm = algo.parse().map_err(|e: eas_core::EasError| e.to_string())?;
    let result = run(&instance, algo, parse_epsilon(epsilon)?, false).map_err(|e| e.to_string())?;
    let ledger = Ledger::of(&instance, &result.schedule).as_slice().to_vec();
    let by_slot = result.schedule.by_slot();
    let out = Run {
        algo,
        objective: result.objective,
        schedule: result.schedule,
        ledger,
        by_slot,
    };
    Ok(serde_json::to_string(&out).expect("runs serialize"))
}

pub fn compare_json(instance: &str, epsilon: &str) -> Result<String, String> {
    let instance = parse_instance(instance).map_err(|e| e.to_string())?;
    let eps = parse_epsilon(epsilon)?.or(Epsilon::new(1, 4).ok());
    let best = |weighted| solve_oracle(&instance, weighted).ok().map(|r| r.objective);
    let (count, weight) = (best(false), best(true));
    let rows: Vec<CompareRow> = Algorithm::ALL
        .into_iter()
        .filter(|&a| a != Algorithm::Oracle)
        .map(|algo| {
            let oracle = if algo.is_weighted() { weight } else { count };
            match run(&instance, algo, eps, false) {
                Ok(r) => CompareRow { algo, objective: Some(r.objective), oracle, error: None },
                Err(e) => CompareRow { algo, objective: None, oracle, error: Some(e.code().to_string()) },
            }
        })
        .collect();
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

/// A seeded random instance as JSON. Weights are drawn from 1 to 9.
#[wasm_bindgen]
pub fn random_instance(jobs: u32, horizon: u32, emax: u32, hmax: u32, seed: u32, common: bool) -> Result<String, JsError> {
    random_instance_json(jobs, horizon, emax, hmax, seed, common).map_err(|e| JsError::new(&e))
}

/// Runs one solver. `epsilon` is `p/q` or empty.
#[wasm_bindgen]
pub fn solve(instance: &str, algo: &str, epsilon: &str) -> Result<String, JsError> {
    solve_json(instance, algo, epsilon).map_err(|e| JsError::new(&e))
}

/// Runs every solver and reports objectives next to the oracle optimum.
#[wasm_bindgen]
pub fn compare(instance: &str, epsilon: &str) -> Result<String, JsError> {
    compare_json(instance, epsilon).map_err(|e| JsError::new(&e))
}
