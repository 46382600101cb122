use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EasError;
use crate::model::{Instance, Ledger, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Dp,
    Fast,
    Greedy,
    #[serde(rename = "exact-w")]
    ExactWeighted,
    Fptas,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Dp,
        Algorithm::Fast,
        Algorithm::Greedy,
        Algorithm::ExactWeighted,
        Algorithm::Fptas,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Fast => "fast",
            Algorithm::Greedy => "greedy",
            Algorithm::ExactWeighted => "exact-w",
            Algorithm::Fptas => "fptas",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Whether the objective is total weight rather than job count.
    pub fn is_weighted(self) -> bool {
        matches!(self, Algorithm::ExactWeighted | Algorithm::Fptas)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = EasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| EasError::BadInput(format!("unknown algorithm '{s}'")))
    }
}

/// What every solver returns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub algo: Algorithm,
    /// Job count or total weight, depending on the solver.
    pub objective: i64,
    pub schedule: Schedule,
    /// `E(T + 1)` of the returned schedule.
    pub leftover: i64,
    /// Number of table cells allocated by table-based solvers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_cells: Option<u64>,
}

impl SolveResult {
    pub(crate) fn new(algo: Algorithm, instance: &Instance, schedule: Schedule, objective: i64) -> Self {
        let leftover = Ledger::of(instance, &schedule).leftover();
        SolveResult {
            algo,
            objective,
            schedule,
            leftover,
            table_cells: None,
        }
    }

    pub(crate) fn with_cells(mut self, cells: u64) -> Self {
        self.table_cells = Some(cells);
        self
    }
}
