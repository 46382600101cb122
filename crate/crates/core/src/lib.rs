//! Scheduling unit jobs on a single machine powered by harvested energy.
//!
//! Energy is gained only on idle slots, and a job may start only when the
//! stored energy covers its requirement. The crate offers exact and
//! approximate solvers, a brute-force oracle, hardness-reduction generators
//! and seeded random instance families.

pub mod dp;
pub mod error;
pub mod fast;
pub mod generate;
pub mod greedy;
pub mod io;
mod level;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod solution;
pub mod transform;
pub mod weighted;

pub use error::{EasError, Result};
pub use model::{
    available_energy, schedule_value, validate_schedule, FeasibilityReport, Instance, Job, JobId, Ledger,
    Schedule, Slot, Violation, ViolationKind,
};
pub use solution::{Algorithm, SolveResult};
pub use weighted::Epsilon;

/// Runs `algo` on `instance`. `epsilon` is required by the rounding scheme
/// and ignored otherwise; `weighted` only affects the oracle.
pub fn solve(instance: &Instance, algo: Algorithm, epsilon: Option<Epsilon>, weighted: bool) -> Result<SolveResult> {
    match algo {
        Algorithm::Dp => dp::solve_count(instance),
        Algorithm::Fast => fast::solve_slots(instance),
        Algorithm::Greedy => greedy::solve_greedy(instance),
        Algorithm::ExactWeighted => weighted::solve_exact_weighted(instance),
        Algorithm::Fptas => {
            let eps = epsilon.ok_or_else(|| EasError::BadEpsilon("the rounding scheme needs an epsilon".into()))?;
            weighted::solve_fptas(instance, eps)
        }
        Algorithm::Oracle => oracle::solve_oracle(instance, weighted),
    }
}
