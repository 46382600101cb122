//! Exact `O(nT)` dynamic program for the unweighted problem when every job
//! shares one window.
//!
//! Jobs are taken in non-decreasing energy order (ties by id); an optimal
//! schedule always runs a prefix of that order, in that order. `A(i, t)` is
//! the most energy that can be left at the start of slot `t + 1` after
//! running the first `i` jobs within slots `1..=t`.
//!
//! A common release `r > 1` and due date `d < T` are handled by allowing
//! only harvesting outside `[r, d]`. Slot 1 is never used to run a job: the
//! first job's recurrence starts at slot 2.

use crate::error::{EasError, Result};
use crate::level::Level;
use crate::model::{Instance, Job, Schedule, Slot};
use crate::solution::{Algorithm, SolveResult};

/// The filled `A(i, t)` table, `i` in `[1, n]`, `t` in `[1, T]`.
#[derive(Debug, Clone)]
pub struct DpTable {
    jobs: Vec<Job>,
    horizon: Slot,
    cells: Vec<Level>,
}

impl DpTable {
    /// `A(i, t)`, or `None` for minus infinity.
    pub fn get(&self, i: usize, t: Slot) -> Option<i64> {
        assert!((1..=self.jobs.len()).contains(&i) && (1..=self.horizon).contains(&t));
        self.cells[(i - 1) * self.horizon + (t - 1)].get()
    }

    fn set(&mut self, i: usize, t: Slot, value: Option<i64>) {
        self.cells[(i - 1) * self.horizon + (t - 1)] = Level::from_option(value);
    }

    /// Jobs in table row order.
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn rows(&self) -> usize {
        self.jobs.len()
    }

    pub fn horizon(&self) -> Slot {
        self.horizon
    }

    pub fn cell_count(&self) -> u64 {
        self.cells.len() as u64
    }

    /// Largest `m` with `A(m, T) >= 0`, or 0.
    pub fn max_count(&self) -> usize {
        (1..=self.rows())
            .rev()
            .find(|&i| self.get(i, self.horizon).is_some_and(|v| v >= 0))
            .unwrap_or(0)
    }

    /// Walks back from `A(m, T)` to a schedule of the first `m` jobs whose
    /// leftover energy is exactly `A(m, T)`.
    fn backtrack(&self, instance: &Instance, m: usize) -> Schedule {
        let mut schedule = Schedule::new();
        let (mut i, mut t) = (m, self.horizon);
        while i >= 1 {
            let value = self.get(i, t).expect("backtracking only visits reachable cells");
            let idled = t >= 2
                && self
                    .get(i, t - 1)
                    .is_some_and(|prev| prev + instance.harvest(t) == value);
            if idled {
                t -= 1;
                continue;
            }
            schedule.assign(self.jobs[i - 1].id, t);
            i -= 1;
            t -= 1;
        }
        schedule
    }
}

/// True iff all jobs share one release time and one due date.
pub fn check_common_window(instance: &Instance) -> bool {
    instance.common_window().is_some()
}

pub fn build_table(instance: &Instance) -> Result<DpTable> {
    instance.validate()?;
    let (release, due) = instance.common_window().ok_or(EasError::NotCommonWindow)?;
    if instance.is_empty() {
        return Err(EasError::NoJobs);
    }
    let jobs = instance.jobs_by_energy();
    let horizon = instance.horizon();
    let n = jobs.len();
    let prefix = instance.prefix_harvest();
    let runnable = |t: Slot| t >= 2 && release <= t && t <= due;
    let h = |t: Slot| instance.harvest(t);

    let mut table = DpTable {
        jobs,
        horizon,
        cells: vec![Level::UNREACHABLE; n * horizon],
    };

    let e1 = table.jobs[0].energy;
    for t in 2..=horizon {
        let idle = table.get(1, t - 1).map(|a| a + h(t));
        let run = (runnable(t) && prefix[t - 1] >= e1).then(|| prefix[t - 1] - e1);
        table.set(1, t, idle.max(run));
    }

    for i in 2..=n {
        let e = table.jobs[i - 1].energy;
        for t in (i + 1)..=horizon {
            let idle = table.get(i, t - 1).map(|a| a + h(t));
            let run = table
                .get(i - 1, t - 1)
                .filter(|&prev| runnable(t) && prev >= e)
                .map(|prev| prev - e);
            table.set(i, t, idle.max(run));
        }
    }
    Ok(table)
}

/// Maximum number of jobs that fit, with a schedule rebuilt from the table.
pub fn solve_count(instance: &Instance) -> Result<SolveResult> {
    instance.validate()?;
    if !check_common_window(instance) {
        return Err(EasError::NotCommonWindow);
    }
    if instance.is_empty() {
        return Ok(SolveResult::new(Algorithm::Dp, instance, Schedule::new(), 0));
    }
    let table = build_table(instance)?;
    let m = table.max_count();
    let schedule = table.backtrack(instance, m);
    Ok(SolveResult::new(Algorithm::Dp, instance, schedule, m as i64).with_cells(table.cell_count()))
}
