//! Weighted common-window problem: a pseudo-polynomial exact table and the
//! rounding scheme built on it.
//!
//! `A(i, t, w)` is the most energy left at the start of slot `t + 1` over
//! feasible schedules of a subset of the first `i` jobs (by energy, then id)
//! within slots `1..=t` whose weight is at least `w`. Row `i` only needs
//! `w <= i * W_max`, and rows are stored trimmed to that width.
//!
//! The rounding scheme scales weights to `x_i = floor(w_i * n / (eps * W_max))`,
//! runs the same table on `x` and reports the true weight of what it finds.

use std::fmt;
use std::str::FromStr;

use crate::error::{EasError, Result};
use crate::level::Level;
use crate::model::{Instance, Job, Schedule, Slot};
use crate::solution::{Algorithm, SolveResult};

/// Largest table the weighted solvers will allocate.
pub const MAX_TABLE_CELLS: u64 = 1 << 25;

/// An approximation parameter `num / den` strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num >= den {
            return Err(EasError::BadEpsilon(format!("{num}/{den} is not strictly between 0 and 1")));
        }
        Ok(Epsilon { num, den })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = EasError;

    /// Accepts `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || EasError::BadEpsilon(format!("'{s}' is not of the form p/q"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Epsilon::new(p, q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    Unreachable,
    /// Nothing scheduled; only the `w = 0` column.
    Empty,
    Skip,
    Idle,
    Run,
}

/// The filled `A(i, t, w)` table for `i` in `[1, n]`, `t` in `[1, T]` and
/// `w` in `[0, i * W_max]`.
#[derive(Debug, Clone)]
pub struct WeightedTable {
    jobs: Vec<Job>,
    weights: Vec<usize>,
    max_weight: usize,
    harvest: Vec<i64>,
    harvest_prefix: Vec<i64>,
    row_start: Vec<usize>,
    cells: Vec<Level>,
    choices: Vec<Choice>,
}

impl WeightedTable {
    fn build(instance: &Instance, jobs: Vec<Job>, weights: Vec<usize>, window: (Slot, Slot)) -> Result<Self> {
        let horizon = instance.horizon();
        let n = jobs.len();
        let max_weight = weights.iter().copied().max().unwrap_or(0);
        let total = (1..=n as u128)
            .map(|i| horizon as u128 * (i * max_weight as u128 + 1))
            .sum::<u128>();
        if total > MAX_TABLE_CELLS as u128 {
            return Err(EasError::TableTooLarge {
                cells: total,
                limit: MAX_TABLE_CELLS as u128,
            });
        }
        let mut row_start = Vec::with_capacity(n + 1);
        row_start.push(0);
        for i in 1..=n {
            row_start.push(row_start[i - 1] + horizon * (i * max_weight + 1));
        }
        let total = total as usize;
        let mut table = WeightedTable {
            jobs,
            weights,
            max_weight,
            harvest: instance.harvest_profile().to_vec(),
            harvest_prefix: instance.prefix_harvest(),
            row_start,
            cells: vec![Level::UNREACHABLE; total],
            choices: vec![Choice::Unreachable; total],
        };
        table.fill(window);
        Ok(table)
    }

    fn fill(&mut self, (release, due): (Slot, Slot)) {
        let horizon = self.horizon();
        let runnable = |t: Slot| t >= 2 && release <= t && t <= due;
        for i in 1..=self.rows() {
            let (energy, weight) = (self.jobs[i - 1].energy, self.weights[i - 1]);
            for t in 1..=horizon {
                self.set(i, t, 0, Some(self.harvest_prefix[t]), Choice::Empty);
                if t == 1 {
                    continue;
                }
                let h = self.harvest[t - 1];
                for w in 1..self.width(i) {
                    let skip = self.get(i - 1, t, w);
                    let idle = self.get(i, t - 1, w).map(|a| a + h);
                    let run = if runnable(t) {
                        self.get(i - 1, t - 1, w.saturating_sub(weight))
                            .filter(|&a| a >= energy)
                            .map(|a| a - energy)
                    } else {
                        None
                    };
                    let best = skip.max(idle).max(run);
                    let choice = match best {
                        None => Choice::Unreachable,
                        b if b == skip => Choice::Skip,
                        b if b == idle => Choice::Idle,
                        _ => Choice::Run,
                    };
                    self.set(i, t, w, best, choice);
                }
            }
        }
    }

    fn width(&self, i: usize) -> usize {
        i * self.max_weight + 1
    }

    fn index(&self, i: usize, t: Slot, w: usize) -> Option<usize> {
        let width = self.width(i);
        (w < width).then(|| self.row_start[i - 1] + (t - 1) * width + w)
    }

    fn set(&mut self, i: usize, t: Slot, w: usize, value: Option<i64>, choice: Choice) {
        let at = self.index(i, t, w).expect("writes stay inside the row");
        self.cells[at] = Level::from_option(value);
        self.choices[at] = choice;
    }

    /// `A(i, t, w)`, or `None` for minus infinity. Row 0 is the empty
    /// schedule: `A(0, t, 0) = h_1 + ... + h_t`.
    pub fn get(&self, i: usize, t: Slot, w: usize) -> Option<i64> {
        assert!(i <= self.rows() && (1..=self.horizon()).contains(&t));
        if i == 0 {
            return (w == 0).then_some(self.harvest_prefix[t]);
        }
        self.index(i, t, w).and_then(|at| self.cells[at].get())
    }

    pub fn rows(&self) -> usize {
        self.jobs.len()
    }

    pub fn horizon(&self) -> Slot {
        self.harvest.len()
    }

    /// Jobs in row order.
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn cell_count(&self) -> u64 {
        self.cells.len() as u64
    }

    /// Largest `w` with `A(n, T, w) >= 0`.
    pub fn best_weight(&self) -> usize {
        let (n, horizon) = (self.rows(), self.horizon());
        if n == 0 {
            return 0;
        }
        (0..self.width(n))
            .rev()
            .find(|&w| self.get(n, horizon, w).is_some_and(|a| a >= 0))
            .unwrap_or(0)
    }

    fn backtrack(&self, w: usize) -> Schedule {
        let mut schedule = Schedule::new();
        let (mut i, mut t, mut w) = (self.rows(), self.horizon(), w);
        while i >= 1 && w > 0 {
            let at = self.index(i, t, w).expect("backtracking stays inside the table");
            match self.choices[at] {
                Choice::Skip => i -= 1,
                Choice::Idle => t -= 1,
                Choice::Run => {
                    schedule.assign(self.jobs[i - 1].id, t);
                    w = w.saturating_sub(self.weights[i - 1]);
                    i -= 1;
                    t -= 1;
                }
                Choice::Empty | Choice::Unreachable => unreachable!("backtracking starts from a reachable cell"),
            }
        }
        schedule
    }
}

fn common_window(instance: &Instance) -> Result<(Slot, Slot)> {
    instance.validate()?;
    instance.common_window().ok_or(EasError::NotCommonWindow)
}

fn as_index(weight: i64) -> Result<usize> {
    usize::try_from(weight).map_err(|_| EasError::Overflow(format!("weight {weight} does not fit an index")))
}

/// Builds the table on the instance's own weights.
pub fn build_weighted_table(instance: &Instance) -> Result<WeightedTable> {
    let window = common_window(instance)?;
    if instance.is_empty() {
        return Err(EasError::NoJobs);
    }
    let jobs = instance.jobs_by_energy();
    let weights = jobs.iter().map(|j| as_index(j.weight)).collect::<Result<_>>()?;
    WeightedTable::build(instance, jobs, weights, window)
}

/// Maximum total weight, with a schedule backtracked from the table.
pub fn solve_exact_weighted(instance: &Instance) -> Result<SolveResult> {
    common_window(instance)?;
    if instance.is_empty() {
        return Ok(SolveResult::new(Algorithm::ExactWeighted, instance, Schedule::new(), 0));
    }
    let table = build_weighted_table(instance)?;
    let best = table.best_weight();
    let schedule = table.backtrack(best);
    Ok(SolveResult::new(Algorithm::ExactWeighted, instance, schedule, best as i64).with_cells(table.cell_count()))
}

/// Jobs that fit in some slot of the window when run alone.
fn individually_feasible(instance: &Instance, (release, due): (Slot, Slot)) -> Vec<Job> {
    let prefix = instance.prefix_harvest();
    let first = release.max(2);
    instance
        .jobs_by_energy()
        .into_iter()
        .filter(|j| first <= due && prefix[due - 1] >= j.energy)
        .collect()
}

/// `floor(w_i * n / (eps * W_max))` for each job, in the given order.
pub fn rounded_weights(jobs: &[Job], eps: Epsilon) -> Result<Vec<usize>> {
    let n = jobs.len() as u128;
    let max_weight = jobs.iter().map(|j| j.weight).max().unwrap_or(0) as u128;
    if max_weight == 0 {
        return Ok(vec![0; jobs.len()]);
    }
    let denominator = eps.num as u128 * max_weight;
    jobs.iter()
        .map(|j| {
            let x = j.weight as u128 * n * eps.den as u128 / denominator;
            usize::try_from(x).map_err(|_| EasError::Overflow(format!("rounded weight of job {}", j.id)))
        })
        .collect()
}

/// A schedule whose true weight is at least `(1 - eps)` times the optimum.
///
/// Jobs that cannot run even alone are dropped first; without that, one
/// heavy unusable job would make the rounding grid too coarse.
pub fn solve_fptas(instance: &Instance, eps: Epsilon) -> Result<SolveResult> {
    let window = common_window(instance)?;
    let jobs = individually_feasible(instance, window);
    if jobs.iter().all(|j| j.weight == 0) {
        return Ok(SolveResult::new(Algorithm::Fptas, instance, Schedule::new(), 0));
    }
    let weights = rounded_weights(&jobs, eps)?;
    let table = WeightedTable::build(instance, jobs, weights, window)?;
    let schedule = table.backtrack(table.best_weight());
    let weight = schedule.iter().map(|(id, _)| instance.job(id).map_or(0, |j| j.weight)).sum();
    Ok(SolveResult::new(Algorithm::Fptas, instance, schedule, weight).with_cells(table.cell_count()))
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::model::{validate_schedule, JobId};

    fn three_jobs() -> Instance {
        let jobs = vec![
            Job::new(1, 2, 3, 3, 4),
            Job::new(2, 2, 3, 2, 3),
            Job::new(3, 2, 3, 2, 2),
        ];
        Instance::new(3, vec![5, 0, 0], jobs).unwrap()
    }

    #[test]
    fn three_job_example() {
        let inst = three_jobs();
        let result = solve_exact_weighted(&inst).unwrap();
        assert_eq!(result.objective, 7);
        let mut ids: Vec<_> = result.schedule.iter().map(|(id, _)| id).collect();
        ids.sort();
        assert_eq!(ids, vec![1, 2]);
        assert!(validate_schedule(&inst, &result.schedule).feasible);
    }

    #[test]
    fn single_job_and_zero_weights() {
        let inst = Instance::new(2, vec![3, 0], vec![Job::new(1, 1, 2, 2, 9)]).unwrap();
        assert_eq!(solve_exact_weighted(&inst).unwrap().objective, 9);
        let jobs = vec![Job::new(1, 1, 3, 1, 0), Job::new(2, 1, 3, 1, 0)];
        let inst = Instance::new(3, vec![5, 0, 0], jobs).unwrap();
        let result = solve_exact_weighted(&inst).unwrap();
        assert_eq!(result.objective, 0);
        assert!(result.schedule.is_empty());
        assert!(solve_fptas(&inst, Epsilon::new(1, 2).unwrap()).unwrap().schedule.is_empty());
    }

    #[test]
    fn table_invariants() {
        let table = build_weighted_table(&three_jobs()).unwrap();
        for i in 1..=3 {
            for t in 1..=3 {
                assert_eq!(table.get(i, t, 0), Some(table.harvest_prefix[t]));
                for w in 1..=i * 4 {
                    assert!(table.get(i, t, w) <= table.get(i, t, w - 1));
                }
            }
        }
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!("1/4".parse::<Epsilon>().unwrap(), Epsilon::new(1, 4).unwrap());
        for bad in ["0/3", "3/3", "5/4", "1/0", "0.5", "a/b"] {
            assert_eq!(bad.parse::<Epsilon>().unwrap_err().code(), "bad-epsilon", "{bad}");
        }
    }

    #[test]
    fn rounding_example() {
        let jobs = three_jobs().jobs_by_energy();
        let mut pairs: Vec<(JobId, usize)> = jobs
            .iter()
            .map(|j| j.id)
            .zip(rounded_weights(&jobs, Epsilon::new(1, 2).unwrap()).unwrap())
            .collect();
        pairs.sort();
        assert_eq!(pairs, vec![(1, 6), (2, 4), (3, 3)]);
        let result = solve_fptas(&three_jobs(), Epsilon::new(1, 2).unwrap()).unwrap();
        assert_eq!(result.objective, 7);
    }

    #[test]
    fn unit_grid_is_exact() {
        // n = 4, eps = 1/2, W_max = 2: the grid step eps * W_max / n is 1/4 of
        // a unit, so rounding only rescales and the optimum is preserved.
        let jobs = vec![
            Job::new(1, 1, 5, 2, 2),
            Job::new(2, 1, 5, 3, 1),
            Job::new(3, 1, 5, 1, 2),
            Job::new(4, 1, 5, 4, 1),
        ];
        let inst = Instance::new(5, vec![4, 1, 0, 2, 0], jobs).unwrap();
        let exact = solve_exact_weighted(&inst).unwrap().objective;
        assert_eq!(solve_fptas(&inst, Epsilon::new(1, 2).unwrap()).unwrap().objective, exact);
    }

    #[test]
    fn unusable_heavy_job_is_pruned() {
        let jobs = vec![
            Job::new(1, 1, 4, 1, 1),
            Job::new(2, 1, 4, 1, 1),
            Job::new(3, 1, 4, 100, 1000),
        ];
        let inst = Instance::new(4, vec![2, 0, 0, 0], jobs).unwrap();
        let result = solve_fptas(&inst, Epsilon::new(1, 2).unwrap()).unwrap();
        assert_eq!(result.objective, 2);
    }

    #[test]
    fn oversized_tables_are_refused() {
        let jobs = (0..50).map(|i| Job::new(i, 1, 1000, 0, 1 << 20)).collect();
        let inst = Instance::new(1000, vec![0; 1000], jobs).unwrap();
        assert_eq!(solve_exact_weighted(&inst).unwrap_err().code(), "table-too-large");
    }

    #[test]
    fn rejects_mixed_windows() {
        let jobs = vec![Job::new(1, 1, 2, 0, 1), Job::new(2, 2, 2, 0, 1)];
        let inst = Instance::new(2, vec![0, 0], jobs).unwrap();
        assert_eq!(solve_exact_weighted(&inst).unwrap_err().code(), "not-common-window");
        let eps = Epsilon::new(1, 2).unwrap();
        assert_eq!(solve_fptas(&inst, eps).unwrap_err().code(), "not-common-window");
    }

    /// The published recurrence for `r = 1, d = T`, with its explicit first
    /// row and full-width rows.
    fn literal_table(inst: &Instance) -> Vec<Vec<Vec<Option<i64>>>> {
        let jobs = inst.jobs_by_energy();
        let (n, horizon) = (jobs.len(), inst.horizon());
        let wmax = inst.max_weight() as usize;
        let prefix = inst.prefix_harvest();
        let h = |t: Slot| inst.harvest(t);
        let width = n * wmax + 1;
        let mut a = vec![vec![vec![None; width]; horizon + 1]; n + 1];
        for row in a.iter_mut().skip(1) {
            for t in 1..=horizon {
                row[t][0] = Some(prefix[t]);
            }
        }
        for t in 2..=horizon {
            if prefix[t - 1] >= jobs[0].energy {
                for w in 1..=jobs[0].weight as usize {
                    a[1][t][w] = a[1][t - 1][w]
                        .map(|v: i64| v + h(t))
                        .max(Some(prefix[t - 1] - jobs[0].energy));
                }
            }
        }
        for i in 2..=n {
            let (e, wi) = (jobs[i - 1].energy, jobs[i - 1].weight as usize);
            for t in 2..=horizon {
                for w in 1..=i * wmax {
                    let prev = a[i - 1][t - 1][w.saturating_sub(wi)];
                    let base = a[i - 1][t][w].max(a[i][t - 1][w].map(|v| v + h(t)));
                    a[i][t][w] = if prev.is_some_and(|v| v >= e) {
                        base.max(prev.map(|v| v - e))
                    } else {
                        base
                    };
                }
            }
        }
        a
    }

    fn arb_weighted() -> impl Strategy<Value = Instance> {
        (1usize..=8).prop_flat_map(|horizon| {
            (
                prop::collection::vec(0i64..=6, horizon),
                prop::collection::vec((0i64..=6, 0i64..=8), 1..=6),
            )
                .prop_map(move |(harvest, jobs)| {
                    let jobs = jobs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (e, w))| Job::new(i as JobId, 1, horizon, e, w))
                        .collect();
                    Instance::new(horizon, harvest, jobs).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_literal_recurrence(inst in arb_weighted()) {
            let table = build_weighted_table(&inst).unwrap();
            let literal = literal_table(&inst);
            for i in 1..=inst.len() {
                for t in 1..=inst.horizon() {
                    for w in 0..=i * inst.max_weight() as usize {
                        prop_assert_eq!(table.get(i, t, w), literal[i][t][w]);
                    }
                }
            }
        }

        #[test]
        fn backtracked_schedule_attains_the_optimum(inst in arb_weighted()) {
            let result = solve_exact_weighted(&inst).unwrap();
            prop_assert!(validate_schedule(&inst, &result.schedule).feasible);
            let weight: i64 = result.schedule.iter().map(|(id, _)| inst.job(id).unwrap().weight).sum();
            prop_assert_eq!(weight, result.objective);
        }

        #[test]
        fn rounding_down_keeps_feasibility(inst in arb_weighted(), p in 1u64..4) {
            let eps = Epsilon::new(p, 4).unwrap();
            let result = solve_fptas(&inst, eps).unwrap();
            prop_assert!(validate_schedule(&inst, &result.schedule).feasible);
            let exact = solve_exact_weighted(&inst).unwrap().objective;
            prop_assert!(result.objective <= exact);
            prop_assert!(4 * result.objective >= (4 - p as i64) * exact);
        }
    }
}
