//! Exhaustive exact solver for small instances with arbitrary windows,
//! weighted or not. It is the ground truth the other solvers are tested
//! against.
//!
//! The search walks the slots in order. At each slot it either harvests or
//! runs one pending job whose window contains the slot and whose energy is
//! available. Results are memoized on `(slot, scheduled jobs still able to
//! matter, stored energy)`, which keeps every instance within the budget
//! tractable without giving up exactness.

use std::collections::HashMap;

use crate::error::{EasError, Result};
use crate::model::{Instance, Job, Schedule, Slot};
use crate::solution::{Algorithm, SolveResult};

pub const MAX_JOBS: usize = 12;
pub const MAX_HORIZON: Slot = 14;
/// Most schedules [`enumerate_optimal_schedules`] will return.
pub const MAX_ENUMERATED: usize = 200_000;

struct Search<'a> {
    instance: &'a Instance,
    /// Jobs in id order; bit `k` of a mask stands for `jobs[k]`.
    jobs: Vec<Job>,
    gains: Vec<i64>,
    /// Jobs whose due date is at or after each slot.
    alive: Vec<u16>,
    memo: Vec<HashMap<(u16, i64), i64>>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, weighted: bool) -> Result<Self> {
        instance.validate()?;
        let (n, horizon) = (instance.len(), instance.horizon());
        if n > MAX_JOBS || horizon > MAX_HORIZON {
            return Err(EasError::TooLargeForOracle(format!(
                "{n} jobs over {horizon} slots exceeds {MAX_JOBS} jobs or {MAX_HORIZON} slots"
            )));
        }
        let mut jobs = instance.jobs().to_vec();
        jobs.sort_by_key(|j| j.id);
        let gains = jobs.iter().map(|j| if weighted { j.weight } else { 1 }).collect();
        let alive = (0..=horizon + 1)
            .map(|t| {
                jobs.iter()
                    .enumerate()
                    .filter(|(_, j)| j.due >= t)
                    .fold(0u16, |m, (k, _)| m | 1 << k)
            })
            .collect();
        Ok(Search {
            instance,
            jobs,
            gains,
            alive,
            memo: vec![HashMap::new(); horizon + 2],
        })
    }

    fn horizon(&self) -> Slot {
        self.instance.horizon()
    }

    /// Jobs that may run at `t` given the scheduled set and stored energy,
    /// in id order.
    fn runnable(&self, t: Slot, mask: u16, energy: i64) -> impl Iterator<Item = usize> + '_ {
        self.jobs
            .iter()
            .enumerate()
            .filter(move |(k, j)| mask & (1 << k) == 0 && j.allows(t) && energy >= j.energy)
            .map(|(k, _)| k)
    }

    /// Best objective obtainable from slot `t` onward.
    fn best(&mut self, t: Slot, mask: u16, energy: i64) -> i64 {
        if t > self.horizon() {
            return 0;
        }
        let mask = mask & self.alive[t];
        if let Some(&v) = self.memo[t].get(&(mask, energy)) {
            return v;
        }
        let mut value = self.best(t + 1, mask, energy + self.instance.harvest(t));
        let options: Vec<usize> = self.runnable(t, mask, energy).collect();
        for k in options {
            let gain = self.gains[k] + self.best(t + 1, mask | 1 << k, energy - self.jobs[k].energy);
            value = value.max(gain);
        }
        self.memo[t].insert((mask, energy), value);
        value
    }

    /// Optimal moves at `t`: `Some(k)` runs `jobs[k]`, `None` harvests.
    /// Running comes before harvesting, lower ids first.
    fn optimal_moves(&mut self, t: Slot, mask: u16, energy: i64) -> Vec<Option<usize>> {
        let target = self.best(t, mask, energy);
        let mut moves = Vec::new();
        let options: Vec<usize> = self.runnable(t, mask, energy).collect();
        for k in options {
            if self.gains[k] + self.best(t + 1, mask | 1 << k, energy - self.jobs[k].energy) == target {
                moves.push(Some(k));
            }
        }
        if self.best(t + 1, mask, energy + self.instance.harvest(t)) == target {
            moves.push(None);
        }
        moves
    }

    fn canonical(&mut self) -> Schedule {
        let mut schedule = Schedule::new();
        let (mut mask, mut energy) = (0u16, 0i64);
        for t in 1..=self.horizon() {
            match self.optimal_moves(t, mask, energy)[0] {
                Some(k) => {
                    schedule.assign(self.jobs[k].id, t);
                    mask |= 1 << k;
                    energy -= self.jobs[k].energy;
                }
                None => energy += self.instance.harvest(t),
            }
        }
        schedule
    }

    fn visit(
        &mut self,
        t: Slot,
        mask: u16,
        energy: i64,
        partial: &mut Schedule,
        visitor: &mut dyn FnMut(&Schedule) -> bool,
    ) -> bool {
        if t > self.horizon() {
            return visitor(partial);
        }
        for step in self.optimal_moves(t, mask, energy) {
            let go_on = match step {
                Some(k) => {
                    let job = self.jobs[k];
                    partial.assign(job.id, t);
                    let go_on = self.visit(t + 1, mask | 1 << k, energy - job.energy, partial, visitor);
                    partial.unassign(job.id);
                    go_on
                }
                None => {
                    let next = energy + self.instance.harvest(t);
                    self.visit(t + 1, mask, next, partial, visitor)
                }
            };
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Optimal objective (job count, or total weight if `weighted`) and the
/// canonical optimal schedule: scanning slots in order, run the lowest-id
/// job that keeps the optimum reachable, otherwise harvest.
pub fn solve_oracle(instance: &Instance, weighted: bool) -> Result<SolveResult> {
    let mut search = Search::new(instance, weighted)?;
    let objective = search.best(1, 0, 0);
    let schedule = search.canonical();
    Ok(SolveResult::new(Algorithm::Oracle, instance, schedule, objective))
}

/// Every feasible schedule with optimal objective, in canonical order.
/// Fails if there are more than [`MAX_ENUMERATED`].
pub fn enumerate_optimal_schedules(instance: &Instance, weighted: bool) -> Result<Vec<Schedule>> {
    let mut out = Vec::new();
    let complete = visit_optimal_schedules(instance, weighted, |s| {
        if out.len() == MAX_ENUMERATED {
            return false;
        }
        out.push(s.clone());
        true
    })?;
    if !complete {
        return Err(EasError::TooLargeForOracle(format!(
            "more than {MAX_ENUMERATED} optimal schedules"
        )));
    }
    Ok(out)
}

/// Calls `visitor` on every optimal schedule in canonical order until it
/// returns false. Returns whether the walk completed.
pub fn visit_optimal_schedules(
    instance: &Instance,
    weighted: bool,
    mut visitor: impl FnMut(&Schedule) -> bool,
) -> Result<bool> {
    let mut search = Search::new(instance, weighted)?;
    Ok(search.visit(1, 0, 0, &mut Schedule::new(), &mut visitor))
}

pub const JOB_MAJOR_MAX_JOBS: usize = 7;
pub const JOB_MAJOR_MAX_HORIZON: Slot = 10;

/// The optimal objective by a different route: decide each job in id order
/// (skip it or pick a free slot in its window) and check the energy of every
/// complete assignment. Used to cross-check [`solve_oracle`].
pub fn solve_oracle_job_major(instance: &Instance, weighted: bool) -> Result<i64> {
    instance.validate()?;
    let (n, horizon) = (instance.len(), instance.horizon());
    if n > JOB_MAJOR_MAX_JOBS || horizon > JOB_MAJOR_MAX_HORIZON {
        return Err(EasError::TooLargeForOracle(format!(
            "{n} jobs over {horizon} slots exceeds {JOB_MAJOR_MAX_JOBS} jobs or {JOB_MAJOR_MAX_HORIZON} slots"
        )));
    }
    let mut jobs = instance.jobs().to_vec();
    jobs.sort_by_key(|j| j.id);
    let gain = |j: &Job| if weighted { j.weight } else { 1 };
    let mut remaining = vec![0i64; n + 1];
    for k in (0..n).rev() {
        remaining[k] = remaining[k + 1] + gain(&jobs[k]);
    }

    struct Walk<'a> {
        instance: &'a Instance,
        jobs: &'a [Job],
        remaining: &'a [i64],
        gain: &'a dyn Fn(&Job) -> i64,
        occupant: Vec<Option<usize>>,
        best: i64,
    }

    impl Walk<'_> {
        fn feasible(&self) -> bool {
            let mut energy = 0i64;
            for t in 1..=self.instance.horizon() {
                match self.occupant[t] {
                    Some(k) if energy < self.jobs[k].energy => return false,
                    Some(k) => energy -= self.jobs[k].energy,
                    None => energy += self.instance.harvest(t),
                }
            }
            true
        }

        fn go(&mut self, k: usize, value: i64) {
            if value + self.remaining[k] <= self.best {
                return;
            }
            if k == self.jobs.len() {
                if self.feasible() {
                    self.best = value;
                }
                return;
            }
            let job = self.jobs[k];
            for t in job.release..=job.due {
                if self.occupant[t].is_none() {
                    self.occupant[t] = Some(k);
                    self.go(k + 1, value + (self.gain)(&job));
                    self.occupant[t] = None;
                }
            }
            self.go(k + 1, value);
        }
    }

    let mut walk = Walk {
        instance,
        jobs: &jobs,
        remaining: &remaining,
        gain: &gain,
        occupant: vec![None; horizon + 1],
        best: -1,
    };
    walk.go(0, 0);
    Ok(walk.best.max(0))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::model::{validate_schedule, JobId, Ledger};

    fn two_jobs() -> Instance {
        let jobs = vec![Job::new(1, 1, 4, 2, 1), Job::new(2, 1, 4, 3, 1)];
        Instance::new(4, vec![2, 1, 3, 1], jobs).unwrap()
    }

    #[test]
    fn two_job_example() {
        let result = solve_oracle(&two_jobs(), false).unwrap();
        assert_eq!(result.objective, 2);
        assert!(validate_schedule(&two_jobs(), &result.schedule).feasible);
        // Hand ledger: harvest 2 at slot 1, J1 at slot 2 leaves 0, harvest 3
        // at slot 3, J2 at slot 4 leaves 0.
        let all = enumerate_optimal_schedules(&two_jobs(), false).unwrap();
        let best = all.iter().map(|s| Ledger::of(&two_jobs(), s).leftover()).max();
        assert_eq!(best, Some(0));
        let top: Vec<_> = all
            .iter()
            .filter(|s| Ledger::of(&two_jobs(), s).leftover() == 0)
            .collect();
        assert_eq!(top, vec![&Schedule::from_pairs([(1, 2), (2, 4)])]);
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(3, vec![1, 2, 3], vec![]).unwrap();
        assert_eq!(solve_oracle(&inst, false).unwrap().objective, 0);
        assert_eq!(enumerate_optimal_schedules(&inst, true).unwrap(), vec![Schedule::new()]);
    }

    #[test]
    fn knapsack_shape_matches_subset_enumeration() {
        let items = [(2i64, 3i64), (3, 4), (1, 2), (2, 2)];
        let capacity = 4;
        let jobs = items
            .iter()
            .enumerate()
            .map(|(i, &(b, v))| Job::new(i as JobId, 2, items.len() + 1, b, v))
            .collect();
        let mut harvest = vec![0; items.len() + 1];
        harvest[0] = capacity;
        let inst = Instance::new(items.len() + 1, harvest, jobs).unwrap();
        let best = (0u32..1 << items.len())
            .filter_map(|m| {
                let (size, value) = (0..items.len())
                    .filter(|k| m & (1 << k) != 0)
                    .fold((0, 0), |(s, v), k| (s + items[k].0, v + items[k].1));
                (size <= capacity).then_some(value)
            })
            .max()
            .unwrap();
        assert_eq!(solve_oracle(&inst, true).unwrap().objective, best);
    }

    #[test]
    fn forced_and_symmetric_schedules() {
        let forced = Instance::new(2, vec![1, 0], vec![Job::new(1, 2, 2, 1, 1)]).unwrap();
        assert_eq!(enumerate_optimal_schedules(&forced, false).unwrap().len(), 1);
        let twin = Instance::new(3, vec![1, 0, 0], vec![Job::new(1, 1, 3, 1, 1)]).unwrap();
        let all = enumerate_optimal_schedules(&twin, false).unwrap();
        assert_eq!(all, vec![Schedule::from_pairs([(1, 2)]), Schedule::from_pairs([(1, 3)])]);
    }

    #[test]
    fn zero_energy_job_may_use_slot_one() {
        let inst = Instance::new(1, vec![0], vec![Job::new(1, 1, 1, 0, 1)]).unwrap();
        assert_eq!(solve_oracle(&inst, false).unwrap().objective, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let jobs = (0..13).map(|i| Job::new(i, 1, 3, 0, 1)).collect();
        let inst = Instance::new(3, vec![0; 3], jobs).unwrap();
        assert_eq!(solve_oracle(&inst, false).unwrap_err().code(), "too-large-for-oracle");
        let long = Instance::new(15, vec![0; 15], vec![]).unwrap();
        assert_eq!(solve_oracle(&long, false).unwrap_err().code(), "too-large-for-oracle");
        let many = Instance::new(12, vec![0; 12], (0..8).map(|i| Job::new(i, 1, 12, 0, 1)).collect()).unwrap();
        assert_eq!(enumerate_optimal_schedules(&many, false).unwrap_err().code(), "too-large-for-oracle");
    }

    fn arb_small() -> impl Strategy<Value = Instance> {
        (1usize..=8).prop_flat_map(|horizon| {
            let job = (1..=horizon, 0..horizon, 0i64..=5, 0i64..=5);
            (
                prop::collection::vec(0i64..=5, horizon),
                prop::collection::vec(job, 0..=5),
            )
                .prop_map(move |(harvest, jobs)| {
                    let jobs = jobs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (r, span, e, w))| Job::new(i as JobId, r, (r + span).min(horizon), e, w))
                        .collect();
                    Instance::new(horizon, harvest, jobs).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn routes_agree(inst in arb_small(), weighted in any::<bool>()) {
            let result = solve_oracle(&inst, weighted).unwrap();
            prop_assert_eq!(result.objective, solve_oracle_job_major(&inst, weighted).unwrap());
            prop_assert!(validate_schedule(&inst, &result.schedule).feasible);
            let all = enumerate_optimal_schedules(&inst, weighted).unwrap();
            prop_assert_eq!(&all[0], &result.schedule);
            for s in &all {
                prop_assert!(validate_schedule(&inst, s).feasible);
                prop_assert_eq!(crate::model::schedule_value(&inst, s, weighted).unwrap(), result.objective);
            }
        }
    }
}
