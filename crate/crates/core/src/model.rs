//! Problem data: jobs, instances, schedules and the energy ledger.
//!
//! Time is slotted and 1-indexed. A job occupies exactly one slot, and energy
//! is harvested only on slots where nothing runs. `E(t)` is the energy
//! available immediately before slot `t`; `E(T + 1)` is the leftover energy.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{EasError, Result};

pub type JobId = u32;
pub type Slot = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: JobId,
    pub release: Slot,
    pub due: Slot,
    pub energy: i64,
    pub weight: i64,
}

impl Job {
    pub fn new(id: JobId, release: Slot, due: Slot, energy: i64, weight: i64) -> Self {
        Job {
            id,
            release,
            due,
            energy,
            weight,
        }
    }

    pub fn allows(&self, slot: Slot) -> bool {
        self.release <= slot && slot <= self.due
    }
}

fn checked_sum(mut values: impl Iterator<Item = i64>, what: &str) -> Result<i64> {
    values
        .try_fold(0i64, |acc, v| acc.checked_add(v))
        .ok_or_else(|| EasError::Overflow(format!("sum of {what} does not fit in 64 bits")))
}

/// A validated problem instance.
///
/// Construction rejects structurally broken data (harvest length, duplicate
/// ids, negative numbers, inverted windows) and any instance whose summed
/// magnitudes would not fit in an `i64`, so ledger arithmetic on a
/// constructed instance can never overflow. A due date past the horizon is
/// accepted here and rejected by [`Instance::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    horizon: Slot,
    harvest: Vec<i64>,
    jobs: Vec<Job>,
    index: HashMap<JobId, usize>,
}

impl Instance {
    pub fn new(horizon: Slot, harvest: Vec<i64>, jobs: Vec<Job>) -> Result<Self> {
        if horizon == 0 {
            return Err(EasError::BadHorizon);
        }
        if harvest.len() != horizon {
            return Err(EasError::HarvestLength {
                found: harvest.len(),
                horizon,
            });
        }
        if let Some((t, h)) = harvest.iter().enumerate().find(|(_, h)| **h < 0) {
            return Err(EasError::NegativeValue(format!(
                "harvest at slot {} is {}",
                t + 1,
                h
            )));
        }
        let mut index = HashMap::with_capacity(jobs.len());
        for (i, job) in jobs.iter().enumerate() {
            if index.insert(job.id, i).is_some() {
                return Err(EasError::DuplicateId(job.id));
            }
            if job.energy < 0 || job.weight < 0 {
                return Err(EasError::NegativeValue(format!(
                    "job {} has energy {} and weight {}",
                    job.id, job.energy, job.weight
                )));
            }
            if job.release == 0 || job.release > job.due {
                return Err(EasError::BadWindow {
                    id: job.id,
                    release: job.release as i64,
                    due: job.due as i64,
                });
            }
        }

        let harvest_total = checked_sum(harvest.iter().copied(), "harvest")?;
        let energy_total = checked_sum(jobs.iter().map(|j| j.energy), "energies")?;
        harvest_total
            .checked_add(energy_total)
            .and_then(|v| v.checked_add(harvest_total))
            .ok_or_else(|| EasError::Overflow("harvest plus energy totals".into()))?;
        checked_sum(jobs.iter().map(|j| j.weight), "weights")?;

        Ok(Instance {
            horizon,
            harvest,
            jobs,
            index,
        })
    }

    /// Rejects jobs due after the horizon. Every solver calls this first.
    pub fn validate(&self) -> Result<()> {
        match self.jobs.iter().find(|j| j.due > self.horizon) {
            Some(job) => Err(EasError::DueAfterHorizon {
                id: job.id,
                due: job.due,
                horizon: self.horizon,
            }),
            None => Ok(()),
        }
    }

    pub fn horizon(&self) -> Slot {
        self.horizon
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn job(&self, id: JobId) -> Option<&Job> {
        self.index.get(&id).map(|&i| &self.jobs[i])
    }

    /// Harvest profile `h[1..=T]` stored 0-based.
    pub fn harvest_profile(&self) -> &[i64] {
        &self.harvest
    }

    /// `h_t` for a 1-based slot.
    pub fn harvest(&self, slot: Slot) -> i64 {
        self.harvest[slot - 1]
    }

    /// `prefix[t] = h_1 + ... + h_t`, with `prefix[0] = 0`.
    pub fn prefix_harvest(&self) -> Vec<i64> {
        let mut prefix = Vec::with_capacity(self.horizon + 1);
        prefix.push(0);
        let mut acc = 0;
        for &h in &self.harvest {
            acc += h;
            prefix.push(acc);
        }
        prefix
    }

    pub fn max_weight(&self) -> i64 {
        self.jobs.iter().map(|j| j.weight).max().unwrap_or(0)
    }

    /// The shared `(release, due)` window if every job has the same one.
    /// An instance without jobs trivially shares any window; `None` is
    /// returned only when two jobs disagree.
    pub fn common_window(&self) -> Option<(Slot, Slot)> {
        let first = match self.jobs.first() {
            Some(job) => (job.release, job.due),
            None => return Some((1, self.horizon)),
        };
        self.jobs
            .iter()
            .all(|j| (j.release, j.due) == first)
            .then_some(first)
    }

    /// Jobs ordered by `(energy, id)`, the order every common-window solver
    /// assigns jobs to slots in.
    pub fn jobs_by_energy(&self) -> Vec<Job> {
        let mut jobs = self.jobs.clone();
        jobs.sort_by_key(|j| (j.energy, j.id));
        jobs
    }
}

/// An assignment of jobs to slots. Jobs not present are unscheduled.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: BTreeMap<JobId, Slot>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (JobId, Slot)>) -> Self {
        Schedule {
            assignments: pairs.into_iter().collect(),
        }
    }

    pub fn assign(&mut self, job: JobId, slot: Slot) -> Option<Slot> {
        self.assignments.insert(job, slot)
    }

    pub fn unassign(&mut self, job: JobId) -> Option<Slot> {
        self.assignments.remove(&job)
    }

    pub fn slot_of(&self, job: JobId) -> Option<Slot> {
        self.assignments.get(&job).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (JobId, Slot)> + '_ {
        self.assignments.iter().map(|(&j, &s)| (j, s))
    }

    /// `(slot, job)` pairs in increasing slot order.
    pub fn by_slot(&self) -> Vec<(Slot, JobId)> {
        let mut pairs: Vec<_> = self.iter().map(|(j, s)| (s, j)).collect();
        pairs.sort_unstable();
        pairs
    }

    pub fn slots(&self) -> Vec<Slot> {
        self.by_slot().into_iter().map(|(s, _)| s).collect()
    }
}

/// `E(1), ..., E(T + 1)`: energy available immediately before each slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ledger(Vec<i64>);

impl Ledger {
    /// Builds the ledger by stepping through the slots. Jobs unknown to the
    /// instance and slots outside `[1, T]` are ignored; they are reported as
    /// violations by [`validate_schedule`] instead.
    pub fn of(instance: &Instance, schedule: &Schedule) -> Self {
        let horizon = instance.horizon();
        let mut spent = vec![0i64; horizon + 1];
        for (id, slot) in schedule.iter() {
            if let Some(job) = instance.job(id) {
                if (1..=horizon).contains(&slot) {
                    spent[slot] += job.energy + instance.harvest(slot);
                }
            }
        }
        let mut values = Vec::with_capacity(horizon + 1);
        let mut energy = 0i64;
        values.push(energy);
        for (t, cost) in (1..=horizon).zip(&spent[1..]) {
            energy += instance.harvest(t) - cost;
            values.push(energy);
        }
        Ledger(values)
    }

    /// `E(t)` for `t` in `[1, T + 1]`.
    pub fn at(&self, slot: Slot) -> i64 {
        self.0[slot - 1]
    }

    pub fn leftover(&self) -> i64 {
        *self.0.last().expect("ledger always holds E(1)")
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Window,
    Energy,
    SlotCollision,
    UnknownJob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub job: JobId,
    pub reason: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub ledger: Ledger,
}

fn check_references(instance: &Instance, schedule: &Schedule) -> Result<()> {
    for (id, slot) in schedule.iter() {
        if instance.job(id).is_none() {
            return Err(EasError::UnknownJob(id));
        }
        if slot == 0 || slot > instance.horizon() {
            return Err(EasError::BadSlot {
                slot,
                max: instance.horizon(),
            });
        }
    }
    Ok(())
}

/// `E_S(t)`, evaluated straight from its definition: harvest of every slot
/// before `t` minus, for each job run before `t`, its energy plus the
/// harvest it forfeits. May be negative.
pub fn available_energy(instance: &Instance, schedule: &Schedule, slot: Slot) -> Result<i64> {
    check_references(instance, schedule)?;
    let max = instance.horizon() + 1;
    if slot == 0 || slot > max {
        return Err(EasError::BadSlot { slot, max });
    }
    let harvested: i64 = instance.harvest_profile()[..slot - 1].iter().sum();
    let consumed: i64 = schedule
        .iter()
        .filter(|&(_, s)| s < slot)
        .map(|(id, s)| instance.job(id).map_or(0, |j| j.energy) + instance.harvest(s))
        .sum();
    Ok(harvested - consumed)
}

/// Checks injectivity, windows and energy. Never fails; every problem is
/// listed in the report.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> FeasibilityReport {
    let ledger = Ledger::of(instance, schedule);
    let mut per_slot: BTreeMap<Slot, usize> = BTreeMap::new();
    for (_, slot) in schedule.iter() {
        *per_slot.entry(slot).or_default() += 1;
    }

    let mut violations = Vec::new();
    for (id, slot) in schedule.iter() {
        let Some(job) = instance.job(id) else {
            violations.push(Violation {
                job: id,
                reason: ViolationKind::UnknownJob,
            });
            continue;
        };
        if per_slot[&slot] > 1 {
            violations.push(Violation {
                job: id,
                reason: ViolationKind::SlotCollision,
            });
        }
        let in_horizon = (1..=instance.horizon()).contains(&slot);
        if !in_horizon || !job.allows(slot) {
            violations.push(Violation {
                job: id,
                reason: ViolationKind::Window,
            });
        }
        if in_horizon && ledger.at(slot) < job.energy {
            violations.push(Violation {
                job: id,
                reason: ViolationKind::Energy,
            });
        }
    }

    FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
        ledger,
    }
}

/// Total weight (`weighted`) or number of scheduled jobs.
pub fn schedule_value(instance: &Instance, schedule: &Schedule, weighted: bool) -> Result<i64> {
    let mut value = 0i64;
    for (id, _) in schedule.iter() {
        let job = instance.job(id).ok_or(EasError::UnknownJob(id))?;
        value += if weighted { job.weight } else { 1 };
    }
    Ok(value)
}
