//! Exchange arguments behind the common-window solvers, as executable
//! transformations. Both keep a feasible schedule feasible.

use crate::error::{EasError, Result};
use crate::model::{Instance, JobId, Schedule};

fn require_common_window(instance: &Instance) -> Result<()> {
    instance.common_window().map(|_| ()).ok_or(EasError::NotCommonWindow)
}

/// Replaces the scheduled jobs by the same number of lowest-energy jobs:
/// the `j`-th scheduled job in `(energy, id)` order gives its slot to the
/// `j`-th job of the instance in that order.
pub fn replace_with_prefix(instance: &Instance, schedule: &Schedule) -> Result<Schedule> {
    require_common_window(instance)?;
    let order = instance.jobs_by_energy();
    let mut scheduled = Vec::with_capacity(schedule.len());
    for (id, slot) in schedule.iter() {
        let job = instance.job(id).ok_or(EasError::UnknownJob(id))?;
        scheduled.push(((job.energy, job.id), slot));
    }
    scheduled.sort_unstable();
    Ok(Schedule::from_pairs(
        order.iter().zip(&scheduled).map(|(job, &(_, slot))| (job.id, slot)),
    ))
}

/// Exchanges the slots of two scheduled jobs.
pub fn swap_jobs(schedule: &Schedule, a: JobId, b: JobId) -> Result<Schedule> {
    let sa = schedule.slot_of(a).ok_or(EasError::UnknownJob(a))?;
    let sb = schedule.slot_of(b).ok_or(EasError::UnknownJob(b))?;
    let mut swapped = schedule.clone();
    swapped.assign(a, sb);
    swapped.assign(b, sa);
    Ok(swapped)
}

/// Pairs `(a, b)` where `a` runs before `b` but needs strictly more energy.
pub fn energy_inversions(instance: &Instance, schedule: &Schedule) -> Result<Vec<(JobId, JobId)>> {
    let mut timeline = Vec::with_capacity(schedule.len());
    for (slot, id) in schedule.by_slot() {
        let job = instance.job(id).ok_or(EasError::UnknownJob(id))?;
        timeline.push((slot, job.energy, id));
    }
    let mut pairs = Vec::new();
    for (i, &(_, ea, a)) in timeline.iter().enumerate() {
        for &(_, eb, b) in &timeline[i + 1..] {
            if ea > eb {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

/// Reorders the scheduled jobs over the same slots in non-decreasing energy.
pub fn sort_by_energy(instance: &Instance, schedule: &Schedule) -> Result<Schedule> {
    require_common_window(instance)?;
    let mut jobs = Vec::with_capacity(schedule.len());
    for (id, _) in schedule.iter() {
        let job = instance.job(id).ok_or(EasError::UnknownJob(id))?;
        jobs.push((job.energy, job.id));
    }
    jobs.sort_unstable();
    let slots = schedule.slots();
    Ok(Schedule::from_pairs(jobs.iter().zip(slots).map(|(&(_, id), slot)| (id, slot))))
}
