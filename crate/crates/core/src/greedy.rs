//! Greedy 1/2-approximation for arbitrary windows.
//!
//! Each iteration adds the (job, slot) pair with the smallest
//! `Q = e_j + h_t` among pairs that keep the whole schedule feasible. Ties go
//! to the earlier slot, then the smaller job id. The loop stops when no pair
//! fits.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{validate_schedule, Instance, JobId, Schedule, Slot};
use crate::solution::{Algorithm, SolveResult};

/// The pair a greedy iteration would add, found in one pass over the slots.
///
/// The pass keeps the ledger `E` as if a tentative pair were in place. At a
/// free slot only the cheapest available job matters, and it replaces the
/// tentative pair when it fits and has a strictly smaller `Q`. Reaching a
/// scheduled job with negative energy means the tentative pair starves it,
/// and so would every pair passed over in its favour, so the pass drops it.
pub fn greedy_step(instance: &Instance, partial: &Schedule, unscheduled: &BTreeSet<JobId>) -> Option<(JobId, Slot)> {
    let horizon = instance.horizon();
    let mut occupant: Vec<Option<i64>> = vec![None; horizon + 1];
    for (id, slot) in partial.iter() {
        if let (Some(job), true) = (instance.job(id), (1..=horizon).contains(&slot)) {
            occupant[slot] = Some(job.energy);
        }
    }
    let mut cheapest: Vec<Option<(i64, JobId)>> = vec![None; horizon + 1];
    for job in unscheduled.iter().filter_map(|&id| instance.job(id)) {
        let key = (job.energy, job.id);
        for best in &mut cheapest[job.release..=job.due.min(horizon)] {
            if best.is_none_or(|b| key < b) {
                *best = Some(key);
            }
        }
    }

    let mut energy = 0i64;
    // (Q, job, slot) of the tentative pair.
    let mut tentative: Option<(i64, JobId, Slot)> = None;
    for t in 1..=horizon {
        if let Some(e) = occupant[t] {
            energy -= e;
            if energy < 0 {
                if let Some((q, _, _)) = tentative.take() {
                    energy += q;
                }
            }
            continue;
        }
        let h = instance.harvest(t);
        let Some((e, id)) = cheapest[t] else {
            energy += h;
            continue;
        };
        let refund = tentative.map_or(0, |(q, _, _)| q);
        let q = e + h;
        if energy + refund >= e && tentative.is_none_or(|(best, _, _)| q < best) {
            energy += refund - e;
            tentative = Some((q, id, t));
        } else {
            energy += h;
        }
    }
    tentative.map(|(_, id, t)| (id, t))
}

/// [`greedy_step`] by brute force: try every unscheduled job in every free
/// slot of its window and keep the feasible pair with the smallest
/// `(Q, slot, job id)`.
pub fn greedy_step_reference(
    instance: &Instance,
    partial: &Schedule,
    unscheduled: &BTreeSet<JobId>,
) -> Option<(JobId, Slot)> {
    let taken: BTreeSet<Slot> = partial.iter().map(|(_, s)| s).collect();
    let mut best: Option<(i64, Slot, JobId)> = None;
    for job in unscheduled.iter().filter_map(|&id| instance.job(id)) {
        for t in job.release..=job.due.min(instance.horizon()) {
            if taken.contains(&t) {
                continue;
            }
            let key = (job.energy + instance.harvest(t), t, job.id);
            if best.is_some_and(|b| b <= key) {
                continue;
            }
            let mut trial = partial.clone();
            trial.assign(job.id, t);
            if validate_schedule(instance, &trial).feasible {
                best = Some(key);
            }
        }
    }
    best.map(|(_, t, id)| (id, t))
}

pub fn solve_greedy(instance: &Instance) -> Result<SolveResult> {
    instance.validate()?;
    let mut schedule = Schedule::new();
    let mut unscheduled: BTreeSet<JobId> = instance.jobs().iter().map(|j| j.id).collect();
    while let Some((id, slot)) = greedy_step(instance, &schedule, &unscheduled) {
        schedule.assign(id, slot);
        unscheduled.remove(&id);
    }
    let count = schedule.len() as i64;
    Ok(SolveResult::new(Algorithm::Greedy, instance, schedule, count))
}
