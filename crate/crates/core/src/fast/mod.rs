//! Incremental solver for the common-window unweighted problem.
//!
//! With jobs sorted by `(energy, id)`, let `S_i` be the feasible `i`-job
//! schedule that maximizes leftover energy. `S_i` is unique once harvests
//! are ordered by `(h_t, t)`, and its slot set is that of `S_{i-1}` plus one
//! slot: the free slot of smallest `(h_t, t)` whose insertion keeps the
//! sorted assignment feasible. The solver grows the slot set until no slot
//! can be inserted.
//!
//! A slot found infeasible stays infeasible for every later slot set, so the
//! solver scans free slots once in `(h_t, t)` order. For a free slot `s` in
//! a set with `c(s)` occupied slots before it, insertion is feasible iff
//!
//! * `F(s) >= P(c(s) + 1)`, where `F` is harvest on free slots before `s`
//!   and `P` sums the sorted energies, and
//! * `D(u) = F(u) - P(c(u) + 2) >= h_s` for every occupied `u > s`.
//!
//! The first test uses two Fenwick trees, the second a kinetic segment tree.
//! Like the table solver, slot 1 is never used.

mod kinetic;

use crate::error::{EasError, Result};
use crate::model::{Instance, Job, Schedule, Slot};
use crate::solution::{Algorithm, SolveResult};

use kinetic::SlackTree;

/// Strictly increasing slot indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SlotSet {
    slots: Vec<Slot>,
}

impl SlotSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts and deduplicates.
    pub fn from_slots(slots: impl IntoIterator<Item = Slot>) -> Self {
        let mut slots: Vec<Slot> = slots.into_iter().collect();
        slots.sort_unstable();
        slots.dedup();
        SlotSet { slots }
    }

    pub fn as_slice(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, slot: Slot) -> bool {
        self.slots.binary_search(&slot).is_ok()
    }

    /// Returns false if `slot` was already present.
    pub fn insert(&mut self, slot: Slot) -> bool {
        match self.slots.binary_search(&slot) {
            Ok(_) => false,
            Err(at) => {
                self.slots.insert(at, slot);
                true
            }
        }
    }

    /// Runs the `j`-th job of `jobs` (already sorted) in the `j`-th slot.
    pub fn assign(&self, jobs: &[Job]) -> Schedule {
        Schedule::from_pairs(jobs.iter().zip(&self.slots).map(|(j, &s)| (j.id, s)))
    }
}

/// A solve together with the order in which slots were added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastSolution {
    pub result: SolveResult,
    pub slots: SlotSet,
    /// `history[i - 1]` is the slot added for the `i`-th job.
    pub history: Vec<Slot>,
}

impl FastSolution {
    /// The slot set of `S_i`.
    pub fn prefix(&self, i: usize) -> SlotSet {
        SlotSet::from_slots(self.history[..i].iter().copied())
    }
}

/// A gap's cheapest feasible insertion point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    /// `j` for the gap `(t_{j-1}, t_j)`, with `t_0 = 0` and `t_{i} = T + 1`.
    pub gap: usize,
    pub slot: Slot,
    pub harvest: i64,
}

struct Fenwick(Vec<i64>);

impl Fenwick {
    fn new(len: usize) -> Self {
        Fenwick(vec![0; len + 1])
    }

    fn add(&mut self, mut at: usize, value: i64) {
        while at < self.0.len() {
            self.0[at] += value;
            at += at & at.wrapping_neg();
        }
    }

    /// Sum over `[1, upto]`.
    fn sum(&self, mut upto: usize) -> i64 {
        let mut total = 0;
        while upto > 0 {
            total += self.0[upto];
            upto &= upto - 1;
        }
        total
    }
}

/// Occupied slots and the ledger quantities derived from them.
pub(crate) struct Occupancy {
    harvest: Vec<i64>,
    harvest_prefix: Vec<i64>,
    taken_harvest: Fenwick,
    taken_count: Fenwick,
    /// Sorted energy prefix sums, continued past `n` with the largest energy
    /// so the kinetic tree can look ahead without bounds checks.
    energy_prefix: Vec<i128>,
    horizon: Slot,
}

impl Occupancy {
    fn new(instance: &Instance, jobs: &[Job]) -> Self {
        let horizon = instance.horizon();
        let last = jobs.last().map_or(0, |j| j.energy) as i128;
        let len = jobs.len().max(2 * horizon + 2);
        let mut energy_prefix = Vec::with_capacity(len + 1);
        energy_prefix.push(0i128);
        for k in 0..len {
            let e = jobs.get(k).map_or(last, |j| j.energy as i128);
            energy_prefix.push(energy_prefix[k] + e);
        }
        Occupancy {
            harvest: instance.harvest_profile().to_vec(),
            harvest_prefix: instance.prefix_harvest(),
            taken_harvest: Fenwick::new(horizon),
            taken_count: Fenwick::new(horizon),
            energy_prefix,
            horizon,
        }
    }

    fn h(&self, slot: Slot) -> i64 {
        self.harvest[slot - 1]
    }

    fn p(&self, count: usize) -> i128 {
        self.energy_prefix[count]
    }

    fn count_before(&self, slot: Slot) -> usize {
        self.taken_count.sum(slot - 1) as usize
    }

    fn free_harvest_before(&self, slot: Slot) -> i128 {
        (self.harvest_prefix[slot - 1] - self.taken_harvest.sum(slot - 1)) as i128
    }

    fn occupy(&mut self, slot: Slot) {
        self.taken_harvest.add(slot, self.h(slot));
        self.taken_count.add(slot, 1);
    }

    /// `D(u)`: how much more harvest the job at occupied `u` could lose if one
    /// more job were placed before it.
    fn slack(&self, slot: Slot) -> i128 {
        self.free_harvest_before(slot) - self.p(self.count_before(slot) + 2)
    }

    /// Smallest number of future insertions before both `a < b` after which
    /// `D(b) <= D(a)`, given current values `va < vb`.
    fn crossing(&self, a: Slot, va: i128, b: Slot, vb: i128) -> Option<usize> {
        let ca = self.count_before(a) + 2;
        let cb = self.count_before(b) + 2;
        let flipped = |d: usize| {
            let grow_a = self.p(ca + d) - self.p(ca);
            let grow_b = self.p(cb + d) - self.p(cb);
            va - vb + grow_b - grow_a >= 0
        };
        let max = self.horizon;
        if !flipped(max) {
            return None;
        }
        let (mut lo, mut hi) = (1, max);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if flipped(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }
}

struct Setup {
    jobs: Vec<Job>,
    /// Slots a job may run in: the common window without slot 1.
    first: Slot,
    last: Slot,
}

fn setup(instance: &Instance) -> Result<Setup> {
    instance.validate()?;
    let (release, due) = instance.common_window().ok_or(EasError::NotCommonWindow)?;
    Ok(Setup {
        jobs: instance.jobs_by_energy(),
        first: release.max(2),
        last: due,
    })
}

fn finish(instance: &Instance, jobs: &[Job], history: Vec<Slot>) -> FastSolution {
    let slots = SlotSet::from_slots(history.iter().copied());
    let schedule = slots.assign(jobs);
    let result = SolveResult::new(Algorithm::Fast, instance, schedule, history.len() as i64);
    FastSolution {
        result,
        slots,
        history,
    }
}

/// Maximum-cardinality schedule of the leftover-maximizing slot set.
pub fn solve_slots(instance: &Instance) -> Result<SolveResult> {
    solve_slots_traced(instance).map(|s| s.result)
}

/// [`solve_slots`] that also reports the insertion order.
pub fn solve_slots_traced(instance: &Instance) -> Result<FastSolution> {
    let Setup { jobs, first, last } = setup(instance)?;
    let mut history = Vec::new();
    if jobs.is_empty() || first > last {
        return Ok(finish(instance, &jobs, history));
    }

    let mut occ = Occupancy::new(instance, &jobs);
    let mut tree = SlackTree::new(instance.horizon());
    let mut order: Vec<Slot> = (first..=last).collect();
    order.sort_by_key(|&s| (instance.harvest(s), s));

    let mut pending = order.into_iter();
    while history.len() < jobs.len() {
        let Some(slot) = pending.by_ref().find(|&s| fits(&occ, &mut tree, s)) else {
            break;
        };
        occ.occupy(slot);
        tree.insert(&occ, slot);
        history.push(slot);
    }
    Ok(finish(instance, &jobs, history))
}

fn fits(occ: &Occupancy, tree: &mut SlackTree, slot: Slot) -> bool {
    let c = occ.count_before(slot);
    occ.free_harvest_before(slot) >= occ.p(c + 1)
        && tree
            .min_from(occ, slot + 1)
            .is_none_or(|d| d >= occ.h(slot) as i128)
}

/// For the `i`-th job and the slot set of `S_{i-1}`, the cheapest feasible
/// insertion point of every gap that has one, by an `O(T)` scan.
pub fn insertion_candidates(current: &SlotSet, instance: &Instance, i: usize) -> Result<Vec<Candidate>> {
    let Setup { jobs, first, last } = setup(instance)?;
    let horizon = instance.horizon();
    let occupied = current.as_slice();
    if i == 0 || i > jobs.len() || occupied.len() + 1 != i {
        return Err(EasError::BadInput(format!(
            "job {i} cannot be inserted into a set of {} slots",
            occupied.len()
        )));
    }
    if let Some(&bad) = occupied.iter().find(|&&s| s < first || s > last) {
        return Err(EasError::BadSlot { slot: bad, max: last });
    }
    let energy = |k: usize| jobs[k - 1].energy;

    // Energy before each occupied slot and its slack for one more job before it.
    let mut slack = Vec::with_capacity(occupied.len());
    let mut used = 0i64;
    let mut spent = 0i64;
    let prefix = instance.prefix_harvest();
    for (k, &t) in occupied.iter().enumerate() {
        let before = prefix[t - 1] - used - spent;
        slack.push(before - energy(k + 1) - energy(k + 2));
        used += instance.harvest(t);
        spent += energy(k + 1);
    }
    let mut suffix_min = vec![i64::MAX; occupied.len() + 1];
    for k in (0..occupied.len()).rev() {
        suffix_min[k] = suffix_min[k + 1].min(slack[k]);
    }

    let mut best: Vec<Option<Candidate>> = vec![None; occupied.len() + 1];
    let mut gap = 0;
    let (mut used, mut spent) = (0i64, 0i64);
    for s in 1..=horizon {
        if gap < occupied.len() && occupied[gap] == s {
            used += instance.harvest(s);
            spent += energy(gap + 1);
            gap += 1;
            continue;
        }
        if s < first || s > last {
            continue;
        }
        let h = instance.harvest(s);
        let energy_ok = prefix[s - 1] - used - spent >= energy(gap + 1);
        if energy_ok && h <= suffix_min[gap] {
            let entry = &mut best[gap];
            if entry.is_none_or(|c| (h, s) < (c.harvest, c.slot)) {
                *entry = Some(Candidate {
                    gap: gap + 1,
                    slot: s,
                    harvest: h,
                });
            }
        }
    }
    Ok(best.into_iter().flatten().collect())
}

/// Same solver driven by [`insertion_candidates`]; `O(nT)`.
pub fn solve_slots_rescan(instance: &Instance) -> Result<FastSolution> {
    let Setup { jobs, .. } = setup(instance)?;
    let mut current = SlotSet::new();
    let mut history = Vec::new();
    for i in 1..=jobs.len() {
        let candidates = insertion_candidates(&current, instance, i)?;
        let Some(pick) = candidates.iter().min_by_key(|c| (c.harvest, c.slot)) else {
            break;
        };
        current.insert(pick.slot);
        history.push(pick.slot);
    }
    Ok(finish(instance, &jobs, history))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::dp;
    use crate::model::{validate_schedule, JobId};

    fn common(horizon: Slot, harvest: &[i64], energies: &[i64]) -> Instance {
        let jobs = energies
            .iter()
            .enumerate()
            .map(|(i, &e)| Job::new(i as JobId + 1, 1, horizon, e, 1))
            .collect();
        Instance::new(horizon, harvest.to_vec(), jobs).unwrap()
    }

    /// Candidates by trying every free slot and validating the whole schedule.
    fn naive_candidates(current: &SlotSet, instance: &Instance, i: usize) -> Vec<Candidate> {
        let jobs = instance.jobs_by_energy();
        let (r, d) = instance.common_window().unwrap();
        let mut best: Vec<Option<Candidate>> = vec![None; current.len() + 1];
        for s in r.max(2)..=d {
            if current.contains(s) {
                continue;
            }
            let mut trial = current.clone();
            trial.insert(s);
            if validate_schedule(instance, &trial.assign(&jobs[..i])).feasible {
                let gap = current.as_slice().partition_point(|&t| t < s);
                let h = instance.harvest(s);
                if best[gap].is_none_or(|c| (h, s) < (c.harvest, c.slot)) {
                    best[gap] = Some(Candidate {
                        gap: gap + 1,
                        slot: s,
                        harvest: h,
                    });
                }
            }
        }
        best.into_iter().flatten().collect()
    }

    #[test]
    fn two_job_example() {
        let inst = common(4, &[2, 1, 3, 1], &[2, 3]);
        let sol = solve_slots_traced(&inst).unwrap();
        assert_eq!(sol.result.objective, 2);
        assert_eq!(sol.slots.as_slice(), &[2, 4]);
        assert_eq!(sol.prefix(1).as_slice(), &[2]);
        assert_eq!(sol.result.schedule, Schedule::from_pairs([(1, 2), (2, 4)]));
        assert_eq!(sol.result.leftover, 0);

        let after = insertion_candidates(&SlotSet::from_slots([2]), &inst, 2).unwrap();
        assert_eq!(after.iter().map(|c| c.slot).collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn cheapest_feasible_slot_first() {
        let inst = common(3, &[1, 5, 9], &[1]);
        assert_eq!(solve_slots_traced(&inst).unwrap().slots.as_slice(), &[2]);
    }

    #[test]
    fn nothing_fits() {
        let inst = common(3, &[1, 0, 0], &[5, 6]);
        let sol = solve_slots_traced(&inst).unwrap();
        assert_eq!(sol.result.objective, 0);
        assert!(sol.slots.is_empty());
        assert!(insertion_candidates(&SlotSet::new(), &inst, 1).unwrap().is_empty());
    }

    #[test]
    fn single_candidate_and_omitted_gaps() {
        let inst = common(3, &[2, 0, 0], &[2]);
        let c = insertion_candidates(&SlotSet::new(), &inst, 1).unwrap();
        assert_eq!(c, vec![Candidate { gap: 1, slot: 2, harvest: 0 }]);

        // After slot 2, the gap before it has no free slot left and is omitted.
        let inst = common(4, &[4, 0, 0, 0], &[1, 1]);
        let c = insertion_candidates(&SlotSet::from_slots([2]), &inst, 2).unwrap();
        assert_eq!(c, vec![Candidate { gap: 2, slot: 3, harvest: 0 }]);
    }

    #[test]
    fn rejects_mixed_windows_and_bad_sets() {
        let jobs = vec![Job::new(1, 1, 3, 1, 1), Job::new(2, 2, 3, 1, 1)];
        let inst = Instance::new(3, vec![1, 1, 1], jobs).unwrap();
        assert_eq!(solve_slots(&inst).unwrap_err().code(), "not-common-window");
        let inst = common(3, &[1, 1, 1], &[1]);
        assert!(insertion_candidates(&SlotSet::from_slots([2]), &inst, 1).is_err());
    }

    #[test]
    fn narrow_window() {
        let jobs = vec![Job::new(1, 3, 4, 1, 1), Job::new(2, 3, 4, 1, 1)];
        let inst = Instance::new(6, vec![1, 0, 0, 5, 0, 9], jobs).unwrap();
        let sol = solve_slots_traced(&inst).unwrap();
        assert_eq!(sol.result.objective, 1);
        assert_eq!(sol.slots.as_slice(), &[3]);
    }

    fn arb_common() -> impl Strategy<Value = Instance> {
        (1usize..=10).prop_flat_map(|horizon| {
            (
                prop::collection::vec(0i64..=6, horizon),
                prop::collection::vec(0i64..=6, 0..=8),
                1..=horizon,
                0..horizon,
            )
                .prop_map(move |(harvest, energies, r, span)| {
                    let d = (r + span).min(horizon);
                    let jobs = energies
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| Job::new(i as JobId, r, d, e, 1))
                        .collect();
                    Instance::new(horizon, harvest, jobs).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn agrees_with_table(inst in arb_common()) {
            let fast = solve_slots_traced(&inst).unwrap();
            let rescan = solve_slots_rescan(&inst).unwrap();
            prop_assert_eq!(&fast, &rescan);
            prop_assert!(validate_schedule(&inst, &fast.result.schedule).feasible);
            let table = dp::solve_count(&inst).unwrap();
            prop_assert_eq!(fast.result.objective, table.objective);
            prop_assert_eq!(fast.result.leftover, table.leftover);
        }

        #[test]
        fn candidates_match_full_validation(inst in arb_common()) {
            let sol = solve_slots_traced(&inst).unwrap();
            let limit = (sol.history.len() + 1).min(inst.len());
            for i in 1..=limit {
                let current = sol.prefix(i - 1);
                prop_assert_eq!(
                    insertion_candidates(&current, &inst, i).unwrap(),
                    naive_candidates(&current, &inst, i)
                );
            }
        }
    }
}
