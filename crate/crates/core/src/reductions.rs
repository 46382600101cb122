//! Hard instance families built from k-SUM and knapsack, and decoders that
//! turn a threshold-meeting schedule back into a solution of the source
//! problem.
//!
//! k-SUM asks for `k` of the positive integers `alpha_1 >= ... >= alpha_n`
//! (sum `S`) that add up to `beta`. Two encodings are provided: one with
//! staggered release times and a common due date, one with a common release
//! time and staggered due dates. Both use jobs of energy
//! `S^2 n^2 + alpha_i S n`, so that the slots before a harvest spike can only
//! afford `k` jobs whose `alpha` sum is exactly `beta`.
//!
//! Knapsack maps to the weighted problem directly: the capacity is harvested
//! in slot 1 and every item becomes a job that can run afterwards.

use serde::{Deserialize, Serialize};

use crate::error::{EasError, Result};
use crate::model::{schedule_value, validate_schedule, Instance, Job, JobId, Schedule, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSumInput {
    pub values: Vec<i64>,
    pub beta: i64,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub size: i64,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInput {
    pub items: Vec<Item>,
    pub capacity: i64,
    pub threshold: i64,
}

/// What a generated instance encodes; enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reduction", rename_all = "kebab-case")]
pub enum ReductionMeta {
    /// `values` sorted non-increasing; job `i` carries `values[i - 1]`.
    KsumArbRelease {
        values: Vec<i64>,
        k: usize,
        beta: i64,
        threshold: i64,
    },
    /// As above, plus job `n + 1` that must run in the last slot.
    KsumArbDue {
        values: Vec<i64>,
        k: usize,
        beta: i64,
        threshold: i64,
    },
    /// Job `i` is `items[i - 1]`.
    Knapsack {
        items: Vec<Item>,
        capacity: i64,
        threshold: i64,
    },
}

impl ReductionMeta {
    /// Schedules meeting this objective (job count, or weight for knapsack)
    /// correspond to yes-certificates.
    pub fn threshold(&self) -> i64 {
        match self {
            ReductionMeta::KsumArbRelease { threshold, .. }
            | ReductionMeta::KsumArbDue { threshold, .. }
            | ReductionMeta::Knapsack { threshold, .. } => *threshold,
        }
    }

    pub fn is_weighted(&self) -> bool {
        matches!(self, ReductionMeta::Knapsack { .. })
    }

    /// Regenerates the instance this metadata describes.
    pub fn instance(&self) -> Result<Instance> {
        Ok(match self {
            ReductionMeta::KsumArbRelease { values, k, beta, .. } => {
                ksum_to_eas_arbitrary_release(&KSumInput { values: values.clone(), beta: *beta, k: *k })?.instance
            }
            ReductionMeta::KsumArbDue { values, k, beta, .. } => {
                ksum_to_eas_arbitrary_due(&KSumInput { values: values.clone(), beta: *beta, k: *k })?.instance
            }
            ReductionMeta::Knapsack { items, capacity, threshold } => {
                knapsack_to_weas(&KnapsackInput {
                    items: items.clone(),
                    capacity: *capacity,
                    threshold: *threshold,
                })?
                .instance
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub instance: Instance,
    pub threshold: i64,
    pub meta: ReductionMeta,
}

/// A solution of the source problem read off a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum ReductionCertificate {
    /// `k` values (largest first) summing to `beta`.
    Ksum { values: Vec<i64>, sum: i64 },
    /// Chosen item positions (0-based) with their total size and value.
    Knapsack { items: Vec<usize>, size: i64, value: i64 },
}

fn overflow(what: &str) -> EasError {
    EasError::Overflow(format!("{what} does not fit in 64 bits"))
}

/// Sorted values and the constants `S`, `S n`, `S^2 n^2`.
struct KSumScale {
    values: Vec<i64>,
    n: i64,
    sum: i64,
    unit: i64,
    big: i64,
}

fn ksum_scale(input: &KSumInput) -> Result<KSumScale> {
    let mut values = input.values.clone();
    let n = values.len();
    if n <= 2 {
        return Err(EasError::BadInput(format!("k-SUM needs more than 2 values, got {n}")));
    }
    if let Some(v) = values.iter().find(|&&v| v <= 0) {
        return Err(EasError::BadInput(format!("k-SUM values must be positive, got {v}")));
    }
    values.sort_unstable_by(|a, b| b.cmp(a));
    let sum = values
        .iter()
        .try_fold(0i64, |acc, &v| acc.checked_add(v))
        .ok_or_else(|| overflow("sum of values"))?;
    if sum <= 2 {
        return Err(EasError::BadInput(format!("sum of values must exceed 2, got {sum}")));
    }
    if input.beta <= 0 || input.beta >= sum {
        return Err(EasError::BadInput(format!(
            "target {} must lie strictly between 0 and {sum}",
            input.beta
        )));
    }
    if input.k >= n {
        return Err(EasError::BadInput(format!("k = {} must be below n = {n}", input.k)));
    }
    let n = n as i64;
    let unit = sum.checked_mul(n).ok_or_else(|| overflow("S n"))?;
    let big = unit.checked_mul(unit).ok_or_else(|| overflow("S^2 n^2"))?;
    Ok(KSumScale {
        values,
        n,
        sum,
        unit,
        big,
    })
}

/// `S^2 n^2 + alpha S n` for each sorted value.
fn ksum_energies(scale: &KSumScale) -> Result<Vec<i64>> {
    scale
        .values
        .iter()
        .map(|&a| {
            a.checked_mul(scale.unit)
                .and_then(|x| x.checked_add(scale.big))
                .ok_or_else(|| overflow("job energy"))
        })
        .collect()
}

/// `count * S^2 n^2 + share * S n`.
fn block(scale: &KSumScale, count: i64, share: i64) -> Result<i64> {
    count
        .checked_mul(scale.big)
        .and_then(|x| share.checked_mul(scale.unit).and_then(|y| x.checked_add(y)))
        .ok_or_else(|| overflow("harvest spike"))
}

/// Staggered releases `r_i = i + 1`, common due date `T = 2n - k + 2`;
/// all `n` jobs fit iff the k-SUM instance is a yes-instance.
pub fn ksum_to_eas_arbitrary_release(input: &KSumInput) -> Result<Reduction> {
    let scale = ksum_scale(input)?;
    let (n, k, s, beta) = (scale.n, input.k as i64, scale.sum, input.beta);
    let horizon = (2 * n - k + 2) as Slot;
    let energies = ksum_energies(&scale)?;

    let mut harvest = vec![0i64; horizon];
    harvest[0] = block(&scale, k, beta)?;
    for t in 2..=(n as usize + 1) {
        harvest[t - 1] = s - scale.values[t - 2];
    }
    harvest[n as usize + 1] = block(&scale, n - k, s - beta)?
        .checked_sub(s * (n - k - 1) + beta)
        .ok_or_else(|| overflow("harvest spike"))?;

    let jobs = energies
        .iter()
        .enumerate()
        .map(|(i, &e)| Job::new(i as JobId + 1, i + 2, horizon, e, 1))
        .collect();
    let instance = Instance::new(horizon, harvest, jobs)?;
    Ok(Reduction {
        instance,
        threshold: n,
        meta: ReductionMeta::KsumArbRelease {
            values: scale.values,
            k: input.k,
            beta,
            threshold: n,
        },
    })
}

/// Common release 2, staggered due dates `d_i = k + 2 + i`, and a final job
/// of energy `S^3 n^3` due at `T = n + k + 4`; all `n + 1` jobs fit iff the
/// k-SUM instance is a yes-instance.
pub fn ksum_to_eas_arbitrary_due(input: &KSumInput) -> Result<Reduction> {
    let scale = ksum_scale(input)?;
    let (n, k, s, beta) = (scale.n, input.k as i64, scale.sum, input.beta);
    let (nu, ku) = (n as usize, input.k);
    let horizon = nu + ku + 4;
    let energies = ksum_energies(&scale)?;
    let cube = scale.big.checked_mul(scale.unit).ok_or_else(|| overflow("S^3 n^3"))?;

    let mut harvest = vec![0i64; horizon];
    harvest[0] = block(&scale, k, beta)?;
    harvest[ku + 1] = block(&scale, n - k, s - beta)?;
    for t in (ku + 3)..=(nu + ku + 2) {
        harvest[t - 1] = s + scale.values[t - ku - 3];
    }
    harvest[nu + ku + 2] = cube - s * k - beta;

    let mut jobs: Vec<Job> = energies
        .iter()
        .enumerate()
        .map(|(i, &e)| Job::new(i as JobId + 1, 2, ku + 3 + i, e, 1))
        .collect();
    jobs.push(Job::new(nu as JobId + 1, 2, horizon, cube, 1));
    let instance = Instance::new(horizon, harvest, jobs)?;
    Ok(Reduction {
        instance,
        threshold: n + 1,
        meta: ReductionMeta::KsumArbDue {
            values: scale.values,
            k: input.k,
            beta,
            threshold: n + 1,
        },
    })
}

/// `T = n + 1`, capacity harvested in slot 1, item `i` as job `i` with
/// `r = 2`, `d = T`, `e = b_i`, `w = v_i`; weight `V` is reachable iff the
/// knapsack instance is a yes-instance.
pub fn knapsack_to_weas(input: &KnapsackInput) -> Result<Reduction> {
    let negative = input.capacity < 0
        || input.threshold < 0
        || input.items.iter().any(|it| it.size < 0 || it.value < 0);
    if negative {
        return Err(EasError::NegativeValue("knapsack sizes, values, capacity and threshold must be non-negative".into()));
    }
    let horizon = input.items.len() + 1;
    let mut harvest = vec![0i64; horizon];
    harvest[0] = input.capacity;
    let jobs = input
        .items
        .iter()
        .enumerate()
        .map(|(i, it)| Job::new(i as JobId + 1, 2, horizon, it.size, it.value))
        .collect();
    let instance = Instance::new(horizon, harvest, jobs)?;
    Ok(Reduction {
        instance,
        threshold: input.threshold,
        meta: ReductionMeta::Knapsack {
            items: input.items.clone(),
            capacity: input.capacity,
            threshold: input.threshold,
        },
    })
}

/// Reads the source-problem solution off a feasible schedule that meets the
/// threshold, and checks it against the source problem.
pub fn decode_certificate(meta: &ReductionMeta, schedule: &Schedule) -> Result<ReductionCertificate> {
    let instance = meta.instance()?;
    let no = |why: String| EasError::NoCertificate(why);
    let report = validate_schedule(&instance, schedule);
    if !report.feasible {
        return Err(no(format!("schedule is infeasible: {:?}", report.violations)));
    }
    let achieved = schedule_value(&instance, schedule, meta.is_weighted())?;
    if achieved < meta.threshold() {
        return Err(no(format!("schedule reaches {achieved}, below the threshold {}", meta.threshold())));
    }

    match meta {
        ReductionMeta::KsumArbRelease { values, k, beta, .. } | ReductionMeta::KsumArbDue { values, k, beta, .. } => {
            let n = values.len();
            let window = match meta {
                ReductionMeta::KsumArbRelease { .. } => 2..=n + 1,
                _ => 2..=k + 1,
            };
            let mut chosen: Vec<i64> = schedule
                .iter()
                .filter(|&(id, slot)| (1..=n as JobId).contains(&id) && window.contains(&slot))
                .map(|(id, _)| values[id as usize - 1])
                .collect();
            chosen.sort_unstable_by(|a, b| b.cmp(a));
            let sum: i64 = chosen.iter().sum();
            if chosen.len() != *k || sum != *beta {
                return Err(no(format!(
                    "slots {:?} hold {} values summing to {sum}, expected {k} summing to {beta}",
                    window,
                    chosen.len()
                )));
            }
            Ok(ReductionCertificate::Ksum { values: chosen, sum })
        }
        ReductionMeta::Knapsack { items, capacity, threshold } => {
            let chosen: Vec<usize> = schedule.iter().map(|(id, _)| id as usize - 1).collect();
            let size: i64 = chosen.iter().map(|&i| items[i].size).sum();
            let value: i64 = chosen.iter().map(|&i| items[i].value).sum();
            if size > *capacity || value < *threshold {
                return Err(no(format!("items of size {size} and value {value} do not certify")));
            }
            Ok(ReductionCertificate::Knapsack { items: chosen, size, value })
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracle::solve_oracle;
    use crate::weighted::solve_exact_weighted;

    fn example() -> KSumInput {
        KSumInput {
            values: vec![1, 3, 2],
            beta: 3,
            k: 2,
        }
    }

    #[test]
    fn arbitrary_release_example() {
        let red = ksum_to_eas_arbitrary_release(&example()).unwrap();
        let inst = &red.instance;
        assert_eq!(inst.horizon(), 6);
        assert_eq!(red.threshold, 3);
        assert_eq!(inst.harvest_profile(), &[702, 3, 4, 5, 375, 0]);
        let energies: Vec<i64> = inst.jobs().iter().map(|j| j.energy).collect();
        assert_eq!(energies, vec![378, 360, 342]);
        let releases: Vec<Slot> = inst.jobs().iter().map(|j| j.release).collect();
        assert_eq!(releases, vec![2, 3, 4]);
        // Harvest on slots 2..=n+1 totals S(n - 1).
        assert_eq!(inst.harvest_profile()[1..4].iter().sum::<i64>(), 6 * 2);

        let best = solve_oracle(inst, false).unwrap();
        assert_eq!(best.objective, 3);
        let cert = decode_certificate(&red.meta, &best.schedule).unwrap();
        assert_eq!(cert, ReductionCertificate::Ksum { values: vec![2, 1], sum: 3 });
    }

    #[test]
    fn arbitrary_release_no_instance() {
        let input = KSumInput {
            values: vec![4, 1, 1],
            beta: 2,
            k: 1,
        };
        let red = ksum_to_eas_arbitrary_release(&input).unwrap();
        assert!(solve_oracle(&red.instance, false).unwrap().objective < red.threshold);
    }

    #[test]
    fn arbitrary_due_example() {
        let red = ksum_to_eas_arbitrary_due(&example()).unwrap();
        let inst = &red.instance;
        assert_eq!(inst.horizon(), 9);
        assert_eq!(red.threshold, 4);
        assert_eq!(inst.harvest_profile(), &[702, 0, 0, 378, 9, 8, 7, 5817, 0]);
        assert_eq!(inst.job(4).unwrap().energy, 5832);
        let dues: Vec<Slot> = inst.jobs().iter().map(|j| j.due).collect();
        assert_eq!(dues, vec![5, 6, 7, 9]);

        let best = solve_oracle(inst, false).unwrap();
        assert_eq!(best.objective, 4);
        let cert = decode_certificate(&red.meta, &best.schedule).unwrap();
        assert_eq!(cert, ReductionCertificate::Ksum { values: vec![2, 1], sum: 3 });
    }

    #[test]
    fn arbitrary_due_no_instance() {
        let input = KSumInput {
            values: vec![4, 4, 4],
            beta: 5,
            k: 1,
        };
        let red = ksum_to_eas_arbitrary_due(&input).unwrap();
        assert!(solve_oracle(&red.instance, false).unwrap().objective < red.threshold);
    }

    #[test]
    fn knapsack_example() {
        let input = KnapsackInput {
            items: vec![Item { size: 2, value: 3 }, Item { size: 3, value: 4 }],
            capacity: 3,
            threshold: 4,
        };
        let red = knapsack_to_weas(&input).unwrap();
        assert_eq!(red.instance.harvest_profile(), &[3, 0, 0]);
        let best = solve_exact_weighted(&red.instance).unwrap();
        assert_eq!(best.objective, 4);
        let cert = decode_certificate(&red.meta, &best.schedule).unwrap();
        assert_eq!(cert, ReductionCertificate::Knapsack { items: vec![1], size: 3, value: 4 });
    }

    #[test]
    fn knapsack_edges() {
        let items = vec![Item { size: 1, value: 1 }];
        let zero = knapsack_to_weas(&KnapsackInput { items: items.clone(), capacity: 5, threshold: 0 }).unwrap();
        assert!(decode_certificate(&zero.meta, &Schedule::new()).is_ok());
        let broke = knapsack_to_weas(&KnapsackInput { items, capacity: 0, threshold: 1 }).unwrap();
        assert_eq!(solve_oracle(&broke.instance, true).unwrap().objective, 0);
    }

    #[test]
    fn below_threshold_has_no_certificate() {
        let red = ksum_to_eas_arbitrary_release(&example()).unwrap();
        let partial = Schedule::from_pairs([(3, 4)]);
        assert_eq!(decode_certificate(&red.meta, &partial).unwrap_err().code(), "no-certificate");
        let infeasible = Schedule::from_pairs([(1, 1)]);
        assert_eq!(decode_certificate(&red.meta, &infeasible).unwrap_err().code(), "no-certificate");
    }

    #[test]
    fn invariants_are_checked() {
        let bad = [
            KSumInput { values: vec![1, 1], beta: 1, k: 1 },
            KSumInput { values: vec![1, 0, 1], beta: 1, k: 1 },
            KSumInput { values: vec![1, 2, 3], beta: 6, k: 1 },
            KSumInput { values: vec![1, 2, 3], beta: 0, k: 1 },
            KSumInput { values: vec![1, 2, 3], beta: 2, k: 3 },
            KSumInput { values: vec![i64::MAX / 4, 1, 1], beta: 2, k: 1 },
        ];
        for input in &bad {
            assert!(ksum_to_eas_arbitrary_release(input).is_err(), "{input:?}");
            assert!(ksum_to_eas_arbitrary_due(input).is_err(), "{input:?}");
        }
        let negative = KnapsackInput { items: vec![Item { size: -1, value: 1 }], capacity: 1, threshold: 1 };
        assert_eq!(knapsack_to_weas(&negative).unwrap_err().code(), "negative-value");
    }

    #[test]
    fn first_block_harvest_matches_the_closed_form() {
        for values in [vec![3, 2, 1], vec![5, 5, 4, 1], vec![6, 1, 1, 2, 3]] {
            let n = values.len() as i64;
            let s: i64 = values.iter().sum();
            let red = ksum_to_eas_arbitrary_release(&KSumInput { values, beta: 2, k: 1 }).unwrap();
            let tau1: i64 = red.instance.harvest_profile()[1..=n as usize].iter().sum();
            assert_eq!(tau1, s * (n - 1));
        }
    }

    fn subset_sum_exists(values: &[i64], beta: i64, k: usize) -> bool {
        (0u32..1 << values.len())
            .filter(|m| m.count_ones() as usize == k)
            .any(|m| (0..values.len()).filter(|i| m & (1 << i) != 0).map(|i| values[i]).sum::<i64>() == beta)
    }

    fn arb_ksum() -> impl Strategy<Value = KSumInput> {
        (3usize..=5)
            .prop_flat_map(|n| (prop::collection::vec(1i64..=6, n), 0..n))
            .prop_flat_map(|(values, k)| {
                let total: i64 = values.iter().sum();
                (Just(values), 1..total, Just(k))
            })
            .prop_map(|(values, beta, k)| KSumInput { values, beta, k })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn both_constructions_decide_ksum(input in arb_ksum()) {
            let expected = subset_sum_exists(&input.values, input.beta, input.k);
            for red in [ksum_to_eas_arbitrary_release(&input).unwrap(), ksum_to_eas_arbitrary_due(&input).unwrap()] {
                let best = solve_oracle(&red.instance, false).unwrap();
                prop_assert_eq!(best.objective >= red.threshold, expected);
                if expected {
                    match decode_certificate(&red.meta, &best.schedule).unwrap() {
                        ReductionCertificate::Ksum { values, sum } => {
                            prop_assert_eq!(values.len(), input.k);
                            prop_assert_eq!(sum, input.beta);
                        }
                        other => prop_assert!(false, "unexpected certificate {:?}", other),
                    }
                }
            }
        }
    }

    #[test]
    fn metadata_wire_format() {
        let red = ksum_to_eas_arbitrary_release(&example()).unwrap();
        let text = serde_json::to_string(&red.meta).unwrap();
        assert_eq!(text, r#"{"reduction":"ksum-arb-release","values":[3,2,1],"k":2,"beta":3,"threshold":3}"#);
        let back: ReductionMeta = serde_json::from_str(&text).unwrap();
        assert_eq!(back.instance().unwrap(), red.instance);
    }
}
