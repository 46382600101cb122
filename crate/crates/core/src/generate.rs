//! Seeded random instance families.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EasError, Result};
use crate::model::{Instance, Job, JobId, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMode {
    /// Every job may use every slot.
    Full,
    /// One random window shared by all jobs.
    Common,
    /// An independent random window per job.
    Arbitrary,
}

/// Inclusive bounds for every random quantity. Job count and horizon are
/// drawn per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub jobs: (usize, usize),
    pub horizon: (Slot, Slot),
    pub energy: (i64, i64),
    pub harvest: (i64, i64),
    pub weight: (i64, i64),
    pub windows: WindowMode,
}

impl Family {
    /// Fixed sizes, unit weights.
    pub fn fixed(jobs: usize, horizon: Slot, energy: (i64, i64), harvest: (i64, i64), windows: WindowMode) -> Self {
        Family {
            jobs: (jobs, jobs),
            horizon: (horizon, horizon),
            energy,
            harvest,
            weight: (1, 1),
            windows,
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |what: &str| Err(EasError::BadInput(format!("empty or invalid {what} range")));
        if self.jobs.0 > self.jobs.1 {
            return bad("job count");
        }
        if self.horizon.0 == 0 || self.horizon.0 > self.horizon.1 {
            return bad("horizon");
        }
        for (what, (lo, hi)) in [("energy", self.energy), ("harvest", self.harvest), ("weight", self.weight)] {
            if lo < 0 || lo > hi {
                return bad(what);
            }
        }
        Ok(())
    }
}

fn window(rng: &mut ChaCha8Rng, horizon: Slot) -> (Slot, Slot) {
    let release = rng.gen_range(1..=horizon);
    let due = rng.gen_range(release..=horizon);
    (release, due)
}

/// One instance; the same family and seed always give the same instance.
/// Job ids run from 1.
pub fn random_instance(family: &Family, seed: u64) -> Result<Instance> {
    family.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(family.jobs.0..=family.jobs.1);
    let horizon = rng.gen_range(family.horizon.0..=family.horizon.1);
    let harvest = (0..horizon)
        .map(|_| rng.gen_range(family.harvest.0..=family.harvest.1))
        .collect();
    let shared = match family.windows {
        WindowMode::Full => Some((1, horizon)),
        WindowMode::Common => Some(window(&mut rng, horizon)),
        WindowMode::Arbitrary => None,
    };
    let jobs = (1..=n)
        .map(|i| {
            let (release, due) = shared.unwrap_or_else(|| window(&mut rng, horizon));
            let energy = rng.gen_range(family.energy.0..=family.energy.1);
            let weight = rng.gen_range(family.weight.0..=family.weight.1);
            Job::new(i as JobId, release, due, energy, weight)
        })
        .collect();
    Instance::new(horizon, harvest, jobs)
}

/// `count` instances with seeds `base_seed, base_seed + 1, ...`.
pub fn random_corpus(family: &Family, base_seed: u64, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64)
        .map(|i| random_instance(family, base_seed.wrapping_add(i)))
        .collect()
}
