//! JSON encoding of instances and schedules.
//!
//! Instance: `{"horizon": T, "harvest": [h1, ..., hT], "jobs": [{"id": 0,
//! "release": 1, "due": T, "energy": e, "weight": w}, ...]}`. `weight` may be
//! omitted and defaults to 1.
//!
//! Schedule: `{"assignments": {"0": 2, "3": 5}}`, job ids as string keys.

use serde::{Deserialize, Serialize};

use crate::error::{EasError, Result};
use crate::model::{Instance, Job, JobId, Schedule, Slot};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawInstance {
    horizon: i64,
    harvest: Vec<i64>,
    jobs: Vec<RawJob>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawJob {
    id: i64,
    release: i64,
    due: i64,
    energy: i64,
    #[serde(default = "unit_weight")]
    weight: i64,
}

fn unit_weight() -> i64 {
    1
}

fn non_negative(value: i64, what: impl FnOnce() -> String) -> Result<i64> {
    if value < 0 {
        Err(EasError::NegativeValue(format!("{} is {}", what(), value)))
    } else {
        Ok(value)
    }
}

impl TryFrom<RawInstance> for Instance {
    type Error = EasError;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let horizon = non_negative(raw.horizon, || "horizon".into())? as Slot;
        let mut jobs = Vec::with_capacity(raw.jobs.len());
        for job in raw.jobs {
            let id = non_negative(job.id, || "job id".into())?;
            let id = JobId::try_from(id)
                .map_err(|_| EasError::Parse(format!("job id {id} is out of range")))?;
            let release = non_negative(job.release, || format!("release of job {id}"))?;
            let due = non_negative(job.due, || format!("due date of job {id}"))?;
            if release == 0 || release > due {
                return Err(EasError::BadWindow { id, release, due });
            }
            jobs.push(Job {
                id,
                release: release as Slot,
                due: due as Slot,
                energy: non_negative(job.energy, || format!("energy of job {id}"))?,
                weight: non_negative(job.weight, || format!("weight of job {id}"))?,
            });
        }
        Instance::new(horizon, raw.harvest, jobs)
    }
}

impl From<&Instance> for RawInstance {
    fn from(inst: &Instance) -> Self {
        RawInstance {
            horizon: inst.horizon() as i64,
            harvest: inst.harvest_profile().to_vec(),
            jobs: inst
                .jobs()
                .iter()
                .map(|j| RawJob {
                    id: j.id as i64,
                    release: j.release as i64,
                    due: j.due as i64,
                    energy: j.energy,
                    weight: j.weight,
                })
                .collect(),
        }
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawInstance::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInstance::deserialize(deserializer)?;
        Instance::try_from(raw).map_err(serde::de::Error::custom)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(text)?;
    Instance::try_from(raw)
}

pub fn serialize_instance(instance: &Instance) -> String {
    serde_json::to_string(instance).expect("instances always serialize")
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_schedule(schedule: &Schedule) -> String {
    serde_json::to_string(schedule).expect("schedules always serialize")
}
