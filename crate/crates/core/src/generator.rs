//! Reproducible random job-set generation.
//!
//! Jobs are drawn from the distribution of a typical automotive engine
//! control workload: release times spread over a 10000-tick horizon with up
//! to 9 ticks of jitter, execution times in `[2, C_U]` with 1..4 ticks of
//! variation, a shared absolute deadline of 9999, priorities 1..10, and a
//! chosen fraction of hybrid-triggered jobs. `C_U = U/5 - 7` steers the
//! worst-case utilization toward `U` percent.
//!
//! All draws come from a ChaCha8 stream seeded with `seed`, so identical
//! parameters produce byte-identical job sets on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Job, JobId, JobSet, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub num_jobs: u32,
    /// Target worst-case utilization in percent; must map to `C_U >= 2`,
    /// i.e. at least 45.
    pub utilization_pct: u32,
    /// Percentage of jobs marked hybrid-triggered, 0..=100.
    pub ht_ratio_pct: u32,
    pub seed: u64,
    pub horizon: Time,
}

impl GenParams {
    pub fn new(num_jobs: u32, utilization_pct: u32, ht_ratio_pct: u32, seed: u64) -> Self {
        GenParams {
            num_jobs,
            utilization_pct,
            ht_ratio_pct,
            seed,
            horizon: crate::io::DEFAULT_HORIZON,
        }
    }
}

/// Upper execution-time bound for a target utilization.
pub fn c_u(utilization_pct: u32) -> Time {
    (utilization_pct / 5) as Time - 7
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("utilization {utilization_pct}% gives C_U = {c_u} < 2; the execution range is empty")]
    ExecRangeEmpty { utilization_pct: u32, c_u: Time },
    #[error("num_jobs must be at least 1")]
    NoJobs,
    #[error("ht_ratio_pct must be within 0..=100, got {0}")]
    HtRatioOutOfRange(u32),
    #[error("horizon {0} is below the release window end 9999")]
    HorizonTooSmall(Time),
}

/// Number of hybrid-triggered jobs for a set size and ratio, rounded half
/// up.
pub fn ht_job_count(num_jobs: u32, ht_ratio_pct: u32) -> u32 {
    ((num_jobs as u64 * ht_ratio_pct as u64 + 50) / 100) as u32
}

/// Generates a job set. Deterministic: the same parameters always yield the
/// same set. Every generated set validates cleanly.
pub fn generate(params: GenParams) -> Result<JobSet, GenError> {
    if params.num_jobs == 0 {
        return Err(GenError::NoJobs);
    }
    if params.ht_ratio_pct > 100 {
        return Err(GenError::HtRatioOutOfRange(params.ht_ratio_pct));
    }
    let c_upper = c_u(params.utilization_pct);
    if c_upper < 2 {
        return Err(GenError::ExecRangeEmpty {
            utilization_pct: params.utilization_pct,
            c_u: c_upper,
        });
    }
    if params.horizon < 9999 {
        return Err(GenError::HorizonTooSmall(params.horizon));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.num_jobs as usize;
    let mut jobs = Vec::with_capacity(n);
    for i in 0..n {
        let r_min: Time = rng.random_range(1..=9990);
        let r_max = r_min + rng.random_range(0..=9);
        let c_min: Time = rng.random_range(2..=c_upper);
        let c_max = c_min + rng.random_range(1..=4);
        jobs.push(Job {
            id: JobId(i as u32 + 1),
            r_min,
            r_max,
            c_min,
            c_max,
            deadline: 9999,
            priority: rng.random_range(1..=10),
            ht: false,
        });
    }

    // Choose the HT jobs uniformly without replacement: a partial
    // Fisher-Yates over the index vector.
    let ht_count = ht_job_count(params.num_jobs, params.ht_ratio_pct) as usize;
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..ht_count {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
        jobs[indices[i]].ht = true;
    }

    Ok(JobSet::new(jobs, params.horizon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::render_jobset;
    use crate::model::validate_jobset;

    #[test]
    fn full_scale_set_has_the_documented_shape() {
        let js = generate(GenParams::new(1000, 60, 15, 42)).unwrap();
        assert_eq!(js.len(), 1000);
        assert_eq!(js.ht_count(), 150);
        assert!(validate_jobset(&js).is_empty());
        for j in js.jobs() {
            assert!((1..=9990).contains(&j.r_min));
            assert!((0..=9).contains(&(j.r_max - j.r_min)));
            assert!((2..=5).contains(&j.c_min)); // C_U = 60/5 - 7 = 5
            assert!((1..=4).contains(&(j.c_max - j.c_min)));
            assert_eq!(j.deadline, 9999);
            assert!((1..=10).contains(&j.priority));
        }
    }

    #[test]
    fn lowest_utilization_pins_c_min_to_two() {
        let js = generate(GenParams::new(200, 45, 0, 7)).unwrap();
        assert!(js.jobs().iter().all(|j| j.c_min == 2 && !j.ht));
    }

    #[test]
    fn ht_count_rounds_half_up() {
        assert_eq!(ht_job_count(10, 50), 5);
        assert_eq!(ht_job_count(10, 15), 2); // 1.5 rounds up
        assert_eq!(ht_job_count(10, 14), 1); // 1.4 rounds down
        let js = generate(GenParams::new(10, 75, 50, 3)).unwrap();
        assert_eq!(js.ht_count(), 5);
    }

    #[test]
    fn same_seed_gives_byte_identical_sets() {
        let params = GenParams::new(100, 70, 30, 123456789);
        let a = generate(params).unwrap();
        let b = generate(params).unwrap();
        assert_eq!(a, b);
        assert_eq!(render_jobset(&a), render_jobset(&b));
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate(GenParams::new(50, 60, 20, 1)).unwrap();
        let b = generate(GenParams::new(50, 60, 20, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn sub_45_utilization_is_rejected() {
        assert_eq!(
            generate(GenParams::new(10, 40, 0, 1)),
            Err(GenError::ExecRangeEmpty {
                utilization_pct: 40,
                c_u: 1
            })
        );
        assert!(generate(GenParams::new(10, 44, 0, 1)).is_err());
        assert!(generate(GenParams::new(10, 45, 0, 1)).is_ok());
    }

    #[test]
    fn zero_jobs_is_rejected() {
        assert_eq!(generate(GenParams::new(0, 60, 0, 1)), Err(GenError::NoJobs));
    }

    #[test]
    fn worst_case_demand_tracks_the_target_utilization() {
        for (u, seed) in [(45u32, 5u64), (60, 6), (75, 7)] {
            let js = generate(GenParams::new(1000, u, 15, seed)).unwrap();
            let demand: Time = js.jobs().iter().map(|j| j.c_max).sum();
            let achieved = demand as f64 / js.horizon() as f64;
            let target = u as f64 / 100.0;
            assert!(
                (achieved - target).abs() < 0.1 * target,
                "U={u}: achieved {achieved:.3} vs target {target:.3}"
            );
        }
    }

    #[test]
    fn generated_sets_always_validate() {
        for seed in 0..20 {
            let js = generate(GenParams::new(50, 45 + (seed as u32 % 7) * 5, 40, seed)).unwrap();
            assert!(validate_jobset(&js).is_empty());
        }
    }
}
