//! Core domain types: jobs, job sets, and priority policies.

use std::fmt;

/// Discrete time. Signed so that intermediate start-time bounds may go
/// negative (an ineligible job's latest start can be -1).
pub type Time = i64;

/// 1-based dense job index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobId(pub u32);

impl fmt::Display for JobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{}", self.0)
    }
}

/// One non-preemptive unit of work.
///
/// Release jitter is the interval `[r_min, r_max]`, execution-time variation
/// the interval `[c_min, c_max]`. A smaller `priority` value means higher
/// priority. `ht` marks a hybrid-triggered job: one that is scheduled at
/// predetermined times but runs only when its event condition holds, so it
/// may be absent (execution time 0) at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Job {
    pub id: JobId,
    pub r_min: Time,
    pub r_max: Time,
    pub c_min: Time,
    pub c_max: Time,
    pub deadline: Time,
    pub priority: u32,
    pub ht: bool,
}

/// A finite set of jobs plus the analysis window end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSet {
    jobs: Vec<Job>,
    horizon: Time,
}

impl JobSet {
    /// Wraps the given jobs. Callers are expected to keep ids dense and
    /// 1-based; use [`validate_jobset`] to check.
    pub fn new(jobs: Vec<Job>, horizon: Time) -> Self {
        JobSet { jobs, horizon }
    }

    /// Builds a job set from `(r_min, r_max, c_min, c_max, deadline, priority, ht)`
    /// rows, assigning ids 1..=m in row order.
    pub fn from_rows(rows: &[(Time, Time, Time, Time, Time, u32, bool)], horizon: Time) -> Self {
        let jobs = rows
            .iter()
            .enumerate()
            .map(|(i, &(r_min, r_max, c_min, c_max, deadline, priority, ht))| Job {
                id: JobId(i as u32 + 1),
                r_min,
                r_max,
                c_min,
                c_max,
                deadline,
                priority,
                ht,
            })
            .collect();
        JobSet { jobs, horizon }
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    /// Number of jobs, `m`.
    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    /// The job with the given 1-based id. Panics if out of range; ids are
    /// dense in every validated set.
    pub fn job(&self, id: JobId) -> &Job {
        &self.jobs[(id.0 - 1) as usize]
    }

    pub fn ht_count(&self) -> usize {
        self.jobs.iter().filter(|j| j.ht).count()
    }
}

/// Scheduling policy. Both are non-preemptive; they differ only in the job
/// order they induce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityPolicy {
    /// Fixed priority: order by (priority, id) ascending.
    NpFp,
    /// Earliest deadline first: order by (deadline, id) ascending.
    NpEdf,
}

impl PriorityPolicy {
    /// True iff `a` strictly precedes `b` under this policy. Ties on the
    /// primary key are broken by id, so the order is total for a != b.
    pub fn higher_priority(self, a: &Job, b: &Job) -> bool {
        match self {
            PriorityPolicy::NpFp => (a.priority, a.id) < (b.priority, b.id),
            PriorityPolicy::NpEdf => (a.deadline, a.id) < (b.deadline, b.id),
        }
    }
}

/// See [`PriorityPolicy::higher_priority`].
pub fn higher_priority(a: &Job, b: &Job, policy: PriorityPolicy) -> bool {
    policy.higher_priority(a, b)
}

/// One broken job-set invariant. Validation reports findings instead of
/// aborting so a caller can show them all at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `0 <= r_min <= r_max` does not hold.
    ReleaseWindow { job: JobId },
    /// `1 <= c_min <= c_max` does not hold. Absence must be expressed via
    /// the ht flag, never as `c_min = 0`.
    ExecutionBounds { job: JobId },
    /// `deadline > r_min` does not hold.
    Deadline { job: JobId },
    /// `priority >= 1` does not hold.
    Priority { job: JobId },
    /// Ids are not exactly 1..=m in order.
    IdsNotDense { position: usize, found: JobId },
    /// `horizon >= max r_max` does not hold.
    Horizon { horizon: Time, max_r_max: Time },
}

impl Violation {
    /// Job the violation is attached to, if any.
    pub fn job(&self) -> Option<JobId> {
        match *self {
            Violation::ReleaseWindow { job }
            | Violation::ExecutionBounds { job }
            | Violation::Deadline { job }
            | Violation::Priority { job } => Some(job),
            Violation::IdsNotDense { found, .. } => Some(found),
            Violation::Horizon { .. } => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ReleaseWindow { job } => {
                write!(f, "{job}: release jitter must satisfy 0 <= r_min <= r_max")
            }
            Violation::ExecutionBounds { job } => {
                write!(
                    f,
                    "{job}: execution bounds must satisfy 1 <= c_min <= c_max (use the ht flag for absence)"
                )
            }
            Violation::Deadline { job } => write!(f, "{job}: deadline must exceed r_min"),
            Violation::Priority { job } => write!(f, "{job}: priority must be >= 1"),
            Violation::IdsNotDense { position, found } => {
                write!(f, "job at position {position} has id {found}, expected J{position}")
            }
            Violation::Horizon { horizon, max_r_max } => {
                write!(f, "horizon {horizon} is smaller than the largest r_max {max_r_max}")
            }
        }
    }
}

/// Checks every job and job-set invariant. Returns an empty list iff the set
/// is well formed. Pure and idempotent.
pub fn validate_jobset(js: &JobSet) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, job) in js.jobs().iter().enumerate() {
        if job.id.0 as usize != i + 1 {
            out.push(Violation::IdsNotDense {
                position: i + 1,
                found: job.id,
            });
        }
        if !(0 <= job.r_min && job.r_min <= job.r_max) {
            out.push(Violation::ReleaseWindow { job: job.id });
        }
        if !(1 <= job.c_min && job.c_min <= job.c_max) {
            out.push(Violation::ExecutionBounds { job: job.id });
        }
        if job.deadline <= job.r_min {
            out.push(Violation::Deadline { job: job.id });
        }
        if job.priority < 1 {
            out.push(Violation::Priority { job: job.id });
        }
    }
    if let Some(max_r_max) = js.jobs().iter().map(|j| j.r_max).max() {
        if js.horizon() < max_r_max {
            out.push(Violation::Horizon {
                horizon: js.horizon(),
                max_r_max,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;
    use proptest::prelude::*;

    fn job(id: u32, priority: u32, deadline: Time) -> Job {
        Job {
            id: JobId(id),
            r_min: 0,
            r_max: 0,
            c_min: 1,
            c_max: 1,
            deadline,
            priority,
            ht: false,
        }
    }

    #[test]
    fn fp_orders_by_priority_then_id() {
        let a = job(1, 1, 20);
        let b = job(4, 2, 20);
        assert!(higher_priority(&a, &b, PriorityPolicy::NpFp));
        assert!(!higher_priority(&b, &a, PriorityPolicy::NpFp));

        // equal priority: lower id wins
        let a = job(2, 3, 20);
        let b = job(5, 3, 20);
        assert!(higher_priority(&a, &b, PriorityPolicy::NpFp));
        assert!(!higher_priority(&b, &a, PriorityPolicy::NpFp));
    }

    #[test]
    fn edf_orders_by_deadline_then_id() {
        let a = job(1, 9, 20);
        let b = job(2, 1, 25);
        assert!(higher_priority(&a, &b, PriorityPolicy::NpEdf));
        assert!(!higher_priority(&b, &a, PriorityPolicy::NpEdf));
    }

    #[test]
    fn example_sets_are_well_formed() {
        assert!(validate_jobset(&testdata::smoke_alarm()).is_empty());
        assert!(validate_jobset(&testdata::example_1()).is_empty());
        assert!(validate_jobset(&testdata::example_2()).is_empty());
    }

    #[test]
    fn inverted_jitter_is_flagged() {
        let js = JobSet::from_rows(&[(5, 3, 1, 2, 9, 1, false)], 100);
        let violations = validate_jobset(&js);
        assert_eq!(violations, vec![Violation::ReleaseWindow { job: JobId(1) }]);
    }

    #[test]
    fn zero_c_min_is_flagged() {
        let js = JobSet::from_rows(&[(0, 0, 0, 2, 9, 1, true)], 100);
        let violations = validate_jobset(&js);
        assert_eq!(violations, vec![Violation::ExecutionBounds { job: JobId(1) }]);
    }

    #[test]
    fn horizon_below_r_max_is_flagged() {
        let js = JobSet::from_rows(&[(0, 50, 1, 2, 9, 1, false)], 40);
        let violations = validate_jobset(&js);
        assert!(matches!(violations.as_slice(), [Violation::Horizon { .. }]));
    }

    #[test]
    fn validate_is_idempotent() {
        let js = JobSet::from_rows(&[(5, 3, 0, 2, 1, 0, false)], 1);
        assert_eq!(validate_jobset(&js), validate_jobset(&js));
    }

    fn arb_job(id: u32) -> impl Strategy<Value = Job> {
        (0i64..20, 0i64..4, 1i64..5, 0i64..4, 1u32..6, any::<bool>()).prop_map(
            move |(r_min, jitter, c_min, c_gap, priority, ht)| Job {
                id: JobId(id),
                r_min,
                r_max: r_min + jitter,
                c_min,
                c_max: c_min + c_gap,
                deadline: r_min + 50,
                priority,
                ht,
            },
        )
    }

    proptest! {
        /// Strict total order: for a != b exactly one direction holds, and
        /// comparing never claims a job precedes itself.
        #[test]
        fn priority_order_is_strict_and_total(
            a in arb_job(1),
            b in arb_job(2),
            c in arb_job(3),
            fp in any::<bool>(),
        ) {
            let policy = if fp { PriorityPolicy::NpFp } else { PriorityPolicy::NpEdf };
            prop_assert!(!higher_priority(&a, &a, policy));
            prop_assert!(higher_priority(&a, &b, policy) ^ higher_priority(&b, &a, policy));
            // transitivity
            if higher_priority(&a, &b, policy) && higher_priority(&b, &c, policy) {
                prop_assert!(higher_priority(&a, &c, policy));
            }
        }
    }
}
