//! Eligibility and successor-interval rules: given a state, which job can be
//! dispatched next, and what finish-time interval does that dispatch reach.
//!
//! For a state with finish interval `[e, l]` and a not-yet-dispatched job `i`:
//!
//! * `est_i  = max(e, r_i^min)` — earliest instant `i` can start;
//! * `t_wc   = max(l, min_j r_j^max)` over all pending jobs `j` — the latest
//!   instant the processor can remain free with work certainly available
//!   (work conservation);
//! * `t_high = min_j r_j^max` over pending jobs `j` of strictly higher
//!   priority than `i` (infinite if none) — from `t_high` on, some
//!   higher-priority job is certainly released and wins the processor;
//! * `lst_i  = min(t_wc, t_high - 1)` — latest instant `i` can start.
//!
//! Job `i` is eligible iff `est_i <= lst_i`. The emitted successor interval
//! depends on the construction variant; absence is modeled as a dispatch of
//! zero execution time at the dispatch instant, so an absent successor spans
//! `[est, lst]`.

use crate::constructor::State;
use crate::model::{JobId, JobSet, PriorityPolicy, Time};

/// SAG construction algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Treats every job as always present; absence is not analyzed.
    Original,
    /// Widens the minimum execution time of every hybrid-triggered job to 0.
    Extended,
    /// Splits every absence into a separate state; exact for HT jobs.
    Hybrid,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Original, Variant::Extended, Variant::Hybrid];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Extended => "extended",
            Variant::Hybrid => "hybrid",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Kind of a dispatch edge. `Execute` orders before `Absent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Execute,
    Absent,
}

/// One possible next dispatch from a state: the job, whether it runs or is
/// absent, its start window, and the successor finish interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expansion {
    pub job: JobId,
    pub kind: EdgeKind,
    pub est: Time,
    pub lst: Time,
    pub finish_lo: Time,
    pub finish_hi: Time,
}

/// Computes every eligible dispatch from `state`, ordered by job id then
/// kind (execute before absent). Pure function of its inputs.
pub fn eligible_expansions(
    state: &State,
    js: &JobSet,
    policy: PriorityPolicy,
    variant: Variant,
) -> Vec<Expansion> {
    let mut pending: Vec<usize> = (0..js.len())
        .filter(|&i| !state.dispatched.contains(JobId(i as u32 + 1)))
        .collect();
    if pending.is_empty() {
        return Vec::new();
    }

    let jobs = js.jobs();
    let earliest_certain_release = pending.iter().map(|&i| jobs[i].r_max).min().unwrap();
    let work_conserving_latest = state.l.max(earliest_certain_release);

    // Walk pending jobs from highest to lowest priority, carrying the
    // running minimum of r_max over everything strictly higher.
    pending.sort_by(|&a, &b| {
        if policy.higher_priority(&jobs[a], &jobs[b]) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });

    let mut out = Vec::new();
    let mut higher_certain_release = Time::MAX;
    for &i in &pending {
        let job = &jobs[i];
        let est = state.e.max(job.r_min);
        let lst = work_conserving_latest.min(higher_certain_release.saturating_sub(1));
        if est <= lst {
            let exec_lo = match variant {
                Variant::Extended if job.ht => est,
                _ => est + job.c_min,
            };
            out.push(Expansion {
                job: job.id,
                kind: EdgeKind::Execute,
                est,
                lst,
                finish_lo: exec_lo,
                finish_hi: lst + job.c_max,
            });
            if variant == Variant::Hybrid && job.ht {
                out.push(Expansion {
                    job: job.id,
                    kind: EdgeKind::Absent,
                    est,
                    lst,
                    finish_lo: est,
                    finish_hi: lst,
                });
            }
        }
        higher_certain_release = higher_certain_release.min(job.r_max);
    }

    out.sort_by_key(|x| (x.job, x.kind));
    out
}
