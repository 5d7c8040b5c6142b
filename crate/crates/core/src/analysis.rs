//! Extracts analysis results from a constructed SAG or a raw job set:
//! per-job completion intervals, schedulability, scenario counts, the idle
//! time needed to keep an absence-blind analysis safe, and graph statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructor::{ConstructStats, SagGraph};
use crate::model::{JobId, JobSet, Time};
use crate::scheduler::{EdgeKind, Variant};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AnalysisError {
    /// Every job must be dispatched with an execute edge somewhere in a
    /// well-formed graph; hitting this means the constructor is broken.
    #[error("{job} has no execute edge in the graph")]
    JobNeverExecutes { job: JobId },
}

/// Earliest and latest completion time of a job, taken over all of its
/// execute dispatches. Absent dispatches have no completion and are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionInterval {
    pub ect: Time,
    pub lct: Time,
}

/// Per-job completion bounds read from the graph's execute edges.
///
/// Bounds come from the edges rather than from target states: a merged
/// state's interval is the union over all dispatches folded into it, which
/// may include finish times of *other* jobs' dispatches.
pub fn completion_intervals(g: &SagGraph) -> Result<Vec<CompletionInterval>, AnalysisError> {
    let m = g.depth() as usize;
    let mut acc: Vec<Option<(Time, Time)>> = vec![None; m];
    for edge in g.edges() {
        if edge.kind != EdgeKind::Execute {
            continue;
        }
        let slot = &mut acc[(edge.job.0 - 1) as usize];
        *slot = match *slot {
            None => Some((edge.finish_lo, edge.finish_hi)),
            Some((lo, hi)) => Some((lo.min(edge.finish_lo), hi.max(edge.finish_hi))),
        };
    }
    acc.into_iter()
        .enumerate()
        .map(|(i, bounds)| match bounds {
            Some((ect, lct)) => Ok(CompletionInterval { ect, lct }),
            None => Err(AnalysisError::JobNeverExecutes {
                job: JobId(i as u32 + 1),
            }),
        })
        .collect()
}

/// True iff every job meets its deadline in the worst case.
pub fn schedulability(per_job: &[CompletionInterval], js: &JobSet) -> bool {
    per_job
        .iter()
        .zip(js.jobs())
        .all(|(c, job)| c.lct <= job.deadline)
}

/// Common logarithm of a scenario count. Counts at realistic scale overflow
/// any integer type (10^1000 and beyond), so all arithmetic stays in log
/// space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioCount {
    pub log10_total: f64,
}

/// Number of execution scenarios a construction algorithm accounts for, as a
/// common logarithm. The hybrid count equals the actual scenario count of
/// the job set.
pub fn count_scenarios_log10(js: &JobSet, variant: Variant) -> ScenarioCount {
    let mut log10_total = 0.0;
    for job in js.jobs() {
        let releases = (job.r_max - job.r_min + 1) as f64;
        let span = job.c_max - job.c_min + 1;
        let execs = match variant {
            Variant::Original => span,
            Variant::Extended => {
                if job.ht {
                    job.c_max + 1
                } else {
                    span
                }
            }
            Variant::Hybrid => span + if job.ht { 1 } else { 0 },
        } as f64;
        log10_total += (releases * execs).log10();
    }
    ScenarioCount { log10_total }
}

/// Idle time that must be inserted to keep an absence-blind analysis safe:
/// when an HT job is absent, the processor idles through its reserved slot,
/// so the original-variant verdict still covers the actual schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdleReport {
    pub idle: Time,
    /// Fraction of the horizon left for useful work, `1 - idle / horizon`.
    pub efficiency: f64,
}

pub fn idle_time_for_safety(js: &JobSet) -> IdleReport {
    let idle: Time = js.jobs().iter().filter(|j| j.ht).map(|j| j.c_min).sum();
    IdleReport {
        idle,
        efficiency: 1.0 - idle as f64 / js.horizon() as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_width: usize,
    pub depth: u32,
}

pub fn graph_stats(g: &SagGraph) -> GraphStats {
    GraphStats {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        max_width: g.max_width(),
        depth: g.depth(),
    }
}

/// Everything the toolkit reports about one construction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Indexed by job id - 1.
    pub per_job: Vec<JobOutcome>,
    pub schedulable: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_width: usize,
    pub depth: u32,
    /// Wall-clock construction time in seconds. Not part of any determinism
    /// guarantee.
    pub construct_wall_time: f64,
    pub scenario_log10: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobOutcome {
    /// Earliest/latest completion time (absolute).
    pub ect: Time,
    pub lct: Time,
    /// Best-/worst-case response time relative to the earliest release.
    pub bcrt: Time,
    pub wcrt: Time,
    pub miss: bool,
}

fn outcomes(js: &JobSet, bounds: &[(Time, Time)]) -> Vec<JobOutcome> {
    js.jobs()
        .iter()
        .zip(bounds)
        .map(|(job, &(ect, lct))| JobOutcome {
            ect,
            lct,
            bcrt: ect - job.r_min,
            wcrt: lct - job.r_min,
            miss: lct > job.deadline,
        })
        .collect()
}

/// Builds the full report for a retained graph.
pub fn build_report(
    js: &JobSet,
    g: &SagGraph,
    construct_wall_time: f64,
) -> Result<AnalysisReport, AnalysisError> {
    let intervals = completion_intervals(g)?;
    let bounds: Vec<(Time, Time)> = intervals.iter().map(|c| (c.ect, c.lct)).collect();
    let per_job = outcomes(js, &bounds);
    let stats = graph_stats(g);
    Ok(AnalysisReport {
        schedulable: per_job.iter().all(|o| !o.miss),
        per_job,
        vertex_count: stats.vertex_count,
        edge_count: stats.edge_count,
        max_width: stats.max_width,
        depth: stats.depth,
        construct_wall_time,
        scenario_log10: count_scenarios_log10(js, g.variant()).log10_total,
    })
}

/// Builds the same report from a stats-only construction run.
pub fn report_from_stats(
    js: &JobSet,
    stats: &ConstructStats,
    construct_wall_time: f64,
) -> Result<AnalysisReport, AnalysisError> {
    let bounds: Vec<(Time, Time)> = js
        .jobs()
        .iter()
        .map(|job| {
            stats
                .completion_bounds(job.id)
                .ok_or(AnalysisError::JobNeverExecutes { job: job.id })
        })
        .collect::<Result<_, _>>()?;
    let per_job = outcomes(js, &bounds);
    Ok(AnalysisReport {
        schedulable: per_job.iter().all(|o| !o.miss),
        per_job,
        vertex_count: stats.vertex_count(),
        edge_count: stats.edge_count(),
        max_width: stats.max_width(),
        depth: stats.depth(),
        construct_wall_time,
        scenario_log10: count_scenarios_log10(js, stats.variant()).log10_total,
    })
}
