//! File formats: the plain-text job-set format, DOT graph export, and
//! CSV/JSON report serialization.
//!
//! A job-set file is UTF-8 text with one job per line, seven
//! whitespace-separated integers:
//!
//! ```text
//! r_min r_max c_min c_max deadline priority ht_flag
//! ```
//!
//! `#` starts a comment line, blank lines are ignored, and an optional
//! `@horizon <int>` directive may appear as the first content line (the
//! horizon defaults to 10000). Jobs are numbered 1..=m in line order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::AnalysisReport;
use crate::constructor::SagGraph;
use crate::model::{validate_jobset, Job, JobId, JobSet, Time, Violation};
use crate::scheduler::EdgeKind;

pub const DEFAULT_HORIZON: Time = 10_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected 7 fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: field {field} ({name}) is not an integer: \"{text}\"")]
    NotAnInteger {
        line: usize,
        field: usize,
        name: &'static str,
        text: String,
    },
    #[error("line {line}: ht flag must be 0 or 1, found {found}")]
    HtFlag { line: usize, found: i64 },
    #[error("line {line}: priority must be a positive integer")]
    Priority { line: usize },
    #[error("line {line}: bad directive; expected \"@horizon <int>\"")]
    Directive { line: usize },
    #[error("line {line}: {violation}")]
    JobInvariant { line: usize, violation: Violation },
    #[error("{violation}")]
    SetInvariant { violation: Violation },
}

const FIELD_NAMES: [&str; 7] = [
    "r_min", "r_max", "c_min", "c_max", "deadline", "priority", "ht_flag",
];

/// Parses a job-set file. Jobs are numbered by line order; invariant
/// breaches are reported with the offending line.
pub fn parse_jobset(text: &str) -> Result<JobSet, ParseError> {
    let mut horizon = DEFAULT_HORIZON;
    let mut jobs: Vec<Job> = Vec::new();
    let mut job_lines: Vec<usize> = Vec::new();
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('@') {
            let mut parts = rest.split_whitespace();
            let ok = !seen_content
                && parts.next() == Some("horizon")
                && match parts.next() {
                    Some(v) => match v.parse::<Time>() {
                        Ok(h) => {
                            horizon = h;
                            true
                        }
                        Err(_) => false,
                    },
                    None => false,
                }
                && parts.next().is_none();
            if !ok {
                return Err(ParseError::Directive { line });
            }
            seen_content = true;
            continue;
        }
        seen_content = true;

        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(ParseError::FieldCount {
                line,
                found: fields.len(),
            });
        }
        let mut values = [0i64; 7];
        for (f, (text, value)) in fields.iter().zip(values.iter_mut()).enumerate() {
            *value = text.parse().map_err(|_| ParseError::NotAnInteger {
                line,
                field: f + 1,
                name: FIELD_NAMES[f],
                text: (*text).to_string(),
            })?;
        }
        let ht = match values[6] {
            0 => false,
            1 => true,
            found => return Err(ParseError::HtFlag { line, found }),
        };
        if !(1..=u32::MAX as i64).contains(&values[5]) {
            return Err(ParseError::Priority { line });
        }
        jobs.push(Job {
            id: JobId(jobs.len() as u32 + 1),
            r_min: values[0],
            r_max: values[1],
            c_min: values[2],
            c_max: values[3],
            deadline: values[4],
            priority: values[5] as u32,
            ht,
        });
        job_lines.push(line);
    }

    let js = JobSet::new(jobs, horizon);
    if let Some(violation) = validate_jobset(&js).into_iter().next() {
        return Err(match violation.job() {
            Some(job) => ParseError::JobInvariant {
                line: job_lines[(job.0 - 1) as usize],
                violation,
            },
            None => ParseError::SetInvariant { violation },
        });
    }
    Ok(js)
}

/// Renders a job set in the file format; `parse_jobset` inverts it exactly.
pub fn render_jobset(js: &JobSet) -> String {
    let mut out = String::new();
    writeln!(out, "@horizon {}", js.horizon()).unwrap();
    for j in js.jobs() {
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            j.r_min,
            j.r_max,
            j.c_min,
            j.c_max,
            j.deadline,
            j.priority,
            u8::from(j.ht)
        )
        .unwrap();
    }
    out
}

/// Emits the graph as Graphviz DOT text: one node per state labeled
/// `S<index>` over `[e,l]`, one edge per dispatch labeled `J<id>`, absent
/// dispatches dashed and suffixed `!`. Output is byte-identical across runs
/// on identical graphs.
pub fn write_dot(g: &SagGraph) -> String {
    let mut out = String::from("digraph sag {\n");
    for s in g.states() {
        writeln!(
            out,
            "  S{} [label=\"S{}\\n[{},{}]\"];",
            s.index, s.index, s.e, s.l
        )
        .unwrap();
    }
    for e in g.edges() {
        match e.kind {
            EdgeKind::Execute => {
                writeln!(out, "  S{}->S{} [label=\"{}\"];", e.from, e.to, e.job).unwrap()
            }
            EdgeKind::Absent => writeln!(
                out,
                "  S{}->S{} [label=\"{}!\", style=dashed];",
                e.from, e.to, e.job
            )
            .unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// One report row: the job's input attributes plus its analysis outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: u32,
    pub r_min: Time,
    pub r_max: Time,
    pub c_min: Time,
    pub c_max: Time,
    pub deadline: Time,
    pub priority: u32,
    pub ht: u8,
    pub ect: Time,
    pub lct: Time,
    pub bcrt: Time,
    pub wcrt: Time,
    pub miss: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub schedulable: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_width: usize,
    pub depth: u32,
    pub construct_wall_time: f64,
    pub scenario_log10: f64,
}

/// Serializable form of an [`AnalysisReport`] joined with its job set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub jobs: Vec<ReportRow>,
    pub summary: ReportSummary,
}

pub fn report_file(js: &JobSet, report: &AnalysisReport) -> ReportFile {
    let jobs = js
        .jobs()
        .iter()
        .zip(&report.per_job)
        .map(|(j, o)| ReportRow {
            id: j.id.0,
            r_min: j.r_min,
            r_max: j.r_max,
            c_min: j.c_min,
            c_max: j.c_max,
            deadline: j.deadline,
            priority: j.priority,
            ht: u8::from(j.ht),
            ect: o.ect,
            lct: o.lct,
            bcrt: o.bcrt,
            wcrt: o.wcrt,
            miss: o.miss,
        })
        .collect();
    ReportFile {
        jobs,
        summary: ReportSummary {
            schedulable: report.schedulable,
            vertex_count: report.vertex_count,
            edge_count: report.edge_count,
            max_width: report.max_width,
            depth: report.depth,
            construct_wall_time: report.construct_wall_time,
            scenario_log10: report.scenario_log10,
        },
    }
}

/// Serializes the report. CSV carries one row per job followed by a blank
/// line and a `key,value` summary block; JSON carries the same fields with
/// stable field order.
pub fn write_report(js: &JobSet, report: &AnalysisReport, format: ReportFormat) -> String {
    let file = report_file(js, report);
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(&file).unwrap();
            text.push('\n');
            text
        }
        ReportFormat::Csv => {
            let mut out =
                String::from("id,r_min,r_max,c_min,c_max,deadline,priority,ht,ect,lct,bcrt,wcrt,miss\n");
            for r in &file.jobs {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.id,
                    r.r_min,
                    r.r_max,
                    r.c_min,
                    r.c_max,
                    r.deadline,
                    r.priority,
                    r.ht,
                    r.ect,
                    r.lct,
                    r.bcrt,
                    r.wcrt,
                    r.miss
                )
                .unwrap();
            }
            let s = &file.summary;
            out.push('\n');
            writeln!(out, "schedulable,{}", s.schedulable).unwrap();
            writeln!(out, "vertex_count,{}", s.vertex_count).unwrap();
            writeln!(out, "edge_count,{}", s.edge_count).unwrap();
            writeln!(out, "max_width,{}", s.max_width).unwrap();
            writeln!(out, "depth,{}", s.depth).unwrap();
            writeln!(out, "construct_wall_time,{:.6}", s.construct_wall_time).unwrap();
            writeln!(out, "scenario_log10,{:.6}", s.scenario_log10).unwrap();
            out
        }
    }
}
