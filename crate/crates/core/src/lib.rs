//! Exact response-time analysis of non-preemptive job sets on a uniprocessor,
//! based on schedule-abstraction graphs (SAGs).
//!
//! A SAG is a leveled directed acyclic graph whose edges are job dispatches
//! and whose vertices carry the interval of possible finish times of the path
//! so far. Three construction algorithms are provided, differing in how they
//! treat hybrid-triggered (HT) jobs, i.e. jobs that may be absent at runtime:
//!
//! * **original** — ignores absence altogether,
//! * **extended** — widens every HT job's minimum execution time to zero,
//! * **hybrid** — splits every absence into a separate state, keeping the
//!   analysis exact.
//!
//! The crate also ships a brute-force oracle ([`oracle`]) that enumerates
//! every execution scenario of a small job set and checks a constructed graph
//! for exactness, a reproducible job-set generator ([`generator`]), scenario
//! counting and idle-time accounting ([`analysis`]), and plain-text/DOT/CSV/JSON
//! serialization ([`io`]).

pub mod analysis;
pub mod constructor;
pub mod generator;
pub mod io;
pub mod model;
pub mod oracle;
pub mod scheduler;

#[cfg(test)]
pub(crate) mod testdata;

pub use analysis::AnalysisReport;
pub use constructor::{construct, ConstructOptions, SagGraph};
pub use model::{Job, JobId, JobSet, PriorityPolicy, Time};
pub use scheduler::{EdgeKind, Variant};
