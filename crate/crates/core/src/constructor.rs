//! Breadth-first SAG construction, level by level: expand every frontier
//! state, then merge same-depth states that account for the same jobs and
//! have intersecting finish intervals.

use std::collections::HashMap;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::model::{JobId, JobSet, PriorityPolicy, Time};
use crate::scheduler::{eligible_expansions, EdgeKind, Variant};

/// Fixed-width bit set of job ids (1-based, dense). Cheap to hash and
/// compare, which the merge phase relies on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JobMask {
    blocks: SmallVec<[u64; 4]>,
}

impl JobMask {
    pub fn empty(num_jobs: usize) -> Self {
        JobMask {
            blocks: smallvec![0; num_jobs.div_ceil(64)],
        }
    }

    pub fn contains(&self, id: JobId) -> bool {
        let bit = (id.0 - 1) as usize;
        self.blocks[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn insert(&mut self, id: JobId) {
        let bit = (id.0 - 1) as usize;
        self.blocks[bit / 64] |= 1 << (bit % 64);
    }

    /// Copy of this mask with `id` added.
    pub fn with(&self, id: JobId) -> JobMask {
        let mut next = self.clone();
        next.insert(id);
        next
    }

    pub fn count(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }
}

/// SAG vertex: the set of jobs accounted for along the paths reaching it and
/// the interval of possible finish times of the last dispatched job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    /// 1-based index, assigned breadth-first; the root is always 1.
    pub index: u32,
    pub depth: u32,
    pub dispatched: JobMask,
    pub e: Time,
    pub l: Time,
}

/// SAG edge: one dispatch of `job` from state `from` to state `to`.
///
/// `finish_lo`/`finish_hi` are the finish interval of this particular
/// dispatch. The target state's interval is the union of the intervals of
/// all edges merged into it, so per-job completion bounds must be read from
/// edges, not from target states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub job: JobId,
    pub kind: EdgeKind,
    pub finish_lo: Time,
    pub finish_hi: Time,
}

/// A state of one level before indices are assigned, as produced by
/// expansion and consumed by the merge phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelState {
    pub dispatched: JobMask,
    pub e: Time,
    pub l: Time,
}

/// Merges any two states with identical dispatched sets and intersecting
/// intervals into one state spanning both, repeating until no pair
/// qualifies. Intervals are closed, so `[1,3]` and `[3,5]` merge but `[1,2]`
/// and `[4,5]` do not.
///
/// Returns the merged states plus, for each input position, the output
/// position it was folded into. The result is canonical: per dispatched set
/// it is the unique decomposition into maximal interval clusters, ordered by
/// the first input position of each cluster.
pub fn merge_level(states: Vec<LevelState>) -> (Vec<LevelState>, Vec<usize>) {
    let mut groups: HashMap<JobMask, Vec<usize>> = HashMap::new();
    for (pos, st) in states.iter().enumerate() {
        groups.entry(st.dispatched.clone()).or_default().push(pos);
    }

    struct Cluster {
        state: LevelState,
        members: Vec<usize>,
        rank: usize,
    }

    let mut clusters: Vec<Cluster> = Vec::new();
    for (_, mut positions) in groups {
        positions.sort_by_key(|&p| (states[p].e, states[p].l, p));
        let mut current: Option<Cluster> = None;
        for p in positions {
            let st = &states[p];
            match current.as_mut() {
                Some(c) if st.e <= c.state.l => {
                    c.state.l = c.state.l.max(st.l);
                    c.members.push(p);
                    c.rank = c.rank.min(p);
                }
                _ => {
                    if let Some(done) = current.take() {
                        clusters.push(done);
                    }
                    current = Some(Cluster {
                        state: st.clone(),
                        members: vec![p],
                        rank: p,
                    });
                }
            }
        }
        if let Some(done) = current.take() {
            clusters.push(done);
        }
    }

    clusters.sort_by_key(|c| c.rank);
    let mut remap = vec![0usize; states.len()];
    let mut merged = Vec::with_capacity(clusters.len());
    for (out_pos, cluster) in clusters.into_iter().enumerate() {
        for p in cluster.members {
            remap[p] = out_pos;
        }
        merged.push(cluster.state);
    }
    (merged, remap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Hard cap on the total number of states; construction fails loudly
    /// instead of thrashing when the state space explodes.
    pub state_cap: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            state_cap: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("state cap of {cap} states exceeded while building depth {depth} ({states} states)")]
    StateCapExceeded { cap: usize, depth: u32, states: usize },
}

/// Fully constructed SAG. States are stored level by level; indices are
/// breadth-first and 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SagGraph {
    variant: Variant,
    policy: PriorityPolicy,
    states: Vec<State>,
    level_starts: Vec<usize>,
    edges: Vec<Edge>,
}

impl SagGraph {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn policy(&self) -> PriorityPolicy {
        self.policy
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn state(&self, index: u32) -> &State {
        &self.states[(index - 1) as usize]
    }

    /// Number of levels minus one; equals the job count by construction.
    pub fn depth(&self) -> u32 {
        (self.level_starts.len() - 2) as u32
    }

    pub fn level(&self, depth: u32) -> &[State] {
        let d = depth as usize;
        &self.states[self.level_starts[d]..self.level_starts[d + 1]]
    }

    pub fn width(&self, depth: u32) -> usize {
        self.level(depth).len()
    }

    pub fn max_width(&self) -> usize {
        (0..=self.depth()).map(|d| self.width(d)).max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Every root-to-leaf dispatch sequence, in depth-first edge order.
    /// Intended for small graphs (tests, the exactness oracle); the number
    /// of paths can grow combinatorially.
    pub fn root_to_leaf_paths(&self) -> Vec<Vec<(JobId, EdgeKind)>> {
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); self.states.len()];
        for (i, edge) in self.edges.iter().enumerate() {
            outgoing[(edge.from - 1) as usize].push(i);
        }
        let mut paths = Vec::new();
        // stack of (state index, next outgoing slot), labels built alongside
        let mut stack: Vec<(u32, usize)> = vec![(1, 0)];
        let mut labels: Vec<(JobId, EdgeKind)> = Vec::new();
        while let Some((index, slot)) = stack.pop() {
            let out = &outgoing[(index - 1) as usize];
            if out.is_empty() && slot == 0 {
                paths.push(labels.clone());
                labels.pop();
                continue;
            }
            if slot == out.len() {
                labels.pop();
                continue;
            }
            stack.push((index, slot + 1));
            let edge = &self.edges[out[slot]];
            labels.push((edge.job, edge.kind));
            stack.push((edge.to, 0));
        }
        paths
    }
}

/// Running totals kept instead of the graph itself when only the analysis
/// outcome is needed (the sweep harness); memory stays proportional to the
/// widest level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructStats {
    variant: Variant,
    policy: PriorityPolicy,
    /// Per job (by id order): min/max finish over its execute dispatches.
    per_job: Vec<Option<(Time, Time)>>,
    vertex_count: usize,
    edge_count: usize,
    max_width: usize,
    depth: u32,
}

impl ConstructStats {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn policy(&self) -> PriorityPolicy {
        self.policy
    }

    pub fn completion_bounds(&self, job: JobId) -> Option<(Time, Time)> {
        self.per_job[(job.0 - 1) as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_width(&self) -> usize {
        self.max_width
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

trait Sink {
    fn on_level(&mut self, states: &[State], edges: Vec<Edge>);
}

struct GraphSink {
    states: Vec<State>,
    level_starts: Vec<usize>,
    edges: Vec<Edge>,
}

impl Sink for GraphSink {
    fn on_level(&mut self, states: &[State], edges: Vec<Edge>) {
        self.states.extend_from_slice(states);
        self.level_starts.push(self.states.len());
        self.edges.extend(edges);
    }
}

struct StatsSink {
    per_job: Vec<Option<(Time, Time)>>,
    vertex_count: usize,
    edge_count: usize,
    max_width: usize,
    depth: u32,
}

impl Sink for StatsSink {
    fn on_level(&mut self, states: &[State], edges: Vec<Edge>) {
        self.vertex_count += states.len();
        self.edge_count += edges.len();
        self.max_width = self.max_width.max(states.len());
        if let Some(st) = states.first() {
            self.depth = st.depth;
        }
        for edge in &edges {
            if edge.kind != EdgeKind::Execute {
                continue;
            }
            let slot = &mut self.per_job[(edge.job.0 - 1) as usize];
            *slot = match *slot {
                None => Some((edge.finish_lo, edge.finish_hi)),
                Some((lo, hi)) => Some((lo.min(edge.finish_lo), hi.max(edge.finish_hi))),
            };
        }
    }
}

fn run<S: Sink>(
    js: &JobSet,
    policy: PriorityPolicy,
    variant: Variant,
    opts: ConstructOptions,
    sink: &mut S,
) -> Result<(), ConstructError> {
    let m = js.len();
    let mut frontier = vec![State {
        index: 1,
        depth: 0,
        dispatched: JobMask::empty(m),
        e: 0,
        l: 0,
    }];
    let mut total = 1usize;
    let mut next_index = 2u32;

    for depth in 0..m as u32 {
        let mut candidates: Vec<LevelState> = Vec::new();
        let mut drafts: Vec<Edge> = Vec::new();
        for st in &frontier {
            for x in eligible_expansions(st, js, policy, variant) {
                candidates.push(LevelState {
                    dispatched: st.dispatched.with(x.job),
                    e: x.finish_lo,
                    l: x.finish_hi,
                });
                drafts.push(Edge {
                    from: st.index,
                    to: 0, // filled in after the merge
                    job: x.job,
                    kind: x.kind,
                    finish_lo: x.finish_lo,
                    finish_hi: x.finish_hi,
                });
            }
        }

        let (merged, remap) = merge_level(candidates);
        total += merged.len();
        if total > opts.state_cap {
            return Err(ConstructError::StateCapExceeded {
                cap: opts.state_cap,
                depth: depth + 1,
                states: total,
            });
        }

        let states: Vec<State> = merged
            .into_iter()
            .enumerate()
            .map(|(k, ls)| State {
                index: next_index + k as u32,
                depth: depth + 1,
                dispatched: ls.dispatched,
                e: ls.e,
                l: ls.l,
            })
            .collect();
        for (pos, edge) in drafts.iter_mut().enumerate() {
            edge.to = next_index + remap[pos] as u32;
        }
        next_index += states.len() as u32;

        // Progress is guaranteed: some job is always eligible, so no level
        // before depth m can come out empty.
        debug_assert!(!states.is_empty());
        sink.on_level(&states, drafts);
        frontier = states;
    }
    Ok(())
}

/// Builds the full SAG for `js` under `policy` with the given construction
/// algorithm and default resource limits.
pub fn construct(
    js: &JobSet,
    policy: PriorityPolicy,
    variant: Variant,
) -> Result<SagGraph, ConstructError> {
    construct_with(js, policy, variant, ConstructOptions::default())
}

pub fn construct_with(
    js: &JobSet,
    policy: PriorityPolicy,
    variant: Variant,
    opts: ConstructOptions,
) -> Result<SagGraph, ConstructError> {
    let mut sink = GraphSink {
        states: vec![State {
            index: 1,
            depth: 0,
            dispatched: JobMask::empty(js.len()),
            e: 0,
            l: 0,
        }],
        level_starts: vec![0, 1],
        edges: Vec::new(),
    };
    run(js, policy, variant, opts, &mut sink)?;
    Ok(SagGraph {
        variant,
        policy,
        states: sink.states,
        level_starts: sink.level_starts,
        edges: sink.edges,
    })
}

/// Like [`construct_with`], but retains only running totals and per-job
/// completion bounds instead of the graph.
pub fn construct_stats(
    js: &JobSet,
    policy: PriorityPolicy,
    variant: Variant,
    opts: ConstructOptions,
) -> Result<ConstructStats, ConstructError> {
    let mut sink = StatsSink {
        per_job: vec![None; js.len()],
        vertex_count: 1,
        edge_count: 0,
        max_width: 1,
        depth: 0,
    };
    run(js, policy, variant, opts, &mut sink)?;
    Ok(ConstructStats {
        variant,
        policy,
        per_job: sink.per_job,
        vertex_count: sink.vertex_count,
        edge_count: sink.edge_count,
        max_width: sink.max_width,
        depth: sink.depth,
    })
}
