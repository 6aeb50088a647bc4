//! Exact solver for directed Steiner linkage: pick a cheapest edge set `K`
//! so that a bijection pairs every source-terminal occurrence to a target
//! occurrence through a path inside `K`.
//!
//! The solver works over the metric closure: it enumerates forest patterns
//! on the distinct terminal vertices, derives the flow each pattern edge
//! must carry from the cut balances, embeds the pattern into the closure by
//! tree dynamic programming, and expands the winning closure edges back
//! into shortest paths. A subset-enumeration oracle double-checks the whole
//! pipeline on small instances.

mod pattern;

pub use pattern::{embed_pattern, enumerate_patterns, pattern_feasible, ForestPattern};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flow::{cancel_opposite_flow, route_balances, trace_unit_path, FlowNetwork};
use crate::graph::{dijkstra, EdgeId, VertexId};
use pattern::{enumerate_structures, forced_orientation, PatternStructure};

/// A directed Steiner linkage instance: a weighted graph, source and target
/// multisets of equal size, and a budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslInstance {
    directed: bool,
    n: u32,
    edges: Vec<DslEdge>,
    sources: Vec<VertexId>,
    targets: Vec<VertexId>,
    budget: u64,
}

/// One linkage edge; ids are arbitrary but unique (the fault-tolerant path
/// solver keeps the ids of the originating instance).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DslEdge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    TerminalCountMismatch { sources: usize, targets: usize },
    VertexOutOfRange { vertex: VertexId },
    SelfLoop { edge: usize },
    DuplicateEdgeId { id: EdgeId },
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::TerminalCountMismatch { sources, targets } => {
                write!(f, "|S| = {sources} but |T| = {targets}")
            }
            DslError::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            DslError::SelfLoop { edge } => write!(f, "edge {edge}: self-loop"),
            DslError::DuplicateEdgeId { id } => write!(f, "duplicate edge id {id}"),
        }
    }
}

impl DslInstance {
    /// Edges as `(tail, head, weight)`; ids are assigned 1..m in order.
    /// Weights may be zero.
    pub fn new(
        directed: bool,
        n: u32,
        edges: &[(VertexId, VertexId, u64)],
        sources: Vec<VertexId>,
        targets: Vec<VertexId>,
        budget: u64,
    ) -> Result<Self, DslError> {
        let with_ids: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(tail, head, weight))| (EdgeId(i as u32 + 1), tail, head, weight))
            .collect();
        Self::with_edge_ids(directed, n, &with_ids, sources, targets, budget)
    }

    /// Same as [`DslInstance::new`] but with caller-chosen edge ids.
    pub fn with_edge_ids(
        directed: bool,
        n: u32,
        edges: &[(EdgeId, VertexId, VertexId, u64)],
        sources: Vec<VertexId>,
        targets: Vec<VertexId>,
        budget: u64,
    ) -> Result<Self, DslError> {
        if sources.len() != targets.len() {
            return Err(DslError::TerminalCountMismatch {
                sources: sources.len(),
                targets: targets.len(),
            });
        }
        for &v in sources.iter().chain(&targets) {
            if v == 0 || v > n {
                return Err(DslError::VertexOutOfRange { vertex: v });
            }
        }
        let mut ids = alloc::collections::BTreeSet::new();
        let mut list = Vec::with_capacity(edges.len());
        for (i, &(id, tail, head, weight)) in edges.iter().enumerate() {
            if tail == head {
                return Err(DslError::SelfLoop { edge: i + 1 });
            }
            for &v in &[tail, head] {
                if v == 0 || v > n {
                    return Err(DslError::VertexOutOfRange { vertex: v });
                }
            }
            if !ids.insert(id) {
                return Err(DslError::DuplicateEdgeId { id });
            }
            list.push(DslEdge {
                id,
                tail,
                head,
                weight,
            });
        }
        Ok(DslInstance {
            directed,
            n,
            edges: list,
            sources,
            targets,
            budget,
        })
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[DslEdge] {
        &self.edges
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Same graph with different terminal multisets.
    pub fn with_terminals(
        &self,
        sources: Vec<VertexId>,
        targets: Vec<VertexId>,
        budget: u64,
    ) -> Result<Self, DslError> {
        let mut copy = self.clone();
        if sources.len() != targets.len() {
            return Err(DslError::TerminalCountMismatch {
                sources: sources.len(),
                targets: targets.len(),
            });
        }
        for &v in sources.iter().chain(&targets) {
            if v == 0 || v > self.n {
                return Err(DslError::VertexOutOfRange { vertex: v });
            }
        }
        copy.sources = sources;
        copy.targets = targets;
        copy.budget = budget;
        Ok(copy)
    }
}

/// A linkage solution: the chosen edges, the occurrence pairing, and the
/// cost of the distinct-edge union. `over_budget` marks optima above the
/// instance budget, which callers may still want to inspect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslSolution {
    pub edges: Vec<EdgeId>,
    /// Pairs of indices into the instance's source and target multisets.
    pub pairing: Vec<(usize, usize)>,
    pub cost: u64,
    pub over_budget: bool,
}

/// The complete auxiliary graph whose edge weights are shortest-path
/// distances of the base graph, with enough bookkeeping to expand each
/// closure edge back into one shortest underlying path.
#[derive(Debug, Clone)]
pub struct MetricClosure {
    n: usize,
    directed: bool,
    dist: Vec<Vec<Option<u64>>>,
    pred: Vec<Vec<Option<usize>>>,
}

impl MetricClosure {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// `w'(u, v)`: the distance from `u` to `v`, `None` when unreachable.
    pub fn dist(&self, u: VertexId, v: VertexId) -> Option<u64> {
        self.dist[u as usize][v as usize]
    }

    /// One shortest underlying path realizing the closure edge `(u, v)`, as
    /// edge ids in path order; empty when `u == v`.
    pub fn expand(&self, inst: &DslInstance, u: VertexId, v: VertexId) -> Option<Vec<EdgeId>> {
        self.dist(u, v)?;
        let mut ids = Vec::new();
        let mut cur = v;
        while cur != u {
            let idx = self.pred[u as usize][cur as usize].expect("reached vertex has predecessor");
            let e = &inst.edges()[idx];
            cur = if e.head == cur { e.tail } else { e.head };
            ids.push(e.id);
        }
        ids.reverse();
        Some(ids)
    }
}

/// All-pairs shortest distances of the instance graph, one single-source
/// run per vertex.
pub fn metric_closure(inst: &DslInstance) -> MetricClosure {
    let n = inst.vertex_count() as usize;
    let mut adj: Vec<Vec<(VertexId, u64, EdgeId)>> = vec![Vec::new(); n + 1];
    for (idx, e) in inst.edges().iter().enumerate() {
        // carry the edge *index* through the shared dijkstra in the id slot
        adj[e.tail as usize].push((e.head, e.weight, EdgeId(idx as u32)));
        if !inst.directed() {
            adj[e.head as usize].push((e.tail, e.weight, EdgeId(idx as u32)));
        }
    }
    let mut dist = vec![vec![None; n + 1]; n + 1];
    let mut pred = vec![vec![None; n + 1]; n + 1];
    for u in 1..=n {
        let (d, p) = dijkstra(n, u as VertexId, &adj);
        for v in 1..=n {
            dist[u][v] = d[v].finite();
            pred[u][v] = p[v].map(|id| id.0 as usize);
        }
    }
    MetricClosure {
        n,
        directed: inst.directed(),
        dist,
        pred,
    }
}

/// Removes matching occurrences of each vertex from both multisets, lowest
/// indices first; the leftover multisets have disjoint supports.
pub fn cancel_common(sources: &[VertexId], targets: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let (s_idx, t_idx) = cancel_common_indexed(sources, targets);
    (
        s_idx.iter().map(|&i| sources[i]).collect(),
        t_idx.iter().map(|&i| targets[i]).collect(),
    )
}

/// Indices of the surviving occurrences after cancellation.
fn cancel_common_indexed(sources: &[VertexId], targets: &[VertexId]) -> (Vec<usize>, Vec<usize>) {
    let mut target_count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &v in targets {
        *target_count.entry(v).or_default() += 1;
    }
    let mut cancel: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut s_keep = Vec::new();
    for (i, &v) in sources.iter().enumerate() {
        let budget = target_count.get(&v).copied().unwrap_or(0);
        let cancelled = cancel.entry(v).or_default();
        if *cancelled < budget {
            *cancelled += 1;
        } else {
            s_keep.push(i);
        }
    }
    let mut t_keep = Vec::new();
    let mut used: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, &v) in targets.iter().enumerate() {
        let quota = cancel.get(&v).copied().unwrap_or(0);
        let u = used.entry(v).or_default();
        if *u < quota {
            *u += 1;
        } else {
            t_keep.push(i);
        }
    }
    (s_keep, t_keep)
}

/// Whether the supplies and demands given by the multisets can be routed
/// over the listed arcs with unlimited capacities, which is equivalent to
/// the existence of the required occurrence bijection.
pub fn check_linkage_feasible(
    arcs: &[(VertexId, VertexId)],
    sources: &[VertexId],
    targets: &[VertexId],
    directed: bool,
) -> bool {
    assert_eq!(sources.len(), targets.len());
    let (s_rem, t_rem) = cancel_common(sources, targets);
    if s_rem.is_empty() {
        return true;
    }
    let max_vertex = arcs
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .chain(s_rem.iter().copied())
        .chain(t_rem.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let mut net = FlowNetwork::new(max_vertex + 1);
    let cap = s_rem.len() as u64;
    for &(u, v) in arcs {
        net.add_arc(u as usize, v as usize, cap, 0);
        if !directed {
            net.add_arc(v as usize, u as usize, cap, 0);
        }
    }
    for &v in &s_rem {
        net.set_balance(v as usize, net.balances()[v as usize] + 1);
    }
    for &v in &t_rem {
        net.set_balance(v as usize, net.balances()[v as usize] - 1);
    }
    route_balances(&net).is_some()
}

/// Reusable state for repeated linkage solves over the same graph: the
/// pattern catalogue only depends on the terminal count, so guess loops
/// share it across thousands of terminal multisets.
#[derive(Debug, Default)]
pub struct DslScratch {
    catalog: BTreeMap<usize, Vec<PatternStructure>>,
}

impl DslScratch {
    pub fn new() -> Self {
        DslScratch::default()
    }

    fn structures(&mut self, terminal_count: usize) -> &[PatternStructure] {
        self.catalog.entry(terminal_count).or_insert_with(|| {
            enumerate_structures(terminal_count, terminal_count.saturating_sub(2))
        })
    }
}

/// Optimum linkage cost and edge set for the given terminal multisets over
/// a precomputed closure; `None` when no edge set links them at any cost.
pub(crate) fn solve_multiset(
    inst: &DslInstance,
    closure: &MetricClosure,
    sources: &[VertexId],
    targets: &[VertexId],
    scratch: &mut DslScratch,
) -> Option<(u64, Vec<EdgeId>)> {
    let (s_rem, t_rem) = cancel_common(sources, targets);
    if s_rem.is_empty() {
        return Some((0, Vec::new()));
    }

    // distinct terminal vertices with their net balances
    let mut balance_map: BTreeMap<VertexId, i64> = BTreeMap::new();
    for &v in &s_rem {
        *balance_map.entry(v).or_default() += 1;
    }
    for &v in &t_rem {
        *balance_map.entry(v).or_default() -= 1;
    }
    let binding: Vec<VertexId> = balance_map.keys().copied().collect();
    let balances: Vec<i64> = balance_map.values().copied().collect();
    let r = binding.len();

    // cheap feasibility gate: supplies must be routable to demands along
    // reachable pairs; equivalent to linkage feasibility over the full graph
    {
        let mut net = FlowNetwork::new(r.max(1));
        let total: i64 = balances.iter().filter(|&&b| b > 0).sum();
        for (i, &b) in balances.iter().enumerate() {
            net.set_balance(i, b);
        }
        for i in 0..r {
            if balances[i] <= 0 {
                continue;
            }
            for j in 0..r {
                if balances[j] < 0 && closure.dist(binding[i], binding[j]).is_some() {
                    net.add_arc(i, j, total as u64, 0);
                }
            }
        }
        route_balances(&net)?;
    }

    let directed = closure.directed();
    let mut best: Option<(u64, &PatternStructure, Vec<bool>, Vec<VertexId>)> = None;
    // the catalogue borrows from scratch for the whole search
    let structures = scratch.structures(r);
    for structure in structures {
        let Some(orientation) = forced_orientation(structure, r, &balances) else {
            continue;
        };
        let candidate = ForestPattern {
            terminal_count: r,
            steiner_count: structure.steiner_count,
            edges: structure.edges.clone(),
            orientation: directed.then(|| orientation.clone()),
            balances: balances.clone(),
        };
        if let Some((cost, assignment)) = embed_pattern(&candidate, closure, &binding) {
            if best.as_ref().is_none_or(|(b, ..)| cost < *b) {
                best = Some((cost, structure, orientation, assignment));
            }
        }
    }
    let (dp_cost, structure, orientation, assignment) =
        best.expect("feasible linkage always admits a forest pattern");

    // expand closure edges into underlying shortest paths, union the ids
    let mut ids: Vec<EdgeId> = Vec::new();
    for (e, &(a, b)) in structure.edges.iter().enumerate() {
        let (from, to) = if orientation[e] {
            (assignment[a], assignment[b])
        } else {
            (assignment[b], assignment[a])
        };
        let path = closure
            .expand(inst, from, to)
            .expect("embedded edges are reachable");
        ids.extend(path);
    }
    ids.sort_unstable();
    ids.dedup();
    let cost: u64 = inst
        .edges()
        .iter()
        .filter(|e| ids.binary_search(&e.id).is_ok())
        .map(|e| e.weight)
        .sum();
    debug_assert!(cost <= dp_cost);
    Some((cost, ids))
}

/// Minimum-cost solution, expanded back into original edges; `None` iff no
/// solution of any cost exists. Optima above the budget come back tagged
/// `over_budget` instead of suppressed.
pub fn solve_dsl(inst: &DslInstance) -> Option<DslSolution> {
    let closure = metric_closure(inst);
    let mut scratch = DslScratch::new();
    let (cost, edges) =
        solve_multiset(inst, &closure, inst.sources(), inst.targets(), &mut scratch)?;
    let pairing = extract_pairing(inst, &edges);
    Some(DslSolution {
        edges,
        pairing,
        cost,
        over_budget: cost > inst.budget(),
    })
}

/// Pairs every source occurrence with a target occurrence reachable through
/// the solution edges: cancelled occurrences self-pair, the rest follow a
/// flow decomposition over the chosen edges.
fn extract_pairing(inst: &DslInstance, solution_edges: &[EdgeId]) -> Vec<(usize, usize)> {
    let sources = inst.sources();
    let targets = inst.targets();
    let (s_keep, t_keep) = cancel_common_indexed(sources, targets);
    let mut pairing: Vec<(usize, usize)> = Vec::with_capacity(sources.len());

    // self-pairs for the cancelled occurrences, lowest indices first
    {
        let kept_s: alloc::collections::BTreeSet<usize> = s_keep.iter().copied().collect();
        let kept_t: alloc::collections::BTreeSet<usize> = t_keep.iter().copied().collect();
        let mut t_queue: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, &v) in targets.iter().enumerate() {
            if !kept_t.contains(&i) {
                t_queue.entry(v).or_default().push(i);
            }
        }
        for queue in t_queue.values_mut() {
            queue.reverse();
        }
        for (i, &v) in sources.iter().enumerate() {
            if !kept_s.contains(&i) {
                let j = t_queue
                    .get_mut(&v)
                    .and_then(Vec::pop)
                    .expect("cancellation is symmetric");
                pairing.push((i, j));
            }
        }
    }

    if s_keep.is_empty() {
        pairing.sort_unstable();
        return pairing;
    }

    // route the remaining supplies over the solution edges and decompose
    let n = inst.vertex_count() as usize;
    let mut net = FlowNetwork::new(n + 1);
    let cap = s_keep.len() as u64;
    for e in inst.edges() {
        if solution_edges.binary_search(&e.id).is_err() {
            continue;
        }
        if inst.directed() {
            net.add_arc(e.tail as usize, e.head as usize, cap, 0);
        } else {
            net.add_undirected(e.tail as usize, e.head as usize, cap, 0, None);
        }
    }
    let mut demand_left = vec![0i64; n + 1];
    for &i in &s_keep {
        let v = sources[i] as usize;
        net.set_balance(v, net.balances()[v] + 1);
    }
    for &i in &t_keep {
        let v = targets[i] as usize;
        net.set_balance(v, net.balances()[v] - 1);
        demand_left[v] += 1;
    }
    let mut flow = route_balances(&net)
        .expect("solution edges admit the linkage")
        .flow;
    cancel_opposite_flow(&net, &mut flow);

    let mut t_queue: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for &i in t_keep.iter().rev() {
        t_queue.entry(targets[i]).or_default().push(i);
    }
    for &i in &s_keep {
        let start = sources[i] as usize;
        let path = trace_unit_path(&net, &mut flow, start, &|v| demand_left[v] > 0)
            .expect("flow decomposes into supply-demand paths");
        let end = path
            .last()
            .map(|&a| net.arcs()[a].head)
            .expect("post-cancellation supplies differ from demands");
        demand_left[end] -= 1;
        let j = t_queue
            .get_mut(&(end as VertexId))
            .and_then(Vec::pop)
            .expect("demand occurrence available");
        pairing.push((i, j));
    }
    pairing.sort_unstable();
    pairing
}

/// Size guard for the brute-force oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuardError {
    pub limit: usize,
    pub actual: usize,
}

impl fmt::Display for SizeGuardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size guard exceeded: {} > {}", self.actual, self.limit)
    }
}

const DSL_ORACLE_EDGE_LIMIT: usize = 14;

/// Exact optimum by enumerating edge subsets in nondecreasing cost and
/// testing linkage feasibility; independent of the pattern pipeline.
pub fn dsl_oracle(inst: &DslInstance) -> Result<Option<u64>, SizeGuardError> {
    dsl_oracle_filtered(inst, |_| true)
}

/// Like [`dsl_oracle`] but restricted to subsets whose underlying
/// undirected simple graph is acyclic.
pub fn dsl_oracle_forest(inst: &DslInstance) -> Result<Option<u64>, SizeGuardError> {
    let n = inst.vertex_count() as usize;
    dsl_oracle_filtered(inst, move |edges: &[&DslEdge]| {
        let mut pairs: Vec<(VertexId, VertexId)> = edges
            .iter()
            .map(|e| (e.tail.min(e.head), e.tail.max(e.head)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    })
}

fn dsl_oracle_filtered(
    inst: &DslInstance,
    admit: impl Fn(&[&DslEdge]) -> bool,
) -> Result<Option<u64>, SizeGuardError> {
    let m = inst.edges().len();
    if m > DSL_ORACLE_EDGE_LIMIT {
        return Err(SizeGuardError {
            limit: DSL_ORACLE_EDGE_LIMIT,
            actual: m,
        });
    }
    let mut masks: Vec<(u64, u32)> = (0..1u32 << m)
        .map(|mask| {
            let cost = inst
                .edges()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.weight)
                .sum();
            (cost, mask)
        })
        .collect();
    masks.sort_unstable_by_key(|&(cost, mask)| (cost, mask.count_ones(), mask));
    for (cost, mask) in masks {
        let chosen: Vec<&DslEdge> = inst
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        if !admit(&chosen) {
            continue;
        }
        let arcs: Vec<(VertexId, VertexId)> = chosen.iter().map(|e| (e.tail, e.head)).collect();
        if check_linkage_feasible(&arcs, inst.sources(), inst.targets(), inst.directed()) {
            return Ok(Some(cost));
        }
    }
    Ok(None)
}
