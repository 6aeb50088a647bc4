//! Instance representation and shortest-path primitives shared by all
//! solvers.
//!
//! Vertices and edge ids are 1-based to match the on-disk instance format.
//! Instances are immutable after construction; every operation here is a
//! pure function.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

/// 1-based vertex index.
pub type VertexId = u32;

/// 1-based edge identifier, unique within its instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether an edge can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Never fails; may be shared by all redundant paths.
    Safe,
    /// May fail; carries at most one redundant path.
    Vulnerable,
}

/// A single edge of an instance. For undirected instances `tail`/`head` are
/// just the two stored endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: u64,
    pub kind: EdgeKind,
}

/// A cost or distance that may be infinite (unreachable).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtCost {
    Finite(u64),
    Infinite,
}

impl ExtCost {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtCost::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtCost::Finite(c) => Some(c),
            ExtCost::Infinite => None,
        }
    }
}

impl PartialOrd for ExtCost {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtCost {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        match (self, other) {
            (ExtCost::Finite(a), ExtCost::Finite(b)) => a.cmp(b),
            (ExtCost::Finite(_), ExtCost::Infinite) => core::cmp::Ordering::Less,
            (ExtCost::Infinite, ExtCost::Finite(_)) => core::cmp::Ordering::Greater,
            (ExtCost::Infinite, ExtCost::Infinite) => core::cmp::Ordering::Equal,
        }
    }
}

impl Add<u64> for ExtCost {
    type Output = ExtCost;
    fn add(self, rhs: u64) -> ExtCost {
        match self {
            ExtCost::Finite(c) => ExtCost::Finite(c + rhs),
            ExtCost::Infinite => ExtCost::Infinite,
        }
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(c) => write!(f, "{c}"),
            ExtCost::Infinite => write!(f, "inf"),
        }
    }
}

/// Violation of an instance invariant, reported at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    ZeroWeight { edge: usize },
    SelfLoop { edge: usize },
    VertexOutOfRange { edge: usize, vertex: VertexId },
    TerminalOutOfRange { vertex: VertexId },
    SourceEqualsSink,
    TooFewVertices,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::ZeroWeight { edge } => write!(f, "edge {edge}: zero weight"),
            InstanceError::SelfLoop { edge } => write!(f, "edge {edge}: self-loop"),
            InstanceError::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: vertex {vertex} out of range")
            }
            InstanceError::TerminalOutOfRange { vertex } => {
                write!(f, "terminal vertex {vertex} out of range")
            }
            InstanceError::SourceEqualsSink => write!(f, "s and t must differ"),
            InstanceError::TooFewVertices => write!(f, "instance needs at least two vertices"),
        }
    }
}

/// A fault-tolerant path instance: an edge-weighted graph with safe and
/// vulnerable edges, terminals `s`, `t`, required redundancy `k`, and
/// budget `ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtpInstance {
    directed: bool,
    n: u32,
    edges: Vec<Edge>,
    s: VertexId,
    t: VertexId,
    k: u32,
    ell: u64,
}

impl FtpInstance {
    /// Builds an instance from `(tail, head, weight, kind)` tuples; edge ids
    /// are assigned 1..m in input order. Parallel edges are permitted,
    /// self-loops and zero weights are not.
    pub fn new(
        directed: bool,
        n: u32,
        edge_list: &[(VertexId, VertexId, u64, EdgeKind)],
        s: VertexId,
        t: VertexId,
        k: u32,
        ell: u64,
    ) -> Result<Self, InstanceError> {
        if n < 2 {
            return Err(InstanceError::TooFewVertices);
        }
        if s == t {
            return Err(InstanceError::SourceEqualsSink);
        }
        for &v in &[s, t] {
            if v == 0 || v > n {
                return Err(InstanceError::TerminalOutOfRange { vertex: v });
            }
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for (i, &(tail, head, weight, kind)) in edge_list.iter().enumerate() {
            let edge = i + 1;
            if weight == 0 {
                return Err(InstanceError::ZeroWeight { edge });
            }
            if tail == head {
                return Err(InstanceError::SelfLoop { edge });
            }
            for &v in &[tail, head] {
                if v == 0 || v > n {
                    return Err(InstanceError::VertexOutOfRange { edge, vertex: v });
                }
            }
            edges.push(Edge {
                id: EdgeId(edge as u32),
                tail,
                head,
                weight,
                kind,
            });
        }
        Ok(FtpInstance {
            directed,
            n,
            edges,
            s,
            t,
            k,
            ell,
        })
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Panics if the id does not belong to this instance.
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[(id.0 - 1) as usize]
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Same graph and terminals with a different budget.
    pub fn with_ell(&self, ell: u64) -> FtpInstance {
        let mut copy = self.clone();
        copy.ell = ell;
        copy
    }

    /// Same graph and terminals with a different redundancy.
    pub fn with_k(&self, k: u32) -> FtpInstance {
        let mut copy = self.clone();
        copy.k = k;
        copy
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        id.0 >= 1 && (id.0 as usize) <= self.edges.len()
    }

    /// Ids of all edges of the given kind, ascending.
    pub fn edge_ids_of_kind(&self, kind: EdgeKind) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.id)
            .collect()
    }

    pub fn safe_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Safe)
            .count()
    }

    pub fn vulnerable_count(&self) -> usize {
        self.edge_count() - self.safe_count()
    }

    pub fn edge_set_cost(&self, set: &EdgeSet) -> u64 {
        set.ids().iter().map(|&id| self.edge(id).weight).sum()
    }
}

/// A sorted, duplicate-free set of edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct EdgeSet {
    ids: Vec<EdgeId>,
}

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet { ids: Vec::new() }
    }

    /// Sorts and deduplicates the given ids.
    pub fn from_ids(mut ids: Vec<EdgeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        EdgeSet { ids }
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut ids = self.ids.clone();
        ids.extend_from_slice(&other.ids);
        EdgeSet::from_ids(ids)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ids.iter().copied()
    }

    /// True when every id is valid for `inst`.
    pub fn valid_for(&self, inst: &FtpInstance) -> bool {
        self.ids.iter().all(|&id| inst.contains_edge(id))
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::from_ids(iter.into_iter().collect())
    }
}

/// Restriction of traversal to an edge kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFilter {
    All,
    SafeOnly,
    VulnerableOnly,
}

impl EdgeFilter {
    pub fn allows(self, kind: EdgeKind) -> bool {
        match self {
            EdgeFilter::All => true,
            EdgeFilter::SafeOnly => kind == EdgeKind::Safe,
            EdgeFilter::VulnerableOnly => kind == EdgeKind::Vulnerable,
        }
    }
}

/// Single-source shortest distances with predecessor edges.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    source: VertexId,
    dist: Vec<ExtCost>,
    pred: Vec<Option<EdgeId>>,
}

impl DistanceTable {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn dist(&self, v: VertexId) -> ExtCost {
        self.dist[v as usize]
    }

    pub fn predecessor_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.pred[v as usize]
    }

    /// Edge ids of one shortest path from the source to `v`, in path order.
    /// `None` when `v` is unreachable.
    pub fn path_to(&self, v: VertexId, inst: &FtpInstance) -> Option<Vec<EdgeId>> {
        if !self.dist(v).is_finite() {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = v;
        while cur != self.source {
            let id = self.pred[cur as usize].expect("reached vertex has a predecessor");
            let e = inst.edge(id);
            cur = if e.head == cur { e.tail } else { e.head };
            path.push(id);
        }
        path.reverse();
        Some(path)
    }
}

/// Exact shortest weighted distances from `source` over the edges passing
/// `filter`. Undirected instances are traversed in both directions;
/// unreachable vertices report `Infinite`.
pub fn shortest_distances(
    inst: &FtpInstance,
    source: VertexId,
    filter: EdgeFilter,
) -> DistanceTable {
    let n = inst.vertex_count() as usize;
    let mut adj: Vec<Vec<(VertexId, u64, EdgeId)>> = vec![Vec::new(); n + 1];
    for e in inst.edges() {
        if !filter.allows(e.kind) {
            continue;
        }
        adj[e.tail as usize].push((e.head, e.weight, e.id));
        if !inst.directed() {
            adj[e.head as usize].push((e.tail, e.weight, e.id));
        }
    }
    let (dist, pred) = dijkstra(n, source, &adj);
    DistanceTable { source, dist, pred }
}

/// Binary-heap Dijkstra over a prebuilt adjacency; shared with the metric
/// closure. `adj` is 1-based like everything else.
pub(crate) fn dijkstra(
    n: usize,
    source: VertexId,
    adj: &[Vec<(VertexId, u64, EdgeId)>],
) -> (Vec<ExtCost>, Vec<Option<EdgeId>>) {
    use alloc::collections::BinaryHeap;
    use core::cmp::Reverse;

    let mut dist = vec![ExtCost::Infinite; n + 1];
    let mut pred = vec![None; n + 1];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = ExtCost::Finite(0);
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if ExtCost::Finite(d) > dist[u as usize] {
            continue;
        }
        for &(v, w, id) in &adj[u as usize] {
            let cand = d + w;
            if ExtCost::Finite(cand) < dist[v as usize] {
                dist[v as usize] = ExtCost::Finite(cand);
                pred[v as usize] = Some(id);
                heap.push(Reverse((cand, v)));
            }
        }
    }
    (dist, pred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn mini(directed: bool, edges: &[(u32, u32, u64, EdgeKind)], n: u32) -> FtpInstance {
        FtpInstance::new(directed, n, edges, 1, n, 0, 10).unwrap()
    }

    #[test]
    fn rejects_zero_weight() {
        let err = FtpInstance::new(true, 2, &[(1, 2, 0, EdgeKind::Safe)], 1, 2, 0, 3).unwrap_err();
        assert_eq!(err, InstanceError::ZeroWeight { edge: 1 });
    }

    #[test]
    fn rejects_self_loop_and_range() {
        let err = FtpInstance::new(true, 3, &[(2, 2, 1, EdgeKind::Safe)], 1, 3, 0, 3).unwrap_err();
        assert_eq!(err, InstanceError::SelfLoop { edge: 1 });
        let err = FtpInstance::new(true, 3, &[(1, 4, 1, EdgeKind::Safe)], 1, 3, 0, 3).unwrap_err();
        assert_eq!(err, InstanceError::VertexOutOfRange { edge: 1, vertex: 4 });
        let err = FtpInstance::new(true, 3, &[(1, 2, 1, EdgeKind::Safe)], 2, 2, 0, 3).unwrap_err();
        assert_eq!(err, InstanceError::SourceEqualsSink);
    }

    #[test]
    fn single_arc_distance() {
        let inst = mini(true, &[(1, 2, 3, EdgeKind::Safe)], 2);
        let table = shortest_distances(&inst, 1, EdgeFilter::All);
        assert_eq!(table.dist(2), ExtCost::Finite(3));
        assert_eq!(table.path_to(2, &inst), Some(alloc::vec![EdgeId(1)]));
    }

    #[test]
    fn safe_filter_blocks_vulnerable_route() {
        let inst = mini(true, &[(1, 2, 1, EdgeKind::Vulnerable)], 2);
        let table = shortest_distances(&inst, 1, EdgeFilter::SafeOnly);
        assert_eq!(table.dist(2), ExtCost::Infinite);
    }

    #[test]
    fn undirected_edges_work_both_ways() {
        let inst = mini(false, &[(2, 1, 4, EdgeKind::Safe)], 2);
        let table = shortest_distances(&inst, 1, EdgeFilter::All);
        assert_eq!(table.dist(2), ExtCost::Finite(4));
    }

    /// All-simple-paths brute force used as the distance oracle.
    fn brute_force_dist(
        inst: &FtpInstance,
        from: VertexId,
        to: VertexId,
        filter: EdgeFilter,
    ) -> ExtCost {
        fn explore(
            inst: &FtpInstance,
            filter: EdgeFilter,
            cur: VertexId,
            to: VertexId,
            cost: u64,
            seen: &mut Vec<bool>,
            best: &mut ExtCost,
        ) {
            if cur == to {
                if ExtCost::Finite(cost) < *best {
                    *best = ExtCost::Finite(cost);
                }
                return;
            }
            for e in inst.edges() {
                if !filter.allows(e.kind) {
                    continue;
                }
                let next = if e.tail == cur {
                    Some(e.head)
                } else if !inst.directed() && e.head == cur {
                    Some(e.tail)
                } else {
                    None
                };
                if let Some(v) = next {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        explore(inst, filter, v, to, cost + e.weight, seen, best);
                        seen[v as usize] = false;
                    }
                }
            }
        }
        let mut seen = alloc::vec![false; inst.vertex_count() as usize + 1];
        seen[from as usize] = true;
        let mut best = ExtCost::Infinite;
        explore(inst, filter, from, to, 0, &mut seen, &mut best);
        best
    }

    #[test]
    fn matches_path_enumeration_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let directed = rng.gen_bool(0.5);
            let n = 6u32;
            let m = rng.gen_range(4..=10);
            let edges: Vec<_> = (0..m)
                .map(|_| {
                    let u = rng.gen_range(1..=n);
                    let mut v = rng.gen_range(1..=n);
                    while v == u {
                        v = rng.gen_range(1..=n);
                    }
                    let kind = if rng.gen_bool(0.5) {
                        EdgeKind::Safe
                    } else {
                        EdgeKind::Vulnerable
                    };
                    (u, v, rng.gen_range(1..=4u64), kind)
                })
                .collect();
            let inst = FtpInstance::new(directed, n, &edges, 1, n, 0, 10).unwrap();
            for filter in [EdgeFilter::All, EdgeFilter::SafeOnly] {
                let table = shortest_distances(&inst, 1, filter);
                for v in 1..=n {
                    assert_eq!(table.dist(v), brute_force_dist(&inst, 1, v, filter));
                }
            }
        }
    }

    #[test]
    fn safe_only_distance_dominates_unrestricted() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(3..=6);
            let m = rng.gen_range(3..=9);
            let edges: Vec<_> = (0..m)
                .map(|_| {
                    let u = rng.gen_range(1..=n);
                    let mut v = rng.gen_range(1..=n);
                    while v == u {
                        v = rng.gen_range(1..=n);
                    }
                    let kind = if rng.gen_bool(0.4) {
                        EdgeKind::Safe
                    } else {
                        EdgeKind::Vulnerable
                    };
                    (u, v, rng.gen_range(1..=4u64), kind)
                })
                .collect();
            let inst = FtpInstance::new(false, n, &edges, 1, n, 0, 10).unwrap();
            let all = shortest_distances(&inst, 1, EdgeFilter::All);
            let safe = shortest_distances(&inst, 1, EdgeFilter::SafeOnly);
            for v in 1..=n {
                assert!(safe.dist(v) >= all.dist(v));
            }
        }
    }

    #[test]
    fn predecessor_chain_respects_triangle_inequality() {
        let inst = mini(
            true,
            &[
                (1, 2, 2, EdgeKind::Safe),
                (2, 3, 2, EdgeKind::Safe),
                (1, 3, 5, EdgeKind::Vulnerable),
                (3, 4, 1, EdgeKind::Safe),
            ],
            4,
        );
        let table = shortest_distances(&inst, 1, EdgeFilter::All);
        assert_eq!(table.dist(1), ExtCost::Finite(0));
        for v in 2..=4u32 {
            if let Some(id) = table.predecessor_edge(v) {
                let e = inst.edge(id);
                let u = if e.head == v { e.tail } else { e.head };
                assert_eq!(table.dist(v), table.dist(u) + e.weight);
            }
        }
    }
}
