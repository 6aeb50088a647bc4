//! Integral max-flow and min-cost flow, plus the flow relaxation that
//! bounds the fault-tolerant path optimum from below.
//!
//! The min-cost solver runs successive shortest augmenting paths with node
//! potentials, which keeps reduced costs non-negative and every intermediate
//! flow integral. Networks here are desk-scale; there is no capacity or cost
//! scaling.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, EdgeKind, ExtCost, FtpInstance};

/// A capacitated, costed arc network. `balances` are per-node supplies
/// (positive) and demands (negative) and must sum to zero; most callers
/// leave them at zero and route between an explicit source and sink.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<FlowArc>,
    balances: Vec<i64>,
}

/// One arc; `origin` ties it back to an instance edge, and `opposite` links
/// the two arcs modelling one undirected edge.
#[derive(Debug, Clone)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: u64,
    pub cost: u64,
    pub origin: Option<EdgeId>,
    pub opposite: Option<usize>,
}

impl FlowNetwork {
    /// Nodes are 0-based here; graph vertices map to `v as usize` with node 0
    /// spare, so helper nodes can be appended after `n`.
    pub fn new(node_count: usize) -> Self {
        FlowNetwork {
            node_count,
            arcs: Vec::new(),
            balances: vec![0; node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: u64, cost: u64) -> usize {
        self.add_arc_with_origin(tail, head, capacity, cost, None)
    }

    pub fn add_arc_with_origin(
        &mut self,
        tail: usize,
        head: usize,
        capacity: u64,
        cost: u64,
        origin: Option<EdgeId>,
    ) -> usize {
        assert!(tail < self.node_count && head < self.node_count);
        self.arcs.push(FlowArc {
            tail,
            head,
            capacity,
            cost,
            origin,
            opposite: None,
        });
        self.arcs.len() - 1
    }

    /// Adds the two opposite arcs modelling one undirected edge, each with
    /// the full capacity and cost.
    pub fn add_undirected(
        &mut self,
        a: usize,
        b: usize,
        capacity: u64,
        cost: u64,
        origin: Option<EdgeId>,
    ) -> (usize, usize) {
        let fwd = self.add_arc_with_origin(a, b, capacity, cost, origin);
        let bwd = self.add_arc_with_origin(b, a, capacity, cost, origin);
        self.arcs[fwd].opposite = Some(bwd);
        self.arcs[bwd].opposite = Some(fwd);
        (fwd, bwd)
    }

    pub fn set_balance(&mut self, node: usize, balance: i64) {
        self.balances[node] = balance;
    }

    pub fn balances(&self) -> &[i64] {
        &self.balances
    }

    pub fn balanced(&self) -> bool {
        self.balances.iter().sum::<i64>() == 0
    }
}

/// An integral flow assignment together with its value and cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    pub cost: u64,
    pub flow: Vec<u64>,
}

impl FlowResult {
    /// Instance edges carrying positive flow, each id once.
    pub fn support(&self, net: &FlowNetwork) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = net
            .arcs()
            .iter()
            .zip(&self.flow)
            .filter(|(_, &f)| f > 0)
            .filter_map(|(arc, _)| arc.origin)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Cancels flow on opposite arc pairs so that at most one direction of each
/// undirected edge is used. Value and conservation are unchanged and cost
/// never increases.
pub fn cancel_opposite_flow(net: &FlowNetwork, flow: &mut [u64]) {
    for (i, arc) in net.arcs().iter().enumerate() {
        if let Some(j) = arc.opposite {
            if i < j {
                let both = flow[i].min(flow[j]);
                flow[i] -= both;
                flow[j] -= both;
            }
        }
    }
}

fn recompute_cost(net: &FlowNetwork, flow: &[u64]) -> u64 {
    net.arcs()
        .iter()
        .zip(flow)
        .map(|(arc, &f)| arc.cost * f)
        .sum()
}

/// Residual graph shared by both solvers: forward residual = capacity -
/// flow, backward residual = flow.
struct Residual {
    // per node: (other endpoint, arc index, forward?)
    adj: Vec<Vec<(usize, usize, bool)>>,
}

impl Residual {
    fn build(net: &FlowNetwork) -> Self {
        let mut adj = vec![Vec::new(); net.node_count()];
        for (i, arc) in net.arcs().iter().enumerate() {
            adj[arc.tail].push((arc.head, i, true));
            adj[arc.head].push((arc.tail, i, false));
        }
        Residual { adj }
    }
}

fn residual_cap(net: &FlowNetwork, flow: &[u64], arc: usize, forward: bool) -> u64 {
    if forward {
        net.arcs()[arc].capacity - flow[arc]
    } else {
        flow[arc]
    }
}

/// Maximum integral flow from `source` to `sink` (Edmonds-Karp).
pub fn max_flow(net: &FlowNetwork, source: usize, sink: usize) -> FlowResult {
    assert_ne!(source, sink);
    let res = Residual::build(net);
    let mut flow = vec![0u64; net.arcs().len()];
    let mut value = 0u64;
    let mut pred: Vec<Option<(usize, usize, bool)>> = vec![None; net.node_count()];
    loop {
        for p in pred.iter_mut() {
            *p = None;
        }
        let mut queue = alloc::collections::VecDeque::new();
        queue.push_back(source);
        pred[source] = Some((source, usize::MAX, true));
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &(v, arc, fwd) in &res.adj[u] {
                if pred[v].is_none() && residual_cap(net, &flow, arc, fwd) > 0 {
                    pred[v] = Some((u, arc, fwd));
                    queue.push_back(v);
                }
            }
        }
        if pred[sink].is_none() {
            break;
        }
        let mut bottleneck = u64::MAX;
        let mut v = sink;
        while v != source {
            let (u, arc, fwd) = pred[v].unwrap();
            bottleneck = bottleneck.min(residual_cap(net, &flow, arc, fwd));
            v = u;
        }
        let mut v = sink;
        while v != source {
            let (u, arc, fwd) = pred[v].unwrap();
            if fwd {
                flow[arc] += bottleneck;
            } else {
                flow[arc] -= bottleneck;
            }
            v = u;
        }
        value += bottleneck;
    }
    let cost = recompute_cost(net, &flow);
    FlowResult { value, cost, flow }
}

/// Minimum-cost integral flow of exactly `target` units from `source` to
/// `sink`; `None` when that value is unreachable (an answer, not a failure).
/// Requires non-negative arc costs.
pub fn min_cost_flow(
    net: &FlowNetwork,
    source: usize,
    sink: usize,
    target: u64,
) -> Option<FlowResult> {
    assert_ne!(source, sink);
    let n = net.node_count();
    let res = Residual::build(net);
    let mut flow = vec![0u64; net.arcs().len()];
    let mut potential = vec![0i64; n];
    let mut value = 0u64;
    let mut cost = 0u64;
    const INF: i64 = i64::MAX / 4;

    while value < target {
        // Dijkstra over reduced costs; arcs relax in insertion order, which
        // pins the augmenting path deterministically
        let mut dist = vec![INF; n];
        let mut pred: Vec<Option<(usize, usize, bool)>> = vec![None; n];
        let mut heap = alloc::collections::BinaryHeap::new();
        dist[source] = 0;
        heap.push(core::cmp::Reverse((0i64, source)));
        while let Some(core::cmp::Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, arc, fwd) in &res.adj[u] {
                if residual_cap(net, &flow, arc, fwd) == 0 {
                    continue;
                }
                let raw = net.arcs()[arc].cost as i64;
                let reduced = if fwd { raw } else { -raw } + potential[u] - potential[v];
                debug_assert!(reduced >= 0);
                let cand = d + reduced;
                if cand < dist[v] {
                    dist[v] = cand;
                    pred[v] = Some((u, arc, fwd));
                    heap.push(core::cmp::Reverse((cand, v)));
                }
            }
        }
        pred[sink]?;
        let reach = dist[sink];
        for u in 0..n {
            potential[u] += dist[u].min(reach);
        }
        let mut bottleneck = target - value;
        let mut v = sink;
        while v != source {
            let (u, arc, fwd) = pred[v].unwrap();
            bottleneck = bottleneck.min(residual_cap(net, &flow, arc, fwd));
            v = u;
        }
        let mut v = sink;
        while v != source {
            let (u, arc, fwd) = pred[v].unwrap();
            if fwd {
                flow[arc] += bottleneck;
                cost += net.arcs()[arc].cost * bottleneck;
            } else {
                flow[arc] -= bottleneck;
                cost -= net.arcs()[arc].cost * bottleneck;
            }
            v = u;
        }
        value += bottleneck;
    }
    debug_assert_eq!(cost, recompute_cost(net, &flow));
    Some(FlowResult { value, cost, flow })
}

/// Extracts one unit path from `start` to some vertex satisfying
/// `is_target`, following positive-flow arcs (lowest arc index first) and
/// excising flow cycles on the way. The path's flow is removed from `flow`;
/// `None` means the walk got stuck, i.e. the flow was not a valid
/// decomposable routing from `start`.
pub(crate) fn trace_unit_path(
    net: &FlowNetwork,
    flow: &mut [u64],
    start: usize,
    is_target: &dyn Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut arc_stack: Vec<usize> = Vec::new();
    let mut vert_stack: Vec<usize> = vec![start];
    let mut position: alloc::collections::BTreeMap<usize, usize> =
        alloc::collections::BTreeMap::new();
    position.insert(start, 0);
    loop {
        let cur = *vert_stack.last().unwrap();
        if is_target(cur) && !arc_stack.is_empty() {
            for &a in &arc_stack {
                flow[a] -= 1;
            }
            return Some(arc_stack);
        }
        let next = net
            .arcs()
            .iter()
            .enumerate()
            .find(|(i, a)| a.tail == cur && flow[*i] > 0)?;
        let (ai, arc) = next;
        let v = arc.head;
        if let Some(&p) = position.get(&v) {
            // drop the cycle's flow and resume from the revisited vertex
            for &a in &arc_stack[p..] {
                flow[a] -= 1;
            }
            flow[ai] -= 1;
            for w in &vert_stack[p + 1..] {
                position.remove(w);
            }
            vert_stack.truncate(p + 1);
            arc_stack.truncate(p);
        } else {
            arc_stack.push(ai);
            vert_stack.push(v);
            position.insert(v, vert_stack.len() - 1);
        }
    }
}

/// Routes the network's supplies to its demands through a virtual
/// source/sink pair; `None` when the balances cannot be satisfied.
/// The returned flow is indexed like `net.arcs()`.
pub fn route_balances(net: &FlowNetwork) -> Option<FlowResult> {
    assert!(net.balanced());
    let n = net.node_count();
    let mut extended = net.clone();
    extended.node_count += 2;
    extended.balances.extend_from_slice(&[0, 0]);
    let source = n;
    let sink = n + 1;
    let mut total = 0u64;
    for (node, &b) in net.balances().iter().enumerate() {
        if b > 0 {
            extended.add_arc(source, node, b as u64, 0);
            total += b as u64;
        } else if b < 0 {
            extended.add_arc(node, sink, (-b) as u64, 0);
        }
    }
    if total == 0 {
        return Some(FlowResult {
            value: 0,
            cost: 0,
            flow: vec![0; net.arcs().len()],
        });
    }
    let result = max_flow(&extended, source, sink);
    if result.value < total {
        return None;
    }
    let flow = result.flow[..net.arcs().len()].to_vec();
    let cost = recompute_cost(net, &flow);
    Some(FlowResult {
        value: total,
        cost,
        flow,
    })
}

/// The relaxation network of an instance: safe edges get capacity `k+1`,
/// vulnerable edges capacity 1, every edge costs its weight per unit.
/// Undirected edges become two opposite arcs with full capacity and cost.
pub fn relaxation_network(inst: &FtpInstance) -> FlowNetwork {
    let mut net = FlowNetwork::new(inst.vertex_count() as usize + 1);
    let cap_safe = inst.k() as u64 + 1;
    for e in inst.edges() {
        let cap = match e.kind {
            EdgeKind::Safe => cap_safe,
            EdgeKind::Vulnerable => 1,
        };
        if inst.directed() {
            net.add_arc_with_origin(e.tail as usize, e.head as usize, cap, e.weight, Some(e.id));
        } else {
            net.add_undirected(e.tail as usize, e.head as usize, cap, e.weight, Some(e.id));
        }
    }
    net
}

/// Outcome of the flow relaxation: the optimum `C` of a `(k+1)`-flow in the
/// relaxation network, the network itself, and the flow when one exists.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub cost: ExtCost,
    pub network: FlowNetwork,
    pub flow: Option<FlowResult>,
}

impl Relaxation {
    /// Instance edges used by the optimal relaxation flow.
    pub fn support(&self) -> Vec<EdgeId> {
        match &self.flow {
            Some(result) => result.support(&self.network),
            None => Vec::new(),
        }
    }
}

/// Minimum cost `C` of a `(k+1)`-flow from `s` to `t` in the relaxation
/// network; `Infinite` when no such flow exists. Optimal flows never use
/// both opposite arcs of one undirected edge.
pub fn relaxation_cost(inst: &FtpInstance) -> Relaxation {
    let network = relaxation_network(inst);
    let target = inst.k() as u64 + 1;
    match min_cost_flow(&network, inst.s() as usize, inst.t() as usize, target) {
        Some(mut result) => {
            cancel_opposite_flow(&network, &mut result.flow);
            result.cost = recompute_cost(&network, &result.flow);
            Relaxation {
                cost: ExtCost::Finite(result.cost),
                network,
                flow: Some(result),
            }
        }
        None => Relaxation {
            cost: ExtCost::Infinite,
            network,
            flow: None,
        },
    }
}
