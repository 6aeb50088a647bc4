//! Instance factories: the three hardness constructions (from Biclique,
//! Steiner Tree, and Hitting Set) as generators with certificate
//! extraction, plus a seeded random generator for property corpora.
//!
//! Generated instances are undirected and unweighted. Extraction inverts
//! each construction on a verified witness and checks the certificate
//! against the original input before returning it; a failure there means a
//! solver or generator bug, never bad luck.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flow::relaxation_cost;
use crate::ftp::verify_solution;
use crate::graph::{
    shortest_distances, EdgeFilter, EdgeId, EdgeKind, EdgeSet, FtpInstance, InstanceError, VertexId,
};

/// A bipartite graph and the biclique order `d`; asks whether `K_{d,d}`
/// occurs. Edges pair 1-based indices into the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicliqueInput {
    pub left: u32,
    pub right: u32,
    pub edges: Vec<(u32, u32)>,
    pub d: u32,
}

/// An undirected graph with terminals; asks for a tree spanning the
/// terminals with at most `d` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerInput {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
    pub terminals: Vec<u32>,
    pub d: u32,
}

/// A set family over `1..=universe`; asks for at most `d` elements meeting
/// every set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInput {
    pub universe: u32,
    pub sets: Vec<Vec<u32>>,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    TooFewEdges { needed: usize, got: usize },
    ZeroOrder,
    VertexOutOfRange { vertex: u32 },
    SelfLoop,
    NoTerminals,
    DuplicateTerminal { vertex: u32 },
    EmptyFamily,
    EmptySet,
    Instance(InstanceError),
}

impl core::fmt::Display for ReductionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ReductionError::TooFewEdges { needed, got } => {
                write!(f, "needs at least {needed} edges, got {got}")
            }
            ReductionError::ZeroOrder => write!(f, "d must be at least 1"),
            ReductionError::VertexOutOfRange { vertex } => {
                write!(f, "vertex {vertex} out of range")
            }
            ReductionError::SelfLoop => write!(f, "self-loop in input graph"),
            ReductionError::NoTerminals => write!(f, "terminal set is empty"),
            ReductionError::DuplicateTerminal { vertex } => write!(f, "terminal {vertex} repeated"),
            ReductionError::EmptyFamily => write!(f, "set family is empty"),
            ReductionError::EmptySet => write!(f, "family contains an empty set"),
            ReductionError::Instance(e) => write!(f, "{e}"),
        }
    }
}

impl From<InstanceError> for ReductionError {
    fn from(e: InstanceError) -> Self {
        ReductionError::Instance(e)
    }
}

/// Vertex and edge-id layout of a generated biclique instance. For `d == 1`
/// the connector path has no edges and `v` coincides with `s`;
/// the budget grows by one to keep the crossing route affordable.
struct BicliqueLayout {
    s: VertexId,
    t: VertexId,
    v: VertexId,
    graph_edges: usize,
    path_edges: usize,
    side_edges: usize,
    detour_count: usize,
}

impl BicliqueLayout {
    fn new(input: &BicliqueInput) -> Self {
        let d = input.d as usize;
        let left = input.left;
        let right = input.right;
        let s = left + right + 1;
        let t = left + right + 2;
        let (v, path_edges) = if d >= 2 {
            (left + right + 3, 2 * d * d - 2 * d - 1)
        } else {
            (s, 0)
        };
        BicliqueLayout {
            s,
            t,
            v,
            graph_edges: input.edges.len(),
            path_edges,
            side_edges: (left + right) as usize,
            detour_count: d * d,
        }
    }

    fn budget(&self, d: u32) -> u64 {
        let base = 3 * d as u64 * d as u64 - 1;
        if d >= 2 {
            base
        } else {
            base + 1
        }
    }

    /// Id range of the connector-side safe edges to `A` (after the graph
    /// copy).
    fn left_edge(&self, a: u32) -> EdgeId {
        EdgeId(self.graph_edges as u32 + a)
    }

    fn right_edge(&self, input: &BicliqueInput, b: u32) -> EdgeId {
        EdgeId(self.graph_edges as u32 + input.left + b)
    }

    /// The three edge ids of detour path `i` (0-based).
    fn detour_ids(&self, i: usize) -> [EdgeId; 3] {
        let base = (self.graph_edges + self.side_edges + self.path_edges + 3 * i) as u32;
        [EdgeId(base + 1), EdgeId(base + 2), EdgeId(base + 3)]
    }
}

fn validate_biclique(input: &BicliqueInput) -> Result<(), ReductionError> {
    if input.d == 0 {
        return Err(ReductionError::ZeroOrder);
    }
    let needed = 3 * input.d as usize * input.d as usize;
    if input.edges.len() < needed {
        return Err(ReductionError::TooFewEdges {
            needed,
            got: input.edges.len(),
        });
    }
    for &(a, b) in &input.edges {
        if a == 0 || a > input.left {
            return Err(ReductionError::VertexOutOfRange { vertex: a });
        }
        if b == 0 || b > input.right {
            return Err(ReductionError::VertexOutOfRange { vertex: b });
        }
    }
    Ok(())
}

/// Builds the fault-tolerant path instance whose yes-answer certifies a
/// `K_{d,d}`: the bipartite graph all-vulnerable, safe connector edges
/// `v`-`A` and `B`-`t`, a long safe s-v path, and `d^2` three-edge
/// vulnerable s-t detours, with `k = d^2 - 1`.
pub fn from_biclique(input: &BicliqueInput) -> Result<FtpInstance, ReductionError> {
    validate_biclique(input)?;
    let d = input.d as usize;
    let layout = BicliqueLayout::new(input);
    let left = input.left;
    let right = input.right;
    let path_inner = layout.path_edges.saturating_sub(1) as u32;
    let mut n = left + right + 2 + path_inner + 2 * layout.detour_count as u32;
    if d >= 2 {
        n += 1; // the connector vertex v
    }

    let mut edges: Vec<(VertexId, VertexId, u64, EdgeKind)> = Vec::new();
    for &(a, b) in &input.edges {
        edges.push((a, left + b, 1, EdgeKind::Vulnerable));
    }
    for a in 1..=left {
        edges.push((layout.v, a, 1, EdgeKind::Safe));
    }
    for b in 1..=right {
        edges.push((left + b, layout.t, 1, EdgeKind::Safe));
    }
    let mut next = left + right + 2 + u32::from(d >= 2);
    if layout.path_edges > 0 {
        let mut prev = layout.s;
        for _ in 0..layout.path_edges - 1 {
            next += 1;
            edges.push((prev, next, 1, EdgeKind::Safe));
            prev = next;
        }
        edges.push((prev, layout.v, 1, EdgeKind::Safe));
    }
    for _ in 0..layout.detour_count {
        let x = next + 1;
        let y = next + 2;
        next += 2;
        edges.push((layout.s, x, 1, EdgeKind::Vulnerable));
        edges.push((x, y, 1, EdgeKind::Vulnerable));
        edges.push((y, layout.t, 1, EdgeKind::Vulnerable));
    }
    debug_assert_eq!(next, n);

    let k = input.d * input.d - 1;
    let ell = layout.budget(input.d);
    Ok(FtpInstance::new(
        false, n, &edges, layout.s, layout.t, k, ell,
    )?)
}

fn validate_steiner(input: &SteinerInput) -> Result<(), ReductionError> {
    if input.terminals.is_empty() {
        return Err(ReductionError::NoTerminals);
    }
    let mut seen = BTreeSet::new();
    for &u in &input.terminals {
        if u == 0 || u > input.n {
            return Err(ReductionError::VertexOutOfRange { vertex: u });
        }
        if !seen.insert(u) {
            return Err(ReductionError::DuplicateTerminal { vertex: u });
        }
    }
    for &(u, v) in &input.edges {
        if u == v {
            return Err(ReductionError::SelfLoop);
        }
        for w in [u, v] {
            if w == 0 || w > input.n {
                return Err(ReductionError::VertexOutOfRange { vertex: w });
            }
        }
    }
    Ok(())
}

/// The Steiner-tree construction: the graph all-safe, a new vertex `s` with
/// one vulnerable edge per terminal, `t` the lowest-id terminal,
/// `k = |T| - 1` and `ell = d + |T|`.
pub fn from_steiner_tree(input: &SteinerInput) -> Result<FtpInstance, ReductionError> {
    validate_steiner(input)?;
    let s = input.n + 1;
    let t = *input.terminals.iter().min().unwrap();
    let mut terminals = input.terminals.clone();
    terminals.sort_unstable();
    let mut edges: Vec<(VertexId, VertexId, u64, EdgeKind)> = Vec::new();
    for &(u, v) in &input.edges {
        edges.push((u, v, 1, EdgeKind::Safe));
    }
    for &u in &terminals {
        edges.push((s, u, 1, EdgeKind::Vulnerable));
    }
    let k = terminals.len() as u32 - 1;
    let ell = input.d as u64 + terminals.len() as u64;
    Ok(FtpInstance::new(false, input.n + 1, &edges, s, t, k, ell)?)
}

fn validate_hitting_set(input: &HittingSetInput) -> Result<(), ReductionError> {
    if input.sets.is_empty() {
        return Err(ReductionError::EmptyFamily);
    }
    for set in &input.sets {
        if set.is_empty() {
            return Err(ReductionError::EmptySet);
        }
        for &x in set {
            if x == 0 || x > input.universe {
                return Err(ReductionError::VertexOutOfRange { vertex: x });
            }
        }
    }
    Ok(())
}

/// The hitting-set construction: element vertices behind safe `s`-edges,
/// set vertices between vulnerable incidence edges and vulnerable `t`
/// edges, `k = |F| - 1` and `ell = 2|F| + d`. Repeated elements inside a
/// set are collapsed.
pub fn from_hitting_set(input: &HittingSetInput) -> Result<FtpInstance, ReductionError> {
    validate_hitting_set(input)?;
    let u_count = input.universe;
    let f_count = input.sets.len() as u32;
    let s = u_count + f_count + 1;
    let t = u_count + f_count + 2;
    let set_vertex = |i: usize| u_count + i as u32 + 1;

    let mut edges: Vec<(VertexId, VertexId, u64, EdgeKind)> = Vec::new();
    for x in 1..=u_count {
        edges.push((s, x, 1, EdgeKind::Safe));
    }
    for (i, set) in input.sets.iter().enumerate() {
        let mut members = set.clone();
        members.sort_unstable();
        members.dedup();
        for &x in &members {
            edges.push((x, set_vertex(i), 1, EdgeKind::Vulnerable));
        }
    }
    for i in 0..input.sets.len() {
        edges.push((set_vertex(i), t, 1, EdgeKind::Vulnerable));
    }
    let k = f_count - 1;
    let ell = 2 * f_count as u64 + input.d as u64;
    Ok(FtpInstance::new(
        false,
        u_count + f_count + 2,
        &edges,
        s,
        t,
        k,
        ell,
    )?)
}

/// A certificate for the source problem, extracted from a witness of the
/// generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Biclique { left: Vec<u32>, right: Vec<u32> },
    SteinerTree { edges: Vec<(u32, u32)> },
    HittingSet { elements: Vec<u32> },
}

/// The original input alongside its tag, for certificate extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionSource {
    Biclique(BicliqueInput),
    Steiner(SteinerInput),
    HittingSet(HittingSetInput),
}

/// Extraction failure: the constructions guarantee extractability from any
/// verified witness, so this signals a solver or generator bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateError {
    pub reason: String,
}

fn bug(reason: String) -> CertificateError {
    CertificateError { reason }
}

/// Inverts the construction on a verified witness and checks the result
/// against the source input before returning it.
pub fn extract_certificate(
    source: &ReductionSource,
    witness: &EdgeSet,
) -> Result<Certificate, CertificateError> {
    match source {
        ReductionSource::Biclique(input) => extract_biclique(input, witness),
        ReductionSource::Steiner(input) => extract_steiner(input, witness),
        ReductionSource::HittingSet(input) => extract_hitting_set(input, witness),
    }
}

fn extract_biclique(
    input: &BicliqueInput,
    witness: &EdgeSet,
) -> Result<Certificate, CertificateError> {
    let inst = from_biclique(input).map_err(|e| bug(format!("invalid input: {e}")))?;
    if !verify_solution(&inst, witness).feasible {
        return Err(bug(String::from("witness does not verify")));
    }
    if input.d == 1 {
        // with one detour affordable any valid input is a yes-instance, and
        // any input edge is a K_{1,1}
        let &(a, b) = input
            .edges
            .first()
            .ok_or_else(|| bug(String::from("no input edges")))?;
        return checked_biclique_certificate(vec![a], vec![b], input);
    }
    let d = input.d as usize;
    let layout = BicliqueLayout::new(input);
    let mut chosen: BTreeSet<EdgeId> = witness.iter().collect();

    // the witness must afford the connector path entirely
    for offset in 0..layout.path_edges {
        let id = EdgeId((layout.graph_edges + layout.side_edges + offset) as u32 + 1);
        if !chosen.contains(&id) {
            return Err(bug(format!(
                "connector path edge {id} missing from witness"
            )));
        }
    }

    // replace complete detours by crossing routes until none remain
    loop {
        let full = (0..layout.detour_count)
            .map(|i| layout.detour_ids(i))
            .find(|ids| ids.iter().all(|id| chosen.contains(id)));
        let Some(ids) = full else { break };
        let spare = input
            .edges
            .iter()
            .enumerate()
            .find(|(i, _)| !chosen.contains(&EdgeId(*i as u32 + 1)))
            .ok_or_else(|| bug(String::from("no spare bipartite edge for the detour swap")))?;
        let (edge_index, &(a, b)) = spare;
        for id in ids {
            chosen.remove(&id);
        }
        chosen.insert(EdgeId(edge_index as u32 + 1));
        chosen.insert(layout.left_edge(a));
        chosen.insert(layout.right_edge(input, b));
        let rewritten = EdgeSet::from_ids(chosen.iter().copied().collect());
        if !verify_solution(&inst, &rewritten).feasible {
            return Err(bug(String::from("detour swap broke the witness")));
        }
    }

    let left: Vec<u32> = (1..=input.left)
        .filter(|&a| chosen.contains(&layout.left_edge(a)))
        .collect();
    let right: Vec<u32> = (1..=input.right)
        .filter(|&b| chosen.contains(&layout.right_edge(input, b)))
        .collect();
    if left.len() != d || right.len() != d {
        return Err(bug(format!(
            "connector degrees {}x{} instead of {d}x{d}",
            left.len(),
            right.len()
        )));
    }
    checked_biclique_certificate(left, right, input)
}

fn checked_biclique_certificate(
    left: Vec<u32>,
    right: Vec<u32>,
    input: &BicliqueInput,
) -> Result<Certificate, CertificateError> {
    let edges: BTreeSet<(u32, u32)> = input.edges.iter().copied().collect();
    for &a in &left {
        for &b in &right {
            if !edges.contains(&(a, b)) {
                return Err(bug(format!("pair ({a},{b}) missing in the input graph")));
            }
        }
    }
    if left.len() != input.d as usize || right.len() != input.d as usize {
        return Err(bug(String::from("certificate has the wrong order")));
    }
    Ok(Certificate::Biclique { left, right })
}

fn extract_steiner(
    input: &SteinerInput,
    witness: &EdgeSet,
) -> Result<Certificate, CertificateError> {
    let inst = from_steiner_tree(input).map_err(|e| bug(format!("invalid input: {e}")))?;
    if !verify_solution(&inst, witness).feasible {
        return Err(bug(String::from("witness does not verify")));
    }
    // safe witness edges are exactly graph edges; ids line up with input order
    let safe: Vec<usize> = witness
        .iter()
        .filter(|id| (id.0 as usize) <= input.edges.len())
        .map(|id| id.0 as usize - 1)
        .collect();
    if safe.len() > input.d as usize {
        return Err(bug(format!(
            "witness uses {} graph edges, more than d = {}",
            safe.len(),
            input.d
        )));
    }
    // spanning tree of the terminal component, grown from the lowest terminal
    let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); input.n as usize + 1];
    for &i in &safe {
        let (u, v) = input.edges[i];
        adj[u as usize].push((v, i));
        adj[v as usize].push((u, i));
    }
    let root = *input.terminals.iter().min().unwrap();
    let mut seen = vec![false; input.n as usize + 1];
    let mut tree: Vec<usize> = Vec::new();
    let mut stack = vec![root];
    seen[root as usize] = true;
    while let Some(u) = stack.pop() {
        for &(v, i) in &adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                tree.push(i);
                stack.push(v);
            }
        }
    }
    for &u in &input.terminals {
        if !seen[u as usize] {
            return Err(bug(format!("terminal {u} not connected by the witness")));
        }
    }
    // prune branches that serve no terminal
    let terminals: BTreeSet<u32> = input.terminals.iter().copied().collect();
    loop {
        let mut degree = vec![0usize; input.n as usize + 1];
        for &i in &tree {
            let (u, v) = input.edges[i];
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let before = tree.len();
        tree.retain(|&i| {
            let (u, v) = input.edges[i];
            let leaf_u = degree[u as usize] == 1 && !terminals.contains(&u);
            let leaf_v = degree[v as usize] == 1 && !terminals.contains(&v);
            !(leaf_u || leaf_v)
        });
        if tree.len() == before {
            break;
        }
    }
    if tree.len() > input.d as usize {
        return Err(bug(String::from("extracted tree exceeds the bound")));
    }
    Ok(Certificate::SteinerTree {
        edges: tree.into_iter().map(|i| input.edges[i]).collect(),
    })
}

fn extract_hitting_set(
    input: &HittingSetInput,
    witness: &EdgeSet,
) -> Result<Certificate, CertificateError> {
    let inst = from_hitting_set(input).map_err(|e| bug(format!("invalid input: {e}")))?;
    if !verify_solution(&inst, witness).feasible {
        return Err(bug(String::from("witness does not verify")));
    }
    let s = inst.s();
    let mut chosen: BTreeSet<EdgeId> = witness.iter().collect();

    // normal form: every element vertex in the s-component of the witness
    // is attached through its direct safe edge; swaps keep the witness valid
    loop {
        let current = EdgeSet::from_ids(chosen.iter().copied().collect());
        let component = component_of(&inst, &current, s);
        let swap = inst
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::Vulnerable && chosen.contains(&e.id))
            .filter(|e| {
                // incidence edges join an element vertex and a set vertex
                let (x, _f) = (e.tail.min(e.head), e.tail.max(e.head));
                x <= input.universe && e.head.max(e.tail) != inst.t()
            })
            .find(|e| {
                let x = e.tail.min(e.head);
                let direct = direct_edge_id(input, x);
                component[x as usize] && !chosen.contains(&direct) && {
                    // the set vertex must stay connected without this edge
                    let mut without = chosen.clone();
                    without.remove(&e.id);
                    let reduced = EdgeSet::from_ids(without.iter().copied().collect());
                    component_of(&inst, &reduced, s)[e.tail.max(e.head) as usize]
                }
            });
        let Some(edge) = swap else { break };
        let x = edge.tail.min(edge.head);
        chosen.remove(&edge.id);
        chosen.insert(direct_edge_id(input, x));
        let rewritten = EdgeSet::from_ids(chosen.iter().copied().collect());
        if !verify_solution(&inst, &rewritten).feasible {
            return Err(bug(String::from("normalization swap broke the witness")));
        }
    }

    let elements: Vec<u32> = (1..=input.universe)
        .filter(|&x| chosen.contains(&direct_edge_id(input, x)))
        .collect();
    if elements.len() > input.d as usize {
        return Err(bug(format!(
            "extracted {} elements, more than d = {}",
            elements.len(),
            input.d
        )));
    }
    for (i, set) in input.sets.iter().enumerate() {
        if !set.iter().any(|x| elements.binary_search(x).is_ok()) {
            return Err(bug(format!("extracted set misses family member {i}")));
        }
    }
    Ok(Certificate::HittingSet { elements })
}

fn direct_edge_id(input: &HittingSetInput, element: u32) -> EdgeId {
    // safe s-u_x edges come first, in element order
    let _ = input;
    EdgeId(element)
}

fn component_of(inst: &FtpInstance, set: &EdgeSet, from: VertexId) -> Vec<bool> {
    let n = inst.vertex_count() as usize;
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    for e in inst.edges() {
        if set.contains(e.id) {
            adj[e.tail as usize].push(e.head);
            adj[e.head as usize].push(e.tail);
        }
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![from];
    seen[from as usize] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Budget policy for generated instances: a fixed value, or an offset from
/// the relaxation optimum (falling back to the s-t distance, then to `n`,
/// when infinite).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllPolicy {
    Fixed(u64),
    AroundRelaxation { offset: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub directed: bool,
    pub n: u32,
    pub m: u32,
    pub safe_fraction: f64,
    pub weight_range: (u64, u64),
    pub k: u32,
    pub ell: EllPolicy,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    TooFewVertices,
    BadSafeFraction,
    BadWeightRange,
    Instance(InstanceError),
}

impl core::fmt::Display for GenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GenError::TooFewVertices => write!(f, "need at least two vertices"),
            GenError::BadSafeFraction => write!(f, "safe fraction must be within [0, 1]"),
            GenError::BadWeightRange => {
                write!(f, "weight range must be non-empty with minimum >= 1")
            }
            GenError::Instance(e) => write!(f, "{e}"),
        }
    }
}

/// Reproducible random instance: same parameters and seed, same instance.
/// Terminals are fixed to `s = 1`, `t = n`.
pub fn gen_random(params: &GenParams) -> Result<FtpInstance, GenError> {
    if params.n < 2 {
        return Err(GenError::TooFewVertices);
    }
    if !(0.0..=1.0).contains(&params.safe_fraction) {
        return Err(GenError::BadSafeFraction);
    }
    let (lo, hi) = params.weight_range;
    if lo == 0 || lo > hi {
        return Err(GenError::BadWeightRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges: Vec<(VertexId, VertexId, u64, EdgeKind)> = (0..params.m)
        .map(|_| {
            let u = rng.gen_range(1..=params.n);
            let mut v = rng.gen_range(1..=params.n);
            while v == u {
                v = rng.gen_range(1..=params.n);
            }
            let kind = if rng.gen_bool(params.safe_fraction) {
                EdgeKind::Safe
            } else {
                EdgeKind::Vulnerable
            };
            (u, v, rng.gen_range(lo..=hi), kind)
        })
        .collect();
    let base = FtpInstance::new(params.directed, params.n, &edges, 1, params.n, params.k, 0)
        .map_err(GenError::Instance)?;
    let ell = match params.ell {
        EllPolicy::Fixed(value) => value,
        EllPolicy::AroundRelaxation { offset } => {
            let anchor = relaxation_cost(&base)
                .cost
                .finite()
                .or_else(|| {
                    shortest_distances(&base, base.s(), EdgeFilter::All)
                        .dist(base.t())
                        .finite()
                })
                .unwrap_or(params.n as u64);
            (anchor as i64).saturating_add(offset).max(0) as u64
        }
    };
    Ok(base.with_ell(ell))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftp::{ftp_oracle, solve_safe_guess, solve_vulnerable_guess, Answer, GuessMode};
    use crate::graph::ExtCost;

    fn complete_bipartite(a: u32, b: u32, d: u32) -> BicliqueInput {
        let mut edges = Vec::new();
        for x in 1..=a {
            for y in 1..=b {
                edges.push((x, y));
            }
        }
        BicliqueInput {
            left: a,
            right: b,
            edges,
            d,
        }
    }

    #[test]
    fn biclique_d2_structure() {
        let input = complete_bipartite(4, 4, 2);
        let inst = from_biclique(&input).unwrap();
        assert_eq!(inst.k(), 3);
        assert_eq!(inst.ell(), 11);
        // 16 graph edges + 8 connector edges + 3 path edges + 12 detour edges
        assert_eq!(inst.edge_count(), 16 + 8 + 3 + 12);
        assert_eq!(inst.vulnerable_count(), 16 + 12);
        let layout_path_edges = inst
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::Safe)
            .count()
            - 8;
        assert_eq!(layout_path_edges, 3);
    }

    #[test]
    fn biclique_d2_on_k44_is_yes_and_extracts() {
        let input = complete_bipartite(4, 4, 2);
        let inst = from_biclique(&input).unwrap();
        let verdict = solve_safe_guess(&inst);
        assert!(verdict.is_yes());
        let certificate =
            extract_certificate(&ReductionSource::Biclique(input), &verdict.witness.unwrap())
                .unwrap();
        let Certificate::Biclique { left, right } = certificate else {
            panic!("wrong certificate kind");
        };
        assert_eq!(left.len(), 2);
        assert_eq!(right.len(), 2);
    }

    #[test]
    fn biclique_d1_is_yes_with_adjusted_budget() {
        let input = BicliqueInput {
            left: 2,
            right: 2,
            edges: vec![(1, 1), (1, 2), (2, 1)],
            d: 1,
        };
        let inst = from_biclique(&input).unwrap();
        assert_eq!(inst.k(), 0);
        assert_eq!(inst.ell(), 3);
        let report = ftp_oracle(&inst).unwrap();
        assert_eq!(report.answer, Answer::Yes);
        let certificate =
            extract_certificate(&ReductionSource::Biclique(input), &report.witness.unwrap())
                .unwrap();
        assert!(matches!(certificate, Certificate::Biclique { .. }));
    }

    /// Brute-force biclique existence, the source-problem oracle.
    fn has_biclique(input: &BicliqueInput) -> bool {
        let edges: BTreeSet<(u32, u32)> = input.edges.iter().copied().collect();
        let d = input.d as usize;
        fn choose(
            from: u32,
            count: usize,
            max: u32,
            current: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if current.len() == count {
                out.push(current.clone());
                return;
            }
            for v in from..=max {
                current.push(v);
                choose(v + 1, count, max, current, out);
                current.pop();
            }
        }
        let mut lefts = Vec::new();
        choose(1, d, input.left, &mut Vec::new(), &mut lefts);
        let mut rights = Vec::new();
        choose(1, d, input.right, &mut Vec::new(), &mut rights);
        lefts.iter().any(|xs| {
            rights.iter().any(|ys| {
                xs.iter()
                    .all(|&x| ys.iter().all(|&y| edges.contains(&(x, y))))
            })
        })
    }

    #[test]
    fn biclique_free_graph_maps_to_a_no_instance() {
        // four pairwise-one-overlap triples: 12 edges and no K_{2,2}
        let input = BicliqueInput {
            left: 6,
            right: 4,
            edges: vec![
                (1, 1),
                (2, 1),
                (3, 1),
                (1, 2),
                (4, 2),
                (5, 2),
                (2, 3),
                (4, 3),
                (6, 3),
                (3, 4),
                (5, 4),
                (6, 4),
            ],
            d: 2,
        };
        assert!(!has_biclique(&input));
        let inst = from_biclique(&input).unwrap();
        assert!(!solve_safe_guess(&inst).is_yes());
    }

    #[test]
    fn biclique_rejects_sparse_inputs() {
        let input = BicliqueInput {
            left: 2,
            right: 2,
            edges: vec![(1, 1)],
            d: 1,
        };
        assert_eq!(
            from_biclique(&input),
            Err(ReductionError::TooFewEdges { needed: 3, got: 1 })
        );
    }

    #[test]
    fn biclique_relaxation_slack_is_at_most_one() {
        let input = complete_bipartite(4, 4, 2);
        let inst = from_biclique(&input).unwrap();
        let relax = relaxation_cost(&inst).cost;
        let ExtCost::Finite(c) = relax else {
            panic!("detours bound the relaxation")
        };
        assert!(c <= 12, "C stays under 3d^2");
        assert!(c as i64 - inst.ell() as i64 <= 1);
        assert!(matches!(
            crate::ftp::preprocess(&inst),
            crate::ftp::Preprocessed::Reduced(_)
        ));
    }

    #[test]
    fn biclique_witness_decomposes_into_k_plus_1_paths() {
        use crate::ftp::decompose_witness;
        let input = complete_bipartite(4, 4, 2);
        let inst = from_biclique(&input).unwrap();
        let verdict = solve_safe_guess(&inst);
        let witness = verdict.witness.unwrap();
        let decomposition = decompose_witness(&inst, &witness).unwrap();
        assert_eq!(decomposition.paths.len(), 4);
        for (i, left) in decomposition.paths.iter().enumerate() {
            for right in &decomposition.paths[i + 1..] {
                for id in left.iter().filter(|id| right.contains(id)) {
                    assert_eq!(inst.edge(*id).kind, EdgeKind::Safe);
                }
            }
        }
    }

    #[test]
    fn steiner_triangle_example() {
        let input = SteinerInput {
            n: 3,
            edges: vec![(1, 2), (2, 3), (1, 3)],
            terminals: vec![1, 2],
            d: 1,
        };
        let inst = from_steiner_tree(&input).unwrap();
        assert_eq!(inst.k(), 1);
        assert_eq!(inst.ell(), 3);
        assert_eq!(inst.vulnerable_count(), 2);
        let report = ftp_oracle(&inst).unwrap();
        assert_eq!(report.answer, Answer::Yes);
        let certificate =
            extract_certificate(&ReductionSource::Steiner(input), &report.witness.unwrap())
                .unwrap();
        let Certificate::SteinerTree { edges } = certificate else {
            panic!("wrong certificate kind");
        };
        assert_eq!(edges, vec![(1, 2)]);
    }

    #[test]
    fn steiner_single_terminal_is_always_yes() {
        let input = SteinerInput {
            n: 3,
            edges: vec![(1, 2)],
            terminals: vec![2],
            d: 0,
        };
        let inst = from_steiner_tree(&input).unwrap();
        assert_eq!(inst.k(), 0);
        assert_eq!(inst.ell(), 1);
        assert_eq!(ftp_oracle(&inst).unwrap().answer, Answer::Yes);
    }

    /// Brute-force Steiner tree existence, the source-problem oracle.
    fn has_steiner_tree(input: &SteinerInput) -> bool {
        let m = input.edges.len();
        let d = input.d as usize;
        'mask: for mask in 0u32..1 << m {
            if (mask.count_ones() as usize) > d {
                continue;
            }
            let mut parent: Vec<u32> = (0..=input.n).collect();
            fn find(parent: &mut [u32], v: u32) -> u32 {
                let mut v = v;
                while parent[v as usize] != v {
                    v = parent[v as usize];
                }
                v
            }
            for (i, &(u, v)) in input.edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    parent[ru as usize] = rv;
                }
            }
            let root = find(&mut parent, input.terminals[0]);
            for &u in &input.terminals {
                if find(&mut parent, u) != root {
                    continue 'mask;
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn steiner_equivalence_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        for _ in 0..40 {
            let n = rng.gen_range(3..=6u32);
            let m = rng.gen_range(2..=8usize);
            let edges: Vec<(u32, u32)> = (0..m)
                .map(|_| {
                    let u = rng.gen_range(1..=n);
                    let mut v = rng.gen_range(1..=n);
                    while v == u {
                        v = rng.gen_range(1..=n);
                    }
                    (u, v)
                })
                .collect();
            let t_count = rng.gen_range(1..=3.min(n));
            let mut terminals: Vec<u32> = Vec::new();
            while terminals.len() < t_count as usize {
                let u = rng.gen_range(1..=n);
                if !terminals.contains(&u) {
                    terminals.push(u);
                }
            }
            let input = SteinerInput {
                n,
                edges,
                terminals,
                d: rng.gen_range(0..=5),
            };
            let inst = from_steiner_tree(&input).unwrap();
            let want = has_steiner_tree(&input);
            let got = solve_vulnerable_guess(&inst, GuessMode::BySize).is_yes();
            assert_eq!(got, want, "input {input:?}");
        }
    }

    #[test]
    fn hitting_set_worked_example() {
        let input = HittingSetInput {
            universe: 2,
            sets: vec![vec![1], vec![1, 2]],
            d: 1,
        };
        let inst = from_hitting_set(&input).unwrap();
        assert_eq!(inst.k(), 1);
        assert_eq!(inst.ell(), 5);
        assert_eq!(inst.safe_count(), 2);
        let report = ftp_oracle(&inst).unwrap();
        assert_eq!(report.answer, Answer::Yes);
        let certificate = extract_certificate(
            &ReductionSource::HittingSet(input),
            &report.witness.unwrap(),
        )
        .unwrap();
        assert_eq!(certificate, Certificate::HittingSet { elements: vec![1] });
    }

    #[test]
    fn hitting_set_with_zero_budget_is_no() {
        let input = HittingSetInput {
            universe: 1,
            sets: vec![vec![1]],
            d: 0,
        };
        let inst = from_hitting_set(&input).unwrap();
        assert_eq!(inst.ell(), 2);
        assert_eq!(inst.k(), 0);
        assert_eq!(ftp_oracle(&inst).unwrap().answer, Answer::No);
    }

    /// Brute-force hitting set existence, the source-problem oracle.
    fn has_hitting_set(input: &HittingSetInput) -> bool {
        let u = input.universe as usize;
        for mask in 0u32..1 << u {
            if mask.count_ones() as usize > input.d as usize {
                continue;
            }
            if input
                .sets
                .iter()
                .all(|set| set.iter().any(|&x| mask >> (x - 1) & 1 == 1))
            {
                return true;
            }
        }
        false
    }

    #[test]
    fn hitting_set_equivalence_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        for _ in 0..40 {
            let universe = rng.gen_range(1..=5u32);
            let f = rng.gen_range(1..=4usize);
            let sets: Vec<Vec<u32>> = (0..f)
                .map(|_| {
                    let size = rng.gen_range(1..=universe);
                    let mut set: Vec<u32> = Vec::new();
                    while set.len() < size as usize {
                        let x = rng.gen_range(1..=universe);
                        if !set.contains(&x) {
                            set.push(x);
                        }
                    }
                    set
                })
                .collect();
            let input = HittingSetInput {
                universe,
                sets,
                d: rng.gen_range(0..=3),
            };
            let inst = from_hitting_set(&input).unwrap();
            let want = has_hitting_set(&input);
            let got = solve_safe_guess(&inst).is_yes();
            assert_eq!(got, want, "input {input:?}");
        }
    }

    #[test]
    fn generator_is_seed_deterministic() {
        let params = GenParams {
            directed: true,
            n: 6,
            m: 9,
            safe_fraction: 0.5,
            weight_range: (1, 4),
            k: 2,
            ell: EllPolicy::AroundRelaxation { offset: -1 },
            seed: 99,
        };
        let first = gen_random(&params).unwrap();
        let second = gen_random(&params).unwrap();
        assert_eq!(first, second);
        let third = gen_random(&GenParams {
            seed: 100,
            ..params.clone()
        })
        .unwrap();
        assert_ne!(first, third);
    }

    #[test]
    fn generator_statistics_match_parameters() {
        let mut safe = 0usize;
        let mut total = 0usize;
        for seed in 0..100 {
            let params = GenParams {
                directed: false,
                n: 7,
                m: 12,
                safe_fraction: 0.5,
                weight_range: (1, 4),
                k: 1,
                ell: EllPolicy::Fixed(10),
                seed,
            };
            let inst = gen_random(&params).unwrap();
            assert_eq!(inst.edge_count(), 12);
            safe += inst.safe_count();
            total += inst.edge_count();
        }
        let fraction = safe as f64 / total as f64;
        assert!(
            (fraction - 0.5).abs() < 0.1,
            "safe fraction drifted to {fraction}"
        );
    }
}
