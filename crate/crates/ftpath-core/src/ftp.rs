//! Decision solvers for fault-tolerant paths: preprocessing guards, the
//! vulnerable-edge-guess solver (through Steiner linkage), the
//! safe-edge-guess solver (through min-cost flow), a brute-force oracle,
//! witness verification, and path decomposition.
//!
//! Both guess solvers enumerate candidate subsets by increasing size and
//! then lexicographic edge id, and return the first verified witness; guess
//! evaluation is pure, so parallel drivers can map over the candidate list
//! and keep bit-identical output by picking the earliest hit.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dsl::{
    metric_closure, solve_multiset, DslInstance, DslScratch, MetricClosure, SizeGuardError,
};
use crate::flow::{
    cancel_opposite_flow, max_flow, min_cost_flow, relaxation_cost, trace_unit_path, FlowNetwork,
};
use crate::graph::{
    shortest_distances, EdgeFilter, EdgeId, EdgeKind, EdgeSet, ExtCost, FtpInstance, VertexId,
};

/// Decision answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

/// Which solver or guard decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    TrivialNoDistance,
    TrivialYesSafePath,
    TrivialYesRelaxation,
    VulnerableGuess,
    SafeGuess,
    Oracle,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::TrivialNoDistance => "preprocess/distance",
            Provenance::TrivialYesSafePath => "preprocess/safe-path",
            Provenance::TrivialYesRelaxation => "preprocess/relaxation",
            Provenance::VulnerableGuess => "vulnerable-guess",
            Provenance::SafeGuess => "safe-guess",
            Provenance::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The outcome of a decision solve. A `Yes` always carries a witness that
/// passed [`verify_solution`] within budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<EdgeSet>,
    pub witness_cost: Option<u64>,
    pub provenance: Provenance,
}

impl Verdict {
    fn yes(witness: EdgeSet, cost: u64, provenance: Provenance) -> Self {
        Verdict {
            answer: Answer::Yes,
            witness: Some(witness),
            witness_cost: Some(cost),
            provenance,
        }
    }

    fn no(provenance: Provenance) -> Self {
        Verdict {
            answer: Answer::No,
            witness: None,
            witness_cost: None,
            provenance,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Derived quantities of an instance: the weighted distance, the relaxation
/// optimum `C`, the above-guarantee slack `a = ell - dist` (`None` when the
/// distance is infinite) and below-guarantee slack `b = C - ell` (`None`
/// when `C` is infinite), plus oracle-derived fields when requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameters {
    pub dist: ExtCost,
    pub relaxation: ExtCost,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub opt: Option<u64>,
}

/// `k+1` s-t walks whose pairwise shared edges are all safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub paths: Vec<Vec<EdgeId>>,
}

/// Feasibility and cost of a candidate edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub cost: u64,
}

/// How the vulnerable-guess solver walks the candidate subsets: either all
/// of them, or only sizes up to `min(|U|, 2a, ell)`, which is enough for
/// completeness because some optimal solution of a yes-instance has at most
/// that many vulnerable edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuessMode {
    AllSubsets,
    BySize,
}

/// The instance restricted to `K`, with safe capacity `k+1` and vulnerable
/// capacity 1; feasibility is a `(k+1)`-flow in this network.
fn restricted_network(inst: &FtpInstance, keep: &EdgeSet) -> FlowNetwork {
    let mut net = FlowNetwork::new(inst.vertex_count() as usize + 1);
    let cap_safe = inst.k() as u64 + 1;
    for e in inst.edges() {
        if !keep.contains(e.id) {
            continue;
        }
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

/// Flow-based feasibility: `K` survives every failure of up to `k`
/// vulnerable edges iff the restricted network carries `k+1` units.
pub fn verify_solution(inst: &FtpInstance, k_set: &EdgeSet) -> Feasibility {
    assert!(
        k_set.valid_for(inst),
        "edge set must belong to the instance"
    );
    let net = restricted_network(inst, k_set);
    let value = max_flow(&net, inst.s() as usize, inst.t() as usize).value;
    Feasibility {
        feasible: value > inst.k() as u64,
        cost: inst.edge_set_cost(k_set),
    }
}

/// Definition-level feasibility: enumerate every failure set of up to `k`
/// vulnerable edges of `K` and test s-t connectivity. Exponential in
/// `|K ∩ U|`; the independent counterpart of [`verify_solution`].
pub fn verify_by_failure_enumeration(inst: &FtpInstance, k_set: &EdgeSet) -> Feasibility {
    assert!(
        k_set.valid_for(inst),
        "edge set must belong to the instance"
    );
    let vulnerable: Vec<EdgeId> = k_set
        .iter()
        .filter(|&id| inst.edge(id).kind == EdgeKind::Vulnerable)
        .collect();
    let failures = (inst.k() as usize).min(vulnerable.len());
    // removing fewer edges only helps, so only maximal failure sets matter
    let mut selection = Vec::new();
    let feasible = all_failures_survive(inst, k_set, &vulnerable, failures, 0, &mut selection);
    Feasibility {
        feasible,
        cost: inst.edge_set_cost(k_set),
    }
}

fn all_failures_survive(
    inst: &FtpInstance,
    k_set: &EdgeSet,
    vulnerable: &[EdgeId],
    remaining: usize,
    from: usize,
    selection: &mut Vec<EdgeId>,
) -> bool {
    if remaining == 0 {
        return connects_without(inst, k_set, selection);
    }
    for i in from..vulnerable.len() {
        selection.push(vulnerable[i]);
        let ok = all_failures_survive(inst, k_set, vulnerable, remaining - 1, i + 1, selection);
        selection.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn connects_without(inst: &FtpInstance, k_set: &EdgeSet, removed: &[EdgeId]) -> bool {
    let n = inst.vertex_count() as usize;
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    for e in inst.edges() {
        if !k_set.contains(e.id) || removed.contains(&e.id) {
            continue;
        }
        adj[e.tail as usize].push(e.head);
        if !inst.directed() {
            adj[e.head as usize].push(e.tail);
        }
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![inst.s()];
    seen[inst.s() as usize] = true;
    while let Some(v) = stack.pop() {
        if v == inst.t() {
            return true;
        }
        for &w in &adj[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessError {
    Infeasible,
}

impl fmt::Display for WitnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessError::Infeasible => write!(f, "edge set is not a feasible witness"),
        }
    }
}

/// Splits a feasible witness into `k+1` s-t paths that pairwise share only
/// safe edges, by decomposing a `(k+1)`-flow over the witness.
pub fn decompose_witness(
    inst: &FtpInstance,
    k_set: &EdgeSet,
) -> Result<PathDecomposition, WitnessError> {
    let net = restricted_network(inst, k_set);
    let target = inst.k() as u64 + 1;
    let result = min_cost_flow(&net, inst.s() as usize, inst.t() as usize, target)
        .ok_or(WitnessError::Infeasible)?;
    let mut flow = result.flow;
    cancel_opposite_flow(&net, &mut flow);
    let t = inst.t() as usize;
    let mut paths = Vec::with_capacity(target as usize);
    for _ in 0..target {
        let arcs = trace_unit_path(&net, &mut flow, inst.s() as usize, &|v| v == t)
            .expect("a (k+1)-flow decomposes into k+1 s-t paths");
        paths.push(
            arcs.iter()
                .map(|&a| net.arcs()[a].origin.expect("restricted arcs carry origins"))
                .collect(),
        );
    }
    Ok(PathDecomposition { paths })
}

/// What preprocessing settled: a trivial verdict, or the derived parameters
/// of an instance that needs a real solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preprocessed {
    TriviallyYes {
        witness: EdgeSet,
        cost: u64,
        provenance: Provenance,
    },
    TriviallyNo,
    Reduced(Parameters),
}

/// Trivial guards: `ell < dist(s,t)` is a no-instance; a safe-only shortest
/// path within budget or a relaxation optimum `C <= ell` is a yes-instance.
pub fn preprocess(inst: &FtpInstance) -> Preprocessed {
    let table = shortest_distances(inst, inst.s(), EdgeFilter::All);
    let dist = table.dist(inst.t());
    if dist > ExtCost::Finite(inst.ell()) {
        return Preprocessed::TriviallyNo;
    }

    let safe_table = shortest_distances(inst, inst.s(), EdgeFilter::SafeOnly);
    if let ExtCost::Finite(safe_dist) = safe_table.dist(inst.t()) {
        if safe_dist <= inst.ell() {
            let witness = EdgeSet::from_ids(safe_table.path_to(inst.t(), inst).unwrap());
            debug_assert!(verify_solution(inst, &witness).feasible);
            return Preprocessed::TriviallyYes {
                witness,
                cost: safe_dist,
                provenance: Provenance::TrivialYesSafePath,
            };
        }
    }

    let relax = relaxation_cost(inst);
    if let ExtCost::Finite(c) = relax.cost {
        if c <= inst.ell() {
            let witness = EdgeSet::from_ids(relax.support());
            let cost = inst.edge_set_cost(&witness);
            debug_assert!(verify_solution(inst, &witness).feasible);
            debug_assert!(cost <= inst.ell());
            return Preprocessed::TriviallyYes {
                witness,
                cost,
                provenance: Provenance::TrivialYesRelaxation,
            };
        }
    }

    let dist_value = dist.finite().expect("finite after the no-guard");
    Preprocessed::Reduced(Parameters {
        dist,
        relaxation: relax.cost,
        a: Some(inst.ell() as i64 - dist_value as i64),
        b: relax.cost.finite().map(|c| c as i64 - inst.ell() as i64),
        p: None,
        q: None,
        opt: None,
    })
}

/// Scratch shared across guess evaluations: the pattern catalogue and a
/// memo of linkage optima keyed by terminal balances. Both cache pure
/// results, so sharing or splitting scratches never changes answers.
/// Balances of a cancelled terminal multiset, the linkage memo key.
type BalanceKey = Vec<(VertexId, i64)>;

#[derive(Debug, Default)]
pub struct FtpScratch {
    dsl: DslScratch,
    memo: BTreeMap<BalanceKey, Option<(u64, Vec<EdgeId>)>>,
}

impl FtpScratch {
    pub fn new() -> Self {
        FtpScratch::default()
    }
}

/// Either a verdict settled by preprocessing or a prepared search.
pub enum SearchSetup<S> {
    Decided(Verdict),
    Search(S),
}

/// Candidate subsets of the given ids by increasing size, lexicographic
/// within a size, keeping only subsets whose total weight fits the budget.
fn weight_bounded_subsets(
    inst: &FtpInstance,
    ids: &[EdgeId],
    max_size: usize,
    budget: u64,
) -> Vec<Vec<EdgeId>> {
    let weighted: Vec<(EdgeId, u64)> = ids.iter().map(|&id| (id, inst.edge(id).weight)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        weighted: &[(EdgeId, u64)],
        size: usize,
        from: usize,
        budget_left: u64,
        current: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        let needed = size - current.len();
        for i in from..=weighted.len().saturating_sub(needed) {
            let (id, w) = weighted[i];
            if w > budget_left {
                continue;
            }
            current.push(id);
            rec(weighted, size, i + 1, budget_left - w, current, out);
            current.pop();
        }
    }
    for size in 0..=max_size.min(ids.len()) {
        rec(&weighted, size, 0, budget, &mut current, &mut out);
    }
    out
}

/// Prepared state for the vulnerable-edge-guess solver: the safe subgraph,
/// its metric closure, and the candidate guess list.
pub struct VulnerableGuessSearch<'a> {
    inst: &'a FtpInstance,
    safe_graph: DslInstance,
    closure: MetricClosure,
    candidates: Vec<Vec<EdgeId>>,
}

impl<'a> VulnerableGuessSearch<'a> {
    pub fn prepare(inst: &'a FtpInstance, mode: GuessMode) -> SearchSetup<Self> {
        let params = match preprocess(inst) {
            Preprocessed::TriviallyNo => {
                return SearchSetup::Decided(Verdict::no(Provenance::TrivialNoDistance))
            }
            Preprocessed::TriviallyYes {
                witness,
                cost,
                provenance,
            } => return SearchSetup::Decided(Verdict::yes(witness, cost, provenance)),
            Preprocessed::Reduced(params) => params,
        };
        let vulnerable = inst.edge_ids_of_kind(EdgeKind::Vulnerable);
        let max_size = match mode {
            GuessMode::AllSubsets => vulnerable.len(),
            GuessMode::BySize => {
                // some optimal solution has q <= min(2a, ell) vulnerable edges
                let a = params.a.expect("reduced instances have finite distance");
                vulnerable
                    .len()
                    .min((2 * a).max(0) as usize)
                    .min(inst.ell().min(usize::MAX as u64) as usize)
            }
        };
        let candidates = weight_bounded_subsets(inst, &vulnerable, max_size, inst.ell());

        // linkage runs over the safe subgraph, shared by every guess
        let safe_edges: Vec<(EdgeId, VertexId, VertexId, u64)> = inst
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::Safe)
            .map(|e| (e.id, e.tail, e.head, e.weight))
            .collect();
        let safe_graph = DslInstance::with_edge_ids(
            inst.directed(),
            inst.vertex_count(),
            &safe_edges,
            Vec::new(),
            Vec::new(),
            inst.ell(),
        )
        .expect("safe subgraph of a valid instance is valid");
        let closure = metric_closure(&safe_graph);
        SearchSetup::Search(VulnerableGuessSearch {
            inst,
            safe_graph,
            closure,
            candidates,
        })
    }

    pub fn candidates(&self) -> &[Vec<EdgeId>] {
        &self.candidates
    }

    /// Tries one guessed vulnerable set: routes the forced supplies and
    /// demands over the safe subgraph, and re-verifies any candidate before
    /// accepting it. Undirected instances try each traversal orientation of
    /// the guessed edges, since a vulnerable edge carries one path.
    pub fn evaluate(&self, guess: &[EdgeId], scratch: &mut FtpScratch) -> Option<(EdgeSet, u64)> {
        let inst = self.inst;
        let guess_weight: u64 = guess.iter().map(|&id| inst.edge(id).weight).sum();
        if guess_weight > inst.ell() {
            return None;
        }
        let budget = inst.ell() - guess_weight;
        let orientations: u64 = if inst.directed() { 1 } else { 1 << guess.len() };
        for orientation in 0..orientations {
            let mut balances: BTreeMap<VertexId, i64> = BTreeMap::new();
            let mut bump = |v: VertexId, by: i64| {
                let slot = balances.entry(v).or_default();
                *slot += by;
                if *slot == 0 {
                    balances.remove(&v);
                }
            };
            for (i, &id) in guess.iter().enumerate() {
                let e = inst.edge(id);
                let (tail, head) = if orientation >> i & 1 == 0 {
                    (e.tail, e.head)
                } else {
                    (e.head, e.tail)
                };
                bump(head, 1);
                bump(tail, -1);
            }
            bump(inst.s(), inst.k() as i64 + 1);
            bump(inst.t(), -(inst.k() as i64 + 1));

            let key: Vec<(VertexId, i64)> = balances.iter().map(|(&v, &b)| (v, b)).collect();
            let solved = match scratch.memo.get(&key) {
                Some(cached) => cached.clone(),
                None => {
                    let sources: Vec<VertexId> = key
                        .iter()
                        .flat_map(|&(v, b)| core::iter::repeat_n(v, b.max(0) as usize))
                        .collect();
                    let targets: Vec<VertexId> = key
                        .iter()
                        .flat_map(|&(v, b)| core::iter::repeat_n(v, (-b).max(0) as usize))
                        .collect();
                    let solved = solve_multiset(
                        &self.safe_graph,
                        &self.closure,
                        &sources,
                        &targets,
                        &mut scratch.dsl,
                    );
                    scratch.memo.insert(key, solved.clone());
                    solved
                }
            };
            let Some((linkage_cost, linkage_edges)) = solved else {
                continue;
            };
            if linkage_cost > budget {
                continue;
            }
            let witness = EdgeSet::from_ids(
                linkage_edges
                    .iter()
                    .copied()
                    .chain(guess.iter().copied())
                    .collect(),
            );
            let check = verify_solution(inst, &witness);
            debug_assert!(check.feasible, "linkage candidates verify by construction");
            if check.feasible && check.cost <= inst.ell() {
                return Some((witness, check.cost));
            }
        }
        None
    }

    pub fn no_verdict(&self) -> Verdict {
        Verdict::no(Provenance::VulnerableGuess)
    }

    pub fn yes_verdict(&self, witness: EdgeSet, cost: u64) -> Verdict {
        Verdict::yes(witness, cost, Provenance::VulnerableGuess)
    }
}

/// Decides the instance by guessing the vulnerable edges of a solution and
/// completing each guess over the safe subgraph.
pub fn solve_vulnerable_guess(inst: &FtpInstance, mode: GuessMode) -> Verdict {
    match VulnerableGuessSearch::prepare(inst, mode) {
        SearchSetup::Decided(verdict) => verdict,
        SearchSetup::Search(search) => {
            let mut scratch = FtpScratch::new();
            for guess in search.candidates() {
                if let Some((witness, cost)) = search.evaluate(guess, &mut scratch) {
                    return search.yes_verdict(witness, cost);
                }
            }
            search.no_verdict()
        }
    }
}

/// Prepared state for the safe-edge-guess solver.
pub struct SafeGuessSearch<'a> {
    inst: &'a FtpInstance,
    candidates: Vec<Vec<EdgeId>>,
}

impl<'a> SafeGuessSearch<'a> {
    pub fn prepare(inst: &'a FtpInstance) -> SearchSetup<Self> {
        match preprocess(inst) {
            Preprocessed::TriviallyNo => {
                return SearchSetup::Decided(Verdict::no(Provenance::TrivialNoDistance))
            }
            Preprocessed::TriviallyYes {
                witness,
                cost,
                provenance,
            } => return SearchSetup::Decided(Verdict::yes(witness, cost, provenance)),
            Preprocessed::Reduced(_) => {}
        }
        let safe = inst.edge_ids_of_kind(EdgeKind::Safe);
        let max_size = safe.len();
        let candidates = weight_bounded_subsets(inst, &safe, max_size, inst.ell());
        SearchSetup::Search(SafeGuessSearch { inst, candidates })
    }

    pub fn candidates(&self) -> &[Vec<EdgeId>] {
        &self.candidates
    }

    /// Tries one guessed safe set: chosen safe edges become free capacity
    /// `k+1`, other safe edges disappear, vulnerable edges keep capacity 1
    /// and their weight as cost; the guess wins iff a `(k+1)`-flow exists
    /// and its cost plus the guess weight fits the budget.
    pub fn evaluate(&self, guess: &[EdgeId]) -> Option<(EdgeSet, u64)> {
        let inst = self.inst;
        let guess_weight: u64 = guess.iter().map(|&id| inst.edge(id).weight).sum();
        if guess_weight > inst.ell() {
            return None;
        }
        let mut net = FlowNetwork::new(inst.vertex_count() as usize + 1);
        let cap_safe = inst.k() as u64 + 1;
        for e in inst.edges() {
            let (cap, cost) = match e.kind {
                EdgeKind::Safe => {
                    if guess.binary_search(&e.id).is_err() {
                        continue;
                    }
                    (cap_safe, 0)
                }
                EdgeKind::Vulnerable => (1, e.weight),
            };
            if inst.directed() {
                net.add_arc_with_origin(e.tail as usize, e.head as usize, cap, cost, Some(e.id));
            } else {
                net.add_undirected(e.tail as usize, e.head as usize, cap, cost, Some(e.id));
            }
        }
        let result = min_cost_flow(&net, inst.s() as usize, inst.t() as usize, cap_safe)?;
        if result.cost + guess_weight > inst.ell() {
            return None;
        }
        let mut flow = result.flow;
        cancel_opposite_flow(&net, &mut flow);
        let support = FlowResultView { flow: &flow }.support(&net);
        let witness = EdgeSet::from_ids(support.into_iter().chain(guess.iter().copied()).collect());
        let check = verify_solution(inst, &witness);
        debug_assert!(check.feasible, "flow candidates verify by construction");
        if check.feasible && check.cost <= inst.ell() {
            return Some((witness, check.cost));
        }
        None
    }

    pub fn no_verdict(&self) -> Verdict {
        Verdict::no(Provenance::SafeGuess)
    }

    pub fn yes_verdict(&self, witness: EdgeSet, cost: u64) -> Verdict {
        Verdict::yes(witness, cost, Provenance::SafeGuess)
    }
}

// support() without cloning the result struct
struct FlowResultView<'a> {
    flow: &'a [u64],
}

impl FlowResultView<'_> {
    fn support(&self, net: &FlowNetwork) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = net
            .arcs()
            .iter()
            .zip(self.flow)
            .filter(|(_, &f)| f > 0)
            .filter_map(|(arc, _)| arc.origin)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Decides the instance by guessing the safe edges of a solution and
/// completing each guess with a min-cost flow over the vulnerable edges.
pub fn solve_safe_guess(inst: &FtpInstance) -> Verdict {
    match SafeGuessSearch::prepare(inst) {
        SearchSetup::Decided(verdict) => verdict,
        SearchSetup::Search(search) => {
            for guess in search.candidates() {
                if let Some((witness, cost)) = search.evaluate(guess) {
                    return search.yes_verdict(witness, cost);
                }
            }
            search.no_verdict()
        }
    }
}

const FTP_ORACLE_EDGE_LIMIT: usize = 16;

/// Ground truth for small instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub answer: Answer,
    /// Minimum witness cost, when feasible within budget.
    pub opt: Option<u64>,
    /// Minimum safe-edge count over all minimum-cost witnesses.
    pub p: Option<u32>,
    /// Minimum vulnerable-edge count over all minimum-cost witnesses.
    pub q: Option<u32>,
    pub witness: Option<EdgeSet>,
}

/// Enumerates every edge subset within budget in nondecreasing cost and
/// reports the optimum, together with the minimum safe and vulnerable edge
/// counts over all optimal witnesses.
pub fn ftp_oracle(inst: &FtpInstance) -> Result<OracleReport, SizeGuardError> {
    let m = inst.edge_count();
    if m > FTP_ORACLE_EDGE_LIMIT {
        return Err(SizeGuardError {
            limit: FTP_ORACLE_EDGE_LIMIT,
            actual: m,
        });
    }
    let mut subsets: Vec<(u64, Vec<EdgeId>)> = Vec::new();
    for mask in 0u32..1 << m {
        let ids: Vec<EdgeId> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| EdgeId(i as u32 + 1))
            .collect();
        let cost: u64 = ids.iter().map(|&id| inst.edge(id).weight).sum();
        if cost <= inst.ell() {
            subsets.push((cost, ids));
        }
    }
    subsets.sort();

    let mut opt: Option<u64> = None;
    let mut p: Option<u32> = None;
    let mut q: Option<u32> = None;
    let mut witness: Option<EdgeSet> = None;
    for (cost, ids) in subsets {
        if let Some(best) = opt {
            if cost > best {
                break;
            }
        }
        let set = EdgeSet::from_ids(ids);
        if !verify_solution(inst, &set).feasible {
            continue;
        }
        let safe = set
            .iter()
            .filter(|&id| inst.edge(id).kind == EdgeKind::Safe)
            .count() as u32;
        let vulnerable = set.len() as u32 - safe;
        if opt.is_none() {
            opt = Some(cost);
            witness = Some(set);
        }
        p = Some(p.map_or(safe, |v| v.min(safe)));
        q = Some(q.map_or(vulnerable, |v| v.min(vulnerable)));
    }
    Ok(OracleReport {
        answer: if opt.is_some() {
            Answer::Yes
        } else {
            Answer::No
        },
        opt,
        p,
        q,
        witness,
    })
}

/// Fills the flow-free parameters always, and `p`, `q`, `opt` from the
/// oracle when `use_oracle` is set (subject to its size guard).
pub fn compute_parameters(
    inst: &FtpInstance,
    use_oracle: bool,
) -> Result<Parameters, SizeGuardError> {
    let table = shortest_distances(inst, inst.s(), EdgeFilter::All);
    let dist = table.dist(inst.t());
    let relax = relaxation_cost(inst).cost;
    let mut params = Parameters {
        dist,
        relaxation: relax,
        a: dist.finite().map(|d| inst.ell() as i64 - d as i64),
        b: relax.finite().map(|c| c as i64 - inst.ell() as i64),
        p: None,
        q: None,
        opt: None,
    };
    if use_oracle {
        let report = ftp_oracle(inst)?;
        params.p = report.p;
        params.q = report.q;
        params.opt = report.opt;
    }
    Ok(params)
}

/// Smallest budget for which the decision solver answers yes, by binary
/// search between `dist(s,t)` and the relaxation optimum `C`; `None` when
/// the instance is infeasible at every budget.
pub fn optimal_budget(inst: &FtpInstance, solve: impl Fn(&FtpInstance) -> Verdict) -> Option<u64> {
    let table = shortest_distances(inst, inst.s(), EdgeFilter::All);
    let lo = table.dist(inst.t()).finite()?;
    let hi = relaxation_cost(inst).cost.finite()?;
    // the relaxation support is a witness at ell = C, so yes at hi
    let (mut lo, mut hi) = (lo, hi);
    debug_assert!(solve(&inst.with_ell(hi)).is_yes());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if solve(&inst.with_ell(mid)).is_yes() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}
