//! Forest patterns: the abstract shapes of linkage solutions over the
//! metric closure.
//!
//! A pattern has one node per distinct terminal vertex plus up to `2k-2`
//! Steiner nodes of degree at least three, and every leaf is a terminal.
//! Steiner nodes are interchangeable, so enumeration emits only the
//! lexicographically minimal representative under Steiner relabelling.

use alloc::vec;
use alloc::vec::Vec;

use crate::dsl::MetricClosure;
use crate::flow::{route_balances, FlowNetwork};
use crate::graph::VertexId;

/// An abstract forest over terminal-labelled nodes `0..terminal_count` and
/// Steiner nodes `terminal_count..terminal_count+steiner_count`. Edges are
/// stored as `(a, b)` with `a < b`; an orientation entry of `true` means the
/// edge carries flow from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestPattern {
    pub terminal_count: usize,
    pub steiner_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub orientation: Option<Vec<bool>>,
    pub balances: Vec<i64>,
}

impl ForestPattern {
    pub fn node_count(&self) -> usize {
        self.terminal_count + self.steiner_count
    }
}

/// Undirected pattern skeleton, shared between the public oriented stream
/// and the solver's forced-orientation fast path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PatternStructure {
    pub steiner_count: usize,
    pub edges: Vec<(usize, usize)>,
}

fn steiner_permutations(j: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..j).collect(), &mut out);
    out
}

/// Lexicographic minimality under permutations of the Steiner labels.
fn is_canonical(edges: &[(usize, usize)], terminal_count: usize, perms: &[Vec<usize>]) -> bool {
    let mut relabelled: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for perm in perms.iter().skip(1) {
        relabelled.clear();
        for &(a, b) in edges {
            let map = |v: usize| {
                if v < terminal_count {
                    v
                } else {
                    terminal_count + perm[v - terminal_count]
                }
            };
            let (x, y) = (map(a), map(b));
            relabelled.push((x.min(y), x.max(y)));
        }
        relabelled.sort_unstable();
        if relabelled.as_slice() < edges {
            return false;
        }
    }
    true
}

#[cfg(test)]
struct Dsu {
    parent: Vec<usize>,
}

#[cfg(test)]
impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

/// All canonical forest skeletons with `terminal_count` terminal nodes
/// (degree >= 1) and up to `max_steiner` Steiner nodes (degree >= 3),
/// smaller Steiner counts first. The degree constraints force the Steiner
/// count below `terminal_count - 1`, so larger budgets cost nothing.
pub(crate) fn enumerate_structures(
    terminal_count: usize,
    max_steiner: usize,
) -> Vec<PatternStructure> {
    let mut out = Vec::new();
    if terminal_count < 2 {
        return out;
    }
    let cap = max_steiner.min(terminal_count - 2);
    for steiner in 0..=cap {
        enumerate_for(terminal_count, steiner, &mut out);
    }
    out
}

/// Forests with exactly `j` Steiner nodes, built constructively: partition
/// the nodes into blocks of at least two, enumerate the labelled trees of
/// each block through Prüfer sequences in which every Steiner node occurs
/// at least twice (degree three or more), and keep the canonical
/// representative of each Steiner-relabelling class. The work is
/// proportional to the number of trees visited, not to the number of edge
/// subsets.
fn enumerate_for(r: usize, j: usize, out: &mut Vec<PatternStructure>) {
    let n = r + j;
    let perms = steiner_permutations(j);
    let nodes: Vec<usize> = (0..n).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    partition_blocks(r, j, &nodes, &mut edges, &perms, out);
}

/// Recursively splits `remaining` into blocks of size >= 2; the first
/// remaining node anchors its block, which keeps partitions unique.
fn partition_blocks(
    r: usize,
    j: usize,
    remaining: &[usize],
    edges: &mut Vec<(usize, usize)>,
    perms: &[Vec<usize>],
    out: &mut Vec<PatternStructure>,
) {
    if remaining.is_empty() {
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if is_canonical(&sorted, r, perms) {
            out.push(PatternStructure {
                steiner_count: j,
                edges: sorted,
            });
        }
        return;
    }
    let anchor = remaining[0];
    let rest = &remaining[1..];
    for mask in 0u32..1 << rest.len() {
        if mask == 0 {
            continue; // singleton blocks cannot meet the degree bounds
        }
        let mut block = vec![anchor];
        let mut leftover = Vec::new();
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                block.push(v);
            } else {
                leftover.push(v);
            }
        }
        let before = edges.len();
        block_trees(r, &block, 0, &mut Vec::new(), edges, &mut |edges| {
            partition_blocks(r, j, &leftover, edges, perms, out);
        });
        debug_assert_eq!(edges.len(), before);
    }
}

/// Callback receiving the accumulated edge list of a partially built forest.
type EdgeSink<'a> = dyn FnMut(&mut Vec<(usize, usize)>) + 'a;

/// Enumerates the labelled trees of one block via Prüfer sequences, calling
/// `next` with the block's edges appended for each tree. Steiner nodes must
/// occur at least twice in the sequence; the quota prunes the recursion.
fn block_trees(
    r: usize,
    block: &[usize],
    position: usize,
    sequence: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
    next: &mut EdgeSink<'_>,
) {
    let len = block.len().saturating_sub(2);
    if position == len {
        // remaining quota must be exhausted
        let mut need = 0usize;
        for &v in block {
            if v >= r {
                let occurrences = sequence.iter().filter(|&&x| x == v).count();
                need += 2usize.saturating_sub(occurrences);
            }
        }
        if need > 0 {
            return;
        }
        if block.len() == 2 {
            edges.push((block[0].min(block[1]), block[0].max(block[1])));
            next(edges);
            edges.pop();
            return;
        }
        let tree = pruefer_decode(block, sequence);
        let before = edges.len();
        edges.extend(tree);
        next(edges);
        edges.truncate(before);
        return;
    }
    for &v in block {
        sequence.push(v);
        // quota check: each steiner in the block still needs its occurrences
        let mut need = 0usize;
        for &w in block {
            if w >= r {
                let occurrences = sequence.iter().filter(|&&x| x == w).count();
                need += 2usize.saturating_sub(occurrences);
            }
        }
        if need < len - position {
            block_trees(r, block, position + 1, sequence, edges, next);
        }
        sequence.pop();
    }
}

/// Standard Prüfer decoding over an arbitrary node set.
fn pruefer_decode(block: &[usize], sequence: &[usize]) -> Vec<(usize, usize)> {
    let mut degree: alloc::collections::BTreeMap<usize, usize> =
        block.iter().map(|&v| (v, 1)).collect();
    for &v in sequence {
        *degree.get_mut(&v).unwrap() += 1;
    }
    let mut edges = Vec::with_capacity(block.len() - 1);
    let mut remaining: alloc::collections::BTreeSet<usize> = block.iter().copied().collect();
    for &v in sequence {
        let leaf = *remaining
            .iter()
            .find(|&&u| degree[&u] == 1)
            .expect("a leaf always exists during decoding");
        edges.push((leaf.min(v), leaf.max(v)));
        remaining.remove(&leaf);
        *degree.get_mut(&v).unwrap() -= 1;
        degree.remove(&leaf);
    }
    let mut last = remaining.iter();
    let (a, b) = (*last.next().unwrap(), *last.next().unwrap());
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Streams every canonical forest pattern for the given terminal balances
/// and pair count; in the directed case each edge orientation is yielded.
pub fn enumerate_patterns(
    balances: &[i64],
    pairs: usize,
    directed: bool,
) -> impl Iterator<Item = ForestPattern> + '_ {
    debug_assert_eq!(balances.iter().sum::<i64>(), 0);
    let max_steiner = if pairs >= 1 { 2 * pairs - 2 } else { 0 };
    let structures = enumerate_structures(balances.len(), max_steiner);
    PatternIter {
        balances,
        directed,
        structures,
        index: 0,
        orientation: 0,
    }
}

struct PatternIter<'a> {
    balances: &'a [i64],
    directed: bool,
    structures: Vec<PatternStructure>,
    index: usize,
    orientation: u64,
}

impl Iterator for PatternIter<'_> {
    type Item = ForestPattern;

    fn next(&mut self) -> Option<ForestPattern> {
        let structure = self.structures.get(self.index)?;
        let pattern = ForestPattern {
            terminal_count: self.balances.len(),
            steiner_count: structure.steiner_count,
            edges: structure.edges.clone(),
            orientation: self.directed.then(|| {
                (0..structure.edges.len())
                    .map(|e| self.orientation >> e & 1 == 0)
                    .collect()
            }),
            balances: self.balances.to_vec(),
        };
        if self.directed {
            self.orientation += 1;
            if self.orientation >> structure.edges.len() != 0 {
                self.orientation = 0;
                self.index += 1;
            }
        } else {
            self.index += 1;
        }
        Some(pattern)
    }
}

/// Whether the terminal supplies and demands can be routed over the pattern
/// edges (unlimited capacity). Oriented edges carry flow one way only.
pub fn pattern_feasible(pattern: &ForestPattern) -> bool {
    let total_supply: i64 = pattern.balances.iter().filter(|&&b| b > 0).sum();
    let mut net = FlowNetwork::new(pattern.node_count().max(1));
    for (node, &b) in pattern.balances.iter().enumerate() {
        net.set_balance(node, b);
    }
    let cap = total_supply.max(1) as u64;
    for (e, &(a, b)) in pattern.edges.iter().enumerate() {
        match &pattern.orientation {
            Some(dirs) => {
                if dirs[e] {
                    net.add_arc(a, b, cap, 0);
                } else {
                    net.add_arc(b, a, cap, 0);
                }
            }
            None => {
                net.add_arc(a, b, cap, 0);
                net.add_arc(b, a, cap, 0);
            }
        }
    }
    route_balances(&net).is_some()
}

/// The flow each pattern edge is forced to carry: on a forest the cut
/// balance determines the value and direction of every edge. Returns the
/// per-edge orientation (`true`: flow from the lower to the higher stored
/// endpoint) or `None` when some tree is unbalanced or some edge would
/// carry zero flow. Minimal solutions use every edge, so zero-flow shapes
/// are covered by smaller patterns and can be skipped.
pub(crate) fn forced_orientation(
    structure: &PatternStructure,
    terminal_count: usize,
    balances: &[i64],
) -> Option<Vec<bool>> {
    let n = terminal_count + structure.steiner_count;
    let balance = |v: usize| if v < terminal_count { balances[v] } else { 0 };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in structure.edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut orientation = vec![false; structure.edges.len()];
    let mut seen = vec![false; n];
    // per tree: fold subtree balances upward; each entry in `order` names the
    // edge through which its vertex was first entered
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut order = Vec::new();
        let mut stack = vec![(root, usize::MAX)];
        seen[root] = true;
        while let Some((v, parent_edge)) = stack.pop() {
            order.push((v, parent_edge));
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, e));
                }
            }
        }
        let mut subtree = vec![0i64; n];
        for &(v, parent_edge) in order.iter().rev() {
            subtree[v] += balance(v);
            if parent_edge != usize::MAX {
                let (a, b) = structure.edges[parent_edge];
                let parent = a + b - v;
                let net = subtree[v];
                if net == 0 {
                    return None;
                }
                // positive net leaves the child side of the cut
                orientation[parent_edge] = (v == a) == (net > 0);
                subtree[parent] += subtree[v];
            }
        }
        if subtree[root] != 0 {
            return None;
        }
    }
    Some(orientation)
}

/// Minimum-cost embedding of a pattern into the metric closure: terminal
/// nodes are bound to their vertices, Steiner nodes range over all vertices
/// (not necessarily injectively), and each pattern edge pays the closure
/// weight along its flow direction. `None` when every assignment hits an
/// unreachable pair.
pub fn embed_pattern(
    pattern: &ForestPattern,
    closure: &MetricClosure,
    terminal_vertices: &[VertexId],
) -> Option<(u64, Vec<VertexId>)> {
    assert_eq!(terminal_vertices.len(), pattern.terminal_count);
    assert_eq!(
        pattern.orientation.is_some(),
        closure.directed(),
        "oriented patterns go with directed closures"
    );
    let n_nodes = pattern.node_count();
    let n_vertices = closure.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (e, &(a, b)) in pattern.edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }

    // closure weight of pattern edge `e` with its endpoints `a`, `b`
    // assigned to vertices `va`, `vb`; oriented edges pay along the flow
    let edge_cost = |e: usize, va: VertexId, vb: VertexId| -> Option<u64> {
        let forward = pattern.orientation.as_ref().is_none_or(|dirs| dirs[e]);
        if forward {
            closure.dist(va, vb)
        } else {
            closure.dist(vb, va)
        }
    };

    let domain = |node: usize| -> Vec<VertexId> {
        if node < pattern.terminal_count {
            vec![terminal_vertices[node]]
        } else {
            (1..=n_vertices as VertexId).collect()
        }
    };

    let mut total = 0u64;
    let mut assignment = vec![0 as VertexId; n_nodes];
    let mut visited = vec![false; n_nodes];
    for root in 0..n_nodes {
        if visited[root] {
            continue;
        }
        // collect the tree in parent-before-child order
        let mut order = Vec::new();
        let mut stack = vec![(root, usize::MAX, usize::MAX)];
        visited[root] = true;
        while let Some((v, parent, parent_edge)) = stack.pop() {
            order.push((v, parent, parent_edge));
            for &(w, e) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, v, e));
                }
            }
        }
        // dp[node][choice] = best subtree cost; children appear after their
        // parent in `order`, so fold from the back
        let domains: Vec<Vec<VertexId>> = (0..n_nodes).map(&domain).collect();
        let mut dp: Vec<Vec<Option<u64>>> = (0..n_nodes)
            .map(|v| vec![Some(0); domains[v].len()])
            .collect();
        let mut best_child: Vec<Vec<Vec<usize>>> = (0..n_nodes)
            .map(|v| vec![Vec::new(); domains[v].len()])
            .collect();
        for &(v, parent, parent_edge) in order.iter().rev() {
            if parent == usize::MAX {
                continue;
            }
            let (a, _b) = pattern.edges[parent_edge];
            for (pi, &pv) in domains[parent].iter().enumerate() {
                if dp[parent][pi].is_none() {
                    continue;
                }
                let mut best: Option<(u64, usize)> = None;
                for (ci, &cv) in domains[v].iter().enumerate() {
                    let Some(sub) = dp[v][ci] else { continue };
                    let (va, vb) = if a == parent { (pv, cv) } else { (cv, pv) };
                    let Some(w) = edge_cost(parent_edge, va, vb) else {
                        continue;
                    };
                    let cand = sub + w;
                    if best.is_none_or(|(b0, _)| cand < b0) {
                        best = Some((cand, ci));
                    }
                }
                match best {
                    Some((cost, ci)) => {
                        dp[parent][pi] = dp[parent][pi].map(|c| c + cost);
                        best_child[parent][pi].push(ci);
                    }
                    None => {
                        dp[parent][pi] = None;
                        best_child[parent][pi].clear();
                    }
                }
            }
        }
        // pick the root choice, then walk down recording assignments
        let mut root_best: Option<(u64, usize)> = None;
        for (ri, cost) in dp[root].iter().enumerate() {
            if let Some(c) = cost {
                if root_best.is_none_or(|(b0, _)| *c < b0) {
                    root_best = Some((*c, ri));
                }
            }
        }
        let (tree_cost, root_choice) = root_best?;
        total += tree_cost;
        let mut choice = vec![usize::MAX; n_nodes];
        choice[root] = root_choice;
        // children of v are pushed in adj order; replay the same traversal
        let mut child_cursor = vec![0usize; n_nodes];
        for &(v, parent, _) in order.iter() {
            if parent != usize::MAX {
                let slot = child_cursor[parent];
                child_cursor[parent] += 1;
                // children were appended in reverse of fold order; fold went
                // from the back of `order`, so earlier-in-order children were
                // folded later and sit later in best_child
                let folded = &best_child[parent][choice[parent]];
                choice[v] = folded[folded.len() - 1 - slot];
            }
            assignment[v] = domains[v][choice[v]];
        }
    }
    Some((total, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_terminals_have_exactly_one_structure() {
        let structures = enumerate_structures(2, 0);
        assert_eq!(structures.len(), 1);
        assert_eq!(structures[0].edges, vec![(0, 1)]);
        // directed: exactly the two orientations
        let patterns: Vec<_> = enumerate_patterns(&[1, -1], 1, true).collect();
        assert_eq!(patterns.len(), 2);
    }

    /// Brute-force filter over all graphs on the node set, the enumeration
    /// oracle.
    fn brute_force_count(r: usize, j: usize) -> usize {
        let n = r + j;
        let mut candidates = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                candidates.push((a, b));
            }
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for mask in 0u32..(1 << candidates.len()) {
            let edges: Vec<(usize, usize)> = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut deg = vec![0usize; n];
            for &(a, b) in &edges {
                deg[a] += 1;
                deg[b] += 1;
            }
            if (0..r).any(|v| deg[v] < 1) || (r..n).any(|v| deg[v] < 3) {
                continue;
            }
            let mut dsu = Dsu::new(n);
            if edges.iter().any(|&(a, b)| !dsu.union(a, b)) {
                continue;
            }
            // canonical form under steiner permutations
            let mut canon: Option<Vec<(usize, usize)>> = None;
            for perm in steiner_permutations(j) {
                let mut relabelled: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(a, b)| {
                        let map = |v: usize| if v < r { v } else { r + perm[v - r] };
                        let (x, y) = (map(a), map(b));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                relabelled.sort_unstable();
                if canon.as_ref().is_none_or(|c| &relabelled < c) {
                    canon = Some(relabelled);
                }
            }
            seen.insert(canon.unwrap());
        }
        seen.len()
    }

    #[test]
    fn counts_match_generate_and_filter_oracle() {
        for r in 2..=4usize {
            for j in 0..=2.min(r.saturating_sub(2)) {
                let got = enumerate_structures(r, j)
                    .into_iter()
                    .filter(|s| s.steiner_count == j)
                    .count();
                assert_eq!(got, brute_force_count(r, j), "r={r} j={j}");
            }
        }
    }

    #[test]
    fn four_terminals_include_the_steiner_star() {
        let structures = enumerate_structures(4, 1);
        let star: Vec<(usize, usize)> = vec![(0, 4), (1, 4), (2, 4), (3, 4)];
        assert!(structures.iter().any(|s| s.edges == star));
    }

    #[test]
    fn no_structure_repeats_under_steiner_relabelling() {
        let structures = enumerate_structures(5, 3);
        let mut canon = alloc::collections::BTreeSet::new();
        for s in &structures {
            let j = s.steiner_count;
            let mut minimal = s.edges.clone();
            for perm in steiner_permutations(j) {
                let mut relabelled: Vec<(usize, usize)> = s
                    .edges
                    .iter()
                    .map(|&(a, b)| {
                        let map = |v: usize| if v < 5 { v } else { 5 + perm[v - 5] };
                        let (x, y) = (map(a), map(b));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                relabelled.sort_unstable();
                if relabelled < minimal {
                    minimal = relabelled;
                }
            }
            assert_eq!(minimal, s.edges, "emitted structure is canonical");
            assert!(canon.insert(minimal), "duplicate structure");
        }
    }

    #[test]
    fn single_edge_orientation_feasibility() {
        let supply_to_demand = ForestPattern {
            terminal_count: 2,
            steiner_count: 0,
            edges: vec![(0, 1)],
            orientation: Some(vec![true]),
            balances: vec![1, -1],
        };
        assert!(pattern_feasible(&supply_to_demand));
        let reversed = ForestPattern {
            orientation: Some(vec![false]),
            ..supply_to_demand
        };
        assert!(!pattern_feasible(&reversed));
    }

    #[test]
    fn star_with_two_supplies_and_two_demands_is_feasible() {
        let star = ForestPattern {
            terminal_count: 4,
            steiner_count: 1,
            edges: vec![(0, 4), (1, 4), (2, 4), (3, 4)],
            orientation: Some(vec![true, true, false, false]),
            balances: vec![1, 1, -1, -1],
        };
        assert!(pattern_feasible(&star));
    }

    /// Feasibility oracle: try all bijections between supply and demand
    /// occurrences with a reachability check per pair.
    fn feasible_by_pairings(pattern: &ForestPattern) -> bool {
        let n = pattern.node_count();
        let mut reach = vec![vec![false; n]; n];
        for (v, row) in reach.iter_mut().enumerate() {
            row[v] = true;
        }
        for (e, &(a, b)) in pattern.edges.iter().enumerate() {
            match &pattern.orientation {
                Some(dirs) if !dirs[e] => reach[b][a] = true,
                Some(_) => reach[a][b] = true,
                None => {
                    reach[a][b] = true;
                    reach[b][a] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        let mut supplies = Vec::new();
        let mut demands = Vec::new();
        for (v, &b) in pattern.balances.iter().enumerate() {
            for _ in 0..b.abs() {
                if b > 0 {
                    supplies.push(v);
                } else {
                    demands.push(v);
                }
            }
        }
        if supplies.len() != demands.len() {
            return false;
        }
        fn rec(
            i: usize,
            supplies: &[usize],
            demands: &mut Vec<usize>,
            used: &mut Vec<bool>,
            reach: &[Vec<bool>],
        ) -> bool {
            if i == supplies.len() {
                return true;
            }
            for d in 0..demands.len() {
                if !used[d] && reach[supplies[i]][demands[d]] {
                    used[d] = true;
                    if rec(i + 1, supplies, demands, used, reach) {
                        return true;
                    }
                    used[d] = false;
                }
            }
            false
        }
        let mut used = vec![false; demands.len()];
        rec(0, &supplies, &mut demands.clone(), &mut used, &reach)
    }

    #[test]
    fn feasibility_matches_exhaustive_pairing_on_random_forests() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let r = rng.gen_range(2..=4usize);
            let structures = enumerate_structures(r, 2);
            let s = &structures[rng.gen_range(0..structures.len())];
            let edges = s.edges.clone();
            let orientation: Vec<bool> = (0..edges.len()).map(|_| rng.gen_bool(0.5)).collect();
            let mut balances: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2i64)).collect();
            let drift: i64 = balances.iter().sum();
            balances[0] -= drift;
            let pattern = ForestPattern {
                terminal_count: r,
                steiner_count: s.steiner_count,
                edges,
                orientation: Some(orientation),
                balances,
            };
            assert_eq!(pattern_feasible(&pattern), feasible_by_pairings(&pattern));
        }
    }
}
