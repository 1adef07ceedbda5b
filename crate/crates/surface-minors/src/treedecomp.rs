//! Tree decompositions: validation, exact and min-fill construction, and
//! balanced 1-separations of the decomposition tree.
//!
//! Nodes of the decomposition tree are `0..bags.len()`. A 1-separation
//! `(T_1, T_2)` splits the tree into two subtrees sharing one node `t_0`;
//! a 1-separation sequence is a cover of the tree by subtrees meeting
//! pairwise in at most one node.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Largest graph for the exact subset dynamic programme.
pub const EXACT_LIMIT: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TdJson {
    tree_edges: Vec<[usize; 2]>,
    bags: BTreeMap<usize, Vec<VertexId>>,
}

/// The violated condition of a tree decomposition.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    #[error("the tree edges do not form a tree on the bag nodes")]
    NotATree,
    #[error("bag {node} holds {vertex}, which is not a vertex of the graph")]
    UnknownVertex { node: usize, vertex: VertexId },
    #[error("axiom 1: vertex {0} is in no bag")]
    VertexNotCovered(VertexId),
    #[error("axiom 2: edge {0}-{1} is in no bag")]
    EdgeNotCovered(VertexId, VertexId),
    #[error("axiom 3: the bags holding {0} are not connected in the tree")]
    NotConnected(VertexId),
}

impl Violation {
    /// Which decomposition axiom fails; 0 for a malformed tree or bag.
    pub fn axiom(&self) -> u8 {
        match self {
            Violation::NotATree | Violation::UnknownVertex { .. } => 0,
            Violation::VertexNotCovered(_) => 1,
            Violation::EdgeNotCovered(..) => 2,
            Violation::NotConnected(_) => 3,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdError {
    #[error("invalid tree decomposition: {0}")]
    Invalid(Violation),
    #[error("bag {node} has {size} vertices, more than the allowed {limit}")]
    Hypothesis { node: usize, size: usize, limit: String },
    #[error("no 1-separation meets the balance bounds")]
    NoBalancedSplit,
    #[error("k must be at least 1")]
    ZeroParts,
    #[error("malformed decomposition JSON: {0}")]
    Json(String),
}

impl TreeDecomposition {
    /// Width: largest bag size minus one (0 for a decomposition of the
    /// empty graph).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Tree neighbours per node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// `|⋃_{t ∈ nodes} V_t|`.
    pub fn weight(&self, nodes: &[usize]) -> usize {
        nodes.iter().flat_map(|&t| self.bags[t].iter()).collect::<BTreeSet<_>>().len()
    }

    /// Check the tree and the three axioms, reporting the first failure.
    pub fn validate(&self, g: &Graph) -> Result<(), Violation> {
        let n = self.bags.len();
        if n == 0 || self.tree_edges.len() + 1 != n || self.tree_edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err(Violation::NotATree);
        }
        let adj = self.adjacency();
        if reach(&adj, 0, |_| true).len() != n {
            return Err(Violation::NotATree);
        }
        let mut holders: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !g.has_vertex(v) {
                    return Err(Violation::UnknownVertex { node: t, vertex: v });
                }
                holders.entry(v).or_default().push(t);
            }
        }
        for &v in g.vertices() {
            if !holders.contains_key(&v) {
                return Err(Violation::VertexNotCovered(v));
            }
        }
        let sets: Vec<BTreeSet<VertexId>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for &(a, b) in g.edges() {
            if !sets.iter().any(|s| s.contains(&a) && s.contains(&b)) {
                return Err(Violation::EdgeNotCovered(a, b));
            }
        }
        for (&v, ts) in &holders {
            let inside: BTreeSet<usize> = ts.iter().copied().collect();
            if reach(&adj, ts[0], |t| inside.contains(&t)).len() != ts.len() {
                return Err(Violation::NotConnected(v));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let j = TdJson {
            tree_edges: self.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
            bags: self.bags.iter().cloned().enumerate().collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<TreeDecomposition, TdError> {
        let j: TdJson = serde_json::from_str(s).map_err(|e| TdError::Json(e.to_string()))?;
        let n = j.bags.len();
        if j.bags.keys().copied().ne(0..n) {
            return Err(TdError::Json("bag nodes must be 0..n".into()));
        }
        Ok(TreeDecomposition {
            bags: j.bags.into_values().map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            }).collect(),
            tree_edges: j.tree_edges.into_iter().map(|[a, b]| (a, b)).collect(),
        })
    }
}

/// Nodes reachable from `s` through nodes accepted by `keep`.
fn reach(adj: &[Vec<usize>], s: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut stack = vec![s];
    let mut out = vec![s];
    while let Some(t) = stack.pop() {
        for &u in &adj[t] {
            if !seen[u] && keep(u) {
                seen[u] = true;
                stack.push(u);
                out.push(u);
            }
        }
    }
    out
}

// ---------- construction ----------

/// Decomposition from an elimination order: each vertex's bag is itself and
/// its later neighbours in the filled graph, hung below the bag of the
/// earliest of those neighbours.
pub fn from_elimination_order(g: &Graph, order: &[VertexId]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "order must list every vertex once");
    if n == 0 {
        return TreeDecomposition { bags: vec![vec![]], tree_edges: vec![] };
    }
    let pos: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut nb: Vec<BTreeSet<usize>> =
        (0..n).map(|i| g.neighbors(order[i]).map(|w| pos[&w]).collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for i in 0..n {
        let later: Vec<usize> = nb[i].iter().copied().filter(|&j| j > i).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    nb[a].insert(b);
                }
            }
        }
        let mut bag: Vec<VertexId> = std::iter::once(order[i]).chain(later.iter().map(|&j| order[j])).collect();
        bag.sort_unstable();
        bags.push(bag);
        match later.first() {
            Some(&p) => tree_edges.push((i, p)),
            None => roots.push(i),
        }
    }
    // one tree per component; chain the roots
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, tree_edges }
}

/// Min-fill elimination order, ties to the smallest vertex id.
pub fn min_fill_order(g: &Graph) -> Vec<VertexId> {
    let mut nb: BTreeMap<VertexId, BTreeSet<VertexId>> = g.vertices().iter().map(|&v| (v, g.neighbors(v).collect())).collect();
    let mut order = Vec::with_capacity(g.n());
    while !nb.is_empty() {
        let fill = |v: &VertexId| -> usize {
            let ns: Vec<VertexId> = nb[v].iter().copied().collect();
            let mut f = 0;
            for (i, a) in ns.iter().enumerate() {
                for b in &ns[i + 1..] {
                    if !nb[a].contains(b) {
                        f += 1;
                    }
                }
            }
            f
        };
        let v = *nb.keys().min_by_key(|v| (fill(v), **v)).unwrap();
        let ns = nb.remove(&v).unwrap();
        for &a in &ns {
            let s = nb.get_mut(&a).unwrap();
            s.remove(&v);
            s.extend(ns.iter().copied().filter(|&b| b != a));
        }
        order.push(v);
    }
    order
}

/// Exact treewidth and an optimal elimination order, by dynamic
/// programming over vertex subsets; `None` above [`EXACT_LIMIT`] vertices.
pub fn exact_treewidth(g: &Graph) -> Option<(usize, Vec<VertexId>)> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return None;
    }
    if n == 0 {
        return Some((0, vec![]));
    }
    let adj: Vec<u32> = (0..n).map(|i| g.adj_idx(i).iter().fold(0u32, |m, &(j, _)| m | 1 << j)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // vertices outside s ∪ {v} reachable from v through s
    let q = |s: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut nb = 0;
            let mut f = frontier;
            while f != 0 {
                nb |= adj[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            frontier = nb & s & !comp;
            comp |= frontier;
        }
        let mut nb = 0;
        let mut c = comp;
        while c != 0 {
            nb |= adj[c.trailing_zeros() as usize];
            c &= c - 1;
        }
        nb & !s & !(1 << v)
    };
    let heuristic = min_fill_order(g);
    let upper = from_elimination_order(g, &heuristic).width();
    let lower = degeneracy(&adj);
    let to_ids = |order: Vec<usize>| -> Vec<VertexId> { order.into_iter().map(|i| g.vertex_at(i)).collect() };
    for k in lower..upper {
        // layer by layer: sets eliminable with every Q at most k
        let mut parent: HashMap<u32, (u32, usize)> = HashMap::new();
        let mut layer = vec![0u32];
        let mut done = None;
        'grow: while !layer.is_empty() {
            let mut next = Vec::new();
            for &s in &layer {
                if n - s.count_ones() as usize <= k + 1 {
                    done = Some(s);
                    break 'grow;
                }
                let mut rest = full & !s;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let t = s | 1 << v;
                    if !parent.contains_key(&t) && q(s, v).count_ones() as usize <= k {
                        parent.insert(t, (s, v));
                        next.push(t);
                    }
                }
            }
            layer = next;
        }
        if let Some(mut s) = done {
            let mut tail: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 0).collect();
            let mut order = Vec::new();
            while s != 0 {
                let (p, v) = parent[&s];
                order.push(v);
                s = p;
            }
            order.reverse();
            order.append(&mut tail);
            return Some((k, to_ids(order)));
        }
    }
    Some((upper, heuristic))
}

/// Largest minimum degree over subgraphs, a lower bound on treewidth.
fn degeneracy(adj: &[u32]) -> usize {
    let mut alive: u32 = adj.iter().enumerate().fold(0, |m, (i, _)| m | 1 << i);
    let mut best = 0;
    while alive != 0 {
        let (v, d) = (0..adj.len())
            .filter(|&v| alive >> v & 1 == 1)
            .map(|v| (v, (adj[v] & alive).count_ones() as usize))
            .min_by_key(|x| x.1)
            .unwrap();
        best = best.max(d);
        alive &= !(1 << v);
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct Computed {
    pub decomposition: TreeDecomposition,
    /// True when the width is the treewidth.
    pub exact: bool,
    /// Exact mode was asked for but the graph is above [`EXACT_LIMIT`].
    pub degraded: bool,
}

pub fn compute_tree_decomposition(g: &Graph, mode: Mode) -> Computed {
    if mode == Mode::Exact {
        if let Some((_, order)) = exact_treewidth(g) {
            return Computed { decomposition: from_elimination_order(g, &order), exact: true, degraded: false };
        }
    }
    Computed {
        decomposition: from_elimination_order(g, &min_fill_order(g)),
        exact: false,
        degraded: mode == Mode::Exact,
    }
}

// ---------- balanced separations ----------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSeparation {
    pub t0: usize,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
    /// `|⋃_{t ∈ T_i} V_t − V_{t_0}|` for both sides, and `|V(H) − V_{t_0}|`.
    pub outside1: usize,
    pub outside2: usize,
    pub outside_total: usize,
    /// `|⋃_{t ∈ T_i} V_t|` for both sides.
    pub weight1: usize,
    pub weight2: usize,
}

/// Branches of the subtree `part` at `t0`, each with its vertices outside
/// `V_{t0}`.
fn branches(td: &TreeDecomposition, adj: &[Vec<usize>], part: &BTreeSet<usize>, t0: usize) -> Vec<(Vec<usize>, usize)> {
    let bag0: BTreeSet<VertexId> = td.bags[t0].iter().copied().collect();
    adj[t0]
        .iter()
        .filter(|u| part.contains(u))
        .map(|&u| {
            let nodes = reach(adj, u, |t| t != t0 && part.contains(&t));
            let out: BTreeSet<VertexId> =
                nodes.iter().flat_map(|&t| td.bags[t].iter().copied()).filter(|v| !bag0.contains(v)).collect();
            (nodes, out.len())
        })
        .collect()
}

/// For every reachable total of branch weights, one set of branches
/// reaching it (as a bit vector over branches).
fn subset_sums(weights: &[usize]) -> BTreeMap<usize, Vec<bool>> {
    let mut reach: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    reach.insert(0, vec![false; weights.len()]);
    for (i, &w) in weights.iter().enumerate() {
        let add: Vec<(usize, Vec<bool>)> = reach
            .iter()
            .filter(|(s, _)| !reach.contains_key(&(*s + w)))
            .map(|(s, pick)| {
                let mut p = pick.clone();
                p[i] = true;
                (s + w, p)
            })
            .collect();
        reach.extend(add);
    }
    reach
}

/// First node `t0` (by id) of the subtree `part` with a grouping of its
/// branches accepted by `ok(s)`, where `s` is the outside-`V_{t0}` weight
/// of the first side; among a node's feasible sums the one closest to half
/// of the total wins.
fn split(
    td: &TreeDecomposition,
    adj: &[Vec<usize>],
    part: &BTreeSet<usize>,
    ok: impl Fn(usize, usize, usize) -> bool,
) -> Option<OneSeparation> {
    let all: BTreeSet<VertexId> = part.iter().flat_map(|&t| td.bags[t].iter().copied()).collect();
    for &t0 in part {
        let br = branches(td, adj, part, t0);
        let b = td.bags[t0].len();
        let r = all.len() - b;
        let weights: Vec<usize> = br.iter().map(|x| x.1).collect();
        let sums = subset_sums(&weights);
        let best = sums.iter().filter(|(&s, _)| ok(s, r, b)).min_by_key(|(&s, _)| ((2 * s).abs_diff(r), s));
        if let Some((&s, pick)) = best {
            let mut t1 = vec![t0];
            let mut t2 = vec![t0];
            for (i, (nodes, _)) in br.iter().enumerate() {
                if pick[i] { &mut t1 } else { &mut t2 }.extend(nodes.iter().copied());
            }
            t1.sort_unstable();
            t2.sort_unstable();
            return Some(OneSeparation {
                t0,
                t1,
                t2,
                outside1: s,
                outside2: r - s,
                outside_total: r,
                weight1: s + b,
                weight2: r - s + b,
            });
        }
    }
    None
}

/// A 1-separation with both sides holding between a third and two thirds
/// of the vertices outside `V_{t0}`. Such a split does not always exist
/// (two bags `{x, 1}`, `{1, y}` have none), hence the error.
pub fn balanced_1_separation(g: &Graph, td: &TreeDecomposition) -> Result<OneSeparation, TdError> {
    td.validate(g).map_err(TdError::Invalid)?;
    let part: BTreeSet<usize> = (0..td.len()).collect();
    // r ≤ 3s ≤ 2r for both sides
    split(td, &td.adjacency(), &part, |s, r, _| r <= 3 * s && 3 * s <= 2 * r && r <= 3 * (r - s) && 3 * (r - s) <= 2 * r)
        .ok_or(TdError::NoBalancedSplit)
}

/// A 1-separation of the subtree `part` with both sides' weights in
/// `[W/3, (2/3 + 1/(3a)) W]`, `W` the weight of the part. Requires every
/// bag in the part to hold at most `W / a` vertices.
pub fn refined_1_separation(td: &TreeDecomposition, part: &[usize], a: usize) -> Result<OneSeparation, TdError> {
    let part: BTreeSet<usize> = part.iter().copied().collect();
    let w = td.weight(&part.iter().copied().collect::<Vec<_>>());
    if let Some(&t) = part.iter().find(|&&t| td.bags[t].len() * a > w) {
        return Err(TdError::Hypothesis { node: t, size: td.bags[t].len(), limit: format!("{w}/{a}") });
    }
    let fits = |x: usize| w <= 3 * x && 3 * a * x <= (2 * a + 1) * w;
    split(td, &td.adjacency(), &part, |s, r, b| fits(s + b) && fits(r - s + b)).ok_or(TdError::NoBalancedSplit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationSequence {
    /// Subtrees as sorted node lists.
    pub parts: Vec<Vec<usize>>,
    /// `|⋃_{t ∈ T_i} V_t|`.
    pub weights: Vec<usize>,
    /// Nodes of `T_i` that lie in some other part.
    pub boundary: Vec<usize>,
    /// `|T_i ∩ T_j|` for `i < j` where nonzero.
    pub intersections: Vec<(usize, usize, usize)>,
}

impl SeparationSequence {
    fn new(td: &TreeDecomposition, parts: Vec<Vec<usize>>) -> SeparationSequence {
        let sets: Vec<BTreeSet<usize>> = parts.iter().map(|p| p.iter().copied().collect()).collect();
        let weights = parts.iter().map(|p| td.weight(p)).collect();
        let mut intersections = Vec::new();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let c = sets[i].intersection(&sets[j]).count();
                if c > 0 {
                    intersections.push((i, j, c));
                }
            }
        }
        let boundary = (0..sets.len())
            .map(|i| sets[i].iter().filter(|t| (0..sets.len()).any(|j| j != i && sets[j].contains(t))).count())
            .collect();
        SeparationSequence { parts, weights, boundary, intersections }
    }

    /// Largest weight over smallest.
    pub fn max_ratio_ok(&self, r: usize) -> bool {
        let hi = self.weights.iter().max().copied().unwrap_or(0);
        let lo = self.weights.iter().min().copied().unwrap_or(0);
        hi <= r * lo
    }
}

/// `⌊log_{4/3}(3k)⌋`: the largest `n` with `4^n ≤ 3k · 3^n`.
pub fn boundary_bound(k: usize) -> usize {
    let target = 3 * k as u128;
    let (mut p4, mut p3, mut n) = (1u128, 1u128, 0);
    loop {
        let (q4, q3) = (p4 * 4, p3 * 3);
        if q4 > target * q3 {
            return n;
        }
        p4 = q4;
        p3 = q3;
        n += 1;
    }
}

/// `k` subtrees covering the tree, built by repeatedly splitting the
/// heaviest part with [`refined_1_separation`] at `a = 4`. Requires every
/// bag to hold at most `|V(H)| / (4k)` vertices.
pub fn balanced_separation_sequence(g: &Graph, td: &TreeDecomposition, k: usize) -> Result<SeparationSequence, TdError> {
    if k == 0 {
        return Err(TdError::ZeroParts);
    }
    td.validate(g).map_err(TdError::Invalid)?;
    let n = g.n();
    if let Some(t) = (0..td.len()).find(|&t| td.bags[t].len() * 4 * k > n) {
        return Err(TdError::Hypothesis { node: t, size: td.bags[t].len(), limit: format!("{n}/{}", 4 * k) });
    }
    let mut parts: Vec<Vec<usize>> = vec![(0..td.len()).collect()];
    while parts.len() < k {
        let i = (0..parts.len()).max_by_key(|&i| (td.weight(&parts[i]), std::cmp::Reverse(i))).unwrap();
        let s = refined_1_separation(td, &parts[i], 4)?;
        parts[i] = s.t1;
        parts.insert(i + 1, s.t2);
    }
    Ok(SeparationSequence::new(td, parts))
}
