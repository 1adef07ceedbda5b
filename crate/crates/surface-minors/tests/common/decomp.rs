//! Reference treewidth, random decompositions and property checks for the
//! separation routines.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use surface_minors::graph::{Graph, VertexId};
use surface_minors::treedecomp::{from_elimination_order, OneSeparation, SeparationSequence, TreeDecomposition};

/// Every graph on `n` vertices up to isomorphism, grown edge by edge.
pub fn graphs_on(n: usize) -> Vec<Graph> {
    let mut layer: BTreeMap<_, Graph> = BTreeMap::new();
    let empty = Graph::with_order(n, &[]).unwrap();
    layer.insert(empty.canonical_form(), empty);
    let mut all: Vec<Graph> = layer.values().cloned().collect();
    while !layer.is_empty() {
        let mut next = BTreeMap::new();
        for g in layer.values() {
            for a in 0..n as VertexId {
                for b in a + 1..n as VertexId {
                    if g.edge_between(a, b).is_none() {
                        let mut es = g.edges().to_vec();
                        es.push((a, b));
                        let h = Graph::with_order(n, &es).unwrap();
                        next.entry(h.canonical_form()).or_insert(h);
                    }
                }
            }
        }
        all.extend(next.values().cloned());
        layer = next;
    }
    all
}

/// Width of the elimination order: largest number of later neighbours in
/// the filled graph.
fn order_width(g: &Graph, order: &[usize]) -> usize {
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in g.edges() {
        adj[a as usize][b as usize] = true;
        adj[b as usize][a as usize] = true;
    }
    let mut gone = vec![false; n];
    let mut w = 0;
    for &v in order {
        let later: Vec<usize> = (0..n).filter(|&u| !gone[u] && u != v && adj[v][u]).collect();
        w = w.max(later.len());
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    w
}

/// Treewidth as the best elimination order over all permutations.
pub fn treewidth_by_permutations(g: &Graph) -> usize {
    let mut p: Vec<usize> = (0..g.n()).collect();
    let mut best = usize::MAX;
    loop {
        best = best.min(order_width(g, &p));
        if !super::next_permutation(&mut p) {
            return if g.n() == 0 { 0 } else { best };
        }
    }
}

/// Treewidth by the subset recursion `TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)`.
pub fn treewidth_by_subsets(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let nb: Vec<BTreeSet<usize>> = (0..n).map(|i| g.neighbors(i as VertexId).map(|w| w as usize).collect()).collect();
    let q = |s: &BTreeSet<usize>, v: usize| -> usize {
        let mut seen: BTreeSet<usize> = [v].into();
        let mut stack = vec![v];
        let mut out = BTreeSet::new();
        while let Some(x) = stack.pop() {
            for &y in &nb[x] {
                if s.contains(&y) {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                } else if y != v {
                    out.insert(y);
                }
            }
        }
        out.len()
    };
    let mut tw: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    tw.insert(vec![], 0);
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let best = s
            .iter()
            .map(|&v| {
                let rest: Vec<usize> = s.iter().copied().filter(|&u| u != v).collect();
                let set: BTreeSet<usize> = rest.iter().copied().collect();
                tw[&rest].max(q(&set, v))
            })
            .min()
            .unwrap();
        tw.insert(s, best);
    }
    tw[&(0..n).collect::<Vec<_>>()]
}

/// A random graph with a decomposition from a random elimination order,
/// sometimes padded with extra tree nodes whose bags copy a neighbour's.
pub fn random_decomposition<R: Rng>(rng: &mut R, max_n: usize) -> (Graph, TreeDecomposition) {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.05..0.6);
    let mut es = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if rng.gen_bool(p) {
                es.push((a, b));
            }
        }
    }
    let g = Graph::with_order(n, &es).unwrap();
    let mut order: Vec<VertexId> = g.vertices().to_vec();
    order.shuffle(rng);
    let mut td = from_elimination_order(&g, &order);
    for _ in 0..rng.gen_range(0..4) {
        let t = rng.gen_range(0..td.len());
        let mut bag = td.bags[t].clone();
        bag.retain(|_| rng.gen_bool(0.7));
        td.bags.push(bag);
        td.tree_edges.push((t, td.len() - 1));
    }
    (g, td)
}

/// A graph of small width on many vertices: a random tree, path or
/// 2-tree-like graph, with its min-fill decomposition.
pub fn random_thin<R: Rng>(rng: &mut R) -> (Graph, TreeDecomposition) {
    let n = rng.gen_range(24..=160);
    let mut es = Vec::new();
    match rng.gen_range(0..3) {
        0 => es.extend((1..n as VertexId).map(|v| (rng.gen_range(0..v), v))),
        1 => es.extend((1..n as VertexId).map(|v| (v - 1, v))),
        _ => {
            es.push((0, 1));
            for v in 2..n as VertexId {
                let (a, b) = es[rng.gen_range(0..es.len())];
                es.push((a, v));
                es.push((b, v));
            }
        }
    }
    let g = Graph::with_order(n, &es).unwrap();
    let td = from_elimination_order(&g, &surface_minors::treedecomp::min_fill_order(&g));
    (g, td)
}

fn subtree_ok(td: &TreeDecomposition, nodes: &[usize]) -> bool {
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    if set.is_empty() {
        return false;
    }
    let adj = td.adjacency();
    let mut seen: BTreeSet<usize> = [nodes[0]].into();
    let mut stack = vec![nodes[0]];
    while let Some(t) = stack.pop() {
        for &u in &adj[t] {
            if set.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == set.len()
}

fn union(td: &TreeDecomposition, nodes: &[usize]) -> BTreeSet<VertexId> {
    nodes.iter().flat_map(|&t| td.bags[t].iter().copied()).collect()
}

/// All 1-separations of the tree with the balance of the plain version,
/// smallest `t0` first: `(t0, T_1)` pairs.
pub fn brute_balanced(g: &Graph, td: &TreeDecomposition) -> Vec<(usize, Vec<usize>)> {
    let adj = td.adjacency();
    let mut out = Vec::new();
    for t0 in 0..td.len() {
        let bag0: BTreeSet<VertexId> = td.bags[t0].iter().copied().collect();
        let r = g.n() - bag0.len();
        // branches at t0
        let mut branches: Vec<Vec<usize>> = Vec::new();
        for &u in &adj[t0] {
            let mut seen: BTreeSet<usize> = [t0, u].into();
            let mut stack = vec![u];
            while let Some(t) = stack.pop() {
                for &w in &adj[t] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.remove(&t0);
            branches.push(seen.into_iter().collect());
        }
        for mask in 0u32..(1 << branches.len()) {
            let mut t1 = vec![t0];
            let mut t2 = vec![t0];
            for (i, b) in branches.iter().enumerate() {
                if mask >> i & 1 == 1 { &mut t1 } else { &mut t2 }.extend(b);
            }
            let s1 = union(td, &t1).difference(&bag0).count();
            let s2 = union(td, &t2).difference(&bag0).count();
            if 3 * s1 >= r && 3 * s1 <= 2 * r && 3 * s2 >= r && 3 * s2 <= 2 * r {
                t1.sort_unstable();
                out.push((t0, t1));
            }
        }
    }
    out
}

/// The inequalities of a balanced 1-separation, recomputed from scratch.
pub fn check_one_separation(g: &Graph, td: &TreeDecomposition, s: &OneSeparation) -> Result<(), String> {
    let all: BTreeSet<usize> = (0..td.len()).collect();
    let t1: BTreeSet<usize> = s.t1.iter().copied().collect();
    let t2: BTreeSet<usize> = s.t2.iter().copied().collect();
    if &t1 | &t2 != all || (&t1 & &t2) != [s.t0].into() || !subtree_ok(td, &s.t1) || !subtree_ok(td, &s.t2) {
        return Err(format!("not a 1-separation: {s:?}"));
    }
    let bag0: BTreeSet<VertexId> = td.bags[s.t0].iter().copied().collect();
    let r = g.n() - bag0.len();
    for side in [&s.t1, &s.t2] {
        let w = union(td, side).difference(&bag0).count();
        if 3 * w < r || 3 * w > 2 * r {
            return Err(format!("side weight {w} of {r} outside [1/3, 2/3]"));
        }
    }
    Ok(())
}

/// `⌊log_{4/3} 3k⌋` in floating point, away from integer boundaries.
fn log_bound(k: usize) -> usize {
    ((3.0 * k as f64).ln() / (4.0f64 / 3.0).ln()).floor() as usize
}

/// Both properties of a 1-separation sequence, recomputed from scratch.
pub fn check_sequence(td: &TreeDecomposition, k: usize, seq: &SeparationSequence) -> Result<(), String> {
    if seq.parts.len() != k {
        return Err(format!("{} parts, wanted {k}", seq.parts.len()));
    }
    let covered: BTreeSet<usize> = seq.parts.iter().flatten().copied().collect();
    if covered.len() != td.len() {
        return Err("parts do not cover the tree".into());
    }
    let sets: Vec<BTreeSet<usize>> = seq.parts.iter().map(|p| p.iter().copied().collect()).collect();
    let weights: Vec<usize> = seq.parts.iter().map(|p| union(td, p).len()).collect();
    for (i, p) in seq.parts.iter().enumerate() {
        if !subtree_ok(td, p) {
            return Err(format!("part {i} is not a subtree"));
        }
        let others: BTreeSet<usize> = (0..k).filter(|&j| j != i).flat_map(|j| sets[j].iter().copied()).collect();
        let boundary = sets[i].intersection(&others).count();
        if boundary > log_bound(k) {
            return Err(format!("part {i} has {boundary} shared nodes, bound {}", log_bound(k)));
        }
        for j in 0..k {
            if j != i && sets[i].intersection(&sets[j]).count() > 1 {
                return Err(format!("parts {i} and {j} share more than one node"));
            }
            if weights[i] > 3 * weights[j] {
                return Err(format!("weights {} and {} differ by more than 3", weights[i], weights[j]));
            }
        }
    }
    Ok(())
}
