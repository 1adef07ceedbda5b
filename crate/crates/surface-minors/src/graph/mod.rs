//! Simple undirected graphs with stable vertex ids.
//!
//! Vertex ids are arbitrary `u32` labels kept in sorted order; edge ids are
//! positions in the sorted edge list, so they are stable under every
//! non-mutating query. Minor operations return fresh graphs.

mod blocks;
mod canon;
mod graph6;
mod minors;
mod separator;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use blocks::{Block, Bridge};
pub use canon::CanonicalForm;
pub use minors::MinorOp;

pub type VertexId = u32;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("edge {0}-{1} uses a vertex that is not in the graph")]
    UnknownVertex(VertexId, VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("malformed graph6 at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("malformed graph JSON: {0}")]
    Json(String),
    #[error("no such vertex {0}")]
    NoVertex(VertexId),
    #[error("no such edge {0}")]
    NoEdge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    // by vertex index: (neighbour index, edge id), sorted by neighbour index
    adj: Vec<Vec<(usize, EdgeId)>>,
}

/// A subgraph given by vertex and edge ids of a host graph. Both lists are
/// sorted and the endpoints of every edge are among the vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Subgraph {
    pub fn from_edges(g: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Subgraph {
        let edges: BTreeSet<EdgeId> = edges.into_iter().collect();
        let mut vs = BTreeSet::new();
        for &e in &edges {
            let (u, v) = g.edge(e);
            vs.insert(u);
            vs.insert(v);
        }
        Subgraph { vertices: vs.into_iter().collect(), edges: edges.into_iter().collect() }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
}

impl Graph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Graph, GraphError> {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        vs.sort_unstable();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0]));
            }
        }
        let mut es = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if vs.binary_search(&a).is_err() || vs.binary_search(&b).is_err() {
                return Err(GraphError::UnknownVertex(a, b));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        for w in es.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::ParallelEdge(w[0].0, w[0].1));
            }
        }
        Ok(Graph::build(vs, es))
    }

    /// Vertices `0..n`.
    pub fn with_order(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Graph, GraphError> {
        Graph::new(0..n as VertexId, edges.iter().copied())
    }

    /// Like `new` but silently drops loops and merges parallel edges.
    pub fn simplified(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Graph {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        let mut es: Vec<(VertexId, VertexId)> =
            edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        es.sort_unstable();
        es.dedup();
        Graph::build(vs, es)
    }

    fn build(vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)>) -> Graph {
        let mut adj = vec![Vec::new(); vertices.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            let ia = vertices.binary_search(&a).unwrap();
            let ib = vertices.binary_search(&b).unwrap();
            adj[ia].push((ib, e));
            adj[ib].push((ia, e));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { vertices, edges, adj }
    }

    pub fn complete(n: usize) -> Graph {
        let mut es = Vec::new();
        for i in 0..n as VertexId {
            for j in i + 1..n as VertexId {
                es.push((i, j));
            }
        }
        Graph::build((0..n as VertexId).collect(), es)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut es = Vec::new();
        for i in 0..a as VertexId {
            for j in 0..b as VertexId {
                es.push((i, a as VertexId + j));
            }
        }
        Graph::new(0..(a + b) as VertexId, es).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let es: Vec<_> = (0..n as VertexId).map(|i| (i, (i + 1) % n as VertexId)).collect();
        Graph::new(0..n as VertexId, es).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let es: Vec<_> = (1..n as VertexId).map(|i| (i - 1, i)).collect();
        Graph::new(0..n as VertexId, es).unwrap()
    }

    /// Hub 0 joined to a rim cycle 1..=k.
    pub fn wheel(k: usize) -> Graph {
        let mut es = Vec::new();
        for i in 1..=k as VertexId {
            es.push((0, i));
            es.push((i, if i == k as VertexId { 1 } else { i + 1 }));
        }
        Graph::new(0..=k as VertexId, es).unwrap()
    }

    /// Disjoint union; the vertices of `other` are shifted past the largest id here.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertices.last().map_or(0, |&v| v + 1);
        let vs = self.vertices.iter().copied().chain(other.vertices.iter().map(|&v| v + shift));
        let es = self.edges.iter().copied().chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift)));
        Graph::new(vs, es).unwrap()
    }

    /// Identify vertex `a` of `self` with vertex `b` of `other` (a 1-sum).
    pub fn one_sum(&self, a: VertexId, other: &Graph, b: VertexId) -> Graph {
        let shift = self.vertices.last().map_or(0, |&v| v + 1);
        let map = |v: VertexId| if v == b { a } else { v + shift };
        let vs = self.vertices.iter().copied().chain(other.vertices.iter().filter(|&&v| v != b).map(|&v| v + shift));
        let es = self.edges.iter().copied().chain(other.edges.iter().map(|&(x, y)| (map(x), map(y))));
        Graph::new(vs, es).unwrap()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn idx(&self, v: VertexId) -> usize {
        self.index_of(v).unwrap_or_else(|| panic!("vertex {v} not in graph"))
    }

    pub fn vertex_at(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    /// Adjacency by dense index: `(neighbour index, edge id)`.
    pub fn adj_idx(&self, i: usize) -> &[(usize, EdgeId)] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[self.idx(v)].iter().map(move |&(j, _)| self.vertices[j])
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.adj[self.idx(v)].iter().map(|&(_, e)| e)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[self.idx(v)].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp.into_iter().map(|i| self.vertices[i]).collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub fn induced(&self, vs: &[VertexId]) -> Graph {
        let set: BTreeSet<VertexId> = vs.iter().copied().collect();
        let es = self.edges.iter().copied().filter(|(a, b)| set.contains(a) && set.contains(b));
        Graph::new(set.iter().copied(), es).unwrap()
    }

    /// The graph made of the given edges (and their endpoints), with the map
    /// from new edge ids back to ids in `self`.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> (Graph, Vec<EdgeId>) {
        let sub = Subgraph::from_edges(self, edges.iter().copied());
        let g = Graph::new(sub.vertices.iter().copied(), sub.edges.iter().map(|&e| self.edges[e])).unwrap();
        let back = g.edges.iter().map(|&(a, b)| self.edge_between(a, b).unwrap()).collect();
        (g, back)
    }

    pub fn subgraph_graph(&self, sub: &Subgraph) -> Graph {
        Graph::new(sub.vertices.iter().copied(), sub.edges.iter().map(|&e| self.edges[e])).unwrap()
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<Graph, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::NoVertex(v));
        }
        let vs = self.vertices.iter().copied().filter(|&x| x != v);
        let es = self.edges.iter().copied().filter(|&(a, b)| a != v && b != v);
        Ok(Graph::build(vs.collect(), es.collect()))
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        if e >= self.m() {
            return Err(GraphError::NoEdge(e));
        }
        let mut es = self.edges.clone();
        es.remove(e);
        Ok(Graph::build(self.vertices.clone(), es))
    }

    /// Contract an edge; the merged vertex keeps the lower id, parallel
    /// edges are merged.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        if e >= self.m() {
            return Err(GraphError::NoEdge(e));
        }
        let (keep, gone) = self.edges[e];
        let vs = self.vertices.iter().copied().filter(|&x| x != gone);
        let es = self.edges.iter().map(|&(a, b)| {
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            (a, b)
        });
        Ok(Graph::simplified(vs, es))
    }

    /// Same graph with vertices renamed to `0..n` in id order.
    pub fn compact(&self) -> Graph {
        let es = self.edges.iter().map(|&(a, b)| (self.idx(a) as VertexId, self.idx(b) as VertexId));
        Graph::new(0..self.n() as VertexId, es).unwrap()
    }

    fn json_form(&self) -> GraphJson {
        let contiguous = self.vertices.iter().enumerate().all(|(i, &v)| v as usize == i);
        GraphJson {
            n: self.n(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            vertices: if contiguous { None } else { Some(self.vertices.clone()) },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_form()).unwrap()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.json_form()).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Graph, GraphError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::from_json_value(&v)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Graph, GraphError> {
        let j: GraphJson = serde_json::from_value(v.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
        let vs = match j.vertices {
            Some(vs) => {
                if vs.len() != j.n {
                    return Err(GraphError::Json(format!("n = {} but {} vertex ids", j.n, vs.len())));
                }
                vs
            }
            None => (0..j.n as VertexId).collect(),
        };
        Graph::new(vs, j.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    pub fn from_graph6(s: &str) -> Result<Graph, GraphError> {
        graph6::decode(s)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self)
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.m() == other.m() && self.canonical_form() == other.canonical_form()
    }

    pub fn one_step_minors(&self) -> Vec<(MinorOp, Graph)> {
        minors::one_step_minors(self)
    }

    pub fn apply_minor_op(&self, op: &MinorOp) -> Result<Graph, GraphError> {
        op.apply(self)
    }

    pub fn blocks(&self) -> Vec<Block> {
        blocks::blocks(self)
    }

    pub fn cutvertices(&self) -> Vec<VertexId> {
        blocks::cutvertices(self)
    }

    pub fn bridges_on(&self, sub: &Subgraph) -> Vec<Bridge> {
        blocks::bridges_on(self, sub)
    }

    pub fn find_separator(&self, k: usize) -> Option<Vec<VertexId>> {
        separator::find_separator(self, k)
    }

    /// All cycles as closed vertex sequences starting at their smallest
    /// vertex, second vertex smaller than the last. Stops after `cap` cycles.
    pub fn cycles(&self, cap: usize) -> Vec<Vec<VertexId>> {
        let n = self.n();
        let mut out = Vec::new();
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        for s in 0..n {
            if out.len() >= cap {
                break;
            }
            path.clear();
            path.push(s);
            on_path[s] = true;
            self.cycle_dfs(s, s, &mut path, &mut on_path, &mut out, cap);
            on_path[s] = false;
        }
        out
    }

    fn cycle_dfs(
        &self,
        s: usize,
        x: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
        cap: usize,
    ) {
        for &(y, _) in &self.adj[x] {
            if out.len() >= cap {
                return;
            }
            if y == s && path.len() >= 3 && path[1] < *path.last().unwrap() {
                out.push(path.iter().map(|&i| self.vertices[i]).collect());
            } else if y > s && !on_path[y] {
                on_path[y] = true;
                path.push(y);
                self.cycle_dfs(s, y, path, on_path, out, cap);
                path.pop();
                on_path[y] = false;
            }
        }
    }

    /// Edge ids of a closed vertex sequence, or `None` if some step is not an edge.
    pub fn cycle_edges(&self, cyc: &[VertexId]) -> Option<Vec<EdgeId>> {
        let l = cyc.len();
        (0..l).map(|i| self.edge_between(cyc[i], cyc[(i + 1) % l])).collect()
    }

    /// Whether `cyc` is a cycle of this graph: at least three distinct
    /// vertices, consecutive ones adjacent.
    pub fn is_cycle(&self, cyc: &[VertexId]) -> bool {
        let distinct: BTreeSet<_> = cyc.iter().collect();
        cyc.len() >= 3 && distinct.len() == cyc.len() && self.cycle_edges(cyc).is_some()
    }

    /// All simple paths from `a` to `b` as vertex sequences (a != b).
    pub fn paths(&self, a: VertexId, b: VertexId, cap: usize) -> Vec<Vec<VertexId>> {
        let (ia, ib) = (self.idx(a), self.idx(b));
        let mut out = Vec::new();
        let mut on = vec![false; self.n()];
        let mut path = vec![ia];
        on[ia] = true;
        self.path_dfs(ib, &mut path, &mut on, &mut out, cap);
        out
    }

    fn path_dfs(&self, t: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<VertexId>>, cap: usize) {
        let x = *path.last().unwrap();
        for &(y, _) in &self.adj[x] {
            if out.len() >= cap {
                return;
            }
            if on[y] {
                continue;
            }
            if y == t {
                let mut p: Vec<VertexId> = path.iter().map(|&i| self.vertices[i]).collect();
                p.push(self.vertices[t]);
                out.push(p);
                continue;
            }
            on[y] = true;
            path.push(y);
            self.path_dfs(t, path, on, out, cap);
            path.pop();
            on[y] = false;
        }
    }

    /// BFS spanning forest: for each vertex index its parent edge, roots get `None`.
    pub fn bfs_forest(&self) -> Vec<Option<EdgeId>> {
        let mut parent = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(e);
                        queue.push_back(y);
                    }
                }
            }
        }
        parent
    }
}
