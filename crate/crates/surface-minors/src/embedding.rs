//! Signed rotation systems and facial walks.
//!
//! A dart is `2e + side`; side 0 runs from the smaller endpoint of edge `e`
//! to the larger. Faces are traced on flags `(dart, orientation)`: crossing
//! an edge of signature -1 flips the orientation, and the next dart is the
//! rotation successor (or predecessor, when reversed) at the head. Every face
//! shows up as two flag orbits, one per direction.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, VertexId};

pub type Dart = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rotation at vertex {0} is not a cyclic order of its incident edges")]
    BadRotation(VertexId),
    #[error("signature of edge {0}-{1} must be +1 or -1")]
    BadSignature(VertexId, VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed embedding JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    graph: Graph,
    // by vertex index, cyclic, starting at the smallest edge id
    rot: Vec<Vec<EdgeId>>,
    sig: Vec<i8>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
}

/// One facial walk: darts in traversal order; `vertices[i]` is the tail of `darts[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    pub darts: Vec<Dart>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Distinct vertices on the walk, sorted.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Smallest rotation of the vertex sequence over both directions.
    pub fn canonical_vertices(&self) -> Vec<VertexId> {
        FaceWalk::canonical_sequence(&self.vertices)
    }

    /// Smallest rotation of a cyclic sequence over both directions.
    pub fn canonical_sequence(seq: &[VertexId]) -> Vec<VertexId> {
        let mut best: Option<Vec<VertexId>> = None;
        let fwd = seq.to_vec();
        let mut rev = fwd.clone();
        rev.reverse();
        for seq in [&fwd, &rev] {
            for k in 0..seq.len() {
                let cand: Vec<VertexId> = seq[k..].iter().chain(seq[..k].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Cyclic edge sequence up to rotation and reversal, for comparing faces
    /// across embeddings of different graphs on the same vertex ids.
    pub fn canonical_edge_walk(&self, g: &Graph) -> Vec<(VertexId, VertexId)> {
        let es: Vec<(VertexId, VertexId)> = self.edges.iter().map(|&e| g.edge(e)).collect();
        let mut best: Option<Vec<(VertexId, VertexId)>> = None;
        let mut rev = es.clone();
        rev.reverse();
        for seq in [&es, &rev] {
            for k in 0..seq.len() {
                let cand: Vec<_> = seq[k..].iter().chain(seq[..k].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }
}

/// Lexicographic successor in place; false (and unchanged) at the last one.
fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn canonical_cycle(mut r: Vec<EdgeId>) -> Vec<EdgeId> {
    if let Some(k) = r.iter().enumerate().min_by_key(|x| x.1).map(|x| x.0) {
        r.rotate_left(k);
    }
    r
}

impl Embedding {
    /// From per-vertex cyclic edge orders (indexed like `graph.vertices()`)
    /// and per-edge signatures.
    pub fn from_parts(graph: Graph, rot: Vec<Vec<EdgeId>>, sig: Vec<i8>) -> Result<Embedding, EmbeddingError> {
        if rot.len() != graph.n() || sig.len() != graph.m() {
            return Err(EmbeddingError::Json("rotation or signature has the wrong length".into()));
        }
        for (i, r) in rot.iter().enumerate() {
            let mut have: Vec<EdgeId> = r.clone();
            have.sort_unstable();
            let mut want: Vec<EdgeId> = graph.adj_idx(i).iter().map(|&(_, e)| e).collect();
            want.sort_unstable();
            if have != want {
                return Err(EmbeddingError::BadRotation(graph.vertex_at(i)));
            }
        }
        for (e, &s) in sig.iter().enumerate() {
            if s != 1 && s != -1 {
                let (a, b) = graph.edge(e);
                return Err(EmbeddingError::BadSignature(a, b));
            }
        }
        let rot = rot.into_iter().map(canonical_cycle).collect();
        let mut emb = Embedding { graph, rot, sig, next: Vec::new(), prev: Vec::new() };
        emb.rebuild();
        Ok(emb)
    }

    /// From per-vertex neighbour orders keyed by vertex id.
    pub fn from_neighbor_rotation(
        graph: Graph,
        rotation: &BTreeMap<VertexId, Vec<VertexId>>,
        negative: &[(VertexId, VertexId)],
    ) -> Result<Embedding, EmbeddingError> {
        let mut rot = Vec::with_capacity(graph.n());
        for &v in graph.vertices() {
            let nb = rotation.get(&v).cloned().unwrap_or_default();
            let mut r = Vec::with_capacity(nb.len());
            for w in nb {
                r.push(graph.edge_between(v, w).ok_or(EmbeddingError::BadRotation(v))?);
            }
            rot.push(r);
        }
        let mut sig = vec![1i8; graph.m()];
        for &(a, b) in negative {
            let e = graph.edge_between(a, b).ok_or(EmbeddingError::BadSignature(a, b))?;
            sig[e] = -1;
        }
        Embedding::from_parts(graph, rot, sig)
    }

    /// Rotation in increasing edge id order, all signatures +1.
    pub fn default_for(graph: &Graph) -> Embedding {
        let rot = (0..graph.n()).map(|i| graph.adj_idx(i).iter().map(|&(_, e)| e).collect()).collect();
        Embedding::from_parts(graph.clone(), rot, vec![1; graph.m()]).unwrap()
    }

    /// Visit every embedding with signature +1 on a BFS spanning forest: all
    /// cyclic orders at every vertex, all signatures on the other edges. Each
    /// equivalence class appears at least once. Stops early (returning false)
    /// when `visit` returns false.
    pub fn for_each(graph: &Graph, mut visit: impl FnMut(&Embedding) -> bool) -> bool {
        let n = graph.n();
        let tree = graph.bfs_forest();
        let cotree: Vec<EdgeId> = {
            let t: BTreeSet<EdgeId> = tree.iter().flatten().copied().collect();
            (0..graph.m()).filter(|e| !t.contains(e)).collect()
        };
        // rotations as permutations of the tail after a fixed first edge
        // sorted, so the fixed first edge is the smallest and rotations stay canonical
        let base: Vec<Vec<EdgeId>> = (0..n)
            .map(|i| {
                let mut r: Vec<EdgeId> = graph.adj_idx(i).iter().map(|&(_, e)| e).collect();
                r.sort_unstable();
                r
            })
            .collect();
        assert!(cotree.len() < 64, "too many cotree edges to enumerate");
        let mut perms: Vec<Vec<EdgeId>> = base.clone();
        let mut emb = Embedding::default_for(graph);
        loop {
            let mut sig = vec![1i8; graph.m()];
            for mask in 0u64..(1u64 << cotree.len()) {
                for (k, &e) in cotree.iter().enumerate() {
                    sig[e] = if mask >> k & 1 == 1 { -1 } else { 1 };
                }
                emb.rot.clone_from(&perms);
                emb.sig.clone_from(&sig);
                emb.rebuild();
                if !visit(&emb) {
                    return false;
                }
            }
            // advance the rotation odometer
            let mut i = 0;
            loop {
                if i == n {
                    return true;
                }
                if perms[i].len() > 2 && next_permutation(&mut perms[i][1..]) {
                    break;
                }
                perms[i][1..].copy_from_slice(&base[i][1..]);
                i += 1;
            }
        }
    }

    fn rebuild(&mut self) {
        let m = self.graph.m();
        self.next = vec![0; 2 * m];
        self.prev = vec![0; 2 * m];
        for (i, r) in self.rot.iter().enumerate() {
            let v = self.graph.vertex_at(i);
            let k = r.len();
            for j in 0..k {
                let d = self.dart_from(r[j], v);
                let dn = self.dart_from(r[(j + 1) % k], v);
                self.next[d] = dn;
                self.prev[dn] = d;
            }
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Cyclic edge order at vertex index `i`.
    pub fn rotation_idx(&self, i: usize) -> &[EdgeId] {
        &self.rot[i]
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rot[self.graph.idx(v)]
    }

    pub fn neighbor_rotation(&self, v: VertexId) -> Vec<VertexId> {
        self.rotation(v).iter().map(|&e| self.graph.other_end(e, v)).collect()
    }

    pub fn signature(&self, e: EdgeId) -> i8 {
        self.sig[e]
    }

    pub fn signatures(&self) -> &[i8] {
        &self.sig
    }

    pub fn dart_from(&self, e: EdgeId, v: VertexId) -> Dart {
        let (a, _) = self.graph.edge(e);
        if a == v {
            2 * e
        } else {
            2 * e + 1
        }
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let (a, b) = self.graph.edge(d / 2);
        if d.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(d ^ 1)
    }

    /// Rotation successor of `e` at `v`.
    pub fn rot_next(&self, v: VertexId, e: EdgeId) -> EdgeId {
        self.next[self.dart_from(e, v)] / 2
    }

    pub fn rot_prev(&self, v: VertexId, e: EdgeId) -> EdgeId {
        self.prev[self.dart_from(e, v)] / 2
    }

    fn phi(&self, flag: usize) -> usize {
        let (d, s) = (flag / 2, flag % 2);
        let s2 = s ^ (self.sig[d / 2] == -1) as usize;
        let t = d ^ 1;
        let nd = if s2 == 0 { self.next[t] } else { self.prev[t] };
        2 * nd + s2
    }

    fn reverse_flag(&self, flag: usize) -> usize {
        let (d, s) = (flag / 2, flag % 2);
        2 * (d ^ 1) + (s ^ 1 ^ (self.sig[d / 2] == -1) as usize)
    }

    /// Facial walks in order of their first flag. Isolated vertices have no walk.
    pub fn faces(&self) -> Vec<FaceWalk> {
        let nflags = 4 * self.graph.m();
        let mut seen = vec![false; nflags];
        let mut out = Vec::new();
        for f0 in 0..nflags {
            if seen[f0] {
                continue;
            }
            let mut darts = Vec::new();
            let mut f = f0;
            loop {
                seen[f] = true;
                darts.push(f / 2);
                f = self.phi(f);
                if f == f0 {
                    break;
                }
            }
            // the reverse orbit is the same face
            let r0 = self.reverse_flag(f0);
            let mut r = r0;
            loop {
                seen[r] = true;
                r = self.phi(r);
                if r == r0 {
                    break;
                }
            }
            let vertices = darts.iter().map(|&d| self.tail(d)).collect();
            let edges = darts.iter().map(|&d| d / 2).collect();
            out.push(FaceWalk { darts, vertices, edges });
        }
        out
    }

    pub fn face_count(&self) -> usize {
        let nflags = 4 * self.graph.m();
        let mut seen = vec![false; nflags];
        let mut orbits = 0;
        for f0 in 0..nflags {
            if seen[f0] {
                continue;
            }
            orbits += 1;
            let mut f = f0;
            while !seen[f] {
                seen[f] = true;
                f = self.phi(f);
            }
        }
        orbits / 2
    }

    /// Euler genus `2 - V + E - F` of a connected embedding.
    pub fn euler_genus(&self) -> Result<usize, EmbeddingError> {
        if !self.graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        if self.graph.m() == 0 {
            return Ok(0);
        }
        let chi = self.graph.n() as i64 - self.graph.m() as i64 + self.face_count() as i64;
        Ok((2 - chi) as usize)
    }

    /// Per connected component: (vertices, Euler genus, orientable).
    pub fn component_genera(&self) -> Vec<(Vec<VertexId>, usize, bool)> {
        let mut out = Vec::new();
        for comp in self.graph.components() {
            let edges: Vec<EdgeId> =
                comp.iter().flat_map(|&v| self.graph.incident_edges(v)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            if edges.is_empty() {
                out.push((comp, 0, true));
                continue;
            }
            let (sub, _) = self.restrict(&edges);
            out.push((comp, sub.euler_genus().unwrap(), sub.is_orientable()));
        }
        out
    }

    /// Sum of component Euler genera.
    pub fn total_euler_genus(&self) -> usize {
        self.component_genera().iter().map(|c| c.1).sum()
    }

    /// Reverse the rotation at `v` and flip the signature of every incident edge.
    pub fn local_change(&self, v: VertexId) -> Embedding {
        let mut out = self.clone();
        let i = self.graph.idx(v);
        out.rot[i].reverse();
        out.rot[i] = canonical_cycle(std::mem::take(&mut out.rot[i]));
        for e in self.graph.incident_edges(v) {
            out.sig[e] = -out.sig[e];
        }
        out.rebuild();
        out
    }

    /// Local changes at every vertex of `vs` at once.
    pub fn local_changes(&self, vs: &[VertexId]) -> Embedding {
        let mut out = self.clone();
        for &v in vs {
            let i = self.graph.idx(v);
            out.rot[i].reverse();
            out.rot[i] = canonical_cycle(std::mem::take(&mut out.rot[i]));
            for e in self.graph.incident_edges(v) {
                out.sig[e] = -out.sig[e];
            }
        }
        out.rebuild();
        out
    }

    /// Equivalent embedding in which every edge of a BFS spanning forest
    /// (rooted at the smallest vertex of each component) has signature +1.
    pub fn normalize_signatures(&self) -> Embedding {
        let parent = self.graph.bfs_forest();
        let mut order: Vec<usize> = Vec::new();
        // BFS order from roots so parents are fixed before children
        let mut depth = vec![usize::MAX; self.graph.n()];
        for i in 0..self.graph.n() {
            if parent[i].is_none() {
                depth[i] = 0;
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.graph.n() {
                if depth[i] == usize::MAX {
                    let e = parent[i].unwrap();
                    let p = self.graph.idx(self.graph.other_end(e, self.graph.vertex_at(i)));
                    if depth[p] != usize::MAX {
                        depth[i] = depth[p] + 1;
                        changed = true;
                    }
                }
            }
        }
        order.extend(0..self.graph.n());
        order.sort_by_key(|&i| depth[i]);
        let mut sig = self.sig.clone();
        let mut flip = vec![false; self.graph.n()];
        for &i in &order {
            if let Some(e) = parent[i] {
                if sig[e] == -1 {
                    flip[i] = true;
                    for f in self.graph.incident_edges(self.graph.vertex_at(i)) {
                        sig[f] = -sig[f];
                    }
                }
            }
        }
        let mut out = self.clone();
        out.sig = sig;
        for i in 0..self.graph.n() {
            if flip[i] {
                out.rot[i].reverse();
                out.rot[i] = canonical_cycle(std::mem::take(&mut out.rot[i]));
            }
        }
        out.rebuild();
        out
    }

    pub fn cycle_signature(&self, cyc: &[VertexId]) -> Option<i8> {
        let es = self.graph.cycle_edges(cyc)?;
        Some(es.iter().map(|&e| self.sig[e]).product())
    }

    /// Orientable iff some set of local changes makes every signature +1.
    pub fn is_orientable(&self) -> bool {
        self.normalize_signatures().sig.iter().all(|&s| s == 1)
    }

    /// Same rotation system up to local changes. Normal forms agree up to
    /// reversing every rotation of a component, so both are compared.
    pub fn equivalent(&self, other: &Embedding) -> bool {
        if self.graph != other.graph {
            return false;
        }
        let a = self.normalize_signatures();
        let b = other.normalize_signatures();
        if a.sig != b.sig {
            return false;
        }
        for comp in self.graph.components() {
            let idx: Vec<usize> = comp.iter().map(|&v| self.graph.idx(v)).collect();
            let same = idx.iter().all(|&i| a.rot[i] == b.rot[i]);
            let mirrored = idx.iter().all(|&i| {
                let mut r = b.rot[i].clone();
                r.reverse();
                a.rot[i] == canonical_cycle(r)
            });
            if !same && !mirrored {
                return false;
            }
        }
        true
    }

    /// Reverse every rotation; signatures unchanged.
    pub fn mirror(&self) -> Embedding {
        let mut out = self.clone();
        for r in &mut out.rot {
            r.reverse();
            *r = canonical_cycle(std::mem::take(r));
        }
        out.rebuild();
        out
    }

    /// Induced embedding on a set of edges (and their endpoints), with the
    /// map from new edge ids to ids here.
    pub fn restrict(&self, edges: &[EdgeId]) -> (Embedding, Vec<EdgeId>) {
        let (g, back) = self.graph.edge_subgraph(edges);
        let mut fwd = vec![usize::MAX; self.graph.m()];
        for (new, &old) in back.iter().enumerate() {
            fwd[old] = new;
        }
        let rot = g
            .vertices()
            .iter()
            .map(|&v| self.rotation(v).iter().filter(|&&e| fwd[e] != usize::MAX).map(|&e| fwd[e]).collect())
            .collect();
        let sig = back.iter().map(|&e| self.sig[e]).collect();
        (Embedding::from_parts(g, rot, sig).unwrap(), back)
    }

    /// Replace the rotation and signatures wholesale (same graph).
    pub fn with_parts(&self, rot: Vec<Vec<EdgeId>>, sig: Vec<i8>) -> Result<Embedding, EmbeddingError> {
        Embedding::from_parts(self.graph.clone(), rot, sig)
    }

    pub fn to_json_value(&self) -> Value {
        let mut rotation = BTreeMap::new();
        for &v in self.graph.vertices() {
            rotation.insert(v.to_string(), self.neighbor_rotation(v));
        }
        let mut signature = BTreeMap::new();
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            signature.insert(format!("{a}-{b}"), self.sig[e]);
        }
        json!({ "graph": self.graph.to_json_value(), "rotation": rotation, "signature": signature })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Embedding, EmbeddingError> {
        let v: Value = serde_json::from_str(s).map_err(|e| EmbeddingError::Json(e.to_string()))?;
        Embedding::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Embedding, EmbeddingError> {
        let gv = v.get("graph").ok_or_else(|| EmbeddingError::Json("missing graph".into()))?;
        let graph = match gv {
            Value::String(s) => Graph::from_graph6(s)?,
            other => Graph::from_json_value(other)?,
        };
        let rv = v.get("rotation").ok_or_else(|| EmbeddingError::Json("missing rotation".into()))?;
        let rmap: BTreeMap<String, Vec<VertexId>> =
            serde_json::from_value(rv.clone()).map_err(|e| EmbeddingError::Json(e.to_string()))?;
        let mut rotation = BTreeMap::new();
        for (k, nb) in rmap {
            let vid: VertexId = k.parse().map_err(|_| EmbeddingError::Json(format!("bad vertex key {k}")))?;
            rotation.insert(vid, nb);
        }
        let mut negative = Vec::new();
        if let Some(sv) = v.get("signature") {
            let smap: BTreeMap<String, i64> =
                serde_json::from_value(sv.clone()).map_err(|e| EmbeddingError::Json(e.to_string()))?;
            for (k, s) in smap {
                let (a, b) = k.split_once('-').ok_or_else(|| EmbeddingError::Json(format!("bad edge key {k}")))?;
                let a: VertexId = a.parse().map_err(|_| EmbeddingError::Json(format!("bad edge key {k}")))?;
                let b: VertexId = b.parse().map_err(|_| EmbeddingError::Json(format!("bad edge key {k}")))?;
                match s {
                    1 => {}
                    -1 => negative.push((a, b)),
                    _ => return Err(EmbeddingError::BadSignature(a, b)),
                }
            }
        }
        Embedding::from_neighbor_rotation(graph, &rotation, &negative)
    }
}
