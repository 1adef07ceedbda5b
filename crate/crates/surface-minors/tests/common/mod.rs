//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls the library's face tracing or search: graphs are plain
//! edge lists and faces are traced the slow way, reversing every rotation
//! whenever a negative edge is crossed.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub mod cuts;
pub mod decomp;
pub mod figures;
pub mod grids;
pub mod homotopy;
pub mod nesting;
pub mod suites;

use rand::Rng;
use surface_minors::embedding::Embedding;
use surface_minors::graph::{Graph, VertexId};

/// All connected graphs with at most `max_edges` edges, one per isomorphism
/// class, grown edge by edge from K1.
pub fn connected_graphs_up_to(max_edges: usize) -> Vec<Graph> {
    let mut layer = vec![Graph::with_order(1, &[]).unwrap()];
    let mut all = layer.clone();
    for _ in 0..max_edges {
        let mut next: BTreeMap<_, Graph> = BTreeMap::new();
        for g in &layer {
            let n = g.n() as VertexId;
            let mut cands = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if g.edge_between(a, b).is_none() {
                        cands.push((a, b, n));
                    }
                }
                cands.push((a, n, n + 1));
            }
            for (a, b, order) in cands {
                let mut es = g.edges().to_vec();
                es.push((a, b));
                let h = Graph::with_order(order as usize, &es).unwrap();
                next.entry(brute_canonical(&h)).or_insert(h);
            }
        }
        layer = next.into_values().collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// Canonical form by trying every permutation (small graphs only).
pub fn brute_canonical(g: &Graph) -> (usize, Vec<(u32, u32)>) {
    let n = g.n();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best: Option<Vec<(u32, u32)>> = None;
    loop {
        let mut es: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[g.idx(a)], perm[g.idx(b)]);
                (x.min(y), x.max(y))
            })
            .collect();
        es.sort_unstable();
        if best.as_ref().is_none_or(|b| es < *b) {
            best = Some(es);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (n, best.unwrap_or_default())
}

pub fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every cyclic order of `items` (first element fixed).
pub fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        return vec![items.to_vec()];
    }
    let mut rest: Vec<usize> = items[1..].to_vec();
    rest.sort_unstable();
    let mut out = Vec::new();
    loop {
        let mut r = vec![items[0]];
        r.extend(rest.iter().copied());
        out.push(r);
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

/// A rotation system as neighbour lists per vertex id, with signatures per
/// sorted vertex pair. Deliberately independent of the library type.
#[derive(Clone, Debug)]
pub struct NaiveEmbedding {
    pub rot: BTreeMap<VertexId, Vec<VertexId>>,
    pub sig: BTreeMap<(VertexId, VertexId), i8>,
}

/// Smallest rotation of a cyclic sequence in either direction.
pub fn cyclic_min(seq: &[VertexId]) -> Vec<VertexId> {
    let mut rev = seq.to_vec();
    rev.reverse();
    let mut best = seq.to_vec();
    for s in [seq.to_vec(), rev] {
        for k in 0..s.len() {
            let mut c = s.clone();
            c.rotate_left(k);
            if c < best {
                best = c;
            }
        }
    }
    best
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl NaiveEmbedding {
    /// Number of faces: walk edges, reversing all rotations on negative edges,
    /// until the starting edge recurs in the same direction and orientation.
    pub fn face_count(&self) -> usize {
        let mut rot = self.rot.clone();
        let mut flipped = false;
        let mut seen: BTreeSet<(VertexId, VertexId, bool)> = BTreeSet::new();
        let mut walks = 0;
        let darts: Vec<(VertexId, VertexId)> =
            self.sig.keys().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        for start_flip in [false, true] {
            for &(v0, w0) in &darts {
                if seen.contains(&(v0, w0, start_flip)) {
                    continue;
                }
                if flipped != start_flip {
                    for r in rot.values_mut() {
                        r.reverse();
                    }
                    flipped = start_flip;
                }
                walks += 1;
                let (mut v, mut w) = (v0, w0);
                loop {
                    seen.insert((v, w, flipped));
                    if self.sig[&key(v, w)] == -1 {
                        for r in rot.values_mut() {
                            r.reverse();
                        }
                        flipped = !flipped;
                    }
                    let r = &rot[&w];
                    let pos = r.iter().position(|&x| x == v).unwrap();
                    let next = r[(pos + 1) % r.len()];
                    v = w;
                    w = next;
                    if (v, w, flipped) == (v0, w0, start_flip) {
                        break;
                    }
                }
            }
        }
        walks / 2
    }

    /// Facial walks as vertex sequences, one per face.
    pub fn faces(&self) -> Vec<Vec<VertexId>> {
        let mut rot = self.rot.clone();
        let mut flipped = false;
        let mut seen: BTreeSet<(VertexId, VertexId, bool)> = BTreeSet::new();
        let mut walks: BTreeMap<Vec<VertexId>, usize> = BTreeMap::new();
        let darts: Vec<(VertexId, VertexId)> = self.sig.keys().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        for start_flip in [false, true] {
            for &(v0, w0) in &darts {
                if seen.contains(&(v0, w0, start_flip)) {
                    continue;
                }
                if flipped != start_flip {
                    for r in rot.values_mut() {
                        r.reverse();
                    }
                    flipped = start_flip;
                }
                let mut walk = Vec::new();
                let (mut v, mut w) = (v0, w0);
                loop {
                    seen.insert((v, w, flipped));
                    walk.push(v);
                    if self.sig[&key(v, w)] == -1 {
                        for r in rot.values_mut() {
                            r.reverse();
                        }
                        flipped = !flipped;
                    }
                    let r = &rot[&w];
                    let pos = r.iter().position(|&x| x == v).unwrap();
                    let next = r[(pos + 1) % r.len()];
                    v = w;
                    w = next;
                    if (v, w, flipped) == (v0, w0, start_flip) {
                        break;
                    }
                }
                *walks.entry(cyclic_min(&walk)).or_default() += 1;
            }
        }
        // each face is walked twice
        walks.into_iter().flat_map(|(w, k)| std::iter::repeat_n(w, k / 2)).collect()
    }

    pub fn euler_genus(&self) -> usize {
        let v = self.rot.len() as i64;
        let e = self.sig.len() as i64;
        if e == 0 {
            return 0;
        }
        (2 - v + e - self.face_count() as i64) as usize
    }

    /// Orientable iff vertices can be signed so every edge sign is the product of its ends.
    pub fn is_orientable(&self) -> bool {
        let mut colour: BTreeMap<VertexId, i8> = BTreeMap::new();
        for &s in self.rot.keys() {
            if colour.contains_key(&s) {
                continue;
            }
            colour.insert(s, 1);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.rot[&x] {
                    let want = colour[&x] * self.sig[&key(x, y)];
                    match colour.get(&y) {
                        Some(&c) if c != want => return false,
                        Some(_) => {}
                        None => {
                            colour.insert(y, want);
                            stack.push(y);
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_embedding(&self, g: &Graph) -> Embedding {
        let negative: Vec<_> = self.sig.iter().filter(|(_, &s)| s == -1).map(|(&k, _)| k).collect();
        Embedding::from_neighbor_rotation(g.clone(), &self.rot, &negative).unwrap()
    }
}

/// Every rotation system of `g`; with `all_signatures`, every signature
/// vector too, otherwise only signatures that are +1 on a BFS tree.
pub fn all_naive_embeddings(g: &Graph, all_signatures: bool, mut visit: impl FnMut(&NaiveEmbedding)) {
    let verts: Vec<VertexId> = g.vertices().to_vec();
    let orders: Vec<Vec<Vec<VertexId>>> = verts
        .iter()
        .map(|&v| {
            let nb: Vec<usize> = g.neighbors(v).map(|x| x as usize).collect();
            cyclic_orders(&nb).into_iter().map(|o| o.into_iter().map(|x| x as VertexId).collect()).collect()
        })
        .collect();
    let edges: Vec<(VertexId, VertexId)> = g.edges().to_vec();
    let tree: BTreeSet<(VertexId, VertexId)> = if all_signatures {
        BTreeSet::new()
    } else {
        g.bfs_forest().into_iter().flatten().map(|e| g.edge(e)).collect()
    };
    let free: Vec<usize> = (0..edges.len()).filter(|&i| !tree.contains(&edges[i])).collect();
    let mut idx = vec![0usize; verts.len()];
    loop {
        let rot: BTreeMap<VertexId, Vec<VertexId>> =
            verts.iter().enumerate().map(|(i, &v)| (v, orders[i][idx[i]].clone())).collect();
        for mask in 0..(1u64 << free.len()) {
            let mut sig: BTreeMap<(VertexId, VertexId), i8> = edges.iter().map(|&e| (e, 1)).collect();
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    sig.insert(edges[i], -1);
                }
            }
            visit(&NaiveEmbedding { rot: rot.clone(), sig });
        }
        let mut k = 0;
        loop {
            if k == verts.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < orders[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Unpruned minimum genus: (orientable min, nonorientable min or None).
pub fn brute_genus(g: &Graph) -> (usize, Option<usize>) {
    let mut or = usize::MAX;
    let mut non: Option<usize> = None;
    all_naive_embeddings(g, true, |e| {
        let genus = e.euler_genus();
        if e.is_orientable() {
            or = or.min(genus);
        } else {
            non = Some(non.map_or(genus, |n| n.min(genus)));
        }
    });
    (or, non)
}

/// Library embeddings of `g` over all rotations and BFS-normalised signatures.
pub fn all_embeddings(g: &Graph) -> Vec<Embedding> {
    let mut out = Vec::new();
    all_naive_embeddings(g, false, |e| out.push(e.to_embedding(g)));
    out
}

/// Random connected graph with `n` vertices and `m` edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    assert!(m + 1 >= n && m <= n * (n - 1) / 2);
    loop {
        let mut es = BTreeSet::new();
        for v in 1..n as u32 {
            let u = rng.gen_range(0..v);
            es.insert((u, v));
        }
        while es.len() < m {
            let a = rng.gen_range(0..n as u32);
            let b = rng.gen_range(0..n as u32);
            if a != b {
                es.insert((a.min(b), a.max(b)));
            }
        }
        let es: Vec<_> = es.into_iter().collect();
        let g = Graph::with_order(n, &es).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Random embedding: uniform rotation at each vertex, random signatures.
pub fn random_embedding<R: Rng>(rng: &mut R, g: &Graph) -> Embedding {
    use rand::seq::SliceRandom;
    let mut rot = BTreeMap::new();
    for &v in g.vertices() {
        let mut nb: Vec<VertexId> = g.neighbors(v).collect();
        nb.shuffle(rng);
        rot.insert(v, nb);
    }
    let negative: Vec<_> = g.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    Embedding::from_neighbor_rotation(g.clone(), &rot, &negative).unwrap()
}
