//! Hand-built embeddings used across the topology and structure tests.

use std::collections::BTreeMap;

use surface_minors::embedding::Embedding;
use surface_minors::graph::{Graph, VertexId};

/// Vertex id of grid point `(i, j)` in an `a` by `b` torus grid.
pub fn gid(b: usize, i: usize, j: usize) -> VertexId {
    (i * b + j) as VertexId
}

/// `C_a x C_b` on the torus: rotation (i+1, j), (i, j+1), (i-1, j), (i, j-1).
pub fn torus_grid(a: usize, b: usize) -> Embedding {
    let mut es = Vec::new();
    let mut rot = BTreeMap::new();
    for i in 0..a {
        for j in 0..b {
            let v = gid(b, i, j);
            es.push((v, gid(b, (i + 1) % a, j)));
            es.push((v, gid(b, i, (j + 1) % b)));
            rot.insert(
                v,
                vec![gid(b, (i + 1) % a, j), gid(b, i, (j + 1) % b), gid(b, (i + a - 1) % a, j), gid(b, i, (j + b - 1) % b)],
            );
        }
    }
    let g = Graph::with_order(a * b, &es).unwrap();
    Embedding::from_neighbor_rotation(g, &rot, &[]).unwrap()
}

/// Ring `j` of a torus grid: the points `(0, j), (1, j), ...`.
pub fn ring(a: usize, b: usize, j: usize) -> Vec<VertexId> {
    (0..a).map(|i| gid(b, i, j)).collect()
}

/// Column `i`: the points `(i, 0), (i, 1), ...`.
pub fn column(b: usize, i: usize) -> Vec<VertexId> {
    (0..b).map(|j| gid(b, i, j)).collect()
}

/// Planar embedding from a straight-line drawing: neighbours sorted by angle.
pub fn from_drawing(g: Graph, pos: &BTreeMap<VertexId, (f64, f64)>) -> Embedding {
    let mut rot = BTreeMap::new();
    for &v in g.vertices() {
        let (x, y) = pos[&v];
        let mut nb: Vec<VertexId> = g.neighbors(v).collect();
        nb.sort_by(|&p, &q| {
            let a = (pos[&p].1 - y).atan2(pos[&p].0 - x);
            let b = (pos[&q].1 - y).atan2(pos[&q].0 - x);
            a.partial_cmp(&b).unwrap()
        });
        rot.insert(v, nb);
    }
    Embedding::from_neighbor_rotation(g, &rot, &[]).unwrap()
}

/// Concentric rings of length `k` joined by spokes, optional hub joined to
/// the innermost ring. Ring `r` (0 outermost) holds `r*k .. r*k + k`.
pub fn concentric(rings: usize, k: usize, hub: bool) -> (Embedding, Vec<Vec<VertexId>>) {
    let mut es = Vec::new();
    let mut pos = BTreeMap::new();
    let mut cycles = Vec::new();
    for r in 0..rings {
        let radius = (rings - r) as f64;
        let mut cyc = Vec::new();
        for t in 0..k {
            let v = (r * k + t) as VertexId;
            let ang = std::f64::consts::TAU * t as f64 / k as f64;
            pos.insert(v, (radius * ang.cos(), radius * ang.sin()));
            es.push((v, (r * k + (t + 1) % k) as VertexId));
            if r + 1 < rings {
                es.push((v, v + k as VertexId));
            }
            cyc.push(v);
        }
        cycles.push(cyc);
    }
    let n = rings * k + hub as usize;
    if hub {
        let h = (rings * k) as VertexId;
        pos.insert(h, (0.0, 0.0));
        for t in 0..k {
            es.push((((rings - 1) * k + t) as VertexId, h));
        }
    }
    let g = Graph::with_order(n, &es).unwrap();
    (from_drawing(g, &pos), cycles)
}

/// [`torus_grid`] with the diagonal `(0, 0)`–`(1, 1)` drawn inside their
/// square face.
pub fn torus_grid_with_diagonal(a: usize, b: usize) -> Embedding {
    let base = torus_grid(a, b);
    let g = base.graph();
    let (p, q) = (gid(b, 0, 0), gid(b, 1, 1));
    let mut rot: BTreeMap<VertexId, Vec<VertexId>> = g.vertices().iter().map(|&v| (v, base.neighbor_rotation(v))).collect();
    // at (0,0) the face lies between +i and +j; at (1,1) between -i and -j
    for (v, w, before) in [(p, q, gid(b, 0, 1)), (q, p, gid(b, 1, 0))] {
        let r = rot.get_mut(&v).unwrap();
        let k = r.iter().position(|&x| x == before).unwrap();
        r.insert(k, w);
    }
    let mut es = g.edges().to_vec();
    es.push((p.min(q), p.max(q)));
    let g = Graph::with_order(a * b, &es).unwrap();
    Embedding::from_neighbor_rotation(g, &rot, &[]).unwrap()
}
