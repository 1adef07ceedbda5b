//! Planar and toroidal instances of the square and radius pictures, rebuilt
//! from explicit coordinates.

use std::collections::BTreeMap;

use surface_minors::embedding::Embedding;
use surface_minors::graph::{Graph, VertexId};

use super::grids::{concentric, from_drawing, ring, torus_grid};

/// A planar instance: embedding, outer face, and the cycles `C, C', C''`
/// from the outside in.
pub struct Nest {
    pub emb: Embedding,
    pub outer: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub c1: Vec<VertexId>,
    pub c2: Vec<VertexId>,
}

fn build(points: &[(VertexId, f64, f64)], edges: &[(VertexId, VertexId)]) -> Embedding {
    let pos: BTreeMap<VertexId, (f64, f64)> = points.iter().map(|&(v, x, y)| (v, (x, y))).collect();
    let g = Graph::with_order(points.len(), edges).unwrap();
    from_drawing(g, &pos)
}

fn cycle_edges(c: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    (0..c.len()).map(|i| (c[i], c[(i + 1) % c.len()])).collect()
}

fn union_edges(cs: &[&[VertexId]], extra: &[(VertexId, VertexId)]) -> Vec<(VertexId, VertexId)> {
    let mut es: Vec<(VertexId, VertexId)> = cs.iter().flat_map(|c| cycle_edges(c)).chain(extra.iter().copied()).map(|(a, b)| (a.min(b), a.max(b))).collect();
    es.sort_unstable();
    es.dedup();
    es
}

/// Three disjoint rings of four joined by spokes.
pub fn free() -> Nest {
    let (emb, rings) = concentric(3, 4, false);
    Nest { outer: rings[0].clone(), c: rings[0].clone(), c1: rings[1].clone(), c2: rings[2].clone(), emb }
}

/// Three quadrilaterals through the origin, one inside the next.
pub fn pinched_on_vertex() -> Nest {
    // 0 = v; (l, t, r) per level at 1.., level 3 outermost
    let pts = [
        (0, 0.0, 0.0),
        (1, -1.0, 2.0), (2, 0.0, 3.0), (3, 1.0, 2.0),
        (4, -2.0, 2.5), (5, 0.0, 4.5), (6, 2.0, 2.5),
        (7, -3.0, 3.0), (8, 0.0, 6.0), (9, 3.0, 3.0),
    ];
    let c2 = vec![0, 1, 2, 3];
    let c1 = vec![0, 4, 5, 6];
    let c = vec![0, 7, 8, 9];
    let emb = build(&pts, &union_edges(&[&c, &c1, &c2], &[]));
    Nest { emb, outer: c.clone(), c, c1, c2 }
}

/// Bottom path `x0 .. x6` on a face closed by `z` below; each cycle runs
/// along a shorter middle stretch of it and closes over a top vertex.
pub fn pinched_on_face() -> Nest {
    let mut pts: Vec<(VertexId, f64, f64)> = (0..7).map(|i| (i, i as f64, 0.0)).collect();
    pts.extend([(7, 3.0, 1.0), (8, 3.0, 2.0), (9, 3.0, 3.0), (10, 3.0, -2.0)]);
    let c2 = vec![2, 3, 4, 7];
    let c1 = vec![1, 2, 3, 4, 5, 8];
    let c = vec![0, 1, 2, 3, 4, 5, 6, 9];
    let emb = build(&pts, &union_edges(&[&c, &c1, &c2], &[(0, 10), (6, 10)]));
    Nest { emb, outer: vec![0, 9, 6, 10], c, c1, c2 }
}

/// Lenses through a bottom and a top vertex.
pub fn pinched_on_two_vertices() -> Nest {
    let pts = [
        (0, 0.0, 0.0), (1, 0.0, 6.0),
        (2, -1.0, 3.0), (3, 1.0, 3.0),
        (4, -2.0, 3.0), (5, 2.0, 3.0),
        (6, -3.0, 3.0), (7, 3.0, 3.0),
    ];
    let c2 = vec![0, 2, 1, 3];
    let c1 = vec![0, 4, 1, 5];
    let c = vec![0, 6, 1, 7];
    let emb = build(&pts, &union_edges(&[&c, &c1, &c2], &[]));
    Nest { emb, outer: c.clone(), c, c1, c2 }
}

/// A ladder between a bottom path `x0 .. x6` and a top path `y0 .. y6`,
/// each closed into a face by an extra vertex.
pub fn pinched_on_two_faces() -> Nest {
    let mut pts: Vec<(VertexId, f64, f64)> = (0..7).map(|i| (i, i as f64, 0.0)).collect();
    pts.extend((0..7).map(|i| (7 + i, i as f64, 4.0)));
    pts.extend([(14, 3.0, -2.0), (15, 3.0, 6.0)]);
    let x = |i: VertexId| i;
    let y = |i: VertexId| 7 + i;
    let level = |lo: VertexId, hi: VertexId| -> Vec<VertexId> { (lo..=hi).map(x).chain((lo..=hi).rev().map(y)).collect() };
    let c2 = level(2, 4);
    let c1 = level(1, 5);
    let c = level(0, 6);
    let emb = build(&pts, &union_edges(&[&c, &c1, &c2], &[(x(0), 14), (x(6), 14), (y(0), 15), (y(6), 15)]));
    Nest { emb, outer: vec![x(0), 14, x(6), y(6), 15, y(0)], c, c1, c2 }
}

/// The face construction at the bottom with a shared top vertex.
pub fn pinched_on_vertex_and_face() -> Nest {
    let mut pts: Vec<(VertexId, f64, f64)> = (0..7).map(|i| (i, i as f64, 0.0)).collect();
    pts.extend([(7, 3.0, 4.0), (8, 3.0, -2.0)]);
    let c2 = vec![2, 3, 4, 7];
    let c1 = vec![1, 2, 3, 4, 5, 7];
    let c = vec![0, 1, 2, 3, 4, 5, 6, 7];
    let emb = build(&pts, &union_edges(&[&c, &c1, &c2], &[(0, 8), (6, 8)]));
    Nest { emb, outer: vec![0, 7, 6, 8], c, c1, c2 }
}

/// Three rings of six with spokes around a hub: outer ring `C_0`, the
/// bands between rings are radius 1 and 2, the hub triangles radius 3.
pub fn radius_figure() -> (Embedding, Vec<Vec<VertexId>>) {
    concentric(3, 6, true)
}

/// A 3 by 6 torus grid; its six parallel rings in the order
/// `C¹, C¹', C¹'', C²'', C²', C²`.
pub fn homotopic_square() -> (Embedding, [Vec<VertexId>; 6]) {
    let emb = torus_grid(3, 6);
    (emb, [0, 1, 2, 3, 4, 5].map(|j| ring(3, 6, j)))
}
