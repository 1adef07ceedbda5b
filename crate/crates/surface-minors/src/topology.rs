//! Cycles of an embedded graph: the side each incident edge leaves on,
//! separating and contractible cycles, cutting along a cycle, homotopy,
//! relative orientation, planar flips and the `C_e` construction.
//!
//! Sides are read after local changes at the cycle's vertices have made its
//! edges positive (all of them for a two-sided cycle, all but the closing
//! edge for a one-sided one). At position `i` the left edges are those strictly
//! between the incoming and the outgoing cycle edge, going forward in the
//! rotation. For a one-sided cycle "left" is only meaningful along the open
//! path `cycle[0] .. cycle[l-1]`; cutting uses it to build the doubled cycle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{Embedding, EmbeddingError};
use crate::graph::{EdgeId, Graph, GraphError, Subgraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{0:?} is not a cycle of the graph")]
    NotACycle(Vec<VertexId>),
    #[error("cycle {0:?} is one-sided")]
    OneSided(Vec<VertexId>),
    #[error("cycle {0:?} is not contractible")]
    NotContractible(Vec<VertexId>),
    #[error("the two cycles are the same")]
    SameCycle,
    #[error("cycles meet in more than one path; shared vertices {0:?}")]
    BadOverlap(Vec<VertexId>),
    #[error("embedding is not planar")]
    NotPlanar,
    #[error("edge {0}-{1} is not in the interior of the cycle")]
    EdgeNotInside(VertexId, VertexId),
    #[error("both sides of edge {0}-{1} lie on the same face")]
    SameFace(VertexId, VertexId),
    #[error("{0} vertices of the cycle have exterior edges, at most two allowed")]
    TooManyAttachments(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where a cycle sits in an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleClassification {
    pub cycle: Vec<VertexId>,
    /// `edges[i]` joins `cycle[i]` and `cycle[i + 1]`.
    pub edges: Vec<EdgeId>,
    pub two_sided: bool,
    pub separating: bool,
    pub contractible: bool,
    pub disk_side: Option<Side>,
    /// Bridges leaving only on the left, with their attachments on the cycle.
    pub left: Subgraph,
    pub right: Subgraph,
}

impl CycleClassification {
    pub fn side(&self, s: Side) -> &Subgraph {
        match s {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn disk(&self) -> Result<Side, TopologyError> {
        if !self.two_sided {
            return Err(TopologyError::OneSided(self.cycle.clone()));
        }
        self.disk_side.ok_or_else(|| TopologyError::NotContractible(self.cycle.clone()))
    }

    /// `int(C)`: the bridges on the disk side.
    pub fn int(&self) -> Result<&Subgraph, TopologyError> {
        Ok(self.side(self.disk()?))
    }

    /// `ext(C)`: the bridges on the other side.
    pub fn ext(&self) -> Result<&Subgraph, TopologyError> {
        Ok(self.side(self.disk()?.other()))
    }

    /// `Int(C) = int(C) ∪ C`.
    pub fn int_closed(&self, g: &Graph) -> Result<Subgraph, TopologyError> {
        Ok(Subgraph::from_edges(g, self.int()?.edges.iter().chain(&self.edges).copied()))
    }

    pub fn ext_closed(&self, g: &Graph) -> Result<Subgraph, TopologyError> {
        Ok(Subgraph::from_edges(g, self.ext()?.edges.iter().chain(&self.edges).copied()))
    }
}

struct Sides {
    edges: Vec<EdgeId>,
    norm: Embedding,
    two_sided: bool,
    pos: BTreeMap<VertexId, usize>,
    left: Vec<BTreeSet<EdgeId>>,
}

impl Sides {
    fn new(emb: &Embedding, cyc: &[VertexId]) -> Result<Sides, TopologyError> {
        let g = emb.graph();
        if !g.is_cycle(cyc) {
            return Err(TopologyError::NotACycle(cyc.to_vec()));
        }
        let edges = g.cycle_edges(cyc).unwrap();
        let l = cyc.len();
        let mut flipped = vec![false; l];
        for i in 1..l {
            let s = emb.signature(edges[i - 1]) * if flipped[i - 1] { -1 } else { 1 };
            flipped[i] = s == -1;
        }
        let vs: Vec<VertexId> = (0..l).filter(|&i| flipped[i]).map(|i| cyc[i]).collect();
        let norm = emb.local_changes(&vs);
        let two_sided = norm.signature(edges[l - 1]) == 1;
        let mut left = Vec::with_capacity(l);
        for i in 0..l {
            let (from, to) = (edges[(i + l - 1) % l], edges[i]);
            let mut set = BTreeSet::new();
            let mut e = norm.rot_next(cyc[i], from);
            while e != to {
                set.insert(e);
                e = norm.rot_next(cyc[i], e);
            }
            left.push(set);
        }
        let pos = cyc.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ok(Sides { edges, norm, two_sided, pos, left })
    }

    fn is_cycle_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Side on which non-cycle edge `e` leaves cycle vertex `v`.
    fn side_at(&self, v: VertexId, e: EdgeId) -> Side {
        if self.left[self.pos[&v]].contains(&e) {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Bridges of the cycle with the set of sides their attachment edges use.
    fn bridges(&self) -> Vec<(Vec<EdgeId>, BTreeSet<Side>)> {
        let g = self.norm.graph();
        let sub = Subgraph::from_edges(g, self.edges.iter().copied());
        g.bridges_on(&sub)
            .into_iter()
            .map(|b| {
                let mut sides = BTreeSet::new();
                for &e in &b.edges {
                    let (x, y) = g.edge(e);
                    for v in [x, y] {
                        if self.pos.contains_key(&v) {
                            sides.insert(self.side_at(v, e));
                        }
                    }
                }
                (b.edges, sides)
            })
            .collect()
    }
}

/// Euler genus of the embedding induced on some edges, summed over components.
fn induced_genus(emb: &Embedding, edges: &[EdgeId]) -> usize {
    emb.restrict(edges).0.total_euler_genus()
}

pub fn classify_cycle(emb: &Embedding, cyc: &[VertexId]) -> Result<CycleClassification, TopologyError> {
    classify_cycle_with_outer(emb, cyc, None)
}

/// As [`classify_cycle`]. When both sides are planar (the whole embedding is
/// a sphere) the disk side is the one away from the outer face: `outer` as a
/// facial vertex sequence, or by default the lexicographically smallest face.
pub fn classify_cycle_with_outer(
    emb: &Embedding,
    cyc: &[VertexId],
    outer: Option<&[VertexId]>,
) -> Result<CycleClassification, TopologyError> {
    let s = Sides::new(emb, cyc)?;
    let g = emb.graph();
    let bridges = s.bridges();
    let mut side_edges: BTreeMap<Side, Vec<EdgeId>> = BTreeMap::new();
    let mut edge_side: BTreeMap<EdgeId, Side> = BTreeMap::new();
    let mut mixed = false;
    for (es, sides) in &bridges {
        match sides.len() {
            0 => {}
            1 => {
                let side = *sides.iter().next().unwrap();
                side_edges.entry(side).or_default().extend(es);
                for &e in es {
                    edge_side.insert(e, side);
                }
            }
            _ => mixed = true,
        }
    }
    let left_edges = side_edges.remove(&Side::Left).unwrap_or_default();
    let right_edges = side_edges.remove(&Side::Right).unwrap_or_default();
    let separating = s.two_sided && !mixed;
    let mut contractible = false;
    let mut disk_side = None;
    if separating {
        let with_cycle = |es: &[EdgeId]| -> Vec<EdgeId> { es.iter().chain(&s.edges).copied().collect() };
        let l0 = induced_genus(emb, &with_cycle(&left_edges)) == 0;
        let r0 = induced_genus(emb, &with_cycle(&right_edges)) == 0;
        contractible = l0 || r0;
        disk_side = match (l0, r0) {
            (true, false) => Some(Side::Left),
            (false, true) => Some(Side::Right),
            (true, true) => {
                let faces = emb.faces();
                let target = match outer {
                    Some(seq) => crate::embedding::FaceWalk::canonical_sequence(seq),
                    None => faces.iter().map(|f| f.canonical_vertices()).min().unwrap_or_default(),
                };
                let face = faces
                    .iter()
                    .find(|f| f.canonical_vertices() == target)
                    .ok_or_else(|| TopologyError::Precondition(format!("{target:?} is not a face")))?;
                let outer_side = match face.edges.iter().find(|e| !s.is_cycle_edge(**e)) {
                    Some(e) => edge_side[e],
                    // the face is the cycle itself; it lies on a side without bridges
                    None if left_edges.is_empty() => Side::Left,
                    None => Side::Right,
                };
                Some(outer_side.other())
            }
            (false, false) => None,
        };
    }
    Ok(CycleClassification {
        cycle: cyc.to_vec(),
        edges: s.edges.clone(),
        two_sided: s.two_sided,
        separating,
        contractible,
        disk_side,
        left: Subgraph::from_edges(g, left_edges),
        right: Subgraph::from_edges(g, right_edges),
    })
}

/// The graph and embedding obtained by cutting along a cycle.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub embedding: Embedding,
    /// Original vertex of every vertex of the cut graph.
    pub vertex_origin: BTreeMap<VertexId, VertexId>,
    /// Original edge of every edge of the cut graph, by new edge id.
    pub edge_origin: Vec<EdgeId>,
    /// Per cycle position, the copy carrying the left edges and the one
    /// carrying the right edges. The left copy keeps the original id.
    pub copies: Vec<(VertexId, VertexId)>,
    pub two_sided: bool,
}

impl CutResult {
    pub fn graph(&self) -> &Graph {
        self.embedding.graph()
    }
}

/// Cut along `cyc`. A two-sided cycle becomes two copies, left edges on one
/// and right edges on the other. A one-sided cycle becomes a single cycle of
/// twice the length whose two closing edges keep signature -1.
pub fn cut_along(emb: &Embedding, cyc: &[VertexId]) -> Result<CutResult, TopologyError> {
    let s = Sides::new(emb, cyc)?;
    let g = emb.graph();
    let l = cyc.len();
    let top = *g.vertices().last().unwrap();
    let copies: Vec<(VertexId, VertexId)> = (0..l).map(|i| (cyc[i], top + 1 + i as VertexId)).collect();
    let copy = |i: usize, side: Side| match side {
        Side::Left => copies[i].0,
        Side::Right => copies[i].1,
    };
    let image = |e: EdgeId, v: VertexId| match s.pos.get(&v) {
        Some(&i) => copy(i, s.side_at(v, e)),
        None => v,
    };
    // (endpoints, original edge, signature)
    let mut pieces: Vec<((VertexId, VertexId), EdgeId, i8)> = Vec::new();
    let mut versions: BTreeMap<EdgeId, [(VertexId, VertexId); 2]> = BTreeMap::new();
    for (j, &e) in s.edges.iter().enumerate() {
        let k = (j + 1) % l;
        let vs = if s.two_sided || j + 1 < l {
            [(copy(j, Side::Left), copy(k, Side::Left)), (copy(j, Side::Right), copy(k, Side::Right))]
        } else {
            [(copy(j, Side::Left), copy(k, Side::Right)), (copy(j, Side::Right), copy(k, Side::Left))]
        };
        let sig = if !s.two_sided && j + 1 == l { -1 } else { 1 };
        for &p in &vs {
            pieces.push((p, e, sig));
        }
        versions.insert(e, vs);
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if !s.is_cycle_edge(e) {
            pieces.push(((image(e, a), image(e, b)), e, s.norm.signature(e)));
        }
    }
    let verts = g.vertices().iter().copied().chain(copies.iter().map(|c| c.1));
    let cut = Graph::new(verts, pieces.iter().map(|p| p.0))?;
    let mut edge_origin = vec![0; cut.m()];
    let mut sig = vec![1i8; cut.m()];
    for &((a, b), e, sg) in &pieces {
        let id = cut.edge_between(a, b).unwrap();
        edge_origin[id] = e;
        sig[id] = sg;
    }
    let mut vertex_origin = BTreeMap::new();
    let mut rot = Vec::with_capacity(cut.n());
    for &x in cut.vertices() {
        let (orig, side) = match copies.iter().position(|c| c.1 == x) {
            Some(i) => (cyc[i], Some(Side::Right)),
            None if s.pos.contains_key(&x) => (x, Some(Side::Left)),
            None => (x, None),
        };
        vertex_origin.insert(x, orig);
        let mut r = Vec::new();
        for &e in s.norm.rotation(orig) {
            if let Some(vs) = versions.get(&e) {
                let p = vs.iter().find(|p| p.0 == x || p.1 == x).unwrap();
                r.push(cut.edge_between(p.0, p.1).unwrap());
            } else if side.is_none_or(|sd| s.side_at(orig, e) == sd) {
                let w = g.other_end(e, orig);
                r.push(cut.edge_between(x, image(e, w)).unwrap());
            }
        }
        rot.push(r);
    }
    let embedding = Embedding::from_parts(cut, rot, sig)?;
    Ok(CutResult { embedding, vertex_origin, edge_origin, copies, two_sided: s.two_sided })
}

fn check_overlap(
    g: &Graph,
    c1: &[VertexId],
    c2: &[VertexId],
) -> Result<(BTreeSet<VertexId>, BTreeSet<EdgeId>), TopologyError> {
    let e1: BTreeSet<EdgeId> = g.cycle_edges(c1).unwrap().into_iter().collect();
    let e2: BTreeSet<EdgeId> = g.cycle_edges(c2).unwrap().into_iter().collect();
    if e1 == e2 {
        return Err(TopologyError::SameCycle);
    }
    let v1: BTreeSet<VertexId> = c1.iter().copied().collect();
    let x: BTreeSet<VertexId> = c2.iter().copied().filter(|v| v1.contains(v)).collect();
    let y: BTreeSet<EdgeId> = e1.intersection(&e2).copied().collect();
    if !x.is_empty() {
        // a forest on x with |x| - 1 edges is a tree; degrees are at most 2
        let sub = Subgraph { vertices: x.iter().copied().collect(), edges: y.iter().copied().collect() };
        if y.len() + 1 != x.len() || !g.subgraph_graph(&sub).is_connected() {
            return Err(TopologyError::BadOverlap(x.into_iter().collect()));
        }
    }
    Ok((x, y))
}

/// The result of cutting along both cycles of a homotopic pair.
struct DoubleCut {
    cut: CutResult,
    /// Component edges (cut-graph ids) of the cylinder between the cycles.
    component: Vec<EdgeId>,
}

fn double_cut(emb: &Embedding, c1: &[VertexId], c2: &[VertexId]) -> Result<Option<DoubleCut>, TopologyError> {
    let g = emb.graph();
    for c in [c1, c2] {
        if !g.is_cycle(c) {
            return Err(TopologyError::NotACycle(c.to_vec()));
        }
        if emb.cycle_signature(c) == Some(-1) {
            return Err(TopologyError::OneSided(c.to_vec()));
        }
    }
    let (x, y) = check_overlap(g, c1, c2)?;
    let cut1 = cut_along(emb, c1)?;
    let g1 = cut1.graph();
    let lifted: Vec<VertexId> = if x.is_empty() {
        c2.to_vec()
    } else {
        let l2 = c2.len();
        let e2 = g.cycle_edges(c2).unwrap();
        let mut sides = BTreeSet::new();
        for (i, &v) in c2.iter().enumerate() {
            if !x.contains(&v) {
                continue;
            }
            for q in [e2[(i + l2 - 1) % l2], e2[i]] {
                if y.contains(&q) {
                    continue;
                }
                let img = (0..g1.m()).find(|&k| cut1.edge_origin[k] == q).unwrap();
                let (a, b) = g1.edge(img);
                let end = if cut1.vertex_origin[&a] == v { a } else { b };
                sides.insert(end == v);
            }
        }
        if sides.len() > 1 {
            // the second cycle crosses the first
            return Ok(None);
        }
        let on_left = sides.into_iter().next().unwrap_or(true);
        let pos1: BTreeMap<VertexId, usize> = c1.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        c2.iter()
            .map(|&v| match pos1.get(&v) {
                Some(&i) if on_left => cut1.copies[i].0,
                Some(&i) => cut1.copies[i].1,
                None => v,
            })
            .collect()
    };
    if !g1.is_cycle(&lifted) {
        return Err(TopologyError::Precondition("second cycle does not lift to the cut graph".into()));
    }
    let cut2 = cut_along(&cut1.embedding, &lifted)?;
    let edge_origin: Vec<EdgeId> = cut2.edge_origin.iter().map(|&e| cut1.edge_origin[e]).collect();
    let vertex_origin: BTreeMap<VertexId, VertexId> =
        cut2.vertex_origin.iter().map(|(&k, v)| (k, cut1.vertex_origin[v])).collect();
    let e1: BTreeSet<EdgeId> = g.cycle_edges(c1).unwrap().into_iter().collect();
    let e2: BTreeSet<EdgeId> = g.cycle_edges(c2).unwrap().into_iter().collect();
    let only: BTreeSet<EdgeId> = e1.symmetric_difference(&e2).copied().collect();
    let g2 = cut2.graph();
    let mut best: Option<(usize, Vec<EdgeId>, Vec<EdgeId>)> = None;
    for comp in g2.components() {
        let ces: Vec<EdgeId> =
            comp.iter().flat_map(|&v| g2.incident_edges(v)).collect::<BTreeSet<_>>().into_iter().collect();
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for &e in &ces {
            *count.entry(edge_origin[e]).or_default() += 1;
        }
        if only.iter().any(|e| count.get(e) != Some(&1)) {
            continue;
        }
        if induced_genus(&cut2.embedding, &ces) != 0 {
            continue;
        }
        let origins: Vec<EdgeId> = count.keys().copied().collect();
        let key = (ces.len(), origins);
        if best.as_ref().is_none_or(|b| (b.0, &b.1) > (key.0, &key.1)) {
            best = Some((key.0, key.1, ces));
        }
    }
    let cut = CutResult {
        embedding: cut2.embedding,
        vertex_origin,
        edge_origin,
        copies: cut1.copies,
        two_sided: true,
    };
    Ok(best.map(|(_, _, component)| DoubleCut { cut, component }))
}

/// Cut along both cycles; if some component holds exactly one copy of each
/// and has genus 0, return it (as original edges): the cylinder `Int(C ∪ C')`.
/// The cycles must be two-sided and disjoint or meet in one path.
pub fn are_homotopic(emb: &Embedding, c1: &[VertexId], c2: &[VertexId]) -> Result<Option<Subgraph>, TopologyError> {
    Ok(double_cut(emb, c1, c2)?.map(|d| {
        Subgraph::from_edges(emb.graph(), d.component.iter().map(|&e| d.cut.edge_origin[e]))
    }))
}

fn same_direction(a: &[VertexId], b: &[VertexId]) -> bool {
    let k = b.iter().position(|&v| v == a[0]).unwrap();
    let fwd: Vec<VertexId> = b[k..].iter().chain(&b[..k]).copied().collect();
    fwd == a
}

/// Traversal of `cyc` with the bridge containing `target` on its left, read
/// in a globally oriented copy of a planar embedding.
fn oriented(emb: &Embedding, cyc: &[VertexId], target: EdgeId) -> Result<Vec<VertexId>, TopologyError> {
    let norm = emb.normalize_signatures();
    if norm.signatures().contains(&-1) {
        return Err(TopologyError::NotPlanar);
    }
    let c = classify_cycle(&norm, cyc)?;
    let mut out = cyc.to_vec();
    if c.right.contains_edge(target) {
        out.reverse();
    } else if !c.left.contains_edge(target) {
        return Err(TopologyError::Precondition("the two cycles are not separated by each other".into()));
    }
    Ok(out)
}

/// Vertex sequence of a cycle given by its edges.
fn edges_to_cycle(g: &Graph, edges: &BTreeSet<EdgeId>) -> Option<Vec<VertexId>> {
    let &e0 = edges.iter().next()?;
    let (start, mut cur) = g.edge(e0);
    let mut seq = vec![start];
    let mut prev = e0;
    while cur != start {
        seq.push(cur);
        let next = g.incident_edges(cur).filter(|e| edges.contains(e) && *e != prev).collect::<Vec<_>>();
        if next.len() != 1 {
            return None;
        }
        prev = next[0];
        cur = g.other_end(prev, cur);
        if seq.len() > edges.len() {
            return None;
        }
    }
    (seq.len() == edges.len() && g.is_cycle(&seq)).then_some(seq)
}

/// Whether `c1` and `c2`, contractible in `pi` and noncontractible homotopic
/// in `pi2`, are oriented alike in both. Each cylinder (the planar region
/// of `pi` spanned by the pair, and the cut-open component of `pi2`) induces
/// a direction on its two boundary cycles, region on the left; the answer
/// is whether the two cylinders agree on `c2` once they agree on `c1`.
pub fn same_relative_orientation(
    pi: &Embedding,
    pi2: &Embedding,
    c1: &[VertexId],
    c2: &[VertexId],
) -> Result<bool, TopologyError> {
    let pre = |s: &str| TopologyError::Precondition(s.into());
    if pi.graph() != pi2.graph() {
        return Err(pre("embeddings of different graphs"));
    }
    let g = pi.graph();
    let shared = c1.iter().filter(|v| c2.contains(v)).count();
    if shared > 1 {
        return Err(pre("cycles are not almost disjoint"));
    }
    for c in [c1, c2] {
        if !classify_cycle(pi, c)?.contractible {
            return Err(pre("cycle not contractible in the first embedding"));
        }
        if classify_cycle(pi2, c)?.contractible {
            return Err(pre("cycle contractible in the second embedding"));
        }
    }
    let d = double_cut(pi2, c1, c2)?.ok_or_else(|| pre("cycles not homotopic in the second embedding"))?;
    let k: Vec<EdgeId> =
        d.component.iter().map(|&e| d.cut.edge_origin[e]).collect::<BTreeSet<_>>().into_iter().collect();
    let (pk, back) = pi.restrict(&k);
    if pk.total_euler_genus() != 0 {
        return Err(pre("cycles do not lie in a common disk or cylinder of the first embedding"));
    }
    let e1 = g.cycle_edges(c1).unwrap();
    let e2 = g.cycle_edges(c2).unwrap();
    let in_k = |e: EdgeId| back.iter().position(|&b| b == e).unwrap();
    let k1 = oriented(&pk, c1, in_k(e2[0]))?;
    let k2 = oriented(&pk, c2, in_k(e1[0]))?;

    let (dk, back2) = d.cut.embedding.restrict(&d.component);
    let origin = |e: EdgeId| d.cut.edge_origin[back2[e]];
    let dg = dk.graph();
    let mut dirs = Vec::new();
    for es in [&e1, &e2] {
        let copy: BTreeSet<EdgeId> = (0..dg.m()).filter(|&e| es.contains(&origin(e))).collect();
        let seq = edges_to_cycle(dg, &copy).ok_or_else(|| pre("cut copy is not a cycle"))?;
        let other = (0..dg.m()).find(|e| !copy.contains(e)).ok_or_else(|| pre("empty cylinder"))?;
        let dir = oriented(&dk, &seq, other)?;
        dirs.push(dir.iter().map(|v| d.cut.vertex_origin[v]).collect::<Vec<_>>());
    }
    Ok(same_direction(&k1, &dirs[0]) == same_direction(&k2, &dirs[1]))
}

/// Re-embed `Int(C)` mirror-wise in a planar embedding whose exterior meets
/// `C` in at most two vertices. Rotations of interior vertices are reversed;
/// at a cycle vertex the block of interior and cycle edges is reversed in place.
pub fn flip(emb: &Embedding, cyc: &[VertexId], outer: Option<&[VertexId]>) -> Result<Embedding, TopologyError> {
    if !emb.graph().is_connected() || emb.euler_genus()? != 0 {
        return Err(TopologyError::NotPlanar);
    }
    let norm = emb.normalize_signatures();
    let g = norm.graph();
    let c = classify_cycle_with_outer(&norm, cyc, outer)?;
    let inner: BTreeSet<EdgeId> = c.int()?.edges.iter().chain(&c.edges).copied().collect();
    let attach: Vec<VertexId> =
        cyc.iter().copied().filter(|&v| g.incident_edges(v).any(|e| !inner.contains(&e))).collect();
    if attach.len() > 2 {
        return Err(TopologyError::TooManyAttachments(attach.len()));
    }
    let mut rot = Vec::with_capacity(g.n());
    for &v in g.vertices() {
        let mut r = norm.rotation(v).to_vec();
        let k = r.len();
        let ins: Vec<bool> = r.iter().map(|e| inner.contains(e)).collect();
        if ins.iter().all(|&b| b) {
            r.reverse();
        } else if ins.iter().any(|&b| b) {
            // start right after an exterior edge; the inner block must then be contiguous
            let s = (0..k).find(|&i| !ins[i] && ins[(i + 1) % k]).unwrap();
            r.rotate_left((s + 1) % k);
            let len = r.iter().take_while(|e| inner.contains(e)).count();
            if r[len..].iter().any(|e| inner.contains(e)) {
                return Err(TopologyError::Precondition(format!("interior edges at {v} are not contiguous")));
            }
            r[..len].reverse();
        }
        rot.push(r);
    }
    Ok(norm.with_parts(rot, norm.signatures().to_vec())?)
}

/// `C_e = f ∪ f' − e` for an interior edge `e` of a contractible cycle, where
/// `f` and `f'` are the two faces through `e`.
pub fn build_ce(
    emb: &Embedding,
    cyc: &[VertexId],
    e: EdgeId,
    outer: Option<&[VertexId]>,
) -> Result<Vec<VertexId>, TopologyError> {
    let g = emb.graph();
    let c = classify_cycle_with_outer(emb, cyc, outer)?;
    let (a, b) = g.edge(e);
    if !c.int()?.contains_edge(e) {
        return Err(TopologyError::EdgeNotInside(a, b));
    }
    let faces: Vec<_> = emb.faces().into_iter().filter(|f| f.edges.contains(&e)).collect();
    if faces.len() != 2 {
        return Err(TopologyError::SameFace(a, b));
    }
    let mut es: BTreeSet<EdgeId> = faces.iter().flat_map(|f| f.edges.iter().copied()).collect();
    es.remove(&e);
    edges_to_cycle(g, &es).ok_or_else(|| TopologyError::Precondition("f ∪ f' − e is not a cycle".into()))
}
