//! Forbidden-structure detectors on an embedded graph: nested and
//! well-nested cycles, well-homotopic families, contractible and homotopic
//! squares with their good/bad count, almost-disjoint families, cycles on a
//! spanning tree, nonhomotopic path families and the face radius of a disk.
//!
//! Faces are indices into `Embedding::faces()`. The faces inside a
//! contractible cycle are those with an edge in its interior; a cycle with
//! empty interior has the single face on its disk side. A piece is a vertex
//! or a face. Lengths of face-pinch subpaths count edges. When two cycles
//! meet in a single vertex that vertex is the piece, even if some face would
//! also qualify.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{Embedding, FaceWalk};
use crate::genus::{min_euler_genus, SearchConfig};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};
use crate::topology::{are_homotopic, classify_cycle_with_outer, CycleClassification, TopologyError};

pub type FaceId = usize;

/// Branch-and-bound nodes for the exact set searches.
const NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("cycle {0:?} is not contractible")]
    NotContractible(Vec<VertexId>),
    #[error("cycle {0:?} is contractible")]
    Contractible(Vec<VertexId>),
    #[error("cycle {0:?} is not nested in {1:?}")]
    NotNested(Vec<VertexId>, Vec<VertexId>),
    #[error("cycles {0:?} and {1:?} are not homotopic")]
    NotHomotopic(Vec<VertexId>, Vec<VertexId>),
    #[error("closest cycle is not unique: {0} candidates qualify")]
    NotUnique(usize),
    #[error("cycle enumeration stopped at {0} cycles")]
    Budget(usize),
    #[error("square precondition failed: {0}")]
    Square(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Vertex(VertexId),
    /// A face by its canonical vertex sequence.
    Face(Vec<VertexId>),
}

/// How two nested (or homotopic) cycles meet. Pieces are sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellNestedKind {
    Free,
    OnePiece(Piece),
    TwoPieces(Piece, Piece),
}

impl WellNestedKind {
    pub fn pieces(&self) -> Vec<&Piece> {
        match self {
            WellNestedKind::Free => vec![],
            WellNestedKind::OnePiece(p) => vec![p],
            WellNestedKind::TwoPieces(p, q) => vec![p, q],
        }
    }
}

/// A cycle with its classification and, when contractible, its interior.
#[derive(Clone, Debug)]
pub struct CycleInfo {
    pub cycle: Vec<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    pub vertices: BTreeSet<VertexId>,
    pub class: CycleClassification,
    /// Edges and vertices of `int(C)` off the cycle; empty unless contractible.
    pub int_edges: BTreeSet<EdgeId>,
    pub int_vertices: BTreeSet<VertexId>,
    /// `F(C)`; empty unless contractible.
    pub faces: BTreeSet<FaceId>,
}

impl CycleInfo {
    pub fn contractible(&self) -> bool {
        self.class.contractible
    }
}

/// `Int(C ∪ C')` of two homotopic cycles with its interior.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub edges: BTreeSet<EdgeId>,
    pub int_edges: BTreeSet<EdgeId>,
    pub int_vertices: BTreeSet<VertexId>,
    pub faces: BTreeSet<FaceId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellNestedChain {
    /// Innermost first: `cycles[i]` is well nested in `cycles[i + 1]`.
    pub cycles: Vec<Vec<VertexId>>,
    /// `None` for chains of fewer than two cycles.
    pub kind: Option<WellNestedKind>,
    /// Longest chain per discipline, in cycles.
    pub best_free: usize,
    pub best_one_piece: usize,
    pub best_two_pieces: usize,
    pub candidates: usize,
    /// False when cycle enumeration hit the budget; the lengths are then lower bounds.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRadius {
    pub face: FaceId,
    pub vertices: Vec<VertexId>,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusMap {
    pub faces: Vec<FaceRadius>,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closest {
    Found(Vec<VertexId>),
    /// No faces given: the cycle itself.
    Itself,
    /// No nested cycle leaves the faces outside it.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareInput {
    /// `(C, C', C'')`, outermost first.
    Contractible { c: Vec<VertexId>, c1: Vec<VertexId>, c2: Vec<VertexId> },
    /// `(C¹, C², C¹', C²', C¹'', C²'')`.
    Homotopic {
        c1: Vec<VertexId>,
        c2: Vec<VertexId>,
        c1p: Vec<VertexId>,
        c2p: Vec<VertexId>,
        c1pp: Vec<VertexId>,
        c2pp: Vec<VertexId>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Good,
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareContext {
    pub input: SquareInput,
    pub kind: WellNestedKind,
    /// `B`: boundary faces.
    pub boundary: Vec<FaceId>,
    /// `I`: faces inside the innermost cycles.
    pub interior: Vec<FaceId>,
    /// `B_N`: boundary faces that are not faces of the reference embedding.
    pub boundary_n: Vec<FaceId>,
    /// A maximum almost-disjoint family of interior faces that are not faces
    /// of the reference embedding.
    pub interior_n: Vec<FaceId>,
    pub threshold: i64,
    pub verdict: Verdict,
    /// `|B_N| = 0`, where the threshold is negative.
    pub empty_boundary_n: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyFamily {
    /// Paths from `a` to `b`, or cycles starting at `a` when `a = b`.
    pub members: Vec<Vec<VertexId>>,
    pub euler_genus: usize,
    /// Largest `k` allowed for a family `P_0 .. P_k`.
    pub bound: usize,
    pub within_bound: bool,
    pub candidates: usize,
    pub exact: bool,
}

/// Bad-square threshold `18 (42 b - 3)`.
pub fn bad_square_threshold(b_n: usize) -> i64 {
    18 * (42 * b_n as i64 - 3)
}

/// Largest `k` for pairwise nonhomotopic internally disjoint `P_0 .. P_k`.
pub fn homotopy_bound(euler_genus: usize) -> usize {
    if euler_genus <= 1 {
        euler_genus
    } else {
        3 * euler_genus - 3
    }
}

/// Each member shares at most one vertex with the union of the others.
pub fn is_almost_disjoint(cycles: &[Vec<VertexId>]) -> bool {
    let sets: Vec<BTreeSet<VertexId>> = cycles.iter().map(|c| c.iter().copied().collect()).collect();
    let mut count: HashMap<VertexId, usize> = HashMap::new();
    for s in &sets {
        for &v in s {
            *count.entry(v).or_default() += 1;
        }
    }
    sets.iter().all(|s| s.iter().filter(|v| count[v] >= 2).count() <= 1)
}

/// Whether `subs` are cycles on a spanning tree rooted at `a`: each is a
/// cycle plus a path from `a` to it, and some spanning tree of their union
/// leaves exactly one edge outside per member, on that member's cycle and
/// in no other member.
pub fn is_cycles_on_spanning_tree(g: &Graph, a: VertexId, subs: &[Subgraph]) -> bool {
    if subs.is_empty() {
        return false;
    }
    let mut cycle_edges = Vec::new();
    for s in subs {
        match lollipop_cycle(g, a, s) {
            Some(c) => cycle_edges.push(c),
            None => return false,
        }
    }
    let union = Subgraph::from_edges(g, subs.iter().flat_map(|s| s.edges.iter().copied()));
    if union.edges.len() + 1 != union.vertices.len() + subs.len() {
        return false;
    }
    let owners = |e: EdgeId| subs.iter().filter(|s| s.contains_edge(e)).count();
    let choices: Vec<Vec<EdgeId>> =
        cycle_edges.iter().map(|c| c.iter().copied().filter(|&e| owners(e) == 1).collect()).collect();
    let mut picked = Vec::new();
    pick_cotree(g, &union, &choices, &mut picked)
}

/// The cycle edges of `s` if it is a cycle with a pendant path ending at `a`
/// (or a cycle through `a`).
fn lollipop_cycle(g: &Graph, a: VertexId, s: &Subgraph) -> Option<Vec<EdgeId>> {
    if !s.contains_vertex(a) || s.edges.len() != s.vertices.len() || s.vertices.len() < 3 {
        return None;
    }
    let (h, back) = g.edge_subgraph(&s.edges);
    if !h.is_connected() {
        return None;
    }
    let deg = |v: VertexId| h.degree(v);
    let threes = h.vertices().iter().filter(|&&v| deg(v) == 3).count();
    let ok = if deg(a) == 2 {
        h.vertices().iter().all(|&v| deg(v) == 2)
    } else {
        deg(a) == 1 && threes == 1 && h.vertices().iter().all(|&v| v == a || deg(v) == 2 || deg(v) == 3)
    };
    if !ok {
        return None;
    }
    // strip the stick from a
    let mut stick = BTreeSet::new();
    let mut cur = a;
    let mut prev = None;
    while deg(cur) != 3 && deg(a) == 1 {
        let e = h.incident_edges(cur).find(|&e| Some(e) != prev).unwrap();
        stick.insert(e);
        prev = Some(e);
        cur = h.other_end(e, cur);
    }
    Some((0..h.m()).filter(|e| !stick.contains(e)).map(|e| back[e]).collect())
}

fn pick_cotree(g: &Graph, union: &Subgraph, choices: &[Vec<EdgeId>], picked: &mut Vec<EdgeId>) -> bool {
    let i = picked.len();
    if i == choices.len() {
        let tree: Vec<EdgeId> = union.edges.iter().copied().filter(|e| !picked.contains(e)).collect();
        let (t, _) = g.edge_subgraph(&tree);
        return t.n() == union.vertices.len() && t.is_connected();
    }
    for &e in &choices[i] {
        picked.push(e);
        if pick_cotree(g, union, choices, picked) {
            return true;
        }
        picked.pop();
    }
    false
}

/// Connected components of the subgraph with the given vertices and edges.
fn components(g: &Graph, vs: &BTreeSet<VertexId>, es: &BTreeSet<EdgeId>) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in vs {
        if !seen.insert(s) {
            continue;
        }
        let mut cv = BTreeSet::from([s]);
        let mut ce = BTreeSet::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for e in g.incident_edges(x) {
                if es.contains(&e) {
                    ce.insert(e);
                    let y = g.other_end(e, x);
                    if seen.insert(y) {
                        cv.insert(y);
                        stack.push(y);
                    }
                }
            }
        }
        out.push((cv, ce));
    }
    out
}

/// End vertices if the (connected) subgraph is a path.
fn path_ends(g: &Graph, vs: &BTreeSet<VertexId>, es: &BTreeSet<EdgeId>) -> Option<(VertexId, VertexId)> {
    if es.len() + 1 != vs.len() {
        return None;
    }
    let mut deg: BTreeMap<VertexId, usize> = vs.iter().map(|&v| (v, 0)).collect();
    for &e in es {
        let (a, b) = g.edge(e);
        *deg.get_mut(&a)? += 1;
        *deg.get_mut(&b)? += 1;
    }
    if deg.values().any(|&d| d > 2) {
        return None;
    }
    let ends: Vec<VertexId> = deg.iter().filter(|(_, &d)| d <= 1).map(|(&v, _)| v).collect();
    match ends.as_slice() {
        [v] => Some((*v, *v)),
        [u, v] => Some((*u, *v)),
        _ => None,
    }
}

/// An embedding with its faces and a cache of cycle classifications.
pub struct Structure {
    emb: Embedding,
    outer: Option<Vec<VertexId>>,
    faces: Vec<FaceWalk>,
    face_vertices: Vec<BTreeSet<VertexId>>,
    face_edges: Vec<BTreeSet<EdgeId>>,
    cache: Mutex<HashMap<Vec<EdgeId>, Arc<CycleInfo>>>,
}

impl Structure {
    pub fn new(emb: &Embedding) -> Structure {
        Structure::with_outer(emb, None)
    }

    /// `outer` picks the outer face (as a facial vertex sequence) when the
    /// embedding is a sphere; see `classify_cycle_with_outer`.
    pub fn with_outer(emb: &Embedding, outer: Option<&[VertexId]>) -> Structure {
        let faces = emb.faces();
        let face_vertices = faces.iter().map(|f| f.vertices.iter().copied().collect()).collect();
        let face_edges = faces.iter().map(|f| f.edges.iter().copied().collect()).collect();
        Structure {
            emb: emb.clone(),
            outer: outer.map(|o| o.to_vec()),
            faces,
            face_vertices,
            face_edges,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn graph(&self) -> &Graph {
        self.emb.graph()
    }

    pub fn faces(&self) -> &[FaceWalk] {
        &self.faces
    }

    pub fn face_vertices(&self, f: FaceId) -> &BTreeSet<VertexId> {
        &self.face_vertices[f]
    }

    pub fn face_sequence(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[f].canonical_vertices()
    }

    /// Faces of a subgraph with respect to the embedding: the connected
    /// components of each face intersected with the subgraph.
    pub fn faces_of_subgraph(&self, sub: &Subgraph) -> Vec<(FaceId, Subgraph)> {
        let g = self.graph();
        let sv: BTreeSet<VertexId> = sub.vertices.iter().copied().collect();
        let se: BTreeSet<EdgeId> = sub.edges.iter().copied().collect();
        let mut out = Vec::new();
        for f in 0..self.faces.len() {
            let vs = &self.face_vertices[f] & &sv;
            let es = &self.face_edges[f] & &se;
            for (cv, ce) in components(g, &vs, &es) {
                out.push((f, Subgraph { vertices: cv.into_iter().collect(), edges: ce.into_iter().collect() }));
            }
        }
        out
    }

    pub fn cycle_info(&self, cyc: &[VertexId]) -> Result<Arc<CycleInfo>, StructureError> {
        let g = self.graph();
        let mut key = g.cycle_edges(cyc).filter(|_| g.is_cycle(cyc)).ok_or_else(|| TopologyError::NotACycle(cyc.to_vec()))?;
        key.sort_unstable();
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let class = classify_cycle_with_outer(&self.emb, cyc, self.outer.as_deref())?;
        let edges: BTreeSet<EdgeId> = key.iter().copied().collect();
        let vertices: BTreeSet<VertexId> = cyc.iter().copied().collect();
        let (mut int_edges, mut int_vertices, mut faces) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
        if class.contractible {
            let int = class.int()?;
            int_edges = int.edges.iter().copied().collect();
            int_vertices = int.vertices.iter().copied().filter(|v| !vertices.contains(v)).collect();
            if int_edges.is_empty() {
                // the disk face itself; when both sides are empty take the later one
                if let Some(f) = (0..self.faces.len()).rev().find(|&f| self.face_edges[f] == edges && self.faces[f].len() == edges.len()) {
                    faces.insert(f);
                }
            } else {
                faces = (0..self.faces.len()).filter(|&f| !self.face_edges[f].is_disjoint(&int_edges)).collect();
            }
        }
        let info = Arc::new(CycleInfo { cycle: cyc.to_vec(), edges, vertices, class, int_edges, int_vertices, faces });
        self.cache.lock().unwrap().insert(key, info.clone());
        Ok(info)
    }

    fn contractible_info(&self, cyc: &[VertexId]) -> Result<Arc<CycleInfo>, StructureError> {
        let c = self.cycle_info(cyc)?;
        if !c.contractible() {
            return Err(StructureError::NotContractible(cyc.to_vec()));
        }
        Ok(c)
    }

    fn noncontractible_info(&self, cyc: &[VertexId]) -> Result<Arc<CycleInfo>, StructureError> {
        let c = self.cycle_info(cyc)?;
        if c.contractible() {
            return Err(StructureError::Contractible(cyc.to_vec()));
        }
        Ok(c)
    }

    /// `inner ⊆ Int(outer)`, both contractible and distinct.
    fn nested(inner: &CycleInfo, outer: &CycleInfo) -> bool {
        inner.edges != outer.edges && inner.edges.iter().all(|e| outer.edges.contains(e) || outer.int_edges.contains(e))
    }

    /// The face pieces explaining a shared component `comp` of `c ∩ c2`:
    /// faces `f` where `c ∩ f` is a path `P` of at least three edges and
    /// `c2 ∩ f` equals `comp` and avoids the ends of `P`.
    fn face_piece(&self, c: &CycleInfo, c2: &CycleInfo, comp: &(BTreeSet<VertexId>, BTreeSet<EdgeId>)) -> Option<Piece> {
        let g = self.graph();
        (0..self.faces.len())
            .filter(|&f| {
                let pv = &c.vertices & &self.face_vertices[f];
                let pe = &c.edges & &self.face_edges[f];
                if pe.len() < 3 || components(g, &pv, &pe).len() != 1 {
                    return false;
                }
                let Some((x, y)) = path_ends(g, &pv, &pe) else { return false };
                let qv = &c2.vertices & &self.face_vertices[f];
                let qe = &c2.edges & &self.face_edges[f];
                qv == comp.0 && qe == comp.1 && !qv.contains(&x) && !qv.contains(&y) && qe.is_subset(&pe)
            })
            .map(|f| self.face_sequence(f))
            .min()
            .map(Piece::Face)
    }

    /// How `c2` meets `c`, with `c` the cycle whose face intersections must
    /// contain those of `c2`.
    fn pinch(&self, c: &CycleInfo, c2: &CycleInfo) -> Option<WellNestedKind> {
        let g = self.graph();
        let comps = components(g, &(&c.vertices & &c2.vertices), &(&c.edges & &c2.edges));
        let mut pieces = Vec::new();
        if comps.len() > 2 {
            return None;
        }
        for comp in &comps {
            if comp.1.is_empty() && comp.0.len() == 1 {
                pieces.push(Piece::Vertex(*comp.0.iter().next().unwrap()));
            } else {
                pieces.push(self.face_piece(c, c2, comp)?);
            }
        }
        pieces.sort();
        Some(match pieces.len() {
            0 => WellNestedKind::Free,
            1 => WellNestedKind::OnePiece(pieces.pop().unwrap()),
            _ => {
                let q = pieces.pop().unwrap();
                let p = pieces.pop().unwrap();
                if p == q {
                    return None;
                }
                WellNestedKind::TwoPieces(p, q)
            }
        })
    }

    /// Category of `inner` well nested in `outer`, or `None` if nested but
    /// not well nested.
    pub fn classify_well_nested(&self, outer: &[VertexId], inner: &[VertexId]) -> Result<Option<WellNestedKind>, StructureError> {
        let o = self.contractible_info(outer)?;
        let i = self.contractible_info(inner)?;
        if !Self::nested(&i, &o) {
            return Err(StructureError::NotNested(inner.to_vec(), outer.to_vec()));
        }
        Ok(self.pinch(&o, &i))
    }

    /// Common category of a chain given innermost first, or `None` if some
    /// link is not well nested or the categories differ.
    pub fn well_nested_chain_kind(&self, cycles: &[Vec<VertexId>]) -> Result<Option<WellNestedKind>, StructureError> {
        if cycles.len() < 2 {
            return Err(StructureError::Precondition("a chain needs two cycles".into()));
        }
        let mut kind = None;
        for w in cycles.windows(2) {
            match self.classify_well_nested(&w[1], &w[0])? {
                None => return Ok(None),
                Some(k) if kind.as_ref().is_some_and(|k0| *k0 != k) => return Ok(None),
                Some(k) => kind = Some(k),
            }
        }
        Ok(kind)
    }

    /// All cycles up to `budget`, shortest first then lexicographic.
    fn sorted_cycles(&self, budget: usize) -> (Vec<Vec<VertexId>>, bool) {
        let mut cs = self.graph().cycles(budget.saturating_add(1));
        let exact = cs.len() <= budget;
        cs.truncate(budget);
        cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        (cs, exact)
    }

    /// A longest well-nested chain over the first `budget` cycles.
    pub fn longest_well_nested_chain(&self, budget: usize) -> Result<WellNestedChain, StructureError> {
        let (cycles, exact) = self.sorted_cycles(budget);
        let infos: Vec<Arc<CycleInfo>> = cycles
            .par_iter()
            .map(|c| self.cycle_info(c))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|c| c.contractible())
            .collect();
        let mut order: Vec<usize> = (0..infos.len()).collect();
        order.sort_by_key(|&i| (infos[i].int_edges.len(), i));
        let rank: Vec<usize> = {
            let mut r = vec![0; infos.len()];
            for (k, &i) in order.iter().enumerate() {
                r[i] = k;
            }
            r
        };
        // arcs into each outer cycle from the cycles nested in it
        let arcs: Vec<Vec<(usize, WellNestedKind)>> = (0..infos.len())
            .into_par_iter()
            .map(|j| {
                (0..infos.len())
                    .filter(|&i| rank[i] < rank[j] && Self::nested(&infos[i], &infos[j]))
                    .filter_map(|i| self.pinch(&infos[j], &infos[i]).map(|k| (i, k)))
                    .collect()
            })
            .collect();
        let mut best: Vec<BTreeMap<WellNestedKind, (usize, usize)>> = vec![BTreeMap::new(); infos.len()];
        for &j in &order {
            for (i, k) in &arcs[j] {
                let len = best[*i].get(k).map_or(1, |x| x.0) + 1;
                let slot = best[j].entry(k.clone()).or_insert((0, usize::MAX));
                if len > slot.0 || len == slot.0 && *i < slot.1 {
                    *slot = (len, *i);
                }
            }
        }
        let base = usize::from(!infos.is_empty());
        let mut top: Option<(usize, WellNestedKind, usize)> = None;
        let (mut best_free, mut best_one, mut best_two) = (base, base, base);
        for &j in &order {
            for (k, &(len, _)) in &best[j] {
                match k {
                    WellNestedKind::Free => best_free = best_free.max(len),
                    WellNestedKind::OnePiece(_) => best_one = best_one.max(len),
                    WellNestedKind::TwoPieces(..) => best_two = best_two.max(len),
                }
                let better = match &top {
                    None => true,
                    Some((l, k0, _)) => len > *l || len == *l && k < k0,
                };
                if better {
                    top = Some((len, k.clone(), j));
                }
            }
        }
        let (chain, kind) = match top {
            None => (infos.first().map(|c| vec![c.cycle.clone()]).unwrap_or_default(), None),
            Some((_, k, mut j)) => {
                let mut out = vec![infos[j].cycle.clone()];
                while let Some(&(_, i)) = best[j].get(&k) {
                    out.push(infos[i].cycle.clone());
                    j = i;
                }
                out.reverse();
                (out, Some(k))
            }
        };
        Ok(WellNestedChain {
            cycles: chain,
            kind,
            best_free,
            best_one_piece: best_one,
            best_two_pieces: best_two,
            candidates: infos.len(),
            exact,
        })
    }

    /// `Int(c1 ∪ c2)` if the cycles are homotopic.
    pub fn cylinder(&self, c1: &[VertexId], c2: &[VertexId]) -> Result<Option<Cylinder>, StructureError> {
        let Some(sub) = are_homotopic(&self.emb, c1, c2)? else { return Ok(None) };
        let a = self.cycle_info(c1)?;
        let b = self.cycle_info(c2)?;
        let edges: BTreeSet<EdgeId> = sub.edges.iter().copied().collect();
        let int_edges: BTreeSet<EdgeId> =
            edges.iter().copied().filter(|e| !a.edges.contains(e) && !b.edges.contains(e)).collect();
        let int_vertices =
            sub.vertices.iter().copied().filter(|v| !a.vertices.contains(v) && !b.vertices.contains(v)).collect();
        let faces = (0..self.faces.len()).filter(|&f| !self.face_edges[f].is_disjoint(&int_edges)).collect();
        Ok(Some(Cylinder { edges, int_edges, int_vertices, faces }))
    }

    fn cylinder_of(&self, c1: &[VertexId], c2: &[VertexId]) -> Result<Cylinder, StructureError> {
        self.cylinder(c1, c2)?.ok_or_else(|| StructureError::NotHomotopic(c1.to_vec(), c2.to_vec()))
    }

    /// Category of `c` well homotopic in `c2`: `c2` meets each pinch face
    /// inside the path `c` has there.
    pub fn classify_well_homotopic(&self, c: &[VertexId], c2: &[VertexId]) -> Result<Option<WellNestedKind>, StructureError> {
        let a = self.noncontractible_info(c)?;
        let b = self.noncontractible_info(c2)?;
        self.cylinder_of(c, c2)?;
        Ok(self.pinch(&a, &b))
    }

    /// Homotopic cycles in this order: no cycle meets the interior of the
    /// cylinder between two consecutive ones.
    pub fn is_in_this_order(&self, cycles: &[Vec<VertexId>]) -> Result<bool, StructureError> {
        let infos = cycles.iter().map(|c| self.noncontractible_info(c)).collect::<Result<Vec<_>, _>>()?;
        for w in cycles.windows(2) {
            let cyl = self.cylinder_of(&w[0], &w[1])?;
            for c in &infos {
                if !c.edges.is_disjoint(&cyl.int_edges) || !c.vertices.is_disjoint(&cyl.int_vertices) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Common category of homotopic cycles in this order, `None` if the
    /// order fails or the categories differ.
    pub fn well_homotopic_chain_kind(&self, cycles: &[Vec<VertexId>]) -> Result<Option<WellNestedKind>, StructureError> {
        if cycles.len() < 2 {
            return Err(StructureError::Precondition("a chain needs two cycles".into()));
        }
        if !self.is_in_this_order(cycles)? {
            return Ok(None);
        }
        let mut kind = None;
        for w in cycles.windows(2) {
            match self.classify_well_homotopic(&w[0], &w[1])? {
                None => return Ok(None),
                Some(k) if kind.as_ref().is_some_and(|k0| *k0 != k) => return Ok(None),
                Some(k) => kind = Some(k),
            }
        }
        Ok(kind)
    }

    /// Face radii inside a contractible cycle. A cycle with empty interior
    /// has radius 0 and no entries.
    pub fn radius(&self, cyc: &[VertexId]) -> Result<RadiusMap, StructureError> {
        let c = self.contractible_info(cyc)?;
        if c.int_edges.is_empty() {
            return Ok(RadiusMap { faces: vec![], radius: 0 });
        }
        let mut rad: BTreeMap<FaceId, usize> = BTreeMap::new();
        let mut layer: Vec<FaceId> = c.faces.iter().copied().filter(|&f| !self.face_vertices[f].is_disjoint(&c.vertices)).collect();
        let mut r = 1;
        while !layer.is_empty() {
            for &f in &layer {
                rad.insert(f, r);
            }
            let touched: BTreeSet<VertexId> = layer.iter().flat_map(|&f| self.face_vertices[f].iter().copied()).collect();
            layer = c
                .faces
                .iter()
                .copied()
                .filter(|f| !rad.contains_key(f) && !self.face_vertices[*f].is_disjoint(&touched))
                .collect();
            r += 1;
        }
        if rad.len() != c.faces.len() {
            return Err(StructureError::Precondition("some interior face is unreachable from the cycle".into()));
        }
        let faces: Vec<FaceRadius> =
            rad.iter().map(|(&f, &r)| FaceRadius { face: f, vertices: self.face_sequence(f), radius: r }).collect();
        let radius = faces.iter().map(|f| f.radius).max().unwrap_or(0);
        Ok(RadiusMap { faces, radius })
    }

    /// `B(C)`: faces between `c` and the nested `c1` that touch `c`.
    pub fn boundary_faces(&self, c: &[VertexId], c1: &[VertexId]) -> Result<BTreeSet<FaceId>, StructureError> {
        let o = self.contractible_info(c)?;
        let i = self.contractible_info(c1)?;
        if !Self::nested(&i, &o) {
            return Err(StructureError::NotNested(c1.to_vec(), c.to_vec()));
        }
        Ok(o.faces
            .difference(&i.faces)
            .copied()
            .filter(|&f| !self.face_vertices[f].is_disjoint(&o.vertices))
            .collect())
    }

    /// The cycle nested in `c` closest to it with `faces` between them.
    /// Every qualifying cycle among the first `budget` is compared; exactly
    /// one must lie in the region of all the others.
    pub fn closest_enclosing_cycle(&self, c: &[VertexId], faces: &BTreeSet<FaceId>, budget: usize) -> Result<Closest, StructureError> {
        let o = self.contractible_info(c)?;
        if !faces.is_subset(&o.faces) {
            return Err(StructureError::Precondition("faces are not all inside the cycle".into()));
        }
        if faces.is_empty() {
            return Ok(Closest::Itself);
        }
        let (cycles, exact) = self.sorted_cycles(budget);
        if !exact {
            return Err(StructureError::Budget(budget));
        }
        let cands: Vec<Arc<CycleInfo>> = cycles
            .par_iter()
            .map(|x| self.cycle_info(x))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|x| x.contractible() && Self::nested(x, &o) && x.faces.is_disjoint(faces))
            .collect();
        if cands.is_empty() {
            return Ok(Closest::Exhausted);
        }
        let winners: Vec<&Arc<CycleInfo>> =
            cands.iter().filter(|x| cands.iter().all(|y| x.edges.is_disjoint(&y.int_edges))).collect();
        match winners.as_slice() {
            [w] => Ok(Closest::Found(w.cycle.clone())),
            _ => Err(StructureError::NotUnique(winners.len())),
        }
    }

    /// The cycle homotopic to `c` closest to it with `faces` in their
    /// cylinder, by the same comparison as `closest_enclosing_cycle`.
    pub fn closest_homotopic_cycle(&self, c: &[VertexId], faces: &BTreeSet<FaceId>, budget: usize) -> Result<Closest, StructureError> {
        let o = self.noncontractible_info(c)?;
        if faces.is_empty() {
            return Ok(Closest::Itself);
        }
        let (cycles, exact) = self.sorted_cycles(budget);
        if !exact {
            return Err(StructureError::Budget(budget));
        }
        let cands: Vec<(Arc<CycleInfo>, Cylinder)> = cycles
            .par_iter()
            .filter_map(|x| {
                let info = match self.cycle_info(x) {
                    Ok(i) => i,
                    Err(e) => return Some(Err(e)),
                };
                if info.contractible() || info.edges == o.edges || !info.class.two_sided {
                    return None;
                }
                match self.cylinder(c, x) {
                    Ok(Some(cyl)) if faces.is_subset(&cyl.faces) => Some(Ok((info, cyl))),
                    Ok(_) | Err(StructureError::Topology(TopologyError::BadOverlap(_))) => None,
                    Err(e) => Some(Err(e)),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if cands.is_empty() {
            return Ok(Closest::Exhausted);
        }
        let winners: Vec<&Arc<CycleInfo>> = cands
            .iter()
            .filter(|(x, _)| cands.iter().all(|(_, cyl)| x.edges.is_subset(&cyl.edges)))
            .map(|(x, _)| x)
            .collect();
        match winners.as_slice() {
            [w] => Ok(Closest::Found(w.cycle.clone())),
            _ => Err(StructureError::NotUnique(winners.len())),
        }
    }

    /// Check the square definition; returns its category, `B` and `I`.
    fn square_parts(
        &self,
        input: &SquareInput,
        e: Option<EdgeId>,
        budget: usize,
    ) -> Result<(WellNestedKind, BTreeSet<FaceId>, BTreeSet<FaceId>), StructureError> {
        let same = |found: &Closest, want: &[VertexId]| -> Result<bool, StructureError> {
            Ok(match found {
                Closest::Found(x) => self.cycle_info(x)?.edges == self.cycle_info(want)?.edges,
                _ => false,
            })
        };
        match input {
            SquareInput::Contractible { c, c1, c2 } => {
                let kind = self
                    .well_nested_chain_kind(&[c2.clone(), c1.clone(), c.clone()])?
                    .ok_or_else(|| StructureError::Square("C, C', C'' are not well nested in reverse order".into()))?;
                let b = self.boundary_faces(c, c1)?;
                if !same(&self.closest_enclosing_cycle(c, &b, budget)?, c1)? {
                    return Err(StructureError::Square("C' is not the closest cycle enclosing B(C)".into()));
                }
                let inner = self.contractible_info(c2)?;
                if e.is_some_and(|e| !inner.int_edges.contains(&e)) {
                    return Err(StructureError::Square("e is not in int(C'')".into()));
                }
                Ok((kind, b, inner.faces.clone()))
            }
            SquareInput::Homotopic { c1, c2, c1p, c2p, c1pp, c2pp } => {
                let order = [c1.clone(), c1p.clone(), c1pp.clone(), c2pp.clone(), c2p.clone(), c2.clone()];
                let kind = self.well_homotopic_chain_kind(&order)?.ok_or_else(|| {
                    StructureError::Square("the six cycles are not well homotopic in the order C1, C1', C1'', C2'', C2', C2".into())
                })?;
                let mut b = BTreeSet::new();
                for (x, xp, name) in [(c1, c1p, "C1'"), (c2, c2p, "C2'")] {
                    let vx = self.cycle_info(x)?.vertices.clone();
                    let side: BTreeSet<FaceId> = self
                        .cylinder_of(x, xp)?
                        .faces
                        .into_iter()
                        .filter(|&f| !self.face_vertices[f].is_disjoint(&vx))
                        .collect();
                    if !same(&self.closest_homotopic_cycle(x, &side, budget)?, xp)? {
                        return Err(StructureError::Square(format!("{name} is not the closest cycle enclosing its boundary faces")));
                    }
                    b.extend(side);
                }
                let mid = self.cylinder_of(c1pp, c2pp)?;
                if e.is_some_and(|e| !mid.int_edges.contains(&e)) {
                    return Err(StructureError::Square("e is not in int(C1'' ∪ C2'')".into()));
                }
                Ok((kind, b, mid.faces))
            }
        }
    }

    /// Check that `input` is a contractible or homotopic square; returns
    /// its category, boundary faces `B` and interior faces `I`.
    pub fn square_kind(
        &self,
        input: &SquareInput,
        budget: usize,
    ) -> Result<(WellNestedKind, BTreeSet<FaceId>, BTreeSet<FaceId>), StructureError> {
        self.square_parts(input, None, budget)
    }

    /// Good/bad verdict of a square against an embedding `pi_e` of `G - e`.
    /// `budget` caps the cycles searched for the closest-cycle check.
    pub fn square_verdict(&self, pi_e: &Embedding, input: &SquareInput, e: EdgeId, budget: usize) -> Result<SquareContext, StructureError> {
        let (kind, b, i) = self.square_parts(input, Some(e), budget)?;
        Ok(self.count_square(pi_e, input.clone(), kind, &b, &i))
    }

    /// As `square_verdict`, with `pi_e` ranging over the minimum-genus
    /// embeddings of `G - e` (the genus search witnesses, then up to
    /// `max_embeddings` rotation systems) and the one minimising `|I_N|` kept. The flag is false when the enumeration
    /// was cut short.
    pub fn square_verdict_adversarial(
        &self,
        input: &SquareInput,
        e: EdgeId,
        budget: usize,
        max_embeddings: usize,
    ) -> Result<(SquareContext, Embedding, bool), StructureError> {
        let (kind, b, i) = self.square_parts(input, Some(e), budget)?;
        let ge = self.graph().delete_edge(e).map_err(TopologyError::from)?;
        let profile = min_euler_genus(&ge, SearchConfig::default())
            .exact()
            .ok_or_else(|| StructureError::Precondition("genus search for G - e ran out of budget".into()))?;
        let target = profile.euler_genus();
        let mut best: Option<(SquareContext, Embedding)> = None;
        let mut consider = |pe: &Embedding| {
            if pe.total_euler_genus() == target {
                let ctx = self.count_square(pe, input.clone(), kind.clone(), &b, &i);
                if best.as_ref().is_none_or(|(c, _)| ctx.interior_n.len() < c.interior_n.len()) {
                    best = Some((ctx, pe.clone()));
                }
            }
        };
        // the search witnesses first, so a cut-short enumeration still has one
        consider(&profile.orientable_witness);
        if let Some(w) = &profile.nonorientable_witness {
            consider(w);
        }
        let mut visited = 0;
        let complete = Embedding::for_each(&ge, |pe| {
            consider(pe);
            visited += 1;
            visited < max_embeddings
        });
        let (ctx, pe) = best.ok_or_else(|| StructureError::Precondition("no minimum-genus embedding of G - e visited".into()))?;
        Ok((ctx, pe, complete))
    }

    fn count_square(
        &self,
        pi_e: &Embedding,
        input: SquareInput,
        kind: WellNestedKind,
        b: &BTreeSet<FaceId>,
        i: &BTreeSet<FaceId>,
    ) -> SquareContext {
        let g = self.graph();
        let ge = pi_e.graph();
        let theirs: BTreeSet<Vec<(VertexId, VertexId)>> = pi_e.faces().iter().map(|f| f.canonical_edge_walk(ge)).collect();
        let not_theirs = |f: &FaceId| !theirs.contains(&self.faces[*f].canonical_edge_walk(g));
        let boundary_n: Vec<FaceId> = b.iter().copied().filter(not_theirs).collect();
        let cand: Vec<FaceId> = i.iter().copied().filter(not_theirs).collect();
        let sets: Vec<BTreeSet<VertexId>> = cand.iter().map(|&f| self.face_vertices[f].clone()).collect();
        let (pick, exact) = max_almost_disjoint(&sets, NODE_BUDGET);
        let interior_n: Vec<FaceId> = pick.iter().map(|&k| cand[k]).collect();
        let threshold = bad_square_threshold(boundary_n.len());
        let verdict = if interior_n.len() as i64 > threshold { Verdict::Bad } else { Verdict::Good };
        SquareContext {
            input,
            kind,
            boundary: b.iter().copied().collect(),
            interior: i.iter().copied().collect(),
            empty_boundary_n: boundary_n.is_empty(),
            boundary_n,
            interior_n,
            threshold,
            verdict,
            exact,
        }
    }

    /// Whether two members of a family from `a` to `b` are homotopic. Paths
    /// are homotopic when together they bound a disk. For `a = b`: two
    /// contractible cycles are, a contractible and a noncontractible one are
    /// not, one-sided cycles never are, and two-sided ones are compared by
    /// cutting along both.
    fn members_homotopic(&self, p: &[VertexId], q: &[VertexId], loops: bool) -> Result<bool, StructureError> {
        if !loops {
            let mut cyc = p.to_vec();
            cyc.extend(q[1..q.len() - 1].iter().rev());
            return Ok(self.cycle_info(&cyc)?.contractible());
        }
        let x = self.cycle_info(p)?;
        let y = self.cycle_info(q)?;
        Ok(match (x.contractible(), y.contractible()) {
            (true, true) => true,
            (false, false) if x.class.two_sided && y.class.two_sided => are_homotopic(&self.emb, p, q)?.is_some(),
            _ => false,
        })
    }

    /// A largest family of internally disjoint `a`–`b` paths (cycles
    /// through `a` when `a = b`), no two homotopic. At most `budget`
    /// candidates are enumerated.
    pub fn max_nonhomotopic_internally_disjoint(&self, a: VertexId, b: VertexId, budget: usize) -> Result<HomotopyFamily, StructureError> {
        let g = self.graph();
        let loops = a == b;
        let (cands, mut exact) = if loops {
            let (cs, exact) = self.sorted_cycles(budget);
            let through: Vec<Vec<VertexId>> = cs
                .into_iter()
                .filter_map(|c| {
                    let k = c.iter().position(|&v| v == a)?;
                    let mut r = c;
                    r.rotate_left(k);
                    Some(r)
                })
                .collect();
            (through, exact)
        } else {
            let mut ps = g.paths(a, b, budget.saturating_add(1));
            let exact = ps.len() <= budget;
            ps.truncate(budget);
            ps.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
            (ps, exact)
        };
        let n = cands.len();
        let inner: Vec<BTreeSet<VertexId>> = cands
            .iter()
            .map(|c| if loops { c[1..].iter().copied().collect() } else { c[1..c.len() - 1].iter().copied().collect() })
            .collect();
        let rows: Vec<Vec<bool>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        Ok(i != j
                            && inner[i].is_disjoint(&inner[j])
                            && !self.members_homotopic(&cands[i], &cands[j], loops)?)
                    })
                    .collect::<Result<Vec<bool>, StructureError>>()
            })
            .collect::<Result<_, _>>()?;
        let (pick, clique_exact) = max_clique(&rows, NODE_BUDGET);
        exact &= clique_exact;
        let members: Vec<Vec<VertexId>> = pick.iter().map(|&i| cands[i].clone()).collect();
        let euler_genus = self.emb.total_euler_genus();
        let bound = homotopy_bound(euler_genus);
        Ok(HomotopyFamily {
            within_bound: members.len() <= bound + 1,
            members,
            euler_genus,
            bound,
            candidates: n,
            exact,
        })
    }
}

/// Maximum clique by branch and bound with a greedy colouring bound.
/// Returns the clique (sorted) and whether the search finished.
pub fn max_clique(adj: &[Vec<bool>], node_budget: u64) -> (Vec<usize>, bool) {
    struct S<'a> {
        adj: &'a [Vec<bool>],
        best: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    impl S<'_> {
        fn colour(&self, p: &[usize]) -> (Vec<usize>, Vec<usize>) {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &v in p {
                match classes.iter_mut().find(|c| c.iter().all(|&w| !self.adj[v][w])) {
                    Some(c) => c.push(v),
                    None => classes.push(vec![v]),
                }
            }
            let mut order = Vec::new();
            let mut col = Vec::new();
            for (k, c) in classes.iter().enumerate() {
                for &v in c {
                    order.push(v);
                    col.push(k + 1);
                }
            }
            (order, col)
        }
        fn expand(&mut self, r: &mut Vec<usize>, p: Vec<usize>) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let (order, col) = self.colour(&p);
            for k in (0..order.len()).rev() {
                if r.len() + col[k] <= self.best.len() {
                    return true;
                }
                let v = order[k];
                r.push(v);
                let np: Vec<usize> = order[..k].iter().copied().filter(|&w| self.adj[v][w]).collect();
                if np.is_empty() {
                    if r.len() > self.best.len() {
                        self.best = r.clone();
                    }
                } else if !self.expand(r, np) {
                    return false;
                }
                r.pop();
            }
            true
        }
    }
    let mut s = S { adj, best: Vec::new(), nodes: 0, budget: node_budget };
    let done = s.expand(&mut Vec::new(), (0..adj.len()).collect());
    let mut best = s.best;
    best.sort_unstable();
    (best, done)
}

/// Largest subfamily that is almost disjoint (each member shares at most
/// one vertex with the union of the others), by exhaustive branch and
/// bound. Returns member indices and whether the search finished.
pub fn max_almost_disjoint(sets: &[BTreeSet<VertexId>], node_budget: u64) -> (Vec<usize>, bool) {
    struct S<'a> {
        sets: &'a [BTreeSet<VertexId>],
        count: HashMap<VertexId, usize>,
        chosen: Vec<usize>,
        best: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    impl S<'_> {
        fn shared(&self, i: usize) -> usize {
            self.sets[i].iter().filter(|v| self.count.get(v).copied().unwrap_or(0) >= 2).count()
        }
        fn fits(&mut self, i: usize) -> bool {
            for &v in &self.sets[i] {
                *self.count.entry(v).or_default() += 1;
            }
            let ok = self.shared(i) <= 1
                && self.chosen.iter().all(|&j| self.sets[j].is_disjoint(&self.sets[i]) || self.shared(j) <= 1);
            if !ok {
                self.unmark(i);
            }
            ok
        }
        fn unmark(&mut self, i: usize) {
            for v in &self.sets[i] {
                *self.count.get_mut(v).unwrap() -= 1;
            }
        }
        fn go(&mut self, i: usize) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            if self.chosen.len() + (self.sets.len() - i) <= self.best.len() {
                return true;
            }
            if i == self.sets.len() {
                self.best = self.chosen.clone();
                return true;
            }
            if self.fits(i) {
                self.chosen.push(i);
                let ok = self.go(i + 1);
                self.chosen.pop();
                self.unmark(i);
                if !ok {
                    return false;
                }
            }
            self.go(i + 1)
        }
    }
    let mut s = S { sets, count: HashMap::new(), chosen: Vec::new(), best: Vec::new(), nodes: 0, budget: node_budget };
    let done = s.go(0);
    (s.best, done)
}
