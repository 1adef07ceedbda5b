//! Well-nested categories read straight off the cyclic sequences of two
//! cycles and the facial walks, with no component or path search.

use std::collections::BTreeSet;

use surface_minors::graph::VertexId;
use surface_minors::structure::{Piece, WellNestedKind};

use super::cyclic_min;

type E = (VertexId, VertexId);

fn key(a: VertexId, b: VertexId) -> E {
    (a.min(b), a.max(b))
}

fn walk_edges(w: &[VertexId]) -> BTreeSet<E> {
    (0..w.len()).map(|i| key(w[i], w[(i + 1) % w.len()])).collect()
}

/// The run of `c` lying on a face: marked edges must be one cyclic block
/// and the marked vertices exactly that block's vertices. Returns the run's
/// vertices in order, or `None`. A lone vertex is a run of length 0.
fn single_run(c: &[VertexId], fv: &BTreeSet<VertexId>, fe: &BTreeSet<E>) -> Option<Vec<VertexId>> {
    let n = c.len();
    let on: Vec<bool> = (0..n).map(|i| fe.contains(&key(c[i], c[(i + 1) % n]))).collect();
    let k = on.iter().filter(|&&b| b).count();
    let marked: BTreeSet<VertexId> = c.iter().copied().filter(|v| fv.contains(v)).collect();
    if k == 0 {
        return (marked.len() == 1).then(|| marked.into_iter().collect());
    }
    if k == n {
        return None;
    }
    // start right after an unmarked edge
    let s = (0..n).find(|&i| on[i] && !on[(i + n - 1) % n])?;
    if (0..k).any(|j| !on[(s + j) % n]) {
        return None;
    }
    let run: Vec<VertexId> = (0..=k).map(|j| c[(s + j) % n]).collect();
    (run.iter().copied().collect::<BTreeSet<_>>() == marked).then_some(run)
}

/// What each admissible piece covers of `C ∩ C'`.
struct Cover {
    piece: Piece,
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<E>,
}

/// Every category under which `inner` is well nested in `outer`, given all
/// facial walks. A shared part that is a single vertex counts as a vertex
/// piece, never as a face piece.
pub fn kinds(outer: &[VertexId], inner: &[VertexId], faces: &[Vec<VertexId>]) -> BTreeSet<WellNestedKind> {
    let cv: BTreeSet<VertexId> = outer.iter().copied().collect();
    let c2v: BTreeSet<VertexId> = inner.iter().copied().collect();
    let sv: BTreeSet<VertexId> = &cv & &c2v;
    let se: BTreeSet<E> = &walk_edges(outer) & &walk_edges(inner);
    let mut out = BTreeSet::new();
    if sv.is_empty() {
        out.insert(WellNestedKind::Free);
        return out;
    }
    let mut covers: Vec<Cover> = sv
        .iter()
        .map(|&v| Cover { piece: Piece::Vertex(v), vertices: [v].into(), edges: BTreeSet::new() })
        .collect();
    for f in faces {
        let fv: BTreeSet<VertexId> = f.iter().copied().collect();
        let fe = walk_edges(f);
        let Some(p) = single_run(outer, &fv, &fe) else { continue };
        if p.len() < 4 {
            continue;
        }
        let Some(q) = single_run(inner, &fv, &fe) else { continue };
        if q.len() < 2 {
            continue;
        }
        let p_inner: BTreeSet<VertexId> = p[1..p.len() - 1].iter().copied().collect();
        let p_edges: BTreeSet<E> = p.windows(2).map(|w| key(w[0], w[1])).collect();
        let q_edges: BTreeSet<E> = q.windows(2).map(|w| key(w[0], w[1])).collect();
        if q.iter().all(|v| p_inner.contains(v)) && q_edges.is_subset(&p_edges) {
            covers.push(Cover { piece: Piece::Face(cyclic_min(f)), vertices: q.into_iter().collect(), edges: q_edges });
        }
    }
    for a in &covers {
        if a.vertices == sv && a.edges == se {
            out.insert(WellNestedKind::OnePiece(a.piece.clone()));
        }
        for b in &covers {
            if a.piece < b.piece
                && a.vertices.is_disjoint(&b.vertices)
                && &a.vertices | &b.vertices == sv
                && &a.edges | &b.edges == se
            {
                out.insert(WellNestedKind::TwoPieces(a.piece.clone(), b.piece.clone()));
            }
        }
    }
    out
}

/// Category name with the pieces forgotten.
pub fn shape(k: &WellNestedKind) -> &'static str {
    use Piece::*;
    use WellNestedKind::*;
    match k {
        Free => "free",
        OnePiece(Vertex(_)) => "vertex",
        OnePiece(Face(_)) => "face",
        TwoPieces(Vertex(_), Vertex(_)) => "two vertices",
        TwoPieces(Face(_), Face(_)) => "two faces",
        TwoPieces(..) => "vertex and face",
    }
}

/// Compare the library against [`kinds`] on every nested pair of cycles in
/// every embedding of `g`. Tallies library categories by shape; collects
/// disagreements, including pairs where more than one shape applies.
pub fn check_graph(g: &surface_minors::graph::Graph, tally: &mut std::collections::BTreeMap<&'static str, usize>) -> Vec<String> {
    use surface_minors::structure::{Structure, StructureError};
    let mut bad = Vec::new();
    if g.m() <= g.n() {
        return bad;
    }
    let cycles = g.cycles(usize::MAX);
    super::all_naive_embeddings(g, false, |ne| {
        let emb = ne.to_embedding(g);
        let st = Structure::new(&emb);
        let faces = ne.faces();
        let mut lib_faces: Vec<Vec<VertexId>> = (0..st.faces().len()).map(|f| st.face_sequence(f)).collect();
        lib_faces.sort();
        let mut naive_faces: Vec<Vec<VertexId>> = faces.iter().map(|f| cyclic_min(f)).collect();
        naive_faces.sort();
        if lib_faces != naive_faces {
            bad.push(format!("faces differ on {:?}: {lib_faces:?} vs {naive_faces:?}", g.edges()));
            return;
        }
        for outer in &cycles {
            for inner in &cycles {
                let got = match st.classify_well_nested(outer, inner) {
                    Ok(k) => k,
                    Err(StructureError::NotNested(..) | StructureError::NotContractible(_)) => continue,
                    Err(e) => {
                        bad.push(format!("{e} on {:?}", g.edges()));
                        continue;
                    }
                };
                let want = kinds(outer, inner, &faces);
                let shapes: BTreeSet<&str> = want.iter().map(shape).collect();
                let ok = match &got {
                    None => want.is_empty(),
                    Some(k) => want.contains(k),
                };
                if !ok || shapes.len() > 1 {
                    bad.push(format!("{:?} in {:?} on {:?} rot {:?}: library {got:?}, oracle {want:?}", inner, outer, g.edges(), ne.rot));
                }
                *tally.entry(got.as_ref().map_or("not well nested", shape)).or_default() += 1;
            }
        }
    });
    bad
}
