//! Certificates that a graph is an excluded minor for a surface, and checks
//! of the structural facts such a graph must satisfy.
//!
//! Embeddability is closed under minors, so a graph is an excluded minor for
//! `S` as soon as it does not embed in `S` and each one-step minor (delete a
//! vertex, delete an edge, contract an edge) does: every proper minor is a
//! minor of some one-step minor. One-step minors are taken up to isomorphism
//! per operation kind.

use std::ops::Add;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::embedding::Embedding;
use crate::genus::{min_euler_genus, GenusOutcome, SearchConfig, Surface};
use crate::graph::{EdgeId, Graph, MinorOp, Subgraph, VertexId};

/// Version tag of the search whose negative answer a certificate records.
pub const ENGINE: &str = "rotation-bnb/1";

/// Evidence that the graph does not embed: the exact minima found by an
/// exhaustive search, with a digest of the search configuration and result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchEvidence {
    pub engine: String,
    pub budget: u64,
    pub orientable_min: usize,
    pub nonorientable_min: Option<usize>,
    pub nodes: u64,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub op: MinorOp,
    /// Embedding of the minor in the surface (possibly of smaller genus).
    pub witness: Embedding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionCertificate {
    pub graph: Graph,
    pub surface: Surface,
    pub evidence: SearchEvidence,
    pub minors: Vec<MinorWitness>,
    /// Minimum Euler genus of the graph among embeddings of the surface's
    /// orientability class.
    pub genus_of_g: usize,
}

#[derive(Clone, Debug)]
pub enum Certification {
    Certified(ExclusionCertificate),
    /// The graph itself embeds.
    Embeds(Embedding),
    /// A one-step minor does not embed, so the graph is not minimal.
    MinorNotEmbeddable { op: MinorOp, minor: Graph },
    /// The search budget ran out on the named subproblem.
    Unknown { blocking: String },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("Euler genus {genus} of the graph is outside {{g+1, g+2}} for g = {surface}")]
    GenusRange { genus: usize, surface: usize },
    #[error("search digest does not match the recorded configuration")]
    Digest,
    #[error("recorded minima do not exclude the surface")]
    Evidence,
    #[error("one-step minors differ from the recorded list")]
    MinorList,
    #[error("witness for {0} is not an embedding of that minor")]
    WrongWitness(MinorOp),
    #[error("witness for {0} does not fit the surface")]
    WitnessGenus(MinorOp),
    #[error("search rerun disagrees: {0}")]
    Rerun(String),
}

/// Whether `emb` (possibly disconnected) shows its graph embeds in `s`.
pub fn fits_surface(emb: &Embedding, s: Surface) -> bool {
    let eg = emb.total_euler_genus();
    match (s.orientable, emb.is_orientable()) {
        (true, true) => eg <= s.euler_genus,
        (true, false) => false,
        // an orientable embedding plus one crosscap
        (false, true) => eg < s.euler_genus,
        (false, false) => eg <= s.euler_genus,
    }
}

fn class_min(orientable: usize, nonorientable: Option<usize>, s: Surface) -> Option<usize> {
    if s.orientable {
        Some(orientable)
    } else {
        nonorientable
    }
}

fn evidence_digest(graph: &Graph, s: Surface, engine: &str, budget: u64, or: usize, non: Option<usize>) -> String {
    let v = json!({
        "graph": graph.to_json_value(),
        "surface": surface_json(s),
        "engine": engine,
        "budget": budget,
        "orientable_min": or,
        "nonorientable_min": non,
    });
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn surface_json(s: Surface) -> Value {
    json!({ "genus": s.euler_genus, "orientable": s.orientable })
}

/// Decide whether `g` is an excluded minor for `s`. Each one-step minor is
/// searched independently (in parallel); the reported counterexample is the
/// first in operation order.
pub fn certify_excluded_minor(g: &Graph, s: Surface, cfg: SearchConfig) -> Certification {
    let profile = match min_euler_genus(g, cfg) {
        GenusOutcome::Exact(p) => p,
        GenusOutcome::Unknown { .. } => return Certification::Unknown { blocking: "the graph itself".into() },
    };
    if let Some(w) = profile.witness_for(s) {
        return Certification::Embeds(w.clone());
    }
    let results: Vec<(MinorOp, Graph, Option<Option<Embedding>>)> = g
        .one_step_minors()
        .into_par_iter()
        .map(|(op, h)| {
            let w = min_euler_genus(&h, cfg).exact().map(|p| p.witness_for(s).cloned());
            (op, h, w)
        })
        .collect();
    let mut minors = Vec::with_capacity(results.len());
    for (op, h, w) in results {
        match w {
            None => return Certification::Unknown { blocking: format!("minor after {op}") },
            Some(None) => return Certification::MinorNotEmbeddable { op, minor: h },
            Some(Some(witness)) => minors.push(MinorWitness { op, witness }),
        }
    }
    let genus_of_g = class_min(profile.orientable, profile.nonorientable, s).expect("a forest embeds everywhere");
    let digest = evidence_digest(g, s, ENGINE, cfg.budget, profile.orientable, profile.nonorientable);
    Certification::Certified(ExclusionCertificate {
        graph: g.clone(),
        surface: s,
        evidence: SearchEvidence {
            engine: ENGINE.into(),
            budget: cfg.budget,
            orientable_min: profile.orientable,
            nonorientable_min: profile.nonorientable,
            nodes: profile.nodes,
            digest,
        },
        minors,
        genus_of_g,
    })
}

/// `genus_of_g ∈ {g+1, g+2}` for the surface's Euler genus `g`.
pub fn check_genus_range(cert: &ExclusionCertificate) -> bool {
    let g = cert.surface.euler_genus;
    cert.genus_of_g == g + 1 || cert.genus_of_g == g + 2
}

impl ExclusionCertificate {
    pub fn to_json_value(&self) -> Value {
        let ev = &self.evidence;
        json!({
            "graph": self.graph.to_json_value(),
            "surface": surface_json(self.surface),
            "nonembeddability": {
                "engine": ev.engine,
                "budget": ev.budget,
                "orientable_min": ev.orientable_min,
                "nonorientable_min": ev.nonorientable_min,
                "nodes": ev.nodes,
                "digest": ev.digest,
            },
            "minors": self.minors.iter().map(|m| json!({
                "op": serde_json::to_value(&m.op).unwrap(),
                "witness": m.witness.to_json_value(),
            })).collect::<Vec<_>>(),
            "genus_of_G": self.genus_of_g,
        })
    }

    /// Keys sorted, no whitespace: stable input for digests and diffs.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn from_json(s: &str) -> Result<ExclusionCertificate, CertError> {
        let bad = |e: String| CertError::Json(e);
        let v: Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("missing {k}")));
        let graph = Graph::from_json_value(field("graph")?).map_err(|e| bad(e.to_string()))?;
        let sv = field("surface")?;
        let genus = sv.get("genus").and_then(Value::as_u64).ok_or_else(|| bad("surface.genus".into()))?;
        let orientable = sv.get("orientable").and_then(Value::as_bool).ok_or_else(|| bad("surface.orientable".into()))?;
        let surface = Surface::new(genus as usize, orientable).ok_or_else(|| bad(format!("no surface {genus}")))?;
        let ev = field("nonembeddability")?;
        let num = |k: &str| ev.get(k).and_then(Value::as_u64).ok_or_else(|| bad(format!("nonembeddability.{k}")));
        let text = |k: &str| ev.get(k).and_then(Value::as_str).map(str::to_owned).ok_or_else(|| bad(format!("nonembeddability.{k}")));
        let nonorientable_min = match ev.get("nonorientable_min") {
            Some(Value::Null) | None => None,
            Some(x) => Some(x.as_u64().ok_or_else(|| bad("nonembeddability.nonorientable_min".into()))? as usize),
        };
        let evidence = SearchEvidence {
            engine: text("engine")?,
            budget: num("budget")?,
            orientable_min: num("orientable_min")? as usize,
            nonorientable_min,
            nodes: num("nodes")?,
            digest: text("digest")?,
        };
        let mut minors = Vec::new();
        for m in field("minors")?.as_array().ok_or_else(|| bad("minors".into()))? {
            let op: MinorOp = serde_json::from_value(m.get("op").cloned().unwrap_or(Value::Null)).map_err(|e| bad(e.to_string()))?;
            let witness = Embedding::from_json_value(m.get("witness").ok_or_else(|| bad("witness".into()))?)
                .map_err(|e| bad(e.to_string()))?;
            minors.push(MinorWitness { op, witness });
        }
        let genus_of_g = field("genus_of_G")?.as_u64().ok_or_else(|| bad("genus_of_G".into()))? as usize;
        Ok(ExclusionCertificate { graph, surface, evidence, minors, genus_of_g })
    }

    /// Check everything the certificate stores: genus range, digest, the
    /// list of one-step minors and every witness (re-evaluated from its
    /// rotation system). With `rerun`, the negative claim is searched again.
    pub fn verify(&self, rerun: Option<SearchConfig>) -> Result<(), CertError> {
        if !check_genus_range(self) {
            return Err(CertError::GenusRange { genus: self.genus_of_g, surface: self.surface.euler_genus });
        }
        let ev = &self.evidence;
        let digest = evidence_digest(&self.graph, self.surface, &ev.engine, ev.budget, ev.orientable_min, ev.nonorientable_min);
        if digest != ev.digest {
            return Err(CertError::Digest);
        }
        let min = class_min(ev.orientable_min, ev.nonorientable_min, self.surface);
        if min != Some(self.genus_of_g) || self.genus_of_g <= self.surface.euler_genus {
            return Err(CertError::Evidence);
        }
        let expected: Vec<(MinorOp, Graph)> = self.graph.one_step_minors();
        if expected.len() != self.minors.len() || expected.iter().zip(&self.minors).any(|((op, _), m)| *op != m.op) {
            return Err(CertError::MinorList);
        }
        for ((op, h), m) in expected.iter().zip(&self.minors) {
            if m.witness.graph() != h {
                return Err(CertError::WrongWitness(op.clone()));
            }
            if !fits_surface(&m.witness, self.surface) {
                return Err(CertError::WitnessGenus(op.clone()));
            }
        }
        if let Some(cfg) = rerun {
            let p = min_euler_genus(&self.graph, cfg)
                .exact()
                .ok_or_else(|| CertError::Rerun("budget exhausted".into()))?;
            if (p.orientable, p.nonorientable) != (ev.orientable_min, ev.nonorientable_min) {
                return Err(CertError::Rerun(format!("found ({}, {:?})", p.orientable, p.nonorientable)));
            }
        }
        Ok(())
    }
}

/// One block of a certified graph with the least surface (by Euler genus,
/// orientable first) it is an excluded minor for.
#[derive(Clone, Debug)]
pub struct BlockCertificate {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// `None` when the block embeds in every surface (a single edge).
    pub certificate: Option<ExclusionCertificate>,
}

/// For each block, certify it against surfaces of increasing Euler genus
/// until one works. `Err` names a block whose search ran out of budget.
pub fn blocks_are_excluded_minors(cert: &ExclusionCertificate, cfg: SearchConfig) -> Result<Vec<BlockCertificate>, String> {
    let mut out = Vec::new();
    for b in cert.graph.blocks() {
        let (h, _) = cert.graph.edge_subgraph(&b.edges);
        let p = min_euler_genus(&h, cfg).exact().ok_or_else(|| format!("block {:?}", b.vertices))?;
        let mut found = None;
        for s in Surface::all_up_to(p.euler_genus()) {
            if p.embeds_in(s) {
                continue;
            }
            match certify_excluded_minor(&h, s, cfg) {
                Certification::Certified(c) => {
                    found = Some(c);
                    break;
                }
                Certification::Unknown { blocking } => return Err(format!("block {:?}: {blocking}", b.vertices)),
                _ => {}
            }
        }
        out.push(BlockCertificate { vertices: b.vertices, edges: b.edges, certificate: found });
    }
    Ok(out)
}

/// Whether the connected subgraph `sub` lies in a closed disk of the
/// surface of `emb` (connected). The regions of the surface minus `sub` are
/// read off the faces, merged across edges outside `sub`; `sub` lies in a
/// disk iff some region `R` has `χ(S) − χ(R) = 1`, where `χ(R)` counts the
/// open cells of `R`. The complement of `R` is then a connected complex of
/// Euler characteristic 1 whose neighbourhood is a disk.
pub fn subgraph_in_disk(emb: &Embedding, sub: &Subgraph) -> bool {
    let g = emb.graph();
    let faces = emb.faces();
    if faces.is_empty() {
        // an isolated vertex on the sphere
        return true;
    }
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut side = vec![usize::MAX; g.m()];
    for (i, f) in faces.iter().enumerate() {
        for &d in &f.darts {
            let e = d / 2;
            if sub.contains_edge(e) {
                continue;
            }
            if side[e] == usize::MAX {
                side[e] = i;
            } else {
                let (a, b) = (find(&mut parent, side[e]), find(&mut parent, i));
                parent[a] = b;
            }
        }
    }
    let mut chi = vec![0i64; faces.len()];
    for i in 0..faces.len() {
        let r = find(&mut parent, i);
        chi[r] += 1;
    }
    for e in 0..g.m() {
        if !sub.contains_edge(e) {
            let r = find(&mut parent, side[e]);
            chi[r] -= 1;
        }
    }
    for &v in g.vertices() {
        if sub.contains_vertex(v) {
            continue;
        }
        if let Some(e) = g.incident_edges(v).next() {
            let r = find(&mut parent, side[e]);
            chi[r] += 1;
        }
    }
    let chi_s = g.n() as i64 - g.m() as i64 + faces.len() as i64;
    (0..faces.len()).any(|i| find(&mut parent, i) == i && chi_s - chi[i] == 1)
}

/// A side `B` of a 2-separation `(A, B)` that is more than an edge and lies
/// in a disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationViolation {
    pub separator: (VertexId, VertexId),
    pub side: Subgraph,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeparationError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("embedding is not of the certified graph")]
    WrongGraph,
    #[error("side {:?} of the separation at {:?} lies in a disk", .0.side.vertices, .0.separator)]
    Violation(SeparationViolation),
}

/// Every 2-separation `(A, B)`: `A ∪ B = G`, no shared edge,
/// `V(A) ∩ V(B) = {a, b}`, `A` has a vertex outside `{a, b}` and `B` has
/// an edge. Checks that `B` is the edge `ab` or does not lie in a disk of
/// `emb`. Returns the number of separations examined.
pub fn check_two_separation_property(cert: &ExclusionCertificate, emb: &Embedding) -> Result<usize, SeparationError> {
    let g = &cert.graph;
    if emb.graph() != g {
        return Err(SeparationError::WrongGraph);
    }
    if g.n() < 3 || !g.is_connected() || !g.cutvertices().is_empty() {
        return Err(SeparationError::NotTwoConnected);
    }
    let vs = g.vertices();
    let mut checked = 0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            let rest: Vec<VertexId> = vs.iter().copied().filter(|&x| x != a && x != b).collect();
            let comps = g.induced(&rest).components();
            let k = comps.len();
            assert!(k < 24, "too many components to enumerate");
            let ab = g.edge_between(a, b);
            for mask in 0u32..(1 << k) {
                // A needs a vertex outside the separator
                if mask == (1 << k) - 1 {
                    continue;
                }
                for with_ab in [false, true] {
                    if with_ab && ab.is_none() || mask == 0 && !with_ab {
                        continue;
                    }
                    checked += 1;
                    if mask == 0 {
                        continue; // B is the edge ab
                    }
                    let mut inside = vec![a, b];
                    for (c, comp) in comps.iter().enumerate() {
                        if mask >> c & 1 == 1 {
                            inside.extend(comp);
                        }
                    }
                    inside.sort_unstable();
                    let mut edges: Vec<EdgeId> = (0..g.m())
                        .filter(|&e| {
                            let (x, y) = g.edge(e);
                            Some(e) != ab && inside.binary_search(&x).is_ok() && inside.binary_search(&y).is_ok()
                        })
                        .collect();
                    if with_ab {
                        edges.push(ab.unwrap());
                        edges.sort_unstable();
                    }
                    let side = Subgraph { vertices: inside, edges };
                    if subgraph_in_disk(emb, &side) {
                        return Err(SeparationError::Violation(SeparationViolation { separator: (a, b), side }));
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// The two hypotheses under which a bound `N` on 2-connected excluded
/// minors carries over to all of them: `N` nondecreasing on `0..=g1+g2`
/// and `N(g1 + g2) ≥ N(g1) + N(g2)`. Comparisons that `partial_cmp` cannot
/// decide count as failures.
pub fn check_superadditive_bound_transfer<T, F>(n: F, g1: usize, g2: usize) -> bool
where
    T: PartialOrd + Add<Output = T> + Clone,
    F: Fn(usize) -> T,
{
    let vals: Vec<T> = (0..=g1 + g2).map(&n).collect();
    let increasing = vals.windows(2).all(|w| w[0] <= w[1]);
    increasing && vals[g1].clone() + vals[g2].clone() <= vals[g1 + g2]
}
