//! Whole-suite checks with a pass/fail verdict and a one-line summary,
//! shared by the acceptance runner and the integration tests.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use surface_minors::certify::{certify_excluded_minor, Certification, ExclusionCertificate};
use surface_minors::embedding::Embedding;
use surface_minors::genus::{genus_via_blocks, min_euler_genus, SearchConfig, Surface};
use surface_minors::graph::{Graph, MinorOp};
use surface_minors::structure::{Piece, SquareInput, Structure, WellNestedKind};
use surface_minors::treedecomp::balanced_separation_sequence;

use super::cuts::{check_graph_cuts, CutTally};
use super::decomp::{check_sequence, random_thin};
use super::figures::{self, Nest};
use super::NaiveEmbedding;

pub type Verdict = Result<String, String>;

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    if e <= limit {
        Ok(e)
    } else {
        Err(format!("{what} took {e:.1?}, limit {limit:?}"))
    }
}

/// K5 and K3,3 each within the time limit, then every connected graph with
/// at most `max_edges` edges against the unpruned oracle.
pub fn genus_oracle(max_edges: usize, limit: Duration) -> Verdict {
    let mut times = Vec::new();
    for (name, g) in [("K5", Graph::complete(5)), ("K3,3", Graph::complete_bipartite(3, 3))] {
        let t = Instant::now();
        let p = min_euler_genus(&g, SearchConfig::default()).exact().ok_or(format!("{name}: search did not finish"))?;
        if (p.orientable, p.nonorientable) != (2, Some(1)) {
            return Err(format!("{name}: got ({}, {:?})", p.orientable, p.nonorientable));
        }
        times.push(within(t, limit, name)?);
    }
    let gs = super::connected_graphs_up_to(max_edges);
    let bad: Vec<String> = gs
        .par_iter()
        .filter_map(|g| {
            let p = min_euler_genus(g, SearchConfig::default()).exact()?;
            let oracle = super::brute_genus(g);
            ((p.orientable, p.nonorientable) != oracle).then(|| format!("{}: {:?} vs {oracle:?}", g.to_graph6(), (p.orientable, p.nonorientable)))
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("{} mismatches, first {}", bad.len(), bad[0]));
    }
    Ok(format!("K5 {:.2?}, K3,3 {:.2?}; {} graphs agree with the oracle", times[0], times[1], gs.len()))
}

fn naive(emb: &Embedding) -> NaiveEmbedding {
    let g = emb.graph();
    NaiveEmbedding {
        rot: g.vertices().iter().map(|&v| (v, emb.neighbor_rotation(v))).collect(),
        sig: g.edges().iter().enumerate().map(|(e, &k)| (k, emb.signature(e))).collect(),
    }
}

/// Random connected graph with at most `max_edges` edges.
fn random_small(rng: &mut ChaCha8Rng, max_edges: usize) -> Graph {
    let n = rng.gen_range(2..=max_edges + 1);
    let hi = max_edges.min(n * (n - 1) / 2);
    let m = rng.gen_range(n - 1..=hi);
    super::random_connected(rng, n, m)
}

/// Face sizes, genus sign and parity, and local-change invariance on
/// random embeddings; face counts also against the slow tracer.
pub fn euler_invariants(seed: u64, count: usize, max_edges: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_genus: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 0..count {
        let g = random_small(&mut rng, max_edges);
        let emb = super::random_embedding(&mut rng, &g);
        let faces = emb.faces();
        let sizes: usize = faces.iter().map(|f| f.len()).sum();
        let chi = g.n() as i64 - g.m() as i64 + faces.len() as i64;
        let fail = |what: &str| Err(format!("embedding {k} of {}: {what} ({})", g.to_graph6(), emb.to_json()));
        if sizes != 2 * g.m() {
            return fail(&format!("face sizes sum to {sizes}"));
        }
        if chi > 2 {
            return fail("negative genus");
        }
        let genus = (2 - chi) as usize;
        if emb.euler_genus().ok() != Some(genus) || naive(&emb).face_count() != faces.len() {
            return fail("face count disagrees with the slow tracer");
        }
        if emb.is_orientable() && genus % 2 == 1 {
            return fail("orientable with odd Euler genus");
        }
        for &v in g.vertices() {
            if emb.local_change(v).euler_genus().ok() != Some(genus) {
                return fail(&format!("local change at {v} moves the genus"));
            }
        }
        *by_genus.entry(genus).or_insert(0) += 1;
    }
    Ok(format!("{count} embeddings, by Euler genus {by_genus:?}"))
}

/// Connected graph with at least one cutvertex: random pieces glued at
/// single vertices, at most `max_edges` edges in total. Half of the time the
/// first piece is K5 or K3,3 so that nonplanar blocks show up.
pub fn random_with_cutvertex(rng: &mut ChaCha8Rng, max_edges: usize) -> Graph {
    loop {
        let mut g = match rng.gen_range(0..4) {
            0 if max_edges > 10 => Graph::complete(5),
            1 if max_edges > 9 => Graph::complete_bipartite(3, 3),
            _ => random_small(rng, 9.min(max_edges - 1)),
        };
        for _ in 0..rng.gen_range(1..=2) {
            if g.m() >= max_edges {
                break;
            }
            let piece = random_small(rng, (max_edges - g.m()).min(9));
            let a = g.vertices()[rng.gen_range(0..g.n())];
            let b = piece.vertices()[rng.gen_range(0..piece.n())];
            g = g.one_sum(a, &piece, b);
        }
        if !g.cutvertices().is_empty() {
            return g;
        }
    }
}

/// Genus computed block by block against direct search.
pub fn block_additivity(seed: u64, count: usize, max_edges: usize, limit: Duration) -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<Graph> = (0..count).map(|_| random_with_cutvertex(&mut rng, max_edges)).collect();
    let bad: Vec<String> = gs
        .par_iter()
        .filter_map(|g| {
            let cfg = SearchConfig::default();
            let b = genus_via_blocks(g, cfg).expect("blocks finish");
            let p = min_euler_genus(g, cfg).exact().expect("search finishes");
            let same = (b.orientable, b.nonorientable, b.euler) == (p.orientable, p.nonorientable, p.euler_genus());
            (!same).then(|| format!("{}: blocks {:?} direct {:?}", g.to_graph6(), (b.orientable, b.nonorientable), (p.orientable, p.nonorientable)))
        })
        .collect();
    let e = within(t, limit, "block additivity")?;
    if !bad.is_empty() {
        return Err(format!("{} mismatches, first {}", bad.len(), bad[0]));
    }
    let nonplanar = gs.iter().filter(|g| genus_via_blocks(g, SearchConfig::default()).is_some_and(|b| b.euler > 0)).count();
    Ok(format!("{count} graphs ({nonplanar} nonplanar) in {e:.1?}"))
}

fn certified(g: &Graph, s: Surface, limit: Duration) -> Result<ExclusionCertificate, String> {
    let t = Instant::now();
    let out = certify_excluded_minor(g, s, SearchConfig::default());
    within(t, limit, &format!("{} vs {s}", g.to_graph6()))?;
    match out {
        Certification::Certified(c) => {
            let back = ExclusionCertificate::from_json(&c.to_json()).map_err(|e| e.to_string())?;
            back.verify(None).map_err(|e| format!("stored certificate fails: {e}"))?;
            Ok(back)
        }
        other => Err(format!("{} vs {s}: {other:?}", g.to_graph6())),
    }
}

pub fn certification(limit: Duration) -> Verdict {
    let k33 = Graph::complete_bipartite(3, 3);
    certified(&Graph::complete(5), Surface::SPHERE, limit)?;
    certified(&k33, Surface::SPHERE, limit)?;
    let t = Instant::now();
    match certify_excluded_minor(&Graph::complete(6), Surface::SPHERE, SearchConfig::default()) {
        Certification::MinorNotEmbeddable { op: op @ MinorOp::DeleteVertex { .. }, minor } if minor.is_isomorphic(&Graph::complete(5)) => {
            within(t, limit, "K6")?;
            let c = certified(&k33.disjoint_union(&k33), Surface::PROJECTIVE_PLANE, limit)?;
            Ok(format!("K5, K3,3 certified; K6 rejected after {op}; 2K3,3 certified with {} minors", c.minors.len()))
        }
        other => Err(format!("K6: {other:?}")),
    }
}

/// Every vertex pair of every embedding of every connected graph with at
/// most `max_edges` edges.
pub fn homotopy_bound(max_edges: usize) -> Verdict {
    let gs = super::connected_graphs_up_to(max_edges);
    let results: Vec<(usize, Vec<String>)> = gs
        .par_iter()
        .map(|g| {
            let (mut count, mut bad) = (0, Vec::new());
            super::all_naive_embeddings(g, false, |ne| {
                count += 1;
                if let Err(e) = super::homotopy::check_embedding(&Structure::new(&ne.to_embedding(g)), ne.euler_genus()) {
                    bad.push(format!("{e} on {}", g.to_graph6()));
                }
            });
            (count, bad)
        })
        .collect();
    let n: usize = results.iter().map(|r| r.0).sum();
    match results.iter().flat_map(|r| &r.1).next() {
        Some(e) => Err(e.clone()),
        None => Ok(format!("{n} embeddings of {} graphs", gs.len())),
    }
}

pub fn cut_along(max_edges: usize) -> Verdict {
    let gs = super::connected_graphs_up_to(max_edges);
    let results: Vec<(CutTally, Vec<String>)> = gs
        .par_iter()
        .map(|g| {
            let mut t = CutTally::default();
            let bad = check_graph_cuts(g, false, &mut t);
            (t, bad)
        })
        .collect();
    let mut total = CutTally::default();
    for (t, bad) in &results {
        if let Some(e) = bad.first() {
            return Err(e.clone());
        }
        total.add(t);
    }
    Ok(format!(
        "{} cycles over {} embeddings: {} separating, {} two-sided nonseparating, {} one-sided",
        total.cycles, total.embeddings, total.separating, total.nonseparating_two_sided, total.one_sided
    ))
}

pub fn separators(seed: u64, count: usize, limit: Duration) -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (g, td) = random_thin(&mut rng);
        let widest = td.bags.iter().map(Vec::len).max().unwrap();
        let kmax = g.n() / (4 * widest);
        if kmax == 0 {
            continue;
        }
        let k = rng.gen_range(1..=kmax);
        let seq = balanced_separation_sequence(&g, &td, k).map_err(|e| format!("instance {done}: {e}"))?;
        check_sequence(&td, k, &seq).map_err(|e| format!("instance {done}, k = {k}: {e}"))?;
        done += 1;
    }
    let e = within(t, limit, "separators")?;
    Ok(format!("{count} decompositions in {e:.1?}"))
}

pub fn bounds_tower(limit: Duration) -> Verdict {
    use surface_bounds::tower::{a_of, m_of, m_prime_of, m_tilde_of, t_of};
    use surface_bounds::{constants, identities, Q};
    let c = constants(1).map_err(|e| e.to_string())?;
    if Q != (9073, 9072) || c.rows(10)[0].exact.as_deref() != Some("9073/9072") {
        return Err("q is not 9073/9072".into());
    }
    let mut widest = f64::NEG_INFINITY;
    for g in (0..=40).chain([100, 1000, 10_000]) {
        let c = constants(g).map_err(|e| e.to_string())?;
        let id = identities(&c);
        if !(id.t && id.u && id.p) || id.max_log2_width > -64.0 {
            return Err(format!("g = {g}: {id:?}"));
        }
        widest = widest.max(id.max_log2_width);
    }
    let t = Instant::now();
    for g in 0..=10_000 {
        let m = m_of(g).map_err(|e| format!("g = {g}: {e}"))?;
        let mp = m_prime_of(g, &m);
        let tt = t_of(g, &m);
        m_tilde_of(&a_of(&m, &mp, &tt)).map_err(|e| format!("g = {g}: {e}"))?;
    }
    let e = within(t, limit, "floors up to 10^4")?;
    Ok(format!("identities hold with log2 widths <= 2^{widest:.0}; floors for g <= 10^4 in {e:.1?}"))
}

fn square_kind(n: &Nest) -> Result<WellNestedKind, String> {
    let s = Structure::with_outer(&n.emb, Some(&n.outer));
    let input = SquareInput::Contractible { c: n.c.clone(), c1: n.c1.clone(), c2: n.c2.clone() };
    s.square_kind(&input, 100_000).map(|k| k.0).map_err(|e| e.to_string())
}

fn shape(k: &WellNestedKind) -> (usize, usize) {
    let ps = k.pieces();
    (ps.iter().filter(|p| matches!(p, Piece::Vertex(_))).count(), ps.iter().filter(|p| matches!(p, Piece::Face(_))).count())
}

pub fn figures() -> Verdict {
    let (emb, rings) = figures::radius_figure();
    let r = Structure::new(&emb).radius(&rings[0]).map_err(|e| e.to_string())?;
    if r.radius != 3 {
        return Err(format!("radius figure: radius {}", r.radius));
    }
    let nests = [
        figures::free(),
        figures::pinched_on_vertex(),
        figures::pinched_on_face(),
        figures::pinched_on_two_vertices(),
        figures::pinched_on_two_faces(),
        figures::pinched_on_vertex_and_face(),
    ];
    let want = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)];
    for (i, n) in nests.iter().enumerate() {
        let k = square_kind(n)?;
        if shape(&k) != want[i] {
            return Err(format!("category {i}: {k:?}"));
        }
    }
    let (emb, rings) = figures::homotopic_square();
    let s = Structure::new(&emb);
    let in_order = s.is_in_this_order(&rings).map_err(|e| e.to_string())?;
    let shuffled = [rings[0].clone(), rings[2].clone(), rings[1].clone()];
    let out_of_order = s.is_in_this_order(&shuffled).map_err(|e| e.to_string())?;
    let kind = s.well_homotopic_chain_kind(&rings).map_err(|e| e.to_string())?;
    if !in_order || out_of_order || kind != Some(WellNestedKind::Free) {
        return Err(format!("homotopic square: in order {in_order}, shuffled {out_of_order}, kind {kind:?}"));
    }
    Ok("radius 3; six nesting categories; homotopic rings in order".into())
}
