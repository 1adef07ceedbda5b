//! The bundled corpus of small graphs with known facts, and its verifier.

use anyhow::{anyhow, bail, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use surface_minors::certify::{certify_excluded_minor, Certification, ExclusionCertificate};
use surface_minors::embedding::Embedding;
use surface_minors::genus::{genus_via_blocks, min_euler_genus, GenusOutcome, SearchConfig, Surface};
use surface_minors::graph::Graph;
use surface_minors::topology::{classify_cycle, cut_along};

pub const BUNDLED: &str = include_str!("../corpus/corpus.json");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub seed: u64,
    pub random_embeddings: usize,
    pub cycle_cap: usize,
    pub entries: Vec<CorpusEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    /// graph6 string or `{"n", "edges"}` object
    pub graph: Value,
    pub facts: Vec<Fact>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Fact {
    Genus {
        orientable: usize,
        /// A number, `"none"` for forests, or absent when not asserted.
        #[serde(default)]
        nonorientable: Option<Value>,
        provenance: Option<Provenance>,
    },
    Exclusion { surface: String, verdict: Verdict, provenance: Option<Provenance> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Embeds,
    NotMinimal,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum Provenance {
    Literature { reference: String },
    Derived { oracle: String },
}

impl Fact {
    fn provenance(&self) -> Option<&Provenance> {
        match self {
            Fact::Genus { provenance, .. } | Fact::Exclusion { provenance, .. } => provenance.as_ref(),
        }
    }
}

impl Provenance {
    fn is_empty(&self) -> bool {
        match self {
            Provenance::Literature { reference: s } | Provenance::Derived { oracle: s } => s.trim().is_empty(),
        }
    }
}

impl CorpusEntry {
    pub fn graph(&self) -> Result<Graph> {
        match &self.graph {
            Value::String(s) => Ok(Graph::from_graph6(s)?),
            v => Ok(Graph::from_json_value(v)?),
        }
    }
}

/// Parse a corpus, rejecting any fact without a provenance.
pub fn load(text: &str) -> Result<Corpus> {
    let c: Corpus = serde_json::from_str(text).map_err(|e| {
        let at = crate::input::byte_offset(text, e.line(), e.column());
        anyhow!("malformed corpus JSON at byte {at}: {e}")
    })?;
    for e in &c.entries {
        for (i, f) in e.facts.iter().enumerate() {
            if f.provenance().is_none_or(Provenance::is_empty) {
                bail!("corpus entry {:?}: fact {i} has no provenance", e.name);
            }
        }
        e.graph().map_err(|err| anyhow!("corpus entry {:?}: {err}", e.name))?;
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub entry: String,
    pub property: String,
    pub ok: bool,
    pub detail: String,
}

pub struct Settings {
    pub seed: u64,
    pub cfg: SearchConfig,
}

fn random_embedding(rng: &mut ChaCha8Rng, g: &Graph) -> Embedding {
    let rot = (0..g.n())
        .map(|i| {
            let mut r: Vec<usize> = g.adj_idx(i).iter().map(|&(_, e)| e).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    let sig = (0..g.m()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    Embedding::from_parts(g.clone(), rot, sig).expect("rotations built from the adjacency")
}

/// Face sizes, parity of orientable genus and invariance under local changes.
fn euler_invariants(g: &Graph, rng: &mut ChaCha8Rng, count: usize) -> Result<(), String> {
    for k in 0..count {
        let emb = random_embedding(rng, g);
        let total: usize = emb.faces().iter().map(|f| f.len()).sum();
        if total != 2 * g.m() {
            return Err(format!("embedding {k}: face sizes sum to {total}, not {}", 2 * g.m()));
        }
        let genus = emb.total_euler_genus();
        if emb.is_orientable() && genus % 2 == 1 {
            return Err(format!("embedding {k}: orientable with odd Euler genus {genus}"));
        }
        for &v in g.vertices() {
            let after = emb.local_change(v).total_euler_genus();
            if after != genus {
                return Err(format!("embedding {k}: local change at {v} moves genus {genus} to {after}"));
            }
        }
    }
    Ok(())
}

/// Surgery along every enumerated cycle of `emb`.
fn cut_invariants(emb: &Embedding, cap: usize) -> Result<usize, String> {
    let genus = emb.euler_genus().map_err(|e| e.to_string())?;
    let cycles = emb.graph().cycles(cap);
    for c in &cycles {
        let cl = classify_cycle(emb, c).map_err(|e| e.to_string())?;
        let cut = cut_along(emb, c).map_err(|e| e.to_string())?;
        let parts = cut.embedding.component_genera();
        let after: usize = parts.iter().map(|p| p.1).sum();
        let ok = if cl.separating {
            parts.len() == 2 && after == genus
        } else if cl.contractible {
            false
        } else if cl.two_sided {
            after + 2 <= genus
        } else {
            after < genus
        };
        if !ok {
            return Err(format!("cycle {c:?}: Euler genus {genus} becomes {after} over {} parts", parts.len()));
        }
    }
    Ok(cycles.len())
}

fn check_genus(g: &Graph, orientable: usize, nonorientable: &Option<Value>, s: &Settings) -> Result<String, String> {
    let p = match min_euler_genus(g, s.cfg) {
        GenusOutcome::Exact(p) => p,
        GenusOutcome::Unknown { lower, upper, .. } => return Err(format!("budget exhausted (lower {lower}, upper {upper:?})")),
    };
    let want_non = match nonorientable {
        None => p.nonorientable,
        Some(Value::String(s)) if s == "none" => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| format!("bad expected nonorientable value {v}"))? as usize),
    };
    let show = |x: Option<usize>| x.map_or("none".to_string(), |x| x.to_string());
    let got = format!("orientable {} nonorientable {}", p.orientable, show(p.nonorientable));
    if p.orientable == orientable && p.nonorientable == want_non {
        Ok(got)
    } else {
        Err(format!("{got}, expected orientable {orientable} nonorientable {}", show(want_non)))
    }
}

fn check_exclusion(g: &Graph, surface: &str, verdict: Verdict, s: &Settings) -> Result<String, String> {
    let surf: Surface = surface.parse()?;
    let got = match certify_excluded_minor(g, surf, s.cfg) {
        Certification::Certified(c) => {
            let back = ExclusionCertificate::from_json(&c.to_json()).map_err(|e| e.to_string())?;
            back.verify(None).map_err(|e| format!("certificate does not re-verify: {e}"))?;
            Verdict::Certified
        }
        Certification::Embeds(_) => Verdict::Embeds,
        Certification::MinorNotEmbeddable { .. } => Verdict::NotMinimal,
        Certification::Unknown { blocking } => return Err(format!("budget exhausted at {blocking}")),
    };
    if got == verdict {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("{got:?}, expected {verdict:?}"))
    }
}

pub fn verify(corpus: &Corpus, s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    for e in &corpus.entries {
        let g = e.graph().expect("checked at load");
        let mut push = |property: &str, r: Result<String, String>| {
            let (ok, detail) = match r {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            out.push(Check { entry: e.name.clone(), property: property.into(), ok, detail });
        };
        for f in &e.facts {
            match f {
                Fact::Genus { orientable, nonorientable, .. } => push("genus", check_genus(&g, *orientable, nonorientable, s)),
                Fact::Exclusion { surface, verdict, .. } => {
                    push(&format!("exclusion {surface}"), check_exclusion(&g, surface, *verdict, s))
                }
            }
        }
        push(
            "euler invariants",
            euler_invariants(&g, &mut rng, corpus.random_embeddings).map(|_| format!("{} random embeddings", corpus.random_embeddings)),
        );
        if !g.cutvertices().is_empty() || !g.is_connected() {
            let r = match (genus_via_blocks(&g, s.cfg), min_euler_genus(&g, s.cfg)) {
                (Some(b), GenusOutcome::Exact(p)) if b.orientable == p.orientable && b.nonorientable == p.nonorientable => {
                    Ok(format!("{} blocks", b.blocks.len()))
                }
                (Some(b), GenusOutcome::Exact(p)) => Err(format!(
                    "blocks give ({}, {:?}), direct search ({}, {:?})",
                    b.orientable, b.nonorientable, p.orientable, p.nonorientable
                )),
                _ => Err("budget exhausted".into()),
            };
            push("block additivity", r);
        }
        if g.is_connected() {
            if let GenusOutcome::Exact(p) = min_euler_genus(&g, s.cfg) {
                let mut r = cut_invariants(&p.orientable_witness, corpus.cycle_cap);
                if let (Ok(n), Some(w)) = (&r, &p.nonorientable_witness) {
                    r = cut_invariants(w, corpus.cycle_cap).map(|k| k + n);
                }
                push("cut along cycles", r.map(|n| format!("{n} cycles")));
            }
        }
    }
    out
}
