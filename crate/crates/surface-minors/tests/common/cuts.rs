//! Exhaustive cycle surgery checks over every embedding of a graph.

use surface_minors::embedding::Embedding;
use surface_minors::graph::Graph;
use surface_minors::topology::{classify_cycle, cut_along};

#[derive(Default, Debug, Clone, Copy)]
pub struct CutTally {
    pub embeddings: usize,
    pub cycles: usize,
    pub separating: usize,
    pub nonseparating_two_sided: usize,
    pub one_sided: usize,
}

impl CutTally {
    pub fn add(&mut self, o: &CutTally) {
        self.embeddings += o.embeddings;
        self.cycles += o.cycles;
        self.separating += o.separating;
        self.nonseparating_two_sided += o.nonseparating_two_sided;
        self.one_sided += o.one_sided;
    }
}

/// Genus change after cutting along one cycle, by class. `exact` asks for
/// the precise drops (2 and 1) instead of the lower bounds.
pub fn check_cuts(emb: &Embedding, cycles: &[Vec<u32>], exact: bool, tally: &mut CutTally) -> Vec<String> {
    let mut bad = Vec::new();
    let genus = emb.euler_genus().unwrap();
    tally.embeddings += 1;
    for c in cycles {
        tally.cycles += 1;
        let cl = classify_cycle(emb, c).unwrap();
        if (cl.contractible && !cl.separating) || (cl.separating && !cl.two_sided) {
            bad.push(format!("{c:?}: classification implications fail"));
        }
        let cut = cut_along(emb, c).unwrap();
        let parts = cut.embedding.component_genera();
        let after: usize = parts.iter().map(|p| p.1).sum();
        let g = cut.graph();
        if g.m() != emb.graph().m() + c.len() || g.n() != emb.graph().n() + c.len() {
            bad.push(format!("{c:?}: cut has wrong size"));
        }
        let ok = if cl.separating {
            tally.separating += 1;
            parts.len() == 2 && after == genus
        } else if cl.two_sided {
            tally.nonseparating_two_sided += 1;
            parts.len() == 1 && if exact { after + 2 == genus } else { after + 2 <= genus }
        } else {
            tally.one_sided += 1;
            parts.len() == 1 && if exact { after + 1 == genus } else { after < genus }
        };
        if !ok {
            bad.push(format!(
                "{} {:?} cycle {c:?}: genus {genus} -> {after} over {} parts ({cl:?})",
                emb.graph().to_graph6(),
                emb.to_json(),
                parts.len()
            ));
        }
    }
    bad
}

pub fn check_graph_cuts(g: &Graph, exact: bool, tally: &mut CutTally) -> Vec<String> {
    let cycles = g.cycles(usize::MAX);
    let mut bad = Vec::new();
    if cycles.is_empty() {
        return bad;
    }
    for emb in super::all_embeddings(g) {
        bad.extend(check_cuts(&emb, &cycles, exact, tally));
        if bad.len() > 5 {
            break;
        }
    }
    bad
}
