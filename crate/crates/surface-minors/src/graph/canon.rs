//! Canonical labelling by colour refinement plus individualisation.
//!
//! Every leaf of the individualisation tree is explored (twins are skipped,
//! since swapping two twins is an automorphism fixing the current partition),
//! and the lexicographically smallest relabelled edge list wins. That makes
//! the form exact at any size; only the running time grows with symmetry.

use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

struct Ctx {
    n: usize,
    adj: Vec<Vec<usize>>,
    mat: Vec<bool>,
    best: Option<Vec<(u32, u32)>>,
}

impl Ctx {
    fn is_adj(&self, a: usize, b: usize) -> bool {
        self.mat[a * self.n + b]
    }

    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (k, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = k;
                }
            }
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<usize>, usize)> = c
                    .iter()
                    .map(|&v| {
                        let mut counts = vec![0usize; cells.len()];
                        for &w in &self.adj[v] {
                            counts[cell_of[w]] += 1;
                        }
                        (counts, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        let mut part: Vec<usize> = keyed[start..i].iter().map(|x| x.1).collect();
                        part.sort_unstable();
                        next.push(part);
                        start = i;
                    }
                }
            }
            let grew = next.len() != cells.len();
            *cells = next;
            if !grew {
                return;
            }
        }
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        (0..self.n).all(|x| x == a || x == b || self.is_adj(a, x) == self.is_adj(b, x))
    }

    fn search(&mut self, mut cells: Vec<Vec<usize>>) {
        self.refine(&mut cells);
        let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
            let mut label = vec![0u32; self.n];
            for (k, c) in cells.iter().enumerate() {
                label[c[0]] = k as u32;
            }
            let mut es: Vec<(u32, u32)> = Vec::new();
            for a in 0..self.n {
                for &b in &self.adj[a] {
                    if a < b {
                        let (x, y) = (label[a], label[b]);
                        es.push((x.min(y), x.max(y)));
                    }
                }
            }
            es.sort_unstable();
            if self.best.as_ref().is_none_or(|b| es < *b) {
                self.best = Some(es);
            }
            return;
        };
        let cell = cells[pos].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = cells.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&x| x != v).collect();
            next.splice(pos..=pos, [vec![v], rest]);
            self.search(next);
        }
    }
}

pub(super) fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| g.adj_idx(i).iter().map(|&(j, _)| j).collect()).collect();
    let mut mat = vec![false; n * n];
    for (a, list) in adj.iter().enumerate() {
        for &b in list {
            mat[a * n + b] = true;
        }
    }
    let mut ctx = Ctx { n, adj, mat, best: None };
    if n == 0 {
        return CanonicalForm { n, edges: Vec::new() };
    }
    ctx.search(vec![(0..n).collect()]);
    CanonicalForm { n, edges: ctx.best.unwrap() }
}
