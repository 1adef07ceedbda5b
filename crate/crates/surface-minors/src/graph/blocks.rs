use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{EdgeId, Graph, Subgraph, VertexId};

/// A maximal 2-connected subgraph or a cut edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// A bridge of a subgraph `H0`: a chord (`inner` empty) or a component of
/// `G - V(H0)` together with its edges to `H0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub edges: Vec<EdgeId>,
    pub inner: Vec<VertexId>,
    pub attachments: Vec<VertexId>,
}

struct Dfs {
    disc: Vec<usize>,
    low: Vec<usize>,
    blocks: Vec<Vec<EdgeId>>,
    cut: Vec<bool>,
}

// Iterative Hopcroft-Tarjan over edges.
fn run(g: &Graph) -> Dfs {
    let n = g.n();
    let mut st = Dfs { disc: vec![usize::MAX; n], low: vec![0; n], blocks: Vec::new(), cut: vec![false; n] };
    let mut time = 0;
    let mut estack: Vec<EdgeId> = Vec::new();
    for root in 0..n {
        if st.disc[root] != usize::MAX {
            continue;
        }
        st.disc[root] = time;
        st.low[root] = time;
        time += 1;
        let mut root_children = 0;
        // frame: (vertex, parent edge, next adjacency position)
        let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (x, pe, ref mut pos)) = stack.last_mut() {
            if *pos < g.adj_idx(x).len() {
                let (y, e) = g.adj_idx(x)[*pos];
                *pos += 1;
                if Some(e) == pe {
                    continue;
                }
                if st.disc[y] == usize::MAX {
                    estack.push(e);
                    st.disc[y] = time;
                    st.low[y] = time;
                    time += 1;
                    if x == root {
                        root_children += 1;
                    }
                    stack.push((y, Some(e), 0));
                } else if st.disc[y] < st.disc[x] {
                    estack.push(e);
                    st.low[x] = st.low[x].min(st.disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    st.low[p] = st.low[p].min(st.low[x]);
                    if st.low[x] >= st.disc[p] {
                        if p != root {
                            st.cut[p] = true;
                        }
                        let e = pe.unwrap();
                        let mut block = Vec::new();
                        while let Some(f) = estack.pop() {
                            block.push(f);
                            if f == e {
                                break;
                            }
                        }
                        block.sort_unstable();
                        st.blocks.push(block);
                    }
                }
            }
        }
        if root_children > 1 {
            st.cut[root] = true;
        }
    }
    st
}

pub(super) fn blocks(g: &Graph) -> Vec<Block> {
    let mut out: Vec<Block> = run(g)
        .blocks
        .into_iter()
        .map(|edges| {
            let sub = Subgraph::from_edges(g, edges);
            Block { vertices: sub.vertices, edges: sub.edges }
        })
        .collect();
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

pub(super) fn cutvertices(g: &Graph) -> Vec<VertexId> {
    let st = run(g);
    (0..g.n()).filter(|&i| st.cut[i]).map(|i| g.vertex_at(i)).collect()
}

pub(super) fn bridges_on(g: &Graph, sub: &Subgraph) -> Vec<Bridge> {
    let in_sub: Vec<bool> = (0..g.n()).map(|i| sub.contains_vertex(g.vertex_at(i))).collect();
    let mut out = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if in_sub[g.idx(a)] && in_sub[g.idx(b)] && !sub.contains_edge(e) {
            out.push(Bridge { edges: vec![e], inner: Vec::new(), attachments: vec![a, b] });
        }
    }
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if in_sub[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut inner = vec![s];
        let mut edges = BTreeSet::new();
        let mut att = BTreeSet::new();
        let mut i = 0;
        while i < inner.len() {
            let x = inner[i];
            i += 1;
            for &(y, e) in g.adj_idx(x) {
                edges.insert(e);
                if in_sub[y] {
                    att.insert(g.vertex_at(y));
                } else if !seen[y] {
                    seen[y] = true;
                    inner.push(y);
                }
            }
        }
        let mut inner: Vec<VertexId> = inner.into_iter().map(|i| g.vertex_at(i)).collect();
        inner.sort_unstable();
        out.push(Bridge { edges: edges.into_iter().collect(), inner, attachments: att.into_iter().collect() });
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}
