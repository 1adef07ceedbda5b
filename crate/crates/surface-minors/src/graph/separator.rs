use std::collections::VecDeque;

use super::{Graph, VertexId};

// Unit-capacity flow on the split graph: v_in = 2i, v_out = 2i + 1.
struct Flow {
    cap: Vec<Vec<(usize, usize)>>, // (to, edge index into res)
    res: Vec<i32>,
    to: Vec<usize>,
}

impl Flow {
    fn new(n: usize) -> Flow {
        Flow { cap: vec![Vec::new(); n], res: Vec::new(), to: Vec::new() }
    }

    fn add(&mut self, a: usize, b: usize, c: i32) {
        let k = self.res.len();
        self.res.push(c);
        self.to.push(b);
        self.res.push(0);
        self.to.push(a);
        self.cap[a].push((b, k));
        self.cap[b].push((a, k + 1));
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.cap.len()];
        prev[s] = usize::MAX - 1;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &(y, k) in &self.cap[x] {
                if self.res[k] > 0 && prev[y] == usize::MAX {
                    prev[y] = k;
                    if y == t {
                        let mut cur = t;
                        while cur != s {
                            let k = prev[cur];
                            self.res[k] -= 1;
                            self.res[k ^ 1] += 1;
                            cur = self.to[k ^ 1];
                        }
                        return true;
                    }
                    q.push_back(y);
                }
            }
        }
        false
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.cap.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &(y, k) in &self.cap[x] {
                if self.res[k] > 0 && !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        seen
    }
}

/// Minimum vertex cut between non-adjacent `s` and `t`, if its size is at most `limit`.
fn min_cut(g: &Graph, s: usize, t: usize, limit: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let big = n as i32 + 1;
    let mut f = Flow::new(2 * n);
    for i in 0..n {
        let c = if i == s || i == t { big } else { 1 };
        f.add(2 * i, 2 * i + 1, c);
        for &(j, _) in g.adj_idx(i) {
            f.add(2 * i + 1, 2 * j, big);
        }
    }
    let mut value = 0;
    while f.augment(2 * s + 1, 2 * t) {
        value += 1;
        if value > limit {
            return None;
        }
    }
    let seen = f.reachable(2 * s + 1);
    Some((0..n).filter(|&i| seen[2 * i] && !seen[2 * i + 1]).collect())
}

/// A smallest vertex set of size at most `k` whose removal disconnects the
/// graph; the empty set for a disconnected graph; `None` if no such set exists
/// (complete graphs, or connectivity above `k`).
pub(super) fn find_separator(g: &Graph, k: usize) -> Option<Vec<VertexId>> {
    if !g.is_connected() {
        return Some(Vec::new());
    }
    let n = g.n();
    let mut best: Option<Vec<usize>> = None;
    for s in 0..n {
        for t in s + 1..n {
            if g.edge_between(g.vertex_at(s), g.vertex_at(t)).is_some() {
                continue;
            }
            let limit = best.as_ref().map_or(k, |b| b.len().saturating_sub(1));
            if best.is_some() && best.as_ref().unwrap().is_empty() {
                break;
            }
            if let Some(cut) = min_cut(g, s, t, limit) {
                if best.as_ref().is_none_or(|b| cut.len() < b.len()) {
                    best = Some(cut);
                }
            }
        }
    }
    best.map(|c| c.into_iter().map(|i| g.vertex_at(i)).collect())
}
