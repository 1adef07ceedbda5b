//! Checks on families of pairwise non-homotopic, internally disjoint paths.

use std::collections::BTreeSet;

use surface_minors::graph::{Graph, VertexId};
use surface_minors::structure::Structure;
use surface_minors::topology::are_homotopic;

/// All simple `a`–`b` paths, or cycles starting at `a` when `a = b` (each
/// cycle once, up to direction), by plain depth-first search.
pub fn naive_paths(g: &Graph, a: VertexId, b: VertexId) -> Vec<Vec<VertexId>> {
    fn go(g: &Graph, b: VertexId, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let v = *path.last().unwrap();
        for w in g.neighbors(v) {
            if w == b && (path[0] != b || path.len() >= 3) {
                let mut p = path.clone();
                if path[0] != b {
                    p.push(w);
                }
                out.push(p);
            } else if w != b && !path.contains(&w) {
                path.push(w);
                go(g, b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, b, &mut vec![a], &mut out);
    if a == b {
        // keep one direction
        out.retain(|c| c[1] < c[c.len() - 1]);
    }
    out
}

/// Members must be valid, internally disjoint and (for the exhaustive
/// check) at most `bound + 1` of them.
pub fn validate(g: &Graph, a: VertexId, b: VertexId, members: &[Vec<VertexId>]) -> Result<(), String> {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for p in members {
        if p[0] != a {
            return Err(format!("{p:?} does not start at {a}"));
        }
        let closed = a == b;
        let ok = if closed { g.is_cycle(p) } else { *p.last().unwrap() == b && p.windows(2).all(|w| g.edge_between(w[0], w[1]).is_some()) };
        if !ok {
            return Err(format!("{p:?} is not a {}", if closed { "cycle" } else { "path" }));
        }
        let inner = if closed { &p[1..] } else { &p[1..p.len() - 1] };
        for &v in inner {
            if !seen.insert(v) {
                return Err(format!("{v} used twice in {members:?}"));
            }
        }
    }
    Ok(())
}

/// Largest `k` in a family `P_0 .. P_k` at Euler genus `g`.
pub fn bound(g: usize) -> usize {
    if g <= 1 {
        g
    } else {
        3 * g - 3
    }
}

/// Run the family search on every vertex pair of an embedding of Euler
/// genus `genus`; `Err` names the first violation of the bound, of
/// exactness, or of the family's shape. Returns the largest family size.
pub fn check_embedding(st: &Structure, genus: usize) -> Result<usize, String> {
    let g = st.graph();
    let mut largest = 0;
    for (i, &a) in g.vertices().iter().enumerate() {
        for &b in &g.vertices()[i..] {
            let fam = st.max_nonhomotopic_internally_disjoint(a, b, 100_000).map_err(|e| e.to_string())?;
            validate(g, a, b, &fam.members)?;
            if !fam.exact {
                return Err(format!("search for {a}-{b} did not finish"));
            }
            if fam.euler_genus != genus || fam.bound != bound(genus) || fam.members.len() > bound(genus) + 1 || !fam.within_bound {
                return Err(format!("{} members for {a}-{b} at Euler genus {}", fam.members.len(), fam.euler_genus));
            }
            largest = largest.max(fam.members.len());
        }
    }
    Ok(largest)
}

/// Largest family by trying every subset of the naive candidates, with
/// homotopy decided pair by pair from cycle classification.
pub fn brute_family_size(st: &Structure, a: VertexId, b: VertexId) -> usize {
    let g = st.graph();
    let cands = naive_paths(g, a, b);
    let n = cands.len();
    let inner: Vec<BTreeSet<VertexId>> = cands
        .iter()
        .map(|p| if a == b { p[1..].iter().copied().collect() } else { p[1..p.len() - 1].iter().copied().collect() })
        .collect();
    let homotopic = |p: &[VertexId], q: &[VertexId]| -> bool {
        if a != b {
            let mut cyc = p.to_vec();
            cyc.extend(q[1..q.len() - 1].iter().rev());
            return st.cycle_info(&cyc).unwrap().contractible();
        }
        let x = st.cycle_info(p).unwrap();
        let y = st.cycle_info(q).unwrap();
        match (x.contractible(), y.contractible()) {
            (true, true) => true,
            (false, false) => {
                x.class.two_sided && y.class.two_sided && are_homotopic(st.embedding(), p, q).unwrap().is_some()
            }
            _ => false,
        }
    };
    let ok: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && inner[i].is_disjoint(&inner[j]) && !homotopic(&cands[i], &cands[j])).collect())
        .collect();
    fn grow(ok: &[Vec<bool>], chosen: &mut Vec<usize>, from: usize, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for i in from..ok.len() {
            if chosen.iter().all(|&j| ok[i][j]) {
                chosen.push(i);
                grow(ok, chosen, i + 1, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    grow(&ok, &mut Vec::new(), 0, &mut best);
    best
}
