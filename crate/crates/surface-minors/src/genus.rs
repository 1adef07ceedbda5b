//! Exact minimum Euler genus by branch and bound over signed rotation systems.
//!
//! Leaves are stripped first (they never change the genus). Signatures are
//! normalised to +1 on a BFS spanning tree, so an orientable embedding is one
//! with every cotree edge +1. Vertices get their rotation one successor at a
//! time; each choice links two flags of the face permutation, and partial
//! orbits are kept as chains with an undo log. The bound counts closed orbits
//! plus the most orbits the open chains could still form, each orbit needing
//! at least three flags.

use std::collections::VecDeque;

use crate::embedding::Embedding;
use crate::graph::{EdgeId, Graph, VertexId};

/// A closed surface by Euler genus and orientability. The sphere is `(0, true)`,
/// the projective plane `(1, false)`, the torus `(2, true)`, the Klein bottle `(2, false)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Surface {
    pub euler_genus: usize,
    pub orientable: bool,
}

impl Surface {
    pub const SPHERE: Surface = Surface { euler_genus: 0, orientable: true };
    pub const PROJECTIVE_PLANE: Surface = Surface { euler_genus: 1, orientable: false };
    pub const TORUS: Surface = Surface { euler_genus: 2, orientable: true };
    pub const KLEIN_BOTTLE: Surface = Surface { euler_genus: 2, orientable: false };

    pub fn new(euler_genus: usize, orientable: bool) -> Option<Surface> {
        if orientable && euler_genus % 2 == 1 || !orientable && euler_genus == 0 {
            None
        } else {
            Some(Surface { euler_genus, orientable })
        }
    }

    /// Surfaces in order of Euler genus, orientable first, up to `max` inclusive.
    pub fn all_up_to(max: usize) -> Vec<Surface> {
        let mut out = Vec::new();
        for g in 0..=max {
            for o in [true, false] {
                if let Some(s) = Surface::new(g, o) {
                    out.push(s);
                }
            }
        }
        out
    }
}

impl std::fmt::Display for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.euler_genus, if self.orientable { "orientable" } else { "nonorientable" })
    }
}

impl std::str::FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Surface, String> {
        let (g, o) = s.split_once(':').ok_or_else(|| format!("expected <genus>:<orientable|nonorientable>, got {s}"))?;
        let g: usize = g.parse().map_err(|_| format!("bad Euler genus {g}"))?;
        let o = match o {
            "orientable" | "o" => true,
            "nonorientable" | "n" => false,
            _ => return Err(format!("bad orientability {o}")),
        };
        Surface::new(g, o).ok_or_else(|| format!("no surface {s}: orientable surfaces have even Euler genus, nonorientable ones positive"))
    }
}

/// Minimum Euler genus over orientable and over nonorientable cellular
/// embeddings. `nonorientable` is `None` for forests, which have none.
#[derive(Clone, Debug)]
pub struct GenusProfile {
    pub orientable: usize,
    pub nonorientable: Option<usize>,
    pub orientable_witness: Embedding,
    pub nonorientable_witness: Option<Embedding>,
    pub nodes: u64,
}

impl GenusProfile {
    pub fn euler_genus(&self) -> usize {
        self.nonorientable.map_or(self.orientable, |n| n.min(self.orientable))
    }

    /// Whether the graph embeds (not necessarily cellularly) in `s`.
    pub fn embeds_in(&self, s: Surface) -> bool {
        if s.orientable {
            self.orientable <= s.euler_genus
        } else {
            self.nonorientable.unwrap_or(1) <= s.euler_genus
        }
    }

    /// Embedding witnessing `embeds_in(s)`, if it holds.
    pub fn witness_for(&self, s: Surface) -> Option<&Embedding> {
        if !self.embeds_in(s) {
            return None;
        }
        if s.orientable {
            Some(&self.orientable_witness)
        } else {
            Some(self.nonorientable_witness.as_ref().unwrap_or(&self.orientable_witness))
        }
    }
}

#[derive(Clone, Debug)]
pub enum GenusOutcome {
    Exact(GenusProfile),
    /// The node budget ran out; `lower` is a proven lower bound on the Euler
    /// genus, `upper` the best embedding found.
    Unknown { lower: usize, upper: Option<usize>, nodes: u64 },
}

impl GenusOutcome {
    pub fn exact(self) -> Option<GenusProfile> {
        match self {
            GenusOutcome::Exact(p) => Some(p),
            GenusOutcome::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub budget: u64,
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 2_000_000_000, threads: 1 }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Orientable,
    // at least one cotree edge negative
    Nonorientable,
}

struct Engine {
    n: usize,
    m: usize,
    darts_at: Vec<Vec<usize>>,
    order: Vec<usize>,
    cotree: Vec<bool>,
    cotree_count: usize,
    // first vertex in order with degree >= 3; its rotation is taken up to reflection
    mirror_vertex: Option<usize>,
    mode: Mode,
    // search state
    sig: Vec<i8>,
    succ: Vec<u32>,
    other: Vec<u32>,
    len: Vec<u32>,
    rot_next: Vec<u32>,
    closed_orbits: usize,
    // open chains of length >= 3, and total length of the shorter ones
    big: usize,
    small: usize,
    linked: usize,
    cotree_assigned: usize,
    negatives: usize,
    // results
    best: usize,
    floor: usize,
    witness: Option<(Vec<u32>, Vec<i8>)>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    done: bool,
}

struct LinkUndo {
    f: u32,
    a: u32,
    other_a: u32,
    len_a: u32,
    b: u32,
    other_b: u32,
    len_b: u32,
    closed: u32,
}

impl Engine {
    fn new(g: &Graph, mode: Mode, budget: u64) -> Engine {
        let n = g.n();
        let m = g.m();
        let ends: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (g.idx(a), g.idx(b))).collect();
        let mut darts_at = vec![Vec::new(); n];
        for (e, &(a, b)) in ends.iter().enumerate() {
            darts_at[a].push(2 * e);
            darts_at[b].push(2 * e + 1);
        }
        // order: start at a max-degree vertex, then most already-placed neighbours
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        let mut placed_nb = vec![0usize; n];
        while order.len() < n {
            let pick = (0..n)
                .filter(|&i| !placed[i])
                .max_by(|&x, &y| {
                    (placed_nb[x], g.adj_idx(x).len(), std::cmp::Reverse(x))
                        .cmp(&(placed_nb[y], g.adj_idx(y).len(), std::cmp::Reverse(y)))
                })
                .unwrap();
            placed[pick] = true;
            order.push(pick);
            for &(j, _) in g.adj_idx(pick) {
                placed_nb[j] += 1;
            }
        }
        // BFS tree from the first vertex in order
        let mut cotree = vec![true; m];
        let mut seen = vec![false; n];
        if n > 0 {
            seen[order[0]] = true;
            let mut q = VecDeque::from([order[0]]);
            while let Some(x) = q.pop_front() {
                for &(y, e) in g.adj_idx(x) {
                    if !seen[y] {
                        seen[y] = true;
                        cotree[e] = false;
                        q.push_back(y);
                    }
                }
            }
        }
        let cotree_count = cotree.iter().filter(|&&c| c).count();
        let mirror_vertex = order.iter().copied().find(|&v| darts_at[v].len() >= 3);
        let nflags = 4 * m;
        let mut sig = vec![0i8; m];
        for e in 0..m {
            if !cotree[e] {
                sig[e] = 1;
            }
        }
        Engine {
            n,
            m,
            darts_at,
            order,
            cotree,
            cotree_count,
            mirror_vertex,
            mode,
            sig,
            succ: vec![NONE; nflags],
            other: (0..nflags as u32).collect(),
            len: vec![1; nflags],
            rot_next: vec![NONE; 2 * m],
            closed_orbits: 0,
            big: 0,
            small: nflags,
            linked: 0,
            cotree_assigned: 0,
            negatives: 0,
            best: usize::MAX,
            floor: 0,
            witness: None,
            nodes: 0,
            budget,
            aborted: false,
            done: false,
        }
    }

    fn drop_chain(&mut self, l: u32) {
        if l >= 3 {
            self.big -= 1;
        } else {
            self.small -= l as usize;
        }
    }

    fn add_chain(&mut self, l: u32) {
        if l >= 3 {
            self.big += 1;
        } else {
            self.small += l as usize;
        }
    }

    fn link(&mut self, f: u32, g: u32) -> LinkUndo {
        self.succ[f as usize] = g;
        self.linked += 1;
        let a = self.other[f as usize];
        let b = self.other[g as usize];
        let mut u = LinkUndo {
            f,
            a,
            other_a: self.other[a as usize],
            len_a: self.len[a as usize],
            b,
            other_b: self.other[b as usize],
            len_b: self.len[b as usize],
            closed: 0,
        };
        if a == g {
            let l = self.len[a as usize];
            self.closed_orbits += 1;
            self.drop_chain(l);
            u.closed = l;
        } else {
            self.drop_chain(self.len[a as usize]);
            self.drop_chain(self.len[g as usize]);
            let l = self.len[a as usize] + self.len[g as usize];
            self.add_chain(l);
            self.other[a as usize] = b;
            self.other[b as usize] = a;
            self.len[a as usize] = l;
            self.len[b as usize] = l;
        }
        u
    }

    fn unlink(&mut self, u: LinkUndo) {
        self.succ[u.f as usize] = NONE;
        self.linked -= 1;
        if u.closed > 0 {
            self.closed_orbits -= 1;
            self.add_chain(u.closed);
        } else {
            self.drop_chain(self.len[u.a as usize]);
            self.other[u.b as usize] = u.other_b;
            self.len[u.b as usize] = u.len_b;
            self.other[u.a as usize] = u.other_a;
            self.len[u.a as usize] = u.len_a;
            self.add_chain(u.len_a);
            self.add_chain(u.len_b);
        }
    }

    /// Set rotation successor x -> y at their common tail; links two flags.
    fn set_rot(&mut self, x: usize, y: usize) -> (LinkUndo, LinkUndo) {
        self.rot_next[x] = y as u32;
        let ex = x / 2;
        let ey = y / 2;
        // arriving along x's edge with resulting orientation + continues along y
        let sx = (self.sig[ex] == -1) as usize;
        let f1 = 2 * (x ^ 1) + sx;
        let g1 = 2 * y;
        // arriving along y's edge with resulting orientation - continues along x
        let sy = 1 ^ (self.sig[ey] == -1) as usize;
        let f2 = 2 * (y ^ 1) + sy;
        let g2 = 2 * x + 1;
        let u1 = self.link(f1 as u32, g1 as u32);
        let u2 = self.link(f2 as u32, g2 as u32);
        (u1, u2)
    }

    fn unset_rot(&mut self, x: usize, u: (LinkUndo, LinkUndo)) {
        self.unlink(u.1);
        self.unlink(u.0);
        self.rot_next[x] = NONE;
    }

    fn lower_bound(&self) -> usize {
        // each future orbit needs three flags: long chains alone, short ones pooled
        let future = self.big + self.small / 3;
        let faces = (self.closed_orbits + future) / 2;
        let chi = self.n as i64 - self.m as i64 + faces as i64;
        let g = (2 - chi).max(0) as usize;
        if self.mode == Mode::Orientable && g % 2 == 1 {
            g + 1
        } else {
            g
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
        }
        self.aborted || self.done
    }

    fn pruned(&self) -> bool {
        self.lower_bound() >= self.best
    }

    fn vertex(&mut self, k: usize) {
        if k == self.n {
            self.leaf();
            return;
        }
        let v = self.order[k];
        let pending: Vec<usize> =
            self.darts_at[v].iter().map(|&d| d / 2).filter(|&e| self.cotree[e] && self.sig[e] == 0).collect();
        self.signs(k, v, &pending, 0);
    }

    fn signs(&mut self, k: usize, v: usize, pending: &[usize], i: usize) {
        if i == pending.len() {
            let darts = self.darts_at[v].clone();
            let a0 = darts[0];
            let rest: Vec<usize> = darts[1..].to_vec();
            self.rotation(k, v, a0, a0, rest);
            return;
        }
        let e = pending[i];
        let choices: &[i8] = match self.mode {
            Mode::Orientable => &[1],
            Mode::Nonorientable => {
                // the last cotree edge must be negative if none is yet
                if self.cotree_assigned + 1 == self.cotree_count && self.negatives == 0 {
                    &[-1]
                } else {
                    &[1, -1]
                }
            }
        };
        for &s in choices {
            if self.tick() {
                return;
            }
            self.sig[e] = s;
            self.cotree_assigned += 1;
            if s == -1 {
                self.negatives += 1;
            }
            self.signs(k, v, pending, i + 1);
            if s == -1 {
                self.negatives -= 1;
            }
            self.cotree_assigned -= 1;
            self.sig[e] = 0;
            if self.aborted || self.done {
                return;
            }
        }
    }

    fn rotation(&mut self, k: usize, v: usize, first: usize, cur: usize, rest: Vec<usize>) {
        if rest.is_empty() {
            if self.tick() {
                return;
            }
            let u = self.set_rot(cur, first);
            if !self.pruned() {
                self.vertex(k + 1);
            }
            self.unset_rot(cur, u);
            return;
        }
        let mirror = Some(v) == self.mirror_vertex;
        for idx in 0..rest.len() {
            let y = rest[idx];
            // up to reflection: the second dart of v comes before the third
            if mirror && y == self.darts_at[v][2] && rest.contains(&self.darts_at[v][1]) {
                continue;
            }
            if self.tick() {
                return;
            }
            let u = self.set_rot(cur, y);
            if !self.pruned() {
                let mut r2 = rest.clone();
                r2.remove(idx);
                self.rotation(k, v, first, y, r2);
            }
            self.unset_rot(cur, u);
            if self.aborted || self.done {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        if self.mode == Mode::Nonorientable && self.negatives == 0 {
            return;
        }
        debug_assert_eq!(self.linked, 4 * self.m);
        let faces = self.closed_orbits / 2;
        let g = (2 + self.m as i64 - self.n as i64 - faces as i64) as usize;
        if g < self.best {
            self.best = g;
            self.witness = Some((self.rot_next.clone(), self.sig.clone()));
            if g <= self.floor {
                self.done = true;
            }
        }
    }

    fn run(&mut self) {
        if self.mode == Mode::Nonorientable && self.cotree_count == 0 {
            return;
        }
        self.vertex(0);
    }

    fn witness_embedding(&self, g: &Graph, rot_next: &[u32], sig: &[i8]) -> Embedding {
        let rot = (0..self.n)
            .map(|v| {
                let darts = &self.darts_at[v];
                let mut out = Vec::with_capacity(darts.len());
                if let Some(&d0) = darts.first() {
                    let mut d = d0;
                    loop {
                        out.push(d / 2);
                        d = rot_next[d] as usize;
                        if d == d0 {
                            break;
                        }
                    }
                }
                out
            })
            .collect();
        Embedding::from_parts(g.clone(), rot, sig.to_vec()).unwrap()
    }
}

/// Strip degree-1 vertices repeatedly. Returns the core and, in removal
/// order, the removed (leaf, attachment) pairs.
fn strip_leaves(g: &Graph) -> (Graph, Vec<(VertexId, VertexId)>) {
    let mut deg: Vec<usize> = (0..g.n()).map(|i| g.adj_idx(i).len()).collect();
    let mut alive = vec![true; g.n()];
    let mut removed = Vec::new();
    let mut stack: Vec<usize> = (0..g.n()).filter(|&i| deg[i] == 1).collect();
    let mut left = g.n();
    while let Some(x) = stack.pop() {
        if !alive[x] || deg[x] != 1 || left <= 1 {
            continue;
        }
        let &(y, _) = g.adj_idx(x).iter().find(|&&(y, _)| alive[y]).unwrap();
        alive[x] = false;
        left -= 1;
        deg[y] -= 1;
        removed.push((g.vertex_at(x), g.vertex_at(y)));
        if deg[y] == 1 {
            stack.push(y);
        }
    }
    let keep: Vec<VertexId> = (0..g.n()).filter(|&i| alive[i]).map(|i| g.vertex_at(i)).collect();
    (g.induced(&keep), removed)
}

/// Put stripped leaves back: each leaf edge goes last in its attachment's rotation, signature +1.
fn restore_leaves(full: &Graph, core: &Embedding, removed: &[(VertexId, VertexId)]) -> Embedding {
    let mut rot: Vec<Vec<EdgeId>> = vec![Vec::new(); full.n()];
    let mut sig = vec![1i8; full.m()];
    for &v in core.graph().vertices() {
        rot[full.idx(v)] = core.rotation(v).iter().map(|&e| {
            let (a, b) = core.graph().edge(e);
            full.edge_between(a, b).unwrap()
        }).collect();
    }
    for (e, &(a, b)) in core.graph().edges().iter().enumerate() {
        sig[full.edge_between(a, b).unwrap()] = core.signature(e);
    }
    for &(leaf, att) in removed.iter().rev() {
        let e = full.edge_between(leaf, att).unwrap();
        rot[full.idx(att)].push(e);
        rot[full.idx(leaf)].push(e);
    }
    Embedding::from_parts(full.clone(), rot, sig).unwrap()
}

fn euler_floor(g: &Graph) -> usize {
    // every face of a simple graph with minimum degree 2 has length >= 3
    if g.m() < 3 {
        return 0;
    }
    let faces = 2 * g.m() / 3;
    (2 + g.m() as i64 - g.n() as i64 - faces as i64).max(0) as usize
}

enum Run {
    Done(Option<(usize, Embedding)>),
    Aborted { lower: usize, upper: Option<usize> },
}

fn search(core: &Graph, mode: Mode, floor: usize, start_best: Option<(usize, Embedding)>, budget: u64, nodes: &mut u64) -> Run {
    let mut eng = Engine::new(core, mode, budget.saturating_sub(*nodes));
    eng.floor = floor;
    if let Some((b, _)) = &start_best {
        eng.best = *b;
        if *b <= floor {
            return Run::Done(start_best);
        }
    }
    eng.run();
    *nodes += eng.nodes;
    if eng.aborted {
        let upper = if eng.witness.is_some() { Some(eng.best) } else { start_best.as_ref().map(|x| x.0) };
        return Run::Aborted { lower: floor, upper };
    }
    match &eng.witness {
        Some((rn, sg)) => Run::Done(Some((eng.best, eng.witness_embedding(core, rn, sg)))),
        None => Run::Done(start_best),
    }
}

/// Cheap nonorientable upper bound: flip one cotree edge of an orientable
/// embedding and keep the best.
fn flip_one(core: &Embedding) -> Option<(usize, Embedding)> {
    let norm = core.normalize_signatures();
    let parent = core.graph().bfs_forest();
    let tree: Vec<bool> = {
        let mut t = vec![false; core.graph().m()];
        for p in parent.into_iter().flatten() {
            t[p] = true;
        }
        t
    };
    let mut best: Option<(usize, Embedding)> = None;
    for e in 0..core.graph().m() {
        if tree[e] {
            continue;
        }
        let mut sig = norm.signatures().to_vec();
        sig[e] = -sig[e];
        let rot = (0..core.graph().n()).map(|i| norm.rotation_idx(i).to_vec()).collect();
        let cand = norm.with_parts(rot, sig).unwrap();
        if cand.is_orientable() {
            continue;
        }
        let g = cand.euler_genus().unwrap();
        if best.as_ref().is_none_or(|b| g < b.0) {
            best = Some((g, cand));
        }
    }
    best
}

fn connected_profile(g: &Graph, cfg: SearchConfig) -> GenusOutcome {
    let (core, removed) = strip_leaves(g);
    if core.m() == 0 {
        let w = Embedding::default_for(g);
        return GenusOutcome::Exact(GenusProfile {
            orientable: 0,
            nonorientable: None,
            orientable_witness: w,
            nonorientable_witness: None,
            nodes: 0,
        });
    }
    let mut nodes = 0u64;
    let floor = euler_floor(&core);
    let or_floor = floor + floor % 2;
    let or = match search(&core, Mode::Orientable, or_floor, None, cfg.budget, &mut nodes) {
        Run::Done(Some(x)) => x,
        Run::Done(None) => unreachable!("every connected graph has an orientable embedding"),
        Run::Aborted { lower, upper } => return GenusOutcome::Unknown { lower, upper, nodes },
    };
    let non = if core.m() >= core.n() {
        let start = flip_one(&or.1);
        match search(&core, Mode::Nonorientable, floor.max(1), start, cfg.budget, &mut nodes) {
            Run::Done(x) => x,
            Run::Aborted { lower, upper } => {
                return GenusOutcome::Unknown { lower: lower.min(or.0), upper: upper.map(|u| u.min(or.0)).or(Some(or.0)), nodes }
            }
        }
    } else {
        None
    };
    GenusOutcome::Exact(GenusProfile {
        orientable: or.0,
        nonorientable: non.as_ref().map(|x| x.0),
        orientable_witness: restore_leaves(g, &or.1, &removed),
        nonorientable_witness: non.map(|x| restore_leaves(g, &x.1, &removed)),
        nodes,
    })
}

/// Nonorientable minimum of a union from per-part (orientable, nonorientable)
/// minima: each part takes its cheaper kind, plus one crosscap if every part
/// chose orientable. `None` if every part is a forest.
pub fn combine_nonorientable(parts: &[(usize, Option<usize>)]) -> Option<usize> {
    if parts.iter().all(|p| p.1.is_none()) {
        return None;
    }
    let sum: usize = parts.iter().map(|&(o, n)| n.map_or(o, |n| n.min(o))).sum();
    let some_non = parts.iter().any(|&(o, n)| n.is_some_and(|n| n <= o));
    Some(if some_non { sum } else { sum + 1 })
}

/// Exact orientable and nonorientable minimum Euler genus with witnesses.
/// Disconnected graphs combine their components.
pub fn min_euler_genus(g: &Graph, cfg: SearchConfig) -> GenusOutcome {
    let comps = g.components();
    if comps.len() <= 1 {
        return connected_profile(g, cfg);
    }
    let mut profiles = Vec::new();
    let mut nodes = 0;
    let mut lower = 0;
    for c in &comps {
        let sub = g.induced(c);
        let left = SearchConfig { budget: cfg.budget.saturating_sub(nodes), ..cfg };
        match connected_profile(&sub, left) {
            GenusOutcome::Exact(p) => {
                nodes += p.nodes;
                lower += p.euler_genus();
                profiles.push(p);
            }
            GenusOutcome::Unknown { lower: l, nodes: k, .. } => {
                return GenusOutcome::Unknown { lower: lower + l, upper: None, nodes: nodes + k };
            }
        }
    }
    let parts: Vec<(usize, Option<usize>)> = profiles.iter().map(|p| (p.orientable, p.nonorientable)).collect();
    let orientable = parts.iter().map(|p| p.0).sum();
    let nonorientable = combine_nonorientable(&parts);
    let or_w = union_embedding(g, profiles.iter().map(|p| &p.orientable_witness).collect());
    let non_w = nonorientable.map(|_| {
        let prefer_non: Vec<bool> = parts.iter().map(|&(o, n)| n.is_some_and(|n| n <= o)).collect();
        let any = prefer_non.iter().any(|&b| b);
        // with no part preferring it, pay one crosscap on the first non-forest part
        let forced = if any { None } else { parts.iter().position(|p| p.1.is_some()) };
        let pieces = profiles
            .iter()
            .enumerate()
            .map(|(i, p)| if prefer_non[i] || forced == Some(i) { p.nonorientable_witness.as_ref().unwrap() } else { &p.orientable_witness })
            .collect();
        union_embedding(g, pieces)
    });
    GenusOutcome::Exact(GenusProfile { orientable, nonorientable, orientable_witness: or_w, nonorientable_witness: non_w, nodes })
}

/// Combine embeddings of vertex-disjoint subgraphs covering `g`.
pub fn union_embedding(g: &Graph, parts: Vec<&Embedding>) -> Embedding {
    let mut rot: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
    let mut sig = vec![1i8; g.m()];
    for p in parts {
        let pg = p.graph();
        for &v in pg.vertices() {
            rot[g.idx(v)] = p.rotation(v).iter().map(|&e| {
                let (a, b) = pg.edge(e);
                g.edge_between(a, b).unwrap()
            }).collect();
        }
        for (e, &(a, b)) in pg.edges().iter().enumerate() {
            sig[g.edge_between(a, b).unwrap()] = p.signature(e);
        }
    }
    Embedding::from_parts(g.clone(), rot, sig).unwrap()
}

/// Whether `g` embeds in `s`, with a witness when it does; `None` if the budget ran out.
pub fn embeddable_in(g: &Graph, s: Surface, cfg: SearchConfig) -> Option<Option<Embedding>> {
    match min_euler_genus(g, cfg) {
        GenusOutcome::Exact(p) => Some(p.witness_for(s).cloned()),
        GenusOutcome::Unknown { lower, .. } if lower > s.euler_genus => Some(None),
        GenusOutcome::Unknown { .. } => None,
    }
}

/// Per-block minima and their sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGenus {
    pub euler: usize,
    pub orientable: usize,
    pub nonorientable: Option<usize>,
    pub blocks: Vec<(usize, Option<usize>)>,
}

/// Euler genus as the sum over blocks, each block searched on its own.
pub fn genus_via_blocks(g: &Graph, cfg: SearchConfig) -> Option<BlockGenus> {
    let mut parts = Vec::new();
    for b in g.blocks() {
        let (sub, _) = g.edge_subgraph(&b.edges);
        let p = min_euler_genus(&sub, cfg).exact()?;
        parts.push((p.orientable, p.nonorientable));
    }
    // isolated vertices and forests have no cycle-carrying block
    let euler = parts.iter().map(|&(o, n)| n.map_or(o, |n| n.min(o))).sum();
    let orientable = parts.iter().map(|p| p.0).sum();
    let nonorientable = combine_nonorientable(&parts);
    Some(BlockGenus { euler, orientable, nonorientable, blocks: parts })
}
