//! Depth-first assignment search over host edges.
//!
//! Edges are assigned in a fixed order. On complete hosts the order is by
//! larger endpoint, so assigning edge `{w-1, w}` completes the prefix
//! `0..=w`, which is where the hereditary k-Gallai prune runs.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use crate::coloring::ColorSet;
use crate::partition::component_in;
use crate::search::{knn_through, EdgeAnchoredPlan};

pub(crate) enum PatternCheck {
    /// Star with `cap + 1` leaves: color degrees must stay at most `cap`.
    Star { cap: u8 },
    General(EdgeAnchoredPlan),
}

pub(crate) struct GallaiPrune {
    /// Color sets whose removal is tried when looking for a split.
    pub combos: Vec<ColorSet>,
    /// Vertex whose prefix is completed by assigning each edge.
    pub completes: Vec<Option<u8>>,
}

pub(crate) struct Problem {
    pub nverts: usize,
    pub edges: Vec<(u8, u8)>,
    /// Edge present/absent search instead of coloring.
    pub graph_mode: bool,
    pub palette: usize,
    /// Colors are interchangeable: a new color must be the next unused id.
    pub symmetric: bool,
    pub pattern: Option<PatternCheck>,
    pub gallai: Option<GallaiPrune>,
    pub knn: Option<usize>,
    pub min_edges: Option<usize>,
    /// Left side size for row-lex symmetry breaking on bipartite graph search.
    pub row_lex: Option<usize>,
    pub all: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub pos: usize,
    pub assign: Vec<u8>,
    adj: Vec<u64>,
    deg: Vec<u8>,
    unassigned: Vec<u8>,
    max_color: u8,
    present: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
    Abort,
}

/// Shared budget and cancellation for one search.
pub(crate) struct Shared {
    pub nodes: AtomicU64,
    pub budget: u64,
    pub out_of_budget: AtomicBool,
    /// Lowest task index that has found a witness (`usize::MAX` if none).
    pub best_task: AtomicUsize,
}

impl Shared {
    pub fn new(budget: u64) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            budget,
            out_of_budget: AtomicBool::new(false),
            best_task: AtomicUsize::new(usize::MAX),
        }
    }
}

const FLUSH: u64 = 1024;

pub(crate) struct Control<'a> {
    shared: &'a Shared,
    local: u64,
    interval: u64,
    task: usize,
}

impl<'a> Control<'a> {
    pub fn new(shared: &'a Shared, task: usize) -> Self {
        Control { shared, local: 0, interval: FLUSH.min(shared.budget / 16 + 1), task }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= self.interval {
            return self.flush();
        }
        true
    }

    /// Publishes local node counts; false when the search must stop.
    pub fn flush(&mut self) -> bool {
        let total = self.shared.nodes.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.shared.budget {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
        }
        !self.shared.out_of_budget.load(Ordering::Relaxed) && self.shared.best_task.load(Ordering::Relaxed) >= self.task
    }
}

impl Problem {
    pub fn root(&self) -> State {
        let mut unassigned = vec![0u8; self.nverts];
        for &(u, v) in &self.edges {
            unassigned[u as usize] += 1;
            unassigned[v as usize] += 1;
        }
        State {
            pos: 0,
            assign: vec![0; self.edges.len()],
            adj: vec![0; (self.palette + 1) * self.nverts],
            deg: vec![0; (self.palette + 1) * self.nverts],
            unassigned,
            max_color: 0,
            present: 0,
        }
    }

    fn value_limit(&self, st: &State) -> u8 {
        if self.graph_mode {
            1
        } else if self.symmetric {
            (st.max_color as usize + 1).min(self.palette) as u8
        } else {
            self.palette as u8
        }
    }

    /// Values to try at the current position, in search order.
    #[inline]
    fn values(&self, st: &State) -> impl Iterator<Item = u8> {
        let graph = self.graph_mode;
        let lim = self.value_limit(st);
        (0..=lim).filter_map(move |i| if graph { Some(1 - i) } else if i == 0 { None } else { Some(i) })
    }

    #[inline]
    fn apply(&self, st: &mut State, val: u8) -> u8 {
        let (u, v) = self.edges[st.pos];
        let (u, v) = (u as usize, v as usize);
        let n = self.nverts;
        let prev_max = st.max_color;
        st.assign[st.pos] = val;
        st.unassigned[u] -= 1;
        st.unassigned[v] -= 1;
        if val != 0 {
            let c = val as usize;
            st.adj[c * n + u] |= 1 << v;
            st.adj[c * n + v] |= 1 << u;
            st.deg[c * n + u] += 1;
            st.deg[c * n + v] += 1;
            st.max_color = st.max_color.max(val);
            st.present += 1;
        }
        st.pos += 1;
        prev_max
    }

    #[inline]
    fn undo(&self, st: &mut State, prev_max: u8) {
        st.pos -= 1;
        let (u, v) = self.edges[st.pos];
        let (u, v) = (u as usize, v as usize);
        let n = self.nverts;
        let val = st.assign[st.pos];
        st.assign[st.pos] = 0;
        st.unassigned[u] += 1;
        st.unassigned[v] += 1;
        if val != 0 {
            let c = val as usize;
            st.adj[c * n + u] &= !(1 << v);
            st.adj[c * n + v] &= !(1 << u);
            st.deg[c * n + u] -= 1;
            st.deg[c * n + v] -= 1;
            st.present -= 1;
        }
        st.max_color = prev_max;
    }

    /// Constraint checks for the edge just assigned (at `st.pos - 1`).
    fn admissible(&self, st: &State) -> bool {
        let pos = st.pos - 1;
        let (u, v) = self.edges[pos];
        let (u, v) = (u as usize, v as usize);
        let n = self.nverts;
        let val = st.assign[pos] as usize;

        if let Some(target) = self.min_edges {
            if st.present + (self.edges.len() - st.pos) < target {
                return false;
            }
        }
        if let Some(p) = self.row_lex {
            // rows of the biadjacency matrix must be non-increasing
            let row = u;
            if row >= 1 {
                let j = v - p;
                let prefix = (1u64 << (p + j + 1)) - 1;
                let a = st.adj[n + row] & prefix;
                let b = st.adj[n + row - 1] & prefix;
                let diff = a ^ b;
                if diff != 0 && a & diff & diff.wrapping_neg() != 0 {
                    return false;
                }
            }
        }
        if val == 0 {
            return true;
        }
        if let Some(kn) = self.knn {
            if knn_through(&st.adj[n..2 * n], kn, u, v) {
                return false;
            }
        }
        match &self.pattern {
            Some(PatternCheck::Star { cap }) => {
                if st.deg[val * n + u] > *cap || st.deg[val * n + v] > *cap {
                    return false;
                }
                for x in [u, v] {
                    let room: usize =
                        (1..=self.palette).map(|c| cap.saturating_sub(st.deg[c * n + x]) as usize).sum();
                    if st.unassigned[x] as usize > room {
                        return false;
                    }
                }
            }
            Some(PatternCheck::General(plan)) => {
                if plan.contains_through(&st.adj[val * n..(val + 1) * n], self.all, u, v) {
                    return false;
                }
            }
            None => {}
        }
        if let Some(g) = &self.gallai {
            if let Some(w) = g.completes[pos] {
                if !self.prefix_splits(st, w as usize, &g.combos) {
                    return false;
                }
            }
        }
        true
    }

    /// Every subset of `0..=w` containing `w` (size >= 3) has a G_k split.
    fn prefix_splits(&self, st: &State, w: usize, combos: &[ColorSet]) -> bool {
        let n = self.nverts;
        let kept: Vec<[u64; 64]> = combos
            .iter()
            .map(|cs| {
                let mut adj = [0u64; 64];
                for c in 1..=self.palette {
                    if cs.contains(c as u8) {
                        continue;
                    }
                    for (x, a) in adj.iter_mut().enumerate().take(w + 1) {
                        *a |= st.adj[c * n + x];
                    }
                }
                adj
            })
            .collect();
        let others = w as u32;
        let top = 1u64 << w;
        for sub in 0..(1u64 << others) {
            if sub.count_ones() < 2 {
                continue;
            }
            let set = sub | top;
            if !kept.iter().any(|adj| component_in(adj, set) != set) {
                return false;
            }
        }
        true
    }

    /// Depth-first search from `st`; `visit` is called at every complete
    /// assignment and returns `true` to stop.
    pub fn dfs(&self, st: &mut State, ctl: &mut Control, visit: &mut dyn FnMut(&State) -> bool) -> Flow {
        if st.pos == self.edges.len() {
            return if visit(st) { Flow::Stop } else { Flow::Continue };
        }
        let vals: arrayvec_lite::Vals = self.values(st).collect();
        for val in vals.iter() {
            if !ctl.tick() {
                return Flow::Abort;
            }
            let prev = self.apply(st, val);
            let flow = if self.admissible(st) { self.dfs(st, ctl, visit) } else { Flow::Continue };
            self.undo(st, prev);
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    /// Breadth-first expansion into at least `target` independent subtrees,
    /// kept in depth-first order.
    #[cfg(feature = "parallel")]
    pub fn expand(&self, root: State, target: usize, ctl: &mut Control) -> Option<Vec<State>> {
        let mut frontier = vec![root];
        while frontier.len() < target && frontier.iter().any(|s| s.pos < self.edges.len()) {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for st in frontier {
                if st.pos == self.edges.len() {
                    next.push(st);
                    continue;
                }
                let vals: arrayvec_lite::Vals = self.values(&st).collect();
                for val in vals.iter() {
                    if !ctl.tick() {
                        return None;
                    }
                    let mut child = st.clone();
                    self.apply(&mut child, val);
                    if self.admissible(&child) {
                        next.push(child);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Some(frontier)
    }
}

/// Small fixed-capacity value list to avoid allocating per node.
mod arrayvec_lite {
    pub struct Vals {
        buf: [u8; 64],
        len: usize,
    }

    impl Vals {
        pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
            self.buf[..self.len].iter().copied()
        }
    }

    impl FromIterator<u8> for Vals {
        fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
            let mut v = Vals { buf: [0; 64], len: 0 };
            for x in iter {
                v.buf[v.len] = x;
                v.len += 1;
            }
            v
        }
    }
}
