//! Canonical keys for isomorph rejection.
//!
//! Vertices are first split into cells by iterated color-degree refinement.
//! The key is then the lexicographically least edge sequence over all
//! cell-respecting orderings, found by branch and bound. If the search grows
//! past a node cap the key falls back to one fixed cell-respecting ordering:
//! such keys may split isomorphic colorings but never merge distinct ones.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryMode {
    /// Vertex relabelings only.
    VertexOnly,
    /// Vertex relabelings combined with color renamings.
    VertexAndColor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Whether the key came from the exact search rather than the fallback.
    pub fn is_exact(&self) -> bool {
        self.0.get(1) == Some(&0)
    }
}

const NODE_CAP: u64 = 4_000_000;

pub fn canonical_key(c: &EdgeColoring, mode: SymmetryMode) -> CanonicalKey {
    let n = c.n();
    let cells = refine(c, mode);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (cells[v], v));

    let mut search = Search {
        c,
        mode,
        cells: &cells,
        slots: order.iter().map(|&v| cells[v]).collect(),
        twin_of: twins(c),
        best: None,
        nodes: 0,
        aborted: false,
    };
    let mut st = Partial { perm: Vec::with_capacity(n), used: vec![false; n], seq: vec![], cmap: [0; 64], next: 1 };
    search.run(&mut st);

    let (flag, seq) = match (search.aborted, search.best) {
        (false, Some(best)) => (0u8, best),
        _ => (1u8, sequence_for(c, mode, &order)),
    };
    let mut key = vec![
        match mode {
            SymmetryMode::VertexOnly => 0,
            SymmetryMode::VertexAndColor => 1,
        },
        flag,
    ];
    key.extend_from_slice(&(n as u16).to_le_bytes());
    key.push(c.ell() as u8);
    key.extend(seq);
    CanonicalKey(key)
}

/// Key of an uncolored graph, encoded as a 2-coloring of the complete graph.
pub fn graph_key(g: &SimpleGraph) -> CanonicalKey {
    let c = EdgeColoring::from_fn(g.n().max(1), 2, |i, j| if g.has_edge(i, j) { 1 } else { 2 })
        .expect("2 colors are in range");
    canonical_key(&c, SymmetryMode::VertexOnly)
}

/// Edge sequence (column order) of `c` under the vertex ordering `order`.
fn sequence_for(c: &EdgeColoring, mode: SymmetryMode, order: &[usize]) -> Vec<u8> {
    let mut cmap = [0u8; 64];
    let mut next = 1;
    let mut seq = vec![];
    for j in 1..order.len() {
        for i in 0..j {
            let col = c.color(order[i], order[j]);
            seq.push(map_color(mode, col, &mut cmap, &mut next));
        }
    }
    seq
}

fn map_color(mode: SymmetryMode, col: Color, cmap: &mut [u8; 64], next: &mut u8) -> u8 {
    match mode {
        SymmetryMode::VertexOnly => col,
        SymmetryMode::VertexAndColor => {
            if cmap[col as usize] == 0 {
                cmap[col as usize] = *next;
                *next += 1;
            }
            cmap[col as usize]
        }
    }
}

/// Iterated refinement; returns a canonical cell index per vertex.
fn refine(c: &EdgeColoring, mode: SymmetryMode) -> Vec<usize> {
    let n = c.n();
    let ell = c.ell();
    let mut cells = vec![0usize; n];
    let mut count = 1;
    loop {
        let sigs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|v| {
                let mut per_color = vec![Vec::new(); ell + 1];
                for u in 0..n {
                    if u != v {
                        per_color[c.color(u, v) as usize].push(cells[u]);
                    }
                }
                for l in per_color.iter_mut() {
                    l.sort_unstable();
                }
                if mode == SymmetryMode::VertexAndColor {
                    per_color.sort();
                }
                (cells[v], per_color)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<Vec<usize>>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let new_cells: Vec<usize> =
            sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        let new_count = distinct.len();
        cells = new_cells;
        if new_count == count {
            return cells;
        }
        count = new_count;
    }
}

fn twins(c: &EdgeColoring) -> Vec<usize> {
    let n = c.n();
    let mut rep: Vec<usize> = (0..n).collect();
    for v in 0..n {
        if rep[v] != v {
            continue;
        }
        for w in v + 1..n {
            if rep[w] == w && (0..n).all(|x| x == v || x == w || c.color(v, x) == c.color(w, x)) {
                rep[w] = v;
            }
        }
    }
    rep
}

struct Partial {
    perm: Vec<usize>,
    used: Vec<bool>,
    seq: Vec<u8>,
    cmap: [u8; 64],
    next: u8,
}

struct Search<'a> {
    c: &'a EdgeColoring,
    mode: SymmetryMode,
    cells: &'a [usize],
    /// cell required at each output position
    slots: Vec<usize>,
    /// smallest vertex with identical colors to all third vertices
    twin_of: Vec<usize>,
    best: Option<Vec<u8>>,
    nodes: u64,
    aborted: bool,
}

impl Search<'_> {
    fn run(&mut self, st: &mut Partial) {
        let n = self.c.n();
        let pos = st.perm.len();
        if pos == n {
            if self.best.as_ref().is_none_or(|b| st.seq < *b) {
                self.best = Some(st.seq.clone());
            }
            return;
        }
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            self.aborted = true;
        }
        if self.aborted {
            return;
        }
        for v in 0..n {
            if st.used[v] || self.cells[v] != self.slots[pos] {
                continue;
            }
            // swapping twins is an automorphism: branch on the first unused one
            let t = self.twin_of[v];
            if (t..v).any(|u| !st.used[u] && self.twin_of[u] == t) {
                continue;
            }
            let start = st.seq.len();
            let saved_next = st.next;
            let saved_map = st.cmap;
            for i in 0..pos {
                let col = self.c.color(st.perm[i], v);
                let m = map_color(self.mode, col, &mut st.cmap, &mut st.next);
                st.seq.push(m);
            }
            // `best` may have improved inside an earlier sibling, so compare
            // the whole prefix
            let r = match &self.best {
                Some(best) => st.seq.as_slice().cmp(&best[..st.seq.len()]),
                None => Ordering::Less,
            };
            if r != Ordering::Greater {
                st.perm.push(v);
                st.used[v] = true;
                self.run(st);
                st.used[v] = false;
                st.perm.pop();
            }
            st.seq.truncate(start);
            st.next = saved_next;
            st.cmap = saved_map;
            if self.aborted {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rainbow() -> EdgeColoring {
        EdgeColoring::build(3, 3, &[(0, 1, 1), (0, 2, 2), (1, 2, 3)]).unwrap()
    }

    #[test]
    fn relabeled_rainbow_collides() {
        let c = rainbow();
        let d = c.relabel(&[2, 1, 0]);
        assert_eq!(canonical_key(&c, SymmetryMode::VertexOnly), canonical_key(&d, SymmetryMode::VertexOnly));
    }

    #[test]
    fn rainbow_differs_from_monochromatic() {
        let c = rainbow();
        let m = EdgeColoring::monochromatic(3, 3, 1).unwrap();
        for mode in [SymmetryMode::VertexOnly, SymmetryMode::VertexAndColor] {
            assert_ne!(canonical_key(&c, mode), canonical_key(&m, mode));
        }
    }

    #[test]
    fn color_rotation_collides_only_in_color_mode() {
        let c = rainbow();
        let d = c.recolor(&[0, 3, 1, 2]).unwrap();
        assert_eq!(canonical_key(&c, SymmetryMode::VertexAndColor), canonical_key(&d, SymmetryMode::VertexAndColor));
        // A rainbow triangle is vertex-symmetric under any recoloring anyway.
        assert_eq!(canonical_key(&c, SymmetryMode::VertexOnly), canonical_key(&d, SymmetryMode::VertexOnly));
        let p = EdgeColoring::build(3, 2, &[(0, 1, 1), (0, 2, 1), (1, 2, 2)]).unwrap();
        let q = p.recolor(&[0, 2, 1]).unwrap();
        assert_ne!(canonical_key(&p, SymmetryMode::VertexOnly), canonical_key(&q, SymmetryMode::VertexOnly));
        assert_eq!(canonical_key(&p, SymmetryMode::VertexAndColor), canonical_key(&q, SymmetryMode::VertexAndColor));
    }

    #[test]
    fn graph_keys_identify_isomorphic_patterns() {
        let a = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = SimpleGraph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        let star = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(graph_key(&a), graph_key(&b));
        assert_ne!(graph_key(&a), graph_key(&star));
        assert!(graph_key(&a).is_exact());
    }

    #[test]
    fn large_symmetric_coloring_is_exact() {
        let m = EdgeColoring::monochromatic(12, 1, 1).unwrap();
        assert!(canonical_key(&m, SymmetryMode::VertexOnly).is_exact());
        let two_blocks = EdgeColoring::from_fn(14, 2, |i, j| if (i < 7) == (j < 7) { 1 } else { 2 }).unwrap();
        assert!(canonical_key(&two_blocks, SymmetryMode::VertexAndColor).is_exact());
    }
}
