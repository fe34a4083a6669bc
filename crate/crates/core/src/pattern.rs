//! Target patterns `H`: built-in names and structural classification.

use serde::{Deserialize, Serialize};

use crate::coloring::{mask_to_vec, SimpleGraph};
use crate::error::{Error, Result};

/// Structural summary of a pattern graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternStats {
    pub pattern: SimpleGraph,
    pub order: usize,
    pub is_star: bool,
    pub is_bipartite: bool,
    pub chi: usize,
    /// Smaller side of the chosen bipartition (bipartite patterns only).
    pub m_small: Option<usize>,
    /// Larger side of the chosen bipartition (bipartite patterns only).
    pub n_large: Option<usize>,
    /// `true` for vertices placed on the smaller side.
    pub small_side: Option<Vec<bool>>,
    /// Number of edges when the pattern is a star.
    pub star_leaves: Option<usize>,
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "K2", "K3", "K4", "P3", "P4", "P5", "P6", "C4", "C5", "C6", "S2", "S3", "S4", "S5", "S3+",
];

pub fn complete(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n).expect("small pattern");
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j);
        }
    }
    g
}

/// Path on `n` vertices.
pub fn path(n: usize) -> SimpleGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    SimpleGraph::from_edges(n, &edges).expect("small pattern")
}

pub fn cycle(n: usize) -> SimpleGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).expect("small pattern")
}

/// Star with center `0` and `t` leaves.
pub fn star(t: usize) -> SimpleGraph {
    let edges: Vec<_> = (1..=t).map(|i| (0, i)).collect();
    SimpleGraph::from_edges(t + 1, &edges).expect("small pattern")
}

/// Triangle `0,1,2` with a pendant edge `{0,3}`.
pub fn triangle_plus_pendant() -> SimpleGraph {
    SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).expect("small pattern")
}

/// Complete bipartite `K_{a,b}` with bipartition metadata.
pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(a + b).expect("small pattern");
    for i in 0..a {
        for j in 0..b {
            g.add_edge(i, a + j);
        }
    }
    g.with_bipartition(a, b).expect("bipartite by construction")
}

/// Looks up a built-in pattern name such as `K3`, `P4`, `C6`, `S2` or `S3+`.
pub fn builtin(name: &str) -> Option<SimpleGraph> {
    if name == "S3+" {
        return Some(triangle_plus_pendant());
    }
    let (kind, size) = name.split_at(1);
    let size: usize = size.parse().ok()?;
    match kind {
        "K" if (2..=8).contains(&size) => Some(complete(size)),
        "P" if (2..=12).contains(&size) => Some(path(size)),
        "C" if (3..=12).contains(&size) => Some(cycle(size)),
        "S" if (1..=12).contains(&size) => Some(star(size)),
        _ => None,
    }
}

/// Exact chromatic number by backtracking with the current best as bound.
pub fn chromatic_number(g: &SimpleGraph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if g.edge_count() == 0 {
        return 1;
    }
    // Order by decreasing degree so dense vertices are fixed first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colors = vec![usize::MAX; n];
    let mut best = n;
    fn go(
        g: &SimpleGraph,
        order: &[usize],
        idx: usize,
        used: usize,
        colors: &mut [usize],
        best: &mut usize,
    ) {
        if used >= *best {
            return;
        }
        if idx == order.len() {
            *best = used;
            return;
        }
        let v = order[idx];
        // new color only as max+1
        for c in 0..=used {
            if c == used && used + 1 >= *best {
                break;
            }
            let clash = mask_to_vec(g.neighbors(v)).into_iter().any(|u| colors[u] == c);
            if clash {
                continue;
            }
            colors[v] = c;
            go(g, order, idx + 1, used.max(c + 1), colors, best);
            colors[v] = usize::MAX;
        }
    }
    go(g, &order, 0, 0, &mut colors, &mut best);
    best
}

/// Two-coloring of each component; `None` if some component has an odd cycle.
/// Returns per-component `(vertices on side 0, vertices on side 1)`.
fn bipartite_components(g: &SimpleGraph) -> Option<Vec<(Vec<usize>, Vec<usize>)>> {
    let n = g.n();
    let mut side = vec![u8::MAX; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        let mut parts = (vec![], vec![]);
        while let Some(v) = stack.pop() {
            if side[v] == 0 {
                parts.0.push(v);
            } else {
                parts.1.push(v);
            }
            for u in mask_to_vec(g.neighbors(v)) {
                if side[u] == u8::MAX {
                    side[u] = 1 - side[v];
                    stack.push(u);
                } else if side[u] == side[v] {
                    return None;
                }
            }
        }
        comps.push(parts);
    }
    Some(comps)
}

/// Classifies a pattern: star / bipartite non-star / chromatic number at least 3.
///
/// For bipartite patterns the smaller side is minimized over all valid
/// bipartitions, which matters only for disconnected patterns.
pub fn pattern_stats(h: &SimpleGraph) -> Result<PatternStats> {
    if h.edge_count() == 0 {
        return Err(Error::EmptyPattern);
    }
    let n = h.n();
    let chi = chromatic_number(h);
    let edges = h.edges();
    let is_star = (0..n).any(|c| edges.iter().all(|&(u, v)| u == c || v == c));
    let mut stats = PatternStats {
        pattern: h.clone(),
        order: n,
        is_star,
        is_bipartite: chi <= 2,
        chi,
        m_small: None,
        n_large: None,
        small_side: None,
        star_leaves: is_star.then_some(edges.len()),
    };
    if let Some(comps) = bipartite_components(h) {
        let mut small = vec![false; n];
        for (a, b) in comps {
            let (lo, _) = if a.len() <= b.len() { (a, b) } else { (b, a) };
            for v in lo {
                small[v] = true;
            }
        }
        let m = small.iter().filter(|&&s| s).count();
        stats.m_small = Some(m);
        stats.n_large = Some(n - m);
        stats.small_side = Some(small);
    }
    Ok(stats)
}
