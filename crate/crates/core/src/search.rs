//! Witness-producing subgraph searches.
//!
//! Copies are subgraph embeddings (not induced). Searches fix pattern
//! vertices in index order and try host vertices in increasing order, so the
//! first embedding found is the lexicographically least one.

use crate::certificate::{CertKind, Certificate};
use crate::coloring::{Color, EdgeColoring, SimpleGraph};
use crate::error::{Error, Result};

/// Lexicographically least embedding of `pattern` into the host described by
/// neighbor masks `adj` on `host_n` vertices.
pub(crate) fn embed_lex_least(adj: &[u64], host_n: usize, pattern: &SimpleGraph) -> Option<Vec<usize>> {
    let h = pattern.n();
    if h > host_n {
        return None;
    }
    let pdeg: Vec<u32> = (0..h).map(|i| pattern.degree(i) as u32).collect();
    let earlier: Vec<Vec<usize>> = (0..h).map(|i| (0..i).filter(|&j| pattern.has_edge(i, j)).collect()).collect();
    let all = if host_n == 64 { u64::MAX } else { (1u64 << host_n) - 1 };
    let mut emb = Vec::with_capacity(h);
    fn go(adj: &[u64], all: u64, pdeg: &[u32], earlier: &[Vec<usize>], used: u64, emb: &mut Vec<usize>) -> bool {
        let i = emb.len();
        if i == pdeg.len() {
            return true;
        }
        let mut cand = all & !used;
        for &j in &earlier[i] {
            cand &= adj[emb[j]];
        }
        while cand != 0 {
            let x = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if adj[x].count_ones() < pdeg[i] {
                continue;
            }
            emb.push(x);
            if go(adj, all, pdeg, earlier, used | 1 << x, emb) {
                return true;
            }
            emb.pop();
        }
        false
    }
    go(adj, all, &pdeg, &earlier, 0, &mut emb).then_some(emb)
}

/// Lexicographically least embedding of `pattern` in `host`.
pub fn find_embedding(host: &SimpleGraph, pattern: &SimpleGraph) -> Option<Vec<usize>> {
    embed_lex_least(host.adjacency(), host.n(), pattern)
}

/// Pattern preprocessed for "is there a copy using this host edge" checks.
#[derive(Clone, Debug)]
pub(crate) struct EdgeAnchoredPlan {
    /// For each anchored orientation `(a, b)`: the remaining pattern vertices
    /// in extension order, each with the already-placed neighbors it needs.
    anchors: Vec<(usize, usize, Vec<(usize, Vec<usize>)>)>,
    pdeg: Vec<u32>,
}

impl EdgeAnchoredPlan {
    pub fn new(pattern: &SimpleGraph) -> Self {
        let h = pattern.n();
        let mut anchors = vec![];
        for (a, b) in pattern.edges() {
            for (x, y) in [(a, b), (b, a)] {
                let mut placed = vec![x, y];
                let mut rest = vec![];
                while placed.len() < h {
                    // most connections to placed vertices first
                    let next = (0..h)
                        .filter(|v| !placed.contains(v))
                        .max_by_key(|&v| (placed.iter().filter(|&&p| pattern.has_edge(v, p)).count(), std::cmp::Reverse(v)))
                        .expect("unplaced vertex");
                    let needs: Vec<usize> = placed.iter().copied().filter(|&p| pattern.has_edge(next, p)).collect();
                    rest.push((next, needs));
                    placed.push(next);
                }
                anchors.push((x, y, rest));
            }
        }
        EdgeAnchoredPlan { anchors, pdeg: (0..h).map(|i| pattern.degree(i) as u32).collect() }
    }

    /// Whether the host (neighbor masks `adj`, vertex mask `all`) contains a
    /// copy of the pattern that uses the edge `{u, v}`.
    pub fn contains_through(&self, adj: &[u64], all: u64, u: usize, v: usize) -> bool {
        let mut emb = [usize::MAX; 64];
        for (a, b, rest) in &self.anchors {
            if adj[u].count_ones() < self.pdeg[*a] || adj[v].count_ones() < self.pdeg[*b] {
                continue;
            }
            emb[*a] = u;
            emb[*b] = v;
            if self.extend(adj, all, rest, 0, (1u64 << u) | (1u64 << v), &mut emb) {
                return true;
            }
        }
        false
    }

    fn extend(&self, adj: &[u64], all: u64, rest: &[(usize, Vec<usize>)], i: usize, used: u64, emb: &mut [usize]) -> bool {
        if i == rest.len() {
            return true;
        }
        let (p, needs) = &rest[i];
        let mut cand = all & !used;
        for &q in needs {
            cand &= adj[emb[q]];
        }
        while cand != 0 {
            let x = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if adj[x].count_ones() < self.pdeg[*p] {
                continue;
            }
            emb[*p] = x;
            if self.extend(adj, all, rest, i + 1, used | 1 << x, emb) {
                return true;
            }
        }
        false
    }
}

/// Monochromatic copy of `h`, trying colors in increasing order.
pub fn find_monochromatic(c: &EdgeColoring, h: &SimpleGraph) -> Result<Option<Certificate>> {
    if h.edge_count() == 0 {
        return Err(Error::EmptyPattern);
    }
    for col in c.used_colors().iter() {
        let class = c.color_class(col)?;
        if class.edge_count() < h.edge_count() {
            continue;
        }
        if let Some(emb) = find_embedding(&class, h) {
            return Ok(Some(Certificate { kind: CertKind::MonoH, color: Some(col), embedding: emb }));
        }
    }
    Ok(None)
}

/// Lexicographically least rainbow triangle `(i, j, l)`, `i < j < l`.
pub fn find_rainbow_triangle(c: &EdgeColoring) -> Option<Certificate> {
    let n = c.n();
    for i in 0..n {
        for j in i + 1..n {
            let a = c.color(i, j);
            for l in j + 1..n {
                let (b, d) = (c.color(i, l), c.color(j, l));
                if a != b && a != d && b != d {
                    return Some(Certificate { kind: CertKind::RainbowTriangle, color: None, embedding: vec![i, j, l] });
                }
            }
        }
    }
    None
}

/// Rainbow triangle with a pendant edge at vertex 0 of the triangle:
/// embedding `[center, x, y, pendant]` with `x < y`.
pub fn find_rainbow_s3plus(c: &EdgeColoring) -> Option<Certificate> {
    let n = c.n();
    for center in 0..n {
        for x in 0..n {
            if x == center {
                continue;
            }
            for y in x + 1..n {
                if y == center {
                    continue;
                }
                let (a, b, d) = (c.color(center, x), c.color(center, y), c.color(x, y));
                if a == b || a == d || b == d {
                    continue;
                }
                let tri: [Color; 3] = [a, b, d];
                for p in 0..n {
                    if p == center || p == x || p == y {
                        continue;
                    }
                    if !tri.contains(&c.color(center, p)) {
                        return Some(Certificate {
                            kind: CertKind::RainbowS3plus,
                            color: None,
                            embedding: vec![center, x, y, p],
                        });
                    }
                }
            }
        }
    }
    None
}

/// `K_{n,n}` with its left side inside the left side of `b`.
pub fn find_knn(b: &SimpleGraph, n: usize) -> Result<Option<Certificate>> {
    let (left, right) = b.bipartition().ok_or(Error::NotBipartite)?;
    if n == 0 {
        return Err(Error::BadParameters("n must be at least 1".into()));
    }
    if n > left || n > right {
        return Ok(None);
    }
    let adj = b.adjacency();
    let right_all: u64 = ((1u64 << right) - 1) << left;
    let mut chosen = vec![];
    fn go(adj: &[u64], left: usize, n: usize, from: usize, common: u64, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == n {
            return true;
        }
        for l in from..left {
            if left - l < n - chosen.len() {
                break;
            }
            let c = common & adj[l];
            if (c.count_ones() as usize) < n {
                continue;
            }
            chosen.push(l);
            if go(adj, left, n, l + 1, c, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if !go(adj, left, n, 0, right_all, &mut chosen) {
        return Ok(None);
    }
    let common = chosen.iter().fold(right_all, |m, &l| m & adj[l]);
    let mut emb = chosen;
    emb.extend(crate::coloring::mask_to_vec(common).into_iter().take(n));
    Ok(Some(Certificate { kind: CertKind::MonoKnn, color: None, embedding: emb }))
}

/// Whether a `K_{n,n}` uses the edge `{u, v}` (`u` left, `v` right).
pub(crate) fn knn_through(adj: &[u64], n: usize, u: usize, v: usize) -> bool {
    fn go(adj: &[u64], n: usize, pool: u64, common: u64, size: usize) -> bool {
        if size == n {
            return true;
        }
        let mut p = pool;
        while p != 0 {
            let l = p.trailing_zeros() as usize;
            p &= p - 1;
            let c = common & adj[l];
            if (c.count_ones() as usize) >= n && go(adj, n, p, c, size + 1) {
                return true;
            }
        }
        false
    }
    let common = adj[u];
    if (common.count_ones() as usize) < n {
        return false;
    }
    go(adj, n, adj[v] & !(1u64 << u), common, 1)
}
