//! Independent reference implementations shared by the integration tests.
//! Everything here is deliberately naive.

#![allow(dead_code)]

use gallai_core::{EdgeColoring, SimpleGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Distinct colors on edges between `a` and its complement inside `within`.
pub fn cross_colors(c: &EdgeColoring, within: &[usize], a: &[usize]) -> Vec<u8> {
    let mut out = vec![];
    for &u in a {
        for &v in within {
            if !a.contains(&v) {
                let col = c.color(u, v);
                if !out.contains(&col) {
                    out.push(col);
                }
            }
        }
    }
    out
}

/// Whether some bipartition of `set` has at most `k` cross colors.
pub fn brute_splits(c: &EdgeColoring, set: &[usize], k: usize) -> bool {
    let n = set.len();
    if n < 2 {
        return true;
    }
    // vertex set[0] always on side a
    for bits in 0..(1u64 << (n - 1)) {
        let a: Vec<usize> =
            std::iter::once(set[0]).chain((1..n).filter(|i| bits >> (i - 1) & 1 == 1).map(|i| set[i])).collect();
        if a.len() == n {
            continue;
        }
        if cross_colors(c, set, &a).len() <= k {
            return true;
        }
    }
    false
}

/// Definition-level k-Gallai check over all subsets of size at least 2.
pub fn brute_k_gallai(c: &EdgeColoring, k: usize) -> bool {
    let n = c.n();
    (0..1u64 << n).filter(|m| m.count_ones() >= 2).all(|m| {
        let set: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
        brute_splits(c, &set, k)
    })
}

/// Random k-Gallai coloring: split the vertex set at random, color the cross
/// edges from a random set of at most `k` colors, recurse on both sides.
pub fn random_k_gallai(rng: &mut impl Rng, n: usize, ell: usize, k: usize) -> EdgeColoring {
    let mut colors = vec![vec![0u8; n]; n];
    let verts: Vec<usize> = (0..n).collect();
    fill(rng, &verts, ell, k, &mut colors);
    EdgeColoring::from_fn(n, ell, |u, v| colors[u][v]).unwrap()
}

fn fill(rng: &mut impl Rng, verts: &[usize], ell: usize, k: usize, colors: &mut [Vec<u8>]) {
    if verts.len() < 2 {
        return;
    }
    let mut vs = verts.to_vec();
    vs.shuffle(rng);
    let cut = rng.gen_range(1..vs.len());
    let (a, b) = vs.split_at(cut);
    let mut palette: Vec<u8> = (1..=ell as u8).collect();
    palette.shuffle(rng);
    let kk = rng.gen_range(1..=k.min(ell));
    let allowed = &palette[..kk];
    for &u in a {
        for &v in b {
            let col = allowed[rng.gen_range(0..kk)];
            colors[u][v] = col;
            colors[v][u] = col;
        }
    }
    fill(rng, a, ell, k, colors);
    fill(rng, b, ell, k, colors);
}

/// Uniformly random coloring.
pub fn random_coloring(rng: &mut impl Rng, n: usize, ell: usize) -> EdgeColoring {
    let mut colors = vec![vec![0u8; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let col = rng.gen_range(1..=ell as u8);
            colors[u][v] = col;
            colors[v][u] = col;
        }
    }
    EdgeColoring::from_fn(n, ell, |u, v| colors[u][v]).unwrap()
}

/// Calls `f` on every coloring of `K_n` with at most `ell` colors whose colors
/// appear in first-use order along the lexicographic edge list.
pub fn for_each_color_canonical(n: usize, ell: usize, mut f: impl FnMut(&EdgeColoring)) {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut assign = vec![0u8; edges.len()];
    fn rec(
        i: usize,
        max: u8,
        n: usize,
        ell: usize,
        edges: &[(usize, usize)],
        assign: &mut [u8],
        f: &mut dyn FnMut(&EdgeColoring),
    ) {
        if i == edges.len() {
            let mut m = vec![vec![0u8; n]; n];
            for (&(u, v), &c) in edges.iter().zip(assign.iter()) {
                m[u][v] = c;
                m[v][u] = c;
            }
            f(&EdgeColoring::from_fn(n, ell, |u, v| m[u][v]).unwrap());
            return;
        }
        for c in 1..=(max + 1).min(ell as u8) {
            assign[i] = c;
            rec(i + 1, max.max(c), n, ell, edges, assign, f);
        }
    }
    rec(0, 0, n, ell, &edges, &mut assign, &mut f);
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `host` contains `pattern` as a (not necessarily induced)
/// subgraph, by trying every injection.
pub fn brute_contains(host: &SimpleGraph, pattern: &SimpleGraph) -> bool {
    let (n, p) = (host.n(), pattern.n());
    if p > n {
        return false;
    }
    let edges = pattern.edges();
    let mut img = vec![usize::MAX; p];
    let mut used = vec![false; n];
    fn rec(i: usize, host: &SimpleGraph, edges: &[(usize, usize)], img: &mut [usize], used: &mut [bool]) -> bool {
        if i == img.len() {
            return edges.iter().all(|&(a, b)| host.has_edge(img[a], img[b]));
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                img[i] = v;
                if rec(i + 1, host, edges, img, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    rec(0, host, &edges, &mut img, &mut used)
}

/// Whether some color class of `c` contains `pattern`.
pub fn brute_mono(c: &EdgeColoring, pattern: &SimpleGraph) -> bool {
    (1..=c.ell() as u8).any(|col| brute_contains(&c.color_class(col).unwrap(), pattern))
}

/// Exact z(m; n) by enumerating all bipartite graphs between two m-sets.
pub fn brute_zarankiewicz(m: usize, n: usize) -> u64 {
    let cells = m * m;
    let mut best = 0;
    for bits in 0u64..(1 << cells) {
        let e = bits.count_ones() as u64;
        if e <= best {
            continue;
        }
        let row = |i: usize| (bits >> (i * m)) & ((1 << m) - 1);
        let has_knn = subsets(m, n).iter().any(|rows| {
            let common = rows.iter().fold((1u64 << m) - 1, |acc, &r| acc & row(r));
            common.count_ones() as usize >= n
        });
        if !has_knn {
            best = e;
        }
    }
    best + 1
}

/// All `r`-subsets of `0..n`.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}
