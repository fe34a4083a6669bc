//! Edge-colored complete graphs, simple graphs and color sets.
//!
//! Colors are dense 1-based ids. A coloring may use only a subset of its
//! palette `[1, ell]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Color = u8;

/// Largest palette supported; color sets are 64-bit masks indexed by color id.
pub const MAX_COLORS: usize = 63;

/// Largest vertex count for bitset-backed graphs and searches.
pub const MAX_VERTICES: usize = 64;

/// A set of colors stored as a bit mask (bit `c` set for color `c`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(pub u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn singleton(c: Color) -> Self {
        ColorSet(1u64 << c)
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1u64 << c;
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn difference(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as Color;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    pub fn to_vec(self) -> Vec<Color> {
        self.iter().collect()
    }

    /// All subsets of `self` with exactly `size` elements, in lexicographic
    /// order of their sorted color lists.
    pub fn subsets_of_size(self, size: usize) -> Vec<ColorSet> {
        let colors = self.to_vec();
        let m = colors.len();
        let mut out = Vec::new();
        if size > m {
            return out;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(ColorSet(idx.iter().fold(0, |acc, &i| acc | 1u64 << colors[i])));
            let mut i = size;
            while i > 0 && idx[i - 1] == m - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ColorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Color>::deserialize(d)?;
        if let Some(&c) = v.iter().find(|&&c| c as usize > MAX_COLORS) {
            return Err(serde::de::Error::custom(format!("color {c} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

/// An `ell`-colored complete graph on `n` vertices.
///
/// Stored as a dense symmetric matrix with zeros on the diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ColoringRepr", try_from = "ColoringRepr")]
pub struct EdgeColoring {
    n: usize,
    ell: Color,
    matrix: Vec<Color>,
}

/// Serialized form: upper-triangular rows, as in the `.gct` file format.
#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    n: usize,
    ell: usize,
    rows: Vec<Vec<Color>>,
}

impl From<EdgeColoring> for ColoringRepr {
    fn from(c: EdgeColoring) -> Self {
        let rows = (0..c.n.saturating_sub(1))
            .map(|i| (i + 1..c.n).map(|j| c.color(i, j)).collect())
            .collect();
        ColoringRepr { n: c.n, ell: c.ell as usize, rows }
    }
}

impl TryFrom<ColoringRepr> for EdgeColoring {
    type Error = Error;

    fn try_from(r: ColoringRepr) -> Result<Self> {
        if r.rows.len() != r.n.saturating_sub(1) {
            return Err(Error::Parse { line: 0, reason: "wrong number of rows".into() });
        }
        for (i, row) in r.rows.iter().enumerate() {
            if row.len() != r.n - i - 1 {
                return Err(Error::Parse { line: i, reason: "wrong row length".into() });
            }
        }
        EdgeColoring::from_fn(r.n, r.ell, |i, j| r.rows[i][j - i - 1])
    }
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeColoring(n={}, ell={}; ", self.n, self.ell)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                write!(f, "{}", self.color(i, j))?;
            }
            if i + 2 < self.n {
                write!(f, "|")?;
            }
        }
        write!(f, ")")
    }
}

fn check_palette(ell: usize) -> Result<Color> {
    if ell == 0 || ell > MAX_COLORS {
        return Err(Error::BadParameters(format!("palette size {ell} not in [1, {MAX_COLORS}]")));
    }
    Ok(ell as Color)
}

impl EdgeColoring {
    /// Builds a coloring from a list of `(u, v, color)` entries covering every
    /// pair exactly once.
    pub fn build(n: usize, ell: usize, entries: &[(usize, usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let ell_c = check_palette(ell)?;
        let mut matrix = vec![0; n * n];
        for &(u, v, c) in entries {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::BadParameters(format!("self-loop at vertex {u}")));
            }
            if c == 0 || c > ell {
                return Err(Error::ColorOutOfRange { color: c, ell });
            }
            let (a, b) = (u.min(v), u.max(v));
            if matrix[a * n + b] != 0 {
                return Err(Error::DuplicateEdge(a, b));
            }
            matrix[a * n + b] = c as Color;
            matrix[b * n + a] = c as Color;
        }
        for a in 0..n {
            for b in a + 1..n {
                if matrix[a * n + b] == 0 {
                    return Err(Error::MissingEdge(a, b));
                }
            }
        }
        Ok(EdgeColoring { n, ell: ell_c, matrix })
    }

    /// Builds a coloring from a closure called once per pair `i < j`.
    pub fn from_fn(n: usize, ell: usize, mut f: impl FnMut(usize, usize) -> Color) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let ell_c = check_palette(ell)?;
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let c = f(i, j);
                if c == 0 || c > ell_c {
                    return Err(Error::ColorOutOfRange { color: c as usize, ell });
                }
                matrix[i * n + j] = c;
                matrix[j * n + i] = c;
            }
        }
        Ok(EdgeColoring { n, ell: ell_c, matrix })
    }

    /// Single-colored complete graph.
    pub fn monochromatic(n: usize, ell: usize, color: Color) -> Result<Self> {
        Self::from_fn(n, ell, |_, _| color)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell as usize
    }

    /// Color of the pair `{u, v}`; `0` when `u == v`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Color {
        self.matrix[u * self.n + v]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Color)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.color(i, j))))
    }

    pub fn used_colors(&self) -> ColorSet {
        self.pairs().map(|(_, _, c)| c).collect()
    }

    /// Coloring induced on `set`, relabeled order-preservingly to `0..|set|`.
    pub fn induced(&self, set: &[usize]) -> Result<EdgeColoring> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&v) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        EdgeColoring::from_fn(s.len(), self.ell as usize, |i, j| self.color(s[i], s[j]))
    }

    /// Coloring induced on a vertex bitmask (requires `n <= 64`).
    pub fn induced_mask(&self, mask: u64) -> Result<EdgeColoring> {
        self.induced(&mask_to_vec(mask))
    }

    /// Graph of the edges with color `c`.
    pub fn color_class(&self, c: Color) -> Result<SimpleGraph> {
        if c == 0 || c > self.ell {
            return Err(Error::ColorOutOfRange { color: c as usize, ell: self.ell as usize });
        }
        let mut g = SimpleGraph::new(self.n)?;
        for (i, j, col) in self.pairs() {
            if col == c {
                g.add_edge(i, j);
            }
        }
        Ok(g)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> EdgeColoring {
        assert_eq!(perm.len(), self.n);
        let mut matrix = vec![0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                matrix[perm[i] * self.n + perm[j]] = self.color(i, j);
            }
        }
        EdgeColoring { n: self.n, ell: self.ell, matrix }
    }

    /// Renames colors: color `c` becomes `map[c]` (index 0 unused).
    pub fn recolor(&self, map: &[Color]) -> Result<EdgeColoring> {
        EdgeColoring::from_fn(self.n, self.ell as usize, |i, j| map[self.color(i, j) as usize])
    }

    /// Same coloring with a larger (or equal) palette.
    pub fn with_palette(&self, ell: usize) -> Result<EdgeColoring> {
        EdgeColoring::from_fn(self.n, ell, |i, j| self.color(i, j))
    }

    /// Number of edges at `v` in each color, indexed by color id.
    pub fn color_degrees(&self, v: usize) -> Vec<usize> {
        let mut d = vec![0; self.ell as usize + 1];
        for u in 0..self.n {
            if u != v {
                d[self.color(u, v) as usize] += 1;
            }
        }
        d
    }
}

pub(crate) fn mask_to_vec(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

pub(crate) fn vec_to_mask(v: &[usize]) -> u64 {
    v.iter().fold(0, |m, &x| m | 1u64 << x)
}

/// Undirected simple graph on at most [`MAX_VERTICES`] vertices, with
/// optional bipartition metadata (left side `0..left`, right side after it).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
    bipartition: Option<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bipartition: Option<(usize, usize)>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { n: self.n, edges: self.edges(), bipartition: self.bipartition }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        let g = SimpleGraph::from_edges(r.n, &r.edges).map_err(serde::de::Error::custom)?;
        match r.bipartition {
            Some((a, b)) => g.with_bipartition(a, b).map_err(serde::de::Error::custom),
            None => Ok(g),
        }
    }
}

impl SimpleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        Ok(SimpleGraph { n, adj: vec![0; n], bipartition: None })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::new(n)?;
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::BadParameters(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Attaches bipartition metadata; fails if an edge lies inside a side.
    pub fn with_bipartition(mut self, left: usize, right: usize) -> Result<Self> {
        if left + right != self.n {
            return Err(Error::BadParameters(format!(
                "sides {left}+{right} do not cover {} vertices",
                self.n
            )));
        }
        for (u, v) in self.edges() {
            if (u < left) == (v < left) {
                return Err(Error::NotBipartite);
            }
        }
        self.bipartition = Some((left, right));
        Ok(self)
    }

    /// Empty balanced bipartite graph on `left + right` vertices.
    pub fn bipartite(left: usize, right: usize) -> Result<Self> {
        SimpleGraph::new(left + right)?.with_bipartition(left, right)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bipartition(&self) -> Option<(usize, usize)> {
        self.bipartition
    }

    /// Adds `{u, v}`. Panics on out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v);
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1u64 << v);
        self.adj[v] &= !(1u64 << u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in mask_to_vec(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Vertices of the connected component containing `v`, as a mask.
    pub fn component_mask(&self, v: usize) -> u64 {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in mask_to_vec(frontier) {
                next |= self.adj[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }
}
