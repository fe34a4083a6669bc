//! G_k-partitions, the hereditary k-Gallai check, and Gallai partitions.
//!
//! Existence of a partition into at least two blocks with at most `k` cross
//! colors reduces to bipartitions: merging blocks never adds cross colors. A
//! bipartition with cross colors inside a set `CS` exists exactly when the
//! graph of edges colored outside `CS` is disconnected, so the oracle only
//! runs connectivity checks over the `k`-subsets of used colors.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{mask_to_vec, vec_to_mask, Color, ColorSet, EdgeColoring, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::search::find_rainbow_triangle;

/// Largest order accepted by the exhaustive [`is_k_gallai`].
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub cross_colors: ColorSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub cross_color_union: ColorSet,
    /// Colors between blocks `i < j`.
    #[serde(with = "pair_map")]
    pub per_pair_colors: BTreeMap<(usize, usize), ColorSet>,
    /// At most two cross colors and every block pair monochromatic.
    pub gallai_valid: bool,
    /// At most two cross colors, or at most three with every pair monochromatic.
    pub few_colors_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGallaiReport {
    pub holds: bool,
    pub failing_subset: Option<Vec<usize>>,
    pub subsets_checked: u64,
}

/// Per-color neighbor masks of a coloring on at most 64 vertices.
#[derive(Clone, Debug)]
pub(crate) struct ColorMasks {
    pub n: usize,
    pub ell: usize,
    /// `nbr[c * n + v]`: vertices joined to `v` in color `c`.
    pub nbr: Vec<u64>,
}

impl ColorMasks {
    pub fn new(c: &EdgeColoring) -> Result<Self> {
        let n = c.n();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let ell = c.ell();
        let mut nbr = vec![0u64; (ell + 1) * n];
        for (u, v, col) in c.pairs() {
            nbr[col as usize * n + u] |= 1 << v;
            nbr[col as usize * n + v] |= 1 << u;
        }
        Ok(ColorMasks { n, ell, nbr })
    }

    /// Neighbor masks of the graph keeping only colors outside `removed`.
    pub fn kept_adjacency(&self, removed: ColorSet) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for col in 1..=self.ell {
            if removed.contains(col as Color) {
                continue;
            }
            for (v, a) in adj.iter_mut().enumerate() {
                *a |= self.nbr[col * self.n + v];
            }
        }
        adj
    }

    pub fn colors_between(&self, a: u64, b: u64) -> ColorSet {
        let mut out = ColorSet::EMPTY;
        for col in 1..=self.ell {
            if mask_to_vec(a).into_iter().any(|v| self.nbr[col * self.n + v] & b != 0) {
                out.insert(col as Color);
            }
        }
        out
    }
}

/// Component of the lowest vertex of `set` under `adj`, restricted to `set`.
#[inline]
pub(crate) fn component_in(adj: &[u64], set: u64) -> u64 {
    let start = set & set.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            next |= adj[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        next &= set & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::BadParameters("k must be at least 1".into()));
    }
    Ok(())
}

/// A nontrivial bipartition with at most `k` cross colors, if one exists.
///
/// Deterministic: color subsets are tried in lexicographic order and side A
/// is the component containing vertex 0.
pub fn find_gk_bipartition(c: &EdgeColoring, k: usize) -> Result<Option<Bipartition>> {
    check_k(k)?;
    if c.n() < 2 {
        return Err(Error::TooFewVertices(c.n()));
    }
    let masks = ColorMasks::new(c)?;
    let all = if c.n() == 64 { u64::MAX } else { (1u64 << c.n()) - 1 };
    let used = c.used_colors();
    let budget = k.min(used.len());
    for cs in used.subsets_of_size(budget) {
        let adj = masks.kept_adjacency(cs);
        let side = component_in(&adj, all);
        if side != all {
            let rest = all & !side;
            return Ok(Some(Bipartition {
                side_a: mask_to_vec(side),
                side_b: mask_to_vec(rest),
                cross_colors: masks.colors_between(side, rest),
            }));
        }
    }
    Ok(None)
}

/// Precomputed connectivity structures for repeated split checks on subsets.
pub(crate) struct SplitOracle {
    kept: Vec<Vec<u64>>,
}

impl SplitOracle {
    pub fn new(masks: &ColorMasks, used: ColorSet, k: usize) -> Self {
        let budget = k.min(used.len());
        let kept = used.subsets_of_size(budget).into_iter().map(|cs| masks.kept_adjacency(cs)).collect();
        SplitOracle { kept }
    }

    /// Whether the subcoloring on `set` (at least 2 vertices) has a G_k split.
    #[inline]
    pub fn splits(&self, set: u64) -> bool {
        self.kept.iter().any(|adj| component_in(adj, set) != set)
    }
}

/// Checks every induced subcoloring on at least two vertices for a
/// nontrivial G_k-partition. Subsets are visited by increasing size, so a
/// reported failing subset is a smallest one.
pub fn is_k_gallai(c: &EdgeColoring, k: usize) -> Result<KGallaiReport> {
    check_k(k)?;
    let n = c.n();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManyVertices { n, max: EXHAUSTIVE_LIMIT });
    }
    let masks = ColorMasks::new(c)?;
    let used = c.used_colors();
    // pairs always split (one edge, one color)
    let mut checked = (n * (n - 1) / 2) as u64;
    if used.len() <= k {
        return Ok(KGallaiReport { holds: true, failing_subset: None, subsets_checked: (1u64 << n) - 1 - n as u64 });
    }
    let oracle = SplitOracle::new(&masks, used, k);
    for size in 3..=n {
        let mut set: u64 = (1u64 << size) - 1;
        let limit = 1u64 << n;
        while set < limit {
            checked += 1;
            if !oracle.splits(set) {
                return Ok(KGallaiReport { holds: false, failing_subset: Some(mask_to_vec(set)), subsets_checked: checked });
            }
            // next subset of the same size (Gosper)
            let low = set & set.wrapping_neg();
            let ripple = set + low;
            set = (((ripple ^ set) >> 2) / low) | ripple;
        }
    }
    Ok(KGallaiReport { holds: true, failing_subset: None, subsets_checked: checked })
}

/// Sampled variant for larger colorings: checks the whole vertex set and
/// `samples` random subsets. `holds = true` is evidence, not proof.
pub fn is_k_gallai_sampled(c: &EdgeColoring, k: usize, samples: usize, seed: u64) -> Result<KGallaiReport> {
    check_k(k)?;
    let n = c.n();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let masks = ColorMasks::new(c)?;
    let oracle = SplitOracle::new(&masks, c.used_colors(), k);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if !oracle.splits(all) {
        return Ok(KGallaiReport { holds: false, failing_subset: Some(mask_to_vec(all)), subsets_checked: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    for i in 0..samples {
        let size = rng.gen_range(3.min(n)..=n);
        verts.shuffle(&mut rng);
        let set = vec_to_mask(&verts[..size]);
        if set.count_ones() >= 2 && !oracle.splits(set) {
            return Ok(KGallaiReport { holds: false, failing_subset: Some(mask_to_vec(set)), subsets_checked: i as u64 + 2 });
        }
    }
    Ok(KGallaiReport { holds: true, failing_subset: None, subsets_checked: samples as u64 + 1 })
}

mod pair_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::coloring::ColorSet;

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), ColorSet>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(&(i, j), &c)| (i, j, c)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), ColorSet>, D::Error> {
        let v: Vec<(usize, usize, ColorSet)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(i, j, c)| ((i, j), c)).collect())
    }
}

/// Cross-color accounting for a partition.
pub fn verify_partition(c: &EdgeColoring, p: &VertexPartition) -> Result<PartitionReport> {
    let n = c.n();
    if p.blocks.len() < 2 {
        return Err(Error::InvalidPartition("fewer than two blocks".into()));
    }
    let mut owner = vec![usize::MAX; n];
    for (b, block) in p.blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPartition(format!("block {b} is empty")));
        }
        for &v in block {
            if v >= n {
                return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
            }
            if owner[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!("vertex {v} in two blocks")));
            }
            owner[v] = b;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
    }
    let mut per_pair: BTreeMap<(usize, usize), ColorSet> = BTreeMap::new();
    for i in 0..p.blocks.len() {
        for j in i + 1..p.blocks.len() {
            per_pair.insert((i, j), ColorSet::EMPTY);
        }
    }
    for (u, v, col) in c.pairs() {
        let (a, b) = (owner[u], owner[v]);
        if a != b {
            per_pair.get_mut(&(a.min(b), a.max(b))).expect("pair present").insert(col);
        }
    }
    let union = per_pair.values().fold(ColorSet::EMPTY, |acc, &s| acc.union(s));
    let all_mono = per_pair.values().all(|s| s.len() == 1);
    Ok(PartitionReport {
        cross_color_union: union,
        per_pair_colors: per_pair,
        gallai_valid: union.len() <= 2 && all_mono,
        few_colors_valid: union.len() <= 2 || (union.len() <= 3 && all_mono),
    })
}

/// Finds a partition with at most two cross colors and monochromatic block
/// pairs. Errors with the witness if the coloring has a rainbow triangle.
pub fn find_gallai_partition(c: &EdgeColoring) -> Result<VertexPartition> {
    let n = c.n();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if let Some(cert) = find_rainbow_triangle(c) {
        let e = &cert.embedding;
        return Err(Error::RainbowTriangleFound(e[0], e[1], e[2]));
    }
    let masks = ColorMasks::new(c)?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let used = c.used_colors();
    let pairs = if used.len() <= 2 { vec![used] } else { used.subsets_of_size(2) };
    // finest candidate wins; ties go to the earliest color pair
    let mut best: Option<VertexPartition> = None;
    for pair in pairs {
        let adj = masks.kept_adjacency(pair);
        let mut blocks = vec![];
        let mut rest = all;
        while rest != 0 {
            let comp = component_in(&adj, rest);
            blocks.push(comp);
            rest &= !comp;
        }
        // merge non-monochromatic pairs until every pair is monochromatic
        'merge: loop {
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    if masks.colors_between(blocks[i], blocks[j]).len() > 1 {
                        blocks[i] |= blocks[j];
                        blocks.remove(j);
                        continue 'merge;
                    }
                }
            }
            break;
        }
        if blocks.len() >= 2 {
            blocks.sort_by_key(|b| b.trailing_zeros());
            let p = VertexPartition { blocks: blocks.into_iter().map(mask_to_vec).collect() };
            if best.as_ref().is_none_or(|b| b.blocks.len() < p.blocks.len()) && verify_partition(c, &p)?.gallai_valid {
                best = Some(p);
            }
        }
    }
    if let Some(p) = best {
        return Ok(p);
    }
    if n <= 10 {
        if let Some(p) = exhaustive_gallai_partition(c) {
            return Ok(p);
        }
    }
    Err(Error::NotFound)
}

fn exhaustive_gallai_partition(c: &EdgeColoring) -> Option<VertexPartition> {
    let n = c.n();
    let mut assign = vec![0usize; n];
    fn go(c: &EdgeColoring, v: usize, blocks: usize, assign: &mut [usize]) -> Option<VertexPartition> {
        let n = c.n();
        if v == n {
            if blocks < 2 {
                return None;
            }
            let mut bl = vec![vec![]; blocks];
            for (u, &b) in assign.iter().enumerate() {
                bl[b].push(u);
            }
            let p = VertexPartition { blocks: bl };
            return verify_partition(c, &p).ok().filter(|r| r.gallai_valid).map(|_| p);
        }
        for b in 0..=blocks {
            assign[v] = b;
            if let Some(p) = go(c, v + 1, blocks.max(b + 1), assign) {
                return Some(p);
            }
        }
        None
    }
    go(c, 0, 0, &mut assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::nested_construction;

    fn rainbow() -> EdgeColoring {
        EdgeColoring::build(3, 3, &[(0, 1, 1), (0, 2, 2), (1, 2, 3)]).unwrap()
    }

    #[test]
    fn rainbow_bipartitions() {
        let b = find_gk_bipartition(&rainbow(), 2).unwrap().unwrap();
        assert_eq!((b.side_a, b.side_b), (vec![0], vec![1, 2]));
        assert_eq!(b.cross_colors.len(), 2);
        assert_eq!(find_gk_bipartition(&rainbow(), 1).unwrap(), None);
    }

    #[test]
    fn nested_two_two_splits_on_color_two() {
        let c = nested_construction(&[2, 2]).unwrap().coloring;
        let b = find_gk_bipartition(&c, 1).unwrap().unwrap();
        assert_eq!((b.side_a, b.side_b), (vec![0, 1], vec![2, 3]));
        assert_eq!(b.cross_colors.to_vec(), vec![2]);
    }

    #[test]
    fn too_few_vertices() {
        let c = EdgeColoring::monochromatic(1, 1, 1).unwrap();
        assert_eq!(find_gk_bipartition(&c, 1), Err(Error::TooFewVertices(1)));
        assert_eq!(is_k_gallai(&c, 1), Err(Error::TooFewVertices(1)));
    }

    #[test]
    fn rainbow_k_gallai() {
        let r = is_k_gallai(&rainbow(), 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.subsets_checked, 4);
        let r = is_k_gallai(&rainbow(), 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing_subset, Some(vec![0, 1, 2]));
    }

    #[test]
    fn nested_is_one_gallai() {
        for parts in [vec![1, 1, 1], vec![3, 1, 1], vec![2, 3, 1, 2]] {
            let c = nested_construction(&parts).unwrap().coloring;
            assert!(is_k_gallai(&c, 1).unwrap().holds, "{parts:?}");
        }
    }

    #[test]
    fn gallai_partitions() {
        let mono = EdgeColoring::monochromatic(4, 1, 1).unwrap();
        let p = find_gallai_partition(&mono).unwrap();
        assert_eq!(p.blocks, vec![vec![0], vec![1], vec![2], vec![3]]);
        let c = nested_construction(&[3, 1, 1]).unwrap().coloring;
        let p = find_gallai_partition(&c).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3], vec![4]]);
        let r = verify_partition(&c, &p).unwrap();
        assert_eq!(r.cross_color_union.to_vec(), vec![2, 3]);
        assert_eq!(r.per_pair_colors[&(0, 1)].to_vec(), vec![2]);
        assert_eq!(r.per_pair_colors[&(0, 2)].to_vec(), vec![3]);
        assert_eq!(r.per_pair_colors[&(1, 2)].to_vec(), vec![3]);
        assert_eq!(find_gallai_partition(&rainbow()), Err(Error::RainbowTriangleFound(0, 1, 2)));
    }

    #[test]
    fn verify_partition_flags() {
        let mono = EdgeColoring::monochromatic(4, 1, 1).unwrap();
        let r = verify_partition(&mono, &VertexPartition { blocks: vec![vec![0, 1], vec![2, 3]] }).unwrap();
        assert_eq!(r.cross_color_union.to_vec(), vec![1]);
        assert!(r.gallai_valid);

        let singles = VertexPartition { blocks: vec![vec![0], vec![1], vec![2]] };
        let r = verify_partition(&rainbow(), &singles).unwrap();
        assert_eq!(r.cross_color_union.len(), 3);
        assert!(!r.gallai_valid && r.few_colors_valid);

        let split = VertexPartition { blocks: vec![vec![0], vec![1, 2]] };
        let r = verify_partition(&rainbow(), &split).unwrap();
        assert_eq!(r.cross_color_union.len(), 2);
        assert!(!r.gallai_valid && r.few_colors_valid);

        let bad = VertexPartition { blocks: vec![vec![0], vec![0, 1, 2]] };
        assert!(matches!(verify_partition(&rainbow(), &bad), Err(Error::InvalidPartition(_))));
        let short = VertexPartition { blocks: vec![vec![0, 1]] };
        assert!(matches!(verify_partition(&rainbow(), &short), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn sampled_check_agrees_on_small_failure() {
        let r = is_k_gallai_sampled(&rainbow(), 1, 10, 7).unwrap();
        assert!(!r.holds);
    }
}
