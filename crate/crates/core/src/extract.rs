//! Constructive upper-bound arguments run as algorithms: each extractor
//! either returns a validated monochromatic certificate or a trace that
//! records the step whose hypothesis failed.

use serde::{Deserialize, Serialize};

use crate::certificate::{CertKind, Certificate};
use crate::coloring::{Color, ColorSet, EdgeColoring, SimpleGraph};
use crate::error::{Error, Result};
use crate::partition::{find_gk_bipartition, is_k_gallai, Bipartition, EXHAUSTIVE_LIMIT};
use crate::pattern::{star, PatternStats};
use crate::search::{find_embedding, find_knn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureStep {
    pub step: String,
    pub reason: String,
}

fn failure(step: impl Into<String>, reason: impl Into<String>) -> Option<FailureStep> {
    Some(FailureStep { step: step.into(), reason: reason.into() })
}

fn check_k_gallai(c: &EdgeColoring, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::BadParameters("k must be at least 1".into()));
    }
    if c.n() < 2 {
        return Err(Error::PreconditionViolated(format!("coloring has {} vertices", c.n())));
    }
    if c.n() <= EXHAUSTIVE_LIMIT {
        let rep = is_k_gallai(c, k)?;
        if !rep.holds {
            return Err(Error::PreconditionViolated(format!(
                "coloring is not {k}-Gallai: subset {:?} has no split",
                rep.failing_subset.unwrap_or_default()
            )));
        }
    }
    Ok(())
}

/// Oracle bipartition of the subcoloring on `core`, in host vertex ids.
fn split_core(c: &EdgeColoring, core: &[usize], k: usize) -> Result<Option<Bipartition>> {
    let sub = c.induced(core)?;
    Ok(find_gk_bipartition(&sub, k)?.map(|b| Bipartition {
        side_a: b.side_a.iter().map(|&i| core[i]).collect(),
        side_b: b.side_b.iter().map(|&i| core[i]).collect(),
        cross_colors: b.cross_colors,
    }))
}

/// Larger side; ties go to the second side.
fn larger_side(b: &Bipartition) -> (Vec<usize>, Vec<usize>) {
    if b.side_a.len() > b.side_b.len() {
        (b.side_a.clone(), b.side_b.clone())
    } else {
        (b.side_b.clone(), b.side_a.clone())
    }
}

/// Graph of `color` edges between `left` and `right` on the host's vertices.
fn color_between(c: &EdgeColoring, color: Color, left: &[usize], right: &[usize]) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::new(c.n())?;
    for &u in left {
        for &v in right {
            if u != v && c.color(u, v) == color {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

fn validated(c: &EdgeColoring, pattern: &SimpleGraph, color: Color, embedding: Vec<usize>) -> Result<Certificate> {
    let cert = Certificate { kind: CertKind::MonoH, color: Some(color), embedding };
    cert.validate(c, Some(pattern)).map_err(|e| Error::WitnessRejected(e))?;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarTrace {
    pub partition_used: Bipartition,
    pub smallest_part: Vec<usize>,
    pub chosen_vertex: usize,
    pub pigeonholed_color: Color,
    /// Edges from the chosen vertex to the other side, per color.
    pub color_counts: Vec<(Color, usize)>,
    pub leaves: Vec<usize>,
}

impl StarTrace {
    /// Re-checks the recorded step against the coloring.
    pub fn verify(&self, c: &EdgeColoring, t: usize) -> std::result::Result<(), String> {
        let v = self.chosen_vertex;
        if !self.smallest_part.contains(&v) {
            return Err("chosen vertex outside the smallest part".into());
        }
        if self.leaves.len() != t {
            return Err(format!("{} leaves, expected {t}", self.leaves.len()));
        }
        for &x in &self.leaves {
            if self.smallest_part.contains(&x) || c.color(v, x) != self.pigeonholed_color {
                return Err(format!("leaf {x} is not a cross neighbor in the chosen color"));
            }
        }
        let count = self.color_counts.iter().find(|(col, _)| *col == self.pigeonholed_color).map_or(0, |p| p.1);
        if count < t {
            return Err("pigeonholed color count below t".into());
        }
        Ok(())
    }
}

/// Monochromatic `S_t` in a k-Gallai coloring on at least `2k(t-1)+1`
/// vertices: the smallest side of a split has a vertex with at least
/// `k(t-1)+1` cross edges in at most `k` colors.
pub fn extract_star(c: &EdgeColoring, k: usize, t: usize) -> Result<(Certificate, StarTrace)> {
    if t == 0 {
        return Err(Error::BadParameters("t must be at least 1".into()));
    }
    let need = 2 * k * (t - 1) + 1;
    if c.n() < need {
        return Err(Error::PreconditionViolated(format!("{} vertices, need at least {need}", c.n())));
    }
    check_k_gallai(c, k)?;
    let part = find_gk_bipartition(c, k)?.ok_or(Error::PartitionNotFound)?;
    let (small, other) = if part.side_a.len() <= part.side_b.len() {
        (&part.side_a, &part.side_b)
    } else {
        (&part.side_b, &part.side_a)
    };
    let v = small[0];
    let mut counts = vec![0usize; c.ell() + 1];
    for &x in other {
        counts[c.color(v, x) as usize] += 1;
    }
    let color = (1..=c.ell()).max_by_key(|&col| (counts[col], std::cmp::Reverse(col))).expect("palette is non-empty");
    if counts[color] < t {
        return Err(Error::PartitionNotFound);
    }
    let color = color as Color;
    let leaves: Vec<usize> = other.iter().copied().filter(|&x| c.color(v, x) == color).take(t).collect();
    let mut emb = vec![v];
    emb.extend(&leaves);
    let cert = validated(c, &star(t), color, emb)?;
    let trace = StarTrace {
        partition_used: part.clone(),
        smallest_part: small.clone(),
        chosen_vertex: v,
        pigeonholed_color: color,
        color_counts: (1..=c.ell()).filter(|&col| counts[col] > 0).map(|col| (col as Color, counts[col])).collect(),
        leaves,
    };
    Ok((cert, trace))
}

/// Auxiliary numbers for the bipartite argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipAux {
    /// `R_k(H) - 1`.
    pub t: usize,
    /// `k`-color bipartite Ramsey number of `H`.
    pub b: usize,
    /// Density threshold for `K_{n,n}` at density `1/(2k)`.
    pub z: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peel {
    pub vertex: usize,
    pub color: Color,
    /// Edges in `color` from the vertex to the core it was peeled from.
    pub count: usize,
    pub core_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipTrace {
    /// Cores `H_1 ⊇ H_2 ⊇ ...`, each the larger side of a split of the previous.
    pub nested_parts: Vec<Vec<usize>>,
    pub peeled: Vec<Peel>,
    /// `(z - 1) * ell`.
    pub s: usize,
    /// Edges from each peeled vertex to the final core in its own color.
    pub final_counts: Vec<(usize, usize)>,
    pub z_set: Vec<usize>,
    pub z_color: Option<Color>,
    /// `cross`, `knn` or `direct`, naming the search that produced the certificate.
    pub found_by: Option<String>,
    pub final_certificate: Option<Certificate>,
    pub failure_step: Option<FailureStep>,
}

impl BipTrace {
    /// Replays the extraction and compares, then re-validates any certificate.
    pub fn verify(&self, c: &EdgeColoring, k: usize, stats: &PatternStats, aux: BipAux) -> std::result::Result<(), String> {
        let again = extract_bipartite(c, k, stats, aux).map_err(|e| e.to_string())?;
        if &again != self {
            return Err("replay differs from the recorded trace".into());
        }
        for (i, p) in self.peeled.iter().enumerate() {
            let core = &self.nested_parts[i];
            if core.contains(&p.vertex) {
                return Err(format!("peeled vertex {} lies in the next core", p.vertex));
            }
            let count = core.iter().filter(|&&x| c.color(p.vertex, x) == p.color).count();
            if count != p.count || count * k < core.len() {
                return Err(format!("color count for peeled vertex {} is wrong", p.vertex));
            }
        }
        if let Some(cert) = &self.final_certificate {
            cert.validate(c, Some(&stats.pattern))?;
        }
        Ok(())
    }
}

/// Runs the bipartite-pattern argument: split, search the cross graph when
/// the smaller side has at least `b` vertices, otherwise peel a vertex and
/// recurse into the larger side; after `s + 1` peels, pigeonhole `z`
/// same-colored peeled vertices and search between them and the core.
pub fn extract_bipartite(c: &EdgeColoring, k: usize, stats: &PatternStats, aux: BipAux) -> Result<BipTrace> {
    if !stats.is_bipartite || stats.is_star {
        return Err(Error::PreconditionViolated("pattern must be bipartite and not a star".into()));
    }
    if aux.z == 0 || aux.b == 0 {
        return Err(Error::BadParameters("b and z must be positive".into()));
    }
    check_k_gallai(c, k)?;
    let h = &stats.pattern;
    let s = (aux.z - 1) * c.ell();
    let mut trace = BipTrace {
        nested_parts: vec![],
        peeled: vec![],
        s,
        final_counts: vec![],
        z_set: vec![],
        z_color: None,
        found_by: None,
        final_certificate: None,
        failure_step: None,
    };
    let mut core: Vec<usize> = (0..c.n()).collect();
    for step in 1..=s + 1 {
        if core.len() < 2 {
            trace.failure_step = failure(format!("split {step}"), format!("core has {} vertices", core.len()));
            return Ok(trace);
        }
        let Some(part) = split_core(c, &core, k)? else {
            return Err(Error::PreconditionViolated("a core has no G_k split".into()));
        };
        let (large, rest) = larger_side(&part);
        trace.nested_parts.push(large.clone());
        if rest.len() >= aux.b {
            for col in part.cross_colors.iter() {
                let g = color_between(c, col, &large, &rest)?;
                if let Some(emb) = find_embedding(&g, h) {
                    trace.final_certificate = Some(validated(c, h, col, emb)?);
                    trace.found_by = Some("cross".into());
                    return Ok(trace);
                }
            }
            trace.failure_step = failure(
                format!("cross search {step}"),
                format!("{} vertices outside the larger side but no monochromatic copy between the sides", rest.len()),
            );
            return Ok(trace);
        }
        let v = rest[0];
        let mut counts = vec![0usize; c.ell() + 1];
        for &x in &large {
            counts[c.color(v, x) as usize] += 1;
        }
        let color = (1..=c.ell()).max_by_key(|&col| (counts[col], std::cmp::Reverse(col))).expect("palette is non-empty");
        trace.peeled.push(Peel { vertex: v, color: color as Color, count: counts[color], core_size: large.len() });
        core = large;
    }
    // pigeonhole among peeled vertices dense enough toward the final core
    let mut by_color: Vec<Vec<usize>> = vec![vec![]; c.ell() + 1];
    for p in &trace.peeled {
        let count = core.iter().filter(|&&x| c.color(p.vertex, x) == p.color).count();
        trace.final_counts.push((p.vertex, count));
        if 2 * k * count >= core.len() {
            by_color[p.color as usize].push(p.vertex);
        }
    }
    let red = (1..=c.ell()).max_by_key(|&col| (by_color[col].len(), std::cmp::Reverse(col))).expect("palette is non-empty");
    if by_color[red].len() < aux.z {
        trace.failure_step = failure(
            "pigeonhole",
            format!("only {} dense peeled vertices share a color, need z = {}", by_color[red].len(), aux.z),
        );
        return Ok(trace);
    }
    let red_c = red as Color;
    trace.z_set = by_color[red][..aux.z].to_vec();
    trace.z_color = Some(red_c);
    let n_large = stats.n_large.expect("bipartite stats carry sides");
    let small_side = stats.small_side.as_ref().expect("bipartite stats carry sides");
    // K_{n,n} between Z and the core, with Z relabeled to the left side
    let zl = trace.z_set.len();
    let mut bg = SimpleGraph::bipartite(zl, core.len())?;
    for (i, &zv) in trace.z_set.iter().enumerate() {
        for (j, &x) in core.iter().enumerate() {
            if c.color(zv, x) == red_c {
                bg.add_edge(i, zl + j);
            }
        }
    }
    if let Some(knn) = find_knn(&bg, n_large)? {
        let host_of = |i: usize| if i < zl { trace.z_set[i] } else { core[i - zl] };
        let (left, right) = knn.embedding.split_at(n_large);
        let (mut li, mut ri) = (0, 0);
        let mut emb = vec![0; h.n()];
        for (p, slot) in emb.iter_mut().enumerate() {
            if small_side[p] {
                *slot = host_of(left[li]);
                li += 1;
            } else {
                *slot = host_of(right[ri]);
                ri += 1;
            }
        }
        trace.final_certificate = Some(validated(c, h, red_c, emb)?);
        trace.found_by = Some("knn".into());
        return Ok(trace);
    }
    let g = color_between(c, red_c, &trace.z_set, &core)?;
    if let Some(emb) = find_embedding(&g, h) {
        trace.final_certificate = Some(validated(c, h, red_c, emb)?);
        trace.found_by = Some("direct".into());
        return Ok(trace);
    }
    trace.failure_step = failure(
        "final search",
        format!("no monochromatic copy between Z and a core of {} vertices in color {red}", core.len()),
    );
    Ok(trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillRule {
    /// A part with at least `m` vertices; an empty set is preferred.
    LargePart,
    /// Parts with fewer than `m` vertices; a set that already has vertices
    /// is preferred.
    SmallRemainder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillAction {
    pub part: Vec<usize>,
    pub rule: FillRule,
    /// `(color set index, slot)` of the set that received vertices.
    pub target: Option<(usize, usize)>,
    pub placed: Vec<usize>,
    pub wasted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBipIteration {
    pub core_size: usize,
    pub partition: Bipartition,
    pub color_set_index: usize,
    pub color_set: ColorSet,
    pub largest: Vec<usize>,
    pub actions: Vec<FillAction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSet {
    pub color_set_index: usize,
    pub slot: usize,
    pub vertices: Vec<usize>,
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBipTrace {
    pub color_sets: Vec<ColorSet>,
    pub iterations: Vec<NonBipIteration>,
    /// Non-empty sets only.
    pub t_sets: Vec<TSet>,
    pub wasted: usize,
    pub final_certificate: Option<Certificate>,
    pub failure_step: Option<FailureStep>,
    pub notes: Vec<String>,
}

impl NonBipTrace {
    /// Replays the extraction and compares, then re-checks set sizes and any
    /// certificate.
    pub fn verify(&self, c: &EdgeColoring, k: usize, stats: &PatternStats, m: usize) -> std::result::Result<(), String> {
        let again = extract_nonbip(c, k, stats, m).map_err(|e| e.to_string())?;
        if &again != self {
            return Err("replay differs from the recorded trace".into());
        }
        for t in &self.t_sets {
            if t.full != (t.vertices.len() == m) || t.vertices.len() > m {
                return Err(format!("set ({}, {}) has inconsistent size", t.color_set_index, t.slot));
            }
        }
        for it in &self.iterations {
            for a in &it.actions {
                if a.placed.iter().any(|v| !a.part.contains(v)) || a.placed.len() + a.wasted != a.part.len() {
                    return Err("fill action does not account for its part".into());
                }
                if it.largest.iter().any(|v| a.part.contains(v)) {
                    return Err("fill action uses the largest part".into());
                }
            }
        }
        if let Some(cert) = &self.final_certificate {
            cert.validate(c, Some(&stats.pattern))?;
        }
        Ok(())
    }
}

/// Runs the non-bipartite argument: iterated splitting, filling sets
/// `T_{i,j}` (indexed by the split's color `k`-set) from the smaller side,
/// and once all `chi - 1` sets for one color set are full, searching the
/// complete multipartite structure they form with `m` core vertices.
pub fn extract_nonbip(c: &EdgeColoring, k: usize, stats: &PatternStats, m: usize) -> Result<NonBipTrace> {
    if stats.chi < 3 {
        return Err(Error::PreconditionViolated("pattern must have chromatic number at least 3".into()));
    }
    if m == 0 {
        return Err(Error::BadParameters("m must be positive".into()));
    }
    check_k_gallai(c, k)?;
    let h = &stats.pattern;
    let slots = stats.chi - 1;
    let palette = ColorSet((1..=c.ell() as u8).fold(0u64, |acc, col| acc | 1 << col));
    let color_sets = palette.subsets_of_size(k.min(c.ell()));
    let mut sets: Vec<Vec<Vec<usize>>> = vec![vec![vec![]; slots]; color_sets.len()];
    let mut trace = NonBipTrace {
        color_sets: color_sets.clone(),
        iterations: vec![],
        t_sets: vec![],
        wasted: 0,
        final_certificate: None,
        failure_step: None,
        notes: vec![],
    };
    let finish = |trace: &mut NonBipTrace, sets: &[Vec<Vec<usize>>]| {
        trace.t_sets = sets
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().filter(|(_, v)| !v.is_empty()).map(move |(j, v)| TSet {
                    color_set_index: i,
                    slot: j,
                    vertices: v.clone(),
                    full: v.len() == m,
                })
            })
            .collect();
    };
    let mut core: Vec<usize> = (0..c.n()).collect();
    let mut round = 0;
    loop {
        round += 1;
        if core.len() < 2 {
            trace.failure_step = failure(format!("split {round}"), format!("core has {} vertices", core.len()));
            break;
        }
        let Some(part) = split_core(c, &core, k)? else {
            return Err(Error::PreconditionViolated("a core has no G_k split".into()));
        };
        let i = color_sets
            .iter()
            .position(|cs| part.cross_colors.is_subset(*cs))
            .expect("cross colors fit in some k-set");
        let (large, rest) = larger_side(&part);
        let row = &mut sets[i];
        let mut action = FillAction { part: rest.clone(), rule: FillRule::LargePart, target: None, placed: vec![], wasted: 0 };
        let pick = if rest.len() >= m {
            row.iter().position(|s| s.is_empty()).or_else(|| row.iter().position(|s| s.len() < m))
        } else {
            action.rule = FillRule::SmallRemainder;
            if !trace.notes.iter().any(|n| n.starts_with("small remainder")) {
                trace.notes.push(
                    "small remainder placed preferring a partially filled set over an empty one, the reverse of the large-part rule"
                        .into(),
                );
            }
            row.iter().position(|s| !s.is_empty() && s.len() < m).or_else(|| row.iter().position(|s| s.is_empty()))
        };
        if let Some(j) = pick {
            let room = m - row[j].len();
            let placed: Vec<usize> = rest.iter().copied().take(room).collect();
            row[j].extend(&placed);
            action.target = Some((i, j));
            action.wasted = rest.len() - placed.len();
            action.placed = placed;
        } else {
            action.wasted = rest.len();
        }
        trace.wasted += action.wasted;
        trace.iterations.push(NonBipIteration {
            core_size: core.len(),
            partition: part.clone(),
            color_set_index: i,
            color_set: color_sets[i],
            largest: large.clone(),
            actions: vec![action],
        });
        core = large;
        if sets[i].iter().all(|s| s.len() == m) {
            if core.len() < m {
                trace.failure_step =
                    failure("multipartite search", format!("sets full but the core has {} < m vertices", core.len()));
                break;
            }
            let mut parts: Vec<Vec<usize>> = sets[i].clone();
            parts.push(core[..m].to_vec());
            for col in color_sets[i].iter() {
                let mut g = SimpleGraph::new(c.n())?;
                for (a, pa) in parts.iter().enumerate() {
                    for pb in &parts[a + 1..] {
                        for &u in pa {
                            for &v in pb {
                                if c.color(u, v) == col {
                                    g.add_edge(u, v);
                                }
                            }
                        }
                    }
                }
                if let Some(emb) = find_embedding(&g, h) {
                    trace.final_certificate = Some(validated(c, h, col, emb)?);
                    break;
                }
            }
            if trace.final_certificate.is_none() {
                trace.failure_step = failure(
                    "multipartite search",
                    format!("no monochromatic copy in the multipartite structure for color set {i}"),
                );
            }
            break;
        }
    }
    finish(&mut trace, &sets);
    Ok(trace)
}
