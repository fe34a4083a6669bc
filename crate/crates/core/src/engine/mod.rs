//! Budgeted exact computation of threshold numbers by witness search.

mod cache;
mod dfs;
mod run;

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::canon::graph_key;
use crate::coloring::{Color, ColorSet, EdgeColoring, SimpleGraph, MAX_COLORS, MAX_VERTICES};
use crate::constructions::star_lower_construction;
use crate::error::{Error, Result};
use crate::partition::{is_k_gallai, is_k_gallai_sampled, EXHAUSTIVE_LIMIT};
use crate::pattern::{chromatic_number, pattern_stats};
use crate::search::{find_embedding, find_knn, find_monochromatic};

pub use cache::{Cache, CacheRecord, CacheVerifyReport, GcReport, CACHE_SCHEMA, ENGINE_VERSION};

use dfs::{GallaiPrune, PatternCheck, Problem};

/// Default node budget for searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HostSpec {
    Complete { n: usize },
    BalancedBipartite { p: usize },
    Multipartite { chi: usize, p: usize },
}

impl HostSpec {
    pub fn order(&self) -> usize {
        match *self {
            HostSpec::Complete { n } => n,
            HostSpec::BalancedBipartite { p } => 2 * p,
            HostSpec::Multipartite { chi, p } => chi * p,
        }
    }

    fn part(&self, v: usize) -> usize {
        match *self {
            HostSpec::Complete { .. } => v,
            HostSpec::BalancedBipartite { p } | HostSpec::Multipartite { p, .. } => v / p,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.order() && v < self.order() && self.part(u) != self.part(v)
    }

    /// Host edges in search order: row-major for `K_{p,p}`, otherwise by
    /// larger endpoint.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            HostSpec::BalancedBipartite { p } => (0..p).flat_map(|i| (0..p).map(move |j| (i, p + j))).collect(),
            _ => {
                let n = self.order();
                (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).filter(|&(i, j)| self.has_edge(i, j)).collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let sizes_ok = match *self {
            HostSpec::Complete { n } => n >= 1,
            HostSpec::BalancedBipartite { p } => p >= 1,
            HostSpec::Multipartite { chi, p } => chi >= 1 && p >= 1,
        };
        if !sizes_ok {
            return Err(Error::BadParameters("host sizes must be at least 1".into()));
        }
        if self.order() > MAX_VERTICES {
            return Err(Error::TooManyVertices { n: self.order(), max: MAX_VERTICES });
        }
        Ok(())
    }
}

/// What an avoiding object must satisfy. Colors are always interchangeable
/// under these constraints, so color symmetry breaking is applied.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub palette: usize,
    pub forbid_mono: Option<SimpleGraph>,
    pub require_k_gallai: Option<usize>,
    /// Turns the search into a graph search on a bipartite host.
    pub forbid_knn: Option<usize>,
    /// Graph search only: minimum number of edges.
    pub min_edges: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: u64,
    /// 1 runs the sequential search.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, threads: default_threads() }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Coloring { coloring: EdgeColoring },
    HostColoring { host: HostSpec, ell: usize, edges: Vec<(usize, usize, Color)> },
    Graph { graph: SimpleGraph },
}

impl Witness {
    /// Checks the witness against constraints with the standalone verifiers.
    pub fn verify(&self, host: &HostSpec, cons: &Constraints) -> std::result::Result<(), String> {
        match self {
            Witness::Coloring { coloring } => {
                if !matches!(host, HostSpec::Complete { n } if *n == coloring.n()) {
                    return Err("coloring does not match the host".into());
                }
                if coloring.ell() > cons.palette {
                    return Err(format!("palette {} exceeds {}", coloring.ell(), cons.palette));
                }
                if let Some(h) = &cons.forbid_mono {
                    if let Some(cert) = find_monochromatic(coloring, h).map_err(|e| e.to_string())? {
                        return Err(format!("monochromatic pattern in color {:?}", cert.color));
                    }
                }
                if let Some(k) = cons.require_k_gallai {
                    if coloring.n() >= 2 {
                        let rep = if coloring.n() <= EXHAUSTIVE_LIMIT {
                            is_k_gallai(coloring, k)
                        } else {
                            is_k_gallai_sampled(coloring, k, 10_000, 0)
                        }
                        .map_err(|e| e.to_string())?;
                        if !rep.holds {
                            return Err(format!("not {k}-Gallai on {:?}", rep.failing_subset));
                        }
                    }
                }
                Ok(())
            }
            Witness::HostColoring { host: h, ell, edges } => {
                if h != host {
                    return Err("host mismatch".into());
                }
                let expected = host.edges();
                if edges.len() != expected.len() {
                    return Err("wrong number of host edges".into());
                }
                let n = host.order();
                let mut classes = vec![SimpleGraph::new(n).map_err(|e| e.to_string())?; *ell + 1];
                for &(u, v, c) in edges {
                    if !host.has_edge(u, v) {
                        return Err(format!("{u}-{v} is not a host edge"));
                    }
                    if c == 0 || c as usize > (*ell).min(cons.palette) {
                        return Err(format!("color {c} out of range"));
                    }
                    if classes.iter().any(|g| g.has_edge(u, v)) {
                        return Err(format!("edge {u}-{v} colored twice"));
                    }
                    classes[c as usize].add_edge(u, v);
                }
                if let Some(hp) = &cons.forbid_mono {
                    for (c, g) in classes.iter().enumerate().skip(1) {
                        if find_embedding(g, hp).is_some() {
                            return Err(format!("monochromatic pattern in color {c}"));
                        }
                    }
                }
                Ok(())
            }
            Witness::Graph { graph } => {
                let HostSpec::BalancedBipartite { p } = *host else {
                    return Err("graph witness needs a bipartite host".into());
                };
                if graph.bipartition() != Some((p, p)) {
                    return Err("graph does not have the host bipartition".into());
                }
                if let Some(kn) = cons.forbid_knn {
                    if find_knn(graph, kn).map_err(|e| e.to_string())?.is_some() {
                        return Err(format!("contains K_{{{kn},{kn}}}"));
                    }
                }
                if let Some(m) = cons.min_edges {
                    if graph.edge_count() < m {
                        return Err(format!("{} edges, need {m}", graph.edge_count()));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Witness(Witness),
    NoneExists,
    BudgetExceeded(u64),
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: WitnessOutcome,
    pub nodes: u64,
}

fn build_problem(host: &HostSpec, cons: &Constraints) -> Result<Problem> {
    host.validate()?;
    let graph_mode = cons.forbid_knn.is_some();
    let n = host.order();
    if graph_mode {
        if !matches!(host, HostSpec::BalancedBipartite { .. }) {
            return Err(Error::InconsistentConstraints("forbid_knn needs a balanced bipartite host".into()));
        }
        if cons.forbid_mono.is_some() || cons.require_k_gallai.is_some() {
            return Err(Error::InconsistentConstraints("graph search takes no coloring constraints".into()));
        }
        if cons.forbid_knn == Some(0) {
            return Err(Error::InconsistentConstraints("forbid_knn must be at least 1".into()));
        }
    } else {
        if cons.min_edges.is_some() {
            return Err(Error::InconsistentConstraints("min_edges applies to graph search only".into()));
        }
        if cons.palette == 0 || cons.palette > MAX_COLORS as usize {
            return Err(Error::InconsistentConstraints(format!("palette {} outside [1, {MAX_COLORS}]", cons.palette)));
        }
        if cons.require_k_gallai.is_some() && !matches!(host, HostSpec::Complete { .. }) {
            return Err(Error::InconsistentConstraints("k-Gallai requires a complete host".into()));
        }
        if cons.require_k_gallai == Some(0) {
            return Err(Error::InconsistentConstraints("k must be at least 1".into()));
        }
    }
    let edges = host.edges();
    let pattern = match &cons.forbid_mono {
        None => None,
        Some(h) => {
            let stats = pattern_stats(h)?;
            Some(match stats.star_leaves {
                Some(t) if stats.is_star => PatternCheck::Star { cap: (t - 1) as u8 },
                _ => PatternCheck::General(crate::search::EdgeAnchoredPlan::new(h)),
            })
        }
    };
    let gallai = match cons.require_k_gallai {
        Some(k) if k < cons.palette => {
            let palette = ColorSet((1..=cons.palette as u8).fold(0u64, |m, c| m | 1 << c));
            let completes = edges.iter().map(|&(i, j)| (i + 1 == j).then_some(j as u8)).collect();
            Some(GallaiPrune { combos: palette.subsets_of_size(k), completes })
        }
        _ => None,
    };
    let row_lex = match (graph_mode, host) {
        (true, HostSpec::BalancedBipartite { p }) => Some(*p),
        _ => None,
    };
    Ok(Problem {
        nverts: n,
        edges: edges.iter().map(|&(u, v)| (u as u8, v as u8)).collect(),
        graph_mode,
        palette: if graph_mode { 1 } else { cons.palette },
        symmetric: !graph_mode,
        pattern,
        gallai,
        knn: cons.forbid_knn,
        min_edges: cons.min_edges,
        row_lex,
        all: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
    })
}

fn make_witness(host: &HostSpec, cons: &Constraints, prob: &Problem, assign: &[u8]) -> Result<Witness> {
    let edges = host.edges();
    Ok(match host {
        _ if prob.graph_mode => {
            let HostSpec::BalancedBipartite { p } = *host else { unreachable!("graph mode host checked") };
            let mut g = SimpleGraph::bipartite(p, p)?;
            for (&(u, v), &a) in edges.iter().zip(assign) {
                if a == 1 {
                    g.add_edge(u, v);
                }
            }
            Witness::Graph { graph: g }
        }
        HostSpec::Complete { n } => {
            let entries: Vec<(usize, usize, usize)> =
                edges.iter().zip(assign).map(|(&(u, v), &c)| (u, v, c as usize)).collect();
            Witness::Coloring { coloring: EdgeColoring::build(*n, cons.palette, &entries)? }
        }
        _ => Witness::HostColoring {
            host: *host,
            ell: cons.palette,
            edges: edges.iter().zip(assign).map(|(&(u, v), &c)| (u, v, c)).collect(),
        },
    })
}

/// Searches for an object on `host` meeting `cons`.
///
/// The search is exhaustive up to the budget, so `NoneExists` is a proof.
/// The returned witness is the first one in sequential search order for
/// every thread count, and is re-verified before it is returned.
pub fn witness_search(host: HostSpec, cons: &Constraints, opts: SearchOptions) -> Result<SearchReport> {
    let prob = build_problem(&host, cons)?;
    let (found, nodes) = run::first_leaf(&prob, opts);
    let outcome = match found {
        run::Found::Leaf(assign) => {
            let w = make_witness(&host, cons, &prob, &assign)?;
            w.verify(&host, cons).map_err(Error::WitnessRejected)?;
            WitnessOutcome::Witness(w)
        }
        run::Found::Nothing => WitnessOutcome::NoneExists,
        run::Found::OutOfBudget => WitnessOutcome::BudgetExceeded(nodes),
    };
    Ok(SearchReport { outcome, nodes })
}

/// All avoiding objects on `host`, one per color-symmetry class (colors
/// introduced in increasing order). Used for engine/oracle agreement.
pub fn enumerate_witnesses(host: HostSpec, cons: &Constraints, budget: u64) -> Result<Option<Vec<Witness>>> {
    let prob = build_problem(&host, cons)?;
    let Some(leaves) = run::all_leaves(&prob, budget) else {
        return Ok(None);
    };
    leaves.iter().map(|a| make_witness(&host, cons, &prob, a)).collect::<Result<Vec<_>>>().map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NumberQuery {
    RamseyR { k: usize, pattern: SimpleGraph },
    BipartiteB { k: usize, pattern: SimpleGraph },
    MultipartiteM { k: usize, chi: usize, pattern: SimpleGraph },
    ZarankiewiczZ { m: usize, n: usize },
    Ggr { k: usize, ell: usize, pattern: SimpleGraph },
}

impl NumberQuery {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::BadParameters(s.into()));
        match self {
            NumberQuery::RamseyR { k, pattern } | NumberQuery::BipartiteB { k, pattern } => {
                if *k == 0 || *k > MAX_COLORS as usize {
                    return bad("k must be in [1, 63]");
                }
                let stats = pattern_stats(pattern)?;
                if matches!(self, NumberQuery::BipartiteB { .. }) && !stats.is_bipartite {
                    return Err(Error::NotBipartite);
                }
            }
            NumberQuery::MultipartiteM { k, chi, pattern } => {
                if *k == 0 || *k > MAX_COLORS as usize {
                    return bad("k must be in [1, 63]");
                }
                pattern_stats(pattern)?;
                if *chi < chromatic_number(pattern) {
                    return bad("chi is below the chromatic number of the pattern");
                }
            }
            NumberQuery::ZarankiewiczZ { m, n } => {
                if *m == 0 || *n == 0 {
                    return bad("m and n must be positive");
                }
                if 2 * m > MAX_VERTICES {
                    return Err(Error::TooManyVertices { n: 2 * m, max: MAX_VERTICES });
                }
            }
            NumberQuery::Ggr { k, ell, pattern } => {
                if *k == 0 || *ell == 0 || *ell > MAX_COLORS as usize {
                    return bad("k and ell must be positive, ell at most 63");
                }
                if k > ell {
                    return bad("ggr requires k <= ell");
                }
                pattern_stats(pattern)?;
            }
        }
        Ok(())
    }

    /// Canonical cache key; patterns enter through their canonical form.
    pub fn cache_key(&self) -> String {
        match self {
            NumberQuery::RamseyR { k, pattern } => format!("ramsey-r/k={k}/h={}", graph_key(pattern).to_hex()),
            NumberQuery::BipartiteB { k, pattern } => format!("bipartite-b/k={k}/h={}", graph_key(pattern).to_hex()),
            NumberQuery::MultipartiteM { k, chi, pattern } => {
                format!("multipartite-m/k={k}/chi={chi}/h={}", graph_key(pattern).to_hex())
            }
            NumberQuery::ZarankiewiczZ { m, n } => format!("zarankiewicz-z/m={m}/n={n}"),
            NumberQuery::Ggr { k, ell, pattern } => format!("ggr/k={k}/ell={ell}/h={}", graph_key(pattern).to_hex()),
        }
    }

    /// Host and constraints of the avoiding-object search at a size
    /// parameter (vertex count, part size, or edge count for z).
    pub fn instance(&self, size: usize) -> (HostSpec, Constraints) {
        match self {
            NumberQuery::RamseyR { k, pattern } => (
                HostSpec::Complete { n: size },
                Constraints { palette: *k, forbid_mono: Some(pattern.clone()), ..Default::default() },
            ),
            NumberQuery::BipartiteB { k, pattern } => (
                HostSpec::BalancedBipartite { p: size },
                Constraints { palette: *k, forbid_mono: Some(pattern.clone()), ..Default::default() },
            ),
            NumberQuery::MultipartiteM { k, chi, pattern } => (
                HostSpec::Multipartite { chi: *chi, p: size },
                Constraints { palette: *k, forbid_mono: Some(pattern.clone()), ..Default::default() },
            ),
            NumberQuery::ZarankiewiczZ { m, n } => (
                HostSpec::BalancedBipartite { p: *m },
                Constraints { forbid_knn: Some(*n), min_edges: Some(size), ..Default::default() },
            ),
            NumberQuery::Ggr { k, ell, pattern } => (
                HostSpec::Complete { n: size },
                Constraints {
                    palette: *ell,
                    forbid_mono: Some(pattern.clone()),
                    require_k_gallai: Some(*k),
                    ..Default::default()
                },
            ),
        }
    }

    /// Size parameter described by a witness.
    pub fn witness_size(&self, w: &Witness) -> usize {
        match (self, w) {
            (NumberQuery::ZarankiewiczZ { .. }, Witness::Graph { graph }) => graph.edge_count(),
            (_, Witness::Coloring { coloring }) => coloring.n(),
            (NumberQuery::BipartiteB { .. }, Witness::HostColoring { host, .. }) => host.order() / 2,
            (NumberQuery::MultipartiteM { chi, .. }, Witness::HostColoring { host, .. }) => host.order() / chi,
            _ => 0,
        }
    }

    /// Upper bound known in closed form, if any.
    fn known_upper(&self) -> Option<u64> {
        match self {
            NumberQuery::Ggr { k, pattern, .. } => {
                let stats = pattern_stats(pattern).ok()?;
                let t = stats.star_leaves.filter(|_| stats.is_star)?;
                Some((2 * k * (t - 1) + 1) as u64)
            }
            NumberQuery::ZarankiewiczZ { m, .. } => Some((m * m + 1) as u64),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum NumberValue {
    Exact { value: u64 },
    Interval { lo: u64, hi: Option<u64> },
}

impl NumberValue {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            NumberValue::Exact { value } => Some(value),
            NumberValue::Interval { .. } => None,
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        match *self {
            NumberValue::Exact { value } => value == x,
            NumberValue::Interval { lo, hi } => lo <= x && hi.is_none_or(|h| x <= h),
        }
    }
}

impl fmt::Display for NumberValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberValue::Exact { value } => write!(f, "Exact({value})"),
            NumberValue::Interval { lo, hi: Some(h) } => write!(f, "Interval({lo}, {h})"),
            NumberValue::Interval { lo, hi: None } => write!(f, "Interval({lo}, inf)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberResult {
    pub value: NumberValue,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
    /// Extremal object one below the threshold.
    pub witness: Option<Witness>,
    #[serde(default)]
    pub notes: Vec<String>,
}

const HEREDITARY_NOTE: &str =
    "avoidance is hereditary under induced subobjects, so refutation at the threshold implies refutation above it";

/// Computes a threshold number: sizes are tried upward from 1 and the first
/// size with no avoiding object is the value. For `ZarankiewiczZ` edge
/// counts are tried downward from `m^2` and the value is one more than the
/// largest count that is realizable.
pub fn compute_number(q: &NumberQuery, opts: SearchOptions) -> Result<NumberResult> {
    q.validate()?;
    let start = Instant::now();
    let mut result = match q {
        NumberQuery::ZarankiewiczZ { m, .. } => zarankiewicz(q, *m, opts)?,
        _ => threshold(q, opts)?,
    };
    result.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(result)
}

fn threshold(q: &NumberQuery, opts: SearchOptions) -> Result<NumberResult> {
    let mut used = 0u64;
    let mut last: Option<Witness> = None;
    let mut notes = vec![HEREDITARY_NOTE.to_string()];
    let mut size = 1;
    loop {
        let (host, cons) = q.instance(size);
        if host.order() > MAX_VERTICES {
            notes.push(format!("host at size {size} exceeds {MAX_VERTICES} vertices"));
            break;
        }
        let rep = witness_search(host, &cons, SearchOptions { budget: opts.budget.saturating_sub(used), ..opts })?;
        used += rep.nodes;
        match rep.outcome {
            WitnessOutcome::Witness(w) => last = Some(w),
            WitnessOutcome::NoneExists => {
                return Ok(NumberResult {
                    value: NumberValue::Exact { value: size as u64 },
                    nodes_explored: used,
                    wall_time_ms: 0,
                    witness: last,
                    notes,
                });
            }
            WitnessOutcome::BudgetExceeded(_) => {
                notes.push(format!("budget exhausted at size {size}"));
                break;
            }
        }
        size += 1;
    }
    let hi = q.known_upper();
    let mut lo = size as u64;
    if let Some((w, order)) = construction_witness(q)? {
        if order as u64 >= lo {
            lo = order as u64 + 1;
            last = Some(w);
            notes.push(format!("lower witness of order {order} from the star construction"));
        }
    }
    if hi.is_some() {
        notes.push("upper end from the star threshold formula".into());
    }
    Ok(NumberResult { value: NumberValue::Interval { lo, hi }, nodes_explored: used, wall_time_ms: 0, witness: last, notes })
}

/// Verified extremal coloring from the star construction for star GGR queries.
fn construction_witness(q: &NumberQuery) -> Result<Option<(Witness, usize)>> {
    let NumberQuery::Ggr { k, ell, pattern } = q else {
        return Ok(None);
    };
    let stats = pattern_stats(pattern)?;
    let Some(t) = stats.star_leaves.filter(|_| stats.is_star) else {
        return Ok(None);
    };
    if *ell < 2 * k || 2 * k * (t - 1) > MAX_VERTICES {
        return Ok(None);
    }
    let coloring = star_lower_construction(*k, t, *ell)?.coloring;
    let order = coloring.n();
    let w = Witness::Coloring { coloring };
    let (host, cons) = q.instance(order);
    w.verify(&host, &cons).map_err(Error::WitnessRejected)?;
    Ok(Some((w, order)))
}

fn zarankiewicz(q: &NumberQuery, m: usize, opts: SearchOptions) -> Result<NumberResult> {
    let mut used = 0u64;
    let notes = vec!["value is one more than the maximum edge count of a K_{n,n}-free subgraph of K_{m,m}".to_string()];
    for e in (0..=m * m).rev() {
        let (host, cons) = q.instance(e);
        let rep = witness_search(host, &cons, SearchOptions { budget: opts.budget.saturating_sub(used), ..opts })?;
        used += rep.nodes;
        match rep.outcome {
            WitnessOutcome::Witness(w) => {
                // the first realizable count is the maximum
                let edges = q.witness_size(&w);
                return Ok(NumberResult {
                    value: NumberValue::Exact { value: edges as u64 + 1 },
                    nodes_explored: used,
                    wall_time_ms: 0,
                    witness: Some(w),
                    notes,
                });
            }
            WitnessOutcome::NoneExists => {}
            WitnessOutcome::BudgetExceeded(_) => {
                let mut notes = notes;
                notes.push(format!("budget exhausted at edge count {e}"));
                return Ok(NumberResult {
                    value: NumberValue::Interval { lo: 1, hi: Some(e as u64 + 1) },
                    nodes_explored: used,
                    wall_time_ms: 0,
                    witness: None,
                    notes,
                });
            }
        }
    }
    unreachable!("the empty graph avoids every K_{{n,n}}")
}
