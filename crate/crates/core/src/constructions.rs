//! Generators for the extremal colorings, each with a declared contract that
//! the verifiers can confirm independently.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring, SimpleGraph, MAX_COLORS};
use crate::error::{Error, Result};
use crate::pattern::PatternStats;

/// A generated coloring and what it claims about itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: String,
    pub coloring: EdgeColoring,
    pub claimed_order: usize,
    pub claimed_k_gallai_for_all_k: bool,
    /// Smallest `k` for which the coloring is claimed `k`-Gallai.
    pub claimed_k_gallai_for: Option<usize>,
    pub claimed_forbidden: String,
    pub claimed_rainbow_triangle_free: bool,
    pub parameters: serde_json::Value,
}

/// Nested batches: batch `i` (1-based) joins with color `i` to everything
/// before it and among itself; batch 1 is monochromatic in color 1.
pub fn nested_construction(parts: &[usize]) -> Result<ConstructionReport> {
    if parts.is_empty() {
        return Err(Error::EmptyPartsList);
    }
    if parts.contains(&0) {
        return Err(Error::BadParameters("batch sizes must be positive".into()));
    }
    if parts.len() > MAX_COLORS {
        return Err(Error::BadParameters(format!("at most {MAX_COLORS} batches")));
    }
    let group: Vec<Color> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| std::iter::repeat((i + 1) as Color).take(p))
        .collect();
    let n = group.len();
    let coloring = EdgeColoring::from_fn(n, parts.len(), |u, v| group[u].max(group[v]))?;
    Ok(ConstructionReport {
        construction: "nested".into(),
        coloring,
        claimed_order: n,
        claimed_k_gallai_for_all_k: true,
        claimed_k_gallai_for: Some(1),
        claimed_forbidden: "rainbow triangle".into(),
        claimed_rainbow_triangle_free: true,
        parameters: serde_json::json!({ "parts": parts }),
    })
}

/// Lower-bound coloring for a bipartite non-star `H`: nested batches
/// `[n + m - 1, m - 1, ..., m - 1]` with `ell - 1` repeated parts.
pub fn bip_lower_construction(stats: &PatternStats, ell: usize) -> Result<ConstructionReport> {
    if !stats.is_bipartite {
        return Err(Error::NotBipartite);
    }
    if stats.is_star {
        return Err(Error::IsStar);
    }
    if ell == 0 {
        return Err(Error::BadParameters("ell must be positive".into()));
    }
    let m = stats.m_small.expect("bipartite stats carry sides");
    let n = stats.n_large.expect("bipartite stats carry sides");
    if m < 2 {
        return Err(Error::DegenerateSmallPart);
    }
    let mut parts = vec![n + m - 1];
    parts.extend(std::iter::repeat(m - 1).take(ell - 1));
    let mut report = nested_construction(&parts)?;
    debug_assert_eq!(report.claimed_order, n + ell * (m - 1));
    report.construction = "bip-lower".into();
    report.claimed_forbidden = "monochromatic H".into();
    report.parameters = serde_json::json!({
        "ell": ell, "m": m, "n": n, "parts": parts, "pattern": stats.pattern,
    });
    Ok(report)
}

/// Iterated blow-up: `G_1` is a monochromatic `K_{n-1}`; `G_{i+1}` joins
/// `chi - 1` copies of `G_i` completely in color `i + 1`.
pub fn blowup_construction(pattern_order: usize, chi: usize, ell: usize) -> Result<ConstructionReport> {
    if chi < 3 {
        return Err(Error::ChiTooSmall(chi));
    }
    if pattern_order < 2 || ell == 0 || ell > MAX_COLORS {
        return Err(Error::BadParameters(format!("need n >= 2 and 1 <= ell <= {MAX_COLORS}")));
    }
    let base = pattern_order - 1;
    let branch = chi - 1;
    let order = (1..ell)
        .try_fold(base, |acc, _| acc.checked_mul(branch))
        .filter(|&o| o <= 1 << 20)
        .ok_or_else(|| Error::BadParameters("blow-up order too large".into()))?;
    let coloring = EdgeColoring::from_fn(order, ell, |u, v| {
        let (mut a, mut b) = (u / base, v / base);
        if a == b {
            return 1;
        }
        // highest base-(chi-1) digit where the copy indices differ
        let mut level = 0;
        let mut last_diff = 0;
        while a != 0 || b != 0 {
            level += 1;
            if a % branch != b % branch {
                last_diff = level;
            }
            a /= branch;
            b /= branch;
        }
        (last_diff + 1) as Color
    })?;
    Ok(ConstructionReport {
        construction: "blowup".into(),
        coloring,
        claimed_order: order,
        claimed_k_gallai_for_all_k: true,
        claimed_k_gallai_for: Some(1),
        claimed_forbidden: format!("monochromatic H with |H| = {pattern_order} and chromatic number {chi}"),
        claimed_rainbow_triangle_free: true,
        parameters: serde_json::json!({ "n": pattern_order, "chi": chi, "ell": ell }),
    })
}

/// Round-robin (circle method) decomposition of `K_m` into matchings:
/// `m - 1` perfect matchings for even `m`, `m` near-perfect ones for odd `m`.
pub fn round_robin_matchings(m: usize) -> Vec<Vec<(usize, usize)>> {
    if m < 2 {
        return vec![];
    }
    let even = if m % 2 == 0 { m } else { m + 1 };
    let fixed = even - 1;
    let mut rounds = Vec::with_capacity(even - 1);
    for r in 0..fixed {
        let mut matching = vec![(r.min(fixed), r.max(fixed))];
        for i in 1..even / 2 {
            let a = (r + i) % fixed;
            let b = (r + fixed - i) % fixed;
            matching.push((a.min(b), a.max(b)));
        }
        matching.retain(|&(a, b)| a < m && b < m);
        rounds.push(matching);
    }
    rounds
}

/// Splits `K_{m,m}` (`m = k(t-1)`) into `k` spanning `(t-1)`-regular classes:
/// edge `(i, j)` goes to class `((i + j) mod m) / (t - 1)`.
pub fn regular_bipartite_factorization(m: usize, k: usize, t: usize) -> Result<Vec<SimpleGraph>> {
    if k == 0 || t < 2 || m != k * (t - 1) {
        return Err(Error::BadParameters(format!("need m = k(t-1), got m={m}, k={k}, t={t}")));
    }
    let mut classes = vec![SimpleGraph::bipartite(m, m)?; k];
    for i in 0..m {
        for j in 0..m {
            classes[((i + j) % m) / (t - 1)].add_edge(i, m + j);
        }
    }
    Ok(classes)
}

/// Two halves of order `k(t-1)`; cross edges colored `1..=k`, each color
/// `(t-1)`-regular across; inside each half, round-robin matchings bundled
/// in groups of `t - 1` get colors `k+1..`.
pub fn star_lower_construction(k: usize, t: usize, ell: usize) -> Result<ConstructionReport> {
    if k == 0 || t < 2 {
        return Err(Error::BadParameters(format!("need k >= 1 and t >= 2, got k={k}, t={t}")));
    }
    if ell < 2 * k {
        return Err(Error::PaletteTooSmall { ell, needed: 2 * k });
    }
    if ell > MAX_COLORS {
        return Err(Error::BadParameters(format!("ell > {MAX_COLORS}")));
    }
    let m = k * (t - 1);
    let cross = regular_bipartite_factorization(m, k, t)?;
    let mut inner = vec![0 as Color; m * m];
    for (r, matching) in round_robin_matchings(m).into_iter().enumerate() {
        let color = (k + 1 + r / (t - 1)) as Color;
        for (a, b) in matching {
            inner[a * m + b] = color;
            inner[b * m + a] = color;
        }
    }
    let coloring = EdgeColoring::from_fn(2 * m, ell, |u, v| {
        match (u < m, v < m) {
            (true, false) => {
                let class = cross.iter().position(|g| g.has_edge(u, v)).expect("classes cover K_{m,m}");
                (class + 1) as Color
            }
            (true, true) => inner[u * m + v],
            _ => inner[(u - m) * m + (v - m)],
        }
    })?;
    Ok(ConstructionReport {
        construction: "star-lower".into(),
        coloring,
        claimed_order: 2 * m,
        claimed_k_gallai_for_all_k: false,
        claimed_k_gallai_for: Some(k),
        claimed_forbidden: format!("monochromatic S_{t}"),
        claimed_rainbow_triangle_free: false,
        parameters: serde_json::json!({ "k": k, "t": t, "ell": ell }),
    })
}
