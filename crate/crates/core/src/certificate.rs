//! Witness certificates and their validator.
//!
//! The validator reads colors straight from the host and shares no code with
//! the searches that produce certificates.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    MonoH,
    MonoKnn,
    RainbowTriangle,
    RainbowS3plus,
}

/// An embedding `pattern vertex -> host vertex` witnessing a copy.
///
/// For `MonoKnn` the embedding lists the `n` left vertices and then the
/// `n` right vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
    pub embedding: Vec<usize>,
}

fn injective_in_range(emb: &[usize], n: usize) -> Result<(), String> {
    for (i, &x) in emb.iter().enumerate() {
        if x >= n {
            return Err(format!("image {x} of pattern vertex {i} is not a host vertex"));
        }
        if emb[..i].contains(&x) {
            return Err(format!("host vertex {x} used twice"));
        }
    }
    Ok(())
}

impl Certificate {
    /// Checks a certificate against a complete colored host.
    ///
    /// `pattern` is required for `MonoH`; rainbow kinds use their fixed
    /// patterns and `MonoKnn` derives `n` from the embedding length.
    pub fn validate(&self, host: &EdgeColoring, pattern: Option<&SimpleGraph>) -> Result<(), String> {
        injective_in_range(&self.embedding, host.n())?;
        let emb = &self.embedding;
        match self.kind {
            CertKind::MonoH => {
                let h = pattern.ok_or("mono-H certificate needs the pattern")?;
                let color = self.color.ok_or("mono certificate without color")?;
                if emb.len() != h.n() {
                    return Err(format!("embedding has {} vertices, pattern {}", emb.len(), h.n()));
                }
                for a in 0..h.n() {
                    for b in a + 1..h.n() {
                        if h.has_edge(a, b) && host.color(emb[a], emb[b]) != color {
                            return Err(format!("pattern edge {a}-{b} not in color {color}"));
                        }
                    }
                }
                Ok(())
            }
            CertKind::MonoKnn => {
                let color = self.color.ok_or("mono certificate without color")?;
                if emb.len() % 2 != 0 || emb.is_empty() {
                    return Err("K_{n,n} embedding must have 2n vertices".into());
                }
                let n = emb.len() / 2;
                for &l in &emb[..n] {
                    for &r in &emb[n..] {
                        if host.color(l, r) != color {
                            return Err(format!("pair {l}-{r} not in color {color}"));
                        }
                    }
                }
                Ok(())
            }
            CertKind::RainbowTriangle | CertKind::RainbowS3plus => {
                let edges: &[(usize, usize)] = if self.kind == CertKind::RainbowTriangle {
                    &[(0, 1), (0, 2), (1, 2)]
                } else {
                    &[(0, 1), (0, 2), (1, 2), (0, 3)]
                };
                let need = if self.kind == CertKind::RainbowTriangle { 3 } else { 4 };
                if emb.len() != need {
                    return Err(format!("rainbow embedding must have {need} vertices"));
                }
                let mut seen: Vec<Color> = Vec::new();
                for &(a, b) in edges {
                    let col = host.color(emb[a], emb[b]);
                    if seen.contains(&col) {
                        return Err(format!("color {col} repeats"));
                    }
                    seen.push(col);
                }
                Ok(())
            }
        }
    }

    /// Checks a `MonoKnn` certificate against an uncolored bipartite host.
    pub fn validate_knn(&self, host: &SimpleGraph, n: usize) -> Result<(), String> {
        if self.kind != CertKind::MonoKnn {
            return Err("not a K_{n,n} certificate".into());
        }
        let (left, _) = host.bipartition().ok_or("host has no bipartition")?;
        if self.embedding.len() != 2 * n {
            return Err(format!("expected {} vertices", 2 * n));
        }
        injective_in_range(&self.embedding, host.n())?;
        let (l, r) = self.embedding.split_at(n);
        if l.iter().any(|&x| x >= left) || r.iter().any(|&x| x < left) {
            return Err("vertices on the wrong side".into());
        }
        for &a in l {
            for &b in r {
                if !host.has_edge(a, b) {
                    return Err(format!("missing edge {a}-{b}"));
                }
            }
        }
        Ok(())
    }

    /// Checks a `MonoH` embedding into an uncolored host graph.
    pub fn validate_in_graph(&self, host: &SimpleGraph, pattern: &SimpleGraph) -> Result<(), String> {
        injective_in_range(&self.embedding, host.n())?;
        if self.embedding.len() != pattern.n() {
            return Err("embedding size differs from pattern".into());
        }
        for a in 0..pattern.n() {
            for b in a + 1..pattern.n() {
                if pattern.has_edge(a, b) && !host.has_edge(self.embedding[a], self.embedding[b]) {
                    return Err(format!("pattern edge {a}-{b} missing"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_embeddings() {
        let host = EdgeColoring::build(3, 3, &[(0, 1, 1), (0, 2, 2), (1, 2, 3)]).unwrap();
        let ok = Certificate { kind: CertKind::RainbowTriangle, color: None, embedding: vec![0, 1, 2] };
        assert!(ok.validate(&host, None).is_ok());
        let dup = Certificate { embedding: vec![0, 0, 2], ..ok.clone() };
        assert!(dup.validate(&host, None).is_err());
        let mono = EdgeColoring::monochromatic(3, 1, 1).unwrap();
        assert!(ok.validate(&mono, None).is_err());
        let h = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let edge = Certificate { kind: CertKind::MonoH, color: Some(2), embedding: vec![0, 1] };
        assert!(edge.validate(&host, Some(&h)).is_err());
        let edge = Certificate { color: Some(1), ..edge };
        assert!(edge.validate(&host, Some(&h)).is_ok());
    }
}
