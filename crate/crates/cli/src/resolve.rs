//! Pattern loading and auxiliary-number resolution (flag, cache, engine).

use std::path::Path;

use gallai_core::bounds::{density_z_threshold, BoundInput, Provenance};
use gallai_core::engine::{compute_number, Cache, NumberQuery, SearchOptions};
use gallai_core::io::{read_gct, read_graph};
use gallai_core::pattern::builtin;
use gallai_core::{EdgeColoring, SimpleGraph};

use crate::CliError;

pub fn load_pattern(spec: &str) -> Result<SimpleGraph, CliError> {
    if let Some(g) = builtin(spec) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Usage(format!("pattern `{spec}` is neither a built-in name nor a readable file: {e}")))?;
    Ok(read_graph(&text)?)
}

pub fn load_coloring(path: &Path) -> Result<EdgeColoring, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_gct(&text)?)
}

/// Shared context for looking numbers up.
pub struct Resolver<'a> {
    pub cache: Option<&'a Cache>,
    pub opts: SearchOptions,
}

impl Resolver<'_> {
    /// Exact value of `q`, from the cache or a budgeted engine run.
    fn exact(&self, q: &NumberQuery) -> Result<Option<(u64, Provenance)>, CliError> {
        if let Some(cache) = self.cache {
            if let Some(v) = cache.lookup(q)?.and_then(|r| r.value.exact()) {
                return Ok(Some((v, Provenance::Cache)));
            }
        }
        let r = compute_number(q, self.opts)?;
        let Some(v) = r.value.exact() else {
            return Ok(None);
        };
        if let Some(cache) = self.cache {
            cache.store(q, &r)?;
        }
        Ok(Some((v, Provenance::Engine)))
    }

    /// `flag` if given, else `query`'s exact value shifted by `offset`.
    pub fn number(
        &self,
        name: &str,
        flag: Option<u64>,
        query: Option<NumberQuery>,
        offset: i64,
    ) -> Result<BoundInput, CliError> {
        if let Some(value) = flag {
            return Ok(BoundInput { name: name.into(), value, provenance: Provenance::User });
        }
        if let Some(q) = query {
            if let Some((v, provenance)) = self.exact(&q)? {
                let value = (v as i64 + offset).max(0) as u64;
                return Ok(BoundInput { name: name.into(), value, provenance });
            }
        }
        Err(CliError::Usage(format!(
            "could not resolve {name} from the cache or within the node budget; pass --{} explicitly",
            name.replace('_', "-")
        )))
    }

    /// Density threshold `z` for `K_{n,n}` at density `1/(2k)`.
    pub fn z(&self, flag: Option<u64>, k: u64, n: u64) -> Result<BoundInput, CliError> {
        if let Some(value) = flag {
            return Ok(BoundInput { name: "z".into(), value, provenance: Provenance::User });
        }
        let d = density_z_threshold(k, n.max(2))?;
        Ok(BoundInput { name: "z".into(), value: d.threshold, provenance: Provenance::Derived })
    }
}
