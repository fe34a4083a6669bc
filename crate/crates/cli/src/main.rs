//! `gallai`: command-line workbench for k-Gallai colorings.
//!
//! Exit codes: 0 answer produced, 1 a requested property was refuted,
//! 2 usage or input error, 3 node budget exhausted.

mod resolve;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gallai_core::bounds::{
    compare_zarankiewicz, density_z_threshold, mainbip_bounds, mainbip_discrepancy, mainnonbip_bounds,
    mainnonbip_discrepancy, star_bounds, zarankiewicz_upper, BipParams, BoundInput, NonBipParams, Provenance,
};
use gallai_core::constructions::{
    bip_lower_construction, blowup_construction, nested_construction, star_lower_construction, ConstructionReport,
};
use gallai_core::engine::{compute_number, Cache, NumberQuery, NumberValue, SearchOptions, DEFAULT_BUDGET};
use gallai_core::extract::{extract_bipartite, extract_nonbip, extract_star, BipAux};
use gallai_core::io::{read_graph, write_gct};
use gallai_core::partition::{
    find_gallai_partition, find_gk_bipartition, is_k_gallai, is_k_gallai_sampled, verify_partition, EXHAUSTIVE_LIMIT,
};
use gallai_core::pattern::pattern_stats;
use gallai_core::search::{find_knn, find_monochromatic, find_rainbow_s3plus, find_rainbow_triangle};
use gallai_core::Error;

use resolve::{load_coloring, load_pattern, Resolver};

/// Version stamped into every JSON record.
const OUTPUT_SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    Refuted = 1,
    Usage = 2,
    Budget = 3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "gallai", version, about = "Workbench for k-Gallai edge colorings of complete graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Number cache (JSON lines).
    #[arg(long, global = true, env = "GALLAI_CACHE")]
    cache: Option<PathBuf>,
    /// Node budget for engine searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for engine searches (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an extremal coloring (.gct) with a JSON sidecar report.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check k-Gallai, Gallai-partition and rainbow properties of a coloring.
    Verify(VerifyArgs),
    /// Search a coloring (or bipartite graph) for a certificate.
    Search(SearchArgs),
    /// Compute a threshold number with the exact engine.
    Number(NumberArgs),
    /// Evaluate a closed-form bound.
    Bounds(BoundsArgs),
    /// Run a constructive argument on a coloring.
    Extract(ExtractArgs),
    /// Inspect or maintain the number cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct OutFile {
    /// Output .gct path; a report is written next to it with extension .json.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Nested batches, e.g. --parts 3,1,1.
    Nested {
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
        #[command(flatten)]
        out: OutFile,
    },
    /// Lower-bound coloring for a bipartite non-star pattern.
    Bip {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: OutFile,
    },
    /// Iterated blow-up for patterns of order n and chromatic number chi.
    Blowup {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        chi: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: OutFile,
    },
    /// Lower-bound coloring for stars S_t.
    Star {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: OutFile,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyExpect {
    KGallai,
    Gallai,
    NoRainbowTriangle,
    NoRainbowS3plus,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    /// Check the k-Gallai property and report a G_k bipartition.
    #[arg(long)]
    k: Option<usize>,
    /// Find and verify a Gallai partition.
    #[arg(long)]
    gallai_partition: bool,
    /// Look for rainbow triangles and rainbow S3+.
    #[arg(long)]
    rainbow: bool,
    /// Exit 1 if this property fails.
    #[arg(long, value_enum)]
    expect: Option<VerifyExpect>,
    /// Random subsets to check instead of all (required above 16 vertices).
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SearchExpect {
    Found,
    Absent,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["pattern", "rainbow_triangle", "rainbow_s3plus", "knn"])))]
struct SearchArgs {
    /// A .gct coloring, or a .g graph with --knn.
    file: PathBuf,
    /// Monochromatic copy of a pattern (built-in name or .g file).
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    rainbow_triangle: bool,
    #[arg(long)]
    rainbow_s3plus: bool,
    /// K_{n,n} in a bipartite graph; needs --left.
    #[arg(long)]
    knn: Option<usize>,
    /// Size of the left side of the bipartite graph.
    #[arg(long)]
    left: Option<usize>,
    #[arg(long, value_enum)]
    expect: Option<SearchExpect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NumberKind {
    #[value(alias = "r")]
    RamseyR,
    #[value(alias = "b")]
    BipartiteB,
    #[value(alias = "m")]
    MultipartiteM,
    #[value(alias = "z")]
    ZarankiewiczZ,
    Ggr,
}

#[derive(Args, Debug)]
struct NumberArgs {
    #[arg(long, value_enum)]
    kind: NumberKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    chi: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Formula {
    Zarankiewicz,
    Star,
    Bip,
    Nonbip,
    DensityZ,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    formula: Formula,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    ell: Option<u64>,
    /// Smaller side (bipartite) or host side size (Zarankiewicz).
    #[arg(long)]
    m: Option<u64>,
    /// Larger side (bipartite), pattern order (non-bipartite) or K_{n,n} size.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    chi: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    z: Option<u64>,
    #[arg(long)]
    m_k: Option<u64>,
    /// Pattern to derive m, n, chi from and to resolve t, b, m_k for.
    #[arg(long)]
    pattern: Option<String>,
    /// Exact z(m; n) to compare the Zarankiewicz bound against.
    #[arg(long)]
    exact: Option<u64>,
    /// Also report the vertex count the argument starts from.
    #[arg(long)]
    proof_order: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Proof {
    Star,
    Bip,
    Nonbip,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[arg(long, value_enum)]
    proof: Proof,
    file: PathBuf,
    #[arg(long)]
    k: usize,
    /// Star size for --proof star.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    z: Option<u64>,
    #[arg(long)]
    m_k: Option<u64>,
    /// Exit 1 unless a certificate is produced.
    #[arg(long)]
    expect_certificate: bool,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    List,
    Verify,
    Gc,
}

struct Ctx {
    format: Format,
    cache: Option<Cache>,
    opts: SearchOptions,
}

impl Ctx {
    fn emit(&self, mut record: Value, human: impl FnOnce() -> String) {
        match self.format {
            Format::Json => {
                if let Value::Object(map) = &mut record {
                    map.insert("schema".into(), json!(OUTPUT_SCHEMA));
                }
                out(&serde_json::to_string_pretty(&record).expect("values serialize"));
            }
            Format::Human => out(&human()),
        }
    }

    fn resolver(&self) -> Resolver<'_> {
        Resolver { cache: self.cache.as_ref(), opts: self.opts }
    }
}

/// Prints a line, ignoring a closed pipe.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        format: cli.format,
        cache: cli.cache.as_ref().map(Cache::new),
        opts: SearchOptions {
            budget: cli.budget,
            threads: cli.threads.map_or_else(gallai_core::engine::default_threads, |t| t as usize),
        },
    };
    let code = match run(cli.command, &ctx) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            Exit::Usage
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::PreconditionViolated(_) => Exit::Refuted,
                _ => Exit::Usage,
            }
        }
    };
    ExitCode::from(code as u8)
}

fn run(cmd: Command, ctx: &Ctx) -> Result<Exit, CliError> {
    match cmd {
        Command::Gen { kind } => gen(kind, ctx),
        Command::Verify(a) => verify(a, ctx),
        Command::Search(a) => search(a, ctx),
        Command::Number(a) => number(a, ctx),
        Command::Bounds(a) => bounds(a, ctx),
        Command::Extract(a) => extract(a, ctx),
        Command::Cache { action } => cache_admin(action, ctx),
    }
}

fn gen(kind: GenKind, ctx: &Ctx) -> Result<Exit, CliError> {
    let (report, dest): (ConstructionReport, OutFile) = match kind {
        GenKind::Nested { parts, out } => (nested_construction(&parts)?, out),
        GenKind::Bip { pattern, ell, out } => (bip_lower_construction(&pattern_stats(&load_pattern(&pattern)?)?, ell)?, out),
        GenKind::Blowup { n, chi, ell, out } => (blowup_construction(n, chi, ell)?, out),
        GenKind::Star { k, t, ell, out } => (star_lower_construction(k, t, ell)?, out),
    };
    let gct = write_gct(&report.coloring);
    let sidecar = json!({
        "construction": report.construction,
        "claimed_order": report.claimed_order,
        "claimed_k_gallai_for_all_k": report.claimed_k_gallai_for_all_k,
        "claimed_k_gallai_for": report.claimed_k_gallai_for,
        "claimed_forbidden": report.claimed_forbidden,
        "claimed_rainbow_triangle_free": report.claimed_rainbow_triangle_free,
        "parameters": report.parameters,
        "n": report.coloring.n(),
        "ell": report.coloring.ell(),
    });
    let Some(path) = dest.output else {
        out(gct.trim_end());
        return Ok(Exit::Ok);
    };
    write_file(&path, &gct)?;
    let side = path.with_extension("json");
    let mut side_rec = sidecar.clone();
    side_rec["schema"] = json!(OUTPUT_SCHEMA);
    write_file(&side, &(serde_json::to_string_pretty(&side_rec).expect("values serialize") + "\n"))?;
    let mut rec = sidecar;
    rec["output"] = json!(path);
    rec["report"] = json!(side);
    ctx.emit(rec, || {
        format!("wrote {} ({} vertices, {} colors) and {}", path.display(), report.coloring.n(), report.coloring.ell(), side.display())
    });
    Ok(Exit::Ok)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn verify(a: VerifyArgs, ctx: &Ctx) -> Result<Exit, CliError> {
    let c = load_coloring(&a.file)?;
    let mut rec = json!({ "file": a.file, "n": c.n(), "ell": c.ell(), "used_colors": c.used_colors() });
    let mut lines = vec![format!("{}: {} vertices, {} colors", a.file.display(), c.n(), c.ell())];
    let mut refuted = false;
    if a.expect == Some(VerifyExpect::KGallai) && a.k.is_none() {
        return Err(CliError::Usage("--expect k-gallai needs --k".into()));
    }
    if let Some(k) = a.k {
        if c.n() >= 2 {
            let (rep, method) = match a.sample {
                Some(samples) => (is_k_gallai_sampled(&c, k, samples, a.seed)?, "sampled"),
                None if c.n() > EXHAUSTIVE_LIMIT => {
                    return Err(CliError::Usage(format!(
                        "exhaustive k-Gallai check is limited to {EXHAUSTIVE_LIMIT} vertices; pass --sample N"
                    )));
                }
                None => (is_k_gallai(&c, k)?, "exhaustive"),
            };
            let split = find_gk_bipartition(&c, k)?;
            lines.push(format!("{k}-Gallai ({method}): {}", rep.holds));
            if let Some(s) = &rep.failing_subset {
                lines.push(format!("  no split on {s:?}"));
            }
            if let Some(b) = &split {
                lines.push(format!("  split {:?} | {:?} cross colors {:?}", b.side_a, b.side_b, b.cross_colors.to_vec()));
            }
            rec["k"] = json!(k);
            rec["k_gallai"] = json!({ "method": method, "report": to_value(&rep) });
            rec["gk_bipartition"] = to_value(&split);
            refuted |= a.expect == Some(VerifyExpect::KGallai) && !rep.holds;
        }
    }
    if a.gallai_partition || a.expect == Some(VerifyExpect::Gallai) {
        match find_gallai_partition(&c) {
            Ok(p) => {
                let r = verify_partition(&c, &p)?;
                lines.push(format!("Gallai partition {:?}, cross colors {:?}", p.blocks, r.cross_color_union.to_vec()));
                rec["gallai_partition"] = json!({ "partition": to_value(&p), "report": to_value(&r) });
            }
            Err(Error::RainbowTriangleFound(x, y, z)) => {
                lines.push(format!("no Gallai partition: rainbow triangle ({x}, {y}, {z})"));
                rec["gallai_partition"] = json!({ "rainbow_triangle": [x, y, z] });
                refuted |= a.expect == Some(VerifyExpect::Gallai);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let want_rainbow = a.rainbow || matches!(a.expect, Some(VerifyExpect::NoRainbowTriangle | VerifyExpect::NoRainbowS3plus));
    if want_rainbow {
        let tri = find_rainbow_triangle(&c);
        let s3 = find_rainbow_s3plus(&c);
        lines.push(format!("rainbow triangle: {:?}", tri.as_ref().map(|x| &x.embedding)));
        lines.push(format!("rainbow S3+: {:?}", s3.as_ref().map(|x| &x.embedding)));
        refuted |= a.expect == Some(VerifyExpect::NoRainbowTriangle) && tri.is_some();
        refuted |= a.expect == Some(VerifyExpect::NoRainbowS3plus) && s3.is_some();
        rec["rainbow_triangle"] = to_value(&tri);
        rec["rainbow_s3plus"] = to_value(&s3);
    }
    rec["expectation_met"] = json!(a.expect.map(|_| !refuted));
    ctx.emit(rec, || lines.join("\n"));
    Ok(if refuted { Exit::Refuted } else { Exit::Ok })
}

fn search(a: SearchArgs, ctx: &Ctx) -> Result<Exit, CliError> {
    let (what, cert) = if let Some(n) = a.knn {
        let text = std::fs::read_to_string(&a.file)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.file.display())))?;
        let g = read_graph(&text)?;
        let left = a.left.ok_or_else(|| CliError::Usage("--knn needs --left".into()))?;
        if left > g.n() {
            return Err(CliError::Usage("--left exceeds the vertex count".into()));
        }
        let right = g.n() - left;
        let g = g.with_bipartition(left, right)?;
        (format!("K_{{{n},{n}}}"), find_knn(&g, n)?)
    } else {
        let c = load_coloring(&a.file)?;
        if let Some(p) = &a.pattern {
            (format!("monochromatic {p}"), find_monochromatic(&c, &load_pattern(p)?)?)
        } else if a.rainbow_triangle {
            ("rainbow triangle".into(), find_rainbow_triangle(&c))
        } else {
            ("rainbow S3+".into(), find_rainbow_s3plus(&c))
        }
    };
    let found = cert.is_some();
    let rec = json!({ "file": a.file, "target": what, "found": found, "certificate": to_value(&cert) });
    ctx.emit(rec, || match &cert {
        Some(c) => format!("{what}: found, color {:?}, vertices {:?}", c.color, c.embedding),
        None => format!("{what}: none"),
    });
    let refuted = matches!((a.expect, found), (Some(SearchExpect::Found), false) | (Some(SearchExpect::Absent), true));
    Ok(if refuted { Exit::Refuted } else { Exit::Ok })
}

fn need<T>(x: Option<T>, flag: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn number(a: NumberArgs, ctx: &Ctx) -> Result<Exit, CliError> {
    let pattern = || -> Result<_, CliError> { load_pattern(&need(a.pattern.clone(), "pattern")?) };
    let q = match a.kind {
        NumberKind::RamseyR => NumberQuery::RamseyR { k: need(a.k, "k")?, pattern: pattern()? },
        NumberKind::BipartiteB => NumberQuery::BipartiteB { k: need(a.k, "k")?, pattern: pattern()? },
        NumberKind::MultipartiteM => {
            NumberQuery::MultipartiteM { k: need(a.k, "k")?, chi: need(a.chi, "chi")?, pattern: pattern()? }
        }
        NumberKind::ZarankiewiczZ => NumberQuery::ZarankiewiczZ { m: need(a.m, "m")?, n: need(a.n, "n")? },
        NumberKind::Ggr => NumberQuery::Ggr { k: need(a.k, "k")?, ell: need(a.ell, "ell")?, pattern: pattern()? },
    };
    q.validate()?;
    let cached = match &ctx.cache {
        Some(cache) => cache.lookup(&q)?,
        None => None,
    };
    let (result, source) = match cached {
        Some(r) if r.value.exact().is_some() => (r, "cache"),
        _ => {
            let r = compute_number(&q, ctx.opts)?;
            if let Some(cache) = &ctx.cache {
                cache.store(&q, &r)?;
            }
            (r, "engine")
        }
    };
    let rec = json!({ "key": q.cache_key(), "query": to_value(&q), "source": source, "result": to_value(&result) });
    ctx.emit(rec, || {
        let mut s = format!("{}", result.value);
        s.push_str(&format!("\n  {} nodes, {} ms, from {source}", result.nodes_explored, result.wall_time_ms));
        for n in &result.notes {
            s.push_str(&format!("\n  note: {n}"));
        }
        s
    });
    Ok(match result.value {
        NumberValue::Exact { .. } => Exit::Ok,
        NumberValue::Interval { .. } => Exit::Budget,
    })
}

fn bounds(a: BoundsArgs, ctx: &Ctx) -> Result<Exit, CliError> {
    let res = ctx.resolver();
    let stats = a.pattern.as_deref().map(load_pattern).transpose()?.map(|p| pattern_stats(&p)).transpose()?;
    let (mut rec, human) = match a.formula {
        Formula::Zarankiewicz => {
            let (m, n) = (need(a.m, "m")?, need(a.n, "n")?);
            let value = zarankiewicz_upper(m, n)?;
            let mut rec = json!({ "formula_id": "zarankiewicz-upper", "m": m, "n": n, "upper": value, "upper_ceiling": value.ceil() as u64 });
            let mut human = format!("z({m};{n}) < {value:.9}");
            if let Some(exact) = a.exact {
                let cmp = compare_zarankiewicz(m, n, exact)?;
                if let Some(w) = &cmp.warning {
                    human.push_str(&format!("\nwarning: {w}"));
                }
                rec["comparison"] = to_value(&cmp);
            }
            (rec, human)
        }
        Formula::Star => {
            let r = star_bounds(need(a.k, "k")?, need(a.t, "t")?)?;
            let human = format!("ggr(S_t) = {}", r.upper);
            (to_value(&r), human)
        }
        Formula::DensityZ => {
            let d = density_z_threshold(need(a.k, "k")?, need(a.n, "n")?)?;
            let human = format!("z = {} ({})", d.threshold, d.flag);
            (to_value(&d), human)
        }
        Formula::Bip => {
            let (k, ell) = (need(a.k, "k")?, need(a.ell, "ell")?);
            let m = a.m.or(stats.as_ref().and_then(|s| s.m_small).map(|x| x as u64));
            let n = a.n.or(stats.as_ref().and_then(|s| s.n_large).map(|x| x as u64));
            let (m, n) = (need(m, "m")?, need(n, "n")?);
            let h = stats.as_ref().map(|s| s.pattern.clone());
            let kk = k as usize;
            let t = res.number("t", a.t, h.clone().map(|p| NumberQuery::RamseyR { k: kk, pattern: p }), -1)?;
            let b = res.number("b", a.b, h.map(|p| NumberQuery::BipartiteB { k: kk, pattern: p }), 0)?;
            let z = res.z(a.z, k, n)?;
            let p = BipParams { k, ell, m, n, t: t.value, b: b.value, z: z.value };
            let mut r = mainbip_bounds(p)?;
            let derived = derived_inputs(&[("m", a.m), ("n", a.n)]);
            set_provenance(&mut r.inputs, &[&[t, b, z][..], &derived].concat());
            let mut human = format!("{} < ggr <= {}", r.lower, r.upper);
            let mut rec = to_value(&r);
            if a.proof_order {
                let d = mainbip_discrepancy(p)?;
                human.push_str(&format!("\nstatement upper {}, proof starts from {}: {}", d.statement_upper, d.proof_order, d.note));
                rec["statement_vs_proof"] = to_value(&d);
            }
            (rec, human)
        }
        Formula::Nonbip => {
            let (k, ell) = (need(a.k, "k")?, need(a.ell, "ell")?);
            let n = need(a.n.or(stats.as_ref().map(|s| s.order as u64)), "n")?;
            let chi = need(a.chi.or(stats.as_ref().map(|s| s.chi as u64)), "chi")?;
            let h = stats.as_ref().map(|s| s.pattern.clone());
            let kk = k as usize;
            let t = res.number("t", a.t, h.clone().map(|p| NumberQuery::RamseyR { k: kk, pattern: p }), -1)?;
            let mk = res.number(
                "m_k",
                a.m_k,
                h.map(|p| NumberQuery::MultipartiteM { k: kk, chi: chi as usize, pattern: p }),
                0,
            )?;
            let p = NonBipParams { k, ell, n, chi, t: t.value, m_k: mk.value };
            let mut r = mainnonbip_bounds(p)?;
            let derived = derived_inputs(&[("n", a.n), ("chi", a.chi)]);
            set_provenance(&mut r.inputs, &[&[t, mk][..], &derived].concat());
            let mut human = format!("{} < ggr <= {}", r.lower, r.upper);
            let mut rec = to_value(&r);
            if a.proof_order {
                let d = mainnonbip_discrepancy(p)?;
                human.push_str(&format!("\nstatement upper {}, proof starts from {}: {}", d.statement_upper, d.proof_order, d.note));
                rec["statement_vs_proof"] = to_value(&d);
            }
            (rec, human)
        }
    };
    rec["formula"] = to_value(&a.formula.to_possible_value().map(|v| v.get_name().to_string()));
    ctx.emit(rec, || human);
    Ok(Exit::Ok)
}

/// Inputs not given as flags, which were read off the pattern.
fn derived_inputs(flags: &[(&str, Option<u64>)]) -> Vec<BoundInput> {
    flags
        .iter()
        .filter(|(_, f)| f.is_none())
        .map(|(name, _)| BoundInput { name: name.to_string(), value: 0, provenance: Provenance::Derived })
        .collect()
}

fn set_provenance(inputs: &mut [BoundInput], resolved: &[BoundInput]) {
    for r in resolved {
        if let Some(i) = inputs.iter_mut().find(|i| i.name == r.name) {
            i.provenance = r.provenance;
        }
    }
}

fn extract(a: ExtractArgs, ctx: &Ctx) -> Result<Exit, CliError> {
    let c = load_coloring(&a.file)?;
    let res = ctx.resolver();
    let (rec, has_cert, human) = match a.proof {
        Proof::Star => {
            let t = need(a.t, "t")? as usize;
            let (cert, trace) = extract_star(&c, a.k, t)?;
            let human = format!("S_{t} centered at {} in color {:?}: leaves {:?}", trace.chosen_vertex, cert.color, trace.leaves);
            (json!({ "proof": "star", "certificate": to_value(&cert), "trace": to_value(&trace) }), true, human)
        }
        Proof::Bip => {
            let stats = pattern_stats(&load_pattern(&need(a.pattern.clone(), "pattern")?)?)?;
            let h = stats.pattern.clone();
            let t = res.number("t", a.t, Some(NumberQuery::RamseyR { k: a.k, pattern: h.clone() }), -1)?;
            let b = res.number("b", a.b, Some(NumberQuery::BipartiteB { k: a.k, pattern: h }), 0)?;
            let z = res.z(a.z, a.k as u64, stats.n_large.unwrap_or(2) as u64)?;
            let aux = BipAux { t: t.value as usize, b: b.value as usize, z: z.value as usize };
            let trace = extract_bipartite(&c, a.k, &stats, aux)?;
            let human = match (&trace.final_certificate, &trace.failure_step) {
                (Some(cert), _) => format!("certificate in color {:?}: {:?}", cert.color, cert.embedding),
                (None, Some(f)) => format!("no certificate; {} failed: {}", f.step, f.reason),
                (None, None) => "no certificate".into(),
            };
            let has = trace.final_certificate.is_some();
            (json!({ "proof": "bip", "aux": [t, b, z], "trace": to_value(&trace) }), has, human)
        }
        Proof::Nonbip => {
            let stats = pattern_stats(&load_pattern(&need(a.pattern.clone(), "pattern")?)?)?;
            let mk = res.number(
                "m_k",
                a.m_k,
                Some(NumberQuery::MultipartiteM { k: a.k, chi: stats.chi, pattern: stats.pattern.clone() }),
                0,
            )?;
            let trace = extract_nonbip(&c, a.k, &stats, mk.value as usize)?;
            let human = match (&trace.final_certificate, &trace.failure_step) {
                (Some(cert), _) => format!("certificate in color {:?}: {:?}", cert.color, cert.embedding),
                (None, Some(f)) => format!("no certificate; {} failed: {}", f.step, f.reason),
                (None, None) => "no certificate".into(),
            };
            let has = trace.final_certificate.is_some();
            (json!({ "proof": "nonbip", "aux": [mk], "trace": to_value(&trace) }), has, human)
        }
    };
    ctx.emit(rec, || human);
    Ok(if a.expect_certificate && !has_cert { Exit::Refuted } else { Exit::Ok })
}

fn cache_admin(action: CacheAction, ctx: &Ctx) -> Result<Exit, CliError> {
    let cache = ctx.cache.as_ref().ok_or_else(|| CliError::Usage("no cache: pass --cache or set GALLAI_CACHE".into()))?;
    match action {
        CacheAction::List => {
            let recs = cache.list()?;
            let human = recs
                .iter()
                .map(|(line, r)| format!("{line}: {} = {}", r.key, r.result.value))
                .collect::<Vec<_>>()
                .join("\n");
            let records: Vec<Value> =
                recs.iter().map(|(line, r)| json!({ "line": line, "key": r.key, "value": to_value(&r.result.value) })).collect();
            ctx.emit(json!({ "records": records }), || if human.is_empty() { "cache is empty".into() } else { human });
            Ok(Exit::Ok)
        }
        CacheAction::Verify => {
            let rep = cache.verify()?;
            let ok = rep.failures.is_empty();
            ctx.emit(to_value(&rep), || {
                let mut s = format!("{} records, {} failures", rep.records, rep.failures.len());
                for (line, key, reason) in &rep.failures {
                    s.push_str(&format!("\n  line {line} {key}: {reason}"));
                }
                s
            });
            Ok(if ok { Exit::Ok } else { Exit::Refuted })
        }
        CacheAction::Gc => {
            let rep = cache.gc()?;
            ctx.emit(to_value(&rep), || {
                format!(
                    "kept {}, dropped {} corrupt and {} superseded lines",
                    rep.kept, rep.dropped_corrupt, rep.dropped_superseded
                )
            });
            Ok(Exit::Ok)
        }
    }
}
