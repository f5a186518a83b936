use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sidonkit::constructions::{self, SidonBase};
use sidonkit::randomsim::{self, PGrid, SweepResult};
use sidonkit::{io as famio, oracle, verifier, Family, KSet};

#[derive(Parser)]
#[command(name = "sidonkit", version, about = "Sidon systems of k-sets: construct, verify, search and simulate")]
struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true, env = "SIDONKIT_THREADS")]
    threads: Option<usize>,
    /// output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// write the main output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    K2,
    K3,
    K4,
    B2g,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    Golomb,
    ErdosTuran,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal family and write it in the family text format
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u32,
        /// set size for k4 and b2g
        #[arg(long)]
        k: Option<usize>,
        /// representation bound for b2g (even)
        #[arg(long)]
        g: Option<u32>,
        /// Sidon base set for k4
        #[arg(long, value_enum, default_value = "golomb")]
        base: Base,
    },
    /// Check that a family file is a Sidon system (exit 2 if not)
    Verify {
        file: PathBuf,
        /// print at most this many collision lines
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check the B_h[g] property of a family file (exit 2 if it fails)
    BhgVerify {
        file: PathBuf,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        g: u64,
    },
    /// Exact F_k(n) by exhaustive search
    ExactFk {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        /// split the search tree across workers
        #[arg(long)]
        parallel: bool,
    },
    /// All sumset equalities among zero-anchored 3-sets of [0, n]
    Enum3 {
        #[arg(long)]
        n: u32,
        /// print at most this many records
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Classify the 3-set equalities of [0, n] by base family (exit 2 if any
    /// record is unclassified)
    Classify3 {
        #[arg(long)]
        n: u32,
    },
    /// Canonical violation counts |C(ell)| of the complete system
    CountCl {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long)]
        k: usize,
    },
    /// Sidon probability of random systems over a p grid
    Sweep(SweepArgs),
    /// B_h[1] probability of random systems over a p grid
    BhSweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = 3)]
        h: usize,
    },
    /// Three representations of one sumset by pairs of 4-sets
    Multirep {
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        parts: Vec<u32>,
    },
    /// Upper bound C(n-1, k-1) + n - k on F_k(n)
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// comma separated list of n
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long)]
    k: usize,
    /// a single inclusion probability instead of a grid
    #[arg(long, conflicts_with_all = ["p_min", "p_max"])]
    p: Option<f64>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    /// number of grid points
    #[arg(long, default_value_t = 9)]
    grid: usize,
    /// read --p-min/--p-max as multiples of the threshold scale n^(-e)
    #[arg(long)]
    relative: bool,
    #[arg(long, default_value_t = 400)]
    samples: u64,
    #[arg(long)]
    seed: u64,
}

impl SweepArgs {
    fn grid(&self) -> Result<PGrid> {
        if let Some(p) = self.p {
            if self.relative {
                return Ok(PGrid::Scaled { c_min: p, c_max: p, points: 1 });
            }
            return Ok(PGrid::Absolute { p_min: p, p_max: p, points: 1 });
        }
        let (lo, hi) = match (self.p_min, self.p_max, self.relative) {
            (Some(lo), Some(hi), _) => (lo, hi),
            (None, None, true) => (0.25, 8.0),
            _ => bail!("give --p, or both --p-min and --p-max, or --relative for the default scaled grid"),
        };
        Ok(if self.relative {
            PGrid::Scaled { c_min: lo, c_max: hi, points: self.grid }
        } else {
            PGrid::Absolute { p_min: lo, p_max: hi, points: self.grid }
        })
    }
}

struct Ctx {
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn sets_json(f: &Family) -> serde_json::Value {
    json!(f.iter().map(|s| s.elements().to_vec()).collect::<Vec<_>>())
}

fn construct(ctx: &Ctx, kind: Kind, n: u32, k: Option<usize>, g: Option<u32>, base: Base) -> Result<u8> {
    let (f, label) = match kind {
        Kind::K2 => (constructions::construct_k2(n)?, "k2".to_string()),
        Kind::K3 => (constructions::construct_k3(n)?, "k3".to_string()),
        Kind::K4 => {
            let k = k.context("--k is required for --kind k4")?;
            if k < 3 {
                bail!("--kind k4 needs k >= 3");
            }
            let b = match base {
                Base::Golomb => SidonBase::golomb(k)?,
                Base::ErdosTuran => constructions::erdos_turan_sidon(k)?,
            };
            (constructions::construct_k4(n, k, Some(&b))?, format!("k4 k={k} base={b}"))
        }
        Kind::B2g => {
            let k = k.context("--k is required for --kind b2g")?;
            let g = g.context("--g is required for --kind b2g")?;
            (constructions::construct_b2g(n, k, g)?, format!("b2g k={k} g={g}"))
        }
    };
    let mut w = ctx.writer()?;
    match ctx.format(Format::Text) {
        Format::Json => writeln!(w, "{}", json!({"construction": label, "n": f.n(), "k": f.k(), "size": f.len(), "sets": sets_json(&f)}))?,
        Format::Text => {
            let comments = vec![
                format!("construction: {label} n={n}"),
                format!("sidonkit {}", env!("CARGO_PKG_VERSION")),
                format!("size: {}", f.len()),
            ];
            w.write_all(famio::format_family(&f, &comments).as_bytes())?;
        }
        Format::Csv => bail!("construct writes text or json"),
    }
    w.flush()?;
    Ok(0)
}

fn verify(ctx: &Ctx, file: &PathBuf, cap: Option<usize>) -> Result<u8> {
    let f = famio::read_family(file).with_context(|| format!("reading {}", file.display()))?;
    let collisions = verifier::find_collisions(&f);
    let mut w = ctx.writer()?;
    if collisions.is_empty() {
        writeln!(w, "{}", json!({"sidon": true, "n": f.n(), "k": f.k(), "size": f.len()}))?;
        w.flush()?;
        return Ok(0);
    }
    for r in collisions.iter().take(cap.unwrap_or(usize::MAX)) {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    eprintln!("not a Sidon system: {} collisions", collisions.len());
    Ok(2)
}

fn bhg_verify(ctx: &Ctx, file: &PathBuf, h: usize, g: u64) -> Result<u8> {
    let f = famio::read_family(file).with_context(|| format!("reading {}", file.display()))?;
    if g < 1 {
        bail!("g must be at least 1");
    }
    let prof = verifier::bh_profile(&f, h)?;
    let holds = prof.max_representations <= g;
    let mut w = ctx.writer()?;
    writeln!(
        w,
        "{}",
        json!({"h": h, "g": g, "holds": holds, "size": f.len(),
               "max_representations": prof.max_representations, "violations": prof.violations})
    )?;
    w.flush()?;
    Ok(if holds { 0 } else { 2 })
}

fn exact_fk(ctx: &Ctx, n: u32, k: usize, parallel: bool) -> Result<u8> {
    let r = oracle::exact_fk(n, k, parallel)?;
    let bound = verifier::upper_bound_fk(n, k).ok();
    let mut w = ctx.writer()?;
    writeln!(
        w,
        "{}",
        json!({"n": n, "k": k, "value": r.value, "upper_bound": bound, "nodes": r.nodes,
               "elapsed_ms": r.elapsed.as_millis() as u64,
               "witness": r.witness.as_ref().map(sets_json)})
    )?;
    w.flush()?;
    Ok(0)
}

fn enum3(ctx: &Ctx, n: u32, cap: Option<usize>) -> Result<u8> {
    let recs = oracle::enumerate_3set_equalities(n)?;
    let mut w = ctx.writer()?;
    for r in recs.iter().take(cap.unwrap_or(usize::MAX)) {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    eprintln!("{} records", recs.len());
    Ok(0)
}

fn classify3(ctx: &Ctx, n: u32) -> Result<u8> {
    let recs = oracle::enumerate_3set_equalities(n)?;
    let c = oracle::classify_3set_equalities(&recs);
    let families: serde_json::Map<String, serde_json::Value> =
        c.by_family.iter().map(|(id, v)| (id.to_string(), json!(v.len()))).collect();
    let mut w = ctx.writer()?;
    writeln!(
        w,
        "{}",
        json!({"n": n, "records": recs.len(), "families": families, "chained": c.chained.len(),
               "unclassified": c.unclassified.len()})
    )?;
    for r in &c.unclassified {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    Ok(if c.unclassified.is_empty() { 0 } else { 2 })
}

fn count_cl(ctx: &Ctx, ns: &[u32], k: usize) -> Result<u8> {
    let mut rows = Vec::new();
    for &n in ns {
        let t = oracle::c_ell_table(n, k)?;
        for (i, &c) in t.iter().enumerate() {
            rows.push((n, i + 2, c));
        }
    }
    let mut w = ctx.writer()?;
    match ctx.format(Format::Csv) {
        Format::Csv | Format::Text => {
            writeln!(w, "n,k,ell,count")?;
            for (n, ell, c) in rows {
                writeln!(w, "{n},{k},{ell},{c}")?;
            }
        }
        Format::Json => {
            for (n, ell, c) in rows {
                writeln!(w, "{}", json!({"n": n, "k": k, "ell": ell, "count": c}))?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}

fn sweep(ctx: &Ctx, a: &SweepArgs, h: usize) -> Result<u8> {
    for &n in &a.n {
        if let Some(msg) = randomsim::envelope_warning(n, a.k, h) {
            eprintln!("warning: {msg}");
        }
    }
    let r: SweepResult = randomsim::threshold_sweep(&a.n, a.k, h, &a.grid()?, a.samples, a.seed)?;
    let summary = json!({
        "seed": r.seed, "k": r.k, "h": r.h, "samples": a.samples,
        "slope": r.slope, "expected_slope": r.expected_slope, "crossings": r.crossings,
    });
    let mut w = ctx.writer()?;
    match ctx.format(Format::Csv) {
        Format::Csv | Format::Text => {
            randomsim::write_sweep_csv(&r.points, &mut w)?;
            eprintln!("{summary}");
        }
        Format::Json => {
            let mut full = summary;
            full["points"] = serde_json::to_value(&r.points)?;
            writeln!(w, "{full}")?;
        }
    }
    w.flush()?;
    Ok(0)
}

fn multirep(ctx: &Ctx, parts: &[u32]) -> Result<u8> {
    let m = oracle::composite_multirep(parts)?;
    let count = verifier::representation_count(&m.family, &m.sumset, 2)?;
    let pair = |p: &(KSet, KSet)| json!([p.0.elements(), p.1.elements()]);
    let mut w = ctx.writer()?;
    writeln!(
        w,
        "{}",
        json!({"parts": parts, "sumset": m.sumset.sums(), "pairings": m.pairings.iter().map(pair).collect::<Vec<_>>(),
               "representation_count": count})
    )?;
    w.flush()?;
    Ok(if count == 3 { 0 } else { 2 })
}

fn bounds(ctx: &Ctx, n: u32, k: usize) -> Result<u8> {
    let b = verifier::upper_bound_fk(n, k)?;
    let mut w = ctx.writer()?;
    match ctx.format(Format::Text) {
        Format::Json => writeln!(w, "{}", json!({"n": n, "k": k, "upper_bound": b}))?,
        _ => writeln!(w, "{b}")?,
    }
    w.flush()?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        format: cli.format,
        out: cli.out,
    };
    match &cli.command {
        Command::Construct { kind, n, k, g, base } => construct(&ctx, *kind, *n, *k, *g, *base),
        Command::Verify { file, cap } => verify(&ctx, file, *cap),
        Command::BhgVerify { file, h, g } => bhg_verify(&ctx, file, *h, *g),
        Command::ExactFk { n, k, parallel } => exact_fk(&ctx, *n, *k, *parallel),
        Command::Enum3 { n, cap } => enum3(&ctx, *n, *cap),
        Command::Classify3 { n } => classify3(&ctx, *n),
        Command::CountCl { n, k } => count_cl(&ctx, n, *k),
        Command::Sweep(a) => sweep(&ctx, a, 2),
        Command::BhSweep { sweep: a, h } => sweep(&ctx, a, *h),
        Command::Multirep { parts } => multirep(&ctx, parts),
        Command::Bounds { n, k } => bounds(&ctx, *n, *k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
