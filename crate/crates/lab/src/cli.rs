//! `bisph` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bisph_core::bochner_riesz::checks::annular_kernel;
use bisph_core::bochner_riesz::profile::profile_corpus;
use bisph_core::exponents::{
    self, alpha_star, br_maximal_necessity, delta_region, global_region, localized_region, p_s, sufficient_alpha, ExactExponents,
    RegionVerdict,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance;
use crate::checks;
use crate::config::{FamilyKind, LabConfig, OperatorKind};
use crate::io::{num, write_snapshot, Outcome, Table};
use crate::{LabError, Result};

#[derive(Debug, Parser)]
#[command(name = "bisph", version, about = "Checks and scans for bilinear spherical averages and bilinear Bochner-Riesz multipliers")]
pub struct Cli {
    /// JSON config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized corpus.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print timings to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Direct versus sliced evaluation of the bilinear spherical average.
    SliceCheck(SliceArgs),
    /// Pointwise domination of the bilinear maximal function.
    Domination(DominationArgs),
    /// Counterexample and scaling sweeps with a log-log slope fit.
    Scan(ScanArgs),
    /// Dyadic reconstruction residuals of (1-t)^α_+.
    BrReconstruct(ReconstructArgs),
    /// Square-function bounds and δ-sweeps.
    Sqfn(SqfnArgs),
    /// Lattice check of the multiplier partition identity.
    Partition(PartitionArgs),
    /// Decay constants of annular multiplier kernels across δ.
    Kernel(KernelArgs),
    /// Exponent calculus and boundedness verdicts.
    Classify(ClassifyArgs),
    /// Every acceptance criterion, aggregated.
    Report(ReportArgs),
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    exponents::parse_rational(s).map(exponents::to_f64).or_else(|_| s.parse::<f64>().map_err(|e| e.to_string()))
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    box_length: Option<f64>,
    /// Random band-limited pairs.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    analytic: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DominationArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long)]
    d: Option<usize>,
    /// `δ` values (probe families) or `R` values (scaling), e.g. `1/8,1/16`.
    #[arg(long, alias = "params", value_delimiter = ',', value_parser = parse_number)]
    deltas: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    op: Option<OperatorKind>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    box_length: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    alphas: Option<Vec<f64>>,
    #[arg(long)]
    truncation: Option<u32>,
    #[arg(long, value_parser = parse_number)]
    lambda: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SqfnKind {
    Plancherel,
    Mixed,
}

#[derive(Debug, Args)]
pub struct SqfnArgs {
    #[arg(long, value_enum, default_value = "plancherel")]
    kind: SqfnKind,
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    deltas: Option<Vec<f64>>,
    #[arg(long)]
    functions: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, value_parser = parse_number)]
    delta: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    eps: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    lambda: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    box_length: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    deltas: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_number)]
    rho_factor: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    box_length: Option<f64>,
    /// Also write every kernel as a grid snapshot into this directory.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassifyOp {
    Global,
    Localized,
    Delta,
    AlphaStar,
    #[value(name = "p-s")]
    PS,
    SufficientAlpha,
    BrNecessity,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, default_value = "1")]
    r: String,
    #[arg(long, value_enum, default_value = "global")]
    op: ClassifyOp,
    /// `α` for `br-necessity`.
    #[arg(long)]
    alpha: Option<String>,
    /// `1/ν` for `alpha-star`; defaults to `p_s(d)`.
    #[arg(long)]
    nu: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Subset of criteria, e.g. `1,3,10`.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<u8>>,
}

macro_rules! set {
    ($target:expr, $value:expr) => {
        if let Some(v) = $value {
            $target = v;
        }
    };
}

/// What a subcommand produced.
enum Output {
    Checks(Vec<Outcome>),
    Document(Value),
}

/// Parse `argv`, run, print, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({"error": e.to_string(), "exit": e.exit_code()}));
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => LabConfig::load(p)?,
        None => LabConfig::default(),
    };
    set!(cfg.seed, cli.seed);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(LabError::Config("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| LabError::Config(e.to_string()))?;
    let output = pool.install(|| dispatch(cli, cfg))?;
    let default_format = match (&cli.command, &output) {
        (_, Output::Document(_)) | (Command::Report(_), _) => Format::Json,
        _ => Format::Csv,
    };
    let format = cli.format.unwrap_or(default_format);
    let mut buf = Vec::new();
    let code = match &output {
        Output::Document(v) => {
            write_json(&mut buf, v)?;
            0
        }
        Output::Checks(outcomes) => {
            match (&cli.command, format) {
                (Command::Report(_), Format::Json) => write_json(&mut buf, &report_document(&outcomes_with_ids(cli, outcomes), cli_seed(cli)?))?,
                (Command::Report(_), Format::Csv) => report_table(&outcomes_with_ids(cli, outcomes)).write_csv(&mut buf)?,
                (_, Format::Json) => write_json(&mut buf, &outcomes[0].document())?,
                (_, Format::Csv) => outcomes[0].table.write_csv(&mut buf)?,
            }
            let mut stderr = std::io::stderr().lock();
            for o in outcomes {
                if cli.verbose {
                    let _ = writeln!(stderr, "{}: {:.2} s", o.check, o.elapsed_s);
                }
                if !o.passed {
                    let _ = writeln!(stderr, "{}", o.failure_record());
                }
            }
            if outcomes.iter().all(|o| o.passed) {
                0
            } else {
                1
            }
        }
    };
    match &cli.out {
        Some(p) => std::fs::write(p, &buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(code)
}

fn cli_seed(cli: &Cli) -> Result<u64> {
    Ok(match (&cli.config, cli.seed) {
        (_, Some(s)) => s,
        (Some(p), None) => LabConfig::load(p)?.seed,
        (None, None) => LabConfig::default().seed,
    })
}

fn selected_criteria(cli: &Cli) -> Vec<u8> {
    match &cli.command {
        Command::Report(ReportArgs { criteria: Some(c) }) => c.clone(),
        _ => acceptance::CRITERIA.iter().map(|c| c.0).collect(),
    }
}

fn outcomes_with_ids<'a>(cli: &Cli, outcomes: &'a [Outcome]) -> Vec<(u8, &'a Outcome)> {
    selected_criteria(cli).into_iter().zip(outcomes).collect()
}

fn write_json(buf: &mut Vec<u8>, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *buf, v)?;
    buf.push(b'\n');
    Ok(())
}

fn report_document(items: &[(u8, &Outcome)], seed: u64) -> Value {
    let criteria: Vec<Value> = items
        .iter()
        .map(|(id, o)| {
            let name = acceptance::CRITERIA.iter().find(|c| c.0 == *id).map(|c| c.1).unwrap_or("unknown");
            json!({"id": id, "name": name, "check": o.check, "passed": o.passed, "measured": num(o.measured), "threshold": o.threshold, "summary": o.summary})
        })
        .collect();
    json!({"seed": seed, "passed": items.iter().all(|(_, o)| o.passed), "criteria": criteria})
}

fn report_table(items: &[(u8, &Outcome)]) -> Table {
    let mut t = Table::new(&["id", "check", "passed", "measured", "threshold"]);
    for (id, o) in items {
        t.push(vec![json!(id), json!(o.check), json!(o.passed), num(o.measured), json!(o.threshold)]);
    }
    t
}

fn dispatch(cli: &Cli, mut cfg: LabConfig) -> Result<Output> {
    let one = |o: Result<Outcome>| o.map(|o| Output::Checks(vec![o]));
    match &cli.command {
        Command::SliceCheck(a) => {
            let p = &mut cfg.slicing;
            set!(p.d, a.d);
            set!(p.order, a.order);
            set!(p.n, a.n);
            set!(p.box_length, a.box_length);
            set!(p.random_pairs, a.pairs);
            set!(p.analytic_pairs, a.analytic);
            one(checks::slice_check(p, cfg.seed))
        }
        Command::Domination(a) => {
            let p = &mut cfg.domination;
            set!(p.d, a.d);
            set!(p.pairs, a.pairs);
            set!(p.n, a.n);
            set!(p.order, a.order);
            one(checks::domination(p, cfg.seed))
        }
        Command::Scan(a) => {
            let p = &mut cfg.scan;
            set!(p.family, a.family);
            set!(p.d, a.d);
            if a.deltas.is_some() {
                p.params = a.deltas.clone();
            }
            if a.op.is_some() {
                p.operator = a.op;
            }
            set!(p.p, a.p.clone());
            set!(p.q, a.q.clone());
            set!(p.r, a.r.clone());
            if a.n.is_some() {
                p.n = a.n;
            }
            if a.box_length.is_some() {
                p.box_length = a.box_length;
            }
            set!(p.eps, a.eps);
            one(checks::scan(p))
        }
        Command::BrReconstruct(a) => {
            let p = &mut cfg.reconstruct;
            set!(p.alphas, a.alphas.clone());
            set!(p.truncation, a.truncation);
            set!(p.lambda, a.lambda);
            one(checks::br_reconstruct(p))
        }
        Command::Sqfn(a) => {
            let p = &mut cfg.sqfn;
            set!(p.functions, a.functions);
            match a.kind {
                SqfnKind::Plancherel => {
                    set!(p.deltas, a.deltas.clone());
                    one(checks::sqfn_plancherel(p, cfg.seed))
                }
                SqfnKind::Mixed => {
                    set!(p.mixed_deltas, a.deltas.clone());
                    one(checks::sqfn_mixed(p, cfg.seed))
                }
            }
        }
        Command::Partition(a) => {
            let p = &mut cfg.partition;
            set!(p.delta, a.delta);
            set!(p.eps, a.eps);
            set!(p.lambda, a.lambda);
            set!(p.n, a.n);
            set!(p.box_length, a.box_length);
            one(checks::partition(p))
        }
        Command::Kernel(a) => {
            let p = &mut cfg.kernel;
            set!(p.deltas, a.deltas.clone());
            set!(p.rho_factor, a.rho_factor);
            if a.n.is_some() {
                p.n = a.n;
            }
            if a.box_length.is_some() {
                p.box_length = a.box_length;
            }
            if let Some(dir) = &a.dump {
                dump_kernels(dir, p)?;
            }
            one(checks::kernel(p))
        }
        Command::Classify(a) => classify(a).map(Output::Document),
        Command::Report(_) => {
            let ids = selected_criteria(cli);
            if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
                return Err(LabError::Config(format!("no criterion {bad}")));
            }
            Ok(Output::Checks(ids.iter().map(|&id| acceptance::evaluate(&cfg, id)).collect()))
        }
    }
}

fn dump_kernels(dir: &std::path::Path, p: &crate::config::KernelParams) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let grid = checks::kernel_grid(p);
    for (i, phi) in profile_corpus()?.iter().enumerate() {
        for (j, &delta) in p.deltas.iter().enumerate() {
            let rho = p.rho_factor * delta;
            let k = annular_kernel(phi, rho, delta, &grid)?;
            let prov = json!({"kind": "annular-kernel", "profile": format!("{:?}", phi.shape), "delta": num(delta), "rho": num(rho)});
            write_snapshot(&dir.join(format!("kernel-{i}-{j}.bin")), &k, &prov)?;
        }
    }
    Ok(())
}

/// Verdict with exact rationals rendered as strings.
fn verdict_json(v: &RegionVerdict) -> Value {
    let fmt = |x: Option<exponents::Q>| x.map(exponents::format_rational);
    json!({
        "status": format!("{:?}", v.status),
        "case": v.case_tag,
        "citation": v.citation,
        "note": v.note,
        "lorentz": v.lorentz.as_ref().map(|l| json!({
            "1/s": fmt(l.us),
            "1/t": fmt(l.ut),
            "1/u": fmt(Some(l.uu)),
            "1/s+1/t": fmt(l.st_sum),
        })),
    })
}

fn classify(a: &ClassifyArgs) -> Result<Value> {
    let d = a.d;
    let e = ExactExponents::parse(d, &a.p, &a.q, &a.r)?;
    let head = json!({"d": d, "p": a.p, "q": a.q, "r": a.r});
    let merge = |mut base: Value, extra: Value| {
        for (k, v) in extra.as_object().expect("object") {
            base[k] = v.clone();
        }
        base
    };
    let fmt = exponents::format_rational;
    Ok(match a.op {
        ClassifyOp::Global => merge(head, merge(json!({"op": "global"}), verdict_json(&global_region(&e)))),
        ClassifyOp::Localized => merge(head, merge(json!({"op": "localized"}), verdict_json(&localized_region(&e)))),
        ClassifyOp::Delta => merge(json!({"op": "delta", "d": d, "p": a.p, "q": a.q}), verdict_json(&delta_region(d, e.up, e.uq)?)),
        ClassifyOp::AlphaStar => {
            let nu = match &a.nu {
                Some(s) => exponents::parse_exponent(s)?,
                None => p_s(d)?.recip(),
            };
            let s = alpha_star(e.up, e.uq, nu, d)?;
            json!({
                "op": "alpha-star", "d": d, "p": a.p, "q": a.q, "nu": fmt(nu),
                "value": fmt(s.value), "region": format!("{:?}", s.region),
                "tie": s.tie.map(|(x, y)| [fmt(x), fmt(y)]),
            })
        }
        ClassifyOp::PS => json!({"op": "p-s", "d": d, "value": fmt(p_s(d)?)}),
        ClassifyOp::SufficientAlpha => json!({"op": "sufficient-alpha", "d": d, "p": a.p, "q": a.q, "value": fmt(sufficient_alpha(e.up, e.uq, d)?)}),
        ClassifyOp::BrNecessity => {
            let alpha = exponents::parse_rational(a.alpha.as_deref().ok_or_else(|| LabError::Config("--alpha is required".into()))?)?;
            merge(json!({"op": "br-necessity", "d": d, "r": a.r, "alpha": fmt(alpha)}), verdict_json(&br_maximal_necessity(alpha, e.ur, d)?))
        }
    })
}
