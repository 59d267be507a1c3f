use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use saturated_core::constructions::FinalParams;
use saturated_core::formats::{read_graph, Descriptor, GraphFormat};
use saturated_core::harness::{
    parse_rational, run_experiment, verify_certificate_suite, verify_oracle_suite, verify_proposition1_suite,
    verify_saturation_suite, write_file, ExperimentSpec, Family, FamilyKind, SuiteReport, Verdict,
};
use saturated_core::oracles::{brute_named, OracleConfig, OracleKind, DEFAULT_ORACLE_CAP};
use saturated_core::random_build::RandomBuildParams;
use saturated_core::stability::{stability_decompose, StabilityCertificate};
use saturated_core::{Error, Graph};

/// Saturated K_{r+1}-free graphs: build, decompose, verify.
#[derive(Parser)]
#[command(name = "saturated", version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Build a graph family and write .g6, .edges and .desc files.
    Generate(GenerateArgs),
    /// Run verification suites against a graph file.
    Verify(VerifyArgs),
    /// Run the stability decomposition and write its certificate.
    Decompose(DecomposeArgs),
    /// Exact distance to complete r-partite (and Turán) residuals.
    Oracle(OracleArgs),
    /// Sweep a parameter grid and write one CSV row per point.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "g_rs")]
    GRs,
    #[value(name = "h_rst")]
    Hrst,
    Tight,
    Random,
}

impl FamilyArg {
    fn kind(self) -> FamilyKind {
        match self {
            Self::GRs => FamilyKind::GRs,
            Self::Hrst => FamilyKind::Hrst,
            Self::Tight => FamilyKind::Tight,
            Self::Random => FamilyKind::Random,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Edge deficit for the tight family.
    #[arg(long, default_value_t = 0)]
    m: u64,
    #[arg(long, default_value = "1/2")]
    eps: String,
    #[arg(long, default_value = "1/2")]
    delta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output stem; extensions are appended.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write only this encoding (both by default).
    #[arg(long)]
    format: Option<GraphFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Proposition1,
    Saturation,
    Certificate,
    Oracle,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    /// Suites to run; repeatable.
    #[arg(long = "check", value_enum, default_values_t = [Suite::Saturation])]
    checks: Vec<Suite>,
    /// Defaults to the value in the sibling .desc file.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Certificate for the certificate suite; computed when absent.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 40)]
    mis_cap: usize,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    graph: PathBuf,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    #[value(name = "g_r")]
    GR,
    #[value(name = "g_star")]
    GStar,
    Both,
}

#[derive(Args)]
struct OracleArgs {
    graph: PathBuf,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value_t = OracleArg::Both)]
    kind: OracleArg,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    s: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<u64>,
    /// Seeds for the random family.
    #[arg(long = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value = "1/2")]
    eps: String,
    #[arg(long, default_value = "1/2")]
    delta: String,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append finished points here and skip them on a rerun.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

// Bad input is a usage error; anything the library rejects later is a failure.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::InvalidParams(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn run(cmd: Commands) -> Result<Verdict> {
    match cmd {
        Commands::Generate(a) => generate(a),
        Commands::Verify(a) => verify(a),
        Commands::Decompose(a) => decompose(a),
        Commands::Oracle(a) => oracle(a),
        Commands::Experiment(a) => experiment(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(write_file(p, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_graph(&bytes).map_err(Error::from)?)
}

fn sibling_descriptor(path: &Path) -> Result<Option<Descriptor>> {
    let p = path.with_extension("desc");
    match std::fs::read_to_string(&p) {
        Ok(text) => Ok(Some(text.parse::<Descriptor>().map_err(Error::from)?)),
        Err(_) => Ok(None),
    }
}

fn resolve_r(r: Option<usize>, desc: Option<&Descriptor>) -> Result<usize> {
    r.or(desc.map(|d| d.r))
        .ok_or_else(|| Error::InvalidParams("--r is required when no .desc file sits next to the graph".into()).into())
}

fn generate(a: GenerateArgs) -> Result<Verdict> {
    let family = match a.family {
        FamilyArg::GRs => Family::GRs { r: a.r, s: a.s },
        FamilyArg::Hrst => Family::Hrst(FinalParams::new(a.r, a.s, a.t, a.n)?),
        FamilyArg::Tight => Family::Tight { r: a.r, eps: parse_rational(&a.eps)?, n: a.n, m: a.m },
        FamilyArg::Random => Family::Random(RandomBuildParams::new(a.r, parse_rational(&a.delta)?, a.n, a.seed)),
    };
    let built = family.build()?;
    let d = &built.descriptor;
    let stem = a.out.unwrap_or_else(|| {
        let base = d.family.split(':').next().unwrap_or("graph");
        PathBuf::from(format!("{base}_r{}_s{}_t{}_n{}_seed{}", d.r, d.s, d.t, d.n, d.seed))
    });
    let with_ext = |ext: &str| {
        let mut s = stem.clone().into_os_string();
        s.push(".");
        s.push(ext);
        PathBuf::from(s)
    };
    let formats = match a.format {
        Some(f) => vec![f],
        None => vec![GraphFormat::Graph6, GraphFormat::EdgeList],
    };
    for f in formats {
        write_file(&with_ext(f.extension()), &f.encode(&built.graph))?;
    }
    write_file(&with_ext("desc"), format!("{d}\n").as_bytes())?;
    if let Some(rep) = &built.report {
        write_file(&with_ext("report"), rep.as_bytes())?;
    }
    println!("{} n={} edges={}", stem.display(), built.graph.n(), built.graph.edge_count());
    Ok(Verdict::Pass)
}

fn verify(a: VerifyArgs) -> Result<Verdict> {
    let g = load_graph(&a.graph)?;
    let desc = sibling_descriptor(&a.graph)?;
    let r = resolve_r(a.r, desc.as_ref())?;
    let mut checks = a.checks.clone();
    checks.dedup();
    // An engine failure fails the certificate suite instead of aborting the run.
    let cert: Option<Result<StabilityCertificate, String>> =
        if checks.iter().any(|c| matches!(c, Suite::Certificate | Suite::Oracle)) {
            Some(match &a.certificate {
                Some(p) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    Ok(text.parse::<StabilityCertificate>().map_err(Error::from)?)
                }
                None => stability_decompose(&g, r).map_err(|e| e.to_string()),
            })
        } else {
            None
        };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for c in checks {
        reports.push(match c {
            Suite::Proposition1 => {
                let s = a.s.or(desc.as_ref().map(|d| d.s)).ok_or_else(|| {
                    Error::InvalidParams("--s is required for proposition1 without a .desc file".into())
                })?;
                verify_proposition1_suite(r, s, Some(&g), a.mis_cap)?
            }
            Suite::Saturation => verify_saturation_suite(&g, r, a.cap),
            Suite::Certificate => match cert.as_ref().expect("certificate requested") {
                Ok(c) => verify_certificate_suite(&g, c),
                Err(e) => SuiteReport { suite: "certificate", verdict: Verdict::Fail, lines: vec![format!("engine: {e}")] },
            },
            Suite::Oracle => {
                let cfg = OracleConfig { cap: a.cap, ..OracleConfig::default() };
                let c = cert.as_ref().and_then(|c| c.as_ref().ok());
                verify_oracle_suite(&g, r, &cfg, c)?
            }
        });
    }
    let overall = reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
    let mut text: String = reports.iter().map(SuiteReport::render).collect();
    text.push_str(&format!("overall={}\n", overall.label()));
    emit(a.out.as_deref(), &text)?;
    Ok(overall)
}

fn decompose(a: DecomposeArgs) -> Result<Verdict> {
    let g = load_graph(&a.graph)?;
    let r = resolve_r(a.r, sibling_descriptor(&a.graph)?.as_ref())?;
    let cert = stability_decompose(&g, r)?;
    emit(a.out.as_deref(), &cert.to_string())?;
    Ok(Verdict::Pass)
}

fn oracle(a: OracleArgs) -> Result<Verdict> {
    let g = load_graph(&a.graph)?;
    let r = resolve_r(a.r, sibling_descriptor(&a.graph)?.as_ref())?;
    let cfg = OracleConfig { cap: a.cap, ..OracleConfig::default() };
    let kinds: &[OracleKind] = match a.kind {
        OracleArg::GR => &[OracleKind::CompletePartite],
        OracleArg::GStar => &[OracleKind::Turan],
        OracleArg::Both => &[OracleKind::CompletePartite, OracleKind::Turan],
    };
    let id = a.graph.display().to_string();
    let mut text = String::new();
    let mut verdict = Verdict::Pass;
    for &k in kinds {
        let rep = brute_named(&g, r, k, &cfg, &id)?;
        if rep.capped {
            verdict = Verdict::Refused;
        }
        text.push_str(&rep.to_string());
    }
    emit(a.out.as_deref(), &text)?;
    Ok(verdict)
}

fn experiment(a: ExperimentArgs) -> Result<Verdict> {
    let spec = ExperimentSpec {
        family: a.family.kind(),
        r: a.r,
        s: a.s,
        t: a.t,
        n: a.n,
        m: a.m,
        seeds: a.seeds,
        eps: parse_rational(&a.eps)?,
        delta: parse_rational(&a.delta)?,
        cap: a.cap,
    };
    let threads = if a.threads == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { a.threads };
    let out = run_experiment(&spec, a.checkpoint.as_deref(), threads)?;
    emit(a.out.as_deref(), &out.csv)?;
    eprintln!("rows={} warnings={} sandwich_violations={}", out.rows, out.warnings, out.violations);
    Ok(if out.violations == 0 { Verdict::Pass } else { Verdict::Fail })
}
