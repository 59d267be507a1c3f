//! Glue used by the command-line tool: family descriptors, verification
//! suites with pass/fail/refused verdicts, and parameter sweeps written as
//! CSV with per-point checkpointing.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::constructions::{build_g_rs, build_h_rst, check_g_rs, tightness_params, FinalParams};
use crate::error::{Error, Result};
use crate::formats::Descriptor;
use crate::graph::Graph;
use crate::oracles::{brute_g_r, brute_g_star, definition_level_saturation, OracleConfig};
use crate::random_build::{build_random, RandomBuildParams};
use crate::stability::{stability_decompose, validate_certificate, StabilityCertificate};
use crate::turan::{first_unsaturated_pair, find_forbidden_clique, turan_number};
use crate::Exact;

/// Parses `p/q`, an integer, or a finite decimal such as `0.25`, exactly.
pub fn parse_rational(s: &str) -> Result<Exact> {
    let bad = || Error::InvalidParams(format!("a rational number like 1/2 or 0.5 (got `{s}`)"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Exact::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(Exact::new(digits, BigInt::from(10).pow(frac.len() as u32)))
}

/// A buildable family together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    GRs { r: usize, s: usize },
    Hrst(FinalParams),
    /// `H_{r,s,t}(n)` with `(s, t)` chosen from `eps` and the deficit `m`.
    Tight { r: usize, eps: Exact, n: usize, m: u64 },
    Random(RandomBuildParams),
}

/// A built graph with what is needed to describe and regenerate it.
#[derive(Clone, Debug)]
pub struct Built {
    pub graph: Graph,
    pub descriptor: Descriptor,
    pub r: usize,
    pub report: Option<String>,
}

impl Family {
    pub fn build(&self) -> Result<Built> {
        match self {
            Family::GRs { r, s } => {
                let pg = build_g_rs(*r, *s)?;
                let n = pg.graph().n();
                Ok(Built {
                    descriptor: desc("g_rs", *r, *s, 0, n, 0),
                    graph: pg.into_parts().0,
                    r: *r,
                    report: None,
                })
            }
            Family::Hrst(p) => {
                let fc = build_h_rst(p)?;
                Ok(Built {
                    graph: fc.pg.into_parts().0,
                    descriptor: desc("h_rst", p.r, p.s, p.t, p.n, 0),
                    r: p.r,
                    report: None,
                })
            }
            Family::Tight { r, eps, n, m } => {
                let tp = tightness_params(*r, eps, *n, *m)?;
                Family::Hrst(FinalParams::new(*r, tp.s, tp.t, *n)?).build()
            }
            Family::Random(p) => {
                let b = build_random(p)?;
                Ok(Built {
                    descriptor: desc(&format!("random:delta={}", p.delta), p.r, b.derived.s, b.derived.t, p.n, p.seed),
                    report: Some(b.report_text()),
                    graph: b.pg.into_parts().0,
                    r: p.r,
                })
            }
        }
    }

    /// Inverse of [`Built::descriptor`].
    pub fn from_descriptor(d: &Descriptor) -> Result<Family> {
        match d.family.as_str() {
            "g_rs" => Ok(Family::GRs { r: d.r, s: d.s }),
            "h_rst" => Ok(Family::Hrst(FinalParams::new(d.r, d.s, d.t, d.n)?)),
            f => match f.strip_prefix("random:delta=") {
                Some(delta) => Ok(Family::Random(RandomBuildParams::new(d.r, parse_rational(delta)?, d.n, d.seed))),
                None => Err(Error::InvalidParams(format!("a known family (got `{f}`)"))),
            },
        }
    }
}

fn desc(family: &str, r: usize, s: usize, t: usize, n: usize, seed: u64) -> Descriptor {
    Descriptor { family: family.to_string(), r, s, t, n, seed }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Refused => "REFUSED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub verdict: Verdict,
    pub lines: Vec<String>,
}

impl SuiteReport {
    pub fn render(&self) -> String {
        let mut s = format!("suite={} verdict={}\n", self.suite, self.verdict.label());
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok { Verdict::Pass } else { Verdict::Fail }
}

/// The ten properties of `G_{r,s}`; when `graph` is given it must equal the
/// construction.
pub fn verify_proposition1_suite(r: usize, s: usize, graph: Option<&Graph>, mis_cap: usize) -> Result<SuiteReport> {
    let pg = build_g_rs(r, s)?;
    let mut lines = Vec::new();
    let mut ok = true;
    if let Some(g) = graph {
        let same = g == pg.graph();
        lines.push(format!("matches_construction={same}"));
        ok &= same;
    }
    let rep = check_g_rs(&pg, r, s, mis_cap);
    for p in &rep.parts {
        lines.push(format!("part{}={} {}: {}", p.part, verdict(p.passed).label(), p.name, p.detail));
    }
    lines.push(format!("passed={}/{}", rep.passed(), rep.parts.len()));
    ok &= rep.all_passed();
    Ok(SuiteReport { suite: "proposition1", verdict: verdict(ok), lines })
}

/// Saturation via common neighbourhoods, cross-checked by the literal
/// definition when the graph is within `cap`.
pub fn verify_saturation_suite(g: &Graph, r: usize, cap: usize) -> SuiteReport {
    let mut lines = vec![format!("n={} edges={} r={r}", g.n(), g.edge_count())];
    let clique = find_forbidden_clique(g, r);
    let unsat = first_unsaturated_pair(g, r);
    if let Some(w) = &clique {
        lines.push(format!("contains K_{}: {w:?}", r + 1));
    }
    if let Some((u, v)) = unsat {
        lines.push(format!("adding {u}-{v} creates no K_{}", r + 1));
    }
    let fast = clique.is_none() && unsat.is_none();
    lines.push(format!("saturated={fast}"));
    let mut ok = fast;
    match definition_level_saturation(g, r, cap) {
        Ok(lit) => {
            lines.push(format!("definition_check={lit}"));
            ok &= lit == fast;
        }
        Err(e) => lines.push(format!("definition_check=skipped ({e})")),
    }
    SuiteReport { suite: "saturation", verdict: verdict(ok), lines }
}

pub fn verify_certificate_suite(g: &Graph, cert: &StabilityCertificate) -> SuiteReport {
    let chk = validate_certificate(g, cert);
    let mut lines = vec![format!("removed_total={}", cert.removed_total)];
    lines.extend(chk.failures.iter().map(|f| format!("failure: {f}")));
    lines.push(format!("valid={}", chk.is_valid()));
    SuiteReport { suite: "certificate", verdict: verdict(chk.is_valid()), lines }
}

/// Exact `g_r` and `g*_r`; with a certificate, also `g_r <= removed_total`.
pub fn verify_oracle_suite(
    g: &Graph,
    r: usize,
    cfg: &OracleConfig,
    cert: Option<&StabilityCertificate>,
) -> Result<SuiteReport> {
    if g.n() > cfg.cap {
        return Ok(SuiteReport {
            suite: "oracle",
            verdict: Verdict::Refused,
            lines: vec![format!("n={} exceeds oracle cap {}", g.n(), cfg.cap)],
        });
    }
    let gr = brute_g_r(g, r, cfg)?;
    let gs = brute_g_star(g, r, cfg)?;
    let mut lines = vec![
        format!("g_r={} capped={} nodes={}", gr.value, gr.capped, gr.search_nodes),
        format!("g_star={} capped={} nodes={}", gs.value, gs.capped, gs.search_nodes),
    ];
    if gr.capped || gs.capped {
        lines.push("search budget exhausted".into());
        return Ok(SuiteReport { suite: "oracle", verdict: Verdict::Refused, lines });
    }
    let mut ok = gr.value <= gs.value;
    if let Some(c) = cert {
        let sandwich = gr.value <= c.removed_total;
        lines.push(format!("engine_removed={} sandwich={sandwich}", c.removed_total));
        ok &= sandwich;
    }
    Ok(SuiteReport { suite: "oracle", verdict: verdict(ok), lines })
}

/// Which family a sweep builds; dimensions it does not use are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    GRs,
    Hrst,
    Tight,
    Random,
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "g_rs" => Ok(Self::GRs),
            "h_rst" => Ok(Self::Hrst),
            "tight" => Ok(Self::Tight),
            "random" => Ok(Self::Random),
            other => Err(format!("unknown family `{other}` (expected g_rs, h_rst, tight or random)")),
        }
    }
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::GRs => "g_rs",
            Self::Hrst => "h_rst",
            Self::Tight => "tight",
            Self::Random => "random",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub family: FamilyKind,
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub n: Vec<usize>,
    pub m: Vec<u64>,
    pub seeds: Vec<u64>,
    pub eps: Exact,
    pub delta: Exact,
    pub cap: usize,
}

/// One grid point; `family` is ready to build.
#[derive(Clone, Debug)]
pub struct GridPoint {
    /// Identifies the point across runs, whatever the rest of the grid.
    pub key: String,
    pub index: usize,
    pub family: Family,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub m: Option<u64>,
    pub seed: u64,
}

/// Points in lexicographic order of the family's own dimensions.
pub fn grid(spec: &ExperimentSpec) -> Vec<GridPoint> {
    let mut out = Vec::new();
    let mut push = |family, r, s, t, n, m, seed| {
        let key = format!("{family:?}");
        out.push(GridPoint { key, index: out.len(), family, r, s, t, n, m, seed });
    };
    for &r in &spec.r {
        match spec.family {
            FamilyKind::GRs => {
                for &s in &spec.s {
                    push(Family::GRs { r, s }, r, s, 0, 0, None, 0);
                }
            }
            FamilyKind::Hrst => {
                for &s in &spec.s {
                    for &t in &spec.t {
                        for &n in &spec.n {
                            let fam = Family::Hrst(FinalParams { r, s, t, n });
                            push(fam, r, s, t, n, None, 0);
                        }
                    }
                }
            }
            FamilyKind::Tight => {
                for &n in &spec.n {
                    for &m in &spec.m {
                        push(Family::Tight { r, eps: spec.eps.clone(), n, m }, r, 0, 0, n, Some(m), 0);
                    }
                }
            }
            FamilyKind::Random => {
                for &n in &spec.n {
                    for &seed in &spec.seeds {
                        let p = RandomBuildParams::new(r, spec.delta.clone(), n, seed);
                        push(Family::Random(p), r, 0, 0, n, None, seed);
                    }
                }
            }
        }
    }
    out
}

pub const CSV_HEADER: [&str; 14] = [
    "family",
    "r",
    "s",
    "t",
    "n",
    "m",
    "edges",
    "removed_total",
    "g_r",
    "g_r_exact",
    "g_star",
    "seed",
    "runtime_ms",
    "error",
];

/// One CSV row; `violation` marks a failed sandwich check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub fields: Vec<String>,
    pub violation: bool,
}

impl Row {
    pub fn error(&self) -> &str {
        &self.fields[13]
    }
}

/// Builds, decomposes and (within the cap) solves one grid point. Failures
/// land in the error column.
pub fn run_point(p: &GridPoint, family: FamilyKind, cap: usize) -> Row {
    let start = Instant::now();
    let mut f = vec![
        family.name().to_string(),
        p.r.to_string(),
        p.s.to_string(),
        p.t.to_string(),
        p.n.to_string(),
        p.m.map(|m| m.to_string()).unwrap_or_default(),
    ];
    f.resize(CSV_HEADER.len(), String::new());
    f[11] = p.seed.to_string();
    let mut violation = false;
    let mut errors = Vec::new();
    match p.family.build() {
        Err(e) => errors.push(e.to_string()),
        Ok(b) => {
            let g = &b.graph;
            let (s, t, n) = (b.descriptor.s, b.descriptor.t, g.n());
            f[2] = s.to_string();
            f[3] = t.to_string();
            f[4] = n.to_string();
            if p.m.is_none() {
                f[5] = (turan_number(p.r, n) as i128 - g.edge_count() as i128).to_string();
            }
            f[6] = g.edge_count().to_string();
            let removed = match stability_decompose(g, p.r) {
                Ok(c) => {
                    f[7] = c.removed_total.to_string();
                    Some(c.removed_total)
                }
                Err(e) => {
                    errors.push(format!("engine: {e}"));
                    None
                }
            };
            let cfg = OracleConfig { cap, ..OracleConfig::default() };
            match (brute_g_r(g, p.r, &cfg), brute_g_star(g, p.r, &cfg)) {
                (Ok(gr), Ok(gs)) => {
                    f[8] = gr.value.to_string();
                    f[9] = (!gr.capped).to_string();
                    f[10] = if gs.capped { String::new() } else { gs.value.to_string() };
                    if let Some(rm) = removed.filter(|&rm| !gr.capped && gr.value > rm) {
                        violation = true;
                        errors.push(format!("sandwich violated: g_r {} > removed {rm}", gr.value));
                    }
                }
                (Err(e), _) | (_, Err(e)) => errors.push(format!("oracle: {e}")),
            }
        }
    }
    f[12] = start.elapsed().as_millis().to_string();
    f[13] = errors.join("; ");
    Row { fields: f, violation }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub csv: String,
    pub rows: usize,
    pub warnings: usize,
    pub violations: usize,
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Contract(format!("i/o: {e}"))
}

fn read_checkpoint(path: &Path) -> Result<BTreeMap<String, Row>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path).map_err(io_err)?;
    for rec in rd.records() {
        let Ok(rec) = rec else { continue };
        if rec.len() != CSV_HEADER.len() + 2 {
            continue;
        }
        let violation = &rec[1] == "1";
        done.insert(rec[0].to_string(), Row { fields: rec.iter().skip(2).map(str::to_string).collect(), violation });
    }
    Ok(done)
}

/// Runs every grid point on `threads` workers. Finished points are appended
/// to `checkpoint` as they complete and skipped on any later run that
/// contains the same point; the CSV is assembled in grid order.
pub fn run_experiment(spec: &ExperimentSpec, checkpoint: Option<&Path>, threads: usize) -> Result<ExperimentOutcome> {
    let points = grid(spec);
    let mut done = match checkpoint {
        Some(p) => read_checkpoint(p)?,
        None => BTreeMap::new(),
    };
    let sink = match checkpoint {
        Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p).map_err(io_err)?)),
        None => None,
    };
    let todo: Vec<&GridPoint> = points.iter().filter(|p| !done.contains_key(&p.key)).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(io_err)?;
    let fresh: Vec<(String, Row)> = pool.install(|| {
        todo.par_iter()
            .map(|p| {
                let row = run_point(p, spec.family, spec.cap);
                if let Some(sink) = &sink {
                    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                    let mut rec = vec![p.key.clone(), u8::from(row.violation).to_string()];
                    rec.extend(row.fields.iter().cloned());
                    if w.write_record(&rec).is_ok() {
                        if let Ok(bytes) = w.into_inner() {
                            let mut f = sink.lock().expect("checkpoint lock");
                            let _ = f.write_all(&bytes).and_then(|_| f.flush());
                        }
                    }
                }
                (p.key.clone(), row)
            })
            .collect()
    });
    done.extend(fresh);

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(io_err)?;
    let (mut warnings, mut violations) = (0, 0);
    for p in &points {
        let row = &done[&p.key];
        warnings += usize::from(!row.error().is_empty());
        violations += usize::from(row.violation);
        w.write_record(&row.fields).map_err(io_err)?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(io_err)?).map_err(io_err)?;
    Ok(ExperimentOutcome { csv, rows: points.len(), warnings, violations })
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err)?;
    }
    File::create(path).and_then(|mut f| f.write_all(contents)).map_err(io_err)
}
