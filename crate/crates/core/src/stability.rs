//! Constructive stability: peel a K_{r+1}-free graph to an r-partite one,
//! then delete covering sets until what remains is complete r-partite.
//!
//! Every covering step is audited: after it returns, the targeted
//! saturating non-edges are re-enumerated and each must have an endpoint in
//! the returned set.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::bitset::VertexSet;
use crate::error::{Error, ParseError, Result};
use crate::formats::LineCursor;
use crate::graph::{
    covered_edge_count, enumerate_cliques_in, find_clique, find_clique_in, greedy_clique_matching_in,
    partite_complement, Graph, DEFAULT_CLIQUE_CAP,
};
use crate::turan::{
    classify_nonedge_types, first_unsaturated_pair, min_degree_vertex, r_colouring, saturating_pairs,
    turan_number, within_low_degree_ceiling, DEFAULT_COLOUR_BUDGET,
};
use crate::Exact;

/// Limits for the searches the engine runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub colour_budget: u64,
    pub clique_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { colour_budget: DEFAULT_COLOUR_BUDGET, clique_cap: DEFAULT_CLIQUE_CAP }
    }
}

/// One removal step: the set removed and how many partite-complement edges
/// it covered at that moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub stage: String,
    pub set: VertexSet,
    pub covered: usize,
    pub exponent: Exact,
}

impl LedgerEntry {
    /// `covered / |set|^exponent`.
    pub fn empirical_constant(&self) -> f64 {
        if self.set.is_empty() {
            return 0.0;
        }
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        self.covered as f64 / (self.set.len() as f64).powf(e)
    }
}

fn ratio(num: usize, den: usize) -> Exact {
    Exact::new(BigInt::from(num), BigInt::from(den))
}

/// A covering set with the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub set: VertexSet,
    pub trace: Vec<LedgerEntry>,
}

/// Result of [`peel_to_r_partite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peel {
    pub removed: VertexSet,
    /// Removal order; each vertex had minimum degree in the residual graph.
    pub order: Vec<usize>,
    /// A proper r-colouring of `G - T`, classes ordered by least vertex.
    pub partition: Vec<VertexSet>,
}

/// Removes lowest-index minimum-degree vertices until the residual graph is
/// r-colourable.
///
/// Each removal from a non-r-partite residual is checked against the
/// degree ceiling `deg (3r-1) <= (3r-4) |residual|`.
pub fn peel_to_r_partite(g: &Graph, r: usize, budget: u64) -> Result<Peel> {
    if let Some(witness) = find_clique(g, r + 1) {
        return Err(Error::ContainsClique { k: r + 1, witness });
    }
    let mut residual = g.vertex_set();
    let mut order = Vec::new();
    loop {
        if let Some(partition) = r_colouring(g, &residual, r, budget)? {
            return Ok(Peel { removed: g.vertex_set().difference(&residual), order, partition });
        }
        let (v, deg) = min_degree_vertex(g, &residual).expect("a non-colourable residual is nonempty");
        if !within_low_degree_ceiling(r, deg, residual.len()) {
            return Err(Error::Contract(format!(
                "minimum degree {deg} exceeds (3r-4)/(3r-1) of {} residual vertices",
                residual.len()
            )));
        }
        residual.remove(v);
        order.push(v);
    }
}

/// The `t` members of `candidates` with the largest score, ties to the lower
/// index.
fn top_by_score(candidates: &VertexSet, t: usize, score: impl Fn(usize) -> usize) -> VertexSet {
    let mut ranked: Vec<(usize, usize)> = candidates.iter().map(|v| (score(v), v)).collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    VertexSet::from_iter(candidates.universe(), ranked.into_iter().take(t).map(|(_, v)| v))
}

/// A `t`-subset `W` of `v2` with `e(V_1, W) |V_2| >= e(V_1, V_2) t`: the `t`
/// vertices with most neighbours in `v1`.
pub fn averaging_subset(g: &Graph, v1: &VertexSet, v2: &VertexSet, t: usize) -> Result<VertexSet> {
    if t < 1 || t > v2.len() {
        return Err(Error::InvalidParams(format!("1 <= t <= |V_2| = {} (got t = {t})", v2.len())));
    }
    let w = top_by_score(v2, t, |v| g.degree_in(v, v1));
    let ew: usize = w.iter().map(|v| g.degree_in(v, v1)).sum();
    let e: usize = v2.iter().map(|v| g.degree_in(v, v1)).sum();
    if (ew as u128) * (v2.len() as u128) < (e as u128) * (t as u128) {
        return Err(Error::Contract(format!("averaging inequality failed: {ew} * {} < {e} * {t}", v2.len())));
    }
    Ok(w)
}

fn union_of(n: usize, sets: &[VertexSet]) -> VertexSet {
    let mut out = VertexSet::new(n);
    for s in sets {
        out.union_with(s);
    }
    out
}

/// Covers every k-saturating non-edge between classes `a` and `b`, where
/// `k` is the number of classes. Empty classes are allowed; the classes
/// must be independent and the graph they span K_k-free.
pub fn covering_set_part1(g: &Graph, classes: &[VertexSet], a: usize, b: usize) -> Result<Cover> {
    let cls = reorder(g, classes, a, b)?;
    let mut trace = Vec::new();
    let set = part1(g, &cls, "p1", &mut trace)?;
    Ok(Cover { set, trace })
}

/// Covers the non-edges `targets` between classes `a` and `b`, given a family
/// of vertex masks `H_i` (each spanning a K_{k-t}-free graph) such that every
/// target is (k-t)-saturating inside some `H_i`.
pub fn covering_set_part2(
    g: &Graph,
    classes: &[VertexSet],
    a: usize,
    b: usize,
    targets: &[(usize, usize)],
    family: &[VertexSet],
    t: usize,
) -> Result<Cover> {
    let cls = reorder(g, classes, a, b)?;
    let mut trace = Vec::new();
    let set = part2(g, &cls, targets, family, t, "p2", &mut trace)?;
    Ok(Cover { set, trace })
}

fn reorder(g: &Graph, classes: &[VertexSet], a: usize, b: usize) -> Result<Vec<VertexSet>> {
    if a == b || a >= classes.len() || b >= classes.len() {
        return Err(Error::InvalidParams(format!("two distinct class indices below {} (got {a}, {b})", classes.len())));
    }
    let mut cls = vec![classes[a].clone(), classes[b].clone()];
    cls.extend(classes.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, c)| c.clone()));
    partite_complement(g, &cls)?;
    for (i, c) in cls.iter().enumerate() {
        if g.edges_within(c) != 0 {
            return Err(Error::Contract(format!("class {i} is not independent")));
        }
    }
    let body = union_of(g.n(), &cls);
    if let Some(witness) = find_clique_in(g, &body, cls.len()) {
        return Err(Error::ContainsClique { k: cls.len(), witness });
    }
    Ok(cls)
}

fn smaller(a: &VertexSet, b: &VertexSet) -> VertexSet {
    if b.len() < a.len() { b.clone() } else { a.clone() }
}

fn nonedges_between(g: &Graph, y: &VertexSet, s: &VertexSet) -> usize {
    y.iter().map(|v| s.len() - g.degree_in(v, s)).sum()
}

fn audit_cover(targets: &[(usize, usize)], set: &VertexSet, label: &str) -> Result<()> {
    match targets.iter().find(|&&(u, v)| !set.contains(u) && !set.contains(v)) {
        Some((u, v)) => Err(Error::Audit(format!("{label}: non-edge {u}-{v} left uncovered"))),
        None => Ok(()),
    }
}

fn part1(g: &Graph, cls: &[VertexSet], label: &str, trace: &mut Vec<LedgerEntry>) -> Result<VertexSet> {
    let n = g.n();
    let k = cls.len();
    let (a, b) = (&cls[0], &cls[1]);
    let body = union_of(n, cls);
    let targets = saturating_pairs(g, &body, a, b, k)?;

    let (set, branch) = if targets.is_empty() {
        (VertexSet::new(n), "a")
    } else if k == 2 {
        (smaller(a, b), "b")
    } else {
        let matching = greedy_clique_matching_in(g, &cls[2..], k - 2);
        if matching.is_empty() {
            return Err(Error::Contract(format!("{label}: saturating pair but no K_{} in the other classes", k - 2)));
        }
        let y = matching.vertices(n);
        let dense_clique = matching.cliques.iter().any(|kq| {
            let nk = g.common_neighbors(kq);
            2 * nk.intersection_len(a) > a.len() && 2 * nk.intersection_len(b) > b.len()
        });
        if dense_clique {
            (smaller(a, b), "c")
        } else {
            let (ne_a, ne_b) = (nonedges_between(g, &y, a), nonedges_between(g, &y, b));
            let (side, ne) = if ne_a * b.len() >= ne_b * a.len() { (a, ne_a) } else { (b, ne_b) };
            if 4 * (k - 2) * ne < side.len() * y.len() {
                return Err(Error::Contract(format!(
                    "{label}: only {ne} non-edges between the matching and the chosen side"
                )));
            }
            let family: Vec<VertexSet> = y.iter().map(|v| g.neighbors(v).intersection(&body)).collect();
            let r0 = part2(g, cls, &targets, &family, 1, &format!("{label}/d"), trace)?;
            if r0.len() > side.len() {
                let l = matching.len() as u128;
                if l.checked_pow(k as u32 - 1).is_none_or(|p| p >= side.len() as u128) {
                    (side.clone(), "e-side")
                } else {
                    (r0, "e-r0")
                }
            } else {
                let score = |w: usize| y.len() - g.degree_in(w, &y);
                let extra = top_by_score(side, r0.len(), score);
                let got: usize = extra.iter().map(score).sum();
                if (got as u128) * (side.len() as u128) < (ne as u128) * (r0.len() as u128) {
                    return Err(Error::Contract(format!("{label}: averaging inequality failed")));
                }
                (r0.union(&extra), "f")
            }
        }
    };
    audit_cover(&targets, &set, label)?;
    let comp = partite_complement(g, cls)?;
    trace.push(LedgerEntry {
        stage: format!("{label}.k{k}.{branch}"),
        covered: covered_edge_count(&comp, &set),
        set: set.clone(),
        exponent: ratio(k, k - 1),
    });
    Ok(set)
}

/// Index subsets of `pool` of size `size`, lexicographic.
fn combinations(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

fn part2(
    g: &Graph,
    cls: &[VertexSet],
    targets: &[(usize, usize)],
    family: &[VertexSet],
    t: usize,
    label: &str,
    trace: &mut Vec<LedgerEntry>,
) -> Result<VertexSet> {
    let n = g.n();
    let k = cls.len();
    if t < 1 || k < t + 2 {
        return Err(Error::InvalidParams(format!("t >= 1 and k - t >= 2 (got k = {k}, t = {t})")));
    }
    let kt = k - t;
    for &(u, v) in targets {
        let ok = family.iter().any(|f| {
            f.contains(u) && f.contains(v) && {
                let common = g.neighbors(u).intersection(g.neighbors(v)).intersection(f);
                find_clique_in(g, &common, kt - 2).is_some()
            }
        });
        if !ok {
            return Err(Error::Audit(format!("{label}: non-edge {u}-{v} is not {kt}-saturating in any family member")));
        }
    }
    if targets.is_empty() {
        return Ok(VertexSet::new(n));
    }
    let xs: Vec<usize> = (2..k).collect();
    let combos = combinations(&xs, kt - 2);
    let mut alive = union_of(n, cls);
    let mut out = VertexSet::new(n);
    let mut stage = 0;
    for f in family {
        for combo in &combos {
            stage += 1;
            let sub: Vec<VertexSet> = [0, 1]
                .iter()
                .chain(combo)
                .map(|&i| cls[i].intersection(f).intersection(&alive))
                .collect();
            let ri = part1(g, &sub, &format!("{label}/s{stage}"), trace)?;
            if ri.is_empty() {
                continue;
            }
            let residual: Vec<VertexSet> = cls.iter().map(|c| c.intersection(&alive)).collect();
            let comp = partite_complement(g, &residual)?;
            trace.push(LedgerEntry {
                stage: format!("{label}/s{stage}"),
                covered: covered_edge_count(&comp, &ri),
                set: ri.clone(),
                exponent: ratio(kt, kt - 1),
            });
            alive.difference_with(&ri);
            out.union_with(&ri);
        }
    }
    audit_cover(targets, &out, label)?;
    Ok(out)
}

/// One `S_t(i,j)` as removed: the vertices it added beyond earlier sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    pub t: usize,
    pub i: usize,
    pub j: usize,
    pub set: VertexSet,
}

/// Output of [`stability_decompose`], enough to re-check the deletion
/// without rerunning the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityCertificate {
    pub r: usize,
    pub n: usize,
    pub edges: usize,
    pub peel: VertexSet,
    pub partition: Vec<VertexSet>,
    pub covers: Vec<CoverSet>,
    /// One entry per nonempty cover set, counted in the residual complement.
    pub ledger: Vec<LedgerEntry>,
    /// The nested steps of every covering call.
    pub trace: Vec<LedgerEntry>,
    pub removed_total: usize,
}

impl StabilityCertificate {
    /// `m = t_r(n) - e(G)`.
    pub fn deficit(&self) -> i128 {
        turan_number(self.r, self.n) as i128 - self.edges as i128
    }

    /// `eps = m / n^2`.
    pub fn eps(&self) -> Exact {
        if self.n == 0 {
            return Exact::from_integer(0.into());
        }
        Exact::new(BigInt::from(self.deficit()), BigInt::from(self.n * self.n))
    }

    /// `eps <= n^{-(r-1)/r}`, i.e. `m^r <= n^{r+1}`, where the deletion bound
    /// is not trivial.
    pub fn in_regime(&self) -> bool {
        let m = BigInt::from(self.deficit().max(0));
        num_traits::pow(m, self.r) <= num_traits::pow(BigInt::from(self.n), self.r + 1)
    }

    /// `eps <= (30 r^3)^{-1}`.
    pub fn in_peel_regime(&self) -> bool {
        let r = self.r as i128;
        self.deficit() * 30 * r * r * r <= (self.n * self.n) as i128
    }

    /// `|T| < 10 r^2 (3r-1) eps n`, cross-multiplied: `|T| n < 10 r^2 (3r-1) m`.
    pub fn peel_bound_holds(&self) -> bool {
        let r = self.r as i128;
        ((self.peel.len() * self.n) as i128) < 10 * r * r * (3 * r - 1) * self.deficit()
    }

    /// `removed_total / (eps n^{(r-1)/r} n)`; `None` when `eps = 0`.
    pub fn c_ratio(&self) -> Option<f64> {
        let m = self.deficit();
        if m <= 0 {
            return None;
        }
        let n = self.n as f64;
        let eps = m as f64 / (n * n);
        Some(self.removed_total as f64 / (eps * n.powf((self.r - 1) as f64 / self.r as f64) * n))
    }

    pub fn removed(&self) -> VertexSet {
        let mut out = self.peel.clone();
        for c in &self.covers {
            out.union_with(&c.set);
        }
        out
    }
}

/// Deletes a peel set `T` and covering sets `S_t(i,j)` from an
/// (r+1)-saturated graph so that the rest is complete r-partite.
pub fn stability_decompose(g: &Graph, r: usize) -> Result<StabilityCertificate> {
    stability_decompose_with(g, r, &EngineConfig::default())
}

pub fn stability_decompose_with(g: &Graph, r: usize, cfg: &EngineConfig) -> Result<StabilityCertificate> {
    let n = g.n();
    if r < 2 {
        return Err(Error::InvalidParams(format!("r >= 2 (got r = {r})")));
    }
    if let Some(witness) = find_clique(g, r + 1) {
        return Err(Error::ContainsClique { k: r + 1, witness });
    }
    if let Some((u, v)) = first_unsaturated_pair(g, r) {
        return Err(Error::NotSaturated { k: r + 1, u, v });
    }
    let peel = peel_to_r_partite(g, r, cfg.colour_budget)?;
    let parts = &peel.partition;
    let body = union_of(n, parts);
    let types = classify_nonedge_types(g, r, parts, &peel.removed)?;
    let class_of = |v: usize| parts.iter().position(|c| c.contains(v)).expect("vertex in a class");

    let mut removed = peel.removed.clone();
    let mut covers = Vec::new();
    let mut ledger = Vec::new();
    let mut trace = Vec::new();
    for t in 1..r {
        let cliques = enumerate_cliques_in(g, &peel.removed, t, cfg.clique_cap)?;
        let family: Vec<VertexSet> = cliques.iter().map(|kq| g.common_neighbors(kq).intersection(&body)).collect();
        for i in 0..r {
            for j in i + 1..r {
                let targets: Vec<(usize, usize)> = types
                    .iter()
                    .filter(|ty| ty.has_type(t))
                    .filter_map(|ty| match (class_of(ty.u), class_of(ty.v)) {
                        (ci, cj) if ci == i && cj == j => Some((ty.u, ty.v)),
                        (ci, cj) if ci == j && cj == i => Some((ty.v, ty.u)),
                        _ => None,
                    })
                    .collect();
                if targets.is_empty() {
                    continue;
                }
                let mut cls = vec![parts[i].clone(), parts[j].clone()];
                cls.extend((0..r).filter(|&x| x != i && x != j).map(|x| parts[x].clone()));
                cls.push(VertexSet::new(n));
                let label = format!("t{t}.V{i}V{j}");
                let s = part2(g, &cls, &targets, &family, t, &label, &mut trace)?;
                let fresh = s.difference(&removed);
                if fresh.is_empty() {
                    continue;
                }
                let residual: Vec<VertexSet> = parts.iter().map(|c| c.difference(&removed)).collect();
                let comp = partite_complement(g, &residual)?;
                ledger.push(LedgerEntry {
                    stage: label,
                    covered: covered_edge_count(&comp, &fresh),
                    set: fresh.clone(),
                    exponent: ratio(r + 1 - t, r - t),
                });
                removed.union_with(&fresh);
                covers.push(CoverSet { t, i, j, set: fresh });
            }
        }
    }

    let cert = StabilityCertificate {
        r,
        n,
        edges: g.edge_count(),
        peel: peel.removed,
        partition: peel.partition,
        covers,
        ledger,
        trace,
        removed_total: removed.len(),
    };
    let check = validate_certificate(g, &cert);
    if !check.is_valid() {
        return Err(Error::Audit(check.failures.join("; ")));
    }
    Ok(cert)
}

/// Structured outcome of [`validate_certificate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateCheck {
    pub failures: Vec<String>,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks a certificate from scratch: removal sets disjoint and inside
/// `V(g)`, and `g` minus them complete multipartite on the stated classes
/// with at most `r` nonempty classes.
pub fn validate_certificate(g: &Graph, c: &StabilityCertificate) -> CertificateCheck {
    let mut failures = Vec::new();
    let n = g.n();
    if c.n != n {
        failures.push(format!("certificate is for {} vertices, graph has {n}", c.n));
        return CertificateCheck { failures };
    }
    let all_sets = std::iter::once(("peel set".to_string(), &c.peel))
        .chain(c.covers.iter().map(|s| (format!("cover t={} i={} j={}", s.t, s.i, s.j), &s.set)))
        .chain(c.partition.iter().enumerate().map(|(i, p)| (format!("class {i}"), p)));
    for (name, set) in all_sets {
        if set.universe() != n {
            failures.push(format!("{name} is over {} vertices, graph has {n}", set.universe()));
        }
    }
    if !failures.is_empty() {
        return CertificateCheck { failures };
    }

    let mut removed = c.peel.clone();
    for s in &c.covers {
        if let Some(v) = removed.intersection(&s.set).first() {
            failures.push(format!("vertex {v} removed twice (cover t={} i={} j={})", s.t, s.i, s.j));
        }
        removed.union_with(&s.set);
    }
    if removed.len() != c.removed_total {
        failures.push(format!("removed_total {} but the sets remove {}", c.removed_total, removed.len()));
    }
    let residual = g.vertex_set().difference(&removed);
    let classes: Vec<VertexSet> = c.partition.iter().map(|p| p.intersection(&residual)).collect();
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate().skip(i + 1) {
            if let Some(v) = ci.intersection(cj).first() {
                failures.push(format!("vertex {v} in classes {i} and {j}"));
            }
        }
        if g.edges_within(ci) != 0 {
            failures.push(format!("class {i} spans an edge"));
        }
    }
    if let Some(v) = residual.difference(&union_of(n, &classes)).first() {
        failures.push(format!("remaining vertex {v} is in no class"));
    }
    let nonempty = classes.iter().filter(|c| !c.is_empty()).count();
    if nonempty > c.r {
        failures.push(format!("{nonempty} nonempty classes, at most {} allowed", c.r));
    }
    'outer: for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate().skip(i + 1) {
            for u in ci.iter() {
                if let Some(v) = cj.difference(g.neighbors(u)).first() {
                    failures.push(format!("missing cross edge {}-{} between classes {i} and {j}", u.min(v), u.max(v)));
                    break 'outer;
                }
            }
        }
    }
    CertificateCheck { failures }
}

fn write_set(f: &mut fmt::Formatter<'_>, head: &str, set: &VertexSet) -> fmt::Result {
    write!(f, "{head}:")?;
    for v in set.iter() {
        write!(f, " {v}")?;
    }
    writeln!(f)
}

fn write_entry(f: &mut fmt::Formatter<'_>, kind: &str, e: &LedgerEntry) -> fmt::Result {
    write_set(f, &format!("{kind} stage={} covered={} exponent={}", e.stage, e.covered, e.exponent), &e.set)
}

/// Text form: `key=value` lines then vertex-set lines `head: v v v`.
impl fmt::Display for StabilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "r={}", self.r)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "edges={}", self.edges)?;
        writeln!(f, "removed_total={}", self.removed_total)?;
        writeln!(f, "deficit={}", self.deficit())?;
        writeln!(f, "in_regime={}", self.in_regime())?;
        write_set(f, "peel", &self.peel)?;
        for (i, c) in self.partition.iter().enumerate() {
            write_set(f, &format!("class {i}"), c)?;
        }
        for c in &self.covers {
            write_set(f, &format!("cover t={} i={} j={}", c.t, c.i, c.j), &c.set)?;
        }
        for e in &self.ledger {
            write_entry(f, "ledger", e)?;
        }
        for e in &self.trace {
            write_entry(f, "trace", e)?;
        }
        Ok(())
    }
}

fn field<'a>(words: &[&'a str], key: &str, at: usize) -> std::result::Result<&'a str, ParseError> {
    words
        .iter()
        .find_map(|w| w.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .ok_or_else(|| ParseError::new(at, format!("missing field `{key}`")))
}

fn num<T: FromStr>(s: &str, at: usize) -> std::result::Result<T, ParseError> {
    s.parse().map_err(|_| ParseError::new(at, format!("invalid number `{s}`")))
}

impl FromStr for StabilityCertificate {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let mut cur = LineCursor::new(text);
        let mut scalars = std::collections::HashMap::new();
        let mut sets: Vec<(usize, &str, &str)> = Vec::new();
        while let Some((at, line)) = cur.next_nonempty() {
            if let Some((head, body)) = line.split_once(':') {
                sets.push((at, head.trim(), body));
            } else if let Some((k, v)) = line.split_once('=') {
                scalars.insert(k.trim(), (at, v.trim()));
            } else {
                return Err(ParseError::new(at, "expected `key=value` or `head: vertices`"));
            }
        }
        let scalar = |k: &str| -> std::result::Result<usize, ParseError> {
            let (at, v) = scalars.get(k).ok_or_else(|| ParseError::new(text.len(), format!("missing `{k}`")))?;
            num(v, *at)
        };
        let (r, n, edges, removed_total) = (scalar("r")?, scalar("n")?, scalar("edges")?, scalar("removed_total")?);
        let parse_set = |at: usize, head: &str, body: &str| -> std::result::Result<VertexSet, ParseError> {
            let mut s = VertexSet::new(n);
            let base = at + head.len() + 1;
            for w in body.split_whitespace() {
                let off = base + body.find(w).unwrap_or(0);
                let v: usize = num(w, off)?;
                if v >= n {
                    return Err(ParseError::new(off, format!("vertex {v} out of range for n = {n}")));
                }
                s.insert(v);
            }
            Ok(s)
        };
        let mut cert = StabilityCertificate {
            r,
            n,
            edges,
            peel: VertexSet::new(n),
            partition: Vec::new(),
            covers: Vec::new(),
            ledger: Vec::new(),
            trace: Vec::new(),
            removed_total,
        };
        for (at, head, body) in sets {
            let set = parse_set(at, head, body)?;
            let words: Vec<&str> = head.split_whitespace().collect();
            match words.first().copied() {
                Some("peel") => cert.peel = set,
                Some("class") => {
                    let i: usize = num(words.get(1).copied().unwrap_or(""), at)?;
                    if i != cert.partition.len() {
                        return Err(ParseError::new(at, format!("class {i} out of order")));
                    }
                    cert.partition.push(set);
                }
                Some("cover") => cert.covers.push(CoverSet {
                    t: num(field(&words, "t", at)?, at)?,
                    i: num(field(&words, "i", at)?, at)?,
                    j: num(field(&words, "j", at)?, at)?,
                    set,
                }),
                Some(kind @ ("ledger" | "trace")) => {
                    let entry = LedgerEntry {
                        stage: field(&words, "stage", at)?.to_string(),
                        covered: num(field(&words, "covered", at)?, at)?,
                        exponent: num(field(&words, "exponent", at)?, at)?,
                        set,
                    };
                    if kind == "ledger" {
                        cert.ledger.push(entry);
                    } else {
                        cert.trace.push(entry);
                    }
                }
                _ => return Err(ParseError::new(at, format!("unknown line `{head}`"))),
            }
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_g_rs, build_h_rst, FinalParams};
    use crate::turan::{is_saturated, turan_graph};

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, vs.iter().copied())
    }

    #[test]
    fn peel_examples() {
        let p = peel_to_r_partite(turan_graph(3, 9).graph(), 3, 1000).unwrap();
        assert!(p.removed.is_empty());
        let p = peel_to_r_partite(&Graph::cycle(5), 2, 1000).unwrap();
        assert_eq!(p.order, vec![0]);
        assert_eq!(p.partition, vec![set(5, &[1, 3]), set(5, &[2, 4])]);
        assert!(peel_to_r_partite(&Graph::complete(3), 2, 1000).is_err());
    }

    #[test]
    fn averaging_examples() {
        let k = turan_graph(2, 8);
        let w = averaging_subset(k.graph(), k.class(0), k.class(1), 2).unwrap();
        assert_eq!(w, set(8, &[4, 5]));
        let e = Graph::new(8);
        assert_eq!(averaging_subset(&e, k.class(0), k.class(1), 3).unwrap().len(), 3);
        assert!(averaging_subset(&e, k.class(0), k.class(1), 0).is_err());
        assert!(averaging_subset(&e, k.class(0), k.class(1), 5).is_err());
    }

    #[test]
    fn part1_base_case_takes_smaller_side() {
        let g = Graph::new(5);
        let c = covering_set_part1(&g, &[set(5, &[0, 1, 2]), set(5, &[3, 4])], 0, 1).unwrap();
        assert_eq!(c.set, set(5, &[3, 4]));
        assert_eq!(c.trace.last().unwrap().covered, 6);
    }

    #[test]
    fn part1_complete_partite_is_empty() {
        // complete bipartite plus an empty third class is K_3-free
        let k = turan_graph(2, 6);
        let cls = [k.class(0).clone(), k.class(1).clone(), VertexSet::new(6)];
        let c = covering_set_part1(k.graph(), &cls, 0, 1).unwrap();
        assert!(c.set.is_empty());
        assert!(covering_set_part1(turan_graph(3, 9).graph(), turan_graph(3, 9).classes(), 0, 1).is_err());
    }

    #[test]
    fn part1_on_complement_of_g32() {
        let pg = build_g_rs(3, 2).unwrap();
        let comp = partite_complement(pg.graph(), pg.classes()).unwrap();
        let c = covering_set_part1(&comp, pg.classes(), 0, 1).unwrap();
        let targets = saturating_pairs(&comp, &comp.vertex_set(), pg.class(0), pg.class(1), 3).unwrap();
        assert!(!targets.is_empty());
        assert!(targets.iter().all(|&(u, v)| c.set.contains(u) || c.set.contains(v)));
    }

    #[test]
    fn part2_empty_targets() {
        let k = turan_graph(2, 6);
        let cls = [k.class(0).clone(), k.class(1).clone(), VertexSet::new(6)];
        let c = covering_set_part2(k.graph(), &cls, 0, 1, &[], &[], 1).unwrap();
        assert!(c.set.is_empty());
    }

    #[test]
    fn part2_rejects_unsupported_target() {
        let g = Graph::new(4);
        let cls = [set(4, &[0, 1]), set(4, &[2, 3]), VertexSet::new(4)];
        let err = covering_set_part2(&g, &cls, 0, 1, &[(0, 2)], &[set(4, &[1, 3])], 1).unwrap_err();
        assert!(matches!(err, Error::Audit(_)), "{err}");
    }

    #[test]
    fn decompose_turan_and_c5() {
        let k = turan_graph(3, 9);
        let c = stability_decompose(k.graph(), 3).unwrap();
        assert_eq!(c.removed_total, 0);
        let c5 = Graph::cycle(5);
        let c = stability_decompose(&c5, 2).unwrap();
        assert_eq!(c.removed_total, 2);
        assert!(validate_certificate(&c5, &c).is_valid());
        let rest = c5.vertex_set().difference(&c.removed());
        assert_eq!(c5.edges_within(&rest), 2);
    }

    #[test]
    fn tampered_certificate_names_missing_edge() {
        let c5 = Graph::cycle(5);
        let mut c = stability_decompose(&c5, 2).unwrap();
        c.covers.clear();
        c.removed_total = 1;
        let chk = validate_certificate(&c5, &c);
        assert_eq!(chk.failures, vec!["missing cross edge 1-4 between classes 0 and 1".to_string()]);
    }

    #[test]
    fn decompose_rejects_unsaturated() {
        assert!(matches!(stability_decompose(&Graph::path(4), 2), Err(Error::NotSaturated { .. })));
    }

    #[test]
    fn decompose_final_constructions() {
        for (r, s, t, n) in [(2, 2, 1, 20), (2, 2, 2, 40), (3, 2, 1, 49)] {
            let fc = build_h_rst(&FinalParams::new(r, s, t, n).unwrap()).unwrap();
            let g = fc.graph();
            assert!(is_saturated(g, r));
            let c = stability_decompose(g, r).unwrap();
            assert!(validate_certificate(g, &c).is_valid());
            if c.in_peel_regime() {
                assert!(c.peel_bound_holds());
            }
            let comp_total = {
                let comp = partite_complement(g, &c.partition.to_vec()).unwrap();
                let union = c.ledger.iter().fold(VertexSet::new(n), |acc, e| acc.union(&e.set));
                covered_edge_count(&comp, &union)
            };
            assert_eq!(c.ledger.iter().map(|e| e.covered).sum::<usize>(), comp_total);
        }
    }

    #[test]
    fn certificate_text_round_trip() {
        let fc = build_h_rst(&FinalParams::new(2, 2, 1, 20).unwrap()).unwrap();
        let c = stability_decompose(fc.graph(), 2).unwrap();
        let text = c.to_string();
        let back: StabilityCertificate = text.parse().unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_string(), text);
        let err = "r=2\nn=3\nedges=0\nremoved_total=0\npeel: 7\n".parse::<StabilityCertificate>().unwrap_err();
        assert_eq!(err.offset, 38);
    }
}
