//! The three-stage probabilistic construction: a Turán graph with `t` extra
//! vertices, random embeddings of `t` copies of `G_{r,s}` whose edges are
//! deleted, and a final maximal K_{r+1}-free completion.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::constructions::{build_g_rs, integer_root_floor};
use crate::error::{Error, Result};
use crate::graph::{find_clique, find_clique_in, max_bipartite_matching, Graph, PartitionedGraph};
use crate::turan::{is_saturated, turan_class_sizes, turan_number};
use crate::Exact;

/// Largest biclique side searched exactly by [`has_biclique`].
pub const EXACT_BICLIQUE_CAP: usize = 8;

/// Adds, in lexicographic order, every pair of `candidates` whose addition
/// keeps the graph K_k-free. One pass suffices: a rejected pair stays
/// rejected once more edges are present.
pub fn maximal_completion(g: &Graph, k: usize, candidates: &[(usize, usize)]) -> Result<Graph> {
    if let Some(witness) = find_clique(g, k) {
        return Err(Error::ContainsClique { k, witness });
    }
    let mut pairs: Vec<(usize, usize)> = candidates
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut out = g.clone();
    for (u, v) in pairs {
        if out.has_edge(u, v) {
            continue;
        }
        let common = out.neighbors(u).intersection(out.neighbors(v));
        if k < 2 || find_clique_in(&out, &common, k - 2).is_none() {
            out.add_edge(u, v);
        }
    }
    Ok(out)
}

/// All pairs `u < v` of an `n`-vertex graph.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Whether some `a`-subset of `left` and some `a`-subset of `right` are
/// completely joined. Exact; refuses `a` above [`EXACT_BICLIQUE_CAP`].
pub fn has_biclique(g: &Graph, left: &VertexSet, right: &VertexSet, a: usize) -> Result<bool> {
    if a == 0 {
        return Err(Error::InvalidParams("biclique side a >= 1".into()));
    }
    if a > EXACT_BICLIQUE_CAP {
        return Err(Error::CapExceeded { what: "exact biclique search", size: a, cap: EXACT_BICLIQUE_CAP });
    }
    let cands = left.to_vec();
    Ok(biclique_rec(g, &cands, 0, right.clone(), a, a))
}

fn biclique_rec(g: &Graph, cands: &[usize], from: usize, common: VertexSet, need: usize, a: usize) -> bool {
    if need == 0 {
        return true;
    }
    for i in from..cands.len() {
        if cands.len() - i < need {
            return false;
        }
        let next = common.intersection(g.neighbors(cands[i]));
        if next.len() >= a && biclique_rec(g, cands, i + 1, next, need - 1, a) {
            return true;
        }
    }
    false
}

/// Result of randomized greedy biclique sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueSample {
    pub samples: usize,
    pub hits: usize,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Greedy search for an `a x a` biclique from `samples` random orders of
/// `left`. A hit is a certificate; no hit is only evidence.
pub fn sample_biclique(
    g: &Graph,
    left: &VertexSet,
    right: &VertexSet,
    a: usize,
    samples: usize,
    seed: u64,
) -> BicliqueSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = left.to_vec();
    let mut out = BicliqueSample { samples, hits: 0, witness: None };
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let mut chosen = Vec::with_capacity(a);
        let mut common = right.clone();
        for &u in &order {
            let next = common.intersection(g.neighbors(u));
            if next.len() >= a {
                chosen.push(u);
                common = next;
                if chosen.len() == a {
                    break;
                }
            }
        }
        if chosen.len() == a {
            out.hits += 1;
            if out.witness.is_none() {
                chosen.sort_unstable();
                out.witness = Some((chosen, common.iter().take(a).collect()));
            }
        }
    }
    out
}

/// How `s` and the raw `t` are rounded from their real-valued formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rounding {
    #[default]
    Ceil,
    Floor,
}

/// Which parameter rule is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Regime {
    /// `s` and `t` exactly as the formulas give them; every inequality must hold.
    Strict,
    /// `s` lowered and `t` clamped until the embedding is feasible. The
    /// biclique inequality `delta n > 8 s^(r-1)` is then only reported.
    #[default]
    DeskScale,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomBuildParams {
    pub r: usize,
    pub delta: Exact,
    pub n: usize,
    pub seed: u64,
    pub rounding: Rounding,
    pub regime: Regime,
    /// Rebuilds attempted while sampling still finds a `delta n / 2` biclique.
    pub max_attempts: usize,
    /// Monte-Carlo samples per biclique or hit estimate.
    pub samples: usize,
}

impl RandomBuildParams {
    pub fn new(r: usize, delta: Exact, n: usize, seed: u64) -> Self {
        Self {
            r,
            delta,
            n,
            seed,
            rounding: Rounding::Ceil,
            regime: Regime::DeskScale,
            max_attempts: 3,
            samples: 200,
        }
    }

    fn delta_f64(&self) -> f64 {
        self.delta.to_f64().unwrap_or(f64::NAN)
    }

    /// `B(delta) = 16 r^-2 delta^-1 ln(2e/delta)`.
    pub fn b(&self) -> f64 {
        let d = self.delta_f64();
        16.0 / ((self.r * self.r) as f64 * d) * (1.0 + (2.0 / d).ln())
    }

    /// `C(delta) = 4 r B(delta)`.
    pub fn c(&self) -> f64 {
        4.0 * self.r as f64 * self.b()
    }

    /// An exact rational no larger than `C(delta)`.
    pub fn c_lower(&self) -> Exact {
        let d = self.delta_f64();
        let ln_lo = (2.0 / d).ln() * (1.0 - 1e-12) - 1e-12;
        let ln = Exact::from_float(ln_lo.max(0.0)).expect("finite logarithm");
        let one = Exact::from_integer(1.into());
        let scale = Exact::from_integer(BigInt::from(64)) / (Exact::from_integer(self.r.into()) * &self.delta);
        scale * (one + ln)
    }

    /// Derives `(s, t)` and checks every inequality exactly.
    pub fn derive(&self) -> Result<Derived> {
        let (r, n) = (self.r, self.n);
        if r < 2 {
            return Err(Error::InvalidParams(format!("r >= 2 (got r = {r})")));
        }
        let zero = Exact::from_integer(0.into());
        let one = Exact::from_integer(1.into());
        if self.delta <= zero || self.delta >= one {
            return Err(Error::InvalidParams(format!("0 < delta < 1 (got {})", self.delta)));
        }
        let n_e = Exact::from_integer(n.into());
        let root_floor = integer_root_floor(&n_e, r);
        let root = match self.rounding {
            Rounding::Floor => root_floor,
            Rounding::Ceil if root_floor.pow(r as u32) == n => root_floor,
            Rounding::Ceil => root_floor + 1,
        };
        let t_raw = self.b() * (n as f64).powf(1.0 / r as f64);
        let t_formula = match self.rounding {
            Rounding::Ceil => t_raw.ceil(),
            Rounding::Floor => t_raw.floor(),
        } as usize;
        let claim3 = |s: usize| &self.delta * &n_e > Exact::from_integer(BigInt::from(8 * s.pow(r as u32 - 1)));

        match self.regime {
            Regime::Strict => {
                let s = root;
                let t = t_formula;
                if s < 2 {
                    return Err(Error::InvalidParams(format!("s >= 2 (got s = {s})")));
                }
                if !claim3(s) {
                    return Err(Error::InvalidParams(format!(
                        "delta n / 4 > 2 s^(r-1) (delta n / 4 = {}, 2 s^(r-1) = {})",
                        self.delta_f64() * n as f64 / 4.0,
                        2 * s.pow(r as u32 - 1)
                    )));
                }
                feasible(r, n, s, t)?;
                Ok(Derived { s, t, t_formula, claim3_regime: true })
            }
            Regime::DeskScale => {
                let mut s = root;
                while s >= 2 && feasible(r, n, s, 1).is_err() {
                    s -= 1;
                }
                if s < 2 {
                    return feasible(r, n, 2, 1).map(|_| unreachable!());
                }
                let mut t = 1;
                while t < t_formula && feasible(r, n, s, t + 1).is_ok() {
                    t += 1;
                }
                Ok(Derived { s, t, t_formula, claim3_regime: claim3(s) })
            }
        }
    }
}

/// Parameters after rounding and validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Derived {
    pub s: usize,
    pub t: usize,
    /// `t` as the formula gives it, before any clamping.
    pub t_formula: usize,
    /// Whether `delta n / 4 > 2 s^{r-1}`.
    pub claim3_regime: bool,
}

fn feasible(r: usize, n: usize, s: usize, t: usize) -> Result<()> {
    if t < 1 || t >= n {
        return Err(Error::InvalidParams(format!("1 <= t < n (got t = {t})")));
    }
    if r * s.pow(r as u32 - 2) * t >= n - 1 - t {
        return Err(Error::InvalidParams(format!(
            "s^(r-2) t < (n-1-t)/r (s = {s}, t = {t}, n = {n})"
        )));
    }
    let sizes = turan_class_sizes(r, n - t);
    let big = 2 * s.pow(r as u32 - 1);
    for (i, &c) in sizes.iter().enumerate().take(2) {
        if big > c.saturating_sub(1) {
            return Err(Error::InvalidParams(format!(
                "2 s^(r-1) <= |V'_{}| ({big} > {})",
                i + 1,
                c.saturating_sub(1)
            )));
        }
    }
    let small = s.pow(r as u32 - 2);
    for (i, &c) in sizes.iter().enumerate().skip(2) {
        if t * small > c.saturating_sub(1) {
            return Err(Error::InvalidParams(format!(
                "t s^(r-2) <= |V'_{}| ({} > {})",
                i + 1,
                t * small,
                c.saturating_sub(1)
            )));
        }
    }
    Ok(())
}

/// `f_p` for every copy: `maps[p][h]` is the image of vertex `h` of `G_{r,s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingTuple {
    pub maps: Vec<Vec<usize>>,
}

impl EmbeddingTuple {
    pub fn image(&self, p: usize, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.maps[p].iter().copied())
    }
}

/// Everything a build produces.
#[derive(Clone, Debug)]
pub struct RandomBuild {
    pub params: RandomBuildParams,
    pub derived: Derived,
    /// `V_1..V_r, V_{r+1}` with the final graph.
    pub pg: PartitionedGraph,
    /// The graph after stage II.
    pub stage2: Graph,
    pub embedding: EmbeddingTuple,
    pub anchors: Vec<usize>,
    pub report: RandomReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomReport {
    pub attempts: usize,
    pub edges: usize,
    pub turan: u64,
    pub c_delta: f64,
    pub edge_bound_holds: bool,
    pub claim1_stage2: bool,
    pub claim1_final: bool,
    pub claim2: bool,
    pub anchor_property: bool,
    pub v1v2_unchanged: bool,
    pub saturated: bool,
    pub biclique_side: usize,
    pub biclique_samples: usize,
    pub biclique_hits: usize,
    pub hit_samples: usize,
    pub pair_hit_rate: f64,
    pub copy_miss_rate: f64,
    pub pair_miss_bound: f64,
}

impl RandomReport {
    /// Whether every exactly checked claim holds.
    pub fn exact_checks_pass(&self) -> bool {
        self.edge_bound_holds
            && self.claim1_stage2
            && self.claim1_final
            && self.claim2
            && self.anchor_property
            && self.v1v2_unchanged
            && self.saturated
    }
}

impl RandomBuild {
    /// The report as `key=value` lines.
    pub fn report_text(&self) -> String {
        let p = &self.params;
        let d = &self.derived;
        let rep = &self.report;
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("r", &p.r);
        kv("delta", &p.delta);
        kv("n", &p.n);
        kv("seed", &p.seed);
        kv("rounding", &format!("{:?}", p.rounding).to_lowercase());
        kv("regime", &format!("{:?}", p.regime).to_lowercase());
        kv("B", &format!("{:.6}", p.b()));
        kv("C", &format!("{:.6}", rep.c_delta));
        kv("s", &d.s);
        kv("t", &d.t);
        kv("t_formula", &d.t_formula);
        kv("claim3_regime", &d.claim3_regime);
        kv("attempts", &rep.attempts);
        kv("edges", &rep.edges);
        kv("turan", &rep.turan);
        kv("edge_bound", &rep.edge_bound_holds);
        kv("claim1_stage2", &rep.claim1_stage2);
        kv("claim1_final", &rep.claim1_final);
        kv("claim2", &rep.claim2);
        kv("anchor_property", &rep.anchor_property);
        kv("v1v2_unchanged", &rep.v1v2_unchanged);
        kv("saturated", &rep.saturated);
        kv("biclique_side", &rep.biclique_side);
        kv("biclique_samples", &rep.biclique_samples);
        kv("biclique_hits", &rep.biclique_hits);
        kv("hit_samples", &rep.hit_samples);
        kv("pair_hit_rate", &format!("{:.6}", rep.pair_hit_rate));
        kv("copy_miss_rate", &format!("{:.6}", rep.copy_miss_rate));
        kv("pair_miss_bound", &format!("{:.6}", rep.pair_miss_bound));
        s
    }
}

/// Runs the three stages, resampling the embeddings while greedy sampling
/// still finds a `delta n / 2` biclique between `V_1` and `V_2`.
pub fn build_random(p: &RandomBuildParams) -> Result<RandomBuild> {
    let derived = p.derive()?;
    let attempts = p.max_attempts.max(1);
    let mut last = None;
    for attempt in 0..attempts {
        let b = build_attempt(p, derived, attempt)?;
        let clean = b.report.biclique_hits == 0;
        last = Some(b);
        if clean {
            break;
        }
    }
    Ok(last.expect("at least one attempt"))
}

fn build_attempt(p: &RandomBuildParams, derived: Derived, attempt: usize) -> Result<RandomBuild> {
    let (r, n) = (p.r, p.n);
    let Derived { s, t, .. } = derived;
    let aux = build_g_rs(r, s)?;
    let m = aux.graph().n();

    let sizes = turan_class_sizes(r, n - t);
    let mut classes = Vec::with_capacity(r + 1);
    let mut start = 0;
    for &c in &sizes {
        classes.push(VertexSet::range(n, start, start + c));
        start += c;
    }
    classes.push(VertexSet::range(n, n - t, n));
    let anchors: Vec<usize> = classes[..r].iter().map(|c| c.first().expect("nonempty class")).collect();
    let free: Vec<Vec<usize>> = classes[..r].iter().zip(&anchors).map(|(c, &a)| c.iter().filter(|&v| v != a).collect()).collect();

    let mut maps = vec![vec![usize::MAX; m]; t];
    for (p_idx, map) in maps.iter_mut().enumerate() {
        for i in 0..r {
            let members = aux.class(i).to_vec();
            let images: Vec<usize> = if i < 2 {
                let stream = ((attempt * t + p_idx) * 2 + i) as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
                rng.set_stream(stream);
                let mut pool = free[i].clone();
                let (chosen, _) = pool.partial_shuffle(&mut rng, members.len());
                chosen.to_vec()
            } else {
                free[i][p_idx * members.len()..(p_idx + 1) * members.len()].to_vec()
            };
            for (h, y) in members.into_iter().zip(images) {
                map[h] = y;
            }
        }
    }
    let embedding = EmbeddingTuple { maps };

    let mut g = Graph::new(n);
    for i in 0..r {
        for j in i + 1..r {
            for u in classes[i].iter() {
                for v in classes[j].iter() {
                    g.add_edge(u, v);
                }
            }
        }
    }
    for (p_idx, map) in embedding.maps.iter().enumerate() {
        for (a, b) in aux.graph().edges() {
            g.remove_edge(map[a], map[b]);
        }
        for &y in map {
            g.add_edge(n - t + p_idx, y);
        }
    }
    let stage2 = g;

    let claim1_stage2 = find_clique(&stage2, r + 1).is_none();
    if !claim1_stage2 {
        return Err(Error::Contract(format!("stage II graph contains K_{}", r + 1)));
    }
    let fin = maximal_completion(&stage2, r + 1, &all_pairs(n))?;

    let claim2 = classes[0].iter().all(|u| {
        classes[1].iter().all(|v| {
            stage2.has_edge(u, v) || {
                let common = stage2.neighbors(u).intersection(stage2.neighbors(v));
                find_clique_in(&stage2, &common, r - 1).is_some()
            }
        })
    });
    let anchor_property = anchors_ok(&stage2, &classes[..r], &anchors);
    let v1v2_unchanged = classes[0]
        .iter()
        .all(|u| classes[1].iter().all(|v| stage2.has_edge(u, v) == fin.has_edge(u, v)));

    let edges = fin.edge_count();
    let turan = turan_number(r, n);
    let n_pow_lo = integer_root_floor(&Exact::from_integer(BigInt::from(n).pow(r as u32 + 1)), r);
    let bound = Exact::from_integer(BigInt::from(turan)) - p.c_lower() * Exact::from_integer(n_pow_lo.into());
    let edge_bound_holds = Exact::from_integer(edges.into()) >= bound;

    let a = (p.delta_f64() * n as f64 / 2.0).floor() as usize;
    let sample_seed = p.seed ^ ((attempt as u64) << 32) ^ 0x5eed;
    let bic = sample_biclique(&stage2, &classes[0], &classes[1], a.max(1), p.samples, sample_seed);
    let (pair_hit_rate, copy_miss_rate) =
        hit_accounting(&aux, &embedding, &free, a.max(1), p.samples, sample_seed.wrapping_add(1));
    let d = p.delta_f64();
    let rr = r as f64;

    let report = RandomReport {
        attempts: attempt + 1,
        edges,
        turan,
        c_delta: p.c(),
        edge_bound_holds,
        claim1_stage2,
        claim1_final: find_clique(&fin, r + 1).is_none(),
        claim2,
        anchor_property,
        v1v2_unchanged,
        saturated: is_saturated(&fin, r),
        biclique_side: a,
        biclique_samples: bic.samples,
        biclique_hits: bic.hits,
        hit_samples: p.samples,
        pair_hit_rate,
        copy_miss_rate,
        pair_miss_bound: (-(d * d * rr * rr) / 16.0).exp(),
    };
    Ok(RandomBuild {
        params: p.clone(),
        derived,
        pg: PartitionedGraph::new(fin, classes)?,
        stage2,
        embedding,
        anchors,
        report,
    })
}

/// Any pair inside `V_i` completes a K_{r+1} with the other anchors.
fn anchors_ok(g: &Graph, classes: &[VertexSet], anchors: &[usize]) -> bool {
    for (i, c) in classes.iter().enumerate() {
        let others: Vec<usize> = anchors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
        if !crate::graph::is_clique(g, &others) {
            return false;
        }
        if !c.iter().all(|u| others.iter().all(|&a| g.has_edge(u, a))) {
            return false;
        }
    }
    true
}

/// Samples random `a`-subsets `A` of `V'_1` and `B` of `V'_2` and counts, for
/// every copy, how many matching edges `f(y_i) f(z_i)` land in `A x B`.
/// Returns the per-pair hit rate and the fraction of (sample, copy) events
/// with no hit at all.
fn hit_accounting(
    aux: &PartitionedGraph,
    emb: &EmbeddingTuple,
    free: &[Vec<usize>],
    a: usize,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let matching = max_bipartite_matching(aux.graph(), aux.class(0), aux.class(1));
    if samples == 0 || emb.maps.is_empty() || matching.is_empty() {
        return (0.0, 0.0);
    }
    let n = free.iter().flatten().max().map_or(0, |&v| v + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut hits, mut misses) = (0usize, 0usize);
    let (mut p1, mut p2) = (free[0].clone(), free[1].clone());
    for _ in 0..samples {
        let a1 = a.min(p1.len());
        let a2 = a.min(p2.len());
        let set_a = VertexSet::from_iter(n, p1.partial_shuffle(&mut rng, a1).0.iter().copied());
        let set_b = VertexSet::from_iter(n, p2.partial_shuffle(&mut rng, a2).0.iter().copied());
        for map in &emb.maps {
            let h = matching
                .iter()
                .filter(|&&(y, z)| set_a.contains(map[y]) && set_b.contains(map[z]))
                .count();
            hits += h;
            misses += usize::from(h == 0);
        }
    }
    let events = (samples * emb.maps.len()) as f64;
    (hits as f64 / (events * matching.len() as f64), misses as f64 / events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Exact {
        Exact::new(1.into(), 2.into())
    }

    #[test]
    fn completion_of_empty_triangle_is_star() {
        let g = maximal_completion(&Graph::new(3), 3, &all_pairs(3)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn completion_keeps_c5_and_saturated_inputs() {
        let c5 = Graph::cycle(5);
        assert_eq!(maximal_completion(&c5, 3, &all_pairs(5)).unwrap(), c5);
        let k33 = crate::turan::turan_graph(2, 6);
        assert_eq!(maximal_completion(k33.graph(), 3, &all_pairs(6)).unwrap(), *k33.graph());
    }

    #[test]
    fn completion_rejects_clique_input() {
        let err = maximal_completion(&Graph::complete(3), 3, &[]).unwrap_err();
        assert!(matches!(err, Error::ContainsClique { k: 3, .. }));
    }

    #[test]
    fn biclique_trivial_cases() {
        let k = crate::turan::turan_graph(2, 8);
        let (l, r) = (k.class(0).clone(), k.class(1).clone());
        for a in 1..=4 {
            assert!(has_biclique(k.graph(), &l, &r, a).unwrap());
        }
        assert!(!has_biclique(k.graph(), &l, &r, 5).unwrap());
        assert!(!has_biclique(&Graph::new(8), &l, &r, 1).unwrap());
        assert!(has_biclique(k.graph(), &l, &r, 9).is_err());
        assert!(has_biclique(k.graph(), &l, &r, 0).is_err());
    }

    #[test]
    fn biclique_in_matching_complement() {
        // K_{4,4} minus a perfect matching has a 2x2 biclique but no 3x3
        let mut g = crate::turan::turan_graph(2, 8).graph().clone();
        for i in 0..4 {
            g.remove_edge(i, i + 4);
        }
        let (l, r) = (VertexSet::range(8, 0, 4), VertexSet::range(8, 4, 8));
        assert!(has_biclique(&g, &l, &r, 2).unwrap());
        assert!(!has_biclique(&g, &l, &r, 3).unwrap());
        assert_eq!(sample_biclique(&g, &l, &r, 2, 10, 1).hits, 10);
    }

    #[test]
    fn strict_regime_rejects_desk_scale() {
        let mut p = RandomBuildParams::new(2, half(), 64, 0);
        p.regime = Regime::Strict;
        let err = p.derive().unwrap_err();
        assert!(err.to_string().contains("delta n / 4 > 2 s^(r-1)"), "{err}");
    }

    #[test]
    fn desk_scale_parameters() {
        let d = RandomBuildParams::new(2, half(), 64, 0).derive().unwrap();
        assert_eq!((d.s, d.t), (8, 20));
        assert!(!d.claim3_regime);
        let d = RandomBuildParams::new(3, half(), 64, 0).derive().unwrap();
        assert_eq!((d.s, d.t), (3, 6));
        assert!(RandomBuildParams::new(2, half(), 8, 0).derive().is_err());
    }

    #[test]
    fn c_lower_is_below_c() {
        let p = RandomBuildParams::new(2, half(), 64, 0);
        let lo = p.c_lower().to_f64().unwrap();
        assert!(lo <= p.c() && p.c() - lo < 1e-6);
        // 2^5 * 2 * (1 + ln 4)
        assert!((p.c() - 64.0 * (1.0 + 4f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn build_r2_n64() {
        let mut p = RandomBuildParams::new(2, half(), 64, 7);
        p.samples = 20;
        let b = build_random(&p).unwrap();
        assert!(b.report.exact_checks_pass(), "{}", b.report_text());
        assert!(b.embedding.maps.iter().all(|m| !m.iter().any(|v| b.anchors.contains(v))));
        let again = build_random(&p).unwrap();
        assert_eq!(again.pg, b.pg);
        assert!(b.report_text().contains("claim2=true"));
    }

    #[test]
    fn build_r3() {
        let mut p = RandomBuildParams::new(3, half(), 40, 3);
        p.samples = 10;
        let b = build_random(&p).unwrap();
        assert!(b.report.exact_checks_pass(), "{}", b.report_text());
    }
}
