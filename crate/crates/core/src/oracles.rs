//! Exhaustive ground truth on small graphs: the deletion numbers `g_r` and
//! `g*_r`, and saturation checked straight from the definition.
//!
//! `G[W]` is complete multipartite with at most `r` classes exactly when it
//! has no induced `K_1 + K_2` (a vertex missing both ends of an edge) and no
//! `K_{r+1}`. The search branches on which vertex of such an obstruction to
//! delete, bounding below by a greedy packing of disjoint obstructions.

use std::fmt;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{complete_multipartite_classes, find_clique_in, has_clique, Graph};

/// Default vertex cap for exact oracle runs.
pub const DEFAULT_ORACLE_CAP: usize = 26;
/// Default search-node budget per oracle run.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub cap: usize,
    pub node_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { cap: DEFAULT_ORACLE_CAP, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Residual complete r-partite.
    CompletePartite,
    /// Residual an r-partite Turán graph.
    Turan,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CompletePartite => "g_r",
            Self::Turan => "g_star",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub id: String,
    pub kind: OracleKind,
    pub r: usize,
    pub n: usize,
    /// Exact value, or the best upper bound found when `capped`.
    pub value: usize,
    /// Disjoint-obstruction packing bound at the root.
    pub lower_bound: usize,
    /// Classes of the retained vertex set.
    pub witness: Vec<VertexSet>,
    pub search_nodes: u64,
    pub capped: bool,
}

impl OracleReport {
    pub fn retained(&self) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for c in &self.witness {
            out.union_with(c);
        }
        out
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "id={}", self.id)?;
        writeln!(f, "kind={}", self.kind)?;
        writeln!(f, "r={}", self.r)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "value={}", self.value)?;
        writeln!(f, "lower_bound={}", self.lower_bound)?;
        writeln!(f, "search_nodes={}", self.search_nodes)?;
        writeln!(f, "capped={}", self.capped)?;
        for (i, c) in self.witness.iter().enumerate() {
            write!(f, "class {i}:")?;
            for v in c.iter() {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A vertex set that must lose a vertex, within `alive`.
fn obstruction(g: &Graph, alive: &VertexSet, r: usize) -> Option<Vec<usize>> {
    for x in alive.iter() {
        let mut far = alive.difference(g.neighbors(x));
        far.remove(x);
        for y in far.iter() {
            if let Some(z) = g.neighbors(y).intersection(&far).first() {
                return Some(vec![x, y, z]);
            }
        }
    }
    find_clique_in(g, alive, r + 1)
}

fn packing_bound(g: &Graph, alive: &VertexSet, r: usize) -> usize {
    let mut rest = alive.clone();
    let mut count = 0;
    while let Some(ob) = obstruction(g, &rest, r) {
        for v in ob {
            rest.remove(v);
        }
        count += 1;
    }
    count
}

/// Largest balanced subgraph of a complete multipartite graph with class
/// sizes `sizes`, padded with empty classes to `r`: the best `m` with every
/// class keeping `m` or `m + 1` vertices.
fn best_turan(sizes: &[usize], r: usize) -> (usize, usize) {
    let mut padded = sizes.to_vec();
    padded.resize(r.max(sizes.len()), 0);
    let floor = padded.iter().copied().min().unwrap_or(0);
    (0..=floor)
        .map(|m| (padded.iter().map(|&c| c.min(m + 1)).sum::<usize>(), m))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .unwrap_or((0, 0))
}

struct Search<'a> {
    g: &'a Graph,
    r: usize,
    kind: OracleKind,
    budget: u64,
    nodes: u64,
    best: usize,
    best_witness: Vec<VertexSet>,
    exhausted: bool,
}

impl Search<'_> {
    fn leaf(&mut self, alive: &VertexSet, deleted: usize) {
        let classes = complete_multipartite_classes(self.g, alive).expect("leaf has no obstruction");
        let (keep, witness) = match self.kind {
            OracleKind::CompletePartite => (alive.len(), classes),
            OracleKind::Turan => {
                let sizes: Vec<usize> = classes.iter().map(VertexSet::len).collect();
                let (keep, m) = best_turan(&sizes, self.r);
                let trimmed = classes
                    .iter()
                    .map(|c| VertexSet::from_iter(c.universe(), c.iter().take(m + 1)))
                    .collect();
                (keep, trimmed)
            }
        };
        let cost = deleted + alive.len() - keep;
        if cost < self.best {
            self.best = cost;
            self.best_witness = witness;
        }
    }

    fn run(&mut self, alive: &VertexSet, kept: &VertexSet, deleted: usize) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if deleted >= self.best || deleted + packing_bound(self.g, alive, self.r) >= self.best {
            return;
        }
        let Some(ob) = obstruction(self.g, alive, self.r) else {
            self.leaf(alive, deleted);
            return;
        };
        let mut kept = kept.clone();
        for v in ob {
            if kept.contains(v) {
                continue;
            }
            let mut next = alive.clone();
            next.remove(v);
            self.run(&next, &kept, deleted + 1);
            kept.insert(v);
        }
    }
}

fn greedy_upper(g: &Graph, r: usize, kind: OracleKind) -> (usize, Vec<VertexSet>) {
    let mut s = Search {
        g,
        r,
        kind,
        budget: 0,
        nodes: 0,
        best: usize::MAX,
        best_witness: Vec::new(),
        exhausted: false,
    };
    let mut alive = g.vertex_set();
    let mut deleted = 0;
    while let Some(ob) = obstruction(g, &alive, r) {
        let v = *ob
            .iter()
            .max_by_key(|&&v| (g.degree_in(v, &alive).min(alive.len() - 1 - g.degree_in(v, &alive)), std::cmp::Reverse(v)))
            .expect("obstruction is nonempty");
        alive.remove(v);
        deleted += 1;
    }
    s.leaf(&alive, deleted);
    (s.best, s.best_witness)
}

fn oracle(g: &Graph, r: usize, kind: OracleKind, cfg: &OracleConfig, id: &str) -> Result<OracleReport> {
    if r < 1 {
        return Err(Error::InvalidParams(format!("r >= 1 (got r = {r})")));
    }
    let n = g.n();
    let (ub, ub_witness) = greedy_upper(g, r, kind);
    let lower_bound = packing_bound(g, &g.vertex_set(), r);
    let mut report = OracleReport {
        id: id.to_string(),
        kind,
        r,
        n,
        value: ub,
        lower_bound,
        witness: ub_witness,
        search_nodes: 0,
        capped: true,
    };
    if n > cfg.cap {
        return Ok(report);
    }
    let mut s = Search {
        g,
        r,
        kind,
        budget: cfg.node_budget,
        nodes: 0,
        best: ub + 1,
        best_witness: Vec::new(),
        exhausted: false,
    };
    s.run(&g.vertex_set(), &g.empty_set(), 0);
    report.search_nodes = s.nodes;
    report.capped = s.exhausted;
    if s.best <= ub {
        report.value = s.best;
        report.witness = s.best_witness;
    }
    Ok(report)
}

/// Minimum number of vertices whose deletion leaves a complete r-partite
/// graph (empty classes allowed). Above `cfg.cap`, or when the node budget
/// runs out, the report is marked capped and holds an upper bound.
pub fn brute_g_r(g: &Graph, r: usize, cfg: &OracleConfig) -> Result<OracleReport> {
    oracle(g, r, OracleKind::CompletePartite, cfg, "")
}

/// Minimum number of vertices whose deletion leaves `T_r(k)` for some `k`,
/// where the r classes (empty ones included) differ in size by at most one.
pub fn brute_g_star(g: &Graph, r: usize, cfg: &OracleConfig) -> Result<OracleReport> {
    oracle(g, r, OracleKind::Turan, cfg, "")
}

/// Like [`brute_g_r`] with an instance label carried into the report.
pub fn brute_named(g: &Graph, r: usize, kind: OracleKind, cfg: &OracleConfig, id: &str) -> Result<OracleReport> {
    oracle(g, r, kind, cfg, id)
}

/// K_{r+1}-free and every added non-edge creates a K_{r+1}, checked by
/// literally adding each non-edge and searching the new graph.
pub fn definition_level_saturation(g: &Graph, r: usize, cap: usize) -> Result<bool> {
    if g.n() > cap {
        return Err(Error::CapExceeded { what: "definition-level saturation", size: g.n(), cap });
    }
    if has_clique(g, r + 1) {
        return Ok(false);
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                continue;
            }
            let mut h = g.clone();
            h.add_edge(u, v);
            if !has_clique(&h, r + 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_complete_multipartite;
    use crate::turan::turan_graph;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    /// Exhaustive reference over all vertex subsets.
    fn subsets_g(g: &Graph, r: usize, turan: bool) -> usize {
        let n = g.n();
        let mut best = n;
        for mask in 0u32..(1 << n) {
            let w = VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
            let Some(classes) = complete_multipartite_classes(g, &w) else { continue };
            if classes.len() > r {
                continue;
            }
            if turan {
                let mut sizes: Vec<usize> = classes.iter().map(VertexSet::len).collect();
                sizes.resize(r, 0);
                if sizes.iter().max().unwrap() - sizes.iter().min().unwrap() > 1 {
                    continue;
                }
            }
            best = best.min(n - w.len());
        }
        best
    }

    #[test]
    fn turan_graphs_need_nothing() {
        let t = turan_graph(3, 10);
        assert_eq!(brute_g_r(t.graph(), 3, &cfg()).unwrap().value, 0);
        assert_eq!(brute_g_star(t.graph(), 3, &cfg()).unwrap().value, 0);
    }

    #[test]
    fn c5() {
        let c5 = Graph::cycle(5);
        let rep = brute_g_r(&c5, 2, &cfg()).unwrap();
        assert_eq!(rep.value, 2);
        assert!(!rep.capped);
        let (w, _) = c5.induced(&rep.retained());
        assert!(is_complete_multipartite(&w, 2));
        assert_eq!(brute_g_star(&c5, 2, &cfg()).unwrap().value, 2);
    }

    #[test]
    fn unbalanced_star() {
        let mut k15 = Graph::new(6);
        for v in 1..6 {
            k15.add_edge(0, v);
        }
        assert_eq!(brute_g_r(&k15, 2, &cfg()).unwrap().value, 0);
        let rep = brute_g_star(&k15, 2, &cfg()).unwrap();
        assert_eq!(rep.value, 3);
        assert_eq!(rep.retained().len(), 3);
    }

    #[test]
    fn matches_subset_enumeration() {
        let mut state = 12345u64;
        for trial in 0..60 {
            let n = 4 + trial % 8;
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if state >> 62 != 0 {
                        g.add_edge(u, v);
                    }
                }
            }
            for r in 2..=3 {
                assert_eq!(brute_g_r(&g, r, &cfg()).unwrap().value, subsets_g(&g, r, false), "{g:?} r={r}");
                assert_eq!(brute_g_star(&g, r, &cfg()).unwrap().value, subsets_g(&g, r, true), "{g:?} r={r}");
            }
        }
    }

    #[test]
    fn capped_reports_upper_bound() {
        let c = Graph::cycle(30);
        let rep = brute_g_r(&c, 2, &cfg()).unwrap();
        assert!(rep.capped);
        assert!(rep.value >= rep.lower_bound);
        let (w, _) = c.induced(&rep.retained());
        assert!(is_complete_multipartite(&w, 2));
        let tiny = OracleConfig { cap: 26, node_budget: 1 };
        assert!(brute_g_r(&Graph::cycle(12), 2, &tiny).unwrap().capped);
    }

    #[test]
    fn saturation_by_definition() {
        assert!(definition_level_saturation(&Graph::cycle(5), 2, 26).unwrap());
        assert!(!definition_level_saturation(&Graph::path(4), 2, 26).unwrap());
        assert!(definition_level_saturation(&Graph::new(40), 2, 26).is_err());
    }

    #[test]
    fn report_text() {
        let rep = brute_g_r(&Graph::cycle(5), 2, &cfg()).unwrap();
        let text = rep.to_string();
        assert!(text.starts_with("id=\nkind=g_r\nr=2\nn=5\nvalue=2\n"));
        assert!(text.contains("class 0:"));
    }
}
