//! Turán graphs and numbers, saturation predicates, saturating non-edges,
//! non-edge types relative to a designated vertex set, and exact
//! r-colourability.

use crate::bitset::VertexSet;
use crate::bounds::turan_shift_floor;
use crate::error::{Error, Result};
use crate::graph::{find_clique, find_clique_in, Graph, PartitionedGraph};
use crate::Exact;

/// Default node budget for [`r_colouring`].
pub const DEFAULT_COLOUR_BUDGET: u64 = 20_000_000;

/// Balanced class sizes of `T_r(n)`: the first `n mod r` classes are one larger.
pub fn turan_class_sizes(r: usize, n: usize) -> Vec<usize> {
    if r == 0 {
        return Vec::new();
    }
    let (q, rem) = (n / r, n % r);
    (0..r).map(|i| q + usize::from(i < rem)).collect()
}

/// `t_r(n)`, the number of edges of the r-partite Turán graph.
pub fn turan_number(r: usize, n: usize) -> u64 {
    if r == 0 {
        return 0;
    }
    let squares: u64 = turan_class_sizes(r, n).iter().map(|&c| (c * c) as u64).sum();
    ((n * n) as u64 - squares) / 2
}

/// `T_r(n)` with contiguous classes, class 0 first.
pub fn turan_graph(r: usize, n: usize) -> PartitionedGraph {
    let sizes = turan_class_sizes(r, n);
    let mut classes = Vec::with_capacity(r);
    let mut start = 0;
    for &sz in &sizes {
        classes.push(VertexSet::range(n, start, start + sz));
        start += sz;
    }
    let mut g = Graph::new(n);
    for (i, ci) in classes.iter().enumerate() {
        for cj in &classes[i + 1..] {
            for u in ci.iter() {
                for v in cj.iter() {
                    g.add_edge(u, v);
                }
            }
        }
    }
    PartitionedGraph::new(g, classes).expect("Turán classes are disjoint")
}

/// `t_r(n - t) - (t_r(n) - (1 - 1/r) t n)`, evaluated exactly.
pub fn turan_shift_slack(r: usize, n: usize, t: usize) -> Exact {
    assert!(t <= n, "shift {t} exceeds n = {n}");
    let lhs = Exact::from_integer(turan_number(r, n - t).into());
    lhs - turan_shift_floor::<Exact>(r, n, t)
}

/// Whether `t_r(n - t) >= t_r(n) - (1 - 1/r) t n`.
pub fn turan_shift_check(r: usize, n: usize, t: usize) -> bool {
    turan_shift_slack(r, n, t) >= Exact::from_integer(0.into())
}

/// Whether `g` is K_{r+1}-free and every non-adjacent pair has a K_{r-1} in
/// its common neighbourhood.
pub fn is_saturated(g: &Graph, r: usize) -> bool {
    first_unsaturated_pair(g, r).is_none() && !crate::graph::has_clique(g, r + 1)
}

/// The lexicographically first non-edge whose addition creates no K_{r+1}.
pub fn first_unsaturated_pair(g: &Graph, r: usize) -> Option<(usize, usize)> {
    let need = r.saturating_sub(1);
    for u in 0..g.n() {
        let non = g.neighbors(u).complement();
        for v in non.iter().filter(|&v| v > u) {
            let common = g.neighbors(u).intersection(g.neighbors(v));
            if r == 0 || find_clique_in(g, &common, need).is_none() {
                return Some((u, v));
            }
        }
    }
    None
}

/// Non-edges `uv` with `u` in class `x` and `v` in class `y` whose addition
/// creates a `K_k` inside the partitioned vertex set.
pub fn saturating_edges(pg: &PartitionedGraph, k: usize, x: usize, y: usize) -> Result<Vec<(usize, usize)>> {
    if x == y {
        return Err(Error::Contract(format!("saturating edges need distinct classes, got {x} twice")));
    }
    saturating_pairs(pg.graph(), &pg.covered(), pg.class(x), pg.class(y), k)
}

/// Non-edges between `xs` and `ys` whose common neighbourhood inside `within`
/// contains a `K_{k-2}`.
pub(crate) fn saturating_pairs(
    g: &Graph,
    within: &VertexSet,
    xs: &VertexSet,
    ys: &VertexSet,
    k: usize,
) -> Result<Vec<(usize, usize)>> {
    if k < 2 {
        return Err(Error::Contract(format!("saturation order must be at least 2, got {k}")));
    }
    let mut out = Vec::new();
    for u in xs.iter() {
        let nu = g.neighbors(u).intersection(within);
        for v in ys.difference(g.neighbors(u)).iter() {
            if u == v {
                continue;
            }
            let common = nu.intersection(g.neighbors(v));
            if find_clique_in(g, &common, k - 2).is_some() {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

/// How a non-adjacent pair relates to the designated set `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonEdgeKind {
    /// Every `t` such that some K_{r+1} created by the pair has exactly `t`
    /// vertices in `T`, ascending.
    Typed(Vec<usize>),
    IntraClass,
    NotSaturating,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonEdgeType {
    pub u: usize,
    pub v: usize,
    pub kind: NonEdgeKind,
}

impl NonEdgeType {
    /// The least type, used for reporting.
    pub fn primary(&self) -> Option<usize> {
        match &self.kind {
            NonEdgeKind::Typed(ts) => ts.first().copied(),
            _ => None,
        }
    }

    pub fn has_type(&self, t: usize) -> bool {
        matches!(&self.kind, NonEdgeKind::Typed(ts) if ts.contains(&t))
    }
}

/// Whether some clique has `a` vertices from `from_t` and `b` from `from_v`.
fn split_clique_exists(g: &Graph, from_t: &VertexSet, from_v: &VertexSet, a: usize, b: usize) -> bool {
    if a == 0 {
        return find_clique_in(g, from_v, b).is_some();
    }
    let mut rest = from_t.clone();
    while rest.len() >= a {
        let w = rest.first().expect("nonempty");
        rest.remove(w);
        let nt = rest.intersection(g.neighbors(w));
        let nv = from_v.intersection(g.neighbors(w));
        if nv.len() >= b && split_clique_exists(g, &nt, &nv, a - 1, b) {
            return true;
        }
    }
    false
}

/// Classifies the pair `uv` with respect to `classes` and `t_set`.
pub fn nonedge_type(
    g: &Graph,
    r: usize,
    classes: &[VertexSet],
    t_set: &VertexSet,
    u: usize,
    v: usize,
) -> NonEdgeType {
    let cu = classes.iter().position(|c| c.contains(u));
    let cv = classes.iter().position(|c| c.contains(v));
    if cu.is_some() && cu == cv {
        return NonEdgeType { u, v, kind: NonEdgeKind::IntraClass };
    }
    let mut body = g.empty_set();
    for c in classes {
        body.union_with(c);
    }
    let common = g.neighbors(u).intersection(g.neighbors(v));
    let in_t = common.intersection(t_set);
    let in_body = common.intersection(&body);
    let need = r.saturating_sub(1);
    let types: Vec<usize> = (0..=need)
        .filter(|&t| split_clique_exists(g, &in_t, &in_body, t, need - t))
        .collect();
    let kind = if types.is_empty() {
        NonEdgeKind::NotSaturating
    } else {
        NonEdgeKind::Typed(types)
    };
    NonEdgeType { u, v, kind }
}

/// Types of every non-edge joining two distinct classes, in lexicographic
/// order of the pair. The classes must partition `V(g) \ T`.
///
/// Fails on the first cross-class non-edge that is not saturating, and on any
/// non-edge completing to a K_{r+1} with no vertex of `T` (which a proper
/// r-partition of `G - T` rules out).
pub fn classify_nonedge_types(
    g: &Graph,
    r: usize,
    classes: &[VertexSet],
    t_set: &VertexSet,
) -> Result<Vec<NonEdgeType>> {
    let mut out = Vec::new();
    for (i, ci) in classes.iter().enumerate() {
        if !ci.is_disjoint(t_set) {
            return Err(Error::Contract(format!("class {i} meets the designated set")));
        }
    }
    for u in 0..g.n() {
        let Some(cu) = classes.iter().position(|c| c.contains(u)) else { continue };
        for (j, cj) in classes.iter().enumerate() {
            if j == cu {
                continue;
            }
            for v in cj.difference(g.neighbors(u)).iter().filter(|&v| v > u) {
                let ty = nonedge_type(g, r, classes, t_set, u, v);
                match &ty.kind {
                    NonEdgeKind::NotSaturating => return Err(Error::NotSaturated { k: r + 1, u, v }),
                    NonEdgeKind::Typed(ts) if ts.first() == Some(&0) => {
                        return Err(Error::CompletionOutsideDesignated { k: r + 1, u, v })
                    }
                    _ => out.push(ty),
                }
            }
        }
    }
    out.sort_by_key(|t| (t.u, t.v));
    Ok(out)
}

/// A proper colouring of `g[mask]` with at most `r` colours, as `r` classes
/// ordered by least vertex with empty classes last; `None` when none exists.
/// DSATUR backtracking; fails with [`Error::BudgetExhausted`] after `budget`
/// search nodes.
pub fn r_colouring(g: &Graph, mask: &VertexSet, r: usize, budget: u64) -> Result<Option<Vec<VertexSet>>> {
    let verts = mask.to_vec();
    if verts.is_empty() {
        return Ok(Some(vec![g.empty_set(); r]));
    }
    if r == 0 {
        return Ok(None);
    }
    if find_clique_in(g, mask, r + 1).is_some() {
        return Ok(None);
    }
    let mut state = Dsatur {
        g,
        mask,
        r,
        colour: vec![None; g.n()],
        forbidden: vec![0u64; g.n()],
        nodes: 0,
        budget,
    };
    assert!(r <= 64, "at most 64 colours supported");
    if !state.search(verts.len())? {
        return Ok(None);
    }
    let mut classes = vec![g.empty_set(); r];
    for &v in &verts {
        classes[state.colour[v].expect("coloured") as usize].insert(v);
    }
    classes.sort_by_key(|c| c.first().unwrap_or(usize::MAX));
    Ok(Some(classes))
}

struct Dsatur<'a> {
    g: &'a Graph,
    mask: &'a VertexSet,
    r: usize,
    colour: Vec<Option<u8>>,
    forbidden: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Dsatur<'_> {
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(u32, usize, usize)> = None;
        for v in self.mask.iter() {
            if self.colour[v].is_some() {
                continue;
            }
            let sat = self.forbidden[v].count_ones();
            let deg = self.g.degree_in(v, self.mask);
            let better = match best {
                None => true,
                Some((bs, bd, _)) => sat > bs || (sat == bs && deg > bd),
            };
            if better {
                best = Some((sat, deg, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn search(&mut self, remaining: usize) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let v = self.pick().expect("uncoloured vertex remains");
        let used = self.colour.iter().flatten().map(|&c| c as usize + 1).max().unwrap_or(0);
        let limit = (used + 1).min(self.r);
        for c in 0..limit {
            if self.forbidden[v] >> c & 1 == 1 {
                continue;
            }
            self.colour[v] = Some(c as u8);
            let nbrs: Vec<usize> = self.g.neighbors(v).intersection(self.mask).iter().collect();
            let saved: Vec<u64> = nbrs.iter().map(|&w| self.forbidden[w]).collect();
            for &w in &nbrs {
                self.forbidden[w] |= 1 << c;
            }
            if self.search(remaining - 1)? {
                return Ok(true);
            }
            for (&w, &s) in nbrs.iter().zip(&saved) {
                self.forbidden[w] = s;
            }
            self.colour[v] = None;
        }
        Ok(false)
    }
}

/// Whether `g` is r-colourable.
pub fn is_r_partite(g: &Graph, r: usize, budget: u64) -> Result<bool> {
    Ok(r_colouring(g, &g.vertex_set(), r, budget)?.is_some())
}

/// Minimum degree of `g[mask]` and the lowest-index vertex attaining it.
pub fn min_degree_vertex(g: &Graph, mask: &VertexSet) -> Option<(usize, usize)> {
    mask.iter()
        .map(|v| (g.degree_in(v, mask), v))
        .min()
        .map(|(d, v)| (v, d))
}

/// Whether `deg <= (3r-4)/(3r-1) * n`, by cross-multiplication.
pub fn within_low_degree_ceiling(r: usize, deg: usize, n: usize) -> bool {
    (deg as u128) * (3 * r as u128 - 1) <= (3 * r as u128 - 4) * n as u128
}

/// A K_{r+1} in `g`, if any.
pub fn find_forbidden_clique(g: &Graph, r: usize) -> Option<Vec<usize>> {
    find_clique(g, r + 1)
}
