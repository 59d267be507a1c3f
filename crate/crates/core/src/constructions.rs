//! Deterministic extremal constructions: the recursive removal graphs
//! `G_{r,s_1,...,s_{r-1}}` (with the special case `G_{r,s}`), the final
//! saturated graphs `H_{r,s,t}(n)`, and the parameter choice that makes
//! them tight.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bitset::VertexSet;
use crate::bounds::construction_edge_floor;
use crate::error::{Error, Result};
use crate::graph::{
    find_clique_in, has_clique, is_independent, max_bipartite_matching, max_independent_set,
    partite_complement, Graph, PartitionedGraph,
};
use crate::random_build::maximal_completion;
use crate::turan::{is_saturated, turan_class_sizes, turan_number};
use crate::Exact;

/// Parameters of `G_{r,s_1,...,s_{r-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxParams {
    pub r: usize,
    pub s: Vec<usize>,
}

impl AuxParams {
    pub fn new(r: usize, s: Vec<usize>) -> Result<Self> {
        let p = Self { r, s };
        p.validate()?;
        Ok(p)
    }

    /// `s_1 = 2s`, `s_2 = ... = s_{r-1} = s`.
    pub fn balanced(r: usize, s: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParams(format!("r >= 2 (got r = {r})")));
        }
        let mut list = vec![s; r - 1];
        list[0] = 2 * s;
        if s < 2 {
            return Err(Error::InvalidParams(format!("s >= 2 (got s = {s})")));
        }
        Self::new(r, list)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidParams(format!("r >= 2 (got r = {})", self.r)));
        }
        if self.s.len() != self.r - 1 {
            return Err(Error::InvalidParams(format!(
                "exactly r - 1 = {} multiplicities (got {})",
                self.r - 1,
                self.s.len()
            )));
        }
        if let Some(bad) = self.s.iter().find(|&&x| x < 2) {
            return Err(Error::InvalidParams(format!("every s_i >= 2 (got {bad})")));
        }
        Ok(())
    }
}

/// Builds `G_{r,s_1,...,s_{r-1}}`.
///
/// Start from `K_{s_1,s_1}`. Each later step takes `s_t` disjoint copies of
/// the previous graph (copy `q` shifted by `q * |previous|`), merges them class
/// by class, and appends a new class `x_1..x_{s_t}` where `x_p` is joined to
/// every vertex of every copy other than copy `p`.
pub fn build_aux(p: &AuxParams) -> Result<PartitionedGraph> {
    p.validate()?;
    let (g, classes) = aux_raw(&p.s);
    let n = g.n();
    let sets = classes
        .into_iter()
        .map(|c| VertexSet::from_iter(n, c))
        .collect();
    PartitionedGraph::new(g, sets)
}

fn aux_raw(s: &[usize]) -> (Graph, Vec<Vec<usize>>) {
    let s1 = s[0];
    let mut g = Graph::new(2 * s1);
    for u in 0..s1 {
        for v in s1..2 * s1 {
            g.add_edge(u, v);
        }
    }
    let mut classes = vec![(0..s1).collect::<Vec<_>>(), (s1..2 * s1).collect()];
    for &copies in &s[1..] {
        let m = g.n();
        let total = copies * m + copies;
        let mut next = Graph::new(total);
        for q in 0..copies {
            for (u, v) in g.edges() {
                next.add_edge(q * m + u, q * m + v);
            }
        }
        for p in 0..copies {
            let x = copies * m + p;
            for q in (0..copies).filter(|&q| q != p) {
                for y in q * m..(q + 1) * m {
                    next.add_edge(x, y);
                }
            }
        }
        let mut next_classes: Vec<Vec<usize>> = classes
            .iter()
            .map(|c| (0..copies).flat_map(|q| c.iter().map(move |&v| q * m + v)).collect())
            .collect();
        next_classes.push((copies * m..total).collect());
        g = next;
        classes = next_classes;
    }
    (g, classes)
}

/// `G_{r,s} = G_{r,2s,s,...,s}`.
pub fn build_g_rs(r: usize, s: usize) -> Result<PartitionedGraph> {
    build_aux(&AuxParams::balanced(r, s)?)
}

/// `sum_{i=1}^{r-2} s^i + 4 s^{r-1}`.
pub fn g_rs_order(r: usize, s: usize) -> usize {
    (1..=r - 2).map(|i| s.pow(i as u32)).sum::<usize>() + 4 * s.pow(r as u32 - 1)
}

/// `s/(s-1) * (4 s^{r-1} - 3 s^{r-2} - 1)`, exactly; `None` if not integral.
pub fn g_rs_order_closed(r: usize, s: usize) -> Option<usize> {
    let num = s * (4 * s.pow(r as u32 - 1) - 3 * s.pow(r as u32 - 2) - 1);
    (num % (s - 1) == 0).then(|| num / (s - 1))
}

/// Outcome of one numbered property of `G_{r,s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartCheck {
    pub part: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Prop1Report {
    pub r: usize,
    pub s: usize,
    pub parts: Vec<PartCheck>,
}

impl Prop1Report {
    pub fn passed(&self) -> usize {
        self.parts.iter().filter(|p| p.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.parts.iter().all(|p| p.passed)
    }
}

/// Checks the ten listed properties of `G_{r,s}` exactly.
///
/// The independent-set bound (part 10) uses exhaustive search when
/// `|G| <= mis_cap`; above the cap it is certified by the matching of part 9,
/// since every independent set misses one endpoint of each matching edge.
pub fn verify_proposition1(r: usize, s: usize, mis_cap: usize) -> Result<Prop1Report> {
    let pg = build_g_rs(r, s)?;
    Ok(check_g_rs(&pg, r, s, mis_cap))
}

pub(crate) fn check_g_rs(pg: &PartitionedGraph, r: usize, s: usize, mis_cap: usize) -> Prop1Report {
    let g = pg.graph();
    let n = g.n();
    let mut parts = Vec::with_capacity(10);
    let mut push = |part: u8, name: &'static str, passed: bool, detail: String| {
        parts.push(PartCheck { part, name, passed, detail });
    };

    let covers = pg.covered().len() == n;
    let independent = pg.classes_independent();
    push(
        1,
        "r-partite with classes A_1..A_r",
        covers && independent && pg.classes().len() == r,
        format!("{} classes, cover all = {covers}, independent = {independent}", pg.classes().len()),
    );

    let comp = partite_complement(g, pg.classes()).expect("classes are disjoint");
    let kr = find_clique_in(&comp, &comp.vertex_set(), r);
    push(
        2,
        "partite complement is K_r-free",
        kr.is_none(),
        match &kr {
            Some(w) => format!("K_{r} found: {w:?}"),
            None => "no K_r".into(),
        },
    );

    let mut missing = None;
    for (i, c) in pg.classes().iter().enumerate() {
        if find_clique_in(&comp, &comp.vertex_set().difference(c), r - 1).is_none() {
            missing = Some(i);
            break;
        }
    }
    push(
        3,
        "complement minus each class contains K_{r-1}",
        missing.is_none(),
        match missing {
            Some(i) => format!("no K_{} avoiding class {i}", r - 1),
            None => format!("K_{} found avoiding every class", r - 1),
        },
    );

    let mut unsat = None;
    for (u, v) in g.edges() {
        let common = comp.neighbors(u).intersection(comp.neighbors(v));
        if find_clique_in(&comp, &common, r - 2).is_none() {
            unsat = Some((u, v));
            break;
        }
    }
    push(
        4,
        "every cross-class edge is r-saturating in the complement",
        unsat.is_none(),
        match unsat {
            Some((u, v)) => format!("edge {u}-{v} closes no K_{r}"),
            None => format!("{} edges checked", g.edge_count()),
        },
    );

    let sum_form = g_rs_order(r, s);
    let closed = g_rs_order_closed(r, s);
    push(
        5,
        "vertex count formula",
        sum_form == n && closed == Some(n) && n * (s - 1) <= 4 * s.pow(r as u32),
        format!("|G| = {n}, sum form {sum_form}, closed form {closed:?}"),
    );

    let e = g.edge_count();
    let cap = 4 * (r - 1) * s.pow(r as u32);
    push(6, "e(G) <= 4(r-1)s^r", e <= cap, format!("{e} <= {cap}"));

    let mut sizes = pg.class_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let big = 2 * s.pow(r as u32 - 1);
    push(
        7,
        "two largest classes have size 2s^{r-1}",
        sizes.len() >= 2 && sizes[0] == big && sizes[1] == big,
        format!("sizes {sizes:?}, expected {big}"),
    );

    let small = s.pow(r as u32 - 2);
    let rest_ok = sizes.iter().skip(2).all(|&c| c <= small);
    push(8, "other classes have size <= s^{r-2}", rest_ok, format!("bound {small}"));

    let (a, b) = largest_two_classes(pg);
    let matching = max_bipartite_matching(g, pg.class(a), pg.class(b));
    push(
        9,
        "perfect matching between the two largest classes",
        matching.len() == big,
        format!("matching of size {} between classes {a} and {b}", matching.len()),
    );

    let bound = n - big;
    if n <= mis_cap {
        let (alpha, w) = max_independent_set(g, mis_cap).expect("within cap");
        push(
            10,
            "independent sets have at most |G| - 2s^{r-1} vertices",
            alpha <= bound && is_independent(g, &w),
            format!("alpha = {alpha} <= {bound} (exhaustive)"),
        );
    } else {
        let ok = matching.iter().all(|&(u, v)| g.has_edge(u, v)) && n - matching.len() <= bound;
        push(
            10,
            "independent sets have at most |G| - 2s^{r-1} vertices",
            ok,
            format!(
                "alpha <= |G| - |M| = {} <= {bound} (matching certificate, |G| = {n} above cap {mis_cap})",
                n - matching.len()
            ),
        );
    }

    Prop1Report { r, s, parts }
}

fn largest_two_classes(pg: &PartitionedGraph) -> (usize, usize) {
    let mut idx: Vec<usize> = (0..pg.classes().len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(pg.class(i).len()), i));
    (idx[0], idx[1])
}

/// Parameters of `H_{r,s,t}(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinalParams {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub n: usize,
}

impl FinalParams {
    pub fn new(r: usize, s: usize, t: usize, n: usize) -> Result<Self> {
        let p = Self { r, s, t, n };
        p.validate()?;
        Ok(p)
    }

    pub fn min_order(r: usize, s: usize, t: usize) -> usize {
        4 * s.pow(r as u32 - 1) * t * r + t
    }

    pub fn validate(&self) -> Result<()> {
        let Self { r, s, t, n } = *self;
        if r < 2 {
            return Err(Error::InvalidParams(format!("r >= 2 (got r = {r})")));
        }
        if s < 2 {
            return Err(Error::InvalidParams(format!("s >= 2 (got s = {s})")));
        }
        if t < 1 {
            return Err(Error::InvalidParams("t >= 1 (got t = 0)".into()));
        }
        let need = Self::min_order(r, s, t);
        if n < need {
            return Err(Error::InvalidParams(format!(
                "n >= 4 s^(r-1) t r + t = {need} (got n = {n})"
            )));
        }
        Ok(())
    }

    /// `t_r(n) - (r-1)tn/r - 4(r-1)ts^r`.
    pub fn edge_floor(&self) -> Exact {
        construction_edge_floor(self.r, self.s, self.t, self.n)
    }
}

/// `H_{r,s,t}(n)` with the bookkeeping needed to audit it.
#[derive(Clone, Debug)]
pub struct FinalConstruction {
    pub params: FinalParams,
    /// Classes `A_1..A_r` followed by `A_{r+1} = {x_1..x_t}`.
    pub pg: PartitionedGraph,
    /// `V(H_p)` for each embedded copy of `G_{r,s}`.
    pub copies: Vec<VertexSet>,
    /// The padding sets `Y_1..Y_r`.
    pub padding: Vec<VertexSet>,
}

impl FinalConstruction {
    pub fn graph(&self) -> &Graph {
        self.pg.graph()
    }

    pub fn apex(&self) -> &VertexSet {
        self.pg.class(self.params.r)
    }
}

/// Builds `H_{r,s,t}(n)`.
///
/// Labels: copy `p` of `G_{r,s}` occupies `p*|G_{r,s}| ..`, then the padding
/// sets `Y_1..Y_r`, then `x_1..x_t`. Classes `A_1..A_r` are filled to the
/// balanced sizes of `T_r(n-t)`, larger classes first in index order.
/// Two vertices of `A_1..A_r` are adjacent iff they lie in different classes
/// and do not form an edge of a copy; `x_p` is joined to `V(H_p)`; finally a
/// lexicographically greedy maximal K_{r+1}-free set of pairs inside
/// `A_{r+1}` is added.
pub fn build_h_rst(p: &FinalParams) -> Result<FinalConstruction> {
    p.validate()?;
    let FinalParams { r, s, t, n } = *p;
    let (aux, aux_classes) = aux_raw(&AuxParams::balanced(r, s)?.s);
    let m = aux.n();

    let targets = turan_class_sizes(r, n - t);
    let mut padding_sizes = Vec::with_capacity(r);
    for i in 0..r {
        let used = t * aux_classes[i].len();
        if targets[i] <= used {
            return Err(Error::InvalidParams(format!(
                "padding l_{} > 0 (class target {} vs {used} copy vertices)",
                i + 1,
                targets[i]
            )));
        }
        padding_sizes.push(targets[i] - used);
    }

    let mut classes: Vec<VertexSet> = vec![VertexSet::new(n); r + 1];
    let mut copies = Vec::with_capacity(t);
    for q in 0..t {
        copies.push(VertexSet::range(n, q * m, (q + 1) * m));
        for (i, c) in aux_classes.iter().enumerate() {
            for &v in c {
                classes[i].insert(q * m + v);
            }
        }
    }
    let mut next = t * m;
    let mut padding = Vec::with_capacity(r);
    for (i, &l) in padding_sizes.iter().enumerate() {
        let y = VertexSet::range(n, next, next + l);
        classes[i].union_with(&y);
        padding.push(y);
        next += l;
    }
    debug_assert_eq!(next, n - t);
    for p_idx in 0..t {
        classes[r].insert(next + p_idx);
    }

    let mut g = Graph::new(n);
    for i in 0..r {
        for j in i + 1..r {
            for u in classes[i].iter() {
                for v in classes[j].iter() {
                    let same_copy = u < t * m && v < t * m && u / m == v / m;
                    if !(same_copy && aux.has_edge(u % m, v % m)) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
    }
    for (p_idx, copy) in copies.iter().enumerate() {
        for y in copy.iter() {
            g.add_edge(next + p_idx, y);
        }
    }
    let apex: Vec<usize> = classes[r].to_vec();
    let pairs: Vec<(usize, usize)> = apex
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| apex[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    let g = maximal_completion(&g, r + 1, &pairs)?;

    Ok(FinalConstruction {
        params: *p,
        pg: PartitionedGraph::new(g, classes)?,
        copies,
        padding,
    })
}

/// Audit of a built `H_{r,s,t}(n)`.
#[derive(Clone, Debug)]
pub struct FinalCheck {
    pub k_free: bool,
    pub saturated: bool,
    pub edges: usize,
    pub edge_floor: Exact,
    pub edge_floor_holds: bool,
    /// Lower bound `2 t s^{r-1}` on the deletion number.
    pub deletion_floor: usize,
    /// Each copy has independence number at most `|H_p| - 2s^{r-1}`,
    /// certified by a perfect matching between its two largest classes.
    pub copy_independence_ok: bool,
}

impl FinalCheck {
    pub fn passed(&self) -> bool {
        self.k_free && self.saturated && self.edge_floor_holds && self.copy_independence_ok
    }
}

pub fn check_final_construction(fc: &FinalConstruction) -> FinalCheck {
    let FinalParams { r, s, t, .. } = fc.params;
    let g = fc.graph();
    let edges = g.edge_count();
    let edge_floor = fc.params.edge_floor();
    let big = 2 * s.pow(r as u32 - 1);
    let copy_independence_ok = fc.copies.iter().all(|copy| {
        let a = fc.pg.class(0).intersection(copy);
        let b = fc.pg.class(1).intersection(copy);
        // inside a copy the removed edges are exactly the non-edges of G
        let mut removed = Graph::new(g.n());
        for u in a.iter() {
            for v in b.iter() {
                if !g.has_edge(u, v) {
                    removed.add_edge(u, v);
                }
            }
        }
        max_bipartite_matching(&removed, &a, &b).len() == big
    });
    FinalCheck {
        k_free: !has_clique(g, r + 1),
        saturated: is_saturated(g, r),
        edges,
        edge_floor_holds: Exact::from_integer(edges.into()) >= edge_floor,
        edge_floor,
        deletion_floor: t * big,
        copy_independence_ok,
    }
}

/// Output of [`tightness_params`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessParams {
    pub s: usize,
    pub t: usize,
    /// `c = eps / (4(r-1))`.
    pub c: Exact,
    /// `c' = ((r-1)/r + eps)^{-1}`.
    pub c_prime: Exact,
    /// `ceil(2^r / c)`.
    pub n0: usize,
}

/// Chooses `s = floor((cn)^{1/r})` and `t = floor(c' m / n)` so that
/// `H_{r,s,t}(n)` has at least `t_r(n) - m` edges.
///
/// Requires `n >= 2^r / c` and `((r-1)/r + eps) n <= m <= b_0 n^{(r+1)/r}` with
/// `b_0 = (8 c' c^{(r-1)/r} r)^{-1}`; the upper bound is checked in the
/// equivalent integral form `(8 c' r m)^r c^{r-1} <= n^{r+1}`.
pub fn tightness_params(r: usize, eps: &Exact, n: usize, m: u64) -> Result<TightnessParams> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("r >= 2 (got r = {r})")));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidParams(format!("eps > 0 (got {eps})")));
    }
    let int = |x: u64| Exact::from_integer(BigInt::from(x));
    let rr = r as u64;
    let c_prime = (Exact::new(BigInt::from(rr - 1), BigInt::from(rr)) + eps).recip();
    let c = eps / int(4 * (rr - 1));
    let n0_exact = int(1u64 << r) / &c;
    let n0 = n0_exact.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    let n_e = int(n as u64);
    let m_e = int(m);
    if n < n0 {
        return Err(Error::InvalidParams(format!("n >= n0 = 2^r / c = {n0} (got n = {n})")));
    }
    let lower = (Exact::new(BigInt::from(rr - 1), BigInt::from(rr)) + eps) * &n_e;
    if m_e < lower {
        return Err(Error::InvalidParams(format!(
            "m >= ((r-1)/r + eps) n = {} (got m = {m})",
            lower.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let lhs = num_traits::pow(int(8 * rr) * &c_prime * &m_e, r) * num_traits::pow(c.clone(), r - 1);
    let rhs = num_traits::pow(n_e.clone(), r + 1);
    if lhs > rhs {
        return Err(Error::InvalidParams(format!(
            "m <= b0 n^((r+1)/r) with b0 = (8 c' c^((r-1)/r) r)^-1 (got m = {m})"
        )));
    }

    let cn = &c * &n_e;
    let s = integer_root_floor(&cn, r);
    let t = (&c_prime * &m_e / &n_e).floor().to_integer().to_usize().unwrap_or(0);
    if s < 2 {
        return Err(Error::InvalidParams(format!("s = floor((cn)^(1/r)) >= 2 (got {s})")));
    }
    if t < 1 {
        return Err(Error::InvalidParams("t = floor(c' m / n) >= 1 (got 0)".into()));
    }
    let need = FinalParams::min_order(r, s, t);
    if n < need {
        return Err(Error::InvalidParams(format!("n >= 4 s^(r-1) t r + t = {need} (got n = {n})")));
    }
    Ok(TightnessParams { s, t, c, c_prime, n0 })
}

/// Largest integer `s >= 0` with `s^r <= x`.
pub fn integer_root_floor(x: &Exact, r: usize) -> usize {
    if !x.is_positive() {
        return 0;
    }
    let bound = x.floor().to_integer();
    let le = |s: &BigInt| -> bool { Exact::from_integer(num_traits::pow(s.clone(), r)) <= *x };
    let (mut lo, mut hi) = (BigInt::zero(), bound + BigInt::one());
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if le(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.to_usize().expect("root fits in usize")
}

/// `t_r(n) - m` as a signed integer.
pub fn edge_target(r: usize, n: usize, m: u64) -> i128 {
    turan_number(r, n) as i128 - m as i128
}
