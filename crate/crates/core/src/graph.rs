//! Simple undirected graphs on `0..n` with bitset adjacency, plus the clique,
//! independent-set and partite-complement machinery everything else uses.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Default cap on the vertex count accepted by [`max_independent_set`].
pub const DEFAULT_MIS_CAP: usize = 40;
/// Default cap on the number of cliques returned by [`enumerate_cliques`].
pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![VertexSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        if n >= 3 {
            for v in 0..n {
                g.add_edge(v, (v + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `uv`. Self-loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Degree of `v` counted inside `mask`.
    #[inline]
    pub fn degree_in(&self, v: usize, mask: &VertexSet) -> usize {
        self.adj[v].intersection_len(mask)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Number of edges with both endpoints in `mask`.
    pub fn edges_within(&self, mask: &VertexSet) -> usize {
        mask.iter().map(|v| self.degree_in(v, mask)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    /// Common neighbourhood of `vs`; the whole vertex set when `vs` is empty.
    pub fn common_neighbors(&self, vs: &[usize]) -> VertexSet {
        let mut s = self.vertex_set();
        for &v in vs {
            s.intersect_with(&self.adj[v]);
        }
        s
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for v in 0..self.n {
            let mut row = self.adj[v].complement();
            row.remove(v);
            g.adj[v] = row;
        }
        g
    }

    /// The subgraph induced on `mask`, relabelled to `0..|mask|` in index
    /// order, together with the map from new to old labels.
    pub fn induced(&self, mask: &VertexSet) -> (Graph, Vec<usize>) {
        let map = mask.to_vec();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            for w in self.adj[v].intersection(mask).iter() {
                if pos[w] > i {
                    g.add_edge(i, pos[w]);
                }
            }
        }
        (g, map)
    }

    /// Keeps only edges with both endpoints in `mask`; labels are unchanged.
    pub fn restrict(&self, mask: &VertexSet) -> Graph {
        let mut g = Graph::new(self.n);
        for v in mask.iter() {
            g.adj[v] = self.adj[v].intersection(mask);
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }
}

/// A graph together with an ordered list of pairwise disjoint vertex classes.
/// Vertices outside every class are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedGraph {
    graph: Graph,
    classes: Vec<VertexSet>,
}

impl PartitionedGraph {
    pub fn new(graph: Graph, classes: Vec<VertexSet>) -> Result<Self> {
        check_disjoint(graph.n(), &classes)?;
        Ok(Self { graph, classes })
    }

    pub fn from_class_lists(graph: Graph, classes: &[Vec<usize>]) -> Result<Self> {
        let n = graph.n();
        let sets = classes
            .iter()
            .map(|c| VertexSet::from_iter(n, c.iter().copied()))
            .collect::<Vec<_>>();
        for (i, c) in classes.iter().enumerate() {
            if sets[i].len() != c.len() {
                let dup = c.iter().find(|&&v| c.iter().filter(|&&w| w == v).count() > 1);
                return Err(Error::OverlappingClasses {
                    vertex: dup.copied().unwrap_or(0),
                });
            }
        }
        Self::new(graph, sets)
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i]
    }

    pub fn into_parts(self) -> (Graph, Vec<VertexSet>) {
        (self.graph, self.classes)
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(v))
    }

    /// Union of all classes.
    pub fn covered(&self) -> VertexSet {
        let mut s = self.graph.empty_set();
        for c in &self.classes {
            s.union_with(c);
        }
        s
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(VertexSet::len).collect()
    }

    /// True when no edge lies inside a class.
    pub fn classes_independent(&self) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|v| self.graph.neighbors(v).is_disjoint(c)))
    }

    /// The graph keeping only edges between two distinct classes.
    pub fn cross_class_graph(&self) -> Graph {
        cross_class_graph(&self.graph, &self.classes)
    }
}

fn check_disjoint(n: usize, classes: &[VertexSet]) -> Result<()> {
    let mut seen = VertexSet::new(n);
    for c in classes {
        if c.universe() != n {
            return Err(Error::Contract(format!(
                "class over universe {} used with a graph on {n} vertices",
                c.universe()
            )));
        }
        if let Some(v) = c.intersection(&seen).first() {
            return Err(Error::OverlappingClasses { vertex: v });
        }
        seen.union_with(c);
    }
    Ok(())
}

pub(crate) fn cross_class_graph(g: &Graph, classes: &[VertexSet]) -> Graph {
    let mut out = Graph::new(g.n());
    let mut all = g.empty_set();
    for c in classes {
        all.union_with(c);
    }
    for c in classes {
        let others = all.difference(c);
        for v in c.iter() {
            out.adj[v] = g.neighbors(v).intersection(&others);
        }
    }
    out
}

/// Vertex-disjoint `k`-cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueMatching {
    pub k: usize,
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueMatching {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn vertices(&self, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.cliques.iter().flatten().copied())
    }
}

/// Lexicographically first `k`-clique inside `cand`.
pub fn find_clique_in(g: &Graph, cand: &VertexSet, k: usize) -> Option<Vec<usize>> {
    let mut cur = Vec::with_capacity(k);
    if extend_first(g, cand.clone(), k, &mut cur) {
        Some(cur)
    } else {
        None
    }
}

fn extend_first(g: &Graph, mut cand: VertexSet, need: usize, cur: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    while cand.len() >= need {
        let v = cand.first().expect("nonempty");
        cand.remove(v);
        let next = cand.intersection(g.neighbors(v));
        if next.len() + 1 >= need {
            cur.push(v);
            if extend_first(g, next, need - 1, cur) {
                return true;
            }
            cur.pop();
        }
    }
    false
}

/// Some `k` pairwise adjacent vertices, lexicographically first.
pub fn find_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    find_clique_in(g, &g.vertex_set(), k)
}

pub fn has_clique(g: &Graph, k: usize) -> bool {
    find_clique(g, k).is_some()
}

/// All `k`-cliques inside `cand`, each sorted, in lexicographic order.
/// Fails once more than `cap` cliques have been found.
pub fn enumerate_cliques_in(
    g: &Graph,
    cand: &VertexSet,
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    enumerate_rec(g, cand.clone(), k, &mut cur, &mut out, cap)?;
    Ok(out)
}

pub fn enumerate_cliques(g: &Graph, k: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    enumerate_cliques_in(g, &g.vertex_set(), k, cap)
}

fn enumerate_rec(
    g: &Graph,
    mut cand: VertexSet,
    need: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if need == 0 {
        if out.len() == cap {
            return Err(Error::CliqueOverflow { cap });
        }
        out.push(cur.clone());
        return Ok(());
    }
    while cand.len() >= need {
        let v = cand.first().expect("nonempty");
        cand.remove(v);
        let next = cand.intersection(g.neighbors(v));
        cur.push(v);
        enumerate_rec(g, next, need - 1, cur, out, cap)?;
        cur.pop();
    }
    Ok(())
}

/// Maximum clique by branch and bound with a greedy-colouring bound.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    let mut best = Vec::new();
    let mut cur = Vec::new();
    expand_clique(g, &mut cur, g.vertex_set(), &mut best);
    best.sort_unstable();
    best
}

fn expand_clique(g: &Graph, cur: &mut Vec<usize>, mut cand: VertexSet, best: &mut Vec<usize>) {
    let (order, colors) = colour_sort(g, &cand);
    for idx in (0..order.len()).rev() {
        if cur.len() + colors[idx] <= best.len() {
            return;
        }
        let v = order[idx];
        cur.push(v);
        let next = cand.intersection(g.neighbors(v));
        if next.is_empty() {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
        } else {
            expand_clique(g, cur, next, best);
        }
        cur.pop();
        cand.remove(v);
    }
}

/// Greedy colouring of `cand` in index order; returns the vertices sorted
/// by colour with the colour number (1-based) of each.
fn colour_sort(g: &Graph, cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.len());
    let mut colors = Vec::with_capacity(cand.len());
    let mut uncoloured = cand.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail.difference_with(g.neighbors(v));
            uncoloured.remove(v);
            order.push(v);
            colors.push(colour);
        }
    }
    (order, colors)
}

/// Exact maximum independent set for graphs with at most `cap` vertices.
pub fn max_independent_set(g: &Graph, cap: usize) -> Result<(usize, Vec<usize>)> {
    if g.n() > cap {
        return Err(Error::CapExceeded {
            what: "maximum independent set",
            size: g.n(),
            cap,
        });
    }
    let set = max_clique(&g.complement());
    Ok((set.len(), set))
}

pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
}

pub fn is_clique(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && g.has_edge(u, v)))
}

/// Greedy maximal matching of `k`-cliques in the cross-class graph of `pg`:
/// repeatedly takes the lexicographically first `k`-clique avoiding the
/// cliques already chosen.
pub fn greedy_clique_matching(pg: &PartitionedGraph, k: usize) -> CliqueMatching {
    greedy_clique_matching_in(pg.graph(), pg.classes(), k)
}

pub(crate) fn greedy_clique_matching_in(g: &Graph, classes: &[VertexSet], k: usize) -> CliqueMatching {
    let cross = cross_class_graph(g, classes);
    let mut free = g.empty_set();
    for c in classes {
        free.union_with(c);
    }
    let mut cliques = Vec::new();
    if k == 0 {
        return CliqueMatching { k, cliques };
    }
    while let Some(c) = find_clique_in(&cross, &free, k) {
        for &v in &c {
            free.remove(v);
        }
        cliques.push(c);
    }
    CliqueMatching { k, cliques }
}

/// The graph whose edges are the non-edges of `pg` joining two distinct
/// classes. Vertices outside every class are isolated.
pub fn r_partite_complement(pg: &PartitionedGraph) -> Result<Graph> {
    partite_complement(pg.graph(), pg.classes())
}

pub(crate) fn partite_complement(g: &Graph, classes: &[VertexSet]) -> Result<Graph> {
    check_disjoint(g.n(), classes)?;
    let mut all = g.empty_set();
    for c in classes {
        all.union_with(c);
    }
    let mut out = Graph::new(g.n());
    for c in classes {
        let others = all.difference(c);
        for v in c.iter() {
            out.adj[v] = others.difference(g.neighbors(v));
        }
    }
    Ok(out)
}

/// Number of edges of `g` with at least one endpoint in `s`.
pub fn covered_edge_count(g: &Graph, s: &VertexSet) -> usize {
    let incident: usize = s.iter().map(|v| g.degree(v)).sum();
    incident - g.edges_within(s)
}

/// Maximum matching of the bipartite graph between `left` and `right`
/// (augmenting paths, lowest indices first).
pub fn max_bipartite_matching(g: &Graph, left: &VertexSet, right: &VertexSet) -> Vec<(usize, usize)> {
    let mut mate: Vec<Option<usize>> = vec![None; g.n()];
    for u in left.iter() {
        let mut seen = g.empty_set();
        augment(g, u, right, &mut mate, &mut seen);
    }
    let mut out: Vec<(usize, usize)> = right
        .iter()
        .filter_map(|v| mate[v].map(|u| (u, v)))
        .collect();
    out.sort_unstable();
    out
}

fn augment(
    g: &Graph,
    u: usize,
    right: &VertexSet,
    mate: &mut [Option<usize>],
    seen: &mut VertexSet,
) -> bool {
    for v in g.neighbors(u).intersection(right).iter() {
        if seen.contains(v) {
            continue;
        }
        seen.insert(v);
        if mate[v].is_none() || augment(g, mate[v].unwrap(), right, mate, seen) {
            mate[v] = Some(u);
            return true;
        }
    }
    false
}

/// If `g[mask]` is complete multipartite, its classes ordered by least
/// vertex. Non-adjacency must then be an equivalence relation on `mask`.
pub fn complete_multipartite_classes(g: &Graph, mask: &VertexSet) -> Option<Vec<VertexSet>> {
    let mut rest = mask.clone();
    let mut classes = Vec::new();
    while let Some(v) = rest.first() {
        let class = mask.difference(g.neighbors(v));
        let others = mask.difference(&class);
        for u in class.iter() {
            if !g.neighbors(u).intersection(mask).eq(&others) {
                return None;
            }
        }
        rest.difference_with(&class);
        classes.push(class);
    }
    Some(classes)
}

/// Whether `g` is complete multipartite with at most `r` nonempty classes.
pub fn is_complete_multipartite(g: &Graph, r: usize) -> bool {
    complete_multipartite_classes(g, &g.vertex_set()).is_some_and(|c| c.len() <= r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turan_3_6() -> Graph {
        // classes {0,1}, {2,3}, {4,5}
        let mut g = Graph::new(6);
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    fn brute_has_clique(g: &Graph, k: usize) -> bool {
        let n = g.n();
        (0u32..(1 << n)).any(|m| {
            m.count_ones() as usize == k && {
                let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                is_clique(g, &vs)
            }
        })
    }

    #[test]
    fn clique_examples() {
        let c5 = Graph::cycle(5);
        assert!(has_clique(&c5, 0));
        assert!(!has_clique(&c5, 3));
        let t = turan_3_6();
        assert!(has_clique(&t, 3));
        assert!(!has_clique(&t, 4));
        assert!(brute_has_clique(&t, 3));
        assert!(!brute_has_clique(&t, 4));
        assert_eq!(find_clique(&t, 3), Some(vec![0, 2, 4]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_cliques(&Graph::complete(4), 2, 100).unwrap().len(), 6);
        assert_eq!(enumerate_cliques(&Graph::cycle(5), 2, 100).unwrap().len(), 5);
        let tri = enumerate_cliques(&turan_3_6(), 3, 100).unwrap();
        assert_eq!(tri.len(), 8);
        let mut sorted = tri.clone();
        sorted.sort();
        assert_eq!(sorted, tri);
    }

    #[test]
    fn enumeration_overflow_is_signalled() {
        let err = enumerate_cliques(&Graph::complete(6), 2, 10).unwrap_err();
        assert_eq!(err, Error::CliqueOverflow { cap: 10 });
        assert_eq!(enumerate_cliques(&Graph::complete(5), 2, 10).unwrap().len(), 10);
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(max_independent_set(&Graph::complete(7), 40).unwrap().0, 1);
        let (a, w) = max_independent_set(&Graph::cycle(5), 40).unwrap();
        assert_eq!(a, 2);
        assert!(is_independent(&Graph::cycle(5), &w));
        assert!(matches!(
            max_independent_set(&Graph::new(41), 40),
            Err(Error::CapExceeded { size: 41, cap: 40, .. })
        ));
        assert_eq!(max_independent_set(&Graph::new(0), 40).unwrap().0, 0);
    }

    #[test]
    fn clique_matchings() {
        let pg = PartitionedGraph::new(Graph::new(6), vec![VertexSet::full(6)]).unwrap();
        assert!(greedy_clique_matching(&pg, 3).is_empty());

        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let classes = vec![
            VertexSet::from_iter(6, [0, 3]),
            VertexSet::from_iter(6, [1, 4]),
            VertexSet::from_iter(6, [2, 5]),
        ];
        let pg = PartitionedGraph::new(two_triangles, classes).unwrap();
        let m = greedy_clique_matching(&pg, 3);
        assert_eq!(m.cliques, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn greedy_matching_is_maximal_on_turan_graph() {
        let t = turan_3_6();
        let classes = (0..3).map(|i| VertexSet::from_iter(6, [2 * i, 2 * i + 1])).collect();
        let pg = PartitionedGraph::new(t.clone(), classes).unwrap();
        let m = greedy_clique_matching(&pg, 3);
        assert!(!m.is_empty());
        let used = m.vertices(6);
        let residual = used.complement();
        assert!(!brute_has_clique(&t.restrict(&residual), 3));
        for c in &m.cliques {
            assert!(is_clique(&t, c));
        }
    }

    #[test]
    fn partite_complements() {
        let t = turan_3_6();
        let classes: Vec<_> = (0..3).map(|i| VertexSet::from_iter(6, [2 * i, 2 * i + 1])).collect();
        let pg = PartitionedGraph::new(t, classes).unwrap();
        assert_eq!(r_partite_complement(&pg).unwrap().edge_count(), 0);

        let pg = PartitionedGraph::new(
            Graph::new(5),
            vec![VertexSet::from_iter(5, [0, 1]), VertexSet::from_iter(5, [2, 3, 4])],
        )
        .unwrap();
        let comp = r_partite_complement(&pg).unwrap();
        assert_eq!(comp.edge_count(), 6);
        assert!(is_complete_multipartite(&comp, 2));
    }

    #[test]
    fn overlapping_classes_rejected() {
        let err = PartitionedGraph::new(
            Graph::new(4),
            vec![VertexSet::from_iter(4, [0, 1]), VertexSet::from_iter(4, [1, 2])],
        )
        .unwrap_err();
        assert_eq!(err, Error::OverlappingClasses { vertex: 1 });
        let err = partite_complement(
            &Graph::new(4),
            &[VertexSet::from_iter(4, [0, 3]), VertexSet::from_iter(4, [3])],
        )
        .unwrap_err();
        assert_eq!(err, Error::OverlappingClasses { vertex: 3 });
    }

    #[test]
    fn covered_edges() {
        let c5 = Graph::cycle(5);
        assert_eq!(covered_edge_count(&c5, &VertexSet::new(5)), 0);
        assert_eq!(covered_edge_count(&c5, &VertexSet::full(5)), 5);
        assert_eq!(covered_edge_count(&c5, &VertexSet::from_iter(5, [2])), 2);
        assert_eq!(covered_edge_count(&c5, &VertexSet::from_iter(5, [0, 1])), 3);
    }

    #[test]
    fn complete_multipartite_recognition() {
        assert!(is_complete_multipartite(&turan_3_6(), 3));
        assert!(!is_complete_multipartite(&turan_3_6(), 2));
        assert!(!is_complete_multipartite(&Graph::path(4), 2));
        assert!(is_complete_multipartite(&Graph::path(3), 2));
        assert!(is_complete_multipartite(&Graph::new(0), 0));
        assert!(is_complete_multipartite(&Graph::new(3), 1));
    }

    #[test]
    fn bipartite_matching_is_perfect_on_complete_bipartite() {
        let mut g = Graph::new(8);
        for u in 0..4 {
            for v in 4..8 {
                g.add_edge(u, v);
            }
        }
        let m = max_bipartite_matching(&g, &VertexSet::range(8, 0, 4), &VertexSet::range(8, 4, 8));
        assert_eq!(m.len(), 4);
    }
}
