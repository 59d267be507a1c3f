#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saturated_core::constructions::{build_h_rst, FinalParams};
use saturated_core::graph::{find_clique_in, Graph};
use saturated_core::random_build::{build_random, RandomBuildParams};
use saturated_core::turan::turan_graph;
use saturated_core::{Exact, VertexSet};

pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub r: usize,
}

fn inst(name: impl Into<String>, graph: Graph, r: usize) -> Instance {
    Instance { name: name.into(), graph, r }
}

pub fn half() -> Exact {
    Exact::new(1.into(), 2.into())
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Random maximal K_{r+1}-free graph: insert pairs in random order whenever
/// no K_{r+1} appears.
pub fn random_saturated(n: usize, r: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut g = Graph::new(n);
    for (u, v) in pairs {
        let common = g.neighbors(u).intersection(g.neighbors(v));
        if find_clique_in(&g, &common, r - 1).is_none() {
            g.add_edge(u, v);
        }
    }
    g
}

/// Blow-up of `base`: vertex `i` becomes an independent set of `sizes[i]`.
pub fn blow_up(base: &Graph, sizes: &[usize]) -> Graph {
    let mut start = vec![0];
    for s in sizes {
        start.push(start.last().unwrap() + s);
    }
    let mut g = Graph::new(*start.last().unwrap());
    for (a, b) in base.edges() {
        for u in start[a]..start[a + 1] {
            for v in start[b]..start[b + 1] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `g` joined to an independent set of `k` new vertices.
pub fn join_independent(g: &Graph, k: usize) -> Graph {
    let n = g.n();
    let mut out = Graph::new(n + k);
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for a in n..n + k {
        for v in 0..n {
            out.add_edge(a, v);
        }
    }
    out
}

pub fn c5_fixtures() -> Vec<Instance> {
    let c5 = Graph::cycle(5);
    vec![
        inst("C5", c5.clone(), 2),
        inst("C5[1,2,1,2,1]", blow_up(&c5, &[1, 2, 1, 2, 1]), 2),
        inst("C5[2,2,2,2,2]", blow_up(&c5, &[2, 2, 2, 2, 2]), 2),
        inst("C5[3,1,2,1,1]", blow_up(&c5, &[3, 1, 2, 1, 1]), 2),
        inst("C5[4,3,1,5,2]", blow_up(&c5, &[4, 3, 1, 5, 2]), 2),
        inst("C5+K1", join_independent(&c5, 1), 3),
        inst("C5+I2", join_independent(&c5, 2), 3),
        inst("C5[2,1,1,1,1]+I3", join_independent(&blow_up(&c5, &[2, 1, 1, 1, 1]), 3), 3),
    ]
}

pub fn h_instances(max_n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for &(r, s, t) in &[(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        let lo = FinalParams::min_order(r, s, t);
        for n in (lo..=max_n).step_by(7) {
            let fc = build_h_rst(&FinalParams::new(r, s, t, n).unwrap()).unwrap();
            out.push(inst(format!("H_{r},{s},{t}({n})"), fc.pg.into_parts().0, r));
        }
    }
    out
}

pub fn random_builds(seeds: std::ops::Range<u64>, ns: &[usize]) -> Vec<Instance> {
    let mut out = Vec::new();
    for &n in ns {
        for seed in seeds.clone() {
            let b = build_random(&RandomBuildParams::new(2, half(), n, seed)).unwrap();
            out.push(inst(format!("random(r=2,n={n},seed={seed})"), b.pg.into_parts().0, 2));
        }
    }
    out
}

pub fn turan_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for r in 2..=3 {
        for n in [1, 4, 7, 12, 20] {
            out.push(inst(format!("T_{r}({n})"), turan_graph(r, n).into_parts().0, r));
        }
    }
    out
}

pub fn small_saturated(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let r = 2 + (seed % 2) as usize;
            let n = 6 + (seed as usize * 5) % 15;
            inst(format!("maximal(r={r},n={n},seed={seed})"), random_saturated(n, r, seed), r)
        })
        .collect()
}

/// Saturated graphs for r in {2,3}: constructions, randomized builds,
/// C5-type fixtures, Turán graphs and random maximal graphs.
pub fn saturated_corpus() -> Vec<Instance> {
    let mut out = h_instances(60);
    for &(r, s, t, n) in &[(2, 2, 1, 150), (2, 2, 1, 300), (2, 3, 1, 240)] {
        let fc = build_h_rst(&FinalParams::new(r, s, t, n).unwrap()).unwrap();
        out.push(inst(format!("H_{r},{s},{t}({n})"), fc.pg.into_parts().0, r));
    }
    out.extend(random_builds(0..3, &[40, 52, 64]));
    out.extend(c5_fixtures());
    out.extend(turan_instances());
    out.extend(small_saturated(24));
    out
}

pub fn random_set(n: usize, p: f64, rng: &mut ChaCha8Rng) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|_| rng.random_bool(p)))
}
