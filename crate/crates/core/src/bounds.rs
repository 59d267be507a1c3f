//! Closed-form thresholds, generic over the scalar they are evaluated in.
//!
//! Predicates instantiate these with [`crate::Exact`] so every comparison is
//! exact; reports instantiate them with [`crate::Real`] for readable ratios.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

use crate::turan::turan_number;

pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug {}

impl<T: Num + Clone + PartialOrd + FromPrimitive + Debug> Scalar for T {}

#[inline]
pub fn int<S: Scalar>(x: i128) -> S {
    S::from_i128(x).expect("integer representable in scalar")
}

#[inline]
pub fn frac<S: Scalar>(num: i128, den: i128) -> S {
    int::<S>(num) / int::<S>(den)
}

fn pow<S: Scalar>(base: S, e: u32) -> S {
    (0..e).fold(S::one(), |acc, _| acc * base.clone())
}

/// `t_r(n) - (1 - 1/r) t n`.
pub fn turan_shift_floor<S: Scalar>(r: usize, n: usize, t: usize) -> S {
    let tr = int::<S>(turan_number(r, n) as i128);
    tr - frac::<S>(r as i128 - 1, r as i128) * int::<S>((t * n) as i128)
}

/// `t_r(n) - (r-1)tn/r - 4(r-1)ts^r`, the guaranteed edge count of the
/// final construction.
pub fn construction_edge_floor<S: Scalar>(r: usize, s: usize, t: usize, n: usize) -> S {
    let r1 = r as i128 - 1;
    turan_shift_floor::<S>(r, n, t) - int::<S>(4 * r1 * t as i128) * pow(int::<S>(s as i128), r as u32)
}

/// `(3r-4)/(3r-1) * n`: some vertex of a K_{r+1}-free graph that is not
/// r-partite has at most this degree.
pub fn low_degree_ceiling<S: Scalar>(r: usize, n: usize) -> S {
    let r = r as i128;
    frac::<S>(3 * r - 4, 3 * r - 1) * int::<S>(n as i128)
}

/// `10 r^2 (3r-1) eps n`, the peeling size bound.
pub fn peel_ceiling<S: Scalar>(r: usize, eps: S, n: usize) -> S {
    let r = r as i128;
    int::<S>(10 * r * r * (3 * r - 1)) * eps * int::<S>(n as i128)
}

/// `(30 r^3)^{-1}`, the largest density deficit the peeling bound covers.
pub fn peel_regime_ceiling<S: Scalar>(r: usize) -> S {
    let r = r as i128;
    frac::<S>(1, 30 * r * r * r)
}

/// `m / n^2` for `m = t_r(n) - e`.
pub fn density_deficit<S: Scalar>(r: usize, n: usize, edges: usize) -> S {
    let m = turan_number(r, n) as i128 - edges as i128;
    if n == 0 {
        return S::zero();
    }
    frac::<S>(m, (n * n) as i128)
}

/// `t_r(n) - floor(n/r) + 2`: a K_{r+1}-free graph on `n >= 2r+1` vertices
/// with at least this many edges is r-partite.
pub fn r_partite_edge_threshold(r: usize, n: usize) -> i128 {
    turan_number(r, n) as i128 - (n / r) as i128 + 2
}
