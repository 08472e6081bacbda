//! Seeded random bodies on small-denominator grids.
//!
//! Every trial of a search gets its own ChaCha stream derived from the master
//! seed, so trial `i` can be reproduced without running trials `0..i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{axis_simplex, staircase_antiblocking};
use crate::error::Result;
use crate::polytope::VPolytope;
use crate::rational::{Point, Rational};

/// Generator for trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn grid_value<R: Rng>(rng: &mut R, lo: i64, q: u32) -> Rational {
    let q = i64::from(q.max(1));
    Rational::new(rng.random_range(lo..=q).into(), q.into())
}

/// Staircase body from `count` generators with coordinates in {1/q, …, q/q}.
pub fn random_staircase<R: Rng>(rng: &mut R, n: usize, q: u32, count: usize) -> Result<VPolytope> {
    let gens: Vec<Point> = (0..count.max(1)).map(|_| (0..n).map(|_| grid_value(rng, 1, q)).collect()).collect();
    staircase_antiblocking(&gens)
}

/// `conv{0, c₁e₁, …, cₙeₙ}` with each cᵢ in {1/q, …, q/q}.
pub fn random_axis_simplex<R: Rng>(rng: &mut R, n: usize, q: u32) -> Result<VPolytope> {
    let c: Vec<Rational> = (0..n).map(|_| grid_value(rng, 1, q)).collect();
    axis_simplex(&c)
}

/// Anti-blocking body that is an axis simplex with probability 1/4 and a
/// staircase otherwise, so that equality cases show up in seeded corpora.
pub fn random_antiblocking<R: Rng>(rng: &mut R, n: usize, q: u32, count: usize) -> Result<VPolytope> {
    if rng.random_range(0..4) == 0 {
        random_axis_simplex(rng, n, q)
    } else {
        random_staircase(rng, n, q, count)
    }
}

/// Hull of `count` points with coordinates in {−q/q, …, q/q}. May be lower
/// dimensional.
pub fn random_general<R: Rng>(rng: &mut R, n: usize, q: u32, count: usize) -> Result<VPolytope> {
    let q_i = i64::from(q.max(1));
    let pts: Vec<Point> = (0..count.max(1)).map(|_| (0..n).map(|_| grid_value(rng, -q_i, q)).collect()).collect();
    VPolytope::hull_in(n, pts)
}
