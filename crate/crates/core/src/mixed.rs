//! Mixed volumes of polytopes.
//!
//! The primary route is polarization: with bodies `K₁, …, K_m` of
//! multiplicities `m₁ + … + m_m = N`,
//!
//! ```text
//! V(K₁[m₁], …, K_m[m_m]) = 1/N! · Σ_j (−1)^{N−|j|} ∏ C(m_t, j_t) · vol(j₁K₁ + … + j_mK_m)
//! ```
//!
//! over `0 ≤ j_t ≤ m_t`, `j ≠ 0`. Grouping equal bodies keeps the number of
//! Minkowski sums at `∏(m_t + 1) − 1` instead of `2^N − 1`.
//!
//! The independent route, [`mixed_volume_interpolation`], recovers the whole
//! volume polynomial `vol(λ₁K₁ + … + λ_mK_m)` from exact evaluations and reads
//! off one coefficient.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::constructions::{project_onto, CoordinateSubset};
use crate::covers::{binomial, compositions, factorial, multinomial};
use crate::error::{invalid, Error, Result};
use crate::linalg::solve;
use crate::polytope::VPolytope;
use crate::rational::{format_rational, Rational};
use crate::report::{ReportParams, VerificationReport};

/// A multiset of bodies whose multiplicities add up to the ambient dimension.
#[derive(Clone, Debug)]
pub struct MixedVolumeQuery {
    dim: usize,
    entries: Vec<(VPolytope, usize)>,
}

impl MixedVolumeQuery {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    /// Adds `mult` copies of `body`, merging with an equal body already
    /// present. Zero multiplicities are dropped.
    pub fn with(mut self, body: &VPolytope, mult: usize) -> Result<Self> {
        self.push(body, mult)?;
        Ok(self)
    }

    pub fn push(&mut self, body: &VPolytope, mult: usize) -> Result<()> {
        if body.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: body.dim() });
        }
        if mult == 0 {
            return Ok(());
        }
        match self.entries.iter_mut().find(|(b, _)| b == body) {
            Some((_, m)) => *m += mult,
            None => self.entries.push((body.clone(), mult)),
        }
        Ok(())
    }

    pub fn from_bodies(dim: usize, bodies: &[VPolytope]) -> Result<Self> {
        let mut q = Self::new(dim);
        for b in bodies {
            q.push(b, 1)?;
        }
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(VPolytope, usize)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    fn validate(&self) -> Result<()> {
        let total = self.total_multiplicity();
        if total != self.dim {
            return Err(invalid(format!("multiplicities sum to {total}, expected {}", self.dim)));
        }
        Ok(())
    }
}

/// Memoized volumes of Minkowski combinations `Σ c_t K_t`, keyed by a hash of
/// the canonical vertex sets and coefficients. Safe to share between threads.
#[derive(Default)]
pub struct VolumeCache {
    map: Mutex<HashMap<[u8; 32], Rational>>,
}

impl std::fmt::Debug for VolumeCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VolumeCache").field("entries", &self.len()).finish()
    }
}

impl VolumeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(terms: &[(&VPolytope, usize)]) -> [u8; 32] {
        let mut parts: Vec<String> = terms
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(b, c)| {
                let mut s = format!("{c}*{}:", b.dim());
                for v in b.vertices() {
                    for x in v {
                        s.push_str(&format_rational(x));
                        s.push(',');
                    }
                    s.push(';');
                }
                s
            })
            .collect();
        parts.sort();
        let mut h = Sha256::new();
        for p in parts {
            h.update(p.as_bytes());
            h.update(b"|");
        }
        h.finalize().into()
    }
}

/// `vol(Σ c_t K_t)` for nonnegative integer coefficients, not all zero.
pub fn volume_of_combination(terms: &[(&VPolytope, usize)], cache: Option<&VolumeCache>) -> Rational {
    let key = cache.map(|_| VolumeCache::key(terms));
    if let (Some(c), Some(k)) = (cache, key.as_ref()) {
        if let Some(v) = c.map.lock().get(k) {
            return v.clone();
        }
    }
    let mut acc: Option<VPolytope> = None;
    for (body, coef) in terms.iter().filter(|(_, c)| *c > 0) {
        let scaled = if *coef == 1 { (*body).clone() } else { body.scale(&Rational::from_integer((*coef).into())) };
        acc = Some(match acc {
            None => scaled,
            Some(a) => a.minkowski_sum(&scaled).expect("terms share a dimension"),
        });
    }
    let vol = acc.map(|b| b.volume()).unwrap_or_else(Rational::zero);
    if let (Some(c), Some(k)) = (cache, key) {
        c.map.lock().insert(k, vol.clone());
    }
    vol
}

pub fn mixed_volume(query: &MixedVolumeQuery) -> Result<Rational> {
    mixed_volume_cached(query, None)
}

pub fn mixed_volume_cached(query: &MixedVolumeQuery, cache: Option<&VolumeCache>) -> Result<Rational> {
    query.validate()?;
    let n = query.dim;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mults: Vec<usize> = query.entries.iter().map(|(_, m)| *m).collect();
    let selections: Vec<Vec<usize>> = multi_indices(&mults).into_iter().filter(|j| j.iter().any(|&x| x > 0)).collect();
    let total: Rational = selections
        .par_iter()
        .map(|j| {
            let size: usize = j.iter().sum();
            let weight: BigInt = j.iter().zip(&mults).map(|(&jt, &mt)| binomial(mt, jt)).product();
            let terms: Vec<(&VPolytope, usize)> = query.entries.iter().map(|(b, _)| b).zip(j.iter().copied()).collect();
            let vol = volume_of_combination(&terms, cache);
            let term = vol * Rational::from_integer(weight);
            if (n - size) % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total / Rational::from_integer(factorial(n)))
}

/// All `j` with `0 ≤ j_t ≤ bounds[t]`, lexicographic.
fn multi_indices(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

const INTERPOLATION_ATTEMPTS: usize = 8;

/// Mixed volume through the coefficients of the volume polynomial.
///
/// Evaluation points are `λ = (1, 1 + β₂·s, …, 1 + β_m·s)` for `β` in the
/// simplex lattice `|β| ≤ N`, which is unisolvent for the dehomogenized
/// polynomial; `s` starts at 1 and grows if the system ever comes out singular.
/// Intended for `N ≤ 5`.
pub fn mixed_volume_interpolation(query: &MixedVolumeQuery) -> Result<Rational> {
    query.validate()?;
    let n = query.dim;
    if n == 0 {
        return Ok(Rational::one());
    }
    let m = query.entries.len();
    let monomials = compositions(n, m, n);
    let target_mults: Vec<usize> = query.entries.iter().map(|(_, k)| *k).collect();
    let target = monomials.iter().position(|a| *a == target_mults).expect("target is a composition of N");

    for attempt in 0..INTERPOLATION_ATTEMPTS {
        let step = Rational::from_integer((attempt + 1).into());
        let points: Vec<Vec<Rational>> = monomials
            .iter()
            .map(|alpha| {
                std::iter::once(Rational::one())
                    .chain(alpha[1..].iter().map(|&b| Rational::one() + &step * Rational::from_integer(b.into())))
                    .collect()
            })
            .collect();
        let matrix: Vec<Vec<Rational>> = points
            .iter()
            .map(|lambda| monomials.iter().map(|alpha| monomial_value(lambda, alpha)).collect())
            .collect();
        if crate::linalg::rank(&matrix) < monomials.len() {
            continue;
        }
        let values: Vec<Rational> = points
            .par_iter()
            .map(|lambda| {
                let mut acc: Option<VPolytope> = None;
                for ((body, _), l) in query.entries.iter().zip(lambda) {
                    let scaled = body.scale(l);
                    acc = Some(match acc {
                        None => scaled,
                        Some(a) => a.minkowski_sum(&scaled).expect("same dimension"),
                    });
                }
                acc.expect("at least one entry").volume()
            })
            .collect();
        let coeffs = solve(matrix, values).ok_or(Error::SingularSystem)?;
        return Ok(&coeffs[target] / Rational::from_integer(multinomial(n, &target_mults)));
    }
    Err(Error::SingularSystem)
}

fn monomial_value(lambda: &[Rational], alpha: &[usize]) -> Rational {
    lambda.iter().zip(alpha).fold(Rational::one(), |acc, (l, &a)| acc * num_traits::pow(l.clone(), a))
}

/// Places a body of `E_σ ≅ ℝ^{|σ|}` into ℝⁿ.
pub fn include_subspace(body: &VPolytope, sigma: &CoordinateSubset) -> Result<VPolytope> {
    if body.dim() != sigma.len() {
        return Err(Error::DimensionMismatch { expected: sigma.len(), found: body.dim() });
    }
    let n = sigma.n();
    let pts = body
        .vertices()
        .iter()
        .map(|v| {
            let mut w = vec![Rational::zero(); n];
            for (t, &i) in sigma.members().iter().enumerate() {
                w[i] = v[t].clone();
            }
            w
        })
        .collect();
    VPolytope::hull_in(n, pts)
}

/// Checks the mixed-volume identity for the split `0 → E_σ → ℝⁿ → E_{σᶜ} → 0`
/// (inclusion, then orthogonal projection):
///
/// `C(n, k)·V(K₁, …, K_{n−k}, f L₁, …, f L_k) = V(g K₁, …, g K_{n−k})·V(L₁, …, L_k)`.
pub fn lemma_exact_sequence_check(
    sigma: &CoordinateSubset,
    bodies_w2: &[VPolytope],
    bodies_w1: &[VPolytope],
) -> Result<VerificationReport> {
    let n = sigma.n();
    let k = sigma.len();
    if bodies_w2.len() != n - k || bodies_w1.len() != k {
        return Err(invalid(format!(
            "expected {} bodies in the ambient space and {k} in the subspace, got {} and {}",
            n - k,
            bodies_w2.len(),
            bodies_w1.len()
        )));
    }
    let included: Vec<VPolytope> = bodies_w1.iter().map(|l| include_subspace(l, sigma)).collect::<Result<_>>()?;
    let mut all = bodies_w2.to_vec();
    all.extend(included);
    let lhs = Rational::from_integer(binomial(n, k)) * mixed_volume(&MixedVolumeQuery::from_bodies(n, &all)?)?;

    let complement = sigma.complement();
    let projected: Vec<VPolytope> = bodies_w2.iter().map(|b| project_onto(b, &complement)).collect();
    let rhs = mixed_volume(&MixedVolumeQuery::from_bodies(n - k, &projected)?)?
        * mixed_volume(&MixedVolumeQuery::from_bodies(k, bodies_w1)?)?;

    let params = ReportParams { n: Some(n), k: Some(k), sigma: Some(sigma.one_based()), ..Default::default() };
    let mut bodies = bodies_w2.to_vec();
    bodies.extend(bodies_w1.iter().cloned());
    Ok(VerificationReport::identity("lemma-exact", params, lhs, rhs).with_bodies(&bodies))
}
