//! Uniform covers of {1, …, n} and the integer identities that go with them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::constructions::CoordinateSubset;
use crate::error::{invalid, Result};

pub fn factorial(n: usize) -> BigInt {
    crate::hull::factorial(n)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `total! / ∏ parts!`; zero unless the parts sum to `total`.
pub fn multinomial(total: usize, parts: &[usize]) -> BigInt {
    if parts.iter().sum::<usize>() != total {
        return BigInt::zero();
    }
    parts.iter().fold(factorial(total), |acc, &k| acc / factorial(k))
}

/// A tuple of blocks covering every element of {0, …, n−1} exactly `p` times.
///
/// Blocks are labelled by position; covers that differ by a permutation of
/// blocks are different covers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UniformCover {
    n: usize,
    p: usize,
    blocks: Vec<CoordinateSubset>,
}

impl UniformCover {
    pub fn new(n: usize, p: usize, blocks: Vec<CoordinateSubset>) -> Result<Self> {
        if blocks.iter().any(|b| b.n() != n) {
            return Err(invalid("cover blocks live in a different ground set"));
        }
        for j in 0..n {
            let count = blocks.iter().filter(|b| b.contains(j)).count();
            if count != p {
                return Err(invalid(format!("element {} is covered {count} times, expected {p}", j + 1)));
            }
        }
        Ok(Self { n, p, blocks })
    }

    /// Infers `p` from the number of blocks containing element 1.
    pub fn infer(n: usize, blocks: Vec<CoordinateSubset>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("ground set must be nonempty"));
        }
        let p = blocks.iter().filter(|b| b.contains(0)).count();
        Self::new(n, p, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[CoordinateSubset] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(CoordinateSubset::len).collect()
    }

    pub fn nonempty_blocks(&self) -> Vec<CoordinateSubset> {
        self.blocks.iter().filter(|b| !b.is_empty()).cloned().collect()
    }
}

impl std::fmt::Display for UniformCover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every `p`-uniform cover by `p + 1` blocks, in lexicographic order of the
/// map "element ↦ the block missing it".
pub fn all_covers(n: usize, p: usize) -> Vec<UniformCover> {
    let blocks = p + 1;
    let total = blocks.pow(n as u32);
    (0..total)
        .map(|code| {
            // Element 0 is the most significant digit.
            let mut missing = vec![0usize; n];
            let mut c = code;
            for j in (0..n).rev() {
                missing[j] = c % blocks;
                c /= blocks;
            }
            cover_from_missing(n, p, &missing)
        })
        .collect()
}

fn cover_from_missing(n: usize, p: usize, missing: &[usize]) -> UniformCover {
    let blocks = (0..=p)
        .map(|b| CoordinateSubset::new(n, (0..n).filter(|&j| missing[j] != b)).expect("in range"))
        .collect();
    UniformCover { n, p, blocks }
}

/// The `p`-uniform `(p+1)`-block covers with `|σᵢ| = sizes[i]`. Infeasible
/// sizes give an empty list.
pub fn enumerate_covers(n: usize, p: usize, sizes: &[usize]) -> Vec<UniformCover> {
    if sizes.len() != p + 1 || sizes.iter().any(|&s| s > n) {
        return Vec::new();
    }
    if sizes.iter().map(|&s| n - s).sum::<usize>() != n {
        return Vec::new();
    }
    all_covers(n, p).into_iter().filter(|c| c.sizes() == sizes).collect()
}

/// The 1-uniform cover induced by a uniform cover.
///
/// For `p`-uniform covers with `p + 1` blocks every element misses exactly one
/// block, and the induced cover is the tuple of complements (empty blocks
/// included, so positions still match). Otherwise it is the list of nonempty
/// atoms `∩ σᵢ^{ε(i)}`, ordered by their smallest element.
pub fn induced_one_cover(cover: &UniformCover) -> UniformCover {
    let n = cover.n;
    if cover.blocks.len() == cover.p + 1 {
        let blocks = cover.blocks.iter().map(CoordinateSubset::complement).collect();
        return UniformCover { n, p: 1, blocks };
    }
    let pattern = |j: usize| -> Vec<bool> { cover.blocks.iter().map(|b| b.contains(j)).collect() };
    let mut atoms: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for j in 0..n {
        let pat = pattern(j);
        match atoms.iter_mut().find(|(p, _)| *p == pat) {
            Some((_, members)) => members.push(j),
            None => atoms.push((pat, vec![j])),
        }
    }
    let blocks = atoms
        .into_iter()
        .map(|(_, m)| CoordinateSubset::new(n, m).expect("in range"))
        .collect();
    UniformCover { n, p: 1, blocks }
}

/// Σ_k C(pn, k)·C(n, k) = C(pn + n, n).
pub fn vandermonde_check_1(n: usize, p: usize) -> bool {
    let lhs: BigInt = (0..=n).map(|k| binomial(p * n, k) * binomial(n, k)).sum();
    lhs == binomial(p * n + n, n)
}

/// Σ_{k₁+…+k_p = k} ∏ C(n, kᵢ) = C(pn, k).
pub fn vandermonde_check_2(n: usize, p: usize, k: usize) -> bool {
    let lhs: BigInt = compositions(k, p, n).iter().map(|ks| ks.iter().map(|&ki| binomial(n, ki)).product::<BigInt>()).sum();
    lhs == binomial(p * n, k)
}

/// All `(k₁, …, k_parts)` with `0 ≤ kᵢ ≤ max` and sum `total`, lexicographic.
pub fn compositions(total: usize, parts: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=total.min(max) {
            cur.push(k);
            rec(total - k, parts - 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, max, &mut Vec::new(), &mut out);
    out
}
