//! Bodies built from other bodies: embeddings into products, higher-order
//! difference bodies, anti-blocking bodies and their coordinate pieces.
//!
//! Coordinates are 0-based in the API. [`CoordinateSubset`] prints itself
//! 1-based (`{1,3}`) because that is how the subsets are written by hand.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::linalg::LinearMap;
use crate::polytope::VPolytope;
use crate::rational::{Point, Rational};

/// A subset σ ⊆ {0, …, n−1}; the empty set stands for the zero subspace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateSubset {
    n: usize,
    members: Vec<usize>,
}

impl CoordinateSubset {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate coordinate in subset"));
        }
        if let Some(&m) = members.last() {
            if m >= n {
                return Err(invalid(format!("coordinate {} out of range for n = {n}", m + 1)));
            }
        }
        Ok(Self { n, members })
    }

    /// From 1-based indices, as written in the CLI and in reports.
    pub fn from_one_based(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: Vec<usize> = members.into_iter().collect();
        if members.contains(&0) {
            return Err(invalid("coordinates are numbered from 1"));
        }
        Self::new(n, members.into_iter().map(|m| m - 1))
    }

    pub fn full(n: usize) -> Self {
        Self { n, members: (0..n).collect() }
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, members: (0..self.n).filter(|&i| !self.contains(i)).collect() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { n: self.n, members: self.members.iter().copied().filter(|&i| other.contains(i)).collect() }
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|m| m + 1).collect()
    }
}

impl fmt::Debug for CoordinateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CoordinateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for CoordinateSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// `conv{0, c₁e₁, …, cₙeₙ}`.
pub fn axis_simplex(c: &[Rational]) -> Result<VPolytope> {
    if c.is_empty() {
        return Err(invalid("axis simplex needs at least one axis"));
    }
    if c.iter().any(|x| !x.is_positive()) {
        return Err(invalid("axis simplex lengths must be positive"));
    }
    let n = c.len();
    let mut pts = vec![vec![Rational::zero(); n]];
    for (i, ci) in c.iter().enumerate() {
        let mut v = vec![Rational::zero(); n];
        v[i] = ci.clone();
        pts.push(v);
    }
    VPolytope::hull_in(n, pts)
}

fn zeroings(p: &Point) -> impl Iterator<Item = Point> + '_ {
    let n = p.len();
    (0u64..1 << n).map(move |mask| {
        p.iter()
            .enumerate()
            .map(|(i, x)| if mask >> i & 1 == 1 { x.clone() } else { Rational::zero() })
            .collect()
    })
}

/// Hull of all coordinate zeroings of the generators: the smallest
/// anti-blocking polytope containing them.
pub fn staircase_antiblocking(generators: &[Point]) -> Result<VPolytope> {
    let n = generators.first().ok_or(Error::EmptyPointSet)?.len();
    if generators.iter().flatten().any(|x| x.is_negative()) {
        return Err(invalid("staircase generators must have nonnegative coordinates"));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: g.len() });
    }
    let pts: Vec<Point> = generators.iter().flat_map(zeroings).collect();
    VPolytope::hull_in(n, pts)
}

/// True iff the polytope lies in the nonnegative orthant and is closed under
/// zeroing coordinates.
///
/// Closure under single-coordinate zeroings of the vertices implies closure
/// under all zeroings and, by convexity, down-closedness, so `n·|V|`
/// membership problems suffice.
pub fn is_antiblocking(p: &VPolytope) -> bool {
    if p.vertices().iter().flatten().any(|x| x.is_negative()) {
        return false;
    }
    for v in p.vertices() {
        for i in 0..p.dim() {
            if v[i].is_zero() {
                continue;
            }
            let mut w = v.clone();
            w[i] = Rational::zero();
            if !p.contains(&w) {
                return false;
            }
        }
    }
    true
}

fn require_antiblocking(p: &VPolytope) -> Result<()> {
    if is_antiblocking(p) {
        Ok(())
    } else {
        Err(Error::NotAntiBlocking)
    }
}

/// The diagonal map x ↦ (x, …, x) from ℝⁿ to (ℝⁿ)ᵖ.
pub fn diagonal_map(n: usize, p: usize) -> LinearMap {
    LinearMap::from_fn(n * p, n, |i, j| if i % n == j { Rational::one() } else { Rational::zero() })
}

/// Inclusion of ℝⁿ as factor `i` (0-based) of (ℝⁿ)ᵖ.
pub fn factor_map(n: usize, i: usize, p: usize) -> Result<LinearMap> {
    if i >= p {
        return Err(invalid(format!("factor index {} out of range 1..={p}", i + 1)));
    }
    Ok(LinearMap::from_fn(n * p, n, |r, c| if r == i * n + c { Rational::one() } else { Rational::zero() }))
}

pub fn diagonal_embed(body: &VPolytope, p: usize) -> Result<VPolytope> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    body.linear_image(&diagonal_map(body.dim(), p))
}

/// `i` is 0-based.
pub fn factor_embed(body: &VPolytope, i: usize, p: usize) -> Result<VPolytope> {
    body.linear_image(&factor_map(body.dim(), i, p)?)
}

pub fn cartesian_power(body: &VPolytope, p: usize) -> Result<VPolytope> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    let mut acc = body.clone();
    for _ in 1..p {
        acc = acc.cartesian_product(body);
    }
    Ok(acc)
}

/// `D_p K = Δ_p K − Kᵖ`.
pub fn higher_difference_body(body: &VPolytope, p: usize) -> Result<VPolytope> {
    diagonal_embed(body, p)?.minkowski_sum(&cartesian_power(body, p)?.neg())
}

/// Hull of all 2ⁿ coordinate sign flips of an anti-blocking body.
pub fn hat_symmetrization(body: &VPolytope) -> Result<VPolytope> {
    require_antiblocking(body)?;
    let n = body.dim();
    let mut pts = Vec::with_capacity(body.num_vertices() << n);
    for v in body.vertices() {
        for mask in 0u64..1 << n {
            pts.push(
                v.iter()
                    .enumerate()
                    .map(|(i, x)| if mask >> i & 1 == 1 { -x.clone() } else { x.clone() })
                    .collect(),
            );
        }
    }
    VPolytope::hull_in(n, pts)
}

/// `K ∩ E_σ` as a body of ℝ^{|σ|} (coordinates listed in σ's order).
///
/// For anti-blocking bodies the section equals the projection, which is what
/// is computed.
pub fn antiblocking_section(body: &VPolytope, sigma: &CoordinateSubset) -> Result<VPolytope> {
    require_antiblocking(body)?;
    Ok(project_onto(body, sigma))
}

pub(crate) fn project_onto(body: &VPolytope, sigma: &CoordinateSubset) -> VPolytope {
    let pts = body
        .vertices()
        .iter()
        .map(|v| sigma.members().iter().map(|&i| v[i].clone()).collect())
        .collect();
    VPolytope::hull_in(sigma.len(), pts).expect("projection of a nonempty body")
}

/// `K ∩ E_σ` kept inside ℝⁿ (the closure of the piece `K ∩ C_σ`).
pub fn embedded_section(body: &VPolytope, sigma: &CoordinateSubset) -> Result<VPolytope> {
    require_antiblocking(body)?;
    Ok(zero_outside(body, sigma))
}

pub(crate) fn zero_outside(body: &VPolytope, sigma: &CoordinateSubset) -> VPolytope {
    let pts = body
        .vertices()
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, x)| if sigma.contains(i) { x.clone() } else { Rational::zero() })
                .collect()
        })
        .collect();
    VPolytope::hull_in(body.dim(), pts).expect("zeroing keeps the body nonempty")
}

/// The support set {i : xᵢ > 0}: the unique σ with x ∈ C_σ, for x ≥ 0.
pub fn piece_of(x: &[Rational]) -> Option<CoordinateSubset> {
    if x.iter().any(|c| c.is_negative()) {
        return None;
    }
    CoordinateSubset::new(x.len(), (0..x.len()).filter(|&i| x[i].is_positive())).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSimplex {
    Simplex,
    NotSimplex,
    Degenerate,
}

/// Classifies an anti-blocking body as `conv{0, c₁e₁, …, cₙeₙ}` or not.
pub fn is_axis_simplex(body: &VPolytope) -> Result<AxisSimplex> {
    require_antiblocking(body)?;
    if !body.is_full_dimensional() {
        return Ok(AxisSimplex::Degenerate);
    }
    let n = body.dim();
    let mut axes = vec![false; n];
    for v in body.vertices() {
        let support: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
        match support.as_slice() {
            [] => {}
            [i] => axes[*i] = true,
            _ => return Ok(AxisSimplex::NotSimplex),
        }
    }
    Ok(if axes.iter().all(|&a| a) { AxisSimplex::Simplex } else { AxisSimplex::NotSimplex })
}

/// True when `body` is a full-dimensional simplex (any position).
pub fn is_simplex(body: &VPolytope) -> bool {
    body.is_full_dimensional() && body.num_vertices() == body.dim() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, point, ratio};

    fn poly(rows: &[&[i64]]) -> VPolytope {
        VPolytope::hull(rows.iter().map(|r| point(r))).unwrap()
    }

    fn staircase(rows: &[&[i64]]) -> VPolytope {
        let g: Vec<Point> = rows.iter().map(|r| point(r)).collect();
        staircase_antiblocking(&g).unwrap()
    }

    #[test]
    fn axis_simplex_examples() {
        assert_eq!(axis_simplex(&[int(1), int(1)]).unwrap().volume(), ratio(1, 2));
        assert_eq!(axis_simplex(&[int(1), int(1), int(1)]).unwrap().volume(), ratio(1, 6));
        assert_eq!(axis_simplex(&[int(2), int(3)]).unwrap().volume(), int(3));
        assert!(axis_simplex(&[int(1), int(0)]).is_err());
        assert!(axis_simplex(&[int(1), int(-2)]).is_err());
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase(&[&[1, 0], &[0, 1]]), poly(&[&[0, 0], &[1, 0], &[0, 1]]));
        let quad = staircase(&[&[2, 0], &[0, 1], &[1, 1]]);
        assert_eq!(quad, poly(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]]));
        assert_eq!(quad.volume(), ratio(3, 2));
        assert_eq!(staircase(&[&[1, 1]]), poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        assert!(staircase_antiblocking(&[point(&[1, -1])]).is_err());
    }

    #[test]
    fn antiblocking_recognition() {
        assert!(is_antiblocking(&staircase(&[&[2, 0], &[0, 1], &[1, 1]])));
        assert!(!is_antiblocking(&poly(&[&[1, 1], &[2, 1], &[1, 2], &[2, 2]])));
        assert!(!is_antiblocking(&poly(&[&[0, 0], &[1, 1]])));
        assert!(!is_antiblocking(&poly(&[&[-1, 0], &[1, 0], &[0, 1]])));
        assert!(is_antiblocking(&poly(&[&[0, 0], &[3, 0]])));
    }

    #[test]
    fn embeddings() {
        let unit = poly(&[&[0], &[1]]);
        assert_eq!(diagonal_embed(&unit, 2).unwrap(), poly(&[&[0, 0], &[1, 1]]));
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(diagonal_embed(&tri, 1).unwrap(), tri);
        assert_eq!(diagonal_embed(&tri, 2).unwrap().volume(), int(0));
        assert_eq!(factor_embed(&unit, 0, 2).unwrap(), poly(&[&[0, 0], &[1, 0]]));
        assert_eq!(factor_embed(&unit, 1, 2).unwrap(), poly(&[&[0, 0], &[0, 1]]));
        assert!(factor_embed(&unit, 2, 2).is_err());

        // ι₁K + … + ι_pK = Kᵖ
        let mut sum = factor_embed(&tri, 0, 3).unwrap();
        for i in 1..3 {
            sum = sum.minkowski_sum(&factor_embed(&tri, i, 3).unwrap()).unwrap();
        }
        assert_eq!(sum, cartesian_power(&tri, 3).unwrap());
    }

    #[test]
    fn difference_bodies() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let d1 = higher_difference_body(&sq, 1).unwrap();
        assert_eq!(d1, poly(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]]));
        assert_eq!(d1.volume(), int(4));
        assert_eq!(higher_difference_body(&poly(&[&[0], &[1]]), 2).unwrap().volume(), int(3));
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let dt = higher_difference_body(&tri, 1).unwrap();
        assert_eq!(dt.num_vertices(), 6);
        assert_eq!(dt.volume(), int(3));
    }

    #[test]
    fn hat_examples() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(hat_symmetrization(&sq).unwrap(), poly(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]]));
        let cross = hat_symmetrization(&poly(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(cross, poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        assert_eq!(cross.volume(), int(2));
        assert_eq!(hat_symmetrization(&poly(&[&[0], &[3]])).unwrap(), poly(&[&[-3], &[3]]));
        assert!(matches!(hat_symmetrization(&poly(&[&[1, 1], &[2, 2]])), Err(Error::NotAntiBlocking)));
    }

    #[test]
    fn section_examples() {
        let quad = staircase(&[&[2, 0], &[0, 1], &[1, 1]]);
        let s1 = CoordinateSubset::new(2, [0]).unwrap();
        assert_eq!(antiblocking_section(&quad, &s1).unwrap(), poly(&[&[0], &[2]]));
        let empty = antiblocking_section(&quad, &CoordinateSubset::empty(2)).unwrap();
        assert_eq!(empty.dim(), 0);
        assert_eq!(empty.volume(), int(1));
        assert_eq!(antiblocking_section(&quad, &CoordinateSubset::full(2)).unwrap(), quad);
        assert_eq!(
            embedded_section(&quad, &CoordinateSubset::new(2, [1]).unwrap()).unwrap(),
            poly(&[&[0, 0], &[0, 1]])
        );
    }

    #[test]
    fn axis_simplex_classification() {
        assert_eq!(is_axis_simplex(&axis_simplex(&[int(1), int(1)]).unwrap()).unwrap(), AxisSimplex::Simplex);
        assert_eq!(is_axis_simplex(&staircase(&[&[2, 0], &[0, 1], &[1, 1]])).unwrap(), AxisSimplex::NotSimplex);
        assert_eq!(is_axis_simplex(&poly(&[&[0, 0], &[2, 0]])).unwrap(), AxisSimplex::Degenerate);
        assert!(is_axis_simplex(&poly(&[&[1, 1], &[2, 2], &[1, 2]])).is_err());
    }

    #[test]
    fn subsets() {
        let s = CoordinateSubset::from_one_based(3, [3, 1]).unwrap();
        assert_eq!(s.members(), &[0, 2]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.complement().to_string(), "{2}");
        assert!(CoordinateSubset::new(2, [2]).is_err());
        assert!(CoordinateSubset::new(2, [1, 1]).is_err());
        assert!(CoordinateSubset::from_one_based(2, [0]).is_err());
        assert_eq!(piece_of(&[int(0), ratio(1, 2)]).unwrap().to_string(), "{2}");
        assert!(piece_of(&[int(-1)]).is_none());
    }
}
