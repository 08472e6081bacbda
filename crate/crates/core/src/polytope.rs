//! Convex polytopes given by their vertices.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hull::HullData;
use crate::linalg::LinearMap;
use crate::lp;
use crate::rational::{format_rational, serde_string::RationalRepr, Point, Rational};

/// Largest ambient dimension accepted without an explicit override.
pub const DIM_CAP: usize = 8;

pub fn check_dim_cap(dim: usize, force: bool) -> Result<()> {
    if dim > DIM_CAP && !force {
        return Err(Error::DimensionCap { dim, cap: DIM_CAP });
    }
    Ok(())
}

/// A nonempty convex polytope `conv(vertices) ⊂ ℚ^d`.
///
/// The vertex list is always irredundant and sorted lexicographically, so two
/// polytopes are equal exactly when they are the same set. The ambient
/// dimension may be zero, in which case the polytope is the origin of ℚ⁰ and
/// its (zero-dimensional) volume is one.
#[derive(Clone)]
pub struct VPolytope {
    data: Arc<HullData>,
}

impl VPolytope {
    /// Convex hull of a nonempty point set. All points must have the same length.
    pub fn hull<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Point>,
    {
        let points: Vec<Point> = points.into_iter().collect();
        let dim = points.first().ok_or(Error::EmptyPointSet)?.len();
        Self::hull_in(dim, points)
    }

    /// Like [`VPolytope::hull`] but with an explicit ambient dimension, which
    /// every point must match.
    pub fn hull_in(dim: usize, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        Ok(Self { data: Arc::new(HullData::compute(points, dim)) })
    }

    pub fn point(p: Point) -> Self {
        let dim = p.len();
        Self::hull_in(dim, vec![p]).expect("a single point is a valid hull")
    }

    pub fn origin(dim: usize) -> Self {
        Self::point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.data.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.data.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.data.vertices.len()
    }

    pub fn affine_dim(&self) -> usize {
        self.data.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim()
    }

    pub fn num_facets(&self) -> usize {
        self.data.facets.len()
    }

    /// Lebesgue volume in the ambient dimension.
    pub fn volume(&self) -> Rational {
        self.data.volume()
    }

    /// Simplices of the pulling triangulation, as vertex indices. Empty for
    /// lower-dimensional polytopes.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        if !self.is_full_dimensional() || self.dim() == 0 {
            return Vec::new();
        }
        self.data.triangulation()
    }

    /// Membership by linear feasibility over the vertex hull.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && lp::in_convex_hull(self.vertices(), x)
    }

    /// `{M v + shift}` for `v` in the polytope.
    pub fn affine_image(&self, map: &LinearMap, shift: &[Rational]) -> Result<Self> {
        if map.source_dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: map.source_dim(), found: self.dim() });
        }
        if shift.len() != map.target_dim() {
            return Err(Error::DimensionMismatch { expected: map.target_dim(), found: shift.len() });
        }
        let image = self
            .vertices()
            .iter()
            .map(|v| {
                let mut w = map.apply(v)?;
                for (a, s) in w.iter_mut().zip(shift) {
                    *a += s;
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::hull_in(map.target_dim(), image)
    }

    pub fn linear_image(&self, map: &LinearMap) -> Result<Self> {
        self.affine_image(map, &vec![Rational::zero(); map.target_dim()])
    }

    pub fn translate(&self, shift: &[Rational]) -> Result<Self> {
        self.affine_image(&LinearMap::identity(self.dim()), shift)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let pts = self.vertices().iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        Self::hull_in(self.dim(), pts).expect("scaling preserves dimension")
    }

    /// Reflection in the origin.
    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut pts = Vec::with_capacity(self.num_vertices() * other.num_vertices());
        for a in self.vertices() {
            for b in other.vertices() {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::hull_in(self.dim(), pts)
    }

    pub fn cartesian_product(&self, other: &VPolytope) -> Self {
        let mut pts = Vec::with_capacity(self.num_vertices() * other.num_vertices());
        for a in self.vertices() {
            for b in other.vertices() {
                let mut v = a.clone();
                v.extend(b.iter().cloned());
                pts.push(v);
            }
        }
        Self::hull_in(self.dim() + other.dim(), pts).expect("product of valid polytopes")
    }

    /// SHA-256 over the canonical text form of the vertex set.
    pub fn digest(&self) -> String {
        digest_bodies(std::slice::from_ref(self))
    }

    pub fn to_json(&self) -> BodyJson {
        BodyJson {
            dim: self.dim(),
            vertices: self
                .vertices()
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("body json serializes")
    }

    /// Parses the body JSON format. The listed points are re-hulled, so they
    /// need not be irredundant.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawBody = serde_json::from_str(text)?;
        raw.into_polytope()
    }
}

pub(crate) fn digest_bodies(bodies: &[VPolytope]) -> String {
    let mut hasher = Sha256::new();
    for b in bodies {
        hasher.update(b.dim().to_le_bytes());
        for v in b.vertices() {
            for x in v {
                hasher.update(format_rational(x).as_bytes());
                hasher.update(b",");
            }
            hasher.update(b";");
        }
        hasher.update(b"|");
    }
    hex::encode(hasher.finalize())
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.vertices() == other.vertices()
    }
}

impl Eq for VPolytope {}

impl fmt::Debug for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<Vec<String>> =
            self.vertices().iter().map(|v| v.iter().map(format_rational).collect()).collect();
        f.debug_struct("VPolytope")
            .field("dim", &self.dim())
            .field("affine_dim", &self.affine_dim())
            .field("vertices", &verts)
            .finish()
    }
}

/// Body interchange format: `{"dim": d, "vertices": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BodyJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Deserialize)]
pub(crate) struct RawBody {
    dim: usize,
    vertices: Vec<Vec<RationalRepr>>,
}

impl RawBody {
    pub(crate) fn into_points(self) -> Result<(usize, Vec<Point>)> {
        let points = self
            .vertices
            .into_iter()
            .map(|v| v.into_iter().map(RationalRepr::into_rational).collect::<Result<Point>>())
            .collect::<Result<Vec<_>>>()?;
        Ok((self.dim, points))
    }

    fn into_polytope(self) -> Result<VPolytope> {
        let (dim, points) = self.into_points()?;
        VPolytope::hull_in(dim, points)
    }
}

/// Parses a body-format document and returns its raw point list without
/// hulling (used for staircase generator files).
pub fn points_from_json_str(text: &str) -> Result<(usize, Vec<Point>)> {
    let raw: RawBody = serde_json::from_str(text)?;
    raw.into_points()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, point, ratio};

    fn poly(rows: &[&[i64]]) -> VPolytope {
        VPolytope::hull(rows.iter().map(|r| point(r))).unwrap()
    }

    #[test]
    fn hull_examples() {
        let h = VPolytope::hull(vec![
            point(&[0, 0]),
            point(&[1, 0]),
            point(&[0, 1]),
            point(&[1, 1]),
            vec![ratio(1, 2), ratio(1, 2)],
        ])
        .unwrap();
        assert_eq!(h, poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        let seg = poly(&[&[0, 0], &[2, 0]]);
        assert_eq!(seg.affine_dim(), 1);
        assert!(matches!(VPolytope::hull(Vec::<Point>::new()), Err(Error::EmptyPointSet)));
        assert!(matches!(
            VPolytope::hull(vec![point(&[0, 0]), point(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).volume(), ratio(1, 6));
        assert_eq!(poly(&[&[0, 0], &[2, 0]]).volume(), int(0));
        let cube: Vec<Point> = (0..8).map(|m| point(&[m & 1, (m >> 1) & 1, (m >> 2) & 1])).collect();
        assert_eq!(VPolytope::hull(cube).unwrap().volume(), int(1));
    }

    #[test]
    fn affine_image_examples() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let refl = sq.linear_image(&LinearMap::scalar(2, int(-1))).unwrap();
        assert_eq!(refl, poly(&[&[-1, -1], &[0, -1], &[-1, 0], &[0, 0]]));
        let diag = LinearMap::from_integers(&[&[1], &[1]]).unwrap();
        assert_eq!(poly(&[&[0], &[1]]).linear_image(&diag).unwrap(), poly(&[&[0, 0], &[1, 1]]));
        assert!(sq.linear_image(&diag).is_err());
    }

    #[test]
    fn minkowski_examples() {
        let diag = poly(&[&[0, 0], &[1, 1]]);
        let neg_sq = poly(&[&[-1, -1], &[0, -1], &[-1, 0], &[0, 0]]);
        let hex = diag.minkowski_sum(&neg_sq).unwrap();
        assert_eq!(hex.num_vertices(), 6);
        assert_eq!(hex.volume(), int(3));

        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let dt = tri.minkowski_sum(&tri.neg()).unwrap();
        assert_eq!(dt.num_vertices(), 6);
        assert_eq!(dt.volume(), int(3));

        let shifted = tri.minkowski_sum(&VPolytope::point(point(&[2, 5]))).unwrap();
        assert_eq!(shifted, tri.translate(&point(&[2, 5])).unwrap());
        assert!(tri.minkowski_sum(&poly(&[&[0]])).is_err());
    }

    #[test]
    fn product_examples() {
        let unit = poly(&[&[0], &[1]]);
        assert_eq!(unit.cartesian_product(&unit), poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let tt = tri.cartesian_product(&tri);
        assert_eq!(tt.dim(), 4);
        assert_eq!(tt.volume(), ratio(1, 4));
        let embedded = tri.cartesian_product(&VPolytope::point(point(&[7])));
        assert_eq!(embedded.affine_dim(), 2);
        assert_eq!(embedded.num_vertices(), 3);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let body = VPolytope::from_json_str(r#"{"dim": 2, "vertices": [["0","0"],[1,"0"],["1/2", "3/4"]]}"#).unwrap();
        assert_eq!(body.volume(), ratio(3, 8));
        let again = VPolytope::from_json_str(&body.to_json_string()).unwrap();
        assert_eq!(body, again);
        assert_eq!(body.digest(), again.digest());
        assert!(VPolytope::from_json_str(r#"{"dim": 2, "vertices": []}"#).is_err());
        assert!(VPolytope::from_json_str(r#"{"dim": 2, "vertices": [["1/0","0"]]}"#).is_err());
        let err = VPolytope::from_json_str("{\"dim\": 2,\n \"vertices\": [[\"0\" \"0\"]]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn origin_in_dimension_zero() {
        let o = VPolytope::origin(0);
        assert_eq!(o.dim(), 0);
        assert_eq!(o.volume(), int(1));
    }

    #[test]
    fn dim_cap_guard() {
        assert!(check_dim_cap(8, false).is_ok());
        assert!(matches!(check_dim_cap(9, false), Err(Error::DimensionCap { dim: 9, cap: 8 })));
        assert!(check_dim_cap(9, true).is_ok());
    }
}
