//! Exact convex hulls of finite point sets in any affine dimension.
//!
//! Points are scaled by the lcm of their denominators so that all predicates
//! run on integers. The affine hull is found by incremental echelon reduction;
//! the point set is then projected onto pivot coordinates, where it is full
//! dimensional, and its facets are enumerated by the double description
//! update: each new point removes the facets it sees and creates one facet per
//! adjacent (seen, unseen) pair, with adjacency decided combinatorially from
//! point incidences. Coplanar and repeated configurations need no special
//! handling.
//!
//! Volumes come from a pulling triangulation: the lexicographically smallest
//! vertex of each face is coned over the faces of that face that miss it. The
//! faces of a face are read off the facet incidences, so no further geometry
//! is needed once the facets are known.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{abs_det, integer_kernel_vector, primitive, EchelonBasis};
use crate::rational::{lcm_of_denominators, Point, Rational};

#[derive(Clone, Debug)]
pub(crate) struct Facet {
    /// Vertices (by index) lying on the facet.
    pub vertices: FixedBitSet,
}

#[derive(Clone, Debug)]
pub(crate) struct HullData {
    pub ambient_dim: usize,
    pub affine_dim: usize,
    /// Irredundant vertices, lexicographically sorted.
    pub vertices: Vec<Point>,
    scale: BigInt,
    /// Vertex coordinates scaled to integers and projected onto `coords`.
    proj: Vec<Vec<BigInt>>,
    pub facets: Vec<Facet>,
}

impl HullData {
    /// `points` must be nonempty and all of length `ambient_dim`.
    pub fn compute(mut points: Vec<Point>, ambient_dim: usize) -> HullData {
        points.sort();
        points.dedup();
        let scale = lcm_of_denominators(points.iter().flatten());
        let scale_q = Rational::from_integer(scale.clone());
        let ints: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|q| (q * &scale_q).to_integer()).collect())
            .collect();

        let mut basis = EchelonBasis::default();
        let mut simplex = vec![0usize];
        let mut coords = Vec::new();
        for (i, z) in ints.iter().enumerate().skip(1) {
            let diff = z.iter().zip(&ints[0]).map(|(a, b)| Rational::from_integer(a - b)).collect();
            if let Some(pivot) = basis.insert(diff) {
                simplex.push(i);
                coords.push(pivot);
                if coords.len() == ambient_dim {
                    break;
                }
            }
        }
        coords.sort_unstable();
        let affine_dim = coords.len();

        if affine_dim == 0 {
            return HullData {
                ambient_dim,
                affine_dim,
                vertices: points,
                scale,
                proj: vec![Vec::new()],
                facets: Vec::new(),
            };
        }

        let proj: Vec<Vec<BigInt>> = ints.iter().map(|z| coords.iter().map(|&c| z[c].clone()).collect()).collect();
        let raw = double_description(&proj, &simplex, affine_dim);

        // A point is a vertex iff its set of facets is not contained in the
        // facet set of any other point.
        let npts = proj.len();
        let mut facet_sets = vec![FixedBitSet::with_capacity(raw.len()); npts];
        for (f, facet) in raw.iter().enumerate() {
            for p in facet.incidence.ones() {
                facet_sets[p].insert(f);
            }
        }
        let is_vertex: Vec<bool> = (0..npts)
            .map(|p| (0..npts).all(|q| q == p || !facet_sets[p].is_subset(&facet_sets[q])))
            .collect();
        let mut new_index = vec![usize::MAX; npts];
        let mut vertices = Vec::new();
        let mut vproj = Vec::new();
        for (p, point) in points.into_iter().enumerate() {
            if is_vertex[p] {
                new_index[p] = vertices.len();
                vertices.push(point);
                vproj.push(proj[p].clone());
            }
        }
        let facets = raw
            .into_iter()
            .map(|f| {
                let mut vs = FixedBitSet::with_capacity(vertices.len());
                for p in f.incidence.ones() {
                    if is_vertex[p] {
                        vs.insert(new_index[p]);
                    }
                }
                Facet { vertices: vs }
            })
            .collect();

        HullData { ambient_dim, affine_dim, vertices, scale, proj: vproj, facets }
    }

    /// Exact `ambient_dim`-dimensional volume; zero for lower-dimensional hulls.
    pub fn volume(&self) -> Rational {
        if self.affine_dim < self.ambient_dim {
            return Rational::zero();
        }
        let d = self.ambient_dim;
        if d == 0 {
            return Rational::one();
        }
        let total: BigInt = self
            .triangulation()
            .iter()
            .map(|simplex| {
                let base = &self.proj[simplex[0]];
                let m = simplex[1..]
                    .iter()
                    .map(|&v| self.proj[v].iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                abs_det(m)
            })
            .sum();
        let denom = factorial(d) * self.scale.pow(d as u32);
        Rational::new(total, denom)
    }

    /// Pulling triangulation of the full-dimensional hull (in projected
    /// coordinates), as lists of vertex indices.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let mut all = FixedBitSet::with_capacity(self.vertices.len());
        all.insert_range(..);
        let mut memo = HashMap::new();
        self.pull(&all, self.affine_dim, &mut memo).as_ref().clone()
    }

    fn pull(
        &self,
        face: &FixedBitSet,
        dim: usize,
        memo: &mut HashMap<FixedBitSet, std::rc::Rc<Vec<Vec<usize>>>>,
    ) -> std::rc::Rc<Vec<Vec<usize>>> {
        if face.count_ones(..) == dim + 1 {
            return std::rc::Rc::new(vec![face.ones().collect()]);
        }
        if let Some(hit) = memo.get(face) {
            return hit.clone();
        }
        let apex = face.minimum().expect("faces are nonempty");
        let mut out = Vec::new();
        for sub in self.subfaces(face) {
            if sub.contains(apex) {
                continue;
            }
            for s in self.pull(&sub, dim - 1, memo).iter() {
                let mut simplex = Vec::with_capacity(s.len() + 1);
                simplex.push(apex);
                simplex.extend_from_slice(s);
                out.push(simplex);
            }
        }
        let out = std::rc::Rc::new(out);
        memo.insert(face.clone(), out.clone());
        out
    }

    /// Facets of a face: the inclusion-maximal proper intersections with facets.
    fn subfaces(&self, face: &FixedBitSet) -> Vec<FixedBitSet> {
        let mut cands: Vec<FixedBitSet> = self
            .facets
            .iter()
            .map(|f| {
                let mut s = face.clone();
                s.intersect_with(&f.vertices);
                s
            })
            .filter(|s| !s.is_clear() && s != face)
            .collect();
        cands.sort_by_key(|s| std::cmp::Reverse(s.count_ones(..)));
        cands.dedup();
        let mut kept: Vec<FixedBitSet> = Vec::new();
        for c in cands {
            if !kept.iter().any(|k| c.is_subset(k)) {
                kept.push(c);
            }
        }
        kept
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

struct RawFacet {
    normal: Vec<BigInt>,
    offset: BigInt,
    incidence: FixedBitSet,
}

impl RawFacet {
    fn eval(&self, z: &[BigInt]) -> BigInt {
        let mut acc = -self.offset.clone();
        for (a, x) in self.normal.iter().zip(z) {
            if !a.is_zero() && !x.is_zero() {
                acc += a * x;
            }
        }
        acc
    }
}

/// Facets of the full-dimensional hull of `pts` in ℤ^dim, starting from the
/// affinely independent points `simplex`.
fn double_description(pts: &[Vec<BigInt>], simplex: &[usize], dim: usize) -> Vec<RawFacet> {
    let npts = pts.len();
    let mut facets: Vec<RawFacet> = Vec::with_capacity(dim + 1);
    for &skip in simplex {
        // Solve a·p - b = 0 for the other simplex points.
        let rows: Vec<Vec<BigInt>> = simplex
            .iter()
            .filter(|&&i| i != skip)
            .map(|&i| {
                let mut r = pts[i].clone();
                r.push(-BigInt::one());
                r
            })
            .collect();
        let mut v = integer_kernel_vector(&rows, dim + 1).expect("simplex facets have a normal");
        let offset = v.pop().unwrap();
        let mut facet = RawFacet { normal: v, offset, incidence: FixedBitSet::with_capacity(npts) };
        if facet.eval(&pts[skip]).is_positive() {
            facet.normal.iter_mut().for_each(|a| *a = -a.clone());
            facet.offset = -facet.offset;
        }
        for &i in simplex {
            if i != skip {
                facet.incidence.insert(i);
            }
        }
        facets.push(facet);
    }

    let mut in_simplex = vec![false; npts];
    for &i in simplex {
        in_simplex[i] = true;
    }
    for q in (0..npts).filter(|&q| !in_simplex[q]) {
        let values: Vec<BigInt> = facets.iter().map(|f| f.eval(&pts[q])).collect();
        let pos: Vec<usize> = (0..facets.len()).filter(|&f| values[f].is_positive()).collect();
        if pos.is_empty() {
            for (f, v) in facets.iter_mut().zip(&values) {
                if v.is_zero() {
                    f.incidence.insert(q);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..facets.len()).filter(|&f| values[f].is_negative()).collect();
        let mut created = Vec::new();
        for &fp in &pos {
            for &fn_ in &neg {
                let mut common = facets[fp].incidence.clone();
                common.intersect_with(&facets[fn_].incidence);
                if common.count_ones(..) + 1 < dim {
                    continue;
                }
                let adjacent = facets
                    .iter()
                    .enumerate()
                    .all(|(h, f)| h == fp || h == fn_ || !common.is_subset(&f.incidence));
                if !adjacent {
                    continue;
                }
                let alpha = &values[fp];
                let beta = -&values[fn_];
                let mut combined: Vec<BigInt> = facets[fn_]
                    .normal
                    .iter()
                    .zip(&facets[fp].normal)
                    .map(|(g, f)| alpha * g + &beta * f)
                    .collect();
                combined.push(alpha * &facets[fn_].offset + &beta * &facets[fp].offset);
                let mut combined = primitive(combined);
                let offset = combined.pop().unwrap();
                common.insert(q);
                created.push(RawFacet { normal: combined, offset, incidence: common });
            }
        }
        let mut kept = Vec::with_capacity(facets.len() - pos.len() + created.len());
        for (mut f, v) in facets.into_iter().zip(values) {
            if v.is_positive() {
                continue;
            }
            if v.is_zero() {
                f.incidence.insert(q);
            }
            kept.push(f);
        }
        kept.extend(created);
        facets = kept;
    }
    facets
}
