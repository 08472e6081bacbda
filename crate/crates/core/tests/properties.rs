use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use polydiff::constructions::{
    antiblocking_section, diagonal_embed, embedded_section, factor_embed, hat_symmetrization, higher_difference_body,
    is_antiblocking, piece_of, staircase_antiblocking, CoordinateSubset,
};
use polydiff::covers::{all_covers, enumerate_covers, induced_one_cover};
use polydiff::linalg::LinearMap;
use polydiff::lp::feasible;
use polydiff::mixed::{mixed_volume, MixedVolumeQuery};
use polydiff::rational::{ratio, Point, Rational};
use polydiff::VPolytope;

fn r(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn points(dim: usize, count: std::ops::Range<usize>, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec((lo..=hi).prop_map(r), dim), count)
}

fn body(dim: usize) -> impl Strategy<Value = VPolytope> {
    points(dim, 1..7, -3, 3).prop_map(move |p| VPolytope::hull_in(dim, p).unwrap())
}

fn staircase(dim: usize) -> impl Strategy<Value = VPolytope> {
    points(dim, 1..4, 1, 4).prop_map(|g| staircase_antiblocking(&g).unwrap())
}

fn unimodular() -> impl Strategy<Value = LinearMap> {
    // Products of elementary shears and a coordinate swap.
    (-2i64..=2, -2i64..=2, any::<bool>()).prop_map(|(a, b, swap)| {
        let shear1 = LinearMap::from_integers(&[&[1, a], &[0, 1]]).unwrap();
        let shear2 = LinearMap::from_integers(&[&[1, 0], &[b, 1]]).unwrap();
        let m = shear1.compose(&shear2).unwrap();
        if swap {
            LinearMap::from_integers(&[&[0, 1], &[1, 0]]).unwrap().compose(&m).unwrap()
        } else {
            m
        }
    })
}

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// Is `K ∩ (K + x₁) ∩ … ∩ (K + x_p)` nonempty? Variables are convex weights
/// `λ` for `y ∈ K` and `μ⁽ⁱ⁾` for `y − xᵢ ∈ K`.
fn translates_intersect(k: &VPolytope, xs: &[Point]) -> bool {
    let n = k.dim();
    let verts = k.vertices();
    let m = verts.len();
    let p = xs.len();
    let cols = m * (p + 1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for c in 0..n {
            let mut row = vec![Rational::zero(); cols];
            for (j, v) in verts.iter().enumerate() {
                row[j] = -v[c].clone();
                row[(i + 1) * m + j] = v[c].clone();
            }
            a.push(row);
            b.push(-x[c].clone());
        }
    }
    for block in 0..=p {
        let mut row = vec![Rational::zero(); cols];
        for j in 0..m {
            row[block * m + j] = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
    }
    feasible(&a, &b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(p in body(3)) {
        let again = VPolytope::hull_in(3, p.vertices().to_vec()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(again.volume(), p.volume());
    }

    #[test]
    fn volume_scales_by_determinant(p in body(2), m in prop::collection::vec(-3i64..=3, 4)) {
        let map = LinearMap::from_integers(&[&m[0..2], &m[2..4]]).unwrap();
        let image = p.linear_image(&map).unwrap();
        prop_assert_eq!(image.volume(), map.determinant().unwrap().abs() * p.volume());
    }

    #[test]
    fn volume_is_translation_invariant(p in body(3), t in prop::collection::vec((-5i64..=5).prop_map(r), 3)) {
        prop_assert_eq!(p.translate(&t).unwrap().volume(), p.volume());
    }

    #[test]
    fn product_volume_multiplies(p in body(2), q in body(1)) {
        prop_assert_eq!(p.cartesian_product(&q).volume(), p.volume() * q.volume());
    }

    #[test]
    fn minkowski_sum_commutes_and_associates(a in body(2), b in body(2), c in body(2)) {
        prop_assert_eq!(a.minkowski_sum(&b).unwrap(), b.minkowski_sum(&a).unwrap());
        let left = a.minkowski_sum(&b).unwrap().minkowski_sum(&c).unwrap();
        let right = a.minkowski_sum(&b.minkowski_sum(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mixed_volume_is_symmetric(a in body(3), b in body(3), c in body(3)) {
        let abc = mixed_volume(&MixedVolumeQuery::from_bodies(3, &[a.clone(), b.clone(), c.clone()]).unwrap()).unwrap();
        let cab = mixed_volume(&MixedVolumeQuery::from_bodies(3, &[c, a, b]).unwrap()).unwrap();
        prop_assert_eq!(abc, cab);
    }

    #[test]
    fn mixed_volume_is_multilinear(k1 in body(2), l in body(2), k2 in body(2), num in 1i64..5, den in 1i64..4) {
        let lambda = ratio(num, den);
        let combined = k1.minkowski_sum(&l.scale(&lambda)).unwrap();
        let mv = |a: &VPolytope| mixed_volume(&MixedVolumeQuery::from_bodies(2, &[a.clone(), k2.clone()]).unwrap()).unwrap();
        prop_assert_eq!(mv(&combined), mv(&k1) + lambda * mv(&l));
    }

    #[test]
    fn mixed_volume_is_translation_invariant(a in body(2), b in body(2), t in prop::collection::vec((-4i64..=4).prop_map(r), 2)) {
        let before = mixed_volume(&MixedVolumeQuery::from_bodies(2, &[a.clone(), b.clone()]).unwrap()).unwrap();
        let after = mixed_volume(&MixedVolumeQuery::from_bodies(2, &[a.translate(&t).unwrap(), b]).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn mixed_volume_is_unimodular_invariant(a in body(2), b in body(2), m in unimodular()) {
        let before = mixed_volume(&MixedVolumeQuery::from_bodies(2, &[a.clone(), b.clone()]).unwrap()).unwrap();
        let mapped = [a.linear_image(&m).unwrap(), b.linear_image(&m).unwrap()];
        prop_assert_eq!(before, mixed_volume(&MixedVolumeQuery::from_bodies(2, &mapped).unwrap()).unwrap());
    }

    #[test]
    fn mixed_volume_is_nonnegative(a in body(3), b in body(3), c in body(3)) {
        let v = mixed_volume(&MixedVolumeQuery::from_bodies(3, &[a, b, c]).unwrap()).unwrap();
        prop_assert!(!v.is_negative());
    }

    #[test]
    fn axis_segments_have_positive_mixed_volume(lengths in prop::collection::vec(1i64..5, 1..5)) {
        let n = lengths.len();
        let segs: Vec<VPolytope> = lengths.iter().enumerate().map(|(i, &len)| {
            let mut e = vec![Rational::zero(); n];
            e[i] = r(len);
            VPolytope::hull_in(n, vec![vec![Rational::zero(); n], e]).unwrap()
        }).collect();
        let v = mixed_volume(&MixedVolumeQuery::from_bodies(n, &segs).unwrap()).unwrap();
        let product: i64 = lengths.iter().product();
        prop_assert_eq!(v, Rational::new(product.into(), fact(n)));
    }

    #[test]
    fn slot_multiplicities_are_symmetric(k in staircase(2), m0 in 0usize..=2, m1 in 0usize..=2) {
        let m2 = 4 - m0 - m1;
        prop_assume!(m2 <= 2 && m0 + m1 <= 4);
        let cokernel = |m: [usize; 3]| {
            let q = MixedVolumeQuery::new(4)
                .with(&diagonal_embed(&k, 2).unwrap().neg(), m[0]).unwrap()
                .with(&factor_embed(&k, 0, 2).unwrap(), m[1]).unwrap()
                .with(&factor_embed(&k, 1, 2).unwrap(), m[2]).unwrap();
            mixed_volume(&q).unwrap()
        };
        let base = cokernel([m0, m1, m2]);
        prop_assert_eq!(&base, &cokernel([m1, m0, m2]));
        prop_assert_eq!(&base, &cokernel([m2, m1, m0]));
        prop_assert_eq!(&base, &cokernel([m0, m2, m1]));
    }

    #[test]
    fn sections_are_projections(k in staircase(3), mask in 0u8..8) {
        let sigma = CoordinateSubset::new(3, (0..3).filter(|i| mask >> i & 1 == 1)).unwrap();
        let zeroed: Vec<Point> = k.vertices().iter()
            .map(|v| sigma.members().iter().map(|&i| v[i].clone()).collect())
            .collect();
        let expected = VPolytope::hull_in(sigma.len(), zeroed).unwrap();
        prop_assert_eq!(antiblocking_section(&k, &sigma).unwrap(), expected);
        prop_assert!(is_antiblocking(&embedded_section(&k, &sigma).unwrap()));
    }

    #[test]
    fn hat_is_symmetric_with_interior_origin(k in staircase(3)) {
        let hat = hat_symmetrization(&k).unwrap();
        prop_assert_eq!(hat.neg(), hat.clone());
        prop_assert!(hat.is_full_dimensional());
        prop_assert_eq!(hat.volume(), k.volume() * r(8));
    }

    #[test]
    fn full_piece_carries_the_volume(k in staircase(2), x in prop::collection::vec((0i64..=16).prop_map(|v| ratio(v, 4)), 2)) {
        // The pieces K ∩ C_σ partition K; the full-dimensional piece has all of its volume.
        let full = CoordinateSubset::full(2);
        prop_assert_eq!(embedded_section(&k, &full).unwrap().volume(), k.volume());
        if let Some(sigma) = piece_of(&x) {
            let inside_piece = sigma.members().iter().all(|&i| x[i].is_positive())
                && (0..2).filter(|i| !sigma.contains(*i)).all(|i| x[i].is_zero());
            prop_assert!(inside_piece);
            if k.contains(&x) {
                prop_assert!(embedded_section(&k, &sigma).unwrap().contains(&x));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn difference_body_matches_intersection_definition(
        k in body(2).prop_filter("full-dimensional", VPolytope::is_full_dimensional),
        xs in prop::collection::vec(prop::collection::vec((-12i64..=12).prop_map(|v| ratio(v, 4)), 4), 13),
    ) {
        // 8 cases x 13 samples = 104 membership comparisons.
        let d2 = higher_difference_body(&k, 2).unwrap();
        for x in xs {
            let split = [x[0..2].to_vec(), x[2..4].to_vec()];
            prop_assert_eq!(d2.contains(&x), translates_intersect(&k, &split), "x = {:?}", x);
        }
    }
}

#[test]
fn cover_counts_match_multinomials() {
    for n in 1..=6usize {
        for p in 1..=3usize {
            let all = all_covers(n, p);
            assert_eq!(all.len(), (p + 1).pow(n as u32));
            let mut total = 0;
            // Sizes (k, n−k₁, …, n−k_p) with k = Σkᵢ; the missing counts are (n−k, k₁, …, k_p).
            for missing in compositions_of(n, p + 1) {
                let sizes: Vec<usize> = missing.iter().map(|&m| n - m).collect();
                let covers = enumerate_covers(n, p, &sizes);
                let want = missing.iter().fold(fact(n), |acc, &m| acc / fact(m));
                assert_eq!(BigInt::from(covers.len()), want, "n={n} p={p} sizes={sizes:?}");
                for c in &covers {
                    for j in 0..n {
                        assert_eq!(c.blocks().iter().filter(|b| b.contains(j)).count(), p);
                    }
                    let induced = induced_one_cover(c);
                    for j in 0..n {
                        assert_eq!(induced.blocks().iter().filter(|b| b.contains(j)).count(), 1);
                    }
                }
                total += covers.len();
            }
            assert_eq!(total, all.len());
        }
    }
}

fn compositions_of(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions_of(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[test]
fn antiblocking_hulls_are_staircases_of_their_vertices() {
    use polydiff::sample::trial_rng;
    use rand::Rng;
    let mut hits = 0;
    for t in 0..400 {
        let mut rng = trial_rng(99, t);
        let n = 2 + (t % 2) as usize;
        let count = rng.random_range(2..7);
        let mut pts: Vec<Point> = vec![vec![Rational::zero(); n]];
        pts.extend((0..count).map(|_| (0..n).map(|_| r(rng.random_range(0..=2))).collect::<Point>()));
        let hull = VPolytope::hull_in(n, pts).unwrap();
        if is_antiblocking(&hull) {
            hits += 1;
            assert_eq!(staircase_antiblocking(hull.vertices()).unwrap(), hull);
        }
    }
    assert!(hits >= 20, "only {hits} anti-blocking hulls sampled");
}
