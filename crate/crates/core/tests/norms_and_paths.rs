use corner_core::norm::default_tolerance;
use corner_core::path::{lift_path, make_corner, project_path};
use corner_core::rational::{int, ratio, to_f64, two_pow};
use corner_core::{
    build_free_nilpotent, make_norm, Algebra, BigRational, Error, FirstLayerNorm, GroupPoint,
    HorizontalPath, LieVector, NormRequest, QuotientMap, Segment,
};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

fn norms() -> Vec<FirstLayerNorm> {
    ["euclidean", "lp:3/2", "lp:4", "lp:3"]
        .iter()
        .map(|t| make_norm(&t.parse().unwrap()).unwrap())
        .collect()
}

fn any_norm() -> impl Strategy<Value = FirstLayerNorm> {
    prop::sample::select(norms())
}

fn tolerance() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 2i32..=30).prop_map(|(n, e)| int(n) * two_pow(-e))
}

fn coords(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(small_rational(), n)
}

fn path_in(a: Algebra) -> impl Strategy<Value = HorizontalPath> {
    let r = a.rank();
    prop::collection::vec((coords(r), positive_rational()), 0..6).prop_map(move |segs| {
        let segments = segs
            .into_iter()
            .map(|(c, d)| Segment::new(LieVector::first_layer(&a, &c).unwrap(), d).unwrap())
            .collect();
        HorizontalPath::from_segments(&a, segments).unwrap()
    })
}

fn algebra_and_path() -> impl Strategy<Value = HorizontalPath> {
    (2usize..=4).prop_flat_map(|s| path_in(build_free_nilpotent(2, s).unwrap()))
}

/// Floating-point reference for the p-norm.
fn float_norm(norm: &FirstLayerNorm, c: &[BigRational]) -> f64 {
    let p = match norm.tag().as_str() {
        "euclidean" => 2.0,
        t => {
            let q = corner_core::rational::parse_rational(t.trim_start_matches("lp:")).unwrap();
            to_f64(&q)
        }
    };
    c.iter().map(|x| to_f64(x).abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bound_encloses_the_norm(norm in any_norm(), c in coords(3), tol in tolerance()) {
        let b = norm.certified_upper_coords(&c, &tol).unwrap();
        prop_assert!(b.verify());
        prop_assert!(b.slack() <= &tol);
        let v = to_f64(b.value());
        let exact = float_norm(&norm, &c);
        prop_assert!(v >= exact - 1e-9 * (1.0 + exact));
        prop_assert!(v <= exact + to_f64(&tol) + 1e-9 * (1.0 + exact));
    }

    #[test]
    fn bound_is_monotone_in_tolerance(norm in any_norm(), c in coords(2), tol in tolerance()) {
        let coarse = norm.certified_upper_coords(&c, &tol).unwrap();
        let fine = norm.certified_upper_coords(&c, &(&tol / int(8))).unwrap();
        prop_assert!(fine.value() <= coarse.value());
    }

    #[test]
    fn bound_is_homogeneous(norm in any_norm(), c in coords(2), tol in tolerance(), lambda in positive_rational()) {
        let b = norm.certified_upper_coords(&c, &tol).unwrap();
        let scaled: Vec<_> = c.iter().map(|x| x * &lambda).collect();
        let bs = norm.certified_upper_coords(&scaled, &(&tol * &lambda)).unwrap();
        prop_assert_eq!(bs.value(), &(b.value() * &lambda));
        let negated: Vec<_> = c.iter().map(|x| -x).collect();
        let bn = norm.certified_upper_coords(&negated, &tol).unwrap();
        prop_assert_eq!(bn.value(), b.value());
    }

    #[test]
    fn triangle_inequality_up_to_slack(norm in any_norm(), u in coords(2), v in coords(2)) {
        let tol = ratio(1, 1 << 20);
        let sum: Vec<_> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let bu = norm.certified_upper_coords(&u, &tol).unwrap();
        let bv = norm.certified_upper_coords(&v, &tol).unwrap();
        let bs = norm.certified_upper_coords(&sum, &tol).unwrap();
        prop_assert!(bs.value() - bs.slack() <= bu.value() + bv.value());
    }

    #[test]
    fn dilated_length_scales_exactly(path in algebra_and_path(), lambda in positive_rational(), norm in any_norm()) {
        let tol = default_tolerance();
        let base = path.length_upper_bound(&norm, &tol).unwrap();
        let dilated = path.dilate(&lambda).unwrap();
        let scaled = dilated.length_upper_bound(&norm, &(&tol * &lambda)).unwrap();
        prop_assert_eq!(scaled.value(), &(base.value() * &lambda));
        prop_assert!(scaled.verify());
    }

    #[test]
    fn dilation_commutes_with_endpoint(path in algebra_and_path(), lambda in positive_rational()) {
        let a = path.algebra().clone();
        let e = GroupPoint::identity(&a);
        let lhs = path.dilate(&lambda).unwrap().endpoint(&e).unwrap();
        prop_assert_eq!(lhs, path.endpoint(&e).unwrap().dilate(&lambda).unwrap());
    }

    #[test]
    fn concatenation_and_reversal(
        (p, q, base) in (2usize..=4).prop_flat_map(|s| {
            let a = build_free_nilpotent(2, s).unwrap();
            let v = prop::collection::vec(small_rational(), a.dim())
                .prop_map({ let a = a.clone(); move |c| GroupPoint::exp(LieVector::from_coords(&a, c).unwrap()) });
            (path_in(a.clone()), path_in(a), v)
        })
    ) {
        let pq = p.concat(&q).unwrap();
        let mid = p.endpoint(&base).unwrap();
        prop_assert_eq!(pq.endpoint(&base).unwrap(), q.endpoint(&mid).unwrap());
        prop_assert_eq!(p.reverse().endpoint(&mid).unwrap(), base.clone());
        prop_assert_eq!(p.development().inverse(), p.reverse().development());
        let norm = FirstLayerNorm::euclidean();
        let tol = ratio(1, 1000);
        let lp = p.length_upper_bound(&norm, &tol).unwrap();
        let lr = p.reverse().length_upper_bound(&norm, &tol).unwrap();
        prop_assert_eq!(lp.value(), lr.value());
    }

    #[test]
    fn projection_of_lift_is_identity(
        (q, path) in (3usize..=4).prop_flat_map(|s| {
            let q = QuotientMap::new(&build_free_nilpotent(2, s).unwrap()).unwrap();
            let target = q.target().clone();
            (Just(q), path_in(target))
        })
    ) {
        let lifted = lift_path(&q, &path).unwrap();
        prop_assert_eq!(project_path(&q, &lifted).unwrap(), path.clone());
        prop_assert_eq!(q.project(&lifted.development()).unwrap(), path.development());
    }
}

#[test]
fn convexity_guard() {
    for tag in ["lp:1", "lp:inf", "lp:2/3"] {
        let request: NormRequest = tag.parse().unwrap();
        assert!(make_norm(&request).is_err(), "{tag}");
    }
    assert!(matches!(
        make_norm(&"lp:1".parse().unwrap()),
        Err(Error::NotStrictlyConvex(_))
    ));
    for tag in ["lp:3/2", "lp:4", "euclidean"] {
        assert!(make_norm(&tag.parse().unwrap()).is_ok(), "{tag}");
    }
}

#[test]
fn exact_on_grid_points() {
    let norm = FirstLayerNorm::euclidean();
    let b = norm.certified_upper_coords(&[int(3), int(-4)], &ratio(1, 3)).unwrap();
    assert_eq!(b.value(), &int(5));
    assert!(b.slack().is_zero());
}

#[test]
fn corner_length_is_sum_of_sides() {
    let a = build_free_nilpotent(2, 3).unwrap();
    let x1 = LieVector::first_layer(&a, &[int(1), int(0)]).unwrap();
    let x2 = LieVector::first_layer(&a, &[int(0), int(1)]).unwrap();
    let corner = make_corner(&x1, &x2).unwrap();
    let e = GroupPoint::identity(&a);
    assert_eq!(corner.endpoint(&GroupPoint::exp(x1.clone())).unwrap(), GroupPoint::exp(x2.clone()));
    let len = corner
        .length_upper_bound(&FirstLayerNorm::euclidean(), &default_tolerance())
        .unwrap();
    assert_eq!(len.value(), &int(2));
    assert!(make_corner(&x1, &x1.scale(&int(2))).is_err());
    assert!(corner.endpoint(&e).is_ok());
}
