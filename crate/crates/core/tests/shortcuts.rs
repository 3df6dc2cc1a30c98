use corner_core::certify::{load_certificate, verify, verify_endpoint};
use corner_core::rational::{int, ratio};
use corner_core::shortcut::{
    bracket_decompose, build_candidate, heisenberg_shortcut, realize_vertical, recursive_shortcut,
    solve_correction, EtaChoice, ShortcutOptions,
};
use corner_core::{
    build_free_nilpotent, make_norm, Algebra, BigRational, Error, FirstLayerNorm, GroupPoint,
    LieVector,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn unit_interval() -> impl Strategy<Value = BigRational> {
    (1i64..=99).prop_map(|n| ratio(n, 100))
}

fn layer_vector(a: &Algebra, j: usize) -> impl Strategy<Value = LieVector> {
    let a = a.clone();
    prop::collection::vec(small_rational(), a.layer_dims()[j - 1]).prop_map(move |cs| {
        LieVector::from_sparse(&a, a.layer_range(j).zip(cs)).unwrap()
    })
}

/// Independent horizontal pair.
fn frame(a: &Algebra) -> impl Strategy<Value = (LieVector, LieVector)> {
    let a = a.clone();
    prop::collection::vec(small_rational(), 4)
        .prop_filter("independent", |c| &c[0] * &c[3] != &c[1] * &c[2])
        .prop_map(move |c| {
            (
                LieVector::first_layer(&a, &c[..2]).unwrap(),
                LieVector::first_layer(&a, &c[2..]).unwrap(),
            )
        })
}

fn correction_case() -> impl Strategy<Value = (LieVector, LieVector, LieVector, BigRational)> {
    (3usize..=4).prop_flat_map(|s| {
        let a = build_free_nilpotent(2, s).unwrap();
        (frame(&a), layer_vector(&a, s), unit_interval())
            .prop_map(|((x1, x2), z, eps)| (x1, x2, z, eps))
    })
}

fn standard(step: usize) -> (Algebra, LieVector, LieVector) {
    let a = build_free_nilpotent(2, step).unwrap();
    let x1 = LieVector::basis(&a, 0);
    let x2 = LieVector::basis(&a, 1);
    (a, x1, x2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correction_triple_identities((x1, x2, z, eps) in correction_case()) {
        let h = GroupPoint::exp(z.clone());
        let t = solve_correction(&h, &x1, &x2).unwrap();
        // the layer-(s-1) parts cancel and the brackets rebuild z
        let sum = &(&t.y1 + &t.y2) + &t.y3;
        prop_assert!(sum.is_zero());
        let half = &t.y2.scale(&ratio(1, 2)) + &t.y3;
        let brackets = &x1.bracket(&t.y1).unwrap() + &x2.bracket(&half).unwrap();
        prop_assert_eq!(&brackets, &z);
        // three conjugations land on the dilated discrepancy
        let product = t.conjugation_product(&x1, &x2, &eps).unwrap();
        prop_assert_eq!(product, h.dilate(&eps).unwrap());
        // solutions scale with the discrepancy
        let f = corner_core::rational::pow(&eps, z.algebra().step() as i32);
        let scaled = solve_correction(&GroupPoint::exp(z.scale(&f)), &x1, &x2).unwrap();
        prop_assert_eq!(scaled, t.scaled(&f));
        let (w1, w2) = bracket_decompose(&x1, &x2, &z).unwrap();
        prop_assert_eq!(&x1.bracket(&w1).unwrap() + &x2.bracket(&w2).unwrap(), z);
    }

    #[test]
    fn realization_is_exact(
        y in (2usize..=5).prop_flat_map(|s| {
            let a = build_free_nilpotent(2, s).unwrap();
            (2..=s).prop_flat_map(move |j| layer_vector(&a, j))
        })
    ) {
        let w = realize_vertical(&y).unwrap();
        let e = GroupPoint::identity(y.algebra());
        prop_assert_eq!(w.endpoint(&e).unwrap(), GroupPoint::exp(y));
    }

    #[test]
    fn candidate_endpoints_are_exact(
        ((x1, x2), eta) in (frame(&build_free_nilpotent(2, 3).unwrap()), (1i64..=8).prop_map(|k| ratio(1, 1 << k)))
    ) {
        let a = x1.algebra().clone();
        let q = corner_core::QuotientMap::new(&a).unwrap();
        let inner_a = q.target().clone();
        let (y1, y2) = (q.project_vector(&x1).unwrap(), q.project_vector(&x2).unwrap());
        let options = ShortcutOptions::default();
        let inner = recursive_shortcut(&inner_a, &y1, &y2, &FirstLayerNorm::euclidean(), &options);
        prop_assume!(inner.is_ok());
        let inner = inner.unwrap();
        let path = build_candidate(&x1, &x2, &eta, &inner).unwrap();
        prop_assert_eq!(path.endpoint(&GroupPoint::exp(x1.clone())).unwrap(), GroupPoint::exp(x2));
    }
}

#[test]
fn every_basis_element_is_realized() {
    for s in 2..=5 {
        let a = build_free_nilpotent(2, s).unwrap();
        let e = GroupPoint::identity(&a);
        for j in 2..=s {
            for k in a.layer_range(j) {
                let y = LieVector::basis(&a, k);
                let w = realize_vertical(&y).unwrap();
                assert_eq!(w.endpoint(&e).unwrap(), GroupPoint::exp(y), "step {s} basis {k}");
            }
        }
    }
}

#[test]
fn heisenberg_closed_form() {
    let (_, x1, x2) = standard(2);
    let eps = ratio(1, 10);
    let path = heisenberg_shortcut(&x1, &x2, &eps).unwrap();
    assert_eq!(path.len(), 6);
    assert_eq!(path.endpoint(&GroupPoint::exp(x1.clone())).unwrap(), GroupPoint::exp(x2.clone()));
    let norm = FirstLayerNorm::euclidean();
    let tol = ratio(1, 10_000_000_000);
    let d = norm.certified_upper(&(&x2 - &x1), &tol).unwrap();
    let len = path.length_upper_bound(&norm, &tol).unwrap();
    let closed = int(2) - (int(2) - d.value()) * &eps + int(2) * &eps * &eps;
    let diff = len.value() - &closed;
    assert!(diff.abs() <= ratio(1, 1_000_000_000));
    assert!(len.value() <= &ratio(19615, 10_000));
}

#[test]
fn step_three_and_four_certificates_round_trip() {
    for s in 3..=4 {
        let (a, x1, x2) = standard(s);
        let cert = recursive_shortcut(&a, &x1, &x2, &FirstLayerNorm::euclidean(), &ShortcutOptions::default()).unwrap();
        assert!(cert.endpoint_ok());
        assert!(cert.margin() > &BigRational::zero());
        let loaded = load_certificate(&cert.to_json()).unwrap();
        assert!(verify_endpoint(&loaded));
        let verdict = verify(&loaded).unwrap();
        assert!(verdict.certified && verdict.matches_record, "step {s}: {verdict:?}");
    }
}

#[test]
fn strictly_convex_lp_norms_give_positive_margins() {
    for tag in ["lp:3/2", "lp:4"] {
        let norm = make_norm(&tag.parse().unwrap()).unwrap();
        for s in 2..=3 {
            let (a, x1, x2) = standard(s);
            let cert = recursive_shortcut(&a, &x1, &x2, &norm, &ShortcutOptions::default()).unwrap();
            assert!(cert.endpoint_ok());
            assert!(cert.margin() > &BigRational::zero(), "{tag} step {s}");
            assert!(verify(&load_certificate(&cert.to_json()).unwrap()).unwrap().certified);
        }
    }
}

#[test]
fn skewed_generators_at_step_three() {
    let a = build_free_nilpotent(2, 3).unwrap();
    let x1 = LieVector::first_layer(&a, &[int(2), int(1)]).unwrap();
    let x2 = LieVector::first_layer(&a, &[int(-1), int(3)]).unwrap();
    let cert = recursive_shortcut(&a, &x1, &x2, &FirstLayerNorm::euclidean(), &ShortcutOptions::default()).unwrap();
    assert!(cert.endpoint_ok());
    assert!(cert.margin() > &BigRational::zero());
}

#[test]
fn guards() {
    let (a, x1, x2) = standard(3);
    let norm = FirstLayerNorm::euclidean();
    let opts = ShortcutOptions::default();
    assert!(matches!(
        recursive_shortcut(&a, &x1, &x1.scale(&int(3)), &norm, &opts),
        Err(Error::LinearlyDependent)
    ));
    let vertical = LieVector::basis(&a, 2);
    assert!(matches!(
        recursive_shortcut(&a, &x1, &vertical, &norm, &opts),
        Err(Error::NotHorizontal)
    ));
    let abelian = build_free_nilpotent(2, 1).unwrap();
    assert!(matches!(
        recursive_shortcut(&abelian, &LieVector::basis(&abelian, 0), &LieVector::basis(&abelian, 1), &norm, &opts),
        Err(Error::AbelianStep1)
    ));
    let rank3 = build_free_nilpotent(3, 2).unwrap();
    assert!(matches!(
        recursive_shortcut(&rank3, &LieVector::basis(&rank3, 0), &LieVector::basis(&rank3, 1), &norm, &opts),
        Err(Error::NotRankTwo(3))
    ));
    let demanding = ShortcutOptions { min_margin: BigRational::one(), ..opts.clone() };
    assert!(matches!(
        recursive_shortcut(&a, &x1, &x2, &norm, &demanding),
        Err(Error::EpsilonSearchExhausted { .. })
    ));
    let fixed = ShortcutOptions { eta: EtaChoice::Fixed(int(2)), ..opts };
    assert!(recursive_shortcut(&a, &x1, &x2, &norm, &fixed).is_err());
    let (h, y1, y2) = standard(2);
    assert!(matches!(
        solve_correction(&GroupPoint::identity(&h), &y1, &y2),
        Err(Error::StepTooSmall { .. })
    ));
}
