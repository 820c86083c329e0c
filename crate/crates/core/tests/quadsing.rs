use dvrgeom_core::error::Error;
use dvrgeom_core::parse::{indexed_names, parse_poly};
use dvrgeom_core::poly::MultiPoly;
use dvrgeom_core::quadsing::{
    classify_at_origin, classify_point, good_hyperplane_locus_at_singularity, hyperplane_preserves_oq, normalize, ClassifyOptions,
    LocalModel, OqCase, SingularityVerdict,
};
use dvrgeom_core::ring::Ring;
use dvrgeom_core::smooth::Space;
use proptest::prelude::*;

fn local(ring: &Ring, n: usize, text: &str) -> MultiPoly {
    parse_poly(text, ring, &indexed_names("x", 1, n)).unwrap()
}

fn opts() -> ClassifyOptions {
    ClassifyOptions::default()
}

#[test]
fn node_of_order_two() {
    let r = Ring::zmod(3, 5).unwrap();
    let f = parse_poly("x0*x1 - 9*x2^2", &r, &indexed_names("x", 0, 3)).unwrap();
    match classify_point(&[f], Space::Projective, &[0, 0, 1], &opts()).unwrap() {
        SingularityVerdict::OrdinaryQuadratic(m) => {
            assert_eq!(m.case, OqCase::NonDegenerate);
            assert_eq!(m.order().unwrap(), 2);
            assert!(m.is_normalized());
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn sum_of_squares_minus_p_has_order_one() {
    let r = Ring::zmod(5, 3).unwrap();
    let f = local(&r, 3, "x1^2 + x2^2 + x3^2 - 5");
    match classify_at_origin(&f, &opts()).unwrap() {
        SingularityVerdict::OrdinaryQuadratic(m) => {
            assert_eq!(m.order().unwrap(), 1);
            assert!(!m.is_normalized());
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn smooth_point_and_non_ordinary_points() {
    let r = Ring::zmod(5, 2).unwrap();
    assert_eq!(classify_at_origin(&local(&r, 2, "x1 - 5*x2^2"), &opts()).unwrap(), SingularityVerdict::Smooth);
    let cusp = classify_at_origin(&local(&r, 2, "x1^2 - x2^3 - 5"), &opts()).unwrap();
    assert!(matches!(cusp, SingularityVerdict::NotOrdinary(_)), "{cusp:?}");
}

#[test]
fn orders_and_precision() {
    let r = Ring::zmod(3, 5).unwrap();
    assert_eq!(LocalModel::nondegenerate(local(&r, 2, "x1*x2"), 9).unwrap().order().unwrap(), 2);
    let t4 = Ring::power_series(2, 1, 4).unwrap();
    let t = t4.pi().unwrap();
    assert_eq!(LocalModel::degenerate(local(&t4, 2, "x1*x2"), t, 0).unwrap().order().unwrap(), 1);
    let r3 = Ring::zmod(3, 3).unwrap();
    let top = LocalModel::nondegenerate(local(&r3, 2, "x1*x2"), r3.from_int(27)).unwrap();
    assert!(matches!(top.order(), Err(Error::PrecisionExhausted { .. })));
}

#[test]
fn odd_order_is_normalized_by_a_ramified_square_root() {
    let r = Ring::power_series(3, 1, 3).unwrap();
    let m = LocalModel::nondegenerate(local(&r, 2, "x1*x2"), r.pi().unwrap()).unwrap();
    let (n, map) = normalize(&m).unwrap();
    assert!(map.is_some());
    assert_eq!(n.order().unwrap(), 2);
    assert!(n.is_normalized());
    let even = LocalModel::nondegenerate(local(&r, 2, "x1*x2"), r.pow(r.pi().unwrap(), 2)).unwrap();
    let (same, map) = normalize(&even).unwrap();
    assert!(map.is_none());
    assert_eq!(same, even);
}

#[test]
fn hyperplanes_through_the_point() {
    let r = Ring::zmod(5, 2).unwrap();
    let m = LocalModel::nondegenerate(local(&r, 3, "x1^2 + x2^2 + x3^2"), 5).unwrap();
    let f5 = r.residue_field();
    assert!(hyperplane_preserves_oq(&m, &local(&f5, 3, "x3")).unwrap());
    assert!(!hyperplane_preserves_oq(&m, &local(&f5, 3, "x1 + 2*x2")).unwrap());
    assert!(!hyperplane_preserves_oq(&m, &MultiPoly::zero(&f5, 3)).unwrap());
    assert_eq!(good_hyperplane_locus_at_singularity(&m).unwrap().len(), 31 - 6);
    let r3 = Ring::zmod(3, 2).unwrap();
    let m3 = LocalModel::nondegenerate(local(&r3, 3, "x1^2 + x2^2 + x3^2"), 3).unwrap();
    assert!(!good_hyperplane_locus_at_singularity(&m3).unwrap().is_empty());
}

#[test]
fn degenerate_quadrics_are_rejected() {
    let r = Ring::zmod(5, 2).unwrap();
    assert!(LocalModel::nondegenerate(local(&r, 2, "x1^2"), 5).is_err());
    assert!(LocalModel::nondegenerate(local(&r, 2, "x1*x2"), 1).is_err());
}

proptest! {
    #[test]
    fn literals_round_trip(c in 0u64..81, n in 1usize..3) {
        let r = Ring::zmod(3, 4).unwrap();
        let c = r.mul(r.from_int(3), c % r.size());
        let q = if n == 1 { "x1*x2" } else { "x1*x2 + x3^2" };
        let m = LocalModel::nondegenerate(local(&r, n + 1, q), c).unwrap();
        let text = m.to_literal();
        prop_assert_eq!(LocalModel::parse_literal(&text, &r).unwrap(), m);
    }

    #[test]
    fn classification_recovers_the_order(v in 1u32..4, u in 1u64..5, n in 1usize..3) {
        let r = Ring::zmod(5, 4).unwrap();
        let c = r.mul(r.pow(r.from_int(5), v as u64), u);
        let q = if n == 1 { "x1*x2" } else { "x1^2 + 2*x2^2 - x3^2" };
        let m = LocalModel::nondegenerate(local(&r, n + 1, q), c).unwrap();
        match classify_at_origin(&m.realization(), &opts()).unwrap() {
            SingularityVerdict::OrdinaryQuadratic(found) => prop_assert_eq!(found.order().unwrap(), v),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
