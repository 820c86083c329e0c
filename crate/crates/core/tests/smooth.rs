use dvrgeom_core::parse::{indexed_names, parse_poly};
use dvrgeom_core::poly::{Monomial, MultiPoly};
use dvrgeom_core::ring::Ring;
use dvrgeom_core::smooth::{check_snc, is_smooth, is_transversal, singular_points, Method, SchemeModel, SmoothOptions, Verdict};
use proptest::prelude::*;

fn plane(ring: &Ring, gens: &[&str]) -> SchemeModel {
    let n = indexed_names("x", 0, 3);
    SchemeModel::projective(ring, 3, gens.iter().map(|g| parse_poly(g, ring, &n).unwrap()).collect()).unwrap()
}

fn enumeration(ext: u32) -> SmoothOptions {
    SmoothOptions { method: Method::Enumeration, ext_bound: ext, ..SmoothOptions::default() }
}

fn plane_curve(q: u64) -> impl Strategy<Value = MultiPoly> {
    (1u32..=3, prop::collection::vec(any::<u64>(), 10)).prop_filter_map("zero form", move |(d, coeffs)| {
        let ring = Ring::prime_field(q).unwrap();
        let mut f = MultiPoly::zero(&ring, 3);
        let mut k = 0;
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                f.add_term(Monomial(vec![a, b, d - a - b]), coeffs[k] % q);
                k += 1;
            }
        }
        (!f.is_zero()).then_some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Singular points of a plane curve of degree <= 3 come in Galois orbits of size <= 3,
    // so enumeration up to degree 3 sees every singular curve.
    #[test]
    fn groebner_agrees_with_enumeration_on_plane_curves(f in prop_oneof![plane_curve(2), plane_curve(3)]) {
        let x = SchemeModel::projective(f.ring(), 3, vec![f.clone()]).unwrap();
        let g = is_smooth(&x, &SmoothOptions::default()).unwrap().verdict.is_smooth();
        let e = is_smooth(&x, &enumeration(3)).unwrap().verdict.is_smooth();
        prop_assert_eq!(g, e, "{}", f);
    }
}

#[test]
fn fermat_cubic_is_smooth_and_node_is_found() {
    let f7 = Ring::prime_field(7).unwrap();
    let fermat = plane(&f7, &["x0^3 + x1^3 + x2^3"]);
    assert!(is_smooth(&fermat, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
    let f5 = Ring::prime_field(5).unwrap();
    let nodal = plane(&f5, &["x1^2*x2 - x0^3 - x0^2*x2"]);
    match is_smooth(&nodal, &SmoothOptions::both(2)).unwrap().verdict {
        Verdict::SingularAt(w) => assert_eq!(w.points, vec![(1, vec![0, 0, 1])]),
        v => panic!("expected a singular point, got {v:?}"),
    }
}

#[test]
fn conjugate_singular_points_need_the_extension() {
    // x0^2 + x1^2 splits over F_9 into two conjugate lines through (0:0:1); they meet
    // the line x2 = x0 in a conjugate pair of points
    let f3 = Ring::prime_field(3).unwrap();
    let x = plane(&f3, &["(x0^2 + x1^2) * (x2 - x0)"]);
    assert_eq!(singular_points(&x, 1, 1 << 16).unwrap().1, vec![vec![0, 0, 1]]);
    assert_eq!(singular_points(&x, 2, 1 << 16).unwrap().1.len(), 3);
    assert!(!is_smooth(&x, &SmoothOptions::default()).unwrap().verdict.is_smooth());
}

#[test]
fn wrong_codimension_is_reported() {
    let f3 = Ring::prime_field(3).unwrap();
    let x = plane(&f3, &["x0", "2*x0"]);
    assert!(matches!(is_smooth(&x, &SmoothOptions::default()).unwrap().verdict, Verdict::WrongCodimension { .. }));
}

#[test]
fn transversality_of_lines_to_a_conic() {
    let f5 = Ring::prime_field(5).unwrap();
    let conic = plane(&f5, &["x0^2 + x1^2 + x2^2"]);
    // (1:2:0) lies on the conic; its tangent line is x0 + 2*x1
    let tangent = plane(&f5, &["x0 + 2*x1"]);
    let secant = plane(&f5, &["x2"]);
    assert!(!is_transversal(&conic, &tangent, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
    assert!(is_transversal(&conic, &secant, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
}

#[test]
fn snc_of_line_arrangements() {
    let f5 = Ring::prime_field(5).unwrap();
    let lines = |eqs: &[&str]| eqs.iter().map(|e| plane(&f5, &[e])).collect::<Vec<_>>();
    assert!(check_snc(&lines(&["x0", "x1", "x2"]), &SmoothOptions::both(2)).unwrap().is_snc());
    // three concurrent lines: the triple stratum is a point in codimension 3
    assert!(!check_snc(&lines(&["x0", "x1", "x0 + x1"]), &SmoothOptions::both(2)).unwrap().is_snc());
}
