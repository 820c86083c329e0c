use dvrgeom_core::bertini::{
    find_good_hyperplane, find_good_hypersurface, is_good_hyperplane, reverify, HyperplaneA, HyperplaneSearch, HypersurfaceSearch,
    Sampling, StratifiedModel,
};
use dvrgeom_core::enumerate::{all_points, Mode};
use dvrgeom_core::error::Error;
use dvrgeom_core::parse::{indexed_names, parse_poly};
use dvrgeom_core::ring::Ring;
use dvrgeom_core::smooth::{is_smooth, is_transversal, Method, SchemeModel, SmoothOptions};

const QUARTIC: &str = "x1*x2^3 + x1^2*x2^2 + x0*x2^3 + x0*x1^3 + x0^2*x1^2 + x0^3*x2";

fn plane(ring: &Ring, text: &str) -> SchemeModel {
    SchemeModel::projective(ring, 3, vec![parse_poly(text, ring, &indexed_names("x", 0, 3)).unwrap()]).unwrap()
}

fn enumeration(ext: u32) -> SmoothOptions {
    SmoothOptions { method: Method::Enumeration, ext_bound: ext, ..SmoothOptions::default() }
}

fn quartic_model() -> StratifiedModel {
    let a = Ring::power_series(2, 1, 2).unwrap();
    let x = plane(&a, &format!("{QUARTIC} + t*x0^4"));
    let xs = plane(&a.residue_field(), QUARTIC);
    StratifiedModel::new(x, vec![xs], true, &SmoothOptions::default()).unwrap()
}

#[test]
fn every_rational_line_is_tangent_to_the_quartic() {
    let f2 = Ring::prime_field(2).unwrap();
    let xs = plane(&f2, QUARTIC);
    assert!(is_smooth(&xs, &SmoothOptions::both(3)).unwrap().verdict.is_smooth());
    for h in all_points(&f2, 3, Mode::Projective, 100).unwrap() {
        let line = SchemeModel::projective(&f2, 3, vec![dvrgeom_core::poly::MultiPoly::linear(&f2, &h)]).unwrap();
        assert!(!is_transversal(&xs, &line, &enumeration(2)).unwrap().verdict.is_smooth(), "{h:?}");
    }
}

#[test]
fn quartic_needs_a_quadratic_extension() {
    let model = quartic_model();
    match find_good_hyperplane(&model, 2, 1, &SmoothOptions::default()).unwrap() {
        HyperplaneSearch::Found { degree, hyperplane, levels, .. } => {
            assert_eq!(degree, 2);
            assert_eq!((levels[0].degree, levels[0].candidates, levels[0].good), (1, 7, 0));
            assert_eq!(levels[1].candidates, 21);
            assert!(levels[1].good > 0);
            // independent check of the found line over F_4 by enumeration
            let xs = model.special_fibre();
            let (f4, up) = xs.ring.extend_unramified(2).unwrap();
            let xs4 = xs.base_change(&up).unwrap();
            let line = SchemeModel::projective(&f4, 3, vec![hyperplane.residue_poly()]).unwrap();
            assert!(is_transversal(&xs4, &line, &enumeration(2)).unwrap().verdict.is_smooth());
        }
        HyperplaneSearch::Exhausted { levels } => panic!("{levels:?}"),
    }
    match find_good_hypersurface(&[model.special_fibre()], 1, 1 << 10, None, &SmoothOptions::default()).unwrap() {
        HypersurfaceSearch::Exhausted { tested } => assert_eq!(tested, 7),
        found => panic!("{found:?}"),
    }
}

fn e5() -> StratifiedModel {
    let a = Ring::zmod(3, 3).unwrap();
    let f = a.residue_field();
    StratifiedModel::new(plane(&a, "x0*x1 - 3*x2^2"), vec![plane(&f, "x0"), plane(&f, "x1")], false, &SmoothOptions::default()).unwrap()
}

#[test]
fn good_lines_for_the_node_avoid_it() {
    let model = e5();
    let a = model.ring().clone();
    let f = a.residue_field();
    for h in all_points(&f, 3, Mode::Projective, 100).unwrap() {
        let v = is_good_hyperplane(&model, &HyperplaneA::lift(&a, &h).unwrap(), &SmoothOptions::default()).unwrap();
        assert_eq!(v.good, h[2] != 0, "{h:?}");
    }
    let HyperplaneSearch::Found { hyperplane, good_locus, .. } = find_good_hyperplane(&model, 2, 1, &SmoothOptions::default()).unwrap() else {
        panic!("expected a hyperplane");
    };
    assert_eq!(good_locus.len(), 9);
    assert!(reverify(&model, &hyperplane, 2).unwrap().passes());
}

#[test]
fn conics_for_the_node() {
    let model = e5();
    let opts = SmoothOptions::default();
    let HypersurfaceSearch::Found { form, .. } = find_good_hypersurface(&model.components, 2, 1 << 20, None, &opts).unwrap() else {
        panic!("expected a conic");
    };
    let f = form.ring().clone();
    let conic = SchemeModel::projective(&f, 3, vec![form.clone()]).unwrap();
    for comp in &model.components {
        assert!(is_transversal(comp, &conic, &enumeration(2)).unwrap().verdict.is_smooth(), "{form}");
    }
    assert_ne!(form.eval(&[0, 0, 1]), 0);
}

#[test]
fn sampling_is_seeded_and_budget_is_enforced() {
    let model = e5();
    let opts = SmoothOptions::default();
    assert!(matches!(find_good_hypersurface(&model.components, 3, 100, None, &opts), Err(Error::BudgetExceeded { .. })));
    let s = Sampling { size: 50, seed: 7 };
    let a = find_good_hypersurface(&model.components, 3, 100, Some(s), &opts).unwrap();
    let b = find_good_hypersurface(&model.components, 3, 100, Some(s), &opts).unwrap();
    assert_eq!(a, b);
    assert!(matches!(a, HypersurfaceSearch::Found { .. }));
}
