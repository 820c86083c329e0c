use dvrgeom_core::error::Error;
use dvrgeom_core::groebner::Ideal;
use dvrgeom_core::parse::{indexed_names, parse_poly};
use dvrgeom_core::poly::{Monomial, MultiPoly};
use dvrgeom_core::ring::Ring;
use proptest::prelude::*;

const NVARS: usize = 3;

fn poly_strategy(ring: Ring, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    let q = ring.size();
    prop::collection::vec((any::<u64>(), prop::collection::vec(0..=max_deg, NVARS)), 0..6).prop_map(move |terms| {
        let mut f = MultiPoly::zero(&ring, NVARS);
        for (c, e) in terms {
            f.add_term(Monomial(e), c % q);
        }
        f
    })
}

fn f5() -> Ring {
    Ring::prime_field(5).unwrap()
}

fn names() -> Vec<String> {
    indexed_names("x", 0, NVARS)
}

proptest! {
    #[test]
    fn display_parses_back(f in poly_strategy(Ring::zmod(3, 2).unwrap(), 3)) {
        let r = f.ring().clone();
        let text = f.display_with(&names());
        prop_assert_eq!(parse_poly(&text, &r, &names()).unwrap(), f);
    }

    #[test]
    fn arithmetic_laws(f in poly_strategy(f5(), 2), g in poly_strategy(f5(), 2), h in poly_strategy(f5(), 2)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in poly_strategy(f5(), 2), g in poly_strategy(f5(), 2), p in prop::collection::vec(0u64..5, NVARS)) {
        let r = f5();
        prop_assert_eq!((&f * &g).eval(&p), r.mul(f.eval(&p), g.eval(&p)));
        prop_assert_eq!((&f + &g).eval(&p), r.add(f.eval(&p), g.eval(&p)));
    }

    #[test]
    fn leibniz_rule(f in poly_strategy(f5(), 3), g in poly_strategy(f5(), 3), i in 0..NVARS) {
        prop_assert_eq!((&f * &g).partial(i), &(&f.partial(i) * &g) + &(&f * &g.partial(i)));
    }

    #[test]
    fn ideal_contains_its_multiples(a in poly_strategy(f5(), 2), b in poly_strategy(f5(), 2)) {
        let gens = vec![
            parse_poly("x0^2 - x1", &f5(), &names()).unwrap(),
            parse_poly("x1*x2 - 1", &f5(), &names()).unwrap(),
        ];
        let ideal = Ideal::new(&f5(), NVARS, gens.clone()).unwrap();
        let h = &(&a * &gens[0]) + &(&b * &gens[1]);
        prop_assert!(ideal.contains(&h).unwrap());
        let nf = ideal.normal_form(&a).unwrap();
        prop_assert!(ideal.contains(&(&a - &nf)).unwrap());
        prop_assert_eq!(ideal.normal_form(&nf).unwrap(), nf);
    }
}

#[test]
fn unit_ideal_and_dimension() {
    let r = f5();
    let unit = Ideal::new(&r, NVARS, vec![parse_poly("x0", &r, &names()).unwrap(), parse_poly("x0 - 1", &r, &names()).unwrap()]).unwrap();
    assert!(unit.is_unit().unwrap());
    let curve = Ideal::new(&r, NVARS, vec![parse_poly("x0^2 + x1^2 - x2", &r, &names()).unwrap()]).unwrap();
    assert_eq!(curve.dimension().unwrap(), Some(2));
}

#[test]
fn elimination_projects_the_twisted_cubic() {
    let r = Ring::prime_field(7).unwrap();
    let n = indexed_names("x", 0, 4);
    let gens = ["x1 - x0", "x2 - x0^2", "x3 - x0^3"].iter().map(|s| parse_poly(s, &r, &n).unwrap()).collect();
    let ideal = Ideal::new(&r, 4, gens).unwrap();
    let elim = ideal.eliminate(&[0]).unwrap();
    let target = parse_poly("x2 - x1^2", &r, &n).unwrap();
    let image = Ideal::new(&r, 4, elim).unwrap();
    assert!(image.contains(&target).unwrap());
    assert!(!image.contains(&parse_poly("x1", &r, &n).unwrap()).unwrap());
}

#[test]
fn parse_errors_carry_positions() {
    let r = f5();
    match parse_poly("x0**", &r, &names()) {
        Err(Error::Parse { line, column, .. }) => {
            assert_eq!(line, 1);
            assert!(column >= 3, "column {column}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(parse_poly("x7 + 1", &r, &names()).is_err());
}
