use dvrgeom_core::blowup::{blow_up, format_trace, resolve, verify_presentation, BlowupOptions, ChartName, Outcome};
use dvrgeom_core::error::Error;
use dvrgeom_core::quadsing::LocalModel;
use dvrgeom_core::ring::Ring;

fn model(ring: &Ring, literal: &str) -> LocalModel {
    LocalModel::parse_literal(literal, ring).unwrap()
}

#[test]
fn order_two_resolves_in_one_step() {
    let r = Ring::zmod(5, 4).unwrap();
    let m = model(&r, "oq(case=i, n=1, Q=x1*x2, c=25)");
    let res = resolve(&m, &BlowupOptions::default()).unwrap();
    assert_eq!(res.blowups(), 1);
    assert!(res.all_ok());
    assert_eq!(res.steps[0].outcome, Outcome::SemiStable);
    assert!(format_trace(&res).ends_with("orders: 2\nblow-ups: 1, terminal: semi-stable\n"));
}

#[test]
fn order_six_drops_by_two_each_step() {
    let r = Ring::zmod(3, 7).unwrap();
    let m = model(&r, "oq(case=i, n=2, Q=x1*x2 + x3^2, c=729)");
    let res = resolve(&m, &BlowupOptions::default()).unwrap();
    assert_eq!(res.orders(), vec![6, 4, 2]);
    assert!(res.all_ok());
    let trace = format_trace(&res);
    assert!(trace.ends_with("orders: 6 -> 4 -> 2\nblow-ups: 3, terminal: semi-stable\n"), "{trace}");
    assert_eq!(trace, format_trace(&resolve(&m, &BlowupOptions::default()).unwrap()));
}

#[test]
fn chart_equations() {
    let r = Ring::zmod(5, 4).unwrap();
    let charts = blow_up(&model(&r, "oq(case=i, n=1, Q=x1*x2, c=25)")).unwrap();
    assert_eq!(charts.len(), 3);
    let t = charts.iter().find(|c| c.name == ChartName::T).unwrap();
    assert_eq!(t.relation_strings(), vec!["u1*u2 - 1"]);
    let u2 = charts.iter().find(|c| c.name == ChartName::U(2)).unwrap();
    assert_eq!(u2.relation_strings(), vec!["-t^2 + u1", "x2*t - 5"]);
}

#[test]
fn char_two_chart_and_presentations() {
    let r = Ring::power_series(2, 1, 4).unwrap();
    let m = model(&r, "oq(case=ii, n=2, P=x1*x2, b=t, c=0)");
    let charts = blow_up(&m).unwrap();
    let t = charts.iter().find(|c| c.name == ChartName::T).unwrap();
    assert_eq!(t.relation_strings(), vec!["u1*u2 + u3^2 + u3"]);
    assert!(verify_presentation(&m, &charts).unwrap().passes());
    let mut broken = charts.clone();
    let k = broken.iter().position(|c| c.name == ChartName::U(3)).unwrap();
    broken[k].relations.truncate(1);
    broken[k].main = 0;
    assert!(!verify_presentation(&m, &broken).unwrap().passes());
}

#[test]
fn unnormalized_models_are_refused() {
    let r = Ring::zmod(3, 4).unwrap();
    let m = model(&r, "oq(case=i, n=1, Q=x1*x2, c=3)");
    assert!(matches!(blow_up(&m), Err(Error::NotNormalized)));
    assert!(matches!(resolve(&m, &BlowupOptions::default()), Err(Error::NotNormalized)));
}
