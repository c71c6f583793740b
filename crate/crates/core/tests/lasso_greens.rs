//! Closed-form Green's function of the lasso (one lead, one loop of length
//! `l2`, Neumann-Kirchhoff vertex) compared with the general solver in all
//! four lead/loop combinations.

mod common;

use qgraph::greens::{greens, EnergyPoint, GreensCase};
use qgraph::linalg::{C64, I};
use qgraph::Error;

fn closed_form(k: C64, l2: f64, x_on_lead: bool, x: f64, s_on_lead: bool, s: f64) -> C64 {
    let z = (I * k * l2).exp();
    let three = C64::from(3.0);
    let body = match (x_on_lead, s_on_lead) {
        (true, true) => {
            (I * k * (x - s).abs()).exp() + (I * k * (x + s)).exp() * (z * 3.0 - 1.0) / (three - z)
        }
        (true, false) => {
            C64::from(2.0) / (three - z)
                * (I * k * x).exp()
                * ((I * k * s).exp() + (-I * k * (s - l2)).exp())
        }
        (false, true) => {
            C64::from(2.0) / (three - z)
                * (I * k * s).exp()
                * ((I * k * x).exp() + (I * k * (l2 - x)).exp())
        }
        (false, false) => {
            let c = |t: C64| (I * t).exp() * 0.5 + (-I * t).exp() * 0.5;
            (I * k * (x - s).abs()).exp()
                + z * 2.0 / ((z - 1.0) * (z - three))
                    * ((C64::from(2.0) - z) * c(k * (x - s)) - c(k * (x + s - l2)))
        }
    };
    body / (C64::new(0.0, 2.0) * k)
}

fn check_all_cases(k: C64, l2: f64, tol: f64) {
    let q = common::lasso(l2);
    let g = q.graph();
    let energy = EnergyPoint::from_wavenumber(k).unwrap();
    let points = [("e1", 0.35), ("e1", 1.9), ("e2", 0.2 * l2), ("e2", 0.75 * l2)];
    for &(xe, x) in &points {
        for &(se, s) in &points {
            let got = greens(&q, g.point(xe, x).unwrap(), g.point(se, s).unwrap(), energy)
                .unwrap()
                .value;
            let want = closed_form(k, l2, xe == "e1", x, se == "e1", s);
            let swapped = greens(&q, g.point(se, s).unwrap(), g.point(xe, x).unwrap(), energy)
                .unwrap()
                .value;
            assert!((got - swapped).norm() <= tol * got.norm().max(1.0));
            assert!(
                (got - want).norm() <= tol * want.norm().max(1.0),
                "k = {k}, x = {xe}:{x}, x' = {se}:{s}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn lasso_closed_form_complex_k() {
    check_all_cases(C64::new(0.7, 0.1), 1.0, 1e-12);
    check_all_cases(C64::new(3.1, 0.4), 1.6, 1e-12);
}

#[test]
fn lasso_closed_form_real_k_off_scar() {
    check_all_cases(C64::new(2.3, 0.0), 1.0, 1e-12);
}

#[test]
fn lasso_case_labels() {
    let q = common::lasso(1.0);
    let g = q.graph();
    let energy = EnergyPoint::from_wavenumber(C64::new(1.0, 0.2)).unwrap();
    let lead = g.point("e1", 0.5).unwrap();
    let bond = g.point("e2", 0.5).unwrap();
    let case = |x, s| greens(&q, x, s, energy).unwrap().case;
    assert_eq!(case(lead, lead), GreensCase::LeadLead);
    assert_eq!(case(lead, bond), GreensCase::LeadBond);
    assert_eq!(case(bond, lead), GreensCase::BondLead);
    assert_eq!(case(bond, bond), GreensCase::BondBond);
}

#[test]
fn lasso_at_scar_lead_values_are_limits() {
    let q = common::lasso(1.0);
    let g = q.graph();
    let k0 = 2.0 * std::f64::consts::PI;
    let at = EnergyPoint::from_wavenumber(C64::from(k0)).unwrap();
    let near = EnergyPoint::from_wavenumber(C64::from(k0 + 1e-7)).unwrap();
    let lead = g.point("e1", 0.4).unwrap();
    let bond = g.point("e2", 0.3).unwrap();
    for (x, s) in [(lead, lead), (lead, bond), (bond, lead)] {
        let v = greens(&q, x, s, at).unwrap();
        assert!(v.regularized);
        let w = greens(&q, x, s, near).unwrap();
        assert!(!w.regularized);
        assert!((v.value - w.value).norm() < 1e-5, "{:?}: {} vs {}", v.case, v.value, w.value);
    }
    assert!(matches!(greens(&q, bond, bond, at), Err(Error::Pole { .. })));
}
