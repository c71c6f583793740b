//! Coefficient forms, auxiliary graphs and the reference oracles on small
//! graphs with known structure.

mod common;

use qgraph::graph::GraphSpec;
use qgraph::greens::{
    auxiliary_graph, direct_term, greens, greens_coefficients, CoefficientForm, EnergyPoint,
};
use qgraph::linalg::C64;
use qgraph::oracle::{auxiliary_limit_greens, path_sum_greens, DanglingCondition};
use qgraph::spectrum::{find_eigenvalues, ScanOptions};
use qgraph::{QuantumGraph, VertexCondition};
use std::f64::consts::PI;

/// Two unit bonds `a - m - b`, Dirichlet at the ends, Neumann-Kirchhoff in
/// the middle.
fn chain() -> QuantumGraph {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("m")
        .vertex("b")
        .bond("left", "a", "m", 1.0)
        .bond("right", "m", "b", 1.0)
        .build()
        .unwrap();
    QuantumGraph::new(
        g,
        vec![
            VertexCondition::Dirichlet,
            VertexCondition::NeumannKirchhoff,
            VertexCondition::Dirichlet,
        ],
    )
    .unwrap()
}

#[test]
fn chain_spectrum_is_that_of_an_interval() {
    let roots = find_eigenvalues(&chain(), 0.5, 10.0, &ScanOptions::default()).unwrap();
    let ks: Vec<f64> = roots.iter().map(|r| r.k).collect();
    let expected: Vec<f64> = (1..=6).map(|n| n as f64 * PI / 2.0).collect();
    assert_eq!(ks.len(), expected.len(), "{ks:?}");
    for (k, e) in ks.iter().zip(&expected) {
        assert!((k - e).abs() < 1e-10);
    }
}

#[test]
fn coefficient_forms_agree_and_respect_mirror_symmetry() {
    let q = chain();
    let energy = EnergyPoint::from_wavenumber(C64::new(1.0, 0.3)).unwrap();
    for x in [0.1, 0.5, 0.83] {
        let source = q.graph().point("left", x).unwrap();
        let sigma = greens_coefficients(&q, source, energy, CoefficientForm::Sigma).unwrap();
        let resolvent = greens_coefficients(&q, source, energy, CoefficientForm::Resolvent).unwrap();
        assert!((sigma.0 - resolvent.0).norm() < 1e-12);
        assert!((sigma.1 - resolvent.1).norm() < 1e-12);
    }
    // A source at the middle of a Dirichlet interval sends equal waves to
    // both ends.
    let interval = common::interval(2.0);
    let mid = interval.graph().point("e", 1.0).unwrap();
    let (a_t, a_h) =
        greens_coefficients(&interval, mid, energy, CoefficientForm::Resolvent).unwrap();
    assert!((a_t - a_h).norm() < 1e-12);
}

#[test]
fn auxiliary_graph_turns_a_bond_into_two_leads() {
    let q = common::star3(1.0, 1.5);
    let e2 = q.graph().edge_id("e2").unwrap();
    let (aux, t, h) = auxiliary_graph(&q, e2).unwrap();
    assert_eq!(aux.graph().n_bonds(), 1);
    assert_eq!(aux.graph().n_leads(), 3);
    assert!(aux.graph().edge(t).is_lead() && aux.graph().edge(h).is_lead());
    assert_eq!(aux.conditions(), q.conditions());
}

#[test]
fn greens_tends_to_direct_term_deep_in_the_complex_plane() {
    let q = chain();
    let energy = EnergyPoint::from_wavenumber(C64::new(2.0, 40.0)).unwrap();
    let x = q.graph().point("left", 0.5).unwrap();
    let s = q.graph().point("left", 0.52).unwrap();
    let g = greens(&q, x, s, energy).unwrap().value;
    let d = direct_term(energy.k, 0.5, 0.52);
    assert!((g - d).norm() < 1e-12 * d.norm().max(1e-30) + 1e-15);
}

#[test]
fn path_sum_converges_on_open_graphs() {
    let q = common::star3(1.0, std::f64::consts::SQRT_2);
    let energy = EnergyPoint::from_wavenumber(C64::new(3.0, 0.4)).unwrap();
    let x = q.graph().point("e1", 0.7).unwrap();
    let s = q.graph().point("e3", 0.4).unwrap();
    let exact = greens(&q, x, s, energy).unwrap().value;
    let errors: Vec<f64> = [5, 20, 80]
        .iter()
        .map(|&n| (path_sum_greens(&q, x, s, energy, n).unwrap() - exact).norm())
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-12);
}

#[test]
fn long_lead_limit_rejects_short_truncation() {
    let q = common::lasso(1.0);
    let energy = EnergyPoint::from_wavenumber(C64::new(1.0, 0.3)).unwrap();
    let x = q.graph().point("e1", 5.0).unwrap();
    assert!(auxiliary_limit_greens(&q, x, x, energy, 4.0, DanglingCondition::Dirichlet).is_err());
    let v = auxiliary_limit_greens(&q, x, x, energy, 40.0, DanglingCondition::Neumann).unwrap();
    let exact = greens(&q, x, x, energy).unwrap().value;
    assert!((v - exact).norm() < 1e-6);
}

#[test]
fn dangling_choice_drops_out_at_the_convergence_rate() {
    let q = common::lasso(1.0);
    let energy = EnergyPoint::from_wavenumber(C64::new(1.0, 0.3)).unwrap();
    let x = q.graph().point("e1", 0.3).unwrap();
    let s = q.graph().point("e1", 0.8).unwrap();
    let gap = |lambda: f64| {
        let d = auxiliary_limit_greens(&q, x, s, energy, lambda, DanglingCondition::Dirichlet);
        let n = auxiliary_limit_greens(&q, x, s, energy, lambda, DanglingCondition::Neumann);
        (d.unwrap() - n.unwrap()).norm().ln()
    };
    let slope = (gap(30.0) - gap(10.0)) / 20.0;
    assert!((slope + 0.6).abs() < 0.12, "slope {slope}");
}
