//! Shared fixtures and closed-form reference values for the integration tests.
#![allow(dead_code)]

use qgraph::graph::{Direction, GraphSpec};
use qgraph::io::load_graph_file;
use qgraph::linalg::{CMatrix, C64, I};
use qgraph::{QuantumGraph, VertexCondition};
use rand::Rng;

pub fn fixture(name: &str) -> QuantumGraph {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    load_graph_file(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn lasso(l2: f64) -> QuantumGraph {
    let g = GraphSpec::new()
        .vertex("v1")
        .lead("e1", "v1")
        .bond("e2", "v1", "v1", l2)
        .build()
        .unwrap();
    QuantumGraph::uniform(g, VertexCondition::NeumannKirchhoff).unwrap()
}

pub fn star3(l2: f64, l3: f64) -> QuantumGraph {
    let g = GraphSpec::new()
        .vertex("v1")
        .vertex("v2")
        .vertex("v3")
        .lead("e1", "v1")
        .bond("e2", "v1", "v2", l2)
        .bond("e3", "v1", "v3", l3)
        .build()
        .unwrap();
    QuantumGraph::new(
        g,
        vec![
            VertexCondition::NeumannKirchhoff,
            VertexCondition::Dirichlet,
            VertexCondition::Dirichlet,
        ],
    )
    .unwrap()
}

pub fn interval(l: f64) -> QuantumGraph {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("b")
        .bond("e", "a", "b", l)
        .build()
        .unwrap();
    QuantumGraph::uniform(g, VertexCondition::Dirichlet).unwrap()
}

/// `(3z - 1) / (3 - z)` with `z = exp(i k l2)`.
pub fn lasso_sigma(k: f64, l2: f64) -> C64 {
    let z = (I * k * l2).exp();
    (z * 3.0 - 1.0) / (C64::from(3.0) - z)
}

/// `2z / (3 - z)` on both directed copies of the loop.
pub fn lasso_rho(k: f64, l2: f64) -> C64 {
    let z = (I * k * l2).exp();
    z * 2.0 / (C64::from(3.0) - z)
}

fn star_d(k: f64, l2: f64, l3: f64) -> C64 {
    let e2 = (I * 2.0 * k * l2).exp();
    let e3 = (I * 2.0 * k * l3).exp();
    C64::from(3.0) - e2 - e3 - e2 * e3
}

pub fn star3_sigma(k: f64, l2: f64, l3: f64) -> C64 {
    let d = star_d(k, l2, l3);
    d.conj() / d * (I * 2.0 * k * (l2 + l3)).exp()
}

/// Internal amplitudes in the order `(e2+, e3+, e2-, e3-)`, with bonds
/// oriented away from the centre.
pub fn star3_rho(k: f64, l2: f64, l3: f64) -> [C64; 4] {
    let d = star_d(k, l2, l3);
    let one = C64::from(1.0);
    let e2 = (I * 2.0 * k * l2).exp();
    let e3 = (I * 2.0 * k * l3).exp();
    let f = C64::from(2.0) / d;
    [
        f * (I * k * l2).exp() * (one - e3),
        f * (I * k * l3).exp() * (one - e2),
        -f * e2 * (one - e3),
        -f * e3 * (one - e2),
    ]
}

/// Rows of `rho` for the star in the `(e2+, e3+, e2-, e3-)` order.
pub fn star3_rho_rows(q: &QuantumGraph) -> [usize; 4] {
    let g = q.graph();
    let e2 = g.edge_id("e2").unwrap();
    let e3 = g.edge_id("e3").unwrap();
    [
        g.directed(e2, Direction::Plus).unwrap(),
        g.directed(e3, Direction::Plus).unwrap(),
        g.directed(e2, Direction::Minus).unwrap(),
        g.directed(e3, Direction::Minus).unwrap(),
    ]
}

/// Random valid matching data `A = X H`, `B = X` with `H` Hermitian and `X`
/// generic.
pub fn random_general<R: Rng>(rng: &mut R, d: usize) -> VertexCondition {
    let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let x = CMatrix::from_fn(d, d, |_, _| z()) + CMatrix::identity(d, d) * C64::from(2.0);
    let m = CMatrix::from_fn(d, d, |_, _| z());
    let h = (&m + m.adjoint()) * C64::from(0.5);
    VertexCondition::General { a: &x * h, b: x }
}

/// Compact graph with k-dependent conditions at every vertex.
pub fn general_compact<R: Rng>(rng: &mut R) -> QuantumGraph {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("b")
        .vertex("c")
        .vertex("d")
        .bond("ab", "a", "b", 1.0)
        .bond("bc", "b", "c", 1.3)
        .bond("ca", "c", "a", 0.7)
        .bond("cd", "c", "d", 0.9)
        .build()
        .unwrap();
    let robin = VertexCondition::General {
        a: CMatrix::from_element(1, 1, C64::from(0.6f64.cos())),
        b: CMatrix::from_element(1, 1, C64::from(0.6f64.sin())),
    };
    let conditions = vec![
        VertexCondition::delta(2, 0.8),
        random_general(rng, 2),
        VertexCondition::delta(3, -0.5),
        robin,
    ];
    QuantumGraph::new(g, conditions).unwrap()
}
