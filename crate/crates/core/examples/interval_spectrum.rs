// Eigen-wavenumbers, eigenvectors and normalized projectors of a compact
// graph: a Dirichlet interval of length pi and a three-edge star.

use qgraph::graph::GraphSpec;
use qgraph::spectrum::{
    eigenvector_and_normalization, find_eigenvalues, projection_kernel, ScanOptions,
};
use qgraph::{QuantumGraph, VertexCondition};
use std::f64::consts::PI;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("b")
        .bond("e", "a", "b", PI)
        .build()?;
    let q = QuantumGraph::uniform(g, VertexCondition::Dirichlet)?;

    let roots = find_eigenvalues(&q, 0.5, 5.5, &ScanOptions::default())?;
    println!("interval of length pi, Dirichlet ends");
    for r in &roots {
        let root = eigenvector_and_normalization(&q, r.k)?;
        let kernel = projection_kernel(&root, q.graph())?;
        let mid = q.graph().point("e", PI / 3.0)?;
        println!(
            "  k = {:.12}  C = {:.6}  trace P = {:.12}  P(x, x) at pi/3 = {:.6}",
            root.k,
            root.c,
            kernel.trace(),
            kernel.eval(mid, mid)?.re
        );
    }
    if roots.len() != 5 {
        return Err(format!("expected 5 roots, found {}", roots.len()).into());
    }

    // A star with a Neumann-Kirchhoff centre and Dirichlet tips.
    let g = GraphSpec::new()
        .vertex("c")
        .vertex("t1")
        .vertex("t2")
        .vertex("t3")
        .bond("s1", "c", "t1", 1.0)
        .bond("s2", "c", "t2", 1.3)
        .bond("s3", "c", "t3", 1.7)
        .build()?;
    let conditions = vec![
        VertexCondition::NeumannKirchhoff,
        VertexCondition::Dirichlet,
        VertexCondition::Dirichlet,
        VertexCondition::Dirichlet,
    ];
    let star = QuantumGraph::new(g, conditions)?;
    let roots = find_eigenvalues(&star, 0.1, 6.0, &ScanOptions::default())?;
    println!("star with arms 1.0, 1.3, 1.7");
    for r in roots {
        println!("  k = {:.12}  multiplicity {}  residual {:.1e}", r.k, r.multiplicity, r.residual);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
