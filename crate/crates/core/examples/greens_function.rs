// Green's functions of compact and open graphs, and the residue at an
// eigenvalue compared with the normalized projector.

use qgraph::graph::GraphSpec;
use qgraph::greens::{greens, EnergyPoint};
use qgraph::linalg::C64;
use qgraph::spectrum::{eigenvector_and_normalization, projection_kernel};
use qgraph::{QuantumGraph, VertexCondition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("b")
        .vertex("c")
        .bond("ab", "a", "b", 1.0)
        .bond("bc", "b", "c", 1.6)
        .bond("ca", "c", "a", 0.8)
        .build()?;
    let conditions = vec![
        VertexCondition::NeumannKirchhoff,
        VertexCondition::delta(2, 1.5),
        VertexCondition::NeumannKirchhoff,
    ];
    let triangle = QuantumGraph::new(g, conditions)?;
    let x = triangle.graph().point("ab", 0.3)?;
    let s = triangle.graph().point("bc", 1.1)?;

    println!("triangle with a delta vertex, G(ab:0.3, bc:1.1; E)");
    for e in [C64::new(2.0, 0.5), C64::new(10.0, 0.1), C64::new(10.0, -0.1)] {
        let v = greens(&triangle, x, s, EnergyPoint::from_energy(e)?)?;
        println!("  E = {e:.2}: G = {:.8}", v.value);
    }

    // Residue at a simple eigenvalue: (E - E_n) G -> P_n.
    let root = eigenvector_and_normalization(&triangle, find_simple_root(&triangle)?)?;
    let kernel = projection_kernel(&root, triangle.graph())?;
    let k = C64::new(root.k + 1e-7, 0.0);
    let g = greens(&triangle, x, s, EnergyPoint::from_wavenumber(k)?)?.value;
    let residue = g * (k * k - C64::from(root.k * root.k));
    println!(
        "residue at k_n = {:.10}: {:.6} vs projector {:.6}",
        root.k,
        residue,
        kernel.eval(x, s)?
    );

    let g = GraphSpec::new()
        .vertex("v")
        .lead("lead", "v")
        .bond("loop", "v", "v", 1.0)
        .build()?;
    let lasso = QuantumGraph::uniform(g, VertexCondition::NeumannKirchhoff)?;
    let energy = EnergyPoint::from_energy(C64::new(1.0, 0.2))?;
    println!("lasso at E = 1 + 0.2i");
    for (xe, xv, se, sv) in [
        ("lead", 0.3, "lead", 0.8),
        ("lead", 0.3, "loop", 0.4),
        ("loop", 0.4, "lead", 0.3),
        ("loop", 0.2, "loop", 0.7),
    ] {
        let v = greens(&lasso, lasso.graph().point(xe, xv)?, lasso.graph().point(se, sv)?, energy)?;
        println!("  {:>9}: G({xe}:{xv}, {se}:{sv}) = {:.8}", v.case.label(), v.value);
    }
    Ok(())
}

fn find_simple_root(q: &QuantumGraph) -> qgraph::Result<f64> {
    use qgraph::spectrum::{find_eigenvalues, ScanOptions};
    let roots = find_eigenvalues(q, 1.0, 6.0, &ScanOptions::default())?;
    roots
        .iter()
        .find(|r| r.multiplicity == 1)
        .map(|r| r.k)
        .ok_or_else(|| qgraph::Error::InvalidArgument("no simple root in range".into()))
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
