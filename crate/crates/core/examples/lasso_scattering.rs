// Scattering matrix and internal amplitudes of a lasso (one lead attached
// to a loop) and of a star with one lead, over a range of wavenumbers.

use qgraph::graph::GraphSpec;
use qgraph::linalg::{unitarity_defect, C64};
use qgraph::scattering::scattering_matrix;
use qgraph::{QuantumGraph, VertexCondition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("v")
        .lead("lead", "v")
        .bond("loop", "v", "v", 1.0)
        .build()?;
    let lasso = QuantumGraph::uniform(g, VertexCondition::NeumannKirchhoff)?;

    println!("lasso, loop length 1");
    println!("       k        sigma                   arg(sigma)   |rho_+|");
    for j in 1..=8 {
        let k = 0.7 * j as f64;
        let r = scattering_matrix(&lasso, C64::from(k))?;
        let s = r.sigma[(0, 0)];
        println!(
            "  {k:6.3}   {:>+9.6}{:>+9.6}i   {:>+9.6}   {:.6}",
            s.re,
            s.im,
            s.arg(),
            r.rho[(0, 0)].norm()
        );
    }

    let g = GraphSpec::new()
        .vertex("c")
        .vertex("t2")
        .vertex("t3")
        .lead("in", "c")
        .bond("b2", "c", "t2", 1.0)
        .bond("b3", "c", "t3", 2f64.sqrt())
        .build()?;
    let star = QuantumGraph::new(
        g,
        vec![
            VertexCondition::NeumannKirchhoff,
            VertexCondition::Dirichlet,
            VertexCondition::Dirichlet,
        ],
    )?;
    let r = scattering_matrix(&star, C64::new(2.0, 0.0))?;
    println!("star with one lead at k = 2: sigma = {:.6}", r.sigma[(0, 0)]);
    println!("  unitarity defect {:.1e}", unitarity_defect(&r.sigma));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
