// An open graph seen as the limit of compact graphs whose leads are cut at
// length `lambda`. The error decays like `exp(-2 Im k lambda)` and, to
// leading order, flips sign between Dirichlet and Neumann cut ends.

use qgraph::graph::GraphSpec;
use qgraph::greens::{greens, EnergyPoint};
use qgraph::linalg::C64;
use qgraph::oracle::{auxiliary_limit_greens, DanglingCondition};
use qgraph::{QuantumGraph, VertexCondition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("v")
        .lead("lead", "v")
        .bond("loop", "v", "v", 1.0)
        .build()?;
    let q = QuantumGraph::uniform(g, VertexCondition::NeumannKirchhoff)?;
    let energy = EnergyPoint::from_wavenumber(C64::new(1.0, 0.3))?;
    let x = q.graph().point("lead", 0.3)?;
    let s = q.graph().point("lead", 0.8)?;
    let exact = greens(&q, x, s, energy)?.value;
    println!("open value {exact:.12}");
    println!(" lambda   Dirichlet error   Neumann error   bound");
    for lambda in [5.0, 10.0, 20.0, 30.0] {
        let d = auxiliary_limit_greens(&q, x, s, energy, lambda, DanglingCondition::Dirichlet)?;
        let n = auxiliary_limit_greens(&q, x, s, energy, lambda, DanglingCondition::Neumann)?;
        println!(
            "  {lambda:5.1}   {:.3e}         {:.3e}       {:.3e}",
            (d - exact).norm(),
            (n - exact).norm(),
            10.0 * (-2.0 * energy.k.im * lambda).exp()
        );
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
