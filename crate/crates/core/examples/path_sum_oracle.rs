// The Green's function as a sum over scattering paths. Truncating the
// series at `N` bounces converges to the closed form when `Im k > 0`.

use qgraph::graph::GraphSpec;
use qgraph::greens::{greens, EnergyPoint};
use qgraph::linalg::C64;
use qgraph::oracle::path_sum_greens;
use qgraph::{QuantumGraph, VertexCondition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("a")
        .vertex("b")
        .vertex("c")
        .vertex("d")
        .bond("ab", "a", "b", 1.0)
        .bond("bc", "b", "c", 1.3)
        .bond("ca", "c", "a", 0.7)
        .bond("cd", "c", "d", 0.9)
        .build()?;
    let q = QuantumGraph::new(
        g,
        vec![
            VertexCondition::NeumannKirchhoff,
            VertexCondition::delta(2, 0.8),
            VertexCondition::NeumannKirchhoff,
            VertexCondition::Dirichlet,
        ],
    )?;
    let energy = EnergyPoint::from_wavenumber(C64::new(4.0, 0.5))?;
    let x = q.graph().point("ab", 0.2)?;
    let s = q.graph().point("cd", 0.6)?;
    let exact = greens(&q, x, s, energy)?.value;
    println!("closed form: {exact:.12}");
    for n in [1, 2, 5, 10, 20, 40, 80] {
        let v = path_sum_greens(&q, x, s, energy, n)?;
        println!("  N = {n:3}: error {:.3e}", (v - exact).norm());
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
