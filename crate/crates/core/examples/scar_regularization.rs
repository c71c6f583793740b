// Perfect scars: real wavenumbers where a bound state lives on the bonds
// without touching the leads. The plain scattering solve is singular there,
// while the projector-regularized one gives the continuous limit.

use qgraph::graph::GraphSpec;
use qgraph::linalg::C64;
use qgraph::scattering::{
    find_scars, regularized_internal, scatter, scattering_matrix, ScarOptions,
};
use qgraph::spectrum::ScanOptions;
use qgraph::{Error, QuantumGraph, VertexCondition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphSpec::new()
        .vertex("v")
        .lead("lead", "v")
        .bond("loop", "v", "v", 1.0)
        .build()?;
    let q = QuantumGraph::uniform(g, VertexCondition::NeumannKirchhoff)?;

    let scars = find_scars(&q, 0.5, 20.0, &ScanOptions::default())?;
    for (root, scar) in &scars {
        println!(
            "scar at k0 = {:.12} (|lambda - 1| = {:.1e}, lead coupling {:.1e})",
            root.k, scar.distance, scar.lead_coupling
        );
    }
    let (_, scar) = scars.first().ok_or("no scar found")?;
    let k0 = scar.k0;

    match scattering_matrix(&q, C64::from(k0)) {
        Err(Error::ScarPresent { distance, .. }) => {
            println!("plain solve refused at k0 (distance {distance:.1e})")
        }
        other => return Err(format!("expected a scar error, got {other:?}").into()),
    }

    let at = scatter(&q, C64::from(k0), &ScarOptions::default())?;
    println!("regularized sigma(k0) = {:.12}", at.sigma[(0, 0)]);
    let (p_rho, q_rho) = regularized_internal(&q, scar)?;
    println!(
        "P rho = [{:.3e}, {:.3e}], Q rho = [{:.6}, {:.6}]",
        p_rho[(0, 0)].norm(),
        p_rho[(1, 0)].norm(),
        q_rho[(0, 0)],
        q_rho[(1, 0)]
    );

    for eps in [1e-2, 1e-4, 1e-6] {
        let near = scatter(&q, C64::from(k0 + eps), &ScarOptions::default())?;
        println!(
            "  k0 + {eps:.0e}: |sigma - sigma(k0)| = {:.2e}{}",
            (near.sigma[(0, 0)] - at.sigma[(0, 0)]).norm(),
            if near.warning.is_some() { "  (near-scar warning)" } else { "" }
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
