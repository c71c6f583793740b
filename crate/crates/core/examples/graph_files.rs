// Reading and writing JSON graph descriptions, including general vertex
// conditions given by matching matrices, and the validation errors.

use qgraph::io::{emit_graph_file, parse_graph_file};
use qgraph::linalg::C64;
use qgraph::scattering::scattering_matrix;

const ROBIN_STAR: &str = r#"{
  "name": "robin-star",
  "vertices": [
    { "id": "centre" },
    { "id": "tip", "condition": { "type": "general", "a": [[[0.8, 0]]], "b": [[[0.6, 0]]] } }
  ],
  "edges": [
    { "id": "in", "endpoints": ["centre"], "length": "lead" },
    { "id": "out", "endpoints": ["centre"], "length": "lead" },
    { "id": "arm", "endpoints": ["centre", "tip"], "length": 1.25 }
  ],
  "metadata": { "description": "two leads and a Robin-terminated arm" }
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = parse_graph_file(ROBIN_STAR)?;
    let g = q.graph();
    println!(
        "parsed {} vertices, {} bonds, {} leads",
        g.n_vertices(),
        g.n_bonds(),
        g.n_leads()
    );
    let r = scattering_matrix(&q, C64::from(2.0))?;
    println!("transmission |sigma_01|^2 at k = 2: {:.6}", r.sigma[(0, 1)].norm_sqr());

    let text = emit_graph_file(&q, Some("robin-star"));
    let again = parse_graph_file(&text)?;
    println!("round trip preserved the graph: {}", again == q);

    for (what, bad) in [
        ("negative length", ROBIN_STAR.replace("1.25", "-1.25")),
        ("singular condition", ROBIN_STAR.replace("[[[0.6, 0]]]", "[[[0, 0]]]").replace("[[[0.8, 0]]]", "[[[0, 0]]]")),
        ("unknown vertex", ROBIN_STAR.replace("\"tip\"]", "\"nowhere\"]")),
    ] {
        match parse_graph_file(&bad) {
            Ok(_) => return Err(format!("{what} was accepted").into()),
            Err(e) => println!("{what}: [{}] {e}", e.kind()),
        }
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
