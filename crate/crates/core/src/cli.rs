//! Command-line front end. The `qgraph` binary forwards to [`run`].
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (pole, scar,
//! degeneracy, singular system), 4 parse or validation error. Failures also
//! print a JSON object `{"error": kind, "message": text}` on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::GraphPoint;
use crate::greens::{greens, EnergyPoint};
use crate::io::load_graph_file;
use crate::linalg::{CMatrix, C64};
use crate::qmap::QuantumGraph;
use crate::scattering::{find_scars, scatter, ScarOptions};
use crate::spectrum::{eigenvector_and_normalization, find_eigenvalues, secular, ScanOptions};

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about = "Spectra, scattering and Green's functions of quantum graphs")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigen-wavenumbers of a compact graph as CSV `k,multiplicity,C`.
    Spectrum {
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Coarse scan step (default pi / (16 total length)).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Scattering matrix and internal amplitudes of an open graph as JSON.
    Scattering {
        graph: PathBuf,
        /// Wavenumber `RE` or `RE,IM`.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, default_value_t = crate::scattering::SCAR_TOL)]
        scar_tol: f64,
    },
    /// Green's function `G(target, source; E)` as JSON.
    Greens {
        graph: PathBuf,
        /// Source point `EDGE:X`.
        #[arg(long)]
        source: String,
        /// Target point `EDGE:X`.
        #[arg(long)]
        target: String,
        /// Energy `RE` or `RE,IM`.
        #[arg(long, allow_hyphen_values = true)]
        energy: String,
    },
    /// Tabulate a quantity on an evenly spaced wavenumber grid as CSV.
    Sweep {
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Imaginary part added to every wavenumber.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Source point for `--quantity greens`.
        #[arg(long)]
        source: Option<String>,
        /// Target point for `--quantity greens`.
        #[arg(long)]
        target: Option<String>,
    },
    /// Perfect scars of an open graph as CSV.
    Scars {
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Sigma,
    Xi,
    Greens,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        "parse" | "condition" => EXIT_PARSE,
        "argument" => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

/// Run the CLI with explicit arguments (including the program name) and
/// output streams. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = writeln!(
                    stderr,
                    "{}",
                    json!({"error": "usage", "message": text.trim_end()})
                );
            }
            return code;
        }
    };
    configure_threads();
    let result = execute(&cli.command).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(e.to_string())),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(
                stderr,
                "{}",
                json!({"error": err.kind(), "message": err.to_string()})
            );
            exit_code(&err)
        }
    }
}

/// Honour an optional `THREADS` environment variable for the rayon pool.
fn configure_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Spectrum {
            graph,
            kmin,
            kmax,
            tol,
            step,
        } => {
            let q = load_graph_file(graph)?;
            let opts = ScanOptions {
                step: *step,
                tol: *tol,
                ..ScanOptions::default()
            };
            let roots = find_eigenvalues(&q, *kmin, *kmax, &opts)?;
            let mut out = String::from("k,multiplicity,C\n");
            for r in roots {
                let c = if r.multiplicity == 1 {
                    eigenvector_and_normalization(&q, r.k)?.c.to_string()
                } else {
                    String::new()
                };
                out.push_str(&format!("{},{},{}\n", r.k, r.multiplicity, c));
            }
            Ok(out)
        }
        Command::Scattering { graph, k, scar_tol } => {
            let q = load_graph_file(graph)?;
            let k = parse_complex(k, "--k")?;
            let opts = ScarOptions {
                tol: *scar_tol,
                ..ScarOptions::default()
            };
            let r = scatter(&q, k, &opts)?;
            let doc = json!({
                "k": complex_json(r.k),
                "sigma": matrix_json(&r.sigma),
                "rho": matrix_json(&r.rho),
                "scar": r.scar.is_some(),
                "regularized": r.regularized,
                "scar_k0": r.scar.as_ref().map(|s| s.k0),
                "warning": r.warning,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::Greens {
            graph,
            source,
            target,
            energy,
        } => {
            let q = load_graph_file(graph)?;
            let source = parse_point(&q, source)?;
            let target = parse_point(&q, target)?;
            let energy = EnergyPoint::from_energy(parse_complex(energy, "--energy")?)?;
            let g = greens(&q, target, source, energy)?;
            let doc = json!({
                "value": complex_json(g.value),
                "case": g.case.label(),
                "energy": complex_json(energy.e),
                "k": complex_json(energy.k),
                "regularized": g.regularized,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::Sweep {
            graph,
            kmin,
            kmax,
            steps,
            quantity,
            eta,
            source,
            target,
        } => {
            let q = load_graph_file(graph)?;
            sweep(&q, *kmin, *kmax, *steps, *quantity, *eta, source.as_deref(), target.as_deref())
        }
        Command::Scars {
            graph,
            kmin,
            kmax,
            step,
        } => {
            let q = load_graph_file(graph)?;
            let opts = ScanOptions {
                step: *step,
                ..ScanOptions::default()
            };
            let scars = find_scars(&q, *kmin, *kmax, &opts)?;
            let mut out = String::from("k0,distance,lead_coupling,bond_coupling\n");
            for (r, s) in scars {
                out.push_str(&format!(
                    "{},{:e},{:e},{:e}\n",
                    r.k, s.distance, s.lead_coupling, s.bond_coupling
                ));
            }
            Ok(out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    q: &QuantumGraph,
    kmin: f64,
    kmax: f64,
    steps: usize,
    quantity: Quantity,
    eta: f64,
    source: Option<&str>,
    target: Option<&str>,
) -> Result<String> {
    if steps == 0 || !(kmax >= kmin) {
        return Err(Error::InvalidArgument(
            "sweep needs --steps >= 1 and --kmax >= --kmin".to_string(),
        ));
    }
    let ks: Vec<C64> = (0..steps)
        .map(|j| {
            let t = if steps == 1 { 0.0 } else { j as f64 / (steps - 1) as f64 };
            C64::new(kmin + t * (kmax - kmin), eta)
        })
        .collect();
    match quantity {
        Quantity::Xi => {
            let rows: Vec<String> = ks
                .par_iter()
                .map(|&k| {
                    let xi = secular(q, k)?;
                    Ok(format!("{},{},{},{}", k.re, xi.re, xi.im, xi.norm()))
                })
                .collect::<Result<_>>()?;
            Ok(csv("k,xi_re,xi_im,xi_abs", rows))
        }
        Quantity::Sigma => {
            let n = q.graph().n_leads();
            let mut header = String::from("k");
            for i in 0..n {
                for j in 0..n {
                    header.push_str(&format!(",sigma_{i}_{j}_re,sigma_{i}_{j}_im"));
                }
            }
            header.push_str(",scar,regularized,near_scar");
            let rows: Vec<String> = ks
                .par_iter()
                .map(|&k| {
                    let r = scatter(q, k, &ScarOptions::default())?;
                    let mut row = format!("{}", k.re);
                    for i in 0..n {
                        for j in 0..n {
                            let z = r.sigma[(i, j)];
                            row.push_str(&format!(",{},{}", z.re, z.im));
                        }
                    }
                    row.push_str(&format!(
                        ",{},{},{}",
                        r.scar.is_some(),
                        r.regularized,
                        r.warning.is_some()
                    ));
                    Ok(row)
                })
                .collect::<Result<_>>()?;
            Ok(csv(&header, rows))
        }
        Quantity::Greens => {
            let (Some(source), Some(target)) = (source, target) else {
                return Err(Error::InvalidArgument(
                    "--quantity greens needs --source and --target".to_string(),
                ));
            };
            let source = parse_point(q, source)?;
            let target = parse_point(q, target)?;
            let rows: Vec<String> = ks
                .par_iter()
                .map(|&k| {
                    let energy = EnergyPoint::from_wavenumber(k)?;
                    match greens(q, target, source, energy) {
                        Ok(g) => Ok(format!(
                            "{},{},{},{},{},ok",
                            k.re, energy.e.re, energy.e.im, g.value.re, g.value.im
                        )),
                        Err(Error::Pole { .. }) => Ok(format!(
                            "{},{},{},NaN,NaN,pole",
                            k.re, energy.e.re, energy.e.im
                        )),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_>>()?;
            Ok(csv("k,E_re,E_im,g_re,g_im,status", rows))
        }
    }
}

fn csv(header: &str, rows: Vec<String>) -> String {
    let mut out = String::with_capacity(rows.len() * 32);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// `RE` or `RE,IM`.
pub fn parse_complex(text: &str, flag: &str) -> Result<C64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("{flag}: cannot parse `{text}`")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidArgument(format!(
            "{flag}: expected RE or RE,IM, got `{text}`"
        ))),
    }
}

/// `EDGE:X`.
pub fn parse_point(q: &QuantumGraph, text: &str) -> Result<GraphPoint> {
    let (edge, x) = text
        .rsplit_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("expected EDGE:X, got `{text}`")))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad coordinate in `{text}`")))?;
    q.graph().point(edge, x)
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("1.5", "--k").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("1e-3, -2", "--k").unwrap(), C64::new(1e-3, -2.0));
        assert!(parse_complex("1,2,3", "--k").is_err());
        assert!(parse_complex("x", "--k").is_err());
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["qgraph", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        let text = String::from_utf8(err).unwrap();
        let doc: Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(doc["error"], "usage");
    }

    #[test]
    fn missing_file_is_a_parse_error() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["qgraph", "spectrum", "/nonexistent.json", "--kmin", "1", "--kmax", "2"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_PARSE);
    }
}
