//! Secular function, eigen-wavenumber search and projection kernels of
//! compact graphs.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Direction, GraphPoint, MetricGraph};
use crate::linalg::{identity, singular_values, smallest_singular_pair, solve, CMatrix, CVector, C64, I};
use crate::qmap::QuantumGraph;
use crate::quadrature::{gauss_legendre, integrate};

/// Nodes per edge used for trace normalization.
pub const QUADRATURE_NODES: usize = 64;

/// Tuning knobs for the real-axis root search.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    /// Grid spacing of the coarse scan. `None` picks `pi / (16 L_total)`.
    pub step: Option<f64>,
    /// Newton stops once the update falls below this.
    pub tol: f64,
    /// Singular values of `I - U` below this count towards the multiplicity.
    pub multiplicity_threshold: f64,
    /// A candidate is accepted when the smallest singular value of `I - U`
    /// is below this.
    pub residual_tol: f64,
    /// Rescan at successively halved steps until the root count settles;
    /// fail if it never does.
    pub check_refinement: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            step: None,
            tol: 1e-10,
            multiplicity_threshold: 1e-6,
            residual_tol: 1e-8,
            check_refinement: true,
        }
    }
}

/// A located eigen-wavenumber before eigenvector extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootLocation {
    pub k: f64,
    pub multiplicity: usize,
    /// Smallest singular value of `I - U(k)`.
    pub residual: f64,
}

/// A simple eigen-wavenumber with its unit eigenvector `b` (`U b = b`) and
/// the positive normalization constant `C` of the eigenfunction built from `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRoot {
    pub k: f64,
    pub b: CVector,
    pub c: f64,
    pub multiplicity: usize,
}

/// `xi(k) = det(I - U(k))`.
pub fn secular(q: &QuantumGraph, k: C64) -> Result<C64> {
    if !q.is_compact() {
        return Err(Error::RequiresCompact("secular function"));
    }
    let u = q.quantum_map(k)?.u;
    Ok((identity(u.nrows()) - u).determinant())
}

/// Matrix-valued function of a real wavenumber whose unit eigenvalues are
/// searched for, together with its derivative.
pub(crate) struct UnitEigenTarget<'a> {
    pub map: &'a (dyn Fn(f64) -> Result<CMatrix> + Sync),
    pub derivative: &'a (dyn Fn(f64) -> Result<CMatrix> + Sync),
}

impl UnitEigenTarget<'_> {
    fn distance(&self, k: f64) -> Result<f64> {
        let m = (self.map)(k)?;
        Ok(singular_values(&(identity(m.nrows()) - m)).first().copied().unwrap_or(f64::INFINITY))
    }
}

/// All eigen-wavenumbers of a compact graph in `[k_min, k_max]`.
pub fn find_eigenvalues(
    q: &QuantumGraph,
    k_min: f64,
    k_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<RootLocation>> {
    if !q.is_compact() {
        return Err(Error::RequiresCompact("eigenvalue search"));
    }
    let map = |k: f64| q.quantum_map(C64::from(k)).map(|s| s.u);
    let derivative = |k: f64| q.quantum_map_derivative(C64::from(k));
    let target = UnitEigenTarget {
        map: &map,
        derivative: &derivative,
    };
    search(&target, q.graph().total_length(), k_min, k_max, opts)
}

/// Number of step halvings tried before giving up with
/// [`Error::ScanTooCoarse`].
const MAX_REFINEMENTS: usize = 4;

pub(crate) fn search(
    target: &UnitEigenTarget,
    total_length: f64,
    k_min: f64,
    k_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<RootLocation>> {
    if !(k_min > 0.0 && k_max > k_min && k_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < k_min < k_max, got [{k_min}, {k_max}]"
        )));
    }
    if total_length <= 0.0 {
        return Ok(Vec::new());
    }
    let step = opts.step.unwrap_or(PI / (16.0 * total_length));
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("scan step must be positive, got {step}")));
    }
    let mut roots = scan(target, k_min, k_max, step, opts)?;
    if !opts.check_refinement {
        return Ok(roots);
    }
    // Halve the step until two consecutive scans agree on the root count.
    let count = |r: &[RootLocation]| r.iter().map(|x| x.multiplicity).sum::<usize>();
    let mut h = step;
    for _ in 0..MAX_REFINEMENTS {
        h /= 2.0;
        let fine = scan(target, k_min, k_max, h, opts)?;
        if count(&roots) == count(&fine) {
            return Ok(fine);
        }
        roots = fine;
    }
    let fine = scan(target, k_min, k_max, h / 2.0, opts)?;
    Err(Error::ScanTooCoarse {
        k_min,
        k_max,
        coarse: count(&roots),
        fine: count(&fine),
    })
}

fn scan(
    target: &UnitEigenTarget,
    k_min: f64,
    k_max: f64,
    step: f64,
    opts: &ScanOptions,
) -> Result<Vec<RootLocation>> {
    let n = ((k_max - k_min) / step).ceil().max(2.0) as usize;
    let h = (k_max - k_min) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| k_min + i as f64 * h).collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&k| target.distance(k))
        .collect::<Result<_>>()?;

    let candidates: Vec<usize> = (0..=n)
        .filter(|&i| {
            let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
            let right = if i < n { values[i + 1] } else { f64::INFINITY };
            values[i] <= left && values[i] <= right
        })
        .collect();

    let refined: Vec<Option<RootLocation>> = candidates
        .par_iter()
        .map(|&i| {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(n)];
            refine(target, grid[i], lo, hi, opts)
        })
        .collect::<Result<_>>()?;

    let mut roots: Vec<RootLocation> = refined
        .into_iter()
        .flatten()
        .filter(|r| r.k >= k_min - 1e-12 && r.k <= k_max + 1e-12)
        .collect();
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    roots.dedup_by(|b, a| (a.k - b.k).abs() <= 1e-7_f64.max(10.0 * opts.tol));
    Ok(roots)
}

/// Newton iteration on `det(I - M(k))` using Jacobi's formula, with the
/// step scaled by the estimated multiplicity. Falls back to golden-section
/// minimization of the smallest singular value when Newton leaves the
/// bracket.
fn refine(
    target: &UnitEigenTarget,
    start: f64,
    lo: f64,
    hi: f64,
    opts: &ScanOptions,
) -> Result<Option<RootLocation>> {
    let mut k = start;
    let mut newton_ok = true;
    for _ in 0..60 {
        let m = (target.map)(k)?;
        let a = identity(m.nrows()) - &m;
        let sv = singular_values(&a);
        if sv[0] == 0.0 {
            break;
        }
        let m_est = if sv[0] < 1e-2 {
            sv.iter().filter(|&&s| s <= 10.0 * sv[0]).count()
        } else {
            1
        };
        let dm = (target.derivative)(k)?;
        let Some(x) = solve(&a, &dm) else { break };
        let tau = x.trace();
        let step = (C64::from(m_est as f64) / tau).re;
        if !step.is_finite() || k + step < lo || k + step > hi {
            newton_ok = false;
            break;
        }
        k += step;
        if step.abs() <= opts.tol * 1e-2 {
            break;
        }
    }
    let mut residual = target.distance(k)?;
    if !newton_ok || residual > opts.residual_tol {
        let (kg, rg) = golden_section(target, lo, hi)?;
        if rg < residual || !newton_ok {
            k = kg;
            residual = rg;
        }
    }
    if residual > opts.residual_tol {
        return Ok(None);
    }
    let m = (target.map)(k)?;
    let sv = singular_values(&(identity(m.nrows()) - m));
    let multiplicity = sv.iter().filter(|&&s| s <= opts.multiplicity_threshold).count().max(1);
    Ok(Some(RootLocation {
        k,
        multiplicity,
        residual,
    }))
}

fn golden_section(target: &UnitEigenTarget, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = target.distance(c)?;
    let mut fd = target.distance(d)?;
    while (b - a).abs() > 1e-14 * b.abs().max(1.0) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = target.distance(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = target.distance(d)?;
        }
    }
    let k = 0.5 * (a + b);
    Ok((k, target.distance(k)?))
}

/// Eigenvector and normalization constant at a simple eigen-wavenumber.
///
/// `C = b^dagger [L + sin(k L) Pi / k] b`, which equals
/// `-i b^dagger U'(k) b` and is the squared norm of the eigenfunction
/// assembled from `b`.
pub fn eigenvector_and_normalization(q: &QuantumGraph, k_n: f64) -> Result<SpectralRoot> {
    if !q.is_compact() {
        return Err(Error::RequiresCompact("eigenvector extraction"));
    }
    let k = C64::from(k_n);
    let u = q.quantum_map(k)?.u;
    let a = identity(u.nrows()) - &u;
    let sv = singular_values(&a);
    let residual = sv.first().copied().unwrap_or(f64::INFINITY);
    if residual > ScanOptions::default().residual_tol {
        return Err(Error::NotARoot { k: k_n, residual });
    }
    let multiplicity = sv
        .iter()
        .filter(|&&s| s <= ScanOptions::default().multiplicity_threshold)
        .count();
    if multiplicity > 1 {
        return Err(Error::DegenerateRoot { k: k_n, multiplicity });
    }
    let (_, b) = smallest_singular_pair(&a);
    let c = if q.all_self_adjoint() {
        normalization_constant(q.graph(), k_n, &b)
    } else {
        let du = q.quantum_map_derivative(k)?;
        ((b.adjoint() * du * &b)[(0, 0)] / I).re
    };
    if !(c > 0.0) {
        return Err(Error::Singular(format!(
            "normalization constant {c} is not positive at k = {k_n}"
        )));
    }
    Ok(SpectralRoot {
        k: k_n,
        b,
        c,
        multiplicity: 1,
    })
}

/// `b^dagger [L + sin(k L) Pi / k] b` over the directed bonds of `graph`.
pub fn normalization_constant(graph: &MetricGraph, k: f64, b: &CVector) -> f64 {
    let lengths = graph.directed_lengths();
    let mut acc = C64::from(0.0);
    for i in 0..lengths.len() {
        let l = lengths[i];
        acc += b[i].conj() * (b[i] * l + b[i ^ 1] * ((k * l).sin() / k));
    }
    acc.re
}

impl SpectralRoot {
    /// `||(I - U(k)) b||`.
    pub fn residual(&self, q: &QuantumGraph) -> Result<f64> {
        let u = q.quantum_map(C64::from(self.k))?.u;
        Ok((&self.b - u * &self.b).norm())
    }
}

/// Projector kernel `P(x, x') = psi(x) conj(psi(x')) / C` onto a simple
/// eigenstate, where on bond `e`
/// `psi_e(x) = b_{e-} exp(-i k x) + b_{e+} exp(i k (x - l_e))`.
#[derive(Debug, Clone)]
pub struct ProjectionKernel {
    pub root: SpectralRoot,
    graph: MetricGraph,
}

pub fn projection_kernel(root: &SpectralRoot, graph: &MetricGraph) -> Result<ProjectionKernel> {
    if root.multiplicity != 1 {
        return Err(Error::DegenerateRoot {
            k: root.k,
            multiplicity: root.multiplicity,
        });
    }
    if root.b.len() != graph.n_directed() || !graph.is_compact() {
        return Err(Error::InvalidArgument(
            "eigenvector does not match the graph".to_string(),
        ));
    }
    Ok(ProjectionKernel {
        root: root.clone(),
        graph: graph.clone(),
    })
}

impl ProjectionKernel {
    /// Unnormalized eigenfunction built from `b`.
    pub fn psi(&self, p: GraphPoint) -> Result<C64> {
        let p = self.graph.locate(p)?;
        Ok(self.psi_unchecked(p))
    }

    fn psi_unchecked(&self, p: GraphPoint) -> C64 {
        let k = self.root.k;
        let l = self.graph.bond_length(p.edge).unwrap();
        let plus = self.graph.directed(p.edge, Direction::Plus).unwrap();
        let minus = self.graph.directed(p.edge, Direction::Minus).unwrap();
        self.root.b[minus] * (-I * k * p.x).exp() + self.root.b[plus] * (I * k * (p.x - l)).exp()
    }

    pub fn eval(&self, x: GraphPoint, x_prime: GraphPoint) -> Result<C64> {
        Ok(self.psi(x)? * self.psi(x_prime)?.conj() / self.root.c)
    }

    /// `sum_e int_0^{l_e} P((e, x), (e, x)) dx`, by Gauss-Legendre on each edge.
    pub fn trace(&self) -> f64 {
        let rule = gauss_legendre(QUADRATURE_NODES);
        self.graph
            .bonds()
            .iter()
            .map(|&e| {
                let l = self.graph.bond_length(e).unwrap();
                integrate(&rule, 0.0, l, |x| {
                    self.psi_unchecked(GraphPoint { edge: e, x }).norm_sqr()
                })
            })
            .sum::<f64>()
            / self.root.c
    }
}
