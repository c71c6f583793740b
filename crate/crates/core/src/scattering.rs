//! Graph scattering matrix, internal amplitudes, and their evaluation at
//! perfect scars (bound states in the continuum).

use crate::error::{Error, Result};
use crate::linalg::{
    complement_basis, eigenvalues, identity, outer, singular_values, smallest_singular_pair,
    solve, CMatrix, CVector, C64, I,
};
use crate::qmap::{blocks, QuantumGraph, QuantumMapSnapshot};
use crate::spectrum::{search, RootLocation, ScanOptions, UnitEigenTarget};

/// Eigenvalues of `U_BB` within this distance of one are treated as scars.
pub const SCAR_TOL: f64 = 1e-8;
/// Eigenvalues within this distance (but outside [`SCAR_TOL`]) trigger a
/// conditioning warning.
pub const NEAR_SCAR_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarOptions {
    pub tol: f64,
    pub near_tol: f64,
}

impl Default for ScarOptions {
    fn default() -> Self {
        Self {
            tol: SCAR_TOL,
            near_tol: NEAR_SCAR_TOL,
        }
    }
}

/// Scar eigenvector `b` of `U_BB(k0)` with the projectors `P = b b^dagger`
/// and `Q = I - P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScarBasis {
    pub k0: f64,
    pub b: CVector,
    pub p: CMatrix,
    pub q: CMatrix,
    /// `|lambda - 1|` for the eigenvalue of `U_BB` closest to one.
    pub distance: f64,
    /// `||U_LB b||`.
    pub lead_coupling: f64,
    /// `||b^dagger U_BL||`.
    pub bond_coupling: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringResult {
    pub k: C64,
    pub sigma: CMatrix,
    pub rho: CMatrix,
    /// Whether `sigma` and `rho` come from the projector-regularized solve.
    pub regularized: bool,
    pub scar: Option<ScarBasis>,
    /// Set when `U_BB` has an eigenvalue close to (but not at) one.
    pub warning: Option<String>,
}

fn require_open(q: &QuantumGraph, what: &'static str) -> Result<()> {
    if q.is_compact() {
        Err(Error::RequiresOpen(what))
    } else {
        Ok(())
    }
}

fn closest_unit_eigenvalue(u_bb: &CMatrix) -> f64 {
    eigenvalues(u_bb)
        .iter()
        .map(|l| (l - C64::from(1.0)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// `sigma = U_LL + U_LB (I - U_BB)^{-1} U_BL` and `rho = (I - U_BB)^{-1} U_BL`.
///
/// Fails with [`Error::ScarPresent`] when `U_BB` has an eigenvalue within
/// [`SCAR_TOL`] of one at real `k`.
pub fn scattering_matrix(q: &QuantumGraph, k: C64) -> Result<ScatteringResult> {
    require_open(q, "scattering matrix")?;
    let snap = q.quantum_map(k)?;
    let u_bb = snap.u_bb();
    let distance = closest_unit_eigenvalue(&u_bb);
    if distance <= SCAR_TOL {
        return Err(Error::ScarPresent { k: k.re, distance });
    }
    let mut result = plain_solve(&snap)?;
    if distance <= NEAR_SCAR_TOL {
        result.warning = Some(near_scar_warning(distance));
    }
    Ok(result)
}

fn near_scar_warning(distance: f64) -> String {
    format!("U_BB has an eigenvalue at distance {distance:e} from one; results are ill-conditioned")
}

fn plain_solve(snap: &QuantumMapSnapshot) -> Result<ScatteringResult> {
    let u_bb = snap.u_bb();
    let a = identity(u_bb.nrows()) - &u_bb;
    let rho = solve(&a, &snap.u_bl())
        .ok_or_else(|| Error::Singular(format!("I - U_BB at k = {}", snap.k)))?;
    let sigma = snap.u_ll() + snap.u_lb() * &rho;
    Ok(ScatteringResult {
        k: snap.k,
        sigma,
        rho,
        regularized: false,
        scar: None,
        warning: None,
    })
}

/// Internal amplitudes alone; see [`scattering_matrix`].
pub fn internal_amplitudes(q: &QuantumGraph, k: C64) -> Result<CMatrix> {
    scattering_matrix(q, k).map(|r| r.rho)
}

/// Look for a unit eigenvalue of `U_BB(k)` within `tol` of one.
pub fn detect_scar(q: &QuantumGraph, k: f64, tol: f64) -> Result<Option<ScarBasis>> {
    require_open(q, "scar detection")?;
    let snap = q.quantum_map(C64::from(k))?;
    scar_from_snapshot(&snap, tol)
}

fn scar_from_snapshot(snap: &QuantumMapSnapshot, tol: f64) -> Result<Option<ScarBasis>> {
    let u_bb = snap.u_bb();
    let close: Vec<f64> = eigenvalues(&u_bb)
        .iter()
        .map(|l| (l - C64::from(1.0)).norm())
        .filter(|&d| d <= tol)
        .collect();
    if close.is_empty() {
        return Ok(None);
    }
    let k = snap.k.re;
    let a = identity(u_bb.nrows()) - &u_bb;
    let small = singular_values(&a).iter().filter(|&&s| s <= tol.max(1e-10)).count();
    let dimension = close.len().max(small);
    if dimension > 1 {
        return Err(Error::DegenerateScar { k, dimension });
    }
    let (_, b) = smallest_singular_pair(&a);
    let p = outer(&b);
    let qm = identity(b.len()) - &p;
    Ok(Some(ScarBasis {
        k0: k,
        lead_coupling: (snap.u_lb() * &b).norm(),
        bond_coupling: (b.adjoint() * snap.u_bl()).norm(),
        distance: close.iter().copied().fold(f64::INFINITY, f64::min),
        b,
        p,
        q: qm,
    }))
}

/// `Y_Q^{-1} = V (V^dagger (I - U_BB) V)^{-1} V^dagger`, with `V` an
/// orthonormal basis of the complement of `b`.
pub fn y_q_inverse(u_bb: &CMatrix, b: &CVector) -> Result<CMatrix> {
    let n = u_bb.nrows();
    let v = complement_basis(b);
    let reduced = v.adjoint() * (identity(n) - u_bb) * &v;
    let sv = singular_values(&reduced);
    if let (Some(&lo), Some(&hi)) = (sv.first(), sv.last()) {
        if lo <= 1e-12 * hi.max(1.0) {
            return Err(Error::Singular(
                "Q-restricted system is singular; the scar may be degenerate".to_string(),
            ));
        }
    }
    let inner = solve(&reduced, &v.adjoint())
        .ok_or_else(|| Error::Singular("Q-restricted system".to_string()))?;
    Ok(v * inner)
}

/// Scattering matrix at a scar: `sigma(k0) = U_LL + U_LB Y_Q^{-1} U_BL`,
/// with `rho(k0) = P rho + Q rho` from [`regularized_internal`].
pub fn regularized_scattering(q: &QuantumGraph, scar: &ScarBasis) -> Result<ScatteringResult> {
    require_open(q, "regularized scattering")?;
    let snap = q.quantum_map(C64::from(scar.k0))?;
    let y = y_q_inverse(&snap.u_bb(), &scar.b)?;
    let sigma = snap.u_ll() + snap.u_lb() * &y * snap.u_bl();
    let (p_rho, q_rho) = internal_parts(q, &snap, scar, &y)?;
    Ok(ScatteringResult {
        k: snap.k,
        sigma,
        rho: p_rho + q_rho,
        regularized: true,
        scar: Some(scar.clone()),
        warning: None,
    })
}

/// `(P rho(k0), Q rho(k0))`: the continuous extension of the internal
/// amplitudes split along the scar direction.
pub fn regularized_internal(q: &QuantumGraph, scar: &ScarBasis) -> Result<(CMatrix, CMatrix)> {
    require_open(q, "regularized internal amplitudes")?;
    let snap = q.quantum_map(C64::from(scar.k0))?;
    let y = y_q_inverse(&snap.u_bb(), &scar.b)?;
    internal_parts(q, &snap, scar, &y)
}

fn internal_parts(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    y: &CMatrix,
) -> Result<(CMatrix, CMatrix)> {
    let q_rho = y * snap.u_bl();
    let p_rho = if q.all_k_independent() {
        p_rho_k_independent(q, snap, scar, y)?
    } else {
        p_rho_general(q, snap, scar, y)?
    };
    Ok((p_rho, q_rho))
}

/// `P rho = -P L (I + U_BB Y) U_BL / (b^dagger L b)` for wavenumber-independent
/// vertex scattering.
fn p_rho_k_independent(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    y: &CMatrix,
) -> Result<CMatrix> {
    let lengths = q.graph().directed_lengths();
    let n = lengths.len();
    let l = CMatrix::from_fn(n, n, |i, j| if i == j { C64::from(lengths[i]) } else { C64::from(0.0) });
    let denom = (scar.b.adjoint() * &l * &scar.b)[(0, 0)].re;
    check_denominator(denom)?;
    let inner = (identity(n) + snap.u_bb() * y) * snap.u_bl();
    Ok(-(&scar.p * l * inner) / C64::from(denom))
}

/// Full expression for wavenumber-dependent self-adjoint conditions:
/// `P [ (1/2i) Pi e^{-ikL} - kL - (kL U_BB + Pi (e^{ikL} - e^{-ikL} U_BB)/(2i)) Y ] U_BL`
/// divided by `b^dagger [kL + sin(kL) Pi] b`.
fn p_rho_general(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    y: &CMatrix,
) -> Result<CMatrix> {
    if !q.all_self_adjoint() {
        return p_rho_from_derivative(q, snap, scar, y);
    }
    let k = scar.k0;
    let (l, pi) = q.graph().length_and_permutation();
    let n = l.nrows();
    let lengths = q.graph().directed_lengths();
    let e_plus = CMatrix::from_fn(n, n, |i, j| {
        if i == j { (I * k * lengths[i]).exp() } else { C64::from(0.0) }
    });
    let e_minus = CMatrix::from_fn(n, n, |i, j| {
        if i == j { (-I * k * lengths[i]).exp() } else { C64::from(0.0) }
    });
    let sin_kl = CMatrix::from_fn(n, n, |i, j| {
        if i == j { C64::from((k * lengths[i]).sin()) } else { C64::from(0.0) }
    });
    let kl = &l * C64::from(k);
    let u_bb = snap.u_bb();
    let two_i = C64::new(0.0, 2.0);
    let denom = (scar.b.adjoint() * (&kl + &sin_kl * &pi) * &scar.b)[(0, 0)].re;
    check_denominator(denom)?;
    let first = &pi * &e_minus / two_i - &kl;
    let second = (&kl * &u_bb + &pi * (&e_plus - &e_minus * &u_bb) / two_i) * y;
    Ok(&scar.p * (first - second) * snap.u_bl() / C64::from(denom))
}

/// `P rho = -b b^dagger (U'_BL + U'_BB Y U_BL) / (b^dagger U'_BB b)`, using
/// the assembled derivative of the quantum map.
pub(crate) fn p_rho_from_derivative(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    y: &CMatrix,
) -> Result<CMatrix> {
    let du = q.quantum_map_derivative(snap.k)?;
    let (du_bb, du_bl, _, _) = blocks(&du, snap.n_directed);
    let b = &scar.b;
    let denom = (b.adjoint() * &du_bb * b)[(0, 0)];
    check_denominator(denom.norm())?;
    Ok(-(&scar.p * (du_bl + du_bb * y * snap.u_bl())) / denom)
}

/// Outgoing amplitude map `U_LB (I - U_BB)^{-1}` continued to a scar:
/// `U_LB Y - (U'_LB + U_LB Y U'_BB) b b^dagger / (b^dagger U'_BB b)`.
pub(crate) fn regularized_outgoing(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    y: &CMatrix,
) -> Result<CMatrix> {
    let du = q.quantum_map_derivative(snap.k)?;
    let (du_bb, _, du_lb, _) = blocks(&du, snap.n_directed);
    let b = &scar.b;
    let denom = (b.adjoint() * &du_bb * b)[(0, 0)];
    check_denominator(denom.norm())?;
    let u_lb = snap.u_lb();
    let correction = (du_lb + &u_lb * y * du_bb) * &scar.p / denom;
    Ok(u_lb * y - correction)
}

fn check_denominator(d: f64) -> Result<()> {
    if d.abs() <= 1e-12 {
        Err(Error::Singular(format!(
            "scar normalization denominator {d:e} vanishes"
        )))
    } else {
        Ok(())
    }
}

/// Evaluate the scattering matrix at any `k`, regularizing at scars and
/// flagging near-scar conditioning.
pub fn scatter(q: &QuantumGraph, k: C64, opts: &ScarOptions) -> Result<ScatteringResult> {
    require_open(q, "scattering matrix")?;
    let snap = q.quantum_map(k)?;
    if k.im == 0.0 {
        if let Some(scar) = scar_from_snapshot(&snap, opts.tol)? {
            return regularized_scattering(q, &scar);
        }
    }
    let mut result = plain_solve(&snap)?;
    let distance = closest_unit_eigenvalue(&snap.u_bb());
    if distance <= opts.near_tol {
        result.warning = Some(near_scar_warning(distance));
    }
    Ok(result)
}

/// Scar wavenumbers of an open graph in `[k_min, k_max]`, i.e. real zeros of
/// `det(I - U_BB(k))`, each returned with its verified scar basis.
pub fn find_scars(
    q: &QuantumGraph,
    k_min: f64,
    k_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<(RootLocation, ScarBasis)>> {
    require_open(q, "scar search")?;
    let nb = q.graph().n_directed();
    let map = |k: f64| q.quantum_map(C64::from(k)).map(|s| s.u_bb());
    let derivative = |k: f64| {
        q.quantum_map_derivative(C64::from(k))
            .map(|d| d.view((0, 0), (nb, nb)).into_owned())
    };
    let target = UnitEigenTarget {
        map: &map,
        derivative: &derivative,
    };
    let roots = search(&target, q.graph().total_length(), k_min, k_max, opts)?;
    roots
        .into_iter()
        .map(|r| {
            let snap = q.quantum_map(C64::from(r.k))?;
            let tol = opts.residual_tol.max(SCAR_TOL);
            match scar_from_snapshot(&snap, tol)? {
                Some(scar) => Ok((r, scar)),
                None => Err(Error::Singular(format!(
                    "root at k = {} of det(I - U_BB) has no unit eigenvalue",
                    r.k
                ))),
            }
        })
        .collect()
}
