//! Green's functions `G(x, x'; E)` of compact and open graphs, solving
//! `(E + d^2/dx^2) G = delta(x - x')` with the vertex conditions in `x`.
//!
//! On every bond the response to the source is a pair of plane waves whose
//! amplitudes come from one linear solve with `I - U` (or `I - U_BB` for open
//! graphs); on leads only outgoing waves appear. The free kernel
//! `exp(i k |x - x'|) / (2 i k)` is added when both points share an edge.

use crate::error::{Error, Result};
use crate::graph::{Direction, EdgeId, GraphPoint};
use crate::linalg::{identity, solve, CMatrix, CVector, C64, I};
use crate::qmap::{QuantumGraph, QuantumMapSnapshot};
use crate::scattering::{
    regularized_outgoing, regularized_scattering, scattering_matrix, y_q_inverse, ScarBasis,
    SCAR_TOL,
};
use crate::spectrum::secular;

/// A complex energy together with its wavenumber `k`, `k^2 = E`, taken with
/// `Im k >= 0` so that every plane wave `exp(i k x)` on a lead decays or
/// stays bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    pub e: C64,
    pub k: C64,
}

impl EnergyPoint {
    /// Energy `E` with `Re E > 0`. For real `E` the wavenumber is the
    /// positive root (the limit from above the real axis).
    pub fn from_energy(e: C64) -> Result<Self> {
        if !(e.re > 0.0 && e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "energy must have positive real part, got {e}"
            )));
        }
        let mut k = e.sqrt();
        if k.im < 0.0 {
            k = -k;
        }
        Ok(Self { e, k })
    }

    pub fn from_wavenumber(k: C64) -> Result<Self> {
        if k == C64::from(0.0) {
            return Err(Error::ZeroWavenumber);
        }
        if k.im < 0.0 || !k.re.is_finite() || !k.im.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "wavenumber must have non-negative imaginary part, got {k}"
            )));
        }
        Ok(Self { e: k * k, k })
    }

    /// The point at `conj(E)`, i.e. `k -> -conj(k)`.
    pub fn conj(&self) -> Self {
        Self {
            e: self.e.conj(),
            k: -self.k.conj(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.k.im == 0.0
    }
}

/// Which closed form produced a value; open-graph labels read
/// `<kind of x>-<kind of x'>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensCase {
    Compact,
    LeadLead,
    LeadBond,
    BondLead,
    BondBond,
}

impl GreensCase {
    pub fn label(self) -> &'static str {
        match self {
            GreensCase::Compact => "compact",
            GreensCase::LeadLead => "lead-lead",
            GreensCase::LeadBond => "lead-bond",
            GreensCase::BondLead => "bond-lead",
            GreensCase::BondBond => "bond-bond",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue {
    pub value: C64,
    pub case: GreensCase,
    pub target: GraphPoint,
    pub source: GraphPoint,
    pub energy: EnergyPoint,
    /// True when the value was obtained through the scar-regularized path.
    pub regularized: bool,
}

/// Free-space kernel `exp(i k |x - x'|) / (2 i k)`.
pub fn direct_term(k: C64, x: f64, x_prime: f64) -> C64 {
    (I * k * (x - x_prime).abs()).exp() / (C64::new(0.0, 2.0) * k)
}

/// Amplitudes injected by a unit source at `source`: on a bond the waves
/// arriving at the head (`+`) and tail (`-`), on a lead the wave arriving
/// at the vertex.
pub(crate) fn source_vector(q: &QuantumGraph, source: GraphPoint, k: C64) -> CVector {
    let g = q.graph();
    let mut s = CVector::zeros(g.dim());
    let two_ik = C64::new(0.0, 2.0) * k;
    match g.bond_length(source.edge) {
        Some(l) => {
            s[g.directed(source.edge, Direction::Plus).unwrap()] = (I * k * (l - source.x)).exp() / two_ik;
            s[g.directed(source.edge, Direction::Minus).unwrap()] = (I * k * source.x).exp() / two_ik;
        }
        None => s[g.lead_index(source.edge).unwrap()] = (I * k * source.x).exp() / two_ik,
    }
    s
}

/// Field at `x` produced by scattered amplitudes `c` (bond entries:
/// `c_- exp(-ikx) + c_+ exp(ik(x - l))`, lead entries: `c exp(ikx)`).
pub(crate) fn field_from_amplitudes(q: &QuantumGraph, c: &CVector, x: GraphPoint, k: C64) -> C64 {
    let g = q.graph();
    match g.bond_length(x.edge) {
        Some(l) => {
            let plus = g.directed(x.edge, Direction::Plus).unwrap();
            let minus = g.directed(x.edge, Direction::Minus).unwrap();
            c[minus] * (-I * k * x.x).exp() + c[plus] * (I * k * (x.x - l)).exp()
        }
        None => c[g.lead_index(x.edge).unwrap()] * (I * k * x.x).exp(),
    }
}

fn direct_if_same_edge(x: GraphPoint, source: GraphPoint, k: C64) -> C64 {
    if x.edge == source.edge {
        direct_term(k, x.x, source.x)
    } else {
        C64::from(0.0)
    }
}

/// Open graph with the bond `e` replaced by two leads, `T` at its tail and
/// `H` at its head. Returns the graph and the ids of `T` and `H`.
pub fn auxiliary_graph(q: &QuantumGraph, e: EdgeId) -> Result<(QuantumGraph, EdgeId, EdgeId)> {
    let (g, t, h) = q.graph().cut_bond(e)?;
    Ok((QuantumGraph::new(g, q.conditions().to_vec())?, t, h))
}

/// Two routes to the incoming amplitudes on the excited bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientForm {
    /// Glue the scattering solutions of the auxiliary graph at the source.
    Sigma,
    /// Entries of `(I - U)^{-1}` applied to the source amplitudes.
    Resolvent,
}

/// `(a_T, a_H)`: amplitudes of the waves on the excited bond running into
/// its tail and head vertex, for a unit source at `source`.
pub fn greens_coefficients(
    q: &QuantumGraph,
    source: GraphPoint,
    energy: EnergyPoint,
    form: CoefficientForm,
) -> Result<(C64, C64)> {
    if !q.is_compact() {
        return Err(Error::RequiresCompact("Green's function coefficients"));
    }
    let source = q.graph().locate(source)?;
    let l = q
        .graph()
        .bond_length(source.edge)
        .ok_or_else(|| Error::NotABond(q.graph().edge(source.edge).name.clone()))?;
    let k = energy.k;
    match form {
        CoefficientForm::Resolvent => {
            let snap = q.quantum_map(k)?;
            let n = snap.u.nrows();
            let s = source_vector(q, source, k);
            let beta = solve(&(identity(n) - &snap.u), &CMatrix::from_column_slice(n, 1, s.as_slice()))
                .ok_or_else(|| pole_error(k))?;
            let g = q.graph();
            Ok((
                beta[(g.directed(source.edge, Direction::Minus).unwrap(), 0)],
                beta[(g.directed(source.edge, Direction::Plus).unwrap(), 0)],
            ))
        }
        CoefficientForm::Sigma => {
            let (aux, t, h) = auxiliary_graph(q, source.edge)?;
            let sigma = scattering_matrix(&aux, k)?.sigma;
            let ti = aux.graph().lead_slot(t).unwrap();
            let hi = aux.graph().lead_slot(h).unwrap();
            let (s_tt, s_th, s_ht, s_hh) = (sigma[(ti, ti)], sigma[(ti, hi)], sigma[(hi, ti)], sigma[(hi, hi)]);
            let x = source.x;
            let f1 = (-I * k * x).exp();
            let g1 = (I * k * x).exp();
            let f2 = (-I * k * (l - x)).exp();
            let g2 = (I * k * (l - x)).exp();
            let ik = I * k;
            // Continuity and unit derivative jump at the source.
            let m11 = s_ht * g2 - f1 - s_tt * g1;
            let m12 = f2 + s_hh * g2 - s_th * g1;
            let m21 = ik * (f1 - s_ht * g2 - s_tt * g1);
            let m22 = ik * (f2 - s_hh * g2 - s_th * g1);
            let det = m11 * m22 - m12 * m21;
            if det.norm() == 0.0 {
                return Err(pole_error(k));
            }
            Ok((-m12 / det, m11 / det))
        }
    }
}

fn pole_error(k: C64) -> Error {
    Error::Pole { nearest_k: k.re.abs() }
}

/// Green's function of a compact graph.
///
/// At real energies on the spectrum (`|xi(k)| < 1e-8`) this refuses with
/// [`Error::Pole`].
pub fn greens_compact(
    q: &QuantumGraph,
    x: GraphPoint,
    source: GraphPoint,
    energy: EnergyPoint,
) -> Result<GreensValue> {
    if !q.is_compact() {
        return Err(Error::RequiresCompact("compact Green's function"));
    }
    let x = q.graph().locate(x)?;
    let source = q.graph().locate(source)?;
    let k = energy.k;
    if energy.is_real() && secular(q, k)?.norm() < 1e-8 {
        return Err(pole_error(k));
    }
    let snap = q.quantum_map(k)?;
    let value = regular_value(q, &snap, x, source)?;
    Ok(GreensValue {
        value,
        case: GreensCase::Compact,
        target: x,
        source,
        energy,
        regularized: false,
    })
}

/// Solve for the scattered amplitudes and evaluate at `x`:
/// `c_B = (I - U_BB)^{-1} (U_BB s_B + U_BL s_L)`, `c_L = U_LB (c_B + s_B) + U_LL s_L`.
fn regular_value(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    x: GraphPoint,
    source: GraphPoint,
) -> Result<C64> {
    let k = snap.k;
    let nb = snap.n_directed;
    let s = source_vector(q, source, k);
    let s_b = s.rows(0, nb).into_owned();
    let s_l = s.rows(nb, snap.n_leads).into_owned();
    let rhs = snap.u_bb() * &s_b + snap.u_bl() * &s_l;
    let a = identity(nb) - snap.u_bb();
    let c_b = solve(&a, &CMatrix::from_column_slice(nb, 1, rhs.as_slice())).ok_or_else(|| pole_error(k))?;
    let c_b = CVector::from_column_slice(c_b.as_slice());
    let c_l = snap.u_lb() * (&c_b + &s_b) + snap.u_ll() * &s_l;
    let mut c = CVector::zeros(nb + snap.n_leads);
    c.rows_mut(0, nb).copy_from(&c_b);
    c.rows_mut(nb, snap.n_leads).copy_from(&c_l);
    Ok(direct_if_same_edge(x, source, k) + field_from_amplitudes(q, &c, x, k))
}

fn open_case(q: &QuantumGraph, x: GraphPoint, source: GraphPoint) -> GreensCase {
    let g = q.graph();
    match (g.edge(x.edge).is_lead(), g.edge(source.edge).is_lead()) {
        (true, true) => GreensCase::LeadLead,
        (true, false) => GreensCase::LeadBond,
        (false, true) => GreensCase::BondLead,
        (false, false) => GreensCase::BondBond,
    }
}

/// Green's function of an open graph.
///
/// At a real wavenumber carrying a perfect scar the cases with at least one
/// point on a lead are evaluated through the projector-regularized
/// amplitudes. The mixed lead/bond cases at a scar rely on the continuous
/// extension of `(I - U_BB)^{-1}` contracted with the lead couplings. With
/// both points on bonds the scar is a genuine pole and [`Error::Pole`] is
/// returned.
pub fn greens_open(
    q: &QuantumGraph,
    x: GraphPoint,
    source: GraphPoint,
    energy: EnergyPoint,
) -> Result<GreensValue> {
    if q.is_compact() {
        return Err(Error::RequiresOpen("open Green's function"));
    }
    let x = q.graph().locate(x)?;
    let source = q.graph().locate(source)?;
    let k = energy.k;
    let case = open_case(q, x, source);
    let snap = q.quantum_map(k)?;
    let scar = if energy.is_real() {
        crate::scattering::detect_scar(q, k.re, SCAR_TOL)?
    } else {
        None
    };
    let (value, regularized) = match scar {
        None => (regular_value(q, &snap, x, source)?, false),
        Some(scar) => (scar_value(q, &snap, &scar, case, x, source)?, true),
    };
    Ok(GreensValue {
        value,
        case,
        target: x,
        source,
        energy,
        regularized,
    })
}

fn scar_value(
    q: &QuantumGraph,
    snap: &QuantumMapSnapshot,
    scar: &ScarBasis,
    case: GreensCase,
    x: GraphPoint,
    source: GraphPoint,
) -> Result<C64> {
    let k = snap.k;
    let g = q.graph();
    let nb = snap.n_directed;
    let s = source_vector(q, source, k);
    let direct = direct_if_same_edge(x, source, k);
    let mut c = CVector::zeros(g.dim());
    match case {
        GreensCase::BondBond | GreensCase::Compact => {
            return Err(Error::Pole { nearest_k: scar.k0 });
        }
        GreensCase::LeadLead => {
            let r = regularized_scattering(q, scar)?;
            let l = g.lead_slot(source.edge).unwrap();
            c.rows_mut(nb, snap.n_leads).copy_from(&r.sigma.column(l));
            c *= s[g.lead_index(source.edge).unwrap()];
        }
        GreensCase::BondLead => {
            let r = regularized_scattering(q, scar)?;
            let l = g.lead_slot(source.edge).unwrap();
            c.rows_mut(0, nb).copy_from(&r.rho.column(l));
            c *= s[g.lead_index(source.edge).unwrap()];
        }
        GreensCase::LeadBond => {
            let y = y_q_inverse(&snap.u_bb(), &scar.b)?;
            let w = regularized_outgoing(q, snap, scar, &y)?;
            let s_b = s.rows(0, nb).into_owned();
            let c_l = w * s_b;
            c.rows_mut(nb, snap.n_leads).copy_from(&c_l);
        }
    }
    Ok(direct + field_from_amplitudes(q, &c, x, k))
}

/// Dispatch to [`greens_compact`] or [`greens_open`].
pub fn greens(
    q: &QuantumGraph,
    x: GraphPoint,
    source: GraphPoint,
    energy: EnergyPoint,
) -> Result<GreensValue> {
    if q.is_compact() {
        greens_compact(q, x, source, energy)
    } else {
        greens_open(q, x, source, energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;
    use crate::vertex::VertexCondition;
    use std::f64::consts::PI;

    fn interval(l: f64) -> QuantumGraph {
        let g = GraphSpec::new()
            .vertex("a")
            .vertex("b")
            .bond("e", "a", "b", l)
            .build()
            .unwrap();
        QuantumGraph::uniform(g, VertexCondition::Dirichlet).unwrap()
    }

    fn analytic_interval(k: C64, l: f64, x: f64, xp: f64) -> C64 {
        let (lo, hi) = if x < xp { (x, xp) } else { (xp, x) };
        -(k * lo).sin() * (k * (l - hi)).sin() / (k * (k * l).sin())
    }

    #[test]
    fn interval_matches_analytic_kernel() {
        let q = interval(PI);
        let en = EnergyPoint::from_wavenumber(C64::new(1.3, 0.2)).unwrap();
        let e = q.graph().edge_id("e").unwrap();
        for &(x, xp) in &[(0.3, 2.1), (2.5, 0.7), (1.0, 1.0), (0.0, 1.5)] {
            let g = greens_compact(&q, GraphPoint { edge: e, x }, GraphPoint { edge: e, x: xp }, en).unwrap();
            let expect = analytic_interval(en.k, PI, x, xp);
            assert!((g.value - expect).norm() < 1e-12, "{x} {xp}");
        }
    }

    #[test]
    fn energy_branch() {
        let en = EnergyPoint::from_energy(C64::new(4.0, -0.1)).unwrap();
        assert!(en.k.im > 0.0);
        assert!((en.k * en.k - en.e).norm() < 1e-14);
        let c = EnergyPoint::from_energy(C64::new(4.0, 0.1)).unwrap().conj();
        assert!((c.k - en.k).norm() < 1e-14);
        assert!(EnergyPoint::from_energy(C64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn pole_on_the_spectrum() {
        let q = interval(PI);
        let e = q.graph().edge_id("e").unwrap();
        let en = EnergyPoint::from_energy(C64::from(4.0)).unwrap();
        let r = greens_compact(&q, GraphPoint { edge: e, x: 0.5 }, GraphPoint { edge: e, x: 1.0 }, en);
        assert_eq!(r.unwrap_err(), Error::Pole { nearest_k: 2.0 });
    }

    #[test]
    fn half_line_dirichlet() {
        let g = GraphSpec::new().vertex("v").lead("l", "v").build().unwrap();
        let q = QuantumGraph::uniform(g, VertexCondition::Dirichlet).unwrap();
        let l = q.graph().edge_id("l").unwrap();
        let en = EnergyPoint::from_wavenumber(C64::new(1.1, 0.05)).unwrap();
        let k = en.k;
        for &(x, xp) in &[(0.2, 1.7), (3.0, 0.4), (1.0, 1.0)] {
            let v = greens_open(&q, GraphPoint { edge: l, x }, GraphPoint { edge: l, x: xp }, en).unwrap();
            let expect = ((I * k * (x - xp as f64).abs()).exp() - (I * k * (x + xp)).exp()) / (C64::new(0.0, 2.0) * k);
            assert!((v.value - expect).norm() < 1e-14);
            assert_eq!(v.case, GreensCase::LeadLead);
        }
    }

    #[test]
    fn coefficient_forms_agree_on_interval() {
        let q = interval(1.9);
        let e = q.graph().edge_id("e").unwrap();
        let en = EnergyPoint::from_wavenumber(C64::new(1.0, 0.3)).unwrap();
        let src = GraphPoint { edge: e, x: 0.6 };
        let (t1, h1) = greens_coefficients(&q, src, en, CoefficientForm::Sigma).unwrap();
        let (t2, h2) = greens_coefficients(&q, src, en, CoefficientForm::Resolvent).unwrap();
        assert!((t1 - t2).norm() < 1e-13);
        assert!((h1 - h2).norm() < 1e-13);
    }
}
