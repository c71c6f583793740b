//! Reference evaluations of Green's functions that avoid the linear solve:
//! a truncated Neumann (path) series, and the long-lead limit of a compact
//! graph whose leads have been cut at finite length.

use crate::error::{Error, Result};
use crate::graph::GraphPoint;
use crate::greens::{
    direct_term, field_from_amplitudes, greens_compact, source_vector, EnergyPoint,
};
use crate::linalg::{identity, CMatrix, CVector, C64};
use crate::qmap::QuantumGraph;
use crate::vertex::VertexCondition;

/// `sum_{n=0}^{order} m^n`, accumulated with a running power.
fn neumann_partial_sum(m: &CMatrix, order: usize) -> CMatrix {
    let n = m.nrows();
    let mut power = identity(n);
    let mut acc = identity(n);
    for _ in 0..order {
        power = &power * m;
        acc += &power;
    }
    acc
}

/// Green's function with every `(I - U_BB)^{-1}` replaced by
/// `sum_{n=0}^{N} U_BB^n`. For a compact graph this is the direct term plus
/// the sum over all paths with between one and `N` scattering events.
///
/// Requires `Im k > 0`, where the series converges.
pub fn path_sum_greens(
    q: &QuantumGraph,
    x: GraphPoint,
    source: GraphPoint,
    energy: EnergyPoint,
    order: usize,
) -> Result<C64> {
    let k = energy.k;
    if !(k.im > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "path sum diverges unless Im k > 0 (k = {k})"
        )));
    }
    let g = q.graph();
    let x = g.locate(x)?;
    let source = g.locate(source)?;
    let snap = q.quantum_map(k)?;
    let nb = snap.n_directed;
    let nl = snap.n_leads;
    let s = source_vector(q, source, k);
    let s_b = s.rows(0, nb).into_owned();
    let s_l = s.rows(nb, nl).into_owned();
    let u_bb = snap.u_bb();

    // Compact graphs: U (I - U)^{-1} ~ sum_{n=1}^{N} U^n, i.e. the partial
    // sum of order N - 1 times U. Open graphs keep order N for each inverse.
    let c_b = if nl == 0 {
        if order == 0 {
            CVector::zeros(nb)
        } else {
            neumann_partial_sum(&u_bb, order - 1) * &u_bb * &s_b
        }
    } else {
        let resolvent = neumann_partial_sum(&u_bb, order);
        &resolvent * (&u_bb * &s_b + snap.u_bl() * &s_l)
    };
    let c_l = snap.u_lb() * (&c_b + &s_b) + snap.u_ll() * &s_l;
    let mut c = CVector::zeros(nb + nl);
    c.rows_mut(0, nb).copy_from(&c_b);
    c.rows_mut(nb, nl).copy_from(&c_l);
    let direct = if x.edge == source.edge {
        direct_term(k, x.x, source.x)
    } else {
        C64::from(0.0)
    };
    Ok(direct + field_from_amplitudes(q, &c, x, k))
}

/// Condition placed at the free end of a truncated lead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DanglingCondition {
    Dirichlet,
    Neumann,
}

/// The compact graph obtained by cutting every lead at length `lambda` and
/// closing it with the given dangling condition. Edge ids are preserved.
pub fn truncated_graph(
    q: &QuantumGraph,
    lambda: f64,
    dangling: DanglingCondition,
) -> Result<QuantumGraph> {
    let (g, ends) = q.graph().truncate_leads(lambda)?;
    let mut conditions = q.conditions().to_vec();
    let end_condition = match dangling {
        DanglingCondition::Dirichlet => VertexCondition::Dirichlet,
        DanglingCondition::Neumann => VertexCondition::NeumannKirchhoff,
    };
    conditions.extend(std::iter::repeat_n(end_condition, ends.len()));
    QuantumGraph::new(g, conditions)
}

/// Open-graph Green's function approximated on the truncated compact graph.
/// Converges to the open result as `lambda` grows, at a rate set by
/// `exp(-2 Im k lambda)`.
pub fn auxiliary_limit_greens(
    q: &QuantumGraph,
    x: GraphPoint,
    source: GraphPoint,
    energy: EnergyPoint,
    lambda: f64,
    dangling: DanglingCondition,
) -> Result<C64> {
    if !(energy.k.im > 0.0) {
        return Err(Error::InvalidArgument(
            "the long-lead limit needs Im k > 0".to_string(),
        ));
    }
    if q.is_compact() {
        return Err(Error::RequiresOpen("auxiliary-limit oracle"));
    }
    let g = q.graph();
    let x = g.locate(x)?;
    let source = g.locate(source)?;
    for p in [x, source] {
        if g.edge(p.edge).is_lead() && p.x >= lambda {
            return Err(Error::InvalidArgument(format!(
                "truncation length {lambda} must exceed lead coordinate {}",
                p.x
            )));
        }
    }
    let compact = truncated_graph(q, lambda, dangling)?;
    greens_compact(&compact, x, source, energy).map(|v| v.value)
}
