//! Edge scattering matrix, bond propagator and quantum map.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, VertexId};
use crate::linalg::{scale_row, CMatrix, C64, I};
use crate::vertex::VertexCondition;

/// A metric graph together with validated matching conditions, one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraph {
    graph: MetricGraph,
    conditions: Vec<VertexCondition>,
}

impl QuantumGraph {
    pub fn new(graph: MetricGraph, conditions: Vec<VertexCondition>) -> Result<Self> {
        if conditions.len() != graph.n_vertices() {
            return Err(Error::InvalidArgument(format!(
                "{} conditions given for {} vertices",
                conditions.len(),
                graph.n_vertices()
            )));
        }
        for (i, cond) in conditions.iter().enumerate() {
            let v = graph.vertex(VertexId(i));
            let d = v.degree();
            let size = match cond {
                VertexCondition::General { a, .. } => Some(a.nrows()),
                VertexCondition::Constant(s) => Some(s.nrows()),
                _ => None,
            };
            if let Some(found) = size {
                if found != d {
                    return Err(Error::DimensionMismatch {
                        vertex: v.name.clone(),
                        expected: d,
                        found,
                    });
                }
            }
            cond.validate(d).map_err(|reason| Error::InvalidCondition {
                vertex: v.name.clone(),
                reason,
            })?;
        }
        Ok(Self { graph, conditions })
    }

    /// Same condition at every vertex.
    pub fn uniform(graph: MetricGraph, condition: VertexCondition) -> Result<Self> {
        let conditions = vec![condition; graph.n_vertices()];
        Self::new(graph, conditions)
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn conditions(&self) -> &[VertexCondition] {
        &self.conditions
    }

    pub fn condition(&self, v: VertexId) -> &VertexCondition {
        &self.conditions[v.0]
    }

    pub fn is_compact(&self) -> bool {
        self.graph.is_compact()
    }

    pub fn all_k_independent(&self) -> bool {
        self.conditions.iter().all(VertexCondition::is_k_independent)
    }

    pub fn all_self_adjoint(&self) -> bool {
        self.conditions.iter().all(VertexCondition::is_self_adjoint)
    }

    fn assemble<F>(&self, mut per_vertex: F) -> Result<CMatrix>
    where
        F: FnMut(&VertexCondition, usize) -> Result<CMatrix>,
    {
        let n = self.graph.dim();
        let mut out = CMatrix::zeros(n, n);
        for (v, cond) in self.graph.vertices().iter().zip(&self.conditions) {
            let local = per_vertex(cond, v.degree())?;
            for (i, &pi) in v.ports.iter().enumerate() {
                let row = self.graph.outgoing_index(pi);
                for (j, &pj) in v.ports.iter().enumerate() {
                    out[(row, self.graph.incoming_index(pj))] = local[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Full edge scattering matrix `Sigma(k)` mapping incoming to outgoing
    /// amplitudes, in the crate's directed-edge layout.
    pub fn edge_scattering(&self, k: C64) -> Result<CMatrix> {
        self.assemble(|cond, d| cond.sigma(k, d))
    }

    /// `dSigma/dk` assembled vertex by vertex.
    pub fn edge_scattering_derivative(&self, k: C64) -> Result<CMatrix> {
        self.assemble(|cond, d| cond.sigma_derivative(k, d))
    }

    /// Bond phases `exp(i k l)` over directed bonds.
    pub fn bond_phases(&self, k: C64) -> Vec<C64> {
        self.graph
            .directed_lengths()
            .iter()
            .map(|&l| (I * k * l).exp())
            .collect()
    }

    pub fn quantum_map(&self, k: C64) -> Result<QuantumMapSnapshot> {
        if k == C64::from(0.0) {
            return Err(Error::ZeroWavenumber);
        }
        let sigma = self.edge_scattering(k)?;
        let t = self.bond_phases(k);
        let mut u = sigma.clone();
        for (i, &phase) in t.iter().enumerate() {
            scale_row(&mut u, i, phase);
        }
        Ok(QuantumMapSnapshot {
            k,
            u,
            t,
            sigma,
            n_directed: self.graph.n_directed(),
            n_leads: self.graph.n_leads(),
        })
    }

    /// `dU/dk`. For self-adjoint conditions this uses the closed form
    /// `i L U + (1/2k) [T J - U J T^{-1} U]` where `J` swaps bond
    /// directions and is the identity on leads; with prescribed constant
    /// matrices present it falls back to [`Self::quantum_map_derivative_blockwise`].
    pub fn quantum_map_derivative(&self, k: C64) -> Result<CMatrix> {
        if !self.all_self_adjoint() {
            return self.quantum_map_derivative_blockwise(k);
        }
        let snap = self.quantum_map(k)?;
        let nb = snap.n_directed;
        let n = self.graph.dim();
        let lengths = self.graph.directed_lengths();
        let mut t_j = CMatrix::zeros(n, n);
        let mut j_tinv = CMatrix::zeros(n, n);
        for i in 0..nb {
            t_j[(i, i ^ 1)] = snap.t[i];
            j_tinv[(i, i ^ 1)] = C64::from(1.0) / snap.t[i ^ 1];
        }
        for i in nb..n {
            t_j[(i, i)] = C64::from(1.0);
            j_tinv[(i, i)] = C64::from(1.0);
        }
        let mut il_u = snap.u.clone();
        for i in 0..n {
            let f = if i < nb { I * lengths[i] } else { C64::from(0.0) };
            scale_row(&mut il_u, i, f);
        }
        let bracket = t_j - &snap.u * j_tinv * &snap.u;
        Ok(il_u + bracket / (C64::from(2.0) * k))
    }

    /// `dU/dk = i L U + T dSigma/dk`, with `dSigma/dk` taken vertex by vertex.
    pub fn quantum_map_derivative_blockwise(&self, k: C64) -> Result<CMatrix> {
        let snap = self.quantum_map(k)?;
        let nb = snap.n_directed;
        let lengths = self.graph.directed_lengths();
        let mut ds = self.edge_scattering_derivative(k)?;
        let mut il_u = snap.u.clone();
        for i in 0..self.graph.dim() {
            if i < nb {
                scale_row(&mut il_u, i, I * lengths[i]);
                scale_row(&mut ds, i, snap.t[i]);
            } else {
                il_u.row_mut(i).fill(C64::from(0.0));
            }
        }
        Ok(il_u + ds)
    }
}

/// Quantum map and its ingredients at one wavenumber.
///
/// Layout: directed bonds first (`B`), leads after (`L`). For a compact
/// graph the `B` block is the whole map.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMapSnapshot {
    pub k: C64,
    pub u: CMatrix,
    /// Diagonal of `T(k) = exp(i k L)` over directed bonds.
    pub t: Vec<C64>,
    pub sigma: CMatrix,
    pub n_directed: usize,
    pub n_leads: usize,
}

impl QuantumMapSnapshot {
    pub fn u_bb(&self) -> CMatrix {
        self.u.view((0, 0), (self.n_directed, self.n_directed)).into_owned()
    }

    pub fn u_bl(&self) -> CMatrix {
        self.u
            .view((0, self.n_directed), (self.n_directed, self.n_leads))
            .into_owned()
    }

    pub fn u_lb(&self) -> CMatrix {
        self.u
            .view((self.n_directed, 0), (self.n_leads, self.n_directed))
            .into_owned()
    }

    pub fn u_ll(&self) -> CMatrix {
        self.u
            .view((self.n_directed, self.n_directed), (self.n_leads, self.n_leads))
            .into_owned()
    }
}

/// Split a full-size matrix into `(BB, BL, LB, LL)` blocks.
pub fn blocks(m: &CMatrix, n_directed: usize) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    let nl = m.nrows() - n_directed;
    (
        m.view((0, 0), (n_directed, n_directed)).into_owned(),
        m.view((0, n_directed), (n_directed, nl)).into_owned(),
        m.view((n_directed, 0), (nl, n_directed)).into_owned(),
        m.view((n_directed, n_directed), (nl, nl)).into_owned(),
    )
}
