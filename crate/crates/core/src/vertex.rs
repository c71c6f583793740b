//! Vertex matching conditions and vertex scattering matrices.

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs, singular_values, solve, unitarity_defect, CMatrix, C64, I};

/// Absolute tolerance on `max |A B^dagger - B A^dagger|`, scaled by the size
/// of `A B^dagger` when that exceeds one.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative singular-value threshold for the rank of `(A, B)`.
pub const RANK_RTOL: f64 = 1e-10;
/// Unitarity tolerance for prescribed constant scattering matrices.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum VertexCondition {
    /// Continuity plus vanishing sum of outgoing derivatives.
    NeumannKirchhoff,
    /// `psi = 0` on every port.
    Dirichlet,
    /// `A psi(0) + B psi'(0) = 0` with derivatives taken pointing away from
    /// the vertex.
    General { a: CMatrix, b: CMatrix },
    /// A prescribed wavenumber-independent unitary scattering matrix. Only
    /// unitarity is checked; it need not come from a self-adjoint operator.
    Constant(CMatrix),
}

impl VertexCondition {
    /// Matching matrices realising Neumann-Kirchhoff at degree `d`: `d - 1`
    /// continuity rows `psi_i - psi_{i+1}` and a final derivative-sum row.
    pub fn neumann_kirchhoff_ab(d: usize) -> (CMatrix, CMatrix) {
        Self::delta_ab(d, 0.0)
    }

    /// Delta-type coupling of strength `alpha`: continuity and
    /// `sum psi' = alpha psi`.
    pub fn delta(d: usize, alpha: f64) -> Self {
        let (a, b) = Self::delta_ab(d, alpha);
        VertexCondition::General { a, b }
    }

    fn delta_ab(d: usize, alpha: f64) -> (CMatrix, CMatrix) {
        let mut a = CMatrix::zeros(d, d);
        let mut b = CMatrix::zeros(d, d);
        for i in 0..d.saturating_sub(1) {
            a[(i, i)] = C64::from(1.0);
            a[(i, i + 1)] = C64::from(-1.0);
        }
        if d > 0 {
            a[(d - 1, 0)] = C64::from(-alpha);
            for j in 0..d {
                b[(d - 1, j)] = C64::from(1.0);
            }
        }
        (a, b)
    }

    pub fn is_k_independent(&self) -> bool {
        !matches!(self, VertexCondition::General { .. })
    }

    /// Whether the condition is derived from self-adjoint matching data
    /// (so that `dSigma/dk = (1 - Sigma^2) / 2k` holds).
    pub fn is_self_adjoint(&self) -> bool {
        !matches!(self, VertexCondition::Constant(_))
    }

    /// Check the condition against a vertex of degree `d`. The error string
    /// is the reason; callers attach the vertex name.
    pub fn validate(&self, d: usize) -> std::result::Result<(), String> {
        match self {
            VertexCondition::NeumannKirchhoff | VertexCondition::Dirichlet => Ok(()),
            VertexCondition::General { a, b } => {
                for (name, m) in [("A", a), ("B", b)] {
                    if m.nrows() != d || m.ncols() != d {
                        return Err(format!(
                            "{name} is {}x{}, expected {d}x{d}",
                            m.nrows(),
                            m.ncols()
                        ));
                    }
                }
                if d == 0 {
                    return Ok(());
                }
                let mut stacked = CMatrix::zeros(d, 2 * d);
                stacked.columns_mut(0, d).copy_from(a);
                stacked.columns_mut(d, d).copy_from(b);
                let sv = singular_values(&stacked);
                let smax = sv.last().copied().unwrap_or(0.0);
                let rank = sv.iter().filter(|&&s| s > RANK_RTOL * smax && s > 0.0).count();
                if rank < d {
                    return Err(format!("(A, B) has rank {rank}, expected {d}"));
                }
                let ab = a * b.adjoint();
                let defect = max_abs(&(&ab - ab.adjoint()));
                let scale = max_abs(&ab).max(1.0);
                if defect > HERMITIAN_TOL * scale {
                    return Err(format!("A B^dagger is not Hermitian (defect {defect:e})"));
                }
                Ok(())
            }
            VertexCondition::Constant(s) => {
                if s.nrows() != d || s.ncols() != d {
                    return Err(format!(
                        "scattering matrix is {}x{}, expected {d}x{d}",
                        s.nrows(),
                        s.ncols()
                    ));
                }
                let defect = unitarity_defect(s);
                if defect > UNITARY_TOL {
                    return Err(format!("prescribed matrix is not unitary (defect {defect:e})"));
                }
                Ok(())
            }
        }
    }

    /// Vertex scattering matrix `Sigma(k)` at degree `d`.
    pub fn sigma(&self, k: C64, d: usize) -> Result<CMatrix> {
        match self {
            VertexCondition::NeumannKirchhoff => {
                let off = C64::from(2.0 / d as f64);
                Ok(CMatrix::from_element(d, d, off) - identity(d))
            }
            VertexCondition::Dirichlet => Ok(-identity(d)),
            VertexCondition::Constant(s) => Ok(s.clone()),
            VertexCondition::General { a, b } => {
                if k == C64::from(0.0) {
                    return Err(Error::ZeroWavenumber);
                }
                let plus = a + b * (I * k);
                let minus = a - b * (I * k);
                let sv = singular_values(&plus);
                let smax = sv.last().copied().unwrap_or(0.0);
                if d > 0 && sv[0] <= 1e-13 * smax.max(1.0) {
                    return Err(Error::SingularCondition { k: format!("{k}") });
                }
                solve(&plus, &minus)
                    .map(|x| -x)
                    .ok_or_else(|| Error::SingularCondition { k: format!("{k}") })
            }
        }
    }

    /// `dSigma/dk`. Zero for wavenumber-independent conditions, otherwise
    /// `(1 - Sigma^2) / 2k`.
    pub fn sigma_derivative(&self, k: C64, d: usize) -> Result<CMatrix> {
        if self.is_k_independent() {
            return Ok(CMatrix::zeros(d, d));
        }
        let s = self.sigma(k, d)?;
        Ok((identity(d) - &s * &s) / (C64::from(2.0) * k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    #[test]
    fn dirichlet_degree_one() {
        let s = VertexCondition::Dirichlet.sigma(c(1.7), 1).unwrap();
        assert_eq!(s[(0, 0)], c(-1.0));
    }

    #[test]
    fn neumann_degree_one_as_general() {
        let cond = VertexCondition::General {
            a: CMatrix::zeros(1, 1),
            b: identity(1),
        };
        cond.validate(1).unwrap();
        let s = cond.sigma(c(2.3), 1).unwrap();
        assert!((s[(0, 0)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn dirichlet_as_general_is_valid() {
        let cond = VertexCondition::General {
            a: identity(3),
            b: CMatrix::zeros(3, 3),
        };
        assert!(cond.validate(3).is_ok());
        let s = cond.sigma(c(1.0), 3).unwrap();
        assert!(max_abs(&(s + identity(3))) < 1e-15);
    }

    #[test]
    fn zero_pair_is_rank_deficient() {
        let cond = VertexCondition::General {
            a: CMatrix::zeros(2, 2),
            b: CMatrix::zeros(2, 2),
        };
        let err = cond.validate(2).unwrap_err();
        assert!(err.contains("rank"));
    }

    #[test]
    fn non_hermitian_product_rejected() {
        let cond = VertexCondition::General {
            a: identity(1),
            b: CMatrix::from_element(1, 1, C64::new(0.0, 1.0)),
        };
        assert!(cond.validate(1).unwrap_err().contains("Hermitian"));
    }

    #[test]
    fn nk_matrix_entries() {
        let s = VertexCondition::NeumannKirchhoff.sigma(c(1.0), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { -1.0 / 3.0 } else { 2.0 / 3.0 };
                assert!((s[(i, j)] - c(expect)).norm() < 1e-15);
            }
        }
        assert!(max_abs(&(&s * &s - identity(3))) < 1e-15);
        for i in 0..3 {
            let row: C64 = s.row(i).iter().sum();
            assert!((row - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn nk_realisation_matches_shortcut() {
        for d in 1..6 {
            let (a, b) = VertexCondition::neumann_kirchhoff_ab(d);
            let general = VertexCondition::General { a, b };
            general.validate(d).unwrap();
            let k = c(0.83);
            let s1 = general.sigma(k, d).unwrap();
            let s2 = VertexCondition::NeumannKirchhoff.sigma(k, d).unwrap();
            assert!(max_abs(&(s1 - s2)) < 1e-13, "degree {d}");
        }
    }

    #[test]
    fn delta_condition_is_unitary_and_k_dependent() {
        let cond = VertexCondition::delta(3, 1.5);
        cond.validate(3).unwrap();
        let s1 = cond.sigma(c(0.7), 3).unwrap();
        let s2 = cond.sigma(c(2.7), 3).unwrap();
        assert!(unitarity_defect(&s1) < 1e-12);
        assert!(max_abs(&(s1 - s2)) > 1e-3);
    }

    #[test]
    fn derivative_zero_for_constant_conditions() {
        let d = VertexCondition::NeumannKirchhoff.sigma_derivative(c(1.0), 4).unwrap();
        assert_eq!(max_abs(&d), 0.0);
        let d = VertexCondition::Dirichlet.sigma_derivative(c(1.0), 1).unwrap();
        assert_eq!(max_abs(&d), 0.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let cond = VertexCondition::delta(3, -0.8);
        let k = 1.9;
        let h = 1e-6;
        let fd = (cond.sigma(c(k + h), 3).unwrap() - cond.sigma(c(k - h), 3).unwrap()) / c(2.0 * h);
        let exact = cond.sigma_derivative(c(k), 3).unwrap();
        assert!(max_abs(&(fd - &exact)) / max_abs(&exact) < 1e-6);
    }

    #[test]
    fn zero_wavenumber_rejected() {
        let cond = VertexCondition::delta(2, 1.0);
        assert_eq!(cond.sigma(c(0.0), 2), Err(Error::ZeroWavenumber));
    }

    #[test]
    fn constant_matrix_checked_for_unitarity() {
        let good = VertexCondition::Constant(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), c(1.0), c(1.0), c(0.0)],
        ));
        assert!(good.validate(2).is_ok());
        let bad = VertexCondition::Constant(CMatrix::from_element(2, 2, c(0.5)));
        assert!(bad.validate(2).is_err());
    }
}
