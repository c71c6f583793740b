//! Spectra, scattering matrices and closed-form Green's functions of finite
//! quantum graphs with general self-adjoint vertex conditions.
//!
//! The entry point is [`QuantumGraph`]: a [`MetricGraph`] with one
//! [`VertexCondition`] per vertex. From it the modules compute
//!
//! * the quantum map `U(k)` and its derivative ([`qmap`]),
//! * eigen-wavenumbers, eigenvectors and projection kernels of compact
//!   graphs ([`spectrum`]),
//! * scattering matrices of open graphs, including regularized evaluation
//!   at bound states in the continuum ([`scattering`]),
//! * Green's functions of compact and open graphs ([`greens`]),
//! * independent path-sum and long-lead reference evaluations ([`oracle`]).
//!
//! Graph description files and the command-line front end live in [`io`]
//! and [`cli`].

pub mod cli;
pub mod error;
pub mod graph;
pub mod greens;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod qmap;
pub mod quadrature;
pub mod scattering;
pub mod spectrum;
pub mod vertex;

pub use error::{Error, Result};
pub use graph::{Direction, EdgeId, EdgeLength, GraphPoint, GraphSpec, MetricGraph, VertexId};
pub use greens::{EnergyPoint, GreensCase, GreensValue};
pub use linalg::{CMatrix, CVector, C64};
pub use qmap::{QuantumGraph, QuantumMapSnapshot};
pub use scattering::{ScarBasis, ScatteringResult};
pub use spectrum::{ProjectionKernel, SpectralRoot};
pub use vertex::VertexCondition;
