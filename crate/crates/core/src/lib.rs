//! Boundary-integral solvers for the two-dimensional time-fractional
//! diffusion-wave equation
//!
//! ```text
//! D_t^α u = κ ∇²u + g,   1 < α < 2,   X ∈ Ω,
//! u(X, 0) = φ,  ∂u/∂t (X, 0) = ψ,  u = ū on Γ,
//! ```
//!
//! where `D_t^α` is the Caputo derivative. Two spatial schemes are provided:
//!
//! * [`bem`]: every time level reduces to a modified Helmholtz problem
//!   `∇²u − k²u = ω` that is solved with constant boundary elements. The
//!   domain integral of `ω G` is evaluated without a singularity by
//!   subtracting `ω(P)` and converting `ω(P) ∫ G` into a boundary integral.
//! * [`drbem`]: the dual reciprocity method with the linear radial basis
//!   function `1 + r` and the Laplace fundamental solution. The resulting
//!   system matrix is constant in time and factored once.
//!
//! Both marches share the Caputo weights and memory sums of [`timefrac`].
//! The manufactured test problems and the RMS norm live in [`problems`].

pub mod bem;
pub mod drbem;
mod error;
pub mod geometry;
pub mod linalg;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod problems;
pub mod quadrature;
pub mod specfun;
pub mod timefrac;

pub use error::{Error, Result};
pub use geometry::{BoundaryElement, BoundaryMesh, Domain, InteriorCellSet, Point};
pub use linalg::{DenseMatrix, LuFactorization};
pub use problems::TestProblem;
pub use timefrac::{FractionalScheme, SolutionHistory};
