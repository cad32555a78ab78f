//! Exact computer algebra for the quantum matrix ball `Pol(Mat_mn)_q`.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`]: coefficients in Q(q), polynomials in the auxiliary variable
//!   `u = q^{2λ}`, and configurable-precision reals.
//! * [`algebra`]: the normal-ordering engine for the defining commutation
//!   relations, the involution, q-minors and the element `y`.
//! * [`fock`]: the Fock representation on `C[Mat]_q f0`, its Gram matrices
//!   and the diagonal weight operator.
//! * [`integral`]: the invariant integrals as weighted traces.
//! * [`kernels`]: the algebra of kernels, the q-Bergman kernels and the
//!   Bergman projection.

pub mod algebra;
pub mod error;
pub mod fock;
pub mod integral;
pub mod kernels;
pub mod scalar;

pub use error::{Error, Result};
