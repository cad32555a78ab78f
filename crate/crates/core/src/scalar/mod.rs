//! Coefficient arithmetic: rationals, rational functions in `q`, polynomials
//! in `u` over them, and configurable-precision numerics.

pub mod poly;
pub mod qrational;
pub mod real;
pub mod upoly;

/// Arbitrary-precision rational number, always stored in lowest terms.
pub type Rational = num_rational::BigRational;

pub use poly::QPoly;
pub use qrational::{parse_poly, qr_eval, qr_eval_ratio, qr_normalize, QRational};
pub use real::Real;
pub use upoly::{upoly_interpolate, UPoly};
