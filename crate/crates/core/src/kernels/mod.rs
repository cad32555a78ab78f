//! The algebra of kernels `C[Mat]^op ⊗ C[Mat̄]`, the q-Bergman kernels and
//! the Bergman projection.

pub mod bergman;
pub mod element;
pub mod family;

pub use bergman::{
    bergman_apply, bergman_apply_with, bergman_oracle, default_trunc, max_abs_diff, to_numeric,
    BergmanOracle, NumericElement, Projection,
};
pub use element::{KernelElement, KernelJson, KernelKey, KernelTermJson};
pub use family::{chi, commutator_check, k_factor, k_finite, k_lambda_exact, k_lambda_numeric, k_poly};
