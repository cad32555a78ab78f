//! The *-algebra `Pol(Mat_mn)_q`.

pub mod classical;
pub mod element;
pub mod generator;
pub mod json;
pub mod minors;
pub mod monomial;
pub(crate) mod product;
pub mod relations;
pub mod rewrite;

pub use classical::classical_eval;
pub use element::{normal_form, normal_form_sum, Element};
pub use generator::{parse_word, GenIndex, Shape, Word};
pub use json::{ElementJson, TermJson};
pub use minors::{all_minors, build_y, qminor, subsets};
pub use monomial::{Exps, Monomial};
pub use relations::r_matrix;
pub use rewrite::{reduce_word, Strategy};
