//! Exact gate-word algebra: atoms, words, tracked Gaussian data, the rewrite
//! engine, and a catalog of certified operator identities.

pub mod atom;
pub mod identities;
pub mod param;
pub mod rewrite;
pub mod symplectic;
pub mod word;

pub use atom::Atom;
pub use param::PolyCoeffs;
pub use rewrite::{difference, normalize, NormalForm};
pub use symplectic::{symplectic_form, wrap_angle, TrackedOperator};
pub use word::GateWord;
