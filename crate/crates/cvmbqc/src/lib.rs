//! Continuous-variable one-way quantum computation, simulated and verified.
//!
//! This crate models quadrature-mode quantum circuits as *gate words* over a
//! small atom alphabet — displacements, quarter-turn rotations, squeezes,
//! polynomial shears up to cubic order, and two-mode couplings — and builds
//! three layers on top of it:
//!
//! * [`algebra`] — an exact rewrite engine that factors any word into
//!   `phase · displacement · core`, certifying operator identities without
//!   ever touching a Hilbert space;
//! * numeric backends (a covariance-matrix simulator for Gaussian words and
//!   a truncated number-basis simulator for everything else) that realize
//!   the same conventions on states;
//! * a measurement-based computation stack: cluster-style mode graphs with
//!   finitely squeezed node states, a one-way execution engine, and a
//!   delegated-execution protocol in which a client hides its program from
//!   the server behind uniformly random shear and displacement twists.
//!
//! # Quick start
//!
//! ```
//! use cvmbqc::algebra::{difference, GateWord};
//!
//! // A quarter turn converts a position kick into a momentum kick.
//! let lhs: GateWord = "F@0 X(0.7)@0".parse().unwrap();
//! let rhs: GateWord = "Z(0.7)@0 F@0".parse().unwrap();
//! let gap = difference(&lhs, &rhs, 1).unwrap();
//! assert!(gap.is_identity_up_to_phase(1e-12));
//! assert!(gap.phase_wrapped().abs() < 1e-12);
//! ```
//!
//! The `examples/` directory walks through every major capability, one
//! runnable program per topic.

pub mod algebra;
pub mod backend;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod protocol;

pub use error::{Error, Result};
