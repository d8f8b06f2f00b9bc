//! Numeric state backends realizing the gate conventions on actual states.
//!
//! Two backends cover complementary regimes:
//!
//! * [`gaussian`] — exact means and covariances for Gaussian words; rejects
//!   cubic atoms. Scales to many modes, supports homodyne conditioning,
//!   pure-state fidelities, and entropic quantities.
//! * [`fock`] — a truncated number-basis simulator that accepts every atom,
//!   cubic shears included. Every gate is the exact exponential of the
//!   truncated generator, so evolution is exactly unitary; truncation error
//!   enters only through the generators themselves and is measured, not
//!   guessed, via band-leakage diagnostics.

pub mod fock;
pub mod gaussian;
pub mod io;

/// Which quadrature a homodyne-style measurement reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Quadrature {
    /// Position.
    Q,
    /// Momentum.
    P,
}

impl std::fmt::Display for Quadrature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quadrature::Q => write!(f, "q"),
            Quadrature::P => write!(f, "p"),
        }
    }
}

/// Draws one standard-normal sample (Box–Muller).
pub(crate) fn standard_normal(rng: &mut impl rand::Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > f64::MIN_POSITIVE {
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }
}
