//! Rescaling experiment: conjugating a cubic phase by squeezes must cube
//! the squeeze factor onto the cubic coefficient — numerically, on the
//! truncated basis, with a convergence check against a larger cutoff.

use crate::algebra::GateWord;
use crate::backend::fock::FockSim;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Agreement between a squeeze-conjugated cubic phase and its rescaled form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RescaleReport {
    /// Cutoff the check ran at.
    pub dim: usize,
    /// Larger cutoff used to verify convergence.
    pub reference_dim: usize,
    /// Fidelity between the two circuits' outputs at `dim`.
    pub fidelity: f64,
    /// The same fidelity at `reference_dim`.
    pub reference_fidelity: f64,
    /// How much the fidelity moves between the cutoffs; small drift means
    /// the residual infidelity is physical, not a truncation artifact.
    pub drift: f64,
}

/// Applies `Q(1/t)·Dq(0,0,c)·Q(t)` and `Dq(0,0,c·t³)` to the same squeezed
/// input at two cutoffs and reports the output fidelities.
///
/// The two circuits agree exactly on the full space; on a truncated basis
/// the squeeze temporarily widens the state, so a small, cutoff-stable
/// infidelity remains. The input is strongly momentum-squeezed (narrow in
/// position) to keep both paths inside the basis.
pub fn squeeze_conjugation_check(dim: usize, reference_dim: usize) -> Result<RescaleReport> {
    let lhs: GateWord = "Q(0.5)@0 Dq(0,0,1)@0 Q(2)@0".parse()?;
    let rhs: GateWord = "Dq(0,0,8)@0".parse()?;
    let fidelity = conjugation_fidelity(dim, &lhs, &rhs)?;
    let reference_fidelity = conjugation_fidelity(reference_dim, &lhs, &rhs)?;
    Ok(RescaleReport {
        dim,
        reference_dim,
        fidelity,
        reference_fidelity,
        drift: (fidelity - reference_fidelity).abs(),
    })
}

fn conjugation_fidelity(dim: usize, lhs: &GateWord, rhs: &GateWord) -> Result<f64> {
    let sim = FockSim::new(dim);
    let start = sim.squeezed(3.0)?;
    let mut a = start.clone();
    sim.apply_word(&mut a, lhs)?;
    let mut b = start;
    sim.apply_word(&mut b, rhs)?;
    a.fidelity(&b)
}
