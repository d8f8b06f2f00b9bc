//! Correctness experiments: the blinding layer must be invisible, and the
//! only systematic error left must be finite squeezing — which has to die
//! off as the ancillas sharpen.

use crate::algebra::{Atom, GateWord, PolyCoeffs};
use crate::backend::fock::FockSim;
use crate::backend::gaussian::GaussianState;
use crate::backend::Quadrature;
use crate::error::{Error, Result};
use crate::graph::{ModeGraph, Program};
use crate::protocol::{run_twin, RunConfig};
use serde::{Deserialize, Serialize};

/// Outcome of a seed sweep of twin (blind vs. open replay) runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwinSweepReport {
    /// Seeds swept.
    pub seeds: Vec<u64>,
    /// Output fidelity between the aligned blinded state and the open
    /// replay, per seed.
    pub fidelities: Vec<f64>,
    /// Worst fidelity over the sweep.
    pub min_fidelity: f64,
    /// Worst pointwise outcome-distribution deviation over all readouts of
    /// all seeds.
    pub max_distribution_dev: f64,
}

/// Runs [`run_twin`] once per seed and collects the agreement statistics.
pub fn twin_sweep(
    graph: &ModeGraph,
    program: &Program,
    config: &RunConfig,
    seeds: &[u64],
) -> Result<TwinSweepReport> {
    let mut fidelities = Vec::with_capacity(seeds.len());
    let mut max_dev = 0.0f64;
    for &seed in seeds {
        let report = run_twin(graph, program, &RunConfig { seed, ..*config })?;
        fidelities.push(report.fidelity);
        max_dev = max_dev.max(report.max_distribution_dev);
    }
    let min_fidelity = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TwinSweepReport { seeds: seeds.to_vec(), fidelities, min_fidelity, max_distribution_dev: max_dev })
}

/// Fidelity of a post-selected teleportation chain against its ideal
/// target, across ancilla squeeze strengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RampReport {
    /// Ancilla squeeze strengths, strongest last.
    pub omegas: Vec<f64>,
    /// Output fidelity against the ideal target, per strength.
    pub fidelities: Vec<f64>,
    /// Smallest post-selection acceptance estimate encountered, per
    /// strength (probability mass of the accepted outcome window).
    pub acceptances: Vec<f64>,
    /// Half-width of the accepted outcome window around zero.
    pub window: f64,
}

/// Smallest acceptance across a report, for starvation checks.
impl RampReport {
    /// The worst acceptance over all strengths.
    pub fn min_acceptance(&self) -> f64 {
        self.acceptances.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Post-selected quadratic teleportation chain on the covariance backend.
///
/// A vacuum input rides a wire of `slots.len()` ancillas squeezed to
/// strength `ω`; every readout is post-selected on the center of the
/// accepted window (the window's zero-width limit — the window only enters
/// the acceptance estimate). The surviving mode is compared against the
/// ideal chain applied to the same input. Quadratic slots keep everything
/// Gaussian, so the fidelities are exact.
pub fn gaussian_teleport_ramp(
    slots: &[PolyCoeffs],
    omegas: &[f64],
    window: f64,
) -> Result<RampReport> {
    for s in slots {
        if !s.is_gaussian() {
            return Err(Error::NonGaussianOnGaussianBackend);
        }
    }
    let mut fidelities = Vec::new();
    let mut acceptances = Vec::new();
    for &omega in omegas {
        let mut state = GaussianState::vacuum(1);
        for _ in slots {
            state.append_squeezed(omega)?;
        }
        for j in 0..slots.len() {
            state.apply_atom(&Atom::Cz { i: j, j: j + 1, sign: 1 })?;
        }
        let mut acceptance = f64::INFINITY;
        for slot in slots {
            state.apply_atom(&Atom::PhaseQ { mode: 0, f: *slot })?;
            // Acceptance estimate: Gaussian mass of the accepted window.
            let mu = state.mean_of(0, Quadrature::P);
            let var = state.variance_of(0, Quadrature::P);
            acceptance = acceptance.min(gaussian_mass(mu, var, window));
            state.condition(0, Quadrature::P, 0.0)?;
        }

        let mut reference = GaussianState::vacuum(1);
        let mut atoms = Vec::new();
        for slot in slots.iter().rev() {
            atoms.push(Atom::Fourier { mode: 0, k: 1 });
            atoms.push(Atom::PhaseQ { mode: 0, f: *slot });
        }
        reference.apply_word(&GateWord::new(atoms))?;

        fidelities.push(state.fidelity(&reference)?);
        acceptances.push(acceptance);
    }
    Ok(RampReport { omegas: omegas.to_vec(), fidelities, acceptances, window })
}

/// Post-selected single-step teleportation of a cubic phase gate on the
/// number-basis backend.
///
/// One vacuum input, one ancilla squeezed to strength `ω`, one coupling,
/// the cubic slot, and a momentum readout post-selected on the grid point
/// at zero (the accepted window is narrower than the grid spacing at every
/// cutoff used, so the center point *is* the window). Each strength uses
/// its own cutoff, sized so the ancilla fits the truncated basis.
pub fn cubic_teleport_ramp(
    slot: PolyCoeffs,
    settings: &[(f64, usize)],
    window: f64,
) -> Result<RampReport> {
    let mut omegas = Vec::new();
    let mut fidelities = Vec::new();
    let mut acceptances = Vec::new();
    for &(omega, dim) in settings {
        let sim = FockSim::new(dim);
        let center = dim / 2;
        if sim.grid_value(center).abs() > 1e-9 {
            return Err(Error::Protocol(format!(
                "cutoff {dim} has no zero on its outcome grid; use an odd cutoff"
            )));
        }
        let mut state = sim.vacuum(1).tensor(&sim.squeezed(omega)?)?;
        sim.apply_atom(&mut state, &Atom::Cz { i: 0, j: 1, sign: 1 })?;
        sim.apply_atom(&mut state, &Atom::PhaseQ { mode: 0, f: slot })?;

        let probs = sim.probabilities(&state, 0, Quadrature::P)?;
        let acceptance: f64 = probs
            .iter()
            .enumerate()
            .filter(|(k, _)| sim.grid_value(*k).abs() <= window)
            .map(|(_, p)| p)
            .sum();
        sim.project(&mut state, 0, Quadrature::P, center)?;

        let mut reference = sim.vacuum(1);
        sim.apply_atom(&mut reference, &Atom::PhaseQ { mode: 0, f: slot })?;
        sim.apply_atom(&mut reference, &Atom::Fourier { mode: 0, k: 1 })?;

        omegas.push(omega);
        fidelities.push(state.fidelity(&reference)?);
        acceptances.push(acceptance);
    }
    Ok(RampReport { omegas, fidelities, acceptances, window })
}

/// Probability mass of `|x - μ| ≤ w` under a normal distribution.
fn gaussian_mass(mu: f64, var: f64, w: f64) -> f64 {
    let s = (2.0 * var).sqrt();
    0.5 * (erf((w - mu) / s) + erf((w + mu) / s))
}

/// Error function via Abramowitz–Stegun 7.1.26 (|error| < 1.5e-7).
fn erf(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{single_wire, NodeMeasurement};

    #[test]
    fn sharper_ancillas_teleport_better() {
        let slots: Vec<PolyCoeffs> =
            vec![[0.2, 0.5, 0.0].into(), [-0.3, 0.2, 0.0].into()];
        let report = gaussian_teleport_ramp(&slots, &[0.5, 0.2], 0.05).unwrap();
        assert!(report.fidelities[1] > report.fidelities[0]);
        assert!(report.fidelities[1] > 0.99);
        assert!(report.min_acceptance() > 1e-3, "post-selection must not starve");
    }

    #[test]
    fn cubic_single_step_converges_with_squeezing() {
        let report = cubic_teleport_ramp(
            [0.1, 0.2, 0.6].into(),
            &[(0.5, 41), (0.25, 81)],
            0.05,
        )
        .unwrap();
        assert!(report.fidelities[1] > report.fidelities[0]);
        assert!(report.fidelities[0] > 0.9, "{:?}", report.fidelities);
        assert!(report.min_acceptance() > 1e-3);
    }

    #[test]
    fn twin_sweep_aggregates_seed_runs() {
        let graph = single_wire(3).unwrap();
        let program = Program::new([(
            0usize,
            NodeMeasurement::ShearedMomentum { poly: [0.2, 0.3, 0.0].into() },
        )]);
        let config = RunConfig { dim: 16, ..RunConfig::default() };
        let report = twin_sweep(&graph, &program, &config, &[1, 2, 3]).unwrap();
        assert_eq!(report.fidelities.len(), 3);
        assert!(report.min_fidelity > 1.0 - 1e-9);
        assert!(report.max_distribution_dev < 1e-9);
    }

    #[test]
    fn erf_matches_known_values() {
        assert!((erf(0.0)).abs() < 1e-8);
        assert!((erf(1.0) - 0.842_700_792_949_715).abs() < 2e-7);
        assert!((erf(-2.0) + 0.995_322_265_018_953).abs() < 2e-7);
    }
}
