//! The server side of a delegated run.
//!
//! The server holds the joint state in the truncated number-basis
//! simulator, receives prepared modes one by one, fires couplings, and
//! performs the adapted momentum readouts the client asks for. It is
//! honest-but-curious: it follows instructions exactly, and everything it
//! could record — received states, instruction polynomials, readout values
//! — is exposed so the blindness experiments can analyze precisely the
//! information available to it.
//!
//! Modes live in a growing-and-shrinking register: receiving appends a
//! mode, a readout removes one. The `live` map from graph node ids to
//! register slots tracks the correspondence.

use crate::algebra::{Atom, GateWord, PolyCoeffs};
use crate::backend::fock::{FockSim, FockState};
use crate::backend::Quadrature;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;

/// One adapted readout as the server experienced it.
#[derive(Debug, Clone)]
pub struct Readout {
    /// Grid index of the sampled outcome.
    pub index: usize,
    /// Quadrature value at that grid index — what goes on the wire.
    pub value: f64,
    /// Probability of the sampled outcome.
    pub prob: f64,
    /// The full outcome distribution over the grid.
    pub probs: Vec<f64>,
}

/// Server state machine for one delegated run.
#[derive(Debug, Clone)]
pub struct Server {
    sim: FockSim,
    state: FockState,
    live: Vec<usize>,
}

impl Server {
    /// A server with an empty register at the given cutoff.
    pub fn new(dim: usize) -> Self {
        let sim = FockSim::new(dim);
        let state = sim.vacuum(0);
        Server { sim, state, live: Vec::new() }
    }

    /// The underlying simulator (grid access, diagnostics).
    pub fn sim(&self) -> &FockSim {
        &self.sim
    }

    /// The joint state of all live modes.
    pub fn state(&self) -> &FockState {
        &self.state
    }

    /// Node ids of the live modes, in register order.
    pub fn live(&self) -> &[usize] {
        &self.live
    }

    /// Register slot of a node.
    pub fn mode_of(&self, node: usize) -> Result<usize> {
        self.live
            .iter()
            .position(|&n| n == node)
            .ok_or_else(|| Error::Protocol(format!("node {node} is not live on the server")))
    }

    /// Receives one prepared mode: a momentum-squeezed ancilla with the
    /// client's single-mode word (indexed on mode 0) applied on top.
    pub fn receive(&mut self, node: usize, base_omega: f64, word: &GateWord) -> Result<()> {
        if self.live.contains(&node) {
            return Err(Error::Protocol(format!("node {node} was already transferred")));
        }
        self.state = self.sim.attach_squeezed(&self.state, base_omega)?;
        self.live.push(node);
        let slot = self.live.len() - 1;
        for atom in word.atoms.iter().rev() {
            self.sim.apply_atom(&mut self.state, &retarget(atom, slot)?)?;
        }
        Ok(())
    }

    /// Fires the coupling between two live nodes.
    pub fn couple(&mut self, a: usize, b: usize, sign: i8) -> Result<()> {
        let i = self.mode_of(a)?;
        let j = self.mode_of(b)?;
        self.sim.apply_atom(&mut self.state, &Atom::Cz { i, j, sign })
    }

    /// Applies a position-phase to one live node (instruction polynomials,
    /// output alignment).
    pub fn apply_phase(&mut self, node: usize, f: PolyCoeffs) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        let mode = self.mode_of(node)?;
        self.sim.apply_atom(&mut self.state, &Atom::PhaseQ { mode, f })
    }

    /// Momentum outcome distribution of a live node over the grid.
    pub fn distribution(&self, node: usize) -> Result<Vec<f64>> {
        let mode = self.mode_of(node)?;
        self.sim.probabilities(&self.state, mode, Quadrature::P)
    }

    /// Projects a live node onto momentum grid index `k`, removing it from
    /// the register; returns the outcome probability.
    pub fn project_at(&mut self, node: usize, k: usize) -> Result<f64> {
        let mode = self.mode_of(node)?;
        let prob = self.sim.project(&mut self.state, mode, Quadrature::P, k)?;
        self.live.remove(mode);
        Ok(prob)
    }

    /// Performs one adapted readout: applies the instruction polynomial,
    /// samples a momentum outcome, and projects it out.
    pub fn measure(
        &mut self,
        node: usize,
        delta: PolyCoeffs,
        rng: &mut impl Rng,
    ) -> Result<Readout> {
        self.apply_phase(node, delta)?;
        let probs = self.distribution(node)?;
        let index = weighted_index(&probs, rng);
        let value = self.sim.grid_value(index);
        let prob = self.project_at(node, index)?;
        Ok(Readout { index, value, prob, probs })
    }

    /// Consumes the server, returning the final joint state and the node
    /// ids of its modes in register order.
    pub fn into_state(self) -> (FockState, Vec<usize>) {
        (self.state, self.live)
    }
}

/// Draws an index from an (unnormalized) probability vector.
pub(crate) fn weighted_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u: f64 = rng.gen::<f64>() * total;
    for (k, &p) in probs.iter().enumerate() {
        u -= p;
        if u <= 0.0 {
            return k;
        }
    }
    probs.len() - 1
}

/// Re-indexes a single-mode atom onto a register slot.
fn retarget(atom: &Atom, slot: usize) -> Result<Atom> {
    Ok(match *atom {
        Atom::Xd { s, .. } => Atom::Xd { mode: slot, s },
        Atom::Zd { s, .. } => Atom::Zd { mode: slot, s },
        Atom::Fourier { k, .. } => Atom::Fourier { mode: slot, k },
        Atom::PhaseQ { f, .. } => Atom::PhaseQ { mode: slot, f },
        Atom::PhaseP { f, .. } => Atom::PhaseP { mode: slot, f },
        Atom::Squeeze { t, .. } => Atom::Squeeze { mode: slot, t },
        Atom::Cz { .. } | Atom::Cx { .. } => {
            return Err(Error::Protocol(
                "a preparation word must act on a single mode".into(),
            ))
        }
    })
}

/// The adapted-readout distribution computed without applying the gate:
/// the position-phase is folded into the measured observable instead, by a
/// direct basis-transform computation on a single-mode state. Exists as an
/// independent cross-check of the gate-then-readout path.
pub fn observable_distribution(
    sim: &FockSim,
    state: &FockState,
    delta: PolyCoeffs,
) -> Result<Vec<f64>> {
    let psi = state.single_mode_vector()?;
    let cache = sim.cache();
    let vq = cache.q_eigenvectors();
    let xs = cache.grid();
    let d = xs.len();

    // Position-basis amplitudes, phased by the polynomial.
    let mut phased = vec![Complex64::default(); d];
    for j in 0..d {
        let mut amp = Complex64::default();
        for n in 0..d {
            amp += vq[(n, j)] * psi[n];
        }
        phased[j] = amp * Complex64::from_polar(1.0, delta.eval(xs[j]));
    }

    // Back to the number basis, then overlap with each momentum grid
    // vector.
    let mut fock = vec![Complex64::default(); d];
    for n in 0..d {
        let mut acc = Complex64::default();
        for j in 0..d {
            acc += vq[(n, j)] * phased[j];
        }
        fock[n] = acc;
    }
    let mut probs = vec![0.0; d];
    for (k, p) in probs.iter_mut().enumerate() {
        let bp = cache.basis_vector(Quadrature::P, k);
        let mut amp = Complex64::default();
        for n in 0..d {
            amp += bp[n].conj() * fock[n];
        }
        *p = amp.norm_sqr();
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn receive_measure_roundtrip() {
        let mut server = Server::new(24);
        server.receive(5, 0.5, &GateWord::identity()).unwrap();
        assert_eq!(server.live(), &[5]);
        let probs = server.distribution(5).unwrap();
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "distribution must be normalized: {total}");

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = server.measure(5, PolyCoeffs::ZERO, &mut rng).unwrap();
        assert!(r.value.is_finite());
        assert!(r.prob > 0.0);
        assert_eq!(server.state().n_modes(), 0);
        assert!(server.live().is_empty());
    }

    #[test]
    fn the_register_map_survives_projections() {
        let mut server = Server::new(16);
        for node in [10, 20, 30] {
            server.receive(node, 0.7, &GateWord::identity()).unwrap();
        }
        server.couple(10, 20, 1).unwrap();
        server.couple(20, 30, -1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        server.measure(20, PolyCoeffs::ZERO, &mut rng).unwrap();
        assert_eq!(server.live(), &[10, 30]);
        assert_eq!(server.mode_of(30).unwrap(), 1);
        assert!(server.couple(10, 20, 1).is_err(), "measured nodes are gone");
    }

    #[test]
    fn double_transfer_is_refused() {
        let mut server = Server::new(8);
        server.receive(0, 0.5, &GateWord::identity()).unwrap();
        assert!(server.receive(0, 0.5, &GateWord::identity()).is_err());
    }

    #[test]
    fn the_two_readout_paths_agree() {
        // Gate-then-readout versus folding the phase into the observable:
        // identical distributions up to roundoff.
        let sim = FockSim::new(36);
        let state = sim.squeezed(0.8).unwrap();
        let delta = PolyCoeffs::new(0.3, -0.5, 0.2);

        let mut gated = state.clone();
        sim.apply_atom(&mut gated, &Atom::PhaseQ { mode: 0, f: delta }).unwrap();
        let path_a = sim.probabilities(&gated, 0, Quadrature::P).unwrap();
        let path_b = observable_distribution(&sim, &state, delta).unwrap();

        let dev = path_a
            .iter()
            .zip(&path_b)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-9, "paths disagree by {dev}");
    }
}
