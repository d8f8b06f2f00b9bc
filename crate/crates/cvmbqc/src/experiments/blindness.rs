//! Blindness experiments: nothing the server receives — neither the
//! classical instruction stream nor the quantum states it is handed — may
//! depend detectably on which program the client is running.

use crate::algebra::{Atom, PolyCoeffs};
use crate::backend::fock::{accumulate_density, trace_distance, FockSim};
use crate::error::{Error, Result};
use crate::graph::{single_wire, NodeMeasurement, Program};
use crate::protocol::{run_delegated, RunConfig, Secrets};
use nalgebra::{Complex, DMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type C64 = Complex<f64>;

/// A stratified sample of `n` points, uniform on `[-half_width, half_width]`:
/// one point per equal-width stratum, jittered within it. Keeps empirical
/// distributions within O(1/n) of the population instead of O(1/√n).
/// Unshuffled, the points come out in ascending stratum order.
pub fn stratified(n: usize, half_width: f64, rng: &mut ChaCha8Rng, shuffle: bool) -> Vec<f64> {
    let width = 2.0 * half_width / n as f64;
    let mut values: Vec<f64> = (0..n)
        .map(|i| -half_width + (i as f64 + rng.gen::<f64>()) * width)
        .collect();
    if shuffle {
        values.shuffle(rng);
    }
    values
}

/// A stratified sample visited in rank-one lattice order: point `i` lands in
/// stratum `i·m mod n` with `m/n` near the golden ratio. Summed index-wise
/// with an ascending stratified stream, the pairs cover the unit square as a
/// low-discrepancy set, so the sum's empirical distribution also stays within
/// O(1/n) of its population convolution.
pub fn lattice(n: usize, half_width: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut m = ((n as f64 * 0.618_033_988_749_895).round() as usize).max(1);
    while gcd(m, n) != 1 {
        m += 1;
    }
    let width = 2.0 * half_width / n as f64;
    (0..n)
        .map(|i| {
            let stratum = (i * m) % n;
            -half_width + (stratum as f64 + rng.gen::<f64>()) * width
        })
        .collect()
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Two-sample Kolmogorov–Smirnov statistic: the largest gap between the two
/// empirical distribution functions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        // Advance both samples past the next distinct value so ties never
        // register as a spurious gap.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic at significance 0.01 for
/// two samples of `n` points each (asymptotic form).
pub fn ks_critical(n: usize) -> f64 {
    1.6276 * (2.0 / n as f64).sqrt()
}

/// Distinguishability of the classical instruction streams of two programs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalBlindnessReport {
    /// Runs per program.
    pub n: usize,
    /// Half-width of the secret distributions.
    pub half_width: f64,
    /// KS statistic between the two programs' instruction streams, one per
    /// instruction coefficient.
    pub ks: [f64; 3],
    /// Rejection threshold at significance 0.01.
    pub critical: f64,
}

impl ClassicalBlindnessReport {
    /// True when no coefficient stream lets the server tell the programs
    /// apart at the 0.01 level.
    pub fn passes(&self) -> bool {
        self.ks.iter().all(|&d| d < self.critical)
    }
}

/// Runs two single-readout programs `n` times each through the full
/// delegated protocol and compares what the server saw.
///
/// Each run uses fresh scripted secrets drawn from variance-reduced streams
/// (stratified, with the prerotation shift and the outcome shift paired on a
/// rank-one lattice, since the first instruction coefficient is their sum).
/// The instruction coefficients are read back from the run transcripts —
/// the experiment measures the protocol's actual wire format, not a
/// shortcut formula.
pub fn classical_blindness(
    slot_a: PolyCoeffs,
    slot_b: PolyCoeffs,
    half_width: f64,
    n: usize,
    dim: usize,
    seed: u64,
) -> Result<ClassicalBlindnessReport> {
    let graph = single_wire(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut streams = [[0.0f64; 3].map(|_| Vec::new()), [0.0f64; 3].map(|_| Vec::new())];
    for (k, &slot) in [slot_a, slot_b].iter().enumerate() {
        let program = Program::new([(0usize, NodeMeasurement::ShearedMomentum { poly: slot })]);
        let theta1 = stratified(n, half_width, &mut rng, false);
        let shifts = lattice(n, half_width, &mut rng);
        let theta2 = stratified(n, half_width, &mut rng, true);
        let theta3 = stratified(n, half_width, &mut rng, true);
        for i in 0..n {
            let secrets = Secrets::Scripted {
                theta: BTreeMap::from([(0usize, [theta1[i], theta2[i], theta3[i]])]),
                shifts: BTreeMap::from([(0usize, shifts[i])]),
            };
            let config = RunConfig { dim, seed: seed ^ i as u64, ..RunConfig::default() };
            let outcome = run_delegated(&graph, &program, &config, &secrets)?;
            let instructions = outcome.transcript.instructions();
            let (node, delta) = instructions
                .first()
                .copied()
                .ok_or_else(|| Error::Protocol("run produced no instruction".into()))?;
            if node != 0 {
                return Err(Error::Protocol(format!("expected node 0 first, got {node}")));
            }
            for c in 0..3 {
                streams[k][c].push(delta[c]);
            }
        }
    }
    let ks = [0, 1, 2].map(|c| ks_two_sample(&streams[0][c], &streams[1][c]));
    Ok(ClassicalBlindnessReport { n, half_width, ks, critical: ks_critical(n) })
}

/// Distinguishability of the quantum states served to the measurement, as
/// the secret outcome shift widens.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumBlindnessReport {
    /// Half-widths swept, widest last.
    pub half_widths: Vec<f64>,
    /// Trace distance between the two programs' served ensembles, per
    /// half-width.
    pub distances: Vec<f64>,
    /// Trace distance between two independent estimates of the *same*
    /// ensemble at the widest half-width — the sampling floor the distances
    /// above sit on.
    pub floor: f64,
    /// States averaged per ensemble.
    pub n: usize,
}

/// Builds each program's served ensemble and measures how far apart they are.
///
/// At measurement time the server holds the prepared mode with the
/// instruction phase applied on top; the client's prerotation cancels
/// against the instruction exactly, leaving the program slot plus the
/// secret shift acting on the raw input. Couplings and ancillas are
/// program-independent and attaching them is a fixed isometry, which leaves
/// trace distance unchanged — so the single-mode ensembles compared here
/// have exactly the distinguishability of the full served registers.
pub fn quantum_blindness(
    slot_a: PolyCoeffs,
    slot_b: PolyCoeffs,
    omega: f64,
    dim: usize,
    half_widths: &[f64],
    n: usize,
    seed: u64,
) -> Result<QuantumBlindnessReport> {
    let sim = FockSim::new(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut distances = Vec::new();
    for &hw in half_widths {
        let rho_a = served_ensemble(&sim, slot_a, omega, hw, n, &mut rng)?;
        let rho_b = served_ensemble(&sim, slot_b, omega, hw, n, &mut rng)?;
        distances.push(trace_distance(&rho_a, &rho_b));
    }
    let widest = half_widths.iter().copied().fold(0.0f64, f64::max);
    let again = served_ensemble(&sim, slot_a, omega, widest, n, &mut rng)?;
    let first = served_ensemble(&sim, slot_a, omega, widest, n, &mut rng)?;
    let floor = trace_distance(&again, &first);
    Ok(QuantumBlindnessReport {
        half_widths: half_widths.to_vec(),
        distances,
        floor,
        n,
    })
}

/// Average served state for one program: the slot phase plus a stratified
/// random momentum kick on the squeezed input.
fn served_ensemble(
    sim: &FockSim,
    slot: PolyCoeffs,
    omega: f64,
    half_width: f64,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DMatrix<C64>> {
    let mut rho = DMatrix::zeros(sim.dim(), sim.dim());
    let base = sim.squeezed(omega)?;
    for r in stratified(n, half_width, rng, false) {
        let mut state = base.clone();
        let mut f = slot;
        f.a += r;
        sim.apply_atom(&mut state, &Atom::PhaseQ { mode: 0, f })?;
        accumulate_density(&mut rho, &state, 1.0 / n as f64)?;
    }
    Ok(rho)
}
