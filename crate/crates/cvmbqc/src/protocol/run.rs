//! End-to-end delegated runs: client and server driven in lockstep over a
//! schedule, with a transcript of everything that crossed the wire.
//!
//! Two entry points matter:
//!
//! * [`run_delegated`] — one full run (blinded or open, depending on the
//!   secrets), returning the transcript, the corrected readout values, and
//!   the aligned output state.
//! * [`run_twin`] — a blinded run and an unblinded replay stepping through
//!   the same schedule with forced-equal outcomes. Instruction by
//!   instruction the two outcome distributions must match and the final
//!   states must coincide; this is the operational correctness statement
//!   for the blinding layer, and it holds at machine precision rather than
//!   statistically.
//!
//! One RNG (seeded from the config) drives everything in a fixed draw
//! order, so a seed pins down a run exactly.

use crate::backend::fock::FockState;
use crate::error::Result;
use crate::graph::{just_in_time, ModeGraph, Program, Schedule, Step};
use crate::protocol::client::{Client, Preparation, Secrets};
use crate::protocol::frame::Frame;
use crate::protocol::message::{Message, Transcript};
use crate::protocol::server::{weighted_index, Server};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Numeric and randomization settings of a delegated run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Number-basis cutoff of the server's simulator.
    pub dim: usize,
    /// Squeeze strength of ordinary cluster ancillas.
    pub omega: f64,
    /// Squeeze strength of input-node preparations.
    pub input_omega: f64,
    /// Half-width of the uniform range for blinding prerotation
    /// coefficients.
    pub theta_half_width: f64,
    /// Half-width of the uniform range for instruction shifts (and
    /// disconnector offsets).
    pub r_half_width: f64,
    /// RNG seed; equal seeds give byte-identical transcripts.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 24,
            omega: 0.5,
            input_omega: 0.9,
            theta_half_width: 2.0,
            r_half_width: 2.0,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Fresh-random secrets with this config's half-widths.
    pub fn secrets(&self) -> Secrets {
        Secrets::Random {
            theta_half_width: self.theta_half_width,
            r_half_width: self.r_half_width,
        }
    }

    /// Parses a config from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serializes the config to pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Everything a delegated run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// The classical traffic, in canonical order.
    pub transcript: Transcript,
    /// Corrected readout values (reported value minus fresh shift) per
    /// measured node.
    pub corrected: BTreeMap<usize, f64>,
    /// Final joint state of the output modes, blinding unwound.
    pub state: FockState,
    /// Node ids of the output modes, in the state's mode order.
    pub output_nodes: Vec<usize>,
    /// Residual displacement frames on the output nodes — classical
    /// knowledge the client keeps.
    pub frames: BTreeMap<usize, Frame>,
}

/// Runs one delegated computation over the just-in-time schedule.
pub fn run_delegated(
    graph: &ModeGraph,
    program: &Program,
    config: &RunConfig,
    secrets: &Secrets,
) -> Result<RunOutcome> {
    let plan = just_in_time(graph)?;
    run_delegated_with_plan(graph, program, config, secrets, &plan)
}

/// Runs one delegated computation over an explicit (valid) schedule. The
/// transcript is the same for every valid schedule of a graph: transfers
/// are a protocol-level handover, scheduling only decides when the server's
/// simulator attaches each mode.
pub fn run_delegated_with_plan(
    graph: &ModeGraph,
    program: &Program,
    config: &RunConfig,
    secrets: &Secrets,
    plan: &Schedule,
) -> Result<RunOutcome> {
    crate::graph::verify(graph, plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut client =
        Client::new(graph, program, secrets, config.omega, config.input_omega, &mut rng)?;
    let mut server = Server::new(config.dim);
    let mut transcript = Transcript::new();

    let preparations: Vec<Preparation> =
        (0..graph.n_nodes).map(|node| client.preparation(node)).collect();
    for node in 0..graph.n_nodes {
        transcript.push(Message::Transfer { node });
    }

    for step in &plan.steps {
        match *step {
            Step::Prep { node } => {
                let prep = &preparations[node];
                server.receive(node, prep.base_omega, &prep.word)?;
            }
            Step::Couple { a, b, sign } => {
                server.couple(a, b, sign)?;
                client.note_coupling(a, b, sign);
            }
            Step::Measure { node } => {
                let delta = client.instruction(node);
                transcript.push(Message::Instruction { node, delta: delta.into() });
                let readout = server.measure(node, delta, &mut rng)?;
                transcript.push(Message::Outcome { node, value: readout.value });
                client.absorb(node, readout.value);
            }
        }
    }

    for &node in graph.outputs.iter() {
        server.apply_phase(node, client.alignment(node))?;
    }

    transcript.check_order(graph)?;
    let corrected = client.corrected().clone();
    let frames = graph
        .outputs
        .iter()
        .map(|&node| (node, client.frame(node)))
        .collect();
    let (state, output_nodes) = server.into_state();
    Ok(RunOutcome { transcript, corrected, state, output_nodes, frames })
}

/// Result of a blinded run and its forced-outcome unblinded replay.
#[derive(Debug, Clone)]
pub struct TwinReport {
    /// The blinded run's outcome.
    pub blind: RunOutcome,
    /// Final output state of the unblinded replay.
    pub plain_state: FockState,
    /// Fidelity between the aligned blinded output and the replay output.
    pub fidelity: f64,
    /// Largest pointwise deviation between the two outcome distributions
    /// across all readouts.
    pub max_distribution_dev: f64,
}

/// Runs a blinded computation and an unblinded twin in lockstep.
///
/// At each readout the twin applies its own (frame-corrected, secret-free)
/// instruction plus a momentum kick by the blinded run's fresh shift; its
/// outcome distribution over the grid then matches the blinded one point
/// by point, and both states are projected onto the same sampled index.
/// After unwinding the blinding from the blinded outputs, the two final
/// states agree up to global phase.
pub fn run_twin(graph: &ModeGraph, program: &Program, config: &RunConfig) -> Result<TwinReport> {
    let plan = just_in_time(graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let secrets = config.secrets();
    let mut blind_client =
        Client::new(graph, program, &secrets, config.omega, config.input_omega, &mut rng)?;
    let mut plain_client = Client::new(
        graph,
        program,
        &Secrets::Open,
        config.omega,
        config.input_omega,
        &mut rng,
    )?;
    let mut blind_server = Server::new(config.dim);
    let mut plain_server = Server::new(config.dim);
    let mut transcript = Transcript::new();
    for node in 0..graph.n_nodes {
        transcript.push(Message::Transfer { node });
    }

    let mut max_dev = 0.0f64;
    for step in &plan.steps {
        match *step {
            Step::Prep { node } => {
                let bp = blind_client.preparation(node);
                blind_server.receive(node, bp.base_omega, &bp.word)?;
                let pp = plain_client.preparation(node);
                plain_server.receive(node, pp.base_omega, &pp.word)?;
            }
            Step::Couple { a, b, sign } => {
                blind_server.couple(a, b, sign)?;
                blind_client.note_coupling(a, b, sign);
                plain_server.couple(a, b, sign)?;
                plain_client.note_coupling(a, b, sign);
            }
            Step::Measure { node } => {
                let r = blind_client.secret_shift(node);

                let delta_b = blind_client.instruction(node);
                transcript.push(Message::Instruction { node, delta: delta_b.into() });
                blind_server.apply_phase(node, delta_b)?;
                let probs_b = blind_server.distribution(node)?;

                let delta_p = plain_client.instruction(node);
                plain_server.apply_phase(node, delta_p)?;
                // The twin's outcome grid is offset by the fresh shift; a
                // momentum kick lines the distributions up exactly.
                plain_server.apply_phase(node, [r, 0.0, 0.0].into())?;
                let probs_p = plain_server.distribution(node)?;

                let dev = probs_b
                    .iter()
                    .zip(&probs_p)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                max_dev = max_dev.max(dev);

                let index = weighted_index(&probs_b, &mut rng);
                let value = blind_server.sim().grid_value(index);
                transcript.push(Message::Outcome { node, value });
                blind_server.project_at(node, index)?;
                plain_server.project_at(node, index)?;

                blind_client.absorb(node, value);
                plain_client.absorb(node, value - r);
            }
        }
    }

    for &node in graph.outputs.iter() {
        blind_server.apply_phase(node, blind_client.alignment(node))?;
    }
    transcript.check_order(graph)?;

    let corrected = blind_client.corrected().clone();
    let frames = graph
        .outputs
        .iter()
        .map(|&node| (node, blind_client.frame(node)))
        .collect();
    let (blind_state, output_nodes) = blind_server.into_state();
    let (plain_state, _) = plain_server.into_state();
    let fidelity = blind_state.fidelity(&plain_state)?;

    Ok(TwinReport {
        blind: RunOutcome {
            transcript,
            corrected,
            state: blind_state,
            output_nodes,
            frames,
        },
        plain_state,
        fidelity,
        max_distribution_dev: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{single_wire, NodeMeasurement};

    fn wire_program(slots: &[[f64; 3]]) -> Program {
        Program::new(
            slots
                .iter()
                .enumerate()
                .map(|(j, &s)| (j, NodeMeasurement::ShearedMomentum { poly: s.into() })),
        )
    }

    #[test]
    fn equal_seeds_give_identical_transcripts() {
        let graph = single_wire(4).unwrap();
        let program = wire_program(&[[0.2, 0.4, 0.0], [0.0, -0.3, 0.0], [0.1, 0.0, 0.0]]);
        let config = RunConfig { dim: 20, seed: 42, ..RunConfig::default() };
        let a = run_delegated(&graph, &program, &config, &config.secrets()).unwrap();
        let b = run_delegated(&graph, &program, &config, &config.secrets()).unwrap();
        assert_eq!(a.transcript.to_json_lines(), b.transcript.to_json_lines());

        let c = run_delegated(
            &graph,
            &program,
            &RunConfig { seed: 43, ..config },
            &config.secrets(),
        )
        .unwrap();
        assert_ne!(a.transcript.to_json_lines(), c.transcript.to_json_lines());
    }

    #[test]
    fn every_valid_schedule_yields_the_same_run() {
        let graph = single_wire(4).unwrap();
        let program = wire_program(&[[0.3, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]]);
        let config = RunConfig { dim: 20, seed: 7, ..RunConfig::default() };
        let secrets = config.secrets();

        let jit = just_in_time(&graph).unwrap();
        let batch = crate::graph::all_upfront(&graph).unwrap();
        let a = run_delegated_with_plan(&graph, &program, &config, &secrets, &jit).unwrap();
        let b = run_delegated_with_plan(&graph, &program, &config, &secrets, &batch).unwrap();

        assert_eq!(a.transcript, b.transcript, "schedules must not leak into the transcript");
        let f = a.state.fidelity(&b.state).unwrap();
        assert!(f > 1.0 - 1e-9, "schedule changed the final state: fidelity {f}");
    }

    #[test]
    fn open_runs_report_raw_outcomes() {
        let graph = single_wire(3).unwrap();
        let program = wire_program(&[[0.1, 0.2, 0.0], [0.0, 0.0, 0.0]]);
        let config = RunConfig { dim: 20, seed: 3, ..RunConfig::default() };
        let out = run_delegated(&graph, &program, &config, &Secrets::Open).unwrap();
        for (node, value) in out.transcript.outcomes() {
            assert_eq!(out.corrected[&node], value, "no shift to remove in an open run");
        }
        assert_eq!(out.output_nodes, vec![2]);
        assert_eq!(out.state.n_modes(), 1);
    }

    #[test]
    fn twin_runs_match_at_machine_precision() {
        let graph = single_wire(4).unwrap();
        let program = wire_program(&[[0.25, -0.4, 0.0], [0.0, 0.3, 0.1], [0.15, 0.0, 0.0]]);
        let config = RunConfig {
            dim: 24,
            theta_half_width: 1.0,
            r_half_width: 1.0,
            seed: 12,
            ..RunConfig::default()
        };
        let twin = run_twin(&graph, &program, &config).unwrap();
        assert!(
            twin.fidelity > 1.0 - 1e-10,
            "blinding must be invisible after alignment: fidelity {}",
            twin.fidelity
        );
        assert!(
            twin.max_distribution_dev < 1e-10,
            "outcome distributions must match pointwise: {}",
            twin.max_distribution_dev
        );
    }
}
