//! The client side of a delegated run.
//!
//! The client owns everything private: the program's phase polynomials, the
//! per-node blinding prerotations, the fresh shifts mixed into every
//! instruction, and the frame ledger that ties them together. The server
//! only ever sees prepared modes, instruction polynomials, and its own
//! readout values.
//!
//! Randomness discipline: all secrets are drawn from the single RNG passed
//! to [`Client::new`], in a fixed order — prerotations for nodes in
//! ascending id order (three coefficients each), then shifts along the
//! measurement order, then disconnector offsets in ascending node order.
//! Running with the same seed therefore reproduces a run exactly.

use crate::algebra::{Atom, GateWord, PolyCoeffs};
use crate::error::{Error, Result};
use crate::graph::{ModeGraph, NodeMeasurement, NodePrep, Program};
use crate::protocol::frame::{Frame, FrameLedger};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How the client draws its private randomness.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Secrets {
    /// Fresh uniform secrets: prerotation coefficients from
    /// `±theta_half_width`, instruction shifts and disconnector offsets
    /// from `±r_half_width`.
    Random {
        /// Half-width of the uniform range for prerotation coefficients.
        theta_half_width: f64,
        /// Half-width of the uniform range for shifts and offsets.
        r_half_width: f64,
    },
    /// Fixed secrets, for replays and statistical experiments. Missing
    /// entries default to zero.
    Scripted {
        /// Prerotation coefficients per node.
        theta: BTreeMap<usize, [f64; 3]>,
        /// Instruction shifts per measured node and position offsets per
        /// disconnector.
        shifts: BTreeMap<usize, f64>,
    },
    /// No secrets at all — the run degenerates to ordinary (unblinded)
    /// delegation with the same message flow.
    Open,
}

/// A mode preparation the client hands to the server: a momentum-squeezed
/// ancilla of strength `base_omega` with a private single-mode word (mode
/// index 0) applied on top.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    /// Squeeze strength of the raw ancilla (momentum variance `ω²/2`).
    pub base_omega: f64,
    /// Blinding word applied to the ancilla before transfer.
    pub word: GateWord,
}

/// Client state machine for one delegated run.
#[derive(Debug, Clone)]
pub struct Client {
    graph: ModeGraph,
    program: Program,
    theta: BTreeMap<usize, PolyCoeffs>,
    shifts: BTreeMap<usize, f64>,
    ledger: FrameLedger,
    corrected: BTreeMap<usize, f64>,
    input_omega: f64,
    default_omega: f64,
}

impl Client {
    /// Sets up a client: validates the graph and program, rejects position
    /// readouts (the channel cannot express them), and draws all secrets.
    pub fn new(
        graph: &ModeGraph,
        program: &Program,
        secrets: &Secrets,
        default_omega: f64,
        input_omega: f64,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        graph.validate()?;
        program.validate(graph)?;
        for &node in &graph.order {
            if matches!(program.measurement_for(node), NodeMeasurement::Position) {
                return Err(Error::Protocol(format!(
                    "node {node} asks for a position readout, which cannot be delegated"
                )));
            }
        }

        let disconnectors: Vec<usize> = (0..graph.n_nodes)
            .filter(|n| {
                !graph.order.contains(n)
                    && matches!(graph.preps.get(n), Some(NodePrep::Position { .. }))
            })
            .collect();

        let mut theta = BTreeMap::new();
        let mut shifts = BTreeMap::new();
        match secrets {
            Secrets::Random { theta_half_width, r_half_width } => {
                let (tl, rl) = (*theta_half_width, *r_half_width);
                for node in 0..graph.n_nodes {
                    let draw = PolyCoeffs::new(
                        rng.gen_range(-tl..=tl),
                        rng.gen_range(-tl..=tl),
                        rng.gen_range(-tl..=tl),
                    );
                    theta.insert(node, draw);
                }
                for &node in &graph.order {
                    shifts.insert(node, rng.gen_range(-rl..=rl));
                }
                for &node in &disconnectors {
                    shifts.insert(node, rng.gen_range(-rl..=rl));
                }
            }
            Secrets::Scripted { theta: t, shifts: s } => {
                for (&node, &coeffs) in t {
                    theta.insert(node, coeffs.into());
                }
                for (&node, &v) in s {
                    shifts.insert(node, v);
                }
            }
            Secrets::Open => {}
        }

        let mut ledger = FrameLedger::new();
        for node in 0..graph.n_nodes {
            ledger.insert(node, theta.get(&node).copied().unwrap_or_default());
        }
        for &d in &disconnectors {
            let offset = shifts.get(&d).copied().unwrap_or(0.0);
            if offset != 0.0 {
                for (w, sign) in graph.neighbors(d) {
                    ledger.absorb_momentum(w, sign as f64 * offset);
                }
            }
        }

        Ok(Client {
            graph: graph.clone(),
            program: program.clone(),
            theta,
            shifts,
            ledger,
            corrected: BTreeMap::new(),
            input_omega,
            default_omega,
        })
    }

    /// The preparation the client performs on mode `node` before handing it
    /// over: the base ancilla plus the private blinding word.
    pub fn preparation(&self, node: usize) -> Preparation {
        let is_input = self.graph.inputs.contains(&node);
        let prep = if is_input {
            NodePrep::Momentum { omega: self.input_omega }
        } else {
            self.graph
                .preps
                .get(&node)
                .copied()
                .unwrap_or(NodePrep::Momentum { omega: self.default_omega })
        };
        let mut atoms = Vec::new();
        let (base_omega, offset) = match prep {
            NodePrep::Momentum { omega } => (omega, 0.0),
            NodePrep::Position { omega } => {
                // A quarter rotation turns the momentum-squeezed ancilla
                // into a position-squeezed one, then the private offset
                // displaces it.
                atoms.push(Atom::Fourier { mode: 0, k: 1 });
                (omega, self.shifts.get(&node).copied().unwrap_or(0.0))
            }
        };
        if offset != 0.0 {
            atoms.push(Atom::Xd { mode: 0, s: offset });
        }
        let rotation = self.theta.get(&node).copied().unwrap_or_default();
        if !rotation.is_zero() {
            atoms.push(Atom::PhaseQ { mode: 0, f: rotation.neg() });
        }
        // Atoms were collected in application order; the word convention
        // puts the last-applied atom leftmost.
        atoms.reverse();
        Preparation { base_omega, word: GateWord::new(atoms) }
    }

    /// Records a coupling firing on the server.
    pub fn note_coupling(&mut self, a: usize, b: usize, sign: i8) {
        self.ledger.couple(a, b, sign);
    }

    /// The adapted readout polynomial for `node`, blinded by the node's
    /// prerotation and fresh shift and corrected by its accumulated frame.
    pub fn instruction(&self, node: usize) -> PolyCoeffs {
        let slot = match self.program.measurement_for(node) {
            NodeMeasurement::ShearedMomentum { poly } => poly,
            NodeMeasurement::Position => unreachable!("rejected at construction"),
        };
        self.ledger.instruction(node, slot, self.shifts.get(&node).copied().unwrap_or(0.0))
    }

    /// Absorbs a reported readout value: undoes the fresh shift and passes
    /// the byproduct to the wire successor. Returns the corrected value.
    pub fn absorb(&mut self, node: usize, value: f64) -> f64 {
        let x_eff = value - self.shifts.get(&node).copied().unwrap_or(0.0);
        self.corrected.insert(node, x_eff);
        if let Some(succ) = self.graph.successor(node) {
            self.ledger.teleport(succ, x_eff);
        }
        x_eff
    }

    /// The polynomial that unwinds the residual blinding on an output mode
    /// (applied by the client after the run; the remaining displacement
    /// frame [`Client::frame`] is classical knowledge).
    pub fn alignment(&self, node: usize) -> PolyCoeffs {
        let f = self.ledger.frame(node);
        f.theta_eff.shifted(-f.xi)
    }

    /// The accumulated correction frame of a node.
    pub fn frame(&self, node: usize) -> Frame {
        self.ledger.frame(node)
    }

    /// Corrected readout values (`reported value − fresh shift`) per
    /// measured node, in a map.
    pub fn corrected(&self) -> &BTreeMap<usize, f64> {
        &self.corrected
    }

    /// The fresh shift of a node (used by the lockstep replay machinery).
    pub(crate) fn secret_shift(&self, node: usize) -> f64 {
        self.shifts.get(&node).copied().unwrap_or(0.0)
    }
}
