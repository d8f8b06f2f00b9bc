//! The classical channel of a delegated run.
//!
//! Exactly three kinds of message cross the wire, and the transcript is the
//! complete record of them. The canonical exchange order is: one `Transfer`
//! per node (ascending node id) while the client hands over the prepared
//! modes, then one `Instruction`/`Outcome` pair per measured node, in the
//! graph's measurement order. [`Transcript::check_order`] enforces this
//! shape mechanically.
//!
//! Nothing else is ever serialized here — in particular no prerotation
//! polynomials, no fresh shifts, no program slots, and no correction
//! frames. The schema is small enough to audit field by field, and the
//! test suite scans real transcripts for exactly that.

use crate::error::{Error, Result};
use crate::graph::ModeGraph;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One message on the classical channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Message {
    /// The client hands mode `node` (already prepared) to the server.
    Transfer {
        /// Graph node id of the transferred mode.
        node: usize,
    },
    /// The client tells the server which adapted readout to perform.
    Instruction {
        /// Graph node id to measure.
        node: usize,
        /// Polynomial coefficients `(a, b, c)` of the readout adaptation.
        delta: [f64; 3],
    },
    /// The server reports a readout result.
    Outcome {
        /// Graph node id that was measured.
        node: usize,
        /// The measured quadrature value.
        value: f64,
    },
}

/// The full record of one run's classical traffic.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    /// Messages in the order they were exchanged.
    pub messages: Vec<Message>,
}

impl Transcript {
    /// An empty transcript.
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a message.
    pub fn push(&mut self, m: Message) {
        self.messages.push(m);
    }

    /// All instruction messages, in exchange order.
    pub fn instructions(&self) -> Vec<(usize, [f64; 3])> {
        self.messages
            .iter()
            .filter_map(|m| match m {
                Message::Instruction { node, delta } => Some((*node, *delta)),
                _ => None,
            })
            .collect()
    }

    /// All outcome messages, in exchange order.
    pub fn outcomes(&self) -> Vec<(usize, f64)> {
        self.messages
            .iter()
            .filter_map(|m| match m {
                Message::Outcome { node, value } => Some((*node, *value)),
                _ => None,
            })
            .collect()
    }

    /// Checks the canonical exchange order against a graph: first a
    /// `Transfer` for every node in ascending id order, then an
    /// `Instruction` immediately answered by an `Outcome` for each entry of
    /// `graph.order`, and nothing else.
    pub fn check_order(&self, graph: &ModeGraph) -> Result<()> {
        let mut expected = Vec::with_capacity(graph.n_nodes + 2 * graph.order.len());
        for node in 0..graph.n_nodes {
            expected.push(("transfer", node));
        }
        for &node in &graph.order {
            expected.push(("instruction", node));
            expected.push(("outcome", node));
        }
        if self.messages.len() != expected.len() {
            return Err(Error::MessageOrder(format!(
                "expected {} messages, transcript has {}",
                expected.len(),
                self.messages.len()
            )));
        }
        for (i, (m, (kind, node))) in self.messages.iter().zip(&expected).enumerate() {
            let (got_kind, got_node) = match m {
                Message::Transfer { node } => ("transfer", *node),
                Message::Instruction { node, .. } => ("instruction", *node),
                Message::Outcome { node, .. } => ("outcome", *node),
            };
            if got_kind != *kind || got_node != *node {
                return Err(Error::MessageOrder(format!(
                    "message {i}: expected {kind} for node {node}, got {got_kind} for node {got_node}"
                )));
            }
        }
        Ok(())
    }

    /// Serializes the transcript as JSON lines, one message per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            out.push_str(&serde_json::to_string(m).expect("message serialization is infallible"));
            out.push('\n');
        }
        out
    }

    /// Parses a JSON-lines transcript; blank lines are ignored.
    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut messages = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            messages.push(serde_json::from_str(line)?);
        }
        Ok(Transcript { messages })
    }

    /// Writes the transcript to a JSON-lines file.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_lines())?;
        Ok(())
    }

    /// Reads a transcript from a JSON-lines file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_lines(&std::fs::read_to_string(path)?)
    }
}
