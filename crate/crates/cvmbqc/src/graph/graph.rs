//! Resource-graph and measurement-program descriptions.
//!
//! A [`ModeGraph`] is the classical layout of a measurement-based run: one
//! node per bosonic mode, signed edges for the `q⊗q` couplings that stitch
//! them together, a measurement order, and an explicit wire-successor map
//! naming which neighbor inherits each measured node's logical state. A
//! [`Program`] assigns a measurement to every ordered node — by default a
//! momentum readout preceded by a polynomial position-phase, which is the
//! single measurement shape the delegated protocol ever exposes.

use crate::algebra::PolyCoeffs;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

/// A signed coupling between two modes, serialized as `[a, b, sign]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "(usize, usize, i8)", from = "(usize, usize, i8)")]
pub struct Edge {
    /// First endpoint.
    pub a: usize,
    /// Second endpoint.
    pub b: usize,
    /// Coupling sign, `+1` or `-1`.
    pub sign: i8,
}

impl Edge {
    /// Creates an edge with the endpoints in canonical (ascending) order.
    pub fn new(a: usize, b: usize, sign: i8) -> Self {
        if a <= b {
            Edge { a, b, sign }
        } else {
            Edge { a: b, b: a, sign }
        }
    }

    /// True when `node` is one of the endpoints.
    pub fn touches(&self, node: usize) -> bool {
        self.a == node || self.b == node
    }

    /// The endpoint opposite to `node`, if `node` is an endpoint.
    pub fn other(&self, node: usize) -> Option<usize> {
        if self.a == node {
            Some(self.b)
        } else if self.b == node {
            Some(self.a)
        } else {
            None
        }
    }
}

impl From<(usize, usize, i8)> for Edge {
    fn from(t: (usize, usize, i8)) -> Self {
        Edge { a: t.0, b: t.1, sign: t.2 }
    }
}

impl From<Edge> for (usize, usize, i8) {
    fn from(e: Edge) -> Self {
        (e.a, e.b, e.sign)
    }
}

/// Override for how a non-input node is prepared.
///
/// Ordinary cluster nodes are squeezed toward zero momentum; a node squeezed
/// toward zero *position* instead behaves as a soft disconnector, since the
/// couplings it joins approach the identity as its position sharpens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodePrep {
    /// Momentum-squeezed ancilla with the given squeeze parameter.
    Momentum {
        /// Squeeze strength (momentum variance `ω²/2`).
        omega: f64,
    },
    /// Position-squeezed ancilla (position variance `ω²/2`).
    Position {
        /// Squeeze strength.
        omega: f64,
    },
}

impl NodePrep {
    fn validate(&self) -> Result<()> {
        let omega = match self {
            NodePrep::Momentum { omega } | NodePrep::Position { omega } => *omega,
        };
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidSqueeze(omega));
        }
        Ok(())
    }
}

/// The layout of one measurement-based computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeGraph {
    /// Number of nodes; node ids are `0..n_nodes`.
    pub n_nodes: usize,
    /// Optional display names, one per node.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<String>,
    /// Signed couplings.
    pub edges: Vec<Edge>,
    /// Nodes that receive externally supplied input states.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<usize>,
    /// Nodes left unmeasured; they carry the result.
    pub outputs: Vec<usize>,
    /// Measurement order over all non-output nodes.
    pub order: Vec<usize>,
    /// Wire successor of each measured node that passes its state on.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub successors: BTreeMap<usize, usize>,
    /// Preparation overrides for non-input nodes.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub preps: BTreeMap<usize, NodePrep>,
}

impl ModeGraph {
    /// Display name for a node (its id when no name was given).
    pub fn name(&self, node: usize) -> String {
        self.names.get(node).cloned().unwrap_or_else(|| format!("n{node}"))
    }

    /// Node id for a display name.
    pub fn node_named(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Neighbors of a node with the coupling signs.
    pub fn neighbors(&self, node: usize) -> Vec<(usize, i8)> {
        self.edges
            .iter()
            .filter_map(|e| e.other(node).map(|o| (o, e.sign)))
            .collect()
    }

    /// The wire successor of a measured node, if any.
    pub fn successor(&self, node: usize) -> Option<usize> {
        self.successors.get(&node).copied()
    }

    /// Checks every structural constraint; all ids in range, edges simple,
    /// order and outputs partitioning the nodes, successors running along
    /// edges toward later nodes.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_nodes;
        if !self.names.is_empty() && self.names.len() != n {
            return Err(Error::InvalidGraph(format!(
                "{} names for {n} nodes",
                self.names.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) leaves the node range 0..{n}",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-coupling on node {}", e.a)));
            }
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has sign {}, expected +1 or -1",
                    e.a, e.b, e.sign
                )));
            }
            let key = (e.a.min(e.b), e.a.max(e.b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge between {} and {}",
                    key.0, key.1
                )));
            }
        }
        for (label, list) in [("input", &self.inputs), ("output", &self.outputs), ("order", &self.order)] {
            let mut dedup = BTreeSet::new();
            for &v in list.iter() {
                if v >= n {
                    return Err(Error::InvalidGraph(format!("{label} node {v} out of range")));
                }
                if !dedup.insert(v) {
                    return Err(Error::InvalidGraph(format!("{label} node {v} listed twice")));
                }
            }
        }
        let ordered: BTreeSet<usize> = self.order.iter().copied().collect();
        let outs: BTreeSet<usize> = self.outputs.iter().copied().collect();
        if !ordered.is_disjoint(&outs) {
            return Err(Error::InvalidGraph("a node is both measured and an output".into()));
        }
        if ordered.len() + outs.len() != n {
            return Err(Error::InvalidGraph(
                "every node must appear exactly once in the order or the outputs".into(),
            ));
        }
        let position: BTreeMap<usize, usize> =
            self.order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut used_successors = BTreeSet::new();
        for (&from, &to) in &self.successors {
            if !ordered.contains(&from) {
                return Err(Error::InvalidGraph(format!(
                    "successor listed for unmeasured node {from}"
                )));
            }
            if self.edges.iter().all(|e| !(e.touches(from) && e.touches(to)) || from == to) {
                return Err(Error::InvalidGraph(format!(
                    "successor {to} of node {from} is not a neighbor"
                )));
            }
            if let Some(&tp) = position.get(&to) {
                if tp <= position[&from] {
                    return Err(Error::InvalidGraph(format!(
                        "successor {to} of node {from} is measured first"
                    )));
                }
            }
            if !used_successors.insert(to) {
                return Err(Error::InvalidGraph(format!(
                    "node {to} is the successor of two different nodes"
                )));
            }
        }
        let input_set: BTreeSet<usize> = self.inputs.iter().copied().collect();
        for (&node, prep) in &self.preps {
            if node >= n {
                return Err(Error::InvalidGraph(format!("prep override on node {node} out of range")));
            }
            if input_set.contains(&node) {
                return Err(Error::InvalidGraph(format!(
                    "node {node} is an input and cannot carry a prep override"
                )));
            }
            prep.validate()?;
        }
        Ok(())
    }

    /// Serializes to pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses from JSON and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let g: ModeGraph = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    /// Writes the graph to a JSON file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json()?)?)
    }

    /// Reads and validates a graph from a JSON file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for ModeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} nodes, {} edges, {} inputs, {} outputs",
            self.n_nodes,
            self.edges.len(),
            self.inputs.len(),
            self.outputs.len()
        )?;
        write!(f, "order:")?;
        for &j in &self.order {
            write!(f, " {}", self.name(j))?;
        }
        Ok(())
    }
}

/// What happens at one measured node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeMeasurement {
    /// Apply the position-phase `e^{if(q)}` and read out momentum — the
    /// standard (and, under delegation, the only visible) measurement.
    ShearedMomentum {
        /// Phase polynomial applied before the momentum readout.
        poly: PolyCoeffs,
    },
    /// Read out position directly, deleting the node from the cluster.
    Position,
}

impl NodeMeasurement {
    /// Plain momentum readout (zero phase polynomial).
    pub fn plain() -> Self {
        NodeMeasurement::ShearedMomentum { poly: PolyCoeffs::default() }
    }
}

/// Measurement assignments for a graph's ordered nodes.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Program {
    /// Measurement per node; missing entries default to a plain momentum
    /// readout.
    pub measurements: BTreeMap<usize, NodeMeasurement>,
}

impl Program {
    /// Builds a program from explicit node assignments.
    pub fn new(measurements: impl IntoIterator<Item = (usize, NodeMeasurement)>) -> Self {
        Program { measurements: measurements.into_iter().collect() }
    }

    /// The measurement at a node (plain momentum readout when unassigned).
    pub fn measurement_for(&self, node: usize) -> NodeMeasurement {
        self.measurements.get(&node).copied().unwrap_or_else(NodeMeasurement::plain)
    }

    /// Checks the program against a graph: assignments must target measured
    /// nodes, polynomials must be finite, and position readouts must not
    /// claim a wire successor.
    pub fn validate(&self, graph: &ModeGraph) -> Result<()> {
        let ordered: BTreeSet<usize> = graph.order.iter().copied().collect();
        for (&node, meas) in &self.measurements {
            if !ordered.contains(&node) {
                return Err(Error::InvalidGraph(format!(
                    "program assigns a measurement to unmeasured node {node}"
                )));
            }
            match meas {
                NodeMeasurement::ShearedMomentum { poly } => {
                    for k in 0..3 {
                        if !poly[k].is_finite() {
                            return Err(Error::InvalidData(format!(
                                "non-finite coefficient in the polynomial at node {node}"
                            )));
                        }
                    }
                }
                NodeMeasurement::Position => {
                    if graph.successor(node).is_some() {
                        return Err(Error::InvalidGraph(format!(
                            "node {node} is read out in position but names a successor"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes to pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Writes the program to a JSON file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json()?)?)
    }

    /// Reads a program from a JSON file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
