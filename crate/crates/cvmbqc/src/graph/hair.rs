//! Hair gadgets: position readouts disguised as momentum chains.
//!
//! Deleting a node from a cluster calls for a position readout, which would
//! stand out in a protocol whose every visible measurement is a sheared
//! momentum readout. The gadget hangs a four-node chain off the node to be
//! deleted and replaces the position readout by five sheared momentum
//! readouts: the node teleports down the chain through four hops while the
//! slot pattern `[0, q²/2, q²/2, 0]` turns the terminal momentum readout
//! into an effective position readout of the original node. In matrix form,
//! with `F` the quarter turn and `D_b` the shear adding `b·q` to `p`, the
//! chain transfer `F·D_0·F·D_1·F·D_1·F·D_0` carries momentum onto position
//! exactly, so the disguise is algebraically perfect; only the finite
//! squeezing of the chain ancillas costs fidelity.

use crate::error::{Error, Result};
use crate::graph::graph::{Edge, ModeGraph, NodeMeasurement, Program};

/// Replaces the position readout at `target` with a hair chain.
///
/// Returns the extended graph, the rewritten program, and the ids of the
/// four new chain nodes (attachment-side first).
pub fn implant_hair(
    graph: &ModeGraph,
    program: &Program,
    target: usize,
) -> Result<(ModeGraph, Program, Vec<usize>)> {
    graph.validate()?;
    program.validate(graph)?;
    if !graph.order.contains(&target) {
        return Err(Error::InvalidGraph(format!("node {target} is not measured")));
    }
    if program.measurement_for(target) != NodeMeasurement::Position {
        return Err(Error::InvalidGraph(format!(
            "node {target} does not carry a position readout"
        )));
    }
    let base = graph.n_nodes;
    let hairs: Vec<usize> = (base..base + 4).collect();

    let mut g = graph.clone();
    g.n_nodes += 4;
    if !g.names.is_empty() {
        let stem = g.name(target);
        g.names.extend((1..=4).map(|k| format!("{stem}.h{k}")));
    }
    let mut prev = target;
    for &h in &hairs {
        g.edges.push(Edge::new(prev, h, 1));
        g.successors.insert(prev, h);
        prev = h;
    }
    let pos = g
        .order
        .iter()
        .position(|&j| j == target)
        .expect("target is measured");
    for (k, &h) in hairs.iter().enumerate() {
        g.order.insert(pos + 1 + k, h);
    }
    g.validate()?;

    let mut p = program.clone();
    let bend = NodeMeasurement::ShearedMomentum { poly: [0.0, 1.0, 0.0].into() };
    p.measurements.insert(target, NodeMeasurement::plain());
    p.measurements.insert(hairs[0], bend);
    p.measurements.insert(hairs[1], bend);
    p.measurements.insert(hairs[2], NodeMeasurement::plain());
    p.measurements.insert(hairs[3], NodeMeasurement::plain());
    p.validate(&g)?;
    Ok((g, p, hairs))
}

/// Hangs an unmeasured four-node chain off every node of the graph.
///
/// The chains are pure padding until a deletion is wanted: every node looks
/// the same whether or not its hair will ever be used, so the choice of
/// which nodes get carved out stays hidden. Chain nodes join the outputs
/// (nothing measures them by default); committing a chain to an actual
/// deletion is [`implant_hair`]'s job. Returns the padded graph and, per
/// original node, the ids of its chain (attachment-side first).
pub fn implant_hairs(
    graph: &ModeGraph,
) -> Result<(ModeGraph, std::collections::BTreeMap<usize, [usize; 4]>)> {
    graph.validate()?;
    let mut g = graph.clone();
    let mut chains = std::collections::BTreeMap::new();
    for node in 0..graph.n_nodes {
        let base = g.n_nodes;
        g.n_nodes += 4;
        if !g.names.is_empty() {
            let stem = graph.name(node);
            g.names.extend((1..=4).map(|k| format!("{stem}.h{k}")));
        }
        g.edges.push(Edge::new(node, base, 1));
        for k in 0..3 {
            g.edges.push(Edge::new(base + k, base + k + 1, 1));
        }
        g.outputs.extend(base..base + 4);
        chains.insert(node, [base, base + 1, base + 2, base + 3]);
    }
    g.validate()?;
    Ok((g, chains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{normalize, GateWord};
    use crate::graph::graph::{Edge, Program};
    use std::collections::BTreeMap;

    fn carve_target() -> (ModeGraph, Program) {
        // a — t — b with t read out in position
        let g = ModeGraph {
            n_nodes: 3,
            names: vec!["a".into(), "t".into(), "b".into()],
            edges: vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1)],
            inputs: vec![],
            outputs: vec![0, 2],
            order: vec![1],
            successors: BTreeMap::new(),
            preps: BTreeMap::new(),
        };
        let p = Program::new([(1, NodeMeasurement::Position)]);
        (g, p)
    }

    #[test]
    fn implant_extends_the_graph_consistently() {
        let (g, p) = carve_target();
        let (g2, p2, hairs) = implant_hair(&g, &p, 1).unwrap();
        assert_eq!(g2.n_nodes, 7);
        assert_eq!(hairs, vec![3, 4, 5, 6]);
        assert_eq!(g2.order, vec![1, 3, 4, 5, 6]);
        assert_eq!(g2.successor(1), Some(3));
        assert_eq!(g2.successor(6), None);
        assert_eq!(g2.name(4), "t.h2");
        assert_eq!(p2.measurement_for(1), NodeMeasurement::plain());
        assert_eq!(
            p2.measurement_for(4),
            NodeMeasurement::ShearedMomentum { poly: [0.0, 1.0, 0.0].into() }
        );
    }

    #[test]
    fn implant_requires_a_position_readout() {
        let (g, _) = carve_target();
        let p = Program::new([(1, NodeMeasurement::plain())]);
        assert!(implant_hair(&g, &p, 1).is_err());
    }

    #[test]
    fn padding_hangs_a_chain_off_every_node() {
        use crate::graph::brickwork::two_wire_brickwork;
        let (g, _) = two_wire_brickwork(2, &[]).unwrap();
        let (g2, chains) = implant_hairs(&g).unwrap();
        assert_eq!(g2.n_nodes, g.n_nodes + 4 * g.n_nodes);
        assert_eq!(chains.len(), g.n_nodes);
        assert_eq!(g2.edges.len(), g.edges.len() + 4 * g.n_nodes);
        assert_eq!(g2.order, g.order);
        assert_eq!(g2.inputs, g.inputs);
        for (&node, chain) in &chains {
            assert!(g2.edges.contains(&Edge::new(node, chain[0], 1)));
            assert!(g2.edges.contains(&Edge::new(chain[2], chain[3], 1)));
            for h in chain {
                assert!(g2.outputs.contains(h));
            }
        }
        assert_eq!(g2.name(chains[&0][0]), "A0.h1");
    }

    #[test]
    fn padding_degenerate_graphs() {
        let mut g = ModeGraph {
            n_nodes: 0,
            names: vec![],
            edges: vec![],
            inputs: vec![],
            outputs: vec![],
            order: vec![],
            successors: Default::default(),
            preps: Default::default(),
        };
        let (still_empty, chains) = implant_hairs(&g).unwrap();
        assert_eq!(still_empty.n_nodes, 0);
        assert!(chains.is_empty());

        g.n_nodes = 1;
        g.outputs = vec![0];
        let (five, _) = implant_hairs(&g).unwrap();
        assert_eq!(five.n_nodes, 5);
        assert_eq!(five.edges.len(), 4);
    }

    #[test]
    fn chain_transfer_turns_momentum_into_position() {
        // the gadget's claim, checked in the gate algebra: the four-hop
        // transfer U pulls the terminal momentum back onto the original
        // position, i.e. U†·e^{−isp}·U = e^{−isq} exactly for every s
        let transfer: GateWord =
            "F@0 Dq(0,0,0)@0 F@0 Dq(0,1,0)@0 F@0 Dq(0,1,0)@0 F@0 Dq(0,0,0)@0".parse().unwrap();
        let s = 0.83;
        let conjugated = transfer
            .inverse()
            .then(&format!("X({s})@0").parse::<GateWord>().unwrap())
            .then(&transfer);
        let nf = normalize(&conjugated, 1).unwrap();
        assert!(nf.core.is_empty(), "leftover core atoms {:?}", nf.core);
        assert!(nf.displacement[0].abs() < 1e-12, "no residual momentum kick");
        assert!(
            (nf.displacement[1] + s).abs() < 1e-12,
            "momentum readout becomes a position readout: got p-kick {}",
            nf.displacement[1]
        );
    }
}
