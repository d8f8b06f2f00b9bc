//! Stock graph layouts: measurement wires and the two-wire brickwork, plus
//! the slot patterns that make one brick compute a chosen two-mode gate.

use crate::algebra::{Atom, GateWord, PolyCoeffs};
use crate::error::{Error, Result};
use crate::graph::graph::{Edge, ModeGraph, NodeMeasurement, Program};
use std::collections::BTreeMap;

/// A single measurement wire of `len` nodes: node 0 is the input, the last
/// node is the output, and every interior step teleports along the chain.
pub fn single_wire(len: usize) -> Result<ModeGraph> {
    if len < 2 {
        return Err(Error::InvalidGraph("a wire needs at least two nodes".into()));
    }
    let g = ModeGraph {
        n_nodes: len,
        names: (0..len).map(|k| format!("w{k}")).collect(),
        edges: (0..len - 1).map(|k| Edge::new(k, k + 1, 1)).collect(),
        inputs: vec![0],
        outputs: vec![len - 1],
        order: (0..len - 1).collect(),
        successors: (0..len - 1).map(|k| (k, k + 1)).collect(),
        preps: BTreeMap::new(),
    };
    g.validate()?;
    Ok(g)
}

/// Assigns one phase polynomial per measured wire node.
pub fn wire_program(slots: &[PolyCoeffs]) -> Program {
    Program::new(
        slots
            .iter()
            .enumerate()
            .map(|(k, &poly)| (k, NodeMeasurement::ShearedMomentum { poly })),
    )
}

/// Two horizontal wires of `cols` nodes each, with vertical couplings at the
/// given `(column, sign)` positions. Node ids run `0..cols` on the top wire
/// and `cols..2·cols` on the bottom one; both wires are measured column by
/// column, top first. Returns the graph and the node ids of each wire.
pub fn two_wire_brickwork(
    cols: usize,
    crossings: &[(usize, i8)],
) -> Result<(ModeGraph, [Vec<usize>; 2])> {
    if cols < 2 {
        return Err(Error::InvalidGraph("a brickwork needs at least two columns".into()));
    }
    let top: Vec<usize> = (0..cols).collect();
    let bottom: Vec<usize> = (cols..2 * cols).collect();
    let mut edges = Vec::new();
    for c in 0..cols - 1 {
        edges.push(Edge::new(top[c], top[c + 1], 1));
        edges.push(Edge::new(bottom[c], bottom[c + 1], 1));
    }
    for &(col, sign) in crossings {
        if col >= cols {
            return Err(Error::InvalidGraph(format!(
                "crossing column {col} outside 0..{cols}"
            )));
        }
        edges.push(Edge::new(top[col], bottom[col], sign));
    }
    let mut order = Vec::new();
    for c in 0..cols - 1 {
        order.push(top[c]);
        order.push(bottom[c]);
    }
    let mut names: Vec<String> = (0..cols).map(|c| format!("A{c}")).collect();
    names.extend((0..cols).map(|c| format!("B{c}")));
    let mut successors = BTreeMap::new();
    for c in 0..cols - 1 {
        successors.insert(top[c], top[c + 1]);
        successors.insert(bottom[c], bottom[c + 1]);
    }
    let g = ModeGraph {
        n_nodes: 2 * cols,
        names,
        edges,
        inputs: vec![top[0], bottom[0]],
        outputs: vec![top[cols - 1], bottom[cols - 1]],
        order,
        successors,
        preps: BTreeMap::new(),
    };
    g.validate()?;
    Ok((g, [top, bottom]))
}

/// Assigns phase polynomials to the measured columns of a two-wire
/// brickwork, one slot list per wire.
pub fn brickwork_program(
    wires: &[Vec<usize>; 2],
    top_slots: &[PolyCoeffs],
    bottom_slots: &[PolyCoeffs],
) -> Result<Program> {
    let measured = wires[0].len() - 1;
    if top_slots.len() != measured || bottom_slots.len() != measured {
        return Err(Error::InvalidData(format!(
            "expected {measured} slots per wire, found {} and {}",
            top_slots.len(),
            bottom_slots.len()
        )));
    }
    let mut m = BTreeMap::new();
    for (c, &poly) in top_slots.iter().enumerate() {
        m.insert(wires[0][c], NodeMeasurement::ShearedMomentum { poly });
    }
    for (c, &poly) in bottom_slots.iter().enumerate() {
        m.insert(wires[1][c], NodeMeasurement::ShearedMomentum { poly });
    }
    Ok(Program { measurements: m })
}

/// Two-mode gates a single brick can realize, given the right slot pattern.
///
/// A brick is the unit cell of the two-wire layout: four measured columns per
/// wire, a `+1` coupling after column 2, and a `-1` coupling after column 4.
/// Each variant names the net transfer the brick applies to the pair of
/// carriers (top wire first) when every readout lands on zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BrickTarget {
    /// `exp(i f(q))` on the top carrier, identity on the bottom.
    PhaseQ(PolyCoeffs),
    /// `exp(i f(p))` on the top carrier, identity on the bottom.
    PhaseP(PolyCoeffs),
    /// Sum gate `exp(-i q_bottom p_top)`: the bottom carrier's position is
    /// added onto the top carrier's position.
    Sum,
}

/// Measurement slots, per wire and column, that steer one brick onto `target`.
///
/// Returns `(top, bottom)` slot quadruples for the four measured columns,
/// valid when every readout lands on zero. Nonzero readouts displace the
/// carriers; the caller recenters later slots (see [`recentered_slot`]) and
/// extracts the leftover displacement as a byproduct frame.
pub fn brick_slots(target: BrickTarget) -> ([PolyCoeffs; 4], [PolyCoeffs; 4]) {
    let z = PolyCoeffs::ZERO;
    let unit_shear = PolyCoeffs::from([0.0, 1.0, 0.0]);
    match target {
        BrickTarget::PhaseQ(v) => ([v, z, z, z], [z, z, z, z]),
        // One teleport turns a position phase into a momentum phase; the
        // reflection compensates the parity picked up by the extra rotations.
        BrickTarget::PhaseP(v) => ([z, v.reflected(), z, z], [z, z, z, z]),
        BrickTarget::Sum => (
            [z, unit_shear, z, unit_shear.neg()],
            [unit_shear, z, z, z],
        ),
    }
}

/// Slot to program at a node whose carrier arrived displaced by `shift` in
/// position: the intended polynomial re-expressed about the shifted origin.
pub fn recentered_slot(base: PolyCoeffs, shift: f64) -> PolyCoeffs {
    base.shifted(-shift)
}

/// The transfer one brick applies to its two carriers, as a gate word.
///
/// `top` and `bottom` are the slot quadruples for the four measured columns
/// of each wire and `outcomes` are the eight readouts in the same layout.
/// Each measured column contributes a teleport step `X(m) F exp(i f(q))` to
/// its wire; the `+1` coupling fires after column 2 and the `-1` coupling
/// after column 4. Mode 0 is the top wire, mode 1 the bottom.
pub fn brick_word(
    top: &[PolyCoeffs; 4],
    bottom: &[PolyCoeffs; 4],
    outcomes: &([f64; 4], [f64; 4]),
) -> GateWord {
    let mut atoms = Vec::new();
    // Operator order: leftmost atom acts last.
    atoms.push(Atom::Cz { i: 0, j: 1, sign: -1 });
    for col in (0..4).rev() {
        if col == 1 {
            atoms.push(Atom::Cz { i: 0, j: 1, sign: 1 });
        }
        for (mode, slots, ms) in [(0, top, &outcomes.0), (1, bottom, &outcomes.1)] {
            if ms[col] != 0.0 {
                atoms.push(Atom::Xd { mode, s: ms[col] });
            }
            atoms.push(Atom::Fourier { mode, k: 1 });
            if !slots[col].is_zero() {
                atoms.push(Atom::PhaseQ { mode, f: slots[col] });
            }
        }
    }
    GateWord::new(atoms)
}

/// The gate word a [`BrickTarget`] stands for, on two modes.
pub fn brick_target_word(target: BrickTarget) -> GateWord {
    let atoms = match target {
        BrickTarget::PhaseQ(v) => vec![Atom::PhaseQ { mode: 0, f: v }],
        BrickTarget::PhaseP(v) => vec![Atom::PhaseP { mode: 0, f: v }],
        BrickTarget::Sum => vec![Atom::Cx { control: 1, target: 0, sign: 1 }],
    };
    GateWord::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_shape() {
        let g = single_wire(5).unwrap();
        assert_eq!(g.n_nodes, 5);
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.order, vec![0, 1, 2, 3]);
        assert_eq!(g.successor(2), Some(3));
        assert_eq!(g.name(0), "w0");
    }

    #[test]
    fn brickwork_shape() {
        let (g, wires) = two_wire_brickwork(5, &[(2, 1), (4, -1)]).unwrap();
        assert_eq!(g.n_nodes, 10);
        assert_eq!(wires[0], vec![0, 1, 2, 3, 4]);
        assert_eq!(wires[1], vec![5, 6, 7, 8, 9]);
        // 4 wire edges per row + 2 crossings
        assert_eq!(g.edges.len(), 10);
        assert_eq!(g.inputs, vec![0, 5]);
        assert_eq!(g.outputs, vec![4, 9]);
        assert_eq!(g.order, vec![0, 5, 1, 6, 2, 7, 3, 8]);
        assert_eq!(g.node_named("B2"), Some(7));
        let cross: Vec<_> = g.edges.iter().filter(|e| e.touches(2) && e.touches(7)).collect();
        assert_eq!(cross.len(), 1);
        assert_eq!(cross[0].sign, 1);
        let cross: Vec<_> = g.edges.iter().filter(|e| e.touches(4) && e.touches(9)).collect();
        assert_eq!(cross[0].sign, -1);
    }

    #[test]
    fn brickwork_program_covers_measured_columns() {
        let (_, wires) = two_wire_brickwork(3, &[]).unwrap();
        let z = PolyCoeffs::default();
        let p = brickwork_program(&wires, &[z, z], &[[0.1, 0.0, 0.0].into(), z]).unwrap();
        assert_eq!(p.measurements.len(), 4);
        assert!(brickwork_program(&wires, &[z], &[z, z]).is_err());
    }

    #[test]
    fn gaussian_bricks_match_their_targets() {
        use crate::algebra::TrackedOperator;
        let zero = ([0.0; 4], [0.0; 4]);
        for v in [[0.7, 0.0, 0.0], [-0.4, 1.3, 0.0], [0.25, -0.8, 0.0]] {
            let v = PolyCoeffs::from(v);
            for target in [BrickTarget::PhaseQ(v), BrickTarget::PhaseP(v)] {
                let (top, bottom) = brick_slots(target);
                let got = TrackedOperator::from_word(&brick_word(&top, &bottom, &zero), 2);
                let want = TrackedOperator::from_word(&brick_target_word(target), 2);
                let dev = got.linear_dev(&want);
                assert!(dev < 1e-9, "{target:?}: linear deviation {dev}");
            }
        }
        let (top, bottom) = brick_slots(BrickTarget::Sum);
        let got = TrackedOperator::from_word(&brick_word(&top, &bottom, &zero), 2);
        let want = TrackedOperator::from_word(&brick_target_word(BrickTarget::Sum), 2);
        let dev = got.linear_dev(&want);
        assert!(dev < 1e-9, "sum gate: linear deviation {dev}");
    }

    #[test]
    fn cubic_brick_reduces_to_the_target_atom() {
        use crate::algebra::difference;
        let v = PolyCoeffs::from([0.3, -0.2, 0.7]);
        let (top, bottom) = brick_slots(BrickTarget::PhaseQ(v));
        let word = brick_word(&top, &bottom, &([0.0; 4], [0.0; 4]));
        let diff = difference(&word, &brick_target_word(BrickTarget::PhaseQ(v)), 2).unwrap();
        assert!(
            diff.is_identity_up_to_phase(1e-12),
            "residual core {:?}, displacement {:?}",
            diff.core,
            diff.displacement
        );
    }

    #[test]
    fn stacked_bricks_fuse_their_phases() {
        use crate::algebra::TrackedOperator;
        let zero = ([0.0; 4], [0.0; 4]);
        let v1 = PolyCoeffs::from([0.3, -0.6, 0.0]);
        let v2 = PolyCoeffs::from([-0.9, 0.2, 0.0]);
        let (t1, b1) = brick_slots(BrickTarget::PhaseQ(v1));
        let (t2, b2) = brick_slots(BrickTarget::PhaseQ(v2));
        let stacked = brick_word(&t2, &b2, &zero).then(&brick_word(&t1, &b1, &zero));
        let (tf, bf) = brick_slots(BrickTarget::PhaseQ(v1.add(&v2)));
        let fused = brick_word(&tf, &bf, &zero);
        let a = TrackedOperator::from_word(&stacked, 2);
        let b = TrackedOperator::from_word(&fused, 2);
        assert!(a.linear_dev(&b) < 1e-9, "deviation {}", a.linear_dev(&b));
    }

    #[test]
    fn momentum_brick_recenters_around_a_readout() {
        use crate::algebra::TrackedOperator;
        let v = PolyCoeffs::from([0.45, -1.1, 0.0]);
        let m = 0.37;
        let z = PolyCoeffs::ZERO;
        let top = [z, recentered_slot(v.reflected(), m), z, z];
        let word = brick_word(&top, &[z; 4], &([m, 0.0, 0.0, 0.0], [0.0; 4]));
        let got = TrackedOperator::from_word(&word, 2);
        let want = TrackedOperator::from_word(&brick_target_word(BrickTarget::PhaseP(v)), 2);
        // Same linear action; the readout survives only as a displacement byproduct.
        assert!((&got.s - &want.s).abs().max() < 1e-9);
        assert!((&got.d - &want.d).abs().max() > 1e-3);
    }
}
