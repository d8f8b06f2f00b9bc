//! Per-node correction frames: what the client must remember to steer a
//! delegated run.
//!
//! Every measured node leaves a position byproduct on its successor, every
//! coupling converts accumulated position offsets into momentum offsets on
//! the partner mode, and the client's own blinding prerotation must travel
//! along the wire so it can be unwound in the instruction for the next
//! readout. The ledger keeps, per node:
//!
//! * `xi` — accumulated position offset (from byproducts of earlier
//!   readouts on the same wire),
//! * `eta` — accumulated momentum offset (pushed through couplings, plus
//!   any disconnector corrections),
//! * `theta_eff` — the blinding polynomial as seen from the displaced
//!   origin the carrier currently sits at.
//!
//! An instruction for a readout with program polynomial `slot` and fresh
//! shift `r` is then
//!
//! ```text
//! δ = M_{-ξ} · ( slot + θ_eff + (r − η)·e )        e = (1, 0, 0)
//! ```
//!
//! where `M_m` re-expresses a polynomial about a shifted origin. A plain
//! (unblinded) run is the special case `θ_eff = 0, r = 0`.

use crate::algebra::PolyCoeffs;
use std::collections::BTreeMap;

/// Correction data for one node.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Frame {
    /// Accumulated position offset.
    pub xi: f64,
    /// Accumulated momentum offset.
    pub eta: f64,
    /// Blinding polynomial, tracked in the carrier's displaced coordinates.
    pub theta_eff: PolyCoeffs,
}

/// The client's private frame bookkeeping for a whole run.
///
/// Couplings and byproducts interact in an order-independent way: a
/// position offset on one end of a coupling turns into a momentum offset
/// on the other end no matter which event happened first, because the
/// displacement commutes through the (position-diagonal) coupling as a
/// momentum kick on the partner. The ledger therefore records fired
/// couplings and applies the conversion from whichever side arrives
/// second, so any valid execution schedule yields the same instructions.
#[derive(Debug, Clone, Default)]
pub struct FrameLedger {
    frames: BTreeMap<usize, Frame>,
    fired: Vec<(usize, usize, i8)>,
}

impl FrameLedger {
    /// A ledger with no entries.
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a node's frame at its blinding polynomial (zero offsets).
    pub fn insert(&mut self, node: usize, theta: PolyCoeffs) {
        self.frames.insert(node, Frame { xi: 0.0, eta: 0.0, theta_eff: theta });
    }

    /// The current frame of a node (zero if never touched).
    pub fn frame(&self, node: usize) -> Frame {
        self.frames.get(&node).copied().unwrap_or_default()
    }

    /// Records a coupling firing between two live nodes: each side's
    /// position offset accumulated *so far* becomes a momentum offset on
    /// the other (offsets created later are handled by
    /// [`Self::teleport`]).
    pub fn couple(&mut self, a: usize, b: usize, sign: i8) {
        let s = sign as f64;
        let xa = self.frame(a).xi;
        let xb = self.frame(b).xi;
        self.frames.entry(a).or_default().eta += s * xb;
        self.frames.entry(b).or_default().eta += s * xa;
        self.fired.push((a, b, sign));
    }

    /// Records the byproduct of a readout: the wire successor inherits a
    /// position offset `x` and sees the blinding polynomial from the
    /// correspondingly shifted origin. The offset also pushes a momentum
    /// offset through every coupling that already fired on the successor.
    pub fn teleport(&mut self, successor: usize, x: f64) {
        let f = self.frames.entry(successor).or_default();
        f.xi += x;
        f.theta_eff = f.theta_eff.shifted(x);
        for k in 0..self.fired.len() {
            let (a, b, sign) = self.fired[k];
            let partner = if a == successor {
                b
            } else if b == successor {
                a
            } else {
                continue;
            };
            self.frames.entry(partner).or_default().eta += sign as f64 * x;
        }
    }

    /// Adds a known momentum offset to a node (disconnector corrections,
    /// position-readout back-action on a neighbor).
    pub fn absorb_momentum(&mut self, node: usize, amount: f64) {
        self.frames.entry(node).or_default().eta += amount;
    }

    /// The measurement instruction for `node`: program polynomial `slot`,
    /// fresh shift `r`, corrected by the node's accumulated frame.
    pub fn instruction(&self, node: usize, slot: PolyCoeffs, r: f64) -> PolyCoeffs {
        let f = self.frame(node);
        let mut w = slot.add(&f.theta_eff);
        w.a += r - f.eta;
        w.shifted(-f.xi)
    }

    /// Inverts [`Self::instruction`]: recovers the blinding polynomial from
    /// an instruction, the program slot, the shift, and the frame. Exists
    /// for audits — it certifies that an instruction hides exactly one
    /// degree of freedom per coefficient.
    pub fn reconstruct(delta: PolyCoeffs, slot: PolyCoeffs, r: f64, frame: Frame) -> PolyCoeffs {
        let mut theta = delta.shifted(frame.xi).add(&slot.neg());
        theta.a += frame.eta - r;
        theta
    }
}
