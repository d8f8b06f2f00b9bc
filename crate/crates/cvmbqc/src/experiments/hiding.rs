//! Graph-hiding experiments: a position-pinned node must actually erase
//! the edges it sits on, not merely relabel them.

use crate::algebra::Atom;
use crate::backend::gaussian::GaussianState;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// How much information flows across a pinned node, as its pin sharpens.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeakageReport {
    /// Pin strengths swept, sharpest last.
    pub omegas: Vec<f64>,
    /// Mutual information (nats) between the pinned node's two separated
    /// neighbors, per strength.
    pub mutual_information: Vec<f64>,
}

impl LeakageReport {
    /// True when every sharpening step strictly reduces the leakage.
    pub fn is_decreasing(&self) -> bool {
        self.mutual_information.windows(2).all(|w| w[1] < w[0])
    }

    /// The leakage at the sharpest pin.
    pub fn final_leakage(&self) -> f64 {
        *self.mutual_information.last().unwrap_or(&f64::NAN)
    }
}

/// Builds a three-node chain whose middle node is pinned in position, and
/// measures how much the ends still know about each other through it.
///
/// The ends are momentum-squeezed at `end_omega`; the middle is
/// position-squeezed at each strength in `disconnector_omegas` (smaller is
/// sharper). Both couplings are position-diagonal, so a perfectly pinned
/// middle contributes a constant momentum kick to each neighbor and the
/// ends decouple: the mutual information between the two end modes must
/// fall toward zero. The residual at finite pinning is the leakage a
/// hidden edge would suffer.
pub fn disconnector_leakage(
    end_omega: f64,
    disconnector_omegas: &[f64],
) -> Result<LeakageReport> {
    let mut mutual_information = Vec::new();
    for &omega in disconnector_omegas {
        let mut state = GaussianState::vacuum(0);
        state.append_squeezed(end_omega)?;
        state.append_squeezed(omega)?;
        // Rotate the middle ancilla from momentum squeezing into position
        // squeezing: sharp q, maximally noisy p.
        state.apply_atom(&Atom::Fourier { mode: 1, k: 1 })?;
        state.append_squeezed(end_omega)?;
        state.apply_atom(&Atom::Cz { i: 0, j: 1, sign: 1 })?;
        state.apply_atom(&Atom::Cz { i: 1, j: 2, sign: 1 })?;
        mutual_information.push(state.mutual_information(&[0], &[2])?);
    }
    Ok(LeakageReport { omegas: disconnector_omegas.to_vec(), mutual_information })
}
