//! Gate atoms: the primitive operations gate words are built from.
//!
//! Conventions (ħ = 1, `[q, p] = i`):
//!
//! | atom        | unitary                     | Heisenberg action                      |
//! |-------------|-----------------------------|----------------------------------------|
//! | `X(s)@j`    | `exp(−i·s·p_j)`             | `q_j ↦ q_j + s`                        |
//! | `Z(s)@j`    | `exp(+i·s·q_j)`             | `p_j ↦ p_j + s`                        |
//! | `F@j`       | quarter rotation            | `q_j ↦ −p_j`, `p_j ↦ q_j`              |
//! | `Dq(f)@j`   | `exp(+i·f(q_j))`            | `p_j ↦ p_j + f′(q_j)`                  |
//! | `Dp(f)@j`   | `exp(+i·f(p_j))`            | `q_j ↦ q_j − f′(p_j)`                  |
//! | `Q(t)@j`    | dilation                    | `q_j ↦ t·q_j`, `p_j ↦ p_j/t`           |
//! | `CZ@i,j`    | `exp(+i·q_i·q_j)`           | `p_i ↦ p_i + q_j`, `p_j ↦ p_j + q_i`   |
//! | `CZd@i,j`   | `exp(−i·q_i·q_j)`           | sign-flipped                           |
//! | `CX@i,j`    | `exp(−i·q_i·p_j)`           | `q_j ↦ q_j + q_i`, `p_i ↦ p_i − p_j`   |
//! | `CXd@i,j`   | `exp(+i·q_i·p_j)`           | sign-flipped                           |
//!
//! `f` is the cubic polynomial of [`PolyCoeffs`]. `Sq(a,b,c)@j` is accepted
//! by the parser as an alias for `Dq(a,b,c)@j`: the canonical single-mode
//! computation step "apply a `q`-phase, then rotate" factors exactly as a
//! rotation times a `q`-phase, so the phase part alone needs no second atom
//! kind.

use super::param::PolyCoeffs;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Primitive gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Atom {
    /// Position displacement `exp(−i·s·p)`.
    Xd { mode: usize, s: f64 },
    /// Momentum displacement `exp(+i·s·q)`.
    Zd { mode: usize, s: f64 },
    /// `k`-th power (`k` in `1..=3`) of the quarter rotation.
    Fourier { mode: usize, k: u8 },
    /// Cubic phase in position: `exp(+i·f(q))`.
    PhaseQ { mode: usize, f: PolyCoeffs },
    /// Cubic phase in momentum: `exp(+i·f(p))`.
    PhaseP { mode: usize, f: PolyCoeffs },
    /// Dilation `q ↦ t·q`, `p ↦ p/t` with `t > 0`.
    Squeeze { mode: usize, t: f64 },
    /// Two-mode phase `exp(+i·sign·q_i·q_j)` with `sign = ±1`.
    Cz { i: usize, j: usize, sign: i8 },
    /// Two-mode shift `exp(−i·sign·q_control·p_target)` with `sign = ±1`.
    Cx { control: usize, target: usize, sign: i8 },
}

impl Atom {
    /// The one or two modes the atom acts on.
    pub fn modes(&self) -> (usize, Option<usize>) {
        match *self {
            Atom::Xd { mode, .. }
            | Atom::Zd { mode, .. }
            | Atom::Fourier { mode, .. }
            | Atom::PhaseQ { mode, .. }
            | Atom::PhaseP { mode, .. }
            | Atom::Squeeze { mode, .. } => (mode, None),
            Atom::Cz { i, j, .. } => (i, Some(j)),
            Atom::Cx { control, target, .. } => (control, Some(target)),
        }
    }

    /// True if the atom touches `mode`.
    pub fn touches(&self, mode: usize) -> bool {
        let (m1, m2) = self.modes();
        m1 == mode || m2 == Some(mode)
    }

    /// True if the two atoms act on disjoint mode sets.
    pub fn disjoint(&self, other: &Atom) -> bool {
        let (a1, a2) = self.modes();
        !(other.touches(a1) || a2.map(|m| other.touches(m)).unwrap_or(false))
    }

    /// True for atoms equal to the identity.
    pub fn is_identity(&self) -> bool {
        match *self {
            Atom::Xd { s, .. } | Atom::Zd { s, .. } => s == 0.0,
            Atom::Fourier { k, .. } => k % 4 == 0,
            Atom::PhaseQ { f, .. } | Atom::PhaseP { f, .. } => f.is_zero(),
            Atom::Squeeze { t, .. } => t == 1.0,
            Atom::Cz { .. } | Atom::Cx { .. } => false,
        }
    }

    /// True when the atom generates a Gaussian unitary.
    pub fn is_gaussian(&self) -> bool {
        match *self {
            Atom::PhaseQ { f, .. } | Atom::PhaseP { f, .. } => f.is_gaussian(),
            _ => true,
        }
    }

    /// The inverse atom. Every atom kind is closed under inversion.
    pub fn inverse(&self) -> Atom {
        match *self {
            Atom::Xd { mode, s } => Atom::Xd { mode, s: -s },
            Atom::Zd { mode, s } => Atom::Zd { mode, s: -s },
            Atom::Fourier { mode, k } => Atom::Fourier { mode, k: (4 - k % 4) % 4 },
            Atom::PhaseQ { mode, f } => Atom::PhaseQ { mode, f: f.neg() },
            Atom::PhaseP { mode, f } => Atom::PhaseP { mode, f: f.neg() },
            Atom::Squeeze { mode, t } => Atom::Squeeze { mode, t: 1.0 / t },
            Atom::Cz { i, j, sign } => Atom::Cz { i, j, sign: -sign },
            Atom::Cx { control, target, sign } => Atom::Cx { control, target, sign: -sign },
        }
    }

    /// Largest mode index referenced.
    pub fn max_mode(&self) -> usize {
        let (m1, m2) = self.modes();
        m2.map(|m| m.max(m1)).unwrap_or(m1)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Xd { mode, s } => write!(out, "X({s})@{mode}"),
            Atom::Zd { mode, s } => write!(out, "Z({s})@{mode}"),
            Atom::Fourier { mode, k } => {
                let mut first = true;
                for _ in 0..k.max(1) {
                    if !first {
                        write!(out, " ")?;
                    }
                    write!(out, "F@{mode}")?;
                    first = false;
                }
                Ok(())
            }
            Atom::PhaseQ { mode, f } => write!(out, "Dq({},{},{})@{mode}", f.a, f.b, f.c),
            Atom::PhaseP { mode, f } => write!(out, "Dp({},{},{})@{mode}", f.a, f.b, f.c),
            Atom::Squeeze { mode, t } => write!(out, "Q({t})@{mode}"),
            Atom::Cz { i, j, sign } => {
                write!(out, "{}@{i},{j}", if sign >= 0 { "CZ" } else { "CZd" })
            }
            Atom::Cx { control, target, sign } => {
                write!(out, "{}@{control},{target}", if sign >= 0 { "CX" } else { "CXd" })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_involutive() {
        let atoms = [
            Atom::Xd { mode: 0, s: 1.5 },
            Atom::Zd { mode: 1, s: -0.3 },
            Atom::Fourier { mode: 0, k: 1 },
            Atom::Fourier { mode: 0, k: 3 },
            Atom::PhaseQ { mode: 2, f: PolyCoeffs::new(1.0, 2.0, 3.0) },
            Atom::PhaseP { mode: 0, f: PolyCoeffs::new(-1.0, 0.5, 0.0) },
            Atom::Squeeze { mode: 0, t: 2.0 },
            Atom::Cz { i: 0, j: 1, sign: 1 },
            Atom::Cx { control: 1, target: 0, sign: -1 },
        ];
        for a in atoms {
            let back = a.inverse().inverse();
            match (a, back) {
                (Atom::Squeeze { t: t1, .. }, Atom::Squeeze { t: t2, .. }) => {
                    assert!((t1 - t2).abs() < 1e-15)
                }
                _ => assert_eq!(a, back),
            }
        }
    }

    #[test]
    fn fourier_inverse_power() {
        let f = Atom::Fourier { mode: 0, k: 1 };
        assert_eq!(f.inverse(), Atom::Fourier { mode: 0, k: 3 });
    }

    #[test]
    fn disjoint_detection() {
        let cz = Atom::Cz { i: 0, j: 2, sign: 1 };
        assert!(cz.disjoint(&Atom::Xd { mode: 1, s: 1.0 }));
        assert!(!cz.disjoint(&Atom::Xd { mode: 2, s: 1.0 }));
    }
}
