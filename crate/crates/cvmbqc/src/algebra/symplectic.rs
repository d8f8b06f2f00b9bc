//! Tracked Gaussian data of a gate word.
//!
//! Every Gaussian word factors as `exp(iφ) · D(d) · L` where `L` is a linear
//! (symplectic) unitary, `D(d)` the symmetric-ordered displacement with
//! phase-space offset `d`, and `φ` a tracked scalar phase. This module
//! computes that factorization atom by atom.
//!
//! Quadratures are ordered `(q_0, p_0, q_1, p_1, …)`. In the Heisenberg
//! picture a word `U` with symplectic matrix `S` and offset `d` acts as
//! `U† r U = S·r + d`.
//!
//! # Phase conventions
//!
//! * Displacements compose as `D(d₁)·D(d₂) = exp(−i·d₁ᵀΩd₂/2)·D(d₁+d₂)`
//!   with `Ω` the block-diagonal form `[[0,1],[−1,0]]` per mode, so
//!   `X(ξ)Z(η) = exp(−i·ξη/2)·D((ξ,η))`.
//! * Linear atoms contribute zero tracked phase of their own; rotation
//!   (metaplectic) phases are *not* tracked, so the quarter rotation has
//!   order four exactly in this algebra. Comparisons that need the honest
//!   rotation phase use the number backend, which implements it.
//! * Cubic atoms poison exactness: the tracked `(S, d, φ)` then only record
//!   the quadratic shadow of the word and [`TrackedOperator::gaussian`] is
//!   `false`. The rewrite engine, not this module, is the exact tool for
//!   cubic words.

use super::atom::Atom;
use super::word::GateWord;
use nalgebra::{DMatrix, DVector};

/// The tracked factorization `exp(iφ)·D(d)·L` of a word.
#[derive(Debug, Clone)]
pub struct TrackedOperator {
    /// Number of modes (matrix side is `2·n_modes`).
    pub n_modes: usize,
    /// Symplectic matrix of the linear part.
    pub s: DMatrix<f64>,
    /// Phase-space displacement, ordered `(q_0, p_0, …)`.
    pub d: DVector<f64>,
    /// Tracked scalar phase (radians, unreduced).
    pub phase: f64,
    /// False when any atom was cubic; `s`, `d`, `phase` are then only the
    /// quadratic shadow of the word.
    pub gaussian: bool,
}

/// The symplectic form `Ω` on `n` modes: block-diagonal `[[0,1],[−1,0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symmetric-ordered Weyl composition phase: `D(d1)·D(d2)` carries
/// `exp(i·weyl_phase(d1, d2))·D(d1+d2)`.
pub fn weyl_phase(d1: &DVector<f64>, d2: &DVector<f64>) -> f64 {
    let n = d1.len() / 2;
    let mut acc = 0.0;
    for k in 0..n {
        // d1ᵀ Ω d2 restricted to mode k
        acc += d1[2 * k] * d2[2 * k + 1] - d1[2 * k + 1] * d2[2 * k];
    }
    -acc / 2.0
}

/// Per-atom symplectic matrix and displacement on `n_modes` modes.
///
/// For cubic phase atoms this returns the quadratic shadow (the cubic
/// coefficient is ignored here).
pub fn atom_symplectic(atom: &Atom, n_modes: usize) -> (DMatrix<f64>, DVector<f64>) {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let mut d = DVector::zeros(2 * n_modes);
    match *atom {
        Atom::Xd { mode, s: amt } => d[2 * mode] = amt,
        Atom::Zd { mode, s: amt } => d[2 * mode + 1] = amt,
        Atom::Fourier { mode, k } => {
            // one application: q ↦ −p, p ↦ q
            let (mut a, mut b, mut c, mut dd) = (1.0, 0.0, 0.0, 1.0);
            for _ in 0..(k % 4) {
                // compose [[0,-1],[1,0]] · current
                let (na, nb) = (-c, -dd);
                let (nc, nd) = (a, b);
                a = na;
                b = nb;
                c = nc;
                dd = nd;
            }
            s[(2 * mode, 2 * mode)] = a;
            s[(2 * mode, 2 * mode + 1)] = b;
            s[(2 * mode + 1, 2 * mode)] = c;
            s[(2 * mode + 1, 2 * mode + 1)] = dd;
        }
        Atom::PhaseQ { mode, f } => {
            s[(2 * mode + 1, 2 * mode)] = f.b;
            d[2 * mode + 1] = f.a;
        }
        Atom::PhaseP { mode, f } => {
            s[(2 * mode, 2 * mode + 1)] = -f.b;
            d[2 * mode] = -f.a;
        }
        Atom::Squeeze { mode, t } => {
            s[(2 * mode, 2 * mode)] = t;
            s[(2 * mode + 1, 2 * mode + 1)] = 1.0 / t;
        }
        Atom::Cz { i, j, sign } => {
            s[(2 * i + 1, 2 * j)] = sign as f64;
            s[(2 * j + 1, 2 * i)] = sign as f64;
        }
        Atom::Cx { control, target, sign } => {
            s[(2 * target, 2 * control)] = sign as f64;
            s[(2 * control + 1, 2 * target + 1)] = -(sign as f64);
        }
    }
    (s, d)
}

impl TrackedOperator {
    /// The identity on `n_modes` modes.
    pub fn identity(n_modes: usize) -> Self {
        TrackedOperator {
            n_modes,
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
            phase: 0.0,
            gaussian: true,
        }
    }

    /// Folds a word left to right. The running factorization `T` absorbs the
    /// next atom `A` (which sits to its *right*, i.e. is applied first) as
    ///
    /// ```text
    /// T·A :  φ += weyl_phase(d, S·d_A),   d += S·d_A,   S ← S·S_A
    /// ```
    pub fn from_word(word: &GateWord, n_modes: usize) -> Self {
        let mut t = TrackedOperator::identity(n_modes);
        for atom in &word.atoms {
            let (sa, da) = atom_symplectic(atom, n_modes);
            let sda = &t.s * &da;
            t.phase += weyl_phase(&t.d, &sda);
            t.d += sda;
            t.s = &t.s * sa;
            t.gaussian &= atom.is_gaussian();
        }
        t
    }

    /// Maximum absolute entry-wise deviation between the linear parts and
    /// displacements of two tracked operators.
    pub fn linear_dev(&self, other: &TrackedOperator) -> f64 {
        let sd = (&self.s - &other.s).abs().max();
        let dd = (&self.d - &other.d).abs().max();
        sd.max(dd)
    }

    /// Phase difference wrapped to `(−π, π]`.
    pub fn phase_dev(&self, other: &TrackedOperator) -> f64 {
        wrap_angle(self.phase - other.phase)
    }

    /// Checks `SᵀΩS = Ω` and returns the maximum violation.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes);
        (self.s.transpose() * &omega * &self.s - omega).abs().max()
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut y = x % two_pi;
    if y > std::f64::consts::PI {
        y -= two_pi;
    } else if y <= -std::f64::consts::PI {
        y += two_pi;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::param::PolyCoeffs;

    fn word(text: &str) -> GateWord {
        text.parse().unwrap()
    }

    #[test]
    fn displacement_actions() {
        // X(s): q ↦ q + s ; Z(s): p ↦ p + s
        let t = TrackedOperator::from_word(&word("X(1.5)@0 Z(-0.5)@1"), 2);
        assert_eq!(t.d[0], 1.5);
        assert_eq!(t.d[3], -0.5);
        assert_eq!(t.phase, 0.0);
        assert_eq!(t.symplectic_defect(), 0.0);
    }

    #[test]
    fn fourier_rotation_and_period() {
        let t = TrackedOperator::from_word(&word("F@0"), 1);
        // q ↦ −p, p ↦ q
        assert_eq!(t.s[(0, 1)], -1.0);
        assert_eq!(t.s[(1, 0)], 1.0);
        let t4 = TrackedOperator::from_word(&word("F@0 F@0 F@0 F@0"), 1);
        assert_eq!(t4.linear_dev(&TrackedOperator::identity(1)), 0.0);
    }

    #[test]
    fn phase_q_shear_matches_heisenberg_derivative() {
        // exp(i f(q)) sends p ↦ p + f'(q) = p + a + b·q (quadratic part).
        let t = TrackedOperator::from_word(&word("Dq(0.7,1.3,0)@0"), 1);
        assert_eq!(t.s[(1, 0)], 1.3);
        assert_eq!(t.d[1], 0.7);
        assert!(t.gaussian);
        let tc = TrackedOperator::from_word(&word("Dq(0,0,1)@0"), 1);
        assert!(!tc.gaussian);
    }

    #[test]
    fn phase_p_shear_signs() {
        // exp(i f(p)) sends q ↦ q − f'(p) = q − a − b·p.
        let t = TrackedOperator::from_word(&word("Dp(0.7,1.3,0)@0"), 1);
        assert_eq!(t.s[(0, 1)], -1.3);
        assert_eq!(t.d[0], -0.7);
    }

    #[test]
    fn cz_and_cx_actions() {
        let t = TrackedOperator::from_word(&word("CZ@0,1"), 2);
        assert_eq!(t.s[(1, 2)], 1.0); // p0 += q1
        assert_eq!(t.s[(3, 0)], 1.0); // p1 += q0
        assert_eq!(t.symplectic_defect(), 0.0);

        let t = TrackedOperator::from_word(&word("CX@0,1"), 2);
        assert_eq!(t.s[(2, 0)], 1.0); // q1 += q0
        assert_eq!(t.s[(1, 3)], -1.0); // p0 −= p1
        assert_eq!(t.symplectic_defect(), 0.0);
    }

    #[test]
    fn weyl_reordering_phase() {
        // X(s)·Z(t) and Z(t)·X(s) differ by exp(−i·s·t).
        let (s, tt) = (0.8, -1.7);
        let a = TrackedOperator::from_word(
            &GateWord::new(vec![Atom::Xd { mode: 0, s }, Atom::Zd { mode: 0, s: tt }]),
            1,
        );
        let b = TrackedOperator::from_word(
            &GateWord::new(vec![Atom::Zd { mode: 0, s: tt }, Atom::Xd { mode: 0, s }]),
            1,
        );
        assert_eq!(a.linear_dev(&b), 0.0);
        let dev = wrap_angle((a.phase - b.phase) - (-s * tt));
        assert!(dev.abs() < 1e-12, "phase gap {}", a.phase - b.phase);
    }

    #[test]
    fn composition_matches_manual_product() {
        // Independent oracle: multiply the per-atom matrices by hand in
        // application order and compare.
        let w = word("Q(2)@0 Dq(0.3,-0.9,0)@0 F@0 CZ@0,1");
        let t = TrackedOperator::from_word(&w, 2);
        let mut s_manual = DMatrix::<f64>::identity(4, 4);
        let mut d_manual = DVector::<f64>::zeros(4);
        // rightmost first: r ↦ S_A r + d_A, then next-left, etc.
        for atom in w.atoms.iter().rev() {
            let (sa, da) = atom_symplectic(atom, 2);
            d_manual = &sa * &d_manual + da;
            s_manual = &sa * s_manual;
        }
        assert!((t.s - s_manual).abs().max() < 1e-14);
        assert!((t.d - d_manual).abs().max() < 1e-14);
    }

    #[test]
    fn squeeze_dilation() {
        let t = TrackedOperator::from_word(&word("Q(2.5)@0"), 1);
        assert_eq!(t.s[(0, 0)], 2.5);
        assert_eq!(t.s[(1, 1)], 1.0 / 2.5);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -12..=12 {
            let x = 1.0 + k as f64 * std::f64::consts::TAU;
            assert!((wrap_angle(x) - 1.0).abs() < 1e-9);
        }
        assert!((wrap_angle(std::f64::consts::PI + 0.1) + std::f64::consts::PI - 0.1).abs() < 1e-12);
    }

    #[test]
    fn phase_q_linear_equals_zd() {
        // Dq(a,0,0) must track identically to Z(a).
        let a = TrackedOperator::from_word(
            &GateWord::new(vec![Atom::PhaseQ { mode: 0, f: PolyCoeffs::new(0.9, 0.0, 0.0) }]),
            1,
        );
        let b = TrackedOperator::from_word(&word("Z(0.9)@0"), 1);
        assert_eq!(a.linear_dev(&b), 0.0);
    }
}
