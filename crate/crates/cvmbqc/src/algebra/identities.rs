//! A catalog of exact operator identities, certified by the rewrite engine.
//!
//! Each entry states two gate words and the scalar phase by which they are
//! expected to differ. [`check`] reduces `lhs · rhs⁻¹` to normal form and
//! certifies the identity when the core empties, the displacement vanishes,
//! and the tracked phase lands on the expected value (mod 2π).
//!
//! The catalog doubles as executable documentation of the calculus: the
//! displacement push-throughs, the quarter-turn quadrature exchange, squeeze
//! rescalings, sum-gate conjugations, the recentering of shears by
//! displacements (with their scalar phase cost), and the cubic-gate strength
//! rescaling used by the strength-reduction examples.
//!
//! Quarter-turn powers are treated as order four: the engine tracks no
//! rotation phases, so catalog phases are stated in that convention. The
//! number backend, which implements the honest half-integer rotation phases,
//! cross-checks a subset of these identities on states in its own tests.

use super::atom::Atom;
use super::param::PolyCoeffs;
use super::rewrite::{difference, NormalForm};
use super::symplectic::wrap_angle;
use super::word::GateWord;
use crate::error::Result;

/// Default certification tolerance on displacements and phases.
pub const IDENTITY_TOL: f64 = 1e-9;

/// One candidate identity `lhs ≡ exp(i·expected_phase) · rhs`.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    /// Short kebab-case label.
    pub name: &'static str,
    /// One-line statement of what the identity expresses.
    pub summary: String,
    /// Left word.
    pub lhs: GateWord,
    /// Right word.
    pub rhs: GateWord,
    /// Mode count both words act on.
    pub n_modes: usize,
    /// Scalar phase by which `lhs` exceeds `rhs`.
    pub expected_phase: f64,
}

/// The verdict for one catalog entry.
#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    /// Label of the checked identity.
    pub name: &'static str,
    /// One-line statement of the identity.
    pub summary: String,
    /// True when core, displacement, and phase all land within tolerance.
    pub passed: bool,
    /// Atoms left in the reduced core (0 on success).
    pub leftover_atoms: usize,
    /// Largest residual displacement component.
    pub displacement_gap: f64,
    /// Phase residual after subtracting the expected phase, wrapped.
    pub phase_gap: f64,
}

/// Certifies one identity through the rewrite engine.
pub fn check(ic: &IdentityCheck) -> Result<IdentityOutcome> {
    check_with_tol(ic, IDENTITY_TOL)
}

/// [`check`] with an explicit tolerance.
pub fn check_with_tol(ic: &IdentityCheck, tol: f64) -> Result<IdentityOutcome> {
    let d: NormalForm = difference(&ic.lhs, &ic.rhs, ic.n_modes)?;
    let phase_gap = wrap_angle(d.phase - ic.expected_phase);
    let displacement_gap = d.displacement_max();
    let leftover_atoms = d.core.len();
    Ok(IdentityOutcome {
        name: ic.name,
        summary: ic.summary.clone(),
        passed: leftover_atoms == 0 && displacement_gap <= tol && phase_gap.abs() <= tol,
        leftover_atoms,
        displacement_gap,
        phase_gap,
    })
}

/// Runs the whole catalog.
pub fn check_all() -> Result<Vec<IdentityOutcome>> {
    catalog().iter().map(check).collect()
}

fn parse(text: &str) -> GateWord {
    text.parse().expect("catalog words are well-formed")
}

fn entry(
    name: &'static str,
    summary: impl Into<String>,
    lhs: &str,
    rhs: &str,
    n_modes: usize,
    expected_phase: f64,
) -> IdentityCheck {
    IdentityCheck {
        name,
        summary: summary.into(),
        lhs: parse(lhs),
        rhs: parse(rhs),
        n_modes,
        expected_phase,
    }
}

/// The built-in identity catalog.
pub fn catalog() -> Vec<IdentityCheck> {
    let mut list = Vec::new();

    // --- displacement algebra ---
    let (s, t) = (0.7, 1.3);
    list.push(IdentityCheck {
        name: "weyl-reorder",
        summary: format!("X({s})·Z({t}) = exp(-i·{s}·{t})·Z({t})·X({s})"),
        lhs: parse(&format!("X({s})@0 Z({t})@0")),
        rhs: parse(&format!("Z({t})@0 X({s})@0")),
        n_modes: 1,
        expected_phase: -s * t,
    });
    list.push(entry(
        "x-inverse",
        "opposite position kicks cancel",
        "X(0.9)@0 X(-0.9)@0",
        "",
        1,
        0.0,
    ));

    // --- quarter-turn exchange of the quadratures ---
    list.push(entry(
        "rotate-x-to-z",
        "a quarter turn converts a position kick into a momentum kick",
        "F@0 X(0.7)@0",
        "Z(0.7)@0 F@0",
        1,
        0.0,
    ));
    list.push(entry(
        "rotate-z-to-negx",
        "a quarter turn converts a momentum kick into a reversed position kick",
        "F@0 Z(0.7)@0",
        "X(-0.7)@0 F@0",
        1,
        0.0,
    ));
    list.push(entry(
        "rotation-order-four",
        "four quarter turns compose to the identity (tracked convention)",
        "F@0 F@0 F@0 F@0",
        "",
        1,
        0.0,
    ));
    list.push(entry(
        "half-turn-parity",
        "a half turn conjugates a position kick into its reverse",
        "F@0 F@0 X(0.6)@0 F@0 F@0",
        "X(-0.6)@0",
        1,
        0.0,
    ));

    // --- squeeze action ---
    list.push(entry(
        "squeeze-scales-x",
        "squeezing rescales a position kick by t",
        "Q(2.5)@0 X(0.4)@0",
        "X(1.0)@0 Q(2.5)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "squeeze-scales-z",
        "squeezing rescales a momentum kick by 1/t",
        "Q(2.5)@0 Z(1.0)@0",
        "Z(0.4)@0 Q(2.5)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "squeeze-composition",
        "squeeze parameters multiply",
        "Q(2)@0 Q(3)@0",
        "Q(6)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "rotation-inverts-squeeze",
        "a quarter turn exchanges the squeezing axes",
        "F@0 Q(2)@0",
        "Q(0.5)@0 F@0",
        1,
        0.0,
    ));
    list.push(entry(
        "half-turn-fixes-squeeze",
        "a half turn commutes with squeezing",
        "F@0 F@0 Q(2)@0",
        "Q(2)@0 F@0 F@0",
        1,
        0.0,
    ));

    // --- shear structure ---
    list.push(entry(
        "shear-linear-split",
        "the linear coefficient of a q-shear is a momentum kick",
        "Dq(0.9,0.5,0.3)@0",
        "Z(0.9)@0 Dq(0,0.5,0.3)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "shear-additivity",
        "same-quadrature shears add coefficientwise",
        "Dq(0,0.5,0.2)@0 Dq(0,0.7,-0.2)@0",
        "Dq(0,1.2,0)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "p-shear-from-q-shear",
        "conjugating a q-shear by quarter turns yields the p-shear",
        "Dp(0.3,0.8,0.4)@0",
        "F@0 F@0 F@0 Dq(-0.3,0.8,-0.4)@0 F@0",
        1,
        0.0,
    ));
    list.push(entry(
        "cubic-through-rotation",
        "a cubic q-shear crosses a quarter turn as a reversed cubic p-shear",
        "Dq(0,0,0.5)@0 F@0",
        "F@0 Dp(0,0,-0.5)@0",
        1,
        0.0,
    ));

    // --- squeeze/shear conjugation and strength rescaling ---
    list.push(entry(
        "squeeze-rescales-shear",
        "conjugation by a squeeze rescales shear coefficients by (t, t², t³)",
        "Q(0.5)@0 Dq(0.3,0.7,0.2)@0 Q(2)@0",
        "Dq(0.6,2.8,1.6)@0",
        1,
        0.0,
    ));
    list.push(entry(
        "cubic-strength-rescale",
        "a unit-strength cubic gate equals a squeezed-down strong cubic gate",
        "Dq(0,0,1)@0",
        "Q(2)@0 Dq(0,0,8)@0 Q(0.5)@0",
        1,
        0.0,
    ));

    // --- recentering shears by displacements (scalar phase appears) ---
    let f = PolyCoeffs::new(0.4, 0.9, 0.6);
    let xi = 1.1;
    let fs = f.shifted(xi);
    list.push(IdentityCheck {
        name: "q-shear-recenter",
        summary: format!(
            "exp(if(q))·X({xi}) = exp(i·f({xi}))·X({xi})·exp(i(f(·+{xi})−f({xi}))(q))"
        ),
        lhs: GateWord::new(vec![
            Atom::PhaseQ { mode: 0, f },
            Atom::Xd { mode: 0, s: xi },
        ]),
        rhs: GateWord::new(vec![
            Atom::Xd { mode: 0, s: xi },
            Atom::PhaseQ { mode: 0, f: fs },
        ]),
        n_modes: 1,
        expected_phase: f.eval(xi),
    });
    let g = PolyCoeffs::new(-0.2, 0.5, 0.8);
    let eta = -0.9;
    let gs = g.shifted(eta);
    list.push(IdentityCheck {
        name: "p-shear-recenter",
        summary: format!(
            "exp(ig(p))·Z({eta}) = exp(i·g({eta}))·Z({eta})·exp(i(g(·+{eta})−g({eta}))(p))"
        ),
        lhs: GateWord::new(vec![
            Atom::PhaseP { mode: 0, f: g },
            Atom::Zd { mode: 0, s: eta },
        ]),
        rhs: GateWord::new(vec![
            Atom::Zd { mode: 0, s: eta },
            Atom::PhaseP { mode: 0, f: gs },
        ]),
        n_modes: 1,
        expected_phase: g.eval(eta),
    });

    // --- two-mode sum gates ---
    list.push(entry(
        "cz-symmetric",
        "the q⊗q coupling is symmetric in its operands",
        "CZ@0,1",
        "CZ@1,0",
        2,
        0.0,
    ));
    list.push(entry(
        "cz-inverse",
        "opposite-sign q⊗q couplings cancel",
        "CZ@0,1 CZd@0,1",
        "",
        2,
        0.0,
    ));
    list.push(entry(
        "cz-broadcasts-x",
        "a position kick crosses the coupling and deposits a momentum kick on the partner",
        "CZ@0,1 X(0.8)@0",
        "X(0.8)@0 Z(0.8)@1 CZ@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cz-ignores-z",
        "momentum kicks commute with the q⊗q coupling",
        "CZ@0,1 Z(0.8)@0",
        "Z(0.8)@0 CZ@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cz-commutes-with-q-shears",
        "the coupling commutes with shears diagonal in q on either mode",
        "CZ@0,1 Dq(0,0.4,0.7)@0 Dq(0,-0.3,0.2)@1",
        "Dq(0,-0.3,0.2)@1 Dq(0,0.4,0.7)@0 CZ@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cz-chain-commutes",
        "couplings sharing one mode commute",
        "CZ@0,1 CZ@1,2",
        "CZ@1,2 CZ@0,1",
        3,
        0.0,
    ));
    list.push(entry(
        "half-turn-flips-coupling",
        "a half turn on either operand flips the coupling sign",
        "F@0 F@0 CZ@0,1 F@0 F@0",
        "CZd@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cx-inverse",
        "opposite-sign q⊗p couplings cancel",
        "CX@0,1 CXd@0,1",
        "",
        2,
        0.0,
    ));
    list.push(entry(
        "cx-adds-position",
        "the sum gate forwards a control position kick to its target",
        "CX@0,1 X(0.5)@0",
        "X(0.5)@0 X(0.5)@1 CX@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cx-backfeeds-momentum",
        "the sum gate pulls a target momentum kick back onto the control",
        "CX@0,1 Z(0.5)@1",
        "Z(0.5)@1 Z(-0.5)@0 CX@0,1",
        2,
        0.0,
    ));
    list.push(entry(
        "cx-from-coupling",
        "rotating the target turns the q⊗q coupling into the q⊗p sum gate",
        "CX@0,1",
        "F@1 CZd@0,1 F@1 F@1 F@1",
        2,
        0.0,
    ));

    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rewrite::difference;
    use proptest::prelude::*;

    #[test]
    fn the_whole_catalog_passes() {
        for outcome in check_all().unwrap() {
            assert!(
                outcome.passed,
                "{}: leftover={} disp={} phase={}",
                outcome.name, outcome.leftover_atoms, outcome.displacement_gap, outcome.phase_gap
            );
        }
    }

    #[test]
    fn catalog_names_are_unique() {
        let mut names: Vec<_> = catalog().iter().map(|c| c.name).collect();
        names.sort_unstable();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
    }

    #[test]
    fn a_false_identity_fails() {
        let bad = IdentityCheck {
            name: "bogus",
            summary: "rotation does not commute with a position kick".into(),
            lhs: parse("F@0 X(1)@0"),
            rhs: parse("X(1)@0 F@0"),
            n_modes: 1,
            expected_phase: 0.0,
        };
        assert!(!check(&bad).unwrap().passed);
    }

    #[test]
    fn a_wrong_phase_fails() {
        let bad = IdentityCheck {
            name: "bogus-phase",
            summary: "reordering phase stated with the wrong sign".into(),
            lhs: parse("X(0.7)@0 Z(1.3)@0"),
            rhs: parse("Z(1.3)@0 X(0.7)@0"),
            n_modes: 1,
            expected_phase: 0.7 * 1.3,
        };
        let out = check(&bad).unwrap();
        assert!(!out.passed);
        assert_eq!(out.leftover_atoms, 0);
        assert!(out.displacement_gap < 1e-12);
        assert!(out.phase_gap.abs() > 1.0);
    }

    proptest! {
        #[test]
        fn weyl_reordering_phase_for_all_parameters(s in -3.0..3.0f64, t in -3.0..3.0f64) {
            let lhs = GateWord::new(vec![
                Atom::Xd { mode: 0, s },
                Atom::Zd { mode: 0, s: t },
            ]);
            let rhs = GateWord::new(vec![
                Atom::Zd { mode: 0, s: t },
                Atom::Xd { mode: 0, s },
            ]);
            let d = difference(&lhs, &rhs, 1).unwrap();
            prop_assert!(d.is_identity_up_to_phase(1e-9));
            prop_assert!(crate::algebra::symplectic::wrap_angle(d.phase + s * t).abs() < 1e-9);
        }

        #[test]
        fn recentering_phase_equals_the_polynomial_value(
            a in -1.5..1.5f64, b in -1.5..1.5f64, c in -1.5..1.5f64, xi in -2.0..2.0f64
        ) {
            let f = PolyCoeffs::new(a, b, c);
            let lhs = GateWord::new(vec![
                Atom::PhaseQ { mode: 0, f },
                Atom::Xd { mode: 0, s: xi },
            ]);
            let rhs = GateWord::new(vec![
                Atom::Xd { mode: 0, s: xi },
                Atom::PhaseQ { mode: 0, f: f.shifted(xi) },
            ]);
            let d = difference(&lhs, &rhs, 1).unwrap();
            prop_assert!(d.is_identity_up_to_phase(1e-8));
            let gap = crate::algebra::symplectic::wrap_angle(d.phase - f.eval(xi));
            prop_assert!(gap.abs() < 1e-8, "phase gap {gap}");
        }

        #[test]
        fn squeeze_conjugation_rescales_for_all_parameters(
            a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, t in 0.3..3.0f64
        ) {
            let f = PolyCoeffs::new(a, b, c);
            let lhs: GateWord = format!("Q({})@0 Dq({},{},{})@0 Q({t})@0", 1.0 / t, a, b, c)
                .parse().unwrap();
            let fs = f.scaled(t);
            let rhs: GateWord = format!("Dq({},{},{})@0", fs.a, fs.b, fs.c).parse().unwrap();
            let d = difference(&lhs, &rhs, 1).unwrap();
            prop_assert!(d.is_identity_up_to_phase(1e-8));
            prop_assert!(d.phase_wrapped().abs() < 1e-8);
        }
    }
}
