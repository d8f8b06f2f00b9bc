//! Normal form and the rewrite engine.
//!
//! Every word over the atom alphabet — cubic atoms included — factors
//! exactly as
//!
//! ```text
//! word  ≡  exp(iφ) · D(d) · core
//! ```
//!
//! where `D(d)` is a single symmetric-ordered displacement over all modes,
//! and `core` is a displacement-free word whose shear atoms carry no linear
//! coefficient. [`normalize`] computes this factorization in two passes:
//!
//! 1. **Displacement fold.** Walking the word left to right, every
//!    displacement (and the linear coefficient of every shear) is commuted
//!    leftward through the atoms already emitted, one atom at a time.
//!    Crossing a linear atom rotates the displacement by that atom's
//!    quadrature action and costs no phase; crossing a shear `exp(if(q))`
//!    leaves the displacement untouched, costs the scalar phase `f(ξ)`
//!    (`ξ` the crossing q-offset), and replaces the shear's polynomial by
//!    its recentered version `f(·+ξ) − f(ξ)`. Accumulated displacements
//!    merge under the symmetric-ordering composition rule, which is where
//!    the remaining phases come from.
//!
//! 2. **Greedy core reduction.** Repeatedly pick a pair of core atoms that
//!    would fuse (inverse pairs annihilate, same-family neighbours merge)
//!    if they were adjacent, and try to transport the right one leftward
//!    using exact commutation moves (disjoint modes, shared-q commutation,
//!    shear/squeeze rescaling, quadrature rotation through quarter turns,
//!    sign flips through half turns). The transport runs on a scratch copy
//!    and is committed only when the arrived atom still fuses, so every
//!    committed step strictly shrinks the core and the loop terminates.
//!
//! The engine never approximates: every move is an exact operator identity,
//! so the normal form of `w1 · w2⁻¹` being trivial certifies `w1 ≡ w2` as
//! unitaries (up to the tracked phase, which is reported).

use super::atom::Atom;
use super::param::PolyCoeffs;
use super::symplectic::{weyl_phase, wrap_angle};
use super::word::GateWord;
use crate::error::{Error, Result};
use nalgebra::DVector;
use std::fmt;

/// Tolerance for treating fused coefficients as exact cancellations.
const FUSE_EPS: f64 = 1e-12;

/// The factorization `exp(iφ) · D(d) · core` of a gate word.
#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Number of modes the form is expressed on.
    pub n_modes: usize,
    /// Tracked scalar phase `φ` (radians, unreduced).
    pub phase: f64,
    /// Displacement vector of `D(d)`, ordered `(q_0, p_0, q_1, p_1, …)`.
    pub displacement: DVector<f64>,
    /// Residual displacement-free word; shears carry no linear coefficient.
    pub core: Vec<Atom>,
}

/// Computes the normal form of `word` on `n_modes` modes.
///
/// Fails when the word addresses a mode `≥ n_modes` or contains a
/// non-positive squeeze parameter.
pub fn normalize(word: &GateWord, n_modes: usize) -> Result<NormalForm> {
    word.check_modes(n_modes)?;
    for atom in &word.atoms {
        if let Atom::Squeeze { t, .. } = *atom {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidSqueeze(t));
            }
        }
    }

    let mut nf = fold_displacements(word, n_modes);
    reduce_core(&mut nf);
    Ok(nf)
}

/// Normal form of `w1 · w2⁻¹` — trivial exactly when the words agree.
pub fn difference(w1: &GateWord, w2: &GateWord, n_modes: usize) -> Result<NormalForm> {
    normalize(&w1.then(&w2.inverse()), n_modes)
}

impl NormalForm {
    /// True when the linear content is trivial: empty core and a
    /// displacement below `tol` in every component.
    pub fn is_identity_up_to_phase(&self, tol: f64) -> bool {
        self.core.is_empty() && self.displacement_max() <= tol
    }

    /// Largest displacement component in absolute value.
    pub fn displacement_max(&self) -> f64 {
        self.displacement.amax()
    }

    /// The tracked phase wrapped into `(−π, π]`.
    pub fn phase_wrapped(&self) -> f64 {
        wrap_angle(self.phase)
    }

    /// The core as a standalone word.
    pub fn core_word(&self) -> GateWord {
        GateWord::new(self.core.clone())
    }

    /// Rebuilds a word realizing `D(d) · core` from per-mode `X`/`Z` atoms
    /// followed by the core. The scalar phase cannot be expressed in atoms;
    /// the rebuilt word equals the original up to [`NormalForm::residual_phase`].
    pub fn to_word(&self) -> GateWord {
        let mut atoms = Vec::new();
        for m in 0..self.n_modes {
            let xi = self.displacement[2 * m];
            let eta = self.displacement[2 * m + 1];
            if xi != 0.0 {
                atoms.push(Atom::Xd { mode: m, s: xi });
            }
            if eta != 0.0 {
                atoms.push(Atom::Zd { mode: m, s: eta });
            }
        }
        atoms.extend(self.core.iter().copied());
        GateWord::new(atoms)
    }

    /// Phase `ρ` such that the original word equals `exp(iρ) ·` [`Self::to_word`]:
    /// the tracked phase plus the symmetric-ordering cost of splitting `D(d)`
    /// into per-mode `X`-then-`Z` factors.
    pub fn residual_phase(&self) -> f64 {
        let mut rho = self.phase;
        for m in 0..self.n_modes {
            rho += self.displacement[2 * m] * self.displacement[2 * m + 1] / 2.0;
        }
        rho
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phase {:+.6}", self.phase_wrapped())?;
        write!(f, " | D(")?;
        let mut first = true;
        for m in 0..self.n_modes {
            let (xi, eta) = (self.displacement[2 * m], self.displacement[2 * m + 1]);
            if xi != 0.0 || eta != 0.0 {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "q{m}:{xi:+.6} p{m}:{eta:+.6}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ") | core:")?;
        if self.core.is_empty() {
            write!(f, " <empty>")?;
        } else {
            for a in &self.core {
                write!(f, " {a}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Pass 1: displacement fold
// ---------------------------------------------------------------------------

fn fold_displacements(word: &GateWord, n_modes: usize) -> NormalForm {
    let mut phase = 0.0;
    let mut front: DVector<f64> = DVector::zeros(2 * n_modes);
    let mut core: Vec<Atom> = Vec::new();

    let emit_displacement = |core: &mut Vec<Atom>,
                                 phase: &mut f64,
                                 front: &mut DVector<f64>,
                                 mode: usize,
                                 comp: usize,
                                 amount: f64| {
        if amount == 0.0 {
            return;
        }
        let mut d = DVector::zeros(2 * n_modes);
        d[2 * mode + comp] = amount;
        cross_leftward(core, &mut d, phase);
        *phase += weyl_phase(front, &d);
        *front += d;
    };

    for atom in &word.atoms {
        match *atom {
            Atom::Xd { mode, s } => {
                emit_displacement(&mut core, &mut phase, &mut front, mode, 0, s);
            }
            Atom::Zd { mode, s } => {
                emit_displacement(&mut core, &mut phase, &mut front, mode, 1, s);
            }
            Atom::PhaseQ { mode, f } => {
                // exp(if(q)) = Z(a) · exp(i(f − a·q)(q)); the factors commute.
                emit_displacement(&mut core, &mut phase, &mut front, mode, 1, f.a);
                let rest = PolyCoeffs::new(0.0, f.b, f.c);
                if !rest.is_zero() {
                    core.push(Atom::PhaseQ { mode, f: rest });
                }
            }
            Atom::PhaseP { mode, f } => {
                // exp(if(p)) = X(−a) · exp(i(f − a·p)(p)); the factors commute.
                emit_displacement(&mut core, &mut phase, &mut front, mode, 0, -f.a);
                let rest = PolyCoeffs::new(0.0, f.b, f.c);
                if !rest.is_zero() {
                    core.push(Atom::PhaseP { mode, f: rest });
                }
            }
            Atom::Fourier { mode, k } => {
                let k = k % 4;
                if k != 0 {
                    core.push(Atom::Fourier { mode, k });
                }
            }
            Atom::Squeeze { t, .. } if t == 1.0 => {}
            Atom::Cz { i, j, sign } => {
                // symmetric in its operands; store with ascending modes
                core.push(Atom::Cz { i: i.min(j), j: i.max(j), sign });
            }
            other => core.push(other),
        }
    }

    NormalForm { n_modes, phase, displacement: front, core }
}

/// Commutes `D(d)` from the right end of `core` to its left end.
///
/// Linear atoms rotate `d`; shears stay put, contribute the scalar phase
/// `f(ξ)` (or `f(η)`), are recentered in place, and shed their freshly
/// generated linear coefficient into `d` via the symmetric-ordering merge.
fn cross_leftward(core: &mut [Atom], d: &mut DVector<f64>, phase: &mut f64) {
    for idx in (0..core.len()).rev() {
        match core[idx] {
            Atom::Fourier { mode, k } => {
                for _ in 0..(k % 4) {
                    let (xi, eta) = (d[2 * mode], d[2 * mode + 1]);
                    d[2 * mode] = -eta;
                    d[2 * mode + 1] = xi;
                }
            }
            Atom::Squeeze { mode, t } => {
                d[2 * mode] *= t;
                d[2 * mode + 1] /= t;
            }
            Atom::Cz { i, j, sign } => {
                let s = sign as f64;
                d[2 * i + 1] += s * d[2 * j];
                d[2 * j + 1] += s * d[2 * i];
            }
            Atom::Cx { control, target, sign } => {
                let s = sign as f64;
                d[2 * target] += s * d[2 * control];
                d[2 * control + 1] -= s * d[2 * target + 1];
            }
            Atom::PhaseQ { mode, f } => {
                let xi = d[2 * mode];
                if xi != 0.0 {
                    *phase += f.eval(xi);
                    let sh = f.shifted(xi);
                    core[idx] = Atom::PhaseQ { mode, f: PolyCoeffs::new(0.0, sh.b, sh.c) };
                    if sh.a != 0.0 {
                        let mut z = DVector::zeros(d.len());
                        z[2 * mode + 1] = sh.a;
                        *phase += weyl_phase(d, &z);
                        *d += z;
                    }
                }
            }
            Atom::PhaseP { mode, f } => {
                let eta = d[2 * mode + 1];
                if eta != 0.0 {
                    *phase += f.eval(eta);
                    let sh = f.shifted(eta);
                    core[idx] = Atom::PhaseP { mode, f: PolyCoeffs::new(0.0, sh.b, sh.c) };
                    if sh.a != 0.0 {
                        let mut x = DVector::zeros(d.len());
                        x[2 * mode] = -sh.a;
                        *phase += weyl_phase(d, &x);
                        *d += x;
                    }
                }
            }
            // Pass 1 never leaves raw displacements in the core.
            Atom::Xd { .. } | Atom::Zd { .. } => unreachable!("displacement atom in core"),
        }
    }
}

// ---------------------------------------------------------------------------
// Pass 2: greedy core reduction
// ---------------------------------------------------------------------------

fn reduce_core(nf: &mut NormalForm) {
    loop {
        let mut committed = false;
        'search: for i in 0..nf.core.len() {
            for j in (i + 1)..nf.core.len() {
                if !could_fuse(&nf.core[i], &nf.core[j]) {
                    continue;
                }
                if let Some(new_core) = try_fuse_pair(&nf.core, i, j) {
                    nf.core = new_core;
                    committed = true;
                    break 'search;
                }
            }
        }
        if !committed {
            return;
        }
    }
}

/// Cheap shape test: could `left` and `right` fuse if they became adjacent
/// with no mutation along the way? (Transport may still mutate the moving
/// atom, so this is a heuristic filter; the committed fuse re-checks.)
fn could_fuse(left: &Atom, right: &Atom) -> bool {
    use Atom::*;
    match (left, right) {
        (Fourier { mode: a, .. }, Fourier { mode: b, .. })
        | (PhaseQ { mode: a, .. }, PhaseQ { mode: b, .. })
        | (PhaseP { mode: a, .. }, PhaseP { mode: b, .. })
        | (Squeeze { mode: a, .. }, Squeeze { mode: b, .. })
        // rotations turn shears into shears of the other quadrature
        | (PhaseQ { mode: a, .. }, PhaseP { mode: b, .. })
        | (PhaseP { mode: a, .. }, PhaseQ { mode: b, .. }) => a == b,
        // couplings and sum gates rotate into each other in transit, so any
        // two on the same unordered mode pair are worth an attempt
        (Cz { i: a, j: b, .. } | Cx { control: a, target: b, .. },
         Cz { i: c, j: d, .. } | Cx { control: c, target: d, .. }) => {
            (a.min(b), a.max(b)) == (c.min(d), c.max(d))
        }
        _ => false,
    }
}

/// Tries to transport `core[j]` leftward to slot `i + 1` and fuse it with
/// `core[i]`; returns the reduced core on success.
fn try_fuse_pair(core: &[Atom], i: usize, j: usize) -> Option<Vec<Atom>> {
    let mut scratch = core.to_vec();
    // walk the moving atom from j down to i+1
    for pos in ((i + 1)..j).rev() {
        let (m2, b2) = swap_past(&scratch[pos], &scratch[pos + 1])?;
        scratch[pos] = m2;
        scratch[pos + 1] = b2;
    }
    match fuse(&scratch[i], &scratch[i + 1])? {
        Some(merged) if merged.is_identity() => {
            scratch.splice(i..=i + 1, std::iter::empty());
        }
        Some(merged) => {
            scratch.splice(i..=i + 1, std::iter::once(merged));
        }
        None => {
            scratch.splice(i..=i + 1, std::iter::empty());
        }
    }
    Some(scratch)
}

/// Exact commutation move `B · M = M' · B'`, transporting the right atom `M`
/// past the stationary atom `B`. Returns `(M', B')`, or `None` when no exact
/// move exists in the atom alphabet.
fn swap_past(b: &Atom, m: &Atom) -> Option<(Atom, Atom)> {
    use Atom::*;
    if b.disjoint(m) {
        return Some((*m, *b));
    }
    let pass = Some((*m, *b));
    match (*b, *m) {
        // --- the q-diagonal family commutes pairwise on any overlap ---
        (Cz { .. }, Cz { .. }) | (Cz { .. }, PhaseQ { .. }) | (PhaseQ { .. }, Cz { .. }) => pass,
        (PhaseQ { .. }, PhaseQ { .. }) | (PhaseP { .. }, PhaseP { .. }) => pass,
        (Squeeze { .. }, Squeeze { .. }) => pass,
        (Fourier { .. }, Fourier { .. }) => pass,

        // --- quarter turns exchange the two couplings on the rotated mode ---
        // A rotation on mode m conjugates the q_o⊗q_m coupling through the
        // cycle q_m ↦ p_m ↦ −q_m ↦ −p_m, landing on a q⊗p sum gate for odd
        // powers and a sign-flipped coupling for the half turn.
        (Fourier { mode, k }, Cz { i, j, sign }) if mode == i || mode == j => {
            let o = if mode == i { j } else { i };
            Some((rotated_coupling(o, mode, sign, k, false), *b))
        }
        (Cz { i, j, sign }, Fourier { mode, k }) if mode == i || mode == j => {
            let o = if mode == i { j } else { i };
            Some((*m, rotated_coupling(o, mode, sign, k, true)))
        }
        // Rotating the target of a q⊗p sum gate walks the same cycle back;
        // rotating its control is inexpressible except for the half turn.
        (Fourier { mode, k }, Cx { control, target, sign }) if mode == target => {
            Some((rotated_sum_gate(control, target, sign, k, false), *b))
        }
        (Cx { control, target, sign }, Fourier { mode, k }) if mode == target => {
            Some((*m, rotated_sum_gate(control, target, sign, k, true)))
        }
        (Fourier { mode, k: 2 }, Cx { control, target, sign }) if mode == control => {
            Some((Cx { control, target, sign: -sign }, *b))
        }
        (Cx { control, target, sign }, Fourier { mode, k: 2 }) if mode == control => {
            Some((*m, Cx { control, target, sign: -sign }))
        }

        // --- shear through squeeze: rescale the polynomial ---
        (PhaseQ { mode, f }, Squeeze { mode: ms, t }) if mode == ms => {
            Some((*m, PhaseQ { mode, f: f.scaled(t) }))
        }
        (Squeeze { mode: ms, t }, PhaseQ { mode, f }) if mode == ms => {
            Some((PhaseQ { mode, f: f.scaled(1.0 / t) }, *b))
        }
        (PhaseP { mode, f }, Squeeze { mode: ms, t }) if mode == ms => {
            Some((*m, PhaseP { mode, f: f.scaled(1.0 / t) }))
        }
        (Squeeze { mode: ms, t }, PhaseP { mode, f }) if mode == ms => {
            Some((PhaseP { mode, f: f.scaled(t) }, *b))
        }

        // --- shear through quarter turns: rotate the quadrature argument ---
        // moving a quarter-turn power left past a q-shear
        (PhaseQ { mode, f }, Fourier { mode: mf, k }) if mode == mf => {
            let b2 = match k % 4 {
                1 => PhaseP { mode, f: f.reflected() },
                2 => PhaseQ { mode, f: f.reflected() },
                3 => PhaseP { mode, f },
                _ => PhaseQ { mode, f },
            };
            Some((*m, b2))
        }
        (PhaseP { mode, f }, Fourier { mode: mf, k }) if mode == mf => {
            let b2 = match k % 4 {
                1 => PhaseQ { mode, f },
                2 => PhaseP { mode, f: f.reflected() },
                3 => PhaseQ { mode, f: f.reflected() },
                _ => PhaseP { mode, f },
            };
            Some((*m, b2))
        }
        // moving a shear left past a quarter-turn power
        (Fourier { mode: mf, k }, PhaseQ { mode, f }) if mode == mf => {
            let m2 = match k % 4 {
                1 => PhaseP { mode, f },
                2 => PhaseQ { mode, f: f.reflected() },
                3 => PhaseP { mode, f: f.reflected() },
                _ => PhaseQ { mode, f },
            };
            Some((m2, *b))
        }
        (Fourier { mode: mf, k }, PhaseP { mode, f }) if mode == mf => {
            let m2 = match k % 4 {
                1 => PhaseQ { mode, f: f.reflected() },
                2 => PhaseP { mode, f: f.reflected() },
                3 => PhaseQ { mode, f },
                _ => PhaseP { mode, f },
            };
            Some((m2, *b))
        }

        // --- squeeze through quarter turns: odd powers invert the ratio ---
        (Fourier { mode: mf, k }, Squeeze { mode, t }) if mode == mf => {
            let t2 = if k % 2 == 1 { 1.0 / t } else { t };
            Some((Squeeze { mode, t: t2 }, *b))
        }
        (Squeeze { mode, t }, Fourier { mode: mf, k }) if mode == mf => {
            let t2 = if k % 2 == 1 { 1.0 / t } else { t };
            Some((*m, Squeeze { mode, t: t2 }))
        }

        // --- sum-gate commutations that hold on partial overlap ---
        (Cx { control: c1, target: t1, .. }, Cx { control: c2, target: t2, .. }) => {
            if t1 != c2 && t2 != c1 {
                pass
            } else {
                None
            }
        }
        (Cx { control, target, .. }, PhaseQ { mode, .. })
        | (PhaseQ { mode, .. }, Cx { control, target, .. }) => {
            if mode == control && mode != target {
                pass
            } else {
                None
            }
        }
        (Cx { control, target, .. }, PhaseP { mode, .. })
        | (PhaseP { mode, .. }, Cx { control, target, .. }) => {
            if mode == target && mode != control {
                pass
            } else {
                None
            }
        }
        (Cx { target, .. }, Cz { i, j, .. }) | (Cz { i, j, .. }, Cx { target, .. }) => {
            if target != i && target != j {
                pass
            } else {
                None
            }
        }

        _ => None,
    }
}

/// The coupling `exp(i·sign·q_o·q_m)` conjugated through `k` quarter turns
/// on mode `m`. `rightward` selects the conjugation direction (rotation
/// moving right past the gate instead of left).
fn rotated_coupling(o: usize, m: usize, sign: i8, k: u8, rightward: bool) -> Atom {
    // leftward: q_m ↦ p_m, −q_m, −p_m for k = 1, 2, 3
    let k = if rightward { (4 - k % 4) % 4 } else { k % 4 };
    match k {
        // exp(i·sign·q_o·p_m) = Cx(o, m, −sign)
        1 => Atom::Cx { control: o, target: m, sign: -sign },
        2 => Atom::Cz { i: o.min(m), j: o.max(m), sign: -sign },
        3 => Atom::Cx { control: o, target: m, sign },
        _ => Atom::Cz { i: o.min(m), j: o.max(m), sign },
    }
}

/// The sum gate `exp(−i·sign·q_c·p_t)` conjugated through `k` quarter turns
/// on its target mode.
fn rotated_sum_gate(c: usize, t: usize, sign: i8, k: u8, rightward: bool) -> Atom {
    // leftward: p_t ↦ −q_t, −p_t, q_t for k = 1, 2, 3
    let k = if rightward { (4 - k % 4) % 4 } else { k % 4 };
    match k {
        // exp(+i·sign·q_c·q_t) = Cz(c, t, sign)
        1 => Atom::Cz { i: c.min(t), j: c.max(t), sign },
        2 => Atom::Cx { control: c, target: t, sign: -sign },
        3 => Atom::Cz { i: c.min(t), j: c.max(t), sign: -sign },
        _ => Atom::Cx { control: c, target: t, sign },
    }
}

/// Adjacent fusion `left · right`. Returns `None` when the pair does not
/// fuse, `Some(None)` when it annihilates, `Some(Some(a))` when it merges.
fn fuse(left: &Atom, right: &Atom) -> Option<Option<Atom>> {
    use Atom::*;
    match (*left, *right) {
        (Fourier { mode, k: k1 }, Fourier { mode: m2, k: k2 }) if mode == m2 => {
            let k = (k1 + k2) % 4;
            Some(if k == 0 { None } else { Some(Fourier { mode, k }) })
        }
        (PhaseQ { mode, f: f1 }, PhaseQ { mode: m2, f: f2 }) if mode == m2 => {
            let f = snap(f1.add(&f2), &f1, &f2);
            Some(if f.is_zero() { None } else { Some(PhaseQ { mode, f }) })
        }
        (PhaseP { mode, f: f1 }, PhaseP { mode: m2, f: f2 }) if mode == m2 => {
            let f = snap(f1.add(&f2), &f1, &f2);
            Some(if f.is_zero() { None } else { Some(PhaseP { mode, f }) })
        }
        (Squeeze { mode, t: t1 }, Squeeze { mode: m2, t: t2 }) if mode == m2 => {
            let t = t1 * t2;
            Some(if (t - 1.0).abs() <= FUSE_EPS { None } else { Some(Squeeze { mode, t }) })
        }
        (Cz { i, j, sign: s1 }, Cz { i: i2, j: j2, sign: s2 }) if (i, j) == (i2, j2) => {
            if s1 + s2 == 0 {
                Some(None)
            } else {
                None // a doubled sum gate has no single-atom form
            }
        }
        (
            Cx { control, target, sign: s1 },
            Cx { control: c2, target: t2, sign: s2 },
        ) if (control, target) == (c2, t2) => {
            if s1 + s2 == 0 {
                Some(None)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Zeroes coefficients of `f` that are negligible against the operands they
/// came from, so exact cancellations survive floating-point round-off.
fn snap(f: PolyCoeffs, f1: &PolyCoeffs, f2: &PolyCoeffs) -> PolyCoeffs {
    let scale = |x1: f64, x2: f64| 1.0_f64.max(x1.abs()).max(x2.abs()) * FUSE_EPS;
    let a = if f.a.abs() <= scale(f1.a, f2.a) { 0.0 } else { f.a };
    let b = if f.b.abs() <= scale(f1.b, f2.b) { 0.0 } else { f.b };
    let c = if f.c.abs() <= scale(f1.c, f2.c) { 0.0 } else { f.c };
    PolyCoeffs::new(a, b, c)
}
