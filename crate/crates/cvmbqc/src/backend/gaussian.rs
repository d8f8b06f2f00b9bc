//! Covariance-matrix backend for Gaussian words.
//!
//! A state is a mean vector and a symmetric covariance matrix over the
//! quadratures `(q_0, p_0, q_1, p_1, …)` with the vacuum normalized to
//! `V = I/2`. Gaussian atoms act exactly: the mean maps through the atom's
//! affine action and the covariance through its symplectic matrix. Cubic
//! atoms are refused with [`Error::NonGaussianOnGaussianBackend`].
//!
//! Homodyne measurements condition the remaining modes by the usual
//! Gaussian conditioning rule and drop the measured mode from the state.

use crate::algebra::symplectic::atom_symplectic;
use crate::algebra::{Atom, GateWord, TrackedOperator};
use crate::backend::{standard_normal, Quadrature};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Gaussian state: quadrature means and covariances.
#[derive(Debug, Clone)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// The `n`-mode vacuum: zero mean, covariance `I/2`.
    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            n_modes,
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// A single momentum-squeezed mode: variances `q: 1/(2Ω²)`, `p: Ω²/2`.
    /// As `Ω → 0` this approaches the `p = 0` quadrature eigenstate.
    pub fn squeezed(omega: f64) -> Result<Self> {
        let mut st = GaussianState { n_modes: 0, mean: DVector::zeros(0), cov: DMatrix::zeros(0, 0) };
        st.append_squeezed(omega)?;
        Ok(st)
    }

    /// Rebuilds a state from a mean vector and covariance matrix (the
    /// inverse of [`Self::mean`] and [`Self::cov`]).
    pub fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d % 2 != 0 {
            return Err(Error::InvalidData(format!("odd quadrature count {d}")));
        }
        if cov.nrows() != d || cov.ncols() != d {
            return Err(Error::InvalidData(format!(
                "covariance is {}x{}, expected {d}x{d}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let finite = mean.iter().all(|v| v.is_finite()) && cov.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidData("non-finite moment".into()));
        }
        if d > 0 {
            let asym = (&cov - cov.transpose()).abs().max();
            if asym > 1e-9 {
                return Err(Error::InvalidData(format!("covariance asymmetric by {asym}")));
            }
        }
        Ok(GaussianState { n_modes: d / 2, mean, cov })
    }

    /// Appends a fresh momentum-squeezed mode to the state.
    pub fn append_squeezed(&mut self, omega: f64) -> Result<()> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidSqueeze(omega));
        }
        let n = self.n_modes;
        let mut mean = DVector::zeros(2 * (n + 1));
        mean.rows_mut(0, 2 * n).copy_from(&self.mean);
        let mut cov = DMatrix::zeros(2 * (n + 1), 2 * (n + 1));
        cov.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&self.cov);
        cov[(2 * n, 2 * n)] = 1.0 / (2.0 * omega * omega);
        cov[(2 * n + 1, 2 * n + 1)] = omega * omega / 2.0;
        self.mean = mean;
        self.cov = cov;
        self.n_modes = n + 1;
        Ok(())
    }

    /// Appends a vacuum mode.
    pub fn append_vacuum(&mut self) {
        self.append_squeezed(1.0).expect("unit squeeze is valid");
    }

    /// Number of modes currently held.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Quadrature mean vector, ordered `(q_0, p_0, …)`.
    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Quadrature covariance matrix.
    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one quadrature.
    pub fn mean_of(&self, mode: usize, quad: Quadrature) -> f64 {
        self.mean[quad_index(mode, quad)]
    }

    /// Variance of one quadrature.
    pub fn variance_of(&self, mode: usize, quad: Quadrature) -> f64 {
        let k = quad_index(mode, quad);
        self.cov[(k, k)]
    }

    /// Applies one atom. Cubic shears are rejected.
    pub fn apply_atom(&mut self, atom: &Atom) -> Result<()> {
        if !atom.is_gaussian() {
            return Err(Error::NonGaussianOnGaussianBackend);
        }
        if let Atom::Squeeze { t, .. } = *atom {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidSqueeze(t));
            }
        }
        let (s, d) = atom_symplectic(atom, self.n_modes);
        self.mean = &s * &self.mean + d;
        self.cov = &s * &self.cov * s.transpose();
        Ok(())
    }

    /// Applies a whole word (its rightmost atom first).
    pub fn apply_word(&mut self, word: &GateWord) -> Result<()> {
        word.check_modes(self.n_modes)?;
        for atom in word.atoms.iter().rev() {
            self.apply_atom(atom)?;
        }
        Ok(())
    }

    /// Applies the affine action of a tracked operator in one step.
    pub fn apply_tracked(&mut self, op: &TrackedOperator) -> Result<()> {
        if !op.gaussian {
            return Err(Error::NonGaussianOnGaussianBackend);
        }
        self.mean = &op.s * &self.mean + &op.d;
        self.cov = &op.s * &self.cov * op.s.transpose();
        Ok(())
    }

    /// Homodyne-measures one quadrature: draws the outcome from its marginal
    /// normal distribution, conditions the rest, removes the mode, and
    /// returns the outcome.
    pub fn measure(&mut self, mode: usize, quad: Quadrature, rng: &mut impl Rng) -> Result<f64> {
        let k = quad_index(mode, quad);
        let mu = self.mean[k];
        let sd = self.cov[(k, k)].sqrt();
        let outcome = mu + sd * standard_normal(rng);
        self.condition(mode, quad, outcome)?;
        Ok(outcome)
    }

    /// Conditions the state on `quad(mode) = value` and removes the mode.
    pub fn condition(&mut self, mode: usize, quad: Quadrature, value: f64) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: self.n_modes });
        }
        let k = quad_index(mode, quad);
        let sigma = self.cov[(k, k)];
        if !(sigma > 0.0) {
            return Err(Error::Protocol(format!(
                "cannot condition on degenerate quadrature {quad}@{mode}"
            )));
        }
        let dim = 2 * self.n_modes;
        // gather indices of everything except the two rows of `mode`
        let keep: Vec<usize> = (0..dim).filter(|&i| i / 2 != mode).collect();
        let c: DVector<f64> = DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.cov[(i, k)]));
        let gain = value - self.mean[k];
        let mut mean = DVector::zeros(keep.len());
        for (row, &i) in keep.iter().enumerate() {
            mean[row] = self.mean[i] + c[row] * gain / sigma;
        }
        let mut cov = DMatrix::zeros(keep.len(), keep.len());
        for (row, &i) in keep.iter().enumerate() {
            for (col, &j) in keep.iter().enumerate() {
                cov[(row, col)] = self.cov[(i, j)] - c[row] * c[col] / sigma;
            }
        }
        self.mean = mean;
        self.cov = cov;
        self.n_modes -= 1;
        Ok(())
    }

    /// Restriction to a subset of modes (a partial trace, which for Gaussian
    /// states is plain row/column selection).
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        let mut idx = Vec::with_capacity(2 * modes.len());
        for &m in modes {
            if m >= self.n_modes {
                return Err(Error::ModeOutOfRange { mode: m, n_modes: self.n_modes });
            }
            idx.push(2 * m);
            idx.push(2 * m + 1);
        }
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let mut cov = DMatrix::zeros(idx.len(), idx.len());
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                cov[(r, c)] = self.cov[(i, j)];
            }
        }
        Ok(GaussianState { n_modes: modes.len(), mean, cov })
    }

    /// State overlap `tr(ρ₁ρ₂)`:
    /// `exp(−Δᵀ(V₁+V₂)⁻¹Δ/2) / √det(V₁+V₂)` with `Δ` the mean gap.
    /// (With vacuum normalization `V = I/2` the prefactor is 1 for equal
    /// pure states.) Equals the fidelity whenever at least one of the two
    /// states is pure — `⟨ψ|ρ|ψ⟩` in the mixed-vs-pure case.
    pub fn fidelity(&self, other: &GaussianState) -> Result<f64> {
        if self.n_modes != other.n_modes {
            return Err(Error::Protocol(format!(
                "fidelity between {}-mode and {}-mode states",
                self.n_modes, other.n_modes
            )));
        }
        let vsum = &self.cov + &other.cov;
        let delta = &self.mean - &other.mean;
        let chol = vsum
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Protocol("covariance sum is not positive definite".into()))?;
        let sol = chol.solve(&delta);
        let quad_form = delta.dot(&sol);
        Ok((-0.5 * quad_form).exp() / chol.determinant().sqrt())
    }

    /// Symplectic spectrum of the covariance matrix: the moduli of the
    /// eigenvalues of `Ω·V`, one per mode, each `≥ 1/2` for physical states.
    ///
    /// Computed through a symmetric eigenproblem: with the factorization
    /// `V = L·Lᵀ`, `Ω·V` is similar to the antisymmetric `N = Lᵀ·Ω·L`, whose
    /// squared spectrum is carried by the symmetric positive matrix `−N²`.
    /// This route is exact on paper and, unlike a general nonsymmetric
    /// eigensolver, never fails to converge.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        if self.n_modes == 0 {
            return Vec::new();
        }
        let omega = crate::algebra::symplectic_form(self.n_modes);
        let l = nalgebra::Cholesky::new(self.cov.clone())
            .unwrap_or_else(|| {
                let d = self.cov.nrows();
                let jitter = DMatrix::identity(d, d) * 1e-12;
                nalgebra::Cholesky::new(&self.cov + jitter)
                    .expect("covariance stays positive definite")
            })
            .l();
        let n = l.transpose() * omega * &l;
        let mut squared = -(&n * &n);
        // symmetrize away roundoff before handing to the symmetric solver
        squared = (&squared + squared.transpose()) * 0.5;
        let mut nus: Vec<f64> = squared
            .symmetric_eigenvalues()
            .iter()
            .map(|&e| e.max(0.0).sqrt())
            .collect();
        nus.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalue moduli are finite"));
        // the spectrum comes in equal pairs, one per mode: keep one of each
        nus.into_iter().step_by(2).collect()
    }

    /// Von Neumann entropy (nats) from the symplectic spectrum.
    pub fn entropy(&self) -> f64 {
        self.symplectic_eigenvalues().iter().map(|&nu| entropy_term(nu)).sum()
    }

    /// Mutual information `S(A) + S(B) − S(A∪B)` between two disjoint mode
    /// sets (nats).
    pub fn mutual_information(&self, part_a: &[usize], part_b: &[usize]) -> Result<f64> {
        if part_a.iter().any(|m| part_b.contains(m)) {
            return Err(Error::Protocol("mutual information parts overlap".into()));
        }
        let mut joint: Vec<usize> = part_a.iter().chain(part_b).copied().collect();
        joint.sort_unstable();
        let sa = self.reduced(part_a)?.entropy();
        let sb = self.reduced(part_b)?.entropy();
        let sab = self.reduced(&joint)?.entropy();
        Ok(sa + sb - sab)
    }

}

fn quad_index(mode: usize, quad: Quadrature) -> usize {
    2 * mode
        + match quad {
            Quadrature::Q => 0,
            Quadrature::P => 1,
        }
}

fn entropy_term(nu: f64) -> f64 {
    if nu <= 0.5 + 1e-12 {
        return 0.0;
    }
    (nu + 0.5) * (nu + 0.5).ln() - (nu - 0.5) * (nu - 0.5).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vacuum_is_self_consistent() {
        let v = GaussianState::vacuum(2);
        assert_eq!(v.variance_of(0, Quadrature::Q), 0.5);
        assert_eq!(v.variance_of(1, Quadrature::P), 0.5);
        assert!((v.fidelity(&v).unwrap() - 1.0).abs() < 1e-12);
        assert!(v.entropy().abs() < 1e-9);
    }

    #[test]
    fn squeezed_state_variances_and_vacuum_overlap() {
        let omega = 0.4;
        let s = GaussianState::squeezed(omega).unwrap();
        assert!((s.variance_of(0, Quadrature::P) - omega * omega / 2.0).abs() < 1e-12);
        assert!((s.variance_of(0, Quadrature::Q) - 1.0 / (2.0 * omega * omega)).abs() < 1e-12);
        let f = s.fidelity(&GaussianState::vacuum(1)).unwrap();
        let expect = 2.0 * omega / (1.0 + omega * omega);
        assert!((f - expect).abs() < 1e-12, "got {f}, want {expect}");
    }

    #[test]
    fn displaced_vacuum_overlap() {
        let mut d = GaussianState::vacuum(1);
        d.apply_word(&"X(0.8)@0".parse().unwrap()).unwrap();
        assert_eq!(d.mean_of(0, Quadrature::Q), 0.8);
        let f = d.fidelity(&GaussianState::vacuum(1)).unwrap();
        assert!((f - (-0.8f64 * 0.8 / 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn squeeze_gate_matches_prepared_squeezed_state() {
        let omega = 0.6;
        let mut g = GaussianState::vacuum(1);
        g.apply_atom(&Atom::Squeeze { mode: 0, t: 1.0 / omega }).unwrap();
        let s = GaussianState::squeezed(omega).unwrap();
        assert!((g.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_atom_is_rejected() {
        let mut v = GaussianState::vacuum(1);
        let err = v.apply_word(&"Dq(0,0,0.5)@0".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonGaussianOnGaussianBackend));
    }

    #[test]
    fn coupling_builds_the_expected_correlations() {
        // vacuum ⊗ vacuum through the q⊗q coupling: V = S·(I/2)·Sᵀ
        let mut st = GaussianState::vacuum(2);
        st.apply_word(&"CZ@0,1".parse().unwrap()).unwrap();
        assert_eq!(st.cov()[(1, 1)], 1.0); // p0 variance doubles
        assert_eq!(st.cov()[(1, 2)], 0.5); // p0–q1 correlation
        assert_eq!(st.cov()[(0, 0)], 0.5); // q0 untouched
        // the global state stays pure
        assert!(st.entropy().abs() < 1e-9);
        // each half carries one ebit-worth of Gaussian entropy: ν = √(1/2)
        let nu = st.reduced(&[0]).unwrap().symplectic_eigenvalues()[0];
        assert!((nu - 0.5f64.sqrt()).abs() < 1e-9);
        let mi = st.mutual_information(&[0], &[1]).unwrap();
        let g = |nu: f64| (nu + 0.5) * (nu + 0.5).ln() - (nu - 0.5) * (nu - 0.5).ln();
        assert!((mi - 2.0 * g(0.5f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn conditioning_on_an_uncorrelated_mode_changes_nothing() {
        let mut st = GaussianState::vacuum(2);
        st.apply_word(&"X(0.3)@0".parse().unwrap()).unwrap();
        st.condition(1, Quadrature::P, 0.77).unwrap();
        assert_eq!(st.n_modes(), 1);
        assert_eq!(st.mean_of(0, Quadrature::Q), 0.3);
        assert_eq!(st.variance_of(0, Quadrature::Q), 0.5);
    }

    #[test]
    fn conditioning_contracts_correlated_uncertainty() {
        // After the coupling, measuring p1 sharpens q0… no: p0–q1 correlate.
        // Measure p0 and check q1's conditional update instead.
        let mut st = GaussianState::vacuum(2);
        st.apply_word(&"CZ@0,1".parse().unwrap()).unwrap();
        // p0 marginal: variance 1, correlated with q1 (cov 1/2)
        st.condition(0, Quadrature::P, 1.0).unwrap();
        // conditional mean of q1: 0 + (1/2)(1 − 0)/1 = 1/2
        assert!((st.mean_of(0, Quadrature::Q) - 0.5).abs() < 1e-12);
        // conditional variance: 1/2 − (1/2)²/1 = 1/4
        assert!((st.variance_of(0, Quadrature::Q) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn measurement_outcomes_follow_the_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut acc = 0.0;
        let n = 4000;
        for _ in 0..n {
            let mut st = GaussianState::vacuum(1);
            st.apply_word(&"Z(1.5)@0".parse().unwrap()).unwrap();
            acc += st.measure(0, Quadrature::P, &mut rng).unwrap();
        }
        let mean = acc / n as f64;
        // sd of the sample mean is √(1/2)/√n ≈ 0.011
        assert!((mean - 1.5).abs() < 0.05, "sample mean {mean}");
    }

    #[test]
    fn tracked_operator_application_matches_atomwise() {
        let w: GateWord = "Q(2)@0 F@1 CZ@0,1 X(0.4)@0 Z(-0.7)@1".parse().unwrap();
        let mut a = GaussianState::vacuum(2);
        a.apply_word(&w).unwrap();
        let mut b = GaussianState::vacuum(2);
        b.apply_tracked(&TrackedOperator::from_word(&w, 2)).unwrap();
        assert!((a.mean() - b.mean()).amax() < 1e-12);
        assert!((a.cov() - b.cov()).amax() < 1e-12);
    }
}
