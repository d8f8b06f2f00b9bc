//! Truncated number-basis backend.
//!
//! States live in `dim^n_modes` complex amplitudes over a photon-number
//! cutoff `dim`. Every gate is the **exact exponential of the truncated
//! generator**, so evolution is exactly unitary at any cutoff: truncation
//! error enters only through the generators themselves and can be watched
//! via the band-leakage diagnostic rather than guessed.
//!
//! The whole backend runs on *real symmetric* eigendecompositions:
//!
//! * the position operator `Q = (a + a†)/√2` is real tridiagonal; its
//!   eigenbasis `V_q` with grid `x_k` diagonalizes every `q`-diagonal gate;
//! * the momentum eigenbasis is `V_p = W·V_q` with `W = diag(iⁿ)`, because
//!   `P = W·Q·W†` — same grid, no complex solver needed;
//! * the squeeze generator `(QP + PQ)/2` becomes real symmetric after
//!   conjugation by `diag(e^{iπn/4})`, so squeezing also reduces to a real
//!   eigenproblem;
//! * the quarter-turn rotation is diagonal in the number basis with the
//!   honest half-integer phases `e^{iπ(2n+1)k/4}` (four applications give
//!   `−1`, not `+1`).
//!
//! Homodyne measurements are discretized onto the `dim` grid points `x_k`:
//! outcome `k` projects onto the corresponding quadrature eigenvector. The
//! grid is the spectrum of the truncated quadrature, so the discrete
//! distribution is a faithful finite surrogate of the continuous one.

use crate::algebra::{Atom, GateWord};
use crate::backend::Quadrature;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

/// Eigen-structure shared by all gates at one cutoff.
#[derive(Debug, Clone)]
pub struct QuadratureCache {
    dim: usize,
    /// Quadrature grid: eigenvalues of the truncated position operator,
    /// ascending.
    xs: Vec<f64>,
    /// Columns are the position eigenvectors (real orthogonal).
    vq: DMatrix<f64>,
    /// Transpose of `vq`, cached for the hot basis-change path.
    vqt: DMatrix<f64>,
    /// `iⁿ` — conjugating the position eigenbasis into the momentum one.
    w: Vec<Complex64>,
    /// `e^{iπn/4}` — conjugates the squeeze generator real.
    w4: Vec<Complex64>,
    /// Eigenvalues of the realified squeeze generator.
    sq_vals: Vec<f64>,
    /// Eigenvectors of the realified squeeze generator.
    sq_vecs: DMatrix<f64>,
    /// Transpose of `sq_vecs`.
    sq_vecs_t: DMatrix<f64>,
}

/// Sorts a symmetric eigendecomposition by ascending eigenvalue.
fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let dim = m.nrows();
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite eigenvalues")
    });
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(dim, dim);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

impl QuadratureCache {
    /// Builds the cache for cutoff `dim` (two real `dim×dim` eigenproblems).
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "cutoff must be at least 2");
        // Q = (a + a†)/√2, tridiagonal with Q[n, n+1] = √(n+1)/√2
        let mut q = DMatrix::zeros(dim, dim);
        for n in 0..dim - 1 {
            let v = ((n + 1) as f64 / 2.0).sqrt();
            q[(n, n + 1)] = v;
            q[(n + 1, n)] = v;
        }
        let (xs, vq) = sorted_symmetric_eigen(q);

        // squeeze generator (QP+PQ)/2 = i(a†² − a²)/2, realified by
        // conjugation with diag(e^{iπn/4}): entries −√((n+1)(n+2))/2 on the
        // ±2 off-diagonals
        let mut g = DMatrix::zeros(dim, dim);
        for n in 0..dim.saturating_sub(2) {
            let v = -(((n + 1) * (n + 2)) as f64).sqrt() / 2.0;
            g[(n, n + 2)] = v;
            g[(n + 2, n)] = v;
        }
        let (sq_vals, sq_vecs) = sorted_symmetric_eigen(g);

        let w = (0..dim).map(|n| Complex64::i().powu(n as u32)).collect();
        let w4 = (0..dim)
            .map(|n| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * n as f64))
            .collect();
        let vqt = vq.transpose();
        let sq_vecs_t = sq_vecs.transpose();
        QuadratureCache { dim, xs, vq, vqt, w, w4, sq_vals, sq_vecs, sq_vecs_t }
    }

    /// The quadrature grid (ascending).
    pub fn grid(&self) -> &[f64] {
        &self.xs
    }

    /// Position eigenvectors as columns.
    pub fn q_eigenvectors(&self) -> &DMatrix<f64> {
        &self.vq
    }

    /// Index of the grid point closest to `value`.
    pub fn nearest_grid_index(&self, value: f64) -> usize {
        let mut best = 0;
        let mut gap = f64::INFINITY;
        for (k, &x) in self.xs.iter().enumerate() {
            let d = (x - value).abs();
            if d < gap {
                gap = d;
                best = k;
            }
        }
        best
    }

    /// The quadrature eigenvector for grid point `k`, in the number basis.
    pub fn basis_vector(&self, quad: Quadrature, k: usize) -> DVector<Complex64> {
        DVector::from_iterator(
            self.dim,
            (0..self.dim).map(|n| match quad {
                Quadrature::Q => Complex64::new(self.vq[(n, k)], 0.0),
                Quadrature::P => self.w[n] * self.vq[(n, k)],
            }),
        )
    }
}

/// Pure state over `n_modes` modes at a common cutoff; amplitudes are
/// ordered with mode 0 as the slowest axis.
#[derive(Debug, Clone)]
pub struct FockState {
    n_modes: usize,
    dim: usize,
    amps: Vec<Complex64>,
}

impl FockState {
    /// Rebuilds a state from raw parts (the inverse of [`Self::amplitudes`]).
    pub fn from_amplitudes(n_modes: usize, dim: usize, amps: Vec<Complex64>) -> Result<FockState> {
        if dim == 0 {
            return Err(Error::InvalidData("cutoff must be at least 1".into()));
        }
        let expected = dim.pow(n_modes as u32);
        if amps.len() != expected {
            return Err(Error::InvalidData(format!(
                "expected {expected} amplitudes for {n_modes} modes at cutoff {dim}, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidData("non-finite amplitude".into()));
        }
        Ok(FockState { n_modes, dim, amps })
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Photon-number cutoff per mode.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw amplitudes (length `dim^n_modes`).
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Squared norm (1 up to round-off for every state this backend makes).
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Complex overlap `⟨self|other⟩`.
    pub fn inner_product(&self, other: &FockState) -> Result<Complex64> {
        if self.n_modes != other.n_modes || self.dim != other.dim {
            return Err(Error::Protocol("overlap of differently shaped states".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fidelity `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &FockState) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Tensor product `self ⊗ other` (other's modes appended).
    pub fn tensor(&self, other: &FockState) -> Result<FockState> {
        if self.dim != other.dim {
            return Err(Error::Protocol("tensor of states with different cutoffs".into()));
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(FockState { n_modes: self.n_modes + other.n_modes, dim: self.dim, amps })
    }

    /// The amplitudes of a single-mode state as a vector.
    pub fn single_mode_vector(&self) -> Result<DVector<Complex64>> {
        if self.n_modes != 1 {
            return Err(Error::Protocol(format!(
                "expected a single-mode state, found {} modes",
                self.n_modes
            )));
        }
        Ok(DVector::from_column_slice(&self.amps))
    }

    fn strides(&self, axis: usize) -> (usize, usize) {
        // (outer count, inner stride)
        let inner = self.dim.pow((self.n_modes - 1 - axis) as u32);
        let outer = self.dim.pow(axis as u32);
        (outer, inner)
    }

    /// Applies a diagonal along one axis.
    fn apply_diag_axis(&mut self, axis: usize, diag: &[Complex64]) {
        let d = self.dim;
        let (outer, inner) = self.strides(axis);
        for o in 0..outer {
            let base_o = o * d * inner;
            for (k, &ph) in diag.iter().enumerate() {
                let base = base_o + k * inner;
                for i in 0..inner {
                    self.amps[base + i] *= ph;
                }
            }
        }
    }

    /// Applies a real matrix along one axis (`out = M·in` per fiber),
    /// walking the matrix column-wise so the inner loops stay contiguous.
    fn apply_real_matrix_axis(&mut self, axis: usize, m: &DMatrix<f64>) {
        let d = self.dim;
        let (outer, inner) = self.strides(axis);
        let ms = m.as_slice();
        let mut fiber = vec![Complex64::default(); d];
        let mut out = vec![Complex64::default(); d];
        for o in 0..outer {
            let base_o = o * d * inner;
            for i in 0..inner {
                for (k, f) in fiber.iter_mut().enumerate() {
                    *f = self.amps[base_o + k * inner + i];
                }
                out.fill(Complex64::default());
                for (k, &c) in fiber.iter().enumerate() {
                    if c.re == 0.0 && c.im == 0.0 {
                        continue;
                    }
                    let col = &ms[k * d..(k + 1) * d];
                    for (r, &mk) in col.iter().enumerate() {
                        out[r].re += mk * c.re;
                        out[r].im += mk * c.im;
                    }
                }
                for (r, &v) in out.iter().enumerate() {
                    self.amps[base_o + r * inner + i] = v;
                }
            }
        }
    }

    /// Applies a joint diagonal over two axes: `amps[..a..b..] *= phases[a][b]`.
    fn apply_joint_diag(&mut self, axis_a: usize, axis_b: usize, phase: impl Fn(usize, usize) -> Complex64) {
        let d = self.dim;
        let n = self.n_modes;
        let stride_a = d.pow((n - 1 - axis_a) as u32);
        let stride_b = d.pow((n - 1 - axis_b) as u32);
        let total = self.amps.len();
        // precompute the table once; dim² entries
        let mut table = vec![Complex64::default(); d * d];
        for a in 0..d {
            for b in 0..d {
                table[a * d + b] = phase(a, b);
            }
        }
        for idx in 0..total {
            let ia = (idx / stride_a) % d;
            let ib = (idx / stride_b) % d;
            self.amps[idx] *= table[ia * d + ib];
        }
    }
}

/// Gate engine: owns the eigen-cache for one cutoff and evolves states.
#[derive(Debug, Clone)]
pub struct FockSim {
    cache: QuadratureCache,
}

impl FockSim {
    /// Builds an engine for cutoff `dim`.
    pub fn new(dim: usize) -> Self {
        FockSim { cache: QuadratureCache::new(dim) }
    }

    /// The shared eigen-cache.
    pub fn cache(&self) -> &QuadratureCache {
        &self.cache
    }

    /// Cutoff of this engine.
    pub fn dim(&self) -> usize {
        self.cache.dim
    }

    /// The `n`-mode vacuum.
    pub fn vacuum(&self, n_modes: usize) -> FockState {
        let mut amps = vec![Complex64::default(); self.cache.dim.pow(n_modes as u32)];
        amps[0] = Complex64::new(1.0, 0.0);
        FockState { n_modes, dim: self.cache.dim, amps }
    }

    /// One momentum-squeezed mode (`q`-variance `1/(2Ω²)`, `p`-variance
    /// `Ω²/2`), truncated and renormalized.
    ///
    /// Closed form: only even levels occupied, with
    /// `c₀ = √sech(r)`, `c_{2k+2}/c_{2k} = tanh(r)·√((2k+1)/(2k+2))`,
    /// `r = ln(1/Ω)`.
    pub fn squeezed(&self, omega: f64) -> Result<FockState> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidSqueeze(omega));
        }
        let dim = self.cache.dim;
        let r = (1.0 / omega).ln();
        let t = r.tanh();
        let mut amps = vec![Complex64::default(); dim];
        let mut c = (1.0 / r.cosh()).sqrt();
        let mut k = 0usize;
        while 2 * k < dim {
            amps[2 * k] = Complex64::new(c, 0.0);
            let n = 2 * k;
            c *= t * (((n + 1) as f64) / ((n + 2) as f64)).sqrt();
            k += 1;
        }
        let mut st = FockState { n_modes: 1, dim, amps };
        let norm = st.norm_sq().sqrt();
        for a in &mut st.amps {
            *a /= norm;
        }
        Ok(st)
    }

    /// Appends a freshly squeezed mode to a state.
    pub fn attach_squeezed(&self, state: &FockState, omega: f64) -> Result<FockState> {
        state.tensor(&self.squeezed(omega)?)
    }

    /// Applies one atom.
    pub fn apply_atom(&self, state: &mut FockState, atom: &Atom) -> Result<()> {
        let dim = self.cache.dim;
        if state.dim != dim {
            return Err(Error::Protocol("state cutoff differs from engine cutoff".into()));
        }
        let (m1, m2) = atom.modes();
        let max = m2.map_or(m1, |b| m1.max(b));
        if max >= state.n_modes {
            return Err(Error::ModeOutOfRange { mode: max, n_modes: state.n_modes });
        }
        match *atom {
            Atom::Zd { mode, s } => self.q_diag(state, mode, |x| Complex64::from_polar(1.0, s * x)),
            Atom::Xd { mode, s } => self.p_diag(state, mode, |x| Complex64::from_polar(1.0, -s * x)),
            Atom::PhaseQ { mode, f } => self.q_diag(state, mode, |x| Complex64::from_polar(1.0, f.eval(x))),
            Atom::PhaseP { mode, f } => self.p_diag(state, mode, |x| Complex64::from_polar(1.0, f.eval(x))),
            Atom::Fourier { mode, k } => {
                let steps = (k % 4) as f64;
                let diag: Vec<Complex64> = (0..dim)
                    .map(|n| {
                        Complex64::from_polar(
                            1.0,
                            std::f64::consts::FRAC_PI_4 * (2 * n + 1) as f64 * steps,
                        )
                    })
                    .collect();
                state.apply_diag_axis(mode, &diag);
            }
            Atom::Squeeze { mode, t } => {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidSqueeze(t));
                }
                let lam = t.ln();
                // exp(−i·ln t·G) = W₄†·V_g·diag(e^{−i·ln t·λ})·V_gᵀ·W₄
                let w4: Vec<Complex64> = self.cache.w4.clone();
                let w4c: Vec<Complex64> = w4.iter().map(|z| z.conj()).collect();
                state.apply_diag_axis(mode, &w4);
                state.apply_real_matrix_axis(mode, &self.cache.sq_vecs_t);
                let diag: Vec<Complex64> = self
                    .cache
                    .sq_vals
                    .iter()
                    .map(|&g| Complex64::from_polar(1.0, -lam * g))
                    .collect();
                state.apply_diag_axis(mode, &diag);
                state.apply_real_matrix_axis(mode, &self.cache.sq_vecs);
                state.apply_diag_axis(mode, &w4c);
            }
            Atom::Cz { i, j, sign } => {
                let s = sign as f64;
                self.to_basis(state, i, Quadrature::Q);
                self.to_basis(state, j, Quadrature::Q);
                let xs = self.cache.xs.clone();
                state.apply_joint_diag(i, j, |a, b| Complex64::from_polar(1.0, s * xs[a] * xs[b]));
                self.from_basis(state, j, Quadrature::Q);
                self.from_basis(state, i, Quadrature::Q);
            }
            Atom::Cx { control, target, sign } => {
                let s = sign as f64;
                self.to_basis(state, control, Quadrature::Q);
                self.to_basis(state, target, Quadrature::P);
                let xs = self.cache.xs.clone();
                state.apply_joint_diag(control, target, |a, b| {
                    Complex64::from_polar(1.0, -s * xs[a] * xs[b])
                });
                self.from_basis(state, target, Quadrature::P);
                self.from_basis(state, control, Quadrature::Q);
            }
        }
        Ok(())
    }

    /// Applies a word (rightmost atom first).
    pub fn apply_word(&self, state: &mut FockState, word: &GateWord) -> Result<()> {
        word.check_modes(state.n_modes)?;
        for atom in word.atoms.iter().rev() {
            self.apply_atom(state, atom)?;
        }
        Ok(())
    }

    /// Applies `exp(i·f(q_mode))` with an arbitrary phase profile.
    fn q_diag(&self, state: &mut FockState, mode: usize, f: impl Fn(f64) -> Complex64) {
        self.to_basis(state, mode, Quadrature::Q);
        let diag: Vec<Complex64> = self.cache.xs.iter().map(|&x| f(x)).collect();
        state.apply_diag_axis(mode, &diag);
        self.from_basis(state, mode, Quadrature::Q);
    }

    fn p_diag(&self, state: &mut FockState, mode: usize, f: impl Fn(f64) -> Complex64) {
        self.to_basis(state, mode, Quadrature::P);
        let diag: Vec<Complex64> = self.cache.xs.iter().map(|&x| f(x)).collect();
        state.apply_diag_axis(mode, &diag);
        self.from_basis(state, mode, Quadrature::P);
    }

    /// Rotates one axis from the number basis into a quadrature eigenbasis.
    fn to_basis(&self, state: &mut FockState, axis: usize, quad: Quadrature) {
        if quad == Quadrature::P {
            let wc: Vec<Complex64> = self.cache.w.iter().map(|z| z.conj()).collect();
            state.apply_diag_axis(axis, &wc);
        }
        state.apply_real_matrix_axis(axis, &self.cache.vqt);
    }

    /// Inverse of [`Self::to_basis`].
    fn from_basis(&self, state: &mut FockState, axis: usize, quad: Quadrature) {
        state.apply_real_matrix_axis(axis, &self.cache.vq);
        if quad == Quadrature::P {
            state.apply_diag_axis(axis, &self.cache.w);
        }
    }

    /// Marginal outcome distribution of one quadrature over the grid.
    pub fn probabilities(&self, state: &FockState, mode: usize, quad: Quadrature) -> Result<Vec<f64>> {
        if mode >= state.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: state.n_modes });
        }
        let mut work = state.clone();
        self.to_basis(&mut work, mode, quad);
        let d = work.dim;
        let (outer, inner) = work.strides(mode);
        let mut probs = vec![0.0; d];
        for o in 0..outer {
            let base_o = o * d * inner;
            for (k, p) in probs.iter_mut().enumerate() {
                let base = base_o + k * inner;
                for i in 0..inner {
                    *p += work.amps[base + i].norm_sqr();
                }
            }
        }
        Ok(probs)
    }

    /// Samples a grid outcome index from the marginal distribution.
    pub fn sample(
        &self,
        state: &FockState,
        mode: usize,
        quad: Quadrature,
        rng: &mut impl Rng,
    ) -> Result<usize> {
        let probs = self.probabilities(state, mode, quad)?;
        let total: f64 = probs.iter().sum();
        let mut u: f64 = rng.gen::<f64>() * total;
        for (k, &p) in probs.iter().enumerate() {
            u -= p;
            if u <= 0.0 {
                return Ok(k);
            }
        }
        Ok(probs.len() - 1)
    }

    /// Projects onto grid outcome `k` of a quadrature, removes the measured
    /// mode, renormalizes, and returns the outcome probability.
    pub fn project(
        &self,
        state: &mut FockState,
        mode: usize,
        quad: Quadrature,
        k: usize,
    ) -> Result<f64> {
        if mode >= state.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: state.n_modes });
        }
        let d = state.dim;
        if k >= d {
            return Err(Error::Protocol(format!("grid index {k} out of range for cutoff {d}")));
        }
        let u = self.cache.basis_vector(quad, k);
        let (outer, inner) = state.strides(mode);
        let mut new_amps = vec![Complex64::default(); outer * inner];
        for o in 0..outer {
            let base_o = o * d * inner;
            for i in 0..inner {
                let mut acc = Complex64::default();
                for (n, un) in u.iter().enumerate() {
                    acc += un.conj() * state.amps[base_o + n * inner + i];
                }
                new_amps[o * inner + i] = acc;
            }
        }
        let prob: f64 = new_amps.iter().map(|a| a.norm_sqr()).sum();
        if prob <= 1e-300 {
            return Err(Error::Protocol("projection onto a zero-probability branch".into()));
        }
        let norm = prob.sqrt();
        for a in &mut new_amps {
            *a /= norm;
        }
        state.amps = new_amps;
        state.n_modes -= 1;
        Ok(prob)
    }

    /// The grid value for outcome index `k`.
    pub fn grid_value(&self, k: usize) -> f64 {
        self.cache.xs[k]
    }

    /// Mean of a quadrature via its grid marginal.
    pub fn mean_quadrature(&self, state: &FockState, mode: usize, quad: Quadrature) -> Result<f64> {
        let probs = self.probabilities(state, mode, quad)?;
        Ok(probs.iter().zip(&self.cache.xs).map(|(p, x)| p * x).sum())
    }

    /// Variance of a quadrature via its grid marginal.
    pub fn variance_quadrature(
        &self,
        state: &FockState,
        mode: usize,
        quad: Quadrature,
    ) -> Result<f64> {
        let probs = self.probabilities(state, mode, quad)?;
        let mean: f64 = probs.iter().zip(&self.cache.xs).map(|(p, x)| p * x).sum();
        Ok(probs.iter().zip(&self.cache.xs).map(|(p, x)| p * (x - mean) * (x - mean)).sum::<f64>())
    }

    /// Photon-number marginal of one mode.
    pub fn number_marginal(&self, state: &FockState, mode: usize) -> Result<Vec<f64>> {
        if mode >= state.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: state.n_modes });
        }
        let d = state.dim;
        let (outer, inner) = state.strides(mode);
        let mut probs = vec![0.0; d];
        for o in 0..outer {
            let base_o = o * d * inner;
            for (k, p) in probs.iter_mut().enumerate() {
                let base = base_o + k * inner;
                for i in 0..inner {
                    *p += state.amps[base + i].norm_sqr();
                }
            }
        }
        Ok(probs)
    }

    /// Occupancy of the top `bands` photon levels of one mode — the
    /// truncation-leakage diagnostic.
    pub fn tail_weight(&self, state: &FockState, mode: usize, bands: usize) -> Result<f64> {
        let probs = self.number_marginal(state, mode)?;
        let cut = probs.len().saturating_sub(bands);
        Ok(probs[cut..].iter().sum())
    }
}

/// Trace distance `‖ρ_a − ρ_b‖₁ / 2` between Hermitian density matrices,
/// computed through the real symmetric embedding `[[A, −B], [B, A]]` of
/// `A + iB` (whose spectrum is that of the Hermitian matrix, doubled).
pub fn trace_distance(rho_a: &DMatrix<Complex64>, rho_b: &DMatrix<Complex64>) -> f64 {
    let d = rho_a.nrows();
    let mut emb = DMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            let z = rho_a[(r, c)] - rho_b[(r, c)];
            emb[(r, c)] = z.re;
            emb[(r + d, c + d)] = z.re;
            emb[(r, c + d)] = -z.im;
            emb[(r + d, c)] = z.im;
        }
    }
    let eig = emb.symmetric_eigen();
    // each eigenvalue of the Hermitian difference appears twice
    eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>() / 4.0
}

/// Accumulates `weight · |ψ⟩⟨ψ|` of a single-mode state into `rho`.
pub fn accumulate_density(
    rho: &mut DMatrix<Complex64>,
    state: &FockState,
    weight: f64,
) -> Result<()> {
    let v = state.single_mode_vector()?;
    if rho.nrows() != v.len() {
        return Err(Error::Protocol("density accumulator has the wrong dimension".into()));
    }
    for r in 0..v.len() {
        for c in 0..v.len() {
            rho[(r, c)] += v[r] * v[c].conj() * weight;
        }
    }
    Ok(())
}
