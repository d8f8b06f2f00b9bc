//! Polynomial gate parameters.
//!
//! Single-mode phase gates in this crate are exponentials of a cubic
//! polynomial in one quadrature,
//!
//! ```text
//! f(x) = a·x + b·x²/2 + c·x³/3
//! ```
//!
//! stored as the coefficient triple `(a, b, c)`. The triple is closed under
//! the three operations the rewrite engine and the delegation protocol need:
//! argument shifts `x ↦ x + m`, argument scalings `x ↦ t·x`, and argument
//! reflection `x ↦ −x`. Shifting is linear in the coefficients and is
//! represented by the upper-triangular matrix returned by
//! [`PolyCoeffs::shift_matrix`]; these matrices form a one-parameter group,
//! which is what makes measurement-adapted corrections composable.

use serde::{Deserialize, Serialize};

/// Coefficients `(a, b, c)` of `f(x) = a·x + b·x²/2 + c·x³/3`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    /// Linear coefficient.
    pub a: f64,
    /// Quadratic coefficient (of `x²/2`).
    pub b: f64,
    /// Cubic coefficient (of `x³/3`).
    pub c: f64,
}

impl PolyCoeffs {
    /// The zero polynomial.
    pub const ZERO: PolyCoeffs = PolyCoeffs { a: 0.0, b: 0.0, c: 0.0 };

    /// Builds a coefficient triple.
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        PolyCoeffs { a, b, c }
    }

    /// Evaluates `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        x * (self.a + x * (self.b / 2.0 + x * self.c / 3.0))
    }

    /// True when all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0
    }

    /// True when the cubic coefficient vanishes, i.e. the gate generated by
    /// this polynomial is Gaussian.
    pub fn is_gaussian(&self) -> bool {
        self.c == 0.0
    }

    /// Coefficients of `f(x + m)` minus its constant term; the dropped
    /// constant equals `self.eval(m)` and reappears as a tracked phase.
    ///
    /// Matrix form: the returned triple is `M(m) · (a, b, c)ᵀ` with `M(m)`
    /// from [`PolyCoeffs::shift_matrix`].
    pub fn shifted(&self, m: f64) -> PolyCoeffs {
        PolyCoeffs {
            a: self.a + self.b * m + self.c * m * m,
            b: self.b + 2.0 * self.c * m,
            c: self.c,
        }
    }

    /// Coefficients of `f(t·x)`.
    pub fn scaled(&self, t: f64) -> PolyCoeffs {
        PolyCoeffs { a: self.a * t, b: self.b * t * t, c: self.c * t * t * t }
    }

    /// Coefficients of `f(−x)`.
    pub fn reflected(&self) -> PolyCoeffs {
        PolyCoeffs { a: -self.a, b: self.b, c: -self.c }
    }

    /// Coefficient-wise sum (composition of commuting phase gates).
    pub fn add(&self, other: &PolyCoeffs) -> PolyCoeffs {
        PolyCoeffs { a: self.a + other.a, b: self.b + other.b, c: self.c + other.c }
    }

    /// Coefficient-wise negation (the inverse gate's polynomial).
    pub fn neg(&self) -> PolyCoeffs {
        PolyCoeffs { a: -self.a, b: -self.b, c: -self.c }
    }

    /// The 3×3 matrix `M(m)` with `M(m)·(a,b,c)ᵀ` = coefficients of
    /// `f(x + m)` (constant term dropped):
    ///
    /// ```text
    ///         ⎡ 1   m   m² ⎤
    /// M(m) =  ⎢ 0   1   2m ⎥
    ///         ⎣ 0   0   1  ⎦
    /// ```
    ///
    /// These matrices satisfy `M(u)·M(v) = M(u+v)` and `M(m)⁻¹ = M(−m)`.
    pub fn shift_matrix(m: f64) -> [[f64; 3]; 3] {
        [[1.0, m, m * m], [0.0, 1.0, 2.0 * m], [0.0, 0.0, 1.0]]
    }

    /// Maximum absolute difference of coefficients.
    pub fn max_dev(&self, other: &PolyCoeffs) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
    }
}

impl std::ops::Index<usize> for PolyCoeffs {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.a,
            1 => &self.b,
            2 => &self.c,
            _ => panic!("PolyCoeffs index out of range"),
        }
    }
}

impl From<[f64; 3]> for PolyCoeffs {
    fn from(v: [f64; 3]) -> Self {
        PolyCoeffs::new(v[0], v[1], v[2])
    }
}

impl From<PolyCoeffs> for [f64; 3] {
    fn from(p: PolyCoeffs) -> [f64; 3] {
        [p.a, p.b, p.c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_mat(m: [[f64; 3]; 3], v: PolyCoeffs) -> PolyCoeffs {
        let x: [f64; 3] = v.into();
        PolyCoeffs::new(
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        )
    }

    #[test]
    fn shifted_matches_direct_expansion() {
        // Oracle: evaluate f(x+m) − f(m) on a grid and compare against the
        // shifted-coefficient polynomial evaluated at x.
        let f = PolyCoeffs::new(0.7, -1.3, 0.4);
        let m = 1.9;
        let g = f.shifted(m);
        for k in -5..=5 {
            let x = k as f64 * 0.37;
            let direct = f.eval(x + m) - f.eval(m);
            assert!((g.eval(x) - direct).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn shift_matrix_matches_shifted() {
        let f = PolyCoeffs::new(-0.2, 0.9, 1.1);
        let m = -0.63;
        let via_mat = apply_mat(PolyCoeffs::shift_matrix(m), f);
        assert!(via_mat.max_dev(&f.shifted(m)) < 1e-14);
    }

    #[test]
    fn shift_matrices_form_a_group() {
        let f = PolyCoeffs::new(0.3, -0.8, 0.5);
        let (u, v) = (0.77, -1.21);
        // M(u)·M(v) acts as M(u+v)
        let lhs = f.shifted(v).shifted(u);
        let rhs = f.shifted(u + v);
        assert!(lhs.max_dev(&rhs) < 1e-12);
        // M(m)⁻¹ = M(−m)
        let back = f.shifted(u).shifted(-u);
        assert!(back.max_dev(&f) < 1e-12);
    }

    #[test]
    fn scaled_matches_direct_expansion() {
        let f = PolyCoeffs::new(0.7, -1.3, 0.4);
        let t = 1.7;
        let g = f.scaled(t);
        for k in -4..=4 {
            let x = k as f64 * 0.51;
            assert!((g.eval(x) - f.eval(t * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn reflected_matches_direct_expansion() {
        let f = PolyCoeffs::new(0.7, -1.3, 0.4);
        let g = f.reflected();
        for k in -4..=4 {
            let x = k as f64 * 0.51;
            assert!((g.eval(x) - f.eval(-x)).abs() < 1e-12);
        }
    }
}
