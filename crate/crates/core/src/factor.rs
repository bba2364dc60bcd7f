//! Signed QR factorization of shifted tridiagonal matrices.
//!
//! For an almost invertible matrix `M` (first `n−1` columns independent)
//! there is a unique factorization `M = Q⋆R⋆` with `Q⋆ ∈ SO(n)`, `R⋆` upper
//! triangular, and `(R⋆)_{i,i} > 0` for `i < n`; the last diagonal entry of
//! `R⋆` carries the sign of `det M` and vanishes exactly when `M` is
//! singular. Here `M = T − sI` is tridiagonal, so `Q⋆` is a product of
//! `n−1` Givens rotations eliminating the subdiagonal top-down, and `R⋆`
//! has three bands.

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;
use nalgebra::DMatrix;

/// Relative pivot threshold below which the shifted matrix is declared not
/// almost invertible.
pub const PIVOT_TOL: f64 = 1e-13;

/// Relative threshold on the last diagonal entry of `R⋆` below which the
/// shifted matrix is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A rotation acting on coordinates `(plane, plane+1)`.
///
/// Applied on the left it maps rows `(r_i, r_{i+1})` to
/// `(c·r_i + s·r_{i+1}, −s·r_i + c·r_{i+1})`.
#[derive(Debug, Clone, Copy)]
pub struct GivensRotation {
    pub plane: usize,
    pub c: f64,
    pub s: f64,
}

/// The pair `(Q⋆, R⋆)` for `M = T − sI`, with `Q⋆` kept both as the
/// rotation sequence and in dense form.
#[derive(Debug, Clone)]
pub struct QRStarFactors {
    rotations: Vec<GivensRotation>,
    r_diag: Vec<f64>,
    r_super1: Vec<f64>,
    r_super2: Vec<f64>,
    scale: f64,
}

impl QRStarFactors {
    pub fn n(&self) -> usize {
        self.r_diag.len()
    }

    pub fn rotations(&self) -> &[GivensRotation] {
        &self.rotations
    }

    /// Diagonal of `R⋆`. The first `n−1` entries are positive; the last is
    /// unrestricted.
    pub fn r_diag(&self) -> &[f64] {
        &self.r_diag
    }

    pub fn r_super1(&self) -> &[f64] {
        &self.r_super1
    }

    pub fn r_super2(&self) -> &[f64] {
        &self.r_super2
    }

    /// Last diagonal entry of `R⋆`, whose sign is the sign of `det(T − sI)`.
    pub fn r_last(&self) -> f64 {
        *self.r_diag.last().unwrap()
    }

    /// Scale `1 + ‖T‖ + |s|` used for relative thresholds.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Consecutive diagonal ratios `(R⋆)_{i+1,i+1} / (R⋆)_{i,i}`, the
    /// per-entry subdiagonal multipliers of a step.
    pub fn ratios(&self) -> Vec<f64> {
        self.r_diag.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Sign of `det(T − sI)` in `{−1, 0, +1}`: the product of the diagonal
    /// of `R⋆`, with the last entry thresholded at `SINGULAR_TOL·scale`.
    pub fn det_sign(&self) -> i8 {
        let last = self.r_last();
        if last.abs() <= SINGULAR_TOL * self.scale {
            0
        } else if last > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Dense `Q⋆`, the accumulated product of the rotation transposes.
    pub fn qstar(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut q = DMatrix::<f64>::identity(n, n);
        for rot in &self.rotations {
            let (i, c, s) = (rot.plane, rot.c, rot.s);
            // q ← q · Gᵀ mixes columns i, i+1.
            for r in 0..n {
                let a = q[(r, i)];
                let b = q[(r, i + 1)];
                q[(r, i)] = c * a + s * b;
                q[(r, i + 1)] = -s * a + c * b;
            }
        }
        q
    }

    /// Dense `R⋆` assembled from its three bands.
    pub fn rstar(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut r = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            r[(i, i)] = self.r_diag[i];
        }
        for i in 0..n.saturating_sub(1) {
            r[(i, i + 1)] = self.r_super1[i];
        }
        for i in 0..n.saturating_sub(2) {
            r[(i, i + 2)] = self.r_super2[i];
        }
        r
    }
}

/// Computes the signed factorization `T − sI = Q⋆R⋆`.
///
/// Fails with `NotAlmostInvertible` when an elimination pivot among the
/// first `n−1` columns falls below `PIVOT_TOL·(1 + ‖T‖ + |s|)`; this cannot
/// happen for unreduced `T`.
pub fn factor_shifted(t: &SymTridiagonal, s: f64) -> Result<QRStarFactors> {
    let n = t.n();
    let scale = 1.0 + t.norm() + s.abs();
    let d = t.diag();
    let e = t.sub();

    let mut rotations = Vec::with_capacity(n.saturating_sub(1));
    let mut r_diag = vec![0.0; n];
    let mut r_super1 = vec![0.0; n.saturating_sub(1)];
    let mut r_super2 = vec![0.0; n.saturating_sub(2)];

    // x = current (i,i) entry, w = current (i,i+1) entry of the partially
    // rotated matrix; rows below i are untouched until their own rotation.
    let mut x = d[0] - s;
    let mut w = if n > 1 { e[0] } else { 0.0 };
    for i in 0..n.saturating_sub(1) {
        let z = e[i];
        let r = x.hypot(z);
        if r <= PIVOT_TOL * scale {
            return Err(Error::NotAlmostInvertible { column: i, pivot: r });
        }
        let c = x / r;
        let sn = z / r;
        rotations.push(GivensRotation { plane: i, c, s: sn });
        r_diag[i] = r;
        r_super1[i] = c * w + sn * (d[i + 1] - s);
        x = -sn * w + c * (d[i + 1] - s);
        if i + 2 < n {
            r_super2[i] = sn * e[i + 1];
            w = c * e[i + 1];
        }
    }
    r_diag[n - 1] = x;

    Ok(QRStarFactors {
        rotations,
        r_diag,
        r_super1,
        r_super2,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(diag: &[f64], sub: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(diag.to_vec(), sub.to_vec()).unwrap()
    }

    fn reconstruction_residual(t: &SymTridiagonal, s: f64, f: &QRStarFactors) -> f64 {
        let n = t.n();
        let m = t.to_dense() - DMatrix::<f64>::identity(n, n) * s;
        let qr = f.qstar() * f.rstar();
        (qr - m).amax()
    }

    #[test]
    fn identity_factors_trivially() {
        let t = tri(&[1.0, 1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]);
        let f = factor_shifted(&t, 0.0).unwrap();
        assert!((f.qstar() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-15);
        for (i, &r) in f.r_diag().iter().enumerate() {
            assert!((r - 1.0).abs() < 1e-15, "R[{i},{i}] = {r}");
        }
    }

    #[test]
    fn negative_last_diagonal_is_legal() {
        // diag(1,1,−1) is its own factorization: Q⋆ = I, R⋆ = diag(1,1,−1).
        let t = tri(&[1.0, 1.0, -1.0], &[0.0, 0.0]);
        let f = factor_shifted(&t, 0.0).unwrap();
        assert!((f.qstar() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
        assert_eq!(f.r_diag()[0], 1.0);
        assert_eq!(f.r_diag()[1], 1.0);
        assert_eq!(f.r_diag()[2], -1.0);
        assert_eq!(f.det_sign(), -1);
    }

    #[test]
    fn singular_shift_zeroes_last_entry() {
        // T = [[0,1],[1,0]], s = 1: det(T − I) = 0, hand computation gives
        // Q⋆ = [[−1/√2, −1/√2],[1/√2, −1/√2]], R⋆ = [[√2, −√2],[0, 0]].
        let t = tri(&[0.0, 0.0], &[1.0]);
        let f = factor_shifted(&t, 1.0).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let q = f.qstar();
        assert!((q[(0, 0)] + inv_sqrt2).abs() < 1e-15);
        assert!((q[(0, 1)] + inv_sqrt2).abs() < 1e-15);
        assert!((q[(1, 0)] - inv_sqrt2).abs() < 1e-15);
        assert!((q[(1, 1)] + inv_sqrt2).abs() < 1e-15);
        assert!((f.r_diag()[0] - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((f.r_super1()[0] + std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(f.r_last().abs() < 1e-15);
        assert_eq!(f.det_sign(), 0);
        assert!(reconstruction_residual(&t, 1.0, &f) < 1e-15);
    }

    #[test]
    fn one_by_one_factorization() {
        let t = tri(&[5.0], &[]);
        let f = factor_shifted(&t, 2.0).unwrap();
        assert_eq!(f.r_diag(), &[3.0]);
        assert!(f.rotations().is_empty());
        // A 1×1 zero matrix is still almost invertible (no columns to check).
        let z = factor_shifted(&tri(&[5.0], &[]), 5.0).unwrap();
        assert_eq!(z.det_sign(), 0);
    }

    #[test]
    fn reduced_matrix_can_fail() {
        // T = diag(1, 1): shifting by 1 kills the first column.
        let t = tri(&[1.0, 1.0], &[0.0]);
        let err = factor_shifted(&t, 1.0).unwrap_err();
        assert!(matches!(err, Error::NotAlmostInvertible { column: 0, .. }));
    }

    #[test]
    fn determinant_is_positive_one() {
        let t = tri(&[2.0, 2.0, 2.0, 1.0, 0.5], &[1.0, -1.0, 0.5, 2.0]);
        let f = factor_shifted(&t, 0.7).unwrap();
        let q = f.qstar();
        assert!((q.determinant() - 1.0).abs() < 1e-12);
        assert!((q.transpose() * &q - DMatrix::<f64>::identity(5, 5)).amax() < 1e-13);
        assert!(reconstruction_residual(&t, 0.7, &f) < 1e-14 * f.scale());
    }
}
