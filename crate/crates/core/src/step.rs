//! Shifted QR steps on the isospectral manifold.
//!
//! The signed step is `F_s(T) = Q⋆ᵀ T Q⋆` where `T − sI = Q⋆R⋆`. It is
//! computed as `R⋆Q⋆ + sI` by chaining the factorization rotations through
//! the bands of `R⋆`, which costs `O(n)` and reproduces the subdiagonal
//! ratio identity `(F_s(T))_{i+1,i} = (R⋆)_{i+1,i+1}/(R⋆)_{i,i}·(T)_{i+1,i}`
//! to rounding. The unsigned step differs from the signed one by a final
//! subdiagonal sign flip when `det(T − sI) < 0` and is undefined on the
//! singular set. The inverse step factors `T − sI = RQ` and returns
//! `QR + sI`.

use crate::error::{Error, Result};
use crate::factor::{factor_shifted, QRStarFactors, SINGULAR_TOL};
use crate::tridiag::{SignPattern, SymTridiagonal};
use nalgebra::DMatrix;

/// Relative bound on entries that the exact algebra says vanish (residue
/// outside the tridiagonal band, asymmetry between the two computed copies
/// of the subdiagonal).
const RESIDUE_TOL: f64 = 1e-11;

/// Outcome of one signed or unsigned step.
#[derive(Debug, Clone)]
pub struct StepResult {
    /// The stepped matrix, resymmetrized and retridiagonalized.
    pub next: SymTridiagonal,
    /// Diagonal ratios of `R⋆`; `ratios[i]` multiplies `sub[i]`, and the
    /// last one is the bottom-entry contraction factor of the step.
    pub ratios: Vec<f64>,
    /// Sign of `det(T − sI)` in `{−1, 0, +1}`.
    pub det_sign: i8,
}

/// The signed step `F_s(T) = Q⋆ᵀ T Q⋆`.
///
/// Defined whenever `T − sI` is almost invertible; in particular for every
/// unreduced `T` and every `s`. When `det(T − sI) = 0` the result deflates
/// in one step: its bottom subdiagonal entry vanishes and its corner entry
/// equals `s` (up to rounding), because the last column of `Q⋆` is then a
/// unit eigenvector for `s`.
pub fn step_star(t: &SymTridiagonal, s: f64) -> Result<StepResult> {
    let f = factor_shifted(t, s)?;
    step_from_factors(t, s, &f)
}

/// The signed step reusing an existing factorization of `T − sI`.
pub fn step_from_factors(t: &SymTridiagonal, s: f64, f: &QRStarFactors) -> Result<StepResult> {
    let n = t.n();
    let norm_t = t.norm();
    let ratios = f.ratios();
    let det_sign = f.det_sign();

    // B = R⋆, then B ← B·Gᵀ for each rotation in factorization order.
    // Entries two above the diagonal cancel exactly in real arithmetic at
    // the moment their column is finalized; the computed residue is checked
    // and dropped.
    let mut a = f.r_diag().to_vec();
    let mut u1 = f.r_super1().to_vec();
    let mut u2 = f.r_super2().to_vec();
    let mut l = vec![0.0; n.saturating_sub(1)];
    let mut worst_residue = 0.0_f64;

    for rot in f.rotations() {
        let (i, c, sn) = (rot.plane, rot.c, rot.s);
        if i >= 1 {
            let t1 = u1[i - 1];
            let t2 = u2[i - 1];
            u1[i - 1] = c * t1 + sn * t2;
            worst_residue = worst_residue.max((-sn * t1 + c * t2).abs());
            u2[i - 1] = 0.0;
        }
        let ta = a[i];
        let tu = u1[i];
        a[i] = c * ta + sn * tu;
        u1[i] = -sn * ta + c * tu;
        l[i] = sn * a[i + 1];
        a[i + 1] *= c;
    }

    assert!(
        worst_residue <= RESIDUE_TOL * norm_t.max(f64::MIN_POSITIVE),
        "off-tridiagonal residue {worst_residue:.3e} exceeds bound for ‖T‖ = {norm_t:.3e}"
    );

    // B + sI is symmetric tridiagonal up to rounding. The subdiagonal copy
    // l[i] = s_i·R[i+1,i+1] is a pure product (it realizes the ratio
    // identity verbatim) and stays accurate even when the true entry is far
    // below rounding scale; the superdiagonal copy u1 goes through a
    // subtraction and only serves as a consistency check.
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let asym = (l[i] - u1[i]).abs();
        assert!(
            asym <= RESIDUE_TOL * norm_t.max(f64::MIN_POSITIVE),
            "asymmetry {asym:.3e} exceeds bound for ‖T‖ = {norm_t:.3e}"
        );
        sub.push(l[i]);
    }
    let diag: Vec<f64> = a.iter().map(|x| x + s).collect();
    let next = SymTridiagonal::new(diag, sub)?;

    Ok(StepResult { next, ratios, det_sign })
}

/// The unsigned step `Φ(T, s) = Qᵀ T Q` from the plain QR factorization
/// (all diagonal entries of `R` positive).
///
/// Equals the signed step when `det(T − sI) > 0` and the signed step with
/// its bottom subdiagonal sign flipped when `det(T − sI) < 0`; undefined on
/// the singular set, where `SingularShift` is returned.
pub fn step_unsigned(t: &SymTridiagonal, s: f64) -> Result<StepResult> {
    let res = step_star(t, s)?;
    match res.det_sign {
        0 => Err(Error::SingularShift),
        1 => Ok(res),
        _ => {
            let n = res.next.n();
            let flip = SignPattern::generator(n, n - 1)?;
            let next = res.next.conjugate_by_signs(&flip)?;
            Ok(StepResult { next, ..res })
        }
    }
}

/// Sign convention for the triangular factor of the reverse factorization
/// `T − sI = RQ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RqConvention {
    /// First `n−1` diagonal entries of `R` positive, `Q ∈ SO(n)`; inverts
    /// the signed step.
    Signed,
    /// All diagonal entries of `R` positive, `Q` orthogonal; inverts the
    /// unsigned step.
    Unsigned,
}

/// Inverse of the signed step: factors `T − sI = RQ` with the first `n−1`
/// diagonal entries of `R` positive and `Q ∈ SO(n)`, and returns
/// `T₀ = QR + sI`, so that `F_s(T₀) = T`.
///
/// Requires `s` to be off the spectrum of `T`; a pivot below
/// `1e−12·(‖T‖ + |s|)` reports `ShiftIsEigenvalue`.
pub fn inverse_step(t: &SymTridiagonal, s: f64) -> Result<SymTridiagonal> {
    inverse_step_with(t, s, RqConvention::Signed)
}

pub(crate) fn inverse_step_with(
    t: &SymTridiagonal,
    s: f64,
    convention: RqConvention,
) -> Result<SymTridiagonal> {
    let n = t.n();
    let norm_t = t.norm();
    let scale = (norm_t + s.abs()).max(f64::MIN_POSITIVE);
    let d = t.diag();
    let e = t.sub();

    if n == 1 {
        let pivot = d[0] - s;
        if pivot.abs() <= SINGULAR_TOL * scale {
            return Err(Error::ShiftIsEigenvalue { shift: s });
        }
        return Ok(t.clone());
    }

    // Eliminate the subdiagonal bottom-up with column rotations:
    // W ← W · J_i zeroes W[i+1, i] and leaves W[i+1, i+1] = r > 0.
    let mut wd: Vec<f64> = d.iter().map(|x| x - s).collect();
    let mut wl: Vec<f64> = e.to_vec();
    let mut wu1: Vec<f64> = e.to_vec();
    let mut wu2: Vec<f64> = vec![0.0; n - 2];
    let mut rots: Vec<(f64, f64)> = vec![(0.0, 0.0); n - 1];

    for i in (0..n - 1).rev() {
        let r = wl[i].hypot(wd[i + 1]);
        if r <= SINGULAR_TOL * scale {
            return Err(Error::ShiftIsEigenvalue { shift: s });
        }
        let c = wd[i + 1] / r;
        let sn = wl[i] / r;
        rots[i] = (c, sn);
        wd[i + 1] = r;
        wl[i] = 0.0;
        // row i, columns (i, i+1)
        let (p, q) = (wd[i], wu1[i]);
        wd[i] = c * p - sn * q;
        wu1[i] = sn * p + c * q;
        // row i−1, columns (i, i+1)
        if i >= 1 {
            let (p, q) = (wu1[i - 1], wu2[i - 1]);
            wu1[i - 1] = c * p - sn * q;
            wu2[i - 1] = sn * p + c * q;
        }
    }

    // The remaining top pivot carries det(T − sI).
    if wd[0].abs() <= SINGULAR_TOL * scale {
        return Err(Error::ShiftIsEigenvalue { shift: s });
    }

    // Fix the sign of the top pivot while preserving the convention:
    //   Signed:   T − sI = (R·D)(D·Q) with D = diag(−1, 1, …, 1, −1),
    //             which keeps det Q = +1 and frees the last diagonal sign;
    //   Unsigned: D = diag(−1, 1, …, 1), Q may have determinant −1.
    let mut flip_first = false;
    let mut flip_last = false;
    if wd[0] < 0.0 {
        flip_first = true;
        // Column 0 of the triangular factor holds only its (0,0) entry.
        wd[0] = -wd[0];
        if convention == RqConvention::Signed {
            flip_last = true;
            wd[n - 1] = -wd[n - 1];
            wu1[n - 2] = -wu1[n - 2];
            if n > 2 {
                wu2[n - 3] = -wu2[n - 3];
            }
        }
    }

    // T₀ − sI = Q R where Q = J_0ᵀ J_1ᵀ … J_{n−2}ᵀ (with the same sign
    // fixes applied to rows of Q). Accumulate B = Q R densely: apply the
    // left rotations J_iᵀ from i = n−2 down to 0.
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = wd[i];
    }
    for i in 0..n - 1 {
        b[(i, i + 1)] = wu1[i];
    }
    for i in 0..n.saturating_sub(2) {
        b[(i, i + 2)] = wu2[i];
    }
    // Row flips of Q act as flips of rows of the product before rotation:
    // D·Q·R = D·B after all rotations; apply at the end instead.
    for i in (0..n - 1).rev() {
        let (c, sn) = rots[i];
        for col in 0..n {
            let p = b[(i, col)];
            let q = b[(i + 1, col)];
            b[(i, col)] = c * p - sn * q;
            b[(i + 1, col)] = sn * p + c * q;
        }
    }
    if flip_first {
        for col in 0..n {
            b[(0, col)] = -b[(0, col)];
        }
    }
    if flip_last {
        for col in 0..n {
            b[(n - 1, col)] = -b[(n - 1, col)];
        }
    }

    // B + sI is symmetric tridiagonal up to rounding.
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if j + 1 < i || j > i + 1 {
                worst = worst.max(b[(i, j)].abs());
            }
        }
    }
    assert!(
        worst <= RESIDUE_TOL * scale,
        "inverse step band residue {worst:.3e} for scale {scale:.3e}"
    );
    let diag: Vec<f64> = (0..n).map(|i| b[(i, i)] + s).collect();
    let mut sub = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let asym = (b[(i + 1, i)] - b[(i, i + 1)]).abs();
        assert!(
            asym <= RESIDUE_TOL * scale,
            "inverse step asymmetry {asym:.3e} for scale {scale:.3e}"
        );
        sub.push(0.5 * (b[(i + 1, i)] + b[(i, i + 1)]));
    }
    SymTridiagonal::new(diag, sub)
}

/// Size of the commutator `‖F_{s0}(F_{s1}(T)) − F_{s1}(F_{s0}(T))‖`; the
/// two compositions agree wherever both are defined.
pub fn check_commutation(t: &SymTridiagonal, s0: f64, s1: f64) -> Result<f64> {
    let a = step_star(&step_star(t, s1)?.next, s0)?.next;
    let b = step_star(&step_star(t, s0)?.next, s1)?.next;
    a.dist(&b)
}

/// True when `T − sI` is almost invertible, i.e. the signed step with
/// shift `s` is defined at `T`.
pub fn in_step_domain(t: &SymTridiagonal, s: f64) -> bool {
    factor_shifted(t, s).is_ok()
}

/// Dense reference route for the signed step: forms `Q⋆ᵀ T Q⋆` explicitly.
/// Used to cross-check the banded implementation; the two must agree to
/// `1e−12·‖T‖`.
pub fn step_star_dense(t: &SymTridiagonal, s: f64) -> Result<DMatrix<f64>> {
    let f = factor_shifted(t, s)?;
    let q = f.qstar();
    Ok(q.transpose() * t.to_dense() * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::sturm_eigenvalues;

    fn tri(diag: &[f64], sub: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(diag.to_vec(), sub.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_matrices_are_fixed() {
        let t = tri(&[3.0, 1.0, -2.0], &[0.0, 0.0]);
        let res = step_star(&t, 0.5).unwrap();
        assert!(res.next.dist(&t).unwrap() < 1e-14);
    }

    #[test]
    fn exact_shift_deflates_two_by_two() {
        // T = [[0,1],[1,0]] has eigenvalues ±1; shifting by 1 deflates in
        // one step onto diag(−1, 1).
        let t = tri(&[0.0, 0.0], &[1.0]);
        let res = step_star(&t, 1.0).unwrap();
        assert_eq!(res.det_sign, 0);
        assert!(res.next.b1().unwrap().abs() < 1e-14);
        assert!((res.next.corner() - 1.0).abs() < 1e-14);
        assert!((res.next.diag()[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn toeplitz_step_matches_closed_form() {
        // One signed step with shift 0 on diag(2,2,2), sub(1,1). Running the
        // factorization by hand: R diag = (√5, √(14/5), 4/√14), so the next
        // matrix is diag(14/5, 82/35, 6/7) with sub (√14/5, 2√5/7).
        let t = tri(&[2.0, 2.0, 2.0], &[1.0, 1.0]);
        let res = step_star(&t, 0.0).unwrap();
        let exp_diag = [14.0 / 5.0, 82.0 / 35.0, 6.0 / 7.0];
        let exp_sub = [14.0_f64.sqrt() / 5.0, 2.0 * 5.0_f64.sqrt() / 7.0];
        for (a, b) in res.next.diag().iter().zip(exp_diag) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        for (a, b) in res.next.sub().iter().zip(exp_sub) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert_eq!(res.det_sign, 1); // det(T) = 2(4−1) − 1·2 = 4 > 0
    }

    #[test]
    fn banded_step_matches_dense_route() {
        let t = tri(&[2.0, -1.0, 0.5, 3.0, 1.0], &[1.0, 0.7, -0.4, 1.2]);
        for s in [0.0, 0.3, -2.0, 2.9] {
            let banded = step_star(&t, s).unwrap().next.to_dense();
            let dense = step_star_dense(&t, s).unwrap();
            let err = (banded - dense).amax();
            assert!(err <= 1e-12 * t.norm(), "s = {s}: {err:.3e}");
        }
    }

    #[test]
    fn unsigned_step_flips_bottom_sign_for_negative_det() {
        // T = [[0,1],[1,0]], s = 0: det(T) = −1. The signed step gives
        // sub = [−1]; the unsigned step restores sub = [1] (it preserves
        // the sign of the bottom entry).
        let t = tri(&[0.0, 0.0], &[1.0]);
        let star = step_star(&t, 0.0).unwrap();
        assert_eq!(star.det_sign, -1);
        assert!((star.next.sub()[0] + 1.0).abs() < 1e-15);
        let unsigned = step_unsigned(&t, 0.0).unwrap();
        assert!((unsigned.next.sub()[0] - 1.0).abs() < 1e-15);
        assert_eq!(unsigned.next.sub()[0].signum(), t.sub()[0].signum());
    }

    #[test]
    fn unsigned_step_equals_signed_for_positive_det() {
        let t = tri(&[0.0, 0.0], &[1.0]);
        // det(T − 2I) = 4 − 1 = 3 > 0.
        let a = step_star(&t, 2.0).unwrap();
        let b = step_unsigned(&t, 2.0).unwrap();
        assert_eq!(a.det_sign, 1);
        assert!(a.next.dist(&b.next).unwrap() == 0.0);
    }

    #[test]
    fn unsigned_step_rejects_singular_shift() {
        let t = tri(&[0.0, 0.0], &[1.0]);
        assert!(matches!(step_unsigned(&t, 1.0), Err(Error::SingularShift)));
    }

    #[test]
    fn ratio_identity_holds() {
        let t = tri(&[1.0, -0.5, 2.0, 0.3], &[0.9, -1.1, 0.6]);
        let s = 0.4;
        let res = step_star(&t, s).unwrap();
        for i in 0..3 {
            let predicted = res.ratios[i] * t.sub()[i];
            let got = res.next.sub()[i];
            assert!(
                (predicted - got).abs() <= 1e-10 * (1.0 + t.norm()),
                "entry {i}: {predicted} vs {got}"
            );
        }
    }

    #[test]
    fn step_preserves_spectrum() {
        let t = tri(&[1.0, 2.0, 4.0, -1.0], &[0.8, 1.3, 0.5]);
        let before = sturm_eigenvalues(&t, 1e-13).unwrap();
        let after = sturm_eigenvalues(&step_star(&t, 1.7).unwrap().next, 1e-13).unwrap();
        for (a, b) in before.lambdas().iter().zip(after.lambdas()) {
            assert!((a - b).abs() < 1e-9 * t.norm());
        }
    }

    #[test]
    fn inverse_step_two_by_two_closed_form() {
        // T = [[2,1],[1,2]], s = 0: the reverse factorization gives
        // T₀ = QR = [[6/5, 3/5],[3/5, 14/5]].
        let t = tri(&[2.0, 2.0], &[1.0]);
        let t0 = inverse_step(&t, 0.0).unwrap();
        assert!((t0.diag()[0] - 1.2).abs() < 1e-15);
        assert!((t0.diag()[1] - 2.8).abs() < 1e-15);
        assert!((t0.sub()[0] - 0.6).abs() < 1e-15);
        // Forward step takes it back.
        let fwd = step_star(&t0, 0.0).unwrap();
        assert!(fwd.next.dist(&t).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_step_fixes_diagonal() {
        let t = tri(&[3.0, -1.0], &[0.0]);
        let t0 = inverse_step(&t, 0.5).unwrap();
        assert!(t0.dist(&t).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_step_rejects_eigenvalue_shift() {
        let t = tri(&[0.0, 0.0], &[1.0]);
        assert!(matches!(
            inverse_step(&t, 1.0),
            Err(Error::ShiftIsEigenvalue { .. })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let t = tri(&[1.0, 2.0, 4.0, 0.5], &[0.9, -0.4, 1.1]);
        for s in [0.1, -1.3, 2.6] {
            let fwd = step_star(&t, s).unwrap().next;
            let back = inverse_step(&fwd, s).unwrap();
            assert!(back.dist(&t).unwrap() <= 1e-9 * t.norm(), "s = {s}");
        }
    }

    #[test]
    fn steps_commute() {
        let t = tri(&[1.0, 2.0, 4.0], &[1.0, 1.0]);
        let d = check_commutation(&t, 0.3, -0.8).unwrap();
        assert!(d <= 1e-8 * t.norm(), "commutator {d:.3e}");
        assert!(check_commutation(&t, 0.5, 0.5).unwrap() < 1e-12);
        let diag = tri(&[1.0, 2.0, 4.0], &[0.0, 0.0]);
        assert!(check_commutation(&diag, 0.3, -0.8).unwrap() <= 1e-12);
    }

    #[test]
    fn split_block_stays_split() {
        // A zero subdiagonal entry is preserved bit-exactly: the ratio
        // identity multiplies it, so the split never heals.
        let t = tri(&[0.0, 1.0, 0.15, 0.45], &[0.5, 0.0, 0.2]);
        let mut cur = t;
        for k in 0..10 {
            cur = step_star(&cur, 0.17 + 0.01 * k as f64).unwrap().next;
            assert_eq!(cur.sub()[1], 0.0);
        }
    }

    #[test]
    fn equivariance_under_sign_conjugation() {
        let t = tri(&[1.0, 2.0, 4.0, -0.5], &[0.9, 1.4, -0.6]);
        let s = 0.8;
        for j in 1..4 {
            let e = SignPattern::generator(4, j).unwrap();
            let a = step_star(&t.conjugate_by_signs(&e).unwrap(), s).unwrap().next;
            let b = step_star(&t, s).unwrap().next.conjugate_by_signs(&e).unwrap();
            assert!(a.dist(&b).unwrap() <= 1e-10 * t.norm(), "generator {j}");
        }
    }
}
