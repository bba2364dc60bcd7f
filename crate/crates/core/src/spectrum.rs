//! Spectra, arithmetic-progression classification, and the Sturm-bisection
//! eigenvalue oracle.
//!
//! The Sturm oracle is deliberately independent of the QR steps implemented
//! elsewhere in this crate: it is the reference every step-based result is
//! validated against, so it must not share code with the iteration.

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;
use nalgebra::DMatrix;

/// Arithmetic-progression class of a simple spectrum.
///
/// `StrongAp`: three *consecutive* eigenvalues in arithmetic progression.
/// `WeakAp`: some triple in progression, but no consecutive one.
/// `ApFree`: no triple at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApClass {
    ApFree,
    WeakAp,
    StrongAp,
}

impl std::fmt::Display for ApClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApClass::ApFree => write!(f, "apFree"),
            ApClass::WeakAp => write!(f, "weakAp"),
            ApClass::StrongAp => write!(f, "strongAp"),
        }
    }
}

/// A strictly increasing list of eigenvalues with its spectral gap and
/// a.p. classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lambdas: Vec<f64>,
    gap: f64,
    ap_class: ApClass,
}

impl Spectrum {
    /// Validates strict monotonicity and finiteness, computes the gap
    /// `γ = min |λ_i − λ_j|` and the a.p. class.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (i, x) in lambdas.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEntry { role: "lambda", index: i });
            }
        }
        if lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NotIncreasing);
        }
        let gap = lambdas
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let tau = if gap.is_finite() { 1e-12 * gap } else { 0.0 };
        let ap_class = classify_ap(&lambdas, tau);
        Ok(Self { lambdas, gap, ap_class })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Spectral gap `γ`; `+∞` for a single eigenvalue.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn ap_class(&self) -> ApClass {
        self.ap_class
    }

    /// Tolerance used for arithmetic-progression and tie tests.
    pub fn tau_ap(&self) -> f64 {
        if self.gap.is_finite() {
            1e-12 * self.gap
        } else {
            0.0
        }
    }

    /// Frobenius norm of `diag(λ_1, …, λ_n)`.
    pub fn norm(&self) -> f64 {
        self.lambdas.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The spectrum with `λ_i` removed.
    pub fn remove(&self, i: usize) -> Result<Spectrum> {
        if i >= self.n() {
            return Err(Error::WrongDimension { expected: i + 1, got: self.n() });
        }
        if self.n() == 1 {
            return Err(Error::WrongDimension { expected: 2, got: 1 });
        }
        let mut lambdas = self.lambdas.clone();
        lambdas.remove(i);
        Spectrum::new(lambdas)
    }

    /// The diagonal matrix `diag(λ_{π(1)}, …, λ_{π(n)})` for a permutation
    /// given as the image list `π(1..n)` (0-based).
    pub fn permuted_diagonal(&self, perm: &[usize]) -> Result<SymTridiagonal> {
        if perm.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: perm.len() });
        }
        let diag: Vec<f64> = perm.iter().map(|&p| self.lambdas[p]).collect();
        SymTridiagonal::from_diagonal(diag)
    }

    /// Index of the eigenvalue nearest to `x`.
    pub fn nearest_index(&self, x: f64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (j, &l) in self.lambdas.iter().enumerate() {
            let d = (l - x).abs();
            if d < dist {
                dist = d;
                best = j;
            }
        }
        best
    }
}

/// Classifies the arithmetic-progression structure of a strictly increasing
/// eigenvalue list. A triple `(λ_i, λ_j, λ_k)` is in progression when
/// `|λ_i + λ_k − 2λ_j| ≤ tau`.
pub fn classify_ap(lambdas: &[f64], tau: f64) -> ApClass {
    let n = lambdas.len();
    if n < 3 {
        return ApClass::ApFree;
    }
    for w in lambdas.windows(3) {
        if (w[0] + w[2] - 2.0 * w[1]).abs() <= tau {
            return ApClass::StrongAp;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if (lambdas[i] + lambdas[k] - 2.0 * lambdas[j]).abs() <= tau {
                    return ApClass::WeakAp;
                }
            }
        }
    }
    ApClass::ApFree
}

/// Index `c(i)` of the eigenvalue closest to `λ_i`; errors on an exact tie
/// (within the a.p. tolerance), in which case callers must not rely on it.
pub fn closest_eigenvalue_index(spec: &Spectrum, i: usize) -> Result<usize> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::WrongDimension { expected: 2, got: n });
    }
    if i >= n {
        return Err(Error::WrongDimension { expected: i + 1, got: n });
    }
    let l = spec.lambdas();
    // Candidates are the neighbours in the sorted list.
    let left = i.checked_sub(1).map(|j| (j, (l[i] - l[j]).abs()));
    let right = (i + 1 < n).then(|| (i + 1, (l[i + 1] - l[i]).abs()));
    match (left, right) {
        (Some((j, _)), None) => Ok(j),
        (None, Some((j, _))) => Ok(j),
        (Some((jl, dl)), Some((jr, dr))) => {
            if (dl - dr).abs() <= spec.tau_ap() {
                Err(Error::AmbiguousClosest { index: i })
            } else if dl < dr {
                Ok(jl)
            } else {
                Ok(jr)
            }
        }
        (None, None) => unreachable!("n >= 2 checked above"),
    }
}

/// Number of eigenvalues of `T` strictly below `x`, from the signs of the
/// LDLᵀ pivots (Sturm sequence). Pivots too close to zero are pushed away
/// to keep the recurrence finite.
pub fn sturm_count(diag: &[f64], sub: &[f64], x: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    // Relative pivot guard; the count is insensitive to the exact value.
    let scale: f64 = diag
        .iter()
        .chain(sub.iter())
        .fold(1.0_f64, |m, v| m.max(v.abs()));
    let guard = f64::MIN_POSITIVE.max(1e-300 * scale);

    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < guard {
            if q < 0.0 {
                -guard
            } else {
                guard
            }
        } else {
            q
        };
        q = (diag[i] - x) - sub[i - 1] * sub[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues by Sturm counts and bisection, each bracketed to width
/// at most `tol`, returned as a validated [`Spectrum`].
///
/// Fails with `NonSimpleSpectrum` when two eigenvalues are closer than
/// `10·tol`: downstream geometry is undefined on non-simple spectra.
pub fn sturm_eigenvalues(t: &SymTridiagonal, tol: f64) -> Result<Spectrum> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidEpsilon(format!("sturm tolerance must be positive, got {tol}")));
    }
    let n = t.n();
    let diag = t.diag();
    let sub = t.sub();
    if n == 1 {
        return Spectrum::new(vec![diag[0]]);
    }

    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let e_left = if i > 0 { sub[i - 1].abs() } else { 0.0 };
        let e_right = if i < n - 1 { sub[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - e_left - e_right);
        hi = hi.max(diag[i] + e_left + e_right);
    }
    lo -= tol;
    hi += tol;

    let mut lambdas = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = lo;
        let mut b = hi;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break; // interval at floating-point resolution
            }
            if sturm_count(diag, sub, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        lambdas.push(0.5 * (a + b));
    }

    let gap = lambdas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap < 10.0 * tol {
        return Err(Error::NonSimpleSpectrum { gap, tol });
    }
    Spectrum::new(lambdas)
}

/// Solves `(T − shift·I) x = b` by LU with partial pivoting on the
/// tridiagonal band; near-singular pivots are nudged, which is exactly what
/// inverse iteration wants.
fn shifted_tridiag_solve(t: &SymTridiagonal, shift: f64, b: &[f64]) -> Vec<f64> {
    let n = t.n();
    let diag = t.diag();
    let sub = t.sub();
    let scale = t.norm().max(shift.abs()).max(1.0);
    let guard = 1e-300_f64.max(f64::EPSILON * scale * 1e-4);

    // Band rows: [lower, main, upper1, upper2] with row swaps.
    let mut main: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut up1: Vec<f64> = (0..n.saturating_sub(1)).map(|i| sub[i]).collect();
    let mut up2: Vec<f64> = vec![0.0; n.saturating_sub(2)];
    let mut x: Vec<f64> = b.to_vec();

    for i in 0..n - 1 {
        let low = sub[i];
        if low.abs() > main[i].abs() {
            // swap rows i, i+1
            let (mut a0, mut a1, mut a2) = (low, main[i + 1], if i + 2 < n { up1[i + 1] } else { 0.0 });
            let (b0, b1, b2) = (main[i], up1[i], if i + 2 < n { up2[i] } else { 0.0 });
            x.swap(i, i + 1);
            let piv = if a0.abs() < guard { guard.copysign(a0) } else { a0 };
            let m = b0 / piv;
            main[i] = a0;
            up1[i] = a1;
            if i + 2 < n {
                up2[i] = a2;
            }
            main[i + 1] = b1 - m * a1;
            if i + 2 < n {
                up1[i + 1] = b2 - m * a2;
            }
            let xi = x[i];
            x[i + 1] -= m * xi;
            let _ = (&mut a0, &mut a1, &mut a2);
        } else {
            let piv = if main[i].abs() < guard { guard.copysign(main[i]) } else { main[i] };
            let m = low / piv;
            main[i + 1] -= m * up1[i];
            if i + 2 < n {
                up1[i + 1] -= m * up2[i];
            }
            let xi = x[i];
            x[i + 1] -= m * xi;
        }
    }

    // Back substitution.
    for i in (0..n).rev() {
        let mut v = x[i];
        if i + 1 < n {
            v -= up1[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= up2[i] * x[i + 2];
        }
        let piv = if main[i].abs() < guard { guard.copysign(main[i]) } else { main[i] };
        x[i] = v / piv;
    }
    x
}

/// Full eigendecomposition: Sturm eigenvalues (increasing) plus unit
/// eigenvectors as the columns of an orthogonal matrix, computed by inverse
/// iteration with re-orthogonalization of close (but simple) eigenpairs.
pub fn eigen_decomposition(t: &SymTridiagonal) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = t.n();
    let scale = t.norm().max(1.0);
    let spec = sturm_eigenvalues(t, 1e-14 * scale)?;
    let lambdas = spec.lambdas().to_vec();

    let mut vecs = DMatrix::<f64>::zeros(n, n);
    let close_tol = 1e-5 * scale;
    for (j, &lam) in lambdas.iter().enumerate() {
        // Deterministic, generically nondegenerate start vector.
        let mut v: Vec<f64> = (0..n)
            .map(|k| 1.0 + 0.5 * ((k * 37 + j * 101 + 13) % 97) as f64 / 97.0)
            .collect();
        normalize(&mut v);
        for _ in 0..3 {
            let mut w = shifted_tridiag_solve(t, lam, &v);
            // Re-orthogonalize against already-computed close eigenvectors.
            for p in 0..j {
                if (lambdas[p] - lam).abs() < close_tol {
                    let dot: f64 = (0..n).map(|k| vecs[(k, p)] * w[k]).sum();
                    for k in 0..n {
                        w[k] -= dot * vecs[(k, p)];
                    }
                }
            }
            normalize(&mut w);
            v = w;
        }
        for k in 0..n {
            vecs[(k, j)] = v[k];
        }
    }
    Ok((lambdas, vecs))
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_input_eigenvalues() {
        let t = SymTridiagonal::new(vec![1.0, 2.0, 4.0], vec![0.0, 0.0]).unwrap();
        let s = sturm_eigenvalues(&t, 1e-12).unwrap();
        for (a, b) in s.lambdas().iter().zip([1.0, 2.0, 4.0]) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let t = SymTridiagonal::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let s = sturm_eigenvalues(&t, 1e-13).unwrap();
        assert!((s.lambdas()[0] + 1.0).abs() < 1e-12);
        assert!((s.lambdas()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn toeplitz_3x3_closed_form() {
        // diag(2,2,2) with unit subdiagonals: characteristic polynomial
        // (2−λ)((2−λ)² − 2) = 0, so the spectrum is {2−√2, 2, 2+√2}.
        let t = SymTridiagonal::new(vec![2.0, 2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let s = sturm_eigenvalues(&t, 1e-13).unwrap();
        let expect = [2.0 - std::f64::consts::SQRT_2, 2.0, 2.0 + std::f64::consts::SQRT_2];
        for (a, b) in s.lambdas().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn non_simple_spectrum_detected() {
        let t = SymTridiagonal::new(vec![1.0, 1.0, 5.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            sturm_eigenvalues(&t, 1e-10),
            Err(Error::NonSimpleSpectrum { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(spec(&[-1.0, 0.0, 1.0]).ap_class(), ApClass::StrongAp);
        assert_eq!(spec(&[-1.0, 0.0, 0.3, 1.0]).ap_class(), ApClass::WeakAp);
        assert_eq!(spec(&[1.0, 2.0, 4.0]).ap_class(), ApClass::ApFree);
    }

    #[test]
    fn classify_short_spectra() {
        assert_eq!(spec(&[5.0]).ap_class(), ApClass::ApFree);
        assert_eq!(spec(&[1.0, 3.0]).ap_class(), ApClass::ApFree);
    }

    #[test]
    fn closest_index_examples() {
        let s = spec(&[-1.0, 0.0, 0.3, 1.0]);
        assert_eq!(closest_eigenvalue_index(&s, 2).unwrap(), 1); // 0.3 → 0
        let s = spec(&[1.0, 2.0, 4.0]);
        assert_eq!(closest_eigenvalue_index(&s, 2).unwrap(), 1); // 4 → 2
        let s = spec(&[-1.0, 0.0, 1.0]);
        assert!(matches!(
            closest_eigenvalue_index(&s, 1),
            Err(Error::AmbiguousClosest { index: 1 })
        ));
    }

    #[test]
    fn not_increasing_rejected() {
        assert!(matches!(Spectrum::new(vec![2.0, 1.0]), Err(Error::NotIncreasing)));
        assert!(matches!(Spectrum::new(vec![1.0, 1.0]), Err(Error::NotIncreasing)));
    }

    #[test]
    fn eigen_decomposition_reconstructs() {
        let t = SymTridiagonal::new(vec![2.0, 2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let (vals, v) = eigen_decomposition(&t).unwrap();
        let dense = t.to_dense();
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals));
        let resid = (&v * lam * v.transpose() - dense).norm();
        assert!(resid < 1e-10, "residual {resid}");
        let orth = (v.transpose() * &v - DMatrix::identity(3, 3)).norm();
        assert!(orth < 1e-12, "orthogonality {orth}");
    }

    #[test]
    fn sturm_count_is_monotone() {
        let t = SymTridiagonal::new(vec![1.0, 3.0], vec![-1.0]).unwrap();
        assert_eq!(sturm_count(t.diag(), t.sub(), 0.0), 0);
        assert_eq!(sturm_count(t.diag(), t.sub(), 1.0), 1);
        assert_eq!(sturm_count(t.diag(), t.sub(), 4.0), 2);
    }
}
