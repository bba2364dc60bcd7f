//! Sampling on the isospectral manifold.
//!
//! The basic sampler runs the Lanczos recurrence on `diag(Λ)` from a random
//! unit vector, which by construction produces a Jacobi matrix (positive
//! subdiagonal) with the prescribed spectrum; optional sign conjugation
//! then reaches the other cells of the manifold. Full reorthogonalization
//! keeps the sampled spectrum at oracle accuracy for the small dimensions
//! used here.
//!
//! The walkers drive a sample into a deflation neighborhood with steps
//! whose shift sits a controlled distance from a target eigenvalue: the
//! bottom entry then contracts at a tunable linear rate, which lands
//! trajectories inside `|b1| ≤ eps` or on a prescribed `|b1|` band.

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded_rng};
use crate::spectrum::Spectrum;
use crate::step::{inverse_step, step_star};
use crate::tridiag::{SignPattern, SymTridiagonal};
use rand::Rng;
use rand_distr::StandardNormal;

/// Lanczos norming coefficients below this are a breakdown; the caller is
/// expected to retry with another seed.
const BREAKDOWN_TOL: f64 = 1e-13;

/// Samples a matrix with spectrum `spec`, deterministically from `seed`.
///
/// The result is unreduced with strictly positive subdiagonal; conjugating
/// by `signs` afterwards covers the remaining sign cells.
pub fn sample_isospectral(
    spec: &Spectrum,
    seed: u64,
    signs: Option<&SignPattern>,
) -> Result<SymTridiagonal> {
    let n = spec.n();
    let lambdas = spec.lambdas();
    if n == 1 {
        return SymTridiagonal::new(vec![lambdas[0]], vec![]);
    }

    let mut rng = seeded_rng(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }

    // Lanczos on diag(Λ) with full reorthogonalization.
    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n - 1);
    for k in 0..n {
        let vk = &basis[k];
        let mut w: Vec<f64> = vk.iter().zip(lambdas).map(|(x, l)| l * x).collect();
        let alpha: f64 = w.iter().zip(vk).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        if k + 1 == n {
            break;
        }
        for (wi, vi) in w.iter_mut().zip(vk) {
            *wi -= alpha * vi;
        }
        if k > 0 {
            let beta_prev = betas[k - 1];
            for (wi, vi) in w.iter_mut().zip(&basis[k - 1]) {
                *wi -= beta_prev * vi;
            }
        }
        // Two rounds of reorthogonalization against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = w.iter().zip(b).map(|(a, c)| a * c).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= dot * bi;
                }
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < BREAKDOWN_TOL {
            return Err(Error::Breakdown { step: k, coeff: beta });
        }
        for x in w.iter_mut() {
            *x /= beta;
        }
        betas.push(beta);
        basis.push(w);
    }

    let t = SymTridiagonal::new(alphas, betas)?;
    match signs {
        Some(e) => t.conjugate_by_signs(e),
        None => Ok(t),
    }
}

/// Random sign pattern drawn from the seed; used to spread samples over all
/// sign cells of the manifold.
pub fn random_sign_pattern(n: usize, seed: u64) -> SignPattern {
    let mut rng = seeded_rng(seed);
    let signs: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    SignPattern::new(signs).expect("n >= 1")
}

/// Retries `sample_isospectral` over derived seeds until Lanczos succeeds.
pub fn sample_isospectral_retry(spec: &Spectrum, seed: u64) -> Result<SymTridiagonal> {
    let mut last = Error::Breakdown { step: 0, coeff: 0.0 };
    for attempt in 0..16 {
        match sample_isospectral(spec, derive_seed(seed, attempt), None) {
            Ok(t) => return Ok(t),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Drives a fresh sample into the `i`-th deflation neighborhood: returns
/// the first iterate with `|b1| ≤ eps` whose corner entry is nearest to
/// `λ_i`. Shifts stay at distance `≈ 0.45·γ` from `λ_i`, so the contraction
/// per step is mild and first-entry values of `|b1|` spread over the upper
/// part of the neighborhood.
pub fn sample_in_neighborhood(
    spec: &Spectrum,
    i: usize,
    eps: f64,
    seed: u64,
) -> Result<SymTridiagonal> {
    walk_to_band(spec, i, 0.0, eps, seed)
}

/// Like [`sample_in_neighborhood`] but lands `|b1|` inside `[lo, hi]`,
/// steering the contraction rate through the shift distance and backing
/// out with inverse steps on overshoot.
pub fn sample_on_band(
    spec: &Spectrum,
    i: usize,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<SymTridiagonal> {
    walk_to_band(spec, i, lo, hi, seed)
}

fn walk_to_band(spec: &Spectrum, i: usize, lo: f64, hi: f64, seed: u64) -> Result<SymTridiagonal> {
    let gamma = spec.gap();
    let lam = spec.lambdas()[i];
    if !(hi > 0.0 && lo >= 0.0 && lo < hi) {
        return Err(Error::InvalidEpsilon(format!("bad band [{lo}, {hi}]")));
    }

    let mut last_err = Error::InsufficientData("band walk failed");
    'seeds: for attempt in 0..24 {
        let mut t = match sample_isospectral(spec, derive_seed(seed, attempt), None) {
            Ok(t) => t,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let mut delta = 0.45 * gamma;
        for _ in 0..400 {
            let b1 = match t.b1() {
                Some(b) => b.abs(),
                None => return Err(Error::WrongDimension { expected: 2, got: 1 }),
            };
            if b1 <= hi && b1 >= lo && spec.nearest_index(t.corner()) == i {
                return Ok(t);
            }
            if b1 < lo {
                // Overshoot: expand with an inverse step and contract more
                // gently afterwards.
                delta = (0.5 * (delta + 0.499 * gamma)).min(0.499 * gamma);
                match inverse_step(&t, lam + delta) {
                    Ok(back) => {
                        t = back;
                        continue;
                    }
                    Err(e) => {
                        last_err = e;
                        continue 'seeds;
                    }
                }
            }
            // Aim the next contraction at the middle of the band.
            let target = (0.5 * (lo.max(0.25 * hi) + hi)) / b1;
            if target < 1.0 {
                let mut d = gamma * target / (1.0 + target);
                d = d.clamp(1e-3 * gamma, 0.499 * gamma);
                delta = d;
            }
            match step_star(&t, lam + delta) {
                Ok(res) => t = res.next,
                Err(e) => {
                    last_err = e;
                    continue 'seeds;
                }
            }
        }
    }
    Err(last_err)
}

/// A point of the `i`-th deflation set: an `(n−1)`-dimensional sample with
/// spectrum `Λ_i`, extended by a zero subdiagonal entry and corner `λ_i`.
pub fn sample_deflation_base(spec: &Spectrum, i: usize, seed: u64) -> Result<SymTridiagonal> {
    let lam = spec.lambdas()[i];
    if spec.n() == 1 {
        return SymTridiagonal::new(vec![lam], vec![]);
    }
    let reduced = spec.remove(i)?;
    let block = sample_isospectral_retry(&reduced, seed)?;
    let corner = SymTridiagonal::new(vec![lam], vec![])?;
    Ok(block.direct_sum(&corner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::sturm_eigenvalues;

    #[test]
    fn sampled_spectrum_matches_oracle() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        for seed in 0..5 {
            let t = sample_isospectral(&spec, seed, None).unwrap();
            assert!(t.sub().iter().all(|&x| x > 0.0), "Jacobi form");
            let got = sturm_eigenvalues(&t, 1e-13).unwrap();
            for (a, b) in got.lambdas().iter().zip(spec.lambdas()) {
                assert!((a - b).abs() <= 1e-10 * spec.norm(), "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn one_by_one_sample() {
        let spec = Spectrum::new(vec![5.0]).unwrap();
        let t = sample_isospectral(&spec, 3, None).unwrap();
        assert_eq!(t.diag(), &[5.0]);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = Spectrum::new(vec![-1.0, 0.0, 0.3, 1.0]).unwrap();
        let a = sample_isospectral(&spec, 99, None).unwrap();
        let b = sample_isospectral(&spec, 99, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sign_pattern_is_applied() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let e = SignPattern::generator(3, 1).unwrap();
        let plain = sample_isospectral(&spec, 7, None).unwrap();
        let flipped = sample_isospectral(&spec, 7, Some(&e)).unwrap();
        assert_eq!(plain.diag(), flipped.diag());
        assert_eq!(plain.sub()[0], -flipped.sub()[0]);
        assert_eq!(plain.sub()[1], flipped.sub()[1]);
    }

    #[test]
    fn neighborhood_walk_lands_inside() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let eps = 0.01 * spec.gap();
        for i in 0..3 {
            let t = sample_in_neighborhood(&spec, i, eps, 11 + i as u64).unwrap();
            assert!(t.b1().unwrap().abs() <= eps);
            assert_eq!(spec.nearest_index(t.corner()), i);
            let got = sturm_eigenvalues(&t, 1e-13).unwrap();
            for (a, b) in got.lambdas().iter().zip(spec.lambdas()) {
                assert!((a - b).abs() <= 1e-8 * spec.norm());
            }
        }
    }

    #[test]
    fn band_walk_hits_band() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let (lo, hi) = (0.004, 0.005);
        let t = sample_on_band(&spec, 1, lo, hi, 4).unwrap();
        let b1 = t.b1().unwrap().abs();
        assert!(b1 >= lo && b1 <= hi, "b1 = {b1}");
    }

    #[test]
    fn deflation_base_has_exact_structure() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let t = sample_deflation_base(&spec, 1, 5).unwrap();
        assert_eq!(t.b1(), Some(0.0));
        assert_eq!(t.corner(), 2.0);
        let got = sturm_eigenvalues(&t, 1e-13).unwrap();
        for (a, b) in got.lambdas().iter().zip(spec.lambdas()) {
            assert!((a - b).abs() <= 1e-10 * spec.norm());
        }
    }
}
