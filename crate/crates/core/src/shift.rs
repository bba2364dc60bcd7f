//! Simple shift strategies: Rayleigh, Wilkinson, the mixed variant, and
//! exact-eigenvalue shifts.
//!
//! A simple strategy is a sign-invariant function `σ` with
//! `|σ(T) − λ_i| ≤ C_σ·|b1(T)|` for some eigenvalue `λ_i`; the constants
//! are `√2` for Rayleigh, `2√2` for Wilkinson and the mixed strategy, and
//! `0` for exact shifts. Wilkinson's strategy jumps along the set where the
//! two trailing corner entries coincide; everything here depends only on
//! diagonal entries and squared subdiagonals, so sign invariance is
//! structural.

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::step::{step_from_factors, StepResult};
use crate::factor::factor_shifted;
use crate::tridiag::SymTridiagonal;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Strategy selector.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftKind {
    Rayleigh,
    Wilkinson,
    /// Wilkinson far from deflation, Rayleigh once `|b1| < ε`.
    Mixed { eps: f64 },
    /// Always shift by the stored eigenvalue `λ_i`.
    Exact { index: usize, value: f64 },
}

/// A tagged strategy together with its simple-strategy constant `C_σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftStrategy {
    pub kind: ShiftKind,
    pub c_sigma: f64,
}

impl ShiftStrategy {
    pub fn rayleigh() -> Self {
        Self { kind: ShiftKind::Rayleigh, c_sigma: SQRT_2 }
    }

    pub fn wilkinson() -> Self {
        Self { kind: ShiftKind::Wilkinson, c_sigma: 2.0 * SQRT_2 }
    }

    pub fn mixed(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::InvalidEpsilon(format!("mixed threshold must be positive, got {eps}")));
        }
        Ok(Self { kind: ShiftKind::Mixed { eps }, c_sigma: 2.0 * SQRT_2 })
    }

    pub fn exact(spec: &Spectrum, index: usize) -> Result<Self> {
        if index >= spec.n() {
            return Err(Error::WrongDimension { expected: index + 1, got: spec.n() });
        }
        Ok(Self {
            kind: ShiftKind::Exact { index, value: spec.lambdas()[index] },
            c_sigma: 0.0,
        })
    }

    /// The shift `σ(T)` this strategy prescribes at `T`.
    pub fn shift(&self, t: &SymTridiagonal) -> f64 {
        match &self.kind {
            ShiftKind::Rayleigh => rayleigh_shift(t),
            ShiftKind::Wilkinson => wilkinson_shift(t),
            ShiftKind::Mixed { eps } => mixed_shift(t, *eps),
            ShiftKind::Exact { value, .. } => *value,
        }
    }

    /// Strategy selector in the CLI syntax:
    /// `rayleigh | wilkinson | mixed:<eps> | exact:<i>`.
    pub fn parse(text: &str, spec: Option<&Spectrum>) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("rayleigh") {
            return Ok(Self::rayleigh());
        }
        if text.eq_ignore_ascii_case("wilkinson") {
            return Ok(Self::wilkinson());
        }
        if let Some(arg) = text.strip_prefix("mixed:") {
            let eps: f64 = arg
                .parse()
                .map_err(|e| Error::Parse(format!("bad mixed threshold `{arg}`: {e}")))?;
            return Self::mixed(eps);
        }
        if let Some(arg) = text.strip_prefix("exact:") {
            let index: usize = arg
                .parse()
                .map_err(|e| Error::Parse(format!("bad exact index `{arg}`: {e}")))?;
            let spec = spec.ok_or_else(|| {
                Error::Parse("`exact:<i>` needs a spectrum to resolve the eigenvalue".into())
            })?;
            return Self::exact(spec, index);
        }
        Err(Error::Parse(format!(
            "unknown strategy `{text}` (expected rayleigh | wilkinson | mixed:<eps> | exact:<i>)"
        )))
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ShiftKind::Rayleigh => "rayleigh".into(),
            ShiftKind::Wilkinson => "wilkinson".into(),
            ShiftKind::Mixed { eps } => format!("mixed:{eps:e}"),
            ShiftKind::Exact { index, .. } => format!("exact:{index}"),
        }
    }
}

/// Per-step record of the applied shift and the singular-support proxy of
/// the pre-step matrix.
#[derive(Debug, Clone)]
pub struct ShiftRecord {
    pub shift: f64,
    pub strategy: String,
    /// `|T_{n,n} − T_{n−1,n−1}|` at the pre-step matrix (0 for `n = 1`).
    pub singular_gap: f64,
}

/// Rayleigh's shift: the corner entry `(T)_{n,n}`.
pub fn rayleigh_shift(t: &SymTridiagonal) -> f64 {
    t.corner()
}

/// Wilkinson's shift: the eigenvalue of the trailing 2×2 block closest to
/// the corner entry, the smaller one on a draw.
///
/// Uses the cancellation-safe form `ω = c − sign(d)·b²/(|d| + √(d²+b²))`
/// for the trailing block `[[a, b], [b, c]]`, `d = (a − c)/2`.
pub fn wilkinson_shift(t: &SymTridiagonal) -> f64 {
    let n = t.n();
    assert!(n >= 2, "Wilkinson shift needs a trailing 2x2 block");
    let a = t.diag()[n - 2];
    let c = t.diag()[n - 1];
    let b = t.sub()[n - 2];
    if b == 0.0 {
        return c;
    }
    let d = 0.5 * (a - c);
    // Deterministic draw rule: a tie within rounding picks the smaller
    // eigenvalue, which is the sign = +1 branch.
    let tie = d.abs() <= 1e-14 * (a.abs() + c.abs() + b.abs());
    let sgn = if tie || d >= 0.0 { 1.0 } else { -1.0 };
    c - sgn * b * b / (d.abs() + d.hypot(b))
}

/// Mixed Wilkinson–Rayleigh: Rayleigh inside `|b1| < eps`, Wilkinson
/// outside.
pub fn mixed_shift(t: &SymTridiagonal, eps: f64) -> f64 {
    let b1 = t.b1().map_or(0.0, f64::abs);
    if b1 < eps {
        rayleigh_shift(t)
    } else {
        wilkinson_shift(t)
    }
}

/// Applies the signed step with the strategy's shift and records the shift
/// together with the singular-support gap of the pre-step matrix.
pub fn strategy_step(
    t: &SymTridiagonal,
    strategy: &ShiftStrategy,
) -> Result<(StepResult, ShiftRecord)> {
    let shift = strategy.shift(t);
    let record = ShiftRecord {
        shift,
        strategy: strategy.describe(),
        singular_gap: t.singular_gap().unwrap_or(0.0),
    };
    let f = factor_shifted(t, shift)?;
    let result = step_from_factors(t, shift, &f)?;
    Ok((result, record))
}

/// Worst observed ratio `min_i |σ(T) − λ_i| / |b1(T)|` over isospectral
/// samples (with random sign conjugation); samples with `b1 = 0`
/// contribute ratio 0, since simple strategies shift exactly there.
pub fn verify_simple_constant(
    strategy: &ShiftStrategy,
    spec: &Spectrum,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    use crate::rng::derive_seed;
    use crate::sample::{random_sign_pattern, sample_isospectral};

    let mut worst = 0.0_f64;
    let mut produced = 0u64;
    let mut attempt = 0u64;
    while (produced as usize) < samples {
        attempt += 1;
        if attempt > 4 * samples as u64 + 64 {
            return Err(Error::InsufficientData("sampling kept breaking down"));
        }
        let s = derive_seed(seed, attempt);
        let t = match sample_isospectral(spec, s, None) {
            Ok(t) => t,
            Err(Error::Breakdown { .. }) => continue,
            Err(e) => return Err(e),
        };
        let t = t.conjugate_by_signs(&random_sign_pattern(t.n(), derive_seed(seed, attempt | 1 << 63)))?;
        produced += 1;
        let b1 = t.b1().map_or(0.0, f64::abs);
        if b1 == 0.0 {
            continue;
        }
        let sigma = strategy.shift(&t);
        let dist = spec
            .lambdas()
            .iter()
            .map(|l| (sigma - l).abs())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(dist / b1);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::SignPattern;

    fn tri(diag: &[f64], sub: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(diag.to_vec(), sub.to_vec()).unwrap()
    }

    #[test]
    fn rayleigh_is_corner() {
        assert_eq!(rayleigh_shift(&tri(&[1.0, 2.0, 4.0], &[1.0, 1.0])), 4.0);
        assert_eq!(rayleigh_shift(&tri(&[3.0, -1.0], &[0.0])), -1.0);
    }

    #[test]
    fn wilkinson_draw_takes_smallest() {
        // Trailing block [[2,1],[1,2]]: eigenvalues 1 and 3, both at
        // distance 1 from the corner entry 2; the rule picks 1.
        let t = tri(&[2.0, 2.0], &[1.0]);
        assert!((wilkinson_shift(&t) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wilkinson_reduced_block_returns_corner() {
        let t = tri(&[7.0, 3.0], &[0.0]);
        assert_eq!(wilkinson_shift(&t), 3.0);
    }

    #[test]
    fn wilkinson_closed_form_case() {
        // Trailing block [[4,1],[1,0]]: eigenvalues 2 ± √5; 2 − √5 ≈ −0.236
        // is the one closer to the corner entry 0.
        let t = tri(&[4.0, 0.0], &[1.0]);
        let expect = 2.0 - 5.0_f64.sqrt();
        assert!((wilkinson_shift(&t) - expect).abs() < 1e-14);
    }

    #[test]
    fn wilkinson_shift_is_trailing_block_eigenvalue() {
        let t = tri(&[0.3, -1.7], &[0.9]);
        let w = wilkinson_shift(&t);
        let (a, c, b) = (0.3, -1.7, 0.9);
        // characteristic polynomial of the block at w
        let p = (a - w) * (c - w) - b * b;
        assert!(p.abs() < 1e-12, "p(ω) = {p:.3e}");
        // closer to the corner than the other root
        let other = a + c - w;
        assert!((w - c).abs() <= (other - c).abs() + 1e-14);
    }

    #[test]
    fn mixed_branch_selection() {
        let t = tri(&[4.0, 0.0], &[1e-4]);
        // |b1| < eps → Rayleigh branch: corner 0, not ≈ 2 − √5.
        assert_eq!(mixed_shift(&t, 1e-3), 0.0);
        // |b1| ≥ eps → Wilkinson branch.
        let w = mixed_shift(&t, 1e-5);
        assert!((w - wilkinson_shift(&t)).abs() == 0.0);
    }

    #[test]
    fn shifts_are_sign_invariant() {
        let t = tri(&[1.0, 2.0, 4.0, 0.5], &[0.8, -0.6, 1.2]);
        for j in 1..4 {
            let e = SignPattern::generator(4, j).unwrap();
            let c = t.conjugate_by_signs(&e).unwrap();
            assert_eq!(rayleigh_shift(&t), rayleigh_shift(&c));
            assert_eq!(wilkinson_shift(&t), wilkinson_shift(&c));
            assert_eq!(mixed_shift(&t, 0.1), mixed_shift(&c, 0.1));
        }
    }

    #[test]
    fn strategy_step_on_diagonal_is_fixed() {
        let t = tri(&[1.0, 2.0, 4.0], &[0.0, 0.0]);
        let (res, rec) = strategy_step(&t, &ShiftStrategy::wilkinson()).unwrap();
        assert!(res.next.dist(&t).unwrap() < 1e-14);
        assert_eq!(rec.shift, 4.0); // an exact eigenvalue
    }

    #[test]
    fn simple_strategies_shift_exactly_on_the_deflation_set() {
        // b1 = 0 with corner equal to an eigenvalue: every simple strategy
        // must return that eigenvalue exactly.
        let t = tri(&[5.0, -1.0, 2.0], &[0.7, 0.0]);
        assert_eq!(rayleigh_shift(&t), 2.0);
        assert_eq!(wilkinson_shift(&t), 2.0);
        assert_eq!(mixed_shift(&t, 1e-3), 2.0);
    }

    #[test]
    fn exact_strategy_uses_stored_eigenvalue() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let st = ShiftStrategy::exact(&spec, 1).unwrap();
        let t = tri(&[1.0, 2.0, 4.0], &[0.4, 0.3]);
        assert_eq!(st.shift(&t), 2.0);
        assert_eq!(st.c_sigma, 0.0);
    }

    #[test]
    fn one_wilkinson_step_matches_high_precision_oracle() {
        // Frozen 256-bit reference for one Wilkinson step on the seed-7
        // sample with spectrum {1,2,4}. Also pins the sampler's stream:
        // if the generator ever drifted, the matrix assert fires first.
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        let t = crate::sample::sample_isospectral(&spec, 7, None).unwrap();
        assert_eq!(t.diag(), &[1.959904620927515, 3.0315169486692444, 2.00857843040324]);
        assert_eq!(t.sub(), &[1.2701024981305191, 0.5949667403318317]);

        let (res, rec) = strategy_step(&t, &ShiftStrategy::wilkinson()).unwrap();
        assert!((rec.shift - 1.735454657997504).abs() < 1e-15);
        let exp_diag = [3.434370415604121, 1.5809159747316994, 1.9847136096641798];
        let exp_sub = [1.167232709013607, -0.14465825744248662];
        for (a, b) in res.next.diag().iter().zip(exp_diag) {
            assert!((a - b).abs() <= 1e-11, "{a} vs {b}");
        }
        for (a, b) in res.next.sub().iter().zip(exp_sub) {
            assert!((a - b).abs() <= 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn wilkinson_jump_across_singular_support() {
        // Straddle the corner-coincidence set: trailing blocks
        // [[c ± δ, b], [b, c]]. The two one-sided values differ by the full
        // block gap 2√(d² + b²) → 2|b| as δ → 0.
        let b = 0.37;
        let c = 0.9;
        for delta in [1e-4, 1e-6, 1e-8] {
            let plus = wilkinson_shift(&tri(&[c + delta, c], &[b]));
            let minus = wilkinson_shift(&tri(&[c - delta, c], &[b]));
            let jump = (plus - minus).abs();
            assert!((jump - 2.0 * b).abs() < 1e-3 * b + 2.0 * delta, "δ = {delta}: jump {jump}");
        }
    }

    #[test]
    fn strategy_parse_round_trip() {
        let spec = Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(ShiftStrategy::parse("wilkinson", None).unwrap().describe(), "wilkinson");
        assert_eq!(ShiftStrategy::parse("rayleigh", None).unwrap().describe(), "rayleigh");
        let m = ShiftStrategy::parse("mixed:1e-3", None).unwrap();
        assert!(matches!(m.kind, ShiftKind::Mixed { eps } if eps == 1e-3));
        let e = ShiftStrategy::parse("exact:2", Some(&spec)).unwrap();
        assert!(matches!(e.kind, ShiftKind::Exact { index: 2, value } if value == 4.0));
        assert!(ShiftStrategy::parse("newton", None).is_err());
        assert!(ShiftStrategy::parse("exact:2", None).is_err());
    }
}
