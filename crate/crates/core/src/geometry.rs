//! Deflation sets, tubular coordinates, the canonical projection, double
//! deflation, and the moment map onto the permutohedron.
//!
//! The `i`-th deflation set consists of matrices with `b1 = 0` and corner
//! entry `λ_i`; its `|b1| ≤ ε` thickening splits into one component per
//! eigenvalue once `ε < γ/(2√2)`, and on each component the corner entry
//! stays within `√2·ε` of its eigenvalue. The canonical projection onto
//! the deflation set composes a forward exact-shift step (which deflates)
//! with the inverse step on the split-off leading block; it is idempotent
//! and commutes with steps.

use crate::error::{Error, Result};
use crate::spectrum::{eigen_decomposition, Spectrum};
use crate::step::{inverse_step_with, step_star, RqConvention};
use crate::tridiag::SymTridiagonal;

/// Runtime neighborhood radii, as fractions of the spectral gap. The
/// existence proofs are not constructive, so the radii are configuration,
/// spot-checked on samples at startup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilons {
    /// Tubular-neighborhood radius (default `0.05·γ`).
    pub eps_tub: f64,
    /// Step-invariance radius (default `0.01·γ`); neighborhoods of this
    /// radius map into their own interior at half radius.
    pub eps_inv: f64,
    /// Radius on which height functions are monotone (default `0.005·γ`);
    /// shifts this close to `λ_i` keep the distances `|λ_j − s|` distinct
    /// and in a fixed order.
    pub eps_ap: f64,
    /// Mixed-strategy switchover (default `1e−3·γ`).
    pub mixed_eps: f64,
}

impl Epsilons {
    pub fn defaults(spec: &Spectrum) -> Self {
        let gamma = spec.gap();
        Self {
            eps_tub: 0.05 * gamma,
            eps_inv: 0.01 * gamma,
            eps_ap: 0.005 * gamma,
            mixed_eps: 1e-3 * gamma,
        }
    }

    /// Static consistency checks. The order constraint on `eps_ap` (no
    /// midpoint of two eigenvalues within `eps_ap` of any eigenvalue) is
    /// only enforceable for a.p.-free spectra and is skipped otherwise.
    pub fn validate(&self, spec: &Spectrum) -> Result<()> {
        let gamma = spec.gap();
        if !(self.eps_tub > 0.0 && self.eps_inv > 0.0 && self.eps_ap > 0.0 && self.mixed_eps > 0.0)
        {
            return Err(Error::InvalidEpsilon("all radii must be positive".into()));
        }
        if self.eps_tub >= gamma / (2.0 * std::f64::consts::SQRT_2) {
            return Err(Error::InvalidEpsilon(format!(
                "eps_tub = {} must stay below gap/(2√2) = {}",
                self.eps_tub,
                gamma / (2.0 * std::f64::consts::SQRT_2)
            )));
        }
        if self.eps_inv > self.eps_tub {
            return Err(Error::InvalidEpsilon("eps_inv must not exceed eps_tub".into()));
        }
        if self.eps_ap > self.eps_inv {
            return Err(Error::InvalidEpsilon("eps_ap must not exceed eps_inv".into()));
        }
        if spec.ap_class() == crate::spectrum::ApClass::ApFree {
            // Shifts within eps_ap of λ_i must keep the distances |λ_j − s|
            // distinct and in a fixed order: no midpoint of two other
            // eigenvalues may fall inside the interval. Midpoints involving
            // λ_i itself sit at least γ/2 away.
            let l = spec.lambdas();
            for (i, &li) in l.iter().enumerate() {
                for j in 0..l.len() {
                    for k in j + 1..l.len() {
                        if j == i || k == i {
                            continue;
                        }
                        let mid = 0.5 * (l[j] + l[k]);
                        if (li - mid).abs() <= self.eps_ap {
                            return Err(Error::InvalidEpsilon(format!(
                                "eps_ap = {} reaches the midpoint of λ_{j}, λ_{k} near λ_{i}",
                                self.eps_ap
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Location of a matrix inside a deflation neighborhood.
#[derive(Debug, Clone, Copy)]
pub struct DeflationLocation {
    /// Index `i` minimizing `|T_{n,n} − λ_i|`.
    pub component_index: usize,
    /// `b1(T)`.
    pub b_value: f64,
    /// `|T_{n,n} − λ_i|`; below `√2·ε` on the `ε`-neighborhood.
    pub corner_gap: f64,
}

/// Classifies which deflation component a matrix with `|b1| ≤ eps` belongs
/// to. Requires `eps < γ/(2√2)`, which makes the minimizing eigenvalue
/// unique and the corner gap smaller than `√2·eps`.
pub fn deflation_component(
    t: &SymTridiagonal,
    spec: &Spectrum,
    eps: f64,
) -> Result<DeflationLocation> {
    let gamma = spec.gap();
    if !eps.is_finite() || eps <= 0.0 || eps >= gamma / (2.0 * std::f64::consts::SQRT_2) {
        return Err(Error::InvalidEpsilon(format!(
            "eps = {eps} outside (0, gap/(2√2)) = (0, {})",
            gamma / (2.0 * std::f64::consts::SQRT_2)
        )));
    }
    let b1 = t.b1().unwrap_or(0.0);
    if b1.abs() > eps {
        return Err(Error::NotInNeighborhood { b1: b1.abs(), eps });
    }
    let corner = t.corner();
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    let mut second_d = f64::INFINITY;
    for (j, &l) in spec.lambdas().iter().enumerate() {
        let d = (corner - l).abs();
        if d < best_d {
            second_d = best_d;
            best_d = d;
            best = j;
        } else if d < second_d {
            second_d = d;
        }
    }
    if (second_d - best_d).abs() <= spec.tau_ap() {
        return Err(Error::AmbiguousComponent);
    }
    let sqrt2_eps = std::f64::consts::SQRT_2 * eps;
    if best_d >= sqrt2_eps {
        return Err(Error::NotInNeighborhood { b1: best_d, eps: sqrt2_eps });
    }
    Ok(DeflationLocation { component_index: best, b_value: b1, corner_gap: best_d })
}

/// Canonical projection onto the `i`-th deflation set.
///
/// The forward exact-shift step deflates `T` onto `b1 = 0`, corner `λ_i`;
/// the projection then pulls the split-off leading block back through the
/// inverse of the step the deflation set itself carries (a plain QR step
/// with shift `λ_i` on the block) and reattaches the corner. Idempotent,
/// sign-equivariant, and commuting with steps whose shift is not one of
/// the other eigenvalues.
pub fn canonical_projection(
    t: &SymTridiagonal,
    spec: &Spectrum,
    i: usize,
) -> Result<SymTridiagonal> {
    let n = t.n();
    if i >= spec.n() || spec.n() != n {
        return Err(Error::WrongDimension { expected: spec.n(), got: n });
    }
    let lam = spec.lambdas()[i];
    if n == 1 {
        return SymTridiagonal::new(vec![lam], vec![]);
    }
    let deflated = step_star(t, lam)?.next;
    let block = deflated.leading_block(n - 1)?;
    // The restriction of the exact-shift step to the deflation set acts on
    // the leading block as the *unsigned* QR step, so its inverse must use
    // the all-positive-diagonal convention.
    let base_block = inverse_step_with(&block, lam, RqConvention::Unsigned)?;
    let corner = SymTridiagonal::new(vec![lam], vec![])?;
    Ok(base_block.direct_sum(&corner))
}

/// Tubular coordinates of a matrix in a deflation neighborhood: the base
/// point on the deflation set and the fiber coordinate `b1`.
#[derive(Debug, Clone)]
pub struct TubularPoint {
    pub base: SymTridiagonal,
    pub fiber: f64,
}

/// Computes `ζ(T) = (Π_i(T), b1(T))` for `T` in the `i`-th neighborhood of
/// radius `eps ≤ eps_tub`. The fiber never exceeds the distance to the
/// base: `|b1(T)| ≤ ‖T − Π_i(T)‖` (checked).
pub fn tubular_coords(
    t: &SymTridiagonal,
    spec: &Spectrum,
    i: usize,
    eps: f64,
) -> Result<TubularPoint> {
    let loc = deflation_component(t, spec, eps)?;
    if loc.component_index != i {
        return Err(Error::NotInNeighborhood { b1: loc.corner_gap, eps });
    }
    let base = canonical_projection(t, spec, i)?;
    let fiber = t.b1().unwrap_or(0.0);
    let dist = t.dist(&base)?;
    debug_assert!(
        fiber.abs() <= dist + 1e-12 * (1.0 + t.norm()),
        "fiber {fiber:.3e} exceeds base distance {dist:.3e}"
    );
    Ok(TubularPoint { base, fiber })
}

/// Membership in the double deflation neighborhood: `|b1(T)| ≤ eps1` with
/// component `i`, and the projected base, viewed as an `(n−1)`-matrix with
/// spectrum `Λ_i`, lies in the `j`-th deflation neighborhood of radius
/// `eps2` (`j` indexes the original spectrum, `j ≠ i`).
pub fn double_deflation_membership(
    t: &SymTridiagonal,
    spec: &Spectrum,
    i: usize,
    j: usize,
    eps1: f64,
    eps2: f64,
) -> Result<bool> {
    let n = t.n();
    if n < 3 {
        return Err(Error::WrongDimension { expected: 3, got: n });
    }
    if i == j || j >= spec.n() {
        return Err(Error::WrongDimension { expected: spec.n(), got: j });
    }
    let b1 = t.b1().unwrap_or(0.0).abs();
    if b1 > eps1 {
        return Ok(false);
    }
    let loc = deflation_component(t, spec, eps1)?;
    if loc.component_index != i {
        return Ok(false);
    }
    let base = canonical_projection(t, spec, i)?;
    let inner = base.leading_block(n - 1)?;
    let reduced = spec.remove(i)?;
    let j_reduced = if j < i { j } else { j - 1 };
    match deflation_component(&inner, &reduced, eps2) {
        Ok(inner_loc) => Ok(inner_loc.component_index == j_reduced),
        Err(Error::NotInNeighborhood { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Moment map: diagonalizes `T` and returns the vector whose `j`-th entry
/// is `Σ_k λ_k·(v_j)_k²` for the unit eigenvector `v_j` of `λ_j`. Diagonal
/// matrices go to the permutohedron vertices and every value lies in the
/// permutohedron; coordinates always sum to the trace.
pub fn moment_map(t: &SymTridiagonal) -> Result<Vec<f64>> {
    let n = t.n();
    let (lambdas, vecs) = eigen_decomposition(t)?;
    let mut mu = vec![0.0; n];
    for (j, m) in mu.iter_mut().enumerate() {
        *m = (0..n).map(|k| lambdas[k] * vecs[(k, j)] * vecs[(k, j)]).sum();
    }
    Ok(mu)
}

/// Permutohedron vertex `v_π = (λ_{π⁻¹(1)}, …, λ_{π⁻¹(n)})`, the image of
/// the diagonal matrix `Λ^π` under the moment map.
pub fn permutohedron_vertex(spec: &Spectrum, perm: &[usize]) -> Result<Vec<f64>> {
    let n = spec.n();
    if perm.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
    }
    let mut inverse = vec![0usize; n];
    for (k, &p) in perm.iter().enumerate() {
        if p >= n {
            return Err(Error::Parse(format!("permutation entry {p} out of range")));
        }
        inverse[p] = k;
    }
    Ok(inverse.iter().map(|&k| spec.lambdas()[k]).collect())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Whether a point lies in the permutohedron of the spectrum: its sorted
/// partial sums must be dominated by those of the eigenvalues, with equal
/// totals (the majorization description of the convex hull of the
/// permuted spectra).
pub fn in_permutohedron(point: &[f64], spec: &Spectrum, tol: f64) -> bool {
    if point.len() != spec.n() {
        return false;
    }
    let mut p = point.to_vec();
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut l = spec.lambdas().to_vec();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut ps = 0.0;
    let mut ls = 0.0;
    for k in 0..p.len() {
        ps += p[k];
        ls += l[k];
        if k + 1 < p.len() && ps > ls + tol {
            return false;
        }
    }
    (ps - ls).abs() <= tol
}
