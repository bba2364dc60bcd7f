//! Shifted QR iteration on real symmetric tridiagonal matrices.
//!
//! The library implements the signed step `F_s(T) = Q⋆ᵀ T Q⋆` built from
//! the signed factorization `T − sI = Q⋆R⋆` (rotation factor in `SO(n)`,
//! triangular factor positive except possibly in its last diagonal entry),
//! simple shift strategies (Rayleigh, Wilkinson, mixed, exact), the
//! geometry of deflation neighborhoods (canonical projection, tubular
//! coordinates, double deflation, moment map), and trace-level diagnostics
//! for deflation rates (convergence exponents, decay bounds, height
//! functions). An independent Sturm-bisection oracle backs every spectral
//! assertion so the iteration is never used to validate itself.

pub mod dynamics;
pub mod error;
pub mod factor;
pub mod geometry;
pub mod rng;
pub mod sample;
pub mod shift;
pub mod spectrum;
pub mod step;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{factor_shifted, GivensRotation, QRStarFactors};
pub use geometry::{
    canonical_projection, deflation_component, double_deflation_membership, moment_map,
    tubular_coords, DeflationLocation, Epsilons, TubularPoint,
};
pub use sample::{sample_deflation_base, sample_in_neighborhood, sample_isospectral, sample_on_band};
pub use shift::{
    mixed_shift, rayleigh_shift, strategy_step, verify_simple_constant, wilkinson_shift,
    ShiftKind, ShiftRecord, ShiftStrategy,
};
pub use spectrum::{
    classify_ap, closest_eigenvalue_index, sturm_eigenvalues, ApClass, Spectrum,
};
pub use step::{check_commutation, inverse_step, step_star, step_unsigned, StepResult};
pub use tridiag::{SignPattern, SymTridiagonal};
pub use dynamics::{
    deflate_and_recurse, height, iterate, parlett_check, rate_exponents, wielandt_hoffman_gap,
    weak_ap_limits, HeightSpec, IterateOptions, IterationTrace, StopReason,
};
