//! Phase-portrait data for 3×3 spectra: moment-map trajectories of the
//! sign-dropped strategy iteration over the positive-subdiagonal cell,
//! with the six diagonal matrices emitted as the polytope vertices and a
//! family of starts on each deflation edge.

use anyhow::{bail, Result};
use triqr::geometry::{moment_map, permutations};
use triqr::rng::derive_seed;
use triqr::sample::sample_isospectral;
use triqr::shift::ShiftStrategy;
use triqr::tridiag::SymTridiagonal;
use triqr::Spectrum;

pub struct PortraitParams {
    pub grid: usize,
    pub steps: usize,
    pub seed: u64,
}

/// CSV with columns `traj,step,mu_1,mu_2,mu_3,b1,b2,shift`.
pub fn portrait_csv(
    spec: &Spectrum,
    strategy: &ShiftStrategy,
    params: &PortraitParams,
) -> Result<String> {
    if spec.n() != 3 {
        bail!("portrait requires a spectrum of length 3, got {}", spec.n());
    }
    let mut out = String::from("traj,step,mu_1,mu_2,mu_3,b1,b2,shift\n");

    // Vertices: the six diagonal matrices.
    for (k, perm) in permutations(3).iter().enumerate() {
        let t = spec.permuted_diagonal(perm)?;
        let mu = moment_map(&t)?;
        out.push_str(&format!(
            "vertex-{k},0,{:.16e},{:.16e},{:.16e},0.0,0.0,\n",
            mu[0], mu[1], mu[2]
        ));
    }

    // Interior starts from seeded samples (already positive-subdiagonal).
    let mut traj = 0usize;
    for g in 0..params.grid {
        let t0 = match sample_isospectral(spec, derive_seed(params.seed, g as u64), None) {
            Ok(t) => t,
            Err(_) => continue,
        };
        emit_trajectory(&mut out, &format!("t{traj}"), t0, strategy, spec, params.steps)?;
        traj += 1;
    }

    // Edge starts: one family per deflation set, parametrized by the angle
    // of the 2×2 block carrying the complementary spectrum.
    for i in 0..3 {
        let lam = spec.lambdas()[i];
        let rest = spec.remove(i)?;
        let (m1, m2) = (rest.lambdas()[0], rest.lambdas()[1]);
        let per_edge = (params.grid / 2).max(4);
        for e in 0..per_edge {
            let phi = (e as f64 + 0.5) / per_edge as f64 * std::f64::consts::FRAC_PI_2;
            let (c, s) = (phi.cos(), phi.sin());
            let block = SymTridiagonal::new(
                vec![m1 * c * c + m2 * s * s, m1 * s * s + m2 * c * c],
                vec![(m2 - m1) * c * s],
            )?;
            let corner = SymTridiagonal::new(vec![lam], vec![])?;
            let t0 = block.direct_sum(&corner);
            emit_trajectory(&mut out, &format!("edge{i}-{e}"), t0, strategy, spec, params.steps)?;
        }
    }

    Ok(out)
}

fn emit_trajectory(
    out: &mut String,
    traj: &str,
    t0: SymTridiagonal,
    strategy: &ShiftStrategy,
    spec: &Spectrum,
    steps: usize,
) -> Result<()> {
    let mut t = t0;
    for k in 0..steps {
        let mu = moment_map(&t)?;
        let shift = strategy.shift(&t);
        out.push_str(&format!(
            "{traj},{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            mu[0],
            mu[1],
            mu[2],
            t.b1().unwrap_or(0.0),
            t.b2().unwrap_or(0.0),
            shift
        ));
        if t.max_abs_sub() < 1e-13 * spec.norm() {
            break; // effectively a vertex; the row above already records it
        }
        match triqr::strategy_step(&t, strategy) {
            Ok((res, _)) => t = res.next.drop_signs(),
            Err(_) => break,
        }
    }
    Ok(())
}
