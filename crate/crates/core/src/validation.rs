//! Independent numerical oracles: finite-difference Helmholtz residual,
//! quasi-periodicity defect, log-log rate fits and plane sampling of the
//! scattered field.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bie::{BoundaryCondition, DensitySolution, SolveConfig};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::greens::spectral_complete_green;
use crate::lattice::{gamma_exponent, Lattice};
use crate::math;

/// Default finite-difference step, in units of the period.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// `|Lap_h u(x) + k^2 u(x)|` with the 7-point Laplacian of step `h`.
pub fn helmholtz_residual(field: impl Fn(Vec3) -> Complex64, x: Vec3, h: f64, k: f64) -> f64 {
    let c = field(x);
    let mut lap = c * -6.0;
    for e in [Vec3::new(h, 0.0, 0.0), Vec3::new(0.0, h, 0.0), Vec3::new(0.0, 0.0, h)] {
        lap += field(x + e) + field(x - e);
    }
    (lap / (h * h) + c * (k * k)).norm()
}

/// `|u(x + v_mn) - e^{i alpha . v_mn} u(x)|`.
pub fn quasi_periodicity_defect(
    field: impl Fn(Vec3) -> Complex64,
    x: Vec3,
    (m, n): (i32, i32),
    alpha: Vec2,
    lat: &Lattice,
) -> f64 {
    let v = lat.point(m, n);
    (field(x + v.with_z(0.0)) - math::cis(alpha.dot(v)) * field(x)).norm()
}

/// Least-squares line through `(ln A, ln err)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Errors at or below this level are treated as round-off.
const NOISE_FLOOR: f64 = 1e-15;

pub fn fit_decay_rate(samples: &[(f64, f64)]) -> Result<RateFit> {
    if samples.len() < 3 {
        return Err(Error::DegenerateFit("need at least three samples"));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples.iter().any(|s| !(s.0 > 0.0)) {
        return Err(Error::DegenerateFit("abscissae must be positive and strictly increasing"));
    }
    if samples.iter().any(|s| !(s.1 > 0.0)) {
        return Err(Error::DegenerateFit("errors must be positive"));
    }
    if samples.iter().all(|s| s.1 <= NOISE_FLOOR) {
        return Err(Error::DegenerateFit("all errors at round-off level"));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(a, e)| (math::ln(a), math::ln(e))).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(RateFit {
        samples: samples.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}

/// Scattered field at `x` from a solved density, by direct quadrature of the
/// layer potential with the spectral complete Green function. Needs `x.z`
/// above the surface.
pub fn layer_potential(density: &DensitySolution, cfg: &SolveConfig, x: Vec3, tol: f64) -> Result<Complex64> {
    let grid = &cfg.grid;
    let alpha = cfg.gp.inc.alpha;
    let i = Complex64::new(0.0, 1.0);
    let mut u = Complex64::new(0.0, 0.0);
    for j in 0..grid.len() {
        let y = grid.nodes[j];
        let g = spectral_complete_green(x - y, &cfg.gp, tol)?;
        let kern = match cfg.bc {
            BoundaryCondition::Dirichlet => i * cfg.eta * g.value + cfg.xi * g.gradient_source.dot_real(grid.normals[j]),
            BoundaryCondition::Neumann => g.value,
        };
        u += kern * math::cis(alpha.dot(y.xy())) * density.values[j] * grid.weight(j);
    }
    Ok(u)
}

/// Rayleigh coefficients `B_jl`, `|j|, |l| <= j_max`, from samples of the
/// scattered field on an `s x s` grid in the plane `z = z0`.
pub fn plane_sampling_coefficients(
    density: &DensitySolution,
    cfg: &SolveConfig,
    z0: f64,
    s: usize,
    j_max: i32,
) -> Result<Vec<((i32, i32), Complex64)>> {
    if !(z0 > cfg.grid.z_plus) {
        return Err(Error::Domain(z0));
    }
    if s < (2 * j_max + 1) as usize {
        return Err(Error::Resolution { n: s, m: s });
    }
    let lat = &cfg.gp.lat;
    let inc = &cfg.gp.inc;
    let mut samples = Vec::with_capacity(s * s);
    for a in 0..s {
        for b in 0..s {
            let xt = lat.from_cell(a as f64 / s as f64, b as f64 / s as f64);
            let u = layer_potential(density, cfg, xt.with_z(z0), 1e-15)?;
            samples.push((xt, u * math::cis(-inc.alpha.dot(xt))));
        }
    }
    let mut out = Vec::new();
    for j in -j_max..=j_max {
        for l in -j_max..=j_max {
            let g = lat.reciprocal(j, l);
            let c: Complex64 = samples.iter().map(|(xt, u)| u * math::cis(-g.dot(*xt))).sum::<Complex64>() / (s * s) as f64;
            let mode = gamma_exponent(j, l, inc, lat);
            out.push(((j, l), c * math::cexp(-Complex64::new(0.0, 1.0) * mode.gamma * z0)));
        }
    }
    Ok(out)
}


/// Ten fixed evaluation points above the plane `z = 0`, spread over one cell
/// with heights in `[0.4, 0.94]`.
pub fn probe_points(lat: &Lattice) -> Vec<Vec3> {
    (0..10)
        .map(|i| {
            let t = i as f64;
            let a = (0.07 + 0.093 * t) % 1.0;
            let b = (0.61 + 0.377 * t) % 1.0;
            lat.from_cell(a, b).with_z(0.4 + 0.06 * t)
        })
        .collect()
}
