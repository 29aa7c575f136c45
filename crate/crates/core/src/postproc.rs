//! Rayleigh coefficients of the scattered field, energy defect and
//! reference error.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::bie::{BoundaryCondition, DensitySolution, SolveConfig};
use crate::error::{Error, Result};
use crate::greens::shift_weight;
use crate::lattice::{gamma_exponent, ModeIndex};
use crate::math;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative energy in the top grid harmonic above which a solve is flagged as under-resolved.
pub const RESOLUTION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RayleighSpectrum {
    /// `B_jl` for `|j|, |l| <= j_max`.
    pub coeffs: BTreeMap<(i32, i32), Complex64>,
    pub modes: BTreeMap<(i32, i32), ModeIndex>,
    /// Orders carrying vertical energy flux (grazing orders excluded).
    pub propagating: Vec<(i32, i32)>,
    /// Grazing orders, reported through their completion weight.
    pub grazing: Vec<(i32, i32)>,
    pub gamma00: f64,
    pub j_max: i32,
    /// Relative energy in the highest resolved harmonic of the density, if above
    /// [`RESOLUTION_THRESHOLD`].
    pub resolution_warning: Option<f64>,
}

impl RayleighSpectrum {
    pub fn b00(&self) -> Complex64 {
        self.coeffs[&(0, 0)]
    }

    pub fn get(&self, j: i32, l: i32) -> Option<Complex64> {
        self.coeffs.get(&(j, l)).copied()
    }
}

/// Smallest `J` with every order of `|v*_jl| <= 2k` inside `|j|, |l| <= J`.
pub fn default_j_max(cfg: &SolveConfig) -> i32 {
    let inc = &cfg.gp.inc;
    let lat = &cfg.gp.lat;
    crate::lattice::modes_within(inc, lat, 2.0 * inc.k)
        .iter()
        .map(|m| m.j.abs().max(m.l.abs()))
        .max()
        .unwrap_or(0)
}

/// Rayleigh coefficients of the scattered field above the surface from the
/// solved periodic density.
pub fn rayleigh_coefficients(density: &DensitySolution, cfg: &SolveConfig, j_max: Option<i32>) -> Result<RayleighSpectrum> {
    let grid = &cfg.grid;
    if density.values.len() != grid.len() {
        return Err(Error::Resolution { n: grid.n, m: grid.m });
    }
    let gp = &cfg.gp;
    let inc = &gp.inc;
    let lat = &gp.lat;
    let tau = gp.wood.tau_rel;
    let j_max = j_max.unwrap_or_else(|| default_j_max(cfg));
    let scale = I / (2.0 * lat.area);

    let mut coeffs = BTreeMap::new();
    let mut modes = BTreeMap::new();
    let mut propagating = Vec::new();
    let mut grazing = Vec::new();
    for j in -j_max..=j_max {
        for l in -j_max..=j_max {
            let mode = gamma_exponent(j, l, inc, lat);
            let in_u = gp.wood.contains(j, l);
            let mut w = Complex64::new(0.0, 0.0);
            if mode.gamma.norm() != 0.0 {
                w += shift_weight(mode.gamma, gp.d, gp.p);
            }
            if in_u {
                let idx = gp.wood.members.iter().position(|m| m.j == j && m.l == l).unwrap_or(0);
                w += gp.completion[idx];
                grazing.push((j, l));
            } else if mode.is_propagating(tau, inc.k) {
                propagating.push((j, l));
            }
            // e^{i alpha.x} e^{-i v*.x} = e^{-i (v* - alpha).x}
            let g = lat.reciprocal(j, l);
            let mut q = Complex64::new(0.0, 0.0);
            for i in 0..grid.len() {
                let x = grid.nodes[i];
                let nrm = grid.normals[i];
                let bracket = match cfg.bc {
                    BoundaryCondition::Dirichlet => {
                        let vn = mode.vstar.x * nrm.x + mode.vstar.y * nrm.y;
                        I * cfg.eta - I * cfg.xi * (mode.gamma * nrm.z + vn)
                    }
                    BoundaryCondition::Neumann => Complex64::new(1.0, 0.0),
                };
                let e = math::cis(-g.dot(x.xy())) * math::cexp(-I * mode.gamma * x.z);
                q += density.values[i] * e * bracket * grid.weight(i);
            }
            coeffs.insert((j, l), scale * w * q);
            modes.insert((j, l), mode);
        }
    }

    Ok(RayleighSpectrum {
        coeffs,
        modes,
        propagating,
        grazing,
        gamma00: inc.gamma,
        j_max,
        resolution_warning: top_harmonic_energy(&density.values, grid.n, grid.m),
    })
}

/// Relative energy of the Nyquist row and column of the 2-D DFT.
fn top_harmonic_energy(values: &[Complex64], n: usize, m: usize) -> Option<f64> {
    let dft_axis = |len: usize, get: &dyn Fn(usize) -> Complex64, freq: i64| -> Complex64 {
        (0..len)
            .map(|s| get(s) * math::cis(-2.0 * PI * freq as f64 * s as f64 / len as f64))
            .sum()
    };
    // transform along t, then along s
    let mut half: Vec<Complex64> = Vec::with_capacity(n * m);
    for s in 0..n {
        for ft in 0..m {
            half.push(dft_axis(m, &|t| values[s * m + t], ft as i64));
        }
    }
    let mut total = 0.0;
    let mut top = 0.0;
    for fs in 0..n {
        for ft in 0..m {
            let c = dft_axis(n, &|s| half[s * m + ft], fs as i64).norm_sqr();
            total += c;
            if fs == n / 2 || ft == m / 2 {
                top += c;
            }
        }
    }
    if total == 0.0 {
        return None;
    }
    let rel = top / total;
    (rel > RESOLUTION_THRESHOLD).then_some(rel)
}

/// `|sum_P (gamma_jl / gamma_00) |B_jl|^2 - 1|`.
pub fn energy_defect(spec: &RayleighSpectrum) -> Result<f64> {
    let g00 = spec.modes.get(&(0, 0)).map(|m| m.gamma);
    if !(spec.gamma00 > 0.0) || !spec.propagating.contains(&(0, 0)) {
        return Err(Error::DegenerateIncidence(g00.map_or(spec.gamma00, |g| g.re)));
    }
    let flux: f64 = spec
        .propagating
        .iter()
        .map(|key| spec.modes[key].gamma.re / spec.gamma00 * spec.coeffs[key].norm_sqr())
        .sum();
    Ok((flux - 1.0).abs())
}

/// `|B00 - reference|`.
pub fn eps1(spec: &RayleighSpectrum, reference: Complex64) -> f64 {
    (spec.b00() - reference).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub eps: f64,
    pub eps1: Option<f64>,
    pub iterations: usize,
}

impl ErrorReport {
    pub fn new(spec: &RayleighSpectrum, reference: Option<Complex64>, iterations: usize) -> Result<Self> {
        Ok(ErrorReport {
            eps: energy_defect(spec)?,
            eps1: reference.map(|r| eps1(spec, r)),
            iterations,
        })
    }
}
