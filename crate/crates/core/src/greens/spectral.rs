//! Rayleigh-series (spectral) forms of the quasi-periodic Green functions
//! and the plane-wave completion that restores grazing harmonics.

use num_complex::Complex64;

use super::{GreenParams, GreenValue};
use crate::error::{Error, Result};
use crate::geometry::{CVec3, Vec2, Vec3};
use crate::lattice::{modes_within, wood_set, IncidentWave, Lattice, DEFAULT_TAU_REL};
use crate::math;

/// Evanescent cutoff: modes with `exp(-|gamma| |z|)` below this are dropped.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-14;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smallest `|z|`, in units of the shortest period, the spectral series accepts.
const MIN_Z_FRACTION: f64 = 1e-3;

fn spectral_radius(k: f64, z: f64, tol: f64) -> f64 {
    let decay = math::ln(1.0 / tol) / z.abs();
    math::sqrt(k * k + decay * decay)
}

fn check_height(z: f64, lat: &Lattice) -> Result<()> {
    if z.abs() < MIN_Z_FRACTION * lat.period() {
        return Err(Error::SlowConvergence { z });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must lie in (0, 1)",
        });
    }
    Ok(())
}

/// `1 - exp(i gamma d)` for real or positive-imaginary `gamma`, free of cancellation.
pub(crate) fn one_minus_shift(gamma: Complex64, d: f64) -> Complex64 {
    if gamma.im == 0.0 {
        let t = gamma.re * d;
        let s = math::sin(0.5 * t);
        Complex64::new(2.0 * s * s, -math::sin(t))
    } else {
        let t = gamma.im * d;
        // 1 - e^{-t} = 2 e^{-t/2} sinh(t/2)
        Complex64::new(2.0 * math::exp(-0.5 * t) * sinh_half(t), 0.0)
    }
}

#[inline]
fn sinh_half(t: f64) -> f64 {
    // sinh(t/2)
    let h = 0.5 * t;
    if h.abs() < 1e-5 {
        h + h * h * h / 6.0
    } else {
        0.5 * (math::exp(h) - math::exp(-h))
    }
}

/// Spectral weight `(1 - e^{i gamma d})^p / gamma` of a non-grazing order.
pub(crate) fn shift_weight(gamma: Complex64, d: f64, p: usize) -> Complex64 {
    math::cpowi(one_minus_shift(gamma, d), p as u32) / gamma
}

/// Classical quasi-periodic Green function by its Rayleigh series (no shifts).
pub fn spectral_qp_green_classical(x_tilde: Vec2, z: f64, inc: &IncidentWave, lat: &Lattice, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let wood = wood_set(inc, lat, DEFAULT_TAU_REL)?;
    if !wood.is_empty() {
        return Err(Error::WoodFrequency(wood.len()));
    }
    check_height(z, lat)?;
    let zabs = z.abs();
    let mut acc = Complex64::new(0.0, 0.0);
    for mode in modes_within(inc, lat, spectral_radius(inc.k, z, tol)) {
        acc += math::cexp(I * (mode.gamma * zabs)) * math::cis(mode.vstar.dot(x_tilde)) / mode.gamma;
    }
    Ok(acc * I / (2.0 * lat.area))
}

/// Shifted quasi-periodic Green function by its Rayleigh series, valid for `z > 0`.
///
/// Orders with `gamma_jl = 0` drop out (their weight tends to zero for `p >= 2`).
pub fn spectral_qp_green_shifted(x_tilde: Vec2, z: f64, gp: &GreenParams, tol: f64) -> Result<Complex64> {
    Ok(spectral_shifted_impl(x_tilde, z, gp, tol, false)?.value)
}

/// Spectral form of the complete Green function (shifted series plus
/// completion) with its source gradient, for `z > 0`.
pub fn spectral_complete_green(x: Vec3, gp: &GreenParams, tol: f64) -> Result<GreenValue> {
    let mut g = spectral_shifted_impl(x.xy(), x.z, gp, tol, true)?;
    g += grazing_completion_with_gradient(x.xy(), x.z, gp);
    Ok(g)
}

fn spectral_shifted_impl(x_tilde: Vec2, z: f64, gp: &GreenParams, tol: f64, gradient: bool) -> Result<GreenValue> {
    check_tol(tol)?;
    if !(z > 0.0) {
        return Err(Error::Domain(z));
    }
    if !gp.wood.is_empty() && gp.p < 2 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "spectral shifted form at a Wood configuration needs p >= 2",
        });
    }
    check_height(z, &gp.lat)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut grad = CVec3::ZERO;
    for mode in modes_within(&gp.inc, &gp.lat, spectral_radius(gp.inc.k, z, tol)) {
        if mode.gamma.norm() == 0.0 {
            continue;
        }
        let term = math::cexp(I * (mode.gamma * z)) * math::cis(mode.vstar.dot(x_tilde)) * shift_weight(mode.gamma, gp.d, gp.p);
        value += term;
        if gradient {
            let it = I * term;
            grad += CVec3::new(it * mode.vstar.x, it * mode.vstar.y, it * mode.gamma);
        }
    }
    let s = I / (2.0 * gp.lat.area);
    Ok(GreenValue {
        value: value * s,
        gradient_source: -grad.scale(s),
    })
}

/// Plane-wave completion `v = (i/2D) sum_U b_jl e^{i v*.x~} e^{i gamma z}`.
pub fn grazing_completion(x_tilde: Vec2, z: f64, gp: &GreenParams) -> Complex64 {
    grazing_completion_with_gradient(x_tilde, z, gp).value
}

/// [`grazing_completion`] with its analytic source gradient.
pub fn grazing_completion_with_gradient(x_tilde: Vec2, z: f64, gp: &GreenParams) -> GreenValue {
    if gp.wood.is_empty() {
        return GreenValue::ZERO;
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut grad = CVec3::ZERO;
    for (mode, b) in gp.wood.members.iter().zip(gp.completion.iter()) {
        let term = math::cexp(I * (mode.gamma * z)) * math::cis(mode.vstar.dot(x_tilde)) * b;
        value += term;
        let it = I * term;
        grad += CVec3::new(it * mode.vstar.x, it * mode.vstar.y, it * mode.gamma);
    }
    let s = I / (2.0 * gp.lat.area);
    GreenValue {
        value: value * s,
        gradient_source: -grad.scale(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use crate::greens::WindowKind;

    #[test]
    fn one_minus_shift_matches_direct() {
        for g in [Complex64::new(3.1, 0.0), Complex64::new(0.0, 2.2), Complex64::new(1e-7, 0.0), Complex64::new(0.0, 1e-7)] {
            let direct = Complex64::new(1.0, 0.0) - math::cexp(I * g * 1.4);
            assert!((one_minus_shift(g, 1.4) - direct).norm() <= 1e-15 + 1e-9 * direct.norm());
        }
    }

    #[test]
    fn classical_even_in_z_and_single_mode() {
        let inc = IncidentWave::normal(1.0).unwrap();
        let lat = Lattice::unit_square();
        let xt = Vec2::new(0.3, 0.4);
        let a = spectral_qp_green_classical(xt, 0.5, &inc, &lat, 1e-14).unwrap();
        let b = spectral_qp_green_classical(xt, -0.5, &inc, &lat, 1e-14).unwrap();
        assert_eq!(a, b);
        let g = spectral_qp_green_classical(xt, 5.0, &inc, &lat, 1e-14).unwrap();
        let lead = I * 0.5 * math::cis(5.0);
        assert!((g - lead).norm() < 1e-13);
    }

    #[test]
    fn classical_refuses_wood_and_small_z() {
        let lat = Lattice::unit_square();
        let inc = IncidentWave::normal(2.0 * PI).unwrap();
        assert!(matches!(
            spectral_qp_green_classical(Vec2::ZERO, 0.5, &inc, &lat, 1e-14),
            Err(Error::WoodFrequency(4))
        ));
        let inc = IncidentWave::normal(1.0).unwrap();
        assert!(matches!(
            spectral_qp_green_classical(Vec2::ZERO, 1e-4, &inc, &lat, 1e-14),
            Err(Error::SlowConvergence { .. })
        ));
    }

    #[test]
    fn shifted_p0_is_classical() {
        let inc = IncidentWave::normal(1.3).unwrap();
        let lat = Lattice::unit_square();
        let gp = GreenParams::new(inc, lat, 0, 1.0, 10.0, WindowKind::Smooth).unwrap();
        let xt = Vec2::new(0.1, 0.7);
        let a = spectral_qp_green_shifted(xt, 0.6, &gp, 1e-14).unwrap();
        let b = spectral_qp_green_classical(xt, 0.6, &inc, &lat, 1e-14).unwrap();
        assert!((a - b).norm() < 1e-14);
        assert!(matches!(spectral_qp_green_shifted(xt, -0.6, &gp, 1e-14), Err(Error::Domain(_))));
    }

    #[test]
    fn shifted_finite_at_wood() {
        let inc = IncidentWave::normal(2.0 * PI).unwrap();
        let gp = GreenParams::new(inc, Lattice::unit_square(), 3, 1.4, 10.0, WindowKind::Smooth).unwrap();
        let v = spectral_qp_green_shifted(Vec2::new(0.3, 0.4), 0.7, &gp, 1e-14).unwrap();
        assert!(v.norm().is_finite());
    }

    #[test]
    fn completion_at_first_wood_anomaly() {
        let inc = IncidentWave::normal(2.0 * PI).unwrap();
        let gp = GreenParams::new(inc, Lattice::unit_square(), 3, 1.4, 10.0, WindowKind::Smooth).unwrap();
        for (x, y, z) in [(0.1, 0.2, 0.3), (0.77, 0.41, 2.0), (-0.3, 0.9, 0.0)] {
            let v = grazing_completion(Vec2::new(x, y), z, &gp);
            let want = I * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos());
            assert!((v - want).norm() < 1e-14);
        }
        let inc = IncidentWave::normal(1.0).unwrap();
        let gp = GreenParams::new(inc, Lattice::unit_square(), 0, 1.4, 10.0, WindowKind::Smooth).unwrap();
        assert_eq!(grazing_completion(Vec2::new(0.2, 0.1), 0.5, &gp), Complex64::new(0.0, 0.0));
    }
}
