//! Free-space and shifted half-space kernels.

use core::f64::consts::PI;

use num_complex::Complex64;

use super::{GreenValue, POLE_GUARD};
use crate::error::{Error, Result};
use crate::geometry::{CVec3, Vec3};
use crate::greens::window::fd_coeffs;
use crate::math;

const INV_4PI: f64 = 1.0 / (4.0 * PI);

/// `e^{ikr}/r` together with `(d/dr)(e^{ikr}/r) / r`, both without the `1/4 pi`.
#[inline(always)]
pub(crate) fn radial(r: f64, k: f64) -> (Complex64, Complex64) {
    let inv = 1.0 / r;
    let e = math::cis(k * r) * inv;
    // d/dr (e^{ikr}/r) = e^{ikr} (ik r - 1) / r^2
    let d = e * Complex64::new(-inv, k) * inv;
    (e, d)
}

/// `e^{ik|x|} / (4 pi |x|)` with its gradient taken with respect to the source point.
pub fn free_green(x: Vec3, k: f64) -> Result<GreenValue> {
    let r = x.norm();
    if !(r > POLE_GUARD) {
        return Err(Error::Singularity { radius: POLE_GUARD });
    }
    let (e, d) = radial(r, k);
    let grad = CVec3::new(d * x.x, d * x.y, d * x.z).scale(Complex64::new(INV_4PI, 0.0));
    Ok(GreenValue {
        value: e * INV_4PI,
        gradient_source: -grad,
    })
}

/// `sum_q a_pq G(x + (0, 0, q d))`.
pub fn shifted_green(x: Vec3, k: f64, p: usize, d: f64) -> Result<GreenValue> {
    let coeffs = fd_coeffs(p)?;
    let mut out = GreenValue::ZERO;
    for (q, &a) in coeffs.iter().enumerate() {
        let g = free_green(x + Vec3::new(0.0, 0.0, q as f64 * d), k)?;
        out.value += g.value * a as f64;
        out.gradient_source += g.gradient_source.scale(Complex64::new(a as f64, 0.0));
    }
    Ok(out)
}

/// Sample of the lateral decay profile `h(rho, eps, eps_hat)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HProbe {
    pub rho: f64,
    pub eps: f64,
    pub eps_hat: f64,
    pub p: usize,
    pub value: Complex64,
}

/// `h = sum_q a_pq g(rho, eps + q eps_hat)` with `g(rho, e) = e^{ik rho s}/(rho s)`, `s = sqrt(1 + e^2)`.
///
/// The common phase `e^{ik rho}` is factored out before summing so that the
/// cancellation between the `p + 1` terms happens on O(1) phases.
pub fn h_function(rho: f64, eps: f64, eps_hat: f64, p: usize, k: f64) -> Result<HProbe> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: "must be positive",
        });
    }
    let coeffs = fd_coeffs(p)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (q, &a) in coeffs.iter().enumerate() {
        let e = eps + q as f64 * eps_hat;
        let s = math::sqrt(1.0 + e * e);
        // rho (s - 1) without cancellation
        let excess = rho * e * e / (1.0 + s);
        acc += math::cis(k * excess) * (a as f64 / (rho * s));
    }
    Ok(HProbe {
        rho,
        eps,
        eps_hat,
        p,
        value: acc * math::cis(k * rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn free_green_unit_distance() {
        let g = free_green(Vec3::new(1.0, 0.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(g.value.re, 1f64.cos() / (4.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(g.value.im, 1f64.sin() / (4.0 * PI), max_relative = 1e-15);
    }

    #[test]
    fn free_green_symmetric_and_singular() {
        let x = Vec3::new(0.3, -0.7, 0.2);
        assert_eq!(free_green(x, 2.0).unwrap().value, free_green(-x, 2.0).unwrap().value);
        assert!(matches!(free_green(Vec3::ZERO, 1.0), Err(Error::Singularity { .. })));
    }

    #[test]
    fn free_green_gradient_matches_differences() {
        let x = Vec3::new(0.3, 0.4, 0.5);
        let k = 2.0;
        let g = free_green(x, k).unwrap();
        let h = 1e-5;
        let fd = |e: Vec3| {
            (free_green(x + h * e, k).unwrap().value - free_green(x - h * e, k).unwrap().value) / (2.0 * h)
        };
        // source gradient is minus the target gradient
        let want = [fd(Vec3::new(1.0, 0.0, 0.0)), fd(Vec3::new(0.0, 1.0, 0.0)), fd(Vec3::E_Z)];
        let got = [g.gradient_source.x, g.gradient_source.y, g.gradient_source.z];
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a + b).norm() <= 1e-8 * b.norm().max(1e-3), "{a} vs {b}");
        }
    }

    #[test]
    fn shifted_reduces_and_antisymmetrizes() {
        let x = Vec3::new(0.2, 0.1, 0.3);
        let k = 1.7;
        assert_eq!(shifted_green(x, k, 0, 1.0).unwrap(), free_green(x, k).unwrap());
        let s = shifted_green(x, k, 1, 0.8).unwrap();
        let want = free_green(x, k).unwrap().value - free_green(x + Vec3::new(0.0, 0.0, 0.8), k).unwrap().value;
        assert_relative_eq!((s.value - want).norm(), 0.0, epsilon = 1e-15);
        assert!(shifted_green(Vec3::new(0.0, 0.0, -1.6), k, 2, 0.8).is_err());
    }

    #[test]
    fn h_matches_shifted_green_on_axis() {
        let (k, p, d, z) = (2.0 * PI, 3, 1.4, 0.2);
        for rho in [2.0, 7.5, 40.0] {
            let h = h_function(rho, z / rho, d / rho, p, k).unwrap().value;
            let g = shifted_green(Vec3::new(rho, 0.0, z), k, p, d).unwrap().value;
            assert_relative_eq!((h - 4.0 * PI * g).norm(), 0.0, epsilon = 1e-12 * h.norm().max(1e-6));
        }
        let h0 = h_function(3.0, 0.1, 0.5, 0, 1.0).unwrap().value;
        let s = (1.0f64 + 0.01).sqrt();
        let g = math::cis(3.0 * s) / (3.0 * s);
        assert_relative_eq!((h0 - g).norm(), 0.0, epsilon = 1e-15);
    }
}
