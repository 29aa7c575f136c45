//! Hard- and smooth-windowed spatial lattice sums of the shifted kernel.

use core::f64::consts::PI;

use num_complex::Complex64;

use super::free::radial;
use super::spectral::grazing_completion_with_gradient;
use super::window::chi_with_derivative;
use super::{GreenParams, GreenValue, WindowKind, POLE_GUARD};
use crate::error::{Error, Result};
use crate::geometry::{CVec3, Vec2, Vec3};
use crate::lattice::Lattice;
use crate::math;

/// Shifted stack `sum_q a_q g(r_q)` for one lattice image, `r_q^2 = rho^2 + (z + q d)^2`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct TermSum {
    /// `sum_q a_q e^{ik r_q} / r_q`.
    pub value: Complex64,
    /// `sum_q a_q g'(r_q) / r_q`; multiplies the horizontal offset.
    pub radial_xy: Complex64,
    /// `sum_q a_q g'(r_q) (z + q d) / r_q`.
    pub radial_z: Complex64,
}

/// Returns `None` when an image lies within the pole guard.
#[inline(always)]
pub(crate) fn shifted_terms(rho2: f64, z: f64, k: f64, d: f64, coeffs: &[f64]) -> Option<TermSum> {
    let mut out = TermSum::default();
    for (q, &a) in coeffs.iter().enumerate() {
        let zq = z + q as f64 * d;
        let r2 = rho2 + zq * zq;
        if r2 < POLE_GUARD * POLE_GUARD {
            return None;
        }
        let (g, dg) = radial(math::sqrt(r2), k);
        out.value += g * a;
        let dga = dg * a;
        out.radial_xy += dga;
        out.radial_z += dga * zq;
    }
    Some(out)
}

/// Visits every lattice point `v = m v1 + n v2` with `|center + v| < radius`,
/// one row of fixed `m` at a time; `None` marks the end of each row.
pub(crate) fn for_each_point_in_disk(
    lat: &Lattice,
    center: Vec2,
    radius: f64,
    inclusive: bool,
    mut visit: impl FnMut(Option<(i32, i32, Vec2)>),
) {
    // the disk in cell coordinates is bounded by |v_i*| radius around -center
    let (ca, cb) = lat.to_cell(-center);
    let ra = radius * lat.v1s.norm();
    let rb = radius * lat.v2s.norm();
    let (m0, m1) = (math::floor(ca - ra) as i32, math::ceil(ca + ra) as i32);
    let (n0, n1) = (math::floor(cb - rb) as i32, math::ceil(cb + rb) as i32);
    let r2 = radius * radius;
    for m in m0..=m1 {
        for n in n0..=n1 {
            let v = lat.point(m, n);
            let d2 = (center + v).norm_sqr();
            if d2 < r2 || (inclusive && d2 == r2) {
                visit(Some((m, n, v)));
            }
        }
        visit(None);
    }
}

/// Windowed spatial sum of the shifted kernel at the difference vector `x`.
pub fn qp_green_truncated(x: Vec3, gp: &GreenParams) -> Result<GreenValue> {
    let xt = x.xy();
    let k = gp.inc.k;
    let coeffs = gp.coeffs();
    let inv_a = 1.0 / gp.radius;
    let mut total = Accum::default();
    let mut row = Accum::default();
    let mut pole = false;

    let (center, inclusive) = match gp.window {
        WindowKind::Hard => (Vec2::ZERO, true),
        WindowKind::Smooth => (xt, false),
    };
    for_each_point_in_disk(
        &gp.lat,
        center,
        gp.radius,
        inclusive,
        |point| {
            let Some((_, _, v)) = point else {
                total.merge(&mut row);
                return;
            };
            if pole {
                return;
            }
            let off = xt + v;
            let rho2 = off.norm_sqr();
            let phase = math::cis(-gp.inc.alpha.dot(v));
            let (w, dw) = match gp.window {
                WindowKind::Hard => (1.0, Vec2::ZERO),
                WindowKind::Smooth => {
                    let rho = math::sqrt(rho2);
                    let (c, dc) = chi_with_derivative(rho * inv_a, gp.window_c);
                    if c == 0.0 {
                        return;
                    }
                    let dw = if rho > 0.0 { (dc * inv_a / rho) * off } else { Vec2::ZERO };
                    (c, dw)
                }
            };
            match shifted_terms(rho2, x.z, k, gp.d, coeffs) {
                Some(t) => row.add(&t, off, phase * w, dw, phase),
                None => pole = true,
            }
        },
    );
    if pole {
        return Err(Error::Singularity { radius: POLE_GUARD });
    }
    Ok(total.finish())
}

/// Shifted lattice sum plus the grazing-mode completion.
pub fn complete_green(x: Vec3, gp: &GreenParams) -> Result<GreenValue> {
    let mut g = qp_green_truncated(x, gp)?;
    if !gp.wood.is_empty() {
        g += grazing_completion_with_gradient(x.xy(), x.z, gp);
    }
    Ok(g)
}

/// Running sums of value and target gradient (before the `1/4 pi`).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accum {
    pub value: Complex64,
    pub gx: Complex64,
    pub gy: Complex64,
    pub gz: Complex64,
}

impl Accum {
    /// Adds `W(x~) * T` where `W` is the (phase times window) weight and `dw` the
    /// real gradient of the window factor, to be multiplied by `phase`.
    #[inline(always)]
    pub fn add(&mut self, t: &TermSum, off: Vec2, weight: Complex64, dw: Vec2, phase: Complex64) {
        self.value += weight * t.value;
        let wr = weight * t.radial_xy;
        let sv = phase * t.value;
        self.gx += wr * off.x + sv * dw.x;
        self.gy += wr * off.y + sv * dw.y;
        self.gz += weight * t.radial_z;
    }

    #[inline]
    pub fn merge(&mut self, other: &mut Accum) {
        self.value += other.value;
        self.gx += other.gx;
        self.gy += other.gy;
        self.gz += other.gz;
        *other = Accum::default();
    }

    pub fn finish(&self) -> GreenValue {
        let s = 1.0 / (4.0 * PI);
        GreenValue {
            value: self.value * s,
            gradient_source: CVec3::new(-self.gx * s, -self.gy * s, -self.gz * s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::free::shifted_green;
    use crate::lattice::IncidentWave;

    #[test]
    fn tiny_window_keeps_only_central_image() {
        let inc = IncidentWave::normal(1.3).unwrap();
        let lat = Lattice::unit_square();
        let x = Vec3::new(0.1, -0.2, 0.3);
        for p in [0usize, 3] {
            let gp = GreenParams::new(inc, lat, p, 1.4, 0.5, WindowKind::Hard).unwrap();
            let got = qp_green_truncated(x, &gp).unwrap();
            let want = shifted_green(x, inc.k, p, 1.4).unwrap();
            assert!((got.value - want.value).norm() < 1e-15);
            assert!((got.gradient_source - want.gradient_source).norm() < 1e-14);
        }
    }

    #[test]
    fn pole_is_rejected() {
        let inc = IncidentWave::normal(2.0 * PI).unwrap();
        let gp = GreenParams::new(inc, Lattice::unit_square(), 3, 1.4, 5.0, WindowKind::Smooth).unwrap();
        assert!(matches!(
            qp_green_truncated(Vec3::new(1.0, 2.0, -2.8), &gp),
            Err(Error::Singularity { .. })
        ));
    }
}
