//! Finite-difference shift coefficients and smooth cutoff functions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Largest supported shift order.
pub const MAX_ORDER: usize = 12;

/// `a_pq = (-1)^q C(p, q)` for `q = 0..=p`.
pub fn fd_coeffs(p: usize) -> Result<Vec<i64>> {
    if p > MAX_ORDER {
        return Err(Error::OrderTooLarge(p));
    }
    let mut out = Vec::with_capacity(p + 1);
    let mut binom: i64 = 1;
    for q in 0..=p {
        let sign = if q % 2 == 0 { 1 } else { -1 };
        out.push(sign * binom);
        binom = binom * (p - q) as i64 / (q + 1) as i64;
    }
    Ok(out)
}

/// The C-infinity blend `exp(2 e^{-1/u} / (u - 1))` on `0 < u < 1`.
#[inline]
fn blend(u: f64) -> f64 {
    math::exp(2.0 * math::exp(-1.0 / u) / (u - 1.0))
}

/// `d/du` of [`blend`].
#[inline]
fn blend_derivative(u: f64) -> f64 {
    let e = math::exp(-1.0 / u);
    let um1 = u - 1.0;
    let inner = 2.0 * e * (1.0 / (u * u * um1) - 1.0 / (um1 * um1));
    math::exp(2.0 * e / um1) * inner
}

/// Smooth truncation: 1 for `t <= c`, 0 for `t >= 1`, monotone in between.
#[inline]
pub fn chi(t: f64, c: f64) -> f64 {
    if t <= c {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        blend((t - c) / (1.0 - c))
    }
}

/// `(chi(t), d chi / dt)`.
#[inline]
pub fn chi_with_derivative(t: f64, c: f64) -> (f64, f64) {
    if t <= c {
        (1.0, 0.0)
    } else if t >= 1.0 {
        (0.0, 0.0)
    } else {
        let w = 1.0 - c;
        let u = (t - c) / w;
        (blend(u), blend_derivative(u) / w)
    }
}

/// Radial partition of unity used by the local singular quadrature:
/// 1 at the origin, 0 for `t >= 1`, flat to all orders at both ends.
#[inline]
pub fn partition_of_unity(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        blend(t)
    }
}
