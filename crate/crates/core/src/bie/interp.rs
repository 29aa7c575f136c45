//! Chebyshev interpolation in the vertical separation for the far images of
//! one horizontal offset.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::CVec3;
use crate::greens::GreenValue;
use crate::math;

/// Tail size, relative to the largest coefficient, accepted as converged.
pub(crate) const TAIL_TOL: f64 = 1e-13;

fn channels(g: &GreenValue) -> [Complex64; 4] {
    [g.value, g.gradient_source.x, g.gradient_source.y, g.gradient_source.z]
}

/// Chebyshev extrema `cos(k pi / n)`, `k = 0..=n`, mapped to `[lo, hi]`.
pub(crate) fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
    (0..=n).map(|k| mid + half * math::cos(k as f64 * PI / n as f64)).collect()
}

#[derive(Debug, Clone)]
pub(crate) struct ChebFit {
    lo: f64,
    hi: f64,
    coeffs: Vec<[Complex64; 4]>,
}

impl ChebFit {
    /// Fits samples taken at [`nodes`]; `None` when the trailing coefficients
    /// exceed [`TAIL_TOL`].
    pub fn fit(lo: f64, hi: f64, samples: &[GreenValue]) -> Option<ChebFit> {
        let n = samples.len() - 1;
        let vals: Vec<[Complex64; 4]> = samples.iter().map(channels).collect();
        let mut coeffs = alloc::vec![[Complex64::new(0.0, 0.0); 4]; n + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            for (k, v) in vals.iter().enumerate() {
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                let t = w * math::cos((j * k % (2 * n)) as f64 * PI / n as f64);
                for ch in 0..4 {
                    c[ch] += v[ch] * t;
                }
            }
            let s = if j == 0 || j == n { 1.0 / n as f64 } else { 2.0 / n as f64 };
            for x in c.iter_mut() {
                *x *= s;
            }
        }
        for ch in 0..4 {
            let big = coeffs.iter().map(|c| c[ch].norm()).fold(0.0, f64::max);
            let tail = coeffs[n - 1][ch].norm().max(coeffs[n][ch].norm());
            if tail > TAIL_TOL * big {
                return None;
            }
        }
        Some(ChebFit { lo, hi, coeffs })
    }

    pub fn eval(&self, z: f64) -> GreenValue {
        let x = (2.0 * z - self.lo - self.hi) / (self.hi - self.lo);
        let zero = Complex64::new(0.0, 0.0);
        let mut b1 = [zero; 4];
        let mut b2 = [zero; 4];
        for c in self.coeffs.iter().skip(1).rev() {
            let mut b0 = [zero; 4];
            for ch in 0..4 {
                b0[ch] = c[ch] + b1[ch] * (2.0 * x) - b2[ch];
            }
            b2 = b1;
            b1 = b0;
        }
        let c0 = &self.coeffs[0];
        let out: [Complex64; 4] = core::array::from_fn(|ch| c0[ch] + b1[ch] * x - b2[ch]);
        GreenValue {
            value: out[0],
            gradient_source: CVec3::new(out[1], out[2], out[3]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let f = |z: f64| GreenValue {
            value: Complex64::new(math::cos(3.0 * z), math::exp(z)),
            gradient_source: CVec3::new(Complex64::new(z * z, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0 / (3.0 + z), 0.0)),
        };
        let (lo, hi) = (-0.7, 1.1);
        let samples: Vec<GreenValue> = nodes(lo, hi, 32).into_iter().map(f).collect();
        let fit = ChebFit::fit(lo, hi, &samples).expect("converged");
        for i in 0..=20 {
            let z = lo + (hi - lo) * i as f64 / 20.0;
            let (a, b) = (fit.eval(z), f(z));
            assert!((a.value - b.value).norm() < 1e-13);
            assert!((a.gradient_source - b.gradient_source).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_unresolved_function() {
        let f = |z: f64| GreenValue {
            value: Complex64::new(math::cos(60.0 * z), 0.0),
            gradient_source: CVec3::ZERO,
        };
        let samples: Vec<GreenValue> = nodes(-1.0, 1.0, 16).into_iter().map(f).collect();
        assert!(ChebFit::fit(-1.0, 1.0, &samples).is_none());
    }
}
