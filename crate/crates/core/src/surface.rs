//! Doubly periodic graph surfaces `z = f(x~)` and their tensor-product Nyström grid.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::lattice::Lattice;
use crate::math;

/// One term `c cos(2 pi (p a + q b) + phase)` of a harmonic profile in cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub p: i32,
    pub q: i32,
    pub coefficient: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    /// `f = amplitude cos(2 pi a) cos(2 pi b)`.
    CosineProduct,
    Flat,
    /// `f = amplitude * sum_h c_h cos(2 pi (p_h a + q_h b) + phase_h)`.
    CustomHarmonic(Vec<Harmonic>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub amplitude: f64,
    pub lat: Lattice,
}

/// A point of the surface with its upward unit normal and area element
/// per unit of cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub pos: Vec3,
    pub normal: Vec3,
    pub jacobian: f64,
}

impl SurfaceSpec {
    pub fn new(kind: SurfaceKind, amplitude: f64, lat: Lattice) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                reason: "must be finite and non-negative",
            });
        }
        Ok(SurfaceSpec { kind, amplitude, lat })
    }

    pub fn flat(lat: Lattice) -> Self {
        SurfaceSpec {
            kind: SurfaceKind::Flat,
            amplitude: 0.0,
            lat,
        }
    }

    /// `(f, df/da, df/db)` at cell coordinates `(a, b)`.
    pub fn height(&self, a: f64, b: f64) -> (f64, f64, f64) {
        let tau = 2.0 * PI;
        match &self.kind {
            SurfaceKind::Flat => (0.0, 0.0, 0.0),
            SurfaceKind::CosineProduct => {
                let (sa, ca) = math::sin_cos(tau * a);
                let (sb, cb) = math::sin_cos(tau * b);
                let h = self.amplitude;
                (h * ca * cb, -h * tau * sa * cb, -h * tau * ca * sb)
            }
            SurfaceKind::CustomHarmonic(terms) => {
                let mut out = (0.0, 0.0, 0.0);
                for t in terms {
                    let arg = tau * (t.p as f64 * a + t.q as f64 * b) + t.phase;
                    let (s, c) = math::sin_cos(arg);
                    let w = self.amplitude * t.coefficient;
                    out.0 += w * c;
                    out.1 -= w * tau * t.p as f64 * s;
                    out.2 -= w * tau * t.q as f64 * s;
                }
                out
            }
        }
    }

    /// Position, normal and area element at cell coordinates `(a, b)`.
    pub fn point(&self, a: f64, b: f64) -> SurfacePoint {
        let (f, fa, fb) = self.height(a, b);
        let grad = fa * self.lat.v1s + fb * self.lat.v2s;
        let s = math::sqrt(1.0 + grad.norm_sqr());
        let xt = self.lat.from_cell(a, b);
        SurfacePoint {
            pos: xt.with_z(f),
            normal: Vec3::new(-grad.x / s, -grad.y / s, 1.0 / s),
            jacobian: self.lat.area * s,
        }
    }

    /// `(min f, max f)`.
    pub fn bounds(&self) -> (f64, f64) {
        match &self.kind {
            SurfaceKind::Flat => (0.0, 0.0),
            SurfaceKind::CosineProduct => (-self.amplitude, self.amplitude),
            SurfaceKind::CustomHarmonic(_) => {
                let n = 256;
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..n {
                    for j in 0..n {
                        let f = self.height(i as f64 / n as f64, j as f64 / n as f64).0;
                        lo = lo.min(f);
                        hi = hi.max(f);
                    }
                }
                (lo, hi)
            }
        }
    }
}

/// Uniform `N x M` grid over one period, node `(s, t)` at cell coordinates
/// `(s/N, t/M)` and flat index `s M + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub spec: SurfaceSpec,
    pub n: usize,
    pub m: usize,
    pub nodes: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub jacobians: Vec<f64>,
    pub z_plus: f64,
    pub z_minus: f64,
}

impl SurfaceGrid {
    pub fn len(&self) -> usize {
        self.n * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn index(&self, s: usize, t: usize) -> usize {
        s * self.m + t
    }

    /// Cell coordinates of node `i`.
    #[inline]
    pub fn cell(&self, i: usize) -> (f64, f64) {
        ((i / self.m) as f64 / self.n as f64, (i % self.m) as f64 / self.m as f64)
    }

    /// Trapezoid weight (area element over node count) of node `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.jacobians[i] / (self.n * self.m) as f64
    }

    /// Discrete surface area of one period.
    pub fn area(&self) -> f64 {
        self.jacobians.iter().sum::<f64>() / (self.n * self.m) as f64
    }

    pub fn horizontal(&self, i: usize) -> Vec2 {
        self.nodes[i].xy()
    }
}

pub fn build_grid(spec: &SurfaceSpec, n: usize, m: usize) -> Result<SurfaceGrid> {
    if n < 4 || m < 4 || !n.is_multiple_of(2) || !m.is_multiple_of(2) {
        return Err(Error::Resolution { n, m });
    }
    let mut nodes = Vec::with_capacity(n * m);
    let mut normals = Vec::with_capacity(n * m);
    let mut jacobians = Vec::with_capacity(n * m);
    for s in 0..n {
        for t in 0..m {
            let pt = spec.point(s as f64 / n as f64, t as f64 / m as f64);
            nodes.push(pt.pos);
            normals.push(pt.normal);
            jacobians.push(pt.jacobian);
        }
    }
    let (z_minus, z_plus) = spec.bounds();
    Ok(SurfaceGrid {
        spec: spec.clone(),
        n,
        m,
        nodes,
        normals,
        jacobians,
        z_plus,
        z_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cosine_surface() -> SurfaceSpec {
        SurfaceSpec::new(SurfaceKind::CosineProduct, 0.5, Lattice::unit_square()).unwrap()
    }

    #[test]
    fn flat_grid() {
        let g = build_grid(&SurfaceSpec::flat(Lattice::unit_square()), 8, 6).unwrap();
        assert!(g.normals.iter().all(|n| *n == Vec3::E_Z));
        assert!(g.jacobians.iter().all(|&j| j == 1.0));
        assert_eq!(g.area(), 1.0);
    }

    #[test]
    fn crest_and_slope() {
        let g = build_grid(&cosine_surface(), 16, 16).unwrap();
        assert_eq!(g.nodes[0].z, 0.5);
        assert_eq!(g.normals[0], Vec3::E_Z);
        let (_, fx, fy) = cosine_surface().height(0.125, 0.0);
        assert_relative_eq!(fx, -PI * (PI / 4.0).sin(), max_relative = 1e-14);
        assert_eq!(fy, 0.0);
        let i = g.index(2, 0);
        assert_relative_eq!(g.jacobians[i], (1.0 + PI * PI / 2.0).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn grid_invariants() {
        let g = build_grid(&cosine_surface(), 12, 8).unwrap();
        for i in 0..g.len() {
            assert!(g.normals[i].z > 0.0);
            assert_relative_eq!(g.normals[i].norm(), 1.0, max_relative = 1e-14);
            assert!(g.jacobians[i] >= g.spec.lat.area);
            assert!(g.nodes[i].z <= g.z_plus && g.nodes[i].z >= g.z_minus);
        }
        assert!(matches!(build_grid(&cosine_surface(), 3, 8), Err(Error::Resolution { .. })));
        assert!(matches!(build_grid(&cosine_surface(), 6, 7), Err(Error::Resolution { .. })));
    }

    #[test]
    fn normals_match_differences() {
        let s = cosine_surface();
        let h = 1e-5;
        for (a, b) in [(0.1, 0.3), (0.37, 0.81), (0.6, 0.05)] {
            let p = s.point(a, b);
            let fa = (s.height(a + h, b).0 - s.height(a - h, b).0) / (2.0 * h);
            let fb = (s.height(a, b + h).0 - s.height(a, b - h).0) / (2.0 * h);
            let n = Vec3::new(-fa, -fb, 1.0);
            let n = (1.0 / n.norm()) * n;
            assert!((n - p.normal).norm() < 1e-9);
        }
    }

    #[test]
    fn area_converges_spectrally() {
        let s = cosine_surface();
        let fine = build_grid(&s, 128, 128).unwrap().area();
        let errs: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| (build_grid(&s, n, n).unwrap().area() - fine).abs())
            .collect();
        assert!(errs[1] < 0.5 * errs[0] && (errs[2] < 0.5 * errs[1] || errs[2] < 1e-13), "{errs:?}");
    }

    #[test]
    fn custom_harmonic_reproduces_cosine_product() {
        // cos a cos b = (cos(a+b) + cos(a-b))/2
        let terms = vec![
            Harmonic { p: 1, q: 1, coefficient: 0.5, phase: 0.0 },
            Harmonic { p: 1, q: -1, coefficient: 0.5, phase: 0.0 },
        ];
        let c = SurfaceSpec::new(SurfaceKind::CustomHarmonic(terms), 0.5, Lattice::unit_square()).unwrap();
        let r = cosine_surface();
        for (a, b) in [(0.1, 0.2), (0.7, 0.33)] {
            let (x, y) = (c.point(a, b), r.point(a, b));
            assert!((x.pos - y.pos).norm() < 1e-14 && (x.normal - y.normal).norm() < 1e-14);
        }
        let (lo, hi) = c.bounds();
        assert_relative_eq!(hi, 0.5, epsilon = 1e-12);
        assert_relative_eq!(lo, -0.5, epsilon = 1e-12);
    }
}
