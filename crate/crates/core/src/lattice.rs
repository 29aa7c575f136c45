//! Periodicity lattices, Rayleigh exponents and Wood-anomaly classification.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::math;

/// Relative band `|gamma_jl| <= tau_rel * k` inside which a mode counts as grazing.
///
/// Near-Wood runs at `k = k_wood +- 1e-6` give `|gamma| / k` of a few `1e-4`,
/// so the band must be wider than that for those runs to see the same grazing set.
pub const DEFAULT_TAU_REL: f64 = 1e-3;

/// Tolerance on `|1 - exp(i gamma d)|` below which a shift is rejected.
pub const SHIFT_TOLERANCE: f64 = 1e-8;

/// A two-dimensional periodicity lattice together with its dual basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub v1: Vec2,
    pub v2: Vec2,
    /// Dual vectors, `v_i* . v_j = delta_ij`.
    pub v1s: Vec2,
    pub v2s: Vec2,
    /// Cell area `|v1 x v2|`.
    pub area: f64,
}

impl Lattice {
    /// The unit square lattice.
    pub fn unit_square() -> Self {
        dual_basis(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).expect("unit square is regular")
    }

    /// Lattice vector `m v1 + n v2`.
    #[inline]
    pub fn point(&self, m: i32, n: i32) -> Vec2 {
        m as f64 * self.v1 + n as f64 * self.v2
    }

    /// Reciprocal vector `2 pi (j v1* + l v2*)` (without the Bloch shift).
    #[inline]
    pub fn reciprocal(&self, j: i32, l: i32) -> Vec2 {
        (2.0 * PI) * (j as f64 * self.v1s + l as f64 * self.v2s)
    }

    /// Cartesian point of the unit-cell coordinates `(a, b)`.
    #[inline]
    pub fn from_cell(&self, a: f64, b: f64) -> Vec2 {
        a * self.v1 + b * self.v2
    }

    /// Unit-cell coordinates `(a, b)` of a Cartesian point.
    #[inline]
    pub fn to_cell(&self, x: Vec2) -> (f64, f64) {
        (x.dot(self.v1s), x.dot(self.v2s))
    }

    /// Shortest primitive period, used as the length scale of guards.
    pub fn period(&self) -> f64 {
        self.v1.norm().min(self.v2.norm())
    }
}

/// Builds the lattice with the dual basis of `v1`, `v2`.
pub fn dual_basis(v1: Vec2, v2: Vec2) -> Result<Lattice> {
    let cross = v1.cross(v2);
    if cross.abs() < 1e-12 * v1.norm() * v2.norm() || !cross.is_finite() {
        return Err(Error::DegenerateBasis { cross: cross.abs() });
    }
    let v1s = (1.0 / cross) * Vec2::new(v2.y, -v2.x);
    let v2s = (1.0 / cross) * Vec2::new(-v1.y, v1.x);
    Ok(Lattice {
        v1,
        v2,
        v1s,
        v2s,
        area: cross.abs(),
    })
}

/// Incident plane wave `exp(i (alpha . x - gamma z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    pub k: f64,
    pub alpha: Vec2,
    pub gamma: f64,
}

impl IncidentWave {
    pub fn new(k: f64, alpha: Vec2) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "wavenumber must be positive and finite",
            });
        }
        let a = alpha.norm();
        if a > k {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "Bloch wavevector longer than k (incident wave would be evanescent)",
            });
        }
        let gamma = math::sqrt((k - a) * (k + a));
        Ok(IncidentWave { k, alpha, gamma })
    }

    pub fn normal(k: f64) -> Result<Self> {
        Self::new(k, Vec2::ZERO)
    }
}

/// One Rayleigh order `(j, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub j: i32,
    pub l: i32,
    /// `2 pi j v1* + 2 pi l v2* + alpha`.
    pub vstar: Vec2,
    pub gamma: Complex64,
}

impl ModeIndex {
    #[inline]
    pub fn is_propagating(&self, tau_rel: f64, k: f64) -> bool {
        self.gamma.im == 0.0 && self.gamma.re > tau_rel * k
    }
}

/// `gamma_jl = sqrt(k^2 - |v*_jl|^2)`, real non-negative or positive imaginary.
pub fn gamma_exponent(j: i32, l: i32, inc: &IncidentWave, lat: &Lattice) -> ModeIndex {
    let vstar = lat.reciprocal(j, l) + inc.alpha;
    let v = vstar.norm();
    // factored form keeps full relative accuracy next to a Wood anomaly
    let g2 = (inc.k - v) * (inc.k + v);
    let gamma = if g2 >= 0.0 {
        Complex64::new(math::sqrt(g2), 0.0)
    } else {
        Complex64::new(0.0, math::sqrt(-g2))
    };
    ModeIndex { j, l, vstar, gamma }
}

/// All modes with `|v*_jl| <= radius`, ordered by `(j, l)`.
pub fn modes_within(inc: &IncidentWave, lat: &Lattice, radius: f64) -> Vec<ModeIndex> {
    let reach = radius + inc.alpha.norm();
    let jmax = math::ceil(reach * lat.v1.norm() / (2.0 * PI)) as i32 + 2;
    let lmax = math::ceil(reach * lat.v2.norm() / (2.0 * PI)) as i32 + 2;
    let mut out = Vec::new();
    for j in -jmax..=jmax {
        for l in -lmax..=lmax {
            let mode = gamma_exponent(j, l, inc, lat);
            if mode.vstar.norm() <= radius {
                out.push(mode);
            }
        }
    }
    out
}

/// Grazing (Wood) orders: `|gamma_jl| <= tau_rel k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WoodSet {
    pub members: Vec<ModeIndex>,
    pub tau_rel: f64,
}

impl WoodSet {
    pub fn empty(tau_rel: f64) -> Self {
        WoodSet {
            members: Vec::new(),
            tau_rel,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, j: i32, l: i32) -> bool {
        self.members.iter().any(|m| m.j == j && m.l == l)
    }
}

fn check_tau(tau_rel: f64) -> Result<()> {
    if !(tau_rel > 0.0 && tau_rel <= 1e-2) {
        return Err(Error::InvalidParameter {
            name: "tau_rel",
            reason: "must lie in (0, 1e-2]",
        });
    }
    Ok(())
}

pub fn wood_set(inc: &IncidentWave, lat: &Lattice, tau_rel: f64) -> Result<WoodSet> {
    check_tau(tau_rel)?;
    let members = modes_within(inc, lat, 2.0 * inc.k)
        .into_iter()
        .filter(|m| m.gamma.norm() <= tau_rel * inc.k)
        .collect();
    Ok(WoodSet { members, tau_rel })
}

/// Orders carrying vertical energy flux; grazing orders are excluded.
pub fn propagating_set(inc: &IncidentWave, lat: &Lattice, tau_rel: f64) -> Result<Vec<ModeIndex>> {
    check_tau(tau_rel)?;
    Ok(modes_within(inc, lat, 2.0 * inc.k)
        .into_iter()
        .filter(|m| m.is_propagating(tau_rel, inc.k))
        .collect())
}

/// Outcome of [`shift_admissible`].
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub offending: Vec<(i32, i32)>,
}

/// Checks `1 - exp(i gamma_jl d) != 0` over all non-grazing orders.
///
/// Evanescent orders can never violate the condition. Grazing orders (inside
/// the default Wood band) are carried by the completion term instead and are
/// not checked.
pub fn shift_admissible(d: f64, inc: &IncidentWave, lat: &Lattice) -> Result<Admissibility> {
    if !(d > 0.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            reason: "shift distance must be positive",
        });
    }
    let offending: Vec<(i32, i32)> = modes_within(inc, lat, inc.k)
        .into_iter()
        .filter(|m| m.gamma.im == 0.0 && m.gamma.re > DEFAULT_TAU_REL * inc.k)
        .filter(|m| (Complex64::new(1.0, 0.0) - math::cis(m.gamma.re * d)).norm() <= SHIFT_TOLERANCE)
        .map(|m| (m.j, m.l))
        .collect();
    Ok(Admissibility {
        admissible: offending.is_empty(),
        offending,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Lattice {
        Lattice::unit_square()
    }

    #[test]
    fn dual_of_unit_and_scaled() {
        let l = unit();
        assert_eq!(l.v1s, Vec2::new(1.0, 0.0));
        assert_eq!(l.v2s, Vec2::new(0.0, 1.0));
        assert_eq!(l.area, 1.0);

        let l = dual_basis(Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(l.v1s.x, 0.5);
        assert_relative_eq!(l.v1s.y, 0.0);
        assert_relative_eq!(l.v2s.y, 1.0);
        assert_relative_eq!(l.area, 2.0);
    }

    #[test]
    fn dual_of_hexagonal() {
        let s3 = 3f64.sqrt();
        let l = dual_basis(Vec2::new(1.0, 0.0), Vec2::new(0.5, s3 / 2.0)).unwrap();
        // v1* = (1, -1/sqrt3), v2* = (0, 2/sqrt3) by 2x2 elimination
        assert_relative_eq!(l.v1s.x, 1.0, epsilon = 1e-15);
        assert_relative_eq!(l.v1s.y, -1.0 / s3, epsilon = 1e-15);
        assert_relative_eq!(l.v2s.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(l.v2s.y, 2.0 / s3, epsilon = 1e-15);
        assert_relative_eq!(l.area, s3 / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_basis_rejected() {
        let e = dual_basis(Vec2::new(1.0, 0.0), Vec2::new(2.0, 1e-14)).unwrap_err();
        assert!(matches!(e, Error::DegenerateBasis { .. }));
    }

    #[test]
    fn gamma_examples() {
        let l = unit();
        let m = gamma_exponent(0, 0, &IncidentWave::normal(1.0).unwrap(), &l);
        assert_eq!(m.gamma, Complex64::new(1.0, 0.0));

        let m = gamma_exponent(1, 0, &IncidentWave::normal(2.0 * PI).unwrap(), &l);
        assert_eq!(m.gamma, Complex64::new(0.0, 0.0));

        let m = gamma_exponent(1, 0, &IncidentWave::normal(1.0).unwrap(), &l);
        assert_eq!(m.gamma.re, 0.0);
        assert_relative_eq!(m.gamma.im, (4.0 * PI * PI - 1.0).sqrt(), max_relative = 1e-14);
    }

    fn sorted(mut v: Vec<(i32, i32)>) -> Vec<(i32, i32)> {
        v.sort();
        v
    }

    #[test]
    fn wood_sets_at_normal_incidence() {
        let l = unit();
        let w = wood_set(&IncidentWave::normal(2.0 * PI).unwrap(), &l, 1e-4).unwrap();
        let got = sorted(w.members.iter().map(|m| (m.j, m.l)).collect());
        assert_eq!(got, vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);

        let w = wood_set(&IncidentWave::normal(2.0 * 2f64.sqrt() * PI).unwrap(), &l, 1e-4).unwrap();
        let got = sorted(w.members.iter().map(|m| (m.j, m.l)).collect());
        assert_eq!(got, vec![(-1, -1), (-1, 1), (1, -1), (1, 1)]);

        for k in [1.0, 6.0] {
            assert!(wood_set(&IncidentWave::normal(k).unwrap(), &l, 1e-4).unwrap().is_empty());
        }
    }

    #[test]
    fn near_wood_shares_grazing_set_with_default_band() {
        let l = unit();
        for dk in [-1e-6, 1e-6] {
            let inc = IncidentWave::normal(2.0 * PI + dk).unwrap();
            assert_eq!(wood_set(&inc, &l, DEFAULT_TAU_REL).unwrap().len(), 4);
        }
    }

    #[test]
    fn tau_out_of_range() {
        let inc = IncidentWave::normal(1.0).unwrap();
        assert!(wood_set(&inc, &unit(), 0.0).is_err());
        assert!(wood_set(&inc, &unit(), 0.1).is_err());
    }

    #[test]
    fn propagating_orders() {
        let l = unit();
        let p = propagating_set(&IncidentWave::normal(1.0).unwrap(), &l, 1e-4).unwrap();
        assert_eq!(p.iter().map(|m| (m.j, m.l)).collect::<Vec<_>>(), vec![(0, 0)]);

        let p = propagating_set(&IncidentWave::normal(2.0 * PI).unwrap(), &l, 1e-4).unwrap();
        assert_eq!(p.iter().map(|m| (m.j, m.l)).collect::<Vec<_>>(), vec![(0, 0)]);

        let p = propagating_set(&IncidentWave::normal(4.0 * PI).unwrap(), &l, 1e-4).unwrap();
        let got = sorted(p.iter().map(|m| (m.j, m.l)).collect());
        let mut want = Vec::new();
        for j in -1..=1 {
            for l in -1..=1 {
                want.push((j, l));
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn shift_admissibility_examples() {
        let l = unit();
        let inc = IncidentWave::normal(2.0 * PI).unwrap();
        assert!(shift_admissible(1.4, &inc, &l).unwrap().admissible);
        let bad = shift_admissible(1.0, &inc, &l).unwrap();
        assert!(!bad.admissible);
        assert_eq!(bad.offending, vec![(0, 0)]);
        let inc = IncidentWave::normal(6.0).unwrap();
        assert!(shift_admissible(2.4, &inc, &l).unwrap().admissible);
    }

    #[test]
    fn incident_wave_validation() {
        assert!(IncidentWave::new(0.0, Vec2::ZERO).is_err());
        assert!(IncidentWave::new(1.0, Vec2::new(2.0, 0.0)).is_err());
        let w = IncidentWave::new(2.0, Vec2::new(1.0, 0.5)).unwrap();
        assert_relative_eq!(w.alpha.norm_sqr() + w.gamma * w.gamma, 4.0, max_relative = 1e-12);
    }
}
