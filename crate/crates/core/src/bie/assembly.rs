//! Nyström assembly: windowed lattice sums for the smooth part of every
//! target/source pair, and a polar rule for the local singular part.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::interp::{self, ChebFit};
use super::quadrature::{gauss_legendre_unit, periodic_cardinal};
use super::{BoundaryCondition, PolarRule, SolveConfig};
use crate::bie::gmres::DenseMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::greens::window::{chi_with_derivative, partition_of_unity};
use crate::greens::{
    for_each_point_in_disk, free_green, grazing_completion_with_gradient, shifted_terms, Accum, GreenParams,
    GreenValue, TermSum, WindowKind, POLE_GUARD,
};
use crate::math;
use crate::surface::SurfaceGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smooth part of the complete Green function for every ordered node pair,
/// row-major in `(target, source)`.
///
/// Every image of the source within cell-coordinate distance `delta` of the
/// target has its direct (`q = 0`) term tapered by `1 - eta(rho / delta)`;
/// the remaining `eta` share is integrated by the local polar rule.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub size: usize,
    pub values: Vec<GreenValue>,
}

impl KernelTable {
    #[inline]
    pub fn get(&self, target: usize, source: usize) -> &GreenValue {
        &self.values[target * self.size + source]
    }
}

/// One lattice image for a fixed horizontal offset.
struct Image {
    off: Vec2,
    rho2: f64,
    weight: Complex64,
    phase: Complex64,
    dw: Vec2,
    /// Factor on the direct term; below `1` for images inside the polar disk.
    direct: f64,
}

/// Images for the cell offset `(fa, fb)` of target minus source.
fn images_for_offset(gp: &GreenParams, fa: f64, fb: f64, delta: f64) -> Vec<Image> {
    let xt = gp.lat.from_cell(fa, fb);
    let mut out = Vec::new();
    let inv_a = 1.0 / gp.radius;
    let (center, inclusive) = match gp.window {
        WindowKind::Hard => (Vec2::ZERO, true),
        WindowKind::Smooth => (xt, false),
    };
    for_each_point_in_disk(&gp.lat, center, gp.radius, inclusive, |point| {
        let Some((m, n, v)) = point else { return };
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
        // image m v1 + n v2 of the source sits at cell offset (-fa - m, -fb - n)
        let rho = math::hypot(fa + m as f64, fb + n as f64);
        let direct = if rho < delta { 1.0 - partition_of_unity(rho / delta) } else { 1.0 };
        out.push(Image {
            off,
            rho2,
            weight: phase * w,
            phase,
            dw,
            direct,
        });
    });
    out
}

/// Sum over the images of one offset at vertical separation `z`.
fn sum_images(images: &[Image], z: f64, gp: &GreenParams) -> Result<GreenValue> {
    let k = gp.inc.k;
    let coeffs = gp.coeffs();
    let mut acc = Accum::default();
    let mut row = Accum::default();
    for (idx, im) in images.iter().enumerate() {
        let t = if im.direct == 1.0 {
            shifted_terms(im.rho2, z, k, gp.d, coeffs)
        } else {
            // direct term scaled by the taper, shifted terms untouched
            let mut t = if coeffs.len() > 1 {
                shifted_terms(im.rho2, z + gp.d, k, gp.d, &coeffs[1..])
            } else {
                Some(TermSum::default())
            };
            if im.direct > 0.0 {
                let d = shifted_terms(im.rho2, z, k, gp.d, &[im.direct]);
                t = match (t, d) {
                    (Some(mut a), Some(b)) => {
                        a.value += b.value;
                        a.radial_xy += b.radial_xy;
                        a.radial_z += b.radial_z;
                        Some(a)
                    }
                    _ => None,
                };
            }
            t
        };
        let t = t.ok_or(Error::Singularity { radius: POLE_GUARD })?;
        row.add(&t, im.off, im.weight, im.dw, im.phase);
        if idx % 64 == 63 {
            acc.merge(&mut row);
        }
    }
    acc.merge(&mut row);
    Ok(acc.finish())
}

/// Images closer than this many periods are summed exactly for every pair.
const NEAR_RADIUS: f64 = 2.0;

/// Far images of one offset, either interpolated in `z` or summed per pair.
enum FarPart {
    Constant(GreenValue),
    Fit(ChebFit),
    Direct,
}

impl FarPart {
    fn new(far: &[Image], pairs: &[(usize, usize, Vec3)], gp: &GreenParams) -> Result<FarPart> {
        if far.is_empty() || pairs.is_empty() {
            return Ok(FarPart::Constant(GreenValue::ZERO));
        }
        let lo = pairs.iter().map(|p| p.2.z).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|p| p.2.z).fold(f64::NEG_INFINITY, f64::max);
        if hi == lo {
            return Ok(FarPart::Constant(sum_images(far, lo, gp)?));
        }
        if pairs.len() <= 17 {
            return Ok(FarPart::Direct);
        }
        let coarse: Vec<GreenValue> = interp::nodes(lo, hi, 16)
            .into_iter()
            .map(|z| sum_images(far, z, gp))
            .collect::<Result<_>>()?;
        if let Some(fit) = ChebFit::fit(lo, hi, &coarse) {
            return Ok(FarPart::Fit(fit));
        }
        if pairs.len() <= 33 {
            return Ok(FarPart::Direct);
        }
        // nested grid: even nodes of the finer rule are the coarse nodes
        let fine_z = interp::nodes(lo, hi, 32);
        let mut fine = Vec::with_capacity(33);
        for (k, z) in fine_z.into_iter().enumerate() {
            fine.push(if k % 2 == 0 { coarse[k / 2] } else { sum_images(far, z, gp)? });
        }
        Ok(ChebFit::fit(lo, hi, &fine).map_or(FarPart::Direct, FarPart::Fit))
    }

    fn eval(&self, far: &[Image], z: f64, gp: &GreenParams) -> Result<GreenValue> {
        match self {
            FarPart::Constant(g) => Ok(*g),
            FarPart::Fit(fit) => Ok(fit.eval(z)),
            FarPart::Direct => sum_images(far, z, gp),
        }
    }
}

/// Smooth kernel table for the grid.
pub fn kernel_table(grid: &SurfaceGrid, gp: &GreenParams, delta: f64) -> Result<KernelTable> {
    let (n, m) = (grid.n, grid.m);
    let size = n * m;
    let offsets: Vec<(i64, i64)> = (-(n as i64) + 1..n as i64)
        .flat_map(|ds| (-(m as i64) + 1..m as i64).map(move |dt| (ds, dt)))
        .collect();

    let per_offset = |&(ds, dt): &(i64, i64)| -> Result<Vec<(usize, GreenValue)>> {
        let (fa, fb) = (ds as f64 / n as f64, dt as f64 / m as f64);
        let images = images_for_offset(gp, fa, fb, delta);
        let r_near2 = NEAR_RADIUS * NEAR_RADIUS * gp.lat.period() * gp.lat.period();
        let (near, far): (Vec<Image>, Vec<Image>) = images.into_iter().partition(|im| im.rho2 < r_near2 || im.direct < 1.0);

        let mut pairs = Vec::new();
        let s_range = (ds.max(0) as usize)..((n as i64 + ds.min(0)) as usize);
        for si in s_range {
            let sj = (si as i64 - ds) as usize;
            let t_range = (dt.max(0) as usize)..((m as i64 + dt.min(0)) as usize);
            for ti in t_range {
                let tj = (ti as i64 - dt) as usize;
                let (i, j) = (grid.index(si, ti), grid.index(sj, tj));
                pairs.push((i, j, grid.nodes[i] - grid.nodes[j]));
            }
        }
        let far_part = FarPart::new(&far, &pairs, gp)?;
        let mut out = Vec::with_capacity(pairs.len());
        for &(i, j, x) in &pairs {
            let mut g = sum_images(&near, x.z, gp)? + far_part.eval(&far, x.z, gp)?;
            if !gp.wood.is_empty() {
                g += grazing_completion_with_gradient(x.xy(), x.z, gp);
            }
            out.push((i * size + j, g));
        }
        Ok(out)
    };

    #[cfg(feature = "parallel")]
    let chunks: Vec<Result<Vec<(usize, GreenValue)>>> = {
        use rayon::prelude::*;
        offsets.par_iter().map(per_offset).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let chunks: Vec<Result<Vec<(usize, GreenValue)>>> = offsets.iter().map(per_offset).collect();

    let mut values = vec![GreenValue::ZERO; size * size];
    for chunk in chunks {
        for (idx, g) in chunk? {
            values[idx] = g;
        }
    }
    Ok(KernelTable { size, values })
}

/// Kernel of the chosen boundary condition given the Green value of `x - x'`.
#[inline]
pub(crate) fn bc_kernel(g: &GreenValue, bc: BoundaryCondition, xi: f64, eta: f64, n_target: Vec3, n_source: Vec3) -> Complex64 {
    match bc {
        BoundaryCondition::Dirichlet => I * eta * g.value + xi * g.gradient_source.dot_real(n_source),
        BoundaryCondition::Neumann => -g.gradient_source.dot_real(n_target),
    }
}

/// Local correction rows: the `eta`-weighted direct term integrated in polar
/// coordinates about each target, spread onto the nodes by trigonometric
/// interpolation of the density.
fn add_local_part(op: &mut DenseMatrix, cfg: &SolveConfig) -> Result<()> {
    let grid = &cfg.grid;
    let gp = &cfg.gp;
    let PolarRule { delta, n_r, n_theta } = cfg.polar;
    let (n, m) = (grid.n, grid.m);
    let (xr, wr) = gauss_legendre_unit(n_r);
    let dtheta = 2.0 * PI / n_theta as f64;
    let dirs: Vec<(f64, f64)> = (0..n_theta).map(|k| math::sin_cos(k as f64 * dtheta)).collect();

    let row_for = |i: usize| -> Result<Vec<Complex64>> {
        let (ai, bi) = grid.cell(i);
        let target = grid.nodes[i];
        let nt = grid.normals[i];
        // coefficient per (s, t) accumulated as sum_p c_p La_p[s] Lb_p[t]
        let mut row = vec![Complex64::new(0.0, 0.0); n * m];
        let mut la = vec![0.0; n];
        let mut lb = vec![0.0; m];
        for (r, w) in xr.iter().zip(&wr) {
            let rho = delta * r;
            let eta_loc = partition_of_unity(*r);
            if eta_loc == 0.0 {
                continue;
            }
            let radial_weight = delta * w * rho * eta_loc * dtheta;
            for &(s, c) in &dirs {
                let (a, b) = (ai + rho * c, bi + rho * s);
                let pt = grid.spec.point(a, b);
                let g = free_green(target - pt.pos, gp.inc.k)?;
                let phase = math::cis(gp.inc.alpha.dot(pt.pos.xy() - target.xy()));
                let kval = bc_kernel(&g, cfg.bc, cfg.xi, cfg.eta, nt, pt.normal);
                let coef = kval * phase * (radial_weight * pt.jacobian);
                for (sx, l) in la.iter_mut().enumerate() {
                    *l = periodic_cardinal(a - sx as f64 / n as f64, n);
                }
                for (tx, l) in lb.iter_mut().enumerate() {
                    *l = periodic_cardinal(b - tx as f64 / m as f64, m);
                }
                for (sx, &lax) in la.iter().enumerate() {
                    if lax == 0.0 {
                        continue;
                    }
                    let ca = coef * lax;
                    let dst = &mut row[sx * m..(sx + 1) * m];
                    for (d, &lbt) in dst.iter_mut().zip(&lb) {
                        *d += ca * lbt;
                    }
                }
            }
        }
        Ok(row)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<Vec<Complex64>>> = {
        use rayon::prelude::*;
        (0..grid.len()).into_par_iter().map(row_for).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<Vec<Complex64>>> = (0..grid.len()).map(row_for).collect();

    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        for (d, v) in op.row_mut(i).iter_mut().zip(row) {
            *d += v;
        }
    }
    Ok(())
}

/// Builds the dense Nyström operator from a precomputed smooth kernel table.
pub fn assemble_from_table(table: &KernelTable, cfg: &SolveConfig) -> Result<DenseMatrix> {
    let grid = &cfg.grid;
    let size = grid.len();
    if table.size != size {
        return Err(Error::InvalidParameter {
            name: "table",
            reason: "kernel table does not match the grid",
        });
    }
    let mut op = DenseMatrix::zeros(size, size);
    let diag = match cfg.bc {
        BoundaryCondition::Dirichlet => 0.5 * cfg.xi,
        BoundaryCondition::Neumann => -0.5,
    };
    let alpha = cfg.gp.inc.alpha;
    for i in 0..size {
        let xi_t = grid.horizontal(i);
        let nt = grid.normals[i];
        let row = op.row_mut(i);
        for (j, entry) in row.iter_mut().enumerate() {
            let g = table.get(i, j);
            let phase = math::cis(alpha.dot(grid.horizontal(j) - xi_t));
            *entry = bc_kernel(g, cfg.bc, cfg.xi, cfg.eta, nt, grid.normals[j]) * phase * grid.weight(j);
        }
        row[i] += diag;
    }
    add_local_part(&mut op, cfg)?;
    Ok(op)
}

/// Local-part-only operator rows (testing aid): the polar correction for the
/// given configuration without smooth part or identity term.
pub fn local_part(cfg: &SolveConfig) -> Result<DenseMatrix> {
    let size = cfg.grid.len();
    let mut op = DenseMatrix::zeros(size, size);
    add_local_part(&mut op, cfg)?;
    Ok(op)
}
