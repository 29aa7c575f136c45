//! Nyström discretization of the periodic boundary integral equations and
//! their solution by GMRES.

mod assembly;
mod interp;
pub mod gmres;
pub mod quadrature;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use assembly::{assemble_from_table, kernel_table, local_part, KernelTable};
pub use gmres::{gmres_solve, DenseMatrix, DensitySolution};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::greens::{complete_green, GreenParams};
use crate::lattice::IncidentWave;
use crate::math;
use crate::postproc::{rayleigh_coefficients, ErrorReport, RayleighSpectrum};
use crate::surface::SurfaceGrid;

/// Default cap on the number of unknowns of the dense system.
pub const DEFAULT_MAX_UNKNOWNS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Sound-soft surface, combined-layer representation.
    Dirichlet,
    /// Sound-hard surface, single-layer representation.
    Neumann,
}

/// Local polar rule about each target: partition-of-unity radius in cell
/// coordinates and node counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarRule {
    pub delta: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for PolarRule {
    fn default() -> Self {
        PolarRule {
            delta: 0.5,
            n_r: 32,
            n_theta: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub bc: BoundaryCondition,
    pub gp: GreenParams,
    pub grid: SurfaceGrid,
    pub xi: f64,
    pub eta: f64,
    pub gmres_tol: f64,
    pub gmres_maxit: usize,
    pub polar: PolarRule,
    pub max_unknowns: usize,
}

impl SolveConfig {
    /// Configuration with couplings `xi = 1`, `eta = -k` and GMRES tolerance `1e-6`.
    pub fn new(bc: BoundaryCondition, gp: GreenParams, grid: SurfaceGrid) -> Result<Self> {
        let k = gp.inc.k;
        let cfg = SolveConfig {
            bc,
            gp,
            grid,
            xi: 1.0,
            eta: -k,
            gmres_tol: 1e-6,
            gmres_maxit: 200,
            polar: PolarRule::default(),
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn inc(&self) -> &IncidentWave {
        &self.gp.inc
    }

    pub fn validate(&self) -> Result<()> {
        if self.xi == 0.0 || self.eta == 0.0 || !(self.eta / self.xi < 0.0) {
            return Err(Error::InvalidParameter {
                name: "eta/xi",
                reason: "couplings must be nonzero with eta/xi < 0",
            });
        }
        if !(self.gmres_tol > 0.0 && self.gmres_tol <= 1e-2) {
            return Err(Error::InvalidParameter {
                name: "gmres_tol",
                reason: "must lie in (0, 1e-2]",
            });
        }
        if self.gmres_maxit == 0 {
            return Err(Error::InvalidParameter {
                name: "gmres_maxit",
                reason: "must be positive",
            });
        }
        let PolarRule { delta, n_r, n_theta } = self.polar;
        if !(delta > 0.0 && delta <= 2.0) || n_r == 0 || n_theta < 4 {
            return Err(Error::InvalidParameter {
                name: "polar",
                reason: "need 0 < delta <= 2, n_r >= 1, n_theta >= 4",
            });
        }
        if self.grid.spec.lat != self.gp.lat {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "surface lattice differs from the Green function lattice",
            });
        }
        if self.grid.len() > self.max_unknowns {
            return Err(Error::TooLarge {
                unknowns: self.grid.len(),
                cap: self.max_unknowns,
            });
        }
        self.gp.validate()
    }
}

/// Periodic kernel between two surface points `x` (target) and `xp` (source)
/// with normals `n` and `np`, using the complete Green function.
#[allow(clippy::too_many_arguments)]
pub fn periodic_kernel(
    x: Vec3,
    n: Vec3,
    xp: Vec3,
    np: Vec3,
    gp: &GreenParams,
    bc: BoundaryCondition,
    xi: f64,
    eta: f64,
) -> Result<Complex64> {
    let g = complete_green(x - xp, gp)?;
    let phase = math::cis(gp.inc.alpha.dot(xp.xy() - x.xy()));
    Ok(assembly::bc_kernel(&g, bc, xi, eta, n, np) * phase)
}

/// Dense Nyström operator for the configuration.
pub fn assemble_operator(cfg: &SolveConfig) -> Result<DenseMatrix> {
    cfg.validate()?;
    let table = kernel_table(&cfg.grid, &cfg.gp, cfg.polar.delta)?;
    assemble_from_table(&table, cfg)
}

/// Right-hand side of the periodic equation at every node.
pub fn rhs(cfg: &SolveConfig) -> Vec<Complex64> {
    let inc = cfg.inc();
    let i = Complex64::new(0.0, 1.0);
    cfg.grid
        .nodes
        .iter()
        .zip(&cfg.grid.normals)
        .map(|(x, nrm)| {
            let e = math::cis(-inc.gamma * x.z);
            match cfg.bc {
                BoundaryCondition::Dirichlet => -e,
                BoundaryCondition::Neumann => {
                    let dot = inc.alpha.x * nrm.x + inc.alpha.y * nrm.y - inc.gamma * nrm.z;
                    -i * dot * e
                }
            }
        })
        .collect()
}

/// Summary of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub k: f64,
    pub n: usize,
    pub m: usize,
    pub radius: f64,
    pub p: usize,
    pub d: f64,
    pub errors: ErrorReport,
}

/// Assembles, solves and post-processes; `reference` is a known `B00` used for `eps1`.
pub fn solve_scattering(
    cfg: &SolveConfig,
    reference: Option<Complex64>,
) -> Result<(DensitySolution, RayleighSpectrum, Report)> {
    let op = assemble_operator(cfg)?;
    solve_with_operator(&op, cfg, reference)
}

/// Same as [`solve_scattering`] with an already assembled operator.
pub fn solve_with_operator(
    op: &DenseMatrix,
    cfg: &SolveConfig,
    reference: Option<Complex64>,
) -> Result<(DensitySolution, RayleighSpectrum, Report)> {
    let b = rhs(cfg);
    let sol = gmres_solve(op, &b, cfg.gmres_tol, cfg.gmres_maxit)?;
    let spec = rayleigh_coefficients(&sol, cfg, None)?;
    let errors = ErrorReport::new(&spec, reference, sol.iterations)?;
    let report = Report {
        k: cfg.gp.inc.k,
        n: cfg.grid.n,
        m: cfg.grid.m,
        radius: cfg.gp.radius,
        p: cfg.gp.p,
        d: cfg.gp.d,
        errors,
    };
    Ok((sol, spec, report))
}
