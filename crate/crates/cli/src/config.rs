//! Run configuration: a TOML document with defaults for every optional field.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use qpgf_core::bie::{BoundaryCondition, PolarRule, SolveConfig, DEFAULT_MAX_UNKNOWNS};
use qpgf_core::surface::Harmonic;
use qpgf_core::{
    build_grid, Complex64, GreenParams, IncidentWave, Lattice, SurfaceKind, SurfaceSpec, Vec2, WindowKind,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Mode {
    #[serde(rename = "solve")]
    #[value(name = "solve")]
    Solve,
    #[serde(rename = "sweep_A")]
    #[value(name = "sweep_A")]
    SweepA,
    #[serde(rename = "sweep_k")]
    #[value(name = "sweep_k")]
    SweepK,
    #[serde(rename = "green_conv")]
    #[value(name = "green_conv")]
    GreenConv,
    #[serde(rename = "make_ref")]
    #[value(name = "make_ref")]
    MakeRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Hard,
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Flat,
    CosineProduct,
    CustomHarmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Output directory, relative to the configuration file.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Reference file for `eps1`, relative to the configuration file.
    #[serde(default)]
    pub reference: Option<PathBuf>,
    pub problem: Problem,
    #[serde(default)]
    pub surface: Surface,
    #[serde(default)]
    pub green: Green,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub green_conv: GreenConv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub k: f64,
    #[serde(default)]
    pub alpha: [f64; 2],
    #[serde(default = "default_bc")]
    pub bc: Bc,
    #[serde(default = "default_v1")]
    pub v1: [f64; 2],
    #[serde(default = "default_v2")]
    pub v2: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicTerm {
    pub p: i32,
    pub q: i32,
    pub coefficient: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Surface {
    pub kind: Shape,
    pub amplitude: f64,
    pub harmonics: Vec<HarmonicTerm>,
    pub n: usize,
    pub m: usize,
}

impl Default for Surface {
    fn default() -> Self {
        Surface {
            kind: Shape::CosineProduct,
            amplitude: 0.5,
            harmonics: Vec::new(),
            n: 16,
            m: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Green {
    pub p: usize,
    pub d: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub window: Window,
    pub window_c: f64,
    pub tau_rel: f64,
    /// Completion coefficients `[re, im]` for the grazing orders, in `(j, l)` order.
    pub completion: Option<Vec<[f64; 2]>>,
}

impl Default for Green {
    fn default() -> Self {
        Green {
            p: 0,
            d: 1.4,
            a: 60.0,
            window: Window::Smooth,
            window_c: qpgf_core::greens::DEFAULT_WINDOW_C,
            tau_rel: qpgf_core::lattice::DEFAULT_TAU_REL,
            completion: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver {
    pub xi: f64,
    /// Defaults to `-k`.
    pub eta: Option<f64>,
    pub gmres_tol: f64,
    pub gmres_maxit: usize,
    pub delta: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub max_unknowns: usize,
}

impl Default for Solver {
    fn default() -> Self {
        let polar = PolarRule::default();
        Solver {
            xi: 1.0,
            eta: None,
            gmres_tol: 1e-6,
            gmres_maxit: 200,
            delta: polar.delta,
            n_r: polar.n_r,
            n_theta: polar.n_theta,
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep {
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GreenConv {
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(rename = "reference_A")]
    pub reference_a: f64,
    /// Evaluation points `[x, y, z]`; defaults to a fixed set of ten.
    pub points: Vec<[f64; 3]>,
}

impl Default for GreenConv {
    fn default() -> Self {
        GreenConv {
            a: vec![40.0, 80.0, 160.0, 320.0, 640.0],
            reference_a: 1280.0,
            points: Vec::new(),
        }
    }
}

fn default_mode() -> Mode {
    Mode::Solve
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_bc() -> Bc {
    Bc::Dirichlet
}
fn default_v1() -> [f64; 2] {
    [1.0, 0.0]
}
fn default_v2() -> [f64; 2] {
    [0.0, 1.0]
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    /// Checks the sweep lists the chosen mode needs.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match mode {
            Mode::SweepA if self.sweep.a.is_empty() => bail!("sweep_A needs a nonempty [sweep] A list"),
            Mode::SweepK if self.sweep.k.is_empty() => bail!("sweep_k needs a nonempty [sweep] k list"),
            Mode::GreenConv if self.green_conv.a.len() < 3 => bail!("green_conv needs at least three A values"),
            _ => Ok(()),
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        let [a, b] = self.problem.v1;
        let [c, d] = self.problem.v2;
        Ok(qpgf_core::lattice::dual_basis(Vec2::new(a, b), Vec2::new(c, d))?)
    }

    pub fn surface_spec(&self) -> Result<SurfaceSpec> {
        let lat = self.lattice()?;
        let s = &self.surface;
        let kind = match s.kind {
            Shape::Flat => return Ok(SurfaceSpec::flat(lat)),
            Shape::CosineProduct => SurfaceKind::CosineProduct,
            Shape::CustomHarmonic => {
                if s.harmonics.is_empty() {
                    bail!("custom_harmonic surface needs at least one harmonic");
                }
                SurfaceKind::CustomHarmonic(
                    s.harmonics
                        .iter()
                        .map(|h| Harmonic {
                            p: h.p,
                            q: h.q,
                            coefficient: h.coefficient,
                            phase: h.phase,
                        })
                        .collect(),
                )
            }
        };
        Ok(SurfaceSpec::new(kind, s.amplitude, lat)?)
    }

    /// Green-function parameters at wavenumber `k` and window radius `a`.
    pub fn green_params(&self, k: f64, a: f64) -> Result<GreenParams> {
        let lat = self.lattice()?;
        let [ax, ay] = self.problem.alpha;
        let inc = IncidentWave::new(k, Vec2::new(ax, ay))?;
        let g = &self.green;
        let window = match g.window {
            Window::Hard => WindowKind::Hard,
            Window::Smooth => WindowKind::Smooth,
        };
        let mut gp = GreenParams::new(inc, lat, g.p, g.d, a, window)
            .with_context(|| format!("Green function parameters at k = {k}, A = {a}"))?
            .with_window_c(g.window_c)?;
        if g.tau_rel != qpgf_core::lattice::DEFAULT_TAU_REL {
            gp = gp.with_tau_rel(g.tau_rel)?;
        }
        if let Some(b) = &g.completion {
            gp = gp.with_completion(b.iter().map(|&[re, im]| Complex64::new(re, im)).collect())?;
        }
        Ok(gp)
    }

    pub fn solve_config(&self, k: f64, a: f64) -> Result<SolveConfig> {
        let gp = self.green_params(k, a)?;
        let grid = build_grid(&self.surface_spec()?, self.surface.n, self.surface.m)?;
        let s = &self.solver;
        let cfg = SolveConfig {
            bc: self.problem.bc.into(),
            gp,
            grid,
            xi: s.xi,
            eta: s.eta.unwrap_or(-k),
            gmres_tol: s.gmres_tol,
            gmres_maxit: s.gmres_maxit,
            polar: PolarRule {
                delta: s.delta,
                n_r: s.n_r,
                n_theta: s.n_theta,
            },
            max_unknowns: s.max_unknowns,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
