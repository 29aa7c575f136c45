use alloc::vec::Vec;

/// Errors raised by the evaluators and the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate lattice basis: |v1 x v2| = {cross:e} below 1e-12 |v1||v2|")]
    DegenerateBasis { cross: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("finite-difference order {0} exceeds the supported maximum of 12")]
    OrderTooLarge(usize),

    #[error("evaluation point lies within {radius:e} of a Green-function pole")]
    Singularity { radius: f64 },

    #[error("shift d = {d} is not admissible: 1 - exp(i gamma d) vanishes for modes {modes:?}")]
    ShiftNotAdmissible { d: f64, modes: Vec<(i32, i32)> },

    #[error("Wood configuration: {0} grazing mode(s) make the classical sum undefined")]
    WoodFrequency(usize),

    #[error("|z| = {z:e} is too small for the spectral series to converge in reasonable time")]
    SlowConvergence { z: f64 },

    #[error("spectral shifted form requires z > 0, got {0}")]
    Domain(f64),

    #[error("grid resolution {n}x{m} is too coarse (need even counts >= 4)")]
    Resolution { n: usize, m: usize },

    #[error("problem with {unknowns} unknowns exceeds the cap of {cap}")]
    TooLarge { unknowns: usize, cap: usize },

    #[error("GMRES did not converge in {iterations} iterations (best relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("specular order is not propagating (gamma_00 = {0:e}); energy defect undefined")]
    DegenerateIncidence(f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
