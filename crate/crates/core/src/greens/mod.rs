//! Green-function evaluators: free-space and shifted kernels, windowed
//! lattice sums, spectral series and the grazing-mode completion.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::CVec3;
use crate::lattice::{shift_admissible, wood_set, IncidentWave, Lattice, WoodSet, DEFAULT_TAU_REL};

mod free;
mod lattice_sum;
mod spectral;
pub mod window;

pub use free::{free_green, h_function, shifted_green, HProbe};
pub use lattice_sum::{complete_green, qp_green_truncated};
pub(crate) use lattice_sum::{for_each_point_in_disk, shifted_terms, Accum, TermSum};
pub(crate) use spectral::shift_weight;
pub use spectral::{
    grazing_completion, grazing_completion_with_gradient, spectral_complete_green,
    spectral_qp_green_classical, spectral_qp_green_shifted, DEFAULT_SPECTRAL_TOL,
};
pub use window::{chi, fd_coeffs};

/// Absolute guard radius around every pole of the shifted lattice sum.
pub const POLE_GUARD: f64 = 1e-12;

/// Default inner/outer radius ratio of the smooth window.
pub const DEFAULT_WINDOW_C: f64 = 0.5;

/// Kernel value with its gradient with respect to the source point `x'`
/// of `G(x - x')`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreenValue {
    pub value: Complex64,
    pub gradient_source: CVec3,
}

impl GreenValue {
    pub const ZERO: GreenValue = GreenValue {
        value: Complex64::new(0.0, 0.0),
        gradient_source: CVec3::ZERO,
    };

    /// Gradient with respect to the target point `x`.
    pub fn gradient_target(&self) -> CVec3 {
        -self.gradient_source
    }
}

impl Add for GreenValue {
    type Output = GreenValue;
    fn add(self, o: GreenValue) -> GreenValue {
        GreenValue {
            value: self.value + o.value,
            gradient_source: self.gradient_source + o.gradient_source,
        }
    }
}

impl AddAssign for GreenValue {
    fn add_assign(&mut self, o: GreenValue) {
        self.value += o.value;
        self.gradient_source += o.gradient_source;
    }
}

/// Truncation of the spatial lattice sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// Keep lattice points with `|m v1 + n v2| <= A`.
    Hard,
    /// Weight every term by `chi(|x~ + m v1 + n v2| / A)`.
    Smooth,
}

/// Everything needed to evaluate the shifted, windowed, completed Green function.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenParams {
    pub inc: IncidentWave,
    pub lat: Lattice,
    /// Shift order.
    pub p: usize,
    /// Shift distance.
    pub d: f64,
    /// Window radius `A` (outer radius for the smooth window).
    pub radius: f64,
    pub window_c: f64,
    pub window: WindowKind,
    pub wood: WoodSet,
    /// Completion coefficients `b_jl`, aligned with `wood.members`.
    pub completion: Vec<Complex64>,
    coeffs: Vec<f64>,
}

impl GreenParams {
    /// Parameters with the default Wood band, `c = 1/2` and unit completion coefficients.
    pub fn new(inc: IncidentWave, lat: Lattice, p: usize, d: f64, radius: f64, window: WindowKind) -> Result<Self> {
        let wood = wood_set(&inc, &lat, DEFAULT_TAU_REL)?;
        let completion = alloc::vec![Complex64::new(1.0, 0.0); wood.len()];
        let coeffs = fd_coeffs(p)?.into_iter().map(|a| a as f64).collect();
        let gp = GreenParams {
            inc,
            lat,
            p,
            d,
            radius,
            window_c: DEFAULT_WINDOW_C,
            window,
            wood,
            completion,
            coeffs,
        };
        gp.validate()?;
        Ok(gp)
    }

    pub fn with_window_c(mut self, c: f64) -> Result<Self> {
        self.window_c = c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        self.radius = radius;
        self.validate()?;
        Ok(self)
    }

    pub fn with_window(mut self, window: WindowKind) -> Self {
        self.window = window;
        self
    }

    /// Recomputes the grazing set with another relative band; completion
    /// coefficients are reset to one.
    pub fn with_tau_rel(mut self, tau_rel: f64) -> Result<Self> {
        self.wood = wood_set(&self.inc, &self.lat, tau_rel)?;
        self.completion = alloc::vec![Complex64::new(1.0, 0.0); self.wood.len()];
        self.validate()?;
        Ok(self)
    }

    pub fn with_completion(mut self, b: Vec<Complex64>) -> Result<Self> {
        self.completion = b;
        self.validate()?;
        Ok(self)
    }

    /// Finite-difference coefficients as floats.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "A",
                reason: "window radius must be positive",
            });
        }
        if !(self.window_c > 0.0 && self.window_c < 1.0) {
            return Err(Error::InvalidParameter {
                name: "window_c",
                reason: "must lie in (0, 1)",
            });
        }
        if !(self.d > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: "shift distance must be positive",
            });
        }
        if !self.wood.is_empty() && self.p < 3 {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: "grazing orders present: shift order must be at least 3",
            });
        }
        if self.completion.len() != self.wood.len() || self.completion.iter().any(|b| b.norm() == 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: "need one nonzero completion coefficient per grazing order",
            });
        }
        if self.p >= 1 {
            let adm = shift_admissible(self.d, &self.inc, &self.lat)?;
            if !adm.admissible {
                return Err(Error::ShiftNotAdmissible {
                    d: self.d,
                    modes: adm.offending,
                });
            }
        }
        Ok(())
    }
}
