//! Quasi-periodic Helmholtz Green functions for doubly periodic gratings that
//! stay well defined at Wood anomalies, and a Nyström boundary-integral solver
//! built on them.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; enable `libm` in that case for the transcendental functions.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature");

extern crate alloc;

pub mod bie;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod lattice;
pub mod math;
pub mod postproc;
pub mod surface;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::{CVec3, Vec2, Vec3};
pub use greens::{GreenParams, GreenValue, WindowKind};
pub use lattice::{IncidentWave, Lattice, ModeIndex, WoodSet};
pub use num_complex::Complex64;
pub use surface::{build_grid, SurfaceGrid, SurfaceKind, SurfaceSpec};
