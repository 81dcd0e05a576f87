//! Numerics for electromagnetic scattering from sources and media with
//! conical corners.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; all IO lives in the companion `conic-em` crate.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod herglotz_checks;
pub mod indicator;
pub mod math;
pub mod quadrature;
pub mod scattering;
pub mod vector;

pub use error::{Error, Result};
pub use geometry::{Background, BaseBody, ConeSpec, CoronalSpec, Polytope, Support};
pub use num_complex::Complex64;
pub use quadrature::QuadratureSpec;
pub use vector::{CVec3, Rotation, Vec3};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
