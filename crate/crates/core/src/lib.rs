//! Filament estimation for planar point processes.
//!
//! The pipeline goes: simulate a noisy sample around one or more filament
//! curves ([`sampler`]), estimate the support of the sampling distribution by
//! a union of balls and extract its boundary as an exact arc arrangement
//! ([`support_est`]), convert the boundary into filament estimates via the
//! empirical Euclidean distance transform ([`edt`]) or via midpoints between
//! the two boundary curves ([`medial`]), extract an ordered curve from the
//! fitted values ([`extract`]), optionally strip background clutter first
//! ([`declutter`]), and measure everything against ground truth ([`eval`]).
//!
//! [`geom`] holds the shared exact 2D primitives and [`model`] the ground
//! truth (curve families, tube geometry, analytic distance transform).

pub mod declutter;
pub mod edt;
pub mod error;
pub mod eval;
pub mod extract;
pub mod geom;
pub mod io;
pub mod medial;
pub mod model;
pub mod sampler;
pub mod support_est;

pub use error::{Error, Result};
pub use geom::Point2;
