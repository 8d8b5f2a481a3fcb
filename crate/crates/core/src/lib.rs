//! Spectral and quadrature checks of the planar isoperimetric inequalities
//! of Nehari, Bol, Huber, Alexandrov and Fiala for conformal metrics
//! `e^u|dz|²` on the unit disk.
//!
//! Every checker returns a [`CheckReport`] whose `slack` is non-negative
//! when the inequality holds.

pub mod alexandrov;
pub mod check;
pub mod error;
pub mod fd;
pub mod fiala;
pub mod fourier;
pub mod geometry;
pub mod green;
pub mod grid;
pub mod harmonic;
pub mod level_sets;
pub mod par;
pub mod pole;
pub mod quadrature;
pub mod radial;

pub use check::CheckReport;
pub use error::{Error, Result};
pub use fourier::{FourierCoeffs, TaylorCoeffs};
pub use green::PointMassMeasure;
pub use grid::{PolarGrid, ScalarField};
pub use level_sets::DistributionProfile;
pub use num_complex::Complex64;
pub use par::Exec;
pub use radial::RadialFamily;

/// Crate version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
