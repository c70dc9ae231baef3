//! Numerical implicitization of polynomial maps.
//!
//! Given a polynomial map `F` on a source variety `X = V(I)`, this crate
//! computes invariants of the closure of the image without Gröbner bases:
//! its dimension (tangent-space kernels), Hilbert function values and
//! approximate equations (SVD-based interpolation), its degree (monodromy
//! on linear slices plus the trace test), and point membership (parameter
//! homotopy from a pseudo-witness set).
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature enables
//! `std` and tracks independent paths on the rayon thread pool; results are
//! identical with and without it.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod degree;
pub mod dimension;
mod error;
pub mod interpolation;
pub mod linalg;
pub mod membership;
mod par;
pub mod parse;
pub mod poly;
pub mod problem;
pub mod random;
pub mod sampler;
pub mod slice;
pub mod tracker;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Tolerance under which two image points are considered the same point.
/// Shared by monodromy deduplication and membership matching.
pub const POINT_MATCH_TOLERANCE: f64 = 1e-6;

/// Default `SVDGapThreshold`.
pub const DEFAULT_GAP_THRESHOLD: f64 = 200.0;

/// Numerical knobs shared by the high-level computations.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub track: tracker::TrackSettings,
    /// Consecutive singular value ratio that counts as a rank gap.
    pub gap_threshold: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            track: tracker::TrackSettings::default(),
            gap_threshold: DEFAULT_GAP_THRESHOLD,
        }
    }
}
