//! Exact model of the product space `M x [0, 1]` with the jump-level
//! pseudometric, where `M` is the ultrametric space of sequences with
//! `a_i in {1..i}` carrying the factorial island measure.
//!
//! Heights, radii and distances are [`Dyadic`]; measures are [`Rational`].
//! Everything that can be computed exactly is: ball measures, doubling
//! ratios, rectangle covers and porosity certificates are identities, not
//! floating point estimates. Monte Carlo quantities (approximate limit
//! defects) sample exactly and only the final fraction is binary64.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod base;
pub mod cover;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod grid;
pub mod interval;
pub mod jump;

pub use base::{nu, Island, PointM};
pub use cover::{rectangle_cover, Cover, Rectangle};
pub use dyadic::Dyadic;
pub use error::{CoverViolation, Error, ParseError, Result};
pub use field::LipschitzField;
pub use interval::{Interval, IntervalUnion};
pub use jump::{BallDecomposition, SetDescriptor, SpacePoint};

/// Exact rational numbers (measures, ratios).
pub type Rational = num_rational::BigRational;

/// Default truncation depth of the base space.
pub const DEFAULT_DEPTH: usize = 12;
