//! The chart uniqueness constant
//! `lambda = min_{|v| = 1} max_i |dphi_i . v| / d_i`
//! over the last complete block of `n` increments.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Angular grid size for `n = 2`.
pub const ANGLE_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Increment {
    pub delta: Vec<f64>,
    pub distance: f64,
}

impl Increment {
    pub fn new(delta: Vec<f64>, distance: f64) -> Self {
        Self { delta, distance }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaEstimate {
    pub lambda: f64,
    /// The true minimum lies in `[lambda - grid_error, lambda]`.
    pub grid_error: f64,
}

pub fn chart_uniqueness_lambda(increments: &[Increment], n: usize) -> Result<LambdaEstimate> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if increments.len() < n {
        return Err(Error::NoIncrements);
    }
    for inc in increments {
        if inc.delta.len() != n {
            return Err(Error::InvalidParameter("increment length differs from the chart dimension"));
        }
        // also rejects NaN
        if !(inc.distance > 0.0) {
            return Err(Error::NonPositiveDistance);
        }
    }
    let start = (increments.len() / n - 1) * n;
    let block: Vec<Vec<f64>> =
        increments[start..start + n].iter().map(|inc| inc.delta.iter().map(|c| c / inc.distance).collect()).collect();

    if n == 1 {
        let lambda = block.iter().map(|w| w[0].abs()).fold(0.0, f64::max);
        return Ok(LambdaEstimate { lambda, grid_error: 0.0 });
    }

    // v and -v give the same value, so half a turn suffices
    let h = |theta: f64| {
        let (s, c) = libm::sincos(theta);
        block.iter().map(|w| (w[0] * c + w[1] * s).abs()).fold(0.0, f64::max)
    };
    let step = PI / ANGLE_STEPS as f64;
    let lambda = (0..ANGLE_STEPS).map(|j| h(j as f64 * step)).fold(f64::INFINITY, f64::min);
    let lip = block.iter().map(|w| libm::hypot(w[0], w[1])).fold(0.0, f64::max);
    Ok(LambdaEstimate { lambda, grid_error: lip * step / 2.0 })
}
