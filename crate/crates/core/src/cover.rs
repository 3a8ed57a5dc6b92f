//! Approximating a small ball by at most three rectangles
//! `B_M(x, 2^-k_i) x (t_i - r_i, t_i + r_i)` centred on jump levels.
//!
//! `k_1` is the coarsest grid meeting `(t - r/2, t + r/2)` and `t_1` its
//! unique point there. `t_2` (resp. `t_3`) is the point of `I_{k_1 - 1}` in
//! `[t + r/2, t + r)` (resp. `(t - r, t - r/2]`), when there is one, and
//! `k_2`, `k_3` are their levels. Each `r_i = r - |t - t_i|`.
//!
//! Only depths `1..N-1` are resolved by a truncation of depth `N`, so the
//! smallness conditions are checked on those levels and `k_1` must be one
//! of them.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::base::{Island, PointM};
use crate::error::{CoverViolation, Error, Result};
use crate::grid::{min_level_meeting, numerators_in};
use crate::interval::{Interval, IntervalUnion};
use crate::jump::{BallDecomposition, SpacePoint};
use crate::{Dyadic, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    island: Island,
    center: Dyadic,
    half_width: Dyadic,
}

impl Rectangle {
    pub fn new(island: Island, center: Dyadic, half_width: Dyadic) -> Result<Self> {
        if !half_width.is_positive() {
            return Err(Error::NonPositiveRadius(half_width));
        }
        if center.level() as usize > island.level() {
            return Err(Error::InvalidParameter("rectangle centre must lie on the island's grid"));
        }
        Ok(Self { island, center, half_width })
    }

    pub fn island(&self) -> &Island {
        &self.island
    }

    pub fn level(&self) -> usize {
        self.island.level()
    }

    pub fn center(&self) -> &Dyadic {
        &self.center
    }

    pub fn half_width(&self) -> &Dyadic {
        &self.half_width
    }

    pub fn interval(&self) -> Interval {
        Interval::centered(&self.center, &self.half_width).expect("positive half width")
    }

    /// `nu_k * |(u - h, u + h) n [0, 1]|`.
    pub fn measure(&self) -> Rational {
        let len = IntervalUnion::single(self.interval()).clip(&Dyadic::zero(), &Dyadic::one()).total_length();
        self.island.measure() * len.to_rational()
    }
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub rectangles: Vec<Rectangle>,
    pub k1: usize,
    pub ball_measure: Rational,
    pub covered_measure: Rational,
    /// `(mu(B) - mu(U R_i)) / mu(B)`.
    pub uncovered_fraction: Rational,
    /// `2 nu_{k_1+1} / nu_{k_1} = 2 / (k_1 + 1)`.
    pub bound: Rational,
    /// Every rectangle lies inside the ball (checked section by section).
    pub contained: bool,
}

impl Cover {
    pub fn meets(&self, epsilon: &Rational) -> bool {
        self.contained
            && self.rectangles.len() <= 3
            && self.uncovered_fraction < *epsilon
            && self.uncovered_fraction <= self.bound
    }
}

/// Checks the smallness conditions for `(center, r, epsilon)`.
pub fn check_admissible(center: &SpacePoint, r: &Dyadic, epsilon: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.clone()));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    let max_level = center.depth().saturating_sub(1) as u32;
    let t = center.height();
    if t.level() <= max_level {
        return Err(Error::Inadmissible(CoverViolation::HeightOnGrid(t.level())));
    }
    let k_min = min_level_meeting(&(t - r), false, &(t + r), false, max_level)
        .ok_or(Error::Inadmissible(CoverViolation::TooShallow(max_level as usize)))?;
    if k_min == 0 {
        return Err(Error::Inadmissible(CoverViolation::MeetsLevelZero));
    }
    // levels meeting the window are >= k_min, and nu_{k+1}/nu_k = 1/(k+1) decreases
    let ratio = Rational::new(1.into(), (k_min + 1).into());
    if ratio >= epsilon / Rational::from_integer(2.into()) {
        return Err(Error::Inadmissible(CoverViolation::RatioTooLarge { level: k_min as usize }));
    }
    Ok(())
}

fn unique_point(k: u32, lo: &Dyadic, lo_closed: bool, hi: &Dyadic, hi_closed: bool) -> Option<Dyadic> {
    let (first, last) = numerators_in(k, lo, lo_closed, hi, hi_closed)?;
    debug_assert_eq!(first, last, "interval shorter than the grid spacing holds one point");
    Some(Dyadic::new(first, k))
}

fn rectangle_at(x: &PointM, t: &Dyadic, r: &Dyadic, u: Dyadic) -> Result<Rectangle> {
    let half = r - &(t - &u).abs();
    Rectangle::new(x.island(u.level() as usize)?, u, half)
}

/// Builds the cover and measures exactly what it leaves out.
pub fn rectangle_cover(center: &SpacePoint, r: &Dyadic, epsilon: &Rational) -> Result<Cover> {
    check_admissible(center, r, epsilon)?;
    let max_level = center.depth() as u32 - 1;
    let t = center.height();
    let x = center.base();
    let half = r.half();

    let k1 = min_level_meeting(&(t - &half), false, &(t + &half), false, max_level)
        .ok_or(Error::Inadmissible(CoverViolation::TooShallow(max_level as usize)))?;
    let t1 = unique_point(k1, &(t - &half), false, &(t + &half), false).expect("k1 meets the window");
    let mut rectangles = alloc::vec![rectangle_at(x, t, r, t1)?];
    let coarser = k1 - 1;
    if let Some(t2) = unique_point(coarser, &(t + &half), true, &(t + r), false) {
        rectangles.push(rectangle_at(x, t, r, t2)?);
    }
    if let Some(t3) = unique_point(coarser, &(t - r), false, &(t - &half), true) {
        rectangles.push(rectangle_at(x, t, r, t3)?);
    }

    let ball = BallDecomposition::new(center, r)?;
    let unit = |u: &IntervalUnion| u.clip(&Dyadic::zero(), &Dyadic::one());
    let mut covered = Rational::zero();
    let mut contained = true;
    for section in ball.sections() {
        // rectangles whose island contains bases at this agreement depth
        let active: Vec<&Rectangle> = rectangles.iter().filter(|rect| rect.level() <= section.level).collect();
        let heights: IntervalUnion = active.iter().map(|rect| rect.interval()).collect();
        covered += &section.weight * unit(&heights).total_length().to_rational();
        contained &= active.iter().all(|rect| section.raw.contains_interval(&rect.interval()));
    }
    let ball_measure = ball.measure();
    let uncovered_fraction = (&ball_measure - &covered) / &ball_measure;
    Ok(Cover {
        rectangles,
        k1: k1 as usize,
        ball_measure,
        covered_measure: covered,
        uncovered_fraction,
        bound: Rational::new(2.into(), (k1 + 1).into()),
        contained,
    })
}

/// Largest `r = 2^-j`, `j <= max_exponent`, that passes [`check_admissible`].
pub fn find_admissible_radius(center: &SpacePoint, epsilon: &Rational, max_exponent: u32) -> Option<Dyadic> {
    (1..=max_exponent).map(Dyadic::pow2_inv).find(|r| check_admissible(center, r, epsilon).is_ok())
}
