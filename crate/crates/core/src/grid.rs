//! Dyadic grids `I_k = { n / 2^k : 0 <= n <= 2^k }`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Dyadic;

pub(crate) fn check_height(t: &Dyadic) -> Result<()> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(Error::HeightOutOfRange(t.clone()));
    }
    Ok(())
}

pub fn grid_point(n: impl Into<BigInt>, k: u32) -> Dyadic {
    Dyadic::new(n, k)
}

/// True when `t` lies on `I_k`.
pub fn on_grid(t: &Dyadic, k: u32) -> bool {
    t.level() <= k
}

/// The grid points of `I_k` immediately at or below and at or above `t`.
/// Both coincide when `t` is on the grid.
pub fn neighbors(t: &Dyadic, k: u32) -> (Dyadic, Dyadic) {
    let lo = t.floor_at_level(k);
    let hi = t.ceil_at_level(k);
    (grid_point(lo, k), grid_point(hi, k))
}

/// Nearest point of `I_k` to `t` and its distance, ties toward the smaller
/// point.
pub fn grid_distance(t: &Dyadic, k: u32) -> Result<(Dyadic, Dyadic)> {
    check_height(t)?;
    let (a, b) = neighbors(t, k);
    let da = t - &a;
    let db = &b - t;
    Ok(if da <= db { (da, a) } else { (db, b) })
}

/// Range `first..=last` of numerators `n` (within `0..=2^k`) whose grid
/// points lie in the interval between `lo` and `hi`, each end open or closed.
pub fn numerators_in(k: u32, lo: &Dyadic, lo_closed: bool, hi: &Dyadic, hi_closed: bool) -> Option<(BigInt, BigInt)> {
    let mut first = lo.ceil_at_level(k);
    if !lo_closed && lo.level() <= k {
        first += 1;
    }
    let mut last = hi.floor_at_level(k);
    if !hi_closed && hi.level() <= k {
        last -= 1;
    }
    let top = BigInt::one() << k as usize;
    if first < BigInt::zero() {
        first = BigInt::zero();
    }
    if last > top {
        last = top;
    }
    (first <= last).then_some((first, last))
}

/// Whether `I_k` meets the given interval.
pub fn meets(k: u32, lo: &Dyadic, lo_closed: bool, hi: &Dyadic, hi_closed: bool) -> bool {
    numerators_in(k, lo, lo_closed, hi, hi_closed).is_some()
}

/// Smallest `k <= max_level` for which `I_k` meets the interval.
pub fn min_level_meeting(lo: &Dyadic, lo_closed: bool, hi: &Dyadic, hi_closed: bool, max_level: u32) -> Option<u32> {
    (0..=max_level).find(|&k| meets(k, lo, lo_closed, hi, hi_closed))
}

/// All `u` in `I_k` with `|t - u| < r`, ascending.
pub fn grid_window(k: u32, t: &Dyadic, r: &Dyadic) -> Result<Vec<Dyadic>> {
    check_height(t)?;
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.clone()));
    }
    let Some((first, last)) = numerators_in(k, &(t - r), false, &(t + r), false) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut n = first;
    while n <= last {
        out.push(grid_point(n.clone(), k));
        n += 1;
    }
    Ok(out)
}
