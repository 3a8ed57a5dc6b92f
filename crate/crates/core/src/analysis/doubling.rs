//! Ball growth at scales where the centre's height avoids the grid.
//!
//! With `E_n = { t : dist(t, I_n) >= 2^-(n+2) }`, the ball of radius
//! `2^-(n+2)` about `(x, t)` stays inside the level-`(n+1)` island, so its
//! measure is at most `nu_{n+1} 2^-(n+1)`, while the ball of radius `2^-n`
//! contains a level-`n` rectangle of measure `nu_n 2^-n`. Their ratio is
//! therefore at least `2 nu_n / nu_{n+1} = 2(n+1)`.

use alloc::vec::Vec;

use crate::base::PointM;
use crate::error::{Error, Result};
use crate::grid::grid_distance;
use crate::jump::{ball_measure, SpacePoint};
use crate::{Dyadic, Rational};

/// `t in E_k`, i.e. `dist(t, I_k) >= 2^-(k+2)`.
pub fn is_in_ek(t: &Dyadic, k: u32) -> Result<bool> {
    let (dist, _) = grid_distance(t, k)?;
    Ok(dist >= Dyadic::pow2_inv(k + 2))
}

/// `mu(B(center, c r)) / mu(B(center, r))`.
pub fn doubling_ratio(center: &SpacePoint, r: &Dyadic, c: &Dyadic) -> Result<Rational> {
    if !c.is_positive() {
        return Err(Error::InvalidParameter("enlargement factor must be positive"));
    }
    let small = ball_measure(center, r)?;
    let large = ball_measure(center, &(c * r))?;
    Ok(large / small)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    /// `t` is within `2^-(n+2)` of `I_n`.
    NotInEk,
    /// `n + 1` exceeds the truncation depth, so the level-`(n+1)` island is
    /// not resolved.
    BeyondDepth,
}

impl SkipReason {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::NotInEk => "height not in E_n",
            Self::BeyondDepth => "n+1 exceeds truncation depth",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonDoublingValues {
    pub level: u32,
    /// `2^-(n+2)`.
    pub small_radius: Dyadic,
    /// `2^-n`.
    pub large_radius: Dyadic,
    pub small_measure: Rational,
    pub large_measure: Rational,
    pub ratio: Rational,
    /// `2(n+1)`.
    pub lower_bound: Rational,
}

impl NonDoublingValues {
    pub fn holds(&self) -> bool {
        self.ratio >= self.lower_bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonDoublingRow {
    Evaluated(NonDoublingValues),
    Skipped { level: u32, reason: SkipReason },
}

impl NonDoublingRow {
    pub fn level(&self) -> u32 {
        match self {
            Self::Evaluated(v) => v.level,
            Self::Skipped { level, .. } => *level,
        }
    }

    pub fn values(&self) -> Option<&NonDoublingValues> {
        match self {
            Self::Evaluated(v) => Some(v),
            Self::Skipped { .. } => None,
        }
    }
}

/// One row per requested level, in input order.
pub fn non_doubling_scan(x: &PointM, t: &Dyadic, levels: &[u32]) -> Result<Vec<NonDoublingRow>> {
    let center = SpacePoint::new(x.clone(), t.clone())?;
    levels
        .iter()
        .map(|&n| {
            if n as usize + 1 > x.depth() {
                return Ok(NonDoublingRow::Skipped { level: n, reason: SkipReason::BeyondDepth });
            }
            if !is_in_ek(t, n)? {
                return Ok(NonDoublingRow::Skipped { level: n, reason: SkipReason::NotInEk });
            }
            let small_radius = Dyadic::pow2_inv(n + 2);
            let large_radius = Dyadic::pow2_inv(n);
            let small_measure = ball_measure(&center, &small_radius)?;
            let large_measure = ball_measure(&center, &large_radius)?;
            let ratio = &large_measure / &small_measure;
            Ok(NonDoublingRow::Evaluated(NonDoublingValues {
                level: n,
                small_radius,
                large_radius,
                small_measure,
                large_measure,
                ratio,
                lower_bound: Rational::from_integer((2 * (n + 1)).into()),
            }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn q(n: i64, m: i64) -> Rational {
        Rational::new(n.into(), m.into())
    }

    #[test]
    fn ek_examples() {
        assert!(is_in_ek(&d("11/64"), 4).unwrap());
        for k in 1..12 {
            assert!(!is_in_ek(&d("1/2"), k).unwrap());
        }
        assert!(is_in_ek(&d("3/8"), 1).unwrap());
        assert!(is_in_ek(&d("3/8"), 2).unwrap());
        assert!(!is_in_ek(&d("3/8"), 3).unwrap());
    }

    #[test]
    fn doubling_ratio_examples() {
        let c: SpacePoint = "1,1,1@5/16".parse().unwrap();
        assert_eq!(doubling_ratio(&c, &d("1/16"), &d("1")).unwrap(), q(1, 1));
        assert_eq!(doubling_ratio(&c, &d("1/16"), &d("4")).unwrap(), q(15, 1));
    }

    #[test]
    fn scan_skips_and_bounds() {
        let x: PointM = "1,2,1,4,1,1,1,1,1,1,1,1".parse().unwrap();
        let rows = non_doubling_scan(&x, &d("11/64"), &[3, 4, 5, 6, 7, 8, 12]).unwrap();
        assert_eq!(rows.len(), 7);
        for row in &rows[..3] {
            let v = row.values().expect("evaluated");
            assert!(v.holds(), "n={} ratio={}", v.level, v.ratio);
        }
        for row in &rows[3..6] {
            assert_eq!(*row, NonDoublingRow::Skipped { level: row.level(), reason: SkipReason::NotInEk });
        }
        assert_eq!(rows[6], NonDoublingRow::Skipped { level: 12, reason: SkipReason::BeyondDepth });
        assert!(non_doubling_scan(&x, &d("11/64"), &[]).unwrap().is_empty());
    }
}
