//! The pseudometric space `(M_N x [0, 1], d_p)`.
//!
//! Movement is vertical, except on a jump level `M x {n/2^k}` where a point
//! may move horizontally inside its level-`k` island at no cost. For two
//! points whose bases agree to depth `m`, the deepest usable grid is `I_m`
//! (the grids are nested), so
//!
//! ```text
//! d_p((x,t),(y,s)) = |t-s|                           if I_m meets [t, s]
//!                  = |t-s| + 2 dist([t, s], I_m)     otherwise
//! ```
//!
//! and `d_p = |t-s|` for equal bases.
//!
//! A ball splits by agreement depth with its centre's base. Points at depth
//! exactly `k < N` form a set of measure `nu_k - nu_{k+1}` and lie in the ball
//! iff their height is in `V_k`, the union of tents around the grid points of
//! `I_k` within `r` of `t`; depth `N` is the centre's own vertical line.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::base::{agreement_depth, d_m, nu_table, random_point_in_annulus, PointM};
use crate::error::{Error, ParseError, Result};
use crate::grid::{check_height, meets, neighbors, on_grid};
use crate::interval::{Interval, IntervalUnion};
use crate::{Dyadic, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpacePoint {
    base: PointM,
    height: Dyadic,
}

impl SpacePoint {
    pub fn new(base: PointM, height: Dyadic) -> Result<Self> {
        check_height(&height)?;
        Ok(Self { base, height })
    }

    pub fn base(&self) -> &PointM {
        &self.base
    }

    pub fn height(&self) -> &Dyadic {
        &self.height
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    /// Same base, different height.
    pub fn with_height(&self, height: Dyadic) -> Result<Self> {
        Self::new(self.base.clone(), height)
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.base, self.height)
    }
}

impl fmt::Debug for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpacePoint({self})")
    }
}

/// Parses `"1,2,1,4@11/64"`.
impl FromStr for SpacePoint {
    type Err = ParseError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let (base, height) =
            s.split_once('@').ok_or_else(|| ParseError::Point(s.to_string(), "expected base@height"))?;
        let base: PointM = base.parse()?;
        let height: Dyadic = height.parse()?;
        SpacePoint::new(base, height).map_err(|_| ParseError::Point(s.to_string(), "height outside [0, 1]"))
    }
}

/// The jump-level pseudometric.
pub fn d_p(p: &SpacePoint, q: &SpacePoint) -> Result<Dyadic> {
    let m = agreement_depth(&p.base, &q.base)?;
    let (lo, hi) = if p.height <= q.height { (&p.height, &q.height) } else { (&q.height, &p.height) };
    let vertical = hi - lo;
    if m == p.depth() {
        return Ok(vertical);
    }
    let k = m as u32;
    if meets(k, lo, true, hi, true) {
        return Ok(vertical);
    }
    // no grid point in [lo, hi]: detour to the nearer neighbour and back
    let below = neighbors(lo, k).0;
    let above = neighbors(hi, k).1;
    let down = lo - &below;
    let up = &above - hi;
    let detour = if down <= up { down } else { up };
    Ok(&vertical + &detour.double())
}

/// `max(d_M(x, y), |t - s|)`.
pub fn d_infty(p: &SpacePoint, q: &SpacePoint) -> Result<Dyadic> {
    let dm = d_m(&p.base, &q.base)?;
    let dt = (&p.height - &q.height).abs();
    Ok(if dm >= dt { dm } else { dt })
}

/// Sets with a closed-form distance function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDescriptor {
    /// `M x {u}`.
    JumpLevel(Dyadic),
    FinitePointSet(Vec<SpacePoint>),
}

impl SetDescriptor {
    pub fn jump_level(u: Dyadic) -> Result<Self> {
        check_height(&u)?;
        Ok(Self::JumpLevel(u))
    }
}

/// `d(p, S)`. For a jump level the vertical lower bound `|t - u|` is attained
/// by `(x, u)`.
pub fn distance_to_set(p: &SpacePoint, set: &SetDescriptor) -> Result<Dyadic> {
    match set {
        SetDescriptor::JumpLevel(u) => Ok((&p.height - u).abs()),
        SetDescriptor::FinitePointSet(points) => {
            let mut best: Option<Dyadic> = None;
            for q in points {
                let d = d_p(p, q)?;
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
            best.ok_or(Error::EmptySet)
        }
    }
}

/// Heights reachable at one agreement depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSection {
    pub level: usize,
    /// Union of tents before clipping to `[0, 1]`.
    pub raw: IntervalUnion,
    /// `raw` clipped to `[0, 1]`.
    pub section: IntervalUnion,
    /// Measure of the set of bases at exactly this agreement depth.
    pub weight: Rational,
}

impl LevelSection {
    fn contains_height(&self, s: &Dyadic) -> bool {
        self.raw.contains(s)
    }

    pub fn mass(&self) -> Rational {
        &self.weight * self.section.total_length().to_rational()
    }
}

/// Exact description of `B_p(center, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallDecomposition {
    center: SpacePoint,
    radius: Dyadic,
    /// Depths `1..N-1`, in order.
    levels: Vec<LevelSection>,
    /// Depth `N`: the centre's own vertical line.
    center_line: LevelSection,
}

/// `V_k`: heights `s` with `|t-u| + |u-s| < r` for some `u` in `I_k`.
/// Only the nearest grid point on each side of `t` matters; farther ones
/// give tents nested inside these.
pub(crate) fn tent_union(t: &Dyadic, r: &Dyadic, k: u32) -> IntervalUnion {
    let mut out = IntervalUnion::new();
    if on_grid(t, k) {
        out.insert(Interval::new(t - r, t + r).expect("positive radius"));
        return out;
    }
    let (below, above) = neighbors(t, k);
    let up = &above - t;
    if up < *r {
        out.insert(Interval::new(&(&above.double() - t) - r, t + r).expect("tent"));
    }
    let down = t - &below;
    if down < *r {
        out.insert(Interval::new(t - r, &(&below.double() - t) + r).expect("tent"));
    }
    out
}

fn unit_clip(u: &IntervalUnion) -> IntervalUnion {
    u.clip(&Dyadic::zero(), &Dyadic::one())
}

impl BallDecomposition {
    pub fn new(center: &SpacePoint, radius: &Dyadic) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::NonPositiveRadius(radius.clone()));
        }
        let n = center.depth();
        let nus = nu_table(n);
        let t = &center.height;
        let levels = (1..n)
            .map(|k| {
                let raw = tent_union(t, radius, k as u32);
                LevelSection { level: k, section: unit_clip(&raw), raw, weight: &nus[k] - &nus[k + 1] }
            })
            .collect();
        let raw = IntervalUnion::single(Interval::new(t - radius, t + radius)?);
        let center_line = LevelSection { level: n, section: unit_clip(&raw), raw, weight: nus[n].clone() };
        Ok(Self { center: center.clone(), radius: radius.clone(), levels, center_line })
    }

    pub fn center(&self) -> &SpacePoint {
        &self.center
    }

    pub fn radius(&self) -> &Dyadic {
        &self.radius
    }

    pub fn depth(&self) -> usize {
        self.center.depth()
    }

    /// Sections for depths `1..N-1`.
    pub fn levels(&self) -> &[LevelSection] {
        &self.levels
    }

    pub fn center_line(&self) -> &LevelSection {
        &self.center_line
    }

    /// Section for agreement depth `m` (`1 <= m <= N`).
    pub fn section_at_depth(&self, m: usize) -> &LevelSection {
        if m >= self.depth() {
            &self.center_line
        } else {
            &self.levels[m - 1]
        }
    }

    /// Every section, depth `N` last.
    pub fn sections(&self) -> impl Iterator<Item = &LevelSection> {
        self.levels.iter().chain(core::iter::once(&self.center_line))
    }

    pub fn measure(&self) -> Rational {
        self.sections().map(LevelSection::mass).fold(Rational::zero(), |a, b| a + b)
    }

    /// Measure of the part of the ball whose height avoids `excluded`.
    pub fn measure_restricted(&self, excluded: &IntervalUnion) -> Rational {
        self.sections()
            .map(|s| {
                let kept = &s.section.total_length() - &s.section.intersection_length(excluded);
                &s.weight * kept.to_rational()
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn contains(&self, q: &SpacePoint) -> Result<bool> {
        let m = agreement_depth(&self.center.base, &q.base)?;
        Ok(self.section_at_depth(m).contains_height(&q.height))
    }

    pub fn sampler(&self) -> Result<BallSampler<'_>> {
        BallSampler::new(self)
    }
}

pub fn ball_decompose(center: &SpacePoint, r: &Dyadic) -> Result<BallDecomposition> {
    BallDecomposition::new(center, r)
}

/// `(nu x L^1)(B_p(center, r))`, exact.
pub fn ball_measure(center: &SpacePoint, r: &Dyadic) -> Result<Rational> {
    Ok(BallDecomposition::new(center, r)?.measure())
}

pub fn ball_measure_restricted(center: &SpacePoint, r: &Dyadic, excluded: &IntervalUnion) -> Result<Rational> {
    Ok(BallDecomposition::new(center, r)?.measure_restricted(excluded))
}

/// One draw from the normalised restriction of `nu x L^1` to the ball.
pub fn sample_ball<R: Rng + ?Sized>(center: &SpacePoint, r: &Dyadic, rng: &mut R) -> Result<SpacePoint> {
    let ball = BallDecomposition::new(center, r)?;
    let sampler = ball.sampler()?;
    sampler.sample(rng)
}

/// Uniform integer in `0..bound` by rejection on raw bits.
pub(crate) fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    debug_assert!(bits > 0);
    let words = bits.div_ceil(32) as usize;
    let top_bits = (bits - 32 * (words as u64 - 1)) as u32;
    let mask = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= mask;
        let x = BigUint::new(digits);
        if &x < bound {
            return x;
        }
    }
}

/// Picks an index with probability exactly proportional to integer weights.
pub(crate) fn weighted_index<R: Rng + ?Sized>(cumulative: &[BigUint], rng: &mut R) -> usize {
    let total = cumulative.last().expect("non-empty weights");
    let x = uniform_below(total, rng);
    cumulative.partition_point(|c| *c <= x)
}

/// Uniform dyadic strictly inside `(lo, hi)` at 2^-64 relative resolution.
pub(crate) fn uniform_in_interval<R: Rng + ?Sized>(iv: &Interval, rng: &mut R) -> Dyadic {
    let j = BigInt::from(rng.next_u64());
    let frac = Dyadic::new(j * 2 + 1, 65);
    iv.lo() + &(&iv.length() * &frac)
}

fn cumulative_integer_weights(masses: &[Rational]) -> Vec<BigUint> {
    let lcm = masses.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    let mut acc = BigUint::zero();
    masses
        .iter()
        .map(|m| {
            let w = (m.numer() * (&lcm / m.denom())).to_biguint().expect("nonnegative mass");
            acc += w;
            acc.clone()
        })
        .collect()
}

/// Exact sampler for a ball: chooses the depth with probability
/// proportional to its mass, a uniform height in its section, then a
/// uniform base at exactly that agreement depth.
pub struct BallSampler<'a> {
    ball: &'a BallDecomposition,
    cumulative: Vec<BigUint>,
    per_section: Vec<Vec<BigUint>>,
}

impl<'a> BallSampler<'a> {
    fn new(ball: &'a BallDecomposition) -> Result<Self> {
        let masses: Vec<Rational> = ball.sections().map(LevelSection::mass).collect();
        if masses.iter().all(Zero::is_zero) {
            return Err(Error::NullBall);
        }
        let cumulative = cumulative_integer_weights(&masses);
        let per_section = ball
            .sections()
            .map(|s| {
                let lens: Vec<Rational> = s.section.iter().map(|iv| iv.length().to_rational()).collect();
                if lens.is_empty() {
                    Vec::new()
                } else {
                    cumulative_integer_weights(&lens)
                }
            })
            .collect();
        Ok(Self { ball, cumulative, per_section })
    }

    /// Index into [`BallDecomposition::sections`] together with the point.
    pub fn sample_with_section<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, SpacePoint)> {
        let i = weighted_index(&self.cumulative, rng);
        let section = self.ball.sections().nth(i).expect("index in range");
        let j = weighted_index(&self.per_section[i], rng);
        let height = uniform_in_interval(&section.section.parts()[j], rng);
        let x = self.ball.center.base();
        let base = if section.level >= x.depth() { x.clone() } else { random_point_in_annulus(x, section.level, rng)? };
        Ok((i, SpacePoint::new(base, height)?))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SpacePoint> {
        self.sample_with_section(rng).map(|(_, p)| p)
    }

    /// Probability of each section, as exact rationals.
    pub fn probabilities(&self) -> Vec<Rational> {
        let total = BigInt::from(self.cumulative.last().cloned().unwrap_or_default());
        let mut prev = BigUint::zero();
        self.cumulative
            .iter()
            .map(|c| {
                let w = c - &prev;
                prev = c.clone();
                Rational::new(BigInt::from(w), total.clone())
            })
            .collect()
    }
}
