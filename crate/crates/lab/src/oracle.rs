//! Reference computations used to cross-check the library.
//!
//! Nothing here calls the library's distance, ball or grid routines. Heights
//! are converted once to fixed point (`value * 2^SCALE` in an `i128`) and
//! everything else is done by enumeration: every grid point of every
//! admissible level, every point of `M_N`, every rectangle of the ball.

use jumpspace::{Dyadic, PointM, Rational, SpacePoint};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::Rng;

/// Fixed-point scale. Heights and radii must have level at most this.
pub const SCALE: u32 = 80;

/// Largest truncation depth the enumerating oracle accepts.
pub const MAX_ENUM_DEPTH: usize = 6;

pub type Fixed = i128;

pub fn to_fixed(d: &Dyadic) -> Fixed {
    assert!(d.exponent() <= SCALE, "oracle resolution exceeded by {d}");
    let m = d.mantissa().to_i128().expect("mantissa fits in i128");
    m << (SCALE - d.exponent())
}

pub fn from_fixed(v: Fixed) -> Dyadic {
    Dyadic::new(BigInt::from(v), SCALE)
}

fn grid(n: i128, k: u32) -> Fixed {
    n << (SCALE - k)
}

fn agreement(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn path_length(t: Fixed, u: Fixed, s: Fixed) -> Fixed {
    (t - u).abs() + (u - s).abs()
}

/// `d_p` as the minimum of `|t - u| + |u - s|` over every `u = n/2^k` in
/// `[0, 1]` with `k <= min(m, max_level)`, where `m` is the agreement depth.
/// Identical bases allow every level up to `max_level`; the result is exact
/// for them when both heights lie on `I_{max_level}`.
pub fn d_p_brute(p: &SpacePoint, q: &SpacePoint, max_level: u32) -> Dyadic {
    let (a, b) = (p.base().coords(), q.base().coords());
    assert_eq!(a.len(), b.len());
    let m = agreement(a, b);
    let top = if m == a.len() { max_level } else { (m as u32).min(max_level) };
    let (t, s) = (to_fixed(p.height()), to_fixed(q.height()));
    let mut best = Fixed::MAX;
    for k in 0..=top {
        for n in 0..=(1i128 << k) {
            best = best.min(path_length(t, grid(n, k), s));
        }
    }
    from_fixed(best)
}

/// `d_p` from the nearest grid points of each admissible level. Cheaper than
/// [`d_p_brute`] and still a plain level-by-level minimum.
pub fn d_p_levels(p: &SpacePoint, q: &SpacePoint) -> Fixed {
    let (a, b) = (p.base().coords(), q.base().coords());
    let (t, s) = (to_fixed(p.height()), to_fixed(q.height()));
    let m = agreement(a, b);
    if m == a.len() {
        return (t - s).abs();
    }
    let lo = t.min(s);
    let mut best = Fixed::MAX;
    for k in 0..=m as u32 {
        let cell = 1i128 << (SCALE - k);
        let below = lo.div_euclid(cell) * cell;
        // the nearest grid points around lo; the upper one is either inside
        // [lo, hi] or the nearest above hi
        for u in [below, below + cell] {
            if (0..=grid(1, 0)).contains(&u) {
                best = best.min(path_length(t, u, s));
            }
        }
    }
    best
}

/// Every point of `M_N`, in lexicographic order.
pub fn all_points(depth: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for i in 1..=depth as u32 {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=i).map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn union_length(mut intervals: Vec<(Fixed, Fixed)>) -> Fixed {
    intervals.sort();
    let mut total = 0;
    let mut current: Option<(Fixed, Fixed)> = None;
    for (lo, hi) in intervals {
        match current {
            Some((clo, chi)) if lo <= chi => current = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                current = Some((lo, hi));
            }
            None => current = Some((lo, hi)),
        }
    }
    if let Some((clo, chi)) = current {
        total += chi - clo;
    }
    total
}

/// Height intervals of the rectangles `B_M(x, 2^-k) x (u - w, u + w)`,
/// `w = r - |t - u|`, that contain the base point `y`, clipped to `[0, 1]`.
fn rectangles_over(x: &[u32], y: &[u32], t: Fixed, r: Fixed) -> Vec<(Fixed, Fixed)> {
    let one = grid(1, 0);
    let clip = |lo: Fixed, hi: Fixed| (lo.max(0), hi.min(one));
    let m = agreement(x, y);
    if m == x.len() {
        return vec![clip(t - r, t + r)];
    }
    let mut out = Vec::new();
    for k in 0..=m as u32 {
        for n in 0..=(1i128 << k) {
            let u = grid(n, k);
            let w = r - (t - u).abs();
            if w > 0 {
                let (lo, hi) = clip(u - w, u + w);
                if lo < hi {
                    out.push((lo, hi));
                }
            }
        }
    }
    out
}

/// `mu(B_p(center, r))` as the measure of the literal union of rectangles,
/// summed over every point of `M_N` with mass `1/N!`.
pub fn ball_measure_enumerated(center: &SpacePoint, r: &Dyadic) -> Rational {
    let x = center.base().coords();
    assert!(x.len() <= MAX_ENUM_DEPTH, "enumeration limited to depth {MAX_ENUM_DEPTH}");
    let (t, r) = (to_fixed(center.height()), to_fixed(r));
    let total: Fixed = all_points(x.len()).iter().map(|y| union_length(rectangles_over(x, y, t, r))).sum();
    Rational::new(BigInt::from(total), factorial(x.len()) << SCALE)
}

/// The same union of rectangles, grouped by agreement depth instead of
/// enumerating `M_N`: exactly `m / (m+1)!` of the points agree with `x` in
/// exactly `m < N` coordinates, and `1/N!` is `x` itself. Works at any depth.
pub fn ball_measure_grouped(center: &SpacePoint, r: &Dyadic) -> Rational {
    let x = center.base().coords();
    let n = x.len();
    let (t, r) = (to_fixed(center.height()), to_fixed(r));
    let mut total = Rational::from_integer(0.into());
    for m in 1..=n {
        // a representative point agreeing with x in exactly m coordinates
        let mut y = x.to_vec();
        if m < n {
            y[m] = if x[m] == 1 { 2 } else { 1 };
        }
        let share = if m < n {
            Rational::new(BigInt::from(m), factorial(m + 1))
        } else {
            Rational::new(BigInt::one(), factorial(n))
        };
        let len = union_length(rectangles_over(x, &y, t, r));
        total += share * Rational::new(BigInt::from(len), BigInt::one() << SCALE);
    }
    total
}

/// Island measure by counting the points of `M_N` that share the prefix.
pub fn island_measure_enumerated(x: &PointM, k: usize) -> Rational {
    let pts = all_points(x.depth());
    let inside = pts.iter().filter(|y| agreement(x.coords(), y) >= k).count();
    Rational::new(inside.into(), pts.len().into())
}

/// A uniform draw from `nu x Lebesgue`, heights on `I_64` shifted by half a
/// cell so they never land on a coarser grid.
pub fn uniform_point<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> SpacePoint {
    let coords = (1..=depth as u32).map(|i| rng.random_range(1..=i)).collect();
    let j: u64 = rng.random();
    let height = Dyadic::new(BigInt::from(j) * 2 + 1, 65);
    SpacePoint::new(PointM::new(coords).expect("valid coordinates"), height).expect("height in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarlo {
    pub hits: u64,
    pub samples: u64,
}

impl MonteCarlo {
    pub fn fraction(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }

    /// Whether `p` lies within `k` standard errors of the estimate, using the
    /// binomial variance at `p`.
    pub fn agrees_with(&self, p: f64, k: f64) -> bool {
        let sd = (p * (1.0 - p) / self.samples as f64).sqrt();
        (self.fraction() - p).abs() <= k * sd
    }
}

/// Fraction of uniform points `q` with `d_p(center, q) < r`.
pub fn monte_carlo_ball<R: Rng + ?Sized>(center: &SpacePoint, r: &Dyadic, samples: u64, rng: &mut R) -> MonteCarlo {
    let r = to_fixed(r);
    let hits = (0..samples).filter(|_| d_p_levels(center, &uniform_point(center.depth(), rng)) < r).count();
    MonteCarlo { hits: hits as u64, samples }
}
