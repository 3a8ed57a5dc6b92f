//! The truncated sequence space `M_N = { (a_1..a_N) : 1 <= a_i <= i }` with
//! the ultrametric `d_M(a, b) = 2^-k`, `k` the first differing index, and
//! the island measure `nu_k = 1/k!`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, ParseError, Result};
use crate::{Dyadic, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointM {
    coords: Vec<u32>,
}

impl PointM {
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("a point needs at least one coordinate"));
        }
        for (i, &a) in coords.iter().enumerate() {
            let index = i + 1;
            if a < 1 || a as usize > index {
                return Err(Error::BadCoordinate { index, value: a });
            }
        }
        Ok(Self { coords })
    }

    /// The point `(1, 1, ..., 1)`.
    pub fn ones(depth: usize) -> Self {
        Self { coords: alloc::vec![1; depth.max(1)] }
    }

    pub fn depth(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// The island of level `k` containing this point.
    pub fn island(&self, k: usize) -> Result<Island> {
        if k > self.depth() {
            return Err(Error::LevelOutOfRange { level: k, min: 0, max: self.depth() });
        }
        Ok(Island { prefix: self.coords[..k].to_vec(), depth: self.depth() })
    }
}

impl fmt::Display for PointM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PointM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointM({self})")
    }
}

impl FromStr for PointM {
    type Err = ParseError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<core::result::Result<Vec<_>, _>>()
            .map_err(|_| ParseError::Point(s.to_string(), "coordinates must be positive integers"))?;
        PointM::new(coords).map_err(|_| ParseError::Point(s.to_string(), "coordinate a_i outside 1..=i"))
    }
}

/// Set of points sharing a fixed prefix of length `level`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Island {
    prefix: Vec<u32>,
    depth: usize,
}

impl Island {
    pub fn level(&self) -> usize {
        self.prefix.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn contains(&self, p: &PointM) -> bool {
        p.depth() == self.depth && p.coords.starts_with(&self.prefix)
    }

    pub fn measure(&self) -> Rational {
        nu(self.level())
    }

    /// `(k+1)(k+2)...N` points of the truncated space.
    pub fn point_count(&self) -> BigInt {
        ((self.level() + 1)..=self.depth).fold(BigInt::one(), |acc, i| acc * i)
    }
}

impl fmt::Debug for Island {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Island(level {}, prefix {:?})", self.level(), self.prefix)
    }
}

fn check_depths(a: &PointM, b: &PointM) -> Result<()> {
    if a.depth() != b.depth() {
        return Err(Error::DepthMismatch(a.depth(), b.depth()));
    }
    Ok(())
}

/// Length of the longest common prefix; `N` iff the points are equal.
pub fn agreement_depth(a: &PointM, b: &PointM) -> Result<usize> {
    check_depths(a, b)?;
    Ok(a.coords.iter().zip(&b.coords).take_while(|(x, y)| x == y).count())
}

/// `d_M(a, b) = 2^-k` with `k` the first index where the points differ; zero
/// for equal points.
pub fn d_m(a: &PointM, b: &PointM) -> Result<Dyadic> {
    let m = agreement_depth(a, b)?;
    Ok(if m == a.depth() { Dyadic::zero() } else { Dyadic::pow2_inv(m as u32 + 1) })
}

/// `nu_k = 1/k!`, the measure of every island of level `k`.
pub fn nu(k: usize) -> Rational {
    let fact = (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    Rational::new(BigInt::one(), fact)
}

/// `[nu_0, nu_1, ..., nu_depth]`.
pub fn nu_table(depth: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(depth + 1);
    let mut fact = BigInt::one();
    out.push(Rational::one());
    for k in 1..=depth {
        fact *= k;
        out.push(Rational::new(BigInt::one(), fact.clone()));
    }
    out
}

/// A `nu`-distributed point: coordinate `i` uniform on `1..=i`.
pub fn random_point<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> PointM {
    let coords = (1..=depth.max(1) as u32).map(|i| rng.random_range(1..=i)).collect();
    PointM { coords }
}

/// A `nu`-distributed point of the annulus `B_M(x, 2^-k) \ B_M(x, 2^-(k+1))`,
/// i.e. a point whose agreement depth with `x` is exactly `k`.
pub fn random_point_in_annulus<R: Rng + ?Sized>(x: &PointM, k: usize, rng: &mut R) -> Result<PointM> {
    let n = x.depth();
    if k < 1 || k + 1 > n {
        return Err(Error::LevelOutOfRange { level: k, min: 1, max: n.saturating_sub(1) });
    }
    let mut coords = x.coords[..k].to_vec();
    // index k+1 has alphabet 1..=k+1; skip x's own letter
    let alphabet = k as u32 + 1;
    let mut a = rng.random_range(1..alphabet);
    if a >= x.coords[k] {
        a += 1;
    }
    coords.push(a);
    coords.extend((k as u32 + 2..=n as u32).map(|i| rng.random_range(1..=i)));
    Ok(PointM { coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PointM {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_bad_coordinates() {
        assert!(matches!(PointM::new(vec![2]), Err(Error::BadCoordinate { index: 1, value: 2 })));
        assert!(PointM::new(vec![1, 3]).is_err());
        assert!(PointM::new(vec![1, 2, 0]).is_err());
        assert!("1,2,x".parse::<PointM>().is_err());
        assert_eq!(p("1, 2,3").to_string(), "1,2,3");
    }

    #[test]
    fn d_m_examples() {
        assert_eq!(d_m(&p("1,2,1"), &p("1,2,1")).unwrap(), Dyadic::zero());
        assert_eq!(d_m(&p("1,1,1"), &p("1,2,1")).unwrap(), Dyadic::pow2_inv(2));
        assert_eq!(d_m(&p("1,1,3"), &p("1,1,2")).unwrap(), Dyadic::pow2_inv(3));
        assert!(matches!(d_m(&p("1,1"), &p("1,1,1")), Err(Error::DepthMismatch(2, 3))));
    }

    #[test]
    fn agreement_depth_examples() {
        assert_eq!(agreement_depth(&p("1,1"), &p("1,2")).unwrap(), 1);
        assert_eq!(agreement_depth(&p("1,2,3,4,5,6"), &p("1,2,3,4,5,6")).unwrap(), 6);
        assert_eq!(agreement_depth(&p("1,2,1"), &p("1,2,3")).unwrap(), 2);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(0), Rational::one());
        assert_eq!(nu(3), Rational::new(1.into(), 6.into()));
        assert_eq!(nu(5), Rational::new(1.into(), 120.into()));
        let table = nu_table(8);
        for (k, v) in table.iter().enumerate() {
            assert_eq!(*v, nu(k));
        }
    }

    #[test]
    fn island_counts() {
        let x = p("1,2,3,1,5");
        let isl = x.island(2).unwrap();
        assert_eq!(isl.point_count(), BigInt::from(60));
        assert!(isl.contains(&p("1,2,1,4,1")));
        assert!(!isl.contains(&p("1,1,1,4,1")));
        assert_eq!(isl.measure(), Rational::new(1.into(), 2.into()));
        assert!(x.island(6).is_err());
    }

    #[test]
    fn annulus_sampling_hits_exact_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_point(9, &mut rng);
        for k in 1..9 {
            for _ in 0..50 {
                let y = random_point_in_annulus(&x, k, &mut rng).unwrap();
                assert_eq!(agreement_depth(&x, &y).unwrap(), k);
                assert!(PointM::new(y.coords().to_vec()).is_ok());
            }
        }
        assert!(random_point_in_annulus(&x, 0, &mut rng).is_err());
        assert!(random_point_in_annulus(&x, 9, &mut rng).is_err());
    }

    #[test]
    fn random_point_first_coordinate_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(random_point(6, &mut rng).coords()[0], 1);
        }
    }

    #[test]
    fn level_two_islands_are_equally_likely() {
        // nu_2 = 1/2 for each of the two level-2 islands; 3 sigma binomial band
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000.0;
        let ones = (0..10_000).filter(|_| random_point(5, &mut rng).coords()[1] == 1).count() as f64;
        let sigma = libm::sqrt(n * 0.25);
        assert!((ones - n / 2.0).abs() < 3.0 * sigma, "count {ones}");
    }
}
