//! Seeded generators for test inputs.

use jumpspace::{Dyadic, PointM, SpacePoint};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A ChaCha8 generator on its own stream, so independent tasks sharing a
/// seed never share randomness.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn base<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> PointM {
    PointM::new((1..=depth as u32).map(|i| rng.random_range(1..=i)).collect()).expect("valid coordinates")
}

/// A base point that agrees with `x` in exactly `m` leading coordinates
/// (`m = depth` gives `x` itself).
pub fn base_agreeing<R: Rng + ?Sized>(x: &PointM, m: usize, rng: &mut R) -> PointM {
    let n = x.depth();
    let mut coords = x.coords()[..m.min(n)].to_vec();
    if m < n {
        // coordinate m+1 has alphabet 1..=m+1, of which x uses one letter
        let i = m as u32 + 1;
        let mut a = rng.random_range(1..i);
        if a >= x.coords()[m] {
            a += 1;
        }
        coords.push(a);
        coords.extend((i + 1..=n as u32).map(|j| rng.random_range(1..=j)));
    }
    PointM::new(coords).expect("valid coordinates")
}

/// Uniform on `[0, 2^bits)`.
fn below_pow2<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> BigInt {
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
    if bits % 32 != 0 {
        if let Some(top) = digits.last_mut() {
            *top &= (1u32 << (bits % 32)) - 1;
        }
    }
    BigInt::from(BigUint::new(digits))
}

/// Uniform on `I_level` (on its points below 1 when `level >= 64`).
pub fn height<R: Rng + ?Sized>(level: u32, rng: &mut R) -> Dyadic {
    if level < 64 {
        return Dyadic::new(rng.random_range(0..=1u64 << level), level);
    }
    Dyadic::new(below_pow2(level, rng), level)
}

/// Uniform on `I_level` restricted to `(0, 1)`.
pub fn interior_height<R: Rng + ?Sized>(level: u32, rng: &mut R) -> Dyadic {
    assert!(level >= 1);
    loop {
        let t = height(level, rng);
        if t.is_positive() && t < Dyadic::one() {
            return t;
        }
    }
}

/// Uniform on `{j / 2^level : 0 < j <= max * 2^level}`.
pub fn radius<R: Rng + ?Sized>(level: u32, max: u64, rng: &mut R) -> Dyadic {
    Dyadic::new(rng.random_range(1..=max << level), level)
}

pub fn point<R: Rng + ?Sized>(depth: usize, level: u32, rng: &mut R) -> SpacePoint {
    SpacePoint::new(base(depth, rng), height(level, rng)).expect("height in range")
}

/// A second point whose base agrees with `p`'s in a uniformly chosen number
/// of coordinates, so every agreement depth is exercised.
pub fn related_point<R: Rng + ?Sized>(p: &SpacePoint, level: u32, rng: &mut R) -> SpacePoint {
    let m = rng.random_range(1..=p.depth());
    let b = base_agreeing(p.base(), m, rng);
    SpacePoint::new(b, height(level, rng)).expect("height in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_is_exact() {
        let mut rng = stream(1, 0);
        for _ in 0..200 {
            let x = base(7, &mut rng);
            let m = rng.random_range(1..=7);
            let y = base_agreeing(&x, m, &mut rng);
            let common = x.coords().iter().zip(y.coords()).take_while(|(a, b)| a == b).count();
            assert_eq!(common, m);
        }
    }

    #[test]
    fn deep_heights_stay_in_range() {
        let mut rng = stream(2, 0);
        for level in [1, 5, 63, 64, 65, 100, 140] {
            for _ in 0..50 {
                let t = interior_height(level, &mut rng);
                assert!(t.is_positive() && t < Dyadic::one() && t.level() <= level);
            }
        }
    }

    #[test]
    fn streams_differ() {
        let a: u64 = stream(3, 0).random();
        let b: u64 = stream(3, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, stream(3, 0).random::<u64>());
    }
}
