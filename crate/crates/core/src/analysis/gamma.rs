//! Lower bounds for the measure-porosity quantity
//! `gamma(mu, x, r, delta) = sup { s : exists z, d(x, z) + s <= r and mu(B(z, s)) <= delta mu(B(x, r)) }`.

use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::jump::{ball_measure, d_p, BallDecomposition, SpacePoint};
use crate::{Dyadic, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaConfig {
    /// `s` ranges over `r j / 2^resolution`.
    pub resolution: u32,
    /// Random centres drawn from `B(x, r)`.
    pub budget: usize,
    /// Vertical centres `(x, t +- r/2^i)` for `i = 1..=vertical_probes`.
    pub vertical_probes: u32,
}

impl Default for GammaConfig {
    fn default() -> Self {
        Self { resolution: 10, budget: 32, vertical_probes: 6 }
    }
}

/// A centre `z` and radius `s` realising the bound, with the exact
/// quantities that justify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCertificate {
    pub x: SpacePoint,
    pub r: Dyadic,
    pub delta: Rational,
    /// Zero when nothing qualified.
    pub gamma: Dyadic,
    pub z: Option<SpacePoint>,
    pub dist_xz: Dyadic,
    pub measure_z: Rational,
    pub measure_x: Rational,
    pub centers_tried: usize,
}

impl GammaCertificate {
    /// Recomputes distance and both measures and checks the defining
    /// inequalities.
    pub fn verify(&self) -> Result<bool> {
        let Some(z) = &self.z else {
            return Ok(self.gamma.is_zero());
        };
        let dist = d_p(&self.x, z)?;
        let mz = ball_measure(z, &self.gamma)?;
        let mx = ball_measure(&self.x, &self.r)?;
        Ok(dist == self.dist_xz
            && mz == self.measure_z
            && mx == self.measure_x
            && &dist + &self.gamma <= self.r
            && mz <= &self.delta * &mx)
    }

    pub fn ratio(&self) -> Rational {
        self.gamma.to_rational() / self.r.to_rational()
    }
}

fn candidate_centers<R: Rng + ?Sized>(
    x: &SpacePoint,
    r: &Dyadic,
    config: &GammaConfig,
    rng: &mut R,
) -> Result<Vec<SpacePoint>> {
    let mut out = alloc::vec![x.clone()];
    for i in 1..=config.vertical_probes {
        let off = r.div_pow2(i);
        for h in [x.height() + &off, x.height() - &off] {
            if let Ok(p) = x.with_height(h) {
                out.push(p);
            }
        }
    }
    if config.budget > 0 {
        let ball = BallDecomposition::new(x, r)?;
        let sampler = ball.sampler()?;
        for _ in 0..config.budget {
            out.push(sampler.sample(rng)?);
        }
    }
    Ok(out)
}

/// Searches centres and a dyadic grid of radii; the result is a lower bound
/// for `gamma` whose certificate re-checks exactly.
pub fn measure_porosity_gamma<R: Rng + ?Sized>(
    x: &SpacePoint,
    r: &Dyadic,
    delta: &Rational,
    config: &GammaConfig,
    rng: &mut R,
) -> Result<GammaCertificate> {
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.clone()));
    }
    if *delta <= Rational::zero() {
        return Err(Error::InvalidParameter("delta must be positive"));
    }
    if config.resolution == 0 || config.resolution > 62 {
        return Err(Error::InvalidParameter("resolution must lie in 1..=62"));
    }
    let measure_x = ball_measure(x, r)?;
    let threshold = delta * &measure_x;
    let step = r.div_pow2(config.resolution);
    let centers = candidate_centers(x, r, config, rng)?;

    let mut best = GammaCertificate {
        x: x.clone(),
        r: r.clone(),
        delta: delta.clone(),
        gamma: Dyadic::zero(),
        z: None,
        dist_xz: Dyadic::zero(),
        measure_z: Rational::zero(),
        measure_x: measure_x.clone(),
        centers_tried: centers.len(),
    };
    let full = 1i64 << config.resolution;
    for z in centers {
        let dist = d_p(x, &z)?;
        let room = r - &dist;
        // largest j with j * step <= room, and j < 2^resolution
        let jmax = (room.to_rational() / step.to_rational()).floor().to_integer();
        let jmax = jmax.to_i64().unwrap_or(i64::MAX).min(full - 1);
        if step.mul_int(jmax) <= best.gamma {
            continue;
        }
        // mu(B(z, s)) is nondecreasing in s
        let (mut lo, mut hi) = (0i64, jmax);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if ball_measure(&z, &step.mul_int(mid))? <= threshold {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo == 0 {
            continue;
        }
        let s = step.mul_int(lo);
        let m = ball_measure(&z, &s)?;
        if s > best.gamma {
            best.gamma = s;
            best.dist_xz = dist;
            best.measure_z = m;
            best.z = Some(z);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(s: &str) -> SpacePoint {
        s.parse().unwrap()
    }

    #[test]
    fn delta_one_reaches_nearly_r() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = sp("1,2,1,3,2@11/64");
        let r = Dyadic::pow2_inv(4);
        let cert = measure_porosity_gamma(&x, &r, &Rational::from_integer(1.into()), &GammaConfig::default(), &mut rng)
            .unwrap();
        assert!(cert.verify().unwrap());
        let floor = &r - &r.div_pow2(10);
        assert!(cert.gamma >= floor);
        assert!(cert.gamma <= r);
    }

    #[test]
    fn tiny_delta_certificate_still_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = sp("1,1,2,4,1,6@11/64");
        let r = Dyadic::pow2_inv(4);
        let delta = Rational::new(1.into(), 1000.into());
        let cert = measure_porosity_gamma(&x, &r, &delta, &GammaConfig::default(), &mut rng).unwrap();
        assert!(cert.verify().unwrap());
        assert!(cert.gamma < r);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = sp("1,1@1/4");
        let one = Rational::from_integer(1.into());
        let cfg = GammaConfig::default();
        assert!(measure_porosity_gamma(&x, &Dyadic::zero(), &one, &cfg, &mut rng).is_err());
        assert!(measure_porosity_gamma(&x, &Dyadic::one(), &Rational::zero(), &cfg, &mut rng).is_err());
    }
}
