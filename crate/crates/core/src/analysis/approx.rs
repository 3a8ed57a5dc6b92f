//! Vertical derivatives and the approximate-differentiability defect.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::LipschitzField;
use crate::jump::{d_p, BallDecomposition, SpacePoint};
use crate::{Dyadic, Rational};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalDerivative {
    /// Symmetric quotient `(f(t+u) - f(t-u)) / 2u` at the final scale.
    pub estimate: Rational,
    pub forward: Rational,
    pub backward: Rational,
    /// Final scale `u = 2^-exponent`.
    pub exponent: u32,
}

impl VerticalDerivative {
    pub fn value(&self) -> f64 {
        rational_to_f64(&self.estimate)
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Estimates `lim_{u -> 0} (f(x, t+u) - f(x, t)) / u`.
///
/// Halves `u` from the coarsest scale that keeps `t +- u` in `[0, 1]` down to
/// `2^-max_exponent`. Stops once the one-sided quotients agree within `tol`
/// and the symmetric quotient moved by less than `tol` since the previous
/// scale.
pub fn vertical_derivative(
    f: &LipschitzField,
    p: &SpacePoint,
    tol: &Rational,
    max_exponent: u32,
) -> Result<VerticalDerivative> {
    let t = p.height();
    if !t.is_positive() || *t >= Dyadic::one() {
        return Err(Error::HeightNotInterior);
    }
    if *tol <= Rational::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let room = t.min(&(&Dyadic::one() - t)).clone();
    let f0 = f.eval(p)?;
    let mut previous: Option<Rational> = None;
    for j in 1..=max_exponent {
        let u = Dyadic::pow2_inv(j);
        if u > room {
            continue;
        }
        let above = f.eval(&p.with_height(t + &u)?)?;
        let below = f.eval(&p.with_height(t - &u)?)?;
        let scale = Rational::from_integer(num_bigint::BigInt::from(1) << j);
        let forward = (&above - &f0) * &scale;
        let backward = (&f0 - &below) * &scale;
        let estimate = (&forward + &backward) / Rational::from_integer(2.into());
        let settled = previous.as_ref().is_some_and(|prev| (&estimate - prev).abs() < *tol);
        if settled && (&forward - &backward).abs() < *tol {
            return Ok(VerticalDerivative { estimate, forward, backward, exponent: j });
        }
        previous = Some(estimate);
    }
    Err(Error::NoVerticalDerivative(max_exponent))
}

/// Fraction of the ball where the first-order vertical model fails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefectEstimate {
    pub samples: usize,
    pub defects: usize,
    pub fraction: f64,
    /// Wilson score interval at 95%.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl DefectEstimate {
    pub fn from_counts(defects: usize, samples: usize) -> Self {
        let n = samples as f64;
        let p = defects as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        Self { samples, defects, fraction: p, ci_low: (centre - half).max(0.0), ci_high: (centre + half).min(1.0) }
    }
}

/// Monte Carlo estimate of
/// `mu{ q in B(p, r) : |f(q) - f(p) - df (s - t)| > eps d(p, q) } / mu(B(p, r))`.
///
/// `df` is converted to a dyadic exactly, so each sample is classified
/// without rounding.
pub fn approx_diff_defect<R: Rng + ?Sized>(
    f: &LipschitzField,
    p: &SpacePoint,
    df: f64,
    epsilon: &Rational,
    r: &Dyadic,
    nsamples: usize,
    rng: &mut R,
) -> Result<DefectEstimate> {
    if nsamples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required"));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    let slope = Dyadic::from_f64(df).ok_or(Error::InvalidParameter("derivative must be finite"))?.to_rational();
    let ball = BallDecomposition::new(p, r)?;
    let sampler = ball.sampler()?;
    let f0 = f.eval(p)?;
    let t = p.height().to_rational();
    let mut defects = 0;
    for _ in 0..nsamples {
        let q = sampler.sample(rng)?;
        let residual = f.eval(&q)? - &f0 - &slope * (q.height().to_rational() - &t);
        if residual.abs() > epsilon * d_p(p, &q)?.to_rational() {
            defects += 1;
        }
    }
    Ok(DefectEstimate::from_counts(defects, nsamples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cone;
    use crate::jump::SetDescriptor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(s: &str) -> SpacePoint {
        s.parse().unwrap()
    }

    fn q(n: i64, m: i64) -> Rational {
        Rational::new(n.into(), m.into())
    }

    #[test]
    fn derivative_of_height_and_constants() {
        let p = sp("1,2,1,3@11/64");
        let tol = q(1, 1000);
        let d = vertical_derivative(&LipschitzField::Height, &p, &tol, 40).unwrap();
        assert_eq!(d.estimate, q(1, 1));
        let d = vertical_derivative(&LipschitzField::Constant(q(3, 7)), &p, &tol, 40).unwrap();
        assert_eq!(d.value(), 0.0);
        assert_eq!(vertical_derivative(&LipschitzField::Height, &sp("1,1@0"), &tol, 40), Err(Error::HeightNotInterior));
    }

    #[test]
    fn derivative_of_distance_above_target() {
        let p = sp("1,2,1,3@45/128");
        let f = LipschitzField::DistanceToPoint(sp("1,2,1,3@11/64"));
        let d = vertical_derivative(&f, &p, &q(1, 1000), 40).unwrap();
        assert_eq!(d.estimate, q(1, 1));
        assert_eq!(d.forward, d.backward);
    }

    #[test]
    fn kink_has_no_derivative() {
        let p = sp("1,2,1,3@11/64");
        let f = LipschitzField::DistanceToPoint(p.clone());
        assert_eq!(vertical_derivative(&f, &p, &q(1, 1000), 30), Err(Error::NoVerticalDerivative(30)));
    }

    #[test]
    fn height_has_no_defect() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = sp("1,2,1,3,5,2@11/64");
        let est = approx_diff_defect(&LipschitzField::Height, &p, 1.0, &q(1, 100), &Dyadic::pow2_inv(3), 500, &mut rng)
            .unwrap();
        assert_eq!(est.defects, 0);
        assert_eq!(est.fraction, 0.0);
        assert!(est.ci_high > 0.0 && est.ci_high < 0.01);
    }

    #[test]
    fn distant_cone_has_no_defect() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // apex at distance 1/2 from S, so the cone has radius 1/4
        let cone = Cone::new(sp("1,1,1,1@3/4"), SetDescriptor::jump_level("1/4".parse().unwrap()).unwrap()).unwrap();
        let p = sp("1,2,1,3@1/8");
        let r = Dyadic::pow2_inv(5);
        assert!(d_p(&p, cone.apex()).unwrap() > cone.radius() + &r);
        let est = approx_diff_defect(&LipschitzField::Cone(cone), &p, 0.0, &q(1, 10), &r, 300, &mut rng).unwrap();
        assert_eq!(est.defects, 0);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = sp("1,2@1/4");
        let r = Dyadic::pow2_inv(3);
        let f = LipschitzField::Height;
        assert!(approx_diff_defect(&f, &p, 1.0, &q(1, 10), &r, 0, &mut rng).is_err());
        assert!(approx_diff_defect(&f, &p, f64::NAN, &q(1, 10), &r, 5, &mut rng).is_err());
        assert!(approx_diff_defect(&f, &p, 1.0, &q(0, 1), &r, 5, &mut rng).is_err());
    }

    #[test]
    fn wilson_interval_brackets_fraction() {
        let e = DefectEstimate::from_counts(30, 1000);
        assert!(e.ci_low < 0.03 && 0.03 < e.ci_high);
        let e = DefectEstimate::from_counts(1000, 1000);
        assert_eq!(e.ci_high, 1.0);
    }
}
