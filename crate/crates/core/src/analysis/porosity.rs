//! Porosity witnesses and the cone functions built from them.
//!
//! A witness `x` of porosity of `S` at `x_0 in S` is a nearby point with
//! `d(x, S) > eta d(x, x_0)`. Ratios are reported raw, as
//! `d(x, S) / d(x, x_0)`; any halving convention for `eta` is left to the
//! reader of the report.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Cone, LipschitzField};
use crate::grid::neighbors;
use crate::jump::{d_p, distance_to_set, BallDecomposition, SetDescriptor, SpacePoint};
use crate::{Dyadic, Rational};

/// `max(d(y, S)/2 - d(y, x), 0)`.
pub fn cone_value(y: &SpacePoint, set: &SetDescriptor, x: &SpacePoint) -> Result<Dyadic> {
    Cone::new(y.clone(), set.clone())?.value(x)
}

/// Maximum of the cones over a finite family; zero for an empty family.
pub fn sup_cones(family: &[(SpacePoint, SetDescriptor)], x: &SpacePoint) -> Result<Dyadic> {
    let mut best = Dyadic::zero();
    for (y, set) in family {
        let v = cone_value(y, set, x)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Everything needed to re-check a porosity witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub subject: SpacePoint,
    pub witness: SpacePoint,
    pub dist_to_set: Dyadic,
    pub dist_to_subject: Dyadic,
    /// `dist_to_set / dist_to_subject`.
    pub ratio: Rational,
}

impl WitnessCertificate {
    /// `None` when the witness sits at distance zero from the subject.
    pub fn new(subject: &SpacePoint, witness: &SpacePoint, set: &SetDescriptor) -> Result<Option<Self>> {
        let dist_to_subject = d_p(witness, subject)?;
        if dist_to_subject.is_zero() {
            return Ok(None);
        }
        let dist_to_set = distance_to_set(witness, set)?;
        let ratio = dist_to_set.to_rational() / dist_to_subject.to_rational();
        Ok(Some(Self { subject: subject.clone(), witness: witness.clone(), dist_to_set, dist_to_subject, ratio }))
    }

    /// Recomputes both distances from the stored points.
    pub fn verify(&self, set: &SetDescriptor) -> Result<bool> {
        let to_subject = d_p(&self.witness, &self.subject)?;
        let to_set = distance_to_set(&self.witness, set)?;
        Ok(to_subject == self.dist_to_subject
            && to_set == self.dist_to_set
            && !to_subject.is_zero()
            && self.ratio == to_set.to_rational() / to_subject.to_rational())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PorosityConfig {
    /// Vertical probes `(x_0, t_0 +- r/2^i)` for `i = 1..=vertical_probes`.
    pub vertical_probes: u32,
    /// Include the nearest grid points of `I_1..I_{N-1}` above and below `t_0`.
    pub grid_probes: bool,
    /// Random candidates drawn from the ball `B(x_0, r)`.
    pub random_budget: usize,
}

impl Default for PorosityConfig {
    fn default() -> Self {
        Self { vertical_probes: 8, grid_probes: true, random_budget: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusResult {
    pub radius: Dyadic,
    /// Zero when no candidate qualified.
    pub best_ratio: Rational,
    pub best: Option<WitnessCertificate>,
    /// Candidates with `0 < d(x, x_0) < r`.
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PorosityScan {
    pub per_radius: Vec<RadiusResult>,
}

impl PorosityScan {
    pub fn certificates(&self) -> impl Iterator<Item = &WitnessCertificate> {
        self.per_radius.iter().filter_map(|r| r.best.as_ref())
    }
}

fn deterministic_candidates(x0: &SpacePoint, r: &Dyadic, config: &PorosityConfig) -> Vec<SpacePoint> {
    let t = x0.height();
    let mut out = Vec::new();
    for i in 1..=config.vertical_probes {
        let delta = r.div_pow2(i);
        for h in [t + &delta, t - &delta] {
            if let Ok(p) = x0.with_height(h) {
                out.push(p);
            }
        }
    }
    if config.grid_probes {
        for k in 1..x0.depth() as u32 {
            let (below, above) = neighbors(t, k);
            for u in [below, above] {
                if &u != t && (&u - t).abs() < *r {
                    if let Ok(p) = x0.with_height(u) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Best witness ratio per radius over deterministic and random candidates.
pub fn porosity_scan<R: Rng + ?Sized>(
    set: &SetDescriptor,
    x0: &SpacePoint,
    radii: &[Dyadic],
    config: &PorosityConfig,
    rng: &mut R,
) -> Result<PorosityScan> {
    if !distance_to_set(x0, set)?.is_zero() {
        return Err(Error::NotInSet);
    }
    let mut per_radius = Vec::with_capacity(radii.len());
    for r in radii {
        let mut candidates = deterministic_candidates(x0, r, config);
        if config.random_budget > 0 {
            let ball = BallDecomposition::new(x0, r)?;
            let sampler = ball.sampler()?;
            for _ in 0..config.random_budget {
                candidates.push(sampler.sample(rng)?);
            }
        }
        let mut best: Option<WitnessCertificate> = None;
        let mut count = 0;
        for c in &candidates {
            let Some(cert) = WitnessCertificate::new(x0, c, set)? else { continue };
            if cert.dist_to_subject >= *r {
                continue;
            }
            count += 1;
            if best.as_ref().is_none_or(|b| cert.ratio > b.ratio) {
                best = Some(cert);
            }
        }
        per_radius.push(RadiusResult {
            radius: r.clone(),
            best_ratio: best.as_ref().map_or_else(Rational::zero, |b| b.ratio.clone()),
            best,
            candidates: count,
        });
    }
    Ok(PorosityScan { per_radius })
}

/// `max |f(x) - f(x_0)| / d(x, x_0)` over the witnesses: a lower bound for
/// the upper Lipschitz constant of `f` at `x_0`.
pub fn nondiff_score(f: &LipschitzField, x0: &SpacePoint, witnesses: &[WitnessCertificate]) -> Result<Rational> {
    if witnesses.is_empty() {
        return Err(Error::NoWitnesses);
    }
    let f0 = f.eval(x0)?;
    let mut best = Rational::zero();
    for w in witnesses {
        let q = (f.eval(&w.witness)? - &f0).abs() / w.dist_to_subject.to_rational();
        if q > best {
            best = q;
        }
    }
    Ok(best)
}
