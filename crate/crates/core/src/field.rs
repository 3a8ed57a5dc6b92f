//! Lipschitz functions on the jump space that can be evaluated exactly.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::jump::{d_p, distance_to_set, SetDescriptor, SpacePoint};
use crate::{Dyadic, Rational};

/// `g_y(x) = max(d(y, S)/2 - d(y, x), 0)`: a bump of height `d(y, S)/2`
/// centred at `y`, vanishing outside the ball of that radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    apex: SpacePoint,
    set: SetDescriptor,
    radius: Dyadic,
}

impl Cone {
    pub fn new(apex: SpacePoint, set: SetDescriptor) -> Result<Self> {
        let dist = distance_to_set(&apex, &set)?;
        if dist.is_zero() {
            return Err(Error::DegenerateCone);
        }
        Ok(Self { apex, set, radius: dist.half() })
    }

    pub fn apex(&self) -> &SpacePoint {
        &self.apex
    }

    pub fn set(&self) -> &SetDescriptor {
        &self.set
    }

    /// `d(y, S) / 2`.
    pub fn radius(&self) -> &Dyadic {
        &self.radius
    }

    pub fn value(&self, x: &SpacePoint) -> Result<Dyadic> {
        let v = &self.radius - &d_p(&self.apex, x)?;
        Ok(if v.is_positive() { v } else { Dyadic::zero() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LipschitzField {
    /// `(x, t) -> t`; the chart map.
    Height,
    Constant(Rational),
    /// `d_p(., q)`.
    DistanceToPoint(SpacePoint),
    Cone(Cone),
    /// Pointwise maximum of cones (zero for an empty family).
    SupCones(Vec<Cone>),
    /// `sum c_i f_i`.
    Affine(Vec<(Rational, LipschitzField)>),
}

impl LipschitzField {
    pub fn sup_cones(cones: Vec<Cone>) -> Self {
        Self::SupCones(cones)
    }

    pub fn affine(terms: Vec<(Rational, LipschitzField)>) -> Self {
        Self::Affine(terms)
    }

    /// An upper bound for the Lipschitz constant with respect to `d_p`.
    pub fn lip_bound(&self) -> Rational {
        match self {
            Self::Constant(_) => Rational::zero(),
            Self::Height | Self::DistanceToPoint(_) | Self::Cone(_) | Self::SupCones(_) => {
                Rational::from_integer(1.into())
            }
            Self::Affine(terms) => terms.iter().map(|(c, f)| c.abs() * f.lip_bound()).sum(),
        }
    }

    pub fn eval(&self, p: &SpacePoint) -> Result<Rational> {
        Ok(match self {
            Self::Height => p.height().to_rational(),
            Self::Constant(c) => c.clone(),
            Self::DistanceToPoint(q) => d_p(p, q)?.to_rational(),
            Self::Cone(cone) => cone.value(p)?.to_rational(),
            Self::SupCones(cones) => {
                let mut best = Dyadic::zero();
                for cone in cones {
                    let v = cone.value(p)?;
                    if v > best {
                        best = v;
                    }
                }
                best.to_rational()
            }
            Self::Affine(terms) => {
                let mut acc = Rational::zero();
                for (c, f) in terms {
                    acc += c * f.eval(p)?;
                }
                acc
            }
        })
    }

    /// Boxed form, for building nested combinations.
    pub fn boxed(self) -> Box<Self> {
        Box::new(self)
    }
}
