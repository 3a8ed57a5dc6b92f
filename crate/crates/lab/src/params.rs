//! Parsers for the textual parameters of a config.

use std::str::FromStr;

use jumpspace::analysis::uniqueness::Increment;
use jumpspace::field::Cone;
use jumpspace::{Dyadic, LipschitzField, PointM, Rational, SetDescriptor, SpacePoint};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{RunError, RunResult};

fn bad(what: &str, text: &str) -> RunError {
    RunError::precondition(format!("malformed {what}: {text:?}"))
}

pub fn required<'a>(value: &'a Option<String>, flag: &str) -> RunResult<&'a str> {
    value.as_deref().ok_or_else(|| RunError::precondition(format!("missing --{flag}")))
}

pub fn dyadic(text: &str) -> RunResult<Dyadic> {
    Ok(text.parse()?)
}

/// `p/q` for any positive `q`, `p/2^e`, an integer, or a finite decimal
/// such as `0.1`.
pub fn rational(text: &str) -> RunResult<Rational> {
    let s = text.trim();
    if s.contains('^') {
        return Ok(dyadic(s)?.to_rational());
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches('-'));
        let mut n = BigInt::from_str(&digits).map_err(|_| bad("rational", text))?;
        if neg {
            n = -n;
        }
        return Ok(Rational::new(n, BigInt::from(10u32).pow(frac.len() as u32)));
    }
    let q = Rational::from_str(s).map_err(|_| bad("rational", text))?;
    Ok(q)
}

/// The centre point: `base` defaults to `1,1,...,1` at `depth`, and an
/// explicit base must have exactly `depth` coordinates when both are given.
pub fn point(base: Option<&str>, height: &str, depth: Option<usize>) -> RunResult<SpacePoint> {
    let base = match (base, depth) {
        (Some(b), d) => {
            let p: PointM = b.parse()?;
            if let Some(d) = d {
                if p.depth() != d {
                    return Err(RunError::precondition(format!(
                        "base has {} coordinates but --depth is {d}",
                        p.depth()
                    )));
                }
            }
            p
        }
        (None, d) => PointM::ones(d.unwrap_or(jumpspace::DEFAULT_DEPTH)),
    };
    Ok(SpacePoint::new(base, dyadic(height)?)?)
}

pub fn space_point(text: &str, depth: usize) -> RunResult<SpacePoint> {
    let p: SpacePoint = text.parse()?;
    if p.depth() != depth {
        return Err(RunError::precondition(format!("point {p} has depth {} but the run uses {depth}", p.depth())));
    }
    Ok(p)
}

/// `a..b` and `a..=b` (both inclusive) or `a,b,c`.
pub fn levels(text: &str) -> RunResult<Vec<u32>> {
    let s = text.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u32 = a.trim().parse().map_err(|_| bad("level range", text))?;
        let b: u32 = b.trim().parse().map_err(|_| bad("level range", text))?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad("level list", text))).collect()
}

pub fn dyadics(text: &str) -> RunResult<Vec<Dyadic>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(dyadic).collect()
}

/// `level:U` or `points:P;P;...`.
pub fn set(text: &str, depth: usize) -> RunResult<SetDescriptor> {
    let (kind, rest) = text.split_once(':').ok_or_else(|| bad("set", text))?;
    match kind.trim() {
        "level" => Ok(SetDescriptor::jump_level(dyadic(rest)?)?),
        "points" => {
            let pts = rest.split(';').map(|p| space_point(p.trim(), depth)).collect::<RunResult<Vec<_>>>()?;
            if pts.is_empty() {
                return Err(bad("set", text));
            }
            Ok(SetDescriptor::FinitePointSet(pts))
        }
        _ => Err(bad("set", text)),
    }
}

/// `height`, `constant:Q`, `distance:P`, `cone:P` or `cones:P;P;...`; cones
/// use `set`.
pub fn field(text: &str, set: Option<&SetDescriptor>, depth: usize) -> RunResult<LipschitzField> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let cone = |p: &str| -> RunResult<Cone> {
        let set = set.ok_or_else(|| RunError::precondition("cone fields need --set"))?;
        Ok(Cone::new(space_point(p.trim(), depth)?, set.clone())?)
    };
    match kind.trim() {
        "height" => Ok(LipschitzField::Height),
        "constant" => Ok(LipschitzField::Constant(rational(rest)?)),
        "distance" => Ok(LipschitzField::DistanceToPoint(space_point(rest.trim(), depth)?)),
        "cone" => Ok(LipschitzField::Cone(cone(rest)?)),
        "cones" => Ok(LipschitzField::sup_cones(rest.split(';').map(cone).collect::<RunResult<_>>()?)),
        _ => Err(bad("field", text)),
    }
}

/// `d1,d2:dist;d1,d2:dist;...`.
pub fn increments(text: &str) -> RunResult<Vec<Increment>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let (delta, dist) = entry.split_once(':').ok_or_else(|| bad("increment", entry))?;
            let delta = delta
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| bad("increment", entry)))
                .collect::<RunResult<Vec<_>>>()?;
            let dist = dist.trim().parse::<f64>().map_err(|_| bad("increment", entry))?;
            Ok(Increment::new(delta, dist))
        })
        .collect()
}

/// `0 < q`.
pub fn positive(q: Rational, name: &str) -> RunResult<Rational> {
    if q <= Rational::zero() {
        return Err(RunError::precondition(format!("{name} must be positive")));
    }
    Ok(q)
}
