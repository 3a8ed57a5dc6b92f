#![allow(dead_code)]

use jumpspace::{Dyadic, PointM, SpacePoint};
use proptest::prelude::*;

/// Dyadics in `[0, 1]` with denominator at most `2^max_exp`.
pub fn unit_dyadic(max_exp: u32) -> impl Strategy<Value = Dyadic> {
    (0..=max_exp).prop_flat_map(|e| (0..=(1u64 << e)).prop_map(move |n| Dyadic::new(n, e)))
}

/// Positive dyadics up to `2^max_int`.
pub fn positive_dyadic(max_exp: u32, max_int: u32) -> impl Strategy<Value = Dyadic> {
    (0..=max_exp).prop_flat_map(move |e| (1..=(1u64 << (e + max_int))).prop_map(move |n| Dyadic::new(n, e)))
}

pub fn signed_dyadic(max_exp: u32) -> impl Strategy<Value = Dyadic> {
    (0..=max_exp, -(1i64 << 20)..(1i64 << 20)).prop_map(|(e, n)| Dyadic::new(n, e))
}

pub fn base_point(depth: usize) -> impl Strategy<Value = PointM> {
    (1..=depth as u32).map(|i| (1..=i).boxed()).collect::<Vec<_>>().prop_map(|coords| PointM::new(coords).unwrap())
}

/// Two bases sharing a random prefix, so every agreement depth shows up.
pub fn related_bases(depth: usize) -> impl Strategy<Value = (PointM, PointM)> {
    (base_point(depth), base_point(depth), 0..=depth).prop_map(|(a, b, m)| {
        let mut coords = a.coords()[..m].to_vec();
        coords.extend_from_slice(&b.coords()[m..]);
        (a, PointM::new(coords).unwrap())
    })
}

pub fn space_point(depth: usize, max_exp: u32) -> impl Strategy<Value = SpacePoint> {
    (base_point(depth), unit_dyadic(max_exp)).prop_map(|(b, t)| SpacePoint::new(b, t).unwrap())
}

pub fn related_points(depth: usize, max_exp: u32) -> impl Strategy<Value = (SpacePoint, SpacePoint)> {
    (related_bases(depth), unit_dyadic(max_exp), unit_dyadic(max_exp))
        .prop_map(|((a, b), t, s)| (SpacePoint::new(a, t).unwrap(), SpacePoint::new(b, s).unwrap()))
}
