mod common;

use common::{base_point, positive_dyadic, related_bases, related_points, space_point, unit_dyadic};
use jumpspace::base::{agreement_depth, d_m, nu};
use jumpspace::grid::grid_window;
use jumpspace::jump::{ball_measure, d_infty, d_p};
use jumpspace::{BallDecomposition, Dyadic, Interval, IntervalUnion, Rational, SpacePoint};
use num_traits::{One, Zero};
use proptest::prelude::*;

const DEPTH: usize = 6;

fn three() -> Dyadic {
    Dyadic::from_int(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pseudometric_axioms(
        (p, q) in related_points(DEPTH, 10),
        z in space_point(DEPTH, 10),
    ) {
        prop_assert!(d_p(&p, &p).unwrap().is_zero());
        let pq = d_p(&p, &q).unwrap();
        prop_assert_eq!(&pq, &d_p(&q, &p).unwrap());
        prop_assert!(pq <= &d_p(&p, &z).unwrap() + &d_p(&z, &q).unwrap());
    }

    #[test]
    fn vertical_and_sup_bounds((p, q) in related_points(DEPTH, 12)) {
        let d = d_p(&p, &q).unwrap();
        prop_assert!((p.height() - q.height()).abs() <= d);
        prop_assert!(d <= &three() * &d_infty(&p, &q).unwrap());
    }

    #[test]
    fn base_metric_is_ultrametric((a, b) in related_bases(DEPTH), c in base_point(DEPTH)) {
        let ab = d_m(&a, &b).unwrap();
        let ac = d_m(&a, &c).unwrap();
        let cb = d_m(&c, &b).unwrap();
        let bound = if ac >= cb { ac } else { cb };
        prop_assert!(ab <= bound);
        let m = agreement_depth(&a, &b).unwrap();
        prop_assert!(m >= 1);
        if a != b {
            prop_assert_eq!(ab, Dyadic::pow2_inv(m as u32 + 1));
        } else {
            prop_assert_eq!(m, DEPTH);
        }
    }

    #[test]
    fn ball_measure_grows_with_radius(c in space_point(DEPTH, 10), r in positive_dyadic(10, 0), s in positive_dyadic(10, 0)) {
        let (small, large) = if r <= s { (r, s) } else { (s, r) };
        prop_assert!(ball_measure(&c, &small).unwrap() <= ball_measure(&c, &large).unwrap());
        prop_assert!(ball_measure(&c, &large).unwrap() > Rational::zero());
    }

    #[test]
    fn huge_balls_have_full_measure(c in space_point(DEPTH, 10), r in positive_dyadic(4, 3)) {
        let r = &r + &Dyadic::from_int(2);
        prop_assert_eq!(ball_measure(&c, &r).unwrap(), Rational::one());
    }

    #[test]
    fn sections_are_nested_and_bounded(c in space_point(DEPTH, 12), r in positive_dyadic(10, 0)) {
        let ball = BallDecomposition::new(&c, &r).unwrap();
        let window = IntervalUnion::single(Interval::centered(c.height(), &r).unwrap());
        let sections: Vec<_> = ball.sections().collect();
        for pair in sections.windows(2) {
            prop_assert!(pair[0].raw.is_subset_of(&pair[1].raw));
        }
        for s in &sections {
            prop_assert!(s.raw.is_subset_of(&window));
        }
    }

    #[test]
    fn sections_match_literal_tents(c in space_point(DEPTH, 12), r in positive_dyadic(10, 0)) {
        let ball = BallDecomposition::new(&c, &r).unwrap();
        let t = c.height();
        for s in ball.levels() {
            let mut literal = IntervalUnion::new();
            for u in grid_window(s.level as u32, t, &r).unwrap() {
                let half = &r - &(t - &u).abs();
                literal.insert(Interval::centered(&u, &half).unwrap());
            }
            prop_assert_eq!(s.raw.total_length(), literal.total_length());
            prop_assert!(s.raw.is_subset_of(&literal) && literal.is_subset_of(&s.raw));
        }
    }

    #[test]
    fn membership_matches_distance(
        pairs in prop::collection::vec(related_points(DEPTH, 12), 8),
        r in positive_dyadic(8, 0),
    ) {
        for (c, q) in pairs {
            let ball = BallDecomposition::new(&c, &r).unwrap();
            prop_assert_eq!(ball.contains(&q).unwrap(), d_p(&c, &q).unwrap() < r);
        }
    }

    #[test]
    fn membership_near_the_centre((a, b) in related_bases(DEPTH), t in unit_dyadic(10), r in positive_dyadic(8, 0), offsets in prop::collection::vec(-64i64..=64, 12)) {
        let c = SpacePoint::new(a, t.clone()).unwrap();
        let ball = BallDecomposition::new(&c, &r).unwrap();
        for o in offsets {
            let h = &t + &r.mul_int(o).div_pow2(5);
            let Ok(q) = SpacePoint::new(b.clone(), h) else { continue };
            prop_assert_eq!(ball.contains(&q).unwrap(), d_p(&c, &q).unwrap() < r);
        }
    }

    #[test]
    fn outside_the_band_holds_a_third(b in base_point(DEPTH), j in 1u32..14, frac in unit_dyadic(14)) {
        // each tent keeps at least a third of its length outside the band,
        // as long as the window (t - r, t + r) stays inside [0, 1]
        let r = Dyadic::pow2_inv(j);
        let t = &r + &(&(&Dyadic::one() - &r.double()) * &frac);
        let c = SpacePoint::new(b, t).unwrap();
        let ball = BallDecomposition::new(&c, &r).unwrap();
        let band = IntervalUnion::single(Interval::centered(c.height(), &r.half()).unwrap());
        let total = ball.measure();
        prop_assert!(ball.measure_restricted(&band) * Rational::from_integer(3.into()) >= total);
    }
}

#[test]
fn nu_ratios() {
    for k in 0..20 {
        assert_eq!(nu(k) / nu(k + 1), Rational::from_integer((k + 1).into()));
    }
}
