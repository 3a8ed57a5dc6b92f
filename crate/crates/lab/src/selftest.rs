//! Library-versus-oracle equivalence checks at small depth.

use jumpspace::jump::{ball_measure, d_p, BallDecomposition};
use jumpspace::SpacePoint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::oracle;
use crate::random;

/// Deepest base space the suite runs on.
pub const MAX_DEPTH: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub mismatches: usize,
    /// The first mismatching case, for the report.
    pub example: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// `Err` carries a description of the mismatch or library failure.
type Check = fn(usize, &mut ChaCha8Rng) -> Result<(), String>;

/// Height level of random inputs; fine enough to land between the grids of
/// every resolved level.
const LEVEL: u32 = 10;

fn center(depth: usize, rng: &mut ChaCha8Rng) -> SpacePoint {
    random::point(depth, LEVEL, rng)
}

fn island_measure(depth: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let x = random::base(depth, rng);
    let k = rng.random_range(0..=depth);
    let lib = x.island(k).map_err(|e| e.to_string())?.measure();
    let want = oracle::island_measure_enumerated(&x, k);
    if lib != want {
        return Err(format!("island({x}, {k}): {lib} vs {want}"));
    }
    Ok(())
}

fn distance(depth: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = center(depth, rng);
    let q = random::related_point(&p, LEVEL, rng);
    let lib = d_p(&p, &q).map_err(|e| e.to_string())?;
    let want = oracle::d_p_brute(&p, &q, LEVEL);
    if lib != want {
        return Err(format!("d_p({p}, {q}): {lib} vs {want}"));
    }
    Ok(())
}

fn measure(depth: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = center(depth, rng);
    let r = random::radius(LEVEL, 1, rng);
    let lib = ball_measure(&c, &r).map_err(|e| e.to_string())?;
    let want = oracle::ball_measure_enumerated(&c, &r);
    if lib != want {
        return Err(format!("mu(B({c}, {r})): {lib} vs {want}"));
    }
    Ok(())
}

fn membership(depth: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = center(depth, rng);
    let r = random::radius(LEVEL, 1, rng);
    let ball = BallDecomposition::new(&c, &r).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let q = random::related_point(&c, LEVEL, rng);
        let lib = ball.contains(&q).map_err(|e| e.to_string())?;
        let want = oracle::d_p_brute(&c, &q, LEVEL) < r;
        if lib != want {
            return Err(format!("{q} in B({c}, {r}): {lib} vs {want}"));
        }
    }
    Ok(())
}

fn sampler(depth: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = center(depth, rng);
    let r = random::radius(LEVEL, 1, rng);
    let ball = BallDecomposition::new(&c, &r).map_err(|e| e.to_string())?;
    let sampler = ball.sampler().map_err(|e| e.to_string())?;
    let bound = oracle::to_fixed(&r);
    for _ in 0..20 {
        let q = sampler.sample(rng).map_err(|e| e.to_string())?;
        if oracle::d_p_levels(&c, &q) >= bound {
            return Err(format!("sample {q} outside B({c}, {r})"));
        }
    }
    Ok(())
}

pub const CHECKS: [(&str, Check); 5] = [
    ("island_measure", island_measure),
    ("distance_vs_brute_force", distance),
    ("ball_measure_vs_rectangles", measure),
    ("membership_vs_brute_force", membership),
    ("sampler_inside_ball", sampler),
];

/// Runs every check `cases` times; check `i` draws from stream `i` of `seed`.
pub fn run(depth: usize, cases: usize, seed: u64) -> Vec<CheckResult> {
    assert!((1..=MAX_DEPTH).contains(&depth));
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = random::stream(seed, i as u64);
            let mut mismatches = 0;
            let mut example = None;
            for _ in 0..cases {
                if let Err(msg) = check(depth, &mut rng) {
                    mismatches += 1;
                    example.get_or_insert(msg);
                }
            }
            CheckResult { name, cases, mismatches, example }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_small_depth() {
        for depth in 1..=MAX_DEPTH {
            for r in run(depth, 15, 11) {
                assert!(r.passed(), "{}: {:?}", r.name, r.example);
            }
        }
    }
}
