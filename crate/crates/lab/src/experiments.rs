//! One function per experiment kind, each producing a [`ScanReport`].

use jumpspace::analysis::approx::{approx_diff_defect, vertical_derivative};
use jumpspace::analysis::doubling::{is_in_ek, non_doubling_scan, NonDoublingRow};
use jumpspace::analysis::gamma::{measure_porosity_gamma, GammaConfig};
use jumpspace::analysis::porosity::{nondiff_score, porosity_scan, PorosityConfig};
use jumpspace::analysis::uniqueness::chart_uniqueness_lambda;
use jumpspace::base::agreement_depth;
use jumpspace::cover::{check_admissible, find_admissible_radius};
use jumpspace::field::Cone;
use jumpspace::jump::{d_infty, d_p, LevelSection};
use jumpspace::{rectangle_cover, BallDecomposition, Dyadic, IntervalUnion, LipschitzField, Rational, SpacePoint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{RunError, RunResult};
use crate::params;
use crate::random;
use crate::report::{decimal, ScanReport};
use crate::selftest;

/// A finished run. `failure` is set when the report was produced but the
/// run still has to exit non-zero (every requested row skipped, a failed
/// self-check).
#[derive(Debug)]
pub struct Outcome {
    pub report: ScanReport,
    pub failure: Option<RunError>,
}

impl Outcome {
    fn ok(report: ScanReport) -> Self {
        Self { report, failure: None }
    }

    pub fn exit_code(&self) -> u8 {
        self.failure.as_ref().map_or(0, RunError::exit_code)
    }
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SELFTEST_CASES: usize = 50;
pub const DEFAULT_SAMPLES: usize = 10_000;

pub fn claim(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Distance => "jump-level pseudometric: |t-s| <= d_p <= 3 d_inf",
        ExperimentKind::Ball => "ball decomposition of nu x Lebesgue by agreement depth",
        ExperimentKind::Nondoubling => {
            "nu x Lebesgue is not pointwise doubling: mu(B(x,4r))/mu(B(x,r)) >= 2(n+1) at r = 2^-(n+2), t in E_n"
        }
        ExperimentKind::Cover => {
            "three-rectangle cover of a small ball with uncovered fraction at most 2/(k1+1) < epsilon"
        }
        ExperimentKind::Approxdiff => "Lipschitz functions are approximately differentiable along the height chart",
        ExperimentKind::Porosity => "porosity of jump levels and the sup-of-cones functions built from witnesses",
        ExperimentKind::Gamma => "lower bound for the measure porosity gamma(mu, x, r, delta)",
        ExperimentKind::Uniqueness => "chart uniqueness constant lambda = min_|v|=1 max_i |dphi_i . v| / d_i",
        ExperimentKind::Selftest => "library agrees with enumerating oracles for distances, island and ball measures",
    }
}

pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> RunResult<Outcome> {
    match kind {
        ExperimentKind::Distance => distance(cfg),
        ExperimentKind::Ball => ball(cfg),
        ExperimentKind::Nondoubling => nondoubling(cfg),
        ExperimentKind::Cover => cover(cfg),
        ExperimentKind::Approxdiff => approxdiff(cfg),
        ExperimentKind::Porosity => porosity(cfg),
        ExperimentKind::Gamma => gamma(cfg),
        ExperimentKind::Uniqueness => uniqueness(cfg),
        ExperimentKind::Selftest => self_test(cfg),
    }
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed.unwrap_or(DEFAULT_SEED)
}

fn center(cfg: &ExperimentConfig) -> RunResult<SpacePoint> {
    params::point(cfg.base.as_deref(), params::required(&cfg.height, "height")?, cfg.depth)
}

fn report(kind: ExperimentKind, cfg: &ExperimentConfig, depth: usize, columns: &[&str]) -> ScanReport {
    ScanReport::new(kind.name(), claim(kind), seed(cfg), depth, columns)
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn union_text(u: &IntervalUnion) -> String {
    u.iter().map(|iv| format!("({},{})", iv.lo(), iv.hi())).collect::<Vec<_>>().join(" ")
}

fn ratio_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn distance(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let p = center(cfg)?;
    let q = params::space_point(params::required(&cfg.other, "other")?, p.depth())?;
    let dp = d_p(&p, &q)?;
    let dinf = d_infty(&p, &q)?;
    let vertical = (p.height() - q.height()).abs();
    let three = dinf.mul_int(3);
    let mut r = report(
        ExperimentKind::Distance,
        cfg,
        p.depth(),
        &["p", "q", "agreement", "d_p", "d_inf", "three_d_inf", "vertical", "lower_ok", "upper_ok"],
    );
    r.push_row(vec![
        p.to_string(),
        q.to_string(),
        agreement_depth(p.base(), q.base())?.to_string(),
        dp.to_string(),
        dinf.to_string(),
        three.to_string(),
        vertical.to_string(),
        flag(vertical <= dp),
        flag(dp <= three),
    ]);
    Ok(Outcome::ok(r))
}

fn section_json(s: &LevelSection) -> Value {
    let parts = |u: &IntervalUnion| -> Vec<Value> {
        u.iter().map(|iv| json!([iv.lo().to_string(), iv.hi().to_string()])).collect()
    };
    json!({
        "depth": s.level,
        "weight": s.weight.to_string(),
        "raw": parts(&s.raw),
        "section": parts(&s.section),
        "mass": s.mass().to_string(),
    })
}

fn ball(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let c = center(cfg)?;
    let radius = params::dyadic(params::required(&cfg.radius, "radius")?)?;
    let ball = BallDecomposition::new(&c, &radius)?;
    let measure = ball.measure();
    let mut r = report(
        ExperimentKind::Ball,
        cfg,
        c.depth(),
        &["center", "radius", "agreement", "weight", "section", "section_length", "mass"],
    );
    r.param("center", &c).param("radius", &radius).param("measure", &measure);
    for s in ball.sections() {
        r.push_row(vec![
            c.to_string(),
            radius.to_string(),
            s.level.to_string(),
            s.weight.to_string(),
            union_text(&s.section),
            s.section.total_length().to_string(),
            s.mass().to_string(),
        ]);
    }
    r.detail = Some(json!({
        "measure": measure.to_string(),
        "sections": ball.sections().map(section_json).collect::<Vec<_>>(),
    }));
    Ok(Outcome::ok(r))
}

/// Relation between the bound column and the ball measures.
pub const NONDOUBLING_NOTE: &str =
    "bound = 2 nu_n / nu_(n+1) = 2(n+1); the chained-index form nu_n / nu_(n_(k+1)) is not used";

fn nondoubling(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let c = center(cfg)?;
    let levels = params::levels(params::required(&cfg.levels, "levels")?)?;
    let rows = non_doubling_scan(c.base(), c.height(), &levels)?;
    let mut r = report(
        ExperimentKind::Nondoubling,
        cfg,
        c.depth(),
        &[
            "n",
            "base",
            "height",
            "in_e_n",
            "small_radius",
            "large_radius",
            "small_measure",
            "large_measure",
            "ratio",
            "ratio_decimal",
            "lower_bound",
            "holds",
            "status",
            "note",
        ],
    );
    r.param("center", &c).param("levels", params::required(&cfg.levels, "levels")?);
    r.note(NONDOUBLING_NOTE);
    let base = c.base().to_string();
    let height = c.height().to_string();
    for row in &rows {
        let n = row.level();
        let in_e = is_in_ek(c.height(), n)?;
        let cells = match row {
            NonDoublingRow::Evaluated(v) => vec![
                v.small_radius.to_string(),
                v.large_radius.to_string(),
                v.small_measure.to_string(),
                v.large_measure.to_string(),
                v.ratio.to_string(),
                decimal(ratio_f64(&v.ratio)),
                v.lower_bound.to_string(),
                flag(v.holds()),
                if v.holds() { "ok".into() } else { "violation".into() },
                NONDOUBLING_NOTE.into(),
            ],
            NonDoublingRow::Skipped { reason, .. } => {
                let mut cells = vec![String::new(); 8];
                cells.push(format!("skipped: {}", reason.describe()));
                cells.push(String::new());
                cells
            }
        };
        let mut full = vec![n.to_string(), base.clone(), height.clone(), flag(in_e)];
        full.extend(cells);
        r.push_row(full);
    }
    let skipped: Vec<String> =
        rows.iter().filter(|row| row.values().is_none()).map(|row| row.level().to_string()).collect();
    if !skipped.is_empty() {
        r.note(format!("skipped levels: {}", skipped.join(",")));
    }
    let failure = if !rows.is_empty() && skipped.len() == rows.len() {
        Some(RunError::precondition(format!(
            "no requested level is usable for height {height} (skipped: {})",
            skipped.join(",")
        )))
    } else {
        None
    };
    Ok(Outcome { report: r, failure })
}

fn cover(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let c = center(cfg)?;
    let eps = params::positive(params::rational(params::required(&cfg.epsilon, "epsilon")?)?, "epsilon")?;
    let radius = match &cfg.radius {
        Some(text) => params::dyadic(text)?,
        None => find_admissible_radius(&c, &eps, 64).ok_or_else(|| {
            RunError::precondition(format!(
                "no admissible radius 2^-j with j <= 64 for {c} at epsilon {eps}: {}",
                check_admissible(&c, &Dyadic::pow2_inv(64), &eps).err().map_or_else(String::new, |e| e.to_string())
            ))
        })?,
    };
    let cov = rectangle_cover(&c, &radius, &eps)?;
    let mut r = report(
        ExperimentKind::Cover,
        cfg,
        c.depth(),
        &[
            "center",
            "radius",
            "epsilon",
            "rectangle",
            "level",
            "island",
            "rect_center",
            "half_width",
            "rect_measure",
            "ball_measure",
            "covered_measure",
            "uncovered_fraction",
            "bound",
            "contained",
            "meets",
        ],
    );
    r.param("center", &c).param("radius", &radius).param("epsilon", &eps);
    let meets = cov.meets(&eps);
    for (i, rect) in cov.rectangles.iter().enumerate() {
        let prefix = rect.island().prefix().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        r.push_row(vec![
            c.to_string(),
            radius.to_string(),
            eps.to_string(),
            (i + 1).to_string(),
            rect.level().to_string(),
            prefix,
            rect.center().to_string(),
            rect.half_width().to_string(),
            rect.measure().to_string(),
            cov.ball_measure.to_string(),
            cov.covered_measure.to_string(),
            cov.uncovered_fraction.to_string(),
            cov.bound.to_string(),
            flag(cov.contained),
            flag(meets),
        ]);
    }
    let failure = (!meets).then(|| RunError::Internal(anyhow::anyhow!("cover misses its guarantee")));
    Ok(Outcome { report: r, failure })
}

fn approxdiff(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let p = center(cfg)?;
    let set = cfg.set.as_deref().map(|s| params::set(s, p.depth())).transpose()?;
    let field_text = cfg.field.as_deref().unwrap_or("height");
    let f = params::field(field_text, set.as_ref(), p.depth())?;
    let eps = params::positive(params::rational(cfg.epsilon.as_deref().unwrap_or("1/10"))?, "epsilon")?;
    let radius = params::dyadic(cfg.radius.as_deref().unwrap_or("1/2^10"))?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let (df, source) = match cfg.derivative {
        Some(df) => (df, "supplied".to_string()),
        None => {
            let tol = params::positive(params::rational(cfg.tolerance.as_deref().unwrap_or("1/2^20"))?, "tolerance")?;
            let d = vertical_derivative(&f, &p, &tol, 60)?;
            (d.value(), format!("estimated at 2^-{}: {}", d.exponent, d.estimate))
        }
    };
    let mut rng = random::stream(seed(cfg), 0);
    let est = approx_diff_defect(&f, &p, df, &eps, &radius, samples, &mut rng)?;
    let mut r = report(
        ExperimentKind::Approxdiff,
        cfg,
        p.depth(),
        &[
            "point",
            "field",
            "derivative",
            "derivative_source",
            "epsilon",
            "radius",
            "samples",
            "defects",
            "fraction",
            "ci_low",
            "ci_high",
        ],
    );
    r.param("point", &p).param("field", field_text).param("seed", seed(cfg));
    if let Some(s) = &cfg.set {
        r.param("set", s);
    }
    r.push_row(vec![
        p.to_string(),
        field_text.to_string(),
        format!("{df:?}"),
        source,
        eps.to_string(),
        radius.to_string(),
        est.samples.to_string(),
        est.defects.to_string(),
        decimal(est.fraction),
        decimal(est.ci_low),
        decimal(est.ci_high),
    ]);
    r.note("ci columns: 95% Wilson score interval");
    Ok(Outcome::ok(r))
}

fn porosity(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let x0 = center(cfg)?;
    let set = params::set(params::required(&cfg.set, "set")?, x0.depth())?;
    let radii = params::dyadics(cfg.radii.as_deref().unwrap_or("1/2^4,1/2^6,1/2^8"))?;
    let config = PorosityConfig {
        random_budget: cfg.budget.unwrap_or(PorosityConfig::default().random_budget),
        ..Default::default()
    };
    let mut rng = random::stream(seed(cfg), 0);
    let scan = porosity_scan(&set, &x0, &radii, &config, &mut rng)?;
    let mut r = report(
        ExperimentKind::Porosity,
        cfg,
        x0.depth(),
        &["subject", "radius", "candidates", "best_ratio", "witness", "dist_to_set", "dist_to_subject", "verified"],
    );
    r.param("subject", &x0).param("set", params::required(&cfg.set, "set")?);
    for res in &scan.per_radius {
        let (witness, to_set, to_subject, verified) = match &res.best {
            Some(w) => {
                (w.witness.to_string(), w.dist_to_set.to_string(), w.dist_to_subject.to_string(), flag(w.verify(&set)?))
            }
            None => Default::default(),
        };
        r.push_row(vec![
            x0.to_string(),
            res.radius.to_string(),
            res.candidates.to_string(),
            res.best_ratio.to_string(),
            witness,
            to_set,
            to_subject,
            verified,
        ]);
    }
    r.note("best_ratio is d(x,S)/d(x,x0) unhalved");
    let witnesses: Vec<_> = scan.certificates().cloned().collect();
    let cones = witnesses.iter().filter_map(|w| Cone::new(w.witness.clone(), set.clone()).ok()).collect::<Vec<_>>();
    if !witnesses.is_empty() && !cones.is_empty() {
        let score = nondiff_score(&LipschitzField::sup_cones(cones), &x0, &witnesses)?;
        let min_ratio = witnesses.iter().map(|w| w.ratio.clone()).min().expect("non-empty");
        r.param("nondiff_score_sup_cones", &score).param("min_ratio", &min_ratio);
    }
    Ok(Outcome::ok(r))
}

fn gamma(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let x = center(cfg)?;
    let radii = match (&cfg.radii, &cfg.radius) {
        (Some(list), _) => params::dyadics(list)?,
        (None, Some(r)) => vec![params::dyadic(r)?],
        (None, None) => return Err(RunError::precondition("missing --radius or --radii")),
    };
    let delta = params::positive(params::rational(params::required(&cfg.delta, "delta")?)?, "delta")?;
    let defaults = GammaConfig::default();
    let config = GammaConfig {
        resolution: cfg.resolution.unwrap_or(defaults.resolution),
        budget: cfg.budget.unwrap_or(defaults.budget),
        ..defaults
    };
    let mut r = report(
        ExperimentKind::Gamma,
        cfg,
        x.depth(),
        &[
            "x",
            "r",
            "delta",
            "gamma",
            "gamma_over_r",
            "z",
            "dist_xz",
            "measure_z",
            "measure_x",
            "centers_tried",
            "verified",
        ],
    );
    r.param("x", &x).param("delta", &delta).param("resolution", config.resolution).param("budget", config.budget);
    for (i, radius) in radii.iter().enumerate() {
        let mut rng = random::stream(seed(cfg), i as u64);
        let cert = measure_porosity_gamma(&x, radius, &delta, &config, &mut rng)?;
        r.push_row(vec![
            x.to_string(),
            radius.to_string(),
            delta.to_string(),
            cert.gamma.to_string(),
            cert.ratio().to_string(),
            cert.z.as_ref().map(ToString::to_string).unwrap_or_default(),
            cert.dist_xz.to_string(),
            cert.measure_z.to_string(),
            cert.measure_x.to_string(),
            cert.centers_tried.to_string(),
            flag(cert.verify()?),
        ]);
    }
    Ok(Outcome::ok(r))
}

fn uniqueness(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let incs = params::increments(params::required(&cfg.increments, "increments")?)?;
    let n = cfg.dim.unwrap_or(1);
    let est = chart_uniqueness_lambda(&incs, n)?;
    let mut r =
        report(ExperimentKind::Uniqueness, cfg, cfg.depth.unwrap_or(0), &["dim", "increments", "lambda", "grid_error"]);
    r.param("increments", params::required(&cfg.increments, "increments")?);
    r.push_row(vec![
        n.to_string(),
        incs.len().to_string(),
        format!("{:?}", est.lambda),
        format!("{:?}", est.grid_error),
    ]);
    r.note(
        "lambda uses the last complete block of dim increments; the true minimum lies in [lambda - grid_error, lambda]",
    );
    Ok(Outcome::ok(r))
}

fn self_test(cfg: &ExperimentConfig) -> RunResult<Outcome> {
    let depth = cfg.depth.unwrap_or(selftest::MAX_DEPTH);
    if !(1..=selftest::MAX_DEPTH).contains(&depth) {
        return Err(RunError::precondition(format!(
            "selftest depth must lie in 1..={}, got {depth}",
            selftest::MAX_DEPTH
        )));
    }
    let cases = cfg.cases.unwrap_or(DEFAULT_SELFTEST_CASES);
    let results = selftest::run(depth, cases, seed(cfg));
    let mut r =
        report(ExperimentKind::Selftest, cfg, depth, &["check", "depth", "cases", "mismatches", "status", "example"]);
    r.param("cases", cases);
    for res in &results {
        r.push_row(vec![
            res.name.to_string(),
            depth.to_string(),
            res.cases.to_string(),
            res.mismatches.to_string(),
            if res.passed() { "pass".into() } else { "fail".into() },
            res.example.clone().unwrap_or_default(),
        ]);
    }
    let failed: Vec<_> = results.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    let failure =
        (!failed.is_empty()).then(|| RunError::Internal(anyhow::anyhow!("self-checks failed: {}", failed.join(", "))));
    Ok(Outcome { report: r, failure })
}

/// Writes the report where the config asks; CSV goes to `stdout` when no
/// path is configured.
pub fn emit(outcome: &mut Outcome, cfg: &ExperimentConfig, stdout: &mut dyn std::io::Write) -> anyhow::Result<()> {
    if cfg.timestamp == Some(true) {
        let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH)?;
        outcome.report.timestamp = Some(now.as_secs());
    }
    match &cfg.csv {
        Some(path) => outcome.report.write_csv(path)?,
        None => stdout.write_all(outcome.report.to_csv()?.as_bytes())?,
    }
    if let Some(path) = &cfg.json {
        outcome.report.write_json(path)?;
    }
    Ok(())
}

/// Runs `kind` and maps any outcome to the process exit status.
pub fn execute(
    kind: ExperimentKind,
    cfg: &ExperimentConfig,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> u8 {
    let mut outcome = match run(kind, cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(&mut outcome, cfg, stdout) {
        let _ = writeln!(stderr, "error: {e:#}");
        return 1;
    }
    if let Some(e) = &outcome.failure {
        let _ = writeln!(stderr, "error: {e}");
    }
    outcome.exit_code()
}
