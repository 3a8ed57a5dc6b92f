use std::path::Path;
use std::process::{Command, Output};

use jumpspace::{Dyadic, Rational, SpacePoint};
use jumpspace_lab::oracle;
use serde_json::Value;

const GOLDEN_NONDOUBLING: &str = include_str!("golden/nondoubling_11_64.csv");
const BASE_12: &str = "1,2,1,4,1,1,1,1,1,1,1,1";

fn jumpspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumpspace")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn rational(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn nondoubling_matches_golden_and_oracle() {
    let out = jumpspace(&["nondoubling", "--depth", "12", "--base", BASE_12, "--height", "11/64", "--levels", "3..8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), GOLDEN_NONDOUBLING);

    let (header, rows) = csv_rows(GOLDEN_NONDOUBLING);
    let center = SpacePoint::new(BASE_12.parse().unwrap(), "11/64".parse().unwrap()).unwrap();
    let mut evaluated = 0;
    for row in &rows {
        let n: u32 = row[column(&header, "n")].parse().unwrap();
        if row[column(&header, "status")] != "ok" {
            assert!(row[column(&header, "status")].starts_with("skipped"));
            continue;
        }
        evaluated += 1;
        let small: Dyadic = row[column(&header, "small_radius")].parse().unwrap();
        let large: Dyadic = row[column(&header, "large_radius")].parse().unwrap();
        assert_eq!(small, Dyadic::new(1, n + 2));
        assert_eq!(large, Dyadic::new(1, n));
        let ms = oracle::ball_measure_grouped(&center, &small);
        let ml = oracle::ball_measure_grouped(&center, &large);
        assert_eq!(rational(&row[column(&header, "small_measure")]), ms);
        assert_eq!(rational(&row[column(&header, "large_measure")]), ml);
        let ratio = ml / ms;
        assert_eq!(rational(&row[column(&header, "ratio")]), ratio);
        assert!(ratio >= Rational::from_integer((2 * (n + 1)).into()));
    }
    assert_eq!(evaluated, 3);
}

#[test]
fn ball_detail_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    let out = jumpspace(&[
        "ball",
        "--depth",
        "6",
        "--base",
        "1,2,1,4,1,6",
        "--height",
        "11/64",
        "--radius",
        "1/16",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&path);
    assert_eq!(report["experiment"], "ball");
    assert!(report.get("timestamp").is_none());
    let center = SpacePoint::new("1,2,1,4,1,6".parse().unwrap(), "11/64".parse().unwrap()).unwrap();
    let r: Dyadic = "1/16".parse().unwrap();
    let measure = rational(report["parameters"]["measure"].as_str().unwrap());
    assert_eq!(measure, oracle::ball_measure_enumerated(&center, &r));

    let (header, rows) = csv_rows(&stdout(&out));
    let total: Rational = rows.iter().map(|row| rational(&row[column(&header, "mass")])).sum();
    assert_eq!(total, measure);
}

#[test]
fn distance_rows_match_brute_force() {
    let p = "1,2,1,4,3@11/64";
    for other in ["1,2,2,1,5@45/128", "1,2,1,4,3@3/8", "1,1,3,2,2@1/1024", "1,2,1,3,1@63/64"] {
        let out =
            jumpspace(&["distance", "--depth", "5", "--base", "1,2,1,4,3", "--height", "11/64", "--other", other]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let (header, rows) = csv_rows(&stdout(&out));
        let row = &rows[0];
        let (a, b): (SpacePoint, SpacePoint) = (p.parse().unwrap(), other.parse().unwrap());
        let d: Dyadic = row[column(&header, "d_p")].parse().unwrap();
        assert_eq!(d, oracle::d_p_brute(&a, &b, 12), "{other}");
        assert_eq!(row[column(&header, "lower_ok")], "true");
        assert_eq!(row[column(&header, "upper_ok")], "true");
    }
}

#[test]
fn preconditions_exit_two() {
    let cover = jumpspace(&["cover", "--depth", "12", "--height", "1365/4096", "--epsilon", "1/10"]);
    assert_eq!(cover.status.code(), Some(2));
    assert!(stderr(&cover).contains("inadmissible cover"), "{}", stderr(&cover));

    let skipped = jumpspace(&["nondoubling", "--depth", "12", "--height", "1/2", "--levels", "3..5"]);
    assert_eq!(skipped.status.code(), Some(2));
    assert!(stderr(&skipped).contains("no requested level"));

    assert_eq!(jumpspace(&["selftest", "--depth", "6"]).status.code(), Some(2));
    assert_eq!(
        jumpspace(&["ball", "--depth", "3", "--base", "1,3,1", "--height", "1/2", "--radius", "1/4"]).status.code(),
        Some(2)
    );
    assert_eq!(jumpspace(&["ball", "--depth", "3", "--height", "3/2", "--radius", "1/4"]).status.code(), Some(2));
    assert_eq!(jumpspace(&["distance", "--depth", "3", "--height", "1/2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, "bogus = 1\n").unwrap();
    assert_eq!(jumpspace(&["run", "--config", unknown.to_str().unwrap()]).status.code(), Some(2));
    let malformed = dir.path().join("malformed.toml");
    std::fs::write(&malformed, "depth = [\n").unwrap();
    assert_eq!(jumpspace(&["run", "--config", malformed.to_str().unwrap()]).status.code(), Some(2));
    let kindless = dir.path().join("kindless.toml");
    std::fs::write(&kindless, "depth = 4\n").unwrap();
    assert_eq!(jumpspace(&["run", "--config", kindless.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn saved_config_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let args = [
        "gamma",
        "--depth",
        "8",
        "--base",
        "1,2,1,4,1,1,1,1",
        "--height",
        "11/64",
        "--radii",
        "1/16,1/256",
        "--delta",
        "1/10",
        "--seed",
        "5",
    ];
    let mut first = args.to_vec();
    first.extend(["--save-config", cfg.to_str().unwrap()]);
    let a = jumpspace(&first);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = jumpspace(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    assert_eq!(a.stdout, b.stdout);

    let (header, rows) = csv_rows(&stdout(&a));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[column(&header, "verified")] == "true"));

    // flags override the file
    let c = jumpspace(&["run", "--config", cfg.to_str().unwrap(), "--radii", "1/16"]);
    assert_eq!(csv_rows(&stdout(&c)).1.len(), 1);
}

#[test]
fn timestamp_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.json");
    let stamped = dir.path().join("stamped.json");
    let base = ["selftest", "--depth", "3", "--cases", "5", "--seed", "9", "--json"];
    let mut a = base.to_vec();
    a.push(plain.to_str().unwrap());
    let mut b = base.to_vec();
    b.extend([stamped.to_str().unwrap(), "--timestamp"]);
    assert_eq!(jumpspace(&a).status.code(), Some(0));
    assert_eq!(jumpspace(&b).status.code(), Some(0));
    assert!(json(&plain).get("timestamp").is_none());
    assert!(json(&stamped)["timestamp"].as_u64().unwrap() > 0);
}

#[test]
fn csv_file_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = ["uniqueness", "--dim", "1", "--increments", "1:1;-1:1;2:1.5"];
    let to_stdout = jumpspace(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--csv", path.to_str().unwrap()]);
    let to_file = jumpspace(&with_file);
    assert_eq!(to_stdout.status.code(), Some(0), "{}", stderr(&to_stdout));
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}
