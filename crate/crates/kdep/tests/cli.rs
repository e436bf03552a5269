use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const U24: &str = "name: U24\nkind: bases\ns: 4\nr: 2\nbasis: 0 1\nbasis: 0 2\nbasis: 0 3\nbasis: 1 2\nbasis: 1 3\nbasis: 2 3\n";

fn kdep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdep")).args(args).env_remove("KDEP_WORKERS").output().expect("run kdep")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn d_lines(text: &str) -> Vec<String> {
    text.lines().filter(|l| l.starts_with("d(M,") || l.starts_with("r =") || l.starts_with("s =")).map(String::from).collect()
}

#[test]
fn profile_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = kdep(&["profile", &write(dir.path(), "u24", U24)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("d(M,0) = 0/6"));
    let out = kdep(&["profile", &write(dir.path(), "m", "kind: matrix\nq: 2\nrow: 1 0 1 1\nrow: 0 1 1 0\n")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("d(M,0) = 1/6"));
}

#[test]
fn malformed_documents_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let out = kdep(&["profile", &write(dir.path(), "bad", "kind: matrix\nq: 2\nrow: 1 0\nrow: 0 2\n")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains(":4:8:"), "{}", stderr(&out));
    let out = kdep(&["profile", &write(dir.path(), "bad2", "kind: bases\ns: 4\nr: 2\nbasis: 0 1\nbasis: 2 3\n")]);
    assert_eq!(code(&out), 2);
    let out = kdep(&["profile", &write(dir.path(), "q6", "kind: matrix\nq: 6\nrow: 1\n")]);
    assert_eq!(code(&out), 4);
}

#[test]
fn construct_round_trips_through_profile() {
    let dir = tempfile::tempdir().unwrap();
    for (q, r, n, s) in [(2, 2, 2, 6), (2, 3, 1, 7), (3, 2, 2, 8)] {
        let path = dir.path().join(format!("c{q}{r}{n}"));
        let p = path.to_str().unwrap();
        let built = kdep(&["construct", "--q", &q.to_string(), "--r", &r.to_string(), "--n", &n.to_string(), "--out", p]);
        assert_eq!(code(&built), 0);
        assert!(stdout(&built).contains(&format!("s = {s}\n")));
        let read = kdep(&["profile", p]);
        assert_eq!(code(&read), 0);
        assert_eq!(d_lines(&stdout(&built)), d_lines(&stdout(&read)));
    }
    let built = kdep(&["construct", "--q", "2", "--r", "2", "--n", "2", "--out", dir.path().join("x").to_str().unwrap()]);
    assert!(stdout(&built).contains("d(M,0) = 3/15 (0.2)"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let u24 = write(dir.path(), "u24", U24);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "2"])), 10);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "5"])), 0);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "6"])), 4);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "4,5"])), 0);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "5,2"])), 10);
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "2", "--no-search"])), 0);
    assert_eq!(code(&kdep(&["bounds", "--q", "2", "--r", "2", "--k", "3"])), 5);
    assert_eq!(code(&kdep(&["bounds", "--q", "2", "--r", "2", "--k", "0", "--p", "0"])), 5);
    assert_eq!(code(&kdep(&["bounds", "--q", "10", "--r", "2", "--k", "0"])), 4);
    assert_eq!(code(&kdep(&["search", "--q", "2", "--r", "2", "--k", "0", "--s", "1"])), 5);
    assert_eq!(code(&kdep(&["search", "--q", "3", "--r", "4", "--k", "1", "--d", "0", "--budget", "1000"])), 3);
    assert_eq!(code(&kdep(&["sample", "--q", "2", "--r", "2", "--s", "3", "--k", "0", "--trials", "0"])), 5);
    assert_eq!(code(&kdep(&["construct", "--q", "2", "--r", "2", "--n", "0"])), 5);
    assert_eq!(code(&kdep(&["construct", "--q", "16", "--r", "6", "--n", "1"])), 3);
    assert_eq!(code(&kdep(&["profile", dir.path().join("missing").to_str().unwrap()])), 1);
    assert_eq!(code(&kdep(&["profile", &u24, "--budget", "3"])), 3);
    assert_eq!(code(&kdep(&["frobnicate"])), 2);
}

#[test]
fn bounds_examples() {
    let out = stdout(&kdep(&["bounds", "--q", "2", "--r", "3", "--k", "0"]));
    assert!(out.contains("ind_upper_zero_dep = 4\n"));
    assert!(out.contains("pi = 24/49 "));
    let out = stdout(&kdep(&["bounds", "--q", "2", "--r", "2", "--k", "0", "--p", "0.5"]));
    assert!(out.contains("markov_dependence(p=1/2) = 2/3 "));
    let out = kdep(&["bounds", "--q", "2", "--r", "2", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ind_upper_zero_dep = undefined"));
    assert!(stdout(&out).contains("pi = 1/1"));
}

#[test]
fn search_rows_append_and_feed_certify() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.txt");
    let t = table.to_str().unwrap();
    let out = kdep(&["search", "--q", "2", "--r", "2", "--k", "0", "--d", "0", "--out", t]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "row: quantity=Ind q=2 r=2 k=0 d=0/1 value=3 witness=1,2,3 provenance=brute-force\n");
    let out = kdep(&["search", "--q", "2", "--r", "2", "--k", "0", "--s", "4", "--out", t]);
    assert!(stdout(&out).contains("value=1/6"));
    let text = std::fs::read_to_string(&table).unwrap();
    let parsed = kdep::tables::parse_table(&text).unwrap();
    assert_eq!(parsed.rows().len(), 2);
    for row in parsed.rows() {
        assert!(kdep::tables::witness_supports(row));
    }
    let u24 = write(dir.path(), "u24", U24);
    let out = kdep(&["certify", &u24, "--q", "2", "--tables", t]);
    assert_eq!(code(&out), 10);
    assert!(stdout(&out).contains("certificate(q=2).ind = 3"), "{}", stdout(&out));
    let bad = write(dir.path(), "bad", "row: quantity=D q=2\n");
    assert_eq!(code(&kdep(&["certify", &u24, "--q", "2", "--tables", &bad])), 2);
}

/// Every `key = exact (decimal)` line of the text output must match the
/// JSON decimal to 12 significant digits.
#[test]
fn json_decimals_match_text() {
    let dir = tempfile::tempdir().unwrap();
    let u24 = write(dir.path(), "u24", U24);
    let par = write(dir.path(), "par", "kind: matrix\nq: 3\nrow: 1 0 1 1 2\nrow: 0 1 1 2 1\nrow: 0 0 0 1 1\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["profile", &par],
        vec!["certify", &u24, "--q", "2,3"],
        vec!["bounds", "--q", "3", "--r", "3", "--k", "1", "--p", "1/3", "--d", "0.2"],
        vec!["sample", "--q", "3", "--r", "3", "--s", "5", "--k", "0", "--trials", "3000", "--seed", "5"],
    ];
    for args in runs {
        let text = stdout(&kdep(&args));
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let json: Value = serde_json::from_str(&stdout(&kdep(&json_args))).unwrap();
        let mut compared = 0;
        for line in text.lines() {
            let (key, rest) = line.split_once(" = ").unwrap();
            let entry = &json[key];
            if !entry.is_object() {
                continue;
            }
            let (exact, dec) = rest.strip_suffix(')').and_then(|r| r.split_once(" (")).unwrap();
            assert_eq!(entry["exact"], exact, "{key}");
            let printed: f64 = dec.parse().unwrap();
            let parsed = entry["decimal"].as_f64().unwrap();
            assert_eq!(format!("{printed:.11e}"), format!("{parsed:.11e}"), "{key}");
            compared += 1;
        }
        assert!(compared > 0);
    }
}

#[test]
fn csv_output_has_one_row_per_entry() {
    let out = stdout(&kdep(&["bounds", "--q", "2", "--r", "3", "--k", "0", "--format", "csv"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "key,exact,decimal");
    assert!(lines.contains(&"pi,24/49,0.489795918367"));
}

#[test]
fn sampling_is_byte_identical_across_runs_and_workers() {
    let base = ["sample", "--q", "2", "--r", "2", "--s", "3", "--k", "0", "--trials", "100000", "--seed", "7"];
    let first = kdep(&base);
    assert_eq!(code(&first), 0);
    let text = stdout(&first);
    let mean_line = text.lines().find(|l| l.starts_with("mean = ")).unwrap();
    let dec: f64 = mean_line.rsplit_once('(').unwrap().1.trim_end_matches(')').parse().unwrap();
    assert!((dec - 1.0 / 3.0).abs() < 3.0 * 0.5 / (100_000f64).sqrt());
    assert!(text.contains("mean_within_3sigma = true"));
    for workers in ["1", "3"] {
        let mut args = base.to_vec();
        args.extend(["--workers", workers]);
        assert_eq!(kdep(&args).stdout, first.stdout);
    }
    let env_run = Command::new(env!("CARGO_BIN_EXE_kdep")).args(base).env("KDEP_WORKERS", "2").output().unwrap();
    assert_eq!(env_run.stdout, first.stdout);
}
