use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paley-clique"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Column `name` of a CSV body, skipping `#` comment lines.
fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(i).unwrap().to_string())
        .collect()
}

fn compute(cache: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["compute"];
    args.extend_from_slice(extra);
    args.extend(["--cache", cache.to_str().unwrap()]);
    run(&args)
}

#[test]
fn compute_small_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = compute(&dir.path().join("c.csv"), &["5", "100"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(
        column(&body, "s_exact"),
        // {0, 1, 32, 33, 36, 44} is a 6-clique in P97
        ["2", "3", "3", "4", "4", "5", "5", "5", "5", "5", "6"]
    );
    assert_eq!(column(&body, "q")[0], "5");
    let classes = column(&body, "classification");
    assert_eq!(classes[0], "case_i_not_improved");
    assert_eq!(classes[1], "case_ii_exception");
}

#[test]
fn compute_single_prime_and_bad_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = compute(&dir.path().join("c.csv"), &["5", "5"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(column(&body, "s_exact"), ["2"]);
    assert_eq!(column(&body, "improved"), ["false"]);

    let out = compute(&dir.path().join("d.csv"), &["4", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compute_is_idempotent_and_job_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(compute(&a, &["5", "400"]).status.success());
    let first = std::fs::read_to_string(&a).unwrap();
    assert!(first.starts_with("# schema=1\n"));
    assert!(compute(&a, &["5", "400"]).status.success());
    assert_eq!(first, std::fs::read_to_string(&a).unwrap());

    assert!(compute(&b, &["--range", "5", "400", "--jobs", "4"])
        .status
        .success());
    let strip = |s: &str| -> Vec<String> {
        // wall time is the only column allowed to differ
        s.lines()
            .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
            .collect()
    };
    assert_eq!(strip(&first), strip(&std::fs::read_to_string(&b).unwrap()));
}

#[test]
fn verify_range_passes() {
    let out = run(&["verify", "5", "200"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks passed"));
}

#[test]
fn verify_even_extension_equality() {
    let out = run(&["verify", "9", "--even-k"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("equality case s = 3"));

    let out = run(&["verify", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_injected_fault() {
    let out = run(&["verify", "13", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let body = stdout(&out);
    assert!(
        body.contains("FAILED at q = 13: FAIL strongly regular"),
        "{body}"
    );
}

#[test]
fn classify_buckets() {
    let out = run(&["classify", "13", "--csv"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.contains("total,2,"));
    assert!(body.contains("improved,0,"));

    let out = run(&["classify", "100", "--csv"]);
    let body = stdout(&out);
    let counts: Vec<u64> = column(&body, "count")
        .iter()
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(counts[..4].iter().sum::<u64>(), counts[5]);
    assert_eq!(counts[5], 11);

    let out = run(&["classify", "1000000", "--csv"]);
    let body = stdout(&out);
    let improved = body.lines().find(|l| l.starts_with("improved,")).unwrap();
    let frac: f64 = improved.rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.70..=0.80).contains(&frac), "{frac}");
}

#[test]
fn plotdata_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.csv");
    assert!(compute(&cache, &["5", "100"]).status.success());
    let out = run(&["plotdata", "--cache", cache.to_str().unwrap()]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 12);
    assert!(body.starts_with("p,s,sqrt_p_floor,theorem_bound,c_log2\n"));

    let empty = dir.path().join("empty.csv");
    let out = run(&["plotdata", "--cache", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
