use std::fs;
use std::process::{Command, Output};

fn vigemin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vigemin"))
        .args(args)
        .env_remove("VIGEMIN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn pi_prints_the_count() {
    let out = vigemin(&["pi", "--w", "A", "--gamma", "A", "--k", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "7\n");

    let out = vigemin(&["pi", "--w", "AA", "--gamma", "AA", "--k", "2"]);
    assert_eq!(stdout(&out), "1\n");

    let out = vigemin(&["pi", "--w", "A", "C", "G", "T", "--gamma", "A", "--k", "2"]);
    assert_eq!(stdout(&out), "A,7\nC,5\nG,3\nT,1\n");
}

#[test]
fn pi_usage_errors_exit_2() {
    let out = vigemin(&["pi", "--w", "AA", "--gamma", "AA", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("k < m"), "{}", stderr(&out));

    let out = vigemin(&["pi", "--w", "AX", "--gamma", "AA", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = vigemin(&["pi", "--w", "A", "--gamma", "AA", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pi_on_other_alphabets_and_debug_dump() {
    let out = vigemin(&["--alphabet", "b:1", "pi", "--w", "0", "--gamma", "0", "--k", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    // 2^3 - 1^3
    assert_eq!(stdout(&out), "7\n");

    let out = vigemin(&["pi", "--w", "AC", "--gamma", "GT", "--k", "5", "--debug"]);
    assert!(out.status.success());
    assert!(!stderr(&out).is_empty());
}

#[test]
fn enumerate_writes_csv_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let p = path.to_str().unwrap();
    let out = vigemin(&["enumerate", "--m", "1", "--k", "2", "--gamma", "A", "--out", p]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&path).unwrap(), "mmer,count\nA,7\nC,5\nG,3\nT,1\n");
    let line = stdout(&out);
    assert!(line.contains("total=16") && line.contains("balanced=4"), "{line}");

    let out = vigemin(&[
        "enumerate", "--m", "1", "--k", "2", "--gamma", "T", "--out", p, "--sorted", "--threads", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "rank,mmer,count\n1,T,7\n2,G,5\n3,C,3\n4,A,1\n"
    );
}

#[test]
fn enumerate_key_shorthands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.csv");
    let p = p.to_str().unwrap();
    for (order, key) in [("lex", "AAAA"), ("antilex", "ATTT"), ("alternating", "ATAT")] {
        let out = vigemin(&["enumerate", "--m", "4", "--k", "6", "--order", order, "--out", p]);
        assert!(stdout(&out).contains(&format!("gamma={key} ")), "{}", stdout(&out));
    }
    let run = |seed: &str| {
        stdout(&vigemin(&[
            "enumerate", "--m", "5", "--k", "6", "--random-key", "G", "--seed", seed, "--out", p,
        ]))
    };
    let first = run("3");
    assert!(first.contains("gamma=G"), "{first}");
    let strip = |s: &str| s.split(" elapsed").next().unwrap().to_string();
    assert_eq!(strip(&first), strip(&run("3")));

    let out = vigemin(&["enumerate", "--m", "3", "--k", "2", "--gamma", "AAA", "--out", p]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_reports_unwritable_output() {
    let out = vigemin(&[
        "enumerate", "--m", "1", "--k", "2", "--gamma", "A", "--out", "/nonexistent/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/x.csv"));
}

#[test]
fn verify_against_exhaustive_scan() {
    let out = vigemin(&["verify", "--m", "2", "--k", "6", "--gamma", "AA"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("OK 16/16 m-mers"), "{}", stdout(&out));

    let out = vigemin(&["verify", "--m", "3", "--k", "20", "--gamma", "AAA"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));

    let args = ["verify", "--m", "2", "--k", "5", "--random-gammas", "5", "--seed", "11"];
    let first = vigemin(&args);
    assert!(first.status.success());
    assert_eq!(stdout(&first).lines().count(), 5);
    assert_eq!(stdout(&first), stdout(&vigemin(&args)));
}

#[test]
fn approx_csv() {
    let out = vigemin(&["approx", "--w", "A", "--gamma", "A", "--k", "100", "--exact"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "w,slope,intercept,predicted_log_pi_at_k,exact_log_pi_at_k"
    );
    let fields: Vec<f64> = lines.next().unwrap().split(',').skip(1).map(|f| f.parse().unwrap()).collect();
    assert!((fields[0] - 4f64.ln()).abs() < 2e-3);
    assert!((fields[2] - fields[3]).abs() / fields[3] < 0.01);

    let args = ["approx", "--random", "4", "--gamma", "ACGTA", "--k", "40", "--fit-range", "10:14", "--seed", "5"];
    let first = vigemin(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stdout(&first).starts_with("w,slope,intercept,predicted_log_pi_at_k\n"));
    assert_eq!(stdout(&first), stdout(&vigemin(&args)));

    let out = vigemin(&["approx", "--w", "A", "--gamma", "A", "--k", "50", "--fit-range", "9:3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vigemin(&["approx", "--w", "TG", "--gamma", "AC", "--k", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"), "{}", stderr(&out));
}

#[test]
fn empirical_report() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("x.fa");
    fs::write(&fasta, ">r1\nACGTACGGTTAC\nnnACCA\n>r2\nTTTTGCA\n").unwrap();
    let theory = dir.path().join("t.csv");
    let report = dir.path().join("r.csv");
    let (f, t, r) = (fasta.to_str().unwrap(), theory.to_str().unwrap(), report.to_str().unwrap());

    let out = vigemin(&["enumerate", "--m", "2", "--k", "4", "--gamma", "CA", "--out", t]);
    assert!(out.status.success());
    let from_file = vigemin(&[
        "empirical", "--fasta", f, "--m", "2", "--k", "4", "--gamma", "CA", "--theory", t, "--out", r,
    ]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let csv = fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("mmer,theoretical,empirical\n"));
    assert_eq!(csv.lines().count(), 17);
    assert!(stdout(&from_file).contains("spearman="));

    let computed = vigemin(&[
        "empirical", "--fasta", f, "--m", "2", "--k", "4", "--gamma", "CA", "--compute-theory", "--out", r,
    ]);
    assert_eq!(stdout(&from_file), stdout(&computed));
    assert_eq!(fs::read_to_string(&report).unwrap(), csv);

    let bad = dir.path().join("bad.fa");
    fs::write(&bad, "ACGT\n").unwrap();
    let out = vigemin(&[
        "empirical", "--fasta", bad.to_str().unwrap(), "--m", "2", "--k", "4", "--gamma", "CA",
        "--compute-theory", "--out", r,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let out = vigemin(&[
        "empirical", "--fasta", f, "--m", "2", "--k", "5", "--gamma", "CA", "--theory", t, "--out", r,
    ]);
    assert_eq!(out.status.code(), Some(2));
}
