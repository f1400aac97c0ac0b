use std::fs;
use std::path::Path;
use std::process::Command;

use attention_scale::cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn attnscale(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("attnscale").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn synth_writes_series_and_manifest_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = attnscale(&["synth", "--kind", "white", "--n", "256", "--out", p(out)]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    }
    let files: Vec<_> = fs::read_dir(&a).unwrap().collect();
    assert_eq!(files.len(), 31);
    for seed in [0, 17, 29] {
        let name = format!("white-{seed:04}.txt");
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap()
        );
    }
    let manifest = fs::read_to_string(a.join("manifest.csv")).unwrap();
    assert!(manifest.starts_with("subject_id,path,group,age,height,weight,leg_length,speed\n"));
    assert_eq!(manifest.lines().count(), 31);

    let o = attnscale(&[
        "synth",
        "--kind",
        "1/f",
        "--n",
        "256",
        "--seeds",
        "3,4",
        "--out",
        p(&a),
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(a.join("pink-0004.txt").is_file());
    let manifest = fs::read_to_string(a.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 33);
}

#[test]
fn analyze_unit_scale_has_zero_loss() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    fs::write(&input, "# comment\n3\n1\n4\n1\n5\n9\n2\n6\n").unwrap();
    let o = attnscale(&[
        "analyze",
        "--input",
        p(&input),
        "--method",
        "ms",
        "--analysis",
        "closs,sloss",
        "--tau-max",
        "1",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(
        o.stdout,
        "subject_id,group,method,analysis,tau,value\nx,default,ms,closs,1,0.0\nx,default,ms,sloss,1,0.0\n"
    );
}

#[test]
fn analyze_monotone_peak_is_undefined_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ramp.txt");
    let text: String = (0..50).map(|i| format!("{i}\n")).collect();
    fs::write(&input, text).unwrap();
    let o = attnscale(&[
        "analyze",
        "--input",
        p(&input),
        "--method",
        "pas",
        "--analysis",
        "sloss",
        "--tau-max",
        "3",
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.lines().skip(1).all(|l| l.ends_with(',')));
    assert!(o.stderr.starts_with("warning\tramp\t"));
}

#[test]
fn analyze_output_feeds_plot() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    let text: String = (0..300)
        .map(|i| format!("{}\n", ((i * 37) % 23) as f64 / 7.0))
        .collect();
    fs::write(&input, text).unwrap();
    let records = dir.path().join("records.csv");
    let o = attnscale(&[
        "analyze",
        "--input",
        p(&input),
        "--method",
        "ms,pas",
        "--tau-max",
        "8",
        "--out",
        p(&records),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let svg = dir.path().join("fig.svg");
    let o = attnscale(&["plot", "--records", p(&records), "--out", p(&svg)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let body = fs::read_to_string(&svg).unwrap();
    assert_eq!(body.matches(r#"class="panel""#).count(), 6);
}

#[test]
fn cohort_writes_tables_and_plot_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    for kind in ["white", "pink"] {
        let o = attnscale(&[
            "synth",
            "--kind",
            kind,
            "--n",
            "512",
            "--seeds",
            "6",
            "--out",
            p(&data),
        ]);
        assert_eq!(o.code, EXIT_OK);
    }
    let out = dir.path().join("out");
    let o = attnscale(&[
        "cohort",
        "--manifest",
        p(&data.join("manifest.csv")),
        "--methods",
        "ms,pas",
        "--analyses",
        "sloss",
        "--tau-max",
        "5",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    for (name, header) in [
        ("records.csv", "subject_id,group,method,analysis,tau,value"),
        ("summary.csv", "group,method,analysis,tau,n,mean,se"),
        (
            "comparison.csv",
            "measure,covariate_or_pair,statistic,value",
        ),
    ] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        assert_eq!(text.lines().next().unwrap(), header);
    }
    let comparison = fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert!(comparison.contains("ms/sloss/tau=5,white vs pink,welch_p,"));

    let (f1, f2) = (dir.path().join("1.svg"), dir.path().join("2.svg"));
    for f in [&f1, &f2] {
        let o = attnscale(&[
            "plot",
            "--records",
            p(&out.join("records.csv")),
            "--summary",
            p(&out.join("summary.csv")),
            "--out",
            p(f),
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    }
    assert_eq!(fs::read(&f1).unwrap(), fs::read(&f2).unwrap());

    let o = attnscale(&[
        "plot",
        "--records",
        p(&out.join("summary.csv")),
        "--out",
        p(&f1),
    ]);
    assert_eq!(o.code, EXIT_DATA);
}

#[test]
fn dynamic_scale_skips_subject_without_height() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::from("subject_id,path,group,age,height,weight,leg_length,speed\n");
    for (i, h) in ["", "55", "73", "91"].iter().enumerate() {
        let text: String = (0..400)
            .map(|k| format!("{}\n", ((k * (i + 3)) % 17) as f64))
            .collect();
        fs::write(dir.path().join(format!("s{i}.txt")), text).unwrap();
        manifest.push_str(&format!(
            "s{i},s{i}.txt,{},30,{h},,,\n",
            if i % 2 == 0 { "a" } else { "b" }
        ));
    }
    fs::write(dir.path().join("m.csv"), manifest).unwrap();
    let out = dir.path().join("out");
    let o = attnscale(&[
        "cohort",
        "--manifest",
        p(&dir.path().join("m.csv")),
        "--methods",
        "ms",
        "--analyses",
        "closs",
        "--dynamic-scale",
        "--combined",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stderr.contains("warning\ts0\t"));
    let records = fs::read_to_string(out.join("records.csv")).unwrap();
    assert!(!records.contains("\ns0,"));
    assert!(records.contains("\ns3,b,ms,closs,5,"));
    assert!(out.join("combined.csv").is_file());
}

#[test]
fn identical_groups_give_unit_p() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::from("subject_id,path,group\n");
    for i in 0..4 {
        let text: String = (0..200)
            .map(|k| format!("{}\n", ((k * (i + 2)) % 11) as f64))
            .collect();
        fs::write(dir.path().join(format!("s{i}.txt")), text).unwrap();
        for g in ["a", "b"] {
            manifest.push_str(&format!("{g}{i},s{i}.txt,{g}\n"));
        }
    }
    fs::write(dir.path().join("m.csv"), manifest).unwrap();
    let out = dir.path().join("out");
    let o = attnscale(&[
        "cohort",
        "--manifest",
        p(&dir.path().join("m.csv")),
        "--methods",
        "ms",
        "--analyses",
        "sloss",
        "--tau-max",
        "3",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let comparison = fs::read_to_string(out.join("comparison.csv")).unwrap();
    for tau in 2..=3 {
        assert!(
            comparison.contains(&format!("ms/sloss/tau={tau},a vs b,welch_p,1.0\n")),
            "{comparison}"
        );
    }
}

#[test]
fn usage_and_data_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(attnscale(&["analyze"]).code, EXIT_USAGE);
    assert_eq!(
        attnscale(&["synth", "--kind", "brown", "--out", p(dir.path())]).code,
        EXIT_USAGE
    );
    let missing = dir.path().join("nope.txt");
    assert_eq!(
        attnscale(&["analyze", "--input", p(&missing)]).code,
        EXIT_DATA
    );
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\n2\nthree\n").unwrap();
    let o = attnscale(&["analyze", "--input", p(&bad)]);
    assert_eq!(o.code, EXIT_DATA);
    assert!(o.stderr.contains("bad.txt:3:"), "{}", o.stderr);
    assert_eq!(attnscale(&["--help"]).code, EXIT_OK);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_attnscale");
    let status = Command::new(bin).arg("--version").status().unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let status = Command::new(bin)
        .args(["plot", "--out", "/nonexistent/x.svg"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
}
