use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plumbcalc"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]).arg(config).args(&args[1..]);
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("c.conf");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn single_curve_text_outputs() {
    let cfg = configs().join("single_minus_two.conf");
    let o = run(&["solve"], &cfg);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x0 = 2\nx[C1,1] = 1    L.C1,1 = 0\n");

    let o = run(&["cohomology", "--n", "2"], &cfg);
    assert!(o.status.success());
    let s = stdout(&o);
    for line in ["h0 = [1,1]", "h1 = [9,9]", "euler = -8", "E-vanishing: true"] {
        assert!(s.lines().any(|l| l == line), "missing `{line}` in\n{s}");
    }

    let o = run(&["sweep"], &cfg);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("\n3  19  19  4\n"));
    assert!(s.contains("leading coefficient = 2 "));
}

#[test]
fn invalid_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "chain b=[1] a=[1]\n");
    let o = run(&["validate"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column 10"), "{err}");

    let o = run(&["solve"], &dir.path().join("missing.conf"));
    assert_eq!(o.status.code(), Some(2));

    // no sweep block and no --n-range
    let cfg = write_config(dir.path(), "chain b=[2] a=[1]\n");
    assert_eq!(run(&["sweep"], &cfg).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--n-range", "3:4"], &cfg).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "--n", "0"], &cfg).status.code(), Some(2));
}

#[test]
fn csv_report_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("example.conf");
    let o = run(&["report", "--format", "csv"], &cfg);
    assert_eq!(o.status.code(), Some(2), "csv report without --out");

    let out = dir.path().join("report");
    fs::create_dir(&out).unwrap();
    let o = run(&["report", "--format", "csv", "--out", out.to_str().unwrap()], &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let growth = fs::read_to_string(out.join("growth.csv")).unwrap();
    let mut lines = growth.lines();
    assert_eq!(lines.next(), Some("n,h1_lo,h1_hi,second_diff"));
    // sweep n=[2,10] in the example file
    assert_eq!(lines.count(), 9);
}

#[test]
fn json_output_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("example.conf");
    let out = dir.path().join("r.json");
    let to_file = run(&["report", "--format", "json", "--out", out.to_str().unwrap()], &cfg);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let printed = run(&["report", "--format", "json"], &cfg);
    assert_eq!(fs::read(&out).unwrap(), printed.stdout);
    let r = plumbcalc::report::from_json(&stdout(&printed)).unwrap();
    assert_eq!(r.metadata.tool, "plumbcalc");
    assert_eq!(r.metadata.n_range, vec!["2".to_string(), "10".to_string()]);
}
