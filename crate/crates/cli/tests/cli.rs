use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracvide(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvide"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_writes_default_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracvide(
        &["solve", "--problem", "ex1", "--n", "8", "--lambda", "1/2"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("ex1_0.5_n8_solution.csv")).unwrap();
    let mut blocks = text.split("\n\n");
    let nodal = blocks.next().unwrap();
    assert!(nodal.starts_with("i,theta,u,u_star,v"));
    assert_eq!(nodal.lines().count(), 10);
    let sampled = blocks.next().unwrap();
    assert!(sampled.starts_with("t,y_N"));
    assert_eq!(sampled.lines().count(), 202);
    assert!(stdout(&o).contains("Linf"));
}

#[test]
fn sweep_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracvide(
        &[
            "sweep",
            "--problem",
            "ex1",
            "--n",
            "4:2:12",
            "--lambda",
            "0.5",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "N,L2_e,Linf_e,L2_estar,Linf_estar");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("4,"));
    assert!(stderr(&o).contains("exponential"));
}

#[test]
fn sweep_to_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracvide(
        &[
            "sweep",
            "--problem",
            "ex1",
            "--n-range",
            "4,8,12,16,20",
            "--lambda",
            "1",
            "--out",
            "t.txt",
            "--format",
            "text",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("algebraic"));
    let table = fs::read_to_string(dir.path().join("t.txt")).unwrap();
    assert!(table.lines().next().unwrap().starts_with('N'));
    assert_eq!(table.lines().count(), 5);
}

#[test]
fn explicit_defaults_match_and_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "sweep",
        "--problem",
        "ex2",
        "--n",
        "3:3:12",
        "--lambda",
        "1/3",
    ];
    let a = fracvide(&base, dir.path());
    let b = fracvide(&base, dir.path());
    let mut explicit = base.to_vec();
    explicit.extend(["--alpha", "-0.5", "--beta", "-1/2"]);
    let c = fracvide(&explicit, dir.path());
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn config_file_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mu = 1/2
gamma = 1
eps = 0.5
T = 1
p = t^(5/3)
q = t^(5/3)
K1 = exp(s^(1-mu))
K2 = exp(tau^(1-mu))
exact = t*exp(-t^(1-mu))
exact_prime = (1 - (1-mu)*t^(1-mu))*exp(-t^(1-mu))
";
    fs::write(dir.path().join("mine.cfg"), cfg).unwrap();
    let from_file = fracvide(
        &[
            "sweep",
            "--problem",
            "mine.cfg",
            "--n",
            "4,8",
            "--lambda",
            "0.5",
        ],
        dir.path(),
    );
    let builtin = fracvide(
        &["sweep", "--problem", "ex1", "--n", "4,8", "--lambda", "0.5"],
        dir.path(),
    );
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let parse = |o: &Output| -> Vec<f64> {
        stdout(o)
            .lines()
            .skip(1)
            .flat_map(|l| {
                l.split(',')
                    .skip(1)
                    .map(|v| v.parse::<f64>().unwrap())
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    for (x, y) in parse(&from_file).into_iter().zip(parse(&builtin)) {
        assert!((x - y).abs() <= 1e-6 * y.abs() + 1e-15, "{x} vs {y}");
    }
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let zero = fracvide(
        &[
            "sweep",
            "--problem",
            "ex1",
            "--n",
            "4:0:10",
            "--lambda",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(zero.status.code(), Some(1));
    assert!(stderr(&zero).contains("zero step"));

    let unknown = fracvide(
        &["solve", "--problem", "nosuch", "--n", "4", "--lambda", "1"],
        dir.path(),
    );
    assert_eq!(unknown.status.code(), Some(1));
    assert!(stderr(&unknown).contains("nosuch"));

    let lambda = fracvide(
        &["solve", "--problem", "ex1", "--n", "4", "--lambda", "2"],
        dir.path(),
    );
    assert!(!lambda.status.success());
}

#[test]
fn reproduce_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracvide(
        &["reproduce", "--problem", "ex1", "--out", "res"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let res = dir.path().join("res");
    for f in [
        "ex1_e_table.csv",
        "ex1_estar_table.csv",
        "ex1_0.5_sweep.csv",
        "ex1_1_sweep.csv",
        "ex1_summary.txt",
    ] {
        assert!(res.join(f).is_file(), "missing {f}");
    }
    let e = fs::read_to_string(res.join("ex1_e_table.csv")).unwrap();
    assert_eq!(e.lines().count(), 6);
    let summary = fs::read_to_string(res.join("ex1_summary.txt")).unwrap();
    assert!(summary.contains("exponential") && summary.contains("algebraic"));
}
