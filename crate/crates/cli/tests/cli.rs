use std::path::PathBuf;
use std::process::{Command, Output};

fn edss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edss")).args(args).output().expect("spawn edss")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("edss-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn beta_two_iterations_default_run() {
    let out = edss(&["run", "--protocol", "beta", "--iterations", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("negativity_ab = 0.142857142857"), "{text}");
    assert!(text.contains("iteration 1 : negativity 0.1 probability 0.625"), "{text}");
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    for (args, flag) in [
        (vec!["run", "--bogus"], "--bogus"),
        (vec!["run", "--p", "1.5"], "--p"),
        (vec!["run", "--protocol", "beta", "--iterations", "5"], "--iterations"),
        (vec!["sweep", "--steps", "1"], "--steps"),
        (vec!["sweep", "--protocols", "gamma"], "--protocols"),
        (vec!["grid", "--p3", "-0.1"], "--p3"),
    ] {
        let out = edss(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn extended_iterations_need_opt_in() {
    let out = edss(&["run", "--protocol", "beta", "--iterations", "5", "--allow-extended"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("more iterations than were studied"));
}

#[test]
fn unwritable_output_exits_3() {
    let out = edss(&["probcurves", "--steps", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn sweep_csv_schema() {
    let path = scratch("sweep.csv");
    let out = edss(&[
        "sweep", "--carrier-noise", "dephasing", "--steps", "3", "--protocols", "alpha,ded", "--fixed-basis",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# edss command=sweep"));
    assert!(lines[0].contains("studied_combination=true"));
    assert_eq!(lines[1], "p,protocol,negativity,probability,theta,phi");
    assert_eq!(lines.len(), 2 + 3 * 2);
    assert_eq!(lines[2], "0,alpha,0.5,0.333333333333,0,0");
    assert_eq!(lines[3], "0,ded,0.5,1,0,0");
    assert_eq!(lines[6], "1,alpha,0,0.333333333333,0,0");
}

#[test]
fn grid_csv_schema() {
    let path = scratch("grid.csv");
    let out = edss(&["grid", "--steps", "2", "--p3", "0.4", "--fixed-basis", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# edss command=grid"));
    assert_eq!(lines[1], "p1,p2,p3,delta_alpha_beta,delta_alpha_ded,delta_beta_ded");
    assert_eq!(lines.len(), 2 + 4);
    assert!(lines[2].starts_with("0,0,0.4,"));
}

#[test]
fn probcurves_match_closed_form_columns() {
    let out = edss(&["probcurves", "--protocol", "beta", "--channel", "dephasing", "--steps", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1], f[2], "{line}");
    }
}

#[test]
fn zalm_check_reports_tiny_error() {
    let out = edss(&["zalm-check", "--samples", "10", "--seed", "11"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let err: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max_transfer_error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 1e-10);
}

#[test]
fn discord_command_prints_value() {
    let out = edss(&["discord", "--state", "alpha"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("discord = 0.1258"), "{text}");
}
