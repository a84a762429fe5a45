use std::process::{Command, Output};

const HEADER: &str = "strategy,rho,fs_db,fr_db,pss,psr,eta_analytic,eta_sim,sim_stderr,n_slots,seed";

fn twarq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twarq")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = twarq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn usage_error(args: &[&str]) -> String {
    let out = twarq(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    String::from_utf8(out.stderr).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn col(row: &[String], name: &str) -> f64 {
    let k = HEADER.split(',').position(|h| h == name).unwrap();
    row[k].parse().unwrap()
}

#[test]
fn stop_and_wait_point() {
    let r = rows(&ok(&["analytic", "--strategy", "sw-arq", "--pss", "0.3"]));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "sw-arq");
    assert_eq!(col(&r[0], "eta_analytic"), 0.7);
    assert_eq!(r[0][7], "");
}

#[test]
fn near_perfect_channels() {
    let r = rows(&ok(&["analytic", "--strategy", "rr-nc", "--pss", "1e-9", "--rho", "0", "--fr-over-fs-db", "10"]));
    assert!((col(&r[0], "eta_analytic") - 1.0).abs() < 1e-8);
    let r = rows(&ok(&["simulate", "--strategy", "cr-nc", "--pss", "1e-12", "--n-slots", "100000"]));
    assert_eq!(col(&r[0], "eta_sim"), 1.0);
    assert_eq!(col(&r[0], "sim_stderr"), 0.0);
}

#[test]
fn engines_agree_along_a_sweep() {
    let out = ok(&["simulate", "--strategy", "rr-nc", "--rho", "0.9", "--fr-over-fs-db", "10", "--sweep", "pss:0.05:0.95:0.05", "--engines", "both"]);
    let r = rows(&out);
    assert_eq!(r.len(), 19);
    for row in &r {
        let gap = (col(row, "eta_analytic") - col(row, "eta_sim")).abs();
        assert!(gap <= 3.0 * col(row, "sim_stderr"), "{row:?}");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["simulate", "--strategy", "ar-nc,cr", "--pss", "0.4", "--rho", "0.9", "--n-slots", "200000", "--seed", "11"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let single = Command::new(env!("CARGO_BIN_EXE_twarq")).args(args).env("TWARQ_THREADS", "1").output().unwrap();
    assert_eq!(a.as_bytes(), single.stdout.as_slice());
    let mut other = args.to_vec();
    let last = other.len() - 1;
    other[last] = "12";
    assert_ne!(a, ok(&other));
}

#[test]
fn strategy_major_axis_ascending() {
    let r = rows(&ok(&["analytic", "--strategy", "rr,ar", "--rho", "0.9,0", "--sweep", "pss:0.7,0.2,0.5"]));
    let got: Vec<(String, f64, f64)> = r.iter().map(|x| (x[0].clone(), col(x, "rho"), col(x, "pss"))).collect();
    let mut expected = Vec::new();
    for s in ["rr", "ar"] {
        for rho in [0.9, 0.0] {
            for pss in [0.2, 0.5, 0.7] {
                expected.push((s.to_string(), rho, pss));
            }
        }
    }
    assert_eq!(got, expected);
}

#[test]
fn margins_in_db() {
    let r = rows(&ok(&["analytic", "--strategy", "sw-arq", "--fs-db", "0", "--fr-over-fs-db", "10"]));
    assert!((col(&r[0], "pss") - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    assert_eq!(col(&r[0], "fr_db"), 10.0);
}

#[test]
fn usage_errors_name_the_flag() {
    assert!(usage_error(&["analytic", "--pss", "1.5"]).contains("--pss"));
    assert!(usage_error(&["analytic", "--pss", "0.5", "--rho", "1"]).contains("--rho"));
    assert!(usage_error(&["analytic", "--sweep", "pss:0.9:0.1:0.1"]).contains("--sweep"));
    assert!(usage_error(&["analytic", "--pss", "0.5", "--sweep", "pss:0.1:0.9:0.1"]).contains("--pss"));
    assert!(usage_error(&["analytic", "--pss", "0.5", "--fs-db", "3"]).contains("--fs-db"));
    assert!(usage_error(&["analytic", "--pss", "0.5", "--strategy", "xr"]).contains("--strategy"));
    assert!(usage_error(&["simulate", "--pss", "0.5", "--n-slots", "0"]).contains("--n-slots"));
    assert!(usage_error(&["analytic", "--pss", "0.5", "--csi-mode", "genie"]).contains("--csi-mode"));
    assert!(usage_error(&["analytic"]).contains("--pss"));
    let fig = usage_error(&["figure", "fig10"]);
    assert!(fig.contains("fig4") && fig.contains("fig9-csi"));
    let out = Command::new(env!("CARGO_BIN_EXE_twarq"))
        .args(["analytic", "--pss", "0.5"])
        .env("TWARQ_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# manifest\nstrategy = sw-arq\npss = 0.3\nrho = 0.5\n").unwrap();
    let p = path.to_str().unwrap();
    let r = rows(&ok(&["analytic", "--config", p]));
    assert_eq!((r.len(), col(&r[0], "eta_analytic"), col(&r[0], "rho")), (1, 0.7, 0.5));
    let r = rows(&ok(&["analytic", "--config", p, "--fs-db", "0", "--rho", "0"]));
    assert!((col(&r[0], "pss") - 0.6321205588285577).abs() < 1e-15);
    assert_eq!(col(&r[0], "rho"), 0.0);

    std::fs::write(&path, "pss = 0.3\ncolour = blue\n").unwrap();
    assert!(usage_error(&["analytic", "--config", p]).contains("colour"));
    std::fs::write(&path, "pss = lots\n").unwrap();
    assert!(usage_error(&["analytic", "--config", p]).contains("pss"));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eta.csv");
    let stdout = ok(&["analytic", "--strategy", "rr", "--pss", "0.5", "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(rows(&text).len(), 1);
}

#[test]
fn fig7_relay_only_loses_at_low_margin() {
    let r = rows(&ok(&["figure", "fig7", "--engines", "analytic"]));
    assert_eq!(r.len(), 7 * 26);
    let at = |s: &str, fs: f64| {
        r.iter().find(|x| x[0] == s && (col(x, "fs_db") - fs).abs() < 1e-9).map(|x| col(x, "eta_analytic")).unwrap()
    };
    for fs in [-5.0, 0.0] {
        assert!(at("rr", fs) < at("sw-arq", fs));
        assert!(at("rr", fs) < at("ar", fs) && at("rr", fs) < at("cr", fs));
    }
}

#[test]
fn figure_configs_resolve() {
    for name in ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig9-csi"] {
        let text = ok(&["figure", name, "--show-config"]);
        assert!(text.contains("sweep"), "{name}");
    }
    let r = rows(&ok(&["figure", "fig9-csi", "--n-slots", "20000", "--sweep", "pss:0.5"]));
    let labels: Vec<&str> = r.iter().map(|x| x[0].as_str()).step_by(3).collect();
    assert_eq!(labels, ["cr:prev", "cr:last-known", "cr:genie", "cr-nc:prev", "cr-nc:last-known", "cr-nc:genie"]);
    assert!(r.iter().all(|x| (x[6].is_empty()) != x[0].ends_with(":prev")));
}

#[test]
fn selftest_passes() {
    let out = ok(&["selftest"]);
    assert!(!out.contains("FAIL"));
}
