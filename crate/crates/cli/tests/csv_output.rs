use std::process::Command;

use num_complex::Complex64;

fn coulomb(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_coulomb")).args(args).output().expect("binary runs")
}

const FIG2: [&str; 13] = [
    "sweep", "--ell-re", "2", "--ell-im", "1", "--eta-re", "10", "--eta-im", "1", "--rho-min", "2", "--rho-max", "40",
];

fn fig2_csv() -> String {
    let mut args = FIG2.to_vec();
    args.extend(["--rho-points", "15", "--rho-arg", "0.7853981633974483"]);
    let out = coulomb(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn wronskian_column_recomputed_from_row() {
    let csv = fig2_csv();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho_re,rho_im,f_re,f_im,fp_re,fp_im,g_re,g_im,gp_re,gp_im,backend,wronskian_error"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 12);
        let num = |k: usize| cols[k].parse::<f64>().unwrap();
        let z = |k: usize| Complex64::new(num(k), num(k + 1));
        let (f, fp, g, gp) = (z(2), z(4), z(6), z(8));
        let w = (fp * g - f * gp - 1.0).norm();
        let stored = num(11);
        assert_eq!(w, stored, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 30);
}

#[test]
fn identical_spec_gives_identical_bytes() {
    assert_eq!(fig2_csv(), fig2_csv());
    let dir = std::env::temp_dir().join(format!("coulomb-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.csv");
    let p = path.to_str().unwrap();
    assert!(coulomb(&["sweep", "--rho-points", "7", "--out", p]).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(coulomb(&["sweep", "--rho-points", "7", "--out", p]).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn row_count_and_order() {
    let out = coulomb(&["sweep", "--rho-points", "2", "--backend", "wkb"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    let out = coulomb(&["sweep"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let backends: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').nth(1).unwrap()).collect();
    assert_eq!(backends.len(), 240);
    assert!(backends.chunks(2).all(|p| p == ["wkb", "exact"]));
}

#[test]
fn exit_codes() {
    assert_eq!(coulomb(&["sweep", "--rho-points", "1"]).status.code(), Some(1));
    assert_eq!(coulomb(&["sweep", "--rho-arg", "3.5"]).status.code(), Some(1));
    assert_eq!(coulomb(&["sweep", "--backend", "magic"]).status.code(), Some(1));
    assert_eq!(coulomb(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(coulomb(&["--help"]).status.code(), Some(0));
    assert_eq!(coulomb(&["sweep", "--out", "/nonexistent-dir/x.csv"]).status.code(), Some(1));
    let all_fail = ["sweep", "--ell-re", "0", "--eta-re", "0", "--backend", "wkb"];
    assert_eq!(coulomb(&all_fail).status.code(), Some(2));
    assert_eq!(coulomb(&["selfcheck"]).status.code(), Some(0));
}

#[test]
fn compare_writes_report_and_points() {
    let out = coulomb(&["compare", "--rho-points", "40"]);
    assert!(out.status.success());
    let report = String::from_utf8(out.stderr).unwrap();
    assert!(report.contains("median"));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "rho_re,rho_im,err_f,err_fp,err_g,err_gp,flagged");
    assert_eq!(csv.lines().count(), 41);
}
