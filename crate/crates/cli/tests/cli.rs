use std::path::PathBuf;
use std::process::{Command, Output};

fn mcrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcrit")).args(args).output().expect("spawn mcrit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden(n: usize) -> String {
    vec!["1"; n].join(",")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mcrit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn rotnum_prints_digits() {
    let o = mcrit(&["rotnum", "--d", "3", "--theta", "0.6066", "--depth", "8"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("digits = [1,1,1,1,1,1,1,1]"));
}

#[test]
fn tuned_model_reads_back_golden() {
    let o = mcrit(&["tune", "--d", "3,3", "--theta", "0.23", "--depth", "14"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let thetas: Vec<&str> = text.lines().map(|l| l.split("theta=").nth(1).unwrap()).collect();
    assert_eq!(thetas.len(), 2);
    let joined = thetas.join(",");
    let o = mcrit(&["rotnum", "--d", "3,3", "--theta", &joined, "--depth", "14"]);
    assert!(stdout(&o).contains(&format!("digits = [{}]", golden(14))), "{}", stdout(&o));
}

#[test]
fn model_solve_meets_the_target() {
    let target = format!("rho={} d=3,3 delta=0.5,0.5 tol=0.01", golden(20));
    let o = mcrit(&["--precision", "std", "model-solve", &target]);
    assert!(o.status.success(), "{o:?}");
    let thetas: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.split("theta=").nth(1).map(str::to_string))
        .collect();
    let o = mcrit(&[
        "--precision", "std", "signature", "--d", "3,3", "--theta", &thetas.join(","), "--depth", "12", "--iters", "4181",
    ]);
    let line = stdout(&o).lines().find(|l| l.starts_with("delta")).unwrap().to_string();
    let deltas: Vec<f64> = line[8..].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(deltas.iter().all(|d| (d - 0.5).abs() <= 0.02), "{deltas:?}");
}

#[test]
fn degenerate_target_exits_with_precondition_code() {
    let o = mcrit(&["model-solve", "rho=1,1,1 d=3,3 delta=0,1 tol=0.01"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhausted_precision_exits_with_code_3() {
    let o = mcrit(&["--precision", "std", "tune", "--d", "3", "--rho", &golden(45), "--depth", "45"]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let o = mcrit(&["geometry", "--set", "bogus=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_writes_csv_and_svg() {
    let dir = scratch("geometry");
    let rho = format!("rho={}", golden(20));
    let out = dir.to_str().unwrap();
    let o = mcrit(&["--precision", "std", "--out", out, "--svg", "geometry", "--set", &rho, "--set", "n_max=6"]);
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.join("geometry.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("level,max_adj_ratio,min_child_ratio"));
    assert_eq!(csv.lines().count(), 8);
    assert!(dir.join("geometry.svg").exists() && dir.join("geometry.txt").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = scratch("config");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, format!("# identical maps\nrho = {}\ng = same\nn_max = 5\n", golden(20))).unwrap();
    let o = mcrit(&["--precision", "std", "--config", cfg.to_str().unwrap(), "renorm-distance"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("max_distance: 0"), "{text}");
    assert!(text.contains("n,distance"));
    let _ = std::fs::remove_dir_all(&dir);
}
