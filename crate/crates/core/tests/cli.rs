use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasilattice"))
        .args(args)
        .current_dir(dir)
        .env_remove("QUASILATTICE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn modelset_fibonacci_is_sorted_ascending() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["modelset", "--scheme", "fibonacci", "--window", "1", "--range", "100", "--svg"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("modelset.csv")).unwrap();
    let pos: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert!(dir.path().join("modelset.svg").exists());
    let prov = fs::read_to_string(dir.path().join("modelset.provenance.json")).unwrap();
    assert!(prov.contains("\"window\""));
}

#[test]
fn modelset_zp_integers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["modelset", "--scheme", "zp", "--p", "2", "--window-exp", "0", "--range", "5"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("modelset.csv")).unwrap();
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    let expected: Vec<String> = (-5..=5).map(|n| format!("{n}/2^0")).collect();
    assert_eq!(values, expected);
}

#[test]
fn missing_range_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["modelset", "--scheme", "fibonacci", "--window", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(dir.path(), &["modelset", "--bogus"])), 2);
    assert_eq!(code(&run(dir.path(), &["modelset", "--scheme", "fibonacci", "--window", "x", "--range", "1"])), 2);
}

#[test]
fn verify_integer_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--check", "approx-subgroup", "--int-range", "10"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["certificate"]["translates"].as_array().unwrap().len(), 3);
    assert_eq!(report["config"]["int_range"], 10);
}

#[test]
fn verify_failures_exit_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), "# ambient: Z\n0\n1\n2\n-1\n").unwrap();
    let o = run(dir.path(), &["verify", "--check", "symmetry", "--set", "x.txt"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("-2"));

    fs::write(dir.path().join("m.txt"), "# ambient: Q(sqrt(5))\n0\n2\n").unwrap();
    let args =
        ["verify", "--check", "meyer", "--scheme", "fibonacci", "--window", "1", "--range", "30", "--set", "m.txt"];
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("2+0*sqrt(5)"));
}

#[test]
fn uncoverable_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // every anchor is 100 away, beyond the translate bound of 5
    fs::write(dir.path().join("x.txt"), "# ambient: Z\n# region: 0\n100\n-100\n").unwrap();
    fs::write(dir.path().join("y.txt"), "# ambient: Z\n# region: 5\n0\n5\n").unwrap();
    let o = run(dir.path(), &["verify", "--check", "cover", "--set", "x.txt", "--other", "y.txt", "--region", "5"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn quasi_and_euler_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["quasi", "nearint", "--gamma", "1/2", "--pairs", "1000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let o = run(dir.path(), &["quasi", "nearint", "--gamma", "1/2", "--pairs", "1000"]);
    assert_eq!(code(&o), 2, "the seed is mandatory");
    let o = run(dir.path(), &["quasi", "brooks", "--w", "xyX"]);
    assert_eq!(code(&o), 2);
    let o = run(dir.path(), &["euler", "--triples", "200", "--seed", "42", "--ball", "2"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("euler-triples.txt")).unwrap();
    assert_eq!(text.lines().count(), 201);
}

#[test]
fn freeset_on_integers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["freeset", "--y-int", "0:11", "--x-int", "1,-1,2,-2"]);
    assert_eq!(code(&o), 0);
    let b = fs::read_to_string(dir.path().join("freeset.txt")).unwrap();
    let elems: Vec<&str> = b.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(elems, ["0", "3", "6", "9"]);
}

#[test]
fn config_file_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "command = \"modelset\"\nscheme = \"zp\"\np = 2\nwindow_exp = 1\nrange = \"3\"\nname = \"half\"\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_quasilattice"))
        .args(["--config", "run.toml"])
        .current_dir(dir.path())
        .env("QUASILATTICE_OUT_DIR", "out")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out/half.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 13);

    // command-line flags override the file
    let o = run(dir.path(), &["--config", "run.toml", "--range", "1"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("half.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5);
}
