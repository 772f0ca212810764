use std::io::Write;
use std::process::{Command, Output};

use knotkhi::floer::KhiPrediction;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotkhi")).args(args).output().expect("spawn knotkhi")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)))
}

#[test]
fn trefoil_from_every_input_form() {
    for args in [
        ["alexander", "--name", "3_1"],
        ["alexander", "--pd", "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]"],
        ["alexander", "--braid", "1 1 1"],
    ] {
        let o = run(&args);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "t - 1 + t^-1", "{args:?}");
    }
}

#[test]
fn empty_pd_is_the_unknot() {
    assert_eq!(stdout(&run(&["alexander", "--pd", "[]"])).trim(), "1");
    assert_eq!(stdout(&run(&["conway", "--pd", "[]"])).trim(), "1");
    assert!(stdout(&run(&["khi-table", "--name", "0_1"])).contains("{0: -1}"));
}

#[test]
fn khi_table_json_roundtrips() {
    let v = json(&["khi-table", "--name", "8_19"]);
    let p = KhiPrediction::from_json(&v).unwrap();
    assert_eq!(p.rank_lower_bound, 5.into());
    assert_eq!(p.determinant, 3.into());
    assert!(!p.is_link());
}

#[test]
fn scalar_subcommands() {
    assert_eq!(json(&["rank-bound", "--name", "8_19"])["rank_lower_bound"], 5);
    assert_eq!(json(&["detk", "--name", "4_1"])["determinant"], 5);
    assert_eq!(json(&["fibered", "--name", "5_2"])["verdict"], "not_fibered");
    assert_eq!(json(&["fibered", "--name", "4_1"])["verdict"], "consistent_with_fibered");
}

#[test]
fn reps_counts_binary_dihedral_orbits() {
    let o = run(&["reps", "--name", "3_1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n = 1 irreducible"));
    let v = json(&["reps", "--name", "4_1"]);
    assert_eq!(v["count"]["n_binary_dihedral"], 2);
    assert_eq!(v["count"]["complete"], true);
}

#[test]
fn starved_reps_run_exits_one() {
    assert_eq!(run(&["reps", "--name", "7_7", "--starts", "3"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["alexander", "--pd", "[[1,2"][..],
        &["alexander", "--name", "9_99"],
        &["alexander", "--braid", "1 x"],
        &["alexander", "--name", "8_19", "--max-crossings", "4"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn skein_verify_and_triangle() {
    assert!(run(&["skein-verify", "--name", "5_2"]).status.success());
    assert!(run(&["skein-verify", "--name", "5_2", "--crossing", "1"]).status.success());
    assert_eq!(run(&["skein-verify", "--name", "3_1", "--triangle"]).status.code(), Some(1));
}

#[test]
fn verify_empty_catalog_warns_and_passes() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let o = run(&["--format", "json", "verify", "--catalog", file.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn verify_flags_a_wrong_determinant() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, r#"{{"name": "3_1", "pd": "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]", "det": 7, "genus": 1, "fibered": true}}"#)
        .unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(run(&["verify", "--catalog", path, "--skip", "triangle"]).status.code(), Some(1));
}

#[test]
fn bundled_sweep_passes_without_the_triangle_check() {
    assert!(run(&["verify", "--skip", "triangle"]).status.success());
    assert_eq!(run(&["verify", "--sweep"]).status.code(), Some(1));
}
