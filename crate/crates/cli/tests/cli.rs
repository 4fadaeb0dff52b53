use std::path::PathBuf;
use std::process::{Command, Output};

use nlie_core::catalog::on;
use nlie_core::nlie::FiniteAlgebra;
use nlie_core::report::{Report, Status};
use nlie_core::Field;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn nlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlie")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn status_of(r: &Report, name: &str) -> Status {
    r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).status
}

#[test]
fn fixture_table_is_the_catalog_vector_product() {
    let text = std::fs::read_to_string(data("o3.nlie")).unwrap();
    assert_eq!(FiniteAlgebra::from_table_text(&text).unwrap(), on(Field::Rationals, 3).unwrap());
}

#[test]
fn verify_vector_product_matches_golden_summary() {
    let o = nlie(&["verify", "O", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("verify_o3.txt")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn verify_json_matches_golden_and_is_deterministic() {
    let a = tmp("a.json");
    let b = tmp("b.json");
    for p in [&a, &b] {
        let o = nlie(&["verify", "O", "--n", "3", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    let golden = std::fs::read_to_string(data("verify_o3.json")).unwrap();
    assert_eq!(String::from_utf8(ja).unwrap(), golden);
}

#[test]
fn table_input_passes() {
    let o = nlie(&["verify", "--table", data("o3.nlie").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_table_fails_with_witness() {
    let j = tmp("bad.json");
    let o = nlie(&["verify", "--table", data("o3_corrupted.nlie").to_str().unwrap(), "--json", j.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::from_json(&std::fs::read_to_string(&j).unwrap()).unwrap();
    let fj = r.checks.iter().find(|c| c.name == "fj_identity").unwrap();
    assert_eq!(fj.status, Status::Fail);
    assert!(fj.witness.as_deref().unwrap().contains("residue"));
    assert!(stdout(&o).contains("witness:"));
}

#[test]
fn usage_and_input_errors_exit_with_2() {
    assert_eq!(nlie(&["verify", "--table", data("bad_header.nlie").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(nlie(&["verify", "--table", "/nonexistent/x.nlie"]).status.code(), Some(2));
    assert_eq!(nlie(&["verify", "X"]).status.code(), Some(2));
    assert_eq!(nlie(&["pairs", "v"]).status.code(), Some(2));
    assert_eq!(nlie(&["pairs", "i", "--n", "2"]).status.code(), Some(2));
    assert_eq!(nlie(&["charp", "--p", "3", "--n", "5"]).status.code(), Some(2));
    assert_eq!(nlie(&["verify", "O", "--n", "3", "--field", "fp:4"]).status.code(), Some(2));
}

#[test]
fn custom_form_and_prime_field() {
    let o = nlie(&["verify", "O", "--n", "3", "--form", data("form4.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = nlie(&["verify", "O", "--n", "3", "--field", "fp:7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn polynomial_catalog_suites() {
    for args in [["verify", "SW", "--n", "3", "--window", "3"], ["verify", "S", "--n", "3", "--window", "2"]] {
        let o = nlie(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn pairs_commands() {
    for (which, extra) in [("i", vec![]), ("iv", vec![]), ("iii", vec!["--n", "4", "--xwindow", "2"])] {
        let j = tmp(&format!("pair_{which}.json"));
        let mut args = vec!["pairs", which, "--json", j.to_str().unwrap()];
        args.extend(extra);
        let o = nlie(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let r = Report::from_json(&std::fs::read_to_string(&j).unwrap()).unwrap();
        assert_eq!(status_of(&r, "pair_induced_bracket"), Status::Pass);
    }
}

#[test]
fn charp_reports_residue_and_control() {
    let j = tmp("charp.json");
    let o = nlie(&["charp", "--p", "3", "--s", "2", "--cap", "15", "--json", j.to_str().unwrap()]);
    let r = Report::from_json(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(status_of(&r, "charp_fj_identity"), Status::Pass);
    assert_eq!(status_of(&r, "charp_grading_exceeds_bound"), Status::Pass);
    assert_eq!(status_of(&r, "control_q_within_bound"), Status::Fail);
    assert_eq!(o.status.code(), Some(1));
    let even = nlie(&["charp", "--p", "3", "--n", "4"]);
    assert!(stdout(&even).contains("NOT_DECIDED  charp_fj_identity"));
}

#[test]
fn report_command_re_renders() {
    let j = tmp("rerender.json");
    let o = nlie(&["verify", "O", "--n", "3", "--json", j.to_str().unwrap()]);
    let again = nlie(&["report", j.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), stdout(&o));
}
