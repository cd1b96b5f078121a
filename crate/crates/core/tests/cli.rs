use std::path::PathBuf;
use std::process::{Command, Output};

use ncdeg_core::cli::{execute, Command as Sub, Common, ReportBody, ResultReport};
use ncdeg_core::mvsp::SolverKind;
use ncdeg_core::ratfunc::Degree;

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ncdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdeg")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (ResultReport, String) {
    let out = ncdeg(args);
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")), text)
}

fn common(seed: u64) -> Common {
    Common { seed, prime: None, trials: 8, solver: SolverKind::Auto, json: true }
}

#[test]
fn hungarian_k3_unit_profile() {
    let k3 = instance("k3_tutte.json");
    let (rep, _) = report(&["hungarian", &k3, "--seed", "1", "--json"]);
    let ReportBody::Profile { values, .. } = rep.result else { panic!("profile expected") };
    assert_eq!(values, (0..=3).map(Degree::Finite).collect::<Vec<_>>());
}

#[test]
fn emitted_reports_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("hungarian", "k3_tutte.json"),
        ("hungarian", "bipartite.json"),
        ("hungarian", "matroid_pair.json"),
        ("hungarian", "lines_k3.json"),
        ("subdet", "laurent.json"),
        ("degdet", "bipartite.json"),
        ("ncrank", "k3_tutte.json"),
        ("ncrank", "zero.json"),
        ("fmm", "lines_k3.json"),
        ("bl-member", "bl_member.json"),
        ("bl-member", "bl_reject.json"),
    ];
    for (k, (cmd, file)) in cases.iter().enumerate() {
        let inst = instance(file);
        let out = ncdeg(&[cmd, &inst, "--json", "--seed", "3"]);
        let path = dir.path().join(format!("r{k}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let v = ncdeg(&["verify", path.to_str().unwrap(), &inst]);
        assert_eq!(v.status.code(), Some(0), "{cmd} {file}: {}", String::from_utf8_lossy(&v.stdout));
    }
}

#[test]
fn tampered_report_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = instance("bipartite.json");
    let (mut rep, _) = report(&["hungarian", &inst, "--json"]);
    if let ReportBody::Profile { values, profile, .. } = &mut rep.result {
        values[2] = Degree::Finite(8);
        profile.values[2] = Degree::Finite(8);
    }
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&rep).unwrap()).unwrap();
    let v = ncdeg(&["verify", path.to_str().unwrap(), &inst]);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn output_is_byte_stable() {
    for file in ["k3_tutte.json", "lines_k3.json", "matroid_pair.json"] {
        let inst = instance(file);
        let a = ncdeg(&["hungarian", &inst, "--json", "--seed", "7"]).stdout;
        let b = ncdeg(&["hungarian", &inst, "--json", "--seed", "7"]).stdout;
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(ncdeg(&["ncrank", &instance("zero.json")]).status.code(), Some(0));
    assert_eq!(ncdeg(&["degdet", &instance("zero.json")]).status.code(), Some(2));
    assert_eq!(ncdeg(&["bl-member", &instance("bl_reject.json")]).status.code(), Some(2));
    assert_eq!(ncdeg(&["bl-member", &instance("bl_member.json")]).status.code(), Some(0));
    assert_eq!(ncdeg(&["hungarian", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(ncdeg(&["fmm", &instance("bipartite.json")]).status.code(), Some(1));
    assert_eq!(ncdeg(&["selftest"]).status.code(), Some(0));
}

#[test]
fn zero_matrix_has_nc_rank_zero() {
    let (rep, _) = report(&["ncrank", &instance("zero.json"), "--json"]);
    assert!(matches!(rep.result, ReportBody::NcRank { rank: 0, .. }));
}

#[test]
fn dump_is_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["laurent.json", "matroid_pair.json", "bl_member.json", "k3_tutte.json"] {
        let (rep, _) = report(&["dump", &instance(file), "--json"]);
        let ReportBody::Dump { instance: once } = rep.result else { panic!("dump expected") };
        let path = dir.path().join(file);
        std::fs::write(&path, serde_json::to_string(&once).unwrap()).unwrap();
        let (rep2, _) = report(&["dump", path.to_str().unwrap(), "--json"]);
        let ReportBody::Dump { instance: twice } = rep2.result else { panic!("dump expected") };
        assert_eq!(serde_json::to_string(&once).unwrap(), serde_json::to_string(&twice).unwrap());
    }
}

#[test]
fn prime_override_changes_the_field() {
    let k3 = instance("k3_tutte.json");
    let rep = execute(&Sub::Ncrank { instance: k3 }, &Common { prime: Some(5), ..common(0) }, String::new()).unwrap();
    assert_eq!(rep.prime, Some(5));
    assert!(matches!(rep.result, ReportBody::NcRank { rank: 3, .. }));
}

#[test]
fn oracle_bounds_are_below_the_profile() {
    let inst = instance("matroid_pair.json");
    let rep = execute(&Sub::Oracle { instance: inst.clone(), ell: None }, &common(2), String::new()).unwrap();
    let truth = execute(&Sub::Hungarian { instance: inst, ell: None }, &common(2), String::new()).unwrap();
    let (ReportBody::Oracle { blowup, commutative }, ReportBody::Profile { values, .. }) = (rep.result, truth.result) else {
        panic!("unexpected report kinds")
    };
    for l in 0..values.len() {
        assert!(blowup[l] <= values[l] && commutative[l] <= values[l]);
    }
}

#[test]
fn bad_ell_is_an_error() {
    let out = ncdeg(&["hungarian", &instance("bipartite.json"), "--ell", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--ell 5"));
}
