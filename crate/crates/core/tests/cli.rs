use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use vertex_induce::exact::{q2, ScaledExponent as SE};
use vertex_induce::report::{exit_code, run, AlgebraSource, Command as Cmd, ModuleSource, RunConfig};
use vertex_induce::residue::ModuleData;
use vertex_induce::vertex::build_heisenberg;
use vertex_induce::zhu::{omega_n, AModule, ZhuKind};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vertex-induce-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertex-induce")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn algebra_file_matches_builtin() {
    let path = data("heisenberg4.alg");
    let from_file = cli(&["check-algebra", "--algebra", path.to_str().unwrap()]);
    let builtin = cli(&["check-algebra", "--heisenberg", "4"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, builtin.stdout);
    assert!(stdout(&from_file).contains("PASS    algebra.axioms"));
}

#[test]
fn module_file_passes_and_mutation_fails() {
    let alg = data("heisenberg4.alg");
    let good = data("fock_half.mod");
    let o = cli(&["verify-module", "--algebra", alg.to_str().unwrap(), "--module", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // a(-1)_1 a(-1)v = v; double it
    let text = std::fs::read_to_string(&good).unwrap();
    let mutated = text.replacen("[action a(-1) 1 a(-1)v]\n1 v", "[action a(-1) 1 a(-1)v]\n2 v", 1);
    assert_ne!(mutated, text);
    let bad = scratch("mutated.mod", &mutated);
    let o = cli(&["verify-module", "--algebra", alg.to_str().unwrap(), "--module", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL    module.weak_associativity"), "{out}");
    assert!(out.contains("witness:"), "{out}");
}

#[test]
fn induce_reports_partition_dims() {
    let o = cli(&["induce", "--heisenberg", "6", "--fock", "1/2", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("graded dims: 0:1 1:1 2:2"), "{out}");
    assert!(out.contains("PASS    induce.embedding"));
    assert!(out.contains("PASS    induce.confluence.2"));
}

#[test]
fn twisted_induce_has_half_integer_degrees() {
    let o = cli(&["induce", "--heisenberg", "6", "--twisted-fock", "--twist", "parity", "--cutoff", "3/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("graded dims: 0:1 1/2:1 1:1 3/2:2"));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["induce", "--heisenberg", "6", "--fock", "1/3", "--format", "structured", "--seed", "5"][..],
        &["verify-module", "--heisenberg", "4", "--fock", "2", "--cutoff", "2", "--seed", "9"][..],
    ] {
        let a = cli(args);
        let b = cli(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn structured_output_is_json() {
    let o = cli(&["zhu", "--heisenberg", "6", "--level", "1", "--cutoff", "4", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "zhu");
    let records = v["records"].as_array().unwrap();
    assert!(records.iter().all(|r| r["status"] != "fail"));
    assert!(records.iter().any(|r| r["anchor"] == "span_oracle_dims"));
}

#[test]
fn context_file_induces_like_the_module() {
    let alg = Arc::new(build_heisenberg(6).unwrap());
    let fock = ModuleData::fock(alg, Some(q2(1, 2)), SE::int(2)).unwrap();
    let (am, _) = AModule::from_omega(&fock, ZhuKind::Level(0), &omega_n(&fock, 0).unwrap()).unwrap();
    let path = scratch("half.amod", &am.to_text());
    let from_context = cli(&["induce", "--heisenberg", "6", "--context", path.to_str().unwrap()]);
    let from_module = cli(&["induce", "--heisenberg", "6", "--fock", "1/2"]);
    assert_eq!(from_context.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_context.stderr));
    assert_eq!(from_context.stdout, from_module.stdout);
}

#[test]
fn exit_codes_follow_error_kinds() {
    let o = cli(&["zhu", "--algebra", "/nonexistent/algebra"]);
    assert_eq!(o.status.code(), Some(2));
    let garbage = scratch("garbage.alg", "[space]\nthis is not a basis line\n");
    assert_eq!(cli(&["check-algebra", "--algebra", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cli(&["zhu", "--heisenberg", "4", "--twist", "sideways"]).status.code(), Some(2));
    assert_eq!(cli(&["induce", "--heisenberg", "6"]).status.code(), Some(2));
    // the algebra is too short for the requested degrees
    let o = cli(&["induce", "--heisenberg", "3", "--fock", "1/2", "--cutoff", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn universal_map_through_the_library() {
    let mut cfg = RunConfig::new(Cmd::VerifyUniversal, AlgebraSource::Heisenberg(6));
    cfg.module = Some(ModuleSource::Fock(q2(-1, 2)));
    let outcome = run(&cfg);
    assert_eq!(exit_code(&outcome), 0);
    let report = outcome.unwrap();
    assert!(report.record("universal.bijective").unwrap().detail.contains("2:2/2/2"));
    assert_eq!(report.fact("graded dims"), Some("0:1 1:1 2:2"));
}
