//! End-to-end checks of the harness: scenario-driven runs, certificate
//! verification on disk, round-tripping, and replay determinism.

use std::fs;
use std::process::Command;

use lperm_cli::scenario::parse_scenario;
use lperm_cli::suites::{roundtrip, run};
use lperm_core::cert::{check_cert, WitnessCert};
use lperm_core::sampler::Sampler;
use lperm_core::{ComponentKind, LexAut, TowerModel};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lperm"))
}

#[test]
fn run_writes_certificates_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let sc = parse_scenario("model=PL2T; suite=lemma31; trials=4; seed=7").unwrap();
    let report = run(&sc, Some(dir.path().to_path_buf())).unwrap();
    assert!(report.all_passed());
    let body = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(body.contains("TRIAL 0 lemma31 pass cert_lemma31_0000.txt"));
    assert!(body.trim_end().ends_with("RESULT pass"));
    for i in 0..4 {
        let text = fs::read_to_string(dir.path().join(format!("cert_lemma31_{:04}.txt", i))).unwrap();
        let cert = WitnessCert::from_text(&text).unwrap();
        assert!(check_cert(&cert).unwrap());
    }
}

#[test]
fn rerun_with_same_seed_is_byte_identical() {
    let sc = parse_scenario("model=PL2T,PL2T; suite=lemma42,centralizer; trials=6; seed=7").unwrap();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    run(&sc, Some(d1.path().to_path_buf())).unwrap();
    run(&sc, Some(d2.path().to_path_buf())).unwrap();
    let mut names: Vec<_> = fs::read_dir(d1.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() > 6);
    for name in names {
        let a = fs::read(d1.path().join(&name)).unwrap();
        let b = fs::read(d2.path().join(&name)).unwrap();
        assert_eq!(a, b, "{} differs between reruns", name);
    }
}

#[test]
fn different_seed_changes_certificates() {
    let base = "model=PL2T; suite=lemma31; trials=3";
    let s1 = parse_scenario(&format!("{}; seed=1", base)).unwrap();
    let s2 = parse_scenario(&format!("{}; seed=2", base)).unwrap();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    run(&s1, Some(d1.path().to_path_buf())).unwrap();
    run(&s2, Some(d2.path().to_path_buf())).unwrap();
    let a = fs::read(d1.path().join("cert_lemma31_0000.txt")).unwrap();
    let b = fs::read(d2.path().join("cert_lemma31_0000.txt")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn verify_subcommand_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let sc = parse_scenario("model=PL2T; suite=lemma31; trials=1; seed=3").unwrap();
    run(&sc, Some(dir.path().to_path_buf())).unwrap();
    let cert = dir.path().join("cert_lemma31_0000.txt");

    let ok = bin().arg("verify").arg(&cert).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS"));

    // tamper with the stored right-hand image
    let text = fs::read_to_string(&cert).unwrap();
    let broken_path = dir.path().join("broken.txt");
    let mut lines: Vec<String> = text.lines().map(|s| s.to_string()).collect();
    let last = lines.last_mut().unwrap();
    assert!(last.starts_with("CLAIM"));
    let cut = last.rfind(" vs ").unwrap();
    last.truncate(cut);
    last.push_str(" vs 424242");
    fs::write(&broken_path, lines.join("\n")).unwrap();
    let bad = bin().arg("verify").arg(&broken_path).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stdout).starts_with("FAIL"));
}

#[test]
fn run_exit_status_matches_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let scenario_path = dir.path().join("scenario.txt");
    fs::write(&scenario_path, "model=PL2T,PL2T; suite=oprim; trials=3; seed=5\n").unwrap();
    let out = bin()
        .arg("run")
        .arg(&scenario_path)
        .arg("--out")
        .arg(dir.path().join("certs"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("VERDICT oprim not-o-primitive"));
    assert!(stdout.contains("RESULT pass"));
}

#[test]
fn roundtrip_files_of_elements() {
    let dir = tempfile::tempdir().unwrap();

    // 100 random PL maps
    let mut s = Sampler::new(12);
    let pool = s.pl_pool();
    let pl_path = dir.path().join("plmaps.txt");
    let mut text = String::new();
    for _ in 0..100 {
        text.push_str(&s.pl_word(&pool).to_string());
        text.push('\n');
    }
    fs::write(&pl_path, &text).unwrap();
    assert!(roundtrip(&pl_path).unwrap());

    // depth-3 tower elements
    let model = TowerModel::new(vec![
        ComponentKind::Pl2t,
        ComponentKind::Pl2t,
        ComponentKind::Reg,
    ])
    .unwrap();
    let lex_path = dir.path().join("lexauts.txt");
    let pool = s.lex_pool(&model);
    let mut text = String::new();
    for _ in 0..40 {
        let g: LexAut = s.lex_word(&model, &pool);
        text.push_str(&g.to_string());
        text.push('\n');
    }
    fs::write(&lex_path, &text).unwrap();
    assert!(roundtrip(&lex_path).unwrap());

    // a certificate file round-trips too
    let sc = parse_scenario("model=PL2T; suite=lemma31; trials=1; seed=9").unwrap();
    run(&sc, Some(dir.path().to_path_buf())).unwrap();
    assert!(roundtrip(&dir.path().join("cert_lemma31_0000.txt")).unwrap());

    // corrupted files report a located parse error
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "PL[(0,1)]\nPL[oops\n").unwrap();
    let err = roundtrip(&bad).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 2"), "got {}", msg);
}

#[test]
fn demo_prints_a_certificate() {
    let out = bin().args(["demo", "lemma31", "--trials", "2"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("CLAIM"));
    assert!(stdout.contains("RESULT pass"));
}
