//! The witness suites across every legal component-kind mix, not just the
//! shapes the acceptance gate names: towers with regular levels above,
//! below and between o-2 transitive ones.

use lperm_cli::scenario::parse_scenario;
use lperm_cli::suites::run;

fn assert_all_pass(scenario: &str) {
    let sc = parse_scenario(scenario).unwrap();
    let report = run(&sc, None).unwrap();
    for suite in &report.suites {
        for r in &suite.records {
            assert!(
                r.pass,
                "{:?}: {} trial {} failed: {}",
                scenario, suite.suite, r.index, r.detail
            );
        }
    }
}

#[test]
fn witness_suites_on_deep_pl_towers() {
    for model in ["PL2T,PL2T,PL2T", "PL2T,PL2T,PL2T,PL2T", "PL2T,PL2T,PL2T,PL2T,PL2T"] {
        assert_all_pass(&format!("model={}; suite=lemma41,lemma42; trials=12; seed=7", model));
    }
}

#[test]
fn centralizer_on_mixed_towers() {
    // the working blocks sit over PL2T bottoms even when the top is regular
    for model in ["PL2T,PL2T", "REG,PL2T", "PL2T,PL2T,PL2T"] {
        assert_all_pass(&format!("model={}; suite=centralizer; trials=9; seed=5", model));
    }
}

#[test]
fn oprim_on_every_depth2_mix_and_deeper() {
    for model in [
        "PL2T",
        "REG",
        "PL2T,PL2T",
        "PL2T,REG",
        "REG,PL2T",
        "REG,REG",
        "PL2T,PL2T,PL2T",
        "PL2T,PL2T,REG",
        "REG,REG,REG",
    ] {
        assert_all_pass(&format!("model={}; suite=oprim; trials=8; seed=11", model));
    }
}

#[test]
fn wild_seeds_do_not_shake_the_constructions() {
    for seed in [0u64, 42, 31337, u64::MAX] {
        assert_all_pass(&format!("model=PL2T; suite=lemma31; trials=10; seed={}", seed));
        assert_all_pass(&format!(
            "model=PL2T,PL2T,PL2T; suite=lemma42; trials=8; seed={}",
            seed
        ));
    }
}
