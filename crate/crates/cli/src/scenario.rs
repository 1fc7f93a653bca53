//! The flat "key=value; …" scenario grammar. Keys: model (comma-separated
//! component kinds, most significant first), suite (comma-separated suite
//! names), trials, seed, output. Entries are separated by semicolons or
//! newlines.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lperm_core::{ComponentKind, TowerModel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("model depth must be between 1 and 5")]
    DepthOutOfRange,
    #[error(transparent)]
    Core(#[from] lperm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn parse(line: usize, col: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse { line, col, msg: msg.into() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum SuiteName {
    Lemma31,
    Lemma41,
    Lemma42,
    Centralizer,
    Oprim,
    Algebra,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Lemma31,
        SuiteName::Lemma41,
        SuiteName::Lemma42,
        SuiteName::Centralizer,
        SuiteName::Oprim,
        SuiteName::Algebra,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteName::Lemma31 => "lemma31",
            SuiteName::Lemma41 => "lemma41",
            SuiteName::Lemma42 => "lemma42",
            SuiteName::Centralizer => "centralizer",
            SuiteName::Oprim => "oprim",
            SuiteName::Algebra => "algebra",
        };
        write!(f, "{}", s)
    }
}

impl FromStr for SuiteName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<SuiteName, CliError> {
        match s {
            "lemma31" => Ok(SuiteName::Lemma31),
            "lemma41" => Ok(SuiteName::Lemma41),
            "lemma42" => Ok(SuiteName::Lemma42),
            "centralizer" => Ok(SuiteName::Centralizer),
            "oprim" => Ok(SuiteName::Oprim),
            "algebra" => Ok(SuiteName::Algebra),
            other => Err(CliError::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub model: TowerModel,
    pub suites: Vec<SuiteName>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let mut model: Option<TowerModel> = None;
    let mut suites: Vec<SuiteName> = Vec::new();
    let mut trials: usize = 100;
    let mut seed: u64 = 0;
    let mut output: Option<PathBuf> = None;

    for (li, line) in text.lines().enumerate() {
        let lineno = li + 1;
        let mut col = 1usize;
        for entry in line.split(';') {
            let entry_col = col;
            col += entry.chars().count() + 1;
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| CliError::parse(lineno, entry_col, format!("expected key=value, got {:?}", entry)))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "model" => {
                    let mut kinds = Vec::new();
                    for part in value.split(',') {
                        match part.trim() {
                            "PL2T" => kinds.push(ComponentKind::Pl2t),
                            "REG" => kinds.push(ComponentKind::Reg),
                            other => {
                                return Err(CliError::parse(
                                    lineno,
                                    entry_col,
                                    format!("unknown component kind {:?}", other),
                                ))
                            }
                        }
                    }
                    model = Some(TowerModel::new(kinds).map_err(|_| CliError::DepthOutOfRange)?);
                }
                "suite" => {
                    for part in value.split(',') {
                        suites.push(part.trim().parse()?);
                    }
                }
                "trials" => {
                    trials = value.parse().map_err(|_| {
                        CliError::parse(lineno, entry_col, format!("invalid trial count {:?}", value))
                    })?;
                    if trials == 0 {
                        return Err(CliError::parse(lineno, entry_col, "trials must be at least 1"));
                    }
                }
                "seed" => {
                    seed = value.parse().map_err(|_| {
                        CliError::parse(lineno, entry_col, format!("invalid seed {:?}", value))
                    })?;
                }
                "output" => {
                    output = Some(PathBuf::from(value));
                }
                other => {
                    return Err(CliError::parse(lineno, entry_col, format!("unknown key {:?}", other)));
                }
            }
        }
    }
    let model = model.ok_or_else(|| CliError::parse(1, 1, "missing required key 'model'"))?;
    if suites.is_empty() {
        return Err(CliError::parse(1, 1, "missing required key 'suite'"));
    }
    suites.sort();
    suites.dedup();
    Ok(Scenario { model, suites, trials, seed, output })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_grammar() {
        let s = parse_scenario("model=PL2T; suite=lemma31; trials=50; seed=7").unwrap();
        assert_eq!(s.model.depth(), 1);
        assert_eq!(s.suites, vec![SuiteName::Lemma31]);
        assert_eq!(s.trials, 50);
        assert_eq!(s.seed, 7);
    }

    #[test]
    fn parses_tower_model_with_defaults() {
        let s = parse_scenario("model=PL2T,PL2T,REG; suite=oprim").unwrap();
        assert_eq!(s.model.depth(), 3);
        assert!(s.model.locally_abelian());
        assert_eq!(s.trials, 100);
        assert_eq!(s.seed, 0);
    }

    #[test]
    fn depth_cap_is_enforced() {
        let err = parse_scenario("model=PL2T,PL2T,PL2T,PL2T,PL2T,PL2T; suite=oprim").unwrap_err();
        assert!(matches!(err, CliError::DepthOutOfRange));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let err = parse_scenario("model=PL2T; suite=nonsense").unwrap_err();
        assert!(matches!(err, CliError::UnknownSuite(s) if s == "nonsense"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_scenario("model=PL2T; suite=lemma31\ntrials=zero").unwrap_err();
        match err {
            CliError::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("unexpected {:?}", other),
        }
        assert!(parse_scenario("model=PL2T; suite=lemma31; trials=0").is_err());
        assert!(parse_scenario("suite=lemma31").is_err());
        assert!(parse_scenario("model=PL2T").is_err());
    }

    #[test]
    fn multiline_and_output() {
        let s = parse_scenario("model=PL2T,PL2T\nsuite=lemma42,centralizer\noutput=certs/run1").unwrap();
        assert_eq!(s.suites, vec![SuiteName::Lemma42, SuiteName::Centralizer]);
        assert_eq!(s.output.unwrap(), PathBuf::from("certs/run1"));
    }
}
