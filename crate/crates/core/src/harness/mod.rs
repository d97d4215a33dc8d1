//! Parameter sweeps over state ensembles and the acceptance suite.
//!
//! A sweep is described by a JSON [`SweepConfig`]:
//!
//! ```json
//! {
//!   "states": [
//!     {"kind": "named", "name": "ghz", "n_qubits": 3},
//!     {"kind": "haar", "n_qubits": 4, "count": 200},
//!     {"kind": "mixed", "n_qubits": 3, "rank": 4, "count": 50, "seed": 9},
//!     {"kind": "file", "path": "state.json"}
//!   ],
//!   "focus": 0,
//!   "theorems": ["1", "3"],
//!   "params": [[2.0, 1.0]],
//!   "alphas": [1.0, 2.0],
//!   "betas": [0.5],
//!   "budget": {"restarts": 32, "iterations": 2000, "max_ensemble": 6, "tolerance": 1e-9},
//!   "seed": 24301,
//!   "exploratory": false,
//!   "pad": false,
//!   "output": {"path": "report.csv", "format": "csv"}
//! }
//! ```
//!
//! Every field except `params` has a default. Monogamy theorems run once
//! per alpha, polygamy theorems once per beta. The parties are all qubits
//! other than `focus` unless `parties` is given. Random states without an
//! explicit seed draw one from `seed`, and the roof searches of state `i`
//! use seed stream `i` of `seed`; `budget.seed` is not used.

pub mod acceptance;
pub mod oracle;

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::UnifiedParams;
use crate::error::{Error, Result};
use crate::inequality::{
    evaluate, lhs_term, pad_parties, pairwise_terms, validate, CheckOptions, InequalityReport, Lhs,
    Mode, PairwiseTerms, Theorem, Verdict,
};
use crate::measures::OptBudget;
use crate::qstate::{
    derive_seed, haar_random_pure, load_state, named_state, random_mixed, QuantumState, StateKind,
};

/// Default sweep seed.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Named {
        name: String,
        n_qubits: usize,
    },
    Haar {
        n_qubits: usize,
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    Mixed {
        n_qubits: usize,
        rank: usize,
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    File {
        path: PathBuf,
    },
}

/// GHZ and W on 3 and 4 qubits, 200 Haar-random pure states on 3 and 4
/// qubits, and 50 random rank-4 mixed 3-qubit states.
pub fn default_states() -> Vec<StateSpec> {
    let mut v = Vec::new();
    for n in [3, 4] {
        for name in ["ghz", "w"] {
            v.push(StateSpec::Named {
                name: name.into(),
                n_qubits: n,
            });
        }
    }
    for n in [3, 4] {
        v.push(StateSpec::Haar {
            n_qubits: n,
            count: 200,
            seed: None,
        });
    }
    v.push(StateSpec::Mixed {
        n_qubits: 3,
        rank: 4,
        count: 50,
        seed: None,
    });
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!(
                "unknown format `{s}`, expected csv or json"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Written to standard output when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_theorems() -> Vec<Theorem> {
    vec![Theorem::One, Theorem::Three]
}

fn default_alphas() -> Vec<f64> {
    vec![1.0, 2.0]
}

fn default_betas() -> Vec<f64> {
    vec![0.5, 1.0]
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_states")]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub focus: usize,
    #[serde(default)]
    pub parties: Option<Vec<usize>>,
    #[serde(default = "default_theorems")]
    pub theorems: Vec<Theorem>,
    pub params: Vec<(f64, f64)>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub budget: OptBudget,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub exploratory: bool,
    /// Pad the party list with `|0>` qubits to a power of two.
    #[serde(default)]
    pub pad: bool,
    #[serde(default)]
    pub output: OutputSpec,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad sweep config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SweepConfig::from_json(&text)
    }

    fn exponents(&self, theorem: Theorem) -> &[f64] {
        match theorem.mode() {
            Mode::Monogamy => &self.alphas,
            Mode::Polygamy => &self.betas,
        }
    }

    /// Checks everything that does not need the states themselves.
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Usage("the state list is empty".into()));
        }
        if self.theorems.is_empty() {
            return Err(Error::Usage("no theorems requested".into()));
        }
        if self.params.is_empty() {
            return Err(Error::Usage("no (q, s) pairs given".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Usage("jobs must be positive".into()));
        }
        self.budget.validate()?;
        for &t in &self.theorems {
            let exps = self.exponents(t);
            if exps.is_empty() {
                return Err(Error::Usage(format!("theorem {t} has no exponents")));
            }
            for &(q, s) in &self.params {
                let p = UnifiedParams::new(q, s)?;
                for &e in exps {
                    validate(t, &p, e, self.exploratory)?;
                }
            }
        }
        for spec in &self.states {
            match spec {
                StateSpec::Haar { count: 0, .. } | StateSpec::Mixed { count: 0, .. } => {
                    return Err(Error::Usage("random state specs need count ≥ 1".into()));
                }
                StateSpec::Named { name, .. } => {
                    name.parse::<StateKind>()?;
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Materializes the state list in configuration order.
    pub fn build_states(&self) -> Result<Vec<(String, QuantumState)>> {
        let mut out = Vec::new();
        for (k, spec) in self.states.iter().enumerate() {
            let spec_seed =
                |seed: Option<u64>| seed.unwrap_or_else(|| derive_seed(self.seed, k as u64));
            match spec {
                StateSpec::Named { name, n_qubits } => {
                    let kind: StateKind = name.parse()?;
                    let psi = named_state(kind, *n_qubits)?;
                    out.push((format!("{kind}{n_qubits}"), QuantumState::Pure(psi)));
                }
                StateSpec::Haar {
                    n_qubits,
                    count,
                    seed,
                } => {
                    let base = spec_seed(*seed);
                    for i in 0..*count {
                        let psi = haar_random_pure(*n_qubits, derive_seed(base, i as u64))?;
                        out.push((format!("haar{n_qubits}-{k}-{i}"), QuantumState::Pure(psi)));
                    }
                }
                StateSpec::Mixed {
                    n_qubits,
                    rank,
                    count,
                    seed,
                } => {
                    let base = spec_seed(*seed);
                    for i in 0..*count {
                        let rho = random_mixed(*n_qubits, *rank, derive_seed(base, i as u64))?;
                        out.push((
                            format!("mixed{n_qubits}r{rank}-{k}-{i}"),
                            QuantumState::Mixed(rho),
                        ));
                    }
                }
                StateSpec::File { path } => {
                    out.push((path.display().to_string(), load_state(path)?));
                }
            }
        }
        Ok(out)
    }
}

/// One report row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub state_id: String,
    #[serde(flatten)]
    pub report: InequalityReport,
}

impl SweepRow {
    /// In-region checks that could not be confirmed.
    pub fn is_inconclusive(&self) -> bool {
        self.report.in_region && self.report.verdict == Verdict::Inconclusive
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "state_id",
    "mode",
    "theorem",
    "q",
    "s",
    "exponent",
    "lhs",
    "rhs",
    "slack",
    "verdict",
    "condition_met",
    "permutation",
];

/// Rows in the order state, theorem, `(q, s)`, exponent.
fn sweep_state(
    config: &SweepConfig,
    index: usize,
    id: &str,
    state: &QuantumState,
) -> Result<Vec<SweepRow>> {
    let n = state.n_qubits();
    let parties = match &config.parties {
        Some(p) => p.clone(),
        None => (0..n).filter(|&q| q != config.focus).collect(),
    };
    let (state, parties) = if config.pad {
        pad_parties(state, &parties)?
    } else {
        (state.clone(), parties)
    };
    let budget = config
        .budget
        .with_seed(derive_seed(config.seed, index as u64));
    let opts = CheckOptions {
        exploratory: config.exploratory,
        ..CheckOptions::default()
    };

    let mut cache: HashMap<(usize, Mode), (Lhs, PairwiseTerms)> = HashMap::new();
    let mut rows = Vec::new();
    for &theorem in &config.theorems {
        let mode = theorem.mode();
        for (pi, &(q, s)) in config.params.iter().enumerate() {
            let p = UnifiedParams::new(q, s)?;
            let (lhs, terms) = match cache.entry((pi, mode)) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let terms = pairwise_terms(&state, config.focus, &parties, &p, mode, &budget)?;
                    let lhs = lhs_term(&state, config.focus, &parties, &p, mode, &budget)?;
                    e.insert((lhs, terms))
                }
            };
            for &e in config.exponents(theorem) {
                rows.push(SweepRow {
                    state_id: id.to_string(),
                    report: evaluate(theorem, e, lhs, terms, &opts)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Runs every configured check. Rows come back in configuration order no
/// matter how many workers run.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let states = config.build_states()?;
    let work = || -> Result<Vec<SweepRow>> {
        let per_state: Vec<Vec<SweepRow>> = states
            .par_iter()
            .enumerate()
            .map(|(i, (id, st))| sweep_state(config, i, id, st))
            .collect::<Result<_>>()?;
        Ok(per_state.into_iter().flatten().collect())
    };
    match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {j} workers: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Sizes the global worker pool. Must run before any parallel work.
pub fn configure_workers(jobs: usize) -> Result<()> {
    if jobs == 0 {
        return Err(Error::Usage("jobs must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} workers: {e}")))
}

fn permutation_field(perm: &[usize]) -> String {
    perm.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Serializes rows; identical rows give identical bytes.
pub fn render(rows: &[SweepRow], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for row in rows {
                let r = &row.report;
                w.write_record([
                    row.state_id.clone(),
                    r.mode.to_string(),
                    r.theorem.to_string(),
                    r.q.to_string(),
                    r.s.to_string(),
                    r.exponent.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.slack.to_string(),
                    r.verdict.to_string(),
                    r.condition_met.map(|c| c.to_string()).unwrap_or_default(),
                    permutation_field(&r.permutation),
                ])?;
            }
            w.into_inner()
                .map_err(|e| Error::Usage(format!("csv buffer: {}", e.error())))
        }
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(rows)?;
            v.push(b'\n');
            Ok(v)
        }
    }
}

/// Writes `bytes` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz_config() -> SweepConfig {
        SweepConfig::from_json(
            r#"{"states": [{"kind": "named", "name": "ghz", "n_qubits": 3}],
                "theorems": ["1"], "params": [[2, 1]], "alphas": [1, 2]}"#,
        )
        .unwrap()
    }

    #[test]
    fn ghz_sweep_gives_two_confirmed_rows() {
        let rows = run_sweep(&ghz_config()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.report.verdict == Verdict::Confirmed));
        assert!((rows[0].report.lhs - 0.5).abs() < 1e-15);
        assert!((rows[1].report.lhs - 0.25).abs() < 1e-15);
    }

    #[test]
    fn out_of_region_rejected_unless_exploratory() {
        let mut c = ghz_config();
        c.params = vec![(2.0, 1.6)];
        assert!(matches!(run_sweep(&c), Err(Error::Region { .. })));
        c.exploratory = true;
        let rows = run_sweep(&c).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.report.verdict == Verdict::Inconclusive && !r.is_inconclusive()));
    }

    #[test]
    fn empty_states_is_usage_error() {
        let mut c = ghz_config();
        c.states.clear();
        assert!(matches!(run_sweep(&c), Err(Error::Usage(_))));
        assert!(matches!(
            SweepConfig::from_json("{\"states\": []}"),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn defaults_fill_in() {
        let c = SweepConfig::from_json(r#"{"params": [[2, 1]]}"#).unwrap();
        assert_eq!(c.states, default_states());
        assert_eq!(c.theorems, vec![Theorem::One, Theorem::Three]);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert!(SweepConfig::from_json(r#"{"params": [[2, 1]], "bogus": 1}"#).is_err());
    }

    #[test]
    fn state_ids_and_counts() {
        let c = SweepConfig::from_json(
            r#"{"states": [{"kind": "named", "name": "w", "n_qubits": 4},
                           {"kind": "haar", "n_qubits": 3, "count": 2},
                           {"kind": "mixed", "n_qubits": 3, "rank": 2, "count": 1, "seed": 3}],
                "params": [[2, 1]]}"#,
        )
        .unwrap();
        let ids: Vec<String> = c
            .build_states()
            .unwrap()
            .into_iter()
            .map(|(id, _)| id)
            .collect();
        assert_eq!(ids, vec!["w4", "haar3-1-0", "haar3-1-1", "mixed3r2-2-0"]);
    }

    #[test]
    fn csv_header_and_fields() {
        let rows = run_sweep(&ghz_config()).unwrap();
        let text = String::from_utf8(render(&rows, Format::Csv).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[..6], ["ghz3", "monogamy", "1", "2", "1", "1"]);
        let lhs: f64 = fields[6].parse().unwrap();
        assert!((lhs - 0.5).abs() < 1e-15);
        assert_eq!(fields[7], "0");
        assert_eq!(fields[9..], ["confirmed", "", "0 1"]);
    }
}
