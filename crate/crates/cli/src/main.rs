use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unimono::entropy::{
    renyi_entropy, tsallis_entropy, unified_entropy, von_neumann_entropy, UnifiedParams,
};
use unimono::harness::acceptance::{run_acceptance, AcceptanceOptions, CRITERIA};
use unimono::harness::{
    configure_workers, render, run_sweep, write_output, Format, SweepConfig, SweepRow,
};
use unimono::inequality::{check, pad_parties, CheckOptions, Theorem, Verdict, SLACK_GATE};
use unimono::measures::{ue_mixed, ue_pure, ueoa, OptBudget, RoofMode, RoofResult};
use unimono::qstate::{
    hermitian_spectrum, load_state, named_state, Bipartition, QuantumState, Spectrum,
};
use unimono::{Error, Result};

#[derive(Parser)]
#[command(
    name = "unimono",
    version,
    about = "Unified-(q,s) entanglement and weighted monogamy checks"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unified entropy of a spectrum or a state.
    Entropy(EntropyArgs),
    /// UE or UEoA of a state across a cut.
    Measure(MeasureArgs),
    /// One theorem on one state.
    Check(CheckArgs),
    /// A parameter sweep described by a JSON config.
    Sweep(SweepArgs),
    /// The acceptance suite.
    Acceptance(AcceptanceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Unified,
    Renyi,
    Tsallis,
    VonNeumann,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum OutFormat {
    Csv,
    #[default]
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct StateArgs {
    /// JSON state file.
    #[arg(long, conflicts_with = "named")]
    state: Option<PathBuf>,
    /// Named state: ghz, w, product or bell.
    #[arg(long, requires = "qubits")]
    named: Option<String>,
    /// Register size of the named state.
    #[arg(long)]
    qubits: Option<usize>,
}

impl StateArgs {
    fn load(&self) -> Result<QuantumState> {
        match (&self.state, &self.named) {
            (Some(path), _) => load_state(path),
            (None, Some(name)) => {
                let n = self.qubits.expect("clap requires --qubits");
                Ok(QuantumState::Pure(named_state(name.parse()?, n)?))
            }
            (None, None) => Err(Error::Usage(
                "give --state FILE or --named KIND --qubits N".into(),
            )),
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Sweep cap per restart.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    ensemble_cap: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
}

impl BudgetArgs {
    fn apply(&self, mut b: OptBudget) -> OptBudget {
        if let Some(v) = self.seed {
            b.seed = v;
        }
        if let Some(v) = self.restarts {
            b.restarts = v;
        }
        if let Some(v) = self.iters {
            b.iterations = v;
        }
        if let Some(v) = self.ensemble_cap {
            b.max_ensemble = v;
        }
        if let Some(v) = self.tolerance {
            b.tolerance = v;
        }
        b
    }
}

#[derive(Args)]
struct EntropyArgs {
    /// Comma-separated eigenvalues.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["state", "named"])]
    spectrum: Option<Vec<f64>>,
    #[command(flatten)]
    source: StateArgs,
    #[arg(long)]
    q: f64,
    /// Ignored by the one-parameter families.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, value_enum, default_value_t = Family::Unified)]
    family: Family,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    source: StateArgs,
    /// Reduce to these qubits first.
    #[arg(long, value_delimiter = ',')]
    keep: Option<Vec<usize>>,
    /// Side A of the cut, after any reduction.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    cut: Vec<usize>,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    s: f64,
    /// Assisted (concave roof) instead of the convex roof.
    #[arg(long)]
    assisted: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t)]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: StateArgs,
    #[arg(long)]
    theorem: Theorem,
    #[arg(long, default_value_t = 0)]
    focus: usize,
    /// Party qubits (default: every qubit except the focus).
    #[arg(long, value_delimiter = ',')]
    parties: Option<Vec<usize>>,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    s: f64,
    /// Exponent of the monogamy theorems.
    #[arg(long, conflicts_with = "beta")]
    alpha: Option<f64>,
    /// Exponent of the polygamy theorems.
    #[arg(long)]
    beta: Option<f64>,
    /// Pad the parties with |0> qubits to a power of two.
    #[arg(long)]
    pad: bool,
    #[arg(long)]
    exploratory: bool,
    /// Include the pairwise witness decompositions in JSON output.
    #[arg(long)]
    witnesses: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t)]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replaces the configured theorems (repeatable).
    #[arg(long)]
    theorem: Vec<Theorem>,
    /// With --s, replaces the configured (q, s) list by one pair.
    #[arg(long, requires = "s")]
    q: Option<f64>,
    #[arg(long, requires = "q")]
    s: Option<f64>,
    /// Replaces the configured alphas (repeatable).
    #[arg(long)]
    alpha: Vec<f64>,
    /// Replaces the configured betas (repeatable).
    #[arg(long)]
    beta: Vec<f64>,
    #[arg(long)]
    exploratory: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AcceptanceArgs {
    #[arg(long, default_value_t = unimono::harness::DEFAULT_SEED)]
    seed: u64,
    /// Print the criteria without running them.
    #[arg(long)]
    list: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<usize>>,
    /// Confirm a check iff its slack is at least this.
    #[arg(long, default_value_t = SLACK_GATE, allow_hyphen_values = true)]
    slack_gate: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .jobs
        .map_or(Ok(()), configure_workers)
        .and_then(|()| match &cli.command {
            Command::Entropy(a) => entropy(a),
            Command::Measure(a) => measure(a),
            Command::Check(a) => check_cmd(a),
            Command::Sweep(a) => sweep(a, cli.jobs),
            Command::Acceptance(a) => acceptance(a),
        });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: String) -> Result<()> {
    let mut bytes = text.into_bytes();
    if !bytes.ends_with(b"\n") {
        bytes.push(b'\n');
    }
    write_output(out.map(PathBuf::as_path), &bytes)
}

fn entropy(a: &EntropyArgs) -> Result<ExitCode> {
    let spec = match &a.spectrum {
        Some(v) => Spectrum::new(v.clone())?,
        None => hermitian_spectrum(&a.source.load()?.density())?,
    };
    let value = match a.family {
        Family::Unified => unified_entropy(&spec, &UnifiedParams::new(a.q, a.s)?),
        Family::Renyi => renyi_entropy(&spec, a.q)?,
        Family::Tsallis => tsallis_entropy(&spec, a.q)?,
        Family::VonNeumann => von_neumann_entropy(&spec),
    };
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

fn roof_json(r: &RoofResult) -> serde_json::Value {
    let witness: Vec<_> = r
        .witness
        .members()
        .iter()
        .map(|(p, psi)| {
            json!({
                "probability": p,
                "amplitudes": psi.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "value": r.value,
        "mode": r.mode.to_string(),
        "bound": match r.mode {
            RoofMode::Min => "upper",
            RoofMode::Max => "lower",
        },
        "restarts_used": r.restarts_used,
        "converged": r.converged,
        "at_ensemble_cap": r.at_ensemble_cap,
        "witness": witness,
    })
}

fn measure(a: &MeasureArgs) -> Result<ExitCode> {
    let mut state = a.source.load()?;
    if let Some(keep) = &a.keep {
        state = state.marginal(keep)?;
    }
    let p = UnifiedParams::new(a.q, a.s)?;
    let cut = Bipartition::new(state.n_qubits(), &a.cut)?;
    let budget = a.budget.apply(OptBudget::default());
    let value = match &state {
        QuantumState::Pure(psi) => {
            let v = ue_pure(psi, &cut, &p)?;
            json!({"value": v, "mode": "pure", "bound": "exact"})
        }
        QuantumState::Mixed(rho) if a.assisted => roof_json(&ueoa(rho, &cut, &p, &budget)?),
        QuantumState::Mixed(rho) => roof_json(&ue_mixed(rho, &cut, &p, &budget)?),
    };
    let text = match a.format {
        OutFormat::Json => serde_json::to_string_pretty(&value)?,
        OutFormat::Csv => format!(
            "value,mode,bound\n{},{},{}",
            value["value"],
            value["mode"].as_str().unwrap_or(""),
            value["bound"].as_str().unwrap_or("")
        ),
    };
    emit(a.out.as_ref(), text)?;
    Ok(ExitCode::SUCCESS)
}

fn check_cmd(a: &CheckArgs) -> Result<ExitCode> {
    let state = a.source.load()?;
    let mut parties = match &a.parties {
        Some(p) => p.clone(),
        None => (0..state.n_qubits()).filter(|&q| q != a.focus).collect(),
    };
    let state = if a.pad {
        let (padded, all) = pad_parties(&state, &parties)?;
        parties = all;
        padded
    } else {
        state
    };
    let exponent = match (a.alpha, a.beta) {
        (Some(e), None) | (None, Some(e)) => e,
        _ => return Err(Error::Usage("give exactly one of --alpha or --beta".into())),
    };
    let p = UnifiedParams::new(a.q, a.s)?;
    let budget = a.budget.apply(OptBudget::default());
    let opts = CheckOptions {
        exploratory: a.exploratory,
        with_witnesses: a.witnesses,
        ..CheckOptions::default()
    };
    let report = check(
        &state, a.focus, &parties, a.theorem, &p, exponent, &budget, &opts,
    )?;
    let row = SweepRow {
        state_id: a
            .source
            .state
            .as_ref()
            .map(|p| p.display().to_string())
            .or_else(|| {
                a.source
                    .named
                    .as_ref()
                    .map(|n| format!("{n}{}", a.source.qubits.unwrap_or(0)))
            })
            .unwrap_or_default(),
        report,
    };
    let bytes = match a.format {
        OutFormat::Json => {
            let mut v = serde_json::to_vec_pretty(&row)?;
            v.push(b'\n');
            v
        }
        OutFormat::Csv => render(std::slice::from_ref(&row), Format::Csv)?,
    };
    write_output(a.out.as_deref(), &bytes)?;
    Ok(if row.is_inconclusive() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn sweep(a: &SweepArgs, jobs: Option<usize>) -> Result<ExitCode> {
    let mut config = match &a.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::from_json(r#"{"params": []}"#)?,
    };
    if !a.theorem.is_empty() {
        config.theorems = a.theorem.clone();
    }
    if let (Some(q), Some(s)) = (a.q, a.s) {
        config.params = vec![(q, s)];
    }
    if !a.alpha.is_empty() {
        config.alphas = a.alpha.clone();
    }
    if !a.beta.is_empty() {
        config.betas = a.beta.clone();
    }
    if a.exploratory {
        config.exploratory = true;
    }
    if let Some(seed) = a.budget.seed {
        config.seed = seed;
    }
    config.budget = a.budget.apply(config.budget);
    if let Some(f) = a.format {
        config.output.format = f.into();
    }
    if let Some(out) = &a.out {
        config.output.path = Some(out.clone());
    }
    if jobs.is_some() {
        // The global pool is already sized.
        config.jobs = None;
    }
    let rows = run_sweep(&config)?;
    let bytes = render(&rows, config.output.format)?;
    write_output(config.output.path.as_deref(), &bytes)?;
    let inconclusive = rows.iter().filter(|r| r.is_inconclusive()).count();
    let not_applicable = rows
        .iter()
        .filter(|r| r.report.verdict == Verdict::NotApplicable)
        .count();
    eprintln!(
        "{} rows: {} confirmed, {inconclusive} inconclusive, {not_applicable} not applicable",
        rows.len(),
        rows.iter()
            .filter(|r| r.report.verdict == Verdict::Confirmed)
            .count()
    );
    Ok(if inconclusive > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn acceptance(a: &AcceptanceArgs) -> Result<ExitCode> {
    if a.list {
        for c in CRITERIA {
            println!("{:>2} {}", c.id, c.name);
        }
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(ids) = &a.only {
        if let Some(bad) = ids.iter().find(|&&i| !CRITERIA.iter().any(|c| c.id == i)) {
            return Err(Error::Usage(format!("no criterion {bad}")));
        }
    }
    let opts = AcceptanceOptions {
        seed: a.seed,
        slack_gate: a.slack_gate,
        only: a.only.clone(),
    };
    let outcomes = run_acceptance(&opts, |o| println!("{o}"));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
