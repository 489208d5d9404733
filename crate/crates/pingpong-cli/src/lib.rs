//! Command-line front end: closed-form analysis, curve tabulation and Monte
//! Carlo simulation as subcommands with reproducible seeds and
//! machine-readable CSV/JSON output.
//!
//! All output is rendered into memory first and written only on success, so
//! a failing invocation never leaves a partial file behind. Exit codes:
//! 0 success, 2 flag/validation error, 1 internal error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pingpong::harness::{
    analytic_curve, run_trials_full, run_trials_parallel, AnalyticCurveSpec, CurveTable,
    HarnessError, TrialAggregate,
};
use pingpong::info::{
    binary_entropy, eve_eigenvalues_closed_form, eve_encoded_density, eve_information_bound,
    holevo_chi, von_neumann_entropy, EveModelParams,
};
use pingpong::protocol::{
    alice_source_ensemble, AttackStrategy, BasisPolicy, MessageSpec, ProtocolConfig, ProtocolError,
    Transcript,
};
use pingpong::quantum::{Basis, DensityMatrix};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug)]
pub enum CliError {
    /// A flag or parameter violated a precondition. Exit code 2.
    Validation(String),
    /// Everything else (I/O, serialization, runtime overruns). Exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(msg) | CliError::Internal(msg) => msg,
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl From<HarnessError> for CliError {
    fn from(err: HarnessError) -> Self {
        match err {
            HarnessError::Protocol(ProtocolError::MaxRoundsExceeded { .. }) => {
                CliError::Internal(err.to_string())
            }
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(err: ProtocolError) -> Self {
        match err {
            ProtocolError::MaxRoundsExceeded { .. } => CliError::Internal(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pingpong",
    version,
    about = "Simulator and analytic toolkit for a mixed-state ping-pong \
             quantum secure direct communication protocol"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Base seed for randomized work (default 42).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form analysis reports.
    Analyze {
        #[command(subcommand)]
        target: AnalyzeTarget,
    },
    /// Tabulate a closed-form curve.
    Curve {
        /// Which curve: info_bound, survival or eigenvalues.
        #[arg(long, value_enum)]
        kind: CurveKindArg,
        /// Number of grid points over d in [0, 1/2] (info_bound, eigenvalues).
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Encoding prior p0 (eigenvalues).
        #[arg(long)]
        p0: Option<f64>,
        /// Control-mode probability (survival).
        #[arg(long)]
        c: Option<f64>,
        /// Per-control-round detection probability (survival).
        #[arg(long)]
        d: Option<f64>,
        /// Largest message length n (survival).
        #[arg(long = "n-max")]
        n_max: Option<u64>,
    },
    /// Run seeded protocol sessions and report pooled statistics.
    Simulate {
        /// Message bits: a literal string like 1011, or random:N.
        #[arg(long)]
        bits: Option<String>,
        /// Control-mode probability, 0 < c < 1.
        #[arg(long)]
        c: Option<f64>,
        /// Attack spec: none | probe:THETA:B0|B1 | probe:B0|B1 (with
        /// --detection) | intercept:random|B0|B1.
        #[arg(long)]
        attack: Option<String>,
        /// Number of sessions to run.
        #[arg(long)]
        trials: Option<u64>,
        /// Prior of encoding 0 for random bits (p1 = 1 - p0).
        #[arg(long)]
        p0: Option<f64>,
        /// Probe detection probability; sets theta = arcsin(sqrt(D)).
        #[arg(long)]
        detection: Option<f64>,
        /// Abort the run if a session exceeds this many rounds.
        #[arg(long = "max-rounds")]
        max_rounds: Option<u64>,
        /// Worker threads; results are bit-identical to sequential runs.
        #[arg(long)]
        threads: Option<usize>,
        /// Also write every transcript, one JSON object per line.
        #[arg(long)]
        transcripts: Option<PathBuf>,
        /// JSON file with the same fields; explicit flags win on conflict.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeTarget {
    /// The sender's mixed source: density matrix, spectrum, entropies, Holevo bound.
    Source,
    /// The post-encoding eavesdropper state at detection d and prior p0.
    Eve {
        /// Detection probability in [0, 1].
        #[arg(long)]
        d: f64,
        /// Prior of encoding 0 (p1 = 1 - p0).
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKindArg {
    InfoBound,
    Survival,
    Eigenvalues,
}

/// Everything an invocation produces, rendered but not yet written anywhere.
pub struct RenderedOutput {
    pub primary: Vec<u8>,
    /// Transcript stream and its destination, when requested.
    pub transcripts: Option<(PathBuf, Vec<u8>)>,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct MatrixReport {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixReport {
    fn from_density(rho: &DensityMatrix) -> Self {
        let n = rho.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| rho.entry(i, j).re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| rho.entry(i, j).im).collect())
            .collect();
        MatrixReport { re, im }
    }

    fn csv_rows(&self, name: &str, rows: &mut Vec<(String, f64)>) {
        for i in 0..self.re.len() {
            for j in 0..self.re[i].len() {
                rows.push((format!("{name}_{i}{j}_re"), self.re[i][j]));
                rows.push((format!("{name}_{i}{j}_im"), self.im[i][j]));
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SourceReport {
    pub rho: MatrixReport,
    pub eigenvalues: [f64; 2],
    pub von_neumann_entropy_bits: f64,
    pub holevo_chi_bits: f64,
    pub source_shannon_entropy_bits: f64,
}

#[derive(Debug, Serialize)]
pub struct EveReport {
    pub detection: f64,
    pub p0: f64,
    pub p1: f64,
    pub rho_encoded: MatrixReport,
    pub eigenvalues_closed_form: [f64; 2],
    pub eigenvalues_numeric: [f64; 2],
    pub information_bound_bits: f64,
}

pub fn source_report() -> SourceReport {
    let ensemble = alice_source_ensemble();
    let rho = ensemble.density();
    let eigs = rho.eigenvalues();
    SourceReport {
        rho: MatrixReport::from_density(&rho),
        eigenvalues: [eigs[0], eigs[1]],
        von_neumann_entropy_bits: von_neumann_entropy(&rho).value(),
        holevo_chi_bits: holevo_chi(&ensemble).value(),
        source_shannon_entropy_bits: binary_entropy(0.5).expect("1/2 is a probability").value(),
    }
}

pub fn eve_report(d: f64, p0: f64) -> Result<EveReport, CliError> {
    let params = EveModelParams::with_prior(d, p0).map_err(|e| validation(e.to_string()))?;
    let rho = eve_encoded_density(&params);
    let numeric = rho.eigenvalues();
    let (hi, lo) = eve_eigenvalues_closed_form(&params);
    Ok(EveReport {
        detection: d,
        p0,
        p1: 1.0 - p0,
        rho_encoded: MatrixReport::from_density(&rho),
        eigenvalues_closed_form: [hi, lo],
        eigenvalues_numeric: [numeric[0], numeric[1]],
        information_bound_bits: eve_information_bound(d)
            .map_err(|e| validation(e.to_string()))?
            .value(),
    })
}

fn key_value_csv(rows: &[(String, f64)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (key, value) in rows {
        let _ = writeln!(out, "{key},{value}");
    }
    out
}

fn source_report_csv(report: &SourceReport) -> String {
    let mut rows = Vec::new();
    report.rho.csv_rows("rho", &mut rows);
    rows.push(("eigenvalue_1".into(), report.eigenvalues[0]));
    rows.push(("eigenvalue_2".into(), report.eigenvalues[1]));
    rows.push((
        "von_neumann_entropy_bits".into(),
        report.von_neumann_entropy_bits,
    ));
    rows.push(("holevo_chi_bits".into(), report.holevo_chi_bits));
    rows.push((
        "source_shannon_entropy_bits".into(),
        report.source_shannon_entropy_bits,
    ));
    key_value_csv(&rows)
}

fn eve_report_csv(report: &EveReport) -> String {
    let mut rows = vec![
        ("detection".to_string(), report.detection),
        ("p0".to_string(), report.p0),
        ("p1".to_string(), report.p1),
    ];
    report.rho_encoded.csv_rows("rho_encoded", &mut rows);
    rows.push((
        "eigenvalue_closed_form_1".into(),
        report.eigenvalues_closed_form[0],
    ));
    rows.push((
        "eigenvalue_closed_form_2".into(),
        report.eigenvalues_closed_form[1],
    ));
    rows.push(("eigenvalue_numeric_1".into(), report.eigenvalues_numeric[0]));
    rows.push(("eigenvalue_numeric_2".into(), report.eigenvalues_numeric[1]));
    rows.push((
        "information_bound_bits".into(),
        report.information_bound_bits,
    ));
    key_value_csv(&rows)
}

fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text.into_bytes())
}

// ---------------------------------------------------------------------------
// Attack spec grammar
// ---------------------------------------------------------------------------

fn parse_basis(token: &str) -> Result<Basis, CliError> {
    match token {
        "B0" => Ok(Basis::B0),
        "B1" => Ok(Basis::B1),
        other => Err(validation(format!("basis must be B0 or B1, got {other:?}"))),
    }
}

/// Parses `none | probe:THETA:BASIS | probe:BASIS | intercept:random|B0|B1`.
/// A `--detection D` value overrides the probe angle with arcsin(√D).
pub fn parse_attack(spec: &str, detection: Option<f64>) -> Result<AttackStrategy, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["none"] => {
            if detection.is_some() {
                return Err(validation(
                    "--detection only applies to probe attacks".to_string(),
                ));
            }
            Ok(AttackStrategy::NoAttack)
        }
        ["probe", rest @ ..] => {
            let (theta_token, basis_token) = match rest {
                [basis] => (None, *basis),
                [theta, basis] => (Some(*theta), *basis),
                _ => {
                    return Err(validation(format!(
                        "probe spec must be probe:THETA:BASIS or probe:BASIS, got {spec:?}"
                    )))
                }
            };
            let basis = parse_basis(basis_token)?;
            let theta = match detection {
                Some(d) => {
                    if !(0.0..=1.0).contains(&d) {
                        return Err(validation(format!(
                            "--detection must lie in [0, 1], got {d}"
                        )));
                    }
                    d.sqrt().asin()
                }
                None => {
                    let token = theta_token.ok_or_else(|| {
                        validation("probe:BASIS requires --detection to fix the angle".to_string())
                    })?;
                    token.parse::<f64>().map_err(|_| {
                        validation(format!("probe angle must be a number, got {token:?}"))
                    })?
                }
            };
            Ok(AttackStrategy::probe(theta, basis)?)
        }
        ["intercept", policy] => {
            if detection.is_some() {
                return Err(validation(
                    "--detection only applies to probe attacks".to_string(),
                ));
            }
            let policy = match *policy {
                "random" => BasisPolicy::RandomBasis,
                token => BasisPolicy::Fixed(parse_basis(token)?),
            };
            Ok(AttackStrategy::intercept(policy))
        }
        _ => Err(validation(format!(
            "attack spec must be none, probe:THETA:B0|B1 or intercept:random|B0|B1, got {spec:?}"
        ))),
    }
}

fn parse_bits(spec: &str) -> Result<MessageSpec, CliError> {
    if let Some(count) = spec.strip_prefix("random:") {
        let n: usize = count.parse().map_err(|_| {
            validation(format!(
                "random bit count must be a positive integer, got {count:?}"
            ))
        })?;
        if n == 0 {
            return Err(validation(
                "random bit count must be at least 1".to_string(),
            ));
        }
        return Ok(MessageSpec::Random(n));
    }
    Ok(MessageSpec::Fixed(spec.to_string()))
}

// ---------------------------------------------------------------------------
// Simulate config file merging
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFile {
    bits: Option<String>,
    c: Option<f64>,
    attack: Option<String>,
    trials: Option<u64>,
    p0: Option<f64>,
    detection: Option<f64>,
    max_rounds: Option<u64>,
    threads: Option<usize>,
    seed: Option<u64>,
}

struct SimulatePlan {
    config: ProtocolConfig,
    strategy: AttackStrategy,
    trials: u64,
    seed: u64,
    threads: usize,
}

#[allow(clippy::too_many_arguments)]
fn simulate_plan(
    bits: Option<String>,
    c: Option<f64>,
    attack: Option<String>,
    trials: Option<u64>,
    p0: Option<f64>,
    detection: Option<f64>,
    max_rounds: Option<u64>,
    threads: Option<usize>,
    seed: Option<u64>,
    config_path: Option<&PathBuf>,
) -> Result<SimulatePlan, CliError> {
    let file: SimulateFile = match config_path {
        None => SimulateFile::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| validation(format!("cannot read --config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| validation(format!("invalid --config {}: {e}", path.display())))?
        }
    };

    // explicit flags win over the config file
    let bits = bits
        .or(file.bits)
        .ok_or_else(|| validation("--bits is required (literal string or random:N)".to_string()))?;
    let c = c
        .or(file.c)
        .ok_or_else(|| validation("--c is required (0 < c < 1)".to_string()))?;
    let attack_spec = attack
        .or(file.attack)
        .ok_or_else(|| validation("--attack is required".to_string()))?;
    let trials = trials
        .or(file.trials)
        .ok_or_else(|| validation("--trials is required (at least 1)".to_string()))?;
    let p0 = p0.or(file.p0).unwrap_or(0.5);
    let detection = detection.or(file.detection);
    let max_rounds = max_rounds.or(file.max_rounds);
    let threads = threads.or(file.threads).unwrap_or(1);
    let seed = seed.or(file.seed).unwrap_or(DEFAULT_SEED);

    if trials == 0 {
        return Err(validation("--trials must be at least 1".to_string()));
    }
    if threads == 0 {
        return Err(validation("--threads must be at least 1".to_string()));
    }

    let strategy = parse_attack(&attack_spec, detection)?;
    let mut config = ProtocolConfig::new(c, parse_bits(&bits)?, seed)?.with_priors(p0, 1.0 - p0)?;
    if let Some(limit) = max_rounds {
        config = config.with_max_rounds(limit)?;
    }
    Ok(SimulatePlan {
        config,
        strategy,
        trials,
        seed,
        threads,
    })
}

// ---------------------------------------------------------------------------
// Command execution
// ---------------------------------------------------------------------------

fn render_table(table: &CurveTable, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => Ok(table.to_csv().into_bytes()),
        Format::Json => to_json_bytes(table),
    }
}

fn render_aggregate(aggregate: &TrialAggregate, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => Ok(aggregate.to_csv().into_bytes()),
        Format::Json => to_json_bytes(aggregate),
    }
}

fn render_transcripts(transcripts: &[Transcript]) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    for transcript in transcripts {
        let line = serde_json::to_string(transcript)
            .map_err(|e| CliError::Internal(format!("JSON serialization failed: {e}")))?;
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    }
    Ok(out)
}

fn d_grid(steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(validation(format!(
            "--steps must be at least 2 to span [0, 1/2], got {steps}"
        )));
    }
    Ok((0..steps)
        .map(|i| 0.5 * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Runs one parsed invocation and renders its output. Pure given the flags
/// and seed: identical invocations produce identical bytes.
pub fn execute(cli: Cli) -> Result<RenderedOutput, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Analyze { target } => {
            let primary = match target {
                AnalyzeTarget::Source => {
                    let report = source_report();
                    match format {
                        Format::Csv => source_report_csv(&report).into_bytes(),
                        Format::Json => to_json_bytes(&report)?,
                    }
                }
                AnalyzeTarget::Eve { d, p0 } => {
                    let report = eve_report(d, p0)?;
                    match format {
                        Format::Csv => eve_report_csv(&report).into_bytes(),
                        Format::Json => to_json_bytes(&report)?,
                    }
                }
            };
            Ok(RenderedOutput {
                primary,
                transcripts: None,
            })
        }
        Command::Curve {
            kind,
            steps,
            p0,
            c,
            d,
            n_max,
        } => {
            let table = match kind {
                CurveKindArg::InfoBound => {
                    analytic_curve(&AnalyticCurveSpec::InfoBound, &d_grid(steps)?)?
                }
                CurveKindArg::Eigenvalues => analytic_curve(
                    &AnalyticCurveSpec::Eigenvalues {
                        p0: p0.unwrap_or(0.5),
                    },
                    &d_grid(steps)?,
                )?,
                CurveKindArg::Survival => {
                    let c = c.ok_or_else(|| {
                        validation("--c is required for the survival curve".to_string())
                    })?;
                    let d = d.ok_or_else(|| {
                        validation("--d is required for the survival curve".to_string())
                    })?;
                    let n_max = n_max.ok_or_else(|| {
                        validation("--n-max is required for the survival curve".to_string())
                    })?;
                    if n_max == 0 {
                        return Err(validation("--n-max must be at least 1".to_string()));
                    }
                    let grid: Vec<f64> = (1..=n_max).map(|n| n as f64).collect();
                    analytic_curve(&AnalyticCurveSpec::Survival { c, d }, &grid)?
                }
            };
            Ok(RenderedOutput {
                primary: render_table(&table, format)?,
                transcripts: None,
            })
        }
        Command::Simulate {
            bits,
            c,
            attack,
            trials,
            p0,
            detection,
            max_rounds,
            threads,
            transcripts,
            config,
        } => {
            let plan = simulate_plan(
                bits,
                c,
                attack,
                trials,
                p0,
                detection,
                max_rounds,
                threads,
                cli.seed,
                config.as_ref(),
            )?;
            let (aggregate, transcript_bytes) = if transcripts.is_some() {
                let (aggregate, all) =
                    run_trials_full(&plan.config, &plan.strategy, plan.trials, plan.seed)?;
                (aggregate, Some(render_transcripts(&all)?))
            } else {
                (
                    run_trials_parallel(
                        &plan.config,
                        &plan.strategy,
                        plan.trials,
                        plan.seed,
                        plan.threads,
                    )?,
                    None,
                )
            };
            Ok(RenderedOutput {
                primary: render_aggregate(&aggregate, format)?,
                transcripts: transcripts.zip(transcript_bytes),
            })
        }
    }
}
