//! Monte Carlo experiment runner and statistics layer.
//!
//! Runs many seeded sessions, pools integer counters across trials, and
//! reports rates with normal-approximation standard errors next to the
//! closed-form predictions. Trial `k` uses seed `base_seed ^ k`, so the
//! aggregate depends only on the set of trials, never on execution order,
//! and parallel runs are bit-identical to sequential ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::{
    binary_entropy, eve_eigenvalues_closed_form, survival_value, Bits, EveModelParams,
};
use crate::protocol::{
    run_session, AttackStrategy, Mode, ProtocolConfig, ProtocolError, Transcript,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("input pairs are empty")]
    EmptyInput,
    #[error("pairs must be binary (0 or 1), found {0}")]
    NonBinaryPair(u8),
    #[error("grid must be nonempty")]
    EmptyGrid,
    #[error("grid values must be finite and strictly increasing")]
    NonIncreasingGrid,
    #[error("invalid curve parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// A rate with its binomial standard error √(p(1−p)/N). Both are zero when
/// the denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub value: f64,
    pub stderr: f64,
}

impl RateEstimate {
    fn from_counts(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            return RateEstimate {
                value: 0.0,
                stderr: 0.0,
            };
        }
        let p = numerator as f64 / denominator as f64;
        RateEstimate {
            value: p,
            stderr: (p * (1.0 - p) / denominator as f64).sqrt(),
        }
    }
}

/// Pooled statistics over a batch of seeded sessions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialAggregate {
    pub trials: u64,
    pub control_rounds: u64,
    pub aborts: u64,
    pub detection_rate: RateEstimate,
    pub decode_error_rate: RateEstimate,
    pub eve_accuracy: RateEstimate,
    pub empirical_mutual_info: Bits,
    /// Fraction of sessions still unaborted after n delivered message bits,
    /// for n = 0..=message length.
    pub survival_by_n: Vec<(u64, f64)>,
}

impl TrialAggregate {
    /// Single-record CSV with a header row. The survival curve is carried by
    /// the JSON form and by [`survival_curve`]; this row holds the scalars.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "trials,control_rounds,aborts,detection_rate,detection_stderr,\
             decode_error_rate,decode_error_stderr,eve_accuracy,eve_accuracy_stderr,\
             empirical_mutual_info_bits\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            self.trials,
            self.control_rounds,
            self.aborts,
            self.detection_rate.value,
            self.detection_rate.stderr,
            self.decode_error_rate.value,
            self.decode_error_rate.stderr,
            self.eve_accuracy.value,
            self.eve_accuracy.stderr,
            self.empirical_mutual_info.value(),
        ));
        out
    }
}

#[derive(Debug, Clone, Default)]
struct Counters {
    trials: u64,
    control_rounds: u64,
    aborts: u64,
    message_rounds: u64,
    decode_errors: u64,
    guesses: u64,
    correct_guesses: u64,
    joint: [[u64; 2]; 2],
    /// survived[n] counts sessions that delivered at least n bits unaborted.
    survived: Vec<u64>,
}

impl Counters {
    fn new(message_len: usize) -> Self {
        Counters {
            survived: vec![0; message_len + 1],
            ..Counters::default()
        }
    }

    fn absorb_transcript(&mut self, transcript: &Transcript) {
        self.trials += 1;
        let mut delivered = 0usize;
        for round in &transcript.rounds {
            match round.mode {
                Mode::Control => {
                    self.control_rounds += 1;
                    if round.verdict == Some(crate::protocol::Verdict::Abort) {
                        self.aborts += 1;
                    }
                }
                Mode::Message => {
                    self.message_rounds += 1;
                    delivered += 1;
                    let bob = round.bob_bit.expect("message rounds carry bob_bit");
                    let alice = round
                        .alice_decoded
                        .expect("message rounds carry alice_decoded");
                    if bob != alice {
                        self.decode_errors += 1;
                    }
                    if let Some(guess) = round.eve_guess {
                        self.guesses += 1;
                        if guess == bob {
                            self.correct_guesses += 1;
                        }
                        self.joint[bob as usize][guess as usize] += 1;
                    }
                }
            }
        }
        for n in 0..=delivered.min(self.survived.len() - 1) {
            self.survived[n] += 1;
        }
    }

    fn merge(&mut self, other: &Counters) {
        self.trials += other.trials;
        self.control_rounds += other.control_rounds;
        self.aborts += other.aborts;
        self.message_rounds += other.message_rounds;
        self.decode_errors += other.decode_errors;
        self.guesses += other.guesses;
        self.correct_guesses += other.correct_guesses;
        for i in 0..2 {
            for j in 0..2 {
                self.joint[i][j] += other.joint[i][j];
            }
        }
        for (into, from) in self.survived.iter_mut().zip(&other.survived) {
            *into += from;
        }
    }

    fn finalize(self) -> TrialAggregate {
        let mutual_info = if self.guesses == 0 {
            Bits::new(0.0)
        } else {
            mutual_information_from_counts(&self.joint)
        };
        let survival_by_n = self
            .survived
            .iter()
            .enumerate()
            .map(|(n, &count)| (n as u64, count as f64 / self.trials as f64))
            .collect();
        TrialAggregate {
            trials: self.trials,
            control_rounds: self.control_rounds,
            aborts: self.aborts,
            detection_rate: RateEstimate::from_counts(self.aborts, self.control_rounds),
            decode_error_rate: RateEstimate::from_counts(self.decode_errors, self.message_rounds),
            eve_accuracy: RateEstimate::from_counts(self.correct_guesses, self.guesses),
            empirical_mutual_info: mutual_info,
            survival_by_n,
        }
    }
}

fn run_range(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
    range: std::ops::Range<u64>,
    base_seed: u64,
    mut sink: Option<&mut Vec<Transcript>>,
) -> Result<Counters, HarnessError> {
    let mut counters = Counters::new(config.message_len());
    for k in range {
        let trial_config = config.clone().with_seed(base_seed ^ k);
        let transcript = run_session(&trial_config, strategy)?;
        counters.absorb_transcript(&transcript);
        if let Some(collected) = sink.as_deref_mut() {
            collected.push(transcript);
        }
    }
    Ok(counters)
}

/// Runs `trials` sessions sequentially; trial `k` uses seed `base_seed ^ k`.
pub fn run_trials(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
    trials: u64,
    base_seed: u64,
) -> Result<TrialAggregate, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    Ok(run_range(config, strategy, 0..trials, base_seed, None)?.finalize())
}

/// Like [`run_trials`] but also returns every transcript, in trial order.
pub fn run_trials_full(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
    trials: u64,
    base_seed: u64,
) -> Result<(TrialAggregate, Vec<Transcript>), HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let mut transcripts = Vec::with_capacity(trials as usize);
    let counters = run_range(
        config,
        strategy,
        0..trials,
        base_seed,
        Some(&mut transcripts),
    )?;
    Ok((counters.finalize(), transcripts))
}

/// Runs trials across `threads` worker threads. Counters are merged in chunk
/// order, and every statistic derives from pooled integer counts, so the
/// result is identical to the sequential run.
pub fn run_trials_parallel(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
    trials: u64,
    base_seed: u64,
    threads: usize,
) -> Result<TrialAggregate, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let workers = threads.clamp(1, trials as usize);
    if workers == 1 {
        return run_trials(config, strategy, trials, base_seed);
    }
    let chunk = trials.div_ceil(workers as u64);
    let results: Vec<Result<Counters, HarnessError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let start = w * chunk;
                let end = ((w + 1) * chunk).min(trials);
                scope.spawn(move || run_range(config, strategy, start..end, base_seed, None))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = Counters::new(config.message_len());
    for result in results {
        total.merge(&result?);
    }
    Ok(total.finalize())
}

fn mutual_information_from_counts(joint: &[[u64; 2]; 2]) -> Bits {
    let total: u64 = joint.iter().flatten().sum();
    let n = total as f64;
    let row: [f64; 2] = [
        (joint[0][0] + joint[0][1]) as f64 / n,
        (joint[1][0] + joint[1][1]) as f64 / n,
    ];
    let col: [f64; 2] = [
        (joint[0][0] + joint[1][0]) as f64 / n,
        (joint[0][1] + joint[1][1]) as f64 / n,
    ];
    let mut mi = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            let p = joint[x][y] as f64 / n;
            if p > 0.0 {
                mi += p * (p / (row[x] * col[y])).log2();
            }
        }
    }
    Bits::new(mi)
}

/// Plug-in mutual information (bits) of the empirical joint distribution of
/// binary pairs.
pub fn empirical_mutual_information(pairs: &[(u8, u8)]) -> Result<Bits, HarnessError> {
    if pairs.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let mut joint = [[0u64; 2]; 2];
    for &(x, y) in pairs {
        if x > 1 {
            return Err(HarnessError::NonBinaryPair(x));
        }
        if y > 1 {
            return Err(HarnessError::NonBinaryPair(y));
        }
        joint[x as usize][y as usize] += 1;
    }
    Ok(mutual_information_from_counts(&joint))
}

/// Which closed-form family a table column tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    InfoBound,
    Survival,
    Eigenvalues,
}

/// A plain numeric table: named columns, first column is the strictly
/// increasing x-axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub kind: CurveKind,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveTable {
    fn new(kind: CurveKind, columns: &[&str]) -> Self {
        CurveTable {
            kind,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push_row(&mut self, row: Vec<f64>) -> Result<(), HarnessError> {
        debug_assert_eq!(row.len(), self.columns.len());
        if let Some(last) = self.rows.last() {
            if row[0] <= last[0] {
                return Err(HarnessError::NonIncreasingGrid);
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// CSV with a header row, one point per row, '.' decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Parameters for the closed-form tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticCurveSpec {
    /// I(d) = H_bin(d) over a grid of detection probabilities.
    InfoBound,
    /// p_n = (1 − c·d)^(n/(1−c)) over a grid of message counts.
    Survival { c: f64, d: f64 },
    /// Closed-form eigenvalues of the post-encoding state over a grid of
    /// detection probabilities at fixed prior p0.
    Eigenvalues { p0: f64 },
}

fn validate_grid(grid: &[f64]) -> Result<(), HarnessError> {
    if grid.is_empty() {
        return Err(HarnessError::EmptyGrid);
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(HarnessError::NonIncreasingGrid);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::NonIncreasingGrid);
    }
    Ok(())
}

/// Tabulates a closed form over `grid`; no simulation involved.
pub fn analytic_curve(spec: &AnalyticCurveSpec, grid: &[f64]) -> Result<CurveTable, HarnessError> {
    validate_grid(grid)?;
    match spec {
        AnalyticCurveSpec::InfoBound => {
            let mut table = CurveTable::new(CurveKind::InfoBound, &["d", "info_bound_bits"]);
            for &d in grid {
                let info =
                    binary_entropy(d).map_err(|e| HarnessError::InvalidParameter(e.to_string()))?;
                table.push_row(vec![d, info.value()])?;
            }
            Ok(table)
        }
        AnalyticCurveSpec::Survival { c, d } => {
            if !(*c > 0.0 && *c < 1.0) {
                return Err(HarnessError::InvalidParameter(format!(
                    "control-mode probability must satisfy 0 < c < 1, got {c}"
                )));
            }
            if !(0.0..=0.5).contains(d) {
                return Err(HarnessError::InvalidParameter(format!(
                    "detection probability must lie in [0, 1/2], got {d}"
                )));
            }
            if grid.iter().any(|&n| n < 0.0) {
                return Err(HarnessError::InvalidParameter(
                    "message counts must be nonnegative".into(),
                ));
            }
            let mut table = CurveTable::new(CurveKind::Survival, &["n", "survival_analytic"]);
            for &n in grid {
                table.push_row(vec![n, survival_value(*c, *d, n)])?;
            }
            Ok(table)
        }
        AnalyticCurveSpec::Eigenvalues { p0 } => {
            let mut table = CurveTable::new(
                CurveKind::Eigenvalues,
                &["d", "lambda_plus", "lambda_minus"],
            );
            for &d in grid {
                let params = EveModelParams::with_prior(d, *p0)
                    .map_err(|e| HarnessError::InvalidParameter(e.to_string()))?;
                let (hi, lo) = eve_eigenvalues_closed_form(&params);
                table.push_row(vec![d, hi, lo])?;
            }
            Ok(table)
        }
    }
}

/// Empirical unaborted fraction after n = 0..=n_max delivered bits over
/// `trials` sessions of exactly `n_max` message bits, next to the analytic
/// column with `d` set to the strategy's enumerated per-control-round
/// detection probability.
pub fn survival_curve(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
    trials: u64,
    n_max: usize,
) -> Result<CurveTable, HarnessError> {
    if n_max == 0 {
        return Err(HarnessError::InvalidParameter(
            "n_max must be at least 1".into(),
        ));
    }
    let session_config = ProtocolConfig::new(
        config.control_probability(),
        crate::protocol::MessageSpec::Random(n_max),
        config.seed(),
    )?
    .with_priors(config.p0(), config.p1())?;
    let aggregate = run_trials(&session_config, strategy, trials, config.seed())?;

    let c = config.control_probability();
    let delta = strategy.enumerated_control_detection();
    let mut table = CurveTable::new(
        CurveKind::Survival,
        &["n", "survival_analytic", "survival_empirical"],
    );
    for &(n, empirical) in &aggregate.survival_by_n {
        table.push_row(vec![
            n as f64,
            survival_value(c, delta, n as f64),
            empirical,
        ])?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{BasisPolicy, MessageSpec};
    use crate::quantum::Basis;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn no_attack_config(seed: u64) -> ProtocolConfig {
        ProtocolConfig::new(0.5, MessageSpec::Fixed("101100".into()), seed).unwrap()
    }

    #[test]
    fn no_attack_aggregate_is_clean() {
        let agg = run_trials(&no_attack_config(0), &AttackStrategy::NoAttack, 200, 42).unwrap();
        assert_eq!(agg.trials, 200);
        assert_eq!(agg.aborts, 0);
        assert_eq!(agg.detection_rate.value, 0.0);
        assert_eq!(agg.decode_error_rate.value, 0.0);
        assert_eq!(agg.eve_accuracy.value, 0.0);
        assert_eq!(agg.empirical_mutual_info.value(), 0.0);
        for &(_, fraction) in &agg.survival_by_n {
            assert_eq!(fraction, 1.0);
        }
        assert!(agg.control_rounds > 0);
    }

    #[test]
    fn survival_at_zero_is_one_even_under_attack() {
        let config = no_attack_config(5);
        let strategy = AttackStrategy::intercept(BasisPolicy::RandomBasis);
        let agg = run_trials(&config, &strategy, 300, 7).unwrap();
        assert_eq!(agg.survival_by_n[0], (0, 1.0));
        assert!(agg.aborts > 0);
    }

    #[test]
    fn parallel_matches_sequential_bit_for_bit() {
        let config = ProtocolConfig::new(0.4, MessageSpec::Random(12), 3).unwrap();
        let strategy = AttackStrategy::probe(0.5, Basis::B1).unwrap();
        let sequential = run_trials(&config, &strategy, 487, 99).unwrap();
        for threads in [2, 3, 7] {
            let parallel = run_trials_parallel(&config, &strategy, 487, 99, threads).unwrap();
            assert_eq!(sequential, parallel, "threads = {threads}");
        }
    }

    #[test]
    fn full_run_returns_transcripts_in_trial_order() {
        let config = no_attack_config(1);
        let (agg, transcripts) =
            run_trials_full(&config, &AttackStrategy::NoAttack, 25, 11).unwrap();
        assert_eq!(agg.trials, 25);
        assert_eq!(transcripts.len(), 25);
        let direct =
            run_session(&config.clone().with_seed(11 ^ 3), &AttackStrategy::NoAttack).unwrap();
        assert_eq!(transcripts[3], direct);
    }

    #[test]
    fn zero_trials_is_an_error() {
        let config = no_attack_config(0);
        assert!(matches!(
            run_trials(&config, &AttackStrategy::NoAttack, 0, 0),
            Err(HarnessError::NoTrials)
        ));
    }

    #[test]
    fn mutual_information_extremes() {
        let correlated: Vec<(u8, u8)> = (0..1000).map(|i| ((i % 2) as u8, (i % 2) as u8)).collect();
        assert!(close(
            empirical_mutual_information(&correlated).unwrap().value(),
            1.0,
            1e-12
        ));

        let inverted: Vec<(u8, u8)> = (0..1000)
            .map(|i| ((i % 2) as u8, (1 - i % 2) as u8))
            .collect();
        assert!(close(
            empirical_mutual_information(&inverted).unwrap().value(),
            1.0,
            1e-12
        ));
    }

    #[test]
    fn mutual_information_of_independent_pairs_vanishes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(123);
        let pairs: Vec<(u8, u8)> = (0..100_000)
            .map(|_| {
                (
                    u8::from(rng.random::<f64>() < 0.5),
                    u8::from(rng.random::<f64>() < 0.5),
                )
            })
            .collect();
        let mi = empirical_mutual_information(&pairs).unwrap().value();
        assert!(mi <= 0.01, "independent pairs gave MI {mi}");
        assert!(mi >= 0.0);
    }

    #[test]
    fn mutual_information_stays_within_one_bit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(55);
        for _ in 0..500 {
            let bias_x: f64 = rng.random();
            let bias_y: f64 = rng.random();
            let coupling: f64 = rng.random();
            let pairs: Vec<(u8, u8)> = (0..200)
                .map(|_| {
                    let x = u8::from(rng.random::<f64>() < bias_x);
                    let y = if rng.random::<f64>() < coupling {
                        x
                    } else {
                        u8::from(rng.random::<f64>() < bias_y)
                    };
                    (x, y)
                })
                .collect();
            let mi = empirical_mutual_information(&pairs).unwrap().value();
            assert!((0.0..=1.0 + 1e-12).contains(&mi), "mi = {mi}");
        }
    }

    #[test]
    fn mutual_information_rejects_bad_input() {
        assert!(matches!(
            empirical_mutual_information(&[]),
            Err(HarnessError::EmptyInput)
        ));
        assert!(matches!(
            empirical_mutual_information(&[(0, 2)]),
            Err(HarnessError::NonBinaryPair(2))
        ));
    }

    #[test]
    fn info_bound_curve_endpoints() {
        let grid: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
        let table = analytic_curve(&AnalyticCurveSpec::InfoBound, &grid).unwrap();
        assert_eq!(table.rows.len(), 11);
        assert_eq!(table.rows[0], vec![0.0, 0.0]);
        assert!(close(table.rows[10][0], 0.5, 1e-12));
        assert!(close(table.rows[10][1], 1.0, 1e-12));
    }

    #[test]
    fn eigenvalue_curve_with_balanced_priors() {
        let grid: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
        let table = analytic_curve(&AnalyticCurveSpec::Eigenvalues { p0: 0.5 }, &grid).unwrap();
        for row in &table.rows {
            assert!(close(row[1], 1.0 - row[0], 1e-12));
            assert!(close(row[2], row[0], 1e-12));
        }
    }

    #[test]
    fn survival_curve_analytic_column_is_log_affine() {
        let grid: Vec<f64> = (1..=10).map(|n| n as f64).collect();
        let table =
            analytic_curve(&AnalyticCurveSpec::Survival { c: 0.5, d: 0.25 }, &grid).unwrap();
        let slope = (1.0 - 0.5 * 0.25f64).ln() / 0.5;
        for row in &table.rows {
            assert!(close(row[1].ln(), slope * row[0], 1e-12));
        }
    }

    #[test]
    fn survival_curve_at_zero_detection_is_constant_one() {
        let grid: Vec<f64> = (1..=8).map(|n| n as f64).collect();
        let table = analytic_curve(&AnalyticCurveSpec::Survival { c: 0.3, d: 0.0 }, &grid).unwrap();
        for row in &table.rows {
            assert_eq!(row[1], 1.0);
        }
    }

    #[test]
    fn survival_curve_without_attack_is_flat_one() {
        let config = ProtocolConfig::new(0.5, MessageSpec::Random(6), 17).unwrap();
        let table = survival_curve(&config, &AttackStrategy::NoAttack, 150, 6).unwrap();
        assert_eq!(table.rows.len(), 7);
        for row in &table.rows {
            assert_eq!(row[1], 1.0);
            assert_eq!(row[2], 1.0);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            analytic_curve(&AnalyticCurveSpec::InfoBound, &[]),
            Err(HarnessError::EmptyGrid)
        ));
        assert!(matches!(
            analytic_curve(&AnalyticCurveSpec::InfoBound, &[0.2, 0.2]),
            Err(HarnessError::NonIncreasingGrid)
        ));
        assert!(matches!(
            analytic_curve(&AnalyticCurveSpec::InfoBound, &[0.3, 0.1]),
            Err(HarnessError::NonIncreasingGrid)
        ));
        assert!(analytic_curve(&AnalyticCurveSpec::InfoBound, &[0.0, 1.1]).is_err());
        assert!(analytic_curve(&AnalyticCurveSpec::Survival { c: 1.5, d: 0.1 }, &[1.0]).is_err());
    }

    #[test]
    fn csv_shapes() {
        let agg = run_trials(&no_attack_config(2), &AttackStrategy::NoAttack, 10, 0).unwrap();
        let csv = agg.to_csv();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("trials,control_rounds"));
        assert_eq!(lines.count(), 1);

        let table = analytic_curve(&AnalyticCurveSpec::InfoBound, &[0.0, 0.5]).unwrap();
        let csv = table.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next().unwrap(), "d,info_bound_bits");
    }
}
