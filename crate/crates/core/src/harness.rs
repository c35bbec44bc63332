//! Monte Carlo experiments on simulated periodically correlated processes:
//! unbiasedness of the expected-coverage estimate, the coverage-floor
//! confidence statement, rolling practitioner exercises, and point-forecast
//! error metrics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{slice_series, CurveLibrary, FocalCurve, PeriodGrid};
use crate::envelope::build_envelope;
use crate::error::{contract, Error, Result};
use crate::forecast::{
    envelope_profile, point_forecast, select_k, EnvelopeProfile, SelectionRule, TuningChart,
    Weighting,
};
use crate::simulate::{derive_seed, make_pc_trajectory, simulate_series, Model, PcProcessSpec};

/// Problem dimensions shared by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sizes {
    /// Library curves before the focal period.
    pub n: usize,
    /// Replay window.
    pub window: usize,
    pub points: usize,
    pub cut_index: usize,
    pub k_max: usize,
}

impl Sizes {
    /// Small enough for the whole suite to run in minutes.
    pub const DESK: Sizes = Sizes {
        n: 200,
        window: 50,
        points: 50,
        cut_index: 25,
        k_max: 30,
    };

    pub const FULL: Sizes = Sizes {
        n: 1000,
        window: 100,
        points: 100,
        cut_index: 50,
        k_max: 30,
    };

    pub fn grid(&self) -> Result<PeriodGrid> {
        PeriodGrid::new(self.points, 1.0, self.cut_index)
    }
}

/// Point-forecast accuracy on the forecast segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mse: f64,
    /// Percent; absent when the truth touches zero.
    pub mape: Option<f64>,
}

pub fn mse(point: &[f64], truth: &[f64]) -> Result<f64> {
    if point.len() != truth.len() || truth.is_empty() {
        return Err(contract("forecast and truth must be nonempty and of equal length"));
    }
    Ok(point.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / truth.len() as f64)
}

/// Mean absolute percentage error, in percent.
pub fn mape(point: &[f64], truth: &[f64]) -> Result<f64> {
    if point.len() != truth.len() || truth.is_empty() {
        return Err(contract("forecast and truth must be nonempty and of equal length"));
    }
    if let Some(index) = truth.iter().position(|&t| t == 0.0) {
        return Err(Error::MapeUndefined { index });
    }
    Ok(100.0 * point.iter().zip(truth).map(|(p, t)| ((p - t) / t).abs()).sum::<f64>() / truth.len() as f64)
}

pub fn error_metrics(point: &[f64], truth: &[f64]) -> Result<ErrorMetrics> {
    let mse = mse(point, truth)?;
    let mape = match mape(point, truth) {
        Ok(v) => Some(v),
        Err(Error::MapeUndefined { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ErrorMetrics { mse, mape })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    wilson_around(successes as f64 / trials as f64, trials, z)
}

fn wilson_around(p: f64, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub const Z95: f64 = 1.959_963_984_540_054;

/// Lowest empirical proportion over `trials` still consistent, at the 95%
/// level, with a true probability of `1 - alpha`.
pub fn confidence_floor(alpha: f64, trials: usize) -> f64 {
    wilson_around(1.0 - alpha, trials, Z95).0
}

/// One simulated trajectory with its focal period forecast.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    /// Current envelope's coverage and width for `k = 2..=k_max`.
    pub current: EnvelopeProfile,
    /// Profiles of the replayed window periods, oldest first.
    pub replays: Vec<EnvelopeProfile>,
    pub as_written: ErrorMetrics,
    pub inverse_distance: ErrorMetrics,
    /// Error of the unweighted mean of the whole library.
    pub library_mean: ErrorMetrics,
}

impl TrialOutcome {
    pub fn chart(&self, alpha: f64, k_max: usize) -> Result<TuningChart> {
        let refs: Vec<&EnvelopeProfile> = self.replays.iter().collect();
        TuningChart::from_profiles(&refs, &self.current, alpha, k_max)
    }
}

/// Trials of one model at one size; the raw material of the bias and
/// confidence tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloRun {
    pub model: Model,
    pub sizes: Sizes,
    pub master_seed: u64,
    pub trials: Vec<TrialOutcome>,
}

fn library_mean(library: &CurveLibrary) -> Vec<f64> {
    let mut mean = vec![0.0; library.grid().points()];
    for c in library.curves() {
        for (m, v) in mean.iter_mut().zip(c.values()) {
            *m += v;
        }
    }
    let n = library.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

fn forecast_errors(point: &[f64], focal: &FocalCurve, cut: usize) -> Result<ErrorMetrics> {
    let truth = focal.truth().ok_or_else(|| contract("evaluation needs the focal truth"))?;
    error_metrics(&point[cut..], truth)
}

/// Envelope, replays and forecast errors for one library and focal curve.
pub fn evaluate_focal(
    library: &CurveLibrary,
    focal: &FocalCurve,
    window: usize,
    k_max: usize,
) -> Result<(EnvelopeProfile, Vec<EnvelopeProfile>, [ErrorMetrics; 3])> {
    let cut = library.grid().cut_index();
    let env = build_envelope(library, focal)?;
    let current = envelope_profile(library, &env, focal.truth(), k_max)?;
    let replays = crate::forecast::replay_window(library, window, k_max)?;
    let errors = [
        forecast_errors(&point_forecast(library, &env, Weighting::AsWritten)?, focal, cut)?,
        forecast_errors(&point_forecast(library, &env, Weighting::InverseDistance)?, focal, cut)?,
        forecast_errors(&library_mean(library), focal, cut)?,
    ];
    Ok((current, replays, errors))
}

/// Runs `trials` independent trajectories in parallel; trial `j` uses the
/// seed derived from `(master_seed, j)`.
pub fn run_trials(model: Model, trials: usize, sizes: Sizes, master_seed: u64) -> Result<MonteCarloRun> {
    let grid = sizes.grid()?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|j| {
            let seed = derive_seed(master_seed, j as u64);
            let spec = PcProcessSpec::standard(model, sizes.n + 1, grid, seed)?;
            let (library, focal) = make_pc_trajectory(&spec)?;
            let (current, replays, [aw, inv, mean]) = evaluate_focal(&library, &focal, sizes.window, sizes.k_max)?;
            Ok(TrialOutcome {
                trial: j,
                seed,
                current,
                replays,
                as_written: aw,
                inverse_distance: inv,
                library_mean: mean,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloRun {
        model,
        sizes,
        master_seed,
        trials: outcomes,
    })
}

/// Standardized mean error of `M_k - C_k` at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasRow {
    pub k: usize,
    /// Trials whose charts reach `k`.
    pub used: usize,
    pub mean: f64,
    pub std: f64,
    /// `sqrt(N) * mean / std`; `None` when the differences have no spread.
    pub standardized: Option<f64>,
}

impl BiasRow {
    pub fn degenerate(&self) -> bool {
        self.standardized.is_none()
    }
}

/// Standardized mean error of a sample of paired differences.
pub fn standardized_error(k: usize, diffs: &[f64]) -> BiasRow {
    let n = diffs.len();
    let mean = if n == 0 { 0.0 } else { diffs.iter().sum::<f64>() / n as f64 };
    let std = if n < 2 {
        0.0
    } else {
        (diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    let standardized = (std > 0.0).then(|| (n as f64).sqrt() * mean / std);
    BiasRow {
        k,
        used: n,
        mean,
        std,
        standardized,
    }
}

/// Empirical probability that realized coverage clears the estimated floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceRow {
    pub k: usize,
    pub alpha: f64,
    pub used: usize,
    pub successes: usize,
    pub probability: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Lowest proportion consistent with `1 - alpha` at the 95% level.
    pub floor: f64,
}

impl ConfidenceRow {
    pub fn passes(&self) -> bool {
        self.probability >= self.floor
    }
}

impl MonteCarloRun {
    /// Per-trial `(M_k, C_k^alpha, C_k)` triples.
    fn paired(&self, k: usize, alpha: f64) -> Result<Vec<(f64, f64, f64)>> {
        let mut out = Vec::new();
        for t in &self.trials {
            let chart = t.chart(alpha, self.sizes.k_max)?;
            if let (Some(row), Some(realized)) = (chart.row(k), t.current.coverage(k)) {
                out.push((row.mean_coverage, row.alpha_percentile, realized));
            }
        }
        Ok(out)
    }

    pub fn bias(&self, k_range: &[usize]) -> Result<Vec<BiasRow>> {
        k_range
            .iter()
            .map(|&k| {
                let diffs: Vec<f64> = self.paired(k, 0.5)?.into_iter().map(|(m, _, c)| m - c).collect();
                Ok(standardized_error(k, &diffs))
            })
            .collect()
    }

    pub fn confidence(&self, k_range: &[usize], alpha: f64) -> Result<Vec<ConfidenceRow>> {
        k_range
            .iter()
            .map(|&k| {
                let pairs = self.paired(k, alpha)?;
                let used = pairs.len();
                let successes = pairs.iter().filter(|(_, floor, c)| c >= floor).count();
                let (lo, hi) = wilson_interval(successes, used, Z95);
                Ok(ConfidenceRow {
                    k,
                    alpha,
                    used,
                    successes,
                    probability: if used == 0 { 0.0 } else { successes as f64 / used as f64 },
                    wilson_low: lo,
                    wilson_high: hi,
                    floor: confidence_floor(alpha, used),
                })
            })
            .collect()
    }

    pub fn charts(&self, alpha: f64) -> Result<Vec<TuningChart>> {
        self.trials.iter().map(|t| t.chart(alpha, self.sizes.k_max)).collect()
    }
}

fn check_trials(n: usize) -> Result<()> {
    if n < 10 {
        return Err(contract(format!("Monte Carlo tests need at least 10 trials, got {n}")));
    }
    Ok(())
}

/// Standardized mean error of `M_k - C_k` per `k` over `trials` trajectories.
pub fn bias_test(model: Model, trials: usize, sizes: Sizes, k_range: &[usize], seed: u64) -> Result<Vec<BiasRow>> {
    check_trials(trials)?;
    run_trials(model, trials, sizes, seed)?.bias(k_range)
}

/// Empirical `P(C_k >= C_k^alpha)` per `k` over `trials` trajectories.
pub fn confidence_test(
    model: Model,
    trials: usize,
    sizes: Sizes,
    k_range: &[usize],
    alpha: f64,
    seed: u64,
) -> Result<Vec<ConfidenceRow>> {
    check_trials(trials)?;
    run_trials(model, trials, sizes, seed)?.confidence(k_range, alpha)
}

/// One period of a rolling exercise under one rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExercisePeriod {
    /// Library index of the forecast period.
    pub period: usize,
    pub k: Option<usize>,
    pub coverage: Option<f64>,
    pub width: Option<f64>,
}

/// Averages over the forecast periods for one rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExerciseSummary {
    pub rule: SelectionRule,
    pub alpha: f64,
    pub periods: Vec<ExercisePeriod>,
    pub infeasible: usize,
    pub mean_coverage: Option<f64>,
    pub mean_width: Option<f64>,
    /// Share of scored periods with coverage at least the rule's floor.
    pub probability: Option<f64>,
    pub wilson: Option<(f64, f64)>,
    pub mean_k: Option<f64>,
}

/// Per-period material of a rolling exercise, computed once per period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollingRecord {
    pub period: usize,
    pub profile: EnvelopeProfile,
    pub as_written: ErrorMetrics,
    pub inverse_distance: ErrorMetrics,
}

/// Envelope profiles for periods `first..curves.len()`, each built from the
/// curves strictly before it.
pub fn rolling_records(curves: &CurveLibrary, first: usize, k_max: usize) -> Result<Vec<RollingRecord>> {
    if first < 2 {
        return Err(contract("rolling periods need at least 2 earlier curves"));
    }
    let cut = curves.grid().cut_index();
    (first..curves.len())
        .into_par_iter()
        .map(|i| {
            let past = curves.prefix(i)?;
            let focal = curves.as_focal(i);
            let env = build_envelope(&past, &focal)?;
            Ok(RollingRecord {
                period: i,
                profile: envelope_profile(&past, &env, focal.truth(), k_max)?,
                as_written: forecast_errors(&point_forecast(&past, &env, Weighting::AsWritten)?, &focal, cut)?,
                inverse_distance: forecast_errors(
                    &point_forecast(&past, &env, Weighting::InverseDistance)?,
                    &focal,
                    cut,
                )?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExerciseConfig {
    pub alpha: f64,
    /// Number of final periods forecast.
    pub horizon: usize,
    pub window: usize,
    pub k_max: usize,
}

/// Rolling exercise over the last `horizon` periods of `curves`: each
/// period is tuned on the `window` periods before it, `k` is chosen by each
/// rule, and the resulting band is scored against the period's truth.
pub fn practitioner_exercise(
    curves: &CurveLibrary,
    rules: &[SelectionRule],
    config: &ExerciseConfig,
) -> Result<(Vec<ExerciseSummary>, Vec<RollingRecord>)> {
    let n = curves.len();
    if config.horizon == 0 || config.horizon + config.window + 2 > n {
        return Err(contract(format!(
            "horizon {} with window {} needs more than {n} periods",
            config.horizon, config.window
        )));
    }
    let first = n - config.horizon - config.window;
    let records = rolling_records(curves, first, config.k_max)?;
    let summaries = rules
        .iter()
        .map(|&rule| summarize_exercise(&records, rule, config))
        .collect::<Result<Vec<_>>>()?;
    Ok((summaries, records))
}

/// Scores one rule on precomputed rolling records.
pub fn summarize_exercise(records: &[RollingRecord], rule: SelectionRule, config: &ExerciseConfig) -> Result<ExerciseSummary> {
    let mut periods = Vec::with_capacity(config.horizon);
    for idx in config.window..records.len() {
        let replays: Vec<&EnvelopeProfile> = records[idx - config.window..idx].iter().map(|r| &r.profile).collect();
        let current = &records[idx].profile;
        let chart = TuningChart::from_profiles(&replays, current, config.alpha, config.k_max)?;
        let k = select_k(&chart, rule);
        periods.push(ExercisePeriod {
            period: records[idx].period,
            k,
            coverage: k.and_then(|k| current.coverage(k)),
            width: k.and_then(|k| current.width(k)),
        });
    }
    let scored: Vec<&ExercisePeriod> = periods.iter().filter(|p| p.k.is_some()).collect();
    let infeasible = periods.len() - scored.len();
    let avg = |f: &dyn Fn(&ExercisePeriod) -> f64| {
        (!scored.is_empty()).then(|| scored.iter().map(|p| f(p)).sum::<f64>() / scored.len() as f64)
    };
    let successes = scored
        .iter()
        .filter(|p| p.coverage.unwrap_or(0.0) >= rule.min_floor)
        .count();
    Ok(ExerciseSummary {
        rule,
        alpha: config.alpha,
        infeasible,
        mean_coverage: avg(&|p| p.coverage.unwrap_or(0.0)),
        mean_width: avg(&|p| p.width.unwrap_or(0.0)),
        probability: (!scored.is_empty()).then(|| successes as f64 / scored.len() as f64),
        wilson: (!scored.is_empty()).then(|| wilson_interval(successes, scored.len(), Z95)),
        mean_k: avg(&|p| p.k.unwrap_or(0) as f64),
        periods,
    })
}

/// Simulates one trajectory of `n_periods` whole periods as a curve library.
pub fn simulate_curves(model: Model, n_periods: usize, grid: PeriodGrid, seed: u64) -> Result<CurveLibrary> {
    let spec = PcProcessSpec::standard(model, n_periods, grid, seed)?;
    let series = simulate_series(&spec)?;
    Ok(slice_series(&series, &grid)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_examples() {
        let t = vec![100.0; 5];
        assert_eq!(error_metrics(&t, &t).unwrap(), ErrorMetrics { mse: 0.0, mape: Some(0.0) });
        let m = error_metrics(&[98.0; 5], &t).unwrap();
        assert_eq!(m.mse, 4.0);
        assert!((m.mape.unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(mape(&[1.0, 2.0], &[1.0, 0.0]), Err(Error::MapeUndefined { index: 1 })));
        let m = error_metrics(&[1.0, 2.0], &[1.0, 0.0]).unwrap();
        assert_eq!(m.mse, 2.0);
        assert_eq!(m.mape, None);
    }

    #[test]
    fn standardized_error_degenerate() {
        let r = standardized_error(2, &[0.0; 12]);
        assert!(r.degenerate());
        let r = standardized_error(2, &[0.1, -0.1, 0.2, 0.0]);
        let mean: f64 = 0.05;
        let std = ((0.05f64.powi(2) + 0.15f64.powi(2) + 0.15f64.powi(2) + 0.05f64.powi(2)) / 3.0).sqrt();
        assert!((r.standardized.unwrap() - 2.0 * mean / std).abs() < 1e-12);
    }

    #[test]
    fn wilson_values() {
        // 0.95 at n = 30
        let lo = confidence_floor(0.05, 30);
        assert!((lo - 0.8094).abs() < 5e-4, "{lo}");
        let (a, b) = wilson_interval(27, 30, Z95);
        assert!(a < 0.9 && 0.9 < b);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn too_few_trials() {
        assert!(bias_test(Model::Y1, 5, Sizes::DESK, &[2], 1).is_err());
    }

    fn profile(cov: &[f64]) -> EnvelopeProfile {
        EnvelopeProfile {
            envelope_size: cov.len() + 1,
            coverages: cov.to_vec(),
            widths: (0..cov.len()).map(|i| 0.1 * (i + 1) as f64).collect(),
        }
    }

    fn records(covs: &[Vec<f64>]) -> Vec<RollingRecord> {
        let m = ErrorMetrics { mse: 0.0, mape: None };
        covs.iter()
            .enumerate()
            .map(|(i, c)| RollingRecord {
                period: i,
                profile: profile(c),
                as_written: m,
                inverse_distance: m,
            })
            .collect()
    }

    #[test]
    fn zero_rule_selects_two() {
        let covs: Vec<Vec<f64>> = (0..8).map(|i| vec![0.1 * i as f64, 0.5, 0.9]).collect();
        let recs = records(&covs);
        let cfg = ExerciseConfig {
            alpha: 0.1,
            horizon: 4,
            window: 4,
            k_max: 30,
        };
        let s = summarize_exercise(&recs, SelectionRule::new(0.0, 0.0), &cfg).unwrap();
        assert!(s.periods.iter().all(|p| p.k == Some(2)));
        let want = covs[4..].iter().map(|c| c[0]).sum::<f64>() / 4.0;
        assert!((s.mean_coverage.unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn infeasible_rule_flags_everything() {
        let covs: Vec<Vec<f64>> = (0..8).map(|_| vec![0.2, 0.3]).collect();
        let cfg = ExerciseConfig {
            alpha: 0.1,
            horizon: 4,
            window: 4,
            k_max: 30,
        };
        let s = summarize_exercise(&records(&covs), SelectionRule::DEMANDING, &cfg).unwrap();
        assert_eq!(s.infeasible, 4);
        assert!(s.mean_coverage.is_none() && s.probability.is_none() && s.mean_k.is_none());
    }
}
