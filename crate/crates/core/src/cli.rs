//! The `depthcast` command line.
//!
//! Every flag mirrors a [`RunConfig`] field; `--config` loads a JSON file
//! whose values are overridden by flags given on the command line.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::curves::{slice_series, CurveLibrary, FocalCurve, PeriodGrid};
use crate::depth::mbd_restricted;
use crate::envelope::build_envelope;
use crate::error::Error;
use crate::forecast::{forecast_band, select_k, tune, ChartRow, SelectionRule, TuneConfig, TuningChart, Weighting};
use crate::harness::{
    practitioner_exercise, run_trials, simulate_curves, ExerciseConfig, ExerciseSummary, MonteCarloRun, Sizes,
};
use crate::io::{read_series, write_band, write_chart, write_json, write_series, write_table, Series};
use crate::simulate::{simulate_series, Model, PcProcessSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("no k satisfies the rule (mean >= {}, floor >= {}); best achievable: k = {}, M_k = {}, C_k^alpha = {}",
        rule.min_mean, rule.min_floor, best.k, best.mean_coverage, best.alpha_percentile)]
    Infeasible { rule: SelectionRule, best: ChartRow },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::FocalOutsideRange) => 2,
            CliError::Infeasible { .. } => 3,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Named selection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    Demanding,
    Conservative,
    Conformist,
}

impl RuleName {
    pub const ALL: [RuleName; 3] = [RuleName::Demanding, RuleName::Conservative, RuleName::Conformist];

    pub fn rule(self) -> SelectionRule {
        match self {
            RuleName::Demanding => SelectionRule::DEMANDING,
            RuleName::Conservative => SelectionRule::CONSERVATIVE,
            RuleName::Conformist => SelectionRule::CONFORMIST,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleName::Demanding => "demanding",
            RuleName::Conservative => "conservative",
            RuleName::Conformist => "conformist",
        }
    }
}

/// Every tunable of every subcommand. Unset fields fall back to defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Load settings from a JSON file; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Grid points per period.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Number of observed grid points in each period.
    #[arg(long, global = true)]
    pub cut: Option<usize>,
    /// Period length in time units.
    #[arg(long, global = true)]
    pub period_length: Option<f64>,

    /// Lower quantile level of the coverage floor.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Number of recent periods replayed for tuning.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Largest band size charted.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Fixed band size, bypassing the selection rule.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Named rule for choosing k (default conformist).
    #[arg(long, global = true, value_enum)]
    pub rule: Option<RuleName>,
    /// Custom rule threshold on expected coverage (needs --min-floor).
    #[arg(long, global = true)]
    pub min_mean: Option<f64>,
    /// Custom rule threshold on the coverage floor (needs --min-mean).
    #[arg(long, global = true)]
    pub min_floor: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub weighting: Option<Weighting>,

    /// Master seed of the simulators.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<Model>,
    /// Total simulated periods, the focal period included.
    #[arg(long, global = true)]
    pub periods: Option<usize>,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Final periods forecast in the rolling exercise.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Band sizes examined by the bias and confidence tests.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k_values: Option<Vec<usize>>,

    /// Input series CSV (`t,value`).
    #[arg(long, global = true)]
    pub series: Option<PathBuf>,
    /// Optional truth on the focal forecast segment (`t,value`).
    #[arg(long, global = true)]
    pub truth: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the envelope audit trail.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub audit: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay!(
            self, top, points, cut, period_length, alpha, window, k_max, k, rule, min_mean, min_floor, weighting,
            seed, model, periods, trials, horizon, k_values, series, truth, out, audit
        );
        self
    }

    /// The file named by `--config`, if any, overlaid with the flags.
    pub fn resolve(flags: &RunConfig) -> CliResult<Self> {
        let base = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        let merged = base.overlay(flags);
        merged.validate()?;
        Ok(merged)
    }

    fn validate(&self) -> CliResult<()> {
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return usage(format!("alpha must lie in (0, 1), got {a}"));
            }
        }
        for (name, v) in [("min-mean", self.min_mean), ("min-floor", self.min_floor)] {
            if let Some(v) = v {
                if !(0.0..=1.0).contains(&v) {
                    return usage(format!("{name} must lie in [0, 1], got {v}"));
                }
            }
        }
        if self.min_mean.is_some() != self.min_floor.is_some() {
            return usage("--min-mean and --min-floor must be given together");
        }
        if self.rule.is_some() && self.min_mean.is_some() {
            return usage("give either --rule or --min-mean/--min-floor, not both");
        }
        if matches!(self.k, Some(k) if k < 2) {
            return usage("k must be at least 2");
        }
        if matches!(self.k_max, Some(k) if k < 2) {
            return usage("k-max must be at least 2");
        }
        if matches!(self.window, Some(0)) {
            return usage("window must be positive");
        }
        if let Some(ks) = &self.k_values {
            if ks.is_empty() || ks.iter().any(|&k| k < 2) {
                return usage("k-values must be a nonempty list of integers >= 2");
            }
        }
        if self.points.is_some() || self.cut.is_some() || self.period_length.is_some() {
            self.grid()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<PeriodGrid> {
        let points = self.points.unwrap_or(Sizes::DESK.points);
        let cut = self.cut.unwrap_or(points / 2);
        Ok(PeriodGrid::new(points, self.period_length.unwrap_or(1.0), cut)?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.1)
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or(Sizes::DESK.window)
    }

    pub fn k_max(&self) -> usize {
        self.k_max.unwrap_or(Sizes::DESK.k_max)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn model(&self) -> Model {
        self.model.unwrap_or(Model::Y1)
    }

    pub fn periods(&self) -> usize {
        self.periods.unwrap_or(Sizes::DESK.n + 1)
    }

    pub fn out_dir(&self) -> CliResult<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(Error::from)?;
        Ok(dir)
    }

    /// The configured rule with its file-name label; the conformist rule
    /// when nothing is set.
    pub fn selection_rule(&self) -> (String, SelectionRule) {
        match (self.rule, self.min_mean, self.min_floor) {
            (Some(r), _, _) => (r.name().to_string(), r.rule()),
            (None, Some(m), Some(f)) => (format!("custom-{m}-{f}"), SelectionRule::new(m, f)),
            _ => (RuleName::Conformist.name().to_string(), SelectionRule::CONFORMIST),
        }
    }

    fn series_path(&self) -> CliResult<&Path> {
        match &self.series {
            Some(p) => Ok(p),
            None => usage("--series is required"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "depthcast", version, about = "Depth-based band and point forecasts for functional time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a Y1/Y2/Y3 trajectory as a series CSV with the focal truth.
    Simulate,
    /// Forecast the unobserved part of the last, partial period.
    Forecast,
    /// Write only the tuning chart for the last, partial period.
    Tune,
    /// Monte Carlo checks and rolling forecasting exercises.
    Evaluate {
        #[command(subcommand)]
        test: EvaluateCommand,
    },
    /// Depth of every period curve in a series, for debugging.
    Mbd,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum EvaluateCommand {
    /// Standardized mean error of the expected-coverage estimator.
    Bias,
    /// Empirical probability that coverage clears the estimated floor.
    Confidence,
    /// Rolling forecasts of the final periods of one trajectory per rule.
    Exercise,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::resolve(&cli.config)?;
    match &cli.command {
        Command::Simulate => cmd_simulate(&cfg),
        Command::Forecast => cmd_forecast(&cfg, true),
        Command::Tune => cmd_forecast(&cfg, false),
        Command::Evaluate { test } => cmd_evaluate(&cfg, *test),
        Command::Mbd => cmd_mbd(&cfg),
    }
}

/// Parses the process arguments, runs and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct SimulationRecord<'a> {
    spec: &'a PcProcessSpec,
    config: &'a RunConfig,
    library_periods: usize,
}

fn cmd_simulate(cfg: &RunConfig) -> CliResult<()> {
    let grid = cfg.grid()?;
    let spec = PcProcessSpec::standard(cfg.model(), cfg.periods(), grid, cfg.seed())?;
    let values = simulate_series(&spec)?;
    let keep = values.len() - grid.forecast_len();
    let step = grid.spacing();
    let start = 0.5 * step;
    let dir = cfg.out_dir()?;
    let series = Series::regular(start, step, values[..keep].to_vec())?;
    write_series(&dir.join("series.csv"), &series)?;
    let truth = Series::regular(start + keep as f64 * step, step, values[keep..].to_vec())?;
    write_series(&dir.join("truth.csv"), &truth)?;
    write_json(
        &dir.join("simulation.json"),
        &SimulationRecord {
            spec: &spec,
            config: cfg,
            library_periods: cfg.periods() - 1,
        },
    )?;
    println!(
        "simulated {} periods of {} ({} library curves + focal) into {}",
        cfg.periods(),
        spec.model.name(),
        cfg.periods() - 1,
        dir.display()
    );
    Ok(())
}

/// Loads the series, slices it and attaches the optional truth.
fn load_problem(cfg: &RunConfig) -> CliResult<(Series, CurveLibrary, FocalCurve)> {
    let grid = cfg.grid()?;
    let series = read_series(cfg.series_path()?)?;
    let (library, focal) = slice_series(&series.values, &grid)?;
    let Some(mut focal) = focal else {
        return usage(format!(
            "series must end with a partial period of {} observed points",
            grid.cut_index()
        ));
    };
    let window = cfg.window();
    if library.len() < window + 3 {
        return usage(format!(
            "series has {} whole periods; a window of {window} needs at least {}",
            library.len(),
            window + 3
        ));
    }
    if let Some(path) = &cfg.truth {
        let truth = read_series(path)?;
        if truth.len() != grid.forecast_len() {
            return usage(format!(
                "truth has {} values, the forecast segment {}",
                truth.len(),
                grid.forecast_len()
            ));
        }
        focal = focal.with_truth(truth.values)?;
    }
    Ok((series, library, focal))
}

#[derive(Serialize)]
struct ForecastRecord<'a> {
    config: &'a RunConfig,
    envelope_size: usize,
    k: usize,
    selected_by_rule: bool,
    coverage: Option<f64>,
    mean_width: f64,
}

fn cmd_forecast(cfg: &RunConfig, with_band: bool) -> CliResult<()> {
    let (series, library, focal) = load_problem(cfg)?;
    let grid = *library.grid();
    let envelope = build_envelope(&library, &focal)?;
    let tune_config = TuneConfig {
        window: cfg.window(),
        alpha: cfg.alpha(),
        k_max: cfg.k_max(),
    };
    let chart = tune(&library, &envelope, &tune_config)?;
    let dir = cfg.out_dir()?;
    write_chart(&dir.join("chart.csv"), &chart)?;
    if cfg.audit.unwrap_or(false) {
        std::fs::write(dir.join("audit.txt"), envelope.audit_report()).map_err(Error::from)?;
    }
    if !with_band {
        println!("wrote chart for k = 2..={} to {}", chart.k_max, dir.display());
        return Ok(());
    }
    let (k, by_rule) = match cfg.k {
        Some(k) => (k, false),
        None => (choose_k(&chart, cfg)?, true),
    };
    // a rule may pick a k past the current envelope, whose band saturates
    let k_eff = if by_rule { k.min(envelope.len()) } else { k };
    if k_eff < 2 {
        return Err(Error::EnvelopeTooSmall {
            requested: 2,
            available: envelope.len(),
        }
        .into());
    }
    if k_eff < k {
        eprintln!("note: rule selected k = {k}; the envelope holds {k_eff} curves, using all of them");
    }
    let band = forecast_band(&library, &focal, &envelope, k_eff, cfg.weighting.unwrap_or_default())?;
    let step = series.step();
    let first = series.times[0] + (library.len() * grid.points()) as f64 * step;
    let times: Vec<f64> = grid.forecast_indices().iter().map(|&j| first + j as f64 * step).collect();
    write_band(&dir.join("band.csv"), &band, &times)?;
    write_json(
        &dir.join("forecast.json"),
        &ForecastRecord {
            config: cfg,
            envelope_size: envelope.len(),
            k: k_eff,
            selected_by_rule: by_rule,
            coverage: band.coverage,
            mean_width: band.mean_width,
        },
    )?;
    match band.coverage {
        Some(c) => println!("k = {k_eff}, envelope = {}, width = {}, coverage = {c}", envelope.len(), band.mean_width),
        None => println!("k = {k_eff}, envelope = {}, width = {}", envelope.len(), band.mean_width),
    }
    Ok(())
}

fn choose_k(chart: &TuningChart, cfg: &RunConfig) -> CliResult<usize> {
    let (_, rule) = cfg.selection_rule();
    match select_k(chart, rule) {
        Some(k) => Ok(k),
        None => {
            // rows are nondecreasing, so the last one is the best achievable
            let best = *chart.rows.last().expect("charts have at least one row");
            Err(CliError::Infeasible { rule, best })
        }
    }
}

fn monte_carlo(cfg: &RunConfig) -> CliResult<(MonteCarloRun, usize)> {
    let grid = cfg.grid()?;
    if grid.period_length() != 1.0 {
        return usage("Monte Carlo runs use period length 1");
    }
    let sizes = Sizes {
        n: cfg.periods().saturating_sub(1),
        window: cfg.window(),
        points: grid.points(),
        cut_index: grid.cut_index(),
        k_max: cfg.k_max(),
    };
    let trials = cfg.trials.unwrap_or(30);
    if trials < 10 {
        return usage(format!("Monte Carlo tests need at least 10 trials, got {trials}"));
    }
    Ok((run_trials(cfg.model(), trials, sizes, cfg.seed())?, trials))
}

fn k_values(cfg: &RunConfig) -> CliResult<Vec<usize>> {
    let ks = cfg.k_values.clone().unwrap_or_else(|| vec![2, 5, 10, 20]);
    if let Some(&k) = ks.iter().find(|&&k| k > cfg.k_max()) {
        return usage(format!("k = {k} exceeds k-max {}", cfg.k_max()));
    }
    Ok(ks)
}

#[derive(Serialize)]
struct EvaluationRecord<'a, T: Serialize> {
    test: &'static str,
    config: &'a RunConfig,
    results: T,
}

fn cmd_evaluate(cfg: &RunConfig, test: EvaluateCommand) -> CliResult<()> {
    let dir = cfg.out_dir()?;
    let model = cfg.model().name();
    let seed = cfg.seed();
    match test {
        EvaluateCommand::Bias => {
            let (run, _) = monte_carlo(cfg)?;
            let ks = k_values(cfg)?;
            let mut rows = Vec::new();
            for t in &run.trials {
                let chart = t.chart(0.5, run.sizes.k_max)?;
                for &k in &ks {
                    let m = chart.row(k).map(|r| r.mean_coverage).unwrap_or(f64::NAN);
                    let c = t.current.coverage(k).unwrap_or(f64::NAN);
                    rows.push(vec![
                        t.trial.to_string(),
                        t.seed.to_string(),
                        k.to_string(),
                        m.to_string(),
                        c.to_string(),
                        (m - c).to_string(),
                    ]);
                }
            }
            let stem = format!("bias_{model}_seed{seed}");
            write_table(
                &dir.join(format!("{stem}.csv")),
                &["trial", "seed", "k", "mean_coverage", "realized_coverage", "difference"],
                rows.into_iter(),
            )?;
            let summary = run.bias(&ks)?;
            write_json(
                &dir.join(format!("{stem}.json")),
                &EvaluationRecord {
                    test: "bias",
                    config: cfg,
                    results: &summary,
                },
            )?;
            for r in &summary {
                match r.standardized {
                    Some(z) => println!("k = {:>3}  standardized error = {z:+.4}", r.k),
                    None => println!("k = {:>3}  degenerate (zero spread)", r.k),
                }
            }
        }
        EvaluateCommand::Confidence => {
            let (run, _) = monte_carlo(cfg)?;
            let ks = k_values(cfg)?;
            let alpha = cfg.alpha();
            let mut rows = Vec::new();
            for t in &run.trials {
                let chart = t.chart(alpha, run.sizes.k_max)?;
                for &k in &ks {
                    let floor = chart.row(k).map(|r| r.alpha_percentile).unwrap_or(f64::NAN);
                    let c = t.current.coverage(k).unwrap_or(f64::NAN);
                    rows.push(vec![
                        t.trial.to_string(),
                        t.seed.to_string(),
                        k.to_string(),
                        floor.to_string(),
                        c.to_string(),
                        (c >= floor).to_string(),
                    ]);
                }
            }
            let stem = format!("confidence_{model}_alpha{alpha}_seed{seed}");
            write_table(
                &dir.join(format!("{stem}.csv")),
                &["trial", "seed", "k", "alpha_percentile", "realized_coverage", "success"],
                rows.into_iter(),
            )?;
            let summary = run.confidence(&ks, alpha)?;
            write_json(
                &dir.join(format!("{stem}.json")),
                &EvaluationRecord {
                    test: "confidence",
                    config: cfg,
                    results: &summary,
                },
            )?;
            for r in &summary {
                println!(
                    "k = {:>3}  P(C >= C^alpha) = {:.4}  wilson = [{:.4}, {:.4}]  floor = {:.4}  {}",
                    r.k,
                    r.probability,
                    r.wilson_low,
                    r.wilson_high,
                    r.floor,
                    if r.passes() { "ok" } else { "below floor" }
                );
            }
        }
        EvaluateCommand::Exercise => {
            let alpha = cfg.alpha();
            let config = ExerciseConfig {
                alpha,
                horizon: cfg.horizon.unwrap_or(50),
                window: cfg.window(),
                k_max: cfg.k_max(),
            };
            let rules: Vec<(String, SelectionRule)> = if cfg.rule.is_some() || cfg.min_mean.is_some() {
                vec![cfg.selection_rule()]
            } else {
                RuleName::ALL.iter().map(|r| (r.name().to_string(), r.rule())).collect()
            };
            let grid = cfg.grid()?;
            let curves = simulate_curves(cfg.model(), cfg.periods(), grid, seed)?;
            let only: Vec<SelectionRule> = rules.iter().map(|(_, r)| *r).collect();
            let (summaries, records) = practitioner_exercise(&curves, &only, &config)?;
            for ((label, _), s) in rules.iter().zip(&summaries) {
                write_exercise(&dir, &format!("exercise_{model}_alpha{alpha}_{label}_seed{seed}"), s, cfg)?;
                print_exercise(label, s);
            }
            let point_rows = records[config.window..].iter().map(|r| {
                vec![
                    r.period.to_string(),
                    r.as_written.mse.to_string(),
                    r.inverse_distance.mse.to_string(),
                ]
            });
            write_table(
                &dir.join(format!("exercise_{model}_point_seed{seed}.csv")),
                &["period", "mse_as_written", "mse_inverse_distance"],
                point_rows,
            )?;
        }
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_exercise(dir: &Path, stem: &str, s: &ExerciseSummary, cfg: &RunConfig) -> CliResult<()> {
    let rows = s.periods.iter().map(|p| {
        vec![
            p.period.to_string(),
            p.k.map(|k| k.to_string()).unwrap_or_default(),
            opt(p.coverage),
            opt(p.width),
        ]
    });
    write_table(&dir.join(format!("{stem}.csv")), &["period", "k", "coverage", "width"], rows)?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &EvaluationRecord {
            test: "exercise",
            config: cfg,
            results: s,
        },
    )?;
    Ok(())
}

fn print_exercise(label: &str, s: &ExerciseSummary) {
    let show = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
    println!(
        "{label:<14} coverage {}  width {}  P(C >= {}) {}  mean k {}  infeasible {}/{}",
        show(s.mean_coverage),
        show(s.mean_width),
        s.rule.min_floor,
        show(s.probability),
        show(s.mean_k),
        s.infeasible,
        s.periods.len()
    );
}

fn cmd_mbd(cfg: &RunConfig) -> CliResult<()> {
    let grid = cfg.grid()?;
    let series = read_series(cfg.series_path()?)?;
    let (library, focal) = slice_series(&series.values, &grid)?;
    let mut curves: Vec<&[f64]> = library.curves().iter().map(|c| c.values()).collect();
    // a partial focal is ranked with the rest on the observed segment
    let index_set = match &focal {
        Some(f) => {
            curves.push(f.observed());
            grid.observed_indices()
        }
        None => (0..grid.points()).collect(),
    };
    let report = mbd_restricted(&curves, &index_set)?;
    println!("index,depth");
    for (i, d) in report.depths().iter().enumerate() {
        println!("{i},{d}");
    }
    Ok(())
}
