//! Gaussian-process trajectories on regular grids and the periodically
//! correlated test processes built from them.
//!
//! Stationary draws use circulant embedding (exact on a regular grid,
//! `O(N log N)`); when the embedding is not nonnegative definite the sampler
//! falls back to block-conditional Cholesky, conditioning each block on the
//! one before it.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::curves::{slice_series, CurveLibrary, FocalCurve, PeriodGrid};
use crate::error::{contract, Error, Result};

/// Stationary covariance function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    SquaredExponential { sigma: f64, lengthscale: f64 },
    Periodic { sigma: f64, lengthscale: f64, period: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(contract(format!("{name} must be positive, got {v}")))
    }
}

impl KernelSpec {
    pub fn squared_exponential(sigma: f64, lengthscale: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        positive("lengthscale", lengthscale)?;
        Ok(Self::SquaredExponential { sigma, lengthscale })
    }

    pub fn periodic(sigma: f64, lengthscale: f64, period: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        positive("lengthscale", lengthscale)?;
        positive("period", period)?;
        Ok(Self::Periodic {
            sigma,
            lengthscale,
            period,
        })
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            Self::SquaredExponential { sigma, .. } | Self::Periodic { sigma, .. } => sigma,
        }
    }

    pub fn variance(&self) -> f64 {
        self.sigma() * self.sigma()
    }

    /// Covariance at lag `h`.
    pub fn at_lag(&self, h: f64) -> f64 {
        match *self {
            Self::SquaredExponential { sigma, lengthscale } => {
                sigma * sigma * (-(h * h) / (2.0 * lengthscale * lengthscale)).exp()
            }
            Self::Periodic {
                sigma,
                lengthscale,
                period,
            } => {
                let s = (std::f64::consts::PI * h.abs() / period).sin();
                sigma * sigma * (-2.0 * s * s / (lengthscale * lengthscale)).exp()
            }
        }
    }

    pub fn value(&self, t: f64, s: f64) -> f64 {
        self.at_lag(t - s)
    }

    /// Kernel matrix on arbitrary points.
    pub fn matrix(&self, times: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(times.len(), times.len(), |i, j| self.value(times[i], times[j]))
    }
}

/// Deterministic sub-seed: the first word of ChaCha stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// eigenvalues this far below zero, relative to the largest, count as roundoff
const EIGEN_TOLERANCE: f64 = 1e-8;
const MAX_EMBEDDING_DOUBLINGS: u32 = 4;

/// Circulant-embedding sampler for a fixed grid size and spacing.
pub struct CirculantSampler {
    n: usize,
    scale: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSampler")
            .field("n", &self.n)
            .field("embedding", &self.scale.len())
            .finish()
    }
}

impl CirculantSampler {
    /// Minimal power-of-two embedding, doubled until nonnegative definite.
    /// `None` when no tried size works.
    pub fn new(kernel: &KernelSpec, n: usize, spacing: f64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let mut m = (2 * n.saturating_sub(1)).max(1).next_power_of_two();
        for _ in 0..=MAX_EMBEDDING_DOUBLINGS {
            let first_row: Vec<f64> = (0..m).map(|k| kernel.at_lag(k.min(m - k) as f64 * spacing)).collect();
            if let Some(s) = Self::from_first_row(n, &first_row) {
                return Some(s);
            }
            m *= 2;
        }
        None
    }

    /// Exact sampler for `n` equispaced points covering whole periods of a
    /// periodic kernel; the covariance matrix itself is circulant.
    pub fn periodic(kernel: &KernelSpec, n: usize, spacing: f64) -> Option<Self> {
        let first_row: Vec<f64> = (0..n).map(|k| kernel.at_lag(k as f64 * spacing)).collect();
        Self::from_first_row(n, &first_row)
    }

    fn from_first_row(n: usize, first_row: &[f64]) -> Option<Self> {
        let m = first_row.len();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let mut buf: Vec<Complex<f64>> = first_row.iter().map(|&c| Complex::new(c, 0.0)).collect();
        fft.process(&mut buf);
        let max = buf.iter().map(|c| c.re).fold(0.0f64, f64::max);
        if buf.iter().any(|c| c.re < -EIGEN_TOLERANCE * max) {
            return None;
        }
        let scale = buf.iter().map(|c| (c.re.max(0.0) / m as f64).sqrt()).collect();
        Some(Self { n, scale, fft })
    }

    pub fn embedding_size(&self) -> usize {
        self.scale.len()
    }

    /// Two independent draws from one transform.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
        let mut buf: Vec<Complex<f64>> = self
            .scale
            .iter()
            .map(|&s| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(s * re, s * im)
            })
            .collect();
        self.fft.process(&mut buf);
        let a = buf[..self.n].iter().map(|c| c.re).collect();
        let b = buf[..self.n].iter().map(|c| c.im).collect();
        (a, b)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_pair(rng).0
    }
}

const BASE_JITTER: f64 = 1e-9;
const MAX_JITTER: f64 = 1e-3;

fn cholesky_with_jitter(k: DMatrix<f64>, variance: f64) -> Result<DMatrix<f64>> {
    let mut jitter = BASE_JITTER;
    while jitter <= MAX_JITTER {
        let mut m = k.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter * variance;
        }
        if let Some(c) = m.cholesky() {
            return Ok(c.unpack());
        }
        jitter *= 10.0;
    }
    Err(Error::Sampling("kernel matrix not positive definite even with jitter".into()))
}

/// Block-conditional Cholesky sampler on a regular grid.
///
/// Each block of `block` points is drawn conditionally on the block before
/// it, which is exact for the first two blocks and a Markov truncation after.
#[derive(Debug, Clone)]
pub struct BlockCholeskySampler {
    n: usize,
    block: usize,
    l11: DMatrix<f64>,
    l21: DMatrix<f64>,
    l22: DMatrix<f64>,
}

impl BlockCholeskySampler {
    pub fn new(kernel: &KernelSpec, n: usize, spacing: f64, block: usize) -> Result<Self> {
        if n == 0 || block == 0 {
            return Err(contract("block Cholesky sampler needs n > 0 and block > 0"));
        }
        let block = block.min(n);
        let span = if n > block { 2 * block } else { block };
        let times: Vec<f64> = (0..span).map(|i| i as f64 * spacing).collect();
        let l = cholesky_with_jitter(kernel.matrix(&times), kernel.variance())?;
        let l11 = l.view((0, 0), (block, block)).into_owned();
        let (l21, l22) = if span > block {
            (
                l.view((block, 0), (block, block)).into_owned(),
                l.view((block, block), (block, block)).into_owned(),
            )
        } else {
            (DMatrix::zeros(0, 0), DMatrix::zeros(0, 0))
        };
        Ok(Self {
            n,
            block,
            l11,
            l21,
            l22,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let b = self.block;
        let mut normals = |len: usize| DVector::<f64>::from_fn(len, |_, _| rng.sample(StandardNormal));
        let mut out = Vec::with_capacity(self.n + b);
        let mut prev = &self.l11 * normals(b);
        out.extend(prev.iter());
        while out.len() < self.n {
            let white = self
                .l11
                .solve_lower_triangular(&prev)
                .expect("cholesky factor has a nonzero diagonal");
            let next = &self.l21 * white + &self.l22 * normals(b);
            out.extend(next.iter());
            prev = next;
        }
        out.truncate(self.n);
        out
    }
}

fn check_uniform(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Ok(1.0);
    }
    let h = times[1] - times[0];
    if h.is_nan() || h <= 0.0 {
        return Err(contract("time grid must be strictly ascending"));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-6 * h {
            return Err(contract("time grid must be uniformly spaced"));
        }
    }
    Ok(h)
}

const DEFAULT_BLOCK: usize = 256;

/// One zero-mean draw on a uniform ascending grid, deterministic in `seed`.
pub fn sample_gp(kernel: &KernelSpec, times: &[f64], seed: u64) -> Result<Vec<f64>> {
    sample_gp_blocked(kernel, times, seed, DEFAULT_BLOCK)
}

/// As [`sample_gp`] with an explicit fallback block length.
pub fn sample_gp_blocked(kernel: &KernelSpec, times: &[f64], seed: u64, block: usize) -> Result<Vec<f64>> {
    if times.is_empty() {
        return Ok(Vec::new());
    }
    let h = check_uniform(times)?;
    let mut rng = rng_from_seed(seed);
    match CirculantSampler::new(kernel, times.len(), h) {
        Some(s) => Ok(s.sample(&mut rng)),
        None => Ok(BlockCholeskySampler::new(kernel, times.len(), h, block)?.sample(&mut rng)),
    }
}

/// One period of a periodic-kernel draw on the grid's points.
pub fn sample_periodic_pattern(kernel: &KernelSpec, grid: &PeriodGrid, seed: u64) -> Result<Vec<f64>> {
    let KernelSpec::Periodic { period, .. } = *kernel else {
        return Err(contract("periodic pattern needs a periodic kernel"));
    };
    if (period - grid.period_length()).abs() > 1e-12 * period {
        return Err(contract(format!(
            "kernel period {period} differs from the grid period {}",
            grid.period_length()
        )));
    }
    let sampler = CirculantSampler::periodic(kernel, grid.points(), grid.spacing())
        .ok_or_else(|| Error::Sampling("periodic kernel matrix has negative eigenvalues".into()))?;
    Ok(sampler.sample(&mut rng_from_seed(seed)))
}

/// The three seasonal signal types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Model {
    /// Seasonal pattern plus irregular component.
    #[value(name = "Y1", alias = "y1")]
    Y1,
    /// Amplitude modulation of the irregular component.
    #[value(name = "Y2", alias = "y2")]
    Y2,
    /// Time-scale modulation of the irregular component.
    #[value(name = "Y3", alias = "y3")]
    Y3,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Y1, Model::Y2, Model::Y3];

    pub fn name(self) -> &'static str {
        match self {
            Model::Y1 => "Y1",
            Model::Y2 => "Y2",
            Model::Y3 => "Y3",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Y1" | "y1" => Ok(Model::Y1),
            "Y2" | "y2" => Ok(Model::Y2),
            "Y3" | "y3" => Ok(Model::Y3),
            other => Err(Error::MalformedInput(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcProcessSpec {
    pub model: Model,
    /// Irregular component `X`; squared exponential.
    pub x_kernel: KernelSpec,
    /// Seasonal pattern `f`; periodic with the grid's period.
    pub f_kernel: KernelSpec,
    pub n_periods: usize,
    pub grid: PeriodGrid,
    pub seed: u64,
}

impl PcProcessSpec {
    /// Unit amplitudes with `l_X = 0.2` and `l_f = 1`.
    pub fn standard(model: Model, n_periods: usize, grid: PeriodGrid, seed: u64) -> Result<Self> {
        Ok(Self {
            model,
            x_kernel: KernelSpec::squared_exponential(1.0, 0.2 * grid.period_length())?,
            f_kernel: KernelSpec::periodic(1.0, 1.0, grid.period_length())?,
            n_periods,
            grid,
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.n_periods < 3 {
            return Err(contract(format!("need at least 3 periods, got {}", self.n_periods)));
        }
        if !matches!(self.x_kernel, KernelSpec::SquaredExponential { .. }) {
            return Err(contract("X kernel must be squared exponential"));
        }
        Ok(())
    }
}

const X_STREAM: u64 = 1;
const F_STREAM: u64 = 2;
const PERIODS_PER_BLOCK: usize = 4;

fn sample_x(kernel: &KernelSpec, n: usize, spacing: f64, seed: u64, block: usize) -> Result<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    match CirculantSampler::new(kernel, n, spacing) {
        Some(s) => Ok(s.sample(&mut rng)),
        None => Ok(BlockCholeskySampler::new(kernel, n, spacing, block)?.sample(&mut rng)),
    }
}

/// The whole simulated record, `n_periods * T` samples.
pub fn simulate_series(spec: &PcProcessSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let grid = &spec.grid;
    let t = grid.points();
    let h = grid.spacing();
    let total = spec.n_periods * t;
    let block = PERIODS_PER_BLOCK * t;
    let pattern = sample_periodic_pattern(&spec.f_kernel, grid, derive_seed(spec.seed, F_STREAM))?;
    let f = |i: usize| pattern[i % t];
    let x_seed = derive_seed(spec.seed, X_STREAM);

    let series = match spec.model {
        Model::Y1 => {
            let x = sample_x(&spec.x_kernel, total, h, x_seed, block)?;
            x.iter().enumerate().map(|(i, v)| f(i) + v).collect()
        }
        Model::Y2 => {
            let x = sample_x(&spec.x_kernel, total, h, x_seed, block)?;
            x.iter().enumerate().map(|(i, v)| f(i) * v).collect()
        }
        Model::Y3 => {
            // X on a grid padded so every warped time t + f(t) has neighbours
            let reach = pattern.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let margin = (reach / h).ceil() as usize + 1;
            let x = sample_x(&spec.x_kernel, total + 2 * margin, h, x_seed, block)?;
            (0..total)
                .map(|i| {
                    // sample i sits at (i + 0.5) h; x[j] sits at (j - margin + 0.5) h
                    let pos = i as f64 + margin as f64 + f(i) / h;
                    let lo = pos.floor();
                    if lo < 0.0 || lo as usize + 1 >= x.len() {
                        return Err(Error::Sampling(format!("warped time for sample {i} leaves the padded grid")));
                    }
                    let j = lo as usize;
                    let w = pos - lo;
                    Ok(x[j] * (1.0 - w) + x[j + 1] * w)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(series)
}

/// Simulated record split into `n_periods - 1` library curves and a focal
/// curve whose forecast segment is kept as truth.
pub fn make_pc_trajectory(spec: &PcProcessSpec) -> Result<(CurveLibrary, FocalCurve)> {
    let series = simulate_series(spec)?;
    split_last_period(&series, &spec.grid)
}

/// Splits a whole-period record: all but the last period form the library.
pub fn split_last_period(series: &[f64], grid: &PeriodGrid) -> Result<(CurveLibrary, FocalCurve)> {
    let t = grid.points();
    if !series.len().is_multiple_of(t) || series.len() < 3 * t {
        return Err(contract("record must hold at least 3 whole periods"));
    }
    let (all, _) = slice_series(series, grid)?;
    let last = all.len() - 1;
    let focal = all.as_focal(last);
    Ok((all.prefix(last)?, focal))
}
