//! Depth-based forecasting for functional time series.
//!
//! A long periodic record is sliced into period curves. The most recent,
//! partially observed period (the focal curve) is enveloped by a selection
//! of past curves chosen so that it is covered and central in band depth;
//! the deepest of those curves delimit a prediction band for the rest of the
//! period, and their distance-weighted mean gives a point forecast. How many
//! curves to use is tuned by replaying the procedure on recent periods.

pub mod cli;
pub mod curves;
pub mod depth;
pub mod envelope;
mod error;
pub mod forecast;
pub mod harness;
pub mod io;
pub mod simulate;

pub use curves::{
    lambda_measure, pointwise_hull, restricted_distance, slice_series, Curve, CurveLibrary, FocalCurve, Hull,
    PeriodGrid,
};
pub use depth::{depth_percentile, mbd_bruteforce, mbd_restricted, DepthReport};
pub use envelope::{build_envelope, envelopable_set, greedy_cover_batch, Envelope, IterationRecord};
pub use error::{Error, Result};
pub use forecast::{
    band, coverage, forecast_band, k_deepest, mean_width, point_forecast, select_k, tune, BandForecast, ChartRow,
    SelectionRule, TuneConfig, TuningChart, Weighting,
};
pub use simulate::{make_pc_trajectory, sample_gp, sample_periodic_pattern, KernelSpec, Model, PcProcessSpec};
