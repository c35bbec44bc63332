//! Python module `depthcast`.
//!
//! Curves cross the boundary as lists of floats. A library is a list of
//! whole period curves; a focal curve is given by its observed prefix, whose
//! length sets the cut point of the period grid.

use depthcast_core as core;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Sampling(_) | core::Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn problem(library: Vec<Vec<f64>>, observed: Vec<f64>, truth: Option<Vec<f64>>) -> PyResult<(core::CurveLibrary, core::FocalCurve)> {
    let points = library.first().map(Vec::len).unwrap_or(0);
    let grid = core::PeriodGrid::new(points, 1.0, observed.len()).map_err(to_py)?;
    let curves = library
        .into_iter()
        .map(core::Curve::new)
        .collect::<core::Result<Vec<_>>>()
        .map_err(to_py)?;
    let library = core::CurveLibrary::new(grid, curves).map_err(to_py)?;
    let mut focal = core::FocalCurve::new(observed).map_err(to_py)?;
    if let Some(t) = truth {
        focal = focal.with_truth(t).map_err(to_py)?;
    }
    Ok((library, focal))
}

fn weighting(name: &str) -> PyResult<core::Weighting> {
    match name {
        "as-written" => Ok(core::Weighting::AsWritten),
        "inverse-distance" => Ok(core::Weighting::InverseDistance),
        other => Err(PyValueError::new_err(format!(
            "unknown weighting {other:?}; expected 'as-written' or 'inverse-distance'"
        ))),
    }
}

/// Modified band depth of each curve over `index_set` (all points when omitted).
#[pyfunction]
#[pyo3(signature = (curves, index_set=None))]
fn mbd(curves: Vec<Vec<f64>>, index_set: Option<Vec<usize>>) -> PyResult<Vec<f64>> {
    let width = curves.first().map(Vec::len).unwrap_or(0);
    if let Some(bad) = curves.iter().position(|c| c.len() != width) {
        return Err(PyValueError::new_err(format!("curve {bad} has a different length")));
    }
    let index_set = index_set.unwrap_or_else(|| (0..width).collect());
    if let Some(&j) = index_set.iter().find(|&&j| j >= width) {
        return Err(PyValueError::new_err(format!("index {j} outside curves of length {width}")));
    }
    Ok(core::mbd_restricted(&curves, &index_set).map_err(to_py)?.depths())
}

/// The focal-curve envelope.
#[pyclass(frozen, get_all)]
struct Envelope {
    /// Library indices in order of acceptance.
    members: Vec<usize>,
    member_depths: Vec<f64>,
    member_distances: Vec<f64>,
    focal_depth: f64,
    focal_percentile: f64,
    /// Observed grid indices where the library can cover the focal curve.
    envelopable: Vec<usize>,
    audit: String,
}

#[pymethods]
impl Envelope {
    fn __len__(&self) -> usize {
        self.members.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Envelope(members={}, focal_depth={}, focal_percentile={})",
            self.members.len(),
            self.focal_depth,
            self.focal_percentile
        )
    }
}

/// Builds the envelope of the focal curve from the library.
#[pyfunction]
fn envelope(library: Vec<Vec<f64>>, observed: Vec<f64>) -> PyResult<Envelope> {
    let (library, focal) = problem(library, observed, None)?;
    let env = core::build_envelope(&library, &focal).map_err(to_py)?;
    Ok(Envelope {
        audit: env.audit_report(),
        members: env.members,
        member_depths: env.member_depths,
        member_distances: env.member_distances,
        focal_depth: env.focal_depth,
        focal_percentile: env.focal_percentile,
        envelopable: env.envelopable,
    })
}

/// Band from the `k` deepest envelope members plus the point forecast.
#[pyclass(frozen, get_all)]
struct BandForecast {
    k: usize,
    members: Vec<usize>,
    /// Band on the forecast segment.
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Band on the observed segment.
    observed_lower: Vec<f64>,
    observed_upper: Vec<f64>,
    /// Point forecast over the whole period.
    point: Vec<f64>,
    mean_width: f64,
    coverage: Option<f64>,
}

#[pymethods]
impl BandForecast {
    fn __repr__(&self) -> String {
        let coverage = self.coverage.map_or_else(|| "None".to_string(), |c| c.to_string());
        format!("BandForecast(k={}, mean_width={}, coverage={coverage})", self.k, self.mean_width)
    }
}

#[pyfunction]
#[pyo3(signature = (library, observed, k, weighting="as-written", truth=None))]
fn forecast(
    library: Vec<Vec<f64>>,
    observed: Vec<f64>,
    k: usize,
    weighting: &str,
    truth: Option<Vec<f64>>,
) -> PyResult<BandForecast> {
    let w = self::weighting(weighting)?;
    let (library, focal) = problem(library, observed, truth)?;
    let env = core::build_envelope(&library, &focal).map_err(to_py)?;
    let b = core::forecast_band(&library, &focal, &env, k, w).map_err(to_py)?;
    Ok(BandForecast {
        k: b.k,
        members: b.members,
        lower: b.forecast.lower,
        upper: b.forecast.upper,
        observed_lower: b.observed.lower,
        observed_upper: b.observed.upper,
        point: b.point,
        mean_width: b.mean_width,
        coverage: b.coverage,
    })
}

/// Expected coverage `M_k`, coverage floor `C_k^alpha` and width `W_k` per `k`.
#[pyclass(frozen, get_all)]
struct TuningChart {
    k: Vec<usize>,
    mean_coverage: Vec<f64>,
    alpha_percentile: Vec<f64>,
    mean_width: Vec<f64>,
    alpha: f64,
    window: usize,
    envelope_size: usize,
}

#[pymethods]
impl TuningChart {
    /// Smallest `k` with `M_k >= min_mean` and `C_k^alpha >= min_floor`, or None.
    fn select_k(&self, min_mean: f64, min_floor: f64) -> Option<usize> {
        (0..self.k.len())
            .find(|&i| self.mean_coverage[i] >= min_mean && self.alpha_percentile[i] >= min_floor)
            .map(|i| self.k[i])
    }

    fn __repr__(&self) -> String {
        format!("TuningChart(rows={}, alpha={}, window={})", self.k.len(), self.alpha, self.window)
    }
}

/// Tuning chart from replaying the last `window` library periods.
#[pyfunction]
#[pyo3(signature = (library, observed, window=50, alpha=0.1, k_max=30))]
fn tune(library: Vec<Vec<f64>>, observed: Vec<f64>, window: usize, alpha: f64, k_max: usize) -> PyResult<TuningChart> {
    let (library, focal) = problem(library, observed, None)?;
    let env = core::build_envelope(&library, &focal).map_err(to_py)?;
    let config = core::TuneConfig { window, alpha, k_max };
    let chart = core::tune(&library, &env, &config).map_err(to_py)?;
    Ok(TuningChart {
        k: chart.rows.iter().map(|r| r.k).collect(),
        mean_coverage: chart.rows.iter().map(|r| r.mean_coverage).collect(),
        alpha_percentile: chart.rows.iter().map(|r| r.alpha_percentile).collect(),
        mean_width: chart.rows.iter().map(|r| r.mean_width).collect(),
        alpha: chart.alpha,
        window: chart.window,
        envelope_size: chart.envelope_size,
    })
}

/// Simulates `periods` periods of model `Y1`, `Y2` or `Y3`.
///
/// Returns `(library, observed, truth)`: the first `periods - 1` curves and
/// the last period split at `cut`.
#[pyfunction]
#[pyo3(signature = (model, periods, points=50, cut=None, seed=0))]
#[allow(clippy::type_complexity)]
fn simulate(
    model: &str,
    periods: usize,
    points: usize,
    cut: Option<usize>,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    let model: core::Model = model.parse().map_err(to_py)?;
    let grid = core::PeriodGrid::new(points, 1.0, cut.unwrap_or(points / 2)).map_err(to_py)?;
    let spec = core::PcProcessSpec::standard(model, periods, grid, seed).map_err(to_py)?;
    let (library, focal) = core::make_pc_trajectory(&spec).map_err(to_py)?;
    let curves = library.curves().iter().map(|c| c.values().to_vec()).collect();
    let truth = focal.truth().map(<[f64]>::to_vec).unwrap_or_default();
    Ok((curves, focal.observed().to_vec(), truth))
}

#[pymodule]
fn depthcast(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(mbd, m)?)?;
    m.add_function(wrap_pyfunction!(envelope, m)?)?;
    m.add_function(wrap_pyfunction!(forecast, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_class::<Envelope>()?;
    m.add_class::<BandForecast>()?;
    m.add_class::<TuningChart>()?;
    Ok(())
}
