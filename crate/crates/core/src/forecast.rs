//! Band and point forecasts built on a focal-curve envelope, together with
//! the rolling-window coverage estimates used to choose how many of the
//! deepest members delimit the band.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{pointwise_hull, CurveLibrary, FocalCurve, Hull};
use crate::envelope::{build_envelope, Envelope};
use crate::error::{contract, Error, Result};

/// The `k` deepest envelope members, most central first.
///
/// Equal depths favour the more recent curve.
pub fn k_deepest(envelope: &Envelope, k: usize) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(contract(format!("k must be at least 2, got {k}")));
    }
    if k > envelope.len() {
        return Err(Error::EnvelopeTooSmall {
            requested: k,
            available: envelope.len(),
        });
    }
    Ok(depth_order(envelope).into_iter().take(k).collect())
}

/// Every member, deepest first.
fn depth_order(envelope: &Envelope) -> Vec<usize> {
    let mut pos: Vec<usize> = (0..envelope.len()).collect();
    pos.sort_by(|&a, &b| {
        envelope.member_cover_counts[b]
            .cmp(&envelope.member_cover_counts[a])
            .then(envelope.members[b].cmp(&envelope.members[a]))
    });
    pos.into_iter().map(|p| envelope.members[p]).collect()
}

/// Pointwise hull of the selected library curves on `index_set`.
pub fn band(library: &CurveLibrary, members: &[usize], index_set: &[usize]) -> Result<Hull> {
    let curves: Vec<&[f64]> = members.iter().map(|&i| library.curve(i)).collect();
    pointwise_hull(&curves, index_set)
}

/// Proportion of positions where `truth` lies inside the band.
pub fn coverage(band: &Hull, truth: &[f64]) -> Result<f64> {
    if truth.len() != band.lower.len() {
        return Err(contract(format!(
            "truth has {} values, band has {}",
            truth.len(),
            band.lower.len()
        )));
    }
    if truth.is_empty() {
        return Err(contract("coverage over an empty segment"));
    }
    let hits = truth.iter().enumerate().filter(|&(p, &y)| band.contains(p, y)).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Summed band width on `index_set` relative to the whole library's hull.
pub fn mean_width(library: &CurveLibrary, members: &[usize], index_set: &[usize]) -> Result<f64> {
    if members.len() < 2 {
        return Err(contract("mean width needs at least 2 band curves"));
    }
    let selected = band(library, members, index_set)?;
    let whole = pointwise_hull(library.curves(), index_set)?;
    width_ratio(&selected, &whole)
}

fn hull_width(h: &Hull) -> f64 {
    h.upper.iter().zip(&h.lower).map(|(u, l)| u - l).sum()
}

fn width_ratio(selected: &Hull, whole: &Hull) -> Result<f64> {
    let denom = hull_width(whole);
    if denom <= 0.0 {
        return Err(Error::DegenerateLibrary);
    }
    Ok(hull_width(selected) / denom)
}

/// How envelope members are weighted in the point forecast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Weight proportional to the member's distance from the focal curve.
    #[default]
    AsWritten,
    /// Weight proportional to the reciprocal distance.
    InverseDistance,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::AsWritten => "as-written",
            Weighting::InverseDistance => "inverse-distance",
        }
    }
}

/// Convex weights over envelope members from their focal distances.
pub fn member_weights(distances: &[f64], weighting: Weighting) -> Result<Vec<f64>> {
    if distances.is_empty() {
        return Err(contract("point forecast from an empty envelope"));
    }
    let n = distances.len();
    let uniform = || vec![1.0 / n as f64; n];
    let weights = match weighting {
        Weighting::AsWritten => {
            let total: f64 = distances.iter().sum();
            if total > 0.0 {
                distances.iter().map(|d| d / total).collect()
            } else {
                uniform()
            }
        }
        Weighting::InverseDistance => {
            let zeros: Vec<usize> = (0..n).filter(|&i| distances[i] == 0.0).collect();
            if zeros.is_empty() {
                let total: f64 = distances.iter().map(|d| d.recip()).sum();
                distances.iter().map(|d| d.recip() / total).collect()
            } else {
                // limit of the weighting: mass shared by the exact matches
                let mut w = vec![0.0; n];
                for &i in &zeros {
                    w[i] = 1.0 / zeros.len() as f64;
                }
                w
            }
        }
    };
    Ok(weights)
}

/// Weighted functional mean of the envelope over the whole period.
pub fn point_forecast(library: &CurveLibrary, envelope: &Envelope, weighting: Weighting) -> Result<Vec<f64>> {
    let weights = member_weights(&envelope.member_distances, weighting)?;
    let mut out = vec![0.0; library.grid().points()];
    for (&m, w) in envelope.members.iter().zip(weights) {
        for (o, v) in out.iter_mut().zip(library.curve(m)) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// Band on both segments plus the point forecast.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandForecast {
    pub k: usize,
    /// Library indices delimiting the band.
    pub members: Vec<usize>,
    /// Central region on the observed segment.
    pub observed: Hull,
    /// Its extension on the forecast segment.
    pub forecast: Hull,
    /// Point forecast on the whole period.
    pub point: Vec<f64>,
    pub mean_width: f64,
    /// Present when the focal truth is known.
    pub coverage: Option<f64>,
}

pub fn forecast_band(
    library: &CurveLibrary,
    focal: &FocalCurve,
    envelope: &Envelope,
    k: usize,
    weighting: Weighting,
) -> Result<BandForecast> {
    let grid = library.grid();
    let members = k_deepest(envelope, k)?;
    let observed = band(library, &members, &grid.observed_indices())?;
    let forecast = band(library, &members, &grid.forecast_indices())?;
    let mean_width = mean_width(library, &members, &grid.forecast_indices())?;
    let coverage = focal.truth().map(|t| coverage(&forecast, t)).transpose()?;
    Ok(BandForecast {
        k,
        point: point_forecast(library, envelope, weighting)?,
        members,
        observed,
        forecast,
        mean_width,
        coverage,
    })
}

/// Forecast-segment coverage and width for `k = 2..=k_max`.
///
/// Bands saturate: once `k` exceeds the envelope size the band is the hull of
/// the whole envelope (a single curve for a one-member envelope).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeProfile {
    pub envelope_size: usize,
    /// Entry `k - 2` holds the coverage with `k` band curves; empty without truth.
    pub coverages: Vec<f64>,
    /// Entry `k - 2` holds the mean width with `k` band curves.
    pub widths: Vec<f64>,
}

impl EnvelopeProfile {
    /// Largest `k` stored before saturation.
    pub fn max_k(&self) -> usize {
        self.widths.len() + 1
    }

    pub fn saturated(&self, k: usize) -> bool {
        k > self.envelope_size
    }

    fn slot(&self, k: usize) -> Option<usize> {
        (k >= 2 && !self.widths.is_empty()).then(|| k.min(self.max_k()) - 2)
    }

    pub fn coverage(&self, k: usize) -> Option<f64> {
        self.slot(k).and_then(|i| self.coverages.get(i)).copied()
    }

    pub fn width(&self, k: usize) -> Option<f64> {
        self.slot(k).and_then(|i| self.widths.get(i)).copied()
    }
}

/// Nested bands grow one member at a time, so the whole profile costs a
/// single pass over the depth order.
pub fn envelope_profile(
    library: &CurveLibrary,
    envelope: &Envelope,
    truth: Option<&[f64]>,
    k_max: usize,
) -> Result<EnvelopeProfile> {
    if k_max < 2 {
        return Err(contract(format!("k_max must be at least 2, got {k_max}")));
    }
    let forecast = library.grid().forecast_indices();
    let whole = pointwise_hull(library.curves(), &forecast)?;
    let order = depth_order(envelope);
    let top = k_max.min(order.len().max(2));
    let mut coverages = Vec::new();
    let mut widths = Vec::new();
    let mut acc = band(library, &order[..1], &forecast)?;
    for k in 2..=top {
        if let Some(&m) = order.get(k - 1) {
            let c = library.curve(m);
            for (p, &j) in forecast.iter().enumerate() {
                acc.lower[p] = acc.lower[p].min(c[j]);
                acc.upper[p] = acc.upper[p].max(c[j]);
            }
        }
        widths.push(width_ratio(&acc, &whole)?);
        if let Some(t) = truth {
            coverages.push(coverage(&acc, t)?);
        }
    }
    Ok(EnvelopeProfile {
        envelope_size: envelope.len(),
        coverages,
        widths,
    })
}

/// Lower empirical `alpha`-quantile: the order statistic of rank `ceil(alpha * m)`.
pub fn lower_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(contract("quantile of an empty sample"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(contract(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    // guard against alpha * m landing a hair above an integer
    let rank = ((alpha * sorted.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[rank.min(sorted.len()) - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartRow {
    pub k: usize,
    pub mean_coverage: f64,
    pub alpha_percentile: f64,
    pub mean_width: f64,
    /// Replayed envelopes with fewer than `k` members.
    pub saturated_replays: usize,
}

/// Expected coverage, coverage floor and width against `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningChart {
    pub rows: Vec<ChartRow>,
    pub alpha: f64,
    pub window: usize,
    pub k_max: usize,
    /// Size of the current focal's envelope; widths saturate beyond it.
    pub envelope_size: usize,
}

impl TuningChart {
    /// Combines replayed coverage profiles with the current envelope's widths.
    pub fn from_profiles(
        replays: &[&EnvelopeProfile],
        current: &EnvelopeProfile,
        alpha: f64,
        k_max: usize,
    ) -> Result<Self> {
        if replays.is_empty() {
            return Err(contract("tuning chart needs at least one replayed period"));
        }
        if k_max < 2 {
            return Err(contract(format!("k_max must be at least 2, got {k_max}")));
        }
        let mut rows = Vec::with_capacity(k_max - 1);
        for k in 2..=k_max {
            let cov = replays
                .iter()
                .map(|p| p.coverage(k).ok_or_else(|| contract("replayed profile without coverage")))
                .collect::<Result<Vec<_>>>()?;
            rows.push(ChartRow {
                k,
                mean_coverage: cov.iter().sum::<f64>() / cov.len() as f64,
                alpha_percentile: lower_quantile(&cov, alpha)?,
                mean_width: current.width(k).ok_or_else(|| contract("current profile is empty"))?,
                saturated_replays: replays.iter().filter(|p| p.saturated(k)).count(),
            });
        }
        Ok(Self {
            rows,
            alpha,
            window: replays.len(),
            k_max,
            envelope_size: current.envelope_size,
        })
    }

    pub fn row(&self, k: usize) -> Option<&ChartRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig {
    /// Number of most recent periods replayed.
    pub window: usize,
    pub alpha: f64,
    pub k_max: usize,
}

impl Default for TuneConfig {
    fn default() -> Self {
        Self {
            window: 50,
            alpha: 0.1,
            k_max: 30,
        }
    }
}

/// Envelope of library curve `i` against the curves before it, with its
/// coverage profile against its own forecast segment.
pub fn replay_period(library: &CurveLibrary, i: usize, k_max: usize) -> Result<EnvelopeProfile> {
    let past = library.prefix(i)?;
    let focal = library.as_focal(i);
    let env = build_envelope(&past, &focal)?;
    envelope_profile(&past, &env, focal.truth(), k_max)
}

/// Replays the last `window` library periods in parallel, in index order.
pub fn replay_window(library: &CurveLibrary, window: usize, k_max: usize) -> Result<Vec<EnvelopeProfile>> {
    let n = library.len();
    if window == 0 || n < window + 2 {
        return Err(contract(format!(
            "window of {window} periods needs at least {} library curves, got {n}",
            window + 2
        )));
    }
    (n - window..n)
        .into_par_iter()
        .map(|i| replay_period(library, i, k_max))
        .collect()
}

/// Tuning chart for the focal curve whose envelope is `current`.
pub fn tune(library: &CurveLibrary, current: &Envelope, config: &TuneConfig) -> Result<TuningChart> {
    if config.window >= library.len() {
        return Err(contract(format!(
            "window {} must be smaller than the library size {}",
            config.window,
            library.len()
        )));
    }
    let replays = replay_window(library, config.window, config.k_max)?;
    let now = envelope_profile(library, current, None, config.k_max)?;
    let refs: Vec<&EnvelopeProfile> = replays.iter().collect();
    TuningChart::from_profiles(&refs, &now, config.alpha, config.k_max)
}

/// Thresholds on expected coverage and on the coverage floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRule {
    pub min_mean: f64,
    pub min_floor: f64,
}

impl SelectionRule {
    pub const fn new(min_mean: f64, min_floor: f64) -> Self {
        Self { min_mean, min_floor }
    }

    /// High expected coverage, high floor.
    pub const DEMANDING: Self = Self::new(0.9, 0.6);
    /// High expected coverage, low floor.
    pub const CONSERVATIVE: Self = Self::new(0.9, 0.3);
    /// Moderate expected coverage, low floor.
    pub const CONFORMIST: Self = Self::new(0.6, 0.3);
}

/// Smallest charted `k` satisfying the rule, or `None` when none does.
pub fn select_k(chart: &TuningChart, rule: SelectionRule) -> Option<usize> {
    chart
        .rows
        .iter()
        .find(|r| r.mean_coverage >= rule.min_mean && r.alpha_percentile >= rule.min_floor)
        .map(|r| r.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Curve, PeriodGrid};
    use proptest::prelude::*;

    fn const_library(vals: &[f64]) -> CurveLibrary {
        let grid = PeriodGrid::new(4, 1.0, 2).unwrap();
        let curves = vals.iter().map(|&v| Curve::new(vec![v; 4]).unwrap()).collect();
        CurveLibrary::new(grid, curves).unwrap()
    }

    fn four_constants() -> (CurveLibrary, Envelope) {
        let lib = const_library(&[0.5, 2.0, 5.0, -3.0]);
        let env = build_envelope(&lib, &FocalCurve::new(vec![1.0; 2]).unwrap()).unwrap();
        (lib, env)
    }

    #[test]
    fn k_deepest_examples() {
        let (_, env) = four_constants();
        let mut top = k_deepest(&env, 2).unwrap();
        top.sort();
        assert_eq!(top, vec![0, 1]);
        assert_eq!(k_deepest(&env, 4).unwrap().len(), 4);
        assert!(matches!(
            k_deepest(&env, 5),
            Err(Error::EnvelopeTooSmall { requested: 5, available: 4 })
        ));
    }

    #[test]
    fn band_examples() {
        let (lib, _) = four_constants();
        let b = band(&lib, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(b.lower, vec![0.5; 2]);
        assert_eq!(b.upper, vec![2.0; 2]);
        let b = band(&lib, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(b.lower, vec![0.5; 2]);
        assert_eq!(b.upper, vec![2.0; 2]);

        let twins = const_library(&[3.0, 3.0]);
        let b = band(&twins, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn coverage_examples() {
        let b = Hull {
            lower: vec![0.0; 4],
            upper: vec![1.0; 4],
        };
        assert_eq!(coverage(&b, &[0.5; 4]).unwrap(), 1.0);
        assert_eq!(coverage(&b, &[2.0; 4]).unwrap(), 0.0);
        assert_eq!(coverage(&b, &[0.5, 2.0, 1.0, -1.0]).unwrap(), 0.5);
    }

    #[test]
    fn mean_width_examples() {
        let (lib, _) = four_constants();
        assert_eq!(mean_width(&lib, &[2, 3], &[2, 3]).unwrap(), 1.0);
        assert_eq!(mean_width(&lib, &[0, 1], &[2, 3]).unwrap(), 0.1875);
        let lib = const_library(&[0.0, 0.0, 1.0]);
        assert_eq!(mean_width(&lib, &[0, 1], &[2, 3]).unwrap(), 0.0);
        let flat = const_library(&[1.0, 1.0]);
        assert!(matches!(mean_width(&flat, &[0, 1], &[2, 3]), Err(Error::DegenerateLibrary)));
    }

    #[test]
    fn weights_examples() {
        for w in [Weighting::AsWritten, Weighting::InverseDistance] {
            assert_eq!(member_weights(&[3.0], w).unwrap(), vec![1.0]);
            assert_eq!(member_weights(&[2.0, 2.0], w).unwrap(), vec![0.5, 0.5]);
        }
        let a = member_weights(&[1.0, 4.0], Weighting::AsWritten).unwrap();
        assert!((0.2 * 2.0 + 0.8 * 5.0 - (a[0] * 2.0 + a[1] * 5.0)).abs() < 1e-15);
        assert!((a[0] * 2.0 + a[1] * 5.0 - 4.4).abs() < 1e-12);
        let b = member_weights(&[1.0, 4.0], Weighting::InverseDistance).unwrap();
        assert!((b[0] * 2.0 + b[1] * 5.0 - 2.6).abs() < 1e-12);

        assert_eq!(member_weights(&[0.0, 2.0], Weighting::InverseDistance).unwrap(), vec![1.0, 0.0]);
        assert_eq!(member_weights(&[0.0, 0.0], Weighting::AsWritten).unwrap(), vec![0.5, 0.5]);
        assert!(member_weights(&[], Weighting::AsWritten).is_err());
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(lower_quantile(&[0.4; 7], 0.1).unwrap(), 0.4);
        let mut v = vec![0.5; 10];
        v[3] = 0.0;
        assert_eq!(lower_quantile(&v, 0.1).unwrap(), 0.0);
        assert!((v.iter().sum::<f64>() / 10.0 - 0.45).abs() < 1e-15);
        // rank ceil(0.05 * 50) = 3
        let w: Vec<f64> = (0..50).map(|i| i as f64).collect();
        assert_eq!(lower_quantile(&w, 0.05).unwrap(), 2.0);
        assert_eq!(lower_quantile(&w, 0.1).unwrap(), 4.0);
    }

    fn chart(rows: &[(usize, f64, f64)]) -> TuningChart {
        TuningChart {
            rows: rows
                .iter()
                .map(|&(k, m, c)| ChartRow {
                    k,
                    mean_coverage: m,
                    alpha_percentile: c,
                    mean_width: 0.0,
                    saturated_replays: 0,
                })
                .collect(),
            alpha: 0.1,
            window: 10,
            k_max: 30,
            envelope_size: 30,
        }
    }

    #[test]
    fn select_k_examples() {
        let c = chart(&[(2, 0.5, 0.2), (5, 0.7, 0.4), (9, 0.92, 0.65)]);
        assert_eq!(select_k(&c, SelectionRule::DEMANDING), Some(9));
        assert_eq!(select_k(&c, SelectionRule::new(0.6, 0.3)), Some(5));
        assert_eq!(select_k(&c, SelectionRule::new(0.99, 0.99)), None);
    }

    #[test]
    fn chart_from_equal_coverages() {
        let p = EnvelopeProfile {
            envelope_size: 4,
            coverages: vec![0.7, 0.7, 0.7],
            widths: vec![0.1, 0.2, 0.3],
        };
        let replays = vec![&p; 5];
        let c = TuningChart::from_profiles(&replays, &p, 0.1, 30).unwrap();
        assert_eq!(c.rows.len(), 29);
        assert_eq!(c.envelope_size, 4);
        for r in &c.rows {
            assert_eq!(r.mean_coverage, 0.7);
            assert_eq!(r.alpha_percentile, 0.7);
            assert_eq!(r.saturated_replays, if r.k > 4 { 5 } else { 0 });
        }
        assert_eq!(c.row(30).unwrap().mean_width, 0.3);
    }

    #[test]
    fn forecast_band_on_constants() {
        let (lib, env) = four_constants();
        let focal = FocalCurve::new(vec![1.0; 2]).unwrap().with_truth(vec![1.0, 3.0]).unwrap();
        let f = forecast_band(&lib, &focal, &env, 2, Weighting::AsWritten).unwrap();
        assert_eq!(f.forecast.lower, vec![0.5; 2]);
        assert_eq!(f.forecast.upper, vec![2.0; 2]);
        assert_eq!(f.coverage, Some(0.5));
        assert_eq!(f.mean_width, 0.1875);
        assert_eq!(f.point.len(), 4);
    }

    proptest! {
        #[test]
        fn translation_equivariant_point(vals in prop::collection::vec(-10f64..10.0, 3..8), c in -100f64..100.0) {
            let lib = const_library(&vals);
            let focal_v = vals.iter().sum::<f64>() / vals.len() as f64;
            let Ok(env) = build_envelope(&lib, &FocalCurve::new(vec![focal_v; 2]).unwrap()) else { return Ok(()) };
            let shifted: Vec<f64> = vals.iter().map(|v| v + c).collect();
            let lib2 = const_library(&shifted);
            let env2 = build_envelope(&lib2, &FocalCurve::new(vec![focal_v + c; 2]).unwrap()).unwrap();
            for w in [Weighting::AsWritten, Weighting::InverseDistance] {
                let a = point_forecast(&lib, &env, w).unwrap();
                let b = point_forecast(&lib2, &env2, w).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x + c - y).abs() < 1e-9 * (1.0 + c.abs()));
                }
            }
        }

        #[test]
        fn point_within_member_range(vals in prop::collection::vec(-10f64..10.0, 3..8)) {
            let lib = const_library(&vals);
            let Ok(env) = build_envelope(&lib, &FocalCurve::new(vec![0.1; 2]).unwrap()) else { return Ok(()) };
            let lo = env.members.iter().map(|&m| vals[m]).fold(f64::INFINITY, f64::min);
            let hi = env.members.iter().map(|&m| vals[m]).fold(f64::NEG_INFINITY, f64::max);
            for w in [Weighting::AsWritten, Weighting::InverseDistance] {
                for v in point_forecast(&lib, &env, w).unwrap() {
                    prop_assert!(lo - 1e-9 <= v && v <= hi + 1e-9);
                }
            }
        }

        #[test]
        fn width_scale_invariant(vals in prop::collection::vec(-10f64..10.0, 3..8), s in 0.01f64..100.0) {
            let lib = const_library(&vals);
            let scaled = const_library(&vals.iter().map(|v| v * s).collect::<Vec<_>>());
            if let Ok(a) = mean_width(&lib, &[0, 1], &[2, 3]) {
                let b = mean_width(&scaled, &[0, 1], &[2, 3]).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn select_k_monotone_in_rule(
            ms in prop::collection::vec(0f64..1.0, 1..10),
            cs in prop::collection::vec(0f64..1.0, 1..10),
            a in 0f64..1.0, b in 0f64..1.0, da in 0f64..0.5, db in 0f64..0.5,
        ) {
            let n = ms.len().min(cs.len());
            let mut m = ms[..n].to_vec();
            let mut c = cs[..n].to_vec();
            m.sort_by(f64::total_cmp);
            c.sort_by(f64::total_cmp);
            let rows: Vec<(usize, f64, f64)> = (0..n).map(|i| (i + 2, m[i], c[i])).collect();
            let ch = chart(&rows);
            let lo = select_k(&ch, SelectionRule::new(a, b));
            let hi = select_k(&ch, SelectionRule::new(a + da, b + db));
            if let (Some(x), Some(y)) = (lo, hi) {
                prop_assert!(y >= x);
            }
            if lo.is_none() {
                prop_assert!(hi.is_none());
            }
        }
    }
}
