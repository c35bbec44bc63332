//! Period grids, curves and the small set of pointwise primitives shared by
//! every other module: series slicing, restricted Euclidean distance, the
//! proportion measure over an index set and the pointwise hull.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

/// Discretization of one period `[0, p]` into `points` midpoint samples.
///
/// Grid point `j` sits at `(j + 0.5) * p / points`. Indices below
/// `cut_index` form the observed segment `[0, q]`, the rest form the
/// forecast segment `(q, p]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodGrid {
    points: usize,
    period_length: f64,
    cut_index: usize,
}

impl PeriodGrid {
    pub fn new(points: usize, period_length: f64, cut_index: usize) -> Result<Self> {
        if points < 2 {
            return Err(contract(format!(
                "points per period must be at least 2, got {points}"
            )));
        }
        if !(period_length.is_finite() && period_length > 0.0) {
            return Err(contract(format!(
                "period length must be positive, got {period_length}"
            )));
        }
        if cut_index == 0 || cut_index >= points {
            return Err(contract(format!(
                "cut index must lie in [1, {}], got {cut_index}",
                points - 1
            )));
        }
        Ok(Self {
            points,
            period_length,
            cut_index,
        })
    }

    /// Grid with `p = 1` cut at the middle of the period.
    pub fn half_split(points: usize) -> Result<Self> {
        Self::new(points, 1.0, points / 2)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn period_length(&self) -> f64 {
        self.period_length
    }

    pub fn cut_index(&self) -> usize {
        self.cut_index
    }

    pub fn spacing(&self) -> f64 {
        self.period_length / self.points as f64
    }

    /// Time of grid point `j` within the period.
    pub fn time(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.spacing()
    }

    /// End of the observed segment.
    pub fn q(&self) -> f64 {
        self.cut_index as f64 * self.spacing()
    }

    pub fn observed_indices(&self) -> Vec<usize> {
        (0..self.cut_index).collect()
    }

    pub fn forecast_indices(&self) -> Vec<usize> {
        (self.cut_index..self.points).collect()
    }

    pub fn forecast_len(&self) -> usize {
        self.points - self.cut_index
    }
}

/// One period's sampled values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve(Vec<f64>);

impl Curve {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::MalformedInput(format!(
                "non-finite curve value at index {j}"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Curve {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Chronologically ordered, fully observed past periods.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLibrary {
    grid: PeriodGrid,
    curves: Vec<Curve>,
}

impl CurveLibrary {
    pub fn new(grid: PeriodGrid, curves: Vec<Curve>) -> Result<Self> {
        if curves.len() < 2 {
            return Err(contract(format!(
                "a curve library needs at least 2 curves, got {}",
                curves.len()
            )));
        }
        if let Some(i) = curves.iter().position(|c| c.len() != grid.points()) {
            return Err(Error::MalformedInput(format!(
                "curve {i} has {} points, grid has {}",
                curves[i].len(),
                grid.points()
            )));
        }
        Ok(Self { grid, curves })
    }

    pub fn grid(&self) -> &PeriodGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curve(&self, i: usize) -> &[f64] {
        self.curves[i].values()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    /// The first `n` curves as a library of their own.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n > self.curves.len() {
            return Err(contract(format!(
                "prefix of {n} curves requested from a library of {}",
                self.curves.len()
            )));
        }
        Self::new(self.grid, self.curves[..n].to_vec())
    }

    /// Curve `i` split at the grid cut: observed part as focal, rest as truth.
    pub fn as_focal(&self, i: usize) -> FocalCurve {
        let values = self.curve(i);
        let cut = self.grid.cut_index();
        FocalCurve {
            observed: values[..cut].to_vec(),
            truth: Some(values[cut..].to_vec()),
        }
    }

    /// Concatenation of all curves in order.
    pub fn flatten(&self) -> Vec<f64> {
        self.curves.iter().flat_map(|c| c.values().iter().copied()).collect()
    }
}

/// The partially observed most recent period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocalCurve {
    observed: Vec<f64>,
    truth: Option<Vec<f64>>,
}

impl FocalCurve {
    pub fn new(observed: Vec<f64>) -> Result<Self> {
        if observed.is_empty() {
            return Err(contract("focal curve has no observed values"));
        }
        if let Some(j) = observed.iter().position(|v| !v.is_finite()) {
            return Err(Error::MalformedInput(format!(
                "non-finite focal value at index {j}"
            )));
        }
        Ok(Self {
            observed,
            truth: None,
        })
    }

    pub fn with_truth(mut self, truth: Vec<f64>) -> Result<Self> {
        if let Some(j) = truth.iter().position(|v| !v.is_finite()) {
            return Err(Error::MalformedInput(format!(
                "non-finite truth value at index {j}"
            )));
        }
        self.truth = Some(truth);
        Ok(self)
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }

    /// Values on the forecast segment, when known.
    pub fn truth(&self) -> Option<&[f64]> {
        self.truth.as_deref()
    }

    /// Observed part followed by the truth, if the latter is known.
    pub fn full(&self) -> Option<Vec<f64>> {
        self.truth.as_ref().map(|t| {
            let mut v = self.observed.clone();
            v.extend_from_slice(t);
            v
        })
    }
}

/// Slices a flat sample vector into whole periods.
///
/// A trailing partial period of exactly `cut_index` samples is returned as
/// the focal curve.
pub fn slice_series(samples: &[f64], grid: &PeriodGrid) -> Result<(CurveLibrary, Option<FocalCurve>)> {
    let t = grid.points();
    let remainder = samples.len() % t;
    let focal_len = match remainder {
        0 => 0,
        r if r == grid.cut_index() => r,
        r => {
            return Err(Error::MalformedInput(format!(
                "series of {} samples leaves a remainder of {r} after whole periods of {t}; \
                 expected 0 or the cut index {}",
                samples.len(),
                grid.cut_index()
            )))
        }
    };
    let full = samples.len() - focal_len;
    let curves = samples[..full]
        .chunks_exact(t)
        .map(|c| Curve::new(c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let library = CurveLibrary::new(*grid, curves)?;
    let focal = if focal_len > 0 {
        Some(FocalCurve::new(samples[full..].to_vec())?)
    } else {
        None
    };
    Ok((library, focal))
}

/// Euclidean distance between `a` and `b` over `index_set`.
///
/// The grid-spacing factor is omitted; it scales every distance equally.
pub fn restricted_distance(a: &[f64], b: &[f64], index_set: &[usize]) -> Result<f64> {
    if index_set.is_empty() {
        return Err(contract("restricted distance over an empty index set"));
    }
    Ok(index_set
        .iter()
        .map(|&j| {
            let d = a[j] - b[j];
            d * d
        })
        .sum::<f64>()
        .sqrt())
}

/// Fraction of `true` entries.
pub fn lambda_measure(predicate: &[bool]) -> Result<f64> {
    if predicate.is_empty() {
        return Err(contract("proportion measure over an empty index set"));
    }
    let hits = predicate.iter().filter(|&&p| p).count();
    Ok(hits as f64 / predicate.len() as f64)
}

/// Pointwise lower and upper envelope of a curve set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Hull {
    /// Whether `lower[pos] <= y <= upper[pos]`.
    pub fn contains(&self, pos: usize, y: f64) -> bool {
        self.lower[pos] <= y && y <= self.upper[pos]
    }
}

/// Pointwise min/max of `curves` at each index of `index_set`, in index-set order.
pub fn pointwise_hull<C: AsRef<[f64]>>(curves: &[C], index_set: &[usize]) -> Result<Hull> {
    if curves.is_empty() {
        return Err(contract("pointwise hull of an empty curve set"));
    }
    let mut lower = Vec::with_capacity(index_set.len());
    let mut upper = Vec::with_capacity(index_set.len());
    for &j in index_set {
        let (lo, hi) = curves.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            let v = c.as_ref()[j];
            (lo.min(v), hi.max(v))
        });
        lower.push(lo);
        upper.push(hi);
    }
    Ok(Hull { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid4() -> PeriodGrid {
        PeriodGrid::new(4, 1.0, 2).unwrap()
    }

    #[test]
    fn grid_uses_midpoints() {
        let g = grid4();
        assert_eq!(g.time(0), 0.125);
        assert_eq!(g.time(3), 0.875);
        assert_eq!(g.q(), 0.5);
        assert_eq!(g.observed_indices(), vec![0, 1]);
        assert_eq!(g.forecast_indices(), vec![2, 3]);
    }

    #[test]
    fn grid_rejects_bad_cut() {
        assert!(PeriodGrid::new(4, 1.0, 0).is_err());
        assert!(PeriodGrid::new(4, 1.0, 4).is_err());
        assert!(PeriodGrid::new(4, 0.0, 2).is_err());
    }

    #[test]
    fn slice_exact_multiple() {
        let s: Vec<f64> = (0..12).map(f64::from).collect();
        let (lib, focal) = slice_series(&s, &grid4()).unwrap();
        assert_eq!(lib.len(), 3);
        assert!(focal.is_none());
        assert_eq!(lib.curve(1), &[4.0, 5.0, 6.0, 7.0]);
    }

    #[test]
    fn slice_with_partial_focal() {
        let s: Vec<f64> = (0..10).map(f64::from).collect();
        let (lib, focal) = slice_series(&s, &grid4()).unwrap();
        assert_eq!(lib.len(), 2);
        assert_eq!(focal.unwrap().observed(), &[8.0, 9.0]);
    }

    #[test]
    fn slice_rejects_bad_remainder() {
        let s = vec![0.0; 11];
        match slice_series(&s, &grid4()) {
            Err(Error::MalformedInput(msg)) => assert!(msg.contains("remainder of 3")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn distance_examples() {
        let o = [0, 1, 2, 3];
        assert_eq!(restricted_distance(&[1.0, 2.0], &[1.0, 2.0], &[0, 1]).unwrap(), 0.0);
        assert_eq!(restricted_distance(&[0.0; 4], &[1.0; 4], &o).unwrap(), 2.0);
        assert_eq!(restricted_distance(&[1.0, 2.0], &[4.0, 6.0], &[0, 1]).unwrap(), 5.0);
        assert!(restricted_distance(&[1.0], &[2.0], &[]).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_measure(&[true; 5]).unwrap(), 1.0);
        assert_eq!(lambda_measure(&[false; 5]).unwrap(), 0.0);
        let v = [true, false, false, true, false, false, true, false];
        assert_eq!(lambda_measure(&v).unwrap(), 0.375);
        assert!(lambda_measure(&[]).is_err());
    }

    #[test]
    fn hull_examples() {
        let c = vec![1.0, 2.0, 3.0];
        let h = pointwise_hull(std::slice::from_ref(&c), &[0, 1, 2]).unwrap();
        assert_eq!(h.lower, c);
        assert_eq!(h.upper, c);

        let consts = [vec![0.0; 3], vec![2.0; 3], vec![5.0; 3]];
        let h = pointwise_hull(&consts, &[0, 1, 2]).unwrap();
        assert_eq!(h.lower, vec![0.0; 3]);
        assert_eq!(h.upper, vec![5.0; 3]);

        // crossing curves on a 2-point grid
        let h = pointwise_hull(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[0, 1]).unwrap();
        assert_eq!(h.lower, vec![0.0, 0.0]);
        assert_eq!(h.upper, vec![1.0, 1.0]);

        let empty: [Vec<f64>; 0] = [];
        assert!(pointwise_hull(&empty, &[0]).is_err());
    }

    proptest! {
        #[test]
        fn slice_roundtrip(periods in 2usize..6, partial in any::<bool>(), seed in 0u64..1000) {
            let g = PeriodGrid::new(5, 1.0, 3).unwrap();
            let len = periods * 5 + if partial { 3 } else { 0 };
            let s: Vec<f64> = (0..len).map(|i| ((i as u64 * 2654435761 + seed) % 97) as f64 / 7.0).collect();
            let (lib, focal) = slice_series(&s, &g).unwrap();
            let mut back = lib.flatten();
            if let Some(f) = focal {
                back.extend_from_slice(f.observed());
            }
            prop_assert_eq!(back, s);
        }

        #[test]
        fn distance_triangle(a in prop::collection::vec(-1e3f64..1e3, 6),
                             b in prop::collection::vec(-1e3f64..1e3, 6),
                             c in prop::collection::vec(-1e3f64..1e3, 6)) {
            let idx = [0, 2, 3, 5];
            let ab = restricted_distance(&a, &b, &idx).unwrap();
            let bc = restricted_distance(&b, &c, &idx).unwrap();
            let ac = restricted_distance(&a, &c, &idx).unwrap();
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-9) + 1e-12);
            prop_assert_eq!(ab, restricted_distance(&b, &a, &idx).unwrap());
        }

        #[test]
        fn hull_brackets_members(curves in prop::collection::vec(prop::collection::vec(-50f64..50.0, 7), 1..6)) {
            let idx = [1, 2, 4, 6];
            let h = pointwise_hull(&curves, &idx).unwrap();
            for c in &curves {
                for (pos, &j) in idx.iter().enumerate() {
                    prop_assert!(h.lower[pos] <= c[j] && c[j] <= h.upper[pos]);
                }
            }
        }

        #[test]
        fn lambda_permutation_invariant(v in prop::collection::vec(any::<bool>(), 1..40), rot in 0usize..40) {
            let mut w = v.clone();
            let r = rot % w.len();
            w.rotate_left(r);
            w.reverse();
            prop_assert_eq!(lambda_measure(&v).unwrap(), lambda_measure(&w).unwrap());
        }
    }
}
