//! Focal-curve envelope: past curves gathered from the focal curve outwards
//! so that the focal curve is covered on the observed segment and stays deep
//! among the selected curves.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curves::{restricted_distance, CurveLibrary, FocalCurve};
use crate::depth::{mbd_restricted, DepthReport};
use crate::error::{contract, Error, Result};

/// One pass of the outer selection loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    /// Library indices proposed in this pass, in scan order.
    pub batch: Vec<usize>,
    /// Proportion of the envelopable set covered by the batch alone.
    pub lambda: f64,
    /// Focal percentile before the batch; absent on the first pass.
    pub p0: Option<f64>,
    /// Focal percentile with the batch added.
    pub p1: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    /// Library indices in order of acceptance.
    pub members: Vec<usize>,
    /// Depth of each member in the final envelope plus focal, over the observed segment.
    pub member_depths: Vec<f64>,
    /// Exact numerators of `member_depths`; they share one denominator.
    pub member_cover_counts: Vec<u64>,
    /// Distance of each member to the focal curve on the observed segment.
    pub member_distances: Vec<f64>,
    pub focal_depth: f64,
    pub focal_percentile: f64,
    /// Observed indices at which the whole library envelopes the focal curve.
    pub envelopable: Vec<usize>,
    pub iterations: Vec<IterationRecord>,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Line-oriented audit trail of the selection loop.
    pub fn audit_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# members={} envelopable={} focal_depth={} focal_percentile={}",
            self.members.len(),
            self.envelopable.len(),
            self.focal_depth,
            self.focal_percentile
        );
        for (i, it) in self.iterations.iter().enumerate() {
            let batch: Vec<String> = it.batch.iter().map(|b| b.to_string()).collect();
            let p0 = it.p0.map_or_else(|| "NA".to_string(), |p| p.to_string());
            let _ = writeln!(
                out,
                "iteration={} batch=[{}] lambda={} p0={} p1={} accepted={}",
                i + 1,
                batch.join(","),
                it.lambda,
                p0,
                it.p1,
                it.accepted
            );
        }
        out
    }
}

/// Observed indices where `min(library) <= focal <= max(library)`.
pub fn envelopable_set(library: &CurveLibrary, focal: &FocalCurve) -> Result<Vec<usize>> {
    let cut = library.grid().cut_index();
    if focal.observed().len() != cut {
        return Err(Error::MalformedInput(format!(
            "focal has {} observed values, grid cut index is {cut}",
            focal.observed().len()
        )));
    }
    let y = focal.observed();
    let set: Vec<usize> = (0..cut)
        .filter(|&j| {
            let (lo, hi) = library.curves().iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), c| (lo.min(c.values()[j]), hi.max(c.values()[j])),
            );
            lo <= y[j] && y[j] <= hi
        })
        .collect();
    if set.is_empty() {
        return Err(Error::FocalOutsideRange);
    }
    Ok(set)
}

/// Library indices ordered by ascending observed-segment distance to the
/// focal curve; equal distances put the more recent curve first.
pub fn nearest_order(library: &CurveLibrary, focal: &FocalCurve) -> Result<(Vec<usize>, Vec<f64>)> {
    let observed: Vec<usize> = library.grid().observed_indices();
    let distances = library
        .curves()
        .iter()
        .map(|c| restricted_distance(c.values(), focal.observed(), &observed))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..library.len()).collect();
    order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]).then(b.cmp(&a)));
    Ok((order, distances))
}

/// Running pointwise band over the envelopable set.
struct CoverState<'a> {
    focal: &'a [f64],
    index_set: &'a [usize],
    lower: Vec<f64>,
    upper: Vec<f64>,
    covered: usize,
}

impl<'a> CoverState<'a> {
    fn new(first: &[f64], focal: &'a [f64], index_set: &'a [usize]) -> Self {
        let lower: Vec<f64> = index_set.iter().map(|&j| first[j]).collect();
        let upper = lower.clone();
        let covered = index_set
            .iter()
            .enumerate()
            .filter(|&(p, &j)| lower[p] <= focal[j] && focal[j] <= upper[p])
            .count();
        Self {
            focal,
            index_set,
            lower,
            upper,
            covered,
        }
    }

    fn covered_with(&self, c: &[f64]) -> usize {
        self.index_set
            .iter()
            .enumerate()
            .filter(|&(p, &j)| {
                let y = self.focal[j];
                self.lower[p].min(c[j]) <= y && y <= self.upper[p].max(c[j])
            })
            .count()
    }

    fn absorb(&mut self, c: &[f64], covered: usize) {
        for (p, &j) in self.index_set.iter().enumerate() {
            self.lower[p] = self.lower[p].min(c[j]);
            self.upper[p] = self.upper[p].max(c[j]);
        }
        self.covered = covered;
    }

    fn lambda(&self) -> f64 {
        self.covered as f64 / self.index_set.len() as f64
    }
}

/// One inner scan: start from the nearest candidate and add each following
/// candidate, in order, only if it strictly increases the covered
/// proportion of the focal curve on `envelopable`.
pub fn greedy_cover_batch(
    library: &CurveLibrary,
    candidates: &[usize],
    focal: &FocalCurve,
    envelopable: &[usize],
) -> Result<(Vec<usize>, f64)> {
    let (&first, rest) = candidates
        .split_first()
        .ok_or_else(|| contract("greedy cover over an empty candidate list"))?;
    if envelopable.is_empty() {
        return Err(contract("greedy cover over an empty envelopable set"));
    }
    let mut state = CoverState::new(library.curve(first), focal.observed(), envelopable);
    let mut batch = vec![first];
    for &c in rest {
        if state.covered == envelopable.len() {
            break;
        }
        let covered = state.covered_with(library.curve(c));
        if covered > state.covered {
            state.absorb(library.curve(c), covered);
            batch.push(c);
        }
    }
    Ok((batch, state.lambda()))
}

/// Focal percentile (at index 0 of the evaluated set) as an exact ratio.
#[derive(Debug, Clone, Copy)]
struct Percentile {
    rank: usize,
    size: usize,
}

impl Percentile {
    fn of_focal(report: &DepthReport) -> Self {
        Self {
            rank: report.rank_at_or_below(0),
            size: report.set_size(),
        }
    }

    fn value(self) -> f64 {
        self.rank as f64 / self.size as f64
    }

    fn at_least(self, other: Percentile) -> bool {
        (self.rank as u128) * (other.size as u128) >= (other.rank as u128) * (self.size as u128)
    }
}

fn focal_plus<'a>(library: &'a CurveLibrary, focal: &'a FocalCurve, members: &[usize]) -> Vec<&'a [f64]> {
    std::iter::once(focal.observed())
        .chain(members.iter().map(|&i| library.curve(i)))
        .collect()
}

/// Builds the focal-curve envelope.
///
/// The first batch is taken unconditionally. Each later batch is kept when
/// the focal percentile among envelope plus focal does not drop, otherwise
/// its curves are set aside for good. The loop stops once fewer than two
/// curves remain unexamined.
pub fn build_envelope(library: &CurveLibrary, focal: &FocalCurve) -> Result<Envelope> {
    let envelopable = envelopable_set(library, focal)?;
    let observed = library.grid().observed_indices();
    let (order, distances) = nearest_order(library, focal)?;

    let mut pending = vec![true; library.len()];
    let mut remaining = library.len();
    let mut members: Vec<usize> = Vec::new();
    let mut current: Option<Percentile> = None;
    let mut iterations = Vec::new();

    while remaining >= 2 {
        let candidates: Vec<usize> = order.iter().copied().filter(|&i| pending[i]).collect();
        let (batch, lambda) = greedy_cover_batch(library, &candidates, focal, &envelopable)?;

        let mut trial = members.clone();
        trial.extend_from_slice(&batch);
        let report = mbd_restricted(&focal_plus(library, focal, &trial), &observed)?;
        let p1 = Percentile::of_focal(&report);
        let accepted = current.is_none_or(|p0| p1.at_least(p0));

        iterations.push(IterationRecord {
            batch: batch.clone(),
            lambda,
            p0: current.map(Percentile::value),
            p1: p1.value(),
            accepted,
        });
        for &i in &batch {
            pending[i] = false;
        }
        remaining -= batch.len();
        if accepted {
            members = trial;
            current = Some(p1);
        }
    }

    if members.is_empty() {
        // a single-curve library never enters the loop
        return Err(contract("envelope construction needs at least 2 library curves"));
    }

    let report = mbd_restricted(&focal_plus(library, focal, &members), &observed)?;
    let member_cover_counts = report.cover_counts()[1..].to_vec();
    let member_depths = (1..report.set_size()).map(|i| report.depth(i)).collect();
    let member_distances = members.iter().map(|&i| distances[i]).collect();
    Ok(Envelope {
        member_depths,
        member_cover_counts,
        member_distances,
        focal_depth: report.depth(0),
        focal_percentile: Percentile::of_focal(&report).value(),
        members,
        envelopable,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Curve, PeriodGrid};

    fn const_library(vals: &[f64]) -> CurveLibrary {
        let grid = PeriodGrid::new(4, 1.0, 2).unwrap();
        let curves = vals.iter().map(|&v| Curve::new(vec![v; 4]).unwrap()).collect();
        CurveLibrary::new(grid, curves).unwrap()
    }

    fn focal(v: f64) -> FocalCurve {
        FocalCurve::new(vec![v; 2]).unwrap()
    }

    #[test]
    fn envelopable_examples() {
        let lib = const_library(&[0.5, 2.0, 5.0, -3.0]);
        assert_eq!(envelopable_set(&lib, &focal(1.0)).unwrap(), vec![0, 1]);
        assert!(matches!(envelopable_set(&lib, &focal(10.0)), Err(Error::FocalOutsideRange)));
        assert_eq!(envelopable_set(&lib, &focal(5.0)).unwrap(), vec![0, 1]);
    }

    #[test]
    fn greedy_batch_on_constants() {
        let lib = const_library(&[0.5, 2.0, 5.0, -3.0]);
        let f = focal(1.0);
        let (order, _) = nearest_order(&lib, &f).unwrap();
        assert_eq!(order, vec![0, 1, 3, 2]);
        let (batch, lambda) = greedy_cover_batch(&lib, &order, &f, &[0, 1]).unwrap();
        assert_eq!(batch, vec![0, 1]);
        assert_eq!(lambda, 1.0);
    }

    #[test]
    fn greedy_single_candidate() {
        let lib = const_library(&[0.5, 2.0]);
        let (batch, lambda) = greedy_cover_batch(&lib, &[1], &focal(1.0), &[0, 1]).unwrap();
        assert_eq!(batch, vec![1]);
        assert_eq!(lambda, 0.0);
        let (batch, lambda) = greedy_cover_batch(&lib, &[1], &focal(2.0), &[0, 1]).unwrap();
        assert_eq!(batch, vec![1]);
        assert_eq!(lambda, 1.0);
    }

    #[test]
    fn greedy_identical_to_focal() {
        let lib = const_library(&[1.0, 1.0, 1.0]);
        let (batch, lambda) = greedy_cover_batch(&lib, &[2, 1, 0], &focal(1.0), &[0, 1]).unwrap();
        assert_eq!(batch, vec![2]);
        assert_eq!(lambda, 1.0);
    }

    #[test]
    fn full_trace_on_constants() {
        let lib = const_library(&[0.5, 2.0, 5.0, -3.0]);
        let env = build_envelope(&lib, &focal(1.0)).unwrap();
        assert_eq!(env.iterations.len(), 2);
        assert_eq!(env.iterations[0].batch, vec![0, 1]);
        assert!(env.iterations[0].accepted);
        assert_eq!(env.iterations[1].batch, vec![3, 2]);
        assert_eq!(env.iterations[1].p0, Some(1.0));
        assert_eq!(env.iterations[1].p1, 1.0);
        assert!(env.iterations[1].accepted);
        assert_eq!(env.members, vec![0, 1, 3, 2]);
        assert!((env.focal_depth - 0.8).abs() < 1e-15);
        let want = [0.7, 0.7, 0.4, 0.4];
        for (d, w) in env.member_depths.iter().zip(want) {
            assert!((d - w).abs() < 1e-15);
        }
        assert_eq!(env.focal_percentile, 1.0);
        assert!(env.audit_report().contains("iteration=2 batch=[3,2]"));
    }

    #[test]
    fn two_curve_library() {
        let lib = const_library(&[0.0, 2.0]);
        let env = build_envelope(&lib, &focal(1.0)).unwrap();
        assert_eq!(env.iterations.len(), 1);
        assert_eq!(env.members, vec![1, 0]);
    }

    #[test]
    fn later_batches_rejected_when_one_sided() {
        // first batch leaves curve 0 just above the focal at every index, so
        // any curve far above pushes curve 0 ahead of the focal in depth
        let grid = PeriodGrid::new(4, 1.0, 2).unwrap();
        let rows = [
            [1.0, 1.0, 0.0, 0.0],
            [-1.0, 2.0, 0.0, 0.0],
            [2.0, -1.0, 0.0, 0.0],
            [10.0, 10.0, 0.0, 0.0],
            [11.0, 11.0, 0.0, 0.0],
            [12.0, 12.0, 0.0, 0.0],
        ];
        let curves = rows.iter().map(|r| Curve::new(r.to_vec()).unwrap()).collect();
        let lib = CurveLibrary::new(grid, curves).unwrap();
        let env = build_envelope(&lib, &focal(0.0)).unwrap();
        assert_eq!(env.iterations[0].batch, vec![0, 2, 1]);
        assert_eq!(env.members, vec![0, 2, 1]);
        assert_eq!(env.iterations.len(), 3);
        for it in &env.iterations[1..] {
            assert!(!it.accepted);
            assert_eq!(it.p1, 0.8);
        }
        assert_eq!(env.focal_percentile, 1.0);
    }

    #[test]
    fn focal_outside_errors() {
        let lib = const_library(&[0.0, 2.0]);
        assert!(matches!(build_envelope(&lib, &focal(3.0)), Err(Error::FocalOutsideRange)));
    }
}
