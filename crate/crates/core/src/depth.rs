//! Modified band depth with two-curve bands, restricted to an index set.
//!
//! Depths are kept as exact integer pair-cover counts so that comparisons
//! between curves, and percentile tests between different curve sets, are
//! free of rounding noise. The fast path sorts the values at each index and
//! counts covering pairs combinatorially; [`mbd_bruteforce`] enumerates the
//! pairs directly and serves as its oracle.

use crate::error::{contract, Result};

/// Depths of every curve in one evaluated set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    cover_counts: Vec<u64>,
    index_count: usize,
}

impl DepthReport {
    /// Number of curves in the evaluated set.
    pub fn set_size(&self) -> usize {
        self.cover_counts.len()
    }

    /// Number of grid indices the depth was measured over.
    pub fn index_count(&self) -> usize {
        self.index_count
    }

    /// Total (pair, index) combinations; the common denominator of every depth.
    pub fn denominator(&self) -> u64 {
        pairs(self.set_size() as u64) * self.index_count as u64
    }

    /// Exact numerator of curve `i`'s depth.
    pub fn cover_count(&self, i: usize) -> u64 {
        self.cover_counts[i]
    }

    pub fn cover_counts(&self) -> &[u64] {
        &self.cover_counts
    }

    pub fn depth(&self, i: usize) -> f64 {
        self.cover_counts[i] as f64 / self.denominator() as f64
    }

    pub fn depths(&self) -> Vec<f64> {
        (0..self.set_size()).map(|i| self.depth(i)).collect()
    }

    /// Curves with depth no greater than `target`'s, ties included.
    pub fn rank_at_or_below(&self, target: usize) -> usize {
        let d = self.cover_counts[target];
        self.cover_counts.iter().filter(|&&c| c <= d).count()
    }
}

fn pairs(s: u64) -> u64 {
    s * s.saturating_sub(1) / 2
}

fn check_args<C: AsRef<[f64]>>(curves: &[C], index_set: &[usize]) -> Result<()> {
    if curves.len() < 2 {
        return Err(contract(format!(
            "band depth needs at least 2 curves, got {}",
            curves.len()
        )));
    }
    if index_set.is_empty() {
        return Err(contract("band depth over an empty index set"));
    }
    Ok(())
}

/// Rank-based modified band depth, `O(|index_set| * s log s)` for `s` curves.
///
/// At each index a curve `y` is covered by every unordered pair except those
/// lying entirely strictly below or strictly above it, so with `b` curves
/// strictly below and `a` strictly above the cover count is
/// `C(s,2) - C(b,2) - C(a,2)`. Ties are covered in both directions.
pub fn mbd_restricted<C: AsRef<[f64]>>(curves: &[C], index_set: &[usize]) -> Result<DepthReport> {
    check_args(curves, index_set)?;
    let s = curves.len();
    let total = pairs(s as u64);
    let mut counts = vec![0u64; s];
    let mut column: Vec<(f64, usize)> = Vec::with_capacity(s);
    for &j in index_set {
        column.clear();
        column.extend(curves.iter().enumerate().map(|(i, c)| (c.as_ref()[j], i)));
        column.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut start = 0;
        while start < s {
            let v = column[start].0;
            let mut end = start + 1;
            while end < s && column[end].0 == v {
                end += 1;
            }
            let below = start as u64;
            let above = (s - end) as u64;
            let cover = total - pairs(below) - pairs(above);
            for &(_, i) in &column[start..end] {
                counts[i] += cover;
            }
            start = end;
        }
    }
    Ok(DepthReport {
        cover_counts: counts,
        index_count: index_set.len(),
    })
}

/// Direct pair enumeration, `O(s^2 * s * |index_set|)`. Used as an oracle.
pub fn mbd_bruteforce<C: AsRef<[f64]>>(curves: &[C], index_set: &[usize]) -> Result<DepthReport> {
    check_args(curves, index_set)?;
    let s = curves.len();
    let mut counts = vec![0u64; s];
    for (y, count) in counts.iter_mut().enumerate() {
        let yv = curves[y].as_ref();
        for x in 0..s {
            for z in (x + 1)..s {
                let (xv, zv) = (curves[x].as_ref(), curves[z].as_ref());
                *count += index_set
                    .iter()
                    .filter(|&&j| {
                        let lo = xv[j].min(zv[j]);
                        let hi = xv[j].max(zv[j]);
                        lo <= yv[j] && yv[j] <= hi
                    })
                    .count() as u64;
            }
        }
    }
    Ok(DepthReport {
        cover_counts: counts,
        index_count: index_set.len(),
    })
}

/// Share of the set whose depth is at most the target's depth.
pub fn depth_percentile(report: &DepthReport, target: usize) -> Result<f64> {
    if target >= report.set_size() {
        return Err(contract(format!(
            "target {target} outside a set of {}",
            report.set_size()
        )));
    }
    Ok(report.rank_at_or_below(target) as f64 / report.set_size() as f64)
}
