//! Gaps left on the circle by the first `N` multiples of an angle.

use std::f64::consts::TAU;

/// Gaps closer than this are counted as one length.
pub const GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub theta: f64,
    pub n: usize,
    pub max_gap: f64,
    /// Distinct gap lengths, ascending.
    pub gaps: Vec<f64>,
}

/// Sorts `{k theta mod 2pi : k < n}` and measures the circular gaps between neighbours.
pub fn density_sweep(theta: f64, n: usize) -> DensityReport {
    assert!(n >= 2, "need at least two points");
    let mut pts: Vec<f64> = (0..n).map(|k| (k as f64 * theta).rem_euclid(TAU)).collect();
    pts.sort_by(f64::total_cmp);
    let mut all: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    all.push(pts[0] + TAU - pts[n - 1]);
    all.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = Vec::new();
    for g in all {
        match gaps.last() {
            Some(&last) if g - last < GAP_TOL => {}
            _ => gaps.push(g),
        }
    }
    let max_gap = *gaps.last().unwrap();
    DensityReport { theta, n, max_gap, gaps }
}
