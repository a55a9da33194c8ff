use num_complex::Complex64;
use rayon::prelude::*;

use super::AnalysisError;
use crate::numeric::{BigComplex, PrecisionContext};
use crate::slicer::SlicePlane;
use crate::tower::{Potentials, TowerModel};

/// Largest admissible ratio between successive gaps.
pub const DECAY_RATIO: f64 = 0.75;

/// Pixel centers of a `grid x grid` lattice on `w in [-1, 1]^2`, row by row
/// from the top.
pub fn slice_grid(grid: usize) -> Vec<Complex64> {
    let g = grid as f64;
    (0..grid)
        .flat_map(|j| {
            (0..grid).map(move |i| Complex64::new(-1.0 + (2 * i + 1) as f64 / g, 1.0 - (2 * j + 1) as f64 / g))
        })
        .collect()
}

fn grid_potentials(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    points: &[Complex64],
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Vec<Potentials>, AnalysisError> {
    let prec = t.working_bits(n, ctx)?;
    points
        .par_iter()
        .map(|&w| {
            let w = BigComplex::from_c64(prec, w);
            let z = plane.z_of(&w);
            Ok(t.potentials(n, &z, &w, ctx, cap)?)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Grid sup of `|u_{n+1} - u_n|`; a lower bound for the true sup.
    pub gap_u: f64,
    /// Grid sup of `|v_{n+1} - u_n|`.
    pub gap_v: f64,
    /// `|log r_{n+1}| / 2^n`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Smallest `B` with `gap_u(n) <= (|log r_{n+1}| + B) / 2^n` for every row.
    pub fitted_b: f64,
}

impl ConvergenceReport {
    /// `gap(n+1) / gap(n)` for consecutive rows, starting at `n = 1`.
    pub fn ratios(&self) -> Vec<(usize, f64)> {
        self.rows.windows(2).filter(|w| w[0].n >= 1).map(|w| (w[1].n, w[1].gap_u / w[0].gap_u)).collect()
    }

    pub fn gap_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.gap_u).sum()
    }

    /// Every row within `(|log r_{n+1}| + b) / 2^n` and every ratio within [`DECAY_RATIO`].
    pub fn holds(&self, b: f64) -> bool {
        self.rows.iter().all(|r| r.gap_u <= (r.bound * (1u64 << r.n) as f64 + b) / (1u64 << r.n) as f64)
            && self.ratios().iter().all(|(_, q)| *q <= DECAY_RATIO)
    }
}

/// Grid sups of `|u_{n+1} - u_n|` and `|v_{n+1} - u_n|` for `n = 0..=n_max`.
pub fn convergence_report(
    t: &TowerModel,
    n_max: usize,
    plane: &SlicePlane,
    grid: usize,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<ConvergenceReport, AnalysisError> {
    if t.depth() == 0 {
        return Ok(ConvergenceReport { rows: Vec::new(), fitted_b: 0.0 });
    }
    if n_max >= t.depth() {
        return Err(AnalysisError::InvalidArgument(format!("n_max {n_max} needs depth {}", n_max + 1)));
    }
    let pots = grid_potentials(t, n_max + 1, plane, &slice_grid(grid), ctx, cap)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut fitted_b = f64::NEG_INFINITY;
    for n in 0..=n_max {
        let gap_u = pots.iter().map(|p| (p.u[n + 1] - p.u[n]).abs()).fold(0.0, f64::max);
        let gap_v = pots.iter().map(|p| (p.v[n] - p.u[n]).abs()).fold(0.0, f64::max);
        let log_r = t.schedule().log_r(n + 1).mid_f64().abs();
        let scale = (1u64 << n) as f64;
        fitted_b = fitted_b.max(gap_u * scale - log_r);
        rows.push(ConvergenceRow { n, gap_u, gap_v, bound: log_r / scale });
    }
    Ok(ConvergenceReport { rows, fitted_b })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicGap {
    pub n: usize,
    /// Largest `|1/2 u_{n+1,s'} - v_{n+1,s'}|` over the grid and signatures.
    pub max_gap: f64,
    /// `|log r_{n+1}| + log 2`.
    pub bound: f64,
    /// Grid point attaining the maximum.
    pub argmax: Complex64,
}

impl HarmonicGap {
    pub fn holds(&self) -> bool {
        self.max_gap <= self.bound
    }
}

pub fn harmonic_gap_check(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    grid: usize,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<HarmonicGap, AnalysisError> {
    harmonic_gap_at(t, n, plane, &slice_grid(grid), ctx, cap)
}

/// [`harmonic_gap_check`] over explicit slice points.
pub fn harmonic_gap_at(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    points: &[Complex64],
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<HarmonicGap, AnalysisError> {
    if n >= t.depth() {
        return Err(AnalysisError::InvalidArgument(format!("harmonic gap at n = {n} needs depth {}", n + 1)));
    }
    let pots = grid_potentials(t, n + 1, plane, points, ctx, cap)?;
    let bound = t.schedule().log_r(n + 1).mid_f64().abs() + std::f64::consts::LN_2;
    let mut out = HarmonicGap { n, max_gap: 0.0, bound, argmax: points[0] };
    for (p, w) in pots.iter().zip(points) {
        if p.gap[n] > out.max_gap {
            out.max_gap = p.gap[n];
            out.argmax = *w;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints};
    use crate::tower::AnchorSequence;

    fn tower(ms: &[u64]) -> TowerModel {
        let s = build_schedule(&constant_radii(ms.len()), &ints(ms), ms.len()).unwrap();
        TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = slice_grid(2);
        assert_eq!(g, vec![Complex64::new(-0.5, 0.5), Complex64::new(0.5, 0.5), Complex64::new(-0.5, -0.5), Complex64::new(0.5, -0.5)]);
    }

    #[test]
    fn harmonic_gap_hand_values() {
        let t = tower(&[1]);
        let plane = SlicePlane::vertical(0.4);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let root = Complex64::new(0.05f64.sqrt(), 0.0);
        let inside = harmonic_gap_at(&t, 0, &plane, &[root], &ctx, 100).unwrap();
        let expect = (0.5 * (1.0f64 / 160.0).ln() - 0.5f64.ln()).abs();
        assert!((inside.max_gap - expect).abs() < 1e-12, "{inside:?}");
        let far = harmonic_gap_at(&t, 0, &plane, &[Complex64::new(0.9, 0.0)], &ctx, 100).unwrap();
        let direct = 0.5 * (1.0 - 0.125 * 0.4 / 0.81f64).ln().abs();
        assert!((far.max_gap - direct).abs() < 1e-12);
        assert!(far.max_gap <= 0.5 * std::f64::consts::LN_2);
        let grid = harmonic_gap_check(&t, 0, &plane, 50, &ctx, 100).unwrap();
        assert!(grid.holds(), "{grid:?}");
    }

    #[test]
    fn convergence_depth_zero_and_one() {
        let t0 = TowerModel::new(build_schedule(&[], &[], 0).unwrap(), AnchorSequence::new(0), 4096).unwrap();
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let plane = SlicePlane::vertical(0.4);
        assert!(convergence_report(&t0, 0, &plane, 4, &ctx, 10).unwrap().rows.is_empty());
        let rep = convergence_report(&tower(&[1]), 0, &plane, 20, &ctx, 10).unwrap();
        assert!(rep.rows[0].gap_u <= 10f64.ln() + 3.0, "{rep:?}");
    }
}
