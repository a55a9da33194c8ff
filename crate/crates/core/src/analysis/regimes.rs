use num_complex::Complex64;
use rug::Rational;

use super::AnalysisError;
use crate::numeric::PrecisionContext;
use crate::slicer::{slice_components, ComponentRecord, Regime, SliceMeasure, SlicePlane};
use crate::tower::TowerModel;

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSample {
    pub p: Complex64,
    pub r: f64,
    pub mass: Rational,
    pub regime: Regime,
    /// Smallest `C` for which this sample satisfies its regime bound.
    pub c_needed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoRegimeReport {
    pub n: usize,
    /// Smallest conformal radius at depth `n + 1`.
    pub rad_next_min: f64,
    /// Largest intermediate radius, `max rad_n / m_{n+1}`.
    pub rad_int_max: f64,
    /// Smallest conformal radius at depth `n`.
    pub rad_min: f64,
    pub samples: Vec<RegimeSample>,
    /// Smallest `C` with `mu(B(p, r)) <= C^n / M_{n+1}^2` on every plateau sample.
    pub plateau_c: f64,
    /// Smallest `C` with `mu(B(p, r)) <= C^n r^2 / R_n^2` on every quadratic sample.
    pub quadratic_c: f64,
}

impl TwoRegimeReport {
    pub fn holds(&self, c: f64) -> bool {
        self.plateau_c <= c && self.quadratic_c <= c
    }
}

fn radius_range(comps: &[ComponentRecord]) -> (f64, f64) {
    comps.iter().map(|c| c.conf_radius.to_f64()).fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

/// Classify `(p, r)` samples into the plateau and quadratic regimes and fit
/// the constants. Centers are every depth-`n` and depth-`(n+1)` atom; radii
/// are `radii_count` log-spaced values spanning `[rad_{n+1}, rad_n]`. Masses
/// use the depth-`(n+1)` atoms.
pub fn two_regime_check(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    radii_count: usize,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<TwoRegimeReport, AnalysisError> {
    if n + 1 > t.depth() {
        return Err(AnalysisError::InvalidArgument(format!("two regimes at n = {n} need depth {}", n + 1)));
    }
    if radii_count < 2 {
        return Err(AnalysisError::InvalidArgument("need at least two radii".into()));
    }
    let here = slice_components(t, n, plane, ctx, cap)?;
    let next = slice_components(t, n + 1, plane, ctx, cap)?;
    let (rad_min, rad_max) = radius_range(&here);
    let (rad_next_min, rad_next_max) = radius_range(&next);
    let rad_int_max = rad_max / t.m(n + 1) as f64;
    if !(rad_next_max <= rad_int_max && rad_int_max < rad_min && rad_next_min <= rad_int_max) {
        return Err(AnalysisError::ScaleOverlap { n, rad_next: rad_next_max, rad_int: rad_int_max, rad: rad_min });
    }
    let measure = SliceMeasure::from_components(t, n + 1, &next);
    let big_m_next = t.schedule().log_big_m(n + 1).mid_f64().exp();
    let big_r = t.schedule().log_big_r(n).mid_f64().exp();
    let (lo, hi) = (rad_next_min.ln(), rad_min.ln());
    let radii: Vec<f64> = (0..radii_count).map(|i| (lo + (hi - lo) * i as f64 / (radii_count - 1) as f64).exp()).collect();
    let centers: Vec<Complex64> = here.iter().chain(&next).map(|c| c.center_c64()).collect();
    let root = |x: f64| if n == 0 { if x <= 1.0 { 0.0 } else { f64::INFINITY } } else { x.powf(1.0 / n as f64) };
    let mut samples = Vec::new();
    let (mut plateau_c, mut quadratic_c) = (0.0f64, 0.0f64);
    for &p in &centers {
        for &r in &radii {
            let mass = measure.ball_mass(p, r);
            let m = mass.to_f64();
            let (regime, c_needed) = if r <= rad_int_max {
                (Regime::Plateau, root(m * big_m_next * big_m_next))
            } else {
                (Regime::Quadratic, root(m * big_r * big_r / (r * r)))
            };
            match regime {
                Regime::Plateau => plateau_c = plateau_c.max(c_needed),
                Regime::Quadratic => quadratic_c = quadratic_c.max(c_needed),
            }
            samples.push(RegimeSample { p, r, mass, regime, c_needed });
        }
    }
    Ok(TwoRegimeReport { n, rad_next_min, rad_int_max, rad_min, samples, plateau_c, quadratic_c })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub depth: usize,
    /// `2^n #S_n`.
    pub count: f64,
    /// Median conformal radius.
    pub radius: f64,
    /// `log(count) / log(1 / radius)`.
    pub estimate: f64,
}

/// Box-counting estimate from covering the slice by `2^n #S_n` balls of
/// the median component radius.
pub fn box_dimension_slice(
    t: &TowerModel,
    plane: &SlicePlane,
    depths: &[usize],
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Vec<DimensionEstimate>, AnalysisError> {
    depths
        .iter()
        .map(|&n| {
            let comps = slice_components(t, n, plane, ctx, cap)?;
            let mut radii: Vec<f64> = comps.iter().map(|c| c.conf_radius.to_f64()).collect();
            radii.sort_by(f64::total_cmp);
            let radius = radii[radii.len() / 2];
            let count = comps.len() as f64;
            Ok(DimensionEstimate { depth: n, count, radius, estimate: count.ln() / (1.0 / radius).ln() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints, Radius};
    use crate::tower::AnchorSequence;

    fn tower(ms: &[u64]) -> TowerModel {
        let s = build_schedule(&constant_radii(ms.len()), &ints(ms), ms.len()).unwrap();
        TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap()
    }

    #[test]
    fn plateau_masses_are_twentieths() {
        let t = tower(&[1, 4]);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let rep = two_regime_check(&t, 1, &SlicePlane::vertical(0.4), 12, &ctx, 100).unwrap();
        let twentieth = Rational::from((1, 20));
        let plateau: Vec<_> = rep.samples.iter().filter(|s| s.regime == Regime::Plateau).collect();
        assert!(!plateau.is_empty());
        for s in plateau {
            assert!(Rational::from(&s.mass / &twentieth).is_integer());
        }
        assert!(rep.rad_next_min <= rep.rad_int_max && rep.rad_int_max < rep.rad_min);
    }

    #[test]
    fn dimension_counts() {
        let t = tower(&[1, 1, 1]);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let est = box_dimension_slice(&t, &SlicePlane::vertical(0.4), &[0, 1, 2, 3], &ctx, 100).unwrap();
        assert_eq!(est[0].estimate, 0.0);
        assert_eq!(est.iter().map(|e| e.count).collect::<Vec<_>>(), vec![1.0, 2.0, 4.0, 8.0]);
        // radii shrink like 40^-n, so the estimates climb towards ln 2 / ln 40
        let limit = 2f64.ln() / 40f64.ln();
        assert!(est.windows(2).all(|w| w[0].estimate < w[1].estimate && w[1].estimate < limit));
    }

    #[test]
    fn dimension_vanishes_for_fast_radii() {
        let radii: Vec<Radius> = [10u32, 100, 10_000].iter().map(|&d| Radius::Exact(Rational::from((1, d)))).collect();
        let s = build_schedule(&radii, &ints(&[1, 1, 1]), 3).unwrap();
        let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let est = box_dimension_slice(&t, &SlicePlane::vertical(0.4), &[1, 2, 3], &ctx, 100).unwrap();
        assert!(est.windows(2).all(|w| w[1].estimate < w[0].estimate), "{est:?}");
        assert!(est[2].estimate < 0.11);
    }
}
