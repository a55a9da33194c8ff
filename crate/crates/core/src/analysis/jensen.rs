use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::AnalysisError;
use crate::numeric::{BigComplex, PrecisionContext};
use crate::slicer::{slice_components, SlicePlane};
use crate::tower::TowerModel;

/// Fewest trapezoid nodes on a circle.
pub const MIN_NODES: usize = 256;
/// Most trapezoid nodes on a circle.
pub const MAX_NODES: usize = 1 << 16;
/// Largest negative value of `T` still counted as subharmonic.
pub const SUBHARMONIC_SLACK: f64 = 1e-8;

/// A point `(z, w)` of `C^2`.
pub type Point2 = (Complex64, Complex64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAverage {
    /// `T_{zeta,r} u_n (p)`.
    pub value: f64,
    /// Difference between the last two trapezoid refinements, in units of `T`.
    pub error: f64,
    pub nodes: usize,
}

fn unit(zeta: Point2) -> Result<Point2, AnalysisError> {
    let norm = (zeta.0.norm_sqr() + zeta.1.norm_sqr()).sqrt();
    if !(norm > 0.0) || zeta.0.norm() * 100.0 > zeta.1.norm() {
        return Err(AnalysisError::InvalidArgument("direction must satisfy |zeta_1| <= |zeta_2| / 100".into()));
    }
    Ok((zeta.0 / norm, zeta.1 / norm))
}

fn u_at(t: &TowerModel, n: usize, z: Complex64, w: Complex64, prec: u32, ctx: &PrecisionContext, cap: u64) -> Result<f64, AnalysisError> {
    let z = BigComplex::from_c64(prec, z);
    let w = BigComplex::from_c64(prec, w);
    Ok(t.potentials(n, &z, &w, ctx, cap)?.u[n])
}

/// `T_{zeta,r} u_n (p) = r^-2 (mean of u_n over p + r zeta e^{i theta} - u_n(p))`
/// by the trapezoid rule, doubling from [`MIN_NODES`] until two refinements
/// agree to `tol` (in units of `T`).
pub fn circle_average_t(
    t: &TowerModel,
    n: usize,
    p: Point2,
    zeta: Point2,
    r: f64,
    tol: f64,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<CircleAverage, AnalysisError> {
    let zeta = unit(zeta)?;
    if !(r > 0.0) {
        return Err(AnalysisError::InvalidArgument("radius must be positive".into()));
    }
    if p.0.norm() + r * zeta.0.norm() >= 0.5 || p.1.norm() + r * zeta.1.norm() >= 1.0 {
        return Err(AnalysisError::DomainExit);
    }
    let prec = t.working_bits(n, ctx)?;
    let center = u_at(t, n, p.0, p.1, prec, ctx, cap)?;
    let node = |k: usize, nodes: usize| {
        let e = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / nodes as f64);
        u_at(t, n, p.0 + zeta.0 * e, p.1 + zeta.1 * e, prec, ctx, cap)
    };
    let eval = |idx: Vec<usize>, nodes: usize| -> Result<f64, AnalysisError> {
        let vals: Vec<f64> = idx.into_par_iter().map(|k| node(k, nodes)).collect::<Result<_, _>>()?;
        Ok(vals.iter().sum())
    };
    let mut nodes = MIN_NODES;
    let mut sum = eval((0..nodes).collect(), nodes)?;
    let mut value = (sum / nodes as f64 - center) / (r * r);
    loop {
        let finer = nodes * 2;
        sum += eval((1..finer).step_by(2).collect(), finer)?;
        let next = (sum / finer as f64 - center) / (r * r);
        let error = (next - value).abs();
        nodes = finer;
        value = next;
        if error <= tol || nodes >= MAX_NODES {
            return Ok(CircleAverage { value, error, nodes });
        }
    }
}

/// `T` computed two ways: trapezoid quadrature of `u_n`, and
/// `r^-2 int_0^r n(t)/t dt` with `n(t)` from the depth-`n` slice atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenPair {
    pub quadrature: CircleAverage,
    pub mass_integral: f64,
}

impl JensenPair {
    pub fn difference(&self) -> f64 {
        (self.quadrature.value - self.mass_integral).abs()
    }
}

/// Atoms of depth `n` on the complex line through `p` in direction `zeta`,
/// as `(w, conformal radius)` pairs, with the common weight.
fn line_atoms(
    t: &TowerModel,
    n: usize,
    p: Point2,
    zeta: Point2,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<(Vec<(Complex64, f64)>, f64), AnalysisError> {
    let gamma = -zeta.0 / zeta.1;
    let plane = SlicePlane::new(p.0 + gamma * p.1, gamma)?;
    let comps = slice_components(t, n, &plane, ctx, cap)?;
    let weight = 1.0 / (t.signature_count(n).to_f64() * (1u64 << n) as f64);
    Ok((comps.iter().map(|c| (c.center_c64(), c.conf_radius.to_f64())).collect(), weight))
}

/// Jensen mass integral: an atom at distance `d` with conformal radius
/// `rho` enters `n(t)` from `t = max(d, rho)` on.
fn mass_integral(atoms: &[(Complex64, f64)], weight: f64, center: Complex64, radius: f64) -> f64 {
    atoms
        .iter()
        .map(|&(c, rho)| {
            let t0 = (c - center).norm().max(rho);
            if t0 < radius {
                weight * (radius / t0).ln()
            } else {
                0.0
            }
        })
        .sum()
}

pub fn jensen_cross_check(
    t: &TowerModel,
    n: usize,
    p: Point2,
    zeta: Point2,
    r: f64,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<JensenPair, AnalysisError> {
    let zeta = unit(zeta)?;
    let quadrature = circle_average_t(t, n, p, zeta, r, 1e-10, ctx, cap)?;
    let (atoms, weight) = line_atoms(t, n, p, zeta, ctx, cap)?;
    let mass_integral = mass_integral(&atoms, weight, p.1, r * zeta.1.norm()) / (r * r);
    Ok(JensenPair { quadrature, mass_integral })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenRow {
    pub p: Point2,
    pub r: f64,
    pub pair: JensenPair,
}

/// Room left for the deviation of a component from the disk of its
/// conformal radius.
const SHAPE_ALLOWANCE: f64 = 1.25;

/// The circle `|w - p| = r` stays clear of the component at `c` of
/// conformal radius `rho`: it passes outside it, or lies inside it.
fn clear_of(c: Complex64, rho: f64, p: Complex64, r: f64) -> bool {
    let d = (c - p).norm();
    (d - r).abs() >= SHAPE_ALLOWANCE * rho + r / 20.0 || d + r <= rho / SHAPE_ALLOWANCE - r / 20.0
}

/// `count` sample pairs `(p, r)` on the vertical line `z = z0`. Half of the
/// centers are atoms; the others lie outside every component. The circles
/// stay clear of every component.
pub fn jensen_table(
    t: &TowerModel,
    n: usize,
    z0: f64,
    count: usize,
    seed: u64,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Vec<JensenRow>, AnalysisError> {
    let zeta = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    let (atoms, _) = line_atoms(t, n, (Complex64::new(z0, 0.0), Complex64::new(0.0, 0.0)), zeta, ctx, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    let mut attempts = 0;
    while samples.len() < count {
        attempts += 1;
        if attempts > 1_000_000 {
            return Err(AnalysisError::InvalidArgument("no admissible Jensen samples".into()));
        }
        let w = if samples.len() % 2 == 0 {
            atoms[rng.gen_range(0..atoms.len())].0
        } else {
            let w = Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            if atoms.iter().any(|&(c, rho)| (c - w).norm() < SHAPE_ALLOWANCE * rho) {
                continue;
            }
            w
        };
        let r: f64 = (rng.gen_range(0.01f64.ln()..0.6f64.ln())).exp();
        if w.norm() + r < 1.0 && atoms.iter().all(|&(c, rho)| clear_of(c, rho, w, r)) {
            samples.push((w, r));
        }
    }
    samples
        .into_iter()
        .map(|(w, r)| {
            let p = (Complex64::new(z0, 0.0), w);
            Ok(JensenRow { p, r, pair: jensen_cross_check(t, n, p, zeta, r, ctx, cap)? })
        })
        .collect()
}

/// Sups of `T_{zeta,r} u_n` over an interior grid and a boundary-band grid of
/// `D(0, 4/10) x D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorSup {
    pub interior: f64,
    pub band: f64,
    pub min_value: f64,
}

impl InteriorSup {
    pub fn holds(&self, tol: f64) -> bool {
        self.interior <= self.band + tol
    }
}

/// Outer radius in `z` of the domain used by [`interior_sup_check`].
pub const OMEGA_Z: f64 = 0.4;

/// Interior points have `dist(p, boundary) >= band`; band points have `|z|`
/// within `band` of `4/10` but more than `r` away from it. Each grid has
/// `grid^3` points (`z` real, `w` on a square).
pub fn interior_sup_check(
    t: &TowerModel,
    n: usize,
    zeta: Point2,
    r: f64,
    band: f64,
    grid: usize,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<InteriorSup, AnalysisError> {
    if r >= band {
        return Err(AnalysisError::DomainExit);
    }
    if !(band < OMEGA_Z) || grid < 2 {
        return Err(AnalysisError::InvalidArgument("band must lie below 4/10 and grid >= 2".into()));
    }
    let g = grid as f64;
    let half = (1.0 - band) / std::f64::consts::SQRT_2;
    let ws: Vec<Complex64> = (0..grid)
        .flat_map(|j| (0..grid).map(move |k| Complex64::new(half * (-1.0 + 2.0 * j as f64 / (g - 1.0)), half * (-1.0 + 2.0 * k as f64 / (g - 1.0)))))
        .collect();
    let interior_z: Vec<f64> = (0..grid).map(|i| (OMEGA_Z - band) * i as f64 / (g - 1.0)).collect();
    let band_z: Vec<f64> = (0..grid).map(|i| OMEGA_Z - band + (band - r) * (i as f64 + 0.5) / g).collect();
    let sweep = |zs: &[f64]| -> Result<(f64, f64), AnalysisError> {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for &z in zs {
            for &w in &ws {
                let v = circle_average_t(t, n, (Complex64::new(z, 0.0), w), zeta, r, 1e-8, ctx, cap)?.value;
                hi = hi.max(v);
                lo = lo.min(v);
            }
        }
        Ok((hi, lo))
    };
    let (interior, lo_i) = sweep(&interior_z)?;
    let (band, lo_b) = sweep(&band_z)?;
    Ok(InteriorSup { interior, band, min_value: lo_i.min(lo_b) })
}
