use num_complex::Complex64;

use super::SlicerError;

/// Number of continuation steps around the circle.
const STEPS: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingStep {
    pub angle: f64,
    pub zeta: Complex64,
    /// Tracked root of `z^2 = eps zeta`, the center of one component.
    pub tracked: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WindingOutcome {
    /// The two components of `{|z^2 - eps zeta| < delta}` are exchanged after
    /// one loop of `zeta` around `|zeta| = r`.
    Obstructed {
        log: Vec<WindingStep>,
        swapped: bool,
        /// `eps r - delta`: distance of the critical value `-eps zeta` from `D(0, delta)`.
        separation_margin: f64,
    },
    /// `f = 0` satisfies `|f^2 - eps zeta| <= eps r < delta` on the disk.
    Selection { witness: f64, residual: f64 },
}

/// Probe whether `z^2 - eps zeta` admits a continuous selection `f` with
/// `|f(zeta)^2 - eps zeta| < delta` on `D(0, r)`.
pub fn winding_probe(eps: f64, r: f64, delta: f64) -> Result<WindingOutcome, SlicerError> {
    if !(eps > 0.0 && r > 0.0 && delta > 0.0) {
        return Err(SlicerError::InvalidArgument("eps, r, delta must be positive".into()));
    }
    let bound = eps * r;
    if delta == bound {
        return Err(SlicerError::Inconclusive);
    }
    if delta > bound {
        return Ok(WindingOutcome::Selection { witness: 0.0, residual: bound });
    }
    let start = Complex64::new(bound.sqrt(), 0.0);
    let mut tracked = start;
    let mut log = Vec::with_capacity(STEPS + 1);
    log.push(WindingStep { angle: 0.0, zeta: Complex64::new(r, 0.0), tracked });
    for k in 1..=STEPS {
        let angle = std::f64::consts::TAU * k as f64 / STEPS as f64;
        let zeta = Complex64::from_polar(r, angle);
        let root = (eps * zeta).sqrt();
        // continue along the root closest to the previous position
        tracked = if (root - tracked).norm() <= (-root - tracked).norm() { root } else { -root };
        log.push(WindingStep { angle, zeta, tracked });
    }
    let swapped = (tracked + start).norm() < (tracked - start).norm();
    Ok(WindingOutcome::Obstructed { log, swapped, separation_margin: bound - delta })
}
