//! Geometry of the tower on vertical slices `{z + gamma w = z0}`.

mod components;
mod nesting;
mod polynomial;
mod render;
mod roots;
mod winding;

pub use components::{
    mass_profile, measure_stability, slice_components, slice_measure, xns_bracket_check, ComponentRecord, MassProfile, Regime, SliceMeasure,
    XnsReport,
};
pub use nesting::{nesting_certificate, NestingCertificate, NestingEntry, DEFAULT_ALLOWANCE};
pub use polynomial::{slice_polynomial, ComplexRational};
pub use render::{render_escape, Raster, UNKNOWN_PIXEL};
pub use roots::{slice_roots, CertifiedRoot, SliceRootSet};
pub use winding::{winding_probe, WindingOutcome, WindingStep};

use num_complex::Complex64;
use rug::Rational;
use thiserror::Error;

use crate::numeric::{rational_from_f64, NumericError, TowerScalar};
use crate::tower::TowerError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SlicerError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("|alpha| = {alpha_abs} is not below 2 delta_{n} = {bound}")]
    RangeError { n: usize, alpha_abs: f64, bound: f64 },
    #[error("certification failed for signature {signature}: {detail}")]
    CertificationFailure { signature: String, detail: String },
    #[error("plane outside the boundary regime: {0}")]
    PlaneOutsideRegime(String),
    #[error("inconclusive: delta equals eps * r")]
    Inconclusive,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// The line `{(z0 - gamma w, w)}`, i.e. the fibre `pi^{-1}(z0)` of `pi(z, w) = z + gamma w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicePlane {
    z0: (Rational, Rational),
    gamma: (Rational, Rational),
}

/// Admissible `|z0|` range for boundary-regime operations.
pub const Z0_MIN: f64 = 0.385;
pub const Z0_MAX: f64 = 0.495;

impl SlicePlane {
    /// Plane with exact coordinates taken from the `f64` inputs.
    pub fn new(z0: Complex64, gamma: Complex64) -> Result<Self, SlicerError> {
        let p = Self {
            z0: (rational_from_f64(z0.re), rational_from_f64(z0.im)),
            gamma: (rational_from_f64(gamma.re), rational_from_f64(gamma.im)),
        };
        let g2 = Rational::from(p.gamma.0.square_ref()) + Rational::from(p.gamma.1.square_ref());
        if g2 > Rational::from((1, 10_000)) {
            return Err(SlicerError::InvalidArgument(format!("|gamma| = {} exceeds 1/100", gamma.norm())));
        }
        Ok(p)
    }

    pub fn vertical(z0: f64) -> Self {
        Self::new(Complex64::new(z0, 0.0), Complex64::new(0.0, 0.0)).expect("gamma = 0 is admissible")
    }

    pub fn z0(&self) -> Complex64 {
        Complex64::new(self.z0.0.to_f64(), self.z0.1.to_f64())
    }

    pub fn gamma(&self) -> Complex64 {
        Complex64::new(self.gamma.0.to_f64(), self.gamma.1.to_f64())
    }

    /// `0.385 <= |z0| <= 0.495`, decided exactly.
    pub fn check_boundary_regime(&self) -> Result<(), SlicerError> {
        let a2 = Rational::from(self.z0.0.square_ref()) + Rational::from(self.z0.1.square_ref());
        let lo = Rational::from((385, 1000)).square();
        let hi = Rational::from((495, 1000)).square();
        if a2 < lo || a2 > hi {
            return Err(SlicerError::PlaneOutsideRegime(format!("|z0| = {}", self.z0().norm())));
        }
        Ok(())
    }

    /// `z(w) = z0 - gamma w`.
    pub fn z_of<S: TowerScalar>(&self, w: &S) -> S {
        let p = w.prec();
        let z0 = S::from_rationals(p, &self.z0.0, &self.z0.1);
        let g = S::from_rationals(p, &self.gamma.0, &self.gamma.1);
        z0.sub(&g.mul(w))
    }

    /// `dz/dw = -gamma`.
    pub fn dz_dw<S: TowerScalar>(&self, prec: u32) -> S {
        let ng = (Rational::from(-&self.gamma.0), Rational::from(-&self.gamma.1));
        S::from_rationals(prec, &ng.0, &ng.1)
    }

    pub fn describe(&self) -> String {
        let z = self.z0();
        let g = self.gamma();
        format!("z0=({:.17e},{:.17e}) gamma=({:.17e},{:.17e})", z.re, z.im, g.re, g.im)
    }
}
