//! Potential-theoretic diagnostics.

mod convergence;
mod gauge;
mod jensen;
mod potential;
mod quadrature;
mod regimes;

pub use convergence::{
    convergence_report, harmonic_gap_at, harmonic_gap_check, slice_grid, ConvergenceReport, ConvergenceRow, HarmonicGap,
    DECAY_RATIO,
};
pub use gauge::{modulus_from_h, tame_gauge, GaugeFunction, Segment, SegmentKind, TamedTheta, Theta};
pub use jensen::{
    circle_average_t, interior_sup_check, jensen_cross_check, jensen_table, CircleAverage, InteriorSup, JensenPair,
    JensenRow, Point2, MAX_NODES, MIN_NODES, OMEGA_Z, SUBHARMONIC_SLACK,
};
pub use potential::{arc_fraction, l_potential, nu_ball_mass, potential_grid};
pub use quadrature::{integrate, integrate_to_infinity, Quadrature};
pub use regimes::{box_dimension_slice, two_regime_check, DimensionEstimate, RegimeSample, TwoRegimeReport};

use thiserror::Error;

use crate::slicer::SlicerError;
use crate::tower::TowerError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("gauge integral int_0 h(s)/s^2 ds diverges")]
    DivergentGauge,
    #[error("gauge grows too slowly for the construction")]
    GaugeTooWeak,
    #[error("circle leaves the domain")]
    DomainExit,
    #[error("scales overlap at n = {n}: rad_(n+1) = {rad_next}, rad_int = {rad_int}, rad_n = {rad}")]
    ScaleOverlap { n: usize, rad_next: f64, rad_int: f64, rad: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Slicer(#[from] SlicerError),
}

impl From<crate::numeric::NumericError> for AnalysisError {
    fn from(e: crate::numeric::NumericError) -> Self {
        Self::Tower(e.into())
    }
}
