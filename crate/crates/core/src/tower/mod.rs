//! The polynomial family `P_{n,s}`, its signature sets and potentials.
//!
//! `P_0 = w` and `P_{k+1,(s,sigma)} = (P_{k,s} - sigma)^2 - eps_{k+1} A_{k+1}`
//! with `A_n = z - a_n` for odd `n` and `A_n = z + w/100 - a_n` for even `n`.

mod anchors;
mod describe;
mod eval;

pub use anchors::{corner_discrepancy, AnchorSequence};
pub use describe::{parse_tower_description, TowerDescription};
pub use eval::{EvalMode, Membership, MembershipStatus, Potentials, UEstimate};

use num_complex::Complex64;
use rug::{Integer, Rational};
use thiserror::Error;

use crate::numeric::{precision_for_depth, NumericError, PrecisionContext};
use crate::schedule::{ParameterSchedule, ScheduleError};

/// Exact enumeration is refused above this many signatures.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TowerError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("{count} signatures exceed the enumeration cap {cap}")]
    EnumerationCapExceeded { count: String, cap: u64 },
    #[error("level {n} cannot be evaluated pointwise: {reason}")]
    NotEvaluable { n: usize, reason: String },
    #[error("signature does not belong to the tower: {0}")]
    InvalidSignature(String),
    #[error("tower description error: {0}")]
    Parse(String),
}

/// Grid choices `(sigma_1, ..., sigma_n)`, stored as indices into the grids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub indices: Vec<u32>,
}

impl Signature {
    pub fn root() -> Self {
        Self { indices: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.indices.len()
    }

    pub fn child(&self, i: u32) -> Self {
        let mut indices = self.indices.clone();
        indices.push(i);
        Self { indices }
    }

    pub fn prefix(&self, k: usize) -> Self {
        Self { indices: self.indices[..k].to_vec() }
    }
}

#[derive(Debug, Clone)]
struct Level {
    m: u64,
    step: Rational,
    eps: Rational,
    delta: Rational,
    anchor: (Rational, Rational),
    grid: Vec<(i64, i64)>,
}

/// A schedule, an anchor sequence and the per-level constants derived
/// from them, all exact.
#[derive(Debug, Clone)]
pub struct TowerModel {
    schedule: ParameterSchedule,
    anchors: AnchorSequence,
    levels: Vec<Level>,
    max_bits: u32,
}

/// Integer points of `Sigma` for multiplicity `m`: `9 (j^2 + k^2) <= (m - 1)^2`,
/// sorted by `(j, k)`.
pub fn grid_indices(m: u64) -> Vec<(i64, i64)> {
    let m1 = i128::from(m) - 1;
    let bound = m1 * m1;
    let rmax = (m1 / 3) as i64;
    let mut out = Vec::new();
    for j in -rmax..=rmax {
        for k in -rmax..=rmax {
            let q = 9 * (i128::from(j) * i128::from(j) + i128::from(k) * i128::from(k));
            if q <= bound {
                out.push((j, k));
            }
        }
    }
    out
}

impl TowerModel {
    /// Build a tower; every level must have an exact `delta`, and the
    /// deepest level must be evaluable within `max_bits`.
    pub fn new(schedule: ParameterSchedule, anchors: AnchorSequence, max_bits: u32) -> Result<Self, TowerError> {
        let depth = schedule.depth();
        precision_for_depth(&schedule, depth, max_bits)?;
        let mut levels = Vec::with_capacity(depth);
        for n in 1..=depth {
            let m = schedule.m(n).as_u64().ok_or_else(|| TowerError::NotEvaluable {
                n,
                reason: format!("m_{n} = {} is too large for a grid", schedule.m(n)),
            })?;
            let inexact = || TowerError::NotEvaluable { n, reason: "delta is not an exact rational".into() };
            let delta_prev = schedule.exact_delta(n - 1).ok_or_else(inexact)?.clone();
            let delta = schedule.exact_delta(n).ok_or_else(inexact)?.clone();
            let eps = schedule.exact_eps(n).ok_or_else(inexact)?.clone();
            if m > 100_000 {
                return Err(TowerError::NotEvaluable { n, reason: format!("grid for m_{n} = {m} is too large") });
            }
            levels.push(Level {
                m,
                step: delta_prev * Rational::from((3, m)),
                eps,
                delta,
                anchor: anchors.anchor_exact(n),
                grid: grid_indices(m),
            });
        }
        Ok(Self { schedule, anchors, levels, max_bits })
    }

    pub fn schedule(&self) -> &ParameterSchedule {
        &self.schedule
    }

    pub fn anchors(&self) -> &AnchorSequence {
        &self.anchors
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    /// Precision context sized for evaluation at depth `n`.
    pub fn ctx(&self, n: usize) -> Result<PrecisionContext, TowerError> {
        Ok(PrecisionContext::for_depth(&self.schedule, n, self.max_bits)?)
    }

    pub fn delta(&self, n: usize) -> Rational {
        if n == 0 {
            Rational::from((1, 2))
        } else {
            self.levels[n - 1].delta.clone()
        }
    }

    /// `eps_n` for `n >= 1`.
    pub fn eps(&self, n: usize) -> &Rational {
        &self.levels[n - 1].eps
    }

    /// `m_n` for `n >= 1`.
    pub fn m(&self, n: usize) -> u64 {
        self.levels[n - 1].m
    }

    pub fn anchor(&self, n: usize) -> Complex64 {
        self.anchors.anchor(n)
    }

    pub fn anchor_exact(&self, n: usize) -> &(Rational, Rational) {
        &self.levels[n - 1].anchor
    }

    /// Grid spacing `3 delta_{n-1} / m_n`.
    pub fn grid_step(&self, n: usize) -> &Rational {
        &self.levels[n - 1].step
    }

    /// `Sigma_n` as exact points, in index order.
    pub fn sigma_grid(&self, n: usize) -> Vec<(Rational, Rational)> {
        assert!(n >= 1 && n <= self.depth(), "sigma grid index out of range");
        let l = &self.levels[n - 1];
        l.grid.iter().map(|&(j, k)| (Rational::from(&l.step * j), Rational::from(&l.step * k))).collect()
    }

    pub fn sigma_point(&self, n: usize, i: u32) -> (Rational, Rational) {
        let l = &self.levels[n - 1];
        let (j, k) = l.grid[i as usize];
        (Rational::from(&l.step * j), Rational::from(&l.step * k))
    }

    pub fn sigma_c64(&self, n: usize, i: u32) -> Complex64 {
        let (a, b) = self.sigma_point(n, i);
        Complex64::new(a.to_f64(), b.to_f64())
    }

    pub fn grid_len(&self, n: usize) -> u32 {
        self.levels[n - 1].grid.len() as u32
    }

    /// `#S_n = prod_{k<=n} #Sigma_k`.
    pub fn signature_count(&self, n: usize) -> Integer {
        (1..=n).fold(Integer::from(1), |acc, k| acc * self.grid_len(k))
    }

    pub(crate) fn check_cap(&self, n: usize, cap: u64) -> Result<u64, TowerError> {
        let c = self.signature_count(n);
        match c.to_u64() {
            Some(v) if v <= cap => Ok(v),
            _ => Err(TowerError::EnumerationCapExceeded { count: c.to_string(), cap }),
        }
    }

    /// Mixed-radix index of a signature, first level most significant.
    pub fn signature_index(&self, s: &Signature) -> Integer {
        let mut idx = Integer::new();
        for (k, &i) in s.indices.iter().enumerate() {
            idx = idx * self.grid_len(k + 1) + i;
        }
        idx
    }

    pub fn signature_from_index(&self, n: usize, index: &Integer) -> Result<Signature, TowerError> {
        if *index < 0 || *index >= self.signature_count(n) {
            return Err(TowerError::InvalidSignature(format!("index {index} at depth {n}")));
        }
        let mut rest = index.clone();
        let mut indices = vec![0u32; n];
        for k in (1..=n).rev() {
            let base = self.grid_len(k);
            let digit = Integer::from(&rest % base);
            indices[k - 1] = digit.to_u32().expect("digit below base");
            rest /= base;
        }
        Ok(Signature { indices })
    }

    pub fn validate_signature(&self, s: &Signature) -> Result<(), TowerError> {
        if s.depth() > self.depth() {
            return Err(TowerError::InvalidSignature(format!("depth {} beyond tower depth {}", s.depth(), self.depth())));
        }
        for (k, &i) in s.indices.iter().enumerate() {
            if i >= self.grid_len(k + 1) {
                return Err(TowerError::InvalidSignature(format!("index {i} at level {}", k + 1)));
            }
        }
        Ok(())
    }

    /// All signatures of depth `n` in index order.
    pub fn signatures(&self, n: usize, cap: u64) -> Result<Vec<Signature>, TowerError> {
        let count = self.check_cap(n, cap)?;
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![0u32; n];
        for _ in 0..count {
            out.push(Signature { indices: cur.clone() });
            for k in (0..n).rev() {
                cur[k] += 1;
                if cur[k] < self.grid_len(k + 1) {
                    break;
                }
                cur[k] = 0;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints};

    pub(crate) fn tower(ms: &[u64]) -> TowerModel {
        let s = build_schedule(&constant_radii(ms.len()), &ints(ms), ms.len()).unwrap();
        TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap()
    }

    #[test]
    fn grids() {
        assert_eq!(grid_indices(1), vec![(0, 0)]);
        assert_eq!(grid_indices(4).len(), 5);
        assert_eq!(grid_indices(7).len(), 13);
        let t = tower(&[4]);
        let g = t.sigma_grid(1);
        assert!(g.contains(&(Rational::from((3, 8)), Rational::new())));
        assert!(g.contains(&(Rational::new(), Rational::from((-3, 8)))));
    }

    #[test]
    fn counts_and_indices() {
        let t = tower(&[1, 4, 4]);
        assert_eq!(t.signature_count(0), 1);
        assert_eq!(t.signature_count(3), 25);
        let sigs = t.signatures(3, 100).unwrap();
        for (i, s) in sigs.iter().enumerate() {
            assert_eq!(t.signature_index(s), i);
            assert_eq!(&t.signature_from_index(3, &Integer::from(i)).unwrap(), s);
        }
        assert!(t.signatures(3, 10).is_err());
    }
}
