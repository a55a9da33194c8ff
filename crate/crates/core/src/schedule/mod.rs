//! Parameter sequences of the tower: radii `r_n`, multiplicities `m_n`, and
//! the derived scales `delta_n`, `eps_n`, `R_n`, `M_n`, `D_n`.
//!
//! Every sequence is stored as a certified enclosure of its natural log, so
//! schedules whose `M_n` overflow any floating exponent can still be built
//! and checked. When all inputs are exact, `delta_n` and `eps_n` are also
//! kept as exact rationals.

mod choose;
mod drift;
mod format;
mod report;

pub use choose::{check_choose_m, choose_m};
pub use drift::capacity_drift;
pub use format::{parse_multiplicity as parse_multiplicity_text, parse_radius as parse_radius_text, parse_schedule_text, schedule_to_text};
pub use report::{validate_schedule, ScheduleReport};

use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::numeric::Interval;

/// Working precision of the log-space enclosures.
pub const LOG_BITS: u32 = 256;

/// Exact rationals are dropped once a denominator passes this many bits.
const EXACT_BITS_CAP: u32 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("radius r_{n} is outside (0, 1/10]")]
    RadiusOutOfRange { n: usize },
    #[error("multiplicity m_{n} must be at least 1")]
    BadMultiplicity { n: usize },
    #[error("sequence too short: need {needed} entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("invalid schedule at step {n}: {estimate} fails")]
    InvalidSchedule { n: usize, estimate: &'static str },
    #[error("schedule is not ordinary: m_{n} = {m} > 1")]
    NotOrdinary { n: usize, m: String },
    #[error("gauge too weak at n = {n}")]
    GaugeTooWeak { n: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A radius `r_n`, either an exact rational or `exp(q)` for rational `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    Exact(Rational),
    Exp(Rational),
}

impl Radius {
    pub fn log(&self, prec: u32) -> Interval {
        match self {
            Radius::Exact(q) => Interval::from_rational(prec, q).ln(),
            Radius::Exp(q) => Interval::from_rational(prec, q),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Radius::Exact(q) => Some(q),
            Radius::Exp(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Radius::Exact(q) => q.to_f64(),
            Radius::Exp(q) => q.to_f64().exp(),
        }
    }

    fn in_range(&self) -> bool {
        match self {
            Radius::Exact(q) => *q > 0 && *q <= Rational::from((1, 10)),
            // exp(q) <= 1/10 iff q <= -ln 10; ln 10 < 2.3026
            Radius::Exp(q) => {
                let l = Interval::from_rational(LOG_BITS, q);
                let ln10 = Interval::from_rational(LOG_BITS, &Rational::from(10)).ln();
                l.hi() <= ln10.neg().lo()
            }
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Radius::Exp(q) if *q.denom() == 1 => write!(f, "exp({})", q.numer()),
            Radius::Exp(q) => write!(f, "exp({}/{})", q.numer(), q.denom()),
        }
    }
}

/// A multiplicity `m_n`: a plain integer or `2^(2^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Int(u64),
    DoublyDyadic(u32),
}

impl Multiplicity {
    pub fn log(&self, prec: u32) -> Interval {
        match *self {
            Multiplicity::Int(m) => Interval::from_rational(prec, &Rational::from(m)).ln(),
            Multiplicity::DoublyDyadic(k) => ln2(prec).mul(&Interval::from_rational(prec, &(Rational::from(Integer::from(1) << k)))),
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match *self {
            Multiplicity::Int(m) => Some(m),
            Multiplicity::DoublyDyadic(k) if k < 6 => Some(1u64 << (1u32 << k)),
            Multiplicity::DoublyDyadic(_) => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Multiplicity::Int(1))
    }

    /// Exponent `e` with `m = 2^e`, or `None` if `m` is not such a power.
    fn log2_exponent(&self) -> Option<Integer> {
        match *self {
            Multiplicity::Int(m) if m.is_power_of_two() => Some(Integer::from(m.trailing_zeros())),
            Multiplicity::Int(_) => None,
            Multiplicity::DoublyDyadic(k) => Some(Integer::from(1) << k),
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Int(m) => write!(f, "{m}"),
            Multiplicity::DoublyDyadic(k) => write!(f, "2^(2^{k})"),
        }
    }
}

pub(crate) fn ln2(prec: u32) -> Interval {
    let lo = Float::with_val_round(prec, Constant::Log2, Round::Down).0;
    let hi = Float::with_val_round(prec, Constant::Log2, Round::Up).0;
    Interval::new(lo, hi)
}

/// The sequences `r_n`, `m_n` (indexed from 1) and their derived scales.
#[derive(Debug, Clone)]
pub struct ParameterSchedule {
    r_seq: Vec<Radius>,
    m_seq: Vec<Multiplicity>,
    depth: usize,
    log_delta: Vec<Interval>,
    log_eps: Vec<Interval>,
    log_r: Vec<Interval>,
    log_m: Vec<Interval>,
    log_big_r: Vec<Interval>,
    log_big_m: Vec<Interval>,
    log_big_d: Vec<Interval>,
    exact_delta: Vec<Rational>,
    exact_eps: Vec<Rational>,
}

/// Build and verify a schedule. `r_seq` and `m_seq` hold `r_1, r_2, ...`
/// and `m_1, m_2, ...`; only the first `depth` entries are used.
pub fn build_schedule(
    r_seq: &[Radius],
    m_seq: &[Multiplicity],
    depth: usize,
) -> Result<ParameterSchedule, ScheduleError> {
    let s = ParameterSchedule::unchecked(r_seq, m_seq, depth, &[])?;
    s.verify()?;
    Ok(s)
}

impl ParameterSchedule {
    /// Build without the est1/est2 verification, multiplying `delta_n` by the
    /// given factors as it is produced. Later steps continue from the
    /// modified values. Used to construct deliberately invalid schedules.
    pub fn unchecked(
        r_seq: &[Radius],
        m_seq: &[Multiplicity],
        depth: usize,
        delta_factors: &[(usize, Rational)],
    ) -> Result<Self, ScheduleError> {
        if r_seq.len() < depth {
            return Err(ScheduleError::TooShort { needed: depth, got: r_seq.len() });
        }
        if m_seq.len() < depth {
            return Err(ScheduleError::TooShort { needed: depth, got: m_seq.len() });
        }
        let r_seq = r_seq[..depth].to_vec();
        let m_seq = m_seq[..depth].to_vec();
        for (i, r) in r_seq.iter().enumerate() {
            if !r.in_range() {
                return Err(ScheduleError::RadiusOutOfRange { n: i + 1 });
            }
        }
        for (i, m) in m_seq.iter().enumerate() {
            if matches!(m, Multiplicity::Int(0)) {
                return Err(ScheduleError::BadMultiplicity { n: i + 1 });
            }
        }
        let p = LOG_BITS;
        let factor = |n: usize| delta_factors.iter().find(|(k, _)| *k == n).map(|(_, f)| f.clone());
        let ln4 = ln2(p).mul_u32(2);
        let log_r: Vec<Interval> = r_seq.iter().map(|r| r.log(p)).collect();
        let log_m: Vec<Interval> = m_seq.iter().map(|m| m.log(p)).collect();

        let mut log_delta = vec![ln2(p).neg()];
        if let Some(f) = factor(0) {
            log_delta[0] = log_delta[0].add(&Interval::from_rational(p, &f).ln());
        }
        let mut log_eps = Vec::with_capacity(depth);
        for n in 0..depth {
            let twice = log_delta[n].mul_u32(2);
            let two_lm = log_m[n].mul_u32(2);
            let mut d = twice.add(&log_r[n]).sub(&ln4).sub(&two_lm);
            if let Some(f) = factor(n + 1) {
                d = d.add(&Interval::from_rational(p, &f).ln());
            }
            log_delta.push(d);
            log_eps.push(twice.sub(&ln2(p)).sub(&two_lm));
        }

        let mut log_big_r = vec![Interval::from_f64(p, 0.0)];
        let mut log_big_m = vec![Interval::from_f64(p, 0.0)];
        for n in 0..depth {
            log_big_r.push(log_big_r[n].add(&log_r[n]));
            log_big_m.push(log_big_m[n].add(&log_m[n]));
        }
        let log_big_d = (0..=depth)
            .map(|n| {
                ln4.mul(&Interval::from_f64(p, n as f64))
                    .add(&log_delta[n])
                    .add(&log_big_m[n])
                    .sub(&log_big_r[n])
            })
            .collect();

        let (exact_delta, exact_eps) = exact_sequences(&r_seq, &m_seq, depth, &factor);

        Ok(Self {
            r_seq,
            m_seq,
            depth,
            log_delta,
            log_eps,
            log_r,
            log_m,
            log_big_r,
            log_big_m,
            log_big_d,
            exact_delta,
            exact_eps,
        })
    }

    /// Certify est1 and est2 at every step.
    ///
    /// est1 is checked as `delta_{n+1}/q + eps_{n+1}/q < 1` with
    /// `q = delta_n^2 / m_{n+1}^2`, which keeps the exponentials bounded.
    pub fn verify(&self) -> Result<(), ScheduleError> {
        let one = Float::with_val(LOG_BITS, 1);
        for n in 0..self.depth {
            let log_q = self.log_delta[n].mul_u32(2).sub(&self.log_m[n].mul_u32(2));
            let t1 = self.log_delta[n + 1].sub(&log_q).exp();
            let t2 = self.log_eps[n].sub(&log_q).exp();
            if t1.add(&t2).hi() >= &one {
                return Err(ScheduleError::InvalidSchedule { n, estimate: "est1" });
            }
            let lhs = self.log_delta[n + 1].sub(&self.log_eps[n]);
            if !lhs.certainly_lt(&self.log_r[n]) {
                return Err(ScheduleError::InvalidSchedule { n, estimate: "est2" });
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `r_n` for `1 <= n <= depth`.
    pub fn r(&self, n: usize) -> &Radius {
        &self.r_seq[n - 1]
    }

    /// `m_n` for `1 <= n <= depth`.
    pub fn m(&self, n: usize) -> Multiplicity {
        self.m_seq[n - 1]
    }

    pub fn r_seq(&self) -> &[Radius] {
        &self.r_seq
    }

    pub fn m_seq(&self) -> &[Multiplicity] {
        &self.m_seq
    }

    pub fn log_delta(&self, n: usize) -> &Interval {
        &self.log_delta[n]
    }

    /// `log eps_n` for `1 <= n <= depth`.
    pub fn log_eps(&self, n: usize) -> &Interval {
        assert!(n >= 1, "eps_0 is not defined");
        &self.log_eps[n - 1]
    }

    pub fn log_r(&self, n: usize) -> &Interval {
        &self.log_r[n - 1]
    }

    pub fn log_m(&self, n: usize) -> &Interval {
        &self.log_m[n - 1]
    }

    pub fn log_big_r(&self, n: usize) -> &Interval {
        &self.log_big_r[n]
    }

    pub fn log_big_m(&self, n: usize) -> &Interval {
        &self.log_big_m[n]
    }

    pub fn log_big_d(&self, n: usize) -> &Interval {
        &self.log_big_d[n]
    }

    /// Exact `delta_n` when every input up to `n` is exact.
    pub fn exact_delta(&self, n: usize) -> Option<&Rational> {
        self.exact_delta.get(n)
    }

    /// Exact `eps_n` (`n >= 1`) when every input up to `n` is exact.
    pub fn exact_eps(&self, n: usize) -> Option<&Rational> {
        assert!(n >= 1, "eps_0 is not defined");
        self.exact_eps.get(n - 1)
    }

    pub fn is_ordinary(&self) -> bool {
        self.m_seq.iter().all(Multiplicity::is_one)
    }

    /// Same parameters truncated to a smaller depth.
    pub fn truncated(&self, depth: usize) -> Self {
        assert!(depth <= self.depth);
        let mut s = self.clone();
        s.depth = depth;
        s.r_seq.truncate(depth);
        s.m_seq.truncate(depth);
        s.log_delta.truncate(depth + 1);
        s.log_eps.truncate(depth);
        s.log_r.truncate(depth);
        s.log_m.truncate(depth);
        s.log_big_r.truncate(depth + 1);
        s.log_big_m.truncate(depth + 1);
        s.log_big_d.truncate(depth + 1);
        s.exact_delta.truncate(depth + 1);
        s.exact_eps.truncate(depth);
        s
    }
}

fn exact_sequences(
    r_seq: &[Radius],
    m_seq: &[Multiplicity],
    depth: usize,
    factor: &dyn Fn(usize) -> Option<Rational>,
) -> (Vec<Rational>, Vec<Rational>) {
    let mut delta = vec![Rational::from((1, 2))];
    if let Some(f) = factor(0) {
        delta[0] *= f;
    }
    let mut eps = Vec::new();
    for n in 0..depth {
        let Some(r) = r_seq[n].exact() else { break };
        let m2 = match m_seq[n] {
            Multiplicity::Int(m) => Rational::from(Integer::from(m).square()),
            Multiplicity::DoublyDyadic(k) => match m_seq[n].log2_exponent() {
                Some(e) if k < 16 => Rational::from(Integer::from(1) << (2 * e.to_u32().unwrap())),
                _ => break,
            },
        };
        let d2 = Rational::from(delta[n].square_ref());
        if d2.denom().significant_bits() > EXACT_BITS_CAP {
            break;
        }
        let mut next = Rational::from(&d2 * r) / Rational::from(&m2 * 4u32);
        if let Some(f) = factor(n + 1) {
            next *= f;
        }
        eps.push(d2 / (m2 * 2u32));
        delta.push(next);
    }
    (delta, eps)
}

/// `r_n = 1/10` for every `n`.
pub fn constant_radii(depth: usize) -> Vec<Radius> {
    vec![Radius::Exact(Rational::from((1, 10))); depth]
}

/// `r_n = min(1/10, exp(-2^n))`.
pub fn doubly_exponential_radii(depth: usize) -> Vec<Radius> {
    (1..=depth)
        .map(|n| {
            // exp(-2^n) > 1/10 only for n = 1
            if n == 1 {
                Radius::Exact(Rational::from((1, 10)))
            } else {
                Radius::Exp(Rational::from(-(Integer::from(1) << n as u32)))
            }
        })
        .collect()
}

pub fn ints(ms: &[u64]) -> Vec<Multiplicity> {
    ms.iter().map(|&m| Multiplicity::Int(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn ordinary_depth_two() {
        let s = build_schedule(&constant_radii(2), &ints(&[1, 1]), 2).unwrap();
        assert_eq!(s.exact_delta(1).unwrap(), &q(1, 160));
        assert_eq!(s.exact_eps(1).unwrap(), &q(1, 8));
        assert_eq!(s.exact_delta(2).unwrap(), &q(1, 1_024_000));
        assert_eq!(s.exact_eps(2).unwrap(), &q(1, 51_200));
    }

    #[test]
    fn subdivided_depth_two() {
        let s = build_schedule(&constant_radii(2), &ints(&[1, 4]), 2).unwrap();
        assert_eq!(s.exact_delta(2).unwrap(), &q(1, 16_384_000));
        let ld = s.log_delta(2).mid_f64();
        assert!((ld - (1.0f64 / 16_384_000.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn depth_zero() {
        let s = build_schedule(&[], &[], 0).unwrap();
        assert_eq!(s.exact_delta(0).unwrap(), &q(1, 2));
        assert!(s.exact_delta(1).is_none());
    }

    #[test]
    fn rejects_large_radius() {
        let r = vec![Radius::Exact(q(1, 5))];
        assert_eq!(build_schedule(&r, &ints(&[1]), 1).unwrap_err(), ScheduleError::RadiusOutOfRange { n: 1 });
        let e = vec![Radius::Exp(q(-2, 1))];
        assert!(build_schedule(&e, &ints(&[1]), 1).is_err());
    }

    #[test]
    fn inflated_delta_breaks_est1() {
        let s = ParameterSchedule::unchecked(&constant_radii(2), &ints(&[1, 4]), 2, &[(2, q(1_000_000, 1))]).unwrap();
        assert_eq!(s.verify().unwrap_err(), ScheduleError::InvalidSchedule { n: 1, estimate: "est1" });
    }

    #[test]
    fn doubly_dyadic_log() {
        let m = Multiplicity::DoublyDyadic(3);
        assert_eq!(m.as_u64(), Some(256));
        assert!((m.log(128).mid_f64() - 256f64.ln()).abs() < 1e-14);
    }
}
