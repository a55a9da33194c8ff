use rug::Float;

use super::{ParameterSchedule, LOG_BITS};
use crate::numeric::Interval;

/// Summary of the growth conditions a schedule satisfies.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    /// Partial sums `sum_{k<=n} |log r_k| / 2^k` for `n = 1..=depth`.
    pub tail_sum: Vec<f64>,
    /// Whether the terms decay geometrically at the end of the schedule.
    pub tail_converges: bool,
    /// Upper bound on the full series when `tail_converges`.
    pub tail_bound: Option<f64>,
    pub super_exponential_m: bool,
    /// Entry `n` tells whether `3^{n+1} rho_{n+1} < 3^{-n} rho_n`, with
    /// `rho_n = R_n / (4^n M_n)` the central component radius.
    pub radii_separate: Vec<bool>,
}

/// Largest ratio of consecutive tail terms still accepted as geometric decay.
const GEOMETRIC_RATIO: f64 = 0.9;

pub fn validate_schedule(s: &ParameterSchedule) -> ScheduleReport {
    let depth = s.depth();
    let terms: Vec<f64> = (1..=depth)
        .map(|n| {
            let mut x = s.log_r(n).mid();
            x.abs_mut();
            (x >> (n as u32)).to_f64()
        })
        .collect();
    let mut tail_sum = Vec::with_capacity(depth);
    let mut acc = 0.0;
    for t in &terms {
        acc += t;
        tail_sum.push(acc);
    }
    let (tail_converges, tail_bound) = if depth >= 2 {
        let ratio = terms[depth - 1] / terms[depth - 2];
        if ratio <= GEOMETRIC_RATIO {
            (true, Some(acc + terms[depth - 1] * ratio / (1.0 - ratio)))
        } else {
            (false, None)
        }
    } else {
        (false, None)
    };

    ScheduleReport {
        tail_sum,
        tail_converges,
        tail_bound,
        super_exponential_m: super_exponential(s),
        radii_separate: (0..depth).map(|n| radii_separate(s, n)).collect(),
    }
}

/// `m_{n+1} >= m_n^2` and `m_n >= 2` from some index on, with at least one
/// such step inside the schedule.
fn super_exponential(s: &ParameterSchedule) -> bool {
    let depth = s.depth();
    let tol = Float::with_val(LOG_BITS, 1e-40);
    let ln2 = super::ln2(LOG_BITS).mid();
    let ok_from = |j: usize| {
        (j..=depth).all(|n| s.log_m(n).mid() >= Float::with_val(LOG_BITS, &ln2 - &tol))
            && (j..depth).all(|n| {
                let twice = s.log_m(n).mid() * 2u32;
                s.log_m(n + 1).mid() >= twice - &tol
            })
    };
    (1..depth).any(ok_from)
}

fn log_rho(s: &ParameterSchedule, n: usize) -> Interval {
    let ln4 = super::ln2(LOG_BITS).mul_u32(2);
    s.log_big_r(n).sub(&ln4.mul(&Interval::from_f64(LOG_BITS, n as f64))).sub(s.log_big_m(n))
}

fn radii_separate(s: &ParameterSchedule, n: usize) -> bool {
    let ln3 = Interval::from_f64(LOG_BITS, 3.0).ln();
    let upper_next = ln3.mul(&Interval::from_f64(LOG_BITS, (n + 1) as f64)).add(&log_rho(s, n + 1));
    let lower_here = log_rho(s, n).sub(&ln3.mul(&Interval::from_f64(LOG_BITS, n as f64)));
    upper_next.certainly_lt(&lower_here)
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn constant_radii_tail() {
        let s = build_schedule(&constant_radii(30), &ints(&[1; 30]), 30).unwrap();
        let rep = validate_schedule(&s);
        assert!((rep.tail_sum[29] - 10f64.ln()).abs() < 1e-8);
        assert!(rep.tail_converges);
        assert!((rep.tail_bound.unwrap() - 10f64.ln()).abs() < 1e-8);
        assert!(rep.tail_sum.windows(2).all(|w| w[1] >= w[0]));
        assert!(!rep.super_exponential_m);
    }

    #[test]
    fn doubly_exponential_tail_diverges() {
        let s = build_schedule(&doubly_exponential_radii(8), &ints(&[1; 8]), 8).unwrap();
        let rep = validate_schedule(&s);
        assert!(!rep.tail_converges);
        assert!((rep.tail_sum[7] - rep.tail_sum[6] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn squaring_multiplicities() {
        let s = build_schedule(&constant_radii(3), &ints(&[1, 4, 16]), 3).unwrap();
        assert!(validate_schedule(&s).super_exponential_m);
        let s = build_schedule(&constant_radii(3), &ints(&[1, 4, 15]), 3).unwrap();
        assert!(!validate_schedule(&s).super_exponential_m);
    }
}
