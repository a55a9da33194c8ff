use super::{ParameterSchedule, ScheduleError, LOG_BITS};
use crate::numeric::Interval;

/// `(1/2^n) log delta_n + sum_{k<=n} |log r_k| / 2^k` for an ordinary
/// (`m = 1`) schedule.
///
/// This is the sign convention under which the quantity stays bounded when
/// `sum |log r_k| / 2^k` converges; the opposite sign would grow without bound.
pub fn capacity_drift(s: &ParameterSchedule, n: usize) -> Result<f64, ScheduleError> {
    assert!(n <= s.depth(), "n beyond schedule depth");
    for k in 1..=s.depth() {
        if !s.m(k).is_one() {
            return Err(ScheduleError::NotOrdinary { n: k, m: s.m(k).to_string() });
        }
    }
    let pow = |k: usize| Interval::from_f64(LOG_BITS, 0.5f64.powi(k as i32));
    let mut acc = s.log_delta(n).mul(&pow(n));
    for k in 1..=n {
        acc = acc.sub(&s.log_r(k).mul(&pow(k)));
    }
    Ok(acc.mid_f64())
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn drift_sequence() {
        let s = build_schedule(&constant_radii(12), &ints(&[1; 12]), 12).unwrap();
        let d1 = capacity_drift(&s, 1).unwrap();
        assert!((d1 + 4f64.ln()).abs() < 1e-14);
        let d12 = capacity_drift(&s, 12).unwrap();
        assert!((d12 + 8f64.ln()).abs() < 1e-3);
        let s4 = build_schedule(&constant_radii(2), &ints(&[1, 4]), 2).unwrap();
        assert!(matches!(capacity_drift(&s4, 1), Err(ScheduleError::NotOrdinary { n: 2, .. })));
    }
}
