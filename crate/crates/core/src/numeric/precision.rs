use rug::{Float, Integer};

use super::NumericError;
use crate::schedule::ParameterSchedule;

/// Smallest significand width ever used.
pub const MIN_BITS: u32 = 64;

/// Significand width for one evaluation, with a hard budget.
///
/// Passed explicitly to every evaluation routine; there is no ambient
/// precision state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
    max_bits: u32,
}

impl PrecisionContext {
    pub fn new(bits: u32, max_bits: u32) -> Result<Self, NumericError> {
        if bits < MIN_BITS || bits > max_bits {
            return Err(NumericError::InvalidContext { bits, max_bits });
        }
        Ok(Self { bits, max_bits })
    }

    /// Context sized by [`precision_for_depth`] for evaluations at depth `n`.
    pub fn for_depth(
        schedule: &ParameterSchedule,
        n: usize,
        max_bits: u32,
    ) -> Result<Self, NumericError> {
        let bits = precision_for_depth(schedule, n, max_bits)?;
        Self::new(bits, max_bits)
    }

    /// Same budget, at least `bits` bits (clamped to the budget).
    pub fn at_least(self, bits: u32) -> Self {
        Self { bits: self.bits.max(bits).min(self.max_bits), max_bits: self.max_bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }
}

/// `max(64, ceil(2 log2(1/delta_n)) + 64)`.
///
/// The tower bottoms out at scale `delta_n`; doubling its binary exponent
/// and adding a 64-bit guard keeps `delta_n` and `eps_{n+1}` representable
/// with room to spare. When `delta_n` is known as an exact rational the
/// ceiling is computed with integer arithmetic.
pub fn precision_for_depth(
    schedule: &ParameterSchedule,
    n: usize,
    max_bits: u32,
) -> Result<u32, NumericError> {
    assert!(n <= schedule.depth(), "depth {n} beyond schedule depth {}", schedule.depth());
    let doubled = match schedule.exact_delta(n) {
        Some(delta) => {
            // smallest k with 2^k * num^2 >= den^2
            let num2 = Integer::from(delta.numer().square_ref());
            let den2 = Integer::from(delta.denom().square_ref());
            ceil_log2_ratio(&den2, &num2)
        }
        None => {
            let mid = schedule.log_delta(n).mid();
            let ln2 = Float::with_val(mid.prec(), rug::float::Constant::Log2);
            let v = -Float::with_val(mid.prec(), &mid / &ln2) * 2u32;
            let c = v.ceil();
            c.to_integer().map(|i| i.to_i64().unwrap_or(i64::MAX)).unwrap_or(i64::MAX)
        }
    };
    let needed = (doubled.max(0) as u64).saturating_add(64).max(u64::from(MIN_BITS));
    if needed > u64::from(max_bits) {
        return Err(NumericError::BudgetExceeded { depth: n, needed, max_bits });
    }
    Ok(needed as u32)
}

/// `ceil(log2(a / b))` for positive integers.
fn ceil_log2_ratio(a: &Integer, b: &Integer) -> i64 {
    let mut k = i64::from(a.significant_bits()) - i64::from(b.significant_bits()) - 1;
    loop {
        let fits = if k >= 0 {
            Integer::from(b << (k as u32)) >= *a
        } else {
            Integer::from(a << ((-k) as u32)) <= *b
        };
        if fits {
            return k;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_ratio_exact_powers() {
        assert_eq!(ceil_log2_ratio(&Integer::from(4), &Integer::from(1)), 2);
        assert_eq!(ceil_log2_ratio(&Integer::from(5), &Integer::from(1)), 3);
        assert_eq!(ceil_log2_ratio(&Integer::from(1), &Integer::from(4)), -2);
        assert_eq!(ceil_log2_ratio(&Integer::from(1), &Integer::from(3)), -1);
        assert_eq!(ceil_log2_ratio(&Integer::from(7), &Integer::from(7)), 0);
    }

    #[test]
    fn context_rejects_out_of_budget() {
        assert!(PrecisionContext::new(32, 128).is_err());
        assert!(PrecisionContext::new(256, 128).is_err());
        let ctx = PrecisionContext::new(64, 128).unwrap();
        assert_eq!(ctx.at_least(512).bits(), 128);
    }
}
