//! Adjustable-precision complex arithmetic and rectangular interval arithmetic.
//!
//! Everything in the tower is evaluated either with [`BigComplex`] (MPFR
//! values rounded to nearest) or with [`IntervalComplex`] (outward-rounded
//! rectangles). Both implement [`TowerScalar`], so the recursions in
//! `tower` are written once.

mod interval;
mod point;
mod precision;
mod scalar;

pub use interval::{classify_disk, interval_sqrt_branches, DiskClass, Interval, IntervalComplex};
pub use point::BigComplex;
pub use precision::{precision_for_depth, PrecisionContext, MIN_BITS};
pub use scalar::TowerScalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("precision budget exceeded: depth {depth} needs {needed} bits, budget is {max_bits}")]
    BudgetExceeded { depth: usize, needed: u64, max_bits: u32 },
    #[error("invalid precision context: bits={bits}, max_bits={max_bits}")]
    InvalidContext { bits: u32, max_bits: u32 },
    #[error("interval may contain zero; square-root branches cannot be separated")]
    ContainsZero,
    #[error("square-root branch enclosures overlap at the current precision")]
    BranchesNotSeparated,
    #[error("division by an interval that may contain zero")]
    DivisionByZero,
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> rug::Rational {
    rug::Rational::from_f64(x).expect("finite f64")
}

/// Plain positional decimal with `digits` significant digits (no exponent).
pub fn decimal_string(x: &rug::Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let exp = exp.expect("finite value");
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    if exp <= 0 {
        s.push_str("0.");
        s.extend(std::iter::repeat('0').take((-exp) as usize));
        s.push_str(&mantissa);
    } else if exp as usize >= mantissa.len() {
        s.push_str(&mantissa);
        s.extend(std::iter::repeat('0').take(exp as usize - mantissa.len()));
    } else {
        s.push_str(&mantissa[..exp as usize]);
        s.push('.');
        s.push_str(&mantissa[exp as usize..]);
    }
    s
}
