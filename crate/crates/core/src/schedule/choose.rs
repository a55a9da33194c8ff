use rug::Float;

use super::{Multiplicity, Radius, ScheduleError};
use crate::analysis::GaugeFunction;

/// Largest `k` tried in the lattice `m = 2^(2^k)`.
const MAX_K: u32 = 62;

/// Smallest multiplicities on the lattice `m_n = 2^(2^{k_n})`, with
/// `k_{n+1} > k_n` (hence `m_{n+1} >= m_n^2`), such that
/// `theta(A^n R_n / M_n) >= (C A)^n / R_n^2` for `n = 1..=depth`.
///
/// Runs in `f64` log form: with `L = ln(A^n R_n / M_n)` the condition reads
/// `ln theta(e^L) >= n ln(CA) - 2 ln R_n`.
pub fn choose_m(
    theta: &GaugeFunction,
    r_seq: &[Radius],
    a: f64,
    c: f64,
    depth: usize,
) -> Result<Vec<Multiplicity>, ScheduleError> {
    assert!(a >= 1.0 && c >= 3.0, "need A >= 1 and C >= 3");
    assert!(r_seq.len() >= depth, "not enough radii");
    if !diverges_monotonically(theta) {
        return Err(ScheduleError::GaugeTooWeak { n: 1 });
    }
    let ln2 = std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(depth);
    let mut log_big_r = 0.0;
    let mut log_big_m = 0.0;
    let mut k_min = 0u32;
    for n in 1..=depth {
        log_big_r += r_seq[n - 1].log(128).mid_f64();
        let rhs = n as f64 * (c * a).ln() - 2.0 * log_big_r;
        let found = (k_min..=MAX_K).find(|&k| {
            let lm = log_big_m + 2f64.powi(k as i32) * ln2;
            let l = n as f64 * a.ln() + log_big_r - lm;
            l < 0.0 && theta.ln_at(-l) >= rhs
        });
        let k = found.ok_or(ScheduleError::GaugeTooWeak { n })?;
        log_big_m += 2f64.powi(k as i32) * ln2;
        out.push(Multiplicity::DoublyDyadic(k));
        k_min = k + 1;
    }
    Ok(out)
}

fn diverges_monotonically(theta: &GaugeFunction) -> bool {
    let ts: Vec<f64> = (0..40).map(|i| 10f64.powf(i as f64 * 0.25)).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| theta.ln_at(t)).collect();
    vals.windows(2).all(|w| w[1] >= w[0] - 1e-12) && vals[vals.len() - 1] > vals[0]
}

/// Re-check a multiplicity sequence against the same inequality, in MPFR
/// arithmetic built from the raw products. Returns the first failing `n`.
pub fn check_choose_m(
    theta: &GaugeFunction,
    r_seq: &[Radius],
    m_seq: &[Multiplicity],
    a: f64,
    c: f64,
) -> Result<(), usize> {
    let p = 192;
    let ln_a = Float::with_val(p, a).ln();
    let ln_ca = Float::with_val(p, c * a).ln();
    let mut log_big_r = Float::new(p);
    let mut log_big_m = Float::new(p);
    for (i, m) in m_seq.iter().enumerate() {
        let n = i + 1;
        log_big_r += match &r_seq[i] {
            Radius::Exact(q) => Float::with_val(p, q).ln(),
            Radius::Exp(q) => Float::with_val(p, q),
        };
        log_big_m += match *m {
            Multiplicity::Int(v) => Float::with_val(p, v).ln(),
            Multiplicity::DoublyDyadic(k) => {
                Float::with_val(p, rug::float::Constant::Log2) * Float::with_val(p, rug::Integer::from(1) << k)
            }
        };
        if i > 0 {
            let prev = match m_seq[i - 1] {
                Multiplicity::DoublyDyadic(k) => Some(k),
                _ => None,
            };
            if let (Some(kp), Multiplicity::DoublyDyadic(k)) = (prev, *m) {
                if k <= kp {
                    return Err(n);
                }
            }
        }
        let l = Float::with_val(p, &ln_a * n as u32) + &log_big_r - &log_big_m;
        if l >= 0 {
            return Err(n);
        }
        let lhs = theta.ln_at_big(&Float::with_val(p, -&l));
        let rhs = Float::with_val(p, &ln_ca * n as u32) - Float::with_val(p, &log_big_r * 2u32);
        if lhs < rhs {
            return Err(n);
        }
    }
    Ok(())
}
