//! Gauge functions `h(r) = r^e * theta(r)` and the calculus between them.
//!
//! All gauges are evaluated through `t = -ln r`; the log-form accessors
//! never leave the logarithmic scale, so they work far below `f64::MIN_POSITIVE`.

use std::f64::consts::E;

use rug::Float;

use super::quadrature::{integrate, integrate_to_infinity};
use super::AnalysisError;

/// The slowly varying factor of a gauge, as a function of `t = -ln r`.
#[derive(Debug, Clone, PartialEq)]
pub enum Theta {
    One,
    /// `|log r|`
    AbsLog,
    /// `log |log r|`, constant for `t < e`
    LogAbsLog,
    /// `|log r|^k`
    AbsLogPow(f64),
    /// Sampled `(r, theta)` pairs, interpolated linearly in `(t, ln theta)`.
    Table(Vec<(f64, f64)>),
    Tamed(TamedTheta),
}

impl Theta {
    fn t_min(&self) -> f64 {
        match self {
            Theta::One | Theta::AbsLog | Theta::AbsLogPow(_) => 0.0,
            Theta::LogAbsLog => E,
            Theta::Table(rows) => rows.iter().map(|(r, _)| -r.ln()).fold(f64::INFINITY, f64::min),
            Theta::Tamed(g) => g.segments[0].t0,
        }
    }

    /// `ln theta(e^{-t})`.
    pub fn ln_at(&self, t: f64) -> f64 {
        let t = t.max(self.t_min());
        match self {
            Theta::One => 0.0,
            Theta::AbsLog => t.ln(),
            Theta::LogAbsLog => t.ln().ln(),
            Theta::AbsLogPow(k) => k * t.ln(),
            Theta::Table(rows) => table_ln(rows, t),
            Theta::Tamed(g) => g.ln_at(t),
        }
    }

    /// `ln theta(e^{-t})` in MPFR, for the closed forms.
    pub fn ln_at_big(&self, t: &Float) -> Float {
        let p = t.prec();
        let tmin = Float::with_val(p, self.t_min());
        let t = if *t < tmin { tmin } else { t.clone() };
        match self {
            Theta::One => Float::new(p),
            Theta::AbsLog => t.ln(),
            Theta::LogAbsLog => t.ln().ln(),
            Theta::AbsLogPow(k) => t.ln() * *k,
            other => Float::with_val(p, other.ln_at(t.to_f64())),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.ln_at(-r.ln()).exp()
    }
}

fn table_ln(rows: &[(f64, f64)], t: f64) -> f64 {
    let mut pts: Vec<(f64, f64)> = rows.iter().map(|&(r, v)| (-r.ln(), v.ln())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if t <= pts[0].0 {
        return pts[0].1;
    }
    for w in pts.windows(2) {
        if t <= w[1].0 {
            let s = (t - w[0].0) / (w[1].0 - w[0].0);
            return w[0].1 + s * (w[1].1 - w[0].1);
        }
    }
    pts[pts.len() - 1].1
}

/// `h(r) = r^exponent * theta(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub exponent: f64,
    pub theta: Theta,
}

impl GaugeFunction {
    pub fn new(exponent: f64, theta: Theta) -> Self {
        Self { exponent, theta }
    }

    pub fn power(exponent: f64) -> Self {
        Self::new(exponent, Theta::One)
    }

    pub fn theta_only(theta: Theta) -> Self {
        Self::new(0.0, theta)
    }

    /// `ln h(e^{-t})`.
    pub fn ln_at(&self, t: f64) -> f64 {
        -self.exponent * t + self.theta.ln_at(t)
    }

    pub fn ln_at_big(&self, t: &Float) -> Float {
        let p = t.prec();
        Float::with_val(p, t * (-self.exponent)) + self.theta.ln_at_big(t)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.ln_at(-r.ln()).exp()
    }

    /// Does `int_0 h(s)/s^2 ds` converge? Every supported theta grows at
    /// most polylogarithmically, so this is `exponent > 1`.
    pub fn density_finite(&self) -> bool {
        self.exponent > 1.0
    }

    /// Sampled check that `h` is positive and increasing on `(0, r0]`.
    pub fn sampled_increasing(&self, r0: f64) -> bool {
        let t0 = -r0.ln();
        let ts: Vec<f64> = (0..200).map(|i| t0 + i as f64 * 0.25).collect();
        ts.windows(2).all(|w| self.ln_at(w[1]) <= self.ln_at(w[0]) + 1e-12) && ts.iter().all(|t| self.ln_at(*t).is_finite())
    }
}

/// `psi(r) = int_0^{2r} h(s)/s^2 ds + r int_r^1 h(s)/s^3 ds`.
pub fn modulus_from_h(h: &GaugeFunction, r: f64) -> Result<f64, AnalysisError> {
    if !h.density_finite() {
        return Err(AnalysisError::DivergentGauge);
    }
    assert!(r > 0.0, "r must be positive");
    let e = h.exponent;
    if let Theta::One = h.theta {
        let first = (2.0 * r).powf(e - 1.0) / (e - 1.0);
        let second = if (e - 2.0).abs() < 1e-15 { -r.ln() } else { (1.0 - r.powf(e - 2.0)) / (e - 2.0) };
        return Ok(first + r * second);
    }
    if h.theta == Theta::AbsLog && (e - 2.0).abs() < 1e-15 && 2.0 * r <= 1.0 {
        let l2 = -(2.0 * r).ln();
        let l = -r.ln();
        return Ok(2.0 * r * (1.0 + l2) + r * l * l / 2.0);
    }
    // s = e^{-t}: h(s)/s^2 ds = e^{-(e-1)t} theta dt and h(s)/s^3 ds = e^{-(e-2)t} theta dt
    let th = &h.theta;
    let first = integrate_to_infinity(|t| (-(e - 1.0) * t + th.ln_at(t)).exp(), -(2.0 * r).ln(), 1e-12, 1e-300);
    let second = if r < 1.0 {
        integrate(|t| (-(e - 2.0) * t + th.ln_at(t)).exp(), 0.0, -r.ln(), 1e-12, 1e-300).value
    } else {
        -integrate(|t| (-(e - 2.0) * t + th.ln_at(t)).exp(), -r.ln(), 0.0, 1e-12, 1e-300).value
    };
    Ok(first.value + r * second)
}

/// One piece of a tamed gauge in the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentKind {
    Plateau { g: f64 },
    /// `g(t) = ln ln t - ln ln t0 + g0`
    LogLog { g0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub kind: SegmentKind,
}

/// `ln theta_2` as alternating plateaus and `ln ln t` ramps; the last
/// segment extends to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct TamedTheta {
    pub segments: Vec<Segment>,
}

impl TamedTheta {
    pub fn ln_at(&self, t: f64) -> f64 {
        let i = self.segments.partition_point(|s| s.t0 <= t).saturating_sub(1);
        let s = &self.segments[i];
        let t = t.max(s.t0);
        match s.kind {
            SegmentKind::Plateau { g } => g,
            SegmentKind::LogLog { g0 } => t.ln().ln() - s.t0.ln().ln() + g0,
        }
    }
}

/// Grid in `t` for the taming construction.
fn t_grid() -> Vec<f64> {
    let n = 4001;
    let (lo, hi) = (1.0f64.ln(), 1e12f64.ln());
    (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Replace `theta_0 = psi(r) / (r |log r|)` by a decreasing minorant `theta_2`
/// with `theta_2' / theta_2 = o(1/(r log r))`, built from plateaus and
/// `log log |log r|` ramps.
pub fn tame_gauge(psi: &GaugeFunction) -> Result<GaugeFunction, AnalysisError> {
    let ts = t_grid();
    let f0: Vec<f64> = ts.iter().map(|&t| psi.ln_at(t) + t - t.ln()).collect();
    let half = ts.len() / 2;
    let tail_monotone = f0[half..].windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let growth = f0[f0.len() - 1] - f0[half];
    if !tail_monotone || !(growth >= 2f64.ln()) || f0.iter().any(|v| v.is_nan()) {
        return Err(AnalysisError::GaugeTooWeak);
    }
    // decreasing minorant in r, i.e. running minimum from the right in t
    let mut f1 = f0.clone();
    for i in (0..f1.len() - 1).rev() {
        f1[i] = f1[i].min(f1[i + 1]);
    }
    let start = (0..ts.len()).find(|&i| ts[i] >= E && f1[i] > 0.0).ok_or(AnalysisError::GaugeTooWeak)?;

    // f1 is used as the step function taking the value f1[i] on [t_i, t_{i+1})
    let mut segments = vec![Segment { t0: ts[start], kind: SegmentKind::Plateau { g: f1[start] } }];
    let mut level = f1[start];
    let mut i = start;
    loop {
        // plateau until f1 doubles
        let Some(j) = (i + 1..ts.len()).find(|&j| f1[j] >= 2.0 * level) else { break };
        let t2 = ts[j];
        segments.push(Segment { t0: t2, kind: SegmentKind::LogLog { g0: level } });
        let lnln_t2 = t2.ln().ln();
        // first crossing of the ramp with the step function
        let mut crossing = None;
        for k in j..ts.len() - 1 {
            let g_next = ts[k + 1].ln().ln() - lnln_t2 + level;
            if g_next >= f1[k] {
                let y = (f1[k] - level + lnln_t2).exp().exp().max(ts[k]);
                crossing = Some((k, y));
                break;
            }
        }
        let Some((k, y)) = crossing else {
            i = ts.len();
            break;
        };
        level = y.ln().ln() - lnln_t2 + level;
        segments.push(Segment { t0: y, kind: SegmentKind::Plateau { g: level } });
        i = k;
    }
    if i < ts.len() {
        if let Some(Segment { kind: SegmentKind::Plateau { g }, .. }) = segments.last() {
            let g = *g;
            let t_end = ts[ts.len() - 1];
            segments.push(Segment { t0: t_end, kind: SegmentKind::LogLog { g0: g } });
        }
    }
    Ok(GaugeFunction::theta_only(Theta::Tamed(TamedTheta { segments })))
}
