//! One function per subcommand. Each writes its artifacts and returns the
//! bounds it asserted; the caller turns failures into records and the exit code.

use anyhow::Result;
use num_complex::Complex64;
use wermer_core::analysis::{
    box_dimension_slice, convergence_report, harmonic_gap_check, jensen_table, modulus_from_h, tame_gauge,
    two_regime_check, AnalysisError, ConvergenceReport, GaugeFunction, Theta, DECAY_RATIO, SUBHARMONIC_SLACK,
};
use wermer_core::numeric::decimal_string;
use wermer_core::schedule::{
    build_schedule, capacity_drift, validate_schedule, Multiplicity, ParameterSchedule, ScheduleError,
};
use wermer_core::slicer::{
    measure_stability, nesting_certificate, render_escape, slice_components, slice_roots, winding_probe, Regime,
    SliceMeasure, SlicerError, WindingOutcome, DEFAULT_ALLOWANCE, UNKNOWN_PIXEL,
};
use wermer_core::tower::{Signature, TowerModel};

use crate::config::RunConfig;
use crate::output::{f, Check, Csv, Sink};

/// Additive constant in the convergence-rate bound `(|log r_{n+1}| + B) / 2^n`.
const RATE_B: f64 = 3.0;
const JENSEN_TOL: f64 = 1e-6;
const GAUGE_TOL: f64 = 1e-12;
const CAPACITY_BOUND: f64 = 2.2;
const ALPHA_SAMPLES: usize = 8;

fn sig(s: &Signature) -> String {
    if s.indices.is_empty() {
        return "-".into();
    }
    s.indices.iter().map(u32::to_string).collect::<Vec<_>>().join(":")
}

fn log10(x: f64) -> f64 {
    x / std::f64::consts::LN_10
}

/// est1 and est2 at every step, in the order the schedule verifies them.
///
/// The verdict is the certified one from [`ParameterSchedule::verify`]; the
/// measured columns are `f64` renderings of the same quantities.
fn schedule_checks(s: &ParameterSchedule) -> Vec<Check> {
    let failure = match s.verify() {
        Ok(()) => None,
        Err(ScheduleError::InvalidSchedule { n, estimate }) => Some((n, estimate)),
        Err(e) => {
            return vec![Check::new("schedule", "schedule", "-".into(), e.to_string(), "valid".into(), false)];
        }
    };
    let mut out = Vec::new();
    for k in 0..s.depth() {
        let ld = |n: usize| s.log_delta(n).mid_f64();
        let lq = 2.0 * ld(k) - 2.0 * s.log_m(k + 1).mid_f64();
        let le = s.log_eps(k + 1).mid_f64();
        let est1 = (ld(k + 1) - lq).exp() + (le - lq).exp();
        let est2 = ld(k + 1) - le;
        for (name, measured, bound) in [("est1", est1, "<1".to_string()), ("est2", est2, format!("<{}", f(s.log_r(k + 1).mid_f64())))] {
            let pass = match failure {
                None => true,
                Some((n, e)) if n == k => e != name,
                Some((n, _)) => k < n,
            };
            out.push(Check::new(name, "schedule", format!("n={k}"), f(measured), bound, pass));
            if !pass {
                return out;
            }
        }
        if failure.is_some_and(|(n, _)| n == k) {
            break;
        }
    }
    out
}

/// The verified schedule's tower, or the failing schedule checks.
fn tower(cfg: &RunConfig) -> Result<(Option<TowerModel>, Vec<Check>)> {
    let s = cfg.schedule_unchecked()?;
    let checks = schedule_checks(&s);
    if checks.iter().any(|c| !c.pass) {
        return Ok((None, checks));
    }
    Ok((Some(cfg.tower(s)?), checks))
}

pub fn schedule(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let s = cfg.schedule_unchecked()?;
    let checks = schedule_checks(&s);
    let rep = validate_schedule(&s);
    let mut t = Csv::new(&[
        "n",
        "r",
        "m",
        "log10_delta",
        "log10_eps",
        "tail_sum",
        "radii_separate",
        "drift",
        "tail_converges",
        "super_exponential_m",
    ]);
    for n in 0..=s.depth() {
        let drift = if s.is_ordinary() { capacity_drift(&s, n).map(f).unwrap_or_else(|_| "-".into()) } else { "-".into() };
        let (r, m, le, tail) = if n == 0 {
            ("-".into(), "-".into(), "-".into(), f(0.0))
        } else {
            (s.r(n).to_string(), s.m(n).to_string(), f(log10(s.log_eps(n).mid_f64())), f(rep.tail_sum[n - 1]))
        };
        let sep = rep.radii_separate.get(n).map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        t.row(vec![
            n.to_string(),
            r,
            m,
            f(log10(s.log_delta(n).mid_f64())),
            le,
            tail,
            sep,
            drift,
            rep.tail_converges.to_string(),
            rep.super_exponential_m.to_string(),
        ]);
    }
    if !rep.tail_converges {
        eprintln!("warning: tail_converges=false (sum |log r_n| / 2^n not certified convergent)");
    }
    sink.csv("schedule", &t)?;
    Ok(checks)
}

pub fn certify(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let plane = cfg.plane()?;
    let ctx = cfg.precision()?;
    let mut table = Csv::new(&[
        "n",
        "signature",
        "branch",
        "center_re",
        "center_im",
        "half_width",
        "boundary_margin",
        "intermediate_margin",
        "parent_margin",
    ]);
    for n in 0..t.depth() {
        match nesting_certificate(&t, n, &plane, &ctx, DEFAULT_ALLOWANCE, cfg.cap) {
            Ok(cert) => {
                for e in &cert.entries {
                    table.row(vec![
                        n.to_string(),
                        sig(&e.component.signature),
                        e.component.branch.to_string(),
                        decimal_string(&e.component.center.re, 30),
                        decimal_string(&e.component.center.im, 30),
                        f(e.half_width),
                        f(e.boundary_margin),
                        f(e.intermediate_margin),
                        f(e.parent_margin),
                    ]);
                }
                let m = cert.min_margin();
                checks.push(Check::new("nesting", "slicer", format!("n={n}"), f(m), ">0".into(), m > 0.0));
            }
            Err(e @ SlicerError::CertificationFailure { .. }) => {
                checks.push(Check::new("nesting", "slicer", format!("n={n}"), e.to_string(), "certified".into(), false));
            }
            Err(e) => return Err(e.into()),
        }
    }
    sink.csv("certify", &table)?;
    Ok(checks)
}

/// `ALPHA_SAMPLES` points spiralling inside `|alpha| < 2 delta_n`.
fn alphas(delta: f64) -> Vec<Complex64> {
    (0..ALPHA_SAMPLES)
        .map(|j| Complex64::from_polar(2.0 * delta * (j + 1) as f64 / (ALPHA_SAMPLES + 1) as f64, 0.3 + 0.7 * j as f64))
        .collect()
}

pub fn roots(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let plane = cfg.plane()?;
    let ctx = cfg.precision()?;
    let mut table =
        Csv::new(&["n", "signature", "alpha_re", "alpha_im", "branch", "w_re", "w_im", "radius", "deriv_abs"]);
    for n in 0..=t.depth() {
        let sigs = t.signatures(n, cfg.cap)?;
        let mut chosen = vec![sigs[0].clone()];
        if sigs.len() > 1 {
            chosen.push(sigs[sigs.len() - 1].clone());
        }
        for s in &chosen {
            for a in alphas(t.delta(n).to_f64()) {
                let loc = format!("n={n};signature={};alpha=({},{})", sig(s), f(a.re), f(a.im));
                match slice_roots(&t, s, &plane, a, &ctx) {
                    Ok(set) => {
                        for (b, r) in set.roots.iter().enumerate() {
                            table.row(vec![
                                n.to_string(),
                                sig(s),
                                f(a.re),
                                f(a.im),
                                b.to_string(),
                                decimal_string(&r.w.re, 30),
                                decimal_string(&r.w.im, 30),
                                f(r.radius.to_f64()),
                                f(r.deriv.abs().to_f64()),
                            ]);
                        }
                        let k = set.roots.len();
                        checks.push(Check::new("covering_degree", "slicer", loc, k.to_string(), format!("={}", 1u64 << n), k == 1 << n));
                    }
                    Err(e @ SlicerError::CertificationFailure { .. }) => {
                        checks.push(Check::new("root_certification", "slicer", loc, e.to_string(), "certified".into(), false));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    sink.csv("roots", &table)?;
    Ok(checks)
}

pub fn measure(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let plane = cfg.plane()?;
    let ctx = cfg.precision()?;
    let mut table = Csv::new(&["n", "signature", "branch", "w_re", "w_im", "conf_radius", "mass"]);
    for n in 0..=t.depth() {
        let comps = slice_components(&t, n, &plane, &ctx, cfg.cap)?;
        let mu = SliceMeasure::from_components(&t, n, &comps);
        for (c, (_, mass)) in comps.iter().zip(&mu.atoms) {
            table.row(vec![
                n.to_string(),
                sig(&c.signature),
                c.branch.to_string(),
                decimal_string(&c.center.re, 30),
                decimal_string(&c.center.im, 30),
                f(c.conf_radius.to_f64()),
                mass.to_string(),
            ]);
        }
        let total = mu.total_mass();
        checks.push(Check::new("total_mass", "slicer", format!("n={n}"), total.to_string(), "=1".into(), total == 1));
    }
    // depth-n atoms grouped by their depth-k ancestors: each ancestor keeps its own mass
    let n = t.depth();
    for k in 0..n {
        let totals = measure_stability(&t, n, k, &plane, &ctx, cfg.cap)?;
        let want = rug::Rational::from((1, t.signature_count(k) << k as u32));
        let bad = totals.iter().find(|m| **m != want);
        let measured = bad.map(|m| m.to_string()).unwrap_or_else(|| want.to_string());
        checks.push(Check::new("mass_stability", "slicer", format!("n={n};k={k}"), measured, format!("={want}"), bad.is_none()));
    }
    sink.csv("measure", &table)?;
    Ok(checks)
}

pub fn profile(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let plane = cfg.plane()?;
    let ctx = cfg.precision()?;
    let mut table = Csv::new(&["n", "p_re", "p_im", "r", "mass", "regime", "c_needed"]);
    let mut fits = Csv::new(&["n", "rad_next_min", "rad_int_max", "rad_min", "plateau_c", "quadratic_c"]);
    // C^n is only informative from n = 1 on
    for n in 1..t.depth() {
        let rep = match two_regime_check(&t, n, &plane, cfg.radii, &ctx, cfg.cap) {
            Ok(rep) => rep,
            Err(AnalysisError::ScaleOverlap { rad_next, rad_int, rad, .. }) => {
                let measured = format!("{};{};{}", f(rad_next), f(rad_int), f(rad));
                checks.push(Check::new("scale_separation", "analysis", format!("n={n}"), measured, "increasing".into(), false));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let atom = rug::Rational::from((1, t.signature_count(n + 1) << (n + 1) as u32));
        let mut quantized = true;
        for s in &rep.samples {
            let regime = match s.regime {
                Regime::Plateau => {
                    quantized &= (rug::Rational::from(&s.mass / &atom)).is_integer();
                    "plateau"
                }
                Regime::Quadratic => "quadratic",
            };
            table.row(vec![n.to_string(), f(s.p.re), f(s.p.im), f(s.r), s.mass.to_string(), regime.into(), f(s.c_needed)]);
        }
        fits.row(vec![
            n.to_string(),
            f(rep.rad_next_min),
            f(rep.rad_int_max),
            f(rep.rad_min),
            f(rep.plateau_c),
            f(rep.quadratic_c),
        ]);
        let loc = format!("n={n}");
        let bound = format!("<={}", f(cfg.regime_c));
        checks.push(Check::new("plateau_quantization", "analysis", loc.clone(), quantized.to_string(), format!("multiples_of_{atom}"), quantized));
        checks.push(Check::new("plateau_constant", "analysis", loc.clone(), f(rep.plateau_c), bound.clone(), rep.plateau_c <= cfg.regime_c));
        checks.push(Check::new("quadratic_constant", "analysis", loc, f(rep.quadratic_c), bound, rep.quadratic_c <= cfg.regime_c));
    }
    sink.csv("profile", &table)?;
    sink.csv("profile_fit", &fits)?;
    Ok(checks)
}

fn convergence_rows(kind: &str, rep: &ConvergenceReport, table: &mut Csv, checks: &mut Vec<Check>, ratios: bool) {
    for r in &rep.rows {
        let scale = (1u64 << r.n) as f64;
        let bound = (r.bound * scale + RATE_B) / scale;
        table.row(vec![kind.into(), r.n.to_string(), f(r.gap_u), f(r.gap_v), f(bound)]);
        checks.push(Check::new("convergence_rate", "analysis", format!("{kind};n={}", r.n), f(r.gap_u), format!("<={}", f(bound)), r.gap_u <= bound));
    }
    if ratios {
        for (n, q) in rep.ratios() {
            let loc = format!("{kind};n={n}");
            checks.push(Check::new("gap_ratio", "analysis", loc, f(q), format!("<={}", f(DECAY_RATIO)), q <= DECAY_RATIO));
        }
    }
}

pub fn converge(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let plane = cfg.plane()?;
    let ctx = cfg.precision()?;
    let mut table = Csv::new(&["tower", "n", "gap_u", "gap_v", "bound"]);
    let mut gaps = Csv::new(&["n", "max_gap", "bound", "argmax_re", "argmax_im"]);
    if t.depth() >= 1 {
        let rep = convergence_report(&t, t.depth() - 1, &plane, cfg.slice_grid, &ctx, cfg.cap)?;
        convergence_rows("config", &rep, &mut table, &mut checks, t.schedule().is_ordinary());
    }
    for n in 0..t.depth() {
        let g = harmonic_gap_check(&t, n, &plane, cfg.slice_grid, &ctx, cfg.cap)?;
        gaps.row(vec![n.to_string(), f(g.max_gap), f(g.bound), f(g.argmax.re), f(g.argmax.im)]);
        checks.push(Check::new("harmonic_gap", "analysis", format!("n={n}"), f(g.max_gap), format!("<={}", f(g.bound)), g.holds()));
    }
    // the rate and decay bounds are stated for ordinary towers
    if !t.schedule().is_ordinary() && cfg.converge_depth >= 1 {
        let d = cfg.converge_depth;
        let radii = if cfg.r.contains(',') { cfg.radii_list()? } else { RunConfig { depth: d, ..cfg.clone() }.radii_list()? };
        let s = build_schedule(&radii, &vec![Multiplicity::Int(1); d], d)?;
        let ord = cfg.tower(s)?;
        let rep = convergence_report(&ord, d - 1, &plane, cfg.slice_grid, &ctx, cfg.cap)?;
        convergence_rows("ordinary", &rep, &mut table, &mut checks, true);
    }
    sink.csv("converge", &table)?;
    sink.csv("harmonic_gap", &gaps)?;
    Ok(checks)
}

pub fn gauge(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let k = cfg.gauge_points.max(2);
    let radii: Vec<f64> = (0..k).map(|i| (1e-8f64.ln() + (0.4f64.ln() - 1e-8f64.ln()) * i as f64 / (k - 1) as f64).exp()).collect();
    let square = GaugeFunction::power(2.0);
    let three_halves = GaugeFunction::power(1.5);
    let mut table = Csv::new(&["r", "psi_s2", "closed_s2", "psi_s3_2", "closed_s3_2"]);
    let (mut err2, mut err32) = (0.0f64, 0.0f64);
    for &r in &radii {
        let p2 = modulus_from_h(&square, r)?;
        let c2 = 2.0 * r + r * r.ln().abs();
        let p32 = modulus_from_h(&three_halves, r)?;
        let c32 = 2.0 * 2f64.sqrt() * r.sqrt() + 2.0 * r.sqrt() - 2.0 * r;
        err2 = err2.max((p2 - c2).abs());
        err32 = err32.max((p32 - c32).abs());
        table.row(vec![f(r), f(p2), f(c2), f(p32), f(c32)]);
    }
    let tol = format!("<={}", f(GAUGE_TOL));
    let mut checks = vec![
        Check::new("modulus_closed_form", "analysis", "h=s^2".into(), f(err2), tol.clone(), err2 <= GAUGE_TOL),
        Check::new("modulus_closed_form", "analysis", "h=s^3/2".into(), f(err32), tol, err32 <= GAUGE_TOL),
    ];
    let divergent = matches!(modulus_from_h(&GaugeFunction::power(1.0), 0.1), Err(AnalysisError::DivergentGauge));
    checks.push(Check::new("divergent_gauge_rejected", "analysis", "h=s".into(), divergent.to_string(), "true".into(), divergent));

    // psi = r log^2(1/r): theta_0 = |log r|, tamed below it; tabulated in t = -log r
    let tamed = tame_gauge(&GaugeFunction::new(1.0, Theta::AbsLogPow(2.0)))?;
    let mut tame = Csv::new(&["t", "theta0", "theta2"]);
    // the construction starts at its first segment; before that theta_2 is a clamped constant
    let t_lo = match &tamed.theta {
        Theta::Tamed(g) => g.segments[0].t0,
        _ => std::f64::consts::E,
    };
    let mut worst = 0.0f64;
    for i in 0..k {
        let t = (t_lo.ln() + (1e12f64.ln() - t_lo.ln()) * i as f64 / (k - 1) as f64).exp();
        let th2 = tamed.theta.ln_at(t).exp();
        worst = worst.max(th2 / t);
        tame.row(vec![f(t), f(t), f(th2)]);
    }
    checks.push(Check::new("tamed_below_theta0", "analysis", "psi=r_log^2".into(), f(worst), "<=1".into(), worst <= 1.0));
    sink.csv("gauge", &table)?;
    sink.csv("gauge_tame", &tame)?;
    Ok(checks)
}

pub fn jensen(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let ctx = cfg.precision()?;
    let mut table = Csv::new(&[
        "n",
        "p_z_re",
        "p_w_re",
        "p_w_im",
        "r",
        "quadrature",
        "quadrature_error",
        "nodes",
        "mass_integral",
        "difference",
    ]);
    for n in 0..=cfg.jensen_depth.min(t.depth()) {
        let rows = jensen_table(&t, n, cfg.z0.re, cfg.jensen_count, cfg.seed, &ctx, cfg.cap)?;
        let (mut diff, mut low) = (0.0f64, f64::INFINITY);
        for r in &rows {
            diff = diff.max(r.pair.difference());
            low = low.min(r.pair.quadrature.value);
            table.row(vec![
                n.to_string(),
                f(r.p.0.re),
                f(r.p.1.re),
                f(r.p.1.im),
                f(r.r),
                f(r.pair.quadrature.value),
                f(r.pair.quadrature.error),
                r.pair.quadrature.nodes.to_string(),
                f(r.pair.mass_integral),
                f(r.pair.difference()),
            ]);
        }
        let loc = format!("n={n}");
        checks.push(Check::new("jensen_agreement", "analysis", loc.clone(), f(diff), format!("<={}", f(JENSEN_TOL)), diff <= JENSEN_TOL));
        checks.push(Check::new("subharmonic", "analysis", loc, f(low), format!(">={}", f(-SUBHARMONIC_SLACK)), low >= -SUBHARMONIC_SLACK));
    }
    sink.csv("jensen", &table)?;
    Ok(checks)
}

pub fn capacity(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let d = cfg.capacity_depth;
    let s = build_schedule(&cfg.capacity_radii()?, &vec![Multiplicity::Int(1); d], d)?;
    let rep = validate_schedule(&s);
    let mut table = Csv::new(&["n", "drift", "tail_sum"]);
    let mut checks = Vec::new();
    for n in 1..=d {
        let v = capacity_drift(&s, n)?;
        table.row(vec![n.to_string(), f(v), f(rep.tail_sum[n - 1])]);
        checks.push(Check::new("capacity_drift", "schedule", format!("n={n}"), f(v.abs()), format!("<={}", f(CAPACITY_BOUND)), v.abs() <= CAPACITY_BOUND));
    }
    sink.csv("capacity", &table)?;
    Ok(checks)
}

pub fn dimension(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, mut checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let depths: Vec<usize> = (0..=t.depth()).collect();
    let est = box_dimension_slice(&t, &cfg.plane()?, &depths, &cfg.precision()?, cfg.cap)?;
    let mut table = Csv::new(&["depth", "count", "radius", "estimate"]);
    for e in &est {
        table.row(vec![e.depth.to_string(), f(e.count), f(e.radius), f(e.estimate)]);
        let ok = e.estimate.is_finite() && (0.0..=2.0).contains(&e.estimate);
        checks.push(Check::new("dimension_range", "analysis", format!("n={}", e.depth), f(e.estimate), "[0,2]".into(), ok));
    }
    sink.csv("dimension", &table)?;
    Ok(checks)
}

pub fn render(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Check>> {
    let (tower, checks) = tower(cfg)?;
    let Some(t) = tower else { return Ok(checks) };
    let n = cfg.render_size;
    let raster = render_escape(&t, &cfg.plane()?, n, n, t.depth(), &cfg.precision()?)?;
    sink.bytes("render.pgm", &raster.to_pgm())?;
    let mut hist = Csv::new(&["pixel", "count"]);
    let mut counts = std::collections::BTreeMap::new();
    for p in &raster.pixels {
        *counts.entry(*p).or_insert(0usize) += 1;
    }
    for (p, c) in counts {
        let label = if p == UNKNOWN_PIXEL { "unknown".to_string() } else { p.to_string() };
        hist.row(vec![label, c.to_string()]);
    }
    sink.csv("render_histogram", &hist)?;
    Ok(checks)
}

/// Square-root obstruction on the two reference triples.
pub fn winding(sink: &mut Sink) -> Result<Vec<Check>> {
    let mut table = Csv::new(&["eps", "r", "delta", "outcome", "swapped", "margin_or_residual"]);
    let mut checks = Vec::new();
    for (eps, r, delta, want_obstructed) in [(1.0, 0.1, 0.05, true), (1.0, 0.1, 0.11, false)] {
        let loc = format!("eps={eps};r={r};delta={delta}");
        let (ok, row) = match winding_probe(eps, r, delta)? {
            WindingOutcome::Obstructed { swapped, separation_margin, .. } => {
                (want_obstructed && swapped, vec!["obstructed".to_string(), swapped.to_string(), f(separation_margin)])
            }
            WindingOutcome::Selection { residual, .. } => {
                (!want_obstructed && residual < delta, vec!["selection".to_string(), "-".to_string(), f(residual)])
            }
        };
        let want = if want_obstructed { "obstructed_swapped" } else { "selection" };
        checks.push(Check::new("winding", "slicer", loc, row[0].clone(), want.into(), ok));
        let mut cells = vec![f(eps), f(r), f(delta)];
        cells.extend(row);
        table.row(cells);
    }
    sink.csv("winding", &table)?;
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphas_stay_inside() {
        let a = alphas(0.5);
        assert_eq!(a.len(), ALPHA_SAMPLES);
        assert!(a.iter().all(|z| z.norm() < 1.0));
    }

    #[test]
    fn corrupted_delta_names_est1() {
        let cfg = RunConfig::parse("schedule.corrupt_delta=2:1000000").unwrap();
        let checks = schedule_checks(&cfg.schedule_unchecked().unwrap());
        let bad: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].invariant, "est1");
        assert_eq!(bad[0].location, "n=1");
    }
}
