use rayon::prelude::*;
use rug::Float;

use super::{slice_components, ComponentRecord, SlicePlane, SlicerError};
use crate::numeric::{IntervalComplex, PrecisionContext};
use crate::tower::TowerModel;

/// Half-width of the certified square in units of the component's
/// conformal radius.
pub const DEFAULT_ALLOWANCE: f64 = 4.0;

const MAX_SPLIT_DEPTH: u32 = 12;

/// Per-component margins, each positive when certified.
#[derive(Debug, Clone, PartialEq)]
pub struct NestingEntry {
    pub component: ComponentRecord,
    pub half_width: f64,
    /// `min |P_{n+1,s'}| / delta_{n+1} - 1` on the square's boundary.
    pub boundary_margin: f64,
    /// `1 - max |P_{n,s} - sigma| / (delta_n / m_{n+1})` on the square.
    pub intermediate_margin: f64,
    /// `1 - max |P_{n,s}| / delta_n` on the square.
    pub parent_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestingCertificate {
    pub n: usize,
    pub allowance: f64,
    pub entries: Vec<NestingEntry>,
}

impl NestingCertificate {
    pub fn min_margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.boundary_margin.min(e.intermediate_margin).min(e.parent_margin))
            .fold(f64::INFINITY, f64::min)
    }
}

/// For every depth-`(n+1)` component, prove with interval arithmetic that
/// the square of half-width `allowance * conf_radius` around its center
/// (i) has `|P_{n+1,s'}| > delta_{n+1}` on its boundary, so it contains the
/// whole component, (ii) lies in the intermediate disk
/// `|P_{n,s} - sigma| < delta_n / m_{n+1}` and (iii) lies in `|P_{n,s}| < delta_n`.
pub fn nesting_certificate(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    allowance: f64,
    cap: u64,
) -> Result<NestingCertificate, SlicerError> {
    if n + 1 > t.depth() {
        return Err(SlicerError::InvalidArgument(format!("depth {} beyond tower depth {}", n + 1, t.depth())));
    }
    let comps = slice_components(t, n + 1, plane, ctx, cap)?;
    let prec = t.working_bits(n + 1, ctx)?;
    let ctx = PrecisionContext::new(prec, ctx.max_bits().max(prec))?;
    let entries: Vec<Result<NestingEntry, SlicerError>> =
        comps.into_par_iter().map(|c| certify_component(t, n, plane, &ctx, allowance, c)).collect();
    let entries = entries.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(NestingCertificate { n, allowance, entries })
}

fn certify_component(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    allowance: f64,
    c: ComponentRecord,
) -> Result<NestingEntry, SlicerError> {
    let prec = ctx.bits();
    let sig = c.signature.clone();
    let parent = sig.prefix(n);
    let sigma: IntervalComplex = t.sigma_value(n + 1, sig.indices[n], prec);
    let h = Float::with_val(prec, &c.conf_radius * allowance);
    let square = IntervalComplex::square_around(prec, &c.center.re, &c.center.im, &h);
    let delta_next = Float::with_val(prec, &t.delta(n + 1));
    let delta = Float::with_val(prec, &t.delta(n));
    let inter = Float::with_val(prec, &delta / t.m(n + 1));
    let fail = |what: &str, measured: f64, bound: f64| SlicerError::CertificationFailure {
        signature: format!("{:?}", sig.indices),
        detail: format!("{what}: measured {measured:.6e}, bound {bound:.6e}"),
    };

    let p_next = |b: &IntervalComplex| t.eval_p(&sig, &plane.z_of(b), b, ctx);
    let p_here = |b: &IntervalComplex| t.eval_p(&parent, &plane.z_of(b), b, ctx);

    let mut boundary_min: Option<Float> = None;
    for edge in edges(&square) {
        match inf_above(&p_next, &edge, &delta_next, MAX_SPLIT_DEPTH + 4)? {
            Some(v) => boundary_min = Some(min_f(boundary_min, v)),
            None => return Err(fail("boundary of the square enters X_{n+1}", 0.0, delta_next.to_f64())),
        }
    }
    let sub_sigma = |b: &IntervalComplex| Ok(p_here(b)?.sub(&sigma));
    let inter_max = sup_below(&sub_sigma, &square, &inter, MAX_SPLIT_DEPTH)?
        .ok_or_else(|| fail("square leaves the intermediate disk", h.to_f64(), inter.to_f64()))?;
    let parent_max = sup_below(&p_here, &square, &delta, MAX_SPLIT_DEPTH)?
        .ok_or_else(|| fail("square leaves X_{n,s}", h.to_f64(), delta.to_f64()))?;

    let ratio = |a: &Float, b: &Float| Float::with_val(prec, a / b).to_f64();
    Ok(NestingEntry {
        half_width: h.to_f64(),
        boundary_margin: ratio(&boundary_min.expect("four edges"), &delta_next) - 1.0,
        intermediate_margin: 1.0 - ratio(&inter_max, &inter),
        parent_margin: 1.0 - ratio(&parent_max, &delta),
        component: c,
    })
}

fn min_f(a: Option<Float>, b: Float) -> Float {
    match a {
        Some(a) if a < b => a,
        _ => b,
    }
}

fn edges(sq: &IntervalComplex) -> [IntervalComplex; 4] {
    let (re, im) = (sq.re(), sq.im());
    let pt = |x: &Float| crate::numeric::Interval::point(x.clone());
    [
        IntervalComplex::new(re.clone(), pt(im.lo())),
        IntervalComplex::new(re.clone(), pt(im.hi())),
        IntervalComplex::new(pt(re.lo()), im.clone()),
        IntervalComplex::new(pt(re.hi()), im.clone()),
    ]
}

fn split(b: &IntervalComplex) -> Vec<IntervalComplex> {
    let (re, im) = (b.re(), b.im());
    let halves = |iv: &crate::numeric::Interval| {
        if iv.lo() == iv.hi() {
            vec![iv.clone()]
        } else {
            let m = iv.mid();
            vec![crate::numeric::Interval::new(iv.lo().clone(), m.clone()), crate::numeric::Interval::new(m, iv.hi().clone())]
        }
    };
    let mut out = Vec::new();
    for r in halves(re) {
        for i in halves(im) {
            out.push(IntervalComplex::new(r.clone(), i.clone()));
        }
    }
    out
}

type Eval<'a> = dyn Fn(&IntervalComplex) -> Result<IntervalComplex, crate::tower::TowerError> + 'a;

/// Certified `sup |f|` over `b` when it can be shown `< limit` by bisection.
fn sup_below(f: &Eval<'_>, b: &IntervalComplex, limit: &Float, depth: u32) -> Result<Option<Float>, SlicerError> {
    let up = f(b)?.abs_upper();
    if up < *limit {
        return Ok(Some(up));
    }
    if depth == 0 {
        return Ok(None);
    }
    let mut best: Option<Float> = None;
    for piece in split(b) {
        match sup_below(f, &piece, limit, depth - 1)? {
            Some(v) => best = Some(if best.as_ref().map_or(true, |x| v > *x) { v } else { best.unwrap() }),
            None => return Ok(None),
        }
    }
    Ok(best)
}

/// Certified `inf |f|` over `b` when it can be shown `> limit` by bisection.
fn inf_above(f: &Eval<'_>, b: &IntervalComplex, limit: &Float, depth: u32) -> Result<Option<Float>, SlicerError> {
    let lo = f(b)?.abs_lower();
    if lo > *limit {
        return Ok(Some(lo));
    }
    if depth == 0 {
        return Ok(None);
    }
    let mut best: Option<Float> = None;
    for piece in split(b) {
        match inf_above(f, &piece, limit, depth - 1)? {
            Some(v) => best = Some(min_f(best, v)),
            None => return Ok(None),
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints, ParameterSchedule};
    use crate::tower::AnchorSequence;
    use rug::Rational;

    #[test]
    fn default_tower_nests() {
        let s = build_schedule(&constant_radii(2), &ints(&[1, 4]), 2).unwrap();
        let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
        let plane = SlicePlane::vertical(0.4);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        for n in 0..2 {
            let cert = nesting_certificate(&t, n, &plane, &ctx, DEFAULT_ALLOWANCE, 1000).unwrap();
            assert_eq!(cert.entries.len(), if n == 0 { 2 } else { 20 });
            assert!(cert.min_margin() > 0.0, "{}", cert.min_margin());
        }
    }

    #[test]
    fn inflated_delta_fails() {
        let s = ParameterSchedule::unchecked(&constant_radii(2), &ints(&[1, 4]), 2, &[(2, Rational::from(1_000_000))]).unwrap();
        let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let r = nesting_certificate(&t, 1, &SlicePlane::vertical(0.4), &ctx, DEFAULT_ALLOWANCE, 1000);
        assert!(matches!(r, Err(SlicerError::CertificationFailure { .. })), "{r:?}");
    }
}
