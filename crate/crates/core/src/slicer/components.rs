use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Float, Rational};

use super::{slice_roots, SlicePlane, SlicerError};
use crate::numeric::{BigComplex, PrecisionContext};
use crate::tower::{Signature, TowerModel};

/// One connected component of `X_{n,s}` on the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRecord {
    pub depth: usize,
    pub signature: Signature,
    /// Which of the `2^n` roots of `P_{n,s} = 0` this component carries.
    pub branch: usize,
    pub center: BigComplex,
    pub deriv_mag: Float,
    /// `delta_n / deriv_mag`.
    pub conf_radius: Float,
    /// Half-width of the square certified to isolate the center.
    pub isolation_radius: Float,
}

impl ComponentRecord {
    pub fn center_c64(&self) -> Complex64 {
        self.center.to_c64()
    }

    /// `deriv_mag / D_n`, with `D_n = 4^n delta_n M_n / R_n` from the schedule.
    pub fn distortion_ratio(&self, t: &TowerModel) -> f64 {
        let log_d = t.schedule().log_big_d(self.depth).mid();
        let l = Float::with_val(log_d.prec(), self.deriv_mag.ln_ref()) - log_d;
        l.exp().to_f64()
    }
}

/// Components of depth `n`: one record per signature and root of `P_{n,s} = 0`,
/// ordered by signature index, then branch.
pub fn slice_components(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Vec<ComponentRecord>, SlicerError> {
    let sigs = t.signatures(n, cap)?;
    let delta = t.delta(n);
    let sets: Vec<Result<Vec<ComponentRecord>, SlicerError>> = sigs
        .par_iter()
        .map(|s| {
            let set = slice_roots(t, s, plane, Complex64::new(0.0, 0.0), ctx)?;
            Ok(set
                .roots
                .into_iter()
                .enumerate()
                .map(|(branch, r)| {
                    let deriv_mag = r.deriv.abs();
                    let conf_radius = Float::with_val(deriv_mag.prec(), &delta) / &deriv_mag;
                    ComponentRecord {
                        depth: n,
                        signature: s.clone(),
                        branch,
                        center: r.w,
                        deriv_mag,
                        conf_radius,
                        isolation_radius: r.radius,
                    }
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for s in sets {
        out.extend(s?);
    }
    Ok(out)
}

/// Atoms at component centers with weight `1 / (2^n #S_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceMeasure {
    pub depth: usize,
    pub atoms: Vec<(Complex64, Rational)>,
}

impl SliceMeasure {
    pub fn from_components(t: &TowerModel, n: usize, comps: &[ComponentRecord]) -> Self {
        let weight = Rational::from((rug::Integer::from(1), t.signature_count(n) << n as u32));
        Self { depth: n, atoms: comps.iter().map(|c| (c.center_c64(), weight.clone())).collect() }
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|(_, m)| m).sum()
    }

    /// Mass of the closed ball `|w - p| <= r`.
    pub fn ball_mass(&self, p: Complex64, r: f64) -> Rational {
        self.atoms.iter().filter(|(w, _)| (w - p).norm() <= r).map(|(_, m)| m).sum()
    }
}

pub fn slice_measure(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<SliceMeasure, SlicerError> {
    let comps = slice_components(t, n, plane, ctx, cap)?;
    Ok(SliceMeasure::from_components(t, n, &comps))
}

/// Depth-`n` atoms aggregated by the depth-`k` component containing them;
/// entry `i` belongs to the `i`-th record of `slice_components(t, k, ..)`.
pub fn measure_stability(
    t: &TowerModel,
    n: usize,
    k: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Vec<Rational>, SlicerError> {
    assert!(k <= n, "ancestor depth above the atom depth");
    let fine = slice_components(t, n, plane, ctx, cap)?;
    let coarse = slice_components(t, k, plane, ctx, cap)?;
    let measure = SliceMeasure::from_components(t, n, &fine);
    let prec = t.working_bits(n, ctx)?;
    let ctx = PrecisionContext::new(prec, ctx.max_bits().max(prec))?;
    let delta_k = Float::with_val(prec, &t.delta(k));
    let mut totals = vec![Rational::new(); coarse.len()];
    for (c, (_, weight)) in fine.iter().zip(&measure.atoms) {
        let prefix = c.signature.prefix(k);
        let owner = coarse
            .iter()
            .enumerate()
            .filter(|(_, a)| a.signature == prefix)
            .min_by(|(_, a), (_, b)| a.center.dist(&c.center).total_cmp(&b.center.dist(&c.center)))
            .map(|(i, _)| i)
            .expect("every prefix has components");
        let z = plane.z_of(&c.center);
        if t.eval_p(&prefix, &z, &c.center, &ctx)?.abs() >= delta_k {
            return Err(SlicerError::CertificationFailure {
                signature: format!("{:?}", c.signature.indices),
                detail: format!("atom outside its depth-{k} ancestor"),
            });
        }
        totals[owner] += weight;
    }
    Ok(totals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Plateau,
    Quadratic,
}

/// Ball masses around `p` for increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProfile {
    pub p: Complex64,
    pub radii: Vec<f64>,
    pub masses: Vec<Rational>,
    pub regimes: Vec<Option<Regime>>,
}

pub fn mass_profile(measure: &SliceMeasure, p: Complex64, radii: &[f64]) -> Result<MassProfile, SlicerError> {
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SlicerError::InvalidArgument("radii must be positive and increasing".into()));
    }
    Ok(MassProfile {
        p,
        radii: radii.to_vec(),
        masses: radii.iter().map(|&r| measure.ball_mass(p, r)).collect(),
        regimes: vec![None; radii.len()],
    })
}

/// Range of `|P_{n,s} - sigma| / (delta_n / m_{n+1})` over sample points of
/// depth-`(n+1)` components: their centers and points at `0.4 rho` from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XnsReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub samples: usize,
}

impl XnsReport {
    pub fn holds(&self) -> bool {
        self.min_ratio >= 1.0 / 40f64.sqrt() && self.max_ratio < 1.0
    }
}

pub fn xns_bracket_check(
    t: &TowerModel,
    n: usize,
    plane: &SlicePlane,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<XnsReport, SlicerError> {
    let comps = slice_components(t, n + 1, plane, ctx, cap)?;
    let prec = t.working_bits(n + 1, ctx)?;
    let ctx = PrecisionContext::new(prec, ctx.max_bits().max(prec))?;
    let scale = Float::with_val(prec, &t.delta(n)) / t.m(n + 1);
    let delta_next = Float::with_val(prec, &t.delta(n + 1));
    let mut rep = XnsReport { min_ratio: f64::INFINITY, max_ratio: 0.0, samples: 0 };
    for c in &comps {
        let parent = c.signature.prefix(n);
        let sigma: BigComplex = t.sigma_value(n + 1, c.signature.indices[n], prec);
        let mut points = vec![c.center.clone()];
        for j in 0..8 {
            let off = Complex64::from_polar(0.4 * c.conf_radius.to_f64(), j as f64 * std::f64::consts::FRAC_PI_4);
            points.push(c.center.add(&BigComplex::from_c64(prec, off)));
        }
        for w in points {
            let z = plane.z_of(&w);
            // only points certified to lie in X_{n+1}
            if t.eval_p(&c.signature, &z, &w, &ctx)?.abs() >= delta_next {
                continue;
            }
            let q = t.eval_p(&parent, &z, &w, &ctx)?.sub(&sigma).abs();
            let ratio = Float::with_val(prec, &q / &scale).to_f64();
            rep.min_ratio = rep.min_ratio.min(ratio);
            rep.max_ratio = rep.max_ratio.max(ratio);
            rep.samples += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints};
    use crate::tower::AnchorSequence;

    fn tower(ms: &[u64]) -> TowerModel {
        let s = build_schedule(&constant_radii(ms.len()), &ints(ms), ms.len()).unwrap();
        TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap()
    }

    #[test]
    fn depth_zero_and_one() {
        let t = tower(&[1]);
        let plane = SlicePlane::vertical(0.4);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let c0 = slice_components(&t, 0, &plane, &ctx, 100).unwrap();
        assert_eq!(c0.len(), 1);
        assert_eq!(c0[0].conf_radius.to_f64(), 0.5);
        let c1 = slice_components(&t, 1, &plane, &ctx, 100).unwrap();
        assert_eq!(c1.len(), 2);
        for c in &c1 {
            assert!((c.deriv_mag.to_f64() - 2.0 * 0.05f64.sqrt()).abs() < 1e-14);
            assert!((c.conf_radius.to_f64() - 0.013975424859373686).abs() < 1e-15);
        }
        let mu = slice_measure(&t, 1, &plane, &ctx, 100).unwrap();
        assert_eq!(mu.total_mass(), 1);
        let prof = mass_profile(&mu, Complex64::new(0.05f64.sqrt(), 0.0), &[0.05, 2.0]).unwrap();
        assert_eq!(prof.masses, vec![Rational::from((1, 2)), Rational::from(1)]);
    }

    #[test]
    fn xns_bracket_holds() {
        let t = tower(&[1, 4]);
        let plane = SlicePlane::vertical(0.4);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        let rep = xns_bracket_check(&t, 1, &plane, &ctx, 100).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.samples, 20 * 9);
    }

    #[test]
    fn ancestors_keep_their_mass() {
        let t = tower(&[1, 4, 1]);
        let plane = SlicePlane::vertical(0.4);
        let ctx = PrecisionContext::new(128, 4096).unwrap();
        for k in 0..3 {
            let totals = measure_stability(&t, 3, k, &plane, &ctx, 100).unwrap();
            let expect = Rational::from((rug::Integer::from(1), t.signature_count(k) << k as u32));
            assert!(totals.iter().all(|w| *w == expect), "k = {k}");
        }
    }
}
