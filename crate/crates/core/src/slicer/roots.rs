use num_complex::Complex64;
use rug::{Float, Rational};

use super::{SlicePlane, SlicerError};
use crate::numeric::{rational_from_f64, BigComplex, IntervalComplex, PrecisionContext};
use crate::tower::{Signature, TowerModel};

/// A root `w` of `P_{n,s} = alpha` on the slice, isolated in the square of
/// half-width `radius` around it.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedRoot {
    pub w: BigComplex,
    pub radius: Float,
    /// `d/dw P_{n,s}(z0 - gamma w, w)` at the root.
    pub deriv: BigComplex,
}

impl CertifiedRoot {
    fn square(&self) -> IntervalComplex {
        IntervalComplex::square_around(self.w.prec(), &self.w.re, &self.w.im, &self.radius)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceRootSet {
    pub signature: Signature,
    pub alpha: Complex64,
    pub roots: Vec<CertifiedRoot>,
}

const FIXED_POINT_ITERS: usize = 200;
const NEWTON_ITERS: usize = 80;

/// All `2^n` roots of `P_{n,s}(z0 - gamma w, w) = alpha`, each certified by
/// a Krawczyk test on a square, with pairwise disjoint squares.
pub fn slice_roots(
    t: &TowerModel,
    s: &Signature,
    plane: &SlicePlane,
    alpha: Complex64,
    ctx: &PrecisionContext,
) -> Result<SliceRootSet, SlicerError> {
    t.validate_signature(s)?;
    plane.check_boundary_regime()?;
    let n = s.depth();
    let (ar, ai) = (rational_from_f64(alpha.re), rational_from_f64(alpha.im));
    let delta = t.delta(n);
    let a2 = Rational::from(ar.square_ref()) + Rational::from(ai.square_ref());
    if a2 >= Rational::from(delta.square_ref()) * 4u32 {
        return Err(SlicerError::RangeError { n, alpha_abs: alpha.norm(), bound: 2.0 * delta.to_f64() });
    }
    let prec = t.working_bits(n, ctx)?;
    let ctx = PrecisionContext::new(prec, ctx.max_bits().max(prec))?;
    let alpha_pt = BigComplex::from_rationals(prec, &ar, &ai);
    let alpha_iv = IntervalComplex::from_rationals(prec, &ar, &ai);

    let mut roots = Vec::with_capacity(1 << n);
    for branch in 0..(1u64 << n) {
        let seed = backward_seed(t, s, plane, &alpha_pt, branch, prec);
        let w = newton(t, s, plane, &alpha_pt, seed, &ctx)?;
        let root = certify(t, s, plane, &alpha_iv, w, &ctx)?;
        roots.push(root);
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if !roots[i].square().disjoint(&roots[j].square()) {
                return Err(SlicerError::CertificationFailure {
                    signature: format!("{:?}", s.indices),
                    detail: format!("root squares {j} and {i} overlap"),
                });
            }
        }
    }
    Ok(SliceRootSet { signature: s.clone(), alpha, roots })
}

/// Backward recursion `P_{k-1} = sigma_k +- sqrt(P_k + eps_k A_k)`, with the
/// `w`-dependence of `A_k` resolved by fixed-point iteration. Bit `k - 1` of
/// `branch` picks the initial sign at level `k`; later iterations follow the
/// branch continuously.
fn backward_seed(t: &TowerModel, s: &Signature, plane: &SlicePlane, alpha: &BigComplex, branch: u64, prec: u32) -> BigComplex {
    let n = s.depth();
    let mut w = BigComplex::zero(prec);
    let mut prev: Vec<Option<BigComplex>> = vec![None; n + 1];
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));
    for _ in 0..FIXED_POINT_ITERS {
        let z = plane.z_of(&w);
        let c = t.level_terms(n, &z, &w, prec);
        let mut target = alpha.clone();
        for k in (1..=n).rev() {
            let g = target.add(&c[k - 1]).sqrt();
            let chosen = match &prev[k] {
                Some(gp) => {
                    let neg = g.neg();
                    if g.dist(gp) <= neg.dist(gp) {
                        g
                    } else {
                        neg
                    }
                }
                None if (branch >> (k - 1)) & 1 == 1 => g.neg(),
                None => g,
            };
            let sigma: BigComplex = t.sigma_value(k, s.indices[k - 1], prec);
            target = sigma.add(&chosen);
            prev[k] = Some(chosen);
        }
        let moved = target.dist(&w);
        w = target;
        if moved < tol {
            break;
        }
    }
    w
}

fn newton(
    t: &TowerModel,
    s: &Signature,
    plane: &SlicePlane,
    alpha: &BigComplex,
    mut w: BigComplex,
    ctx: &PrecisionContext,
) -> Result<BigComplex, SlicerError> {
    let prec = ctx.bits();
    let dz: BigComplex = plane.dz_dw(prec);
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    for _ in 0..NEWTON_ITERS {
        let (p, dp) = t.eval_p_dp(s, &plane.z_of(&w), &w, &dz, ctx)?;
        let step = p.sub(alpha).div(&dp);
        w = w.sub(&step);
        if step.abs() < tol {
            break;
        }
    }
    Ok(w)
}

/// Krawczyk test on squares of shrinking half-width around `w`.
fn certify(
    t: &TowerModel,
    s: &Signature,
    plane: &SlicePlane,
    alpha: &IntervalComplex,
    w: BigComplex,
    ctx: &PrecisionContext,
) -> Result<CertifiedRoot, SlicerError> {
    let prec = ctx.bits();
    let dz_pt: BigComplex = plane.dz_dw(prec);
    let dz_iv: IntervalComplex = plane.dz_dw(prec);
    let (_, dp) = t.eval_p_dp(s, &plane.z_of(&w), &w, &dz_pt, ctx)?;
    let n = s.depth();
    let rho = Float::with_val(prec, &t.delta(n)) / dp.abs();
    let y = dp.recip();
    let y_iv = IntervalComplex::from_floats(&y.re, &y.im);
    let c_iv = IntervalComplex::from_floats(&w.re, &w.im);
    let (fc, _) = t.eval_p_dp(s, &plane.z_of(&c_iv), &c_iv, &dz_iv, ctx)?;
    let fc = fc.sub(alpha);
    let one = IntervalComplex::from_rationals(prec, &Rational::from(1), &Rational::new());
    let mut h = Float::with_val(prec, &rho / 4u32);
    let floor = Float::with_val(prec, &rho * 1e-15);
    while h > floor {
        let x = IntervalComplex::square_around(prec, &w.re, &w.im, &h);
        let (_, dx) = t.eval_p_dp(s, &plane.z_of(&x), &x, &dz_iv, ctx)?;
        let k = c_iv.sub(&y_iv.mul(&fc)).add(&one.sub(&y_iv.mul(&dx)).mul(&x.sub(&c_iv)));
        if x.interior_contains(&k) {
            return Ok(CertifiedRoot { w, radius: h, deriv: dp });
        }
        h /= 4u32;
    }
    Err(SlicerError::CertificationFailure {
        signature: format!("{:?}", s.indices),
        detail: format!("Krawczyk test failed near w = {:?}", w.to_c64()),
    })
}
