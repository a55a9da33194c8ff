use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use super::{Signature, TowerError, TowerModel};
use crate::numeric::{classify_disk, precision_for_depth, BigComplex, DiskClass, IntervalComplex, PrecisionContext, TowerScalar};

/// How `u_n` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Full enumeration, refused above `cap` signatures.
    Exact { cap: u64 },
    /// Mean over `samples` uniformly drawn signatures.
    Sampling { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UEstimate {
    pub value: f64,
    /// Zero in exact mode.
    pub std_err: f64,
    pub samples: u64,
}

/// Everything one enumeration at a point yields.
#[derive(Debug, Clone, PartialEq)]
pub struct Potentials {
    /// `u_k` for `k = 0..=n`.
    pub u: Vec<f64>,
    /// `v_k` for `k = 1..=n` (entry `k - 1`).
    pub v: Vec<f64>,
    /// Largest `|1/2 log max(|P_{k,s'}|, delta_k) - log max(|P_{k-1,s} - sigma|, delta_{k-1}/m_k)|`
    /// over signatures, for `k = 1..=n` (entry `k - 1`).
    pub gap: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipStatus {
    Certified,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    /// Largest certified `n` with the point in `X_n`; `-1` outside `X_0`.
    pub depth: i32,
    pub status: MembershipStatus,
}

impl TowerModel {
    /// Bits actually used for depth `n`: at least the context's, at least
    /// the depth requirement, within the budget.
    pub fn working_bits(&self, n: usize, ctx: &PrecisionContext) -> Result<u32, TowerError> {
        let need = precision_for_depth(self.schedule(), n, ctx.max_bits())?;
        Ok(ctx.bits().max(need))
    }

    /// `eps_k A_k(z, w)` for `k = 1..=n`.
    pub(crate) fn level_terms<S: TowerScalar>(&self, n: usize, z: &S, w: &S, prec: u32) -> Vec<S> {
        let hundredth = Rational::from((1, 100));
        (1..=n)
            .map(|k| {
                let (ar, ai) = self.anchor_exact(k);
                let mut a = z.sub(&S::from_rationals(prec, ar, ai));
                if k % 2 == 0 {
                    a = a.add(&w.scale_rational(&hundredth));
                }
                a.scale_rational(self.eps(k))
            })
            .collect()
    }

    /// `eps_k dA_k/dw` along a line with `dz/dw = dzdw`.
    pub(crate) fn level_slopes<S: TowerScalar>(&self, n: usize, dzdw: &S, prec: u32) -> Vec<S> {
        let hundredth = S::real(prec, &Rational::from((1, 100)));
        (1..=n)
            .map(|k| {
                let d = if k % 2 == 0 { dzdw.add(&hundredth) } else { dzdw.clone() };
                d.scale_rational(self.eps(k))
            })
            .collect()
    }

    pub(crate) fn sigma_values<S: TowerScalar>(&self, k: usize, prec: u32) -> Vec<S> {
        self.sigma_grid(k).iter().map(|(a, b)| S::from_rationals(prec, a, b)).collect()
    }

    pub(crate) fn sigma_value<S: TowerScalar>(&self, k: usize, i: u32, prec: u32) -> S {
        let (a, b) = self.sigma_point(k, i);
        S::from_rationals(prec, &a, &b)
    }

    /// `P_{n,s}(z, w)`; works for point values and interval enclosures.
    pub fn eval_p<S: TowerScalar>(&self, s: &Signature, z: &S, w: &S, ctx: &PrecisionContext) -> Result<S, TowerError> {
        self.validate_signature(s)?;
        let n = s.depth();
        let prec = self.working_bits(n, ctx)?;
        let c = self.level_terms(n, z, w, prec);
        let mut p = w.clone();
        for k in 1..=n {
            let sigma: S = self.sigma_value(k, s.indices[k - 1], prec);
            p = p.sub(&sigma).square().sub(&c[k - 1]);
        }
        Ok(p)
    }

    /// `(P, dP/dw)` along the line through `(z, w)` with `dz/dw = dzdw`.
    pub fn eval_p_dp<S: TowerScalar>(
        &self,
        s: &Signature,
        z: &S,
        w: &S,
        dzdw: &S,
        ctx: &PrecisionContext,
    ) -> Result<(S, S), TowerError> {
        self.validate_signature(s)?;
        let n = s.depth();
        let prec = self.working_bits(n, ctx)?;
        let c = self.level_terms(n, z, w, prec);
        let dc = self.level_slopes(n, dzdw, prec);
        let mut p = w.clone();
        let mut dp = S::real(prec, &Rational::from(1));
        for k in 1..=n {
            let sigma: S = self.sigma_value(k, s.indices[k - 1], prec);
            let diff = p.sub(&sigma);
            dp = diff.mul(&dp).mul_u32(2).sub(&dc[k - 1]);
            p = diff.square().sub(&c[k - 1]);
        }
        Ok((p, dp))
    }

    /// `dP_{n,s}/dw` at `(z, w)` with `z` held fixed.
    pub fn eval_dp(&self, s: &Signature, z: &BigComplex, w: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex, TowerError> {
        let zero = BigComplex::zero(ctx.bits());
        Ok(self.eval_p_dp(s, z, w, &zero, ctx)?.1)
    }

    /// One depth-first pass over `S_n` at a point.
    pub fn potentials(
        &self,
        n: usize,
        z: &BigComplex,
        w: &BigComplex,
        ctx: &PrecisionContext,
        cap: u64,
    ) -> Result<Potentials, TowerError> {
        self.check_cap(n, cap)?;
        let prec = self.working_bits(n, ctx)?;
        let z = z.with_prec(prec);
        let w = w.with_prec(prec);
        let c = self.level_terms(n, &z, &w, prec);
        let sigmas: Vec<Vec<BigComplex>> = (1..=n).map(|k| self.sigma_values(k, prec)).collect();
        let deltas: Vec<Float> = (0..=n).map(|k| Float::with_val(prec, &self.delta(k))).collect();
        let floors: Vec<Float> = (1..=n).map(|k| Float::with_val(prec, &deltas[k - 1] / self.m(k))).collect();
        let mut acc = Acc {
            u: vec![Float::new(prec); n + 1],
            v: vec![Float::new(prec); n],
            gap: vec![0.0; n],
        };
        walk(&w, 0, n, &c, &sigmas, &deltas, &floors, &mut acc);
        let u = (0..=n)
            .map(|k| {
                let denom = Float::with_val(prec, self.signature_count(k)) << (k as u32);
                Float::with_val(prec, &acc.u[k] / &denom).to_f64()
            })
            .collect();
        let v = (1..=n)
            .map(|k| {
                let denom = Float::with_val(prec, self.signature_count(k)) << ((k - 1) as u32);
                Float::with_val(prec, &acc.v[k - 1] / &denom).to_f64()
            })
            .collect();
        Ok(Potentials { u, v, gap: acc.gap })
    }

    /// `u_n(z, w) = (1 / (2^n #S_n)) sum_s log max(|P_{n,s}|, delta_n)`.
    pub fn eval_u(&self, n: usize, z: &BigComplex, w: &BigComplex, ctx: &PrecisionContext, mode: EvalMode) -> Result<UEstimate, TowerError> {
        match mode {
            EvalMode::Exact { cap } => {
                let p = self.potentials(n, z, w, ctx, cap)?;
                Ok(UEstimate { value: p.u[n], std_err: 0.0, samples: self.check_cap(n, cap)? })
            }
            EvalMode::Sampling { samples, seed } => self.sample_u(n, z, w, ctx, samples, seed),
        }
    }

    fn sample_u(&self, n: usize, z: &BigComplex, w: &BigComplex, ctx: &PrecisionContext, samples: u64, seed: u64) -> Result<UEstimate, TowerError> {
        assert!(samples >= 2, "need at least two samples");
        let prec = self.working_bits(n, ctx)?;
        let z = z.with_prec(prec);
        let w = w.with_prec(prec);
        let c = self.level_terms(n, &z, &w, prec);
        let delta = Float::with_val(prec, &self.delta(n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 0.5f64.powi(n as i32);
        let mut values = Vec::with_capacity(samples as usize);
        for _ in 0..samples {
            let mut p = w.clone();
            for k in 1..=n {
                let i = rng.gen_range(0..self.grid_len(k));
                let sigma: BigComplex = self.sigma_value(k, i, prec);
                p = p.sub(&sigma).square().sub(&c[k - 1]);
            }
            let a = p.abs();
            let x = if a > delta { a } else { delta.clone() };
            values.push(x.ln().to_f64() * scale);
        }
        let mean = values.iter().sum::<f64>() / samples as f64;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        Ok(UEstimate { value: mean, std_err: (var / samples as f64).sqrt(), samples })
    }

    /// `v_{n}` for `n >= 1`: the potential of the subdivision step from depth `n - 1`.
    pub fn eval_v(&self, n: usize, z: &BigComplex, w: &BigComplex, ctx: &PrecisionContext, cap: u64) -> Result<f64, TowerError> {
        assert!(n >= 1, "v starts at n = 1");
        Ok(self.potentials(n, z, w, ctx, cap)?.v[n - 1])
    }

    /// Deepest certified level of `X_n` containing the box `(z, w)`.
    pub fn membership_depth(&self, z: &IntervalComplex, w: &IntervalComplex, ctx: &PrecisionContext) -> Result<Membership, TowerError> {
        self.membership_depth_upto(z, w, ctx, self.depth())
    }

    /// As [`TowerModel::membership_depth`], looking no deeper than `n`.
    pub fn membership_depth_upto(
        &self,
        z: &IntervalComplex,
        w: &IntervalComplex,
        ctx: &PrecisionContext,
        n: usize,
    ) -> Result<Membership, TowerError> {
        assert!(n <= self.depth(), "depth beyond the tower");
        let prec = self.working_bits(n, ctx)?;
        let c = self.level_terms(n, z, w, prec);
        let sigmas: Vec<Vec<IntervalComplex>> = (1..=n).map(|k| self.sigma_values(k, prec)).collect();
        let deltas: Vec<Float> = (0..=n).map(|k| Float::with_val(prec, &self.delta(k))).collect();

        let mut frontier: Vec<IntervalComplex> = Vec::new();
        match classify_disk(w, &deltas[0]) {
            DiskClass::Outside => return Ok(Membership { depth: -1, status: MembershipStatus::Certified }),
            DiskClass::Unknown => return Ok(Membership { depth: -1, status: MembershipStatus::Unknown }),
            DiskClass::Inside => frontier.push(w.clone()),
        }
        let mut best = 0;
        for k in 1..=n {
            let mut inside = Vec::new();
            let mut unknown = false;
            for p in &frontier {
                for sigma in &sigmas[k - 1] {
                    let q = p.sub(sigma).square().sub(&c[k - 1]);
                    match classify_disk(&q, &deltas[k]) {
                        DiskClass::Inside => inside.push(q),
                        DiskClass::Unknown => unknown = true,
                        DiskClass::Outside => {}
                    }
                }
            }
            if inside.is_empty() {
                let status = if unknown { MembershipStatus::Unknown } else { MembershipStatus::Certified };
                return Ok(Membership { depth: best, status });
            }
            best = k as i32;
            frontier = inside;
        }
        Ok(Membership { depth: best, status: MembershipStatus::Certified })
    }
}

struct Acc {
    u: Vec<Float>,
    v: Vec<Float>,
    gap: Vec<f64>,
}

fn ln_max(x: Float, floor: &Float) -> Float {
    if x > *floor {
        x.ln()
    } else {
        Float::with_val(x.prec(), floor.ln_ref())
    }
}

#[allow(clippy::too_many_arguments)]
fn walk(
    p: &BigComplex,
    k: usize,
    n: usize,
    c: &[BigComplex],
    sigmas: &[Vec<BigComplex>],
    deltas: &[Float],
    floors: &[Float],
    acc: &mut Acc,
) {
    let here = ln_max(p.abs(), &deltas[k]);
    acc.u[k] += &here;
    if k == n {
        return;
    }
    for sigma in &sigmas[k] {
        let diff = p.sub(sigma);
        let sub = ln_max(diff.abs(), &floors[k]);
        let child = diff.square().sub(&c[k]);
        let next = ln_max(child.abs(), &deltas[k + 1]);
        let g = (Float::with_val(next.prec(), &next / 2u32) - &sub).abs().to_f64();
        if g > acc.gap[k] {
            acc.gap[k] = g;
        }
        acc.v[k] += &sub;
        walk(&child, k + 1, n, c, sigmas, deltas, floors, acc);
    }
}
