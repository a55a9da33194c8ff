use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wermer_core::analysis::{
    circle_average_t, convergence_report, integrate_to_infinity, l_potential, modulus_from_h, nu_ball_mass, GaugeFunction, Theta,
    SUBHARMONIC_SLACK,
};
use wermer_core::numeric::PrecisionContext;
use wermer_core::schedule::{build_schedule, constant_radii, ints};
use wermer_core::slicer::SlicePlane;
use wermer_core::tower::{AnchorSequence, TowerModel};

const KS: [u32; 7] = [1, 2, 4, 8, 16, 32, 64];

fn disk_samples(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

#[test]
fn potentials_are_uniformly_bounded() {
    let zs = disk_samples(2000, 1);
    let sup = |k: u32| zs.iter().map(|&z| l_potential(k, z).abs()).fold(0.0, f64::max);
    let base = sup(1).max(sup(2));
    let all = KS.iter().map(|&k| sup(k)).fold(0.0, f64::max);
    assert!(all <= 1.0 + base);
}

/// Brute-force sweep for the constant in `nu_k(D(z, r)) <= C r`.
#[test]
fn linear_mass_bound_constant() {
    let mut worst: f64 = 0.0;
    for &k in &KS {
        for z in disk_samples(200, u64::from(k)) {
            for i in 0..60 {
                let r = 10f64.powf(-3.0 + 3.5 * f64::from(i) / 59.0);
                worst = worst.max(nu_ball_mass(k, z, r) / r);
            }
        }
    }
    // the sup is 2, approached by k = 2 (one circle of radius 1/2) as r decreases to 1/2
    assert!(worst <= 2.0 && worst > 1.8, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ball_masses_grow_and_stay_linear(ki in 0usize..7, zr in 0.0f64..1.0, za in 0.0f64..6.3, r1 in 1e-4f64..3.0, r2 in 1e-4f64..3.0) {
        let k = KS[ki];
        let z = Complex64::from_polar(zr, za);
        let (a, b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let (ma, mb) = (nu_ball_mass(k, z, a), nu_ball_mass(k, z, b));
        prop_assert!(ma <= mb + 1e-15);
        prop_assert!(mb <= 1.0 + 1e-15);
        prop_assert!(mb <= 6.0 * b);
    }

    #[test]
    fn modulus_is_increasing_and_dominates_its_first_term(e in 1.05f64..2.5, which in 0usize..3, r1 in 1e-6f64..0.15, r2 in 1e-6f64..0.15) {
        // h must itself be increasing on [0, 2r]; s^1.05 |log s| peaks near s = 0.386
        let theta = [Theta::One, Theta::AbsLog, Theta::LogAbsLog][which].clone();
        let h = GaugeFunction::new(e, theta.clone());
        let (a, b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let (pa, pb) = (modulus_from_h(&h, a).unwrap(), modulus_from_h(&h, b).unwrap());
        prop_assert!(pa <= pb * (1.0 + 1e-9));
        // s = e^{-t}
        let first = integrate_to_infinity(|t| (-(e - 1.0) * t + h.theta.ln_at(t)).exp(), -(2.0 * b).ln(), 1e-10, 1e-300).value;
        prop_assert!(pb >= first * (1.0 - 1e-6));
    }
}

#[test]
fn circle_averages_are_nonnegative() {
    let s = build_schedule(&constant_radii(2), &ints(&[1, 4]), 2).unwrap();
    let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
    let ctx = PrecisionContext::new(128, 4096).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..12 {
        let z = Complex64::from_polar(rng.gen_range(0.0..0.45), rng.gen_range(0.0..6.3));
        let w = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..6.3));
        let zeta = (Complex64::from_polar(rng.gen_range(0.0..0.01), rng.gen_range(0.0..6.3)), Complex64::new(1.0, 0.0));
        let r = rng.gen_range(0.01..0.3);
        for n in 0..=2 {
            let v = circle_average_t(&t, n, (z, w), zeta, r, 1e-9, &ctx, 100).unwrap();
            assert!(v.value >= -SUBHARMONIC_SLACK, "{v:?}");
        }
    }
}

#[test]
fn convergence_gaps_are_summable() {
    let s = build_schedule(&constant_radii(5), &ints(&[1; 5]), 5).unwrap();
    let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
    let ctx = PrecisionContext::new(128, 4096).unwrap();
    let rep = convergence_report(&t, 4, &SlicePlane::vertical(0.45), 16, &ctx, 10).unwrap();
    let tail: f64 = rep.rows[2..].iter().map(|r| r.gap_u).sum();
    assert!(tail < rep.rows[1].gap_u, "{rep:?}");
    assert!(rep.gap_sum().is_finite());
}
