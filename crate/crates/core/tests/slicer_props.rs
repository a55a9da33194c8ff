use num_complex::Complex64;
use proptest::prelude::*;
use rug::Rational;
use wermer_core::numeric::PrecisionContext;
use wermer_core::schedule::{build_schedule, constant_radii, ints};
use wermer_core::slicer::{measure_stability, render_escape, slice_components, slice_measure, slice_roots, SlicePlane};
use wermer_core::tower::{AnchorSequence, TowerModel};

fn tower(ms: &[u64], seed: u64) -> TowerModel {
    let s = build_schedule(&constant_radii(ms.len()), &ints(ms), ms.len()).unwrap();
    TowerModel::new(s, AnchorSequence::new(seed), 4096).unwrap()
}

fn ctx() -> PrecisionContext {
    PrecisionContext::new(128, 4096).unwrap()
}

fn plane() -> impl Strategy<Value = SlicePlane> {
    (0.385f64..0.495, 0.0f64..6.3, 0.0f64..0.0099, 0.0f64..6.3).prop_map(|(r, a, g, b)| {
        SlicePlane::new(Complex64::from_polar(r, a), Complex64::from_polar(g, b)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn root_sets_have_two_to_the_n_disjoint_roots(plane in plane(), n in 0usize..4, pick in any::<u64>(), frac in 0.0f64..0.999, arg in 0.0f64..6.3) {
        let t = tower(&[1, 4, 1], 2);
        let sigs = t.signatures(n, 100).unwrap();
        let s = &sigs[(pick % sigs.len() as u64) as usize];
        let alpha = Complex64::from_polar(2.0 * t.delta(n).to_f64() * frac, arg);
        let set = slice_roots(&t, s, &plane, alpha, &ctx()).unwrap();
        prop_assert_eq!(set.roots.len(), 1 << n);
        for (i, a) in set.roots.iter().enumerate() {
            for b in &set.roots[i + 1..] {
                let gap = a.w.dist(&b.w);
                prop_assert!(gap > rug::Float::with_val(128, &a.radius + &b.radius));
            }
        }
    }

    #[test]
    fn component_derivatives_stay_in_the_bracket(plane in plane()) {
        let t = tower(&[1, 4, 1], 0);
        let root = slice_components(&t, 0, &plane, &ctx(), 100).unwrap();
        prop_assert_eq!(root[0].distortion_ratio(&t), 2.0);
        for n in 1..=3 {
            let comps = slice_components(&t, n, &plane, &ctx(), 100).unwrap();
            let c = 3f64.powi(n as i32);
            for r in &comps {
                let q = r.distortion_ratio(&t);
                prop_assert!(q >= 1.0 / c && q <= c, "n = {} ratio {}", n, q);
            }
        }
    }

    #[test]
    fn scales_separate(plane in plane()) {
        let t = tower(&[1, 4, 1], 0);
        let radii: Vec<(f64, f64)> = (0..=3)
            .map(|n| {
                let comps = slice_components(&t, n, &plane, &ctx(), 100).unwrap();
                comps.iter().map(|c| c.conf_radius.to_f64()).fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)))
            })
            .collect();
        for w in radii.windows(2) {
            prop_assert!(w[1].1 < w[0].0);
        }
    }
}

#[test]
fn measures_are_normalized_and_stable_on_a_tilted_plane() {
    let t = tower(&[1, 4, 1], 9);
    let plane = SlicePlane::new(Complex64::new(0.1, 0.4), Complex64::new(-0.006, 0.006)).unwrap();
    for n in 0..=3 {
        assert_eq!(slice_measure(&t, n, &plane, &ctx(), 100).unwrap().total_mass(), 1);
    }
    for k in 0..3 {
        let w = Rational::from((rug::Integer::from(1), t.signature_count(k) << k as u32));
        assert!(measure_stability(&t, 3, k, &plane, &ctx(), 100).unwrap().iter().all(|x| *x == w));
    }
}

#[test]
fn raster_is_independent_of_thread_count() {
    let t = tower(&[1, 4], 0);
    let plane = SlicePlane::vertical(0.4);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| render_escape(&t, &plane, 64, 48, 2, &ctx()).unwrap().to_pgm())
    };
    let one = run(1);
    assert_eq!(one, run(8));
    assert_eq!(one.len(), "P5\n".len() + one.iter().skip(3).position(|&b| b == b'\n').unwrap() + 1 + "64 48\n65535\n".len() + 64 * 48 * 2);
}
