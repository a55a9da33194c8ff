use proptest::prelude::*;
use rug::Rational;
use wermer_core::analysis::{GaugeFunction, Theta};
use wermer_core::schedule::{
    build_schedule, capacity_drift, check_choose_m, choose_m, constant_radii, ints, Multiplicity, Radius,
};

fn radius() -> impl Strategy<Value = Radius> {
    prop::sample::select(vec![10u32, 11, 20, 50, 100, 1000]).prop_map(|d| Radius::Exact(Rational::from((1, d))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_schedules_satisfy_both_estimates(
        rs in prop::collection::vec(radius(), 1..7),
        ms in prop::collection::vec(prop::sample::select(vec![1u64, 2, 3, 4, 9, 16]), 7),
    ) {
        let depth = rs.len();
        let s = build_schedule(&rs, &ints(&ms[..depth]), depth).unwrap();
        for n in 0..depth {
            let d = s.exact_delta(n).unwrap();
            let d1 = s.exact_delta(n + 1).unwrap();
            let e1 = s.exact_eps(n + 1).unwrap();
            let m = Rational::from(ms[n]);
            let r = match s.r(n + 1) {
                Radius::Exact(q) => q.clone(),
                Radius::Exp(_) => unreachable!(),
            };
            let cap = Rational::from(d.square_ref()) / m.square();
            prop_assert!(Rational::from(d1 + e1) < cap, "est1 at n = {}", n);
            prop_assert!(*d1 < Rational::from(e1 * &r), "est2 at n = {}", n);
        }
    }

    #[test]
    fn chosen_multiplicities_pass_the_checker(a in 1.0f64..4.0, c in 3.0f64..5.0, depth in 1usize..3, which in 0usize..3) {
        let theta = match which {
            0 => Theta::AbsLog,
            1 => Theta::AbsLogPow(2.0),
            _ => Theta::AbsLogPow(0.5),
        };
        let g = GaugeFunction::theta_only(theta);
        let rs = constant_radii(depth);
        let ms = choose_m(&g, &rs, a, c, depth).unwrap();
        prop_assert_eq!(check_choose_m(&g, &rs, &ms, a, c), Ok(()));
        let increasing = ms.windows(2).all(|w| match (w[0], w[1]) {
            (Multiplicity::DoublyDyadic(i), Multiplicity::DoublyDyadic(j)) => j > i,
            _ => false,
        });
        prop_assert!(increasing);
    }
}

#[test]
fn drift_increments_decay_geometrically() {
    let s = build_schedule(&constant_radii(12), &ints(&[1; 12]), 12).unwrap();
    let d: Vec<f64> = (0..=12).map(|n| capacity_drift(&s, n).unwrap()).collect();
    let inc: Vec<f64> = d.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for n in 2..inc.len() {
        assert!(inc[n] <= 0.6 * inc[n - 1], "n = {n}: {inc:?}");
    }
}

#[test]
fn checker_rejects_a_short_step() {
    let g = GaugeFunction::theta_only(Theta::AbsLog);
    let rs = constant_radii(2);
    let mut ms = choose_m(&g, &rs, 3.0, 3.0, 2).unwrap();
    if let Multiplicity::DoublyDyadic(k) = ms[1] {
        ms[1] = Multiplicity::DoublyDyadic(k - 1);
    }
    assert_eq!(check_choose_m(&g, &rs, &ms, 3.0, 3.0), Err(2));
}

#[test]
fn log_log_gauge_is_too_weak_for_the_lattice() {
    let g = GaugeFunction::theta_only(Theta::LogAbsLog);
    assert!(choose_m(&g, &constant_radii(1), 3.0, 3.0, 1).is_err());
}
