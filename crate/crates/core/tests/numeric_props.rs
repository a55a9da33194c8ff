use proptest::prelude::*;
use rug::Float;
use wermer_core::numeric::{interval_sqrt_branches, precision_for_depth, BigComplex, Interval, IntervalComplex};
use wermer_core::schedule::{build_schedule, constant_radii, ints};

const LOW: u32 = 64;
const HIGH: u32 = 1024;

fn member(iv: &Interval, t: f64) -> Float {
    let w = Float::with_val(HIGH, iv.hi() - iv.lo());
    Float::with_val(HIGH, iv.lo() + w * t)
}

fn interval(a: f64, b: f64) -> Interval {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::new(Float::with_val(LOW, lo), Float::with_val(LOW, hi))
}

fn boxed(re: (f64, f64), im: (f64, f64)) -> IntervalComplex {
    IntervalComplex::new(interval(re.0, re.1), interval(im.0, im.1))
}

fn cmember(x: &IntervalComplex, s: f64, t: f64) -> BigComplex {
    BigComplex::new(member(x.re(), s), member(x.im(), t))
}

fn holds(x: &IntervalComplex, p: &BigComplex) -> bool {
    x.contains_point(&p.re, &p.im)
}

fn coord() -> impl Strategy<Value = (f64, f64)> {
    (-3.0f64..3.0, 0.0f64..0.5).prop_map(|(c, w)| (c, c + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn real_operations_enclose(a in coord(), b in coord(), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let x = interval(a.0, a.1);
        let y = interval(b.0, b.1);
        let xs = member(&x, s);
        let yt = member(&y, t);
        prop_assert!(x.add(&y).contains(&Float::with_val(HIGH, &xs + &yt)));
        prop_assert!(x.sub(&y).contains(&Float::with_val(HIGH, &xs - &yt)));
        prop_assert!(x.mul(&y).contains(&Float::with_val(HIGH, &xs * &yt)));
        prop_assert!(x.square().contains(&Float::with_val(HIGH, xs.square_ref())));
        prop_assert!(x.mul_u32(7).contains(&Float::with_val(HIGH, &xs * 7u32)));
        prop_assert!(x.div_u32(7).contains(&Float::with_val(HIGH, &xs / 7u32)));
        if !y.contains_zero() {
            prop_assert!(y.recip().unwrap().contains(&Float::with_val(HIGH, yt.recip_ref())));
        }
        if *x.lo() > 0 {
            prop_assert!(x.sqrt().contains(&Float::with_val(HIGH, xs.sqrt_ref())));
            prop_assert!(x.ln().contains(&Float::with_val(HIGH, xs.ln_ref())));
        }
        prop_assert!(x.exp().contains(&Float::with_val(HIGH, xs.exp_ref())));
    }

    #[test]
    fn complex_operations_enclose(
        a in coord(), b in coord(), c in coord(), d in coord(),
        s in 0.0f64..=1.0, t in 0.0f64..=1.0, u in 0.0f64..=1.0, v in 0.0f64..=1.0,
    ) {
        let x = boxed(a, b);
        let y = boxed(c, d);
        let p = cmember(&x, s, t);
        let q = cmember(&y, u, v);
        prop_assert!(holds(&x.add(&y), &p.add(&q)));
        prop_assert!(holds(&x.sub(&y), &p.sub(&q)));
        prop_assert!(holds(&x.mul(&y), &p.mul(&q)));
        prop_assert!(holds(&x.square(), &p.square()));
        prop_assert!(x.norm_sqr().contains(&p.norm_sqr()));
        prop_assert!(x.abs().contains(&p.abs()));
        if !y.contains_zero() {
            prop_assert!(holds(&y.recip().unwrap(), &q.recip()));
            prop_assert!(holds(&x.div(&y).unwrap(), &p.div(&q)));
        }
    }

    #[test]
    fn sqrt_branches_cohere(a in coord(), b in coord(), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let x = boxed(a, b);
        if let Ok((first, second)) = interval_sqrt_branches(&x) {
            for (i, j) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0), (s, t)] {
                let p = cmember(&x, i, j);
                prop_assert!(holds(&first.square(), &p));
                prop_assert!(holds(&second.square(), &p));
                let root = p.sqrt();
                prop_assert!(holds(&first, &root) || holds(&second, &root));
            }
        }
    }

    #[test]
    fn precision_grows_with_depth(ms in prop::collection::vec(prop::sample::select(vec![1u64, 2, 4, 9, 16]), 1..6)) {
        let depth = ms.len();
        let s = build_schedule(&constant_radii(depth), &ints(&ms), depth).unwrap();
        let bits: Vec<u32> = (0..=depth).map(|n| precision_for_depth(&s, n, 1 << 20).unwrap()).collect();
        prop_assert!(bits.windows(2).all(|w| w[0] <= w[1]), "{bits:?}");
    }
}
