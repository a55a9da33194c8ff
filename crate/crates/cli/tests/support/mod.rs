//! Independent root oracle: eigenvalues of the companion matrix by shifted
//! complex QR in MPFR arithmetic.

use rug::{Float, Rational};
use wermer_core::numeric::BigComplex;

fn c(prec: u32, re: &Rational, im: &Rational) -> BigComplex {
    BigComplex::from_rationals(prec, re, im)
}

fn conj(z: &BigComplex) -> BigComplex {
    BigComplex::new(z.re.clone(), Float::with_val(z.prec(), -&z.im))
}

/// Roots of the monic polynomial `sum coeffs[k] w^k` (constant term first).
pub fn companion_roots(coeffs: &[(Rational, Rational)], prec: u32) -> Vec<BigComplex> {
    let n = coeffs.len() - 1;
    assert!(n >= 1, "constant polynomial");
    assert!(coeffs[n].0 == 1 && coeffs[n].1 == 0, "polynomial must be monic");
    let zero = BigComplex::zero(prec);
    let one = BigComplex::from_f64(prec, 1.0, 0.0);
    // ones on the subdiagonal, last column -c_0 .. -c_{n-1}
    let mut h = vec![vec![zero.clone(); n]; n];
    for i in 1..n {
        h[i][i - 1] = one.clone();
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[n - 1] = c(prec, &coeffs[i].0, &coeffs[i].1).neg();
    }
    hessenberg_eigenvalues(h, prec)
}

fn small(x: &BigComplex, scale: &Float, prec: u32) -> bool {
    let tol = Float::with_val(prec, scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 6)));
    x.abs() <= tol
}

fn wilkinson(a: &BigComplex, b: &BigComplex, cc: &BigComplex, d: &BigComplex, prec: u32) -> BigComplex {
    let half = Float::with_val(prec, 0.5);
    let mean = a.add(d).scale(&half);
    let diff = a.sub(d).scale(&half);
    let disc = diff.square().add(&b.mul(cc)).sqrt();
    let (m1, m2) = (mean.add(&disc), mean.sub(&disc));
    if m1.dist(d) <= m2.dist(d) {
        m1
    } else {
        m2
    }
}

fn hessenberg_eigenvalues(mut h: Vec<Vec<BigComplex>>, prec: u32) -> Vec<BigComplex> {
    let n = h.len();
    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stuck = 0;
    loop {
        if hi == 0 {
            out.push(h[0][0].clone());
            break;
        }
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let scale = Float::with_val(prec, h[lo][lo].abs() + h[lo - 1][lo - 1].abs());
            if small(&h[lo][lo - 1], &scale.max(&Float::with_val(prec, 1e-300)), prec) {
                h[lo][lo - 1] = BigComplex::zero(prec);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[hi][hi].clone());
            hi -= 1;
            stuck = 0;
            continue;
        }
        stuck += 1;
        assert!(stuck < 10_000, "QR did not converge");
        let mut mu = wilkinson(&h[hi - 1][hi - 1], &h[hi - 1][hi], &h[hi][hi - 1], &h[hi][hi], prec);
        if stuck % 11 == 0 {
            // exceptional shift
            mu = h[hi][hi].add(&BigComplex::new(Float::with_val(prec, h[hi][hi - 1].abs() * 0.75), Float::new(prec)));
        }
        for k in lo..=hi {
            h[k][k] = h[k][k].sub(&mu);
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (x, y) = (h[k][k].clone(), h[k + 1][k].clone());
            let r = Float::with_val(prec, x.norm_sqr() + y.norm_sqr()).sqrt();
            let inv = Float::with_val(prec, 1 / &r);
            let (cs, sn) = (x.scale(&inv), y.scale(&inv));
            for j in k..=hi {
                let (a, b) = (h[k][j].clone(), h[k + 1][j].clone());
                h[k][j] = conj(&cs).mul(&a).add(&conj(&sn).mul(&b));
                h[k + 1][j] = cs.mul(&b).sub(&sn.mul(&a));
            }
            rots.push((cs, sn));
        }
        for (i, (cs, sn)) in rots.iter().enumerate() {
            let k = lo + i;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let (a, b) = (row[k].clone(), row[k + 1].clone());
                row[k] = a.mul(cs).add(&b.mul(sn));
                row[k + 1] = b.mul(&conj(cs)).sub(&a.mul(&conj(sn)));
            }
        }
        for k in lo..=hi {
            h[k][k] = h[k][k].add(&mu);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_and_a_known_quartic() {
        let q = |a: i64| Rational::from(a);
        // w^3 - 1
        let roots = companion_roots(&[(q(-1), q(0)), (q(0), q(0)), (q(0), q(0)), (q(1), q(0))], 256);
        for r in &roots {
            let cube = r.mul(r).mul(r);
            assert!(cube.dist(&BigComplex::from_f64(256, 1.0, 0.0)) < 1e-70);
        }
        // (w - 2)(w + 3)(w - i)(w + i) = w^4 + w^3 - 5 w^2 + w - 6
        let roots = companion_roots(&[(q(-6), q(0)), (q(1), q(0)), (q(-5), q(0)), (q(1), q(0)), (q(1), q(0))], 256);
        for want in [(2.0, 0.0), (-3.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let w = BigComplex::from_f64(256, want.0, want.1);
            assert!(roots.iter().any(|r| r.dist(&w) < 1e-70), "{want:?}");
        }
    }
}
