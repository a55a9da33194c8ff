use rug::Rational;

use super::{SlicePlane, SlicerError};
use crate::tower::{Signature, TowerModel};

/// Complex rational `(re, im)`.
pub type ComplexRational = (Rational, Rational);

fn cmul(a: &ComplexRational, b: &ComplexRational) -> ComplexRational {
    let re = Rational::from(&a.0 * &b.0) - Rational::from(&a.1 * &b.1);
    let im = Rational::from(&a.0 * &b.1) + Rational::from(&a.1 * &b.0);
    (re, im)
}

fn poly_mul(a: &[ComplexRational], b: &[ComplexRational]) -> Vec<ComplexRational> {
    let mut out = vec![(Rational::new(), Rational::new()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let p = cmul(x, y);
            out[i + j].0 += p.0;
            out[i + j].1 += p.1;
        }
    }
    out
}

fn poly_sub(a: &mut Vec<ComplexRational>, b: &[ComplexRational]) {
    if a.len() < b.len() {
        a.resize(b.len(), (Rational::new(), Rational::new()));
    }
    for (x, y) in a.iter_mut().zip(b) {
        x.0 -= &y.0;
        x.1 -= &y.1;
    }
}

/// Exact coefficients of `w -> P_{n,s}(z0 - gamma w, w)`, constant term first.
pub fn slice_polynomial(t: &TowerModel, s: &Signature, plane: &SlicePlane) -> Result<Vec<ComplexRational>, SlicerError> {
    t.validate_signature(s)?;
    let zero = || (Rational::new(), Rational::new());
    let mut p = vec![zero(), (Rational::from(1), Rational::new())];
    for k in 1..=s.depth() {
        let (sr, si) = t.sigma_point(k, s.indices[k - 1]);
        p[0].0 -= sr;
        p[0].1 -= si;
        p = poly_mul(&p, &p);
        let (ar, ai) = t.anchor_exact(k);
        let mut slope = (Rational::from(-&plane.gamma.0), Rational::from(-&plane.gamma.1));
        if k % 2 == 0 {
            slope.0 += Rational::from((1, 100));
        }
        let a = [(Rational::from(&plane.z0.0 - ar), Rational::from(&plane.z0.1 - ai)), slope];
        let eps = t.eps(k);
        let term: Vec<ComplexRational> = a.iter().map(|(x, y)| (Rational::from(x * eps), Rational::from(y * eps))).collect();
        poly_sub(&mut p, &term);
    }
    Ok(p)
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
    fn depth_one_coefficients() {
        let t = tower(&[1]);
        let p = slice_polynomial(&t, &Signature { indices: vec![0] }, &SlicePlane::vertical(0.4)).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[2], (Rational::from(1), Rational::new()));
        assert_eq!(p[1], (Rational::new(), Rational::new()));
        // the plane stores z0 = 0.4 as the nearest double
        let z0 = crate::numeric::rational_from_f64(0.4);
        assert_eq!(p[0], (-z0 / 8u32, Rational::new()));
    }
}
