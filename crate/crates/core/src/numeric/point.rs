use std::fmt;

use num_complex::Complex64;
use rug::{Float, Rational};

/// Complex number with MPFR components, rounded to nearest.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.12e}, {:.12e})", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        Self { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        Self { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Self {
        Self { re: Float::with_val(self.prec(), -&self.re), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Self { re: ac - bd, im: ad + bc }
    }

    pub fn square(&self) -> Self {
        let p = self.prec();
        let a2 = Float::with_val(p, self.re.square_ref());
        let b2 = Float::with_val(p, self.im.square_ref());
        let ab = Float::with_val(p, &self.re * &self.im);
        Self { re: a2 - b2, im: ab * 2u32 }
    }

    pub fn mul_u32(&self, k: u32) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        if self.re >= 0 {
            let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / &re) / 2u32;
            Self { re, im }
        } else {
            let mut im = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            if self.im.is_sign_negative() {
                im = -im;
            }
            let re = Float::with_val(p, &self.im / &im) / 2u32;
            Self { re, im }
        }
    }

    pub fn dist(&self, o: &Self) -> Float {
        self.sub(o).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        for &(a, b) in &[(4.0, 0.0), (-1.0, 0.0), (0.3, -0.7), (-2.0, -1e-30), (1e-5, 3.0)] {
            let z = BigComplex::from_f64(200, a, b);
            let back = z.sqrt().square();
            assert!(back.dist(&z).to_f64() < 1e-50, "{a} {b}");
            assert!(z.sqrt().re >= 0);
        }
    }

    #[test]
    fn mul_and_div_invert() {
        let a = BigComplex::from_f64(128, 0.25, -1.5);
        let b = BigComplex::from_f64(128, -3.0, 0.125);
        assert!(a.mul(&b).div(&b).dist(&a).to_f64() < 1e-35);
    }
}
