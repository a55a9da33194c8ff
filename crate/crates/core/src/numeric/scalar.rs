use rug::Rational;

use super::{BigComplex, IntervalComplex};

/// Ring operations shared by point and interval evaluation.
pub trait TowerScalar: Clone + Send + Sync {
    fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn square(&self) -> Self;
    fn mul_u32(&self, k: u32) -> Self;
    fn prec(&self) -> u32;

    fn real(prec: u32, q: &Rational) -> Self {
        Self::from_rationals(prec, q, &Rational::new())
    }

    /// Product with an exact real rational.
    fn scale_rational(&self, q: &Rational) -> Self {
        self.mul(&Self::real(self.prec(), q))
    }
}

impl TowerScalar for BigComplex {
    fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        BigComplex::from_rationals(prec, re, im)
    }
    fn add(&self, o: &Self) -> Self {
        BigComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigComplex::mul(self, o)
    }
    fn square(&self) -> Self {
        BigComplex::square(self)
    }
    fn mul_u32(&self, k: u32) -> Self {
        BigComplex::mul_u32(self, k)
    }
    fn prec(&self) -> u32 {
        BigComplex::prec(self)
    }
    fn scale_rational(&self, q: &Rational) -> Self {
        let x = rug::Float::with_val(self.prec(), q);
        self.scale(&x)
    }
}

impl TowerScalar for IntervalComplex {
    fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        IntervalComplex::from_rationals(prec, re, im)
    }
    fn add(&self, o: &Self) -> Self {
        IntervalComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        IntervalComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        IntervalComplex::mul(self, o)
    }
    fn square(&self) -> Self {
        IntervalComplex::square(self)
    }
    fn mul_u32(&self, k: u32) -> Self {
        IntervalComplex::mul_u32(self, k)
    }
    fn prec(&self) -> u32 {
        IntervalComplex::prec(self)
    }
}
