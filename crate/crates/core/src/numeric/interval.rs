use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};

use super::NumericError;

fn rd<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn ru<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

fn fmin(a: Float, b: Float) -> Float {
    if b < a {
        b
    } else {
        a
    }
}

fn fmax(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

/// Closed real interval `[lo, hi]` with outward-rounded arithmetic.
#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        Self::point(Float::with_val(prec.max(53), x))
    }

    /// Tightest enclosure of an exact rational at `prec` bits.
    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self { lo: rd(prec, q), hi: ru(prec, q) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn mid(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.lo + &self.hi) / 2u32
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn width(&self) -> Float {
        ru(self.prec(), &self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// `sup |x|`.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.prec(), self.hi.abs_ref());
        fmax(a, b)
    }

    /// `inf |x|`.
    pub fn mig(&self) -> Float {
        if self.contains_zero() {
            Float::new(self.prec())
        } else {
            let a = Float::with_val(self.prec(), self.lo.abs_ref());
            let b = Float::with_val(self.prec(), self.hi.abs_ref());
            fmin(a, b)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        Self { lo: rd(p, &self.lo + &o.lo), hi: ru(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        Self { lo: rd(p, &self.lo - &o.hi), hi: ru(p, &self.hi - &o.lo) }
    }

    pub fn neg(&self) -> Self {
        Self { lo: Float::with_val(self.prec(), -&self.hi), hi: Float::with_val(self.prec(), -&self.lo) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = rd(p, a * b);
            let u = ru(p, a * b);
            lo = Some(match lo {
                Some(l) => fmin(l, d),
                None => d,
            });
            hi = Some(match hi {
                Some(h) => fmax(h, u),
                None => u,
            });
        }
        Self { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn square(&self) -> Self {
        let p = self.prec();
        let lo_sq_d = rd(p, self.lo.square_ref());
        let lo_sq_u = ru(p, self.lo.square_ref());
        let hi_sq_d = rd(p, self.hi.square_ref());
        let hi_sq_u = ru(p, self.hi.square_ref());
        if self.contains_zero() {
            Self { lo: Float::new(p), hi: fmax(lo_sq_u, hi_sq_u) }
        } else if self.lo > 0 {
            Self { lo: lo_sq_d, hi: hi_sq_u }
        } else {
            Self { lo: hi_sq_d, hi: lo_sq_u }
        }
    }

    pub fn mul_u32(&self, k: u32) -> Self {
        let p = self.prec();
        Self { lo: rd(p, &self.lo * k), hi: ru(p, &self.hi * k) }
    }

    pub fn div_u32(&self, k: u32) -> Self {
        let p = self.prec();
        Self { lo: rd(p, &self.lo / k), hi: ru(p, &self.hi / k) }
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        if self.contains_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let p = self.prec();
        Ok(Self { lo: rd(p, 1u32 / &self.hi), hi: ru(p, 1u32 / &self.lo) })
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let zero = Float::new(p);
        let lo = if self.lo > 0 { rd(p, self.lo.sqrt_ref()) } else { zero.clone() };
        let hi = if self.hi > 0 { ru(p, self.hi.sqrt_ref()) } else { zero };
        Self { lo, hi }
    }

    pub fn ln(&self) -> Self {
        let p = self.prec();
        Self { lo: rd(p, self.lo.ln_ref()), hi: ru(p, self.hi.ln_ref()) }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        Self { lo: rd(p, self.lo.exp_ref()), hi: ru(p, self.hi.exp_ref()) }
    }

    pub fn hull(&self, o: &Self) -> Self {
        Self { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    /// Certified strict comparison `self < o`.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    pub fn interior_contains(&self, o: &Self) -> bool {
        self.lo < o.lo && o.hi < self.hi
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.hi < o.lo || o.hi < self.lo
    }
}

/// Rectangle `[re_lo, re_hi] x [im_lo, im_hi]` in the complex plane.
#[derive(Clone, PartialEq)]
pub struct IntervalComplex {
    re: Interval,
    im: Interval,
}

impl fmt::Debug for IntervalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl IntervalComplex {
    pub fn new(re: Interval, im: Interval) -> Self {
        Self { re, im }
    }

    pub fn from_bounds(prec: u32, re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        let p = prec.max(53);
        Self {
            re: Interval::new(Float::with_val(p, re_lo), Float::with_val(p, re_hi)),
            im: Interval::new(Float::with_val(p, im_lo), Float::with_val(p, im_hi)),
        }
    }

    pub fn point_f64(prec: u32, re: f64, im: f64) -> Self {
        Self::from_bounds(prec, re, re, im, im)
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        Self { re: Interval::from_rational(prec, re), im: Interval::from_rational(prec, im) }
    }

    /// Degenerate rectangle at an exactly representable point.
    pub fn from_floats(re: &Float, im: &Float) -> Self {
        Self { re: Interval::point(re.clone()), im: Interval::point(im.clone()) }
    }

    /// Square of half-width `radius` around `(re, im)`, outward rounded.
    pub fn square_around(prec: u32, re: &Float, im: &Float, radius: &Float) -> Self {
        Self {
            re: Interval::new(rd(prec, re - radius), ru(prec, re + radius)),
            im: Interval::new(rd(prec, im - radius), ru(prec, im + radius)),
        }
    }

    pub fn re(&self) -> &Interval {
        &self.re
    }

    pub fn im(&self) -> &Interval {
        &self.im
    }

    pub fn re_lo(&self) -> &Float {
        self.re.lo()
    }

    pub fn re_hi(&self) -> &Float {
        self.re.hi()
    }

    pub fn im_lo(&self) -> &Float {
        self.im.lo()
    }

    pub fn im_hi(&self) -> &Float {
        self.im.hi()
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn mid(&self) -> (Float, Float) {
        (self.re.mid(), self.im.mid())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn square(&self) -> Self {
        Self { re: self.re.square().sub(&self.im.square()), im: self.re.mul(&self.im).mul_u32(2) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn mul_u32(&self, k: u32) -> Self {
        Self { re: self.re.mul_u32(k), im: self.im.mul_u32(k) }
    }

    /// Enclosure of `|x|^2` over the rectangle.
    pub fn norm_sqr(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    /// `inf |x|` (rounded down).
    pub fn abs_lower(&self) -> Float {
        let p = self.prec();
        let a = rd(p, self.re.mig().square_ref());
        let b = rd(p, self.im.mig().square_ref());
        rd(p, rd(p, &a + &b).sqrt_ref())
    }

    /// `sup |x|` (rounded up).
    pub fn abs_upper(&self) -> Float {
        let p = self.prec();
        let a = ru(p, self.re.mag().square_ref());
        let b = ru(p, self.im.mag().square_ref());
        ru(p, ru(p, &a + &b).sqrt_ref())
    }

    pub fn abs(&self) -> Interval {
        Interval::new(self.abs_lower(), self.abs_upper())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Float, im: &Float) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        let n = self.norm_sqr();
        if n.lo <= 0 {
            return Err(NumericError::DivisionByZero);
        }
        let inv = n.recip()?;
        Ok(Self { re: self.re.mul(&inv), im: self.im.neg().mul(&inv) })
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumericError> {
        Ok(self.mul(&o.recip()?))
    }

    /// Is `o` strictly inside `self`?
    pub fn interior_contains(&self, o: &Self) -> bool {
        self.re.interior_contains(&o.re) && self.im.interior_contains(&o.im)
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.re.disjoint(&o.re) || self.im.disjoint(&o.im)
    }

    pub fn hull(&self, o: &Self) -> Self {
        Self { re: self.re.hull(&o.re), im: self.im.hull(&o.im) }
    }

    /// Principal square root over a rectangle avoiding the closed negative
    /// real axis.
    fn principal_sqrt(&self) -> Self {
        let half_sum = self.abs().add(&self.re).div_u32(2);
        let half_diff = self.abs().sub(&self.re).div_u32(2);
        let p = half_sum.sqrt();
        let q = if self.im.lo > 0 {
            half_diff.sqrt()
        } else if self.im.hi < 0 {
            half_diff.sqrt().neg()
        } else {
            // straddles the positive real axis: q = im / (2p) with p > 0
            let two_p = p.mul_u32(2);
            self.im.mul(&two_p.recip().expect("re > 0 on this branch"))
        };
        Self { re: p, im: q }
    }
}

/// The two continuous square-root branches over `x`.
///
/// The second entry is the negation of the first. Fails when the rectangle
/// may contain the origin, or when rounding makes the two enclosures touch.
pub fn interval_sqrt_branches(
    x: &IntervalComplex,
) -> Result<(IntervalComplex, IntervalComplex), NumericError> {
    if x.contains_zero() {
        return Err(NumericError::ContainsZero);
    }
    let crosses_negative_axis = x.re.hi < 0 && x.im.contains_zero();
    let first = if crosses_negative_axis {
        // sqrt(x) = i sqrt(-x), and -x straddles the positive real axis
        x.neg().principal_sqrt().mul_i()
    } else {
        x.principal_sqrt()
    };
    let second = first.neg();
    if !first.disjoint(&second) {
        return Err(NumericError::BranchesNotSeparated);
    }
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskClass {
    Inside,
    Outside,
    Unknown,
}

/// Certified position of `value` relative to the open disk `D(0, radius)`.
pub fn classify_disk(value: &IntervalComplex, radius: &Float) -> DiskClass {
    assert!(*radius > 0, "radius must be positive");
    if value.abs_upper() < *radius {
        DiskClass::Inside
    } else if value.abs_lower() > *radius {
        DiskClass::Outside
    } else {
        DiskClass::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn tight(re: f64, im: f64) -> IntervalComplex {
        let e = 1e-12;
        IntervalComplex::from_bounds(P, re - e, re + e, im - e, im + e)
    }

    #[test]
    fn sqrt_of_four() {
        let (a, b) = interval_sqrt_branches(&tight(4.0, 0.0)).unwrap();
        let two = Float::with_val(P, 2);
        let zero = Float::new(P);
        assert!(a.contains_point(&two, &zero));
        assert!(b.contains_point(&Float::with_val(P, -2), &zero));
    }

    #[test]
    fn sqrt_of_minus_one() {
        let (a, b) = interval_sqrt_branches(&tight(-1.0, 0.0)).unwrap();
        let zero = Float::new(P);
        let one = Float::with_val(P, 1);
        let m_one = Float::with_val(P, -1);
        let hits_i = a.contains_point(&zero, &one) || b.contains_point(&zero, &one);
        let hits_mi = a.contains_point(&zero, &m_one) || b.contains_point(&zero, &m_one);
        assert!(hits_i && hits_mi);
    }

    #[test]
    fn sqrt_refuses_origin() {
        let x = IntervalComplex::from_bounds(P, -0.1, 0.1, -0.1, 0.1);
        assert_eq!(interval_sqrt_branches(&x), Err(NumericError::ContainsZero));
    }

    #[test]
    fn disk_classification() {
        let half = Float::with_val(P, 0.5);
        assert_eq!(classify_disk(&IntervalComplex::point_f64(P, 0.1, 0.0), &half), DiskClass::Inside);
        assert_eq!(classify_disk(&IntervalComplex::point_f64(P, 1.0, 0.0), &half), DiskClass::Outside);
        let straddle = IntervalComplex::from_bounds(P, 0.4, 0.6, 0.0, 0.0);
        assert_eq!(classify_disk(&straddle, &half), DiskClass::Unknown);
    }

    #[test]
    fn rational_enclosure_is_tight_and_correct() {
        let third = Rational::from((1, 3));
        let i = Interval::from_rational(64, &third);
        assert!(i.lo() < i.hi());
        assert!(Rational::from(i.lo().to_rational().unwrap()) < third);
        assert!(Rational::from(i.hi().to_rational().unwrap()) > third);
    }

    #[test]
    fn recip_refuses_zero() {
        let x = IntervalComplex::from_bounds(P, -1.0, 1.0, -1.0, 1.0);
        assert!(x.recip().is_err());
    }
}
