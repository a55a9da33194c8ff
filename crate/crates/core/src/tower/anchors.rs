use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use crate::numeric::rational_from_f64;

/// Plastic number, the generator of the R2 low-discrepancy sequence.
const PLASTIC: f64 = 1.324_717_957_244_746;

/// Anchors `a_n` in `D(0, 1/4)`: odd and even indices come from two
/// independently shifted R2 sequences, mapped area-uniformly into the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSequence {
    seed: u64,
    first_zero: bool,
    shifts: [f64; 4],
}

impl AnchorSequence {
    pub fn new(seed: u64) -> Self {
        Self::with_first_zero(seed, true)
    }

    pub fn with_first_zero(seed: u64, first_zero: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shifts = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        Self { seed, first_zero, shifts }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn first_zero(&self) -> bool {
        self.first_zero
    }

    /// Point `j >= 1` of the unit-square sequence for one parity class.
    pub fn unit_square(&self, odd: bool, j: u64) -> (f64, f64) {
        let a1 = 1.0 / PLASTIC;
        let a2 = 1.0 / (PLASTIC * PLASTIC);
        let (s1, s2) = if odd { (self.shifts[0], self.shifts[1]) } else { (self.shifts[2], self.shifts[3]) };
        let u = (s1 + j as f64 * a1).fract();
        let v = (s2 + j as f64 * a2).fract();
        (u, v)
    }

    /// `a_n` for `n >= 1`, as an `f64` pair (taken as exact).
    pub fn anchor(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "anchors start at n = 1");
        if n == 1 && self.first_zero {
            return Complex64::new(0.0, 0.0);
        }
        let odd = n % 2 == 1;
        let j = ((n + 1) / 2) as u64;
        let (u, v) = self.unit_square(odd, j);
        // slightly inside the radius so rounding cannot reach |a| = 1/4
        let rho = 0.25 * (1.0 - 1e-9) * u.sqrt();
        Complex64::from_polar(rho, std::f64::consts::TAU * v)
    }

    pub fn anchor_exact(&self, n: usize) -> (Rational, Rational) {
        let a = self.anchor(n);
        (rational_from_f64(a.re), rational_from_f64(a.im))
    }
}

/// Largest deviation `|#{points in [0,x)x[0,y)}/N - xy|` over a 32 x 32
/// lattice of corners.
pub fn corner_discrepancy(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mut worst: f64 = 0.0;
    for i in 1..=32 {
        for k in 1..=32 {
            let (x, y) = (i as f64 / 32.0, k as f64 / 32.0);
            let c = points.iter().filter(|(u, v)| *u < x && *v < y).count() as f64;
            worst = worst.max((c / n - x * y).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inside_quarter_disk() {
        let a = AnchorSequence::new(7);
        assert_eq!(a.anchor(1), Complex64::new(0.0, 0.0));
        for n in 1..5000 {
            assert!(a.anchor(n).norm() < 0.25);
        }
    }

    #[test]
    fn discrepancy_decreases() {
        let a = AnchorSequence::new(3);
        for odd in [true, false] {
            let d: Vec<f64> = [64u64, 512, 4096]
                .iter()
                .map(|&n| corner_discrepancy(&(1..=n).map(|j| a.unit_square(odd, j)).collect::<Vec<_>>()))
                .collect();
            assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
        }
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(AnchorSequence::new(1).anchor(2), AnchorSequence::new(2).anchor(2));
        assert_eq!(AnchorSequence::new(1).anchor(3), AnchorSequence::new(1).anchor(3));
    }
}
