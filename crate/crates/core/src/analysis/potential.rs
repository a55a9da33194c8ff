use num_complex::Complex64;

/// Points of `(3/k) Z^2` in the closed disk `|z| <= 1 - 1/k`.
pub fn potential_grid(k: u32) -> Vec<Complex64> {
    assert!(k >= 1, "k starts at 1");
    let bound = i64::from(k - 1).pow(2);
    let reach = (i64::from(k) / 3) + 1;
    let step = 3.0 / f64::from(k);
    let mut out = Vec::new();
    for j in -reach..=reach {
        for l in -reach..=reach {
            if 9 * (j * j + l * l) <= bound {
                out.push(Complex64::new(j as f64 * step, l as f64 * step));
            }
        }
    }
    out
}

/// Logarithmic potential of `nu_k`, the average of the normalized arc
/// length on the circles `|z - sigma| = 1/k` over the grid:
/// `L_k(z) = mean_sigma log max(|z - sigma|, 1/k)`.
pub fn l_potential(k: u32, z: Complex64) -> f64 {
    let grid = potential_grid(k);
    let floor = 1.0 / f64::from(k);
    grid.iter().map(|s| (z - s).norm().max(floor).ln()).sum::<f64>() / grid.len() as f64
}

/// Fraction of the circle `|x - c| = rho` inside the disk `|x - z| < r`.
pub fn arc_fraction(c: Complex64, rho: f64, z: Complex64, r: f64) -> f64 {
    let d = (c - z).norm();
    if d + rho <= r {
        1.0
    } else if d >= r + rho || d + r <= rho {
        0.0
    } else {
        let cos = ((d * d + rho * rho - r * r) / (2.0 * d * rho)).clamp(-1.0, 1.0);
        cos.acos() / std::f64::consts::PI
    }
}

/// `nu_k(D(z, r))`, exact arc-length fractions.
pub fn nu_ball_mass(k: u32, z: Complex64, r: f64) -> f64 {
    assert!(r > 0.0, "radius must be positive");
    let grid = potential_grid(k);
    let rho = 1.0 / f64::from(k);
    grid.iter().map(|&c| arc_fraction(c, rho, z, r)).sum::<f64>() / grid.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert_eq!(l_potential(1, Complex64::new(0.5, 0.0)), 0.0);
        assert!((l_potential(2, Complex64::new(0.0, 0.0)) - 0.5f64.ln()).abs() < 1e-15);
        let l4 = (0.25f64.ln() + 4.0 * 0.75f64.ln()) / 5.0;
        assert!((l_potential(4, Complex64::new(0.0, 0.0)) - l4).abs() < 1e-15);
        assert_eq!(potential_grid(4).len(), 5);
        assert!((nu_ball_mass(4, Complex64::new(0.0, 0.0), 0.3) - 0.2).abs() < 1e-15);
        assert_eq!(nu_ball_mass(1, Complex64::new(0.0, 0.0), 2.0), 1.0);
    }

    #[test]
    fn arc_fraction_matches_sampling() {
        let c = Complex64::new(0.1, -0.2);
        for (z, r) in [(Complex64::new(0.3, 0.0), 0.25), (Complex64::new(0.1, 0.0), 0.2), (Complex64::new(0.0, 0.0), 0.05)] {
            let n = 200_000;
            let hits = (0..n)
                .filter(|i| {
                    let x = c + Complex64::from_polar(0.2, (*i as f64 + 0.5) * std::f64::consts::TAU / n as f64);
                    (x - z).norm() < r
                })
                .count();
            assert!((hits as f64 / n as f64 - arc_fraction(c, 0.2, z, r)).abs() < 1e-4);
        }
    }
}
