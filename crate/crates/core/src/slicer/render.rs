use rayon::prelude::*;

use super::{SlicePlane, SlicerError};
use crate::numeric::{IntervalComplex, PrecisionContext};
use crate::tower::{MembershipStatus, TowerModel};

/// Pixel value for points whose depth could not be certified.
pub const UNKNOWN_PIXEL: u16 = 65535;

/// 16-bit raster over `w in [-1, 1]^2`; a pixel holds `depth + 1`, so 0
/// means outside `X_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u16>,
    pub comment: String,
}

impl Raster {
    /// Binary PGM (P5, maxval 65535, big-endian samples).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n# {}\n{} {}\n65535\n", self.comment, self.width, self.height).into_bytes();
        for p in &self.pixels {
            out.extend_from_slice(&p.to_be_bytes());
        }
        out
    }
}

pub fn render_escape(
    t: &TowerModel,
    plane: &SlicePlane,
    width: usize,
    height: usize,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<Raster, SlicerError> {
    if width == 0 || height == 0 || width > 4096 || height > 4096 {
        return Err(SlicerError::InvalidArgument(format!("grid {width}x{height} outside 1..=4096")));
    }
    let n_max = n_max.min(t.depth());
    let prec = t.working_bits(n_max, ctx)?;
    let ctx = PrecisionContext::new(prec, ctx.max_bits().max(prec))?;
    let rows: Vec<Result<Vec<u16>, SlicerError>> = (0..height)
        .into_par_iter()
        .map(|j| {
            let im = 1.0 - (2 * j + 1) as f64 / height as f64;
            (0..width)
                .map(|i| {
                    let re = -1.0 + (2 * i + 1) as f64 / width as f64;
                    let w = IntervalComplex::point_f64(prec, re, im);
                    let z = plane.z_of(&w);
                    let m = t.membership_depth_upto(&z, &w, &ctx, n_max)?;
                    Ok(match m.status {
                        MembershipStatus::Unknown => UNKNOWN_PIXEL,
                        MembershipStatus::Certified => (m.depth + 1) as u16,
                    })
                })
                .collect()
        })
        .collect();
    let mut pixels = Vec::with_capacity(width * height);
    for r in rows {
        pixels.extend(r?);
    }
    Ok(Raster { width, height, pixels, comment: format!("tower={} {} n_max={n_max}", t.hash(), plane.describe()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_schedule, constant_radii, ints};
    use crate::tower::AnchorSequence;

    #[test]
    fn depth_zero_is_a_disk() {
        let s = build_schedule(&constant_radii(1), &ints(&[1]), 1).unwrap();
        let t = TowerModel::new(s, AnchorSequence::new(0), 4096).unwrap();
        let ctx = PrecisionContext::new(64, 4096).unwrap();
        let r = render_escape(&t, &SlicePlane::vertical(0.4), 40, 40, 0, &ctx).unwrap();
        let inside = r.pixels.iter().filter(|&&p| p == 1).count();
        // pi (1/2)^2 / 4 of the square
        assert!((inside as f64 / 1600.0 - std::f64::consts::PI / 16.0).abs() < 0.02);
        let r1 = render_escape(&t, &SlicePlane::vertical(0.4), 200, 200, 1, &ctx).unwrap();
        assert!(r1.pixels.contains(&2));
        assert!(r1.to_pgm().starts_with(b"P5\n# tower="));
    }
}
