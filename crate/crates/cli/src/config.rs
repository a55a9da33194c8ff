//! Flat `key=value` run configuration.
//!
//! One setting per line, `#` starts a comment. Keys carry a section prefix
//! (`schedule.r`, `plane.z0_re`, ...); unknown keys are an error.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rug::Rational;
use sha2::{Digest, Sha256};
use wermer_core::numeric::PrecisionContext;
use wermer_core::schedule::{
    doubly_exponential_radii, parse_multiplicity_text, parse_radius_text, Multiplicity, ParameterSchedule, Radius,
};
use wermer_core::slicer::SlicePlane;
use wermer_core::tower::{AnchorSequence, TowerModel};

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// As written: a list, a single value repeated, or `double_exp`.
    pub r: String,
    pub m: String,
    pub depth: usize,
    /// `n:factor` pairs multiplying `delta_n`, for negative controls.
    pub corrupt_delta: String,
    pub seed: u64,
    pub first_zero: bool,
    pub bits: u32,
    pub max_bits: u32,
    pub z0: Complex64,
    pub gamma: Complex64,
    /// Side of the square slice grid for convergence and harmonic gaps.
    pub slice_grid: usize,
    pub render_size: usize,
    /// Radii per center in the two-regime fit.
    pub radii: usize,
    pub gauge_points: usize,
    pub cap: u64,
    pub regime_c: f64,
    pub converge_depth: usize,
    pub jensen_count: usize,
    pub jensen_depth: usize,
    pub capacity_r: String,
    pub capacity_depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            r: "1/10".into(),
            m: "1,4".into(),
            depth: 2,
            corrupt_delta: String::new(),
            seed: 0,
            first_zero: true,
            bits: 128,
            max_bits: 4096,
            z0: Complex64::new(0.4, 0.0),
            gamma: Complex64::new(0.0, 0.0),
            slice_grid: 50,
            render_size: 256,
            radii: 16,
            gauge_points: 40,
            cap: 1_000_000,
            regime_c: 3.0,
            converge_depth: 4,
            jensen_count: 20,
            jensen_depth: 2,
            capacity_r: "1/10".into(),
            capacity_depth: 12,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| anyhow!("{key}: cannot parse {v:?}: {e}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
            let (key, v) = (key.trim(), v.trim());
            if !seen.insert(key.to_string()) {
                bail!("line {}: duplicate key {key}", i + 1);
            }
            c.set(key, v).with_context(|| format!("line {}", i + 1))?;
        }
        c.validate()?;
        Ok(c)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "schedule.r" => self.r = v.into(),
            "schedule.m" => self.m = v.into(),
            "schedule.depth" => self.depth = num(key, v)?,
            "schedule.corrupt_delta" => self.corrupt_delta = v.into(),
            "anchors.seed" => self.seed = num(key, v)?,
            "anchors.first_zero" => self.first_zero = num(key, v)?,
            "precision.bits" => self.bits = num(key, v)?,
            "precision.max_bits" => self.max_bits = num(key, v)?,
            "plane.z0_re" => self.z0.re = num(key, v)?,
            "plane.z0_im" => self.z0.im = num(key, v)?,
            "plane.gamma_re" => self.gamma.re = num(key, v)?,
            "plane.gamma_im" => self.gamma.im = num(key, v)?,
            "grids.slice" => self.slice_grid = num(key, v)?,
            "grids.render" => self.render_size = num(key, v)?,
            "grids.radii" => self.radii = num(key, v)?,
            "grids.gauge" => self.gauge_points = num(key, v)?,
            "enumeration.cap" => self.cap = num(key, v)?,
            "profile.c" => self.regime_c = num(key, v)?,
            "converge.ordinary_depth" => self.converge_depth = num(key, v)?,
            "jensen.count" => self.jensen_count = num(key, v)?,
            "jensen.depth" => self.jensen_depth = num(key, v)?,
            "capacity.r" => self.capacity_r = v.into(),
            "capacity.depth" => self.capacity_depth = num(key, v)?,
            _ => bail!("unknown config key {key}"),
        }
        Ok(())
    }

    /// Parse-level checks: the schedule lists and the plane must be usable.
    pub fn validate(&self) -> Result<()> {
        self.radii_seq(&self.r, self.depth)?;
        self.multiplicities()?;
        self.corruption()?;
        self.plane()?;
        self.precision()?;
        Ok(())
    }

    fn radii_seq(&self, text: &str, depth: usize) -> Result<Vec<Radius>> {
        if text == "double_exp" {
            return Ok(doubly_exponential_radii(depth));
        }
        let items: Vec<Radius> = text
            .split(',')
            .map(|x| parse_radius_text(x).ok_or_else(|| anyhow!("bad radius {x:?}")))
            .collect::<Result<_>>()?;
        expand(items, depth, "schedule.r")
    }

    pub fn radii_list(&self) -> Result<Vec<Radius>> {
        self.radii_seq(&self.r, self.depth)
    }

    pub fn capacity_radii(&self) -> Result<Vec<Radius>> {
        self.radii_seq(&self.capacity_r, self.capacity_depth)
    }

    pub fn multiplicities(&self) -> Result<Vec<Multiplicity>> {
        let items: Vec<Multiplicity> = self
            .m
            .split(',')
            .map(|x| parse_multiplicity_text(x).ok_or_else(|| anyhow!("bad multiplicity {x:?}")))
            .collect::<Result<_>>()?;
        expand(items, self.depth, "schedule.m")
    }

    fn corruption(&self) -> Result<Vec<(usize, Rational)>> {
        if self.corrupt_delta.is_empty() {
            return Ok(Vec::new());
        }
        self.corrupt_delta
            .split(',')
            .map(|item| {
                let (n, f) = item.split_once(':').ok_or_else(|| anyhow!("corrupt_delta wants n:factor, got {item:?}"))?;
                let f = parse_radius_text(f)
                    .and_then(|r| r.exact().cloned())
                    .ok_or_else(|| anyhow!("bad factor {f:?}"))?;
                Ok((num("schedule.corrupt_delta", n.trim())?, f))
            })
            .collect()
    }

    /// The schedule without est1/est2 verification (callers verify).
    pub fn schedule_unchecked(&self) -> Result<ParameterSchedule> {
        Ok(ParameterSchedule::unchecked(&self.radii_list()?, &self.multiplicities()?, self.depth, &self.corruption()?)?)
    }

    /// Tower over an already verified schedule.
    pub fn tower(&self, s: ParameterSchedule) -> Result<TowerModel> {
        Ok(TowerModel::new(s, AnchorSequence::with_first_zero(self.seed, self.first_zero), self.max_bits)?)
    }

    pub fn plane(&self) -> Result<SlicePlane> {
        Ok(SlicePlane::new(self.z0, self.gamma)?)
    }

    pub fn precision(&self) -> Result<PrecisionContext> {
        Ok(PrecisionContext::new(self.bits, self.max_bits)?)
    }

    /// Every setting in a fixed order; the hash is taken over this text.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        put("schedule.r", self.r.clone());
        put("schedule.m", self.m.clone());
        put("schedule.depth", self.depth.to_string());
        put("schedule.corrupt_delta", self.corrupt_delta.clone());
        put("anchors.seed", self.seed.to_string());
        put("anchors.first_zero", self.first_zero.to_string());
        put("precision.bits", self.bits.to_string());
        put("precision.max_bits", self.max_bits.to_string());
        put("plane.z0_re", format!("{:?}", self.z0.re));
        put("plane.z0_im", format!("{:?}", self.z0.im));
        put("plane.gamma_re", format!("{:?}", self.gamma.re));
        put("plane.gamma_im", format!("{:?}", self.gamma.im));
        put("grids.slice", self.slice_grid.to_string());
        put("grids.render", self.render_size.to_string());
        put("grids.radii", self.radii.to_string());
        put("grids.gauge", self.gauge_points.to_string());
        put("enumeration.cap", self.cap.to_string());
        put("profile.c", format!("{:?}", self.regime_c));
        put("converge.ordinary_depth", self.converge_depth.to_string());
        put("jensen.count", self.jensen_count.to_string());
        put("jensen.depth", self.jensen_depth.to_string());
        put("capacity.r", self.capacity_r.clone());
        put("capacity.depth", self.capacity_depth.to_string());
        s
    }

    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A single entry stands for a constant sequence; a list must cover `depth`.
fn expand<T: Clone>(items: Vec<T>, depth: usize, key: &str) -> Result<Vec<T>> {
    match items.len() {
        1 => Ok(vec![items[0].clone(); depth]),
        n if n >= depth => Ok(items),
        n => bail!("{key} has {n} entries, depth {depth} needs {depth}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::parse(&RunConfig::default().canonical()).unwrap();
        assert_eq!(c.hash(), RunConfig::default().hash());
        assert_eq!(c.radii_list().unwrap().len(), 2);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(RunConfig::parse("schedule.q=1").is_err());
        assert!(RunConfig::parse("schedule.depth=1\nschedule.depth=2").is_err());
        assert!(RunConfig::parse("schedule.m=1,4,16\nschedule.depth=4").is_err());
    }

    #[test]
    fn comments_and_overrides() {
        let c = RunConfig::parse("# tower\nschedule.r = 1/100  # smaller\nplane.z0_re=0.45\n").unwrap();
        assert_eq!(c.r, "1/100");
        assert_eq!(c.z0.re, 0.45);
        assert_ne!(c.hash(), RunConfig::default().hash());
    }
}
