use super::{AnchorSequence, TowerError, TowerModel};
use crate::schedule::{build_schedule, Multiplicity, Radius};

/// Text description of a tower: one `key=value` record per line.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerDescription {
    pub r: Vec<Radius>,
    pub m: Vec<Multiplicity>,
    pub depth: usize,
    pub seed: u64,
    pub first_zero: bool,
}

impl TowerDescription {
    pub fn of(t: &TowerModel) -> Self {
        let s = t.schedule();
        Self {
            r: s.r_seq().to_vec(),
            m: s.m_seq().to_vec(),
            depth: s.depth(),
            seed: t.anchors().seed(),
            first_zero: t.anchors().first_zero(),
        }
    }

    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        format!(
            "schedule.r={}\nschedule.m={}\nschedule.depth={}\nanchors.seed={}\nanchors.first_zero={}\n",
            join(self.r.iter().map(ToString::to_string).collect()),
            join(self.m.iter().map(ToString::to_string).collect()),
            self.depth,
            self.seed,
            self.first_zero
        )
    }

    pub fn build(&self, max_bits: u32) -> Result<TowerModel, TowerError> {
        let s = build_schedule(&self.r, &self.m, self.depth)?;
        TowerModel::new(s, AnchorSequence::with_first_zero(self.seed, self.first_zero), max_bits)
    }
}

impl TowerModel {
    /// SHA-256 of the description text, hex encoded.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(TowerDescription::of(self).to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn list<T>(v: &str, f: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    if v.trim().is_empty() {
        return Some(Vec::new());
    }
    v.split(',').map(|x| f(x.trim())).collect()
}

pub fn parse_tower_description(text: &str) -> Result<TowerDescription, TowerError> {
    let mut d = TowerDescription { r: vec![], m: vec![], depth: 0, seed: 0, first_zero: true };
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (k, v) = line.split_once('=').ok_or_else(|| TowerError::Parse(format!("no '=' in {line:?}")))?;
        let bad = || TowerError::Parse(format!("bad value for {k}: {v:?}"));
        match k.trim() {
            "schedule.r" => d.r = list(v, crate::schedule::parse_radius_text).ok_or_else(bad)?,
            "schedule.m" => d.m = list(v, crate::schedule::parse_multiplicity_text).ok_or_else(bad)?,
            "schedule.depth" => d.depth = v.trim().parse().map_err(|_| bad())?,
            "anchors.seed" => d.seed = v.trim().parse().map_err(|_| bad())?,
            "anchors.first_zero" => d.first_zero = v.trim().parse().map_err(|_| bad())?,
            other => return Err(TowerError::Parse(format!("unknown key {other}"))),
        }
    }
    Ok(d)
}
