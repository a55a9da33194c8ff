use rug::{Float, Integer, Rational};

use super::{build_schedule, Multiplicity, ParameterSchedule, Radius, ScheduleError, LOG_BITS};
use crate::numeric::decimal_string;

const HEADER: &str = "n,r,m,log10_delta,log10_eps";

/// One line per `n = 0..=depth`; `r`, `m` and `log10_eps` are `-` at `n = 0`.
pub fn schedule_to_text(s: &ParameterSchedule) -> String {
    let ln10 = Float::with_val(LOG_BITS, 10).ln();
    let log10 = |x: Float| decimal_string(&(x / &ln10), 30);
    let mut out = format!("{HEADER}\n");
    out.push_str(&format!("0,-,-,{},-\n", log10(s.log_delta(0).mid())));
    for n in 1..=s.depth() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n,
            s.r(n),
            s.m(n),
            log10(s.log_delta(n).mid()),
            log10(s.log_eps(n).mid())
        ));
    }
    out
}

fn parse_rational(t: &str) -> Option<Rational> {
    match t.split_once('/') {
        Some((a, b)) => {
            let b: Integer = b.trim().parse().ok()?;
            if b == 0 {
                return None;
            }
            Some(Rational::from((a.trim().parse::<Integer>().ok()?, b)))
        }
        None => Some(Rational::from(t.trim().parse::<Integer>().ok()?)),
    }
}

pub fn parse_radius(t: &str) -> Option<Radius> {
    let t = t.trim();
    if let Some(inner) = t.strip_prefix("exp(").and_then(|x| x.strip_suffix(')')) {
        return parse_rational(inner).map(Radius::Exp);
    }
    parse_rational(t).map(Radius::Exact)
}

pub fn parse_multiplicity(t: &str) -> Option<Multiplicity> {
    let t = t.trim();
    if let Some(k) = t.strip_prefix("2^(2^").and_then(|x| x.strip_suffix(')')) {
        return k.parse().ok().map(Multiplicity::DoublyDyadic);
    }
    t.parse().ok().map(Multiplicity::Int)
}

/// Parse the text form back; the log columns are recomputed and compared.
pub fn parse_schedule_text(text: &str) -> Result<ParameterSchedule, ScheduleError> {
    let mut rs = Vec::new();
    let mut ms = Vec::new();
    let mut logs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == HEADER {
            continue;
        }
        let err = |msg: &str| ScheduleError::Parse { line: i + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(err("expected 5 fields"));
        }
        let n: usize = f[0].parse().map_err(|_| err("bad n"))?;
        if n != logs.len() {
            return Err(err("rows out of order"));
        }
        if n > 0 {
            rs.push(parse_radius(f[1]).ok_or_else(|| err("bad r"))?);
            ms.push(parse_multiplicity(f[2]).ok_or_else(|| err("bad m"))?);
        }
        logs.push((i + 1, Float::parse(f[3]).map(|v| Float::with_val(LOG_BITS, v)).map_err(|_| err("bad log10_delta"))?));
    }
    let depth = rs.len();
    let s = build_schedule(&rs, &ms, depth)?;
    let ln10 = Float::with_val(LOG_BITS, 10).ln();
    for (n, (line, v)) in logs.iter().enumerate() {
        let want = s.log_delta(n).mid() / &ln10;
        let tol = Float::with_val(LOG_BITS, want.abs_ref()) * 1e-27 + 1e-27;
        if Float::with_val(LOG_BITS, v - &want).abs() > tol {
            return Err(ScheduleError::Parse { line: *line, msg: "log10_delta disagrees with the recurrence".into() });
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn round_trip() {
        let s = build_schedule(&doubly_exponential_radii(3), &ints(&[1, 4, 16]), 3).unwrap();
        let text = schedule_to_text(&s);
        assert!(text.lines().nth(1).unwrap().starts_with("0,-,-,-0.301029995663981195213738894724"));
        let back = parse_schedule_text(&text).unwrap();
        assert_eq!(back.r_seq(), s.r_seq());
        assert_eq!(back.m_seq(), s.m_seq());
        assert_eq!(parse_multiplicity("2^(2^11)"), Some(Multiplicity::DoublyDyadic(11)));
    }
}
