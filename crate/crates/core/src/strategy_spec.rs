//! Command-line strategy strings: `angles:θ,α,β` or `vector:w,x,y,z`.
//!
//! Angles accept plain numbers or multiples of pi such as `pi`, `-pi/2`,
//! `3pi/4`, `3*pi/4` or `0.5*pi`. Vector components are plain numbers and the
//! vector is renormalized.

use std::f64::consts::PI;
use std::fmt;

use crate::su2::Su2Element;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySpecError(pub String);

impl fmt::Display for StrategySpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StrategySpecError {}

fn err(msg: impl Into<String>) -> StrategySpecError {
    StrategySpecError(msg.into())
}

fn parse_number(s: &str) -> Result<f64, StrategySpecError> {
    let v: f64 = s.trim().parse().map_err(|_| err(format!("`{}` is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(err(format!("`{}` is not finite", s.trim())));
    }
    Ok(v)
}

/// Parse a single angle, in radians.
pub fn parse_angle(expr: &str) -> Result<f64, StrategySpecError> {
    let s = expr.trim();
    if s.is_empty() {
        return Err(err("empty angle"));
    }
    let Some(pos) = s.find("pi") else {
        return parse_number(s);
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);

    let head = head.trim();
    let head = head.strip_suffix('*').map(str::trim).unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_number(h)?,
    };
    let tail = tail.trim();
    let denom = if tail.is_empty() {
        1.0
    } else if let Some(d) = tail.strip_prefix('/') {
        let d = parse_number(d)?;
        if d == 0.0 {
            return Err(err(format!("division by zero in `{s}`")));
        }
        d
    } else {
        return Err(err(format!("unexpected `{tail}` after pi in `{s}`")));
    };
    Ok(coef * PI / denom)
}

fn components<'a>(body: &'a str, expected: usize, kind: &str) -> Result<Vec<&'a str>, StrategySpecError> {
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != expected {
        return Err(err(format!(
            "{kind} strategy needs exactly {expected} comma-separated components, got {}",
            parts.len()
        )));
    }
    Ok(parts)
}

/// Parse `angles:θ,α,β` or `vector:w,x,y,z`.
pub fn parse_strategy(spec: &str) -> Result<Su2Element, StrategySpecError> {
    let spec = spec.trim();
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| err(format!("expected `angles:θ,α,β` or `vector:w,x,y,z`, got `{spec}`")))?;
    match kind.trim() {
        "angles" => {
            let p = components(body, 3, "angles")?;
            let (t, a, b) = (parse_angle(p[0])?, parse_angle(p[1])?, parse_angle(p[2])?);
            Su2Element::from_angles(t, a, b).map_err(|e| err(e.to_string()))
        }
        "vector" => {
            let p = components(body, 4, "vector")?;
            let mut u = [0.0; 4];
            for (slot, s) in u.iter_mut().zip(&p) {
                *slot = parse_number(s)?;
            }
            Su2Element::from_vector(u).map_err(|e| err(e.to_string()))
        }
        other => Err(err(format!("unknown strategy kind `{other}`, expected `angles` or `vector`"))),
    }
}
