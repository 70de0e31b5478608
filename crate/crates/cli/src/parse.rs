//! Parsers for command-line literals.

use entangle_core::verify::suite::{Axis, ComplexGrid};
use entangle_core::C64;

/// Parses `re+imj` style literals: `1`, `-0.5`, `2j`, `1.5-0.25j`, `1e-3+2e-1j`, `-j`.
/// `i` is accepted in place of `j`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("invalid complex literal {s:?}; expected re+imj, e.g. 0.5-1.2j");
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('i')) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| err());
    };
    // The split is the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| err())?;
    let im: f64 = im.parse().map_err(|_| err())?;
    Ok(C64::new(re, im))
}

fn parse_axis(part: &str, name: &str) -> Result<Axis, String> {
    let fields: Vec<&str> = part.split(':').collect();
    let err = || format!("invalid grid axis {part:?}; expected {name}:lo:hi:steps");
    if fields.len() != 4 || fields[0] != name {
        return Err(err());
    }
    let lo: f64 = fields[1].parse().map_err(|_| err())?;
    let hi: f64 = fields[2].parse().map_err(|_| err())?;
    let steps: usize = fields[3].parse().map_err(|_| err())?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(err());
    }
    Ok(Axis { lo, hi, steps })
}

/// Parses `re:lo:hi:steps,im:lo:hi:steps`.
pub fn parse_grid(s: &str) -> Result<ComplexGrid, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("invalid grid {s:?}; expected re:lo:hi:steps,im:lo:hi:steps"))?;
    Ok(ComplexGrid { re: parse_axis(re.trim(), "re")?, im: parse_axis(im.trim(), "im")? })
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn display(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=11).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" { "0".into() } else { s }
}
