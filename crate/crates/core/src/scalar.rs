//! Text form of scalars: `2`, `-0.5+0.5i`, `i`, `-3i`.

use crate::error::{NelabError, Result};
use crate::spaces::Scalar;

fn parse_real(s: &str, whole: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| NelabError::Parse(format!("malformed scalar `{whole}`")))?;
    if !v.is_finite() {
        return Err(NelabError::Parse(format!("non-finite scalar `{whole}`")));
    }
    Ok(v)
}

fn parse_imag_coeff(s: &str, whole: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, whole),
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(NelabError::Parse("empty scalar".into()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Scalar::new(parse_real(&s, text)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Scalar::new(parse_real(&body[..k], text)?, parse_imag_coeff(&body[k..], text)?)),
        None => Ok(Scalar::new(0.0, parse_imag_coeff(body, text)?)),
    }
}

/// Inverse of [`parse_scalar`] for finite values.
pub fn format_scalar(z: Scalar) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{}{}i", z.re, sign, z.im.abs())
    }
}
