//! Complex literals of the form `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`.
//! Whitespace is rejected.

use dimer::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed complex literal {0:?} (expected a+bi)")]
pub struct ParseComplexError(pub String);

pub fn parse_complex(s: &str) -> Result<Complex64, ParseComplexError> {
    let err = || ParseComplexError(s.to_owned());
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(s).map(|re| Complex64::new(re, 0.0)).ok_or_else(err);
    };
    // Split before the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'))
        .unwrap_or(0);
    let (re_part, im_part) = body.split_at(split);
    let re = if re_part.is_empty() {
        0.0
    } else {
        parse_real(re_part).ok_or_else(err)?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).ok_or_else(err)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(s: &str) -> Option<f64> {
    // f64::from_str accepts "inf"/"nan"; those are not valid amplitudes.
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}
