//! Textual grammar for exact reals, accepted everywhere in the CLI:
//!
//! ```text
//! 3          -5/7                      rational
//! float:0.25                           tracked float
//! nf:t^2-2@[1,2]:(0,1)                 number-field element (here sqrt 2)
//! ```
//!
//! The `nf:` form carries the monic integer minimal polynomial in `t`, the
//! isolating interval of the chosen real root, and the power-basis
//! coordinates of the element.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{ExactReal, FieldContext, TrackedFloat};
use crate::error::{Error, Result};

pub fn parse_exact_real(input: &str) -> Result<ExactReal> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty exact-real literal".into()));
    }
    if let Some(rest) = s.strip_prefix("float:") {
        let v = f64::from_str(rest.trim())
            .map_err(|e| Error::Parse(format!("bad float literal {rest:?}: {e}")))?;
        return Ok(ExactReal::Float(TrackedFloat::new(v, 0.0)?));
    }
    if let Some(rest) = s.strip_prefix("nf:") {
        return parse_number_field(rest);
    }
    Ok(ExactReal::Rational(parse_rational(s)?))
}

/// Splits a comma-separated vector of exact reals, respecting brackets
/// inside `nf:` literals.
pub fn parse_exact_vector(input: &str) -> Result<Vec<ExactReal>> {
    split_top_level(input, ',')
        .into_iter()
        .map(|part| parse_exact_real(&part))
        .collect()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num = BigInt::from_str(num_s)
        .map_err(|e| Error::Parse(format!("bad integer {num_s:?}: {e}")))?;
    let den = match den_s {
        Some(d) => BigInt::from_str(d)
            .map_err(|e| Error::Parse(format!("bad integer {d:?}: {e}")))?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_number_field(rest: &str) -> Result<ExactReal> {
    // <poly>@[lo,hi]:(c0,...)
    let (poly_s, tail) = rest
        .split_once('@')
        .ok_or_else(|| Error::Parse(format!("missing '@' in nf literal {rest:?}")))?;
    let tail = tail.trim();
    if !tail.starts_with('[') {
        return Err(Error::Parse(format!("expected '[' after '@' in {rest:?}")));
    }
    let close = tail
        .find(']')
        .ok_or_else(|| Error::Parse(format!("unterminated interval in {rest:?}")))?;
    let interval_s = &tail[1..close];
    let after = tail[close + 1..].trim_start();
    let coords_s = after
        .strip_prefix(':')
        .ok_or_else(|| Error::Parse(format!("expected ':' before coordinates in {rest:?}")))?
        .trim();
    let coords_s = coords_s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("coordinates must be parenthesized in {rest:?}")))?;

    let min_poly = parse_int_poly(poly_s)?;
    let mut ends = interval_s.split(',');
    let lo = parse_rational(
        ends.next()
            .ok_or_else(|| Error::Parse("missing interval low end".into()))?,
    )?;
    let hi = parse_rational(
        ends.next()
            .ok_or_else(|| Error::Parse("missing interval high end".into()))?,
    )?;
    if ends.next().is_some() {
        return Err(Error::Parse("interval has more than two endpoints".into()));
    }
    let coords: Vec<BigRational> = coords_s
        .split(',')
        .map(parse_rational)
        .collect::<Result<_>>()?;
    let ctx: Arc<FieldContext> = FieldContext::new(min_poly, lo, hi)?;
    ExactReal::in_field(ctx, coords)
}

/// Parses a monic integer polynomial in `t`, e.g. `t^3-9` or `t^2-t-1`.
pub fn parse_int_poly(s: &str) -> Result<Vec<BigInt>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let bytes = compact.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        if i >= bytes.len() {
            return Err(Error::Parse(format!("dangling sign in polynomial {s:?}")));
        }
        let num_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff_mag = if num_start == i {
            BigInt::from(1)
        } else {
            BigInt::from_str(&compact[num_start..i])
                .map_err(|e| Error::Parse(format!("bad coefficient in {s:?}: {e}")))?
        };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let power: usize = if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let exp_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if exp_start == i {
                    return Err(Error::Parse(format!("missing exponent in {s:?}")));
                }
                compact[exp_start..i]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad exponent in {s:?}: {e}")))?
            } else {
                1
            }
        } else {
            if num_start == i {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} in polynomial {s:?}",
                    compact[i..].chars().next().unwrap()
                )));
            }
            0
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += BigInt::from(sign) * coeff_mag;
    }
    Ok(coeffs)
}

/// Splits on `sep` at bracket depth 0; `[`, `(` open and `]`, `)` close.
pub fn split_top_level(input: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                parts.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}
