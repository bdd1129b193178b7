// Copyright 2026 The Popledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact decimal parsing and rendering for rationals.
//!
//! Nothing here touches floating point: inputs such as `36800000e6` parse to
//! exact rationals and every rendering rounds half-to-even on the exact value.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LedgerError, Result};

pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

fn pow10_rat(exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(pow10(exp as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-exp) as u32))
    }
}

/// Parses `[-]digits[.digits][e[+-]digits]`. `_` and `,` are accepted as
/// digit-group separators in the mantissa.
pub fn parse_decimal(input: &str) -> Result<BigRational> {
    let bad = || LedgerError::InvalidNumber(input.to_string());
    let s = input.trim();
    let (negative, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    if exponent.abs() > 4000 {
        return Err(bad());
    }
    let mantissa: String = mantissa.chars().filter(|c| *c != '_' && *c != ',').collect();
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa.as_str(), ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i64;
    Ok(BigRational::from_integer(value) * pow10_rat(scale))
}

/// Parses a non-negative integer, allowing exponent notation (`7630000e3`).
pub fn parse_u128(input: &str) -> Result<u128> {
    let r = parse_decimal(input)?;
    if !r.is_integer() || r.is_negative() {
        return Err(LedgerError::InvalidNumber(input.to_string()));
    }
    r.to_integer().to_u128().ok_or_else(|| LedgerError::InvalidNumber(input.to_string()))
}

pub fn parse_u64(input: &str) -> Result<u64> {
    let v = parse_u128(input)?;
    u64::try_from(v).map_err(|_| LedgerError::InvalidNumber(input.to_string()))
}

/// Rounds to the nearest integer, ties to even.
pub fn round_half_even(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    let twice = &rem * 2u32;
    match twice.cmp(r.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1u32,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1u32
            }
        }
    }
}

/// Renders `r` with exactly `decimals` fractional digits.
pub fn to_fixed(r: &BigRational, decimals: u32) -> String {
    let scaled = round_half_even(&(r * BigRational::from_integer(pow10(decimals))));
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let body = if decimals == 0 {
        digits
    } else {
        let d = decimals as usize;
        let padded = format!("{digits:0>width$}", width = d + 1);
        let (i, f) = padded.split_at(padded.len() - d);
        format!("{i}.{f}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// floor(log10 |r|) for nonzero `r`.
pub fn decimal_exponent(r: &BigRational) -> i64 {
    let a = r.abs();
    let mut k = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while pow10_rat(k) > a {
        k -= 1;
    }
    while pow10_rat(k + 1) <= a {
        k += 1;
    }
    k
}

/// Rounds to `sig` significant figures, ties to even. Returns the rounded
/// value and the number of fractional digits needed to show it.
pub fn round_sig(r: &BigRational, sig: u32) -> (BigRational, u32) {
    if r.is_zero() {
        return (BigRational::zero(), sig.saturating_sub(1));
    }
    let shift = sig as i64 - 1 - decimal_exponent(r);
    let scale = pow10_rat(shift);
    let rounded = BigRational::from_integer(round_half_even(&(r * &scale))) / scale;
    (rounded, shift.max(0) as u32)
}

/// Positional rendering with `sig` significant figures.
pub fn to_sig_string(r: &BigRational, sig: u32) -> String {
    let (rounded, decimals) = round_sig(r, sig);
    to_fixed(&rounded, decimals)
}

/// Exact `p/q` form (denominator 1 still printed).
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || LedgerError::InvalidNumber(s.to_string());
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let p = BigInt::parse_bytes(p.as_bytes(), 10).ok_or_else(bad)?;
    let q = BigInt::parse_bytes(q.as_bytes(), 10).ok_or_else(bad)?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}
