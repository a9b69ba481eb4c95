// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! List syntax shared by every grid-valued flag.
//!
//! Real lists are comma-separated items, each either a number or
//! `start:stop:count` (inclusive, evenly spaced). Integer lists accept numbers
//! and inclusive ranges `a..b`. Numbers may carry a `pi` factor: `pi`, `2pi`,
//! `-0.5pi`.

use std::f64::consts::PI;

use crate::error::{usage, Result};

fn number(token: &str) -> Option<f64> {
    let t = token.trim();
    let value = match t.strip_suffix("pi") {
        Some("") | Some("+") => PI,
        Some("-") => -PI,
        Some(head) => head.trim().parse::<f64>().ok()? * PI,
        None => t.parse().ok()?,
    };
    value.is_finite().then_some(value)
}

fn bad(name: &str, item: &str, why: &str) -> crate::error::CliError {
    usage(format!("--{name}: `{item}` {why}"))
}

pub fn reals(name: &str, text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [one] => out.push(number(one).ok_or_else(|| bad(name, item, "is not a finite number"))?),
            [a, b, n] => {
                let (a, b) = (
                    number(a).ok_or_else(|| bad(name, item, "has a bad start"))?,
                    number(b).ok_or_else(|| bad(name, item, "has a bad stop"))?,
                );
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| bad(name, item, "needs an integer point count"))?;
                if n == 0 {
                    return Err(bad(name, item, "has zero points"));
                }
                if b < a {
                    return Err(bad(name, item, "runs backwards"));
                }
                if n == 1 {
                    out.push(a);
                } else {
                    let step = (b - a) / (n - 1) as f64;
                    out.extend((0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }));
                }
            }
            _ => return Err(bad(name, item, "is neither a number nor start:stop:count")),
        }
    }
    if out.is_empty() {
        return Err(usage(format!("--{name}: empty list")));
    }
    Ok(out)
}

pub fn counts(name: &str, text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| bad(name, item, "is not a non-negative integer"))
        };
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if b < a {
                return Err(bad(name, item, "runs backwards"));
            }
            out.extend(a..=b);
        } else {
            out.push(parse(item)?);
        }
    }
    if out.is_empty() {
        return Err(usage(format!("--{name}: empty list")));
    }
    Ok(out)
}

/// `lo:hi` with `lo ≤ hi`.
pub fn pair(name: &str, text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| bad(name, text, "must look like lo:hi"))?;
    let lo = number(a).ok_or_else(|| bad(name, text, "has a bad lower bound"))?;
    let hi = number(b).ok_or_else(|| bad(name, text, "has a bad upper bound"))?;
    if hi < lo {
        return Err(bad(name, text, "runs backwards"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_real_items() {
        let v = reals("T", "0.1, 0.2,1:2:3").unwrap();
        assert_eq!(v, vec![0.1, 0.2, 1.0, 1.5, 2.0]);
        assert_eq!(reals("neff", "0:2pi:2").unwrap(), vec![0.0, 2.0 * PI]);
        assert_eq!(reals("neff", "-pi").unwrap(), vec![-PI]);
    }

    #[test]
    fn linspace_hits_endpoint_exactly() {
        let v = reals("T", "-3:3:21").unwrap();
        assert_eq!(v.len(), 21);
        assert_eq!(v[20], 3.0);
    }

    #[test]
    fn rejects_empty_and_backwards() {
        assert!(reals("T", "").is_err());
        assert!(reals("T", " , ").is_err());
        assert!(reals("T", "3:1:5").is_err());
        assert!(reals("T", "1:2:0").is_err());
        assert!(reals("T", "nan").is_err());
        assert!(counts("M", "5..2").is_err());
        assert!(pair("neff-range", "2:1").is_err());
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(counts("M", "1..4,9").unwrap(), vec![1, 2, 3, 4, 9]);
        assert_eq!(counts("M", "2..=3").unwrap(), vec![2, 3]);
        assert!(counts("M", "1.5").is_err());
    }
}
