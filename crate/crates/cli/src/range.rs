//! Grid flags: a single value, or `start:stop[:count]` spaced geometrically.

use std::str::FromStr;

pub const DEFAULT_COUNT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    /// Geometric points from `start` to `stop`, both included.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let ratio = (self.stop / self.start).ln();
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| match i {
                0 => self.start,
                i if i == self.count - 1 => self.stop,
                i => self.start * (ratio * i as f64 / last).exp(),
            })
            .collect()
    }

    /// The points rounded to integers, deduplicated, in the order given.
    pub fn integers(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::with_capacity(self.count);
        for x in self.points() {
            let n = x.round() as u64;
            if out.last() != Some(&n) {
                out.push(n);
            }
        }
        out
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| format!("`{t}` is not a number"))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(format!(
                    "grid values must be positive and finite, got `{t}`"
                ))
            }
        };
        match parts.as_slice() {
            [one] => {
                let v = num(one)?;
                Ok(Range {
                    start: v,
                    stop: v,
                    count: 1,
                })
            }
            [a, b] | [a, b, _] => {
                let count = match parts.get(2) {
                    Some(c) => c
                        .trim()
                        .parse()
                        .map_err(|_| format!("`{c}` is not a point count"))?,
                    None => DEFAULT_COUNT,
                };
                if count < 2 {
                    return Err("a start:stop grid needs at least 2 points".into());
                }
                Ok(Range {
                    start: num(a)?,
                    stop: num(b)?,
                    count,
                })
            }
            _ => Err(format!(
                "expected `value` or `start:stop[:count]`, got `{s}`"
            )),
        }
    }
}

/// A positive integer written in any float notation, such as `1e4`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v >= 1.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 {
        Ok(v as u64)
    } else {
        Err(format!("`{s}` is not a positive integer"))
    }
}

/// `u,v` with both entries positive.
pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `u,v`, got `{s}`"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    Ok((num(a)?, num(b)?))
}
