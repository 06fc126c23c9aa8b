//! Time grids for scans and for trading.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A textual grid description: `linear:a:b:n` (n points from a to b
/// inclusive) or `geometric-to-1:k` (`{0} ∪ {1 - 2^-j : j = 1..k}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TimeGridSpec {
    Linear { start: f64, end: f64, points: usize },
    GeometricToOne { octaves: u32 },
}

impl TimeGridSpec {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            TimeGridSpec::Linear { start, end, points } => {
                let n = points - 1;
                (0..=n)
                    .map(|i| {
                        if i == n {
                            end
                        } else {
                            start + (end - start) * i as f64 / n as f64
                        }
                    })
                    .collect()
            }
            TimeGridSpec::GeometricToOne { octaves } => geometric_to_one(octaves),
        }
    }
}

impl FromStr for TimeGridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation(format!("invalid time grid {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["linear", a, b, n] => {
                let start: f64 = a.parse().map_err(|_| bad())?;
                let end: f64 = b.parse().map_err(|_| bad())?;
                let points: usize = n.parse().map_err(|_| bad())?;
                if points < 2 || !(start < end) || !(0.0..1.0).contains(&start) || !(end <= 1.0) {
                    return Err(bad());
                }
                Ok(TimeGridSpec::Linear { start, end, points })
            }
            ["geometric-to-1", k] => {
                let octaves: u32 = k.parse().map_err(|_| bad())?;
                if octaves == 0 || octaves > 52 {
                    return Err(bad());
                }
                Ok(TimeGridSpec::GeometricToOne { octaves })
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for TimeGridSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TimeGridSpec> for String {
    fn from(g: TimeGridSpec) -> String {
        g.to_string()
    }
}

impl fmt::Display for TimeGridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeGridSpec::Linear { start, end, points } => write!(f, "linear:{start}:{end}:{points}"),
            TimeGridSpec::GeometricToOne { octaves } => write!(f, "geometric-to-1:{octaves}"),
        }
    }
}

/// `{0} ∪ {1 - 2^-j : j = 1..=octaves}`.
pub fn geometric_to_one(octaves: u32) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((1..=octaves).map(|j| 1.0 - (0.5_f64).powi(j as i32)))
        .collect()
}

/// Interior points every 0.05 merged with the geometric refinement toward 1.
pub fn default_scan_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    g.extend(geometric_to_one(20).into_iter().skip(1));
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    g
}

/// Trading grid on `[0, horizon]`, uniform in `sqrt(1 - t)` so that steps
/// shrink like `sqrt(1 - t)` where the insider drift grows.
pub fn trading_grid(horizon: f64, steps: usize) -> Vec<f64> {
    let u_end = (1.0 - horizon).sqrt();
    let mut g: Vec<f64> = (0..=steps)
        .map(|k| {
            if k == steps {
                return horizon;
            }
            let u = 1.0 + (u_end - 1.0) * k as f64 / steps as f64;
            1.0 - u * u
        })
        .collect();
    g[0] = 0.0;
    g
}

/// `grid` with the midpoint of every step inserted.
pub fn refine(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(grid.last().copied());
    out
}

/// Uniform grid on `[0, horizon]`.
pub fn uniform_grid(horizon: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|k| if k == steps { horizon } else { horizon * k as f64 / steps as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let g: TimeGridSpec = "linear:0.1:0.9:9".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 9);
        assert!((p[4] - 0.5).abs() < 1e-15 && p[8] == 0.9);
        let g: TimeGridSpec = "geometric-to-1:20".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 21);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[20], 1.0 - 2f64.powi(-20));
        assert_eq!(g.to_string(), "geometric-to-1:20");
        for bad in ["linear:0:1", "linear:0.5:0.1:3", "geometric-to-1:0", "log:1", "linear:a:1:3"] {
            assert!(bad.parse::<TimeGridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn refine_inserts_midpoints() {
        assert_eq!(refine(&[0.0, 0.5, 1.0]), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn trading_grid_shape() {
        let g = trading_grid(0.99, 100);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 0.99);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[100] - g[99] < g[1] - g[0]);
    }
}
