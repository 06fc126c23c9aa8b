//! Deterministic market coefficients, the variance clock `tau(t) = int_0^t sigma^2`,
//! the insider's anticipating variable and exact path simulation.
//!
//! Coefficients are piecewise constant on `[0, 1]`, so every time integral
//! used downstream (the variance clock, the log-price thresholds and the
//! classical value) is a finite sum.

use rand_distr::{Distribution, StandardNormal};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::path_rng;

/// Schema version written into every serialized [`CoefficientSet`].
pub const COEFFICIENT_SCHEMA_VERSION: u32 = 1;

/// Piecewise-constant interest rate, drift and volatility on `[0, 1]`.
///
/// Piece `k` covers `[breakpoints[k], breakpoints[k + 1])`; the last piece is
/// closed at `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    breakpoints: Vec<f64>,
    r: Vec<f64>,
    b: Vec<f64>,
    sigma: Vec<f64>,
    // running integrals at each breakpoint
    cum_var: Vec<f64>,
    cum_r: Vec<f64>,
    cum_b: Vec<f64>,
    cum_growth: Vec<f64>,
    growth: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientDoc {
    #[serde(default = "default_schema")]
    schema_version: u32,
    breakpoints: Vec<f64>,
    r: Vec<f64>,
    b: Vec<f64>,
    sigma: Vec<f64>,
}

fn default_schema() -> u32 {
    COEFFICIENT_SCHEMA_VERSION
}

fn running_integral(breakpoints: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(breakpoints.len());
    let mut acc = 0.0;
    out.push(acc);
    for (k, v) in values.iter().enumerate() {
        acc += v * (breakpoints[k + 1] - breakpoints[k]);
        out.push(acc);
    }
    out
}

impl CoefficientSet {
    pub fn new(breakpoints: Vec<f64>, r: Vec<f64>, b: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        let pieces = breakpoints.len().saturating_sub(1);
        if pieces == 0 {
            return Err(Error::validation("need at least two breakpoints"));
        }
        if breakpoints[0] != 0.0 || breakpoints[pieces] != 1.0 {
            return Err(Error::validation("breakpoints must start at 0 and end at 1"));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::validation("breakpoints must be strictly increasing"));
        }
        for (name, v) in [("r", &r), ("b", &b), ("sigma", &sigma)] {
            if v.len() != pieces {
                return Err(Error::validation(format!(
                    "{name} has {} values for {pieces} pieces",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(format!("{name} must be finite on every piece")));
            }
        }
        if let Some(s) = sigma.iter().find(|s| **s <= 0.0) {
            return Err(Error::validation(format!("volatility must be positive, got {s}")));
        }
        let var: Vec<f64> = sigma.iter().map(|s| s * s).collect();
        let growth: Vec<f64> = (0..pieces)
            .map(|k| {
                let theta = (b[k] - r[k]) / sigma[k];
                r[k] + 0.5 * theta * theta
            })
            .collect();
        Ok(CoefficientSet {
            cum_var: running_integral(&breakpoints, &var),
            cum_r: running_integral(&breakpoints, &r),
            cum_b: running_integral(&breakpoints, &b),
            cum_growth: running_integral(&breakpoints, &growth),
            growth,
            breakpoints,
            r,
            b,
            sigma,
        })
    }

    /// Time-homogeneous market.
    pub fn constant(r: f64, b: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![r], vec![b], vec![sigma])
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> usize {
        self.sigma.len()
    }

    /// Index of the piece containing `t` (right-continuous, `t = 1` in the last piece).
    pub fn piece(&self, t: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&x| x <= t);
        idx.clamp(1, self.pieces()) - 1
    }

    pub fn r_at(&self, t: f64) -> f64 {
        self.r[self.piece(t)]
    }

    pub fn b_at(&self, t: f64) -> f64 {
        self.b[self.piece(t)]
    }

    pub fn sigma_at(&self, t: f64) -> f64 {
        self.sigma[self.piece(t)]
    }

    /// Smallest volatility, `s1`.
    pub fn sigma_min(&self) -> f64 {
        self.sigma.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest volatility, `s2`.
    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0, f64::max)
    }

    fn integral(&self, cum: &[f64], values: impl Fn(usize) -> f64, t: f64) -> f64 {
        let k = self.piece(t);
        cum[k] + values(k) * (t - self.breakpoints[k])
    }

    /// `tau(t) = int_0^t sigma^2(u) du`, without domain checks.
    pub(crate) fn tau(&self, t: f64) -> f64 {
        self.integral(&self.cum_var, |k| self.sigma[k] * self.sigma[k], t)
    }

    /// `rho = tau(1)`.
    pub fn rho(&self) -> f64 {
        self.cum_var[self.pieces()]
    }

    /// `rho - tau(t) = int_t^1 sigma^2`, summed from the right so that it
    /// keeps full relative precision as `t -> 1`.
    pub fn remaining_variance(&self, t: f64) -> f64 {
        let k = self.piece(t);
        let n = self.pieces();
        let mut acc = self.sigma[k] * self.sigma[k] * (self.breakpoints[k + 1] - t);
        for j in k + 1..n {
            acc += self.sigma[j] * self.sigma[j] * (self.breakpoints[j + 1] - self.breakpoints[j]);
        }
        acc.max(0.0)
    }

    /// `int_0^t r(u) du`.
    pub fn int_r(&self, t: f64) -> f64 {
        self.integral(&self.cum_r, |k| self.r[k], t)
    }

    /// `int_0^t b(u) du`.
    pub fn int_b(&self, t: f64) -> f64 {
        self.integral(&self.cum_b, |k| self.b[k], t)
    }

    /// `int_0^t (r + theta^2 / 2) du` with `theta = (b - r) / sigma`.
    pub fn int_growth(&self, t: f64) -> f64 {
        self.integral(&self.cum_growth, |k| self.growth[k], t)
    }

    pub fn time_change(&self) -> TimeChange<'_> {
        TimeChange { coeffs: self }
    }
}

impl Serialize for CoefficientSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoefficientDoc {
            schema_version: COEFFICIENT_SCHEMA_VERSION,
            breakpoints: self.breakpoints.clone(),
            r: self.r.clone(),
            b: self.b.clone(),
            sigma: self.sigma.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CoefficientDoc::deserialize(d)?;
        if doc.schema_version != COEFFICIENT_SCHEMA_VERSION {
            return Err(de::Error::custom(format!(
                "unsupported coefficient schema version {}",
                doc.schema_version
            )));
        }
        CoefficientSet::new(doc.breakpoints, doc.r, doc.b, doc.sigma).map_err(de::Error::custom)
    }
}

/// The variance clock `tau(t)` of `M(t) = int_0^t sigma dw`.
#[derive(Debug, Clone, Copy)]
pub struct TimeChange<'a> {
    coeffs: &'a CoefficientSet,
}

impl TimeChange<'_> {
    pub fn tau(&self, t: f64) -> Result<f64> {
        check_unit_time(t)?;
        Ok(self.coeffs.tau(t))
    }

    pub fn rho(&self) -> f64 {
        self.coeffs.rho()
    }

    pub fn remaining(&self, t: f64) -> Result<f64> {
        check_unit_time(t)?;
        Ok(self.coeffs.remaining_variance(t))
    }
}

fn check_unit_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain(format!("time {t} outside [0, 1]")))
    }
}

/// `tau(t) = int_0^t sigma^2(u) du`.
pub fn time_change(coeffs: &CoefficientSet, t: f64) -> Result<f64> {
    coeffs.time_change().tau(t)
}

/// `V_T^F = log x0 + int_0^T (r + ((b - r) / sigma)^2 / 2) du`, the value of the
/// uninformed log-utility investor.
pub fn classical_value(coeffs: &CoefficientSet, horizon: f64, x0: f64) -> Result<f64> {
    if !(horizon > 0.0 && horizon <= 1.0) {
        return Err(Error::domain(format!("horizon {horizon} outside (0, 1]")));
    }
    if !(x0 > 0.0 && x0.is_finite()) {
        return Err(Error::validation(format!("initial wealth must be positive, got {x0}")));
    }
    Ok(x0.ln() + coeffs.int_growth(horizon))
}

/// A price level; `"inf"` in JSON stands for an absent upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceLevel(pub f64);

impl Serialize for PriceLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PriceLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(PriceLevel(x)),
            Raw::Text(s) if s == "inf" || s == "+inf" => Ok(PriceLevel(f64::INFINITY)),
            Raw::Text(s) => Err(de::Error::custom(format!("invalid price level {s:?}"))),
        }
    }
}

/// What the insider knows at time 0 about the terminal price `P1(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InsiderInfo {
    /// `L = 1{P1(1) in [p1, p2)}`. `p1 = 0` and `p2 = "inf"` act as sentinels
    /// for a missing side; both together carry no information.
    Interval { p1: PriceLevel, p2: PriceLevel },
    /// `L = 1{P1(1) >= p1}`.
    LowerBound { p1: PriceLevel },
    /// `L = 1{P1(1) < p2}`.
    UpperBound { p2: PriceLevel },
    /// The terminal price itself.
    ExactTerminal,
}

impl InsiderInfo {
    pub fn interval(p1: f64, p2: f64) -> Self {
        InsiderInfo::Interval {
            p1: PriceLevel(p1),
            p2: PriceLevel(p2),
        }
    }

    /// Interval information with no content at all: `[0, inf)`.
    pub fn nothing() -> Self {
        Self::interval(0.0, f64::INFINITY)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, p: f64, allow_zero: bool| {
            let ok = if allow_zero { p >= 0.0 } else { p > 0.0 };
            if ok && !p.is_nan() {
                Ok(())
            } else {
                Err(Error::validation(format!("price level {name} = {p} must be positive")))
            }
        };
        match *self {
            InsiderInfo::Interval { p1, p2 } => {
                check("p1", p1.0, true)?;
                check("p2", p2.0, false)?;
                if !(p1.0 < p2.0) {
                    return Err(Error::validation(format!(
                        "interval needs p1 < p2, got [{}, {})",
                        p1.0, p2.0
                    )));
                }
                Ok(())
            }
            InsiderInfo::LowerBound { p1 } => {
                check("p1", p1.0, false)?;
                if p1.0.is_infinite() {
                    return Err(Error::validation("lower bound must be finite"));
                }
                Ok(())
            }
            InsiderInfo::UpperBound { p2 } => {
                check("p2", p2.0, false)?;
                if p2.0.is_infinite() {
                    return Err(Error::validation("upper bound must be finite"));
                }
                Ok(())
            }
            InsiderInfo::ExactTerminal => Ok(()),
        }
    }
}

/// The insider information expressed through `M(1) = int_0^1 sigma dw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anticipation {
    /// `L = 1{M(1) in [c1, c2)}`; either end may be infinite.
    Band { c1: f64, c2: f64 },
    /// `M(1)` itself.
    Terminal,
}

impl Anticipation {
    pub fn band(c1: f64, c2: f64) -> Self {
        Anticipation::Band { c1, c2 }
    }

    /// Realized information for a given terminal value `M(1)`.
    pub fn realize(&self, m1: f64) -> Realized {
        match *self {
            Anticipation::Band { c1, c2 } => Realized::Indicator(c1 <= m1 && m1 < c2),
            Anticipation::Terminal => Realized::Terminal(m1),
        }
    }
}

/// The value of the insider variable on one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realized {
    Indicator(bool),
    Terminal(f64),
}

/// Log-thresholds `c_i = log(p_i / P0) + int_0^1 (sigma^2 / 2 - b) du` on `M(1)`.
///
/// Missing sides come back as `-inf` / `+inf`.
pub fn log_thresholds(coeffs: &CoefficientSet, info: &InsiderInfo, p0: f64) -> Result<(f64, f64)> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::validation(format!("initial price must be positive, got {p0}")));
    }
    info.validate()?;
    let shift = 0.5 * coeffs.rho() - coeffs.int_b(1.0);
    let level = |p: f64| (p / p0).ln() + shift;
    match *info {
        InsiderInfo::Interval { p1, p2 } => Ok((level(p1.0), level(p2.0))),
        InsiderInfo::LowerBound { p1 } => Ok((level(p1.0), f64::INFINITY)),
        InsiderInfo::UpperBound { p2 } => Ok((f64::NEG_INFINITY, level(p2.0))),
        InsiderInfo::ExactTerminal => Err(Error::validation(
            "exact terminal information has no thresholds",
        )),
    }
}

/// Resolves the insider information against a market and initial price.
pub fn anticipation(coeffs: &CoefficientSet, info: &InsiderInfo, p0: f64) -> Result<Anticipation> {
    match info {
        InsiderInfo::ExactTerminal => {
            if !(p0 > 0.0 && p0.is_finite()) {
                return Err(Error::validation(format!("initial price must be positive, got {p0}")));
            }
            Ok(Anticipation::Terminal)
        }
        _ => {
            let (c1, c2) = log_thresholds(coeffs, info, p0)?;
            Ok(Anticipation::Band { c1, c2 })
        }
    }
}

/// One simulated path on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRealization {
    /// Simulation grid: the requested grid merged with the coefficient breakpoints.
    pub grid: Vec<f64>,
    /// Brownian increments `w(t_{k+1}) - w(t_k)`.
    pub dw: Vec<f64>,
    /// `M(t_k) = int_0^{t_k} sigma dw`.
    pub m: Vec<f64>,
    /// `log P1(t_k)`.
    pub log_price: Vec<f64>,
    pub realized: Realized,
}

/// Sorted union of `grid` and the coefficient breakpoints inside `[grid[0], grid[last]]`.
pub fn merge_breakpoints(coeffs: &CoefficientSet, grid: &[f64]) -> Vec<f64> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let mut out: Vec<f64> = grid
        .iter()
        .copied()
        .chain(coeffs.breakpoints().iter().copied().filter(|&b| b > lo && b < hi))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

pub(crate) fn validate_grid(grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::validation("grid needs at least two points"));
    }
    if grid.iter().any(|t| !(lo..=hi).contains(t)) {
        return Err(Error::validation(format!("grid points must lie in [{lo}, {hi}]")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::validation("grid must be strictly increasing"));
    }
    Ok(())
}

/// Simulates `M`, `w` and `log P1` on `grid` (which must contain 0 and 1) with
/// exact Gaussian increments of `M`, and evaluates the insider variable.
///
/// Path `path_index` of the stream family keyed by `seed` is used; the same
/// pair always produces the same path.
pub fn simulate_path(
    coeffs: &CoefficientSet,
    info: &Anticipation,
    p0: f64,
    grid: &[f64],
    seed: u64,
    path_index: u64,
) -> Result<PathRealization> {
    validate_grid(grid, 0.0, 1.0)?;
    if grid[0] != 0.0 || grid[grid.len() - 1] != 1.0 {
        return Err(Error::validation("path grid must include 0 and 1"));
    }
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::validation(format!("initial price must be positive, got {p0}")));
    }
    let grid = merge_breakpoints(coeffs, grid);
    let mut rng = path_rng(seed, path_index);
    let n = grid.len();
    let mut dw = Vec::with_capacity(n - 1);
    let mut m = Vec::with_capacity(n);
    let mut log_price = Vec::with_capacity(n);
    m.push(0.0);
    log_price.push(p0.ln());
    for k in 0..n - 1 {
        let (t0, t1) = (grid[k], grid[k + 1]);
        let xi: f64 = StandardNormal.sample(&mut rng);
        // each step lies inside one coefficient piece
        let sigma = coeffs.sigma_at(t0);
        let dwk = xi * (t1 - t0).sqrt();
        dw.push(dwk);
        let mk = m[k] + sigma * dwk;
        m.push(mk);
        log_price.push(p0.ln() + coeffs.int_b(t1) - 0.5 * coeffs.tau(t1) + mk);
    }
    let realized = info.realize(m[n - 1]);
    Ok(PathRealization {
        grid,
        dw,
        m,
        log_price,
        realized,
    })
}
