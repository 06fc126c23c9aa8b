//! Monte Carlo: trading the optimal strategies along simulated paths, and
//! oracles for `E[alpha^2(t)]` and the conditional-probability martingale.
//!
//! Per path, with `pi_k` the risky fraction at the left end of step `k`,
//!
//! ```text
//! log X(T) = log x0 + int_0^T r + sum_k [pi_k int (b - r) - pi_k^2 / 2 int sigma^2 + pi_k dM_k]
//! ```
//!
//! which is exact for a portfolio held constant over each step.
//!
//! Paths are split into fixed chunks; each chunk accumulates its own
//! statistics and chunks are merged in index order, so reports do not depend
//! on the number of worker threads.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drift::band_drift;
use crate::error::{Error, Result};
use crate::grid::refine;
use crate::market::{classical_value, merge_breakpoints, validate_grid, Anticipation, CoefficientSet};
use crate::normal;
use crate::quadrature::{expected_alpha_sq, half_integrated_alpha_sq};
use crate::rng::path_rng;

const CHUNK: usize = 1024;

/// Paths allowed to overflow, per path simulated.
pub const OVERFLOW_RATE: f64 = 1e-4;

/// Running count, mean and centred sum of squares.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        Welford {
            count: n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.count as f64 * w,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Sample standard deviation over `sqrt(count)`.
    pub fn standard_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

fn chunks(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(CHUNK as u64))
        .map(|i| {
            let lo = i * CHUNK as u64;
            (lo, (lo + CHUNK as u64).min(n))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Riskless,
    Classical,
    InsiderInterval,
    InsiderOnesided,
    InsiderExact,
}

impl StrategyKind {
    pub fn is_insider(self) -> bool {
        matches!(
            self,
            StrategyKind::InsiderInterval | StrategyKind::InsiderOnesided | StrategyKind::InsiderExact
        )
    }

    fn check(self, info: &Anticipation) -> Result<()> {
        let ok = match (self, *info) {
            (StrategyKind::Riskless | StrategyKind::Classical, _) => true,
            (StrategyKind::InsiderInterval, Anticipation::Band { c1, c2 }) => c1.is_finite() && c2.is_finite(),
            (StrategyKind::InsiderOnesided, Anticipation::Band { c1, c2 }) => c1.is_finite() != c2.is_finite(),
            (StrategyKind::InsiderExact, Anticipation::Terminal) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "strategy {self:?} does not match the insider information {info:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MCConfig {
    pub n_paths: u64,
    /// Trading dates `0 = t_0 < ... < t_n = T`.
    pub grid: Vec<f64>,
    pub seed: u64,
    pub strategy: StrategyKind,
    /// Trade each path on the grid and on its midpoint refinement and report
    /// `2 log X_fine - log X_coarse`, cancelling the first-order bias of
    /// left-endpoint rebalancing.
    #[serde(default)]
    pub extrapolate: bool,
}

impl MCConfig {
    pub fn horizon(&self) -> f64 {
        self.grid.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::validation("n_paths must be at least 1"));
        }
        validate_grid(&self.grid, 0.0, 1.0)?;
        if self.grid[0] != 0.0 {
            return Err(Error::validation("trading grid must start at 0"));
        }
        if self.strategy.is_insider() && self.horizon() >= 1.0 {
            return Err(Error::validation("insider strategies need a horizon below 1"));
        }
        Ok(())
    }
}

/// Log wealth of one simulated path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub path: u64,
    /// `L` for band information, `None` otherwise.
    pub realized_l: Option<bool>,
    pub log_wealth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub strategy: StrategyKind,
    pub seed: u64,
    pub n_paths: u64,
    /// Paths whose log wealth overflowed; excluded from the mean.
    pub flagged: u64,
    pub horizon: f64,
    /// Steps of the (coarse) trading grid.
    pub steps: usize,
    pub extrapolated: bool,
    pub mean_log_wealth: f64,
    pub standard_error: f64,
    /// `"riskless"`, `"V_T^F"` or `"V_T^G"`.
    pub target_kind: String,
    pub target: f64,
    pub target_error: f64,
    pub z_score: Option<f64>,
    /// Expectation of the simulated estimator on this grid: the target with
    /// `int E[alpha^2]` replaced by its left Riemann sum.
    pub discrete_target: f64,
    pub discrete_z_score: Option<f64>,
}

struct Step {
    sqrt_dt: f64,
    sigma: f64,
    int_excess: f64,
    d_tau: f64,
    /// `sqrt(rho - tau(t))` at the left end.
    sd_left: f64,
    merton: f64,
}

fn steps(coeffs: &CoefficientSet, grid: &[f64]) -> Vec<Step> {
    grid.windows(2)
        .map(|w| {
            let (t0, t1) = (w[0], w[1]);
            let sigma = coeffs.sigma_at(t0);
            Step {
                sqrt_dt: (t1 - t0).sqrt(),
                sigma,
                int_excess: (coeffs.int_b(t1) - coeffs.int_b(t0)) - (coeffs.int_r(t1) - coeffs.int_r(t0)),
                d_tau: coeffs.tau(t1) - coeffs.tau(t0),
                sd_left: coeffs.remaining_variance(t0).max(0.0).sqrt(),
                merton: (coeffs.b_at(t0) - coeffs.r_at(t0)) / (sigma * sigma),
            }
        })
        .collect()
}

struct Trader<'a> {
    steps: &'a [Step],
    /// Coarse step `k` spans fine steps `2k` and `2k + 1`.
    coarse: Option<&'a [Step]>,
    info: Anticipation,
    strategy: StrategyKind,
    base: f64,
    sd_tail: f64,
}

impl Trader<'_> {
    /// Log wealth and the realized band indicator for one path.
    fn run(&self, seed: u64, path: u64, xi: &mut Vec<f64>) -> (f64, Option<bool>) {
        let mut rng = path_rng(seed, path);
        xi.clear();
        xi.extend((0..self.steps.len()).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
        let mut m1 = 0.0;
        for (s, x) in self.steps.iter().zip(xi.iter_mut()) {
            *x *= s.sigma * s.sqrt_dt;
            m1 += *x;
        }
        if self.strategy.is_insider() {
            let tail: f64 = StandardNormal.sample(&mut rng);
            m1 += self.sd_tail * tail;
        }
        let indicator = match self.info {
            Anticipation::Band { c1, c2 } => Some(c1 <= m1 && m1 < c2),
            Anticipation::Terminal => None,
        };
        let fine = self.trade(self.steps, xi.iter().copied(), m1, indicator);
        let log_w = match self.coarse {
            None => fine,
            Some(coarse) => {
                let dm = xi.chunks_exact(2).map(|p| p[0] + p[1]);
                2.0 * fine - self.trade(coarse, dm, m1, indicator)
            }
        };
        (log_w, indicator)
    }

    fn trade(&self, steps: &[Step], dm: impl Iterator<Item = f64>, m1: f64, indicator: Option<bool>) -> f64 {
        let mut log_w = self.base;
        let mut m = 0.0;
        for (s, dmk) in steps.iter().zip(dm) {
            let pi = match self.strategy {
                StrategyKind::Riskless => 0.0,
                StrategyKind::Classical => s.merton,
                _ => {
                    let alpha = match self.info {
                        Anticipation::Band { c1, c2 } => band_drift(
                            (c1 - m) / s.sd_left,
                            (c2 - m) / s.sd_left,
                            s.sigma / s.sd_left,
                            indicator == Some(true),
                        ),
                        Anticipation::Terminal => s.sigma * (m1 - m) / (s.sd_left * s.sd_left),
                    };
                    s.merton + alpha / s.sigma
                }
            };
            if pi != 0.0 {
                log_w += pi * s.int_excess - 0.5 * pi * pi * s.d_tau + pi * dmk;
            }
            m += dmk;
        }
        log_w
    }
}

struct Chunked {
    stats: Welford,
    flagged: u64,
    records: Vec<PathRecord>,
}

fn simulate(
    coeffs: &CoefficientSet,
    info: &Anticipation,
    config: &MCConfig,
    x0: f64,
    keep_paths: bool,
) -> Result<(Chunked, usize)> {
    config.validate()?;
    config.strategy.check(info)?;
    if !(x0 > 0.0 && x0.is_finite()) {
        return Err(Error::validation(format!("initial wealth must be positive, got {x0}")));
    }
    let grid = merge_breakpoints(coeffs, &config.grid);
    let coarse = steps(coeffs, &grid);
    let fine = if config.extrapolate { steps(coeffs, &refine(&grid)) } else { Vec::new() };
    let (steps, coarse) = if config.extrapolate {
        (&fine, Some(coarse.as_slice()))
    } else {
        (&coarse, None)
    };
    let horizon = config.horizon();
    let trader = Trader {
        steps,
        coarse,
        info: *info,
        strategy: config.strategy,
        base: x0.ln() + coeffs.int_r(horizon),
        sd_tail: coeffs.remaining_variance(horizon).max(0.0).sqrt(),
    };
    let parts: Vec<Chunked> = chunks(config.n_paths)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut xi = Vec::with_capacity(steps.len());
            let mut out = Chunked {
                stats: Welford::default(),
                flagged: 0,
                records: Vec::new(),
            };
            for path in lo..hi {
                let (lw, l) = trader.run(config.seed, path, &mut xi);
                if lw.is_finite() {
                    out.stats.push(lw);
                } else {
                    out.flagged += 1;
                }
                if keep_paths {
                    out.records.push(PathRecord {
                        path,
                        realized_l: l,
                        log_wealth: lw,
                    });
                }
            }
            out
        })
        .collect();
    let mut total = Chunked {
        stats: Welford::default(),
        flagged: 0,
        records: Vec::new(),
    };
    for p in parts {
        total.stats = total.stats.merge(p.stats);
        total.flagged += p.flagged;
        total.records.extend(p.records);
    }
    let limit = (OVERFLOW_RATE * config.n_paths as f64).floor() as u64;
    if total.flagged > limit {
        return Err(Error::PathOverflow {
            flagged: total.flagged as usize,
            total: config.n_paths as usize,
            limit: limit as usize,
        });
    }
    Ok((total, grid.len() - 1))
}

/// `(target, its error, left-Riemann target)` for `strategy` on `grid`.
fn targets(coeffs: &CoefficientSet, info: &Anticipation, config: &MCConfig, x0: f64) -> Result<(String, f64, f64, f64)> {
    let horizon = config.horizon();
    match config.strategy {
        StrategyKind::Riskless => {
            let v = x0.ln() + coeffs.int_r(horizon);
            Ok(("riskless".into(), v, 0.0, v))
        }
        StrategyKind::Classical => {
            let v = classical_value(coeffs, horizon, x0)?;
            Ok(("V_T^F".into(), v, 0.0, v))
        }
        _ => {
            let vf = classical_value(coeffs, horizon, x0)?;
            let half = half_integrated_alpha_sq(coeffs, info, horizon)?;
            let grid = merge_breakpoints(coeffs, &config.grid);
            let mut sum = discrete_half_alpha_sq(coeffs, info, &grid)?;
            if config.extrapolate {
                sum = 2.0 * discrete_half_alpha_sq(coeffs, info, &refine(&grid))? - sum;
            }
            Ok(("V_T^G".into(), vf + half.value, half.abs_error, vf + sum))
        }
    }
}

/// `1/2 sum_k E[alpha^2(t_k)] (t_{k+1} - t_k)` over a trading grid.
pub fn discrete_half_alpha_sq(coeffs: &CoefficientSet, info: &Anticipation, grid: &[f64]) -> Result<f64> {
    validate_grid(grid, 0.0, 1.0)?;
    let terms: Vec<f64> = grid
        .par_windows(2)
        .map(|w| Ok(expected_alpha_sq(w[0], coeffs, info)?.value * (w[1] - w[0])))
        .collect::<Result<_>>()?;
    Ok(0.5 * terms.iter().sum::<f64>())
}

fn z(mean: f64, target: f64, se: f64) -> Option<f64> {
    (se > 0.0).then(|| (mean - target) / se)
}

/// Mean terminal log wealth of `config.strategy` with its comparison targets.
pub fn run_mc(coeffs: &CoefficientSet, info: &Anticipation, config: &MCConfig, x0: f64) -> Result<MCReport> {
    run(coeffs, info, config, x0, false).map(|(r, _)| r)
}

/// [`run_mc`] plus one record per path, in path order.
pub fn run_mc_with_paths(
    coeffs: &CoefficientSet,
    info: &Anticipation,
    config: &MCConfig,
    x0: f64,
) -> Result<(MCReport, Vec<PathRecord>)> {
    run(coeffs, info, config, x0, true)
}

fn run(
    coeffs: &CoefficientSet,
    info: &Anticipation,
    config: &MCConfig,
    x0: f64,
    keep: bool,
) -> Result<(MCReport, Vec<PathRecord>)> {
    let (sim, n_steps) = simulate(coeffs, info, config, x0, keep)?;
    let (kind, target, target_error, discrete) = targets(coeffs, info, config, x0)?;
    let mean = sim.stats.mean;
    let se = sim.stats.standard_error();
    let report = MCReport {
        strategy: config.strategy,
        seed: config.seed,
        n_paths: config.n_paths,
        flagged: sim.flagged,
        horizon: config.horizon(),
        steps: n_steps,
        extrapolated: config.extrapolate,
        mean_log_wealth: mean,
        standard_error: se,
        target_kind: kind,
        target,
        target_error,
        z_score: z(mean, target, se),
        discrete_target: discrete,
        discrete_z_score: z(mean, discrete, se),
    };
    Ok((report, sim.records))
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub n_paths: u64,
}

impl From<Welford> for McEstimate {
    fn from(w: Welford) -> Self {
        McEstimate {
            mean: w.mean,
            standard_error: w.standard_error(),
            n_paths: w.count,
        }
    }
}

/// Monte Carlo `E[alpha^2(t)]`: draws `(M(t), M(1))` jointly, evaluates the
/// drift on the realized information and averages its square.
pub fn drift_mc_oracle(coeffs: &CoefficientSet, info: &Anticipation, t: f64, n_paths: u64, seed: u64) -> Result<McEstimate> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("oracle time {t} outside (0, 1)")));
    }
    if n_paths == 0 {
        return Err(Error::validation("n_paths must be at least 1"));
    }
    let st = coeffs.tau(t).sqrt();
    let sd = coeffs.remaining_variance(t).sqrt();
    let sigma = coeffs.sigma_at(t);
    let stats = chunks(n_paths)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut w = Welford::default();
            for path in lo..hi {
                let mut rng = path_rng(seed, path);
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                let m = st * a;
                let m1 = m + sd * b;
                let alpha = match *info {
                    Anticipation::Band { c1, c2 } => {
                        band_drift((c1 - m) / sd, (c2 - m) / sd, sigma / sd, c1 <= m1 && m1 < c2)
                    }
                    Anticipation::Terminal => sigma * (m1 - m) / (sd * sd),
                };
                w.push(alpha * alpha);
            }
            w
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Welford::default(), Welford::merge);
    Ok(stats.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MartingaleRow {
    pub t: f64,
    pub mean: f64,
    pub standard_error: f64,
    /// `(mean - P(L = 1)) / standard_error`, `None` when the spread is zero.
    pub z_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleScan {
    /// `P(L = 1) = Phi(c2 / sqrt(rho)) - Phi(c1 / sqrt(rho))`.
    pub initial: f64,
    pub rows: Vec<MartingaleRow>,
    /// Fraction of paths with `L = 1`.
    pub indicator_frequency: McEstimate,
    pub max_abs_z: f64,
}

/// Empirical mean of `P(L = 1 | M(t))` along simulated paths at each grid time.
pub fn martingale_scan(
    coeffs: &CoefficientSet,
    (c1, c2): (f64, f64),
    grid: &[f64],
    n_paths: u64,
    seed: u64,
) -> Result<MartingaleScan> {
    if !(c1 < c2) {
        return Err(Error::validation(format!("thresholds need c1 < c2, got ({c1}, {c2})")));
    }
    if n_paths == 0 {
        return Err(Error::validation("n_paths must be at least 1"));
    }
    if grid.is_empty() || grid.iter().any(|t| !(0.0..1.0).contains(t)) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::validation("scan grid must be strictly increasing inside [0, 1)"));
    }
    let sd_incr: Vec<f64> = std::iter::once(0.0)
        .chain(grid.iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| (coeffs.tau(w[1]) - coeffs.tau(w[0])).max(0.0).sqrt())
        .collect();
    let sd_left: Vec<f64> = grid.iter().map(|&t| coeffs.remaining_variance(t).sqrt()).collect();
    let sd_tail = sd_left[sd_left.len() - 1];
    let n = grid.len();
    let parts: Vec<(Vec<Welford>, Welford)> = chunks(n_paths)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut per_t = vec![Welford::default(); n];
            let mut freq = Welford::default();
            for path in lo..hi {
                let mut rng = path_rng(seed, path);
                let mut m = 0.0;
                for k in 0..n {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    m += sd_incr[k] * xi;
                    per_t[k].push(normal::band_prob((c1 - m) / sd_left[k], (c2 - m) / sd_left[k]));
                }
                let xi: f64 = StandardNormal.sample(&mut rng);
                let m1 = m + sd_tail * xi;
                freq.push(if c1 <= m1 && m1 < c2 { 1.0 } else { 0.0 });
            }
            (per_t, freq)
        })
        .collect();
    let mut per_t = vec![Welford::default(); n];
    let mut freq = Welford::default();
    for (p, f) in parts {
        for (acc, w) in per_t.iter_mut().zip(p) {
            *acc = acc.merge(w);
        }
        freq = freq.merge(f);
    }
    let sd0 = coeffs.rho().sqrt();
    let initial = normal::band_prob(c1 / sd0, c2 / sd0);
    let rows: Vec<MartingaleRow> = grid
        .iter()
        .zip(&per_t)
        .map(|(&t, w)| {
            let se = w.standard_error();
            MartingaleRow {
                t,
                mean: w.mean,
                standard_error: se,
                z_score: z(w.mean, initial, se),
            }
        })
        .collect();
    let max_abs_z = rows.iter().filter_map(|r| r.z_score).map(f64::abs).fold(0.0, f64::max);
    Ok(MartingaleScan {
        initial,
        rows,
        indicator_frequency: freq.into(),
        max_abs_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{trading_grid, uniform_grid};

    fn unit() -> CoefficientSet {
        CoefficientSet::constant(0.0, 0.0, 1.0).unwrap()
    }

    fn config(strategy: StrategyKind, grid: Vec<f64>, n_paths: u64) -> MCConfig {
        MCConfig {
            n_paths,
            grid,
            seed: 7,
            strategy,
            extrapolate: false,
        }
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Welford::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (a, b) = xs.split_at(313);
        let mut wa = Welford::default();
        let mut wb = Welford::default();
        a.iter().for_each(|&x| wa.push(x));
        b.iter().for_each(|&x| wb.push(x));
        let merged = wa.merge(wb);
        assert_eq!(merged.count, 1000);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn riskless_is_exact_on_every_path() {
        let c = CoefficientSet::new(vec![0.0, 0.4, 1.0], vec![0.01, 0.03], vec![0.05, 0.02], vec![0.2, 0.4]).unwrap();
        let cfg = config(StrategyKind::Riskless, uniform_grid(1.0, 10), 200);
        let (rep, paths) = run_mc_with_paths(&c, &Anticipation::Terminal, &cfg, 2.0).unwrap();
        let want = 2f64.ln() + 0.4 * 0.01 + 0.6 * 0.03;
        assert!(paths.iter().all(|p| (p.log_wealth - want).abs() < 1e-15));
        assert_eq!(rep.standard_error, 0.0);
        assert_eq!(rep.z_score, None);
        assert!((rep.target - want).abs() < 1e-15);
    }

    #[test]
    fn classical_matches_closed_form() {
        let c = CoefficientSet::constant(0.01, 0.05, 0.2).unwrap();
        let cfg = config(StrategyKind::Classical, vec![0.0, 1.0], 100_000);
        let rep = run_mc(&c, &Anticipation::Terminal, &cfg, 1.0).unwrap();
        assert!((rep.target - 0.03).abs() < 1e-15);
        assert!(rep.z_score.unwrap().abs() < 3.0, "{rep:?}");
    }

    #[test]
    fn reports_are_deterministic_and_thread_independent() {
        let cfg = config(StrategyKind::InsiderInterval, trading_grid(0.9, 50), 3000);
        let info = Anticipation::band(-1.0, 1.0);
        let a = run_mc(&unit(), &info, &cfg, 1.0).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| run_mc(&unit(), &info, &cfg, 1.0).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.mean_log_wealth.to_bits(), b.mean_log_wealth.to_bits());
    }

    #[test]
    fn config_validation() {
        let info = Anticipation::band(-1.0, 1.0);
        let bad = [
            config(StrategyKind::InsiderInterval, uniform_grid(1.0, 4), 10),
            config(StrategyKind::Classical, vec![0.1, 0.5], 10),
            config(StrategyKind::Classical, vec![0.0, 0.5], 0),
            config(StrategyKind::InsiderExact, uniform_grid(0.5, 4), 10),
            config(StrategyKind::InsiderOnesided, uniform_grid(0.5, 4), 10),
        ];
        for cfg in bad {
            assert!(run_mc(&unit(), &info, &cfg, 1.0).is_err(), "{cfg:?}");
        }
        assert!(run_mc(&unit(), &info, &config(StrategyKind::Classical, vec![0.0, 0.5], 10), 0.0).is_err());
    }

    #[test]
    fn exact_oracle_is_bridge_variance() {
        let est = drift_mc_oracle(&unit(), &Anticipation::Terminal, 0.5, 100_000, 3).unwrap();
        assert!((est.mean - 2.0).abs() < 3.0 * est.standard_error, "{est:?}");
        let none = drift_mc_oracle(&unit(), &Anticipation::band(f64::NEG_INFINITY, f64::INFINITY), 0.5, 1000, 3).unwrap();
        assert_eq!(none.mean, 0.0);
        assert!(drift_mc_oracle(&unit(), &Anticipation::Terminal, 1.0, 10, 3).is_err());
    }

    #[test]
    fn oracle_agrees_with_quadrature() {
        let info = Anticipation::band(-1.0, 1.0);
        let est = drift_mc_oracle(&unit(), &info, 0.5, 200_000, 11).unwrap();
        let q = expected_alpha_sq(0.5, &unit(), &info).unwrap().value;
        assert!((est.mean - q).abs() < 3.0 * est.standard_error, "{est:?} vs {q}");
    }

    #[test]
    fn martingale_scan_is_flat() {
        let grid = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99];
        let scan = martingale_scan(&unit(), (-1.0, 0.5), &grid, 20_000, 5).unwrap();
        let want = normal::band_prob(-1.0, 0.5);
        assert_eq!(scan.rows[0].mean, want);
        assert_eq!(scan.rows[0].standard_error, 0.0);
        assert!(scan.max_abs_z <= 3.0, "{scan:?}");
        let f = scan.indicator_frequency;
        assert!((f.mean - want).abs() <= 3.0 * f.standard_error);
    }

    #[test]
    fn discretization_gap_shrinks_with_steps() {
        let info = Anticipation::band(-1.0, 1.0);
        let exact = half_integrated_alpha_sq(&unit(), &info, 0.99).unwrap().value;
        let coarse = discrete_half_alpha_sq(&unit(), &info, &trading_grid(0.99, 50)).unwrap();
        let fine = discrete_half_alpha_sq(&unit(), &info, &trading_grid(0.99, 100)).unwrap();
        assert!(coarse < fine && fine < exact);
        assert!(exact - fine < 0.6 * (exact - coarse));
    }
}
