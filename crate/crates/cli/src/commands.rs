use std::path::PathBuf;

use infovalue::grid::{trading_grid, uniform_grid};
use infovalue::report::{self, to_json};
use infovalue::{
    drift_mc_oracle, expected_alpha_sq, lemma_check as scan_lemma, martingale_scan as scan_martingale, run_mc_with_paths,
    value_of_information, Anticipation, MCConfig, StrategyKind, TimeGridSpec,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{emit, CliError, Common, Format};

const DEFAULT_EPS: f64 = 1e-3;
const DEFAULT_PATHS: u64 = 100_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_STEPS: usize = 200;

fn load(c: &Common) -> Result<RunConfig, CliError> {
    RunConfig::load(&c.config)
}

fn eps(c: &Common, cfg: &RunConfig) -> Result<f64, CliError> {
    let e = c.eps.or(cfg.eps).unwrap_or(DEFAULT_EPS);
    if e > 0.0 && e < 1.0 {
        Ok(e)
    } else {
        Err(CliError::Config(format!("eps {e} outside (0, 1)")))
    }
}

fn grid(c: &Common, cfg: &RunConfig, default: &str) -> Vec<f64> {
    c.tgrid
        .or(cfg.tgrid)
        .unwrap_or_else(|| default.parse::<TimeGridSpec>().expect("default grid parses"))
        .points()
}

fn paths(c: &Common, cfg: &RunConfig) -> Result<u64, CliError> {
    match c.paths.or(cfg.n_paths).unwrap_or(DEFAULT_PATHS) {
        0 => Err(CliError::Config("--paths must be at least 1".into())),
        n => Ok(n),
    }
}

fn seed(c: &Common, cfg: &RunConfig) -> u64 {
    c.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED)
}

fn json_only(c: &Common, what: &str) -> Result<(), CliError> {
    if c.format == Some(Format::Csv) {
        return Err(CliError::Config(format!("{what} writes JSON only")));
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    Ok(to_json(value).map_err(infovalue::Error::from)?.into_bytes())
}

fn band(info: &Anticipation) -> Result<(f64, f64), CliError> {
    match *info {
        Anticipation::Band { c1, c2 } => Ok((c1, c2)),
        Anticipation::Terminal => Err(CliError::Config(
            "this command needs interval or one-sided information".into(),
        )),
    }
}

pub fn value(c: &Common) -> Result<(), CliError> {
    json_only(c, "value")?;
    let cfg = load(c)?;
    let info = cfg.anticipation()?;
    let horizon = cfg.horizon.unwrap_or(1.0);
    let report = value_of_information(&cfg.market, &info, horizon, eps(c, &cfg)?, cfg.x0)?;
    emit(c.out.as_ref(), &json(&report)?)
}

#[derive(Serialize)]
struct LemmaSummary {
    thresholds: (f64, f64),
    points: usize,
    sup_integral: f64,
    max_abs_error: f64,
    last_octave_growth: f64,
    verdict: &'static str,
    flagged: Vec<f64>,
}

pub fn lemma_check(c: &Common, summary_path: Option<&PathBuf>) -> Result<(), CliError> {
    let cfg = load(c)?;
    let thresholds = band(&cfg.anticipation()?)?;
    let grid = grid(c, &cfg, "geometric-to-1:20");
    let report = scan_lemma(&cfg.market, thresholds, &grid)?;
    let body = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = Vec::new();
            report::write_lemma_csv(&mut out, &report)?;
            out
        }
        Format::Json => json(&report)?,
    };
    emit(c.out.as_ref(), &body)?;
    let summary = LemmaSummary {
        thresholds,
        points: report.rows.len(),
        sup_integral: report.sup_integral,
        max_abs_error: report.max_abs_error,
        last_octave_growth: report.last_octave_growth,
        verdict: if report.bounded { "bounded" } else { "unbounded" },
        flagged: report.flagged.clone(),
    };
    let summary_bytes = json(&summary)?;
    match summary_path {
        Some(p) => emit(Some(p), &summary_bytes)?,
        None => eprint!("{}", String::from_utf8_lossy(&summary_bytes)),
    }
    if !report.flagged.is_empty() {
        return Err(CliError::Flagged(format!(
            "{} grid point(s) missed the quadrature tolerance",
            report.flagged.len()
        )));
    }
    Ok(())
}

pub fn bound_scan(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let info = cfg.anticipation()?;
    let grid = grid(c, &cfg, "geometric-to-1:20");
    let scan = infovalue::bound_scan(&cfg.market, &info, &grid)?;
    let body = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = Vec::new();
            report::write_bound_csv(&mut out, &scan)?;
            out
        }
        Format::Json => json(&scan)?,
    };
    emit(c.out.as_ref(), &body)?;
    if scan.rows.iter().any(|r| !r.converged) {
        return Err(CliError::Flagged("some E[alpha^2] values missed the quadrature tolerance".into()));
    }
    Ok(())
}

fn default_strategy(info: &Anticipation) -> StrategyKind {
    match *info {
        Anticipation::Terminal => StrategyKind::InsiderExact,
        Anticipation::Band { c1, c2 } => match (c1.is_finite(), c2.is_finite()) {
            (true, true) => StrategyKind::InsiderInterval,
            (false, false) => StrategyKind::Classical,
            _ => StrategyKind::InsiderOnesided,
        },
    }
}

pub fn mc(
    c: &Common,
    strategy: Option<StrategyKind>,
    steps: Option<usize>,
    extrapolate: bool,
    paths_csv: Option<&PathBuf>,
) -> Result<(), CliError> {
    json_only(c, "mc")?;
    let cfg = load(c)?;
    let info = cfg.anticipation()?;
    let strategy = strategy.or(cfg.strategy).unwrap_or_else(|| default_strategy(&info));
    let horizon = match cfg.horizon {
        Some(h) => h,
        None if strategy.is_insider() => 1.0 - eps(c, &cfg)?,
        None => 1.0,
    };
    let steps = steps.or(cfg.steps).unwrap_or(DEFAULT_STEPS);
    if steps == 0 {
        return Err(CliError::Config("steps must be at least 1".into()));
    }
    let grid = if strategy.is_insider() {
        trading_grid(horizon, steps)
    } else {
        uniform_grid(horizon, steps)
    };
    let config = MCConfig {
        n_paths: paths(c, &cfg)?,
        grid,
        seed: seed(c, &cfg),
        strategy,
        extrapolate: extrapolate || cfg.extrapolate.unwrap_or(false),
    };
    let (report, records) = run_mc_with_paths(&cfg.market, &info, &config, cfg.x0)?;
    if let Some(p) = paths_csv {
        let mut out = Vec::new();
        report::write_paths_csv(&mut out, &records)?;
        emit(Some(p), &out)?;
    }
    emit(c.out.as_ref(), &json(&report)?)?;
    if let Some(z) = report.z_score {
        eprintln!("z-score against {}: {}", report.target_kind, report::number(z));
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleRow {
    t: f64,
    mc_mean: f64,
    mc_standard_error: f64,
    quadrature: f64,
    quadrature_error: f64,
    z_score: Option<f64>,
}

pub fn drift_oracle(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let info = cfg.anticipation()?;
    let (n, seed) = (paths(c, &cfg)?, seed(c, &cfg));
    let times: Vec<f64> = grid(c, &cfg, "linear:0.1:0.9:9")
        .into_iter()
        .filter(|t| *t > 0.0 && *t < 1.0)
        .collect();
    if times.is_empty() {
        return Err(CliError::Config("no grid point inside (0, 1)".into()));
    }
    let rows = times
        .iter()
        .map(|&t| {
            let mc = drift_mc_oracle(&cfg.market, &info, t, n, seed)?;
            let q = expected_alpha_sq(t, &cfg.market, &info)?;
            Ok(OracleRow {
                t,
                mc_mean: mc.mean,
                mc_standard_error: mc.standard_error,
                quadrature: q.value,
                quadrature_error: q.abs_error,
                z_score: (mc.standard_error > 0.0).then(|| (mc.mean - q.value) / mc.standard_error),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let body = match c.format.unwrap_or(Format::Json) {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut s = String::from("t,mc_mean,mc_standard_error,quadrature,quadrature_error,z_score\n");
            for r in &rows {
                let z = r.z_score.map(report::number).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{},{},{z}\n",
                    report::number(r.t),
                    report::number(r.mc_mean),
                    report::number(r.mc_standard_error),
                    report::number(r.quadrature),
                    report::number(r.quadrature_error),
                ));
            }
            s.into_bytes()
        }
    };
    emit(c.out.as_ref(), &body)
}

pub fn martingale_scan(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let thresholds = band(&cfg.anticipation()?)?;
    let grid = grid(c, &cfg, "geometric-to-1:10");
    let scan = scan_martingale(&cfg.market, thresholds, &grid, paths(c, &cfg)?, seed(c, &cfg))?;
    let body = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = Vec::new();
            report::write_martingale_csv(&mut out, &scan)?;
            out
        }
        Format::Json => json(&scan)?,
    };
    emit(c.out.as_ref(), &body)
}
