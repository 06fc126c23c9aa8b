//! Smoke tests runnable from an installed binary.

use infovalue::grid::{geometric_to_one, uniform_grid};
use infovalue::quadrature::Finiteness;
use infovalue::{
    bound_scan, classical_value, conditional_prob, drift_mc_oracle, expected_alpha_sq, info_drift_exact,
    info_drift_interval, log_thresholds, martingale_scan, optimal_portfolio, run_mc, simulate_path, time_change,
    value_of_information, Anticipation, CoefficientSet, DriftState, InsiderInfo, MCConfig, Result, StrategyKind,
};

use crate::CliError;

type Check = (&'static str, fn() -> Result<bool>);

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn unit() -> CoefficientSet {
    CoefficientSet::constant(0.0, 0.0, 1.0).expect("valid coefficients")
}

fn merton() -> CoefficientSet {
    CoefficientSet::constant(0.01, 0.05, 0.2).expect("valid coefficients")
}

const CHECKS: &[Check] = &[
    ("variance clock", || {
        let two = CoefficientSet::new(vec![0.0, 0.5, 1.0], vec![0.0; 2], vec![0.0; 2], vec![0.1, 0.3])?;
        Ok(close(time_change(&merton(), 0.5)?, 0.02, 1e-15)
            && time_change(&merton(), 0.0)? == 0.0
            && close(time_change(&two, 1.0)?, 0.05, 1e-15))
    }),
    ("log thresholds", || {
        let (c1, c2) = log_thresholds(&unit(), &InsiderInfo::interval((-1.5f64).exp(), 0.5f64.exp()), 1.0)?;
        Ok(close(c1, -1.0, 1e-14) && close(c2, 1.0, 1e-14))
    }),
    ("classical value", || {
        let e = std::f64::consts::E;
        Ok(close(classical_value(&merton(), 1.0, 1.0)?, 0.03, 1e-15) && close(classical_value(&unit(), 1.0, e)?, 1.0, 1e-15))
    }),
    ("conditional probability", || {
        let s = DriftState::new(&unit(), 0.0, 0.0, (-1.0, 1.0))?;
        Ok(close(conditional_prob(&s)?, 0.682_689_492_137_085_9, 1e-15))
    }),
    ("drift zero mean", || {
        let s = DriftState::new(&unit(), 0.3, 0.4, (-1.0, 2.0))?;
        let p = conditional_prob(&s)?;
        let mean = p * info_drift_interval(&s, true)? + (1.0 - p) * info_drift_interval(&s, false)?;
        Ok(mean.abs() < 1e-13)
    }),
    ("bridge drift", || {
        let s = DriftState::new(&unit(), 0.5, 0.0, (f64::NEG_INFINITY, f64::INFINITY))?;
        Ok(close(info_drift_exact(1.0, &s)?, 2.0, 1e-15))
    }),
    ("merton fraction", || {
        let c = CoefficientSet::constant(0.01, 0.05, 0.2)?;
        let flat = CoefficientSet::constant(0.02, 0.02, 0.2)?;
        Ok(close(optimal_portfolio(&c, 0.0, 0.0)?, 1.0, 1e-12) && close(optimal_portfolio(&flat, 0.0, 0.3)?, 1.5, 1e-12))
    }),
    ("path determinism", || {
        let g = uniform_grid(1.0, 16);
        let info = Anticipation::band(-1.0, 1.0);
        Ok(simulate_path(&unit(), &info, 1.0, &g, 9, 3)? == simulate_path(&unit(), &info, 1.0, &g, 9, 3)?)
    }),
    ("riskless wealth", || {
        let cfg = MCConfig {
            n_paths: 64,
            grid: uniform_grid(1.0, 8),
            seed: 1,
            strategy: StrategyKind::Riskless,
            extrapolate: false,
        };
        let rep = run_mc(&merton(), &Anticipation::Terminal, &cfg, 1.0)?;
        Ok(close(rep.mean_log_wealth, 0.01, 1e-15) && rep.standard_error == 0.0)
    }),
    ("no information", || {
        let none = Anticipation::band(f64::NEG_INFINITY, f64::INFINITY);
        let rep = value_of_information(&merton(), &none, 1.0, 1e-3, 1.0)?;
        Ok(rep.vg == rep.vf && expected_alpha_sq(0.5, &merton(), &none)?.value == 0.0)
    }),
    ("exact terminal diverges", || {
        let rep = value_of_information(&unit(), &Anticipation::Terminal, 1.0, 1e-2, 1.0)?;
        Ok(rep.verdict == Finiteness::Infinite && close(rep.half_int_alpha_sq, 0.5 * 100f64.ln(), 0.01 * 0.5 * 100f64.ln()))
    }),
    ("bound scan negative control", || {
        let scan = bound_scan(&unit(), &Anticipation::Terminal, &geometric_to_one(12)[1..])?;
        Ok(!scan.bounded)
    }),
    ("bridge variance oracle", || {
        let est = drift_mc_oracle(&unit(), &Anticipation::Terminal, 0.5, 20_000, 1)?;
        Ok(close(est.mean, 2.0, 3.0 * est.standard_error))
    }),
    ("martingale start", || {
        let scan = martingale_scan(&unit(), (-1.0, 1.0), &[0.0, 0.5], 1_000, 1)?;
        Ok(close(scan.rows[0].mean, 0.682_689_492_137_085_9, 1e-15))
    }),
];

pub fn run() -> std::result::Result<(), CliError> {
    let mut failed = 0;
    for (name, check) in CHECKS {
        match check() {
            Ok(true) => println!("PASS {name}"),
            Ok(false) => {
                failed += 1;
                println!("FAIL {name}");
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Selftest(format!("{failed} selftest check(s) failed")))
    }
}
