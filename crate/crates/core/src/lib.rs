//! Value of anticipating information for a log-utility investor.
//!
//! An insider who knows at time 0 whether the terminal stock price lands in a
//! band `[p1, p2)` trades with an extra information drift `alpha`; the value
//! of that knowledge is `E int_0^1 alpha^2 / 2`. This crate computes the
//! drift, the integrand `I(x, t)` whose `x`-integral is bounded uniformly in
//! time, `E[alpha^2(t)]` and its `K / sqrt(t (1 - t))` envelope, the value
//! itself, and Monte Carlo engines that trade the optimal strategies along
//! simulated paths to cross-check every closed form.
//!
//! Modules:
//! - [`market`]: coefficients, variance clock, thresholds, path simulation
//! - [`drift`]: information drift and optimal portfolio
//! - [`quadrature`]: `I(x, t)`, lemma scans, `E[alpha^2]`, value of information
//! - [`simulation`]: Monte Carlo wealth engine and oracles
//! - [`report`]: CSV/JSON writers for the reports

pub mod drift;
pub mod error;
pub mod grid;
pub mod integrate;
pub mod market;
pub mod normal;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod simulation;

pub use drift::{
    conditional_prob, info_drift, info_drift_exact, info_drift_interval, info_drift_onesided,
    optimal_portfolio, DriftState, Side, Strategy,
};
pub use error::{Error, Result};
pub use grid::TimeGridSpec;
pub use integrate::{Estimate, Tolerance};
pub use market::{
    anticipation, classical_value, log_thresholds, simulate_path, time_change, Anticipation,
    CoefficientSet, InsiderInfo, PathRealization, PriceLevel, Realized, TimeChange,
};
pub use quadrature::{
    bound_scan, expected_alpha_sq, integral_i, integrand_i, lemma_check, value_of_information,
    BoundScan, Finiteness, IntervalSplit, LemmaScanReport, ValueReport,
};
pub use simulation::{
    drift_mc_oracle, martingale_scan, run_mc, run_mc_with_paths, MCConfig, MCReport, MartingaleScan,
    McEstimate, StrategyKind,
};
