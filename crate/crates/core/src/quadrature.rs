//! The integrand `I(x, t)`, its three-piece `x`-integral, `E[alpha^2(t)]`,
//! the `K / sqrt(t (1 - t))` envelope and the value of information.
//!
//! With `v = rho - tau(t)` and `z_i = (c_i - x) / sqrt(v)`,
//!
//! ```text
//! I(x, t) = [phi(z1) - phi(z2)]^2 / (sqrt(v) [Phi(z2) - Phi(z1)] [Phi(-z2) + Phi(z1)])
//! ```
//!
//! Conditioning on `M(t) = x` and averaging over both outcomes of `L` gives
//! `E[alpha^2 | M(t) = x] = sigma^2 / sqrt(v) * I(x, t)`, hence
//! `E[alpha^2(t)] = sigma^2(t) / sqrt(v) * int phi_tau(x) I(x, t) dx` with
//! `phi_tau` the `N(0, tau)` density of `M(t)`.
//!
//! The `x`-integral of `I` is taken in standardized units, where the
//! `sqrt(v)` cancels and only the gap `s_t = (c2 - c1) / sqrt(v)` remains.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::default_scan_grid;
use crate::integrate::{integrate_with_breaks, Estimate, Tolerance};
use crate::market::{classical_value, Anticipation, CoefficientSet, TimeChange};
use crate::normal;

/// Growth over the last octave above which a scan counts as diverging.
pub const DIVERGENCE_GROWTH: f64 = 0.05;

const LINEAR_RANGE: f64 = 8.0;

const LEMMA_TOL: Tolerance = Tolerance {
    abs: 1e-10,
    rel: 1e-12,
    max_panels: 10_000,
};

const ALPHA_TOL: Tolerance = Tolerance {
    abs: 1e-15,
    rel: 1e-10,
    max_panels: 10_000,
};

const VALUE_TOL: Tolerance = Tolerance {
    abs: 1e-10,
    rel: 1e-9,
    max_panels: 2_000,
};

/// `[phi(z1) - phi(z2)]^2 / ([Phi(z2) - Phi(z1)] [Phi(-z2) + Phi(z1)])`, the
/// dimensionless core of `I`.
pub fn band_energy(z1: f64, z2: f64) -> f64 {
    if z1 == f64::NEG_INFINITY && z2 == f64::INFINITY {
        return 0.0;
    }
    let linear = |z: f64| z.is_infinite() || z.abs() <= LINEAR_RANGE;
    if linear(z1) && linear(z2) {
        let gap = normal::pdf_gap(z1, z2);
        if gap == 0.0 {
            return 0.0;
        }
        return gap * gap / (normal::band_prob(z1, z2) * normal::outside_prob(z1, z2));
    }
    let (sign, ln_gap) = normal::ln_pdf_gap(z1, z2);
    if sign == 0.0 {
        return 0.0;
    }
    (2.0 * ln_gap - normal::ln_band_prob(z1, z2) - normal::ln_outside_prob(z1, z2)).exp()
}

fn remaining_checked(tc: &TimeChange<'_>, t: f64) -> Result<f64> {
    let v = tc.remaining(t)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::SingularTime { t, remaining: v })
    }
}

fn check_thresholds((c1, c2): (f64, f64)) -> Result<()> {
    if c1 < c2 {
        Ok(())
    } else {
        Err(Error::validation(format!("thresholds need c1 < c2, got ({c1}, {c2})")))
    }
}

/// `I(x, t)`.
pub fn integrand_i(x: f64, t: f64, thresholds: (f64, f64), tc: TimeChange<'_>) -> Result<f64> {
    check_thresholds(thresholds)?;
    let v = remaining_checked(&tc, t)?;
    let sd = v.sqrt();
    Ok(band_energy((thresholds.0 - x) / sd, (thresholds.1 - x) / sd) / sd)
}

/// `int I(x, t) dx` split over `(-inf, c1]`, `(c1, c2)` and `[c2, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSplit {
    pub t: f64,
    /// `s_t = (c2 - c1) / sqrt(rho - tau(t))`.
    pub gap: f64,
    pub left: Estimate,
    pub middle: Estimate,
    pub right: Estimate,
}

impl IntervalSplit {
    pub fn total(&self) -> Estimate {
        self.left.combine(self.middle).combine(self.right)
    }
}

fn ladder(origin: f64, dir: f64, limit: f64) -> impl Iterator<Item = f64> {
    [1.0, 4.0, 10.0, 40.0]
        .into_iter()
        .filter(move |d| *d < limit)
        .map(move |d| origin + dir * d)
}

fn split_estimate(t: f64, (c1, c2): (f64, f64), tc: &TimeChange<'_>) -> Result<IntervalSplit> {
    check_thresholds((c1, c2))?;
    let v = remaining_checked(tc, t)?;
    let sd = v.sqrt();
    let inf = f64::INFINITY;
    let gap = (c2 - c1) / sd;
    let outer_right: Vec<f64> = std::iter::once(0.0).chain(ladder(0.0, 1.0, inf)).chain([inf]).collect();
    let outer_left: Vec<f64> = std::iter::once(-inf).chain(ladder(0.0, -1.0, inf)).chain([0.0]).collect();

    let (left, middle, right) = match (c1.is_finite(), c2.is_finite()) {
        (true, true) => {
            // left: z1 in [0, inf); middle: z2 in (0, s); right: z2 in (-inf, 0]
            let left = integrate_with_breaks(|z| band_energy(z, z + gap), &outer_right, LEMMA_TOL);
            let mut mid: Vec<f64> = vec![0.0, gap];
            mid.extend(ladder(0.0, 1.0, gap));
            mid.extend(ladder(gap, -1.0, gap));
            let middle = integrate_with_breaks(|z| band_energy(z - gap, z), &mid, LEMMA_TOL);
            let right = integrate_with_breaks(|z| band_energy(z - gap, z), &outer_left, LEMMA_TOL);
            (left, middle, right)
        }
        (true, false) => {
            let left = integrate_with_breaks(|z| band_energy(z, inf), &outer_right, LEMMA_TOL);
            let middle = integrate_with_breaks(|z| band_energy(z, inf), &outer_left, LEMMA_TOL);
            (left, middle, Estimate::ZERO)
        }
        (false, true) => {
            let middle = integrate_with_breaks(|z| band_energy(-inf, z), &outer_right, LEMMA_TOL);
            let right = integrate_with_breaks(|z| band_energy(-inf, z), &outer_left, LEMMA_TOL);
            (Estimate::ZERO, middle, right)
        }
        (false, false) => (Estimate::ZERO, Estimate::ZERO, Estimate::ZERO),
    };
    Ok(IntervalSplit {
        t,
        gap,
        left,
        middle,
        right,
    })
}

/// `int_R I(x, t) dx` with the three sub-interval contributions.
///
/// Fails with [`Error::NonConvergence`] if any piece misses its tolerance.
pub fn integral_i(t: f64, thresholds: (f64, f64), tc: TimeChange<'_>) -> Result<IntervalSplit> {
    let split = split_estimate(t, thresholds, &tc)?;
    let total = split.total();
    if !total.converged {
        return Err(Error::NonConvergence {
            context: format!("int I(x, {t}) dx"),
            value: total.value,
            abs_error: total.abs_error,
        });
    }
    Ok(split)
}

fn alpha_sq_estimate(t: f64, coeffs: &CoefficientSet, info: &Anticipation) -> Result<Estimate> {
    let tc = coeffs.time_change();
    let v = remaining_checked(&tc, t)?;
    let sigma = coeffs.sigma_at(t);
    let scale = sigma * sigma / v;
    let (c1, c2) = match *info {
        Anticipation::Terminal => {
            return Ok(Estimate {
                value: scale,
                ..Estimate::ZERO
            })
        }
        Anticipation::Band { c1, c2 } => {
            check_thresholds((c1, c2))?;
            (c1, c2)
        }
    };
    let sd = v.sqrt();
    let tau = coeffs.tau(t);
    if tau == 0.0 {
        // M(0) = 0 almost surely
        return Ok(Estimate {
            value: scale * band_energy(c1 / sd, c2 / sd),
            ..Estimate::ZERO
        });
    }
    let st = tau.sqrt();
    let (lo, hi) = (-40.0 * st, 40.0 * st);
    let mut breaks: Vec<f64> = vec![lo, hi];
    for d in [1.0, 2.0, 4.0, 8.0, 16.0] {
        breaks.extend([-d * st, d * st]);
    }
    for c in [c1, c2].into_iter().filter(|c| c.is_finite()) {
        breaks.push(c);
        for d in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
            breaks.extend([c - d * sd, c + d * sd]);
        }
    }
    breaks.push(0.0);
    breaks.retain(|x| (lo..=hi).contains(x));
    let density = |x: f64| normal::pdf(x / st) / st;
    let est = integrate_with_breaks(
        |x| {
            let g = band_energy((c1 - x) / sd, (c2 - x) / sd);
            if g == 0.0 {
                0.0
            } else {
                density(x) * g
            }
        },
        &breaks,
        ALPHA_TOL,
    );
    Ok(est.scale(scale))
}

/// `E[alpha^2(t)]` for `0 <= t < 1`.
pub fn expected_alpha_sq(t: f64, coeffs: &CoefficientSet, info: &Anticipation) -> Result<Estimate> {
    let est = alpha_sq_estimate(t, coeffs, info)?;
    if !est.converged {
        return Err(Error::NonConvergence {
            context: format!("E[alpha^2({t})]"),
            value: est.value,
            abs_error: est.abs_error,
        });
    }
    Ok(est)
}

/// Whether `V_1^G` is finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Finiteness {
    #[serde(rename = "finite")]
    Finite,
    #[serde(rename = "infinite (diverges as ε→0)")]
    Infinite,
}

/// One row of a [`bound_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub e_alpha_sq: f64,
    /// `E[alpha^2(t)] sqrt(t (1 - t))`.
    pub product: f64,
    pub running_sup: f64,
    pub abs_error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundScan {
    pub rows: Vec<BoundRow>,
    /// Empirical `sup_t E[alpha^2(t)] sqrt(t (1 - t))`.
    pub k_hat: f64,
    /// Relative growth of the product between the last two grid points.
    pub last_octave_growth: f64,
    /// No divergence trend: last-octave growth below [`DIVERGENCE_GROWTH`].
    pub bounded: bool,
}

fn last_growth(values: &[f64]) -> f64 {
    match values {
        [.., a, b] if *a > 0.0 => b / a - 1.0,
        [.., a, b] if *a == 0.0 && *b == 0.0 => 0.0,
        [_, _, ..] => f64::INFINITY,
        _ => 0.0,
    }
}

fn check_scan_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation("empty time grid"));
    }
    if grid.iter().any(|t| !(0.0..1.0).contains(t)) {
        return Err(Error::validation("scan times must lie in [0, 1)"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::validation("scan grid must be strictly increasing"));
    }
    Ok(())
}

/// `E[alpha^2(t)] sqrt(t (1 - t))` over `grid` and its supremum.
pub fn bound_scan(coeffs: &CoefficientSet, info: &Anticipation, grid: &[f64]) -> Result<BoundScan> {
    check_scan_grid(grid)?;
    let values: Vec<Estimate> = grid
        .par_iter()
        .map(|&t| alpha_sq_estimate(t, coeffs, info))
        .collect::<Result<_>>()?;
    let mut sup = 0.0_f64;
    let rows: Vec<BoundRow> = grid
        .iter()
        .zip(&values)
        .map(|(&t, est)| {
            let product = est.value * (t * (1.0 - t)).sqrt();
            sup = sup.max(product);
            BoundRow {
                t,
                e_alpha_sq: est.value,
                product,
                running_sup: sup,
                abs_error: est.abs_error,
                converged: est.converged,
            }
        })
        .collect();
    let products: Vec<f64> = rows.iter().map(|r| r.product).collect();
    let growth = last_growth(&products);
    Ok(BoundScan {
        k_hat: sup,
        last_octave_growth: growth,
        bounded: growth < DIVERGENCE_GROWTH,
        rows,
    })
}

/// One row of a [`lemma_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub t: f64,
    pub gap: f64,
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub total: f64,
    pub abs_error: f64,
    pub converged: bool,
    pub e_alpha_sq: f64,
    pub bound_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaScanReport {
    pub thresholds: (f64, f64),
    pub rows: Vec<LemmaRow>,
    /// `sup_t int I(x, t) dx` over the grid.
    pub sup_integral: f64,
    pub max_abs_error: f64,
    pub last_octave_growth: f64,
    /// Times whose quadrature missed the tolerance.
    pub flagged: Vec<f64>,
    /// Every entry finite and converged, and no growth over the last octave.
    pub bounded: bool,
}

/// Scans `int I(x, t) dx` (and `E[alpha^2(t)]`) over `grid`.
pub fn lemma_check(coeffs: &CoefficientSet, thresholds: (f64, f64), grid: &[f64]) -> Result<LemmaScanReport> {
    check_thresholds(thresholds)?;
    check_scan_grid(grid)?;
    let info = Anticipation::band(thresholds.0, thresholds.1);
    let rows: Vec<LemmaRow> = grid
        .par_iter()
        .map(|&t| {
            let split = split_estimate(t, thresholds, &coeffs.time_change())?;
            let total = split.total();
            let ea = alpha_sq_estimate(t, coeffs, &info)?;
            Ok(LemmaRow {
                t,
                gap: split.gap,
                left: split.left.value,
                middle: split.middle.value,
                right: split.right.value,
                total: total.value,
                abs_error: total.abs_error,
                converged: total.converged && ea.converged,
                e_alpha_sq: ea.value,
                bound_product: ea.value * (t * (1.0 - t)).sqrt(),
            })
        })
        .collect::<Result<_>>()?;
    let totals: Vec<f64> = rows.iter().map(|r| r.total).collect();
    let sup_integral = totals.iter().copied().fold(0.0, f64::max);
    let max_abs_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let flagged: Vec<f64> = rows.iter().filter(|r| !r.converged).map(|r| r.t).collect();
    let growth = last_growth(&totals);
    let finite = rows
        .iter()
        .all(|r| [r.left, r.middle, r.right].iter().all(|v| v.is_finite() && *v >= 0.0));
    Ok(LemmaScanReport {
        thresholds,
        sup_integral,
        max_abs_error,
        last_octave_growth: growth,
        bounded: finite && flagged.is_empty() && sup_integral.is_finite() && growth < DIVERGENCE_GROWTH,
        flagged,
        rows,
    })
}

/// `int_a^1 dt / sqrt(t (1 - t))`.
pub fn arcsine_tail(a: f64) -> f64 {
    2.0 * (1.0 - a).max(0.0).sqrt().asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub horizon: f64,
    pub eps: f64,
    /// Upper end of the quadrature: `horizon` if below 1, else `1 - eps`.
    pub integrated_to: f64,
    /// `V_T^F`.
    pub vf: f64,
    /// `E int_0^{integrated_to} alpha^2 / 2`.
    pub half_int_alpha_sq: f64,
    /// `V_T^F + half_int_alpha_sq`.
    pub vg: f64,
    pub verdict: Finiteness,
    /// Empirical `K` from the bound scan.
    pub bound_constant_k: f64,
    pub quadrature_error: f64,
    /// `K/2 int_{integrated_to}^1 dt / sqrt(t (1 - t))` when the scan is bounded.
    pub endpoint_tail_bound: Option<f64>,
    pub converged: bool,
}

/// `E int_0^T alpha^2(u) du / 2` with `T = upper < 1`, by adaptive quadrature in
/// `u = sqrt(1 - t)` (which absorbs the `1 / sqrt(1 - t)` growth).
pub fn half_integrated_alpha_sq(coeffs: &CoefficientSet, info: &Anticipation, upper: f64) -> Result<Estimate> {
    if !(upper > 0.0 && upper < 1.0) {
        return Err(Error::domain(format!("upper limit {upper} outside (0, 1)")));
    }
    let inner_rel = Cell::new(0.0_f64);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let u_lo = (1.0 - upper).sqrt();
    let mut breaks = vec![u_lo, 1.0];
    breaks.extend(
        coeffs
            .breakpoints()
            .iter()
            .filter(|&&b| b > 0.0 && b < upper)
            .map(|b| (1.0 - b).sqrt()),
    );
    let est = integrate_with_breaks(
        |u| {
            let t = (1.0 - u * u).max(0.0);
            match alpha_sq_estimate(t, coeffs, info) {
                Ok(e) => {
                    if !e.converged {
                        failure.set(Some(Error::NonConvergence {
                            context: format!("E[alpha^2({t})]"),
                            value: e.value,
                            abs_error: e.abs_error,
                        }));
                    }
                    if e.value > 0.0 {
                        inner_rel.set(inner_rel.get().max(e.abs_error / e.value));
                    }
                    2.0 * u * e.value
                }
                Err(err) => {
                    failure.set(Some(err));
                    f64::NAN
                }
            }
        },
        &breaks,
        VALUE_TOL,
    );
    if let Some(err) = failure.take() {
        return Err(err.context("value of information"));
    }
    let est = est.scale(0.5);
    let est = Estimate {
        abs_error: est.abs_error + inner_rel.get() * est.value.abs(),
        ..est
    };
    if !est.converged {
        return Err(Error::NonConvergence {
            context: format!("E int_0^{upper} alpha^2 / 2"),
            value: est.value,
            abs_error: est.abs_error,
        });
    }
    Ok(est)
}

/// `V_T^G = V_T^F + E int_0^T alpha^2 / 2` with the finiteness verdict.
///
/// For `horizon = 1` the integral stops at `1 - eps`; the rest is bounded by
/// the bound-scan constant times an arcsine integral.
pub fn value_of_information(
    coeffs: &CoefficientSet,
    info: &Anticipation,
    horizon: f64,
    eps: f64,
    x0: f64,
) -> Result<ValueReport> {
    if !(horizon > 0.0 && horizon <= 1.0) {
        return Err(Error::domain(format!("horizon {horizon} outside (0, 1]")));
    }
    let upper = if horizon < 1.0 {
        horizon
    } else {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::domain(format!("endpoint cutoff {eps} outside (0, 1)")));
        }
        1.0 - eps
    };
    let vf = classical_value(coeffs, horizon, x0)?;
    let half = half_integrated_alpha_sq(coeffs, info, upper)?;
    let scan = bound_scan(coeffs, info, &default_scan_grid())?;
    let verdict = if scan.bounded {
        Finiteness::Finite
    } else {
        Finiteness::Infinite
    };
    let endpoint_tail_bound = match verdict {
        Finiteness::Finite if horizon >= 1.0 => Some(0.5 * scan.k_hat * arcsine_tail(upper)),
        Finiteness::Finite => Some(0.0),
        Finiteness::Infinite => None,
    };
    Ok(ValueReport {
        horizon,
        eps,
        integrated_to: upper,
        vf,
        half_int_alpha_sq: half.value,
        vg: vf + half.value,
        verdict,
        bound_constant_k: scan.k_hat,
        quadrature_error: half.abs_error,
        endpoint_tail_bound,
        converged: half.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> CoefficientSet {
        CoefficientSet::constant(0.0, 0.0, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn integrand_vanishes_at_midpoint_and_is_symmetric() {
        let c = unit();
        let th = (-0.75, 1.25);
        let mid = 0.25;
        assert_eq!(integrand_i(mid, 0.4, th, c.time_change()).unwrap(), 0.0);
        for &y in &[1.0 / 1024.0, 0.125, 0.5, 1.0, 2.0, 3.5, 6.0, 12.0] {
            let a = integrand_i(mid + y, 0.4, th, c.time_change()).unwrap();
            let b = integrand_i(mid - y, 0.4, th, c.time_change()).unwrap();
            assert!(a > 0.0 && rel(a, b) < 1e-13, "y={y}: {a} vs {b}");
        }
    }

    #[test]
    fn integrand_far_tail_matches_reference() {
        // sigma = 1, c = +-1, t = 0.5, x = c1 - 30 sqrt(v); 50-digit reference
        let sd = 0.5_f64.sqrt();
        let x = -1.0 - 30.0 * sd;
        let got = integrand_i(x, 0.5, (-1.0, 1.0), unit().time_change()).unwrap();
        assert!(rel(got, 6.259_082_532_407_682_584_854_930_698_710_526e-195) < 1e-8, "{got:e}");
    }

    #[test]
    fn integrand_rejects_terminal_time() {
        assert!(matches!(
            integrand_i(0.0, 1.0, (-1.0, 1.0), unit().time_change()),
            Err(Error::SingularTime { .. })
        ));
        assert!(integrand_i(0.0, 0.5, (1.0, -1.0), unit().time_change()).is_err());
    }

    #[test]
    fn integral_matches_reference_values() {
        let refs = [
            (0.0, 2.109_622_704_690_840_458_470_687_773_417_962_9),
            (0.5, 2.757_970_182_915_479_716_224_455_303_824_038_1),
            (0.99, 3.612_789_142_274_501_414_529_652_727_511_866_2),
        ];
        for (t, want) in refs {
            let split = integral_i(t, (-1.0, 1.0), unit().time_change()).unwrap();
            let total = split.total();
            assert!(rel(total.value, want) < 1e-9, "t={t}: {} vs {want}", total.value);
            assert!(total.abs_error <= 1e-8);
            // x-reflection swaps the outer pieces
            assert!(rel(split.left.value, split.right.value) < 1e-10);
        }
    }

    #[test]
    fn integral_at_zero_uses_initial_gap() {
        let c = CoefficientSet::constant(0.0, 0.0, 0.5).unwrap();
        let split = integral_i(0.0, (-0.2, 0.6), c.time_change()).unwrap();
        assert!(rel(split.gap, 0.8 / c.rho().sqrt()) < 1e-15);
    }

    #[test]
    fn outer_second_terms_are_below_one_over_root_two() {
        // the P0 part of the left piece: int_0^inf gap^2 / (Phi(-z-s) + Phi(z)) dz
        for &t in &[0.0f64, 0.5, 0.9, 0.999] {
            let s = 2.0 / (1.0 - t).sqrt();
            let est = crate::integrate::integrate(
                |z| {
                    let g = normal::pdf(z) - normal::pdf(z + s);
                    g * g / normal::outside_prob(z, z + s)
                },
                0.0,
                f64::INFINITY,
                Tolerance::abs(1e-12),
            );
            assert!(est.value <= 0.7072 && est.value > 0.0, "t={t}: {}", est.value);
        }
    }

    #[test]
    fn expected_alpha_sq_matches_reference_values() {
        let info = Anticipation::band(-1.0, 1.0);
        let refs = [
            (0.1, 0.104_064_785_417_558_932_380_090_487_893_346_1),
            (0.5, 0.659_204_075_802_216_990_376_401_907_480_456_3),
            (0.9, 2.744_009_296_159_952_708_880_259_555_061_295_2),
        ];
        for (t, want) in refs {
            let got = expected_alpha_sq(t, &unit(), &info).unwrap().value;
            assert!(rel(got, want) < 1e-8, "t={t}: {got} vs {want}");
        }
        // M(0) = 0 sits at the midpoint of a symmetric band
        assert_eq!(expected_alpha_sq(0.0, &unit(), &info).unwrap().value, 0.0);
        assert!(expected_alpha_sq(1.0, &unit(), &info).is_err());
    }

    #[test]
    fn expected_alpha_sq_limits() {
        let c = unit();
        let wide = expected_alpha_sq(0.5, &c, &Anticipation::band(-40.0, 40.0)).unwrap().value;
        assert!(wide < 1e-100);
        let none = expected_alpha_sq(0.5, &c, &Anticipation::band(f64::NEG_INFINITY, f64::INFINITY))
            .unwrap()
            .value;
        assert_eq!(none, 0.0);
        let exact = expected_alpha_sq(0.75, &c, &Anticipation::Terminal).unwrap().value;
        assert!(rel(exact, 4.0) < 1e-15);
        // far-threshold regime: monotone in the half-width
        let vals: Vec<f64> = [2.0, 4.0, 8.0]
            .iter()
            .map(|&h| expected_alpha_sq(0.5, &c, &Anticipation::band(-h, h)).unwrap().value)
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2] && vals[2] > 0.0, "{vals:?}");
    }

    #[test]
    fn bound_scan_negative_control() {
        let grid: Vec<f64> = crate::grid::geometric_to_one(20).into_iter().skip(1).collect();
        let scan = bound_scan(&unit(), &Anticipation::Terminal, &grid).unwrap();
        assert!(!scan.bounded);
        for w in scan.rows.windows(2).skip(2) {
            let ratio = w[1].product / w[0].product;
            assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn exact_value_grows_like_half_log() {
        for eps in [1e-2, 1e-3] {
            let rep = value_of_information(&unit(), &Anticipation::Terminal, 1.0, eps, 1.0).unwrap();
            let want = 0.5 * (1.0 / eps).ln();
            assert!(rel(rep.half_int_alpha_sq, want) < 0.01);
            assert_eq!(rep.verdict, Finiteness::Infinite);
            assert!(rep.endpoint_tail_bound.is_none());
        }
    }

    #[test]
    fn no_information_has_no_value() {
        let c = CoefficientSet::constant(0.01, 0.05, 0.2).unwrap();
        let none = Anticipation::band(f64::NEG_INFINITY, f64::INFINITY);
        let rep = value_of_information(&c, &none, 1.0, 1e-3, 1.0).unwrap();
        assert_eq!(rep.half_int_alpha_sq, 0.0);
        assert_eq!(rep.vg, rep.vf);
        assert_eq!(rep.verdict, Finiteness::Finite);
        let wide = value_of_information(&c, &Anticipation::band(-30.0, 30.0), 1.0, 1e-3, 1.0).unwrap();
        assert!(wide.half_int_alpha_sq < 1e-12);
    }

    #[test]
    fn interval_value_is_finite_and_dominates() {
        let rep = value_of_information(&unit(), &Anticipation::band(-1.0, 1.0), 1.0, 1e-3, 1.0).unwrap();
        assert_eq!(rep.verdict, Finiteness::Finite);
        assert!(rep.vg > rep.vf);
        assert!(rep.endpoint_tail_bound.unwrap() > 0.0);
        assert!(rep.quadrature_error < 1e-6);
    }

    #[test]
    fn arcsine_tail_values() {
        assert!((arcsine_tail(0.0) - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(arcsine_tail(1.0), 0.0);
        let eps = 1e-6;
        assert!(rel(arcsine_tail(1.0 - eps), 2.0 * eps.sqrt()) < 1e-6);
    }
}
