//! Information drift of the enlarged filtration and the resulting optimal portfolio.
//!
//! Knowing `L` at time 0 turns `w` into `w~ + int alpha du` with
//! `alpha(t) = sigma(t) * d/dm log P(L = l | M(t) = m)`. Given `M(t) = m` the
//! remaining increment `M(1) - M(t)` is centered Gaussian with variance
//! `rho - tau(t)`, so for a band `[c1, c2)` with `z_i = (c_i - m) / sqrt(rho - tau)`:
//!
//! ```text
//! alpha(t, L=1) =  sigma (phi(z1) - phi(z2)) / (sqrt(rho - tau) (Phi(z2) - Phi(z1)))
//! alpha(t, L=0) = -sigma (phi(z1) - phi(z2)) / (sqrt(rho - tau) (Phi(-z2) + Phi(z1)))
//! ```
//!
//! and for the exact terminal value the Brownian-bridge pull
//! `sigma (M(1) - m) / (rho - tau)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{Anticipation, CoefficientSet, Realized};
use crate::normal;

/// Beyond this `|z|` the drift is evaluated in log space.
const LINEAR_RANGE: f64 = 8.0;

/// Sufficient statistics for the drift at one time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftState {
    pub t: f64,
    pub tau: f64,
    pub rho: f64,
    /// `rho - tau`, summed directly rather than by subtraction.
    pub remaining: f64,
    /// Realized `M(t)`.
    pub m: f64,
    pub sigma: f64,
    pub z1: f64,
    pub z2: f64,
    /// `P(L = 1 | F_t) = Phi(z2) - Phi(z1)`.
    pub cond_prob: f64,
}

impl DriftState {
    /// State at time `t` with `M(t) = m` for the band `[c1, c2)`. Pass
    /// `(-inf, inf)` when only the time quantities are needed.
    pub fn new(coeffs: &CoefficientSet, t: f64, m: f64, (c1, c2): (f64, f64)) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("time {t} outside [0, 1)")));
        }
        if !(c1 < c2) {
            return Err(Error::validation(format!("thresholds need c1 < c2, got ({c1}, {c2})")));
        }
        let remaining = coeffs.remaining_variance(t);
        if !(remaining > 0.0) {
            return Err(Error::SingularTime { t, remaining });
        }
        let sd = remaining.sqrt();
        let z1 = (c1 - m) / sd;
        let z2 = (c2 - m) / sd;
        Ok(DriftState {
            t,
            tau: coeffs.tau(t),
            rho: coeffs.rho(),
            remaining,
            m,
            sigma: coeffs.sigma_at(t),
            z1,
            z2,
            cond_prob: normal::band_prob(z1, z2),
        })
    }

    /// `s_t = z2 - z1 = (c2 - c1) / sqrt(rho - tau)`.
    pub fn gap(&self) -> f64 {
        self.z2 - self.z1
    }

    fn check(&self) -> Result<()> {
        if self.remaining > 0.0 {
            Ok(())
        } else {
            Err(Error::SingularTime {
                t: self.t,
                remaining: self.remaining,
            })
        }
    }
}

/// Which side of the price the one-sided insider knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `L = 1{M(1) >= c1}`
    Lower,
    /// `L = 1{M(1) < c2}`
    Upper,
}

/// `P(L = 1 | F_t)`.
pub fn conditional_prob(state: &DriftState) -> Result<f64> {
    state.check()?;
    Ok(normal::band_prob(state.z1, state.z2))
}

/// Drift for the band `[z1, z2)` in standardized units; `scale = sigma / sqrt(rho - tau)`.
#[inline]
pub(crate) fn band_drift(z1: f64, z2: f64, scale: f64, inside: bool) -> f64 {
    if z1 == f64::NEG_INFINITY && z2 == f64::INFINITY {
        return 0.0;
    }
    let linear = |z: f64| z.is_infinite() || z.abs() <= LINEAR_RANGE;
    if linear(z1) && linear(z2) {
        let gap = normal::pdf(z1) - normal::pdf(z2);
        return if inside {
            scale * gap / normal::band_prob(z1, z2)
        } else {
            -scale * gap / normal::outside_prob(z1, z2)
        };
    }
    let (sign, ln_gap) = normal::ln_pdf_gap(z1, z2);
    if sign == 0.0 {
        return 0.0;
    }
    if inside {
        sign * scale * (ln_gap - normal::ln_band_prob(z1, z2)).exp()
    } else {
        -sign * scale * (ln_gap - normal::ln_outside_prob(z1, z2)).exp()
    }
}

/// Information drift for interval knowledge `L = 1{M(1) in [c1, c2)}`, on the event `L = l`.
pub fn info_drift_interval(state: &DriftState, l: bool) -> Result<f64> {
    state.check()?;
    Ok(band_drift(state.z1, state.z2, state.sigma / state.remaining.sqrt(), l))
}

/// Information drift for a one-sided bound: the interval drift with the
/// other threshold sent to infinity.
pub fn info_drift_onesided(state: &DriftState, l: bool, side: Side) -> Result<f64> {
    state.check()?;
    let (z1, z2) = match side {
        Side::Lower => (state.z1, f64::INFINITY),
        Side::Upper => (f64::NEG_INFINITY, state.z2),
    };
    Ok(band_drift(z1, z2, state.sigma / state.remaining.sqrt(), l))
}

/// Brownian-bridge drift `sigma (M(1) - m) / (rho - tau)` for exact knowledge of `M(1)`.
pub fn info_drift_exact(m_terminal: f64, state: &DriftState) -> Result<f64> {
    state.check()?;
    Ok(state.sigma * (m_terminal - state.m) / state.remaining)
}

/// Drift for whatever the insider knows, given its realized value.
pub fn info_drift(info: &Anticipation, state: &DriftState, realized: Realized) -> Result<f64> {
    match (info, realized) {
        (Anticipation::Band { .. }, Realized::Indicator(l)) => info_drift_interval(state, l),
        (Anticipation::Terminal, Realized::Terminal(m1)) => info_drift_exact(m1, state),
        _ => Err(Error::validation("realized value does not match the insider information")),
    }
}

/// `pi*(t) = (b - r) / sigma^2 + alpha / sigma`.
pub fn optimal_portfolio(coeffs: &CoefficientSet, t: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain(format!("time {t} outside [0, 1)")));
    }
    let sigma = coeffs.sigma_at(t);
    Ok((coeffs.b_at(t) - coeffs.r_at(t)) / (sigma * sigma) + alpha / sigma)
}

/// A portfolio rule: fraction of wealth in the risky asset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `pi = 0`.
    Riskless,
    /// The Merton fraction `(b - r) / sigma^2`.
    Classical,
    /// Merton fraction plus `alpha / sigma` for the given information.
    Insider(Anticipation),
}

impl Strategy {
    /// Risky fraction at `(t, M(t) = m)` for a path whose insider variable took `realized`.
    pub fn fraction(&self, coeffs: &CoefficientSet, t: f64, m: f64, realized: Realized) -> Result<f64> {
        let alpha = match self {
            Strategy::Riskless => return Ok(0.0),
            Strategy::Classical => 0.0,
            Strategy::Insider(info) => {
                let band = match info {
                    Anticipation::Band { c1, c2 } => (*c1, *c2),
                    Anticipation::Terminal => (f64::NEG_INFINITY, f64::INFINITY),
                };
                let state = DriftState::new(coeffs, t, m, band)?;
                info_drift(info, &state, realized)?
            }
        };
        optimal_portfolio(coeffs, t, alpha)
    }
}

/// `int (sigma pi)^2 dt` accumulated on a grid is finite.
pub fn admissible(energy: f64) -> bool {
    energy.is_finite()
}
