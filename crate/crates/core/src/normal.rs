//! Standard normal density, distribution and tail helpers.
//!
//! Everything the drift and the integrand need is a ratio of density gaps
//! `phi(z1) - phi(z2)` to probability masses `Phi(z2) - Phi(z1)` or
//! `Phi(z1) + Phi(-z2)`. Both are formed from the tail nearest to the bulk so
//! that nothing cancels, and both have log-space versions that stay finite
//! for `|z|` in the hundreds. Infinite arguments stand for one-sided or
//! absent thresholds.

use std::f64::consts::FRAC_1_SQRT_2;

/// `ln(sqrt(2 pi))`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Beyond this point tail masses are taken from the Mills-ratio continued fraction.
const CF_SWITCH: f64 = 20.0;
const CF_DEPTH: usize = 120;

#[inline]
pub fn pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

#[inline]
pub fn ln_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// `Phi(z)`.
#[inline]
pub fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Upper tail `Phi(-z) = 1 - Phi(z)`.
#[inline]
pub fn sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// Mills ratio `Phi(-x) / phi(x)` for `x >= 0`.
pub fn mills_ratio(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == f64::INFINITY {
        return 0.0;
    }
    if x < CF_SWITCH {
        return sf(x) / pdf(x);
    }
    // R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
    let mut t = x;
    for k in (1..=CF_DEPTH).rev() {
        t = x + k as f64 / t;
    }
    1.0 / t
}

/// `ln Phi(z)`, finite for every finite `z`.
pub fn ln_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z > 5.0 {
        (-sf(z)).ln_1p()
    } else if z > -CF_SWITCH {
        cdf(z).ln()
    } else if z == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        ln_pdf(z) + mills_ratio(-z).ln()
    }
}

/// `ln(exp(a) + exp(b))`.
#[inline]
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(exp(hi) - exp(lo))` for `lo <= hi`.
#[inline]
fn ln_sub_exp(hi: f64, lo: f64) -> f64 {
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

/// Mass of the band, `Phi(z2) - Phi(z1)` for `z1 <= z2`.
pub fn band_prob(z1: f64, z2: f64) -> f64 {
    if z1 >= 0.0 {
        sf(z1) - sf(z2)
    } else if z2 <= 0.0 {
        cdf(z2) - cdf(z1)
    } else {
        // straddles the origin: two non-negative half masses
        0.5 * (libm::erf(z2 * FRAC_1_SQRT_2) + libm::erf(-z1 * FRAC_1_SQRT_2))
    }
}

/// `ln(Phi(z2) - Phi(z1))`.
pub fn ln_band_prob(z1: f64, z2: f64) -> f64 {
    if z1 >= 0.0 {
        ln_sub_exp(ln_cdf(-z1), ln_cdf(-z2))
    } else if z2 <= 0.0 {
        ln_sub_exp(ln_cdf(z2), ln_cdf(z1))
    } else {
        band_prob(z1, z2).ln()
    }
}

/// Mass outside the band, `Phi(z1) + Phi(-z2)`.
#[inline]
pub fn outside_prob(z1: f64, z2: f64) -> f64 {
    cdf(z1) + sf(z2)
}

/// `ln(Phi(z1) + Phi(-z2))`.
pub fn ln_outside_prob(z1: f64, z2: f64) -> f64 {
    ln_add_exp(ln_cdf(z1), ln_cdf(-z2))
}

/// Sign and log-magnitude of `phi(z1) - phi(z2)`.
///
/// The sign is that of `|z2| - |z1|`; a zero gap returns `(0.0, -inf)`.
pub fn ln_pdf_gap(z1: f64, z2: f64) -> (f64, f64) {
    let (a1, a2) = (z1.abs(), z2.abs());
    if a1 == a2 {
        return (0.0, f64::NEG_INFINITY);
    }
    let (sign, near, far) = if a1 < a2 { (1.0, a1, a2) } else { (-1.0, a2, a1) };
    // far^2 - near^2 factored to keep precision when the two are close
    let spread = (far - near) * (far + near);
    (sign, ln_pdf(near) + (-(-0.5 * spread).exp_m1()).ln())
}

/// `phi(z1) - phi(z2)` on the linear scale.
pub fn pdf_gap(z1: f64, z2: f64) -> f64 {
    let (sign, ln_mag) = ln_pdf_gap(z1, z2);
    sign * ln_mag.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_cdf_matches_high_precision_references() {
        // 50-digit references
        let cases = [
            (-5.0, -15.064_998_393_988_725_736),
            (-10.0, -53.231_285_150_512_470_578),
            (-20.0, -203.917_155_371_097_263_94),
            (-38.0, -726.557_216_018_820_130_10),
            (-40.0, -804.608_442_013_753_788_17),
            (-100.0, -5_005.524_208_694_205_088_6),
            (-300.0, -45_006.622_732_118_663_360),
        ];
        for (z, want) in cases {
            assert!(rel(ln_cdf(z), want) < 1e-13, "z={z}: {} vs {want}", ln_cdf(z));
        }
    }

    #[test]
    fn continued_fraction_matches_reference_mills_ratio() {
        let cases = [
            (20.0, 0.049_875_925_981_836_783_658),
            (25.0, 0.039_936_304_769_535_592_529),
            (30.0, 0.033_296_419_072_497_213_382),
            (40.0, 0.024_984_404_205_720_571_147),
        ];
        for (x, want) in cases {
            assert!(rel(mills_ratio(x), want) < 1e-14, "x={x}");
        }
        // both branches agree just below the switch
        let x = 19.5;
        let mut t = x;
        for k in (1..=CF_DEPTH).rev() {
            t = x + k as f64 / t;
        }
        assert!(rel(1.0 / t, mills_ratio(x)) < 1e-12);
    }

    #[test]
    fn band_prob_far_from_the_cut_does_not_cancel() {
        assert!((band_prob(0.0, 20.0) - 0.5).abs() < 1e-15);
        let one_sigma = 0.682_689_492_137_085_9;
        assert!(rel(band_prob(-1.0, 1.0), one_sigma) < 1e-14);
        // deep tail: both masses ~1e-88, difference stays relative-accurate
        let p = band_prob(20.0, 21.0);
        let want = sf(20.0) - sf(21.0);
        assert!(p > 0.0 && rel(p, want) < 1e-14);
        assert!(rel(ln_band_prob(20.0, 21.0), want.ln()) < 1e-14);
    }

    #[test]
    fn log_forms_stay_finite_out_to_300() {
        for &z in &[-300.0, -150.0, -40.0, 40.0, 150.0, 300.0] {
            let lp = ln_band_prob(z, z + 1.0);
            let lo = ln_outside_prob(z, z + 1.0);
            let (_, lg) = ln_pdf_gap(z, z + 1.0);
            assert!(lp.is_finite() && lo.is_finite() && lg.is_finite(), "z={z}");
        }
    }

    #[test]
    fn infinite_thresholds() {
        assert_eq!(band_prob(f64::NEG_INFINITY, f64::INFINITY), 1.0);
        assert_eq!(ln_band_prob(f64::NEG_INFINITY, f64::INFINITY), 0.0);
        assert_eq!(outside_prob(f64::NEG_INFINITY, f64::INFINITY), 0.0);
        assert_eq!(ln_outside_prob(f64::NEG_INFINITY, f64::INFINITY), f64::NEG_INFINITY);
        assert!(rel(ln_band_prob(1.0, f64::INFINITY), sf(1.0).ln()) < 1e-15);
        assert!(rel(pdf_gap(1.0, f64::INFINITY), pdf(1.0)) < 1e-15);
        assert_eq!(ln_pdf_gap(f64::NEG_INFINITY, f64::INFINITY).0, 0.0);
    }

    #[test]
    fn pdf_gap_sign_and_value() {
        let g = pdf_gap(0.5, 2.0);
        assert!(rel(g, pdf(0.5) - pdf(2.0)) < 1e-14);
        assert!(pdf_gap(-2.0, 0.5) < 0.0);
        assert_eq!(pdf_gap(-1.0, 1.0), 0.0);
    }
}
