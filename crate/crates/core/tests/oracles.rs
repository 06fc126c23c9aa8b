//! Brute-force cross-checks of the quadrature against plain Riemann sums and
//! Monte Carlo.

use infovalue::grid::trading_grid;
use infovalue::quadrature::half_integrated_alpha_sq;
use infovalue::simulation::discrete_half_alpha_sq;
use infovalue::{
    expected_alpha_sq, integral_i, integrand_i, martingale_scan, run_mc, simulate_path, Anticipation, CoefficientSet,
    MCConfig, StrategyKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn midpoint_sum(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

fn two_piece() -> CoefficientSet {
    CoefficientSet::new(vec![0.0, 0.3, 1.0], vec![0.0, 0.01], vec![0.02, 0.05], vec![0.8, 0.3]).unwrap()
}

#[test]
fn integral_of_i_matches_riemann_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let c = two_piece();
        let t: f64 = rng.gen_range(0.0..0.95);
        let c1: f64 = rng.gen_range(-1.0..0.5);
        let c2 = c1 + rng.gen_range(0.05..1.5);
        let sd = c.remaining_variance(t).sqrt();
        let exact = integral_i(t, (c1, c2), c.time_change()).unwrap().total().value;
        let brute = midpoint_sum(
            |x| integrand_i(x, t, (c1, c2), c.time_change()).unwrap(),
            c1 - 40.0 * sd,
            c2 + 40.0 * sd,
            2_000_000,
        );
        assert!(((exact - brute) / exact).abs() < 1e-6, "t={t} c=({c1},{c2}): {exact} vs {brute}");
    }
}

#[test]
fn integral_of_i_at_mid_time_dense_sum() {
    let c = CoefficientSet::constant(0.0, 0.0, 1.0).unwrap();
    let brute = midpoint_sum(
        |x| integrand_i(x, 0.5, (-1.0, 1.0), c.time_change()).unwrap(),
        -40.0,
        40.0,
        10_000_000,
    );
    let want = 2.757_970_182_915_48;
    assert!(((brute - want) / want).abs() < 1e-9, "{brute}");
}

#[test]
fn expected_alpha_sq_matches_double_riemann_sum() {
    // E[alpha^2(t)] = sigma^2 / v * E_x[g], with x ~ N(0, tau); the inner
    // average over L is written out explicitly
    let c = two_piece();
    let (c1, c2) = (-0.3, 0.6);
    for &t in &[0.2, 0.6, 0.9] {
        let tau = c.rho() - c.remaining_variance(t);
        let v = c.remaining_variance(t);
        let sigma = c.sigma_at(t);
        let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let tail = |z: f64| 0.5 * libm::erfc(z / std::f64::consts::SQRT_2);
        let brute = midpoint_sum(
            |x| {
                let (z1, z2) = ((c1 - x) / v.sqrt(), (c2 - x) / v.sqrt());
                let p = if z1 >= 0.0 { tail(z1) - tail(z2) } else { tail(-z2) - tail(-z1) };
                let q = tail(-z1) + tail(z2);
                let d = phi(z1) - phi(z2);
                // p a1^2 + q a0^2 = sigma^2 d^2 / v (1/p + 1/q); p underflows to 0
                // only where d is subnormal
                let inner = if d == 0.0 || p == 0.0 { 0.0 } else { sigma * sigma / v * (d / p * d + d / q * d) };
                phi(x / tau.sqrt()) / tau.sqrt() * inner
            },
            -12.0 * tau.sqrt(),
            12.0 * tau.sqrt(),
            400_000,
        );
        let q = expected_alpha_sq(t, &c, &Anticipation::band(c1, c2)).unwrap().value;
        assert!(((q - brute) / q).abs() < 1e-7, "t={t}: {q} vs {brute}");
    }
}

#[test]
fn left_riemann_target_converges_to_the_integral() {
    let c = CoefficientSet::constant(0.0, 0.0, 1.0).unwrap();
    let info = Anticipation::band(-1.0, 1.0);
    let exact = half_integrated_alpha_sq(&c, &info, 0.99).unwrap().value;
    let gaps: Vec<f64> = [100, 200, 400]
        .iter()
        .map(|&n| exact - discrete_half_alpha_sq(&c, &info, &trading_grid(0.99, n)).unwrap())
        .collect();
    // first order in the step size
    assert!(gaps.iter().all(|g| *g > 0.0));
    for w in gaps.windows(2) {
        assert!((w[0] / w[1] - 2.0).abs() < 0.05, "{gaps:?}");
    }
}

#[test]
fn path_moments_match_variance_clock() {
    let c = two_piece();
    let grid = [0.0, 0.3, 0.6, 1.0];
    let n = 100_000u64;
    let mut sums = [[0.0f64; 2]; 4];
    for i in 0..n {
        let p = simulate_path(&c, &Anticipation::Terminal, 1.0, &grid, 3, i).unwrap();
        for (k, m) in p.m.iter().enumerate() {
            sums[k][0] += m;
            sums[k][1] += m * m;
        }
    }
    for (k, &t) in grid.iter().enumerate() {
        let tau = c.rho() - c.remaining_variance(t);
        let mean = sums[k][0] / n as f64;
        let var = sums[k][1] / n as f64 - mean * mean;
        if tau == 0.0 {
            assert_eq!(var, 0.0);
            continue;
        }
        let se_mean = (tau / n as f64).sqrt();
        let se_var = tau * (2.0 / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se_mean, "t={t}: mean {mean}");
        assert!((var - tau).abs() < 3.0 * se_var, "t={t}: var {var} vs {tau}");
    }
}

#[test]
fn insider_dominates_classical() {
    let c = CoefficientSet::constant(0.01, 0.05, 0.2).unwrap();
    let info = infovalue::anticipation(&c, &infovalue::InsiderInfo::interval(0.9, 1.1), 1.0).unwrap();
    let grid = trading_grid(0.9, 100);
    let run = |strategy| {
        let cfg = MCConfig { n_paths: 40_000, grid: grid.clone(), seed: 12, strategy, extrapolate: false };
        run_mc(&c, &info, &cfg, 1.0).unwrap()
    };
    let insider = run(StrategyKind::InsiderInterval);
    let classical = run(StrategyKind::Classical);
    let se = insider.standard_error.hypot(classical.standard_error);
    assert!(insider.mean_log_wealth >= classical.mean_log_wealth - 3.0 * se);
    let gap = insider.mean_log_wealth - classical.mean_log_wealth;
    let want = insider.discrete_target - classical.target;
    assert!((gap - want).abs() < 3.0 * se, "{gap} vs {want} (se {se})");
}

#[test]
fn exact_insider_mc_grows_half_log_per_decade() {
    let c = CoefficientSet::constant(0.0, 0.0, 1.0).unwrap();
    let at = |eps: f64| {
        let cfg = MCConfig {
            n_paths: 40_000,
            grid: trading_grid(1.0 - eps, 400),
            seed: 99,
            strategy: StrategyKind::InsiderExact,
            extrapolate: true,
        };
        run_mc(&c, &Anticipation::Terminal, &cfg, 1.0).unwrap()
    };
    let (a, b) = (at(1e-2), at(1e-3));
    let growth = b.mean_log_wealth - a.mean_log_wealth;
    let decade = 0.5 * 10f64.ln();
    assert!((growth / decade - 1.0).abs() < 0.05, "{growth} vs {decade}");
    assert!(a.z_score.unwrap().abs() < 3.0 && b.z_score.unwrap().abs() < 3.0, "{a:?} {b:?}");
}

#[test]
fn martingale_scan_two_piece() {
    let c = two_piece();
    let scan = martingale_scan(&c, (-0.2, f64::INFINITY), &[0.0, 0.2, 0.3, 0.5, 0.9, 0.999], 50_000, 4).unwrap();
    assert!(scan.max_abs_z <= 3.0, "{scan:?}");
}
