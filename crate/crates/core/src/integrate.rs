//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Infinite ends are mapped onto `[0, 1)` with `x = a + u / (1 - u)` (and its
//! mirror), so integrands only need to decay faster than `1/x^2`. Breakpoints
//! split the range into segments that share a single panel budget: the panel
//! with the largest error is bisected until the summed error meets the
//! tolerance or the budget runs out. Panel order is fixed, so results do not
//! depend on anything but the inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_652_574_719_066,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-10,
            max_panels: 10_000,
        }
    }
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Tolerance {
            abs,
            ..Default::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub converged: bool,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: 0.0,
        abs_error: 0.0,
        panels: 0,
        converged: true,
    };

    /// Sum of two independent estimates.
    pub fn combine(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            panels: self.panels + other.panels,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, k: f64) -> Estimate {
        Estimate {
            value: self.value * k,
            abs_error: self.abs_error * k.abs(),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `x = origin + u / (1 - u)`
    Right(f64),
    /// `x = origin - u / (1 - u)`
    Left(f64),
}

impl Map {
    #[inline]
    fn eval<F: Fn(f64) -> f64>(self, f: &F, u: f64) -> f64 {
        match self {
            Map::Identity => f(u),
            Map::Right(a) | Map::Left(a) => {
                let w = 1.0 - u;
                let s = u / w;
                let x = if let Map::Right(_) = self { a + s } else { a - s };
                let y = f(x);
                if y == 0.0 {
                    0.0
                } else {
                    y / (w * w)
                }
            }
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = map.eval(f, center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = map.eval(f, center - dx) + map.eval(f, center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() || !error.is_finite() {
        error = f64::INFINITY;
    }
    (value, error)
}

fn panel<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Panel {
    let (value, error) = gauss_kronrod(f, map, a, b);
    Panel {
        a,
        b,
        map,
        value,
        error,
    }
}

/// Integrates `f` over `[a, b]`; either end may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Estimate {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrates `f` from `points[0]` to `points[last]`, with panel edges forced
/// at every interior point. Only the two ends may be infinite.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Estimate {
    let mut pts: Vec<f64> = points.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Estimate::ZERO;
    }
    let mut heap = BinaryHeap::new();
    let last = pts.len() - 2;
    for (i, w) in pts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        debug_assert!(i == 0 || a.is_finite());
        debug_assert!(i == last || b.is_finite());
        match (a.is_finite(), b.is_finite()) {
            (true, true) => heap.push(panel(&f, Map::Identity, a, b)),
            (true, false) => heap.push(panel(&f, Map::Right(a), 0.0, 1.0)),
            (false, true) => heap.push(panel(&f, Map::Left(b), 0.0, 1.0)),
            (false, false) => {
                heap.push(panel(&f, Map::Left(0.0), 0.0, 1.0));
                heap.push(panel(&f, Map::Right(0.0), 0.0, 1.0));
            }
        }
    }
    let mut panels = heap.len();
    let (mut value, mut error) = totals(&heap);
    loop {
        if error <= tol.target(value) || panels + 1 > tol.max_panels {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further
            heap.push(worst);
            break;
        }
        let left = panel(&f, worst.map, worst.a, mid);
        let right = panel(&f, worst.map, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if !error.is_finite() || error < 0.0 {
            (value, error) = totals_iter(heap.iter().chain([&left, &right]));
        }
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
    let (value, error) = totals(&heap);
    Estimate {
        value,
        abs_error: error,
        panels,
        converged: error <= tol.target(value),
    }
}

fn totals_iter<'a>(it: impl Iterator<Item = &'a Panel>) -> (f64, f64) {
    // sorted so the summation order does not depend on heap layout
    let mut parts: Vec<(f64, f64, f64)> = it.map(|p| (p.a, p.value, p.error)).collect();
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    parts
        .iter()
        .fold((0.0, 0.0), |(v, e), &(_, pv, pe)| (v + pv, e + pe))
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    totals_iter(heap.iter())
}
