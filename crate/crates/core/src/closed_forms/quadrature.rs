//! Adaptive Gauss–Kronrod (10/21-point) quadrature with global bisection of
//! the worst subinterval.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_517_871_939,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Absolute tolerance used by the closed-form integrals.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Cap on the number of subintervals.
pub const MAX_SUBINTERVALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub subintervals: usize,
}

/// One 21-point Kronrod evaluation with the embedded 10-point Gauss rule
/// providing the error estimate.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    // QUADPACK-style sharpening of the raw |K - G| estimate.
    let scaled = (200.0 * err / value.abs().max(f64::MIN_POSITIVE)).powf(1.5);
    let err = if value != 0.0 && scaled < 1.0 {
        err.min(value.abs() * scaled)
    } else {
        err
    };
    (value, err)
}

/// Error that bisection cannot remove: rounding in a sum of magnitude `mass`.
fn roundoff(mass: f64) -> f64 {
    50.0 * f64::EPSILON * mass
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `∫_a^b f` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    integrate_with_limit(f, a, b, abs_tol, MAX_SUBINTERVALS)
}

pub fn integrate_with_limit<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    limit: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            subintervals: 1,
        });
    }
    let (value, error) = kronrod21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total_err = error;
    let mut mass = value.abs();
    // Tolerances below the rounding floor of the result are clipped to it.
    while total_err > abs_tol.max(roundoff(mass)) {
        if heap.len() >= limit {
            return Err(Error::Quadrature {
                tolerance: abs_tol,
                estimate: total_err,
                limit,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution.
            return Err(Error::Quadrature {
                tolerance: abs_tol,
                estimate: total_err,
                limit,
            });
        }
        let (lv, le) = kronrod21(&f, worst.a, mid);
        let (rv, re) = kronrod21(&f, mid, worst.b);
        total_err += le + re - worst.error;
        mass += lv.abs() + rv.abs() - worst.value.abs();
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        // Re-sum periodically to shed accumulated cancellation in the totals.
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|p| p.error).sum();
            mass = heap.iter().map(|p| p.value.abs()).sum();
        }
    }
    let subintervals = heap.len();
    let pieces = heap.into_vec();
    Ok(Quadrature {
        value: pieces.iter().map(|p| p.value).sum(),
        abs_error: total_err.max(roundoff(mass)),
        subintervals,
    })
}

/// `∫_a^∞ f` via `t = a + (1 - u)/u`, `u ∈ (0, 1]`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64) -> Result<Quadrature> {
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = a + (1.0 - u) / u;
        let v = f(t) / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, abs_tol)
}
