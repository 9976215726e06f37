//! Adaptive Gauss-Kronrod quadrature on a finite interval.
//!
//! A 15-point Kronrod rule with embedded 7-point Gauss rule is applied per
//! panel; the panel with the largest error estimate is bisected until the
//! global estimate meets the requested tolerance. Callers supply breakpoints
//! (typically the zeros of an oscillatory factor) that seed the initial
//! panel set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights. Standard QUADPACK values at their
// published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default relative tolerance of the kernel integrals.
pub const REL_TOL: f64 = 1e-10;
/// Absolute error floor below which refinement stops.
pub const ABS_FLOOR: f64 = 1e-14;
/// Cap on adaptive bisections beyond the initial panel set.
const MAX_SPLITS: usize = 4000;

struct Panel {
    a: f64,
    b: f64,
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
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod evaluation on [a, b]; returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 14];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }

    let value = res_kronrod * half;
    let raw_err = ((res_kronrod - res_gauss) * half).abs();
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over [a, b] with interior `breakpoints` seeding the panel
/// set, refining adaptively to `rel_tol` (with absolute floor `abs_floor`).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_floor: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(a);
    edges.extend(breakpoints.iter().copied().filter(|x| *x > a && *x < b));
    edges.push(b);
    edges.sort_by(|x, y| x.total_cmp(y));
    edges.dedup();

    let mut heap = BinaryHeap::with_capacity(edges.len() + MAX_SPLITS);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }

    let mut splits = 0;
    while total_err > (rel_tol * total.abs()).max(abs_floor) {
        let exhausted = splits >= MAX_SPLITS || heap.is_empty();
        if exhausted {
            return Err(Error::Quadrature {
                rel_tol,
                error: total_err,
                value: total,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        splits += 1;
        if mid <= worst.a || mid >= worst.b {
            // Panel width at the resolution limit; accept its estimate.
            total_err -= worst.error;
            total_err += 50.0 * f64::EPSILON * worst.value.abs();
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    Ok(total)
}

/// The (abscissae, weights) of the 15-point Kronrod rule, for callers that
/// build fixed composite node sets.
pub(crate) fn gk15_table() -> (&'static [f64; 8], &'static [f64; 8]) {
    (&XGK, &WGK)
}

/// Breakpoints at the zeros `omega = k pi / tau` of the oscillatory factors
/// `sin(omega tau)` and `1 - cos(omega tau)` inside (0, upper).
pub fn oscillation_breakpoints(tau: f64, upper: f64) -> Vec<f64> {
    if tau <= 0.0 {
        return Vec::new();
    }
    let step = std::f64::consts::PI / tau;
    let mut pts = Vec::new();
    let mut k = 1usize;
    loop {
        let x = k as f64 * step;
        if x >= upper {
            break;
        }
        pts.push(x);
        k += 1;
    }
    pts
}
