//! Adaptive quadrature on panels, tuned for oscillatory sinc-kernel
//! integrands.
//!
//! The driver seeds panels from caller-supplied breakpoints (spectrum
//! peak, origin kink, sinc center), optionally capped to a maximum panel
//! width so that no panel spans more than half an oscillation period, then
//! refines the worst panel until the summed error estimate meets the
//! absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// `sin(x)/x`, with the series expansion for `|x| < 1e-4` to avoid 0/0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Gauss-Kronrod 7-15 abscissae on [0, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];

/// Embedded 7-point Gauss weights (for `XGK[1], XGK[3], XGK[5]` and the
/// center).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// One Gauss-Kronrod 7-15 evaluation over `[a, b]`.
///
/// Returns the Kronrod value and `|kronrod - gauss|` as the error estimate.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        res_kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * pair;
        }
    }
    (res_kronrod * h, (res_kronrod - res_gauss).abs() * h)
}

#[derive(Debug)]
struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    /// Summed per-panel error estimate.
    pub error: f64,
    /// Panels in the final partition.
    pub panels: usize,
}

/// Integrate `f` over the union of `[breakpoints[i], breakpoints[i+1]]`.
///
/// Initial panels are the breakpoint intervals, each subdivided so that no
/// panel is wider than `max_width` (pass `f64::INFINITY` to disable). The
/// worst panel is bisected until the summed error estimate drops below
/// `abs_tol` or the panel budget is exhausted, in which case the error
/// carries the achieved estimate.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    max_width: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    assert!(breakpoints.len() >= 2, "need at least one interval");
    assert!(abs_tol > 0.0 && max_width > 0.0);

    let mut heap = BinaryHeap::new();
    let mut total_value = 0.0;
    let mut total_error = 0.0;
    let push = |heap: &mut BinaryHeap<Panel>, a: f64, b: f64, tv: &mut f64, te: &mut f64| {
        let (value, err) = gk15(f, a, b);
        *tv += value;
        *te += err;
        heap.push(Panel { err, a, b, value });
    };

    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        debug_assert!(b >= a, "breakpoints must be sorted");
        if b <= a {
            continue;
        }
        let slices = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / slices as f64;
        for i in 0..slices {
            push(&mut heap, a + i as f64 * h, a + (i + 1) as f64 * h, &mut total_value, &mut total_error);
        }
    }

    while total_error > abs_tol {
        if heap.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence {
                requested: abs_tol,
                achieved: total_error,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap cannot be empty here");
        if worst.b - worst.a < 1e-15 * (worst.b.abs() + worst.a.abs() + 1.0) {
            // Interval at floating-point resolution; no further progress is
            // possible on it.
            heap.push(worst);
            return Err(Error::QuadratureNonConvergence {
                requested: abs_tol,
                achieved: total_error,
                panels: heap.len(),
            });
        }
        total_value -= worst.value;
        total_error -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        push(&mut heap, worst.a, mid, &mut total_value, &mut total_error);
        push(&mut heap, mid, worst.b, &mut total_value, &mut total_error);
    }

    Ok(QuadResult { value: total_value, error: total_error, panels: heap.len() })
}

/// Convenience wrapper for a single interval without width capping.
pub fn adaptive_interval<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    adaptive(f, &[a, b], f64::INFINITY, abs_tol, max_panels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_at_origin_and_series_boundary() {
        assert_eq!(sinc(0.0), 1.0);
        let x = 1e-4 * 0.999_999;
        let series = sinc(x);
        let direct = x.sin() / x;
        assert!((series - direct).abs() < 1e-15);
        assert_eq!(sinc(2.0), (2.0f64).sin() / 2.0);
    }

    #[test]
    fn integrates_sine_exactly() {
        let r = adaptive_interval(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 100).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "value {}", r.value);
    }

    #[test]
    fn integrates_lorentzian_against_arctan() {
        let w = 0.05;
        let f = |x: f64| (w / std::f64::consts::PI) / (x * x + w * w);
        let r = adaptive_interval(&f, -1.0, 1.0, 1e-12, 4000).unwrap();
        let exact = 2.0 * (1.0 / w).atan() / std::f64::consts::PI;
        assert!((r.value - exact).abs() < 1e-11, "value {} vs {}", r.value, exact);
    }

    #[test]
    fn oscillatory_integral_with_width_cap() {
        // Integral of cos(kx) over whole periods vanishes.
        let k = 200.0;
        let f = |x: f64| (k * x).cos();
        let b = 2.0 * std::f64::consts::PI * 30.0 / k;
        let r = adaptive(&f, &[0.0, b], std::f64::consts::PI / k, 1e-12, 10_000).unwrap();
        assert!(r.value.abs() < 1e-12, "value {}", r.value);
    }

    #[test]
    fn reports_non_convergence_with_achieved_estimate() {
        let f = |x: f64| 1.0 / x.abs().sqrt();
        let err = adaptive(&f, &[1e-12, 1.0], f64::INFINITY, 1e-14, 8).unwrap_err();
        match err {
            Error::QuadratureNonConvergence { requested, achieved, panels } => {
                assert_eq!(requested, 1e-14);
                assert!(achieved > 1e-14);
                assert!(panels >= 8);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
