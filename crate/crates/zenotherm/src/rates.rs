//! Non-Markovian relaxation rates of the measured two-level system.
//!
//! The rates
//!
//! ```text
//! R_{e,g}(t) = 2*pi*t * integral dw G_T(w) sinc[(w -+ omega_a) t]
//! ```
//!
//! govern the population dynamics between measurements, with `t` the time
//! elapsed since the last correlation-erasing event. They start at zero,
//! grow linearly as `2*Rdot0*t` in the Zeno regime, oscillate (and may go
//! negative) at `t ~ 1/omega_a`, and settle on the Golden-Rule values
//! `2*pi*G_T(+-omega_a)` for `t >> t_c`.

use crate::bath::{bose_occupation, eval_gt, ThermalSpectrum};
use crate::error::{Error, Result};
use crate::quad::{self, sinc};

/// Relaxation-rate pair at one elapsed time.
///
/// Negative values are legal and meaningful: they drive population against
/// the direction allowed by detailed balance and enable transient cooling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePair {
    /// Excited-state relaxation rate `R_e(t)`.
    pub r_e: f64,
    /// Ground-state relaxation rate `R_g(t)`.
    pub r_g: f64,
    /// Elapsed time since the last measurement (or coupling switch-on).
    pub t: f64,
}

/// Default absolute tolerance per quadrature call.
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

/// Compute `R_e(t)` and `R_g(t)` by adaptive quadrature.
///
/// The prefactor is `2t`, which is the unique choice consistent with both
/// closed-form limits: `R -> 2*Rdot0*t` as `t -> 0` and
/// `R -> 2*pi*G_T(+-omega_a)` as `t -> inf` (via the Dirichlet kernel
/// `t*sinc(x*t) -> pi*delta(x)`).
///
/// The window is `[-W, W]` with `W = max(omega0 + 10/t_c, omega_a + 40/t)`
/// extended by twenty further sinc lobes; panel widths never exceed half an
/// oscillation period `pi/t`. The truncated tail beyond the window is
/// bounded by its first lobe and folded into the error budget (it never
/// triggers a convergence failure on its own). Returns exactly `(0, 0)` at
/// `t = 0`.
pub fn relaxation_rates(
    ts: &ThermalSpectrum,
    omega_a: f64,
    t: f64,
    abs_tol: f64,
) -> Result<RatePair> {
    assert!(t >= 0.0, "elapsed time must be nonnegative");
    if t == 0.0 {
        return Ok(RatePair { r_e: 0.0, r_g: 0.0, t });
    }
    let prefactor = 2.0 * t;
    let r_e = rate_integral(ts, omega_a, t, abs_tol / prefactor)? * prefactor;
    let r_g = rate_integral(ts, -omega_a, t, abs_tol / prefactor)? * prefactor;
    Ok(RatePair { r_e, r_g, t })
}

/// `integral dw G_T(w) sinc[(w - center) t]` over the truncation window.
fn rate_integral(ts: &ThermalSpectrum, center: f64, t: f64, abs_tol: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let omega0 = ts.base.omega0;
    let width = ts.base.width;
    let w_core = (omega0 + 10.0 * width).max(center.abs() + 40.0 / t);
    let w_outer = w_core + 40.0 * pi / t;

    let mut bps = vec![
        -w_outer, -w_core, -omega0, 0.0, omega0, w_core, w_outer, center, -center,
    ];
    bps.retain(|x| x.abs() <= w_outer);
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * w_outer);

    let f = |w: f64| eval_gt(ts, w) * sinc((w - center) * t);
    let max_width = pi / t;
    let initial = (2.0 * w_outer / max_width).ceil() as usize + bps.len();
    let budget = 3 * initial + 50_000;
    let mut result = quad::adaptive(&f, &bps, max_width, abs_tol, budget)?;

    // First-lobe bound on the truncated tail, reported but non-fatal.
    let lobe = |w: f64| eval_gt(ts, w) / ((w - center).abs() * t) * 2.0 / t;
    result.error += lobe(w_outer) + lobe(-w_outer);
    Ok(result.value)
}

/// Universal Zeno slope `Rdot0 = integral G_T(w) dw = <B^2>`.
///
/// The positive-axis integral `integral_0^inf (2 n_T(w) + 1) G_0(w) dw` is
/// evaluated adaptively; the analytic zero-temperature tail of the shape is
/// added beyond the window (the Bose factor is negligible there).
pub fn zeno_slope(ts: &ThermalSpectrum) -> f64 {
    let sd = &ts.base;
    if sd.strength == 0.0 {
        return 0.0;
    }
    let alpha = ts.alpha();
    let w_hi = sd.support_hint().max(20.0 * alpha).max(10.0 * sd.omega0);
    let mut bps = vec![0.0, sd.omega0 - sd.width, sd.omega0, sd.omega0 + sd.width, w_hi];
    bps.retain(|x| *x >= 0.0 && *x <= w_hi);
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * w_hi);

    let f = |w: f64| {
        if w <= 0.0 {
            0.0
        } else {
            (2.0 * bose_occupation(w, ts.beta) + 1.0) * crate::bath::eval_g0(sd, w)
        }
    };
    let core = quad::adaptive(&f, &bps, f64::INFINITY, 1e-12 * sd.strength * sd.strength + 1e-300, 20_000)
        .expect("spectrum integrand is smooth; adaptive quadrature converges");
    core.value + shape_tail(sd, w_hi)
}

/// Analytic `integral_W^inf G_0` for the raw shape (rolloff is 1 there).
fn shape_tail(sd: &crate::bath::SpectralDensity, w: f64) -> f64 {
    let g2 = sd.strength * sd.strength;
    match sd.shape {
        crate::bath::SpectralShape::Lorentzian => {
            g2 * (0.5 - ((w - sd.omega0) / sd.width).atan() / std::f64::consts::PI)
        }
        // Gaussian support hint already covers 12 sigma; the remainder is
        // below double precision.
        crate::bath::SpectralShape::Gaussian => 0.0,
    }
}

/// Markovian (Golden-Rule) limit `(2 pi G_T(omega_a), 2 pi G_T(-omega_a))`.
pub fn golden_rule(ts: &ThermalSpectrum, omega_a: f64) -> RatePair {
    let two_pi = 2.0 * std::f64::consts::PI;
    RatePair {
        r_e: two_pi * eval_gt(ts, omega_a),
        r_g: two_pi * eval_gt(ts, -omega_a),
        t: f64::INFINITY,
    }
}

/// Tabulated rates over `[0, t_max]` with monotone-cubic interpolation.
///
/// Built dense enough that mid-interval interpolation error stays below the
/// construction tolerance; evaluation clamps to the end values outside the
/// covered range.
#[derive(Clone, Debug)]
pub struct RateTable {
    times: Vec<f64>,
    r_e: Vec<f64>,
    d_e: Vec<f64>,
    r_g: Vec<f64>,
    d_g: Vec<f64>,
}

impl RateTable {
    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("table is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Interpolated rate pair at elapsed time `t` (clamped to the table
    /// range).
    pub fn eval(&self, t: f64) -> RatePair {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return RatePair { r_e: self.r_e[0], r_g: self.r_g[0], t };
        }
        if t >= self.times[n - 1] {
            return RatePair { r_e: self.r_e[n - 1], r_g: self.r_g[n - 1], t };
        }
        let i = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return RatePair { r_e: self.r_e[i], r_g: self.r_g[i], t },
            Err(i) => i - 1,
        };
        let h = self.times[i + 1] - self.times[i];
        let s = (t - self.times[i]) / h;
        let hermite = |y0: f64, y1: f64, d0: f64, d1: f64| {
            let s2 = s * s;
            let s3 = s2 * s;
            y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
                + d0 * h * (s3 - 2.0 * s2 + s)
                + y1 * (-2.0 * s3 + 3.0 * s2)
                + d1 * h * (s3 - s2)
        };
        RatePair {
            r_e: hermite(self.r_e[i], self.r_e[i + 1], self.d_e[i], self.d_e[i + 1]),
            r_g: hermite(self.r_g[i], self.r_g[i + 1], self.d_g[i], self.d_g[i + 1]),
            t,
        }
    }

    /// Node view for CSV dumps: `(t, R_e, R_g)`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.times.len()).map(|i| (self.times[i], self.r_e[i], self.r_g[i]))
    }

    fn rebuild_slopes(&mut self) {
        self.d_e = pchip_slopes(&self.times, &self.r_e);
        self.d_g = pchip_slopes(&self.times, &self.r_g);
    }
}

/// Fritsch-Carlson monotone-cubic slopes, so the interpolant never invents
/// oscillations between nodes that could fake OZE features.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![0.0];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Build a rate table over `[0, t_max]`.
///
/// Starts from a geometric grid, then inserts midpoints wherever the
/// interpolated value misses the directly computed rate by more than `tol`,
/// until every interval validates.
pub fn tabulate_rates(
    ts: &ThermalSpectrum,
    omega_a: f64,
    t_max: f64,
    tol: f64,
    quad_tol: f64,
) -> Result<RateTable> {
    assert!(t_max >= 0.0 && tol > 0.0);
    if t_max == 0.0 {
        return Ok(RateTable {
            times: vec![0.0],
            r_e: vec![0.0],
            d_e: vec![0.0],
            r_g: vec![0.0],
            d_g: vec![0.0],
        });
    }

    let mut times = vec![0.0];
    let t_lo = (1e-3_f64).min(t_max * 1e-4);
    let n0 = 96;
    for i in 0..=n0 {
        times.push(t_lo * (t_max / t_lo).powf(i as f64 / n0 as f64));
    }
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * t_max);

    let mut table = RateTable {
        r_e: Vec::with_capacity(times.len()),
        r_g: Vec::with_capacity(times.len()),
        d_e: vec![],
        d_g: vec![],
        times: times.clone(),
    };
    for &t in &times {
        let pair = relaxation_rates(ts, omega_a, t, quad_tol)?;
        table.r_e.push(pair.r_e);
        table.r_g.push(pair.r_g);
    }
    table.rebuild_slopes();

    const MAX_NODES: usize = 20_000;
    let mut unvalidated: Vec<usize> = (0..table.times.len() - 1).collect();
    while !unvalidated.is_empty() {
        let mut inserts: Vec<(f64, f64, f64)> = Vec::new();
        for &i in &unvalidated {
            let mid = 0.5 * (table.times[i] + table.times[i + 1]);
            let exact = relaxation_rates(ts, omega_a, mid, quad_tol)?;
            let approx = table.eval(mid);
            if (exact.r_e - approx.r_e).abs() > tol || (exact.r_g - approx.r_g).abs() > tol {
                inserts.push((mid, exact.r_e, exact.r_g));
            }
        }
        if inserts.is_empty() {
            break;
        }
        if table.times.len() + inserts.len() > MAX_NODES {
            return Err(Error::QuadratureNonConvergence {
                requested: tol,
                achieved: f64::NAN,
                panels: table.times.len(),
            });
        }
        let mut touched: Vec<usize> = Vec::new();
        for (t, re, rg) in inserts {
            let i = table.times.partition_point(|&x| x < t);
            table.times.insert(i, t);
            table.r_e.insert(i, re);
            table.r_g.insert(i, rg);
            touched.push(i);
        }
        table.rebuild_slopes();
        // Re-probe the split intervals and their neighbors (PCHIP slopes
        // are local, so an insert perturbs adjacent intervals too).
        let mut next: Vec<usize> = Vec::new();
        for &i in &touched {
            for j in i.saturating_sub(2)..=(i + 1).min(table.times.len() - 2) {
                next.push(j);
            }
        }
        next.sort_unstable();
        next.dedup();
        unvalidated = next;
    }
    Ok(table)
}
