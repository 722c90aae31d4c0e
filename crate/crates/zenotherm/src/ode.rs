//! Adaptive Dormand-Prince 5(4) integration over flat `f64` state slices.
//!
//! Schedules are handled by the callers, which split the time axis at
//! measurement events and output points and integrate segment by segment;
//! `integrate_to` always lands on the requested endpoint exactly, so event
//! localization is exact rather than root-found.

use crate::error::{Error, Result};

/// Integrator controls.
#[derive(Clone, Copy, Debug)]
pub struct OdeOpts {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` picks a small fraction of the interval.
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOpts {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, h_init: None, max_steps: 50_000_000 }
    }
}

// Dormand-Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights equal A's last row (FSAL); fourth-order weights below.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1 >= t0`, mutating `y` in
/// place. `on_step` runs after every accepted step (and can abort with an
/// error, e.g. on a population leaving `[0, 1]`).
pub fn integrate_to<F, M>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    opts: &OdeOpts,
    mut on_step: M,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    M: FnMut(f64, &[f64]) -> Result<()>,
{
    assert!(t1 >= t0, "integrate_to requires t1 >= t0");
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(());
    }
    let n = y.len();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
    let mut y_stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = t0;
    let mut h = opts.h_init.unwrap_or(span * 1e-3).min(span);
    let mut k1_fresh = false;
    let mut steps = 0usize;

    while t < t1 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Numeric(format!(
                "ODE step budget ({}) exceeded at t = {t:.6e}",
                opts.max_steps
            )));
        }
        h = h.min(t1 - t);
        if h <= f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::Numeric(format!("ODE step size underflow at t = {t:.6e}")));
        }

        if !k1_fresh {
            rhs(t, y, &mut k[0]);
            k1_fresh = true;
        }
        for stage in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = A[stage - 1][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(stage);
            let _ = head;
            rhs(t + C[stage] * h, &y_stage, &mut tail[0]);
        }
        // Fifth-order solution is the last stage input (FSAL): y_stage holds
        // y + h * sum(A[5][j] k_j) after the loop above ran stage 6 with
        // C[6] = 1 and A row equal to the 5th-order weights.
        y_new.copy_from_slice(&y_stage);

        // Embedded 4th-order error estimate.
        let mut err_norm_sq = 0.0;
        for i in 0..n {
            let mut y4 = y[i];
            for (j, kj) in k.iter().enumerate() {
                y4 += h * B4[j] * kj[i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            let e = (y_new[i] - y4) / scale;
            err_norm_sq += e * e;
        }
        let err = (err_norm_sq / n as f64).sqrt();

        if !err.is_finite() {
            return Err(Error::Numeric(format!("non-finite ODE state at t = {t:.6e}")));
        }

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y_new);
            // FSAL: k7 is the derivative at the accepted point.
            k.swap(0, 6);
            on_step(t, y)?;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let mut y = [1.0];
        integrate_to(
            |_t, y, dy| dy[0] = -2.0 * y[0],
            0.0,
            3.0,
            &mut y,
            &OdeOpts { rtol: 1e-10, atol: 1e-14, ..Default::default() },
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((y[0] - (-6.0f64).exp()).abs() < 1e-11, "y = {}", y[0]);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let mut y = [1.0, 0.0];
        integrate_to(
            |_t, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            20.0 * std::f64::consts::PI,
            &mut y,
            &OdeOpts { rtol: 1e-10, atol: 1e-12, ..Default::default() },
            |_, _| Ok(()),
        )
        .unwrap();
        let energy = y[0] * y[0] + y[1] * y[1];
        assert!((energy - 1.0).abs() < 1e-8, "energy drift {}", energy - 1.0);
        assert!((y[0] - 1.0).abs() < 1e-7 && y[1].abs() < 1e-7);
    }

    #[test]
    fn lands_exactly_on_endpoint() {
        let mut t_seen = 0.0;
        let mut y = [0.0];
        integrate_to(
            |t, _y, dy| dy[0] = t,
            0.0,
            1.234_567_89,
            &mut y,
            &OdeOpts::default(),
            |t, _| {
                t_seen = t;
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(t_seen, 1.234_567_89);
        assert!((y[0] - 0.5 * 1.234_567_89f64.powi(2)).abs() < 1e-10);
    }

    #[test]
    fn monitor_error_aborts() {
        let mut y = [1.0];
        let res = integrate_to(
            |_t, y, dy| dy[0] = y[0],
            0.0,
            5.0,
            &mut y,
            &OdeOpts::default(),
            |t, y| {
                if y[0] > 10.0 {
                    Err(Error::IntegrationBlowup { rho_ee: y[0], t })
                } else {
                    Ok(())
                }
            },
        );
        assert!(matches!(res, Err(Error::IntegrationBlowup { .. })));
    }
}
