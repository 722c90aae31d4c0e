//! Population rate-equation backend with a non-Markov rate clock.
//!
//! Between measurements the excited population obeys
//!
//! ```text
//! d rho_ee / dt = R_g(clock) * rho_gg - R_e(clock) * rho_ee,
//! ```
//!
//! where `clock` is the time elapsed since the last correlation-erasing
//! event (a measurement, or the coupling switch-on). A measurement leaves
//! the populations untouched and resets the clock to zero, so the
//! subsequent dynamics restarts on the short-time part of the `R(t)`
//! curves. That restart is the entire mechanism behind Zeno heating and
//! oscillatory-Zeno cooling.

use crate::bath::ThermalSpectrum;
use crate::error::{Error, Result};
use crate::ode::{integrate_to, OdeOpts};
use crate::rates::{relaxation_rates, tabulate_rates, RateTable};
use crate::schedule::{EventKind, MeasurementSchedule};
use crate::trajectory::{EventMarker, Trajectory, TrajectorySample};

/// Diagonal reduced TLS state plus the non-Markov rate clock.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemState {
    /// Excited-state population, in `[0, 1]`; `rho_gg = 1 - rho_ee`.
    pub rho_ee: f64,
    /// Elapsed time since the last measurement (or coupling switch-on).
    pub clock: f64,
}

impl SystemState {
    pub fn new(rho_ee: f64, clock: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho_ee) {
            return Err(Error::Config(format!("rho_ee must lie in [0, 1], got {rho_ee}")));
        }
        if !(clock >= 0.0) {
            return Err(Error::Config(format!("clock must be nonnegative, got {clock}")));
        }
        Ok(Self { rho_ee, clock })
    }

    /// Thermal population at inverse temperature `beta_s`
    /// (`f64::INFINITY` gives the pure ground state).
    pub fn gibbs(beta_s: f64, omega_a: f64) -> Self {
        Self { rho_ee: gibbs_population(beta_s, omega_a), clock: 0.0 }
    }

    pub fn ground() -> Self {
        Self { rho_ee: 0.0, clock: 0.0 }
    }
}

/// `rho_ee` of a TLS Gibbs state: `e^{-beta w} / (1 + e^{-beta w})`.
pub fn gibbs_population(beta: f64, omega_a: f64) -> f64 {
    if beta.is_infinite() {
        return 0.0;
    }
    let b = (-beta * omega_a).exp();
    b / (1.0 + b)
}

/// Nonselective energy measurement: populations unchanged, system-bath
/// correlations erased, so the rate clock restarts at zero.
pub fn apply_measurement(state: SystemState) -> SystemState {
    SystemState { rho_ee: state.rho_ee, clock: 0.0 }
}

/// Controls for [`propagate`].
#[derive(Clone, Copy, Debug)]
pub struct MeOpts {
    /// Output sampling period.
    pub dt_out: f64,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    /// Absolute tolerance per rate quadrature.
    pub quad_tol: f64,
    /// Interpolation tolerance of the cached rate table.
    pub table_tol: f64,
}

impl Default for MeOpts {
    fn default() -> Self {
        Self { dt_out: 0.05, ode_rtol: 1e-10, ode_atol: 1e-13, quad_tol: 1e-9, table_tol: 1e-7 }
    }
}

const RHO_ESCAPE_EPS: f64 = 1e-9;

/// Integrate the rate equations over `[0, t_end]` under a measurement
/// schedule, building a rate table that covers the longest inter-event
/// stretch.
///
/// Finite-duration events are demoted to impulsive ones with a warning in
/// the trajectory metadata; this backend has no notion of a pulse shape.
pub fn propagate(
    state0: SystemState,
    ts: &ThermalSpectrum,
    omega_a: f64,
    schedule: &MeasurementSchedule,
    t_end: f64,
    opts: &MeOpts,
) -> Result<Trajectory> {
    assert!(t_end > 0.0, "t_end must be positive");
    let events = schedule.events_within(t_end);
    let mut reach: f64 = state0.clock + events.first().map_or(t_end, |e| e.t);
    for w in events.windows(2) {
        reach = reach.max(w[1].t - w[0].t);
    }
    if let Some(last) = events.last() {
        reach = reach.max(t_end - last.t);
    }
    let table = tabulate_rates(ts, omega_a, reach, opts.table_tol, opts.quad_tol)?;
    propagate_with_table(state0, schedule, t_end, opts, &table)
}

/// Same as [`propagate`] but reusing a prebuilt rate table (parameter
/// sweeps share one table per bath temperature). The table must cover the
/// longest clock stretch of the run; evaluation clamps to the plateau
/// beyond its range.
pub fn propagate_with_table(
    state0: SystemState,
    schedule: &MeasurementSchedule,
    t_end: f64,
    opts: &MeOpts,
    table: &RateTable,
) -> Result<Trajectory> {
    assert!(t_end > 0.0, "t_end must be positive");
    let events = schedule.events_within(t_end);

    let mut traj = Trajectory::default();
    if events.iter().any(|e| e.kind == EventKind::Finite) {
        traj.metadata.insert(
            "warning.finite_events".into(),
            "master_eq treats finite-duration measurements as impulsive".into(),
        );
    }

    let ode_opts = OdeOpts {
        rtol: opts.ode_rtol,
        atol: opts.ode_atol,
        h_init: None,
        max_steps: 50_000_000,
    };

    let mut rho = state0.rho_ee;
    let mut clock0 = state0.clock;
    let mut t_seg = 0.0;
    let mut event_idx = 0;
    let mut sample_idx = 1; // output grid index; t = 0 sampled below

    let sample = |traj: &mut Trajectory, t: f64, rho: f64, clock: f64| {
        let pair = table.eval(clock);
        let mut s = TrajectorySample::new(t, rho);
        s.r_e = pair.r_e;
        s.r_g = pair.r_g;
        traj.samples.push(s);
    };
    sample(&mut traj, 0.0, rho, clock0);

    loop {
        let seg_end = if event_idx < events.len() { events[event_idx].t } else { t_end };
        let mut stops: Vec<f64> = Vec::new();
        while sample_idx as f64 * opts.dt_out < seg_end - 1e-12 {
            let t = sample_idx as f64 * opts.dt_out;
            if t > t_seg + 1e-12 {
                stops.push(t);
            }
            sample_idx += 1;
        }
        stops.push(seg_end);

        let mut t_prev = t_seg;
        for &stop in &stops {
            let mut y = [rho];
            integrate_to(
                |t, y, dy| {
                    let pair = table.eval(clock0 + (t - t_seg));
                    dy[0] = pair.r_g * (1.0 - y[0]) - pair.r_e * y[0];
                },
                t_prev,
                stop,
                &mut y,
                &ode_opts,
                |t, y| {
                    if !(-RHO_ESCAPE_EPS..=1.0 + RHO_ESCAPE_EPS).contains(&y[0]) {
                        Err(Error::IntegrationBlowup { rho_ee: y[0], t })
                    } else {
                        Ok(())
                    }
                },
            )?;
            rho = y[0];
            t_prev = stop;
            sample(&mut traj, stop, rho, clock0 + (stop - t_seg));
        }

        if event_idx < events.len() {
            let ev = events[event_idx];
            traj.events.push(EventMarker { t: ev.t, tau: ev.tau, kind: ev.kind });
            // Populations unchanged, clock reset.
            clock0 = 0.0;
            t_seg = ev.t;
            event_idx += 1;
            if (seg_end - t_end).abs() < 1e-12 {
                break;
            }
        } else {
            break;
        }
    }
    Ok(traj)
}

/// Diagnostic for the universal Zeno heating law.
///
/// Starting from `state` with a freshly reset clock, returns the
/// finite-difference `d(rho_ee - rho_gg)/dt` at `clock = dt_small`, which
/// the short-time expansion predicts to be
/// `4 * Rdot0 * dt_small * (rho_gg - rho_ee)`.
pub fn zeno_heating_check(
    state: SystemState,
    ts: &ThermalSpectrum,
    omega_a: f64,
    dt_small: f64,
    quad_tol: f64,
) -> Result<f64> {
    assert!(dt_small > 0.0);
    let delta = 0.05 * dt_small;
    let ode_opts = OdeOpts { rtol: 1e-12, atol: 1e-16, h_init: None, max_steps: 1_000_000 };
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let pair =
            relaxation_rates(ts, omega_a, t, quad_tol).expect("short-time quadrature converges");
        dy[0] = pair.r_g * (1.0 - y[0]) - pair.r_e * y[0];
    };
    let mut y = [state.rho_ee];
    integrate_to(rhs, 0.0, dt_small - delta, &mut y, &ode_opts, |_, _| Ok(()))?;
    let rho_minus = y[0];
    integrate_to(rhs, dt_small - delta, dt_small + delta, &mut y, &ode_opts, |_, _| Ok(()))?;
    let rho_plus = y[0];
    // d(rho_ee - rho_gg)/dt = 2 * d rho_ee / dt.
    Ok(2.0 * (rho_plus - rho_minus) / (2.0 * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::SpectralDensity;
    use crate::rates::zeno_slope;
    use crate::schedule::MeasurementSchedule;
    use crate::thermo::{annotate, RhoDotSource};

    fn fig1(beta: f64) -> ThermalSpectrum {
        ThermalSpectrum::new(SpectralDensity::lorentzian(1.0, 0.1, 0.07).unwrap(), beta).unwrap()
    }

    #[test]
    fn uncoupled_system_stays_constant() {
        let ts =
            ThermalSpectrum::new(SpectralDensity::lorentzian(1.0, 0.1, 0.0).unwrap(), 1.0)
                .unwrap();
        let schedule = MeasurementSchedule::impulsive_at(&[2.0, 5.0]).unwrap();
        let traj = propagate(
            SystemState::new(0.3, 0.0).unwrap(),
            &ts,
            1.0,
            &schedule,
            10.0,
            &MeOpts::default(),
        )
        .unwrap();
        for s in &traj.samples {
            assert!((s.rho_ee - 0.3).abs() < 1e-12, "t={}: {}", s.t, s.rho_ee);
        }
    }

    #[test]
    fn relaxes_to_gibbs_population() {
        let beta = 1.0;
        let ts = fig1(beta);
        let traj = propagate(
            SystemState::ground(),
            &ts,
            1.0,
            &MeasurementSchedule::empty(),
            500.0,
            &MeOpts { dt_out: 2.0, ..Default::default() },
        )
        .unwrap();
        traj.validate().unwrap();
        let target = gibbs_population(beta, 1.0);
        let last = traj.samples.last().unwrap();
        assert!((last.rho_ee - target).abs() < 1e-3, "{} vs {}", last.rho_ee, target);
    }

    #[test]
    fn gibbs_state_is_fixed_point_after_transient() {
        let beta = 1.0;
        let ts = fig1(beta);
        let rho0 = gibbs_population(beta, 1.0);
        let traj = propagate(
            SystemState::new(rho0, 0.0).unwrap(),
            &ts,
            1.0,
            &MeasurementSchedule::empty(),
            200.0,
            &MeOpts { dt_out: 1.0, ..Default::default() },
        )
        .unwrap();
        for s in traj.samples.iter().filter(|s| s.t > 100.0) {
            assert!((s.rho_ee - rho0).abs() < 5e-3, "t={}: {}", s.t, s.rho_ee);
        }
    }

    #[test]
    fn measurement_resets_clock_not_population() {
        let s = apply_measurement(SystemState::new(0.3, 7.2).unwrap());
        assert_eq!(s, SystemState { rho_ee: 0.3, clock: 0.0 });
        let s2 = apply_measurement(s);
        assert_eq!(s2.rho_ee, 0.3);
    }

    #[test]
    fn early_measurements_heat_the_system() {
        // Zeno heating: a measured run must overshoot the unmeasured one.
        let ts = fig1(f64::INFINITY);
        let opts = MeOpts::default();
        let schedule = MeasurementSchedule::impulsive_at(&[30.0, 31.5, 33.0, 34.5]).unwrap();
        let measured =
            propagate(SystemState::ground(), &ts, 1.0, &schedule, 40.0, &opts).unwrap();
        let free = propagate(
            SystemState::ground(),
            &ts,
            1.0,
            &MeasurementSchedule::empty(),
            40.0,
            &opts,
        )
        .unwrap();
        let rho_m = measured.samples.last().unwrap().rho_ee;
        let rho_f = free.samples.last().unwrap().rho_ee;
        assert!(rho_m > rho_f * 1.2, "measured {rho_m} vs free {rho_f}");
        // Each measurement is followed by a population rise.
        for ev in &measured.events {
            let before = measured.rho_at(ev.t);
            let after = measured.rho_at(ev.t + 1.0);
            assert!(after > before, "event at {}: {} -> {}", ev.t, before, after);
        }
    }

    #[test]
    fn zeno_limit_heats_monotonically_with_measurement_density() {
        let ts = fig1(f64::INFINITY);
        let t_total = 0.2;
        let mut last = f64::NEG_INFINITY;
        for n in [4usize, 8, 16] {
            let dt = t_total / n as f64;
            let times: Vec<f64> = (1..n).map(|k| k as f64 * dt).collect();
            let schedule = MeasurementSchedule::impulsive_at(&times).unwrap();
            let traj = propagate(
                SystemState::ground(),
                &ts,
                1.0,
                &schedule,
                t_total,
                &MeOpts { dt_out: 0.01, ..Default::default() },
            )
            .unwrap();
            let rho_end = traj.samples.last().unwrap().rho_ee;
            assert!(rho_end > last, "n={n}: {rho_end} after {last}");
            last = rho_end;
        }
    }

    #[test]
    fn zeno_heating_check_matches_universal_law() {
        let ts = fig1(f64::INFINITY);
        let dt = 1e-3;
        let rdot0 = zeno_slope(&ts);

        // Balanced populations: no heating.
        let fd =
            zeno_heating_check(SystemState::new(0.5, 0.0).unwrap(), &ts, 1.0, dt, 1e-12).unwrap();
        assert!(fd.abs() < 1e-2 * 4.0 * rdot0 * dt, "fd = {fd}");

        // Ground state: the universal rate, within 2%.
        let fd = zeno_heating_check(SystemState::ground(), &ts, 1.0, dt, 1e-12).unwrap();
        let predicted = 4.0 * rdot0 * dt;
        assert!((fd / predicted - 1.0).abs() < 0.02, "fd {fd} vs {predicted}");

        // Inverted population: sign flips.
        let fd =
            zeno_heating_check(SystemState::new(0.9, 0.0).unwrap(), &ts, 1.0, dt, 1e-12).unwrap();
        assert!(fd < 0.0, "fd = {fd}");
    }

    #[test]
    fn population_alone_does_not_determine_the_future() {
        // Two runs with different initial populations and different
        // measurement histories pass through the same rho_ee with different
        // derivatives: the map on rho_S alone is not invertible.
        let beta = 1.0;
        let ts = fig1(beta);
        let opts = MeOpts { dt_out: 0.02, ..Default::default() };
        let above = propagate(
            SystemState::new(0.45, 0.0).unwrap(),
            &ts,
            1.0,
            &MeasurementSchedule::impulsive_at(&[1.0]).unwrap(),
            30.0,
            &opts,
        )
        .unwrap();
        let below = propagate(
            SystemState::new(0.10, 0.0).unwrap(),
            &ts,
            1.0,
            &MeasurementSchedule::empty(),
            30.0,
            &opts,
        )
        .unwrap();
        let mut crossing = None;
        for w in above.samples.windows(2) {
            let d0 = w[0].rho_ee - below.rho_at(w[0].t);
            let d1 = w[1].rho_ee - below.rho_at(w[1].t);
            if d0.signum() != d1.signum() && w[0].t > 1.0 {
                crossing = Some(w[0].t);
                break;
            }
        }
        let t_star = crossing.expect("trajectories must cross");
        let slope = |traj: &Trajectory, t: f64| {
            let i = traj.samples.partition_point(|s| s.t < t);
            let s = &traj.samples[i];
            s.r_g * (1.0 - s.rho_ee) - s.r_e * s.rho_ee
        };
        let (sa, sb) = (slope(&above, t_star), slope(&below, t_star));
        assert!(
            (sa - sb).abs() > 1e-5,
            "derivatives at crossing t={t_star} too close: {sa} vs {sb}"
        );
    }

    #[test]
    fn sigma_sign_law_along_trajectory() {
        let beta = 1.0;
        let ts = fig1(beta);
        let rho0 = gibbs_population(beta, 1.0);
        let mut traj = propagate(
            SystemState::new(0.05, 0.0).unwrap(),
            &ts,
            1.0,
            &MeasurementSchedule::impulsive_at(&[20.0, 22.0]).unwrap(),
            40.0,
            &MeOpts::default(),
        )
        .unwrap();
        annotate(&mut traj, rho0, 1.0, RhoDotSource::FromRates);
        for s in &traj.samples {
            let rho_dot = s.r_g * (1.0 - s.rho_ee) - s.r_e * s.rho_ee;
            let dist_deriv = (s.rho_ee - rho0).signum() * rho_dot;
            if dist_deriv.abs() > 1e-8 {
                assert!(
                    (s.sigma > 0.0) == (dist_deriv < 0.0),
                    "t={}: sigma {} vs d|rho-rho0|/dt {}",
                    s.t,
                    s.sigma,
                    dist_deriv
                );
            }
        }
    }

    #[test]
    fn runaway_population_reports_blowup() {
        // Fig.-2-strength coupling at zero temperature drives rho_ee
        // negative once R_g swings below zero; the propagator must refuse
        // to clamp and report the escape instead.
        let ts = ThermalSpectrum::zero_temperature(
            SpectralDensity::lorentzian(1.0 / 0.7, 0.1, 4.36).unwrap(),
        );
        let res = propagate(
            SystemState::ground(),
            &ts,
            1.0,
            &MeasurementSchedule::empty(),
            20.0,
            &MeOpts::default(),
        );
        match res {
            Err(Error::IntegrationBlowup { .. }) => {}
            other => panic!("expected blow-up, got {other:?}"),
        }
    }
}
