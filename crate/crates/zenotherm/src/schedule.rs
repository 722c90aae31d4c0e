//! Measurement schedules and the finite-duration detector pulse profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a measurement event couples the detector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Instantaneous CNOT; `tau = 0`.
    Impulsive,
    /// Smooth pulse of duration `tau`; only honored by the two-quanta and
    /// exact backends, the master-equation backend demotes it to impulsive
    /// with a warning.
    Finite,
}

/// One measurement of the TLS energy states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleEvent {
    /// Absolute event time (pulse center for finite events).
    pub t: f64,
    /// Pulse duration; 0 for impulsive events.
    pub tau: f64,
    pub kind: EventKind,
}

/// Ordered list of measurement events.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasurementSchedule {
    events: Vec<ScheduleEvent>,
}

impl MeasurementSchedule {
    /// Build a schedule, enforcing strictly increasing times and the
    /// `tau`/`kind` consistency rules.
    pub fn new(events: Vec<ScheduleEvent>) -> Result<Self> {
        for pair in events.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::Config(format!(
                    "schedule times must be strictly increasing: {} then {}",
                    pair[0].t, pair[1].t
                )));
            }
        }
        for ev in &events {
            match ev.kind {
                EventKind::Impulsive if ev.tau != 0.0 => {
                    return Err(Error::Config(format!(
                        "impulsive event at t = {} must have tau = 0, got {}",
                        ev.t, ev.tau
                    )));
                }
                EventKind::Finite if !(ev.tau > 0.0) => {
                    return Err(Error::Config(format!(
                        "finite event at t = {} must have tau > 0, got {}",
                        ev.t, ev.tau
                    )));
                }
                _ => {}
            }
            if !ev.t.is_finite() {
                return Err(Error::Config("schedule times must be finite".into()));
            }
        }
        Ok(Self { events })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn impulsive_at(times: &[f64]) -> Result<Self> {
        Self::new(
            times
                .iter()
                .map(|&t| ScheduleEvent { t, tau: 0.0, kind: EventKind::Impulsive })
                .collect(),
        )
    }

    pub fn finite_at(times: &[f64], tau: f64) -> Result<Self> {
        Self::new(
            times
                .iter()
                .map(|&t| ScheduleEvent { t, tau, kind: EventKind::Finite })
                .collect(),
        )
    }

    pub fn events(&self) -> &[ScheduleEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Events with `t <= t_end`; later events are legal but inert (the CLI
    /// warns about them).
    pub fn events_within(&self, t_end: f64) -> &[ScheduleEvent] {
        let n = self.events.partition_point(|ev| ev.t <= t_end);
        &self.events[..n]
    }
}

/// Finite-duration detector pulse centered at `t_center`.
///
/// The full pulse area is `-pi/2`, which makes the generated conditional
/// detector rotation a CNOT in the impulsive limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementPulse {
    pub t_center: f64,
    pub tau: f64,
}

impl MeasurementPulse {
    pub fn new(t_center: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::Config(format!("pulse duration must be > 0, got {tau}")));
        }
        Ok(Self { t_center, tau })
    }

    /// Integration window `[t_center - half, t_center + half]` outside of
    /// which the profile is numerically negligible.
    pub fn window(&self, half_width_in_tau: f64) -> (f64, f64) {
        (
            self.t_center - half_width_in_tau * self.tau,
            self.t_center + half_width_in_tau * self.tau,
        )
    }

    /// Exact integral of the profile over `[t0, t1]`.
    pub fn area(&self, t0: f64, t1: f64) -> f64 {
        let x0 = (t0 - self.t_center) / self.tau;
        let x1 = (t1 - self.t_center) / self.tau;
        -std::f64::consts::FRAC_PI_4 * (x1.tanh() - x0.tanh())
    }
}

/// Smooth coupling profile `h(t) = pi/(4 tau) * (tanh^2((t - t_k)/tau) - 1)`.
pub fn pulse_profile(p: &MeasurementPulse, t: f64) -> f64 {
    let x = (t - p.t_center) / p.tau;
    let th = x.tanh();
    std::f64::consts::FRAC_PI_4 / p.tau * (th * th - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn pulse_extremum_at_center() {
        let p = MeasurementPulse::new(5.0, 0.11).unwrap();
        let at_center = pulse_profile(&p, 5.0);
        assert!((at_center + std::f64::consts::FRAC_PI_4 / 0.11).abs() < 1e-14);
        assert!(pulse_profile(&p, 4.9) > at_center);
    }

    #[test]
    fn pulse_vanishes_far_from_center() {
        let p = MeasurementPulse::new(0.0, 0.2).unwrap();
        assert!(pulse_profile(&p, 5.0).abs() < 1e-15);
        assert!(pulse_profile(&p, -5.0).abs() < 1e-15);
    }

    #[test]
    fn pulse_area_is_minus_half_pi() {
        let p = MeasurementPulse::new(0.0, 0.37).unwrap();
        let r = quad::adaptive_interval(
            &|t| pulse_profile(&p, t),
            -20.0 * p.tau,
            20.0 * p.tau,
            1e-10,
            10_000,
        )
        .unwrap();
        assert!((r.value + std::f64::consts::FRAC_PI_2).abs() < 1e-6, "area {}", r.value);
        // Closed-form area agrees with the quadrature.
        let exact = p.area(-20.0 * p.tau, 20.0 * p.tau);
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn schedule_rejects_unordered_times() {
        assert!(MeasurementSchedule::impulsive_at(&[1.0, 1.0]).is_err());
        assert!(MeasurementSchedule::impulsive_at(&[2.0, 1.0]).is_err());
        assert!(MeasurementSchedule::impulsive_at(&[1.0, 2.0]).is_ok());
    }

    #[test]
    fn schedule_kind_consistency() {
        let bad = MeasurementSchedule::new(vec![ScheduleEvent {
            t: 1.0,
            tau: 0.5,
            kind: EventKind::Impulsive,
        }]);
        assert!(bad.is_err());
        let bad = MeasurementSchedule::new(vec![ScheduleEvent {
            t: 1.0,
            tau: 0.0,
            kind: EventKind::Finite,
        }]);
        assert!(bad.is_err());
    }

    #[test]
    fn events_within_cutoff() {
        let s = MeasurementSchedule::impulsive_at(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.events_within(2.5).len(), 2);
        assert_eq!(s.events_within(0.5).len(), 0);
    }
}
