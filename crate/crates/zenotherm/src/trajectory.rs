//! Time-series output container shared by all propagation backends.

use std::collections::BTreeMap;

use crate::exact::EnergyBreakdown;
use crate::schedule::EventKind;

/// One output sample. Rate columns hold NaN for backends without
/// rate-equation structure (two-quanta, exact); entropy columns are filled
/// by a [`crate::thermo`] post-pass.
#[derive(Clone, Copy, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub rho_ee: f64,
    pub r_e: f64,
    pub r_g: f64,
    pub sigma: f64,
    pub rel_entropy: f64,
    pub spin_beta: f64,
    pub energy: Option<EnergyBreakdown>,
}

impl TrajectorySample {
    pub fn new(t: f64, rho_ee: f64) -> Self {
        Self {
            t,
            rho_ee,
            r_e: f64::NAN,
            r_g: f64::NAN,
            sigma: f64::NAN,
            rel_entropy: f64::NAN,
            spin_beta: f64::NAN,
            energy: None,
        }
    }
}

/// Measurement marker attached to a trajectory.
#[derive(Clone, Copy, Debug)]
pub struct EventMarker {
    pub t: f64,
    pub tau: f64,
    pub kind: EventKind,
}

/// Sampled populations, rates, and entropy diagnostics with measurement
/// markers and a full parameter echo.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub events: Vec<EventMarker>,
    /// Parameter echo and backend warnings, ordered for deterministic
    /// output.
    pub metadata: BTreeMap<String, String>,
}

impl Trajectory {
    /// Assert the container invariants: strictly increasing sample times and
    /// populations inside `[0, 1]` (up to integrator round-off).
    pub fn validate(&self) -> crate::error::Result<()> {
        for w in self.samples.windows(2) {
            if w[1].t <= w[0].t {
                return Err(crate::error::Error::Numeric(format!(
                    "sample times not strictly increasing near t = {}",
                    w[0].t
                )));
            }
        }
        for s in &self.samples {
            if !(-1e-9..=1.0 + 1e-9).contains(&s.rho_ee) {
                return Err(crate::error::Error::IntegrationBlowup { rho_ee: s.rho_ee, t: s.t });
            }
        }
        Ok(())
    }

    /// Linear interpolation of `rho_ee` at time `t` (clamped to the sampled
    /// range).
    pub fn rho_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        assert!(!s.is_empty(), "empty trajectory");
        if t <= s[0].t {
            return s[0].rho_ee;
        }
        if t >= s[s.len() - 1].t {
            return s[s.len() - 1].rho_ee;
        }
        let i = s.partition_point(|x| x.t < t);
        let (a, b) = (&s[i - 1], &s[i]);
        let w = (t - a.t) / (b.t - a.t);
        a.rho_ee * (1.0 - w) + b.rho_ee * w
    }

    /// Maximum pointwise `|rho_ee|` difference against another trajectory,
    /// evaluated on this trajectory's sample times restricted to
    /// `[t0, t1]`.
    pub fn max_rho_diff(&self, other: &Trajectory, t0: f64, t1: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.t >= t0 && s.t <= t1)
            .map(|s| (s.rho_ee - other.rho_at(s.t)).abs())
            .fold(0.0, f64::max)
    }

    /// Extremal excursions `(max rise, max drop)` of `rho_ee` relative to
    /// the first sample.
    pub fn excursions(&self) -> (f64, f64) {
        let r0 = self.samples.first().map_or(0.0, |s| s.rho_ee);
        let mut up: f64 = 0.0;
        let mut down: f64 = 0.0;
        for s in &self.samples {
            up = up.max(s.rho_ee - r0);
            down = down.max(r0 - s.rho_ee);
        }
        (up, down)
    }
}
