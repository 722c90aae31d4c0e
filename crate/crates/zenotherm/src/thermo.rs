//! Thermodynamic observables: relative entropy, its negative rate of
//! change `sigma(t)`, and the effective spin temperature.
//!
//! `sigma` coincides with the entropy production rate only in the Markovian
//! regime; in the non-Markov windows probed by frequent measurements it can
//! go negative, which is the anomaly this toolkit exists to reproduce.

use crate::trajectory::Trajectory;

/// Entropy diagnostics at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyRecord {
    pub t: f64,
    /// `S(rho_S || rho_0)` in nats; nonnegative, `+inf` on mismatched
    /// support.
    pub rel_entropy: f64,
    /// `-d/dt S(rho_S || rho_0)`; may be negative.
    pub sigma: f64,
    /// Inverse spin temperature `ln(rho_gg/rho_ee)/omega_a`.
    pub spin_beta: f64,
}

/// Relative entropy of a diagonal TLS state to a reference diagonal state,
/// `rho_ee ln(rho_ee/rho0_ee) + rho_gg ln(rho_gg/rho0_gg)`, with the
/// `0 ln 0 = 0` convention. Mismatched support yields `+inf`.
pub fn relative_entropy(rho_ee: f64, rho0_ee: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&rho_ee) && (0.0..=1.0).contains(&rho0_ee));
    let term = |p: f64, q: f64| {
        if p == 0.0 {
            0.0
        } else if q == 0.0 {
            f64::INFINITY
        } else {
            p * (p / q).ln()
        }
    };
    term(rho_ee, rho0_ee) + term(1.0 - rho_ee, 1.0 - rho0_ee)
}

/// Pointwise `sigma = -rho_dot * ln[rho(1-rho0) / (rho0(1-rho))]`.
///
/// Boundary populations give `+-inf`, which is legal output, not an error.
pub fn sigma_pointwise(rho_ee: f64, rho_dot: f64, rho0_ee: f64) -> f64 {
    if rho_dot == 0.0 {
        return 0.0;
    }
    let log_ratio = (rho_ee / (1.0 - rho_ee)).ln() - (rho0_ee / (1.0 - rho0_ee)).ln();
    -rho_dot * log_ratio
}

/// Inverse spin temperature `beta_spin = ln(rho_gg/rho_ee)/omega_a`.
///
/// `+inf` at `rho_ee = 0`, zero at `rho_ee = 1/2`, negative under
/// population inversion, `-inf` at `rho_ee = 1`.
pub fn spin_temperature(rho_ee: f64, omega_a: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&rho_ee));
    ((1.0 - rho_ee) / rho_ee).ln() / omega_a
}

/// Where the `rho_dot` entering `sigma` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoDotSource {
    /// Analytic right-hand side `R_g(1-rho) - R_e*rho` from the sampled
    /// rate columns (master-equation trajectories). Avoids differentiation
    /// noise masking sign changes.
    FromRates,
    /// Centered differences on the sampled populations, one-sided at
    /// segment boundaries; used for backends without rate columns.
    CenteredDifference,
}

/// Fill the `sigma`, `rel_entropy`, and `spin_beta` columns of a
/// trajectory in place, relative to the reference population `rho0_ee`.
pub fn annotate(traj: &mut Trajectory, rho0_ee: f64, omega_a: f64, source: RhoDotSource) {
    let n = traj.samples.len();
    // Event times split the series into smooth segments; centered
    // differences must not straddle a measurement discontinuity in
    // rho_dot.
    let event_times: Vec<f64> = traj.events.iter().map(|e| e.t).collect();
    let same_segment = |t0: f64, t1: f64| {
        !event_times.iter().any(|&te| te > t0 + 1e-15 && te < t1 - 1e-15)
    };

    for i in 0..n {
        let s = traj.samples[i];
        let rho_dot = match source {
            RhoDotSource::FromRates => s.r_g * (1.0 - s.rho_ee) - s.r_e * s.rho_ee,
            RhoDotSource::CenteredDifference => {
                let lo = if i > 0 && same_segment(traj.samples[i - 1].t, s.t) { i - 1 } else { i };
                let hi = if i + 1 < n && same_segment(s.t, traj.samples[i + 1].t) {
                    i + 1
                } else {
                    i
                };
                if lo == hi {
                    f64::NAN
                } else {
                    (traj.samples[hi].rho_ee - traj.samples[lo].rho_ee)
                        / (traj.samples[hi].t - traj.samples[lo].t)
                }
            }
        };
        let s = &mut traj.samples[i];
        s.rel_entropy = relative_entropy(s.rho_ee, rho0_ee);
        s.sigma = sigma_pointwise(s.rho_ee, rho_dot, rho0_ee);
        s.spin_beta = spin_temperature(s.rho_ee, omega_a);
    }
}
