//! Bath coupling spectra and their discretization into finite mode sets.
//!
//! The zero-temperature coupling spectrum `G_0(omega)` is a parametric peak
//! (Lorentzian or Gaussian) centered at `omega0` with width `1/t_c`,
//! truncated to positive frequencies. Finite temperature dresses it with
//! Bose occupation factors,
//!
//! ```text
//! G_T(omega) = (n_T(omega) + 1) G_0(omega) + n_T(-omega) G_0(-omega),
//! ```
//!
//! so that `G_T` has support on both signs of `omega` and satisfies detailed
//! balance `G_T(-omega) = exp(-beta*omega) * G_T(omega)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parametric family for the zero-temperature spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralShape {
    Lorentzian,
    Gaussian,
}

/// Zero-temperature bath coupling spectrum `G_0(omega)`.
///
/// `G_0` is exactly zero for `omega <= 0` (bath oscillators have positive
/// frequencies) and integrates to `~strength^2` over the positive axis. The
/// peak sits at `omega0`; `width` is the Lorentzian half-width at half
/// maximum (or the Gaussian sigma) and equals `1/t_c` for a bath with
/// correlation time `t_c`.
///
/// The parametric shape is multiplied by a short-range rolloff
/// `1 - exp(-(omega/omega_r)^2)` with `omega_r = min(width, omega0/8)`.
/// Without it the raw truncated shape is nonzero at `omega = 0+`, and the
/// Bose factor's `1/(beta*omega)` growth makes `integral G_T` diverge
/// logarithmically at any finite temperature. The rolloff is invisible at
/// the peak (suppressed by at least `exp(-64)`) and keeps `G_0(0+) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub shape: SpectralShape,
    /// Peak position, units of `omega_a`.
    pub omega0: f64,
    /// Spectral width `1/t_c`.
    pub width: f64,
    /// Dimensionless overall coupling scale `gamma`; `kappa ~ gamma`.
    pub strength: f64,
}

impl SpectralDensity {
    pub fn new(shape: SpectralShape, omega0: f64, width: f64, strength: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::Config(format!("bath omega0 must be > 0, got {omega0}")));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Config(format!("bath width must be > 0, got {width}")));
        }
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::Config(format!("bath strength must be >= 0, got {strength}")));
        }
        Ok(Self { shape, omega0, width, strength })
    }

    pub fn lorentzian(omega0: f64, width: f64, strength: f64) -> Result<Self> {
        Self::new(SpectralShape::Lorentzian, omega0, width, strength)
    }

    pub fn gaussian(omega0: f64, width: f64, strength: f64) -> Result<Self> {
        Self::new(SpectralShape::Gaussian, omega0, width, strength)
    }

    /// Low-frequency rolloff scale.
    fn omega_rolloff(&self) -> f64 {
        self.width.min(self.omega0 / 8.0)
    }

    /// Frequency beyond which the spectrum is negligible; used as the
    /// default outer limit for quadrature windows and mode grids.
    pub fn support_hint(&self) -> f64 {
        match self.shape {
            SpectralShape::Lorentzian => self.omega0 + 50.0 * self.width,
            SpectralShape::Gaussian => self.omega0 + 12.0 * self.width,
        }
    }
}

/// Evaluate `G_0(omega)`; exactly 0 for `omega <= 0`.
pub fn eval_g0(sd: &SpectralDensity, omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let g2 = sd.strength * sd.strength;
    let x = omega - sd.omega0;
    let shape = match sd.shape {
        SpectralShape::Lorentzian => {
            let w = sd.width;
            g2 * (w / std::f64::consts::PI) / (x * x + w * w)
        }
        SpectralShape::Gaussian => {
            let w = sd.width;
            g2 / (w * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * (x / w) * (x / w)).exp()
        }
    };
    // 1 - exp(-r^2) via expm1 to stay accurate for small r.
    let r = omega / sd.omega_rolloff();
    shape * -(-(r * r)).exp_m1()
}

/// Bose-Einstein occupation `n_T(omega) = 1/(exp(beta*omega) - 1)`.
///
/// `beta = f64::INFINITY` is the zero-temperature sentinel and yields
/// exactly 0. Panics for `omega <= 0`; negative-frequency occupations only
/// ever appear through the `G_T` identity, never directly.
pub fn bose_occupation(omega: f64, beta: f64) -> f64 {
    assert!(omega > 0.0, "bose_occupation requires omega > 0, got {omega}");
    assert!(beta > 0.0, "bose_occupation requires beta > 0, got {beta}");
    if beta.is_infinite() {
        return 0.0;
    }
    1.0 / (beta * omega).exp_m1()
}

/// Temperature-dressed coupling spectrum `G_T(omega)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalSpectrum {
    pub base: SpectralDensity,
    /// Inverse temperature in units of `1/omega_a`; `f64::INFINITY` is the
    /// zero-temperature sentinel.
    pub beta: f64,
}

impl ThermalSpectrum {
    pub fn new(base: SpectralDensity, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Config(format!(
                "bath beta must be > 0 (f64::INFINITY for zero temperature), got {beta}"
            )));
        }
        Ok(Self { base, beta })
    }

    /// Zero-temperature spectrum wrapper.
    pub fn zero_temperature(base: SpectralDensity) -> Self {
        Self { base, beta: f64::INFINITY }
    }

    /// Dimensionless temperature `alpha = 1/(beta * omega_a)` with
    /// `omega_a = 1`.
    pub fn alpha(&self) -> f64 {
        if self.beta.is_infinite() { 0.0 } else { 1.0 / self.beta }
    }
}

/// Evaluate `G_T(omega)`; each term contributes only where its `G_0`
/// argument is positive.
pub fn eval_gt(ts: &ThermalSpectrum, omega: f64) -> f64 {
    let mut total = 0.0;
    if omega > 0.0 {
        let g0 = eval_g0(&ts.base, omega);
        if g0 > 0.0 {
            total += (bose_occupation(omega, ts.beta) + 1.0) * g0;
        }
    } else if omega < 0.0 {
        let g0 = eval_g0(&ts.base, -omega);
        if g0 > 0.0 {
            total += bose_occupation(-omega, ts.beta) * g0;
        }
    }
    total
}

/// Finite set of bath modes sampled from a spectral density.
///
/// Mode frequencies sit at midpoints of a uniform grid over
/// `[omega_min, omega_max]` and couplings obey the Riemann-sum rule
/// `kappa^2 = G_0(omega) * delta`, so `sum kappa^2` converges to
/// `integral G_0` as the mode count grows.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteBath {
    pub omegas: Vec<f64>,
    pub kappas: Vec<f64>,
    /// Grid parameters, recorded for reproducibility.
    pub omega_min: f64,
    pub omega_max: f64,
    pub delta: f64,
}

impl DiscreteBath {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// `sum kappa^2`, the discrete analogue of `integral G_0`.
    pub fn coupling_weight(&self) -> f64 {
        self.kappas.iter().map(|k| k * k).sum()
    }
}

/// Sample `n_modes` bath modes from `sd` on a uniform midpoint grid.
pub fn discretize(
    sd: &SpectralDensity,
    n_modes: usize,
    omega_min: f64,
    omega_max: f64,
) -> Result<DiscreteBath> {
    if n_modes == 0 {
        return Err(Error::Config("discretize requires n_modes >= 1".into()));
    }
    if !(omega_min > 0.0 && omega_min < omega_max && omega_max.is_finite()) {
        return Err(Error::Config(format!(
            "discretize requires 0 < omega_min < omega_max, got [{omega_min}, {omega_max}]"
        )));
    }
    let delta = (omega_max - omega_min) / n_modes as f64;
    let omegas: Vec<f64> = (0..n_modes)
        .map(|i| omega_min + (i as f64 + 0.5) * delta)
        .collect();
    let kappas: Vec<f64> = omegas.iter().map(|&w| (eval_g0(sd, w) * delta).sqrt()).collect();
    Ok(DiscreteBath { omegas, kappas, omega_min, omega_max, delta })
}
