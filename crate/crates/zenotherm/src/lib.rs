//! Measurement-driven thermodynamics of a two-level system coupled to a
//! bosonic bath.
//!
//! The toolkit simulates a two-level system (TLS) with energy splitting
//! `omega_a` weakly coupled, without the rotating-wave approximation, to a
//! bath of harmonic oscillators, and subjected to brief quantum
//! non-demolition measurements of its energy states. Frequent measurements
//! reset the system-bath correlation clock and expose the short-time,
//! non-Markovian relaxation rates, producing Zeno heating, oscillatory-Zeno
//! cooling, and transient negative entropy production.
//!
//! Three propagation backends cross-validate each other:
//!
//! - [`master_eq`]: second-order population rate equations with
//!   time-dependent rates `R_e(t)`, `R_g(t)` evaluated by oscillation-aware
//!   quadrature over the bath coupling spectrum.
//! - [`two_quanta`]: the truncated two-excitation wavefunction hierarchy on
//!   a discretized bath, supporting finite-duration detector pulses and
//!   detector-branch bookkeeping.
//! - [`exact`]: brute-force unitary propagation of the full
//!   TLS + discrete-bath (+ detector) Hamiltonian on a truncated Fock
//!   space; the oracle every other backend is checked against.
//!
//! Units: `hbar = 1` and the TLS splitting `omega_a = 1` define the unit
//! system. All times are in `1/omega_a`, frequencies in `omega_a`, and
//! temperatures are quoted either as inverse temperature `beta` (units
//! `1/omega_a`) or as `alpha = 1/(beta * omega_a)`.

pub mod bath;
pub mod config;
pub mod error;
pub mod exact;
pub mod master_eq;
pub mod ode;
pub mod output;
pub mod quad;
pub mod rates;
pub mod runner;
pub mod schedule;
pub mod sweep;
pub mod thermo;
pub mod trajectory;
pub mod two_quanta;

pub use bath::{bose_occupation, DiscreteBath, SpectralDensity, SpectralShape, ThermalSpectrum};
pub use error::Error;
pub use rates::{golden_rule, relaxation_rates, zeno_slope, RatePair, RateTable};
pub use schedule::{EventKind, MeasurementPulse, MeasurementSchedule, ScheduleEvent};
pub use trajectory::{Trajectory, TrajectorySample};
