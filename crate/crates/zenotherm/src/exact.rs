//! Exact-propagation oracle (stub).

/// Expectation values of the Hamiltonian parts, units of `hbar * omega_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBreakdown {
    pub h_s: f64,
    pub h_b: f64,
    pub h_sb: f64,
    pub h_tot: f64,
}
