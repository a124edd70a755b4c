//! Numerical evidence for the qualitative results: admissible rescaling windows, trial
//! certificates, sweeps in `ρ` and `a`, radial symmetry and the multiplier limit.

pub mod beta;
pub mod identities;
pub mod limit;
pub mod oracle;
pub mod radial;
pub mod sweep;
pub mod threshold;

pub use beta::{beta_window, nls_alpha, nls_beta, scan_window, BetaWindow, Regime};
pub use limit::{multiplier_limit, reference_mass, solve_rescaled, MultiplierLimit, RescaledSolve, Rescaling};
pub use radial::radiality_deviation;
pub use sweep::{sweep_a, sweep_rho, AReport, SweepOptions, SweepRecord, SweepReport};
pub use threshold::{trial_threshold, TrialThreshold};

use crate::solve::HistoryEntry;

/// Smallest `C` with `J(u) ≥ ¼‖u‖_{H¹}² − C` along a descent history.
pub fn coercivity_offset(history: &[HistoryEntry]) -> f64 {
    history
        .iter()
        .map(|h| 0.25 * h.h1_sq - h.energy)
        .fold(f64::NEG_INFINITY, f64::max)
}
