//! One-trial certificates of `J_{0,ρ} < 0` from the rescaled family `u_{β,ρ}`.

use crate::analysis::beta::{beta_window, trial_exponent, Regime};
use crate::energy::{self, EnergyBreakdown, Params};
use crate::error::{invalid, Result};
use crate::grid::{grad_norm_sq, lp_norm_pow, mass_sq, Grid};
use crate::rescale::{rescale, sample, Profile};

/// Trial energy of `u_{β,ρ}` is
/// `ρ^{2−2β}·½T + ρ^{4−β}·¼D − ρ^e·P/p` with `T = ‖∇u‖²`, `D = D_0(u)`, `P = ‖u‖_p^p` of the
/// unit-mass trial and `e` the [`trial_exponent`]. Bounding the two positive powers by the
/// dominant one gives a sign certificate on one side of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialThreshold {
    pub regime: Regime,
    pub p: f64,
    pub beta: f64,
    /// Power gap between the `L^p` term and the dominant positive term.
    pub alpha: f64,
    pub exponent: f64,
    pub kinetic: f64,
    pub coupling: f64,
    pub lp: f64,
    /// Root of the bracketed trial bound.
    pub r: f64,
}

impl TrialThreshold {
    /// Whether `J_0(u_{β,ρ}) < 0` is certified at `rho`: `ρ < min(R, 1)` for small ρ,
    /// `ρ > max(R, 1)` for large ρ.
    pub fn certifies(&self, rho: f64) -> bool {
        match self.regime {
            Regime::SmallRho => rho < self.r.min(1.0),
            Regime::LargeRho => rho > self.r.max(1.0),
        }
    }

    /// Certified boundary `min(R, 1)` or `max(R, 1)`.
    pub fn boundary(&self) -> f64 {
        match self.regime {
            Regime::SmallRho => self.r.min(1.0),
            Regime::LargeRho => self.r.max(1.0),
        }
    }

    /// The trial energy from the three unit-mass integrals, exact for the continuum profile.
    pub fn trial_energy(&self, rho: f64) -> f64 {
        let b = self.beta;
        rho.powf(2.0 - 2.0 * b) * 0.5 * self.kinetic + rho.powf(4.0 - b) * 0.25 * self.coupling
            - rho.powf(self.exponent) * self.lp / self.p
    }
}

/// Threshold for the unit-mass trial `pr` sampled on `grid`.
pub fn trial_threshold(grid: &Grid, pr: &Profile, p: f64, beta: f64, regime: Regime) -> Result<TrialThreshold> {
    let w = beta_window(p, regime)?;
    if !w.contains(beta) {
        return Err(invalid(format!(
            "beta = {beta} is not inside the open {} window ({}, {}) at p = {p}",
            regime.name(),
            w.lower,
            w.upper
        )));
    }
    let u = sample(grid, pr)?;
    let m = mass_sq(&u).sqrt();
    if (m - 1.0).abs() > 1e-8 {
        return Err(invalid(format!(
            "trial profile must have unit mass, sampled mass is {m}"
        )));
    }
    let kinetic = grad_norm_sq(&u);
    let coupling = energy::coupling(grid, &u, 0.0)?;
    let lp = lp_norm_pow(&u, p)?;
    let e = trial_exponent(p, beta);
    let kin = 2.0 - 2.0 * beta;
    let nl = 4.0 - beta;
    let positive = 0.5 * kinetic + 0.25 * coupling;
    let negative = lp / p;
    let (alpha, r) = match regime {
        Regime::SmallRho => {
            let alpha = kin.min(nl) - e;
            (alpha, (negative / positive).powf(1.0 / alpha))
        }
        Regime::LargeRho => {
            let alpha = e - kin.max(nl);
            (alpha, (positive / negative).powf(1.0 / alpha))
        }
    };
    Ok(TrialThreshold {
        regime,
        p,
        beta,
        alpha,
        exponent: e,
        kinetic,
        coupling,
        lp,
        r,
    })
}

/// Narrowest rescaled trial, in cells, that [`trial_energy_on_grid`] will sample.
pub const MIN_TRIAL_WIDTH_CELLS: f64 = 2.0;

/// `J_a(u_{β,ρ})` evaluated on `grid` from the analytically rescaled profile.
///
/// Errors when the rescaled profile is narrower than [`MIN_TRIAL_WIDTH_CELLS`] cells or too wide
/// for the box.
pub fn trial_energy_on_grid(grid: &Grid, pr: &Profile, beta: f64, rho: f64, a: f64, p: f64) -> Result<EnergyBreakdown> {
    let scaled = rescale(pr, beta, rho)?;
    if scaled.width() < MIN_TRIAL_WIDTH_CELLS * grid.dx() {
        return Err(invalid(format!(
            "rescaled trial of width {:e} is unresolved at dx = {}",
            scaled.width(),
            grid.dx()
        )));
    }
    let u = sample(grid, &scaled)?;
    let params = Params::new(a, rho, p)?;
    energy::energy(grid, &u, &params)
}
