//! Problems rescaled to a reference mass, and the small-mass multiplier limit.
//!
//! With `β = β(p)` and `θ = ρ/μ`, the state `u = v_{β,θ}` has mass `ρ` when `v` has mass `μ`,
//! and `J_a(u) = θ^{2−2β} [½‖∇v‖² + (q'/4) D_{a'}(v) − (1/p)‖v‖_p^p]` with
//! `q' = θ^{2+β}` and `a' = a θ^{−β}`. Multipliers map as `ω = θ^{−2β} ω̃`.

use crate::analysis::beta::{nls_alpha, nls_beta};
use crate::energy::{EnergyBreakdown, EnergyModel, Params};
use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::solve::{gaussian_ansatz_width, minimize_model, nls_ground_state, MinimizeResult, SolverConfig};

/// Coefficients of the rescaled problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaling {
    pub beta: f64,
    pub theta: f64,
    /// Reference mass `μ` of the solved state.
    pub mu: f64,
    /// `q' = θ^{2+β}`.
    pub coupling: f64,
    /// `a' = a θ^{−β}`.
    pub a: f64,
}

impl Rescaling {
    pub fn new(a: f64, rho: f64, p: f64, mu: f64) -> Result<Rescaling> {
        Params::new(a, rho, p)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(invalid(format!("reference mass must be > 0, got {mu}")));
        }
        let beta = nls_beta(p);
        let theta = rho / mu;
        Ok(Rescaling {
            beta,
            theta,
            mu,
            coupling: theta.powf(2.0 + beta),
            a: a * theta.powf(-beta),
        })
    }

    /// Factor `θ^{2−2β}` carried by every energy term.
    pub fn energy_factor(&self) -> f64 {
        self.theta.powf(2.0 - 2.0 * self.beta)
    }

    /// Factor `θ^{−2β}` carried by the multiplier.
    pub fn multiplier_factor(&self) -> f64 {
        self.theta.powf(-2.0 * self.beta)
    }
}

/// A solve in rescaled variables with its physical energy and multiplier.
#[derive(Debug, Clone)]
pub struct RescaledSolve {
    pub scaling: Rescaling,
    pub scaled: MinimizeResult,
    /// Physical energy terms `J_a(u)`.
    pub energy: EnergyBreakdown,
    /// Physical multiplier.
    pub omega: f64,
}

/// Mass whose Gaussian NLS ansatz has width `L/7` on `grid`.
pub fn reference_mass(grid: &Grid, p: f64) -> f64 {
    let target = grid.half_width() / 7.0;
    // σ ∝ μ^{(p−2)/(3p/2−5)}
    let s1 = gaussian_ansatz_width(1.0, p);
    (target / s1).powf((1.5 * p - 5.0) / (p - 2.0))
}

/// Least-energy state at `(a, ρ, p)` computed at mass `mu` in rescaled variables.
pub fn solve_rescaled(grid: &Grid, a: f64, rho: f64, p: f64, mu: f64, config: &SolverConfig) -> Result<RescaledSolve> {
    let scaling = Rescaling::new(a, rho, p, mu)?;
    let params = Params::new(scaling.a, mu, p)?.with_coupling(scaling.coupling)?;
    params.check_solver_target()?;
    let scaled = minimize_model(&EnergyModel::new(grid, &params)?, config)?;
    let f = scaling.energy_factor();
    let e = scaled.energy;
    let energy = EnergyBreakdown {
        kinetic: f * e.kinetic,
        nonlocal: f * e.nonlocal,
        potential: f * e.potential,
        total: f * e.total,
    };
    let omega = scaling.multiplier_factor() * scaled.omega;
    Ok(RescaledSolve {
        scaling,
        scaled,
        energy,
        omega,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierRow {
    pub rho: f64,
    /// Physical multiplier `ω_ρ`.
    pub omega: f64,
    /// Multiplier `ω̃_ρ` of the rescaled problem.
    pub omega_scaled: f64,
    /// `Ω` mapped to mass `ρ`: `θ^{−2β} Ω̃`.
    pub reference: f64,
    /// `|ω_ρ − θ^{−2β} Ω̃|`.
    pub deviation: f64,
    /// `|ω̃_ρ − Ω̃|`.
    pub deviation_scaled: f64,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierLimit {
    pub p: f64,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    /// Multiplier `Ω̃` of the NLS ground state of mass `μ`.
    pub omega_limit: f64,
    pub rows: Vec<MultiplierRow>,
    /// Both deviations strictly decrease along the list.
    pub decreasing: bool,
    pub all_positive: bool,
    pub all_converged: bool,
}

/// Multipliers along a decreasing list of masses against the limiting NLS multiplier.
pub fn multiplier_limit(
    grid: &Grid,
    p: f64,
    a: f64,
    rhos: &[f64],
    mu: f64,
    config: &SolverConfig,
) -> Result<MultiplierLimit> {
    if !(p > 2.0 && p < 14.0 / 5.0) {
        return Err(invalid(format!("multiplier limit needs 2 < p < 14/5, got {p}")));
    }
    if rhos.is_empty() || rhos.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(invalid("rhos must be nonempty and strictly decreasing"));
    }
    let limit = nls_ground_state(grid, mu, p, config)?;
    let omega_limit = limit.omega;
    let mut rows = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let s = solve_rescaled(grid, a, rho, p, mu, config)?;
        let reference = s.scaling.multiplier_factor() * omega_limit;
        rows.push(MultiplierRow {
            rho,
            omega: s.omega,
            omega_scaled: s.scaled.omega,
            reference,
            deviation: (s.omega - reference).abs(),
            deviation_scaled: (s.scaled.omega - omega_limit).abs(),
            residual: s.scaled.residual,
            converged: s.scaled.converged,
        });
    }
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].deviation < w[0].deviation && w[1].deviation_scaled < w[0].deviation_scaled);
    Ok(MultiplierLimit {
        p,
        a,
        alpha: nls_alpha(p),
        beta: nls_beta(p),
        mu,
        omega_limit,
        all_positive: rows.iter().all(|r| r.omega > 0.0) && omega_limit > 0.0,
        all_converged: limit.converged && rows.iter().all(|r| r.converged),
        rows,
        decreasing,
    })
}
