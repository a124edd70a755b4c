//! The energy `J_a`, its terms, its `L²` gradient and the Lagrange multiplier.

use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::fft::{spectral, PaddedConvolver};
use crate::grid::{lp_norm_pow, mass_sq, neumaier_sum, Field, Grid};
use crate::kernels::{self, KernelKind, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Screening length; `0` selects the Coulomb kernel.
    pub a: f64,
    /// Target mass `‖u‖₂`.
    pub rho: f64,
    pub p: f64,
    /// Strength `q` of the nonlocal term `(q/4) D_a`; `1` for the physical system, `0` for NLS.
    pub coupling: f64,
}

impl Params {
    pub fn new(a: f64, rho: f64, p: f64) -> Result<Params> {
        Params {
            a,
            rho,
            p,
            coupling: 1.0,
        }
        .validated()
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Params> {
        Params { coupling, ..self }.validated()
    }

    pub fn validated(self) -> Result<Params> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(invalid(format!("a must be >= 0, got {}", self.a)));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(invalid(format!("rho must be > 0, got {}", self.rho)));
        }
        if !(self.p > 2.0 && self.p < 10.0 / 3.0) {
            return Err(invalid(format!("p must lie in ]2,10/3[, got {}", self.p)));
        }
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return Err(invalid(format!("coupling must be >= 0, got {}", self.coupling)));
        }
        Ok(self)
    }

    /// Solver targets additionally exclude `p = 3`.
    pub fn check_solver_target(&self) -> Result<()> {
        if self.p == 3.0 {
            return Err(invalid("p ∈ ]2,10/3[∖{3} is required for solver targets, got p = 3"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    /// `½‖∇u‖²`.
    pub kinetic: f64,
    /// `(q/4) D_a(u)`.
    pub nonlocal: f64,
    /// `(1/p)‖u‖_p^p`.
    pub potential: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn assemble(kinetic: f64, nonlocal: f64, potential: f64) -> EnergyBreakdown {
        EnergyBreakdown {
            kinetic,
            nonlocal,
            potential,
            total: kinetic + nonlocal - potential,
        }
    }
}

/// `φ_a^u = u² ∗ κ_a`.
pub fn solve_phi(grid: &Grid, u: &Field, a: f64) -> Result<Field> {
    grid.check_same(u.grid())?;
    let conv = kernels::convolver(grid, &KernelSpec::potential(check_a(a)?, grid)?)?;
    Ok(Field::from_vec_unchecked(grid, conv.convolve(&squares(u))))
}

/// `D_a(u) = ∫ φ_a^u u²`.
pub fn coupling(grid: &Grid, u: &Field, a: f64) -> Result<f64> {
    let phi = solve_phi(grid, u, a)?;
    Ok(pair(&phi, u))
}

/// `E_a(u) = ∫∫ e^{−|x−y|/a} u(x)² u(y)²`.
pub fn exp_coupling(grid: &Grid, u: &Field, a: f64) -> Result<f64> {
    grid.check_same(u.grid())?;
    if !(a > 0.0) {
        return Err(invalid(format!("exponential coupling needs a > 0, got {a}")));
    }
    let conv = kernels::convolver(grid, &KernelSpec::for_grid(KernelKind::PureExponential, a, grid)?)?;
    let w = Field::from_vec_unchecked(grid, conv.convolve(&squares(u)));
    Ok(pair(&w, u))
}

pub fn energy(grid: &Grid, u: &Field, params: &Params) -> Result<EnergyBreakdown> {
    grid.check_same(u.grid())?;
    Ok(EnergyModel::new(grid, params)?.evaluate(u.values()).breakdown)
}

/// `−Δu + q φ_a^u u − |u|^{p−2} u`.
pub fn gradient(grid: &Grid, u: &Field, params: &Params) -> Result<Field> {
    grid.check_same(u.grid())?;
    let model = EnergyModel::new(grid, params)?;
    let ev = model.evaluate(u.values());
    Ok(Field::from_vec_unchecked(grid, model.gradient(u.values(), &ev)))
}

/// `ω = (‖u‖_p^p − ‖∇u‖² − q D_a(u)) / ‖u‖₂²`.
pub fn multiplier(grid: &Grid, u: &Field, params: &Params) -> Result<f64> {
    grid.check_same(u.grid())?;
    let m2 = mass_sq(u);
    if m2 == 0.0 {
        return Err(invalid("multiplier of the zero field is undefined"));
    }
    let e = energy(grid, u, params)?;
    Ok(multiplier_from(&e, params.p, m2))
}

pub(crate) fn multiplier_from(e: &EnergyBreakdown, p: f64, mass_sq: f64) -> f64 {
    (p * e.potential - 2.0 * e.kinetic - 4.0 * e.nonlocal) / mass_sq
}

fn check_a(a: f64) -> Result<f64> {
    if a >= 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(invalid(format!("a must be >= 0, got {a}")))
    }
}

fn squares(u: &Field) -> Vec<f64> {
    u.values().iter().map(|v| v * v).collect()
}

/// `∫ w u²`.
fn pair(w: &Field, u: &Field) -> f64 {
    u.grid().cell_volume() * neumaier_sum(w.values().iter().zip(u.values()).map(|(w, u)| w * u * u))
}

/// Energy and potential of one state.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub breakdown: EnergyBreakdown,
    /// `φ_a^u`, empty when the coupling is zero.
    pub phi: Vec<f64>,
}

/// Energy evaluator bound to one grid and parameter set, reusing transforms across calls.
#[derive(Clone)]
pub struct EnergyModel {
    grid: Grid,
    params: Params,
    conv: Option<Arc<PaddedConvolver>>,
}

impl EnergyModel {
    pub fn new(grid: &Grid, params: &Params) -> Result<EnergyModel> {
        let params = params.validated()?;
        let conv = if params.coupling != 0.0 {
            Some(kernels::convolver(grid, &KernelSpec::potential(params.a, grid)?)?)
        } else {
            None
        };
        Ok(EnergyModel {
            grid: grid.clone(),
            params,
            conv,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn evaluate(&self, u: &[f64]) -> Evaluation {
        let dv = self.grid.cell_volume();
        let kinetic = 0.5 * spectral(&self.grid).grad_norm_sq(u);
        let p = self.params.p;
        let potential = dv * neumaier_sum(u.iter().map(|v| v.abs().powf(p))) / p;
        let (nonlocal, phi) = match &self.conv {
            Some(conv) => {
                let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
                let phi = conv.convolve(&sq);
                let d = dv * neumaier_sum(phi.iter().zip(&sq).map(|(a, b)| a * b));
                (0.25 * self.params.coupling * d, phi)
            }
            None => (0.0, Vec::new()),
        };
        Evaluation {
            breakdown: EnergyBreakdown::assemble(kinetic, nonlocal, potential),
            phi,
        }
    }

    /// `L²` gradient at `u`, given its evaluation.
    pub fn gradient(&self, u: &[f64], ev: &Evaluation) -> Vec<f64> {
        let mut g = spectral(&self.grid).apply(u, |k2| k2);
        let pm2 = self.params.p - 2.0;
        let q = self.params.coupling;
        for (i, gi) in g.iter_mut().enumerate() {
            let v = u[i];
            let local = if v == 0.0 { 0.0 } else { v.abs().powf(pm2) * v };
            let nl = if ev.phi.is_empty() { 0.0 } else { q * ev.phi[i] * v };
            *gi += nl - local;
        }
        g
    }

    pub fn multiplier(&self, ev: &Evaluation, mass_sq: f64) -> f64 {
        multiplier_from(&ev.breakdown, self.params.p, mass_sq)
    }
}

/// Relative `L²` residual of `(−Δ + a²Δ²) φ_a^u = 4π u²` over the box, with the operator
/// applied to the padded spectral representation of `φ`.
pub fn pde_residual(grid: &Grid, u: &Field, a: f64) -> Result<f64> {
    grid.check_same(u.grid())?;
    let spec = KernelSpec::potential(check_a(a)?, grid)?;
    let table = kernels::multiplier_table(grid, &spec)?;
    let unit = std::f64::consts::PI / (2.0 * grid.half_width());
    let applied = PaddedConvolver::new(grid.n(), |s| {
        let k2 = unit * unit * s as f64;
        (k2 + a * a * k2 * k2) * table.get(s).expect("table covers the padded grid")
    });
    let sq = squares(u);
    let lhs = applied.convolve(&sq);
    let four_pi = 4.0 * std::f64::consts::PI;
    let num = neumaier_sum(lhs.iter().zip(&sq).map(|(l, s)| (l - four_pi * s).powi(2)));
    let den = neumaier_sum(sq.iter().map(|s| (four_pi * s).powi(2)));
    if den == 0.0 {
        return Err(invalid("residual of the zero field is undefined"));
    }
    Ok((num / den).sqrt())
}

/// Largest `D_0(u) / ‖u‖_{12/5}⁴` over `family`, the measured stand-in for the
/// Hardy–Littlewood–Sobolev constant.
pub fn hls_constant_estimate(grid: &Grid, family: &[Field]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for u in family {
        let d0 = coupling(grid, u, 0.0)?;
        let n = lp_norm_pow(u, 12.0 / 5.0)?.powf(5.0 / 3.0);
        if n > 0.0 {
            best = best.max(d0 / n);
        }
    }
    Ok(best)
}
