//! Constrained minimization of `J_a` on the sphere `‖u‖₂ = ρ`.
//!
//! [`minimize`] runs projected gradient descent with an optional spectral Sobolev
//! preconditioner `(c + |k|²)^{-1}` and Armijo backtracking; the sphere retraction is
//! renormalization. [`riesz_iterate`] is the unit-step fixed-point map built from the
//! Riesz isomorphism of `−Δ + ω₀`. [`nls_ground_state`] drops the nonlocal term.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{EnergyBreakdown, EnergyModel, Evaluation, Params};
use crate::error::{invalid, Error, Result};
use crate::fft::spectral;
use crate::grid::{mass_sq, neumaier_sum, Field, Grid};
use crate::io;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Centred Gaussian; `None` picks the width minimizing the NLS energy among Gaussians.
    Gaussian {
        sigma: Option<f64>,
    },
    /// Field file written by [`io::write_field`].
    File(PathBuf),
    /// Off-centre Gaussian plus random Gaussian bumps of relative size `amplitude`.
    Perturbed {
        seed: u64,
        amplitude: f64,
    },
    Given(Field),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once the tangential residual `‖g − (⟨g,u⟩/ρ²) u‖₂` is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub precondition: bool,
    /// Shift `c` of the preconditioner `(c + |k|²)^{-1}`.
    pub shift: f64,
    pub step0: f64,
    pub backtrack: f64,
    pub armijo: f64,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iter: 20_000,
            precondition: true,
            shift: 1.0,
            step0: 1.0,
            backtrack: 0.5,
            armijo: 1e-4,
            init: Init::Gaussian { sigma: None },
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(invalid("max_iter must be >= 1"));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(invalid(format!("backtrack must lie in ]0,1[, got {}", self.backtrack)));
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return Err(invalid(format!("armijo must lie in ]0,1[, got {}", self.armijo)));
        }
        if !(self.step0 > 0.0 && self.step0.is_finite()) {
            return Err(invalid(format!("step0 must be > 0, got {}", self.step0)));
        }
        if self.precondition && !(self.shift > 0.0 && self.shift.is_finite()) {
            return Err(invalid(format!("preconditioner shift must be > 0, got {}", self.shift)));
        }
        if let Init::Perturbed { amplitude, .. } = self.init {
            if !(amplitude >= 0.0 && amplitude.is_finite()) {
                return Err(invalid(format!("perturbation amplitude must be >= 0, got {amplitude}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iter: usize,
    pub energy: f64,
    pub residual: f64,
    /// `‖u‖_{H¹}² = ‖∇u‖² + ρ²`.
    pub h1_sq: f64,
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// Final state, recentred by whole-cell shifts so its density's centre of mass is
    /// nearest the origin.
    pub u: Field,
    pub energy: EnergyBreakdown,
    pub omega: f64,
    pub residual: f64,
    pub iters: usize,
    pub history: Vec<HistoryEntry>,
    pub converged: bool,
    /// Largest `‖u‖_{H¹}²` over accepted iterates.
    pub h1_sup: f64,
}

const MAX_STEP: f64 = 1e6;
const MAX_BACKTRACKS: usize = 60;
/// Relative size of the rounding noise in an energy evaluation. Once the predicted decrease
/// falls below it, the energy cannot rank steps and the last Armijo step is reused as a fixed
/// step.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Width of the Gaussian of mass `rho` minimizing `½‖∇u‖² − (1/p)‖u‖_p^p`:
/// `σ = [C_p (p−2)/p · ρ^{p−2}]^{1/(3p/2 − 5)}`, `C_p = π^{−3p/4} (2π/p)^{3/2}`.
pub fn gaussian_ansatz_width(rho: f64, p: f64) -> f64 {
    let c = std::f64::consts::PI.powf(-0.75 * p) * (2.0 * std::f64::consts::PI / p).powf(1.5);
    (c * (p - 2.0) / p * rho.powf(p - 2.0)).powf(1.0 / (1.5 * p - 5.0))
}

fn default_sigma(grid: &Grid, params: &Params) -> f64 {
    gaussian_ansatz_width(params.rho, params.p).clamp(2.0 * grid.dx(), grid.half_width() / 3.0)
}

pub fn initial_state(grid: &Grid, params: &Params, init: &Init) -> Result<Field> {
    let gauss = |sigma: f64, c: [f64; 3]| {
        Field::from_fn(grid, |x, y, z| {
            let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2) + (z - c[2]).powi(2);
            (-0.5 * r2 / (sigma * sigma)).exp()
        })
    };
    let u = match init {
        Init::Gaussian { sigma } => {
            let s = sigma.unwrap_or_else(|| default_sigma(grid, params));
            if !(s > 0.0) {
                return Err(invalid(format!("init sigma must be > 0, got {s}")));
            }
            gauss(s, [0.0; 3])
        }
        Init::File(path) => {
            let (f, _) = io::read_field(path)?;
            grid.check_same(f.grid())?;
            f
        }
        Init::Perturbed { seed, amplitude } => {
            let s = default_sigma(grid, params);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let off = |rng: &mut ChaCha8Rng| rng.gen_range(-0.5..0.5) * s;
            let centre = [off(&mut rng), off(&mut rng), off(&mut rng)];
            let mut u = gauss(s, centre);
            for _ in 0..4 {
                let c = [
                    centre[0] + 2.0 * off(&mut rng),
                    centre[1] + 2.0 * off(&mut rng),
                    centre[2] + 2.0 * off(&mut rng),
                ];
                let w = 0.5 * s;
                let bump = gauss(w, c);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                u = u.axpy(sign * amplitude, &bump)?;
            }
            u.map(f64::abs)
        }
        Init::Given(f) => {
            grid.check_same(f.grid())?;
            f.clone()
        }
    };
    let m = mass_sq(&u).sqrt();
    if !(m > 0.0) {
        return Err(invalid("initial state has zero mass"));
    }
    Ok(u.scaled(params.rho / m))
}

/// Centre of mass of `u²` per axis as a fractional cell index, using the circular mean so
/// states straddling the periodic boundary are handled.
pub fn density_centre(u: &Field) -> [f64; 3] {
    let n = u.grid().n();
    let w: Vec<f64> = u.values().iter().map(|v| v * v).collect();
    let mut out = [0.0; 3];
    for (axis, o) in out.iter_mut().enumerate() {
        let (mut c, mut s) = (Vec::with_capacity(w.len()), Vec::with_capacity(w.len()));
        for (idx, &wi) in w.iter().enumerate() {
            let i = match axis {
                0 => idx / (n * n),
                1 => (idx / n) % n,
                _ => idx % n,
            };
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            c.push(wi * t.cos());
            s.push(wi * t.sin());
        }
        let ang = neumaier_sum(s).atan2(neumaier_sum(c));
        *o = (ang / (2.0 * std::f64::consts::PI) * n as f64).rem_euclid(n as f64);
    }
    out
}

/// Whole-cell roll moving the density centre nearest to sample `(n/2, n/2, n/2)`.
pub fn recentre(u: &Field) -> Field {
    let n = u.grid().n() as f64;
    let c = density_centre(u);
    let shift = c.map(|ci| {
        let d = n / 2.0 - ci;
        (d - n * (d / n).round()).round() as i64
    });
    u.roll(shift)
}

struct State {
    u: Vec<f64>,
    ev: Evaluation,
}

/// Shared descent loop; `step` returns the next accepted state or `None` when stalled.
fn run_loop(
    model: &EnergyModel,
    config: &SolverConfig,
    mut state: State,
    mut step: impl FnMut(&State, &[f64], usize) -> Result<Option<State>>,
) -> Result<MinimizeResult> {
    let grid = model.grid().clone();
    let rho2 = model.params().rho.powi(2);
    let dv = grid.cell_volume();
    let mut history = Vec::new();
    let mut h1_sup: f64 = 0.0;
    let mut converged = false;
    let mut residual;
    let mut iters = 0;
    let mut best_residual = f64::INFINITY;
    loop {
        let j = state.ev.breakdown.total;
        if !j.is_finite() {
            return Err(Error::Diverged {
                iter: iters,
                reason: "non-finite energy".into(),
                history,
            });
        }
        let h1_sq = 2.0 * state.ev.breakdown.kinetic + rho2;
        h1_sup = h1_sup.max(h1_sq);
        let g = model.gradient(&state.u, &state.ev);
        let lam = dv * neumaier_sum(g.iter().zip(&state.u).map(|(a, b)| a * b)) / rho2;
        let r: Vec<f64> = g.iter().zip(&state.u).map(|(g, u)| g - lam * u).collect();
        residual = (dv * neumaier_sum(r.iter().map(|v| v * v))).sqrt();
        history.push(HistoryEntry {
            iter: iters,
            energy: j,
            residual,
            h1_sq,
        });
        if !residual.is_finite() || residual > 1e12 * best_residual.max(config.tol) {
            return Err(Error::Diverged {
                iter: iters,
                reason: format!("residual blew up to {residual:e}"),
                history,
            });
        }
        best_residual = best_residual.min(residual);
        if residual <= config.tol {
            converged = true;
            break;
        }
        if iters >= config.max_iter {
            break;
        }
        match step(&state, &r, iters)? {
            Some(next) => state = next,
            None => break,
        }
        iters += 1;
    }
    let u = recentre(&Field::from_vec_unchecked(&grid, state.u));
    let omega = model.multiplier(&state.ev, mass_sq(&u));
    Ok(MinimizeResult {
        u,
        energy: state.ev.breakdown,
        omega,
        residual,
        iters,
        history,
        converged,
        h1_sup,
    })
}

fn normalize(v: &mut [f64], rho: f64, dv: f64) {
    let m = (dv * neumaier_sum(v.iter().map(|x| x * x))).sqrt();
    let c = rho / m;
    v.iter_mut().for_each(|x| *x *= c);
}

pub fn minimize(grid: &Grid, params: &Params, config: &SolverConfig) -> Result<MinimizeResult> {
    params.check_solver_target()?;
    let model = EnergyModel::new(grid, params)?;
    minimize_model(&model, config)
}

/// [`minimize`] for an already-built model, which may carry a nonstandard coupling.
pub fn minimize_model(model: &EnergyModel, config: &SolverConfig) -> Result<MinimizeResult> {
    config.validate()?;
    let grid = model.grid().clone();
    let params = *model.params();
    let u0 = initial_state(&grid, &params, &config.init)?.into_values();
    let ev = model.evaluate(&u0);
    let spec = spectral(&grid);
    let dv = grid.cell_volume();
    let mut s = config.step0;
    let mut s_good = config.step0;
    let first = State { u: u0, ev };
    run_loop(model, config, first, |state, r, _| {
        let d = if config.precondition {
            spec.apply(r, |k2| 1.0 / (config.shift + k2))
        } else {
            r.to_vec()
        };
        let slope = -dv * neumaier_sum(r.iter().zip(&d).map(|(a, b)| a * b));
        let b = state.ev.breakdown;
        let j = b.total;
        let noise = ROUNDOFF * (b.kinetic + b.nonlocal + b.potential);
        let trial = |step: f64| {
            let mut v: Vec<f64> = state.u.iter().zip(&d).map(|(u, d)| u - step * d).collect();
            normalize(&mut v, params.rho, dv);
            let ev = model.evaluate(&v);
            State { u: v, ev }
        };
        if -slope * s_good <= noise {
            let next = trial(s_good);
            return Ok(next.ev.breakdown.total.is_finite().then_some(next));
        }
        s = (2.0 * s).min(MAX_STEP);
        let mut fallback: Option<(State, f64)> = None;
        for _ in 0..MAX_BACKTRACKS {
            let next = trial(s);
            let jn = next.ev.breakdown.total;
            if jn.is_finite() && jn <= j + config.armijo * s * slope {
                s_good = s;
                return Ok(Some(next));
            }
            if jn.is_finite() && jn <= j + noise && fallback.is_none() {
                fallback = Some((next, s));
            }
            s *= config.backtrack;
        }
        Ok(fallback.map(|(state, step)| {
            s = step;
            state
        }))
    })
}

pub fn riesz_iterate(grid: &Grid, params: &Params, config: &SolverConfig, omega0: f64) -> Result<MinimizeResult> {
    params.check_solver_target()?;
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(invalid(format!(
            "omega0 must be > 0 for -Δ + omega0 to be invertible, got {omega0}"
        )));
    }
    config.validate()?;
    let model = EnergyModel::new(grid, params)?;
    let u0 = initial_state(grid, params, &config.init)?.into_values();
    let ev = model.evaluate(&u0);
    let spec = spectral(grid);
    let dv = grid.cell_volume();
    run_loop(&model, config, State { u: u0, ev }, |state, r, _| {
        let d = spec.apply(r, |k2| 1.0 / (omega0 + k2));
        let mut v: Vec<f64> = state.u.iter().zip(&d).map(|(u, d)| u - d).collect();
        normalize(&mut v, params.rho, dv);
        let ev = model.evaluate(&v);
        Ok(Some(State { u: v, ev }))
    })
}

/// Ground state of `−Δu + Ωu = u|u|^{p−2}` on the sphere of mass `rho`.
pub fn nls_ground_state(grid: &Grid, rho: f64, p: f64, config: &SolverConfig) -> Result<MinimizeResult> {
    let params = Params::new(0.0, rho, p)?.with_coupling(0.0)?;
    params.check_solver_target()?;
    minimize_model(&EnergyModel::new(grid, &params)?, config)
}
