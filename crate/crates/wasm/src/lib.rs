//! Browser bindings: kernel profiles, admissible rescaling windows and small-grid ground states.

use sbp_core::analysis::{self, nls_beta, Regime};
use sbp_core::energy::Params;
use sbp_core::kernels::kappa;
use sbp_core::make_grid;
use sbp_core::rescale::Profile;
use sbp_core::solve::{minimize, SolverConfig};
use wasm_bindgen::prelude::*;

fn js(e: sbp_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `κ_a(r)` at `samples` evenly spaced radii in `(0, r_max]`.
#[wasm_bindgen]
pub fn kernel_curve(a: f64, r_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    if !(r_max > 0.0) || samples == 0 {
        return Err(JsError::new("need r_max > 0 and at least one sample"));
    }
    (1..=samples)
        .map(|i| kappa(a, r_max * i as f64 / samples as f64).map_err(js))
        .collect()
}

#[wasm_bindgen]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
    pub nonempty: bool,
    /// Certified mass boundary for the unit Gaussian trial, `NaN` when `beta` is outside the window.
    pub boundary: f64,
    pub nls_beta: f64,
}

/// Admissible `β` window at `p` for `regime` (`"small_rho"` or `"large_rho"`), with the trial
/// threshold at `beta`.
#[wasm_bindgen]
pub fn beta_window(p: f64, regime: &str, beta: f64) -> Result<Window, JsError> {
    let regime = match regime {
        "small_rho" => Regime::SmallRho,
        "large_rho" => Regime::LargeRho,
        other => return Err(JsError::new(&format!("unknown regime {other:?}"))),
    };
    let w = analysis::beta_window(p, regime).map_err(js)?;
    let boundary = if w.contains(beta) {
        let grid = make_grid(32, 6.0).map_err(js)?;
        let pr = Profile::gaussian_with_mass(1.0, 1.0).map_err(js)?;
        analysis::trial_threshold(&grid, &pr, p, beta, regime)
            .map_err(js)?
            .boundary()
    } else {
        f64::NAN
    };
    Ok(Window {
        lower: w.lower,
        upper: w.upper,
        nonempty: w.nonempty,
        boundary,
        nls_beta: nls_beta(p),
    })
}

#[wasm_bindgen]
pub struct GroundState {
    pub energy: f64,
    pub omega: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    radius: Vec<f64>,
    profile: Vec<f64>,
}

#[wasm_bindgen]
impl GroundState {
    /// Distances from the centre along the first axis.
    #[wasm_bindgen(getter)]
    pub fn radius(&self) -> Vec<f64> {
        self.radius.clone()
    }

    /// `u` at those distances.
    #[wasm_bindgen(getter)]
    pub fn profile(&self) -> Vec<f64> {
        self.profile.clone()
    }
}

/// Least-energy state at `(a, ρ, p)` on an `n³` grid of half-width `half_width`.
#[wasm_bindgen]
pub fn ground_state(n: usize, half_width: f64, a: f64, rho: f64, p: f64) -> Result<GroundState, JsError> {
    let grid = make_grid(n, half_width).map_err(js)?;
    let params = Params::new(a, rho, p).map_err(js)?;
    let config = SolverConfig {
        shift: 0.05,
        max_iter: 2_000,
        ..Default::default()
    };
    let r = minimize(&grid, &params, &config).map_err(js)?;
    let c = n / 2;
    let (radius, profile) = (c..n)
        .map(|i| (grid.coord(i), r.u.values()[grid.index(i, c, c)]))
        .unzip();
    Ok(GroundState {
        energy: r.energy.total,
        omega: r.omega,
        residual: r.residual,
        iterations: r.iters,
        converged: r.converged,
        radius,
        profile,
    })
}
