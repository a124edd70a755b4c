//! The mass-scaling family `u_{β,θ}(x) = θ^{1−3β/2} u(θ^{−β} x)`, which multiplies
//! `‖u‖₂` by `θ`, and the fiber function `h_β(θ) = J(u_{β,θ}) − θ² J(u)`.

use std::f64::consts::PI;

use crate::energy::{self, Params};
use crate::error::{invalid, Error, Result};
use crate::grid::{grad_norm_sq, lp_norm_pow, Field, Grid};
use crate::quad;

/// Radial profile `u(|x|)` that can be rescaled exactly and sampled fresh on any grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `amplitude · e^{−r²/(2σ²)}`.
    Gaussian { amplitude: f64, sigma: f64 },
    /// Cubic Hermite interpolation through `(nodes[i], values[i])`, zero past the last node.
    Tabulated { nodes: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn gaussian(amplitude: f64, sigma: f64) -> Result<Profile> {
        if !(sigma > 0.0 && sigma.is_finite() && amplitude.is_finite()) {
            return Err(invalid(format!("gaussian needs sigma > 0, got {sigma}")));
        }
        Ok(Profile::Gaussian { amplitude, sigma })
    }

    /// Gaussian with `‖u‖₂ = mass`: amplitude `mass (πσ²)^{−3/4}`.
    pub fn gaussian_with_mass(mass: f64, sigma: f64) -> Result<Profile> {
        Profile::gaussian(mass * (PI * sigma * sigma).powf(-0.75), sigma)
    }

    pub fn tabulated(nodes: Vec<f64>, values: Vec<f64>) -> Result<Profile> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(invalid("tabulated profile needs at least two (node, value) pairs"));
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("tabulated nodes must start at 0 and increase strictly"));
        }
        if values.iter().chain(&nodes).any(|v| !v.is_finite()) {
            return Err(invalid("tabulated profile has non-finite entries"));
        }
        Ok(Profile::Tabulated { nodes, values })
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Profile::Gaussian { amplitude, sigma } => amplitude * (-0.5 * (r / sigma).powi(2)).exp(),
            Profile::Tabulated { nodes, values } => hermite(nodes, values, r),
        }
    }

    /// Characteristic width: `σ` for a Gaussian, otherwise the `σ` of the Gaussian with the same
    /// second moment of `u²`, `sqrt(2⟨r²⟩/3)`.
    pub fn width(&self) -> f64 {
        match self {
            Profile::Gaussian { sigma, .. } => *sigma,
            Profile::Tabulated { .. } => {
                let m = self.radial_moment(2);
                (2.0 * self.radial_moment(4) / (3.0 * m)).sqrt()
            }
        }
    }

    /// `4π ∫ u(r)² r^k dr`.
    fn radial_moment(&self, k: i32) -> f64 {
        let breaks: Vec<f64> = match self {
            Profile::Tabulated { nodes, .. } => nodes.clone(),
            Profile::Gaussian { sigma, .. } => (0..=80).map(|i| i as f64 * 0.5 * sigma).collect(),
        };
        4.0 * PI * quad::integrate_panels(|r| self.eval(r).powi(2) * r.powi(k), &breaks, 0.0)
    }

    /// `‖u‖₂` on `ℝ³`.
    pub fn mass(&self) -> f64 {
        match self {
            Profile::Gaussian { amplitude, sigma } => amplitude.abs() * (PI * sigma * sigma).powf(0.75),
            Profile::Tabulated { .. } => self.radial_moment(2).sqrt(),
        }
    }

    /// Fraction of `‖u‖₂²` outside the ball of radius `radius`.
    pub fn mass_fraction_outside(&self, radius: f64) -> f64 {
        match self {
            Profile::Gaussian { sigma, .. } => {
                // u² is a normal density with variance σ²/2 per axis.
                let s = radius / sigma;
                libm::erfc(s) + 2.0 * s / PI.sqrt() * (-s * s).exp()
            }
            Profile::Tabulated { nodes, .. } => {
                let total = self.radial_moment(2);
                let end = nodes[nodes.len() - 1];
                if radius >= end {
                    return 0.0;
                }
                let mut breaks = vec![radius];
                breaks.extend(nodes.iter().copied().filter(|&x| x > radius));
                4.0 * PI * quad::integrate_panels(|r| (self.eval(r) * r).powi(2), &breaks, 0.0) / total
            }
        }
    }
}

fn hermite(nodes: &[f64], values: &[f64], r: f64) -> f64 {
    let last = nodes.len() - 1;
    if r >= nodes[last] {
        return if r == nodes[last] { values[last] } else { 0.0 };
    }
    let i = match nodes.binary_search_by(|x| x.total_cmp(&r)) {
        Ok(i) => return values[i],
        Err(i) => i - 1,
    };
    let slope = |k: usize| -> f64 {
        if k == 0 {
            0.0
        } else if k == last {
            (values[k] - values[k - 1]) / (nodes[k] - nodes[k - 1])
        } else {
            (values[k + 1] - values[k - 1]) / (nodes[k + 1] - nodes[k - 1])
        }
    };
    let h = nodes[i + 1] - nodes[i];
    let t = (r - nodes[i]) / h;
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * values[i]
        + (t3 - 2.0 * t2 + t) * h * slope(i)
        + (-2.0 * t3 + 3.0 * t2) * values[i + 1]
        + (t3 - t2) * h * slope(i + 1)
}

/// `u_{β,θ}`: amplitude times `θ^{1−3β/2}`, radii times `θ^β`.
pub fn rescale(pr: &Profile, beta: f64, theta: f64) -> Result<Profile> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(invalid(format!("theta must be > 0, got {theta}")));
    }
    if !beta.is_finite() {
        return Err(invalid("beta must be finite"));
    }
    let amp = theta.powf(1.0 - 1.5 * beta);
    let len = theta.powf(beta);
    Ok(match pr {
        Profile::Gaussian { amplitude, sigma } => Profile::Gaussian {
            amplitude: amplitude * amp,
            sigma: sigma * len,
        },
        Profile::Tabulated { nodes, values } => Profile::Tabulated {
            nodes: nodes.iter().map(|r| r * len).collect(),
            values: values.iter().map(|v| v * amp).collect(),
        },
    })
}

/// Largest fraction of the profile's mass allowed outside the inscribed ball `|x| ≤ L`.
pub const BOX_MASS_TOLERANCE: f64 = 1e-10;

/// Samples the profile centred at the origin, rejecting profiles too wide for the box.
pub fn sample(grid: &Grid, pr: &Profile) -> Result<Field> {
    let outside = pr.mass_fraction_outside(grid.half_width());
    if outside > BOX_MASS_TOLERANCE {
        return Err(Error::BoxTooSmall(format!(
            "profile of width {} leaves a mass fraction {outside:e} outside |x| <= {}",
            pr.width(),
            grid.half_width()
        )));
    }
    Ok(Field::radial(grid, |r| pr.eval(r)))
}

/// `θ` range keeping the rescaled width within `[4 dx, L/8]`.
pub fn admissible_theta_range(grid: &Grid, pr: &Profile, beta: f64) -> (f64, f64) {
    if beta == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let w = pr.width();
    let lo = (4.0 * grid.dx() / w).powf(1.0 / beta);
    let hi = (grid.half_width() / (8.0 * w)).powf(1.0 / beta);
    if lo <= hi {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// `h_β(θ) = J_a(u_{β,θ}) − θ² J_a(u)` with both states sampled from the profile.
pub fn h_beta(grid: &Grid, pr: &Profile, params: &Params, beta: f64, theta: f64) -> Result<f64> {
    let scaled = sample(grid, &rescale(pr, beta, theta)?)?;
    let base = sample(grid, pr)?;
    let js = energy::energy(grid, &scaled, params)?.total;
    let j0 = energy::energy(grid, &base, params)?.total;
    Ok(js - theta * theta * j0)
}

/// Closed form of `h_β'(1)`:
/// `−β‖∇u‖² + ¼[(β/a) E_a + (2−β) D_a] − (1/p)[(1 − 3β/2)p + 3β − 2]‖u‖_p^p`.
pub fn h_beta_prime_at_1(grid: &Grid, u: &Field, params: &Params, beta: f64) -> Result<f64> {
    let a = params.a;
    if !(a > 0.0) {
        return Err(invalid(format!("h_beta'(1) closed form needs a > 0, got {a}")));
    }
    let p = params.p;
    let q = params.coupling;
    let t = grad_norm_sq(u);
    let d = energy::coupling(grid, u, a)?;
    let e = energy::exp_coupling(grid, u, a)?;
    let lp = lp_norm_pow(u, p)?;
    Ok(-beta * t + 0.25 * q * (beta / a * e + (2.0 - beta) * d) - ((1.0 - 1.5 * beta) * p + 3.0 * beta - 2.0) / p * lp)
}

/// Sides of the nonlocal rescaling bound `D_a(u_{β,θ}) ≤ θ^{4−β} D_0(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescalingCheck {
    /// `D_a(u_{β,θ})` from the sampled rescaled state.
    pub lhs: f64,
    /// `θ^{4−β} D_0(u)`.
    pub rhs: f64,
    /// `θ⁴ ∫ (u² ∗ κ_a(θ^β ·)) u²` from the original state and the scaled kernel
    /// `κ_a(θ^β r) = θ^{−β} κ_{aθ^{−β}}(r)`; equals `lhs` exactly in the continuum.
    pub scaled_kernel: f64,
}

pub fn nonlocal_rescaling_check(grid: &Grid, pr: &Profile, a: f64, beta: f64, theta: f64) -> Result<RescalingCheck> {
    if !(a > 0.0) {
        return Err(invalid(format!("rescaling check needs a > 0, got {a}")));
    }
    let scaled = sample(grid, &rescale(pr, beta, theta)?)?;
    let base = sample(grid, pr)?;
    let lhs = energy::coupling(grid, &scaled, a)?;
    let rhs = theta.powf(4.0 - beta) * energy::coupling(grid, &base, 0.0)?;
    let s = theta.powf(beta);
    let scaled_kernel = theta.powi(4) / s * energy::coupling(grid, &base, a / s)?;
    Ok(RescalingCheck {
        lhs,
        rhs,
        scaled_kernel,
    })
}
