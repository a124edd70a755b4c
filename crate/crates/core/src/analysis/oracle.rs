//! One-dimensional reference values for Gaussian states.
//!
//! For `u(x) = ρ (πσ²)^{−3/4} e^{−|x|²/2σ²}` the density `u²/ρ²` is a normal law with
//! variance `σ²/2` per axis, so the distance between two independent samples follows a
//! Maxwell law of scale `σ`. Every pair coupling `∫∫ k(|x−y|) u(x)² u(y)²` is then
//! `ρ⁴ E[k(R)]`, a one-dimensional integral.

use std::f64::consts::PI;

use crate::quad::integrate_panels;

/// Maxwell density of scale `sigma`.
pub fn maxwell_pdf(sigma: f64, r: f64) -> f64 {
    (2.0 / PI).sqrt() * r * r * (-0.5 * r * r / (sigma * sigma)).exp() / sigma.powi(3)
}

/// `E[k(R)]` for `R` Maxwell of scale `sigma`; `k` may be singular like `1/r` at the origin.
pub fn maxwell_expectation(sigma: f64, k: impl Fn(f64) -> f64) -> f64 {
    let breaks: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 9.0, 14.0]
        .iter()
        .map(|t| t * sigma)
        .collect();
    integrate_panels(
        |r| if r > 0.0 { maxwell_pdf(sigma, r) * k(r) } else { 0.0 },
        &breaks,
        1e-15,
    )
}

/// `4π ∫₀^∞ f(r) r² dr` for a radial integrand decaying on the scale `width`.
pub fn radial_integral(width: f64, f: impl Fn(f64) -> f64) -> f64 {
    let breaks: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 9.0, 14.0, 20.0]
        .iter()
        .map(|t| t * width)
        .collect();
    4.0 * PI * integrate_panels(|r| f(r) * r * r, &breaks, 1e-15)
}

/// Gaussian of mass `rho` and width `sigma` with its radial derivative.
pub fn gaussian(rho: f64, sigma: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    let amp = rho * (PI * sigma * sigma).powf(-0.75);
    let s2 = sigma * sigma;
    (
        move |r: f64| amp * (-0.5 * r * r / s2).exp(),
        move |r: f64| -amp * r / s2 * (-0.5 * r * r / s2).exp(),
    )
}

/// `‖u‖_p^p` of the Gaussian by radial quadrature.
pub fn gaussian_lp_pow(rho: f64, sigma: f64, p: f64) -> f64 {
    let (u, _) = gaussian(rho, sigma);
    radial_integral(sigma, |r| u(r).abs().powf(p))
}

/// `‖∇u‖²` of the Gaussian by radial quadrature.
pub fn gaussian_grad_sq(rho: f64, sigma: f64) -> f64 {
    let (_, du) = gaussian(rho, sigma);
    radial_integral(sigma, |r| du(r).powi(2))
}

/// `D_a` of the Gaussian (`a = 0` is Coulomb).
pub fn gaussian_coupling(rho: f64, sigma: f64, a: f64) -> f64 {
    let k = move |r: f64| if a == 0.0 { 1.0 / r } else { -(-r / a).exp_m1() / r };
    rho.powi(4) * maxwell_expectation(sigma, k)
}

/// `E_a` of the Gaussian.
pub fn gaussian_exp_coupling(rho: f64, sigma: f64, a: f64) -> f64 {
    rho.powi(4) * maxwell_expectation(sigma, move |r| (-r / a).exp())
}

/// Coulomb potential `ρ² erf(r/σ)/r` of the Gaussian, with value `2ρ²/(σ√π)` at the origin.
pub fn gaussian_coulomb_potential(rho: f64, sigma: f64, r: f64) -> f64 {
    if r == 0.0 {
        2.0 * rho * rho / (sigma * PI.sqrt())
    } else {
        rho * rho * libm::erf(r / sigma) / r
    }
}
