//! Closed forms for Gaussian states shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sbp_core::{Field, Grid};

pub fn gauss(g: &Grid, rho: f64, sigma: f64) -> Field {
    let amp = rho * (PI * sigma * sigma).powf(-0.75);
    Field::radial(g, |r| amp * (-0.5 * r * r / (sigma * sigma)).exp())
}

/// `∫₀^∞ r e^{−r²/2s² − br} dr` and `∫₀^∞ r² e^{−r²/2s² − br} dr`.
pub fn moments(s: f64, b: f64) -> (f64, f64) {
    let x = b * s / 2f64.sqrt();
    let i0 = s * (PI / 2.0).sqrt() * (x * x).exp() * libm::erfc(x);
    let i1 = s * s * (1.0 - b * i0);
    let i2 = s * s * (i0 - b * i1);
    (i1, i2)
}

/// Gaussian couplings through the Maxwell law of the pair distance.
pub fn d_closed(rho: f64, s: f64, a: f64) -> f64 {
    let c = rho.powi(4) * (2.0 / PI).sqrt() / s.powi(3);
    if a == 0.0 {
        c * s * s
    } else {
        c * (s * s - moments(s, 1.0 / a).0)
    }
}

pub fn e_closed(rho: f64, s: f64, a: f64) -> f64 {
    rho.powi(4) * (2.0 / PI).sqrt() / s.powi(3) * moments(s, 1.0 / a).1
}

pub fn lp_closed(rho: f64, s: f64, p: f64) -> f64 {
    rho.powf(p) * (PI * s * s).powf(-0.75 * p) * (2.0 * PI * s * s / p).powf(1.5)
}

pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

pub fn bumps(g: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Field::zeros(g);
    for _ in 0..4 {
        let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
        let w = rng.gen_range(0.5..1.0);
        let h = rng.gen_range(-1.0..1.0);
        let b = Field::from_fn(g, |x, y, z| {
            h * (-((x - c[0]).powi(2) + (y - c[1]).powi(2) + (z - c[2]).powi(2)) / (2.0 * w * w)).exp()
        });
        f = f.axpy(1.0, &b).unwrap();
    }
    f
}
