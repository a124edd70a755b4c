//! Least-energy states of the mass-constrained Schrödinger–Bopp–Podolsky system.
//!
//! The state `u` on the sphere `‖u‖₂ = ρ` minimizes
//! `J_a(u) = ½‖∇u‖² + ¼∫φ_a^u u² − (1/p)‖u‖_p^p`, with `φ_a^u = u² ∗ κ_a` and
//! `κ_a(r) = (1 − e^{−r/a})/r`. At `a = 0` the kernel is Coulomb and the system is
//! Schrödinger–Poisson–Slater.
//!
//! Fields live on a periodic cube ([`grid`]); nonlocal terms use a zero-padded spectral
//! convolution with truncated kernels ([`kernels`]); [`energy`] evaluates the functional and
//! its gradient; [`solve`] runs constrained descent; [`rescale`] and [`analysis`] check the
//! scaling identities, thresholds and limits.

pub mod analysis;
pub mod energy;
pub mod error;
pub mod fft;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod quad;
pub mod rescale;
pub mod solve;

pub use error::{Error, Result};
pub use grid::{make_grid, Field, Grid};
