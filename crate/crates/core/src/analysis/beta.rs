//! Admissible rescaling exponents and the limiting-problem exponents.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SmallRho,
    LargeRho,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::SmallRho => "small_rho",
            Regime::LargeRho => "large_rho",
        }
    }
}

/// Open interval of `β` for which the trial family `u_{β,ρ}` forces `J_0 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaWindow {
    pub regime: Regime,
    pub p: f64,
    /// `−∞` when unbounded below.
    pub lower: f64,
    /// `+∞` when unbounded above.
    pub upper: f64,
    pub nonempty: bool,
}

impl BetaWindow {
    pub fn contains(&self, beta: f64) -> bool {
        self.nonempty && beta > self.lower && beta < self.upper
    }
}

/// `(1 − 3β/2) p + 3β`, the power of `ρ` carried by `‖u_{β,ρ}‖_p^p`.
pub fn trial_exponent(p: f64, beta: f64) -> f64 {
    (1.0 - 1.5 * beta) * p + 3.0 * beta
}

/// Direct test of the exponent inequalities:
/// small ρ: `0 < e < min(4−β, 2−2β)`; large ρ: `e > max(4−β, 2−2β, 0)`.
pub fn admits(p: f64, beta: f64, regime: Regime) -> bool {
    let e = trial_exponent(p, beta);
    let kin = 2.0 - 2.0 * beta;
    let nl = 4.0 - beta;
    match regime {
        Regime::SmallRho => e > 0.0 && e < kin.min(nl),
        Regime::LargeRho => e > kin.max(nl).max(0.0),
    }
}

fn check_regime(p: f64, regime: Regime) -> Result<()> {
    let ok = match regime {
        Regime::SmallRho => p > 2.0 && p < 3.0,
        Regime::LargeRho => p > 3.0 && p < 10.0 / 3.0,
    };
    if ok {
        Ok(())
    } else {
        let range = match regime {
            Regime::SmallRho => "]2,3[",
            Regime::LargeRho => "]3,10/3[",
        };
        Err(invalid(format!("p = {p} outside {range} for regime {}", regime.name())))
    }
}

/// Closed-form window of [`admits`].
///
/// For `p < 3` the bound `e < 2 − 2β` gives `β < (4−2p)/(10−3p)`, which is the binding upper
/// limit for every `p` in `]2,3[`; below `8/3` the other two constraints only bound `β` from
/// above by positive numbers.
pub fn beta_window(p: f64, regime: Regime) -> Result<BetaWindow> {
    check_regime(p, regime)?;
    let kin_bound = (4.0 - 2.0 * p) / (10.0 - 3.0 * p);
    let nl_bound = (2.0 * p - 8.0) / (3.0 * p - 8.0);
    let (lower, upper) = match regime {
        Regime::SmallRho => {
            let lower = if p > 8.0 / 3.0 { nl_bound } else { f64::NEG_INFINITY };
            (lower, kin_bound)
        }
        Regime::LargeRho => (kin_bound, nl_bound.min(2.0 * p / (3.0 * p - 6.0))),
    };
    Ok(BetaWindow {
        regime,
        p,
        lower,
        upper,
        nonempty: lower < upper,
    })
}

/// Brute-force window: evaluates [`admits`] at `samples` evenly spaced `β` in `[lo, hi]` and
/// returns the first and last admitted sample.
pub fn scan_window(p: f64, regime: Regime, lo: f64, hi: f64, samples: usize) -> Option<(f64, f64)> {
    let mut first = None;
    let mut last = None;
    for i in 0..samples {
        let beta = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        if admits(p, beta, regime) {
            first.get_or_insert(beta);
            last = Some(beta);
        }
    }
    Some((first?, last?))
}

/// Exponent `β(p) = −(2p−4)/(4−3(p−2))` of the rescaling that turns the small-mass problem
/// into a unit-mass problem with coupling `ρ^{α(p)}`.
pub fn nls_beta(p: f64) -> f64 {
    -(2.0 * p - 4.0) / (4.0 - 3.0 * (p - 2.0))
}

/// `α(p) = (28−10p)/(10−3p) = 2 + 2β(p)`.
pub fn nls_alpha(p: f64) -> f64 {
    (28.0 - 10.0 * p) / (10.0 - 3.0 * p)
}
