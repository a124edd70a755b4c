//! Radial interaction kernels and their truncated Fourier transforms.
//!
//! Free-space convolution on the periodic box uses the transform of the kernel cut off at
//! radius `T`, evaluated on the wavenumbers of the doubled grid. For sources supported in
//! the ball of radius `R` around the box centre and targets anywhere in the box this is
//! exact whenever `√3 L + R ≤ T ≤ 3L − R`; the default `T = (3 + √3) L / 2` tolerates
//! `R ≈ 0.634 L`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::fft::PaddedConvolver;
use crate::grid::{neumaier_sum, Grid};
use crate::quad;

/// Bopp–Podolsky kernel `(1 − e^{−r/a}) / r`; `a = 0` gives the Coulomb kernel `1/r`.
pub fn kappa(a: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("kappa needs r > 0, got {r}")));
    }
    if !(a >= 0.0) {
        return Err(invalid(format!("kappa needs a >= 0, got {a}")));
    }
    Ok(kappa_unchecked(a, r))
}

fn kappa_unchecked(a: f64, r: f64) -> f64 {
    if a == 0.0 {
        1.0 / r
    } else {
        -(-r / a).exp_m1() / r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `1/r`.
    Coulomb,
    /// `(1 − e^{−r/a}) / r`.
    BoppPodolsky,
    /// `e^{−r/a}`.
    PureExponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Screening length; ignored for [`KernelKind::Coulomb`].
    pub a: f64,
    /// Truncation radius `T`.
    pub truncation: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, a: f64, truncation: f64) -> Result<KernelSpec> {
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(invalid(format!("truncation radius must be positive, got {truncation}")));
        }
        if kind != KernelKind::Coulomb && !(a > 0.0 && a.is_finite()) {
            return Err(invalid(format!("{kind:?} kernel needs a > 0, got {a}")));
        }
        Ok(KernelSpec { kind, a, truncation })
    }

    /// Kernel with the default truncation radius for `grid`.
    pub fn for_grid(kind: KernelKind, a: f64, grid: &Grid) -> Result<KernelSpec> {
        KernelSpec::new(kind, a, default_truncation(grid))
    }

    /// Potential kernel for screening length `a >= 0`: Coulomb at `a = 0`, Bopp–Podolsky otherwise.
    pub fn potential(a: f64, grid: &Grid) -> Result<KernelSpec> {
        if a == 0.0 {
            KernelSpec::for_grid(KernelKind::Coulomb, 0.0, grid)
        } else {
            KernelSpec::for_grid(KernelKind::BoppPodolsky, a, grid)
        }
    }

    /// Pointwise kernel value at `r > 0`.
    pub fn eval(&self, r: f64) -> f64 {
        match self.kind {
            KernelKind::Coulomb => 1.0 / r,
            KernelKind::BoppPodolsky => kappa_unchecked(self.a, r),
            KernelKind::PureExponential => (-r / self.a).exp(),
        }
    }

    /// `r · kernel(r)`, smooth on `[0, T]` for every kind.
    fn r_times(&self, r: f64) -> f64 {
        match self.kind {
            KernelKind::Coulomb => 1.0,
            KernelKind::BoppPodolsky => -(-r / self.a).exp_m1(),
            KernelKind::PureExponential => r * (-r / self.a).exp(),
        }
    }

    fn sup_r_times(&self) -> f64 {
        match self.kind {
            KernelKind::Coulomb | KernelKind::BoppPodolsky => 1.0,
            KernelKind::PureExponential => self.a / std::f64::consts::E,
        }
    }

    /// Upper end of the region where the integrand is not negligible.
    fn effective_end(&self) -> f64 {
        match self.kind {
            KernelKind::PureExponential => self.truncation.min(60.0 * self.a),
            _ => self.truncation,
        }
    }

    fn key(&self) -> (KernelKind, u64, u64) {
        let a = if self.kind == KernelKind::Coulomb { 0.0 } else { self.a };
        (self.kind, a.to_bits(), self.truncation.to_bits())
    }
}

/// `(3 + √3) L / 2`.
pub fn default_truncation(grid: &Grid) -> f64 {
    0.5 * (3.0 + 3f64.sqrt()) * grid.half_width()
}

/// Admissible truncation radii `[√3 L + L/2, 3L − L/2]` for sources inside `|x| ≤ L/2`.
pub fn truncation_window(grid: &Grid) -> (f64, f64) {
    let l = grid.half_width();
    (3f64.sqrt() * l + 0.5 * l, 2.5 * l)
}

/// `4π(1 − cos kT)/k²`, with the `k → 0` limit `2πT²`.
pub fn coulomb_truncated_ft_closed(truncation: f64, k: f64) -> f64 {
    if k == 0.0 {
        2.0 * PI * truncation * truncation
    } else {
        let s = sin_kr(k, 0.5 * truncation);
        8.0 * PI * s * s / (k * k)
    }
}

/// Radial Fourier transform of the kernel restricted to `|x| ≤ T`:
/// `(4π/k) ∫₀^T sin(kr) f(r) r dr`, and `4π ∫₀^T f(r) r² dr` at `k = 0`.
pub fn truncated_ft(spec: &KernelSpec, k: f64) -> f64 {
    let end = spec.effective_end();
    let mut inner = vec![0.0];
    if spec.kind != KernelKind::Coulomb {
        for m in [0.25, 1.0, 4.0, 16.0] {
            if m * spec.a < end {
                inner.push(m * spec.a);
            }
        }
    }
    let sup = spec.sup_r_times();
    if k == 0.0 {
        inner.push(end);
        inner.dedup();
        let tol = 1e-17 * sup * end * end;
        return 4.0 * PI * quad::integrate_panels(|r| spec.r_times(r) * r, &inner, tol);
    }

    // half periods of sin(kr), each in its local coordinate
    let half_period = PI / k;
    let count = (end / half_period).floor() as usize;
    let tol = 1e-17 * sup * end;
    let mut parts = Vec::with_capacity(count + 1);
    for m in 0..=count {
        let start = m as f64 * half_period;
        let len = if m < count {
            half_period
        } else {
            local_offset(k, end, m)
        };
        if !(len > 0.0) {
            continue;
        }
        let mut breaks = vec![0.0];
        breaks.extend(inner.iter().map(|&b| b - start).filter(|&t| t > 0.0 && t < len));
        breaks.push(len);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let v = quad::integrate_panels(|t| (k * t).sin() * spec.r_times(start + t), &breaks, tol * len / end);
        parts.push(sign * v);
    }
    4.0 * PI / k * neumaier_sum(parts)
}

/// `r − mπ/k`, with `kr − mπ` formed before dividing by `k`.
fn local_offset(k: f64, r: f64, m: usize) -> f64 {
    const PI_HI: f64 = 3.141_592_653_468_251_228_34;
    const PI_LO: f64 = 1.215_420_101_301_238_449_86e-10;
    let q = m as f64;
    (k.mul_add(r, -q * PI_HI) - q * PI_LO) / k
}

/// `sin(k r)` with the product reduced modulo `π/2` before rounding; a plain `(k * r).sin()`
/// loses `k r · ε` absolute accuracy, which swamps the transform at large `k T`.
fn sin_kr(k: f64, r: f64) -> f64 {
    const PIO2_HI: f64 = 1.570_796_326_734_125_614_17;
    const PIO2_LO: f64 = 6.077_100_506_506_192_249_32e-11;
    let q = (k * r * std::f64::consts::FRAC_2_PI).round();
    if q.abs() > (1u64 << 19) as f64 {
        return (k * r).sin();
    }
    let y = k.mul_add(r, -q * PIO2_HI) - q * PIO2_LO;
    match (q as i64).rem_euclid(4) {
        0 => y.sin(),
        1 => y.cos(),
        2 => -y.sin(),
        _ => -y.cos(),
    }
}

/// Kernel transform on every wavenumber of the doubled grid, keyed by the squared signed
/// frequency index `s = i² + j² + l²` (wavenumber `π √s / (2L)`).
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    spec: KernelSpec,
    wavenumber_unit: f64,
    values: HashMap<u64, f64>,
}

impl MultiplierTable {
    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn wavenumber(&self, index_sq: u64) -> f64 {
        self.wavenumber_unit * (index_sq as f64).sqrt()
    }

    pub fn get(&self, index_sq: u64) -> Option<f64> {
        self.values.get(&index_sq).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(wavenumber, value)` pairs in increasing wavenumber order.
    pub fn entries(&self) -> Vec<(f64, f64)> {
        let mut keys: Vec<u64> = self.values.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|s| (self.wavenumber(s), self.values[&s]))
            .collect()
    }
}

pub fn multiplier_table(grid: &Grid, spec: &KernelSpec) -> Result<MultiplierTable> {
    let (lo, hi) = truncation_window(grid);
    if spec.truncation < lo * (1.0 - 1e-12) || spec.truncation > hi * (1.0 + 1e-12) {
        return Err(Error::BoxTooSmall(format!(
            "truncation radius {} outside [{lo}, {hi}] for {}",
            spec.truncation,
            grid.describe()
        )));
    }
    let unit = PI / (2.0 * grid.half_width());
    let values = PaddedConvolver::distinct_index_sq(grid.n())
        .into_iter()
        .map(|s| (s, truncated_ft(spec, unit * (s as f64).sqrt())))
        .collect();
    Ok(MultiplierTable {
        spec: *spec,
        wavenumber_unit: unit,
        values,
    })
}

type ConvKey = (usize, u64, (KernelKind, u64, u64));

/// Shared padded convolver for `(grid, spec)`; built once and reused.
pub fn convolver(grid: &Grid, spec: &KernelSpec) -> Result<Arc<PaddedConvolver>> {
    static CACHE: OnceLock<Mutex<HashMap<ConvKey, Arc<PaddedConvolver>>>> = OnceLock::new();
    let key = (grid.n(), grid.half_width().to_bits(), spec.key());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let table = multiplier_table(grid, spec)?;
    let conv = Arc::new(PaddedConvolver::new(grid.n(), |s| table.values[&s]));
    Ok(cache.lock().unwrap().entry(key).or_insert(conv).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn kappa_values() {
        assert!((kappa(1.0, 1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!((kappa(1.0, 1e-8).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(kappa(0.0, 2.0).unwrap(), 0.5);
        assert!(kappa(1.0, 0.0).is_err());
        assert!(kappa(1.0, -1.0).is_err());
        assert!(kappa(-1.0, 1.0).is_err());
    }

    #[test]
    fn coulomb_examples() {
        let s = KernelSpec::new(KernelKind::Coulomb, 0.0, 1.0).unwrap();
        assert!((truncated_ft(&s, PI) - 8.0 / PI).abs() < 1e-13);
        assert!((truncated_ft(&s, 0.0) - 2.0 * PI).abs() < 1e-13);
        assert!((coulomb_truncated_ft_closed(1.0, PI) - 8.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(KernelSpec::new(KernelKind::BoppPodolsky, 0.0, 1.0).is_err());
        assert!(KernelSpec::new(KernelKind::PureExponential, -1.0, 1.0).is_err());
        assert!(KernelSpec::new(KernelKind::Coulomb, 0.0, 0.0).is_err());
        assert!(KernelSpec::new(KernelKind::Coulomb, -5.0, 1.0).is_ok());
    }

    #[test]
    fn table_window_and_zero_entry() {
        let g = make_grid(16, 4.0).unwrap();
        let s = KernelSpec::for_grid(KernelKind::Coulomb, 0.0, &g).unwrap();
        let t = multiplier_table(&g, &s).unwrap();
        let want = 2.0 * PI * s.truncation * s.truncation;
        assert!((t.get(0).unwrap() - want).abs() < 1e-12 * want);
        assert_eq!(t.len(), PaddedConvolver::distinct_index_sq(16).len());
        let far = KernelSpec::new(KernelKind::Coulomb, 0.0, 2.0 * 3f64.sqrt() * 4.0).unwrap();
        assert!(matches!(multiplier_table(&g, &far), Err(Error::BoxTooSmall(_))));
        let near = KernelSpec::new(KernelKind::Coulomb, 0.0, 4.0).unwrap();
        assert!(multiplier_table(&g, &near).is_err());
    }
}
