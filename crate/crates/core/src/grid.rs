//! Periodic cubic grid on `[-L, L)^3`, sampled fields and the norms built on them.
//!
//! Sample `(i, j, l)` sits at `(-L + i dx, -L + j dx, -L + l dx)` and is stored at
//! flat index `(i n + j) n + l`. The origin is sample `(n/2, n/2, n/2)`.
//!
//! Discrete transforms are unnormalized forward and divided by `n^3` on the way back,
//! so Parseval reads `dx^3 Σ|f|^2 = (dx^3 / n^3) Σ|f̂|^2`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::fft;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    half_width: f64,
    dx: f64,
    wavenumbers: Vec<f64>,
    cell_volume: f64,
}

impl Grid {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Box half-width `L`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    /// Per-axis wavenumbers in transform order: `k_j = π j / L` for
    /// `j = 0, 1, …, n/2, -(n/2 - 1), …, -1`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of sample index `i` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx
    }

    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n + j) * self.n + l
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        self.n == other.n && self.half_width.to_bits() == other.half_width.to_bits()
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.describe(),
                right: other.describe(),
            })
        }
    }

    pub fn describe(&self) -> String {
        format!("n={} L={}", self.n, self.half_width)
    }
}

pub fn make_grid(n: usize, half_width: f64) -> Result<Grid> {
    if n < 8 {
        return Err(Error::InvalidGrid(format!("n = {n} is below the minimum of 8")));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!("n = {n} must be even")));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "L = {half_width} must be positive and finite"
        )));
    }
    let dx = 2.0 * half_width / n as f64;
    let wavenumbers = (0..n).map(|j| PI * signed_index(j, n) as f64 / half_width).collect();
    Ok(Grid {
        n,
        half_width,
        dx,
        wavenumbers,
        cell_volume: dx * dx * dx,
    })
}

/// Signed frequency of transform slot `j` on an axis of length `n`; the Nyquist slot maps to `+n/2`.
pub(crate) fn signed_index(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Real samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "field has {} samples, grid {} needs {}",
                values.len(),
                grid.describe(),
                grid.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite sample at flat index {pos}")));
        }
        Ok(Field {
            grid: grid.clone(),
            values,
        })
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, values: Vec<f64>) -> Field {
        debug_assert_eq!(values.len(), grid.len());
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Grid) -> Field {
        Field::from_vec_unchecked(grid, vec![0.0; grid.len()])
    }

    /// Samples `f(x, y, z)` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Field {
        let n = grid.n;
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n {
            let x = grid.coord(i);
            for j in 0..n {
                let y = grid.coord(j);
                for l in 0..n {
                    values.push(f(x, y, grid.coord(l)));
                }
            }
        }
        Field::from_vec_unchecked(grid, values)
    }

    /// Samples a radial function `f(|x|)`.
    pub fn radial(grid: &Grid, f: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(grid, |x, y, z| f((x * x + y * y + z * z).sqrt()))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_vec_unchecked(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Field {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Field) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        Ok(Field::from_vec_unchecked(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Periodic shift by whole cells: the sample at `(i, j, l)` moves to `(i + s0, j + s1, l + s2)`.
    pub fn roll(&self, shift: [i64; 3]) -> Field {
        let n = self.grid.n;
        let m = |i: usize, s: i64| ((i as i64 + s).rem_euclid(n as i64)) as usize;
        let mut out = vec![0.0; self.values.len()];
        for i in 0..n {
            let ti = m(i, shift[0]);
            for j in 0..n {
                let tj = m(j, shift[1]);
                for l in 0..n {
                    out[self.grid.index(ti, tj, m(l, shift[2]))] = self.values[self.grid.index(i, j, l)];
                }
            }
        }
        Field::from_vec_unchecked(&self.grid, out)
    }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `(dx^3 Σ|f_i|^p)^{1/p}`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    Ok(lp_norm_pow(f, p)?.powf(1.0 / p))
}

/// `dx^3 Σ|f_i|^p`, the `p`-th power of [`lp_norm`].
pub fn lp_norm_pow(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("L^p norm needs finite p >= 1, got {p}")));
    }
    let s = if p == 2.0 {
        neumaier_sum(f.values.iter().map(|v| v * v))
    } else {
        neumaier_sum(f.values.iter().map(|v| v.abs().powf(p)))
    };
    Ok(f.grid.cell_volume * s)
}

/// `Σ_k |k|^2 |f̂(k)|^2`, normalized so it equals `‖∇f‖₂²` for band-limited `f`.
pub fn grad_norm_sq(f: &Field) -> f64 {
    fft::spectral(&f.grid).grad_norm_sq(&f.values)
}

/// `dx^3 Σ f_i g_i`.
pub fn inner_l2(f: &Field, g: &Field) -> Result<f64> {
    f.grid.check_same(&g.grid)?;
    Ok(f.grid.cell_volume * neumaier_sum(f.values.iter().zip(&g.values).map(|(a, b)| a * b)))
}

pub(crate) fn mass_sq(f: &Field) -> f64 {
    f.grid.cell_volume * neumaier_sum(f.values.iter().map(|v| v * v))
}

/// `‖∇f‖₂² + ‖f‖₂²`.
pub fn h1_norm_sq(f: &Field) -> f64 {
    grad_norm_sq(f) + mass_sq(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_arithmetic() {
        let g = make_grid(8, 4.0).unwrap();
        assert_eq!(g.dx(), 1.0);
        assert_eq!(g.cell_volume(), 1.0);
        assert_eq!(make_grid(64, 8.0).unwrap().dx(), 0.25);
        assert!(make_grid(7, 4.0).is_err());
        assert!(make_grid(6, 4.0).is_err());
        assert!(make_grid(8, 0.0).is_err());
        assert!(make_grid(8, -1.0).is_err());
    }

    #[test]
    fn wavenumbers_symmetric_except_nyquist() {
        let g = make_grid(16, 3.0).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        assert_eq!(k[8], 8.0 * PI / 3.0);
        for j in 1..8 {
            assert_eq!(k[j], -k[16 - j]);
        }
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let s = neumaier_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn norms_reject_bad_input() {
        let g = make_grid(8, 1.0).unwrap();
        let f = Field::zeros(&g);
        assert!(lp_norm(&f, 0.5).is_err());
        assert_eq!(lp_norm(&f, 2.5).unwrap(), 0.0);
        let h = Field::zeros(&make_grid(8, 2.0).unwrap());
        assert!(matches!(inner_l2(&f, &h), Err(Error::GridMismatch { .. })));
        assert!(Field::new(&g, vec![0.0; 3]).is_err());
        let mut v = vec![0.0; g.len()];
        v[5] = f64::NAN;
        assert!(Field::new(&g, v).is_err());
    }

    #[test]
    fn roll_moves_samples() {
        let g = make_grid(8, 1.0).unwrap();
        let mut v = vec![0.0; g.len()];
        v[g.index(1, 2, 3)] = 1.0;
        let f = Field::new(&g, v).unwrap().roll([2, -3, 7]);
        assert_eq!(f.values()[g.index(3, 7, 2)], 1.0);
    }
}
