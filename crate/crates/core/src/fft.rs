//! Three-dimensional real transforms, spectral operators on a [`Grid`] and the
//! zero-padded free-space convolver.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{neumaier_sum, signed_index, Grid};

const BATCH: usize = 16;

/// Real-to-complex transform of shape `m0 × m1 × m2` whose input is nonzero only on the
/// leading `a0 × a1 × a2` block. The spectrum keeps `m2/2 + 1` slots on the last axis.
pub(crate) struct RealFft3 {
    m: [usize; 3],
    a: [usize; 3],
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    f1: Arc<dyn Fft<f64>>,
    i1: Arc<dyn Fft<f64>>,
    f0: Arc<dyn Fft<f64>>,
    i0: Arc<dyn Fft<f64>>,
}

impl RealFft3 {
    pub(crate) fn new(m: [usize; 3], a: [usize; 3]) -> RealFft3 {
        let mut rp = RealFftPlanner::<f64>::new();
        let mut cp = FftPlanner::<f64>::new();
        RealFft3 {
            m,
            a,
            r2c: rp.plan_fft_forward(m[2]),
            c2r: rp.plan_fft_inverse(m[2]),
            f1: cp.plan_fft_forward(m[1]),
            i1: cp.plan_fft_inverse(m[1]),
            f0: cp.plan_fft_forward(m[0]),
            i0: cp.plan_fft_inverse(m[0]),
        }
    }

    pub(crate) fn half(&self) -> usize {
        self.m[2] / 2 + 1
    }

    pub(crate) fn spectrum_len(&self) -> usize {
        self.m[0] * self.m[1] * self.half()
    }

    /// Unnormalized forward transform of the active block (row-major, `a0 a1 a2` samples).
    pub(crate) fn forward(&self, input: &[f64]) -> Vec<Complex64> {
        let [m0, m1, _] = self.m;
        let [a0, a1, a2] = self.a;
        assert_eq!(input.len(), a0 * a1 * a2);
        let h = self.half();
        let mut spec = vec![Complex64::new(0.0, 0.0); self.spectrum_len()];

        let mut row = self.r2c.make_input_vec();
        let mut scratch = self.r2c.make_scratch_vec();
        for i in 0..a0 {
            for j in 0..a1 {
                let src = &input[(i * a1 + j) * a2..(i * a1 + j + 1) * a2];
                row[..a2].copy_from_slice(src);
                row[a2..].iter_mut().for_each(|v| *v = 0.0);
                let out = &mut spec[(i * m1 + j) * h..(i * m1 + j + 1) * h];
                self.r2c
                    .process_with_scratch(&mut row, out, &mut scratch)
                    .expect("r2c buffer sizes");
            }
        }
        for i in 0..a0 {
            self.axis1(&mut spec, i, &self.f1, m1);
        }
        self.axis0(&mut spec, &self.f0, m0);
        spec
    }

    /// Inverse transform divided by `m0 m1 m2`; returns only the active block.
    pub(crate) fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        let [m0, m1, m2] = self.m;
        let [a0, a1, a2] = self.a;
        let h = self.half();
        self.axis0(&mut spec, &self.i0, a0);
        for i in 0..a0 {
            self.axis1(&mut spec, i, &self.i1, a1);
        }
        let scale = 1.0 / (m0 * m1 * m2) as f64;
        let mut out = vec![0.0; a0 * a1 * a2];
        let mut row = self.c2r.make_output_vec();
        let mut scratch = self.c2r.make_scratch_vec();
        for i in 0..a0 {
            for j in 0..a1 {
                let s = &mut spec[(i * m1 + j) * h..(i * m1 + j + 1) * h];
                s[0].im = 0.0;
                if m2 % 2 == 0 {
                    s[h - 1].im = 0.0;
                }
                self.c2r
                    .process_with_scratch(s, &mut row, &mut scratch)
                    .expect("c2r buffer sizes");
                let dst = &mut out[(i * a1 + j) * a2..(i * a1 + j + 1) * a2];
                for (d, r) in dst.iter_mut().zip(&row[..a2]) {
                    *d = r * scale;
                }
            }
        }
        out
    }

    /// Transforms along axis 1 for the plane `i`, writing back only `j < keep`.
    fn axis1(&self, spec: &mut [Complex64], i: usize, fft: &Arc<dyn Fft<f64>>, keep: usize) {
        let m1 = self.m[1];
        let h = self.half();
        let plane = &mut spec[i * m1 * h..(i + 1) * m1 * h];
        let mut buf = vec![Complex64::new(0.0, 0.0); BATCH * m1];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut k0 = 0;
        while k0 < h {
            let b = BATCH.min(h - k0);
            for c in 0..b {
                for j in 0..m1 {
                    buf[c * m1 + j] = plane[j * h + k0 + c];
                }
            }
            fft.process_with_scratch(&mut buf[..b * m1], &mut scratch);
            for c in 0..b {
                for j in 0..keep {
                    plane[j * h + k0 + c] = buf[c * m1 + j];
                }
            }
            k0 += b;
        }
    }

    /// Transforms along axis 0 for every `(j, kl)`, writing back only `i < keep`.
    fn axis0(&self, spec: &mut [Complex64], fft: &Arc<dyn Fft<f64>>, keep: usize) {
        let [m0, m1, _] = self.m;
        let h = self.half();
        let mut buf = vec![Complex64::new(0.0, 0.0); BATCH * m0];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for j in 0..m1 {
            let mut k0 = 0;
            while k0 < h {
                let b = BATCH.min(h - k0);
                for i in 0..m0 {
                    let base = (i * m1 + j) * h + k0;
                    for c in 0..b {
                        buf[c * m0 + i] = spec[base + c];
                    }
                }
                fft.process_with_scratch(&mut buf[..b * m0], &mut scratch);
                for i in 0..keep {
                    let base = (i * m1 + j) * h + k0;
                    for c in 0..b {
                        spec[base + c] = buf[c * m0 + i];
                    }
                }
                k0 += b;
            }
        }
    }

    /// Squared signed frequency index `i² + j² + l²` for every spectrum slot.
    pub(crate) fn index_sq(&self) -> Vec<u64> {
        let [m0, m1, m2] = self.m;
        let h = self.half();
        let mut out = Vec::with_capacity(self.spectrum_len());
        for i in 0..m0 {
            let si = signed_index(i, m0).pow(2) as u64;
            for j in 0..m1 {
                let sj = signed_index(j, m1).pow(2) as u64;
                for l in 0..h {
                    out.push(si + sj + signed_index(l, m2).pow(2) as u64);
                }
            }
        }
        out
    }

    /// Multiplicity of each half-spectrum slot in the full spectrum.
    pub(crate) fn slot_weight(&self, l: usize) -> f64 {
        let m2 = self.m[2];
        if l == 0 || (m2.is_multiple_of(2) && l == m2 / 2) {
            1.0
        } else {
            2.0
        }
    }
}

/// Spectral operators on the unpadded grid.
pub struct Spectral {
    fft: RealFft3,
    ksq: Vec<f64>,
    k_unit: f64,
    n: usize,
    cell_volume: f64,
}

impl Spectral {
    fn new(grid: &Grid) -> Spectral {
        let n = grid.n();
        let fft = RealFft3::new([n; 3], [n; 3]);
        let k_unit = std::f64::consts::PI / grid.half_width();
        let ksq = fft.index_sq().into_iter().map(|s| s as f64 * k_unit * k_unit).collect();
        Spectral {
            fft,
            ksq,
            k_unit,
            n,
            cell_volume: grid.cell_volume(),
        }
    }

    /// `|k|^2` for each half-spectrum slot.
    pub fn ksq(&self) -> &[f64] {
        &self.ksq
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        self.fft.forward(values)
    }

    pub fn inverse(&self, spec: Vec<Complex64>) -> Vec<f64> {
        self.fft.inverse(spec)
    }

    /// Applies the Fourier multiplier `symbol(|k|^2)`.
    pub fn apply(&self, values: &[f64], symbol: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut spec = self.fft.forward(values);
        for (s, &k2) in spec.iter_mut().zip(&self.ksq) {
            *s *= symbol(k2);
        }
        self.fft.inverse(spec)
    }

    /// `(dv/N) Σ_k w(k) |f̂(k)|^2` summed over the full spectrum.
    pub fn weighted_power(&self, values: &[f64], weight: impl Fn(f64) -> f64) -> f64 {
        let spec = self.fft.forward(values);
        self.power_of(&spec, weight)
    }

    pub fn power_of(&self, spec: &[Complex64], weight: impl Fn(f64) -> f64) -> f64 {
        let h = self.fft.half();
        let total = neumaier_sum(
            spec.iter()
                .zip(&self.ksq)
                .enumerate()
                .map(|(idx, (s, &k2))| self.fft.slot_weight(idx % h) * weight(k2) * s.norm_sqr()),
        );
        total * self.cell_volume / (self.n * self.n * self.n) as f64
    }

    pub fn grad_norm_sq(&self, values: &[f64]) -> f64 {
        self.weighted_power(values, |k2| k2)
    }

    /// Band-limited translate `x ↦ f(x − d)` for a displacement `d` in length units.
    pub fn translate(&self, values: &[f64], d: [f64; 3]) -> Vec<f64> {
        let n = self.n;
        let h = self.fft.half();
        let unit = self.k_unit;
        let mut spec = self.fft.forward(values);
        for (idx, s) in spec.iter_mut().enumerate() {
            let l = idx % h;
            let j = (idx / h) % n;
            let i = idx / (h * n);
            let phase = -unit * (signed_index(i, n) as f64 * d[0] + signed_index(j, n) as f64 * d[1] + l as f64 * d[2]);
            *s *= Complex64::new(phase.cos(), phase.sin());
        }
        self.fft.inverse(spec)
    }
}

type SpectralKey = (usize, u64);

/// Shared spectral operator for `grid`; built once per `(n, L)`.
pub fn spectral(grid: &Grid) -> Arc<Spectral> {
    static CACHE: OnceLock<Mutex<HashMap<SpectralKey, Arc<Spectral>>>> = OnceLock::new();
    let key = (grid.n(), grid.half_width().to_bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&key) {
        return s.clone();
    }
    let s = Arc::new(Spectral::new(grid));
    cache.lock().unwrap().entry(key).or_insert(s).clone()
}

/// Free-space convolution of fields on an `n^3` grid with a radial kernel, realized on the
/// doubled `(2n)^3` grid with a precomputed Fourier multiplier.
pub struct PaddedConvolver {
    fft: RealFft3,
    multiplier: Vec<f64>,
}

impl PaddedConvolver {
    /// `table(s)` is the kernel transform at squared padded frequency index `s`;
    /// the padded wavenumber is `π sqrt(s) / (2L)`.
    pub(crate) fn new(n: usize, table: impl Fn(u64) -> f64) -> PaddedConvolver {
        let fft = RealFft3::new([2 * n; 3], [n; 3]);
        let mut memo: HashMap<u64, f64> = HashMap::new();
        let multiplier = fft
            .index_sq()
            .into_iter()
            .map(|s| *memo.entry(s).or_insert_with(|| table(s)))
            .collect();
        PaddedConvolver { fft, multiplier }
    }

    /// Distinct squared padded frequency indices, sorted.
    pub(crate) fn distinct_index_sq(n: usize) -> Vec<u64> {
        let half = n as u64;
        let mut seen = vec![false; (3 * half * half + 1) as usize];
        for i in 0..=half {
            for j in 0..=half {
                for l in 0..=half {
                    seen[(i * i + j * j + l * l) as usize] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(s, &b)| b.then_some(s as u64))
            .collect()
    }

    /// `(source ∗ kernel)` sampled on the original grid.
    pub fn convolve(&self, source: &[f64]) -> Vec<f64> {
        let mut spec = self.fft.forward(source);
        for (s, &m) in spec.iter_mut().zip(&self.multiplier) {
            *s *= m;
        }
        self.fft.inverse(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn naive_dft3(values: &[f64], n: usize) -> Vec<Complex64> {
        let w = |a: usize, b: usize| {
            let t = -2.0 * std::f64::consts::PI * ((a * b) % n) as f64 / n as f64;
            Complex64::new(t.cos(), t.sin())
        };
        let mut out = vec![Complex64::new(0.0, 0.0); n * n * (n / 2 + 1)];
        for ki in 0..n {
            for kj in 0..n {
                for kl in 0..=n / 2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            for l in 0..n {
                                acc += values[(i * n + j) * n + l] * w(ki, i) * w(kj, j) * w(kl, l);
                            }
                        }
                    }
                    out[(ki * n + kj) * (n / 2 + 1) + kl] = acc;
                }
            }
        }
        out
    }

    fn pseudo(n: usize) -> Vec<f64> {
        (0..n).map(|i| ((i * 7919 % 113) as f64 / 113.0) - 0.5).collect()
    }

    #[test]
    fn forward_matches_naive_dft() {
        let n = 6;
        let v = pseudo(n * n * n);
        let f = RealFft3::new([n; 3], [n; 3]).forward(&v);
        let g = naive_dft3(&v, n);
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn round_trip_full_and_pruned() {
        let n = 8;
        let v = pseudo(n * n * n);
        let t = RealFft3::new([n; 3], [n; 3]);
        let back = t.inverse(t.forward(&v));
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-14);
        }
        let t = RealFft3::new([2 * n; 3], [n; 3]);
        let back = t.inverse(t.forward(&v));
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn pruned_matches_explicit_padding() {
        let n = 6;
        let m = 2 * n;
        let v = pseudo(n * n * n);
        let mut padded = vec![0.0; m * m * m];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    padded[(i * m + j) * m + l] = v[(i * n + j) * n + l];
                }
            }
        }
        let a = RealFft3::new([m; 3], [n; 3]).forward(&v);
        let b = RealFft3::new([m; 3], [m; 3]).forward(&padded);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn padded_convolution_matches_direct_sum() {
        let n = 4;
        let m = 2 * n;
        let kern = |d: [i64; 3]| {
            let w = |x: i64| {
                if x.abs() < n as i64 {
                    1.0 / (1.0 + x.abs() as f64)
                } else {
                    0.0
                }
            };
            w(d[0]) * w(d[1]) * w(d[2])
        };
        let mut ksamp = vec![0.0; m * m * m];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    ksamp[(i * m + j) * m + l] = kern([signed_index(i, m), signed_index(j, m), signed_index(l, m)]);
                }
            }
        }
        let kt = RealFft3::new([m; 3], [m; 3]).forward(&ksamp);
        let conv = PaddedConvolver {
            fft: RealFft3::new([m; 3], [n; 3]),
            multiplier: kt.iter().map(|c| c.re).collect(),
        };
        let v = pseudo(n * n * n);
        let got = conv.convolve(&v);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                let d = [i as i64 - a as i64, j as i64 - b as i64, l as i64 - c as i64];
                                acc += kern(d) * v[(a * n + b) * n + c];
                            }
                        }
                    }
                    assert!((got[(i * n + j) * n + l] - acc).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parseval_and_single_mode_gradient() {
        let g = make_grid(16, 2.5).unwrap();
        let s = spectral(&g);
        let v = pseudo(g.len());
        let direct = g.cell_volume() * v.iter().map(|x| x * x).sum::<f64>();
        assert!((s.weighted_power(&v, |_| 1.0) - direct).abs() < 1e-12 * direct);
        let l = g.half_width();
        let f: Vec<f64> = (0..g.len())
            .map(|idx| (std::f64::consts::PI * g.coord(idx / 256) / l).sin())
            .collect();
        let m2 = g.cell_volume() * f.iter().map(|x| x * x).sum::<f64>();
        let want = (std::f64::consts::PI / l).powi(2) * m2;
        assert!((s.grad_norm_sq(&f) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn distinct_indices_cover_table() {
        let d = PaddedConvolver::distinct_index_sq(4);
        assert_eq!(d[0], 0);
        assert_eq!(*d.last().unwrap(), 48);
        assert!(!d.contains(&7));
    }
}
