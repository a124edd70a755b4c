//! Distance of a state from radial symmetry about its centre of mass.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::fft::spectral;
use crate::grid::{neumaier_sum, Field};
use crate::solve::density_centre;

/// Translates `u` so the centre of mass of `u²` sits on the grid origin, using a
/// band-limited sub-cell shift.
pub fn centre_spectrally(u: &Field) -> Field {
    let g = u.grid();
    let n = g.n() as f64;
    let c = density_centre(u);
    let d = c.map(|ci| {
        let cells = n / 2.0 - ci;
        (cells - n * (cells / n).round()) * g.dx()
    });
    Field::from_vec_unchecked(g, spectral(g).translate(u.values(), d))
}

/// `‖u − ū(|·|)‖₂ / ‖u‖₂` after centring, with `ū` the mean of `u` over each exact lattice
/// shell `i² + j² + l² = s` around the origin.
pub fn radiality_deviation(u: &Field) -> Result<f64> {
    let total = neumaier_sum(u.values().iter().map(|v| v * v));
    if !(total > 0.0) {
        return Err(invalid("radiality of the zero field is undefined"));
    }
    let c = centre_spectrally(u);
    let n = u.grid().n();
    let h = (n / 2) as i64;
    let shell = |idx: usize| {
        let d = |k: usize| (k as i64 - h).pow(2) as u64;
        d(idx / (n * n)) + d((idx / n) % n) + d(idx % n)
    };
    let mut sums: HashMap<u64, (f64, usize)> = HashMap::new();
    for (idx, &v) in c.values().iter().enumerate() {
        let e = sums.entry(shell(idx)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let dev = neumaier_sum(c.values().iter().enumerate().map(|(idx, &v)| {
        let (s, k) = sums[&shell(idx)];
        (v - s / k as f64).powi(2)
    }));
    Ok((dev / neumaier_sum(c.values().iter().map(|v| v * v))).sqrt())
}
