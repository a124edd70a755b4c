//! Adaptive Gauss–Kronrod (7, 15) quadrature on finite intervals.

use crate::grid::neumaier_sum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 30;
const ROUNDOFF: f64 = 256.0 * f64::EPSILON;

/// Kronrod estimate, Kronrod–Gauss gap and Kronrod estimate of `∫|f|`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for k in 0..7 {
        let d = h * XGK[k];
        let (fl, fr) = (f(c - d), f(c + d));
        kron += WGK[k] * (fl + fr);
        abs += WGK[k] * (fl.abs() + fr.abs());
        if k % 2 == 1 {
            gauss += WG[k / 2] * (fl + fr);
        }
    }
    (kron * h, ((kron - gauss) * h).abs(), abs * h.abs())
}

/// Integral of `f` over `[a, b]`, bisecting until each piece's Kronrod–Gauss gap is below
/// its length share of `abs_tol`. The tolerance is floored at a few hundred ulps of `∫|f|`,
/// below which evaluation noise in `f` dominates.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    integrate_panels(f, &[a, b], abs_tol)
}

/// Integral over `[breaks[0], breaks[last]]`, split at the given breakpoints first.
pub fn integrate_panels(f: impl Fn(f64) -> f64, breaks: &[f64], abs_tol: f64) -> f64 {
    let span = breaks[breaks.len() - 1] - breaks[0];
    if !(span > 0.0) {
        return 0.0;
    }
    let mut first = Vec::new();
    let mut total_abs = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let est = gk15(&f, w[0], w[1]);
            total_abs += est.2;
            first.push((w[0], w[1], est));
        }
    }
    let tol = abs_tol.max(ROUNDOFF * total_abs);
    let mut parts = Vec::new();
    for (a, b, est) in first {
        refine(&f, a, b, est, tol * (b - a) / span, 0, &mut parts);
    }
    neumaier_sum(parts)
}

fn refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, est: (f64, f64, f64), tol: f64, depth: u32, out: &mut Vec<f64>) {
    let (v, err, _) = est;
    if err <= tol || depth >= MAX_DEPTH || b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        out.push(v);
        return;
    }
    let c = 0.5 * (a + b);
    refine(f, a, c, gk15(f, a, c), 0.5 * tol, depth + 1, out);
    refine(f, c, b, gk15(f, c, b), 0.5 * tol, depth + 1, out);
}
