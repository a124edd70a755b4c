use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sbp_core::kernels::{
    coulomb_truncated_ft_closed, kappa, multiplier_table, truncated_ft, truncation_window, KernelKind, KernelSpec,
};
use sbp_core::{make_grid, Error};

/// Complex numbers as `(re, im)` pairs, enough for the closed forms below.
#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn exp(self) -> C {
        let m = self.0.exp();
        C(m * self.1.cos(), m * self.1.sin())
    }
}

/// `(4π/k) ∫₀^T r e^{−r/a} sin(kr) dr` via `∫ r e^{cr} = [e^{cT}(cT − 1) + 1]/c²`, `c = −1/a + ik`.
fn exp_ft_closed(a: f64, t: f64, k: f64) -> f64 {
    let c = C(-1.0 / a, k);
    let ect = C(c.0 * t, c.1 * t).exp();
    let top = ect.mul(C(c.0 * t - 1.0, c.1 * t));
    4.0 * PI / k * C(top.0 + 1.0, top.1).div(c.mul(c)).1
}

/// `(4π/k) ∫₀^T (1 − e^{−r/a}) sin(kr) dr`.
fn bp_ft_closed(a: f64, t: f64, k: f64) -> f64 {
    let c = C(-1.0 / a, k);
    let e = c.mul(C(t, 0.0)).exp();
    let exp_part = C(e.0 - 1.0, e.1).div(c).1;
    4.0 * PI / k * ((1.0 - (k * t).cos()) / k - exp_part)
}

#[test]
fn kappa_examples() {
    assert!((kappa(1.0, 1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-15);
    assert!((kappa(1.0, 1.0).unwrap() - 0.632121).abs() < 1e-6);
    assert!((kappa(1.0, 1e-8).unwrap() - 1.0).abs() < 1e-7);
    assert_eq!(kappa(0.0, 2.0).unwrap(), 0.5);
    assert!(kappa(1.0, 0.0).is_err());
    assert!(kappa(1.0, -1.0).is_err());
}

#[test]
fn kernel_bounds_and_decomposition() {
    for a in [0.01, 0.3, 1.0, 7.0] {
        for i in 0..200 {
            let r = a * 10f64.powf(-5.0 + 6.0 * i as f64 / 199.0);
            let k = kappa(a, r).unwrap();
            assert!(k > 0.0 && k < (1.0 / r).min(1.0 / a), "a={a} r={r}");
            if r / a > 1e-2 {
                let want = 1.0 / r - (-r / a).exp() / r;
                assert!((k - want).abs() <= 1e-12 * k, "a={a} r={r}");
            }
            assert!(kappa(a * 1.001, r).unwrap() < k);
        }
    }
}

#[test]
fn coulomb_transform_examples() {
    let spec = KernelSpec::new(KernelKind::Coulomb, 0.0, 1.0).unwrap();
    assert!((truncated_ft(&spec, PI) - 8.0 / PI).abs() < 1e-12);
    assert!((8.0 / PI - 2.546479).abs() < 1e-6);
    assert!((truncated_ft(&spec, 0.0) - 2.0 * PI).abs() < 1e-12);
    for i in 0..61 {
        let k = 10f64.powf(-3.0 + 6.0 * i as f64 / 60.0);
        let want = 4.0 * PI * (1.0 - (k * 1.0).cos()) / (k * k);
        let got = truncated_ft(&spec, k);
        let scale = (8.0 * PI / (k * k)).min(2.0 * PI);
        assert!(
            (got - coulomb_truncated_ft_closed(1.0, k)).abs() <= 1e-12 * scale,
            "k={k}"
        );
        // 1 − cos kT cancels at small k
        assert!((got - want).abs() <= 1e-12 * scale + 1e-15 / (k * k), "k={k}");
    }
}

#[test]
fn screened_transforms_match_closed_forms() {
    let bp = KernelSpec::new(KernelKind::BoppPodolsky, 1.0, 4.0).unwrap();
    let x = truncated_ft(&bp, 1.0);
    assert!((x - bp_ft_closed(1.0, 4.0, 1.0)).abs() < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pe = KernelSpec::new(KernelKind::PureExponential, 1.0, 20.0).unwrap();
    for _ in 0..10 {
        let k = rng.gen_range(0.01..30.0);
        assert!(
            (truncated_ft(&pe, k) - exp_ft_closed(1.0, 20.0, k)).abs() < 1e-10,
            "k={k}"
        );
        assert!(
            (truncated_ft(&bp, k) - bp_ft_closed(1.0, 4.0, k)).abs() < 1e-10,
            "k={k}"
        );
    }
    // k = 0: 4π ∫₀^T r² e^{−r} dr
    let want = 4.0 * PI * (2.0 - (-20f64).exp() * 442.0);
    assert!((truncated_ft(&pe, 0.0) - want).abs() < 1e-10);
}

#[test]
fn tables() {
    let g = make_grid(16, 4.0).unwrap();
    let spec = KernelSpec::for_grid(KernelKind::Coulomb, 0.0, &g).unwrap();
    let t = multiplier_table(&g, &spec).unwrap();
    let t0 = t.get(0).unwrap();
    assert!((t0 - 2.0 * PI * spec.truncation.powi(2)).abs() < 1e-10 * t0);

    let pe = KernelSpec::for_grid(KernelKind::PureExponential, 1.0, &g).unwrap();
    let table = multiplier_table(&g, &pe).unwrap();
    let entries = table.entries();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (k, v) = entries[rng.gen_range(1..entries.len())];
        assert!((v - exp_ft_closed(1.0, pe.truncation, k)).abs() < 1e-10, "k={k}");
    }

    let (lo, hi) = truncation_window(&g);
    let small = KernelSpec::new(KernelKind::Coulomb, 0.0, 0.9 * lo).unwrap();
    assert!(matches!(multiplier_table(&g, &small), Err(Error::BoxTooSmall(_))));
    let big = KernelSpec::new(KernelKind::Coulomb, 0.0, 1.1 * hi).unwrap();
    assert!(matches!(multiplier_table(&g, &big), Err(Error::BoxTooSmall(_))));
}

#[test]
fn spec_validation() {
    assert!(KernelSpec::new(KernelKind::BoppPodolsky, 0.0, 1.0).is_err());
    assert!(KernelSpec::new(KernelKind::PureExponential, -1.0, 1.0).is_err());
    assert!(KernelSpec::new(KernelKind::Coulomb, 0.0, 0.0).is_err());
    assert!(KernelSpec::new(KernelKind::Coulomb, 0.0, 1.0).is_ok());
}
