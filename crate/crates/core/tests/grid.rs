use sbp_core::analysis::oracle;
use sbp_core::grid::{grad_norm_sq, h1_norm_sq, inner_l2, lp_norm, lp_norm_pow};
use sbp_core::{make_grid, Field};

fn unit_gaussian(n: usize, l: f64) -> Field {
    let g = make_grid(n, l).unwrap();
    let (u, _) = oracle::gaussian(1.0, 1.0);
    Field::radial(&g, u)
}

#[test]
fn make_grid_examples() {
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
    assert_eq!(k.len(), 16);
    let unit = std::f64::consts::PI / 3.0;
    let nyquist = 8.0 * unit;
    for &kj in k {
        if (kj - nyquist).abs() > 1e-12 {
            assert!(k.iter().any(|&m| (m + kj).abs() < 1e-12), "{kj} has no mirror");
        }
    }
    assert_eq!(g.dx() * g.n() as f64, 6.0);
}

#[test]
fn gaussian_norms_against_radial_quadrature() {
    let u = unit_gaussian(64, 8.0);
    let mass = oracle::radial_integral(1.0, |r| oracle::gaussian(1.0, 1.0).0(r).powi(2)).sqrt();
    assert!((lp_norm(&u, 2.0).unwrap() - mass).abs() < 1e-8);
    assert!((mass - 1.0).abs() < 1e-12);
    let want = oracle::gaussian_lp_pow(1.0, 1.0, 2.5);
    let closed = std::f64::consts::PI.powf(-1.875) * (2.0 * std::f64::consts::PI / 2.5).powf(1.5);
    assert!((want - closed).abs() < 1e-12);
    assert!((lp_norm_pow(&u, 2.5).unwrap() - want).abs() < 1e-8);
    assert!((want - 0.4658).abs() < 1e-4);
    let t = oracle::gaussian_grad_sq(1.0, 1.0);
    assert!((t - 1.5).abs() < 1e-12);
    assert!((grad_norm_sq(&u) - t).abs() < 1e-6);
    assert!((h1_norm_sq(&u) - 2.5).abs() < 1e-6);
}

#[test]
fn trivial_norms() {
    let g = make_grid(8, 2.0).unwrap();
    let z = Field::zeros(&g);
    assert_eq!(lp_norm(&z, 3.0).unwrap(), 0.0);
    assert!(lp_norm(&z, 0.5).is_err());
    let c = Field::from_fn(&g, |_, _, _| 2.0);
    assert!(grad_norm_sq(&c).abs() < 1e-20);
    let l = g.half_width();
    let s = Field::from_fn(&g, |x, _, _| (std::f64::consts::PI * x / l).sin());
    let want = (std::f64::consts::PI / l).powi(2) * lp_norm(&s, 2.0).unwrap().powi(2);
    assert!((grad_norm_sq(&s) - want).abs() < 1e-12 * want);
}

#[test]
fn inner_product_matches_direct_sum() {
    let g = make_grid(8, 2.0).unwrap();
    let f = Field::from_fn(&g, |x, y, z| (x - 0.3 * y).cos() + z);
    let h = f.map(|v| v.powi(3) * if v > 0.5 { 1.0 } else { -1.0 });
    let mut direct = 0.0;
    for (a, b) in f.values().iter().zip(h.values()) {
        direct += a * b;
    }
    direct *= g.cell_volume();
    let got = inner_l2(&f, &h).unwrap();
    assert!((got - direct).abs() < 1e-12 * direct.abs());
    assert!((inner_l2(&f, &f).unwrap() - lp_norm(&f, 2.0).unwrap().powi(2)).abs() < 1e-12);
    assert_eq!(inner_l2(&f, &Field::zeros(&g)).unwrap(), 0.0);
    let other = make_grid(8, 3.0).unwrap();
    assert!(inner_l2(&f, &Field::zeros(&other)).is_err());
}

#[test]
fn field_rejects_bad_samples() {
    let g = make_grid(8, 1.0).unwrap();
    assert!(Field::new(&g, vec![0.0; 10]).is_err());
    let mut v = vec![0.0; g.len()];
    v[3] = f64::NAN;
    assert!(Field::new(&g, v).is_err());
}

#[test]
fn norms_invariant_under_whole_cell_shifts() {
    let u = unit_gaussian(32, 6.0);
    let v = u.roll([3, -2, 5]);
    assert!((lp_norm(&u, 2.7).unwrap() - lp_norm(&v, 2.7).unwrap()).abs() < 1e-12);
    assert!((grad_norm_sq(&u) - grad_norm_sq(&v)).abs() < 1e-12);
}

/// One-sided differences converge to the spectral value at second order in `dx`.
#[test]
fn spectral_gradient_matches_finite_differences() {
    let l = 6.0;
    let f = |x: f64, y: f64, z: f64| (-(x * x + 0.5 * y * y + 2.0 * z * z) / 2.0).exp();
    let mut errors = Vec::new();
    for n in [24, 48] {
        let g = make_grid(n, l).unwrap();
        let u = Field::from_fn(&g, f);
        let spectral = grad_norm_sq(&u);
        let v = u.values();
        let mut fd = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = v[g.index(i, j, k)];
                    for nb in [
                        g.index((i + 1) % n, j, k),
                        g.index(i, (j + 1) % n, k),
                        g.index(i, j, (k + 1) % n),
                    ] {
                        fd += ((v[nb] - c) / g.dx()).powi(2);
                    }
                }
            }
        }
        fd *= g.cell_volume();
        errors.push((fd - spectral).abs());
    }
    let order = (errors[0] / errors[1]).log2();
    assert!(order > 1.8, "observed order {order}, errors {errors:?}");
}
