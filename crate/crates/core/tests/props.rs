use proptest::prelude::*;
use sbp_core::energy::{coupling, energy, Params};
use sbp_core::io::{decode_field, encode_field, FieldMeta};
use sbp_core::kernels::kappa;
use sbp_core::{make_grid, Field};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_is_bounded(a in 1e-3f64..1e3, t in -6.0f64..6.0) {
        let r = a * 10f64.powf(t);
        let k = kappa(a, r).unwrap();
        prop_assert!(k > 0.0);
        prop_assert!(k <= 1.0 / r && k <= 1.0 / a);
        prop_assert!((1.0 / r - k - (-r / a).exp() / r).abs() <= 1e-12 / r);
    }

    #[test]
    fn kappa_decreases_in_a(a in 1e-2f64..1e2, f in 1.01f64..10.0, r in 1e-3f64..1e2) {
        let (k1, k2) = (kappa(a, r).unwrap(), kappa(a * f, r).unwrap());
        prop_assert!(k2 <= k1);
        prop_assert!(k1 <= kappa(0.0, r).unwrap());
        if r / a < 20.0 {
            prop_assert!(k2 < k1 && k1 < kappa(0.0, r).unwrap());
        }
    }

    #[test]
    fn field_bytes_round_trip(seed in any::<u64>(), n in 4usize..7, l in 0.5f64..20.0, rho in 1e-3f64..10.0) {
        let n = 2 * n;
        let g = make_grid(n, l).unwrap();
        let f = Field::from_fn(&g, |x, y, z| ((seed % 97) as f64 * x + y * y - z).sin());
        let meta = FieldMeta { a: l / 3.0, rho, p: 2.0 + rho.fract(), kind: "u".into() };
        let (back, m) = decode_field(&encode_field(&f, &meta)).unwrap();
        prop_assert_eq!(m, meta);
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn energy_invariant_under_cell_shifts(i in -2i64..3, j in -2i64..3, k in -2i64..3, a in 0.0f64..2.0) {
        let g = make_grid(16, 8.0).unwrap();
        let u = Field::radial(&g, |r| (-0.5 * r * r).exp());
        let pr = Params::new(a, 1.0, 2.6).unwrap();
        let e = energy(&g, &u, &pr).unwrap().total;
        let s = energy(&g, &u.roll([i, j, k]), &pr).unwrap().total;
        prop_assert!((e - s).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn coupling_decreases_in_a(a in 0.05f64..2.0, f in 1.1f64..4.0) {
        let g = make_grid(16, 8.0).unwrap();
        let u = Field::radial(&g, |r| (-0.5 * r * r).exp());
        let d1 = coupling(&g, &u, a).unwrap();
        let d2 = coupling(&g, &u, a * f).unwrap();
        prop_assert!(d2 < d1 && d1 < coupling(&g, &u, 0.0).unwrap());
    }
}
