use std::f64::consts::PI;

use sbp_core::analysis::beta::admits;
use sbp_core::analysis::radial::centre_spectrally;
use sbp_core::analysis::sweep::{config_hash, representable_triples, verdicts};
use sbp_core::analysis::threshold::trial_energy_on_grid;
use sbp_core::analysis::{
    beta_window, coercivity_offset, multiplier_limit, nls_alpha, nls_beta, radiality_deviation, scan_window,
    solve_rescaled, sweep_a, sweep_rho, trial_threshold, Regime, Rescaling, SweepOptions, SweepRecord,
};
use sbp_core::energy::Params;
use sbp_core::rescale::Profile;
use sbp_core::solve::{minimize, HistoryEntry, SolverConfig};
use sbp_core::{make_grid, Error, Field};

mod common;
use common::{gauss, lp_closed, rel};

fn fast() -> SolverConfig {
    SolverConfig {
        shift: 0.05,
        ..Default::default()
    }
}

#[test]
fn beta_windows_match_brute_force() {
    let (lo, hi, samples) = (-20.0, 20.0, 10_000);
    let step = (hi - lo) / (samples - 1) as f64;
    for (regime, a, b) in [(Regime::SmallRho, 2.0, 3.0), (Regime::LargeRho, 3.0, 10.0 / 3.0)] {
        for i in 1..=20 {
            let p = a + (b - a) * i as f64 / 21.0;
            let w = beta_window(p, regime).unwrap();
            let Some((first, last)) = scan_window(p, regime, lo, hi, samples) else {
                assert!(!w.nonempty, "p={p}");
                continue;
            };
            assert!(w.nonempty, "p={p}");
            if w.lower > lo {
                assert!(first > w.lower && first - step <= w.lower, "p={p} {regime:?}");
            } else {
                assert_eq!(first, lo);
            }
            assert!(last < w.upper && last + step >= w.upper, "p={p} {regime:?}");
            let mid = if w.lower.is_finite() {
                0.5 * (w.lower + w.upper)
            } else {
                w.upper - 1.0
            };
            assert!(w.contains(mid) && admits(p, mid, regime));
        }
    }
    assert!(beta_window(2.0, Regime::SmallRho).is_err());
    assert!(beta_window(10.0 / 3.0, Regime::LargeRho).is_err());
}

#[test]
fn limiting_exponents() {
    assert!((nls_beta(2.5) + 0.4).abs() < 1e-15);
    assert!((nls_alpha(2.5) - 1.2).abs() < 1e-15);
    for i in 1..10 {
        let p = 2.0 + 0.8 * i as f64 / 10.0;
        assert!((nls_alpha(p) - 2.0 - 2.0 * nls_beta(p)).abs() < 1e-13);
        assert!(nls_alpha(p) > 0.0);
    }
    assert!(nls_alpha(2.8).abs() < 1e-13);
}

#[test]
fn trial_thresholds() {
    let g = make_grid(64, 8.0).unwrap();
    let pr = Profile::gaussian_with_mass(1.0, 1.0).unwrap();
    let positive = 0.75 + 0.25 * (2.0 / PI).sqrt();

    let t = trial_threshold(&g, &pr, 2.5, -1.0, Regime::SmallRho).unwrap();
    assert!((t.alpha - 0.75).abs() < 1e-14 && (t.exponent - 3.25).abs() < 1e-14);
    let want = (lp_closed(1.0, 1.0, 2.5) / 2.5 / positive).powf(1.0 / 0.75);
    assert!(rel(t.r, want) < 1e-4 && rel(t.r, 0.114036) < 1e-4);
    assert!(t.certifies(0.5 * t.r) && !t.certifies(1.5 * t.r));
    assert!(t.trial_energy(0.5 * t.r) < 0.0);
    assert_eq!(t.boundary(), t.r);

    let t = trial_threshold(&g, &pr, 3.2, -2.0, Regime::LargeRho).unwrap();
    assert!((t.alpha - 0.8).abs() < 1e-13);
    let want = (positive / (lp_closed(1.0, 1.0, 3.2) / 3.2)).powf(1.0 / 0.8);
    assert!(rel(t.r, want) < 1e-4 && rel(t.r, 35.100) < 1e-4);
    assert!(t.certifies(2.0 * t.r) && !t.certifies(0.5 * t.r));
    assert!(t.trial_energy(2.0 * t.r) < 0.0);

    // certificate re-evaluated on a grid wide enough for the spread-out trial at ρ = R/2
    let wide = make_grid(64, 160.0).unwrap();
    let small = trial_threshold(&g, &pr, 2.5, -1.0, Regime::SmallRho).unwrap();
    let j0 = trial_energy_on_grid(&wide, &pr, -1.0, 0.5 * small.r, 0.0, 2.5)
        .unwrap()
        .total;
    let j1 = trial_energy_on_grid(&wide, &pr, -1.0, 0.5 * small.r, 1.0, 2.5)
        .unwrap()
        .total;
    assert!(j1 <= j0 && j0 < 0.0, "{j1} {j0}");

    // large-mass trial collapses below the grid spacing
    let large = trial_threshold(&g, &pr, 3.2, -2.0, Regime::LargeRho).unwrap();
    assert!(trial_energy_on_grid(&g, &pr, -2.0, 2.0 * large.r, 1.0, 3.2).is_err());
    assert!(rel(j0, small.trial_energy(0.5 * small.r)) < 1e-3);

    let err = trial_threshold(&g, &pr, 2.5, 1.0, Regime::SmallRho).unwrap_err();
    assert!(err.to_string().contains("window"));
    let heavy = Profile::gaussian_with_mass(2.0, 1.0).unwrap();
    assert!(trial_threshold(&g, &heavy, 2.5, -1.0, Regime::SmallRho).is_err());
}

#[test]
fn radiality() {
    let g = make_grid(32, 8.0).unwrap();
    let s = 1.0;
    let u = gauss(&g, 1.0, s);
    assert!(radiality_deviation(&u).unwrap() < 1e-12);
    assert!(radiality_deviation(&u.roll([3, -3, 1])).unwrap() < 1e-12);

    let off = [0.3 * g.dx(), -0.2 * g.dx(), 0.45 * g.dx()];
    let shifted = Field::from_fn(&g, |x, y, z| {
        let r2 = (x - off[0]).powi(2) + (y - off[1]).powi(2) + (z - off[2]).powi(2);
        (-0.5 * r2 / (s * s)).exp()
    });
    assert!(radiality_deviation(&shifted).unwrap() < 1e-8);
    let c = centre_spectrally(&shifted);
    let mid = g.index(16, 16, 16);
    assert!((c.values()[mid] - 1.0).abs() < 1e-8);

    // odd perturbation orthogonal to the translation modes of the Gaussian
    let h = Field::from_fn(&g, |x, y, z| {
        let r2 = (x * x + y * y + z * z) / (s * s);
        x / s * (r2 - 2.5) * (-0.5 * r2).exp()
    });
    let v = u.axpy(0.1 * (PI * s * s).powf(-0.75), &h).unwrap();
    let d = radiality_deviation(&v).unwrap();
    assert!((0.05..0.15).contains(&d), "{d}");

    assert!(radiality_deviation(&Field::zeros(&g)).is_err());
}

fn record(rho: f64, j: f64) -> SweepRecord {
    SweepRecord {
        a: 1.0,
        rho,
        p: 2.5,
        j,
        j_over_rho2: j / (rho * rho),
        omega: 0.1,
        residual: 0.0,
        h1_norm: 1.0,
        l12_5_norm: 1.0,
        l8_3_norm: 1.0,
        lp_norm: 1.0,
        radial_dev: 0.0,
        converged: true,
        provenance: String::new(),
    }
}

#[test]
fn sweep_verdicts_on_synthetic_records() {
    assert_eq!(representable_triples(&[0.3, 0.4, 0.5], 1e-9), vec![(2, 0, 1)]);
    assert_eq!(representable_triples(&[1.0, 2f64.sqrt()], 1e-9), vec![(1, 0, 0)]);
    assert!(representable_triples(&[0.5, 1.0], 1e-9).is_empty());

    let opts = SweepOptions::default();
    let good = [record(0.3, -1.0), record(0.4, -2.0), record(0.5, -3.5)];
    let v = verdicts(&good, &opts);
    assert!(v.all() && v.triples == vec![(2, 0, 1)]);

    // strict decrease of J/ρ² forces strict subadditivity, not conversely
    let kink = [record(0.3, -1.0), record(0.4, -1.5), record(0.5, -3.0)];
    let v = verdicts(&kink, &opts);
    assert!(!v.md_decreasing && v.subadditive);
    let split = [record(0.3, -1.0), record(0.4, -1.5), record(0.5, -2.4)];
    assert!(!verdicts(&split, &opts).subadditive);

    let positive = [record(0.3, 0.1), record(0.4, -2.0)];
    assert!(!verdicts(&positive, &opts).all_negative);
    let rising = [record(0.3, -1.0), record(0.4, -1.0)];
    assert!(!verdicts(&rising, &opts).md_decreasing);
}

#[test]
fn coercivity_offset_of_history() {
    let h = |energy: f64, h1_sq: f64| HistoryEntry {
        iter: 0,
        energy,
        residual: 0.0,
        h1_sq,
    };
    let c = coercivity_offset(&[h(-1.0, 4.0), h(-2.0, 2.0), h(0.5, 8.0)]);
    assert!((c - 2.5).abs() < 1e-15);
}

#[test]
fn argument_checks() {
    let g = make_grid(16, 16.0).unwrap();
    let cfg = fast();
    let err = sweep_a(&g, 0.3, 2.5, &[1.0, 0.0], &cfg, 1).unwrap_err();
    assert!(err.to_string().contains("a = 0 is the reference"));
    assert!(sweep_a(&g, 0.3, 2.5, &[0.5, 1.0], &cfg, 1).is_err());
    assert!(sweep_a(&g, 0.3, 2.9, &[1.0], &cfg, 1).is_err());
    assert!(multiplier_limit(&g, 14.0 / 5.0, 0.0, &[0.2, 0.1], 1.0, &cfg).is_err());
    assert!(multiplier_limit(&g, 2.5, 0.0, &[0.1, 0.2], 1.0, &cfg).is_err());
    assert!(sweep_rho(&g, 1.0, 2.5, &[0.5, 0.4], &cfg, &SweepOptions::default()).is_err());
    assert!(sweep_rho(&g, 1.0, 3.0, &[0.4, 0.5], &cfg, &SweepOptions::default()).is_err());
    assert!(Rescaling::new(1.0, 0.5, 2.5, 0.0).is_err());
}

#[test]
fn rescaled_solve_is_the_image_of_a_scaled_grid() {
    let (rho, mu, p) = (0.5, 0.4, 2.5);
    let s = Rescaling::new(1.0, rho, p, mu).unwrap();
    assert!(rel(s.energy_factor(), 1.25f64.powf(2.8)) < 1e-15);
    assert!(rel(s.multiplier_factor(), 1.25f64.powf(0.8)) < 1e-15);
    assert!(rel(s.a, 1.25f64.powf(0.4)) < 1e-15);

    let g = make_grid(32, 64.0).unwrap();
    let r = solve_rescaled(&g, 1.0, rho, p, mu, &fast()).unwrap();
    let h = make_grid(32, 64.0 * s.theta.powf(s.beta)).unwrap();
    let direct = minimize(&h, &Params::new(1.0, rho, p).unwrap(), &fast()).unwrap();
    assert!(r.scaled.converged && direct.converged);
    assert!(rel(r.energy.total, direct.energy.total) < 1e-9);
    assert!(rel(r.omega, direct.omega) < 1e-6);
}

#[test]
fn small_sweep() {
    let g = make_grid(32, 64.0).unwrap();
    let cfg = fast();
    let rhos = [0.3, 0.4, 0.5];
    let serial = sweep_rho(&g, 1.0, 2.5, &rhos, &cfg, &SweepOptions::default()).unwrap();
    assert!(serial.verdicts.all(), "{:?}", serial.verdicts);
    assert_eq!(serial.verdicts.triples, vec![(2, 0, 1)]);
    let parallel = sweep_rho(
        &g,
        1.0,
        2.5,
        &rhos,
        &cfg,
        &SweepOptions {
            threads: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(serial, parallel);
    let hashes: Vec<&str> = serial.records.iter().map(|r| r.provenance.as_str()).collect();
    assert!(hashes.iter().all(|h| h.len() == 64) && hashes[0] != hashes[1]);
    let params = Params::new(1.0, 0.3, 2.5).unwrap();
    assert_eq!(config_hash(&g, &params, &cfg), hashes[0]);

    let capped = SolverConfig { max_iter: 2, ..cfg };
    match sweep_rho(&g, 1.0, 2.5, &rhos, &capped, &SweepOptions::default()) {
        Err(Error::SweepAborted { partial, reason }) => {
            assert_eq!(partial.len(), 3);
            assert!(reason.contains("did not converge"));
        }
        other => panic!("expected an aborted sweep, got {other:?}"),
    }
}
