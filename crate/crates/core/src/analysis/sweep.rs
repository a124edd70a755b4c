//! Mass sweeps with the negativity, monotonicity and subadditivity verdicts, and the
//! `a → 0` convergence sweep.

use std::fmt::Write as _;
use std::thread;

use sha2::{Digest, Sha256};

use crate::analysis::radial::{centre_spectrally, radiality_deviation};
use crate::energy::{self, hls_constant_estimate, Params};
use crate::error::{invalid, Error, Result};
use crate::fft::spectral;
use crate::grid::{grad_norm_sq, lp_norm, Field, Grid};
use crate::io::fmt_f64;
use crate::rescale::{sample, Profile};
use crate::solve::{gaussian_ansatz_width, minimize, MinimizeResult, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub a: f64,
    pub rho: f64,
    pub p: f64,
    pub j: f64,
    pub j_over_rho2: f64,
    pub omega: f64,
    pub residual: f64,
    pub h1_norm: f64,
    pub l12_5_norm: f64,
    pub l8_3_norm: f64,
    pub lp_norm: f64,
    pub radial_dev: f64,
    pub converged: bool,
    /// SHA-256 of the grid, parameters and solver settings that produced the record.
    pub provenance: String,
}

impl SweepRecord {
    pub fn from_result(
        grid: &Grid,
        params: &Params,
        config: &SolverConfig,
        res: &MinimizeResult,
    ) -> Result<SweepRecord> {
        let u = &res.u;
        Ok(SweepRecord {
            a: params.a,
            rho: params.rho,
            p: params.p,
            j: res.energy.total,
            j_over_rho2: res.energy.total / (params.rho * params.rho),
            omega: res.omega,
            residual: res.residual,
            h1_norm: (grad_norm_sq(u) + lp_norm(u, 2.0)?.powi(2)).sqrt(),
            l12_5_norm: lp_norm(u, 12.0 / 5.0)?,
            l8_3_norm: lp_norm(u, 8.0 / 3.0)?,
            lp_norm: lp_norm(u, params.p)?,
            radial_dev: radiality_deviation(u)?,
            converged: res.converged,
            provenance: config_hash(grid, params, config),
        })
    }
}

/// Hex SHA-256 of a canonical text rendering of the run inputs.
pub fn config_hash(grid: &Grid, params: &Params, config: &SolverConfig) -> String {
    let text = format!(
        "n={};L={};a={};rho={};p={};q={};solver={:?}",
        grid.n(),
        fmt_f64(grid.half_width()),
        fmt_f64(params.a),
        fmt_f64(params.rho),
        fmt_f64(params.p),
        fmt_f64(params.coupling),
        config
    );
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Relative margin for the strict decrease of `J/ρ²`.
    pub md_margin: f64,
    /// Relative margin for strict subadditivity.
    pub subadditivity_margin: f64,
    /// Relative tolerance when matching `√(ρ²−μ²)` against the list.
    pub match_tol: f64,
    /// Worker threads; `1` runs serially.
    pub threads: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            md_margin: 1e-6,
            subadditivity_margin: 1e-6,
            match_tol: 1e-9,
            threads: 1,
        }
    }
}

/// Indices `(ρ, μ, ν)` with `μ ≤ ν` and `ρ² = μ² + ν²`.
pub type Triple = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct SweepVerdicts {
    pub all_negative: bool,
    pub md_decreasing: bool,
    pub subadditive: bool,
    pub triples: Vec<Triple>,
}

impl SweepVerdicts {
    pub fn all(&self) -> bool {
        self.all_negative && self.md_decreasing && self.subadditive
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub verdicts: SweepVerdicts,
}

/// Triples of the list representable as `ρ² = μ² + ν²`.
pub fn representable_triples(rhos: &[f64], tol: f64) -> Vec<Triple> {
    let mut out = Vec::new();
    for (k, &rho) in rhos.iter().enumerate() {
        for (i, &mu) in rhos.iter().enumerate() {
            if !(mu < rho) {
                continue;
            }
            let nu = (rho * rho - mu * mu).sqrt();
            if let Some(j) = rhos.iter().position(|&x| (x - nu).abs() <= tol * rho) {
                if i <= j {
                    out.push((k, i, j));
                }
            }
        }
    }
    out
}

pub fn verdicts(records: &[SweepRecord], opts: &SweepOptions) -> SweepVerdicts {
    let rhos: Vec<f64> = records.iter().map(|r| r.rho).collect();
    let triples = representable_triples(&rhos, opts.match_tol);
    let md_decreasing = records
        .windows(2)
        .all(|w| w[1].j_over_rho2 < w[0].j_over_rho2 - opts.md_margin * w[0].j_over_rho2.abs());
    let subadditive = triples.iter().all(|&(k, i, j)| {
        let split = records[i].j + records[j].j;
        records[k].j < split - opts.subadditivity_margin * records[k].j.abs()
    });
    SweepVerdicts {
        all_negative: records.iter().all(|r| r.j < 0.0),
        md_decreasing,
        subadditive,
        triples,
    }
}

/// Runs `job` over `0..count`, on up to `threads` scoped workers, returning results in index
/// order.
fn run_indexed<T: Send>(count: usize, threads: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    if threads <= 1 || count <= 1 {
        return (0..count).map(job).collect();
    }
    let workers = threads.min(count);
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                s.spawn(move || (w..count).step_by(workers).map(|i| (i, job(i))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|v| v.expect("every index computed")).collect()
}

/// Solves at every mass and evaluates the verdicts.
pub fn sweep_rho(
    grid: &Grid,
    a: f64,
    p: f64,
    rhos: &[f64],
    config: &SolverConfig,
    opts: &SweepOptions,
) -> Result<SweepReport> {
    if rhos.is_empty() || rhos.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("rhos must be nonempty and strictly increasing"));
    }
    let all_params = rhos
        .iter()
        .map(|&rho| {
            let params = Params::new(a, rho, p)?;
            params.check_solver_target()?;
            Ok(params)
        })
        .collect::<Result<Vec<_>>>()?;
    config.validate()?;
    let outcomes = run_indexed(rhos.len(), opts.threads, |i| {
        let params = &all_params[i];
        minimize(grid, params, config).and_then(|res| SweepRecord::from_result(grid, params, config, &res))
    });
    let mut records = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    for (o, rho) in outcomes.into_iter().zip(rhos) {
        match o {
            Ok(r) if r.converged => records.push(r),
            Ok(r) => {
                failure.get_or_insert(format!(
                    "run at rho = {rho} did not converge (residual {:e})",
                    r.residual
                ));
                records.push(r);
            }
            Err(e) => {
                failure.get_or_insert(format!("run at rho = {rho} failed: {e}"));
            }
        }
    }
    if let Some(reason) = failure {
        return Err(Error::SweepAborted {
            reason,
            partial: records,
        });
    }
    let verdicts = verdicts(&records, opts);
    Ok(SweepReport { records, verdicts })
}

/// One `a` of the convergence sweep, compared with the `a = 0` reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ARow {
    pub record: SweepRecord,
    /// `J_{0,ρ} − J_{a,ρ}`.
    pub gap_j: f64,
    /// `‖u_a − u_0‖_{H¹}` after centring both.
    pub du_h1: f64,
    /// `‖∇(φ_a − φ_0)‖₂`.
    pub dphi_d12: f64,
    /// `a‖Δφ_a‖₂`, computed as `‖u_a² ∗ (e^{−r/a}/r)‖₂ / a`.
    pub a_lap_phi_l2: f64,
    /// `|ω_a − ω_0|`.
    pub domega: f64,
    /// `f(a) = D_0(u_a) − D_a(u_a)`.
    pub f_a: f64,
    /// `4π a|log a| ‖u_a‖_{8/3}⁴ + K a ‖u_a‖_{12/5}⁴`.
    pub f_a_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AVerdicts {
    pub gaps_nonnegative: bool,
    /// Each of the five reported differences strictly decreases along the list.
    pub decreasing: [bool; 5],
    pub f_within_bound: bool,
}

impl AVerdicts {
    pub fn all(&self) -> bool {
        self.gaps_nonnegative && self.decreasing.iter().all(|&b| b) && self.f_within_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AReport {
    pub reference: SweepRecord,
    pub rows: Vec<ARow>,
    /// Measured `sup D_0(u)/‖u‖_{12/5}⁴` over Gaussians and the computed states.
    pub hls_constant: f64,
    pub verdicts: AVerdicts,
}

pub const A_REPORT_NAMES: [&str; 5] = ["gap_J", "du_H1", "dphi_D12", "a_lap_phi_L2", "domega"];

/// Solves SPS and SBP at each `a` of a decreasing positive list and reports the
/// convergence quantities.
pub fn sweep_a(
    grid: &Grid,
    rho: f64,
    p: f64,
    a_values: &[f64],
    config: &SolverConfig,
    threads: usize,
) -> Result<AReport> {
    if !(p > 2.0 && p < 14.0 / 5.0) {
        return Err(invalid(format!("a-sweep needs 2 < p < 14/5, got {p}")));
    }
    if a_values.is_empty() || a_values.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(invalid(
            "a values must be positive; a = 0 is the reference solve and is added automatically",
        ));
    }
    if a_values.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(invalid("a values must be strictly decreasing"));
    }
    config.validate()?;
    let mut all_a = vec![0.0];
    all_a.extend_from_slice(a_values);
    let all_params = all_a
        .iter()
        .map(|&a| {
            let params = Params::new(a, rho, p)?;
            params.check_solver_target()?;
            Ok(params)
        })
        .collect::<Result<Vec<_>>>()?;
    let outcomes = run_indexed(all_a.len(), threads, |i| minimize(grid, &all_params[i], config));
    let mut results = Vec::with_capacity(outcomes.len());
    let mut partial = Vec::new();
    let mut failure = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(res) => {
                let rec = SweepRecord::from_result(grid, &all_params[i], config, &res)?;
                if !res.converged {
                    failure.get_or_insert(format!(
                        "run at a = {} did not converge (residual {:e})",
                        all_a[i], res.residual
                    ));
                }
                partial.push(rec);
                results.push(res);
            }
            Err(e) => {
                failure.get_or_insert(format!("run at a = {} failed: {e}", all_a[i]));
            }
        }
    }
    if let Some(reason) = failure {
        return Err(Error::SweepAborted { reason, partial });
    }

    let states: Vec<Field> = results.iter().map(|r| centre_spectrally(&r.u)).collect();
    let mut family = states.clone();
    let s0 = gaussian_ansatz_width(rho, p);
    for f in [0.25, 0.5, 1.0, 2.0] {
        if let Ok(g) = Profile::gaussian_with_mass(1.0, f * s0).and_then(|pr| sample(grid, &pr)) {
            family.push(g);
        }
    }
    let hls_constant = hls_constant_estimate(grid, &family)?;

    let spec = spectral(grid);
    let u0 = &states[0];
    let phi0 = energy::solve_phi(grid, u0, 0.0)?;
    let reference = partial[0].clone();
    let mut rows = Vec::with_capacity(a_values.len());
    for (i, &a) in a_values.iter().enumerate() {
        let ua = &states[i + 1];
        let rec = partial[i + 1].clone();
        let diff = ua.axpy(-1.0, u0)?;
        let du_h1 = (grad_norm_sq(&diff) + lp_norm(&diff, 2.0)?.powi(2)).sqrt();
        let phia = energy::solve_phi(grid, ua, a)?;
        let dphi = phia.axpy(-1.0, &phi0)?;
        let dphi_d12 = spec.grad_norm_sq(dphi.values()).sqrt();
        let coulomb_a = energy::solve_phi(grid, ua, 0.0)?;
        let screened = coulomb_a.axpy(-1.0, &phia)?;
        let a_lap_phi_l2 = lp_norm(&screened, 2.0)? / a;
        let d0 = energy::coupling(grid, ua, 0.0)?;
        let da = energy::coupling(grid, ua, a)?;
        let f_a = d0 - da;
        let f_a_bound = 4.0 * std::f64::consts::PI * a * a.ln().abs() * rec.l8_3_norm.powi(4)
            + hls_constant * a * rec.l12_5_norm.powi(4);
        rows.push(ARow {
            gap_j: reference.j - rec.j,
            du_h1,
            dphi_d12,
            a_lap_phi_l2,
            domega: (rec.omega - reference.omega).abs(),
            f_a,
            f_a_bound,
            record: rec,
        });
    }
    let quantity = |r: &ARow, k: usize| match k {
        0 => r.gap_j,
        1 => r.du_h1,
        2 => r.dphi_d12,
        3 => r.a_lap_phi_l2,
        _ => r.domega,
    };
    let decreasing = std::array::from_fn(|k| rows.windows(2).all(|w| quantity(&w[1], k) < quantity(&w[0], k)));
    let verdicts = AVerdicts {
        gaps_nonnegative: rows.iter().all(|r| r.gap_j >= 0.0),
        decreasing,
        f_within_bound: rows.iter().all(|r| r.f_a <= r.f_a_bound),
    };
    Ok(AReport {
        reference,
        rows,
        hls_constant,
        verdicts,
    })
}
