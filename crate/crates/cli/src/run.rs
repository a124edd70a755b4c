//! Command dispatch, artifact writing and the manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sbp_core::analysis::identities::{self, Check};
use sbp_core::analysis::sweep::A_REPORT_NAMES;
use sbp_core::analysis::threshold::trial_energy_on_grid;
use sbp_core::analysis::{
    beta_window, coercivity_offset, multiplier_limit, radiality_deviation, scan_window, sweep_a, sweep_rho,
    trial_threshold, AReport, MultiplierLimit, Regime, SweepRecord, SweepReport,
};
use sbp_core::energy::Params;
use sbp_core::io::{self, fmt_f64, FieldMeta};
use sbp_core::rescale::Profile;
use sbp_core::solve::{minimize, Init, MinimizeResult, SolverConfig};
use sbp_core::{make_grid, Grid};

use crate::config::{Command, RunConfig};

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Every run converged and every verdict holds.
    Ok = 0,
    /// Completed, but a verdict failed or a run did not converge.
    VerdictFailed = 1,
    /// The configuration or command line was rejected.
    BadConfig = 2,
    /// The output directory could not be prepared or written.
    Output = 3,
    /// A computation raised an error; partial artifacts are on disk.
    Failed = 4,
}

#[derive(Debug)]
pub struct RunError {
    pub status: Status,
    pub message: String,
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for RunError {}

/// Artifacts and verdicts collected while a command runs.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
    verdicts: Vec<(String, bool)>,
    notes: Vec<(String, String)>,
}

impl Outputs {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        fs::write(self.dir.join(name), contents).map_err(|e| RunError {
            status: Status::Output,
            message: format!("cannot write {}: {e}", self.dir.join(name).display()),
        })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_bytes(&mut self, name: &str, contents: &[u8]) -> Result<(), RunError> {
        fs::write(self.dir.join(name), contents).map_err(|e| RunError {
            status: Status::Output,
            message: format!("cannot write {}: {e}", self.dir.join(name).display()),
        })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.push((name.to_string(), ok));
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }
}

fn failed(e: impl std::fmt::Display) -> RunError {
    RunError {
        status: Status::Failed,
        message: e.to_string(),
    }
}

/// Creates `dir` and proves it writable with a probe file that is removed again.
pub fn prepare_output(dir: &Path) -> Result<(), RunError> {
    let io_err = |e: std::io::Error| RunError {
        status: Status::Output,
        message: format!("output directory {} is not writable: {e}", dir.display()),
    };
    fs::create_dir_all(dir).map_err(io_err)?;
    let probe = dir.join(".sbp-write-probe");
    fs::write(&probe, b"").map_err(io_err)?;
    fs::remove_file(&probe).map_err(io_err)?;
    Ok(())
}

/// Runs `config` with sweep points spread over `threads` workers, writing every artifact and
/// the manifest into the output directory.
pub fn run(config: &RunConfig, threads: usize) -> Result<Status, RunError> {
    prepare_output(&config.output_dir)?;
    let started = Instant::now();
    let mut out = Outputs {
        dir: config.output_dir.clone(),
        files: Vec::new(),
        verdicts: Vec::new(),
        notes: Vec::new(),
    };
    let result = dispatch(config, threads.max(1), &mut out);
    let status = match &result {
        Ok(()) if out.verdicts.iter().all(|(_, ok)| *ok) => Status::Ok,
        Ok(()) => Status::VerdictFailed,
        Err(e) => e.status,
    };
    let manifest = manifest(
        config,
        &out,
        status,
        result.as_ref().err(),
        started.elapsed().as_secs_f64(),
    );
    fs::write(out.dir.join("manifest.txt"), manifest).map_err(|e| RunError {
        status: Status::Output,
        message: format!("cannot write manifest: {e}"),
    })?;
    match result {
        Ok(()) => Ok(status),
        Err(e) => Err(e),
    }
}

fn manifest(config: &RunConfig, out: &Outputs, status: Status, error: Option<&RunError>, wall: f64) -> String {
    let mut m = String::new();
    let state = match status {
        Status::Ok => "ok",
        Status::VerdictFailed => "verdict_failed",
        _ => "failed",
    };
    let _ = writeln!(m, "status={state}");
    let _ = writeln!(m, "exit_code={}", status as i32);
    let _ = writeln!(m, "command={}", config.command.name());
    let _ = writeln!(m, "sbp_cli_version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "wall_time_s={wall:.3}");
    if let Some(e) = error {
        let _ = writeln!(m, "error={}", e.message.replace('\n', " "));
    }
    for (k, v) in &config.echo {
        let _ = writeln!(m, "config.{k}={v}");
    }
    for (k, ok) in &out.verdicts {
        let _ = writeln!(m, "verdict.{k}={ok}");
    }
    for (k, v) in &out.notes {
        let _ = writeln!(m, "{k}={v}");
    }
    for (i, f) in out.files.iter().enumerate() {
        let _ = writeln!(m, "artifact.{}={f}", i + 1);
    }
    m
}

fn grid_of(config: &RunConfig) -> Result<Grid, RunError> {
    let g = config.grid.as_ref().expect("validated config has a grid");
    make_grid(g.n, g.half_width).map_err(|e| RunError {
        status: Status::BadConfig,
        message: e.to_string(),
    })
}

fn dispatch(config: &RunConfig, threads: usize, out: &mut Outputs) -> Result<(), RunError> {
    match config.command {
        Command::Solve => solve(config, out),
        Command::SweepRho => sweep_rho_cmd(config, threads, out),
        Command::SweepA => sweep_a_cmd(config, threads, out),
        Command::CheckIdentities => check_identities(config, out),
        Command::BetaWindow => beta_window_cmd(config, out),
        Command::MultiplierLimit => multiplier_limit_cmd(config, out),
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String, RunError> {
    let bytes = w.into_inner().map_err(|e| failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(failed)
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, RunError> {
    let mut w = csv_writer();
    w.write_record(header).map_err(failed)?;
    for r in rows {
        w.write_record(&r).map_err(failed)?;
    }
    csv_finish(w)
}

fn solve(config: &RunConfig, out: &mut Outputs) -> Result<(), RunError> {
    let grid = grid_of(config)?;
    let pc = &config.params;
    let params = Params::new(pc.a.expect("a"), pc.rho.expect("rho"), pc.p.expect("p")).map_err(failed)?;
    let mut runs: Vec<(String, MinimizeResult, f64)> = Vec::new();
    for k in 0..config.starts {
        let (label, cfg) = if k == 0 {
            (init_label(&config.solver.init), config.solver.clone())
        } else {
            let seed = config.seed + k as u64;
            let init = Init::Perturbed {
                seed,
                amplitude: config.start_amplitude,
            };
            (
                format!("perturbed:{seed}"),
                SolverConfig {
                    init,
                    ..config.solver.clone()
                },
            )
        };
        let res = minimize(&grid, &params, &cfg).map_err(failed)?;
        let dev = radiality_deviation(&res.u).map_err(failed)?;
        runs.push((label, res, dev));
    }
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.energy.total.total_cmp(&b.1 .1.energy.total))
        .map(|(i, _)| i)
        .expect("at least one start");
    let (_, res, dev) = &runs[best];
    let meta = FieldMeta {
        a: params.a,
        rho: params.rho,
        p: params.p,
        kind: "u".into(),
    };
    out.write_bytes("u.field", &io::encode_field(&res.u, &meta))?;
    let mut summary = io::summary(res);
    let _ = writeln!(summary, "radial_dev={}", fmt_f64(*dev));
    let _ = writeln!(summary, "h1_sup={}", fmt_f64(res.h1_sup));
    let _ = writeln!(
        summary,
        "coercivity_offset={}",
        fmt_f64(coercivity_offset(&res.history))
    );
    let _ = writeln!(summary, "best_start={best}");
    out.write("summary.txt", &summary)?;
    out.write("history.csv", &io::history_csv(res))?;
    if config.starts > 1 {
        let rows = runs.iter().enumerate().map(|(i, (label, r, d))| {
            vec![
                i.to_string(),
                label.clone(),
                fmt_f64(r.energy.total),
                fmt_f64(r.omega),
                fmt_f64(r.residual),
                r.iters.to_string(),
                r.converged.to_string(),
                fmt_f64(*d),
            ]
        });
        let table = csv_table(
            &[
                "start",
                "init",
                "J",
                "omega",
                "residual",
                "iters",
                "converged",
                "radial_dev",
            ],
            rows,
        )?;
        out.write("starts.csv", &table)?;
    }
    out.verdict("converged", runs.iter().all(|(_, r, _)| r.converged));
    Ok(())
}

fn init_label(init: &Init) -> String {
    match init {
        Init::Gaussian { sigma: None } => "gaussian".into(),
        Init::Gaussian { sigma: Some(s) } => format!("gaussian:{}", fmt_f64(*s)),
        Init::Perturbed { seed, .. } => format!("perturbed:{seed}"),
        Init::File(p) => format!("file:{}", p.display()),
        Init::Given(_) => "given".into(),
    }
}

const SWEEP_HEADER: [&str; 14] = [
    "a",
    "rho",
    "p",
    "J",
    "J_over_rho2",
    "omega",
    "residual",
    "h1_norm",
    "radial_dev",
    "converged",
    "l12_5_norm",
    "l8_3_norm",
    "lp_norm",
    "provenance",
];

fn sweep_row(r: &SweepRecord) -> Vec<String> {
    vec![
        fmt_f64(r.a),
        fmt_f64(r.rho),
        fmt_f64(r.p),
        fmt_f64(r.j),
        fmt_f64(r.j_over_rho2),
        fmt_f64(r.omega),
        fmt_f64(r.residual),
        fmt_f64(r.h1_norm),
        fmt_f64(r.radial_dev),
        r.converged.to_string(),
        fmt_f64(r.l12_5_norm),
        fmt_f64(r.l8_3_norm),
        fmt_f64(r.lp_norm),
        r.provenance.clone(),
    ]
}

/// Writes partial records of an aborted sweep and turns the error into a failure.
fn abort_sweep(e: sbp_core::Error, name: &str, out: &mut Outputs) -> RunError {
    if let sbp_core::Error::SweepAborted { partial, .. } = &e {
        if let Ok(table) = csv_table(&SWEEP_HEADER, partial.iter().map(sweep_row)) {
            let _ = out.write(name, &table);
        }
    }
    failed(e)
}

fn sweep_rho_cmd(config: &RunConfig, threads: usize, out: &mut Outputs) -> Result<(), RunError> {
    let grid = grid_of(config)?;
    let pc = &config.params;
    let opts = sbp_core::analysis::SweepOptions {
        threads,
        ..config.sweep
    };
    let report: SweepReport = sweep_rho(
        &grid,
        pc.a.expect("a"),
        pc.p.expect("p"),
        &pc.rhos,
        &config.solver,
        &opts,
    )
    .map_err(|e| abort_sweep(e, "sweep_rho.csv", out))?;
    out.write(
        "sweep_rho.csv",
        &csv_table(&SWEEP_HEADER, report.records.iter().map(sweep_row))?,
    )?;
    let v = &report.verdicts;
    let mut text = String::new();
    let _ = writeln!(text, "all_negative={}", v.all_negative);
    let _ = writeln!(text, "md_decreasing={}", v.md_decreasing);
    let _ = writeln!(text, "subadditive={}", v.subadditive);
    let _ = writeln!(text, "md_margin={}", fmt_f64(opts.md_margin));
    let _ = writeln!(text, "subadditivity_margin={}", fmt_f64(opts.subadditivity_margin));
    let triples: Vec<String> = v
        .triples
        .iter()
        .map(|&(k, i, j)| format!("{}:{}+{}", pc.rhos[k], pc.rhos[i], pc.rhos[j]))
        .collect();
    let _ = writeln!(text, "triples={}", triples.join(";"));
    out.write("verdicts.txt", &text)?;
    out.verdict("all_negative", v.all_negative);
    out.verdict("md_decreasing", v.md_decreasing);
    out.verdict("subadditive", v.subadditive);
    out.verdict("converged", report.records.iter().all(|r| r.converged));
    Ok(())
}

fn sweep_a_cmd(config: &RunConfig, threads: usize, out: &mut Outputs) -> Result<(), RunError> {
    let grid = grid_of(config)?;
    let pc = &config.params;
    let report: AReport = sweep_a(
        &grid,
        pc.rho.expect("rho"),
        pc.p.expect("p"),
        &pc.a_values,
        &config.solver,
        threads,
    )
    .map_err(|e| abort_sweep(e, "sweep_a.csv", out))?;
    let extra = [
        "gap_J",
        "du_H1",
        "dphi_D12",
        "a_lap_phi_L2",
        "domega",
        "f_a",
        "f_a_bound",
    ];
    let header: Vec<&str> = SWEEP_HEADER.iter().copied().chain(extra).collect();
    let mut rows = vec![{
        let mut r = sweep_row(&report.reference);
        r.extend(extra.iter().map(|_| String::new()));
        r
    }];
    for row in &report.rows {
        let mut r = sweep_row(&row.record);
        r.extend(
            [
                row.gap_j,
                row.du_h1,
                row.dphi_d12,
                row.a_lap_phi_l2,
                row.domega,
                row.f_a,
                row.f_a_bound,
            ]
            .map(fmt_f64),
        );
        rows.push(r);
    }
    out.write("sweep_a.csv", &csv_table(&header, rows)?)?;
    let v = &report.verdicts;
    let mut text = String::new();
    let _ = writeln!(text, "gaps_nonnegative={}", v.gaps_nonnegative);
    for (name, ok) in A_REPORT_NAMES.iter().zip(v.decreasing) {
        let _ = writeln!(text, "decreasing.{name}={ok}");
    }
    let _ = writeln!(text, "f_within_bound={}", v.f_within_bound);
    let _ = writeln!(text, "hls_constant={}", fmt_f64(report.hls_constant));
    out.write("verdicts.txt", &text)?;
    out.verdict("gaps_nonnegative", v.gaps_nonnegative);
    for (name, ok) in A_REPORT_NAMES.iter().zip(v.decreasing) {
        out.verdict(&format!("decreasing.{name}"), ok);
    }
    out.verdict("f_within_bound", v.f_within_bound);
    out.note("hls_constant", fmt_f64(report.hls_constant));
    Ok(())
}

fn check_identities(config: &RunConfig, out: &mut Outputs) -> Result<(), RunError> {
    let checks: Vec<Check> = identities::run_all(config.seed).map_err(failed)?;
    let rows = checks.iter().map(|c| {
        vec![
            c.suite.to_string(),
            c.name.clone(),
            fmt_f64(c.error),
            fmt_f64(c.tolerance),
            c.passed.to_string(),
        ]
    });
    out.write(
        "identities.csv",
        &csv_table(&["suite", "check", "error", "tolerance", "passed"], rows)?,
    )?;
    for suite in ["kernels", "gaussian", "gradient", "rescaling"] {
        out.verdict(suite, checks.iter().filter(|c| c.suite == suite).all(|c| c.passed));
    }
    Ok(())
}

fn beta_window_cmd(config: &RunConfig, out: &mut Outputs) -> Result<(), RunError> {
    let pc = &config.params;
    let (p, regime) = (pc.p.expect("p"), pc.regime.expect("regime"));
    let w = beta_window(p, regime).map_err(failed)?;
    let (lo, hi, samples) = (-50.0, 50.0, 10_000);
    let scan = scan_window(p, regime, lo, hi, samples);
    let step = (hi - lo) / (samples - 1) as f64;
    let agrees = match scan {
        None => !w.nonempty,
        Some((first, last)) => {
            let edge = |bound: f64, got: f64, end: f64| {
                if bound.abs() >= end.abs() {
                    got == end
                } else {
                    (got - bound).abs() <= step
                }
            };
            w.nonempty && edge(w.lower, first, lo) && edge(w.upper, last, hi)
        }
    };
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let row = vec![
        regime.name().to_string(),
        fmt_f64(p),
        fmt_f64(w.lower),
        fmt_f64(w.upper),
        w.nonempty.to_string(),
        opt(scan.map(|s| s.0)),
        opt(scan.map(|s| s.1)),
        agrees.to_string(),
    ];
    let header = [
        "regime",
        "p",
        "lower",
        "upper",
        "nonempty",
        "scan_first",
        "scan_last",
        "scan_agrees",
    ];
    out.write("beta_window.csv", &csv_table(&header, [row])?)?;
    out.verdict("scan_agrees", agrees);

    if let Some(beta) = pc.beta {
        let grid = grid_of(config)?;
        let pr = Profile::gaussian_with_mass(1.0, 1.0).map_err(failed)?;
        let t = trial_threshold(&grid, &pr, p, beta, regime).map_err(failed)?;
        let check_rho = match regime {
            Regime::SmallRho => 0.5 * t.boundary(),
            Regime::LargeRho => 2.0 * t.boundary(),
        };
        let trial = t.trial_energy(check_rho);
        // the sampled check only runs when the rescaled trial fits the grid
        let sampled = trial_energy_on_grid(&grid, &pr, beta, check_rho, 0.0, p)
            .ok()
            .map(|e| e.total);
        let row = vec![
            regime.name().to_string(),
            fmt_f64(p),
            fmt_f64(beta),
            fmt_f64(t.alpha),
            fmt_f64(t.exponent),
            fmt_f64(t.kinetic),
            fmt_f64(t.coupling),
            fmt_f64(t.lp),
            fmt_f64(t.r),
            fmt_f64(t.boundary()),
            fmt_f64(check_rho),
            fmt_f64(trial),
            opt(sampled),
        ];
        let header = [
            "regime",
            "p",
            "beta",
            "alpha",
            "exponent",
            "kinetic",
            "coupling",
            "lp",
            "R",
            "boundary",
            "check_rho",
            "trial_J",
            "sampled_J",
        ];
        out.write("threshold.csv", &csv_table(&header, [row])?)?;
        out.verdict("trial_negative", trial < 0.0 && sampled.is_none_or(|s| s < 0.0));
    }
    Ok(())
}

fn multiplier_limit_cmd(config: &RunConfig, out: &mut Outputs) -> Result<(), RunError> {
    let grid = grid_of(config)?;
    let pc = &config.params;
    let m: MultiplierLimit = multiplier_limit(
        &grid,
        pc.p.expect("p"),
        pc.a.unwrap_or(0.0),
        &pc.rhos,
        pc.mu.unwrap_or(1.0),
        &config.solver,
    )
    .map_err(failed)?;
    let rows = m.rows.iter().map(|r| {
        vec![
            fmt_f64(r.rho),
            fmt_f64(r.omega),
            fmt_f64(r.omega_scaled),
            fmt_f64(r.reference),
            fmt_f64(r.deviation),
            fmt_f64(r.deviation_scaled),
            fmt_f64(r.residual),
            r.converged.to_string(),
        ]
    });
    let header = [
        "rho",
        "omega",
        "omega_scaled",
        "reference",
        "deviation",
        "deviation_scaled",
        "residual",
        "converged",
    ];
    out.write("multiplier_limit.csv", &csv_table(&header, rows)?)?;
    let mut text = String::new();
    for (k, v) in [
        ("alpha", m.alpha),
        ("beta", m.beta),
        ("mu", m.mu),
        ("omega_limit", m.omega_limit),
    ] {
        let _ = writeln!(text, "{k}={}", fmt_f64(v));
    }
    let _ = writeln!(text, "decreasing={}", m.decreasing);
    let _ = writeln!(text, "all_positive={}", m.all_positive);
    let _ = writeln!(text, "all_converged={}", m.all_converged);
    out.write("verdicts.txt", &text)?;
    out.verdict("decreasing", m.decreasing);
    out.verdict("all_positive", m.all_positive);
    out.verdict("converged", m.all_converged);
    Ok(())
}
