//! Run configuration in TOML: `[run]`, `[grid]`, `[params]` and `[solver]` tables.
//!
//! ```toml
//! [run]
//! command = "solve"
//! output_dir = "out"
//!
//! [grid]
//! n = 48
//! L = 80
//!
//! [params]
//! a = 1
//! rho = 0.5
//! p = 2.5
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use toml::Spanned;

use sbp_core::analysis::{Regime, SweepOptions};
use sbp_core::solve::{Init, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line, or `None` for whole-file problems such as a missing key.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    SweepRho,
    SweepA,
    CheckIdentities,
    BetaWindow,
    MultiplierLimit,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Solve,
        Command::SweepRho,
        Command::SweepA,
        Command::CheckIdentities,
        Command::BetaWindow,
        Command::MultiplierLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::SweepRho => "sweep-rho",
            Command::SweepA => "sweep-a",
            Command::CheckIdentities => "check-identities",
            Command::BetaWindow => "beta-window",
            Command::MultiplierLimit => "multiplier-limit",
        }
    }

    /// `[params]` keys the command reads, required ones first.
    fn params(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Command::Solve => (&["a", "rho", "p"], &[]),
            Command::SweepRho => (&["a", "p", "rhos"], &[]),
            Command::SweepA => (&["rho", "p", "a_values"], &[]),
            Command::CheckIdentities => (&[], &[]),
            Command::BetaWindow => (&["p", "regime"], &["beta"]),
            Command::MultiplierLimit => (&["p", "rhos"], &["a", "mu"]),
        }
    }

    fn needs_grid(self, has_beta: bool) -> bool {
        match self {
            Command::CheckIdentities => false,
            Command::BetaWindow => has_beta,
            _ => true,
        }
    }

    fn runs_solver(self) -> bool {
        !matches!(self, Command::CheckIdentities | Command::BetaWindow)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamsConfig {
    pub a: Option<f64>,
    pub rho: Option<f64>,
    pub p: Option<f64>,
    pub rhos: Vec<f64>,
    pub a_values: Vec<f64>,
    pub mu: Option<f64>,
    pub regime: Option<Regime>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub grid: Option<GridConfig>,
    pub params: ParamsConfig,
    pub solver: SolverConfig,
    /// Number of starts for `solve`: the Gaussian start plus `starts − 1` perturbed ones.
    pub starts: usize,
    /// Perturbation size of the extra starts.
    pub start_amplitude: f64,
    pub sweep: SweepOptions,
    /// Every `(section.key, value)` as written, for the manifest.
    pub echo: Vec<(String, String)>,
}

const RUN_KEYS: &[&str] = &["command", "output_dir", "seed"];
const GRID_KEYS: &[&str] = &["n", "L"];
const PARAM_KEYS: &[&str] = &["a", "rho", "p", "rhos", "a_values", "mu", "regime", "beta"];
const SOLVER_KEYS: &[&str] = &[
    "tol",
    "max_iter",
    "precondition",
    "shift",
    "step0",
    "backtrack",
    "armijo",
    "init",
    "init_sigma",
    "init_amplitude",
    "init_file",
    "starts",
    "md_margin",
    "subadditivity_margin",
];

fn section_keys(section: &str) -> Option<&'static [&'static str]> {
    match section {
        "run" => Some(RUN_KEYS),
        "grid" => Some(GRID_KEYS),
        "params" => Some(PARAM_KEYS),
        "solver" => Some(SOLVER_KEYS),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Text,
    Scalar,
    List,
}

struct Entries {
    /// `(section, key) → (value, line, kind)`; lists are stored comma-joined.
    map: BTreeMap<(String, String), (String, usize, Kind)>,
}

impl Entries {
    fn entry(&self, section: &str, key: &str) -> Option<&(String, usize, Kind)> {
        self.map.get(&(section.to_string(), key.to_string()))
    }

    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.entry(section, key).map(|e| e.1)
    }

    fn text(&self, section: &str, key: &str) -> Result<Option<(&str, usize)>, ConfigError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some((v, line, Kind::Text)) => Ok(Some((v.as_str(), *line))),
            Some((v, line, _)) => Err(err(*line, format!("{key} = {v} must be a quoted string"))),
        }
    }

    fn get<T: FromStr>(&self, section: &str, key: &str, what: &str) -> Result<Option<(T, usize)>, ConfigError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some((v, line, Kind::Scalar)) => v
                .parse::<T>()
                .map(|x| Some((x, *line)))
                .map_err(|_| err(*line, format!("{key} = {v} is not {what}"))),
            Some((v, line, _)) => Err(err(*line, format!("{key} = {v:?} is not {what}"))),
        }
    }

    fn real(&self, section: &str, key: &str) -> Result<Option<(f64, usize)>, ConfigError> {
        match self.get::<f64>(section, key, "a number")? {
            Some((x, line)) if !x.is_finite() => Err(err(line, format!("{key} must be finite"))),
            other => Ok(other),
        }
    }

    /// A list of numbers; a single number counts as a one-element list.
    fn list(&self, section: &str, key: &str) -> Result<Option<(Vec<f64>, usize)>, ConfigError> {
        let Some((v, line, kind)) = self.entry(section, key) else {
            return Ok(None);
        };
        if *kind == Kind::Text {
            return Err(err(*line, format!("{key} must be a list of numbers")));
        }
        let items = v
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(*line, format!("{key}: {:?} is not a number", s.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err(err(*line, format!("{key} is empty")));
        }
        Ok(Some((items, *line)))
    }
}

fn missing(section: &str, key: &str, why: &str) -> ConfigError {
    ConfigError {
        line: None,
        message: format!("missing required key [{section}] {key} ({why})"),
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

type Document = BTreeMap<Spanned<String>, BTreeMap<Spanned<String>, Spanned<toml::Value>>>;

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let doc: Document = toml::from_str(text).map_err(|e| {
        let mut message = e.message().trim().to_string();
        if let Some(span) = e.span().filter(|s| message == "duplicate key" && s.end <= text.len()) {
            message = format!("duplicate key {}", text[span].trim());
        }
        ConfigError {
            line: e.span().map(|s| line_at(text, s.start)),
            message,
        }
    })?;
    let mut map = BTreeMap::new();
    for (section, keys) in doc {
        let sec = section.get_ref().as_str();
        let allowed = section_keys(sec).ok_or_else(|| {
            err(
                line_at(text, section.span().start),
                format!("unknown section [{sec}]; expected run, grid, params or solver"),
            )
        })?;
        for (key, value) in keys {
            let k = key.get_ref().as_str();
            let line = line_at(text, key.span().start);
            if !allowed.contains(&k) {
                return Err(err(line, format!("unknown key {k:?} in [{sec}]")));
            }
            let number = |v: &toml::Value| match v {
                toml::Value::Integer(i) => Some(i.to_string()),
                toml::Value::Float(f) => Some(f.to_string()),
                _ => None,
            };
            let entry = match value.get_ref() {
                toml::Value::String(s) => (s.clone(), Kind::Text),
                toml::Value::Integer(_) | toml::Value::Float(_) | toml::Value::Boolean(_) => {
                    (text[value.span()].trim().to_string(), Kind::Scalar)
                }
                toml::Value::Array(items) => {
                    let parts: Option<Vec<String>> = items.iter().map(number).collect();
                    let parts = parts.ok_or_else(|| err(line, format!("{k} must be a list of numbers")))?;
                    (parts.join(", "), Kind::List)
                }
                _ => return Err(err(line, format!("{k} must be a number, boolean, string or list"))),
            };
            map.insert((sec.to_string(), k.to_string()), (entry.0, line, entry.1));
        }
    }
    Ok(Entries { map })
}

/// Range check of `p` for solver-backed commands.
fn check_solver_p(p: f64, line: usize) -> Result<(), ConfigError> {
    if p > 2.0 && p < 10.0 / 3.0 && p != 3.0 {
        Ok(())
    } else {
        Err(err(
            line,
            format!("p = {p} is out of range: p ∈ ]2,10/3[∖{{3}} is required"),
        ))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let e = tokenize(text)?;

    let (cmd_name, cmd_line) = e.text("run", "command")?.ok_or_else(|| {
        missing(
            "run",
            "command",
            "one of solve, sweep-rho, sweep-a, check-identities, beta-window, multiplier-limit",
        )
    })?;
    let command = Command::ALL
        .into_iter()
        .find(|c| c.name() == cmd_name)
        .ok_or_else(|| err(cmd_line, format!("unknown command {cmd_name:?}")))?;
    let output_dir = PathBuf::from(e.text("run", "output_dir")?.map_or("sbp-out", |(v, _)| v));
    let seed = e
        .get::<u64>("run", "seed", "a non-negative integer")?
        .map_or(0, |(s, _)| s);

    let grid = if command.needs_grid(e.line_of("params", "beta").is_some()) {
        let (n, nl) = e
            .get::<usize>("grid", "n", "a positive integer")?
            .ok_or_else(|| missing("grid", "n", "grid points per axis"))?;
        let (l, ll) = e
            .real("grid", "L")?
            .ok_or_else(|| missing("grid", "L", "box half-width"))?;
        if n < 8 || n % 2 != 0 {
            return Err(err(nl, format!("n = {n} must be even and at least 8")));
        }
        if !(l > 0.0) {
            return Err(err(ll, format!("L = {l} must be positive")));
        }
        Some(GridConfig { n, half_width: l })
    } else {
        for k in GRID_KEYS {
            if let Some(line) = e.line_of("grid", k) {
                return Err(err(line, format!("[grid] {k} is not used by {} here", command.name())));
            }
        }
        None
    };

    let (required, optional) = command.params();
    for k in PARAM_KEYS {
        if let Some(line) = e.line_of("params", k) {
            if !required.contains(k) && !optional.contains(k) {
                return Err(err(line, format!("[params] {k} is not used by {}", command.name())));
            }
        }
    }
    for k in required {
        if e.line_of("params", k).is_none() {
            return Err(missing("params", k, command.name()));
        }
    }

    let mut params = ParamsConfig::default();
    if let Some((a, line)) = e.real("params", "a")? {
        if a < 0.0 {
            return Err(err(line, format!("a = {a} must be >= 0")));
        }
        params.a = Some(a);
    }
    if let Some((rho, line)) = e.real("params", "rho")? {
        if !(rho > 0.0) {
            return Err(err(line, format!("rho = {rho} must be > 0")));
        }
        params.rho = Some(rho);
    }
    if let Some((mu, line)) = e.real("params", "mu")? {
        if !(mu > 0.0) {
            return Err(err(line, format!("mu = {mu} must be > 0")));
        }
        params.mu = Some(mu);
    }
    params.beta = e.real("params", "beta")?.map(|(b, _)| b);
    if let Some((r, line)) = e.text("params", "regime")? {
        params.regime = Some(match r {
            "small_rho" => Regime::SmallRho,
            "large_rho" => Regime::LargeRho,
            _ => return Err(err(line, format!("regime = {r:?}; expected small_rho or large_rho"))),
        });
    }
    if let Some((p, line)) = e.real("params", "p")? {
        if command.runs_solver() {
            check_solver_p(p, line)?;
        }
        if matches!(command, Command::SweepA | Command::MultiplierLimit) && p >= 14.0 / 5.0 {
            return Err(err(
                line,
                format!("p = {p} is out of range: {} needs 2 < p < 14/5", command.name()),
            ));
        }
        if command == Command::BetaWindow {
            let ok = match params.regime {
                Some(Regime::SmallRho) => p > 2.0 && p < 3.0,
                Some(Regime::LargeRho) => p > 3.0 && p < 10.0 / 3.0,
                None => true,
            };
            if !ok {
                let range = if params.regime == Some(Regime::SmallRho) {
                    "]2,3["
                } else {
                    "]3,10/3["
                };
                return Err(err(
                    line,
                    format!("p = {p} is out of range: the regime needs p ∈ {range}"),
                ));
            }
        }
        params.p = Some(p);
    }
    if let Some((rhos, line)) = e.list("params", "rhos")? {
        if rhos.iter().any(|&r| !(r > 0.0)) {
            return Err(err(line, "rhos must all be > 0"));
        }
        let increasing = rhos.windows(2).all(|w| w[0] < w[1]);
        let decreasing = rhos.windows(2).all(|w| w[0] > w[1]);
        match command {
            Command::SweepRho if !increasing => return Err(err(line, "rhos must be strictly increasing")),
            Command::MultiplierLimit if !decreasing => return Err(err(line, "rhos must be strictly decreasing")),
            _ => {}
        }
        params.rhos = rhos;
    }
    if let Some((avs, line)) = e.list("params", "a_values")? {
        if avs.iter().any(|&a| !(a > 0.0)) {
            return Err(err(
                line,
                "a_values must all be > 0; a = 0 is the reference solve and is added automatically",
            ));
        }
        if avs.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(err(line, "a_values must be strictly decreasing"));
        }
        params.a_values = avs;
    }

    let (solver, starts, amplitude, sweep) = parse_solver(&e, command, seed)?;

    let echo = e
        .map
        .iter()
        .map(|((s, k), (v, _, _))| (format!("{s}.{k}"), v.clone()))
        .collect();
    Ok(RunConfig {
        command,
        output_dir,
        seed,
        grid,
        params,
        solver,
        starts,
        start_amplitude: amplitude,
        sweep,
        echo,
    })
}

fn parse_solver(
    e: &Entries,
    command: Command,
    seed: u64,
) -> Result<(SolverConfig, usize, f64, SweepOptions), ConfigError> {
    if !command.runs_solver() {
        for k in SOLVER_KEYS {
            if let Some(line) = e.line_of("solver", k) {
                return Err(err(line, format!("[solver] {k} is not used by {}", command.name())));
            }
        }
        return Ok((SolverConfig::default(), 1, 0.3, SweepOptions::default()));
    }
    let mut c = SolverConfig::default();
    let positive = |key: &str| -> Result<Option<f64>, ConfigError> {
        match e.real("solver", key)? {
            Some((x, line)) if !(x > 0.0) => Err(err(line, format!("{key} = {x} must be > 0"))),
            other => Ok(other.map(|(x, _)| x)),
        }
    };
    let unit = |key: &str| -> Result<Option<f64>, ConfigError> {
        match e.real("solver", key)? {
            Some((x, line)) if !(x > 0.0 && x < 1.0) => Err(err(line, format!("{key} = {x} must lie in ]0,1["))),
            other => Ok(other.map(|(x, _)| x)),
        }
    };
    if let Some(x) = positive("tol")? {
        c.tol = x;
    }
    if let Some(x) = positive("shift")? {
        c.shift = x;
    }
    if let Some(x) = positive("step0")? {
        c.step0 = x;
    }
    if let Some(x) = unit("backtrack")? {
        c.backtrack = x;
    }
    if let Some(x) = unit("armijo")? {
        c.armijo = x;
    }
    if let Some((m, line)) = e.get::<usize>("solver", "max_iter", "a positive integer")? {
        if m == 0 {
            return Err(err(line, "max_iter must be >= 1"));
        }
        c.max_iter = m;
    }
    if let Some((b, _)) = e.get::<bool>("solver", "precondition", "true or false")? {
        c.precondition = b;
    }

    let starts = match e.get::<usize>("solver", "starts", "a positive integer")? {
        Some((s, line)) if command != Command::Solve => {
            return Err(err(line, format!("starts = {s} is only used by solve")));
        }
        Some((0, line)) => return Err(err(line, "starts must be >= 1")),
        Some((s, _)) => s,
        None => 1,
    };

    let sigma = positive("init_sigma")?;
    let amplitude = match e.real("solver", "init_amplitude")? {
        Some((x, line)) if x < 0.0 => return Err(err(line, format!("init_amplitude = {x} must be >= 0"))),
        other => other.map(|(x, _)| x),
    };
    let file = e.text("solver", "init_file")?;
    let (kind, kind_line) = e.text("solver", "init")?.unwrap_or(("gaussian", 0));
    let stray = |key: &str| -> Result<(), ConfigError> {
        match e.line_of("solver", key) {
            Some(line) => Err(err(line, format!("{key} does not apply to init = {kind}"))),
            None => Ok(()),
        }
    };
    c.init = match kind {
        "gaussian" => {
            if starts == 1 {
                stray("init_amplitude")?;
            }
            stray("init_file")?;
            Init::Gaussian { sigma }
        }
        "perturbed" => {
            stray("init_sigma")?;
            stray("init_file")?;
            Init::Perturbed {
                seed,
                amplitude: amplitude.unwrap_or(0.3),
            }
        }
        "file" => {
            stray("init_sigma")?;
            stray("init_amplitude")?;
            let (path, _) = file.ok_or_else(|| err(kind_line, "init = file needs init_file"))?;
            Init::File(PathBuf::from(path))
        }
        other => {
            return Err(err(
                kind_line,
                format!("init = {other:?}; expected gaussian, perturbed or file"),
            ))
        }
    };

    let mut sweep = SweepOptions::default();
    for (key, slot) in [
        ("md_margin", &mut sweep.md_margin),
        ("subadditivity_margin", &mut sweep.subadditivity_margin),
    ] {
        match e.real("solver", key)? {
            Some((_, line)) if command != Command::SweepRho => {
                return Err(err(line, format!("{key} is only used by sweep-rho")));
            }
            Some((x, line)) if x < 0.0 => return Err(err(line, format!("{key} = {x} must be >= 0"))),
            Some((x, _)) => *slot = x,
            None => {}
        }
    }
    Ok((c, starts, amplitude.unwrap_or(0.3), sweep))
}
