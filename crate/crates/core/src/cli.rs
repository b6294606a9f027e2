//! Command-line front end: argument parsing, run configuration and CSV output.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{approx_displaced_table, approx_tpcs_table, compare_displaced, compare_tpcs, parity_limit_table};
use crate::approx::{ComparisonReport, PrefactorMode};
use crate::error::DomainError;
use crate::exec::Execution;
use crate::geometry::{band_overlap_area, displaced_phase, wkb_phase, AbscissaRule};
use crate::husimi::{overlap_amplitudes_oracle, q_grid, GridSpec, QSurface, DEFAULT_STEP};
use crate::mc::{band_overlap_area_mc, tpcs_overlap_area_mc};
use crate::states::{pmf_table, DisplacedNumberState, PhotonState, Pmf, PmfMethod, TwoPhotonCoherentState};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("metadata file {path} is not a valid run configuration: {source}")]
    Meta { path: String, source: serde_json::Error },
    #[error("no overlap for m={m}: {reason}")]
    NoOverlap { m: u32, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) | CliError::Domain(_) | CliError::Meta { .. } => 2,
            CliError::NoOverlap { .. } => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "photon-phase",
    version,
    about = "Photon-number distributions from phase-space interference"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution table: m,p
    Pmf {
        method: MethodArg,
        state: StateKind,
        #[command(flatten)]
        params: Params,
    },
    /// Exact against approximate distribution: m,p_exact,p_approx,area,phase
    Compare {
        state: StateKind,
        #[command(flatten)]
        params: Params,
    },
    /// Husimi surface on a grid: x,y,q
    Qgrid {
        surface: SurfaceKind,
        #[command(flatten)]
        params: Params,
    },
    /// Interference and WKB phases: m,(psi+n*pi)/pi,(psi_wkb+n*pi)/pi
    Phases {
        state: PhaseStateKind,
        #[command(flatten)]
        params: Params,
    },
    /// Re-run a command from its metadata sidecar
    Rerun {
        meta: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Exact,
    Approx,
    Oracle,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Displaced,
    Tpcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    Fock,
    Displaced,
    Tpcs,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseStateKind {
    Displaced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefactorArg {
    #[default]
    Amplitude,
    PaperFinal,
}

impl From<PrefactorArg> for PrefactorMode {
    fn from(p: PrefactorArg) -> Self {
        match p {
            PrefactorArg::Amplitude => PrefactorMode::TwoBranchAmplitude,
            PrefactorArg::PaperFinal => PrefactorMode::AreaOverPi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum X2Arg {
    #[default]
    Consistent,
    PaperLiteral,
}

impl From<X2Arg> for AbscissaRule {
    fn from(x: X2Arg) -> Self {
        match x {
            X2Arg::Consistent => AbscissaRule::EllipseCenter,
            X2Arg::PaperLiteral => AbscissaRule::DoubledExponent,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Photon number of the displaced Fock state
    #[arg(long)]
    pub n: Option<u32>,
    /// Displacement (real)
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Squeeze parameter
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Single photon number (Fock surface, product surface, single-row tables)
    #[arg(long)]
    pub m: Option<u32>,
    /// Largest photon number in a table
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Grid window xmin:xmax:ymin:ymax
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Grid resolution NXxNY
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long, value_enum, default_value_t = PrefactorArg::Amplitude)]
    pub prefactor: PrefactorArg,
    #[arg(long, value_enum, default_value_t = X2Arg::Consistent)]
    pub x2: X2Arg,
    /// Seed for Monte-Carlo area checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo samples per row in `compare` (0 disables the columns)
    #[arg(long, default_value_t = 0)]
    pub mc_samples: u64,
    /// Output CSV path; a `<out>.meta.json` sidecar is written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when a single requested row has no overlap
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Pmf,
    Compare,
    Qgrid,
    Phases,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Displaced,
    Tpcs,
    Fock,
    Product,
}

/// Fully resolved run parameters; also the layout of the metadata sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub method: Option<MethodArg>,
    pub target: Target,
    pub n: Option<u32>,
    pub beta: Option<f64>,
    pub r: Option<f64>,
    pub m: Option<u32>,
    pub nmax: Option<u32>,
    #[serde(flatten)]
    pub grid: Option<GridSpec>,
    pub prefactor: PrefactorArg,
    pub x2: X2Arg,
    pub seed: u64,
    pub mc_samples: u64,
    pub strict: bool,
    pub out: Option<PathBuf>,
    pub version: String,
}

/// What `main` should do after parsing.
#[derive(Debug)]
pub enum Invocation {
    Run(RunConfig),
    Rerun { meta: PathBuf, out: Option<PathBuf> },
}

pub fn parse_args<I, T>(argv: I) -> Result<Invocation, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok(match cli.command {
        Command::Rerun { meta, out } => Invocation::Rerun { meta, out },
        other => Invocation::Run(
            resolve(other).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n")))?,
        ),
    })
}

fn parse_window(s: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(usage(format!("--window expects xmin:xmax:ymin:ymax, got {s:?}")));
    }
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| usage(format!("--window: {p:?} is not a number")))?;
    }
    Ok(out)
}

fn parse_res(s: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| usage(format!("--res expects NXxNY, got {s:?}")))?;
    let nx = a
        .trim()
        .parse()
        .map_err(|_| usage(format!("--res: {a:?} is not a count")))?;
    let ny = b
        .trim()
        .parse()
        .map_err(|_| usage(format!("--res: {b:?} is not a count")))?;
    Ok((nx, ny))
}

fn require<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("{what} requires --{flag}")))
}

fn displaced_state(cfg: &RunConfig) -> Result<DisplacedNumberState, CliError> {
    let n = require(cfg.n, "n", "a displaced state")?;
    let beta = require(cfg.beta, "beta", "a displaced state")?;
    Ok(DisplacedNumberState::new(n, beta)?)
}

fn tpcs_state(cfg: &RunConfig) -> Result<TwoPhotonCoherentState, CliError> {
    let beta = require(cfg.beta, "beta", "a two-photon coherent state")?;
    let r = require(cfg.r, "r", "a two-photon coherent state")?;
    Ok(TwoPhotonCoherentState::new(beta, r)?)
}

fn photon_state(cfg: &RunConfig) -> Result<PhotonState, CliError> {
    match cfg.target {
        Target::Displaced => Ok(displaced_state(cfg)?.into()),
        Target::Tpcs => Ok(tpcs_state(cfg)?.into()),
        _ => Err(usage("expected a displaced or tpcs state")),
    }
}

fn surface(cfg: &RunConfig) -> Result<QSurface, CliError> {
    Ok(match cfg.target {
        Target::Fock => QSurface::Fock {
            m: require(cfg.m, "m", "a Fock surface")?,
        },
        Target::Displaced => QSurface::Displaced(displaced_state(cfg)?),
        Target::Tpcs => QSurface::TwoPhoton(tpcs_state(cfg)?),
        Target::Product => QSurface::Product {
            m: require(cfg.m, "m", "a product surface")?,
            state: displaced_state(cfg)?,
        },
    })
}

fn resolve(cmd: Command) -> Result<RunConfig, CliError> {
    let (command, method, target, p) = match cmd {
        Command::Pmf { method, state, params } => (CommandKind::Pmf, Some(method), state_target(state), params),
        Command::Compare { state, params } => (CommandKind::Compare, None, state_target(state), params),
        Command::Qgrid { surface, params } => {
            let t = match surface {
                SurfaceKind::Fock => Target::Fock,
                SurfaceKind::Displaced => Target::Displaced,
                SurfaceKind::Tpcs => Target::Tpcs,
                SurfaceKind::Product => Target::Product,
            };
            (CommandKind::Qgrid, None, t, params)
        }
        Command::Phases { params, .. } => (CommandKind::Phases, None, Target::Displaced, params),
        Command::Rerun { .. } => unreachable!("handled by the caller"),
    };
    let mut cfg = RunConfig {
        command,
        method,
        target,
        n: p.n,
        beta: p.beta,
        r: p.r,
        m: p.m,
        nmax: p.nmax,
        grid: None,
        prefactor: p.prefactor,
        x2: p.x2,
        seed: p.seed,
        mc_samples: p.mc_samples,
        strict: p.strict,
        out: p.out,
        version: VERSION.to_string(),
    };
    if command == CommandKind::Qgrid {
        let s = surface(&cfg)?;
        let default = s.default_grid(DEFAULT_STEP);
        let grid = match (
            p.window.as_deref().map(parse_window).transpose()?,
            p.res.as_deref().map(parse_res).transpose()?,
        ) {
            (None, None) => default,
            (None, Some((nx, ny))) => GridSpec { nx, ny, ..default },
            (Some([x0, x1, y0, y1]), res) => {
                let (nx, ny) = res.unwrap_or((
                    ((x1 - x0) / DEFAULT_STEP).ceil().max(2.0) as usize,
                    ((y1 - y0) / DEFAULT_STEP).ceil().max(2.0) as usize,
                ));
                GridSpec {
                    x_min: x0,
                    x_max: x1,
                    y_min: y0,
                    y_max: y1,
                    nx,
                    ny,
                }
            }
        };
        grid.validate()?;
        cfg.grid = Some(grid);
    } else {
        if p.window.is_some() || p.res.is_some() {
            return Err(usage("--window and --res apply to qgrid only"));
        }
        if command == CommandKind::Pmf && method == Some(MethodArg::Parity) && target != Target::Tpcs {
            return Err(usage("the parity limit is defined for tpcs only"));
        }
        let state = photon_state(&cfg)?;
        cfg.nmax = Some(p.nmax.unwrap_or_else(|| state.default_truncation()));
    }
    Ok(cfg)
}

fn state_target(s: StateKind) -> Target {
    match s {
        StateKind::Displaced => Target::Displaced,
        StateKind::Tpcs => Target::Tpcs,
    }
}

fn real(v: f64) -> String {
    format!("{v:.11e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

/// Computes the CSV for `cfg`.
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command {
        CommandKind::Pmf => render_pmf(cfg),
        CommandKind::Compare => render_compare(cfg),
        CommandKind::Qgrid => render_qgrid(cfg),
        CommandKind::Phases => render_phases(cfg),
    }
}

fn nmax(cfg: &RunConfig) -> Result<u32, CliError> {
    require(cfg.nmax, "nmax", "this command")
}

fn render_pmf(cfg: &RunConfig) -> Result<String, CliError> {
    let state = photon_state(cfg)?;
    let nmax = nmax(cfg)?;
    let exec = Execution::default();
    let pmf = match (cfg.method.unwrap_or(MethodArg::Exact), state) {
        (MethodArg::Exact, s) => pmf_table(&s, nmax),
        (MethodArg::Approx, PhotonState::Displaced(st)) => {
            approx_displaced_table(&st, nmax, cfg.prefactor.into(), exec)
        }
        (MethodArg::Approx, PhotonState::TwoPhoton(st)) => {
            approx_tpcs_table(&st, nmax, cfg.prefactor.into(), cfg.x2.into(), exec)
        }
        (MethodArg::Parity, PhotonState::TwoPhoton(st)) => parity_limit_table(&st, nmax, cfg.x2.into(), exec),
        (MethodArg::Parity, _) => return Err(usage("the parity limit is defined for tpcs only")),
        (MethodArg::Oracle, s) => {
            let grid = GridSpec::for_oracle(nmax, &s, DEFAULT_STEP);
            let amps = overlap_amplitudes_oracle(nmax, &s, &grid)?;
            Pmf::new(amps.iter().map(|a| a.norm_sqr()).collect(), PmfMethod::Oracle)
        }
    };
    let mut out = String::from("m,p\n");
    for (m, p) in pmf.values().iter().enumerate() {
        let _ = writeln!(out, "{m},{}", real(*p));
    }
    Ok(out)
}

fn single_row_range(cfg: &RunConfig, nmax: u32) -> std::ops::RangeInclusive<u32> {
    match cfg.m {
        Some(m) => m..=m,
        None => 0..=nmax,
    }
}

fn render_compare(cfg: &RunConfig) -> Result<String, CliError> {
    let state = photon_state(cfg)?;
    let nmax = nmax(cfg)?.max(cfg.m.unwrap_or(0));
    let exec = Execution::default();
    let mode = cfg.prefactor.into();
    let report: ComparisonReport = match state {
        PhotonState::Displaced(st) => compare_displaced(&st, nmax, mode, exec),
        PhotonState::TwoPhoton(st) => compare_tpcs(&st, nmax, mode, cfg.x2.into(), exec),
    };
    let with_mc = cfg.mc_samples > 0;
    let mut out = String::from("m,p_exact,p_approx,area,phase");
    out.push_str(if with_mc { ",area_mc,area_mc_err\n" } else { "\n" });
    for m in single_row_range(cfg, nmax) {
        let row = &report.rows[m as usize];
        if cfg.strict && cfg.m.is_some() && (row.phase.is_none() || row.area == Some(0.0)) {
            return Err(CliError::NoOverlap {
                m,
                reason: "the state region misses the ring band".into(),
            });
        }
        let _ = write!(
            out,
            "{m},{},{},{},{}",
            real(row.p_exact),
            real(row.p_approx),
            opt(row.area),
            opt(row.phase)
        );
        if with_mc {
            let est = match state {
                PhotonState::Displaced(st) => band_overlap_area_mc(m, st.n, st.beta, cfg.mc_samples, cfg.seed),
                PhotonState::TwoPhoton(st) => tpcs_overlap_area_mc(m, &st, cfg.mc_samples, cfg.seed),
            };
            let _ = write!(out, ",{},{}", real(est.area), real(est.std_error));
        }
        out.push('\n');
    }
    Ok(out)
}

fn render_qgrid(cfg: &RunConfig) -> Result<String, CliError> {
    let s = surface(cfg)?;
    let grid = cfg.grid.ok_or_else(|| usage("qgrid requires a grid"))?;
    grid.validate()?;
    let q = q_grid(&s, &grid);
    let mut out = String::with_capacity(q.values.len() * 56 + 8);
    out.push_str("x,y,q\n");
    for (x, y, v) in q.rows() {
        let _ = writeln!(out, "{},{},{}", real(x), real(y), real(v));
    }
    Ok(out)
}

fn render_phases(cfg: &RunConfig) -> Result<String, CliError> {
    let st = displaced_state(cfg)?;
    let nmax = nmax(cfg)?.max(cfg.m.unwrap_or(0));
    let shift = f64::from(st.n) * std::f64::consts::PI;
    let scaled = |v: f64| (v + shift) / std::f64::consts::PI;
    let mut out = String::from("m,psi_scaled,psi_wkb_scaled\n");
    for m in single_row_range(cfg, nmax) {
        let psi = displaced_phase(m, st.n, st.beta);
        if cfg.strict && cfg.m.is_some() {
            if let Err(e) = &psi {
                return Err(CliError::NoOverlap {
                    m,
                    reason: e.to_string(),
                });
            }
            if band_overlap_area(m, st.n, st.beta) == 0.0 {
                return Err(CliError::NoOverlap {
                    m,
                    reason: "ring bands are disjoint".into(),
                });
            }
        }
        let wkb = wkb_phase(m, st.n, st.beta);
        let _ = writeln!(out, "{m},{},{}", opt(psi.ok().map(scaled)), opt(wkb.ok().map(scaled)));
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Sidecar path for an output CSV: `<out>.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Computes the table and writes it with its sidecar, or to stdout.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let csv = render(cfg)?;
    match &cfg.out {
        Some(path) => {
            write_file(path, &csv)?;
            let meta = serde_json::to_string_pretty(cfg).expect("run configuration serializes");
            write_file(&meta_path(path), &(meta + "\n"))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(csv.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(())
}

/// Loads a sidecar written by [`run`].
pub fn load_meta(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let cfg: RunConfig = serde_json::from_str(&text).map_err(|source| CliError::Meta {
        path: path.display().to_string(),
        source,
    })?;
    if cfg.version != VERSION {
        log::warn!("sidecar written by version {}, running {VERSION}", cfg.version);
    }
    Ok(cfg)
}

pub fn rerun(meta: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let mut cfg = load_meta(meta)?;
    if out.is_some() {
        cfg.out = out;
    }
    run(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &str) -> RunConfig {
        let argv = std::iter::once("photon-phase").chain(args.split_whitespace());
        match parse_args(argv).unwrap() {
            Invocation::Run(c) => c,
            other => panic!("unexpected {other:?}"),
        }
    }

    fn parse_err(args: &str) -> clap::Error {
        let argv = std::iter::once("photon-phase").chain(args.split_whitespace());
        parse_args(argv).unwrap_err()
    }

    #[test]
    fn parse_examples() {
        let c = cfg("pmf exact displaced --n 3 --beta 10.1 --nmax 300 --out fig6.csv");
        assert_eq!(
            (c.command, c.method, c.target),
            (CommandKind::Pmf, Some(MethodArg::Exact), Target::Displaced)
        );
        assert_eq!((c.n, c.beta, c.nmax), (Some(3), Some(10.1), Some(300)));
        assert_eq!(c.out.as_deref(), Some(Path::new("fig6.csv")));

        let c = cfg("pmf exact tpcs --beta 5.1 --r 3 --nmax 2000");
        assert_eq!((c.beta, c.r, c.nmax), (Some(5.1), Some(3.0), Some(2000)));
        assert_eq!(c.prefactor, PrefactorArg::Amplitude);
        assert_eq!(c.x2, X2Arg::Consistent);
    }

    #[test]
    fn invalid_arguments_exit_with_two() {
        for args in [
            "pmf exact displaced --n -1 --beta 1",
            "pmf exact displaced --beta 1",
            "pmf exact tpcs --beta 1 --r -1",
            "pmf parity displaced --n 1 --beta 1",
            "pmf exact displaced --n 1 --beta abc",
            "qgrid fock --m 3 --window 1:2:3",
            "qgrid fock --m 3 --res 10",
            "qgrid fock",
            "frobnicate",
            "pmf exact displaced --n 1 --beta 1 --bogus",
        ] {
            assert_eq!(parse_err(args).exit_code(), 2, "{args}");
        }
    }

    #[test]
    fn grid_resolution() {
        let c = cfg("qgrid product --m 100 --n 3 --beta 10.1 --window -2:14:-6:6 --res 400x300");
        assert_eq!(
            c.grid,
            Some(GridSpec {
                x_min: -2.0,
                x_max: 14.0,
                y_min: -6.0,
                y_max: 6.0,
                nx: 400,
                ny: 300
            })
        );
        let c = cfg("qgrid fock --m 3");
        assert_eq!(c.grid, Some(QSurface::Fock { m: 3 }.default_grid(DEFAULT_STEP)));
    }

    #[test]
    fn csv_format() {
        let csv = render(&cfg("pmf exact displaced --n 0 --beta 1 --nmax 2")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,p");
        assert_eq!(lines[1], format!("0,{:.11e}", (-1f64).exp()));
        assert_eq!(lines.len(), 4);
        assert!(lines[1].split(',').nth(1).unwrap().contains('e'));
    }

    #[test]
    fn phases_table_leaves_domain_failures_empty() {
        let csv = render(&cfg("phases displaced --n 3 --beta 10.1 --nmax 200")).unwrap();
        assert!(csv.starts_with("m,psi_scaled,psi_wkb_scaled\n"));
        assert!(csv.contains("\n0,,\n"));
        let row200 = csv.lines().nth(201).unwrap();
        assert_eq!(row200, "200,,");
        let row100 = csv.lines().nth(101).unwrap();
        assert_eq!(row100.split(',').filter(|f| !f.is_empty()).count(), 3);
    }

    #[test]
    fn strict_single_row() {
        let err = render(&cfg("phases displaced --n 3 --beta 30 --m 50 --strict")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = render(&cfg("compare displaced --n 3 --beta 30 --m 50 --strict")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let ok = render(&cfg("phases displaced --n 3 --beta 30 --m 50")).unwrap();
        assert_eq!(ok, "m,psi_scaled,psi_wkb_scaled\n50,,\n");
        let ok = render(&cfg("compare displaced --n 3 --beta 10.1 --m 100 --strict")).unwrap();
        assert_eq!(ok.lines().count(), 2);
    }

    #[test]
    fn sidecar_round_trip() {
        let c = cfg("compare tpcs --beta 5.1 --r 3 --nmax 150 --prefactor paper-final --x2 paper-literal --out t.csv");
        let json = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value
            .as_object()
            .unwrap()
            .values()
            .all(|v| !v.is_object() && !v.is_array()));
        assert_eq!(value["prefactor"], "paper-final");
        assert_eq!(value["x2"], "paper-literal");

        let g = cfg("qgrid tpcs --beta 1 --r 1 --out q.csv");
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn meta_path_appends_suffix() {
        assert_eq!(
            meta_path(Path::new("out/fig6.csv")),
            PathBuf::from("out/fig6.csv.meta.json")
        );
    }
}
