//! Command-line surface. `run` parses arguments, executes one subcommand
//! inside a rayon pool of `--jobs` threads and returns the exit code.
//!
//! Exit codes: 0 success, 1 computation failure, 2 invalid arguments.
//! Every failure prints exactly one line starting with `error:`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    equidist_test, scaling_study, separation_from_results, split_fraction_test, CellPartition, StudyOptions,
};
use crate::config::PointConfiguration;
use crate::constants::theoretical_limit;
use crate::energy::{EnergyReport, RieszParams};
use crate::error::Error;
use crate::io::{fmt17, format_scaling_csv, read_config_file, to_json, write_config_file};
use crate::manifold::{Chart, ManifoldSpec};
use crate::optimize::{best_of_restarts, check_tiling_inequality, tile_cube_configuration, InitStrategy, OptimizerOptions};

pub const JOBS_ENV: &str = "RIESZ_LAB_JOBS";

#[derive(Debug, Parser)]
#[command(name = "riesz-lab", version, about = "Minimal Riesz s-energy configurations")]
struct Cli {
    /// Worker threads (default: available cores; RIESZ_LAB_JOBS overrides).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the energy of N points and write the configuration.
    Optimize(OptimizeArgs),
    /// Optimize a list of N values and fit the growth law.
    Scaling(ScalingArgs),
    /// Count points of a configuration in measure-weighted cells.
    Equidist(EquidistArgs),
    /// Scaled minimal separation across N.
    Separation(SeparationArgs),
    /// Print the known limit or bound of E/tau.
    Constants(ConstantsArgs),
    /// Tile a unit-cube configuration into m^d scaled copies.
    Tile(TileArgs),
    /// Fraction of optimal points landing on each of two disjoint parts.
    Split(SplitArgs),
}

#[derive(Debug, Clone, Args)]
struct OptArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long = "max-iter", default_value_t = 2000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// random | lattice | tiled:M:GAMMA | file:PATH
    #[arg(long, default_value = "random")]
    init: String,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: f64,
    #[command(flatten)]
    opt: OptArgs,
    /// Configuration output (riesz-config v1).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Save the run description as JSON.
    #[arg(long = "save-run")]
    save_run: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScalingArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    s: f64,
    /// Comma-separated, strictly increasing.
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[command(flatten)]
    opt: OptArgs,
    /// CSV output (default: stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Full study as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Fill runtime_s with wall-clock seconds (breaks byte-reproducibility).
    #[arg(long = "record-runtime")]
    record_runtime: bool,
    #[arg(long = "save-run")]
    save_run: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EquidistArgs {
    /// quadrants | grid:K1,K2 | bands:K | tube-halves | tube:K | tube:E0,E1,..
    #[arg(long)]
    cells: String,
    /// Existing configuration; otherwise one is optimized.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Defaults to the manifold recorded in the input file.
    #[arg(long)]
    manifold: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<f64>,
    #[command(flatten)]
    opt: OptArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SeparationArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    s: f64,
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[command(flatten)]
    opt: OptArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long)]
    s: f64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    manifold: String,
    /// Print JSON instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also check the tiling inequality at this s and print it as JSON.
    #[arg(long)]
    s: Option<f64>,
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Chart, e.g. affine-box:x0=0:x1=1:y0=0:y1=1
    #[arg(long = "part-a")]
    part_a: String,
    #[arg(long = "part-b")]
    part_b: Option<String>,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    opt: OptArgs,
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub manifold: String,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub s: f64,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub init: String,
    pub optimizer: OptimizerOptions,
    pub outputs: Vec<String>,
}

impl RunConfig {
    pub fn to_json(&self) -> crate::Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Failure of a subcommand, tagged with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

/// Collapses clap's multi-line diagnostics into one line.
fn one_line(rendered: &str) -> String {
    let parts: Vec<&str> = rendered
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .collect();
    let joined = parts.join(" ");
    let body = joined.strip_prefix("error:").unwrap_or(&joined).trim();
    format!("error: {body}")
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprintln!("{}", one_line(&e.render().to_string()));
                    2
                }
            };
        }
    };
    let jobs = match resolve_jobs(cli.jobs) {
        Ok(j) => j,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {}", m.replace('\n', " "));
            2
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {}", m.replace('\n', " "));
            1
        }
    }
}

fn resolve_jobs(flag: Option<usize>) -> std::result::Result<usize, String> {
    if let Ok(v) = std::env::var(JOBS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(j) if j > 0 => Ok(j),
            _ => Err(format!("{JOBS_ENV}: expected a positive integer, got '{v}'")),
        };
    }
    match flag {
        Some(0) => Err("--jobs: must be at least 1".into()),
        Some(j) => Ok(j),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Optimize(a) => cmd_optimize(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Equidist(a) => cmd_equidist(a),
        Command::Separation(a) => cmd_separation(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Tile(a) => cmd_tile(a),
        Command::Split(a) => cmd_split(a),
    }
}

fn parse_manifold(text: &str) -> std::result::Result<ManifoldSpec, Failure> {
    text.parse().map_err(|e| usage("--manifold", e))
}

fn parse_params(s: f64, m: &ManifoldSpec) -> std::result::Result<RieszParams, Failure> {
    RieszParams::new(s, m.intrinsic_dim()).map_err(|e| usage("--s", e))
}

fn parse_n(n: usize) -> std::result::Result<usize, Failure> {
    if n < 2 {
        return Err(usage("--n", format!("need N >= 2, got {n}")));
    }
    Ok(n)
}

fn optimizer_options(o: &OptArgs) -> std::result::Result<OptimizerOptions, Failure> {
    if o.restarts < 1 {
        return Err(usage("--restarts", "must be at least 1"));
    }
    if !(o.tol > 0.0) {
        return Err(usage("--tol", "must be positive"));
    }
    Ok(OptimizerOptions {
        max_iterations: o.max_iter,
        gradient_tolerance: o.tol,
        restarts: o.restarts,
        seed: o.seed,
        ..OptimizerOptions::default()
    })
}

fn parse_init(text: &str) -> std::result::Result<InitStrategy, Failure> {
    let bad = || usage("--init", format!("expected random, lattice, tiled:M:GAMMA or file:PATH, got '{text}'"));
    match text {
        "random" => Ok(InitStrategy::Random),
        "lattice" => Ok(InitStrategy::Lattice),
        _ if text.starts_with("file:") => {
            let cfg = read_config_file(&text[5..]).map_err(|e| usage("--init", e))?;
            Ok(InitStrategy::File(cfg))
        }
        _ if text.starts_with("tiled:") => {
            let (m, g) = text[6..].split_once(':').ok_or_else(bad)?;
            Ok(InitStrategy::Tiled {
                m: m.parse().map_err(|_| bad())?,
                gamma: g.parse().map_err(|_| bad())?,
            })
        }
        _ => Err(bad()),
    }
}

fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Run(e.to_string()))
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn save_run(path: Option<&Path>, run: RunConfig) -> CmdResult {
    if let Some(p) = path {
        emit(Some(p), &with_newline(run.to_json()?))?;
    }
    Ok(())
}

fn path_strings(paths: &[&Option<PathBuf>]) -> Vec<String> {
    paths
        .iter()
        .filter_map(|p| p.as_ref().map(|p| p.display().to_string()))
        .collect()
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    manifold: String,
    init: &'a str,
    seed: u64,
    iterations: usize,
    converged: bool,
    #[serde(serialize_with = "crate::io::ser_f64")]
    stationarity: f64,
    #[serde(serialize_with = "crate::io::ser_vec_f64")]
    restart_energies: &'a [f64],
    diagnostic: &'a Option<String>,
    report: &'a EnergyReport,
}

fn cmd_optimize(a: OptimizeArgs) -> CmdResult {
    let m = parse_manifold(&a.manifold)?;
    let params = parse_params(a.s, &m)?;
    let n = parse_n(a.n)?;
    let opts = optimizer_options(&a.opt)?;
    let init = parse_init(&a.opt.init)?;
    save_run(
        a.save_run.as_deref(),
        RunConfig {
            command: "optimize".into(),
            manifold: m.to_string(),
            s: a.s,
            n: vec![n],
            init: a.opt.init.clone(),
            optimizer: opts.clone(),
            outputs: path_strings(&[&a.out, &a.report]),
        },
    )?;
    let r = best_of_restarts(&m, n, &params, &init, &opts)?;
    if let Some(out) = &a.out {
        write_config_file(out, &r.config)?;
    }
    let json = to_json(&OptimizeOutput {
        manifold: m.to_string(),
        init: init.name(),
        seed: r.seed,
        iterations: r.iterations,
        converged: r.converged,
        stationarity: r.stationarity,
        restart_energies: &r.restart_energies,
        diagnostic: &r.diagnostic,
        report: &r.report,
    })?;
    emit(a.report.as_deref(), &with_newline(json))
}

fn study_options(o: &OptArgs, record_runtime: bool) -> std::result::Result<StudyOptions, Failure> {
    Ok(StudyOptions {
        optimizer: optimizer_options(o)?,
        init: parse_init(&o.init)?,
        record_runtime,
    })
}

fn check_n_list(ns: &[usize]) -> CmdResult {
    if ns.len() < 3 {
        return Err(usage("--n-list", format!("need at least 3 values, got {}", ns.len())));
    }
    if ns.iter().any(|&n| n < 2) || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage("--n-list", "values must be >= 2 and strictly increasing"));
    }
    Ok(())
}

fn cmd_scaling(a: ScalingArgs) -> CmdResult {
    let m = parse_manifold(&a.manifold)?;
    let params = parse_params(a.s, &m)?;
    check_n_list(&a.n_list)?;
    let opts = study_options(&a.opt, a.record_runtime)?;
    save_run(
        a.save_run.as_deref(),
        RunConfig {
            command: "scaling".into(),
            manifold: m.to_string(),
            s: a.s,
            n: a.n_list.clone(),
            init: a.opt.init.clone(),
            optimizer: opts.optimizer.clone(),
            outputs: path_strings(&[&a.csv, &a.json]),
        },
    )?;
    let (study, _) = scaling_study(&m, &params, &a.n_list, &opts)?;
    if let Some(p) = &a.json {
        emit(Some(p), &with_newline(to_json(&study)?))?;
    }
    emit(a.csv.as_deref(), &format_scaling_csv(&study.rows))
}

fn cmd_equidist(a: EquidistArgs) -> CmdResult {
    let cells: CellPartition = a.cells.parse().map_err(|e| usage("--cells", e))?;
    let (config, m): (PointConfiguration, ManifoldSpec) = match &a.input {
        Some(path) => {
            let cfg = read_config_file(path).map_err(|e| usage("--in", e))?;
            let name = match &a.manifold {
                Some(s) => s.clone(),
                None if !cfg.meta.manifold.is_empty() => cfg.meta.manifold.clone(),
                None => return Err(usage("--manifold", "required when the input file records none")),
            };
            (cfg, parse_manifold(&name)?)
        }
        None => {
            let name = a.manifold.as_deref().ok_or_else(|| usage("--manifold", "required without --in"))?;
            let m = parse_manifold(name)?;
            let s = a.s.ok_or_else(|| usage("--s", "required without --in"))?;
            let params = parse_params(s, &m)?;
            let n = parse_n(a.n.ok_or_else(|| usage("--n", "required without --in"))?)?;
            let r = best_of_restarts(&m, n, &params, &parse_init(&a.opt.init)?, &optimizer_options(&a.opt)?)?;
            (r.config, m)
        }
    };
    let report = equidist_test(&config, &m, &cells).map_err(|e| match e {
        Error::InvalidPartition(_) => usage("--cells", e),
        e => Failure::from(e),
    })?;
    emit(a.out.as_deref(), &with_newline(to_json(&report)?))
}

fn cmd_separation(a: SeparationArgs) -> CmdResult {
    let m = parse_manifold(&a.manifold)?;
    let params = parse_params(a.s, &m)?;
    if a.n_list.is_empty() || a.n_list.iter().any(|&n| n < 2) {
        return Err(usage("--n-list", "values must be >= 2"));
    }
    let opts = optimizer_options(&a.opt)?;
    let init = parse_init(&a.opt.init)?;
    let results = a
        .n_list
        .iter()
        .map(|&n| best_of_restarts(&m, n, &params, &init, &opts))
        .collect::<crate::Result<Vec<_>>>()?;
    let report = separation_from_results(&results, &params)?;
    emit(a.out.as_deref(), &with_newline(to_json(&report)?))
}

fn cmd_constants(a: ConstantsArgs) -> CmdResult {
    let m = parse_manifold(&a.manifold)?;
    if a.d != m.intrinsic_dim() {
        return Err(usage("--d", format!("{} has dimension {}, not {}", m, m.intrinsic_dim(), a.d)));
    }
    let params = RieszParams::new(a.s, a.d).map_err(|e| usage("--s", e))?;
    let lim = theoretical_limit(&params, &m)?;
    if a.json {
        return emit(None, &with_newline(to_json(&lim)?));
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), fmt17);
    let table = format!(
        "manifold     {m}\ns            {}\nd            {}\nmeasure      {}\nkind         {}\nvalue        {}\nupper_bound  {}\nformula      {}\n",
        fmt17(lim.s),
        lim.d,
        fmt17(lim.measure),
        lim.kind,
        opt(lim.value),
        opt(lim.upper_bound),
        lim.description
    );
    emit(None, &table)
}

fn cmd_tile(a: TileArgs) -> CmdResult {
    let base = read_config_file(&a.input).map_err(|e| usage("--in", e))?;
    if a.m < 1 {
        return Err(usage("--m", "must be at least 1"));
    }
    if !(a.gamma > 0.0 && a.gamma < 1.0) {
        return Err(usage("--gamma", format!("{} not in (0, 1)", a.gamma)));
    }
    let tiled = tile_cube_configuration(&base, a.m, a.gamma).map_err(|e| usage("--in", e))?;
    write_config_file(&a.out, &tiled)?;
    if let Some(s) = a.s {
        let check = check_tiling_inequality(&base, a.m, a.gamma, s).map_err(|e| usage("--s", e))?;
        emit(None, &with_newline(to_json(&check)?))?;
    }
    Ok(())
}

fn cmd_split(a: SplitArgs) -> CmdResult {
    let pa: Chart = a.part_a.parse().map_err(|e| usage("--part-a", e))?;
    let pb: Option<Chart> = a
        .part_b
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(|e| usage("--part-b", e))?;
    let params = RieszParams::new(a.s, pa.intrinsic_dim()).map_err(|e| usage("--s", e))?;
    let n = parse_n(a.n)?;
    let r = split_fraction_test(&pa, pb.as_ref(), &params, n, &optimizer_options(&a.opt)?).map_err(|e| match e {
        Error::PartsOverlap(_) => usage("--part-b", e),
        e => Failure::from(e),
    })?;
    emit(None, &with_newline(to_json(&r)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_errors_collapse_to_one_line() {
        let e = Cli::try_parse_from(["riesz-lab", "optimize", "--manifold", "interval:1", "--s", "2"]).unwrap_err();
        let line = one_line(&e.render().to_string());
        assert!(line.starts_with("error: "));
        assert!(line.contains("--n"), "{line}");
        assert!(!line.contains('\n'));
    }

    #[test]
    fn init_strings() {
        assert_eq!(parse_init("random").unwrap(), InitStrategy::Random);
        assert_eq!(
            parse_init("tiled:2:0.5").unwrap(),
            InitStrategy::Tiled { m: 2, gamma: 0.5 }
        );
        assert!(matches!(parse_init("grid"), Err(Failure::Usage(m)) if m.starts_with("--init")));
    }

    #[test]
    fn run_config_round_trip() {
        let rc = RunConfig {
            command: "scaling".into(),
            manifold: "interval:1".into(),
            s: 2.0,
            n: vec![50, 100, 200],
            init: "random".into(),
            optimizer: OptimizerOptions::default(),
            outputs: vec!["a.csv".into()],
        };
        assert_eq!(RunConfig::from_json(&rc.to_json().unwrap()).unwrap(), rc);
    }
}
