mod batch;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use genbound::algorithms::{Algorithm, Field, MultistepOptions};
use genbound::numberfield::{Polynomial, SplittingCache};
use genbound::Error;
use num_bigint::BigInt;

use report::FieldReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoChoice {
    Bdydf,
    Multistep,
    Simplified,
    #[value(name = "closed_forms")]
    ClosedForms,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// GRH-conditional bounds T such that the prime ideals of norm at most T
/// generate the class group of Q[x]/(P).
///
/// Reported bounds are integers: the prime ideals of norm <= T generate.
/// The multistep search tests thresholds at prime ideal norms and reports
/// the largest norm below the successful one.
#[derive(Debug, Parser)]
#[command(name = "genbound", version)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["poly", "poly_file"])))]
pub struct Cli {
    /// Monic irreducible polynomial, e.g. "x^3 - x - 1" or "[-1, -1, 0, 1]".
    #[arg(long)]
    poly: Option<String>,
    /// Batch mode: one polynomial per line, optionally followed by
    /// "; <discriminant>". Writes CSV.
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Field discriminant, when known (sign included).
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<String>,
    /// Natural log of the absolute field discriminant.
    #[arg(long)]
    log_disc: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    algorithms: Vec<AlgoChoice>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    /// List the prime ideals up to the smallest bound found.
    #[arg(long)]
    list_ideals: bool,
    /// Write the multistep certificate (JSON) to this path.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0625)]
    delta_grid: f64,
    /// Largest number of steps the multistep search may use.
    #[arg(long, default_value_t = 16384)]
    n_safety: usize,
    /// Splitting cache file (a directory of per-field files in batch mode).
    #[arg(long, env = "GENBOUND_CACHE_DIR", hide_env_values = true)]
    cache: Option<PathBuf>,
    /// Fields processed concurrently in batch mode.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Largest norm table a run may build.
    #[arg(long)]
    t_max_override: Option<f64>,
    /// Batch output file; a "<out>.ckpt" sidecar makes the run resumable.
    #[arg(long)]
    out: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub disc_override: Option<BigInt>,
    pub log_disc_override: Option<f64>,
    pub algorithms: Vec<Algorithm>,
    pub closed_forms: bool,
    pub output: OutputFormat,
    pub list_ideals: bool,
    pub certificate_path: Option<PathBuf>,
    pub options: MultistepOptions,
    pub cache: Option<PathBuf>,
    pub t_max_override: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Integrity(_)) | CliError::Core(Error::Coverage { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    if !(cli.delta_grid > 0.0) || !cli.delta_grid.is_finite() {
        return Err(CliError::Usage(format!("--delta-grid must be positive, got {}", cli.delta_grid)));
    }
    if cli.n_safety < 8 {
        return Err(CliError::Usage(format!("--n-safety must be at least 8, got {}", cli.n_safety)));
    }
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let disc_override = match &cli.disc {
        Some(s) => Some(
            s.trim()
                .parse::<BigInt>()
                .map_err(|e| CliError::Usage(format!("--disc {s}: {e}")))?,
        ),
        None => None,
    };
    let all = cli.algorithms.contains(&AlgoChoice::All);
    let has = |a| all || cli.algorithms.contains(&a);
    let mut algorithms = Vec::new();
    for (choice, a) in [
        (AlgoChoice::Bdydf, Algorithm::Bdydf),
        (AlgoChoice::Multistep, Algorithm::Multistep),
        (AlgoChoice::Simplified, Algorithm::Simplified),
    ] {
        if has(choice) {
            algorithms.push(a);
        }
    }
    if cli.certificate.is_some() && !algorithms.contains(&Algorithm::Multistep) {
        return Err(CliError::Usage("--certificate needs the multistep algorithm".into()));
    }
    Ok(RunConfig {
        disc_override,
        log_disc_override: cli.log_disc,
        algorithms,
        closed_forms: has(AlgoChoice::ClosedForms),
        output: cli.output,
        list_ideals: cli.list_ideals,
        certificate_path: cli.certificate.clone(),
        options: MultistepOptions { delta_grid: cli.delta_grid, n_safety: cli.n_safety, ..Default::default() },
        cache: cli.cache.clone(),
        t_max_override: cli.t_max_override,
    })
}

/// Builds the field and runs everything requested. Algorithm failures that
/// are not integrity errors are recorded in the report and the others still
/// run.
pub fn compute(
    poly: Polynomial,
    disc: Option<&BigInt>,
    cfg: &RunConfig,
    cache_path: Option<&Path>,
) -> Result<FieldReport, CliError> {
    let cache = match cache_path {
        Some(p) => Some(SplittingCache::load_or_new(p, &poly.content_hash())?),
        None => None,
    };
    let disc = disc.or(cfg.disc_override.as_ref());
    let mut field = Field::with_cache(poly, disc, cfg.log_disc_override, cache)?;
    if let Some(t) = cfg.t_max_override {
        field.set_t_max_limit(t);
    }
    let mut rep = FieldReport::from_field(&field);
    for &a in &cfg.algorithms {
        let r = match a {
            Algorithm::Bdydf => field.bdydf(),
            Algorithm::Multistep => field.multistep_bound(&cfg.options),
            Algorithm::Simplified => field.simplified_bound(),
        };
        match r {
            Ok(r) => rep.results.push(r),
            Err(e @ (Error::Integrity(_) | Error::Coverage { .. })) => return Err(e.into()),
            Err(e) => rep.errors.push(format!("{}: {e}", a.as_str())),
        }
    }
    if cfg.closed_forms {
        match field.closed_forms() {
            Ok(b) => rep.closed_forms = Some(b),
            Err(e) => rep.errors.push(format!("closed_forms: {e}")),
        }
    }
    rep.skipped_primes = field.table().skipped_primes();
    rep.warnings = field.warnings();
    if cfg.list_ideals {
        match rep.results.iter().map(|r| r.t).min() {
            Some(t) => rep.ideals = Some(field.list_generators(t)?),
            None => rep.warnings.push("no bound computed; nothing to list".into()),
        }
    }
    if let (Some(p), Some(c)) = (cache_path, field.cache_mut()) {
        if c.is_dirty() {
            c.save(p)?;
        }
    }
    Ok(rep)
}

fn run_single(text: &str, cfg: &RunConfig) -> Result<u8, CliError> {
    let poly: Polynomial = text.parse()?;
    let cache_path = cfg.cache.as_ref().map(|p| {
        if p.is_dir() {
            p.join(format!("{}.json", poly.content_hash()))
        } else {
            p.clone()
        }
    });
    let rep = compute(poly, None, cfg, cache_path.as_deref())?;
    if let Some(path) = &cfg.certificate_path {
        let cert = rep
            .result(Algorithm::Multistep)
            .and_then(|r| r.certificate.as_ref())
            .ok_or_else(|| CliError::Usage("multistep produced no certificate".into()))?;
        let text = serde_json::to_string_pretty(cert).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    for w in &rep.warnings {
        log::warn!("{w}");
    }
    match cfg.output {
        OutputFormat::Text => print!("{}", report::render_text(&rep)),
        OutputFormat::Json => print!("{}", report::render_json(&rep)),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(report::CSV_HEADER).map_err(io)?;
            w.write_record(report::csv_row(1, &rep)).map_err(io)?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(if rep.errors.is_empty() { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let outcome = config(&cli).and_then(|cfg| match (&cli.poly, &cli.poly_file) {
        (Some(p), _) => run_single(p, &cfg),
        (None, Some(path)) => batch::run_batch(path, cli.out.as_deref(), cli.jobs, &cfg),
        (None, None) => Err(CliError::Usage("one of --poly or --poly-file is required".into())),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("genbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
