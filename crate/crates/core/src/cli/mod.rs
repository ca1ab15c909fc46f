//! Command-line front end: configuration, graph cache and experiment reports.

mod cache;
mod commands;
mod config;
mod report;

pub use cache::{Cache, CacheStatus, CACHE_VERSION};
pub use commands::{run_experiment, Experiment};
pub use config::{parse_levels, FunctionSpec, RunConfig};
pub use report::{Cell, ExperimentReport, ReportBody};

use crate::error::{Error, Result};
use clap::{Args, Parser};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "fractaldf", version, about = "Energy forms, resistances, Besov semi-norms and random walks on the Sierpinski gasket and carpet")]
pub struct Cli {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[command(flatten)]
    pub flags: Flags,
}

/// Flags override the config file.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory for reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Graph cache directory.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub level_cap: Option<usize>,
    /// `sg` or `sc`.
    #[arg(long)]
    pub kind: Option<String>,
    /// `a..b` or a single level.
    #[arg(long)]
    pub levels: Option<String>,
    /// `harmonic:a,b,c`, `goodfn` or `fx`.
    #[arg(long)]
    pub function: Option<String>,
    /// Comma-separated beta grid.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub mc_depth: Option<usize>,
    #[arg(long)]
    pub depth_cut: Option<usize>,
    /// Prefix level of the boundary hit distribution.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Flags {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::parse(&std::fs::read_to_string(p)?)?,
            None => RunConfig::default(),
        };
        let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| c.set(k, &v));
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("threads", self.threads.map(|v| v.to_string()))?;
        set("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        set("cache", self.cache.as_ref().map(|p| p.display().to_string()))?;
        set("level_cap", self.level_cap.map(|v| v.to_string()))?;
        set("kind", self.kind.clone())?;
        set("levels", self.levels.clone())?;
        set("function", self.function.clone())?;
        set("beta_grid", self.beta.clone())?;
        set("lambda", self.lambda.map(|v| v.to_string()))?;
        set("c", self.c.map(|v| v.to_string()))?;
        set("c1", self.c1.map(|v| v.to_string()))?;
        set("c2", self.c2.map(|v| v.to_string()))?;
        set("samples", self.samples.map(|v| v.to_string()))?;
        set("mc_depth", self.mc_depth.map(|v| v.to_string()))?;
        set("depth_cut", self.depth_cut.map(|v| v.to_string()))?;
        set("prefix_level", self.m.map(|v| v.to_string()))?;
        set("trials", self.trials.map(|v| v.to_string()))?;
        set("tol", self.tol.map(|v| v.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

/// Process exit code for an error: 2 invalid config, 3 resource cap, 4 solver failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::LevelCap { .. } => 3,
        Error::NonConvergence { .. } | Error::Degenerate(_) => 4,
        _ => 1,
    }
}

/// Runs one experiment and writes its report; returns the written paths.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = cli.flags.resolve()?;
    if cfg.threads > 0 {
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    let cache = Cache::new(cfg.cache.clone());
    let t = std::time::Instant::now();
    let report = run_experiment(cli.experiment, &cfg, &cache)?;
    log::info!("{} finished in {:.3?}", cli.experiment.id(), t.elapsed());
    report.write(&cfg.out)
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
