//! Command-line front end: `evolve`, `extract`, `sweep` and `benchmark`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::crawler::{CrawlerConfig, Kernel, Placement};
use crate::descriptors::{Descriptor, FourierParams, GaborParams, GlcmParams};
use crate::error::{Error, Result};
use crate::export;
use crate::imgio::{load_dataset, load_gray_file, LabeledDataset};
use crate::ml::LdaConfig;

pub mod pipeline;

pub use pipeline::{benchmark, evaluate, extract_features, sweep, BenchmarkMethod, CvSettings, SweepAxis};

#[derive(Debug, Parser)]
#[command(name = "acrawler", version, about = "Artificial-crawler texture descriptors and benchmarks")]
pub struct Cli {
    /// Worker threads for per-image extraction (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the live-agent curves of one image as CSV.
    Evolve(EvolveArgs),
    /// Extract one feature vector per image of a dataset as CSV.
    Extract(ExtractArgs),
    /// Cross-validate max, min and both signatures over a parameter axis.
    Sweep(SweepArgs),
    /// Compare descriptors with LDA and k-fold cross-validation.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CrawlerArgs {
    /// Energy every agent is born with.
    #[arg(long, default_value_t = 10.0)]
    pub initial_energy: f64,
    /// Survival threshold.
    #[arg(long, default_value_t = 1.0)]
    pub min_energy: f64,
    /// Energy cap.
    #[arg(long, default_value_t = 12.0)]
    pub max_energy: f64,
    /// Energy consumed per iteration.
    #[arg(long, default_value_t = 1.0)]
    pub energy_per_step: f64,
    /// Absorption rate per intensity unit.
    #[arg(long, default_value_t = 0.01)]
    pub absorption: f64,
    /// Number of agents.
    #[arg(long = "agents", default_value_t = 1000)]
    pub n_agents: usize,
    #[arg(long, default_value_t = 41)]
    pub t_max: usize,
    #[arg(long, value_enum, default_value_t = KernelArg::Both)]
    pub kernel: KernelArg,
    #[arg(long, value_enum, default_value_t = PlacementArg::Random)]
    pub placement: PlacementArg,
    /// Seed for agent placement and fold assignment.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit raw live-agent counts instead of fractions of the agent count.
    #[arg(long = "raw-counts", conflicts_with = "normalize")]
    pub raw_counts: bool,
    /// Divide live-agent counts by the agent count (default).
    #[arg(long)]
    pub normalize: bool,
}

impl CrawlerArgs {
    pub fn config(&self) -> CrawlerConfig {
        CrawlerConfig {
            initial_energy: self.initial_energy,
            min_energy: self.min_energy,
            max_energy: self.max_energy,
            energy_per_step: self.energy_per_step,
            absorption: self.absorption,
            n_agents: self.n_agents,
            t_max: self.t_max,
            kernel: self.kernel.into(),
            placement: self.placement.into(),
            seed: self.seed,
        }
    }

    pub fn normalized(&self) -> bool {
        !self.raw_counts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Max,
    Min,
    Both,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Max => Kernel::Max,
            KernelArg::Min => Kernel::Min,
            KernelArg::Both => Kernel::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    /// Distinct random pixels.
    Random,
    /// One agent on every pixel (ignores --agents).
    AllPixels,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Random => Placement::RandomWithoutReplacement,
            PlacementArg::AllPixels => Placement::DeterministicAllPixels,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    /// Co-occurrence distances.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub glcm_distances: Vec<usize>,
    /// Gray levels after quantisation.
    #[arg(long, default_value_t = 64)]
    pub glcm_levels: usize,
    #[arg(long, default_value_t = 4)]
    pub gabor_scales: usize,
    #[arg(long, default_value_t = 6)]
    pub gabor_orientations: usize,
    #[arg(long, default_value_t = 32)]
    pub fourier_rings: usize,
}

impl BaselineArgs {
    fn glcm(&self) -> Descriptor {
        Descriptor::Glcm(GlcmParams {
            distances: self.glcm_distances.clone(),
            levels: self.glcm_levels,
        })
    }

    fn gabor(&self) -> Descriptor {
        Descriptor::Gabor(GaborParams {
            scales: self.gabor_scales,
            orientations: self.gabor_orientations,
        })
    }

    fn fourier(&self) -> Descriptor {
        Descriptor::Fourier(FourierParams {
            rings: self.fourier_rings,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.glcm_distances.is_empty() || self.glcm_distances.contains(&0) {
            return Err(Error::Parameter("--glcm-distances must be positive".into()));
        }
        if !(2..=256).contains(&self.glcm_levels) {
            return Err(Error::Parameter("--glcm-levels must lie in [2, 256]".into()));
        }
        if self.gabor_scales == 0 || self.gabor_orientations == 0 {
            return Err(Error::Parameter("--gabor-scales and --gabor-orientations must be positive".into()));
        }
        if self.fourier_rings == 0 {
            return Err(Error::Parameter("--fourier-rings must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// LDA shrinkage toward the scaled identity, in [0, 1].
    #[arg(long, default_value_t = 1e-4)]
    pub shrinkage: f64,
}

impl CvArgs {
    fn settings(&self, seed: u64) -> Result<CvSettings> {
        if self.folds < 2 {
            return Err(Error::Parameter("--folds must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.shrinkage) {
            return Err(Error::Parameter("--shrinkage must lie in [0, 1]".into()));
        }
        Ok(CvSettings {
            folds: self.folds,
            seed,
            lda: LdaConfig {
                shrinkage: self.shrinkage,
            },
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// PGM or 8-bit grayscale PNG.
    pub image: PathBuf,
    #[command(flatten)]
    pub crawler: CrawlerArgs,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Acrawler,
    Glcm,
    Gabor,
    Fourier,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    /// Dataset root with one subdirectory per class.
    pub root: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Acrawler)]
    pub method: MethodArg,
    #[command(flatten)]
    pub crawler: CrawlerArgs,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    TMax,
    NAgents,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    pub root: PathBuf,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,
    #[command(flatten)]
    pub crawler: CrawlerArgs,
    #[command(flatten)]
    pub cv: CvArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    pub root: PathBuf,
    /// Methods: acrawler-max, acrawler-min, acrawler-both, glcm, gabor, fourier.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "acrawler-max,acrawler-min,acrawler-both,glcm,gabor,fourier"
    )]
    pub methods: Vec<String>,
    #[command(flatten)]
    pub crawler: CrawlerArgs,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    #[command(flatten)]
    pub cv: CvArgs,
    /// CSV output; the text table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Resolves a benchmark method name against the parsed flags.
pub fn resolve_method(name: &str, crawler: &CrawlerArgs, baseline: &BaselineArgs) -> Result<BenchmarkMethod> {
    let with_kernel = |kernel| Descriptor::Crawler {
        config: CrawlerConfig {
            kernel,
            ..crawler.config()
        },
        normalized: crawler.normalized(),
    };
    let descriptor = match name {
        "acrawler" => with_kernel(crawler.kernel.into()),
        "acrawler-max" => with_kernel(Kernel::Max),
        "acrawler-min" => with_kernel(Kernel::Min),
        "acrawler-both" => with_kernel(Kernel::Both),
        "glcm" => baseline.glcm(),
        "gabor" => baseline.gabor(),
        "fourier" => baseline.fourier(),
        other => return Err(Error::Parameter(format!("unknown method {other:?}"))),
    };
    Ok(BenchmarkMethod {
        name: name.to_string(),
        descriptor,
    })
}

fn load(root: &Path) -> Result<LabeledDataset> {
    let dataset = load_dataset(root)?;
    for w in &dataset.warnings {
        eprintln!("warning: {w}");
    }
    Ok(dataset)
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<String> {
    let config = args.crawler.config();
    config.validate()?;
    let image = load_gray_file(&args.image)?;
    let curves = crate::crawler::curves(&image, &config)?;
    Ok(export::curves_csv(&curves))
}

pub fn cmd_extract(args: &ExtractArgs) -> Result<String> {
    let descriptor = match args.method {
        MethodArg::Acrawler => {
            let config = args.crawler.config();
            config.validate()?;
            Descriptor::Crawler {
                config,
                normalized: args.crawler.normalized(),
            }
        }
        MethodArg::Glcm => args.baseline.glcm(),
        MethodArg::Gabor => args.baseline.gabor(),
        MethodArg::Fourier => args.baseline.fourier(),
    };
    args.baseline.validate()?;
    let dataset = load(&args.root)?;
    let features = extract_features(&dataset, &descriptor)?;
    Ok(export::features_csv(
        dataset.samples.iter().map(|s| s.label.as_str()).zip(&features),
    ))
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    if args.values.is_empty() {
        return Err(Error::Parameter("--values must not be empty".into()));
    }
    let cv = args.cv.settings(args.crawler.seed)?;
    let dataset = load(&args.root)?;
    let axis = match args.axis {
        AxisArg::TMax => SweepAxis::TMax,
        AxisArg::NAgents => SweepAxis::Agents,
    };
    let rows = sweep(
        &dataset,
        axis,
        &args.values,
        &args.crawler.config(),
        args.crawler.normalized(),
        &cv,
    );
    Ok(export::sweep_csv(&rows))
}

/// Returns `(csv, table)`.
pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(String, String)> {
    if args.methods.is_empty() {
        return Err(Error::Parameter("at least one method is required".into()));
    }
    let cv = args.cv.settings(args.crawler.seed)?;
    args.baseline.validate()?;
    let methods = args
        .methods
        .iter()
        .map(|m| resolve_method(m, &args.crawler, &args.baseline))
        .collect::<Result<Vec<_>>>()?;
    if methods.iter().any(|m| matches!(m.descriptor, Descriptor::Crawler { .. })) {
        args.crawler.config().validate()?;
    }
    let dataset = load(&args.root)?;
    let rows = benchmark(&dataset, &methods, &cv);
    Ok((export::benchmark_csv(&rows), export::benchmark_table(&rows)))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => export::write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        // only fails if a global pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match &cli.command {
        Command::Evolve(args) => emit(args.out.as_deref(), &cmd_evolve(args)?),
        Command::Extract(args) => emit(args.out.as_deref(), &cmd_extract(args)?),
        Command::Sweep(args) => emit(args.out.as_deref(), &cmd_sweep(args)?),
        Command::Benchmark(args) => {
            let (csv, table) = cmd_benchmark(args)?;
            if let Some(path) = &args.out {
                export::write_atomic(path, csv.as_bytes())?;
            }
            emit(None, &table)
        }
    }
}
