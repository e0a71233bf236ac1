//! Command-line front door: resample, corrupt, evaluate and benchmark
//! datasets with reproducible seeds and machine-readable outputs.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 contract or flag
//! violation.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ingb_core::baselines::{run_pipeline_report, Pipeline, PipelineConfig, StageReport};
use ingb_core::dataset::{
    inject_label_noise, load_csv, stratified_folds, write_csv, Dataset, LabelColumn, NoiseSpec,
};
use ingb_core::error::Error;
use ingb_core::eval::{cross_validate, ClassifierSpec, CvReport, MetricsReport};
use ingb_core::generators::{generate, Generator};
use ingb_core::geometry::DistanceOrder;
use ingb_core::granular::{build_balls, dump_balls_jsonl, SplitConfig};
use ingb_core::informed::{
    IngbConfig, OversampleReport, PairWeighting, SeedThreshold, SparsityExponent, SynthesisConfig,
};
use ingb_core::seeding;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "ingb",
    version,
    about = "Granular-ball resampling for noisy imbalanced datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Balance a CSV dataset with a resampling pipeline
    Resample(ResampleArgs),
    /// Flip a fraction of each class's labels, writing a corrupted copy
    Noise(NoiseArgs),
    /// Cross-validated evaluation of one pipeline
    Evaluate(EvaluateArgs),
    /// Sweep noise rates and pipelines into a long-format CSV
    Bench(BenchArgs),
    /// Emit a bundled synthetic benchmark dataset
    Gen(GenArgs),
}

#[derive(Args, Debug, Clone)]
struct InputOpts {
    /// Input CSV (header row; label column selectable by name)
    #[arg(long = "in")]
    input: PathBuf,
    /// Label column name; defaults to the last column
    #[arg(long)]
    label_column: Option<String>,
}

impl InputOpts {
    fn load(&self) -> Result<Dataset, Error> {
        let column = match &self.label_column {
            Some(name) => LabelColumn::Name(name.clone()),
            None => LabelColumn::Last,
        };
        load_csv(&self.input, &column)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SparsityExponentArg {
    /// |GB|^n / V_n as printed
    #[value(name = "n")]
    N,
    /// |GB| / V_n
    #[value(name = "1")]
    One,
}

impl From<SparsityExponentArg> for SparsityExponent {
    fn from(a: SparsityExponentArg) -> Self {
        match a {
            SparsityExponentArg::N => SparsityExponent::DimN,
            SparsityExponentArg::One => SparsityExponent::One,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeedThresholdArg {
    #[value(name = "ge-mean")]
    GeMean,
    #[value(name = "le-mean")]
    LeMean,
}

impl From<SeedThresholdArg> for SeedThreshold {
    fn from(a: SeedThresholdArg) -> Self {
        match a {
            SeedThresholdArg::GeMean => SeedThreshold::GeMean,
            SeedThresholdArg::LeMean => SeedThreshold::LeMean,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct SamplerOpts {
    /// State (purity) lower bound for ball splitting, in (0, 1]
    #[arg(long = "T", default_value_t = 1.0)]
    t: f64,
    /// Minkowski distance order (p >= 1)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Scale on the per-axis Gaussian deviation
    #[arg(long, default_value_t = 1.0)]
    sigma_scale: f64,
    /// Exponent on the member count in the sparsity statistic
    #[arg(long, value_enum, default_value_t = SparsityExponentArg::N)]
    sparsity_exponent: SparsityExponentArg,
    /// Entropy side that qualifies seed balls
    #[arg(long, value_enum, default_value_t = SeedThresholdArg::LeMean)]
    seed_threshold: SeedThresholdArg,
    /// SMOTE neighborhood size
    #[arg(long, default_value_t = 5)]
    smote_k: usize,
}

impl SamplerOpts {
    fn config(&self, seed: u64) -> Result<PipelineConfig, Error> {
        let split = SplitConfig {
            t: self.t,
            p: DistanceOrder::new(self.p)?,
            seed,
            ..SplitConfig::default()
        };
        split.validate()?;
        let synth = SynthesisConfig {
            sigma_scale: self.sigma_scale,
            seed,
            ..SynthesisConfig::default()
        };
        synth.validate()?;
        Ok(PipelineConfig {
            ingb: IngbConfig {
                split,
                synth,
                sparsity_exponent: self.sparsity_exponent.into(),
                seed_threshold: self.seed_threshold.into(),
                pair_weighting: PairWeighting::Informed,
            },
            smote_k: self.smote_k,
            seed,
        })
    }
}

#[derive(Args, Debug)]
struct ResampleArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Output CSV with a trailing `synthetic` 0/1 column
    #[arg(long = "out")]
    output: PathBuf,
    /// Dash-separated stages (enn, tkl, smote, ingb) or `none`
    #[arg(long, default_value = "ingb")]
    pipeline: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    sampler: SamplerOpts,
    /// Also dump the granular balls of the input, one JSON object per line
    #[arg(long)]
    balls_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Output CSV for the corrupted dataset
    #[arg(long = "out")]
    output: PathBuf,
    /// Fraction of each class to flip, in [0, 0.3]
    #[arg(long)]
    noise_rate: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sidecar JSON with the flipped row indices (default: <out>.flips.json)
    #[arg(long)]
    flips_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Report file; stdout when omitted
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Dash-separated stages (enn, tkl, smote, ingb) or `none`
    #[arg(long, default_value = "none")]
    pipeline: String,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated classifier list (knn, logreg)
    #[arg(long, default_value = "knn,logreg")]
    classifiers: String,
    /// Parallel fold evaluations
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(flatten)]
    sampler: SamplerOpts,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Long-format CSV of metric means and deviations
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    sampler: SamplerOpts,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GeneratorArg {
    Blobs2,
    Blobs3,
    Ring,
    Highdim,
}

impl From<GeneratorArg> for Generator {
    fn from(a: GeneratorArg) -> Self {
        match a {
            GeneratorArg::Blobs2 => Generator::Blobs2,
            GeneratorArg::Blobs3 => Generator::Blobs3,
            GeneratorArg::Ring => Generator::Ring,
            GeneratorArg::Highdim => Generator::Highdim,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Generator name
    #[arg(value_enum)]
    generator: GeneratorArg,
    /// Output CSV
    #[arg(long = "out")]
    output: PathBuf,
    /// Total rows
    #[arg(long, default_value_t = 1100)]
    m: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Resample(args) => cmd_resample(args),
        Command::Noise(args) => cmd_noise(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 1,
        _ => 2,
    }
}

#[derive(Serialize)]
struct ResampleSummary<'a> {
    command: &'static str,
    input: String,
    output: String,
    pipeline: String,
    seed: u64,
    rows_in: usize,
    rows_out: usize,
    synthetic_rows: usize,
    class_counts_in: Vec<usize>,
    class_counts_out: Vec<usize>,
    stages: &'a [StageReport],
    oversample: Option<&'a OversampleReport>,
    runtime_ms: u128,
}

fn cmd_resample(args: ResampleArgs) -> Result<(), Error> {
    let started = Instant::now();
    let pipeline = Pipeline::parse(&args.pipeline)?;
    let cfg = args.sampler.config(args.seed)?;
    let d = args.input.load()?;
    let (out, mask, report) = run_pipeline_report(&d, &pipeline, &cfg)?;
    write_csv(&out, &args.output, Some(&mask))?;
    if let Some(balls_path) = &args.balls_out {
        let balls = build_balls(&d, &cfg.ingb.split)?;
        let file = std::fs::File::create(balls_path)?;
        dump_balls_jsonl(&balls, std::io::BufWriter::new(file))?;
    }
    let summary = ResampleSummary {
        command: "resample",
        input: args.input.input.display().to_string(),
        output: args.output.display().to_string(),
        pipeline: pipeline.to_string(),
        seed: args.seed,
        rows_in: d.n_rows(),
        rows_out: out.n_rows(),
        synthetic_rows: mask.iter().filter(|&&m| m).count(),
        class_counts_in: d.class_counts(),
        class_counts_out: out.class_counts(),
        stages: &report.stages,
        oversample: report.oversample.as_ref(),
        runtime_ms: started.elapsed().as_millis(),
    };
    print_json(&summary)
}

#[derive(Serialize)]
struct FlipSidecar {
    rate: f64,
    seed: u64,
    flipped: Vec<usize>,
}

#[derive(Serialize)]
struct NoiseSummary {
    command: &'static str,
    input: String,
    output: String,
    flips_out: String,
    rate: f64,
    seed: u64,
    flipped_rows: usize,
    runtime_ms: u128,
}

fn cmd_noise(args: NoiseArgs) -> Result<(), Error> {
    let started = Instant::now();
    let spec = NoiseSpec::new(args.noise_rate, args.seed)?;
    let d = args.input.load()?;
    let (out, flipped) = inject_label_noise(&d, &spec)?;
    write_csv(&out, &args.output, None)?;
    let flips_path = args.flips_out.clone().unwrap_or_else(|| {
        let mut name = args.output.as_os_str().to_owned();
        name.push(".flips.json");
        PathBuf::from(name)
    });
    let sidecar = FlipSidecar {
        rate: spec.rate,
        seed: spec.seed,
        flipped: flipped.clone(),
    };
    std::fs::write(&flips_path, to_json_pretty(&sidecar)?)?;
    let summary = NoiseSummary {
        command: "noise",
        input: args.input.input.display().to_string(),
        output: args.output.display().to_string(),
        flips_out: flips_path.display().to_string(),
        rate: spec.rate,
        seed: spec.seed,
        flipped_rows: flipped.len(),
        runtime_ms: started.elapsed().as_millis(),
    };
    print_json(&summary)
}

fn parse_classifiers(text: &str) -> Result<Vec<ClassifierSpec>, Error> {
    let specs = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(ClassifierSpec::parse)
        .collect::<Result<Vec<_>, _>>()?;
    if specs.is_empty() {
        return Err(Error::InvalidConfig("no classifiers given".into()));
    }
    Ok(specs)
}

fn report_to_csv(report: &CvReport) -> String {
    let mut out = String::from("fold,classifier,metric,value\n");
    for fold in &report.folds {
        for result in &fold.results {
            for (name, value) in MetricsReport::METRIC_NAMES
                .iter()
                .zip(result.metrics.to_array())
            {
                out.push_str(&format!(
                    "{},{},{},{:.6}\n",
                    fold.fold, result.classifier, name, value
                ));
            }
        }
    }
    for entry in &report.summary {
        for (kind, metrics) in [("mean", &entry.mean), ("std", &entry.std)] {
            for (name, value) in MetricsReport::METRIC_NAMES.iter().zip(metrics.to_array()) {
                out.push_str(&format!(
                    "{},{},{},{:.6}\n",
                    kind, entry.classifier, name, value
                ));
            }
        }
    }
    out
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), Error> {
    let pipeline = Pipeline::parse(&args.pipeline)?;
    let classifiers = parse_classifiers(&args.classifiers)?;
    let cfg = args.sampler.config(args.seed)?;
    let d = args.input.load()?;
    let folds = stratified_folds(&d, args.folds, args.seed)?;
    let report = cross_validate(&d, &pipeline, &folds, &classifiers, &cfg, args.jobs)?;
    let rendered = match args.format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Csv => report_to_csv(&report),
    };
    match &args.output {
        Some(path) => std::fs::write(path, rendered).map_err(Error::from),
        None => print_text(&rendered),
    }
}

const BENCH_RATES: [f64; 4] = [0.0, 0.1, 0.2, 0.3];
const BENCH_PIPELINES: [&str; 5] = ["none", "smote", "ingb", "enn-ingb", "tkl-ingb"];

#[derive(Serialize)]
struct BenchSummary {
    command: &'static str,
    input: String,
    output: String,
    seed: u64,
    rows_written: usize,
    runtime_ms: u128,
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let started = Instant::now();
    let d = args.input.load()?;
    let classifiers = [
        ClassifierSpec::default_knn(),
        ClassifierSpec::default_logreg(),
    ];
    let base_cfg = args.sampler.config(args.seed)?;
    let mut csv = String::from("noise_rate,pipeline,classifier,metric,mean,std\n");
    let mut rows_written = 0usize;
    for (rate_idx, &rate) in BENCH_RATES.iter().enumerate() {
        let spec = NoiseSpec::new(rate, seeding::mix(args.seed, rate_idx as u64))?;
        let (noisy, _) = inject_label_noise(&d, &spec)?;
        let folds = stratified_folds(
            &noisy,
            args.folds,
            seeding::mix(args.seed, 100 + rate_idx as u64),
        )?;
        for (pl_idx, name) in BENCH_PIPELINES.iter().enumerate() {
            let pipeline = Pipeline::parse(name)?;
            let cfg =
                base_cfg.reseeded(seeding::mix(args.seed, (1000 + rate_idx * 10 + pl_idx) as u64));
            let report = cross_validate(&noisy, &pipeline, &folds, &classifiers, &cfg, args.jobs)?;
            for entry in &report.summary {
                for (metric_idx, metric) in MetricsReport::METRIC_NAMES.iter().enumerate() {
                    csv.push_str(&format!(
                        "{},{},{},{},{:.6},{:.6}\n",
                        rate,
                        name,
                        entry.classifier,
                        metric,
                        entry.mean.to_array()[metric_idx],
                        entry.std.to_array()[metric_idx],
                    ));
                    rows_written += 1;
                }
            }
        }
    }
    std::fs::write(&args.output, csv)?;
    let summary = BenchSummary {
        command: "bench",
        input: args.input.input.display().to_string(),
        output: args.output.display().to_string(),
        seed: args.seed,
        rows_written,
        runtime_ms: started.elapsed().as_millis(),
    };
    print_json(&summary)
}

#[derive(Serialize)]
struct GenSummary {
    command: &'static str,
    generator: String,
    output: String,
    m: usize,
    seed: u64,
    class_counts: Vec<usize>,
}

fn cmd_gen(args: GenArgs) -> Result<(), Error> {
    let generator: Generator = args.generator.into();
    let d = generate(generator, args.m, args.seed)?;
    write_csv(&d, &args.output, None)?;
    let summary = GenSummary {
        command: "gen",
        generator: generator.name().to_string(),
        output: args.output.display().to_string(),
        m: args.m,
        seed: args.seed,
        class_counts: d.class_counts(),
    };
    print_json(&summary)
}

fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(std::io::Error::other(e)))
}

fn print_text(text: &str) -> Result<(), Error> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(Error::from),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    print_text(&to_json_pretty(value)?)
}
