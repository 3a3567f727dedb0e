//! `sonarforge` command-line front end.
//!
//! Every subcommand prints a [`RunReport`] as JSON on stdout; logs go to
//! stderr. Exit codes: 0 success, 1 module error, 2 usage error.

mod bench;
mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sonarforge_core::atr::{evaluate_on_manifest, train_on_manifest, AtrModel, HogConfig, TrainHyper};
use sonarforge_core::dataset::{
    generate_dataset_timed, parse_counts, split_manifest, DatasetManifest, Split, SweepConfig, MANIFEST_NAME,
};
use sonarforge_core::postproc::{
    apply_copper_colormap, stitch_sidescan, to_grayscale, Chain, NoiseSpec, PostStep, ReferenceSource,
};
use sonarforge_core::scene::{LightSide, SceneConfig};
use sonarforge_core::seed::mix2;
use sonarforge_core::{render, Error, ImageBuffer, Result, Scene};

pub use bench::bench;
pub use report::{RunReport, Stats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "SONARFORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sonarforge", version, about = "Synthetic side-scan sonar image simulator")]
pub struct Cli {
    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Log more to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a scene file to an image.
    Render(RenderArgs),
    /// Post-process an image: grayscale, histogram match, noise.
    Postproc(PostprocArgs),
    /// Generate or split a dataset.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Split a manifest into train/test (same as `dataset split`).
    Split(SplitArgs),
    /// Train and evaluate the ATR classifier.
    #[command(subcommand)]
    Atr(AtrCommand),
    /// Train the ATR classifier (same as `atr train`).
    Train(TrainArgs),
    /// Evaluate the ATR classifier (same as `atr eval`).
    Eval(EvalArgs),
    /// Stitch port and starboard swaths into one side-scan image.
    Stitch(StitchArgs),
    /// Time rendering and post-processing over a sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum DatasetCommand {
    /// Render and post-process every image of a sweep config.
    Generate(GenerateArgs),
    /// Mark per-shape training records in a manifest.
    Split(SplitArgs),
}

#[derive(Debug, Subcommand)]
pub enum AtrCommand {
    Train(TrainArgs),
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Port,
    Starboard,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Scene JSON file.
    #[arg(long)]
    pub scene: PathBuf,
    /// Output image (.png, .pgm, .ppm or .raw).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Vertical field of view, degrees.
    #[arg(long)]
    pub fov: Option<f64>,
    /// Camera height (world z), metres.
    #[arg(long)]
    pub camera_z: Option<f64>,
    /// Light grazing angle, degrees.
    #[arg(long)]
    pub grazing: Option<f64>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Write a single-channel image (implied for .pgm).
    #[arg(long)]
    pub gray: bool,
}

#[derive(Debug, Args)]
pub struct PostprocArgs {
    /// Input image.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output image (default: <input stem>_post.png next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON list of post-processing steps; replaced by any step flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Histogram-match to this image or 256-line count file.
    #[arg(long = "match", conflicts_with = "rayleigh")]
    pub match_ref: Option<PathBuf>,
    /// Histogram-match to a Rayleigh distribution with this sigma.
    #[arg(long)]
    pub rayleigh: Option<f64>,
    /// Noise step `kind[:value][:seed=N][:multiplier=uniform|gaussian]`; repeatable.
    #[arg(long)]
    pub noise: Vec<String>,
    /// Derive every noise seed from this base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Apply the copper colormap last.
    #[arg(long)]
    pub copper: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Sweep JSON file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub image_size: Option<usize>,
    /// Per-shape counts, e.g. `cylinder=650,cube=600,sphere=600`.
    #[arg(long)]
    pub counts: Option<String>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Manifest to split (default: ./manifest.jsonl).
    #[arg(long, default_value = MANIFEST_NAME)]
    pub manifest: PathBuf,
    /// Training images per shape, e.g. `cylinder=21,cube=27,sphere=32`.
    #[arg(long)]
    pub train: String,
    #[arg(long)]
    pub seed: u64,
    /// Output manifest (default: overwrite the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Model JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Train,
    Test,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Report JSON to write (it is also embedded in stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "test")]
    pub split: SplitArg,
}

#[derive(Debug, Args)]
pub struct StitchArgs {
    #[arg(long)]
    pub port: PathBuf,
    #[arg(long)]
    pub starboard: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Zero columns between the swaths.
    #[arg(long, default_value_t = 0)]
    pub deadzone: usize,
    #[arg(long)]
    pub copper: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sweep JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Images to time.
    #[arg(short, long, default_value_t = 20)]
    pub n: usize,
    #[arg(long)]
    pub image_size: Option<usize>,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    init_logging(cli.verbose);
    match execute(&cli) {
        Ok(report) => match serde_json::to_string_pretty(&report) {
            Ok(json) => {
                println!("{json}");
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .try_init();
}

pub fn execute(cli: &Cli) -> Result<RunReport> {
    let threads = match cli.threads {
        Some(0) => return Err(Error::InvalidParameter("--threads must be >= 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| dispatch(&cli.command, threads))
}

fn dispatch(command: &Command, threads: usize) -> Result<RunReport> {
    match command {
        Command::Render(a) => cmd_render(a, threads),
        Command::Postproc(a) => cmd_postproc(a, threads),
        Command::Dataset(DatasetCommand::Generate(a)) => cmd_generate(a, threads),
        Command::Dataset(DatasetCommand::Split(a)) | Command::Split(a) => cmd_split(a, threads),
        Command::Atr(AtrCommand::Train(a)) | Command::Train(a) => cmd_train(a, threads),
        Command::Atr(AtrCommand::Eval(a)) | Command::Eval(a) => cmd_eval(a, threads),
        Command::Stitch(a) => cmd_stitch(a, threads),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

fn cmd_render(a: &RenderArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("render", threads);
    let t = Instant::now();
    let mut config = SceneConfig::load(&a.scene)?;
    let cam = &mut config.camera;
    cam.width = a.width.unwrap_or(cam.width);
    cam.height = a.height.unwrap_or(cam.height);
    cam.fov_deg = a.fov.unwrap_or(cam.fov_deg);
    cam.position.z = a.camera_z.unwrap_or(cam.position.z);
    let light = &mut config.light;
    light.grazing_angle_deg = a.grazing.unwrap_or(light.grazing_angle_deg);
    light.intensity = a.intensity.unwrap_or(light.intensity);
    if let Some(side) = a.side {
        light.side = match side {
            SideArg::Port => LightSide::Port,
            SideArg::Starboard => LightSide::Starboard,
        };
    }
    let scene = Scene::from_config(&config)?;
    report.stage("scene", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let img = render(&scene)?;
    let secs = t.elapsed().as_secs_f64();
    report.stage("render", secs);
    report.render_seconds = Stats::of(&[secs]);

    let t = Instant::now();
    let img = if a.gray || is_pgm(&a.out) { to_grayscale(&img)? } else { img };
    img.save(&a.out)?;
    report.stage("write", t.elapsed().as_secs_f64());
    report.images_produced = 1;
    report.detail("output", &a.out);
    report.detail("size", [img.width(), img.height()]);
    Ok(report)
}

fn postproc_steps(a: &PostprocArgs) -> Result<Vec<PostStep>> {
    let mut steps = Vec::new();
    if let Some(path) = &a.match_ref {
        steps.push(PostStep::Match(ReferenceSource::File(path.clone())));
    }
    if let Some(sigma) = a.rayleigh {
        steps.push(PostStep::Match(ReferenceSource::Rayleigh { sigma }));
    }
    for text in &a.noise {
        let spec = NoiseSpec::parse(text)?;
        spec.validate()?;
        steps.push(PostStep::Noise(spec));
    }
    if !steps.is_empty() {
        return Ok(steps);
    }
    match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
        None => Ok(Vec::new()),
    }
}

fn cmd_postproc(a: &PostprocArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("postproc", threads);
    let steps = postproc_steps(a)?;
    let chain = Chain::load(&steps)?;
    let img = ImageBuffer::load(&a.input)?;
    let t = Instant::now();
    let mut out = chain.apply(&img, |k, spec| match a.seed {
        Some(base) => mix2(base, k as u64),
        None => spec.seed,
    })?;
    if a.copper {
        out = apply_copper_colormap(&out)?;
    }
    let secs = t.elapsed().as_secs_f64();
    report.stage("postproc", secs);
    report.postproc_seconds = Stats::of(&[secs]);
    let path = a.out.clone().unwrap_or_else(|| {
        let stem = a.input.file_stem().and_then(|s| s.to_str()).unwrap_or("image");
        a.input.with_file_name(format!("{stem}_post.png"))
    });
    out.save(&path)?;
    report.images_consumed = 1;
    report.images_produced = 1;
    report.detail("output", &path);
    report.detail("steps", &steps);
    Ok(report)
}

fn cmd_generate(a: &GenerateArgs, threads: usize) -> Result<RunReport> {
    let mut cfg = SweepConfig::load(&a.config)?;
    if let Some(dir) = &a.out_dir {
        cfg.output_dir = dir.clone();
    }
    cfg.master_seed = a.seed.unwrap_or(cfg.master_seed);
    cfg.image_size = a.image_size.unwrap_or(cfg.image_size);
    if let Some(counts) = &a.counts {
        cfg.counts = parse_counts(counts)?;
    }
    let mut report = RunReport::new("dataset generate", threads);
    let t = Instant::now();
    let (manifest, timings) = generate_dataset_timed(&cfg)?;
    report.stage("generate", t.elapsed().as_secs_f64());
    report.render_seconds = Stats::of(&timings.iter().map(|t| t.render_seconds).collect::<Vec<_>>());
    report.postproc_seconds = Stats::of(&timings.iter().map(|t| t.postproc_seconds).collect::<Vec<_>>());
    report.images_produced = manifest.records.len();
    report.detail("manifest", cfg.output_dir.join(MANIFEST_NAME));
    report.detail("per_shape", per_shape(&manifest, None));
    Ok(report)
}

fn per_shape(m: &DatasetManifest, split: Option<Split>) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for r in m.records.iter().filter(|r| split.is_none_or(|s| r.split == s)) {
        *out.entry(r.shape.label().to_string()).or_default() += 1;
    }
    out
}

fn cmd_split(a: &SplitArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("split", threads);
    let t = Instant::now();
    let manifest = DatasetManifest::read(&a.manifest)?;
    let counts = parse_counts(&a.train)?;
    let out = split_manifest(&manifest, &counts, a.seed)?;
    let path = a.out.as_ref().unwrap_or(&a.manifest);
    out.write(path)?;
    report.stage("split", t.elapsed().as_secs_f64());
    report.images_consumed = out.records.len();
    report.detail("manifest", path);
    report.detail("train", out.count(Split::Train));
    report.detail("test", out.count(Split::Test));
    report.detail("train_per_shape", per_shape(&out, Some(Split::Train)));
    Ok(report)
}

fn manifest_root(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn cmd_train(a: &TrainArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("train", threads);
    let manifest = DatasetManifest::read(&a.manifest)?;
    let defaults = TrainHyper::default();
    let hyper = TrainHyper {
        epochs: a.epochs.unwrap_or(defaults.epochs),
        learning_rate: a.learning_rate.unwrap_or(defaults.learning_rate),
        lambda: a.lambda.unwrap_or(defaults.lambda),
        seed: a.seed,
    };
    let t = Instant::now();
    let model = train_on_manifest(&manifest, manifest_root(&a.manifest), HogConfig::default(), &hyper)?;
    report.stage("train", t.elapsed().as_secs_f64());
    model.save(&a.out)?;
    report.images_consumed = manifest.count(Split::Train);
    report.detail("model", &a.out);
    report.detail("classes", &model.classifier.classes);
    Ok(report)
}

fn cmd_eval(a: &EvalArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("eval", threads);
    let manifest = DatasetManifest::read(&a.manifest)?;
    let model = AtrModel::load(&a.model)?;
    let split = match a.split {
        SplitArg::Train => Split::Train,
        SplitArg::Test => Split::Test,
    };
    let t = Instant::now();
    let result = evaluate_on_manifest(&model, &manifest, manifest_root(&a.manifest), split)?;
    report.stage("eval", t.elapsed().as_secs_f64());
    if let Some(path) = &a.report {
        result.save(path)?;
    }
    report.images_consumed = result.samples as usize;
    report.detail("atr", &result);
    Ok(report)
}

fn cmd_stitch(a: &StitchArgs, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("stitch", threads);
    let t = Instant::now();
    let gray = |p: &Path| -> Result<ImageBuffer> {
        let img = ImageBuffer::load(p)?;
        if img.channels() == 1 { Ok(img) } else { to_grayscale(&img) }
    };
    let mut out = stitch_sidescan(&gray(&a.port)?, &gray(&a.starboard)?, a.deadzone)?;
    if a.copper {
        out = apply_copper_colormap(&out)?;
    }
    out.save(&a.out)?;
    report.stage("stitch", t.elapsed().as_secs_f64());
    report.images_consumed = 2;
    report.images_produced = 1;
    report.detail("output", &a.out);
    Ok(report)
}

fn cmd_bench(a: &BenchArgs) -> Result<RunReport> {
    let mut cfg = SweepConfig::load(&a.config)?;
    cfg.image_size = a.image_size.unwrap_or(cfg.image_size);
    bench(&cfg, a.n)
}
