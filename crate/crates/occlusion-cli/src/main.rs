//! `occlusion` — command-line harness for edge-aware occlusion detection.
//!
//! Subcommands: `detect` (fast scanline detector), `oracle` (brute-force
//! reference), `eval` (precision/recall/F1 + confusion images), `fuse`
//! (pixel-wise median of disparity maps), `bench` (detector vs oracle wall
//! time), `synth` (synthetic scenes and ground truth).

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use occlusion_core::detector::{detect_array, DetectorConfig};
use occlusion_core::direction::DirectionSpec;
use occlusion_core::disparity::{disparity_stats, fuse_median, DisparityMap, NonFinitePolicy};
use occlusion_core::edge::{compute_edge_fields, select_candidates};
use occlusion_core::eval::{
    band_tolerant_confusion, confusion, csv_row, metrics, render_confusion, ConfusionStats,
    CSV_HEADER,
};
use occlusion_core::io::{
    read_mask_file, read_pfm_file, write_confusion_file, write_mask_file, write_pfm_file,
};
use occlusion_core::oracle::{oracle_array, OracleConfig};
use occlusion_core::synth::{synth_scene, SceneSpec};

#[derive(Parser)]
#[command(
    name = "occlusion",
    version,
    about = "Edge-aware occlusion detection on disparity maps for multi-camera arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect occlusions with the fast scanline detector.
    Detect(DetectArgs),
    /// Detect occlusions with the brute-force dense oracle (slow).
    Oracle(OracleArgs),
    /// Score predicted masks against ground-truth masks.
    Eval(EvalArgs),
    /// Fuse disparity maps by pixel-wise median.
    Fuse(FuseArgs),
    /// Time the detector (and optionally the oracle) on one input.
    Bench(BenchArgs),
    /// Generate synthetic disparity scenes and optional ground truth.
    Synth(SynthArgs),
}

/// Flags shared by every command that reads a disparity map.
#[derive(Args)]
struct InputArgs {
    /// Input disparity map (single-channel PFM).
    #[arg(long)]
    disparity: PathBuf,

    /// Replace non-finite values with the nearest finite pixel instead of
    /// rejecting the file.
    #[arg(long)]
    sanitize: bool,
}

impl InputArgs {
    fn read(&self) -> Result<DisparityMap> {
        let policy = if self.sanitize {
            NonFinitePolicy::Sanitize
        } else {
            NonFinitePolicy::Reject
        };
        read_pfm_file(&self.disparity, policy)
            .with_context(|| format!("reading {}", self.disparity.display()))
    }
}

/// Baseline angles, in degrees from +x toward +y (image coordinates).
#[derive(Args)]
struct AngleArgs {
    /// Comma-separated baseline angles in degrees; the default covers a
    /// 3x3 camera array around the center view.
    #[arg(long, default_value = "0,45,90,135,180,225,270,315")]
    angles: String,
}

impl AngleArgs {
    fn parse(&self) -> Result<(Vec<f64>, Vec<DirectionSpec>)> {
        let mut degrees = Vec::new();
        for token in self.angles.split(',') {
            let token = token.trim();
            let deg: f64 = token
                .parse()
                .with_context(|| format!("invalid angle {token:?}"))?;
            ensure!(deg.is_finite(), "angle {token:?} is not finite");
            degrees.push(deg);
        }
        ensure!(!degrees.is_empty(), "need at least one angle");
        let dirs = degrees
            .iter()
            .map(|&d| DirectionSpec::from_baseline_degrees(d))
            .collect();
        Ok((degrees, dirs))
    }
}

#[derive(Args)]
struct ThresholdArgs {
    /// Minimum gradient magnitude for an edge candidate (disparity units).
    #[arg(long, default_value_t = 1.0)]
    t_edge: f32,

    /// Warped-space distance under which samples collide (pixels).
    #[arg(long, default_value_t = 2.0)]
    t_dist: f32,

    /// Disparity margin a neighbor needs to occlude (disparity units).
    #[arg(long, default_value_t = 0.5)]
    t_disp: f32,

    /// Sorted-neighbor window size (even, >= 2).
    #[arg(long, default_value_t = 8)]
    neighbors: usize,

    /// Cap on the scan-line length (pixels).
    #[arg(long, default_value_t = 4096)]
    max_scan: usize,
}

impl ThresholdArgs {
    fn detector_config(&self) -> DetectorConfig {
        DetectorConfig {
            t_edge: self.t_edge,
            t_dist: self.t_dist,
            t_disp: self.t_disp,
            neighbors: self.neighbors,
            max_scan_length: self.max_scan,
        }
    }

    fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            t_disp: self.t_disp,
            ..OracleConfig::default()
        }
    }
}

#[derive(Args)]
struct ThreadArgs {
    /// Worker thread count (0 = one per core). Ignored in builds without
    /// the `rayon` feature.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl ThreadArgs {
    /// Sizes the global thread pool. Must run before any parallel work.
    fn apply(&self) -> Result<()> {
        #[cfg(feature = "rayon")]
        if self.threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global()
                .context("configuring the thread pool")?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    angles: AngleArgs,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    #[command(flatten)]
    threads: ThreadArgs,

    /// Directory for the per-angle mask files (mask_deg<angle>.pgm).
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    angles: AngleArgs,
    #[command(flatten)]
    threads: ThreadArgs,

    /// Disparity margin a pixel needs to occlude (disparity units).
    #[arg(long, default_value_t = 0.5)]
    t_disp: f32,

    /// Directory for the per-angle mask files (mask_deg<angle>.pgm).
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted mask(s), PGM; repeat the flag for multiple pairs.
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,

    /// Ground-truth mask(s), PGM; paired with --pred in order.
    #[arg(long, required = true)]
    gt: Vec<PathBuf>,

    /// Write the metric table to this CSV file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Also score with boundary disagreements within this many pixels of
    /// the ground-truth band forgiven (adds *_band rows).
    #[arg(long)]
    band_radius: Option<usize>,

    /// Write a TP/FP/FN/TN confusion image (PPM; single pair only).
    #[arg(long)]
    confusion_out: Option<PathBuf>,
}

#[derive(Args)]
struct FuseArgs {
    /// Input disparity maps (two or more PFM files, repeated flag).
    #[arg(long, required = true, num_args = 1..)]
    disparity: Vec<PathBuf>,

    /// Replace non-finite values with the nearest finite pixel.
    #[arg(long)]
    sanitize: bool,

    /// Output PFM path for the fused map.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    angles: AngleArgs,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    #[command(flatten)]
    threads: ThreadArgs,

    /// Timed passes per kernel.
    #[arg(long, default_value_t = 5)]
    repeat: usize,

    /// Also time the dense oracle and report the detector speedup.
    #[arg(long)]
    with_oracle: bool,

    /// Write the timing table to this CSV file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SceneKind {
    /// Vertical disparity step at the image center.
    Step,
    /// Foreground square on a constant background.
    Square,
    /// Seeded non-overlapping rectangles.
    RandomRects,
}

#[derive(Args)]
struct SynthArgs {
    /// Scene family to generate.
    #[arg(long, value_enum)]
    scene: SceneKind,

    #[arg(long, default_value_t = 128)]
    width: usize,

    #[arg(long, default_value_t = 128)]
    height: usize,

    /// Foreground disparity (step and square scenes).
    #[arg(long, default_value_t = 8.0)]
    fg: f32,

    /// Background disparity.
    #[arg(long, default_value_t = 0.0)]
    bg: f32,

    /// Rectangle count (random-rects).
    #[arg(long, default_value_t = 6)]
    n_rects: usize,

    /// Smallest rectangle disparity (random-rects).
    #[arg(long, default_value_t = 2)]
    jump_min: u32,

    /// Largest rectangle disparity (random-rects).
    #[arg(long, default_value_t = 24)]
    jump_max: u32,

    /// RNG seed (random-rects placement and values).
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output PFM path for the disparity map.
    #[arg(long)]
    out: PathBuf,

    /// Also write per-angle oracle ground-truth masks here.
    #[arg(long)]
    gt_dir: Option<PathBuf>,

    #[command(flatten)]
    angles: AngleArgs,
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        // One line, matching the documented failure contract.
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Fuse(args) => cmd_fuse(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

/// File-name fragment for an angle: trailing zeros trimmed so `180` stays
/// `180` and `22.5` stays `22.5`.
fn deg_label(deg: f64) -> String {
    if deg == deg.trunc() {
        format!("{}", deg as i64)
    } else {
        format!("{deg}")
    }
}

fn mask_path(dir: &Path, deg: f64) -> PathBuf {
    dir.join(format!("mask_deg{}.pgm", deg_label(deg)))
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    args.threads.apply()?;
    let d = args.input.read()?;
    let (degrees, dirs) = args.angles.parse()?;
    let cfg = args.thresholds.detector_config();

    let masks = detect_array(&d, &dirs, &cfg)?;

    // Reporting: recompute the cheap per-direction figures.
    let (d_min, d_max) = disparity_stats(&d)?;
    let scan_len = occlusion_core::detector::scan_length(d_min, d_max, cfg.max_scan_length);
    let edges = (scan_len > 0)
        .then(|| compute_edge_fields(&d))
        .transpose()?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    for ((deg, dir), mask) in degrees.iter().zip(&dirs).zip(&masks) {
        let candidates = edges
            .as_ref()
            .map_or(0, |e| select_candidates(e, dir, cfg.t_edge).len());
        let path = mask_path(&args.out_dir, *deg);
        write_mask_file(&path, mask).with_context(|| format!("writing {}", path.display()))?;
        println!(
            "angle {} deg: {} candidates, scan length {}, {} occluded px -> {}",
            deg_label(*deg),
            candidates,
            scan_len,
            mask.count_occluded(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    args.threads.apply()?;
    let d = args.input.read()?;
    let (degrees, dirs) = args.angles.parse()?;
    ensure!(args.t_disp >= 0.0, "t-disp must be >= 0");
    let cfg = OracleConfig {
        t_disp: args.t_disp,
        ..OracleConfig::default()
    };

    let masks = oracle_array(&d, &dirs, &cfg);

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    for (deg, mask) in degrees.iter().zip(&masks) {
        let path = mask_path(&args.out_dir, *deg);
        write_mask_file(&path, mask).with_context(|| format!("writing {}", path.display()))?;
        println!(
            "angle {} deg: {} occluded px -> {}",
            deg_label(*deg),
            mask.count_occluded(),
            path.display()
        );
    }
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    ensure!(
        args.pred.len() == args.gt.len(),
        "{} predictions vs {} ground-truth masks",
        args.pred.len(),
        args.gt.len()
    );
    if args.confusion_out.is_some() {
        ensure!(
            args.pred.len() == 1,
            "--confusion-out needs exactly one pred/gt pair"
        );
    }

    let mut rows = vec![CSV_HEADER.to_string()];
    let mut micro = ConfusionStats::default();
    let mut macro_sums = (0.0, 0.0, 0.0);
    let mut per_pair = Vec::new();
    for (pred_path, gt_path) in args.pred.iter().zip(&args.gt) {
        let pred = read_mask_file(pred_path)
            .with_context(|| format!("reading {}", pred_path.display()))?;
        let gt =
            read_mask_file(gt_path).with_context(|| format!("reading {}", gt_path.display()))?;
        let stats =
            confusion(&pred, &gt).with_context(|| format!("comparing {}", pred_path.display()))?;
        rows.push(csv_row(&stem(pred_path), &stats));
        if let Some(radius) = args.band_radius {
            let band = band_tolerant_confusion(&pred, &gt, radius)?;
            rows.push(csv_row(&format!("{}_band", stem(pred_path)), &band));
        }
        micro.accumulate(&stats);
        let (p, r, f1) = metrics(&stats);
        macro_sums = (macro_sums.0 + p, macro_sums.1 + r, macro_sums.2 + f1);
        per_pair.push((pred, gt));
    }

    if per_pair.len() > 1 {
        // Micro pools the counts; macro averages the per-pair metrics and
        // reports the pooled counts alongside for reference.
        rows.push(csv_row("micro", &micro));
        let n = per_pair.len() as f64;
        rows.push(format!(
            "macro,{},{},{},{},{},{},{}",
            micro.true_pos,
            micro.false_pos,
            micro.false_neg,
            micro.true_neg,
            macro_sums.0 / n,
            macro_sums.1 / n,
            macro_sums.2 / n
        ));
    }

    let table = rows.join("\n") + "\n";
    match &args.csv {
        Some(path) => {
            std::fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{table}"),
    }

    if let Some(out) = &args.confusion_out {
        let (pred, gt) = &per_pair[0];
        let img = render_confusion(pred, gt)?;
        write_confusion_file(out, &img).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn cmd_fuse(args: FuseArgs) -> Result<()> {
    let policy = if args.sanitize {
        NonFinitePolicy::Sanitize
    } else {
        NonFinitePolicy::Reject
    };
    let mut maps = Vec::with_capacity(args.disparity.len());
    for path in &args.disparity {
        maps.push(
            read_pfm_file(path, policy).with_context(|| format!("reading {}", path.display()))?,
        );
    }
    let fused = fuse_median(&maps)?;
    write_pfm_file(&args.out, &fused).with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "fused {} maps ({}x{}) -> {}",
        maps.len(),
        fused.width(),
        fused.height(),
        args.out.display()
    );
    Ok(())
}

/// Times `f` over `repeat` runs; returns (min, median) seconds.
fn time_runs<T>(repeat: usize, mut f: impl FnMut() -> T) -> (f64, f64) {
    let mut secs: Vec<f64> = (0..repeat)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    secs.sort_by(|a, b| a.partial_cmp(b).expect("finite durations"));
    let median = if repeat % 2 == 1 {
        secs[repeat / 2]
    } else {
        (secs[repeat / 2 - 1] + secs[repeat / 2]) / 2.0
    };
    (secs[0], median)
}

fn effective_threads() -> usize {
    #[cfg(feature = "rayon")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "rayon"))]
    {
        1
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    args.threads.apply()?;
    ensure!(args.repeat >= 1, "repeat must be >= 1");
    let d = args.input.read()?;
    let (_, dirs) = args.angles.parse()?;
    let cfg = args.thresholds.detector_config();
    let oracle_cfg = args.thresholds.oracle_config();

    let threads = effective_threads();
    let (det_min, det_median) = time_runs(args.repeat, || detect_array(&d, &dirs, &cfg));

    let mut rows = vec!["kernel,threads,repeats,min_s,median_s,speedup_vs_oracle".to_string()];
    if args.with_oracle {
        let (ora_min, ora_median) = time_runs(args.repeat, || oracle_array(&d, &dirs, &oracle_cfg));
        rows.push(format!(
            "detect_array,{threads},{},{det_min},{det_median},{}",
            args.repeat,
            ora_median / det_median
        ));
        rows.push(format!(
            "oracle_array,{threads},{},{ora_min},{ora_median},1",
            args.repeat
        ));
    } else {
        rows.push(format!(
            "detect_array,{threads},{},{det_min},{det_median},",
            args.repeat
        ));
    }

    let table = rows.join("\n") + "\n";
    match &args.csv {
        Some(path) => {
            std::fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = match args.scene {
        SceneKind::Step => SceneSpec::Step {
            width: args.width,
            height: args.height,
            bg: args.bg,
            fg: args.fg,
            col: args.width / 2,
        },
        SceneKind::Square => SceneSpec::Square {
            width: args.width,
            height: args.height,
            bg: args.bg,
            fg: args.fg,
            rect: (
                args.width / 4,
                args.height / 4,
                args.width / 2,
                args.height / 2,
            ),
        },
        SceneKind::RandomRects => {
            ensure!(
                args.jump_min >= 1 && args.jump_min <= args.jump_max,
                "need 1 <= jump-min <= jump-max"
            );
            SceneSpec::RandomRects {
                width: args.width,
                height: args.height,
                n_rects: args.n_rects,
                jump_min: args.jump_min,
                jump_max: args.jump_max,
                min_spacing: 2 * args.jump_max as usize,
                size_range: (8, (args.width.min(args.height) / 4).max(9)),
            }
        }
    };
    let d = synth_scene(&spec, args.seed)?;
    write_pfm_file(&args.out, &d).with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "scene {}x{} -> {}",
        d.width(),
        d.height(),
        args.out.display()
    );

    if let Some(gt_dir) = &args.gt_dir {
        let (degrees, dirs) = args.angles.parse()?;
        std::fs::create_dir_all(gt_dir)
            .with_context(|| format!("creating {}", gt_dir.display()))?;
        let masks = oracle_array(&d, &dirs, &OracleConfig::default());
        for (deg, mask) in degrees.iter().zip(&masks) {
            let path = mask_path(gt_dir, *deg);
            write_mask_file(&path, mask).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "gt angle {} deg: {} occluded px -> {}",
                deg_label(*deg),
                mask.count_occluded(),
                path.display()
            );
        }
    }
    Ok(())
}
