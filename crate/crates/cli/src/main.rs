use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use memres::bifurcation::SectionMode;
use memres::dynsys::Channel;
use memres::tasks::{unit_grid, TaskId};
use memres_cli::commands::{bifurcate, cache_for, calibrate, BifurcateOptions, CalibrateOptions};
use memres_cli::config::{Config, CI_POINTS};
use memres_cli::experiment::{
    evaluate, load_model, run_experiment, save_model, train, write_outputs, write_records, ExperimentManifest,
};
use memres_cli::presets::{find_preset, PRESETS};
use memres_cli::reproduce::{reproduce, write_figure, Figure};
use memres_cli::CliError;

#[derive(Parser)]
#[command(name = "memres", version, about = "Reservoir computing on a forced memristive oscillator")]
struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the train/test split and CV folds.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Use 1000 data points instead of the configured count.
    #[arg(long, global = true)]
    ci_scale: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    R,
    A,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::R => Channel::Resistance,
            ChannelArg::A => Channel::Amplitude,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strobe,
    Extrema,
}

#[derive(Subcommand)]
enum Command {
    /// Choose the drive frequency and sign by matching regime landmarks.
    Calibrate {
        #[arg(long, default_value_t = CalibrateOptions::default().omega_min)]
        omega_min: f64,
        #[arg(long, default_value_t = CalibrateOptions::default().omega_max)]
        omega_max: f64,
        /// Log-spaced candidates per sign.
        #[arg(long, default_value_t = CalibrateOptions::default().grid_points)]
        grid_points: usize,
    },
    /// Bifurcation diagram and regime summary over R or A.
    Bifurcate {
        #[arg(long, value_enum, default_value = "r")]
        channel: ChannelArg,
        /// Range start (ohm or V); defaults to the full range of the channel.
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_enum, default_value = "strobe")]
        mode: ModeArg,
    },
    /// Build (or load) the feature matrix of a preset.
    Harvest {
        #[arg(long)]
        preset: String,
    },
    /// Cross-validate and fit the readout on the training split.
    Train {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        task: String,
    },
    /// Score a trained model on the test split.
    Eval {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        task: String,
        /// Model file; defaults to the one `train` writes. Without one, the
        /// whole pipeline runs.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Run all cells of a figure and write its table.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Repeat over consecutive seeds and report mean and std.
        #[arg(long)]
        sweep: bool,
    },
    /// List the named working ranges.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = err.downcast_ref::<CliError>().map(CliError::exit_code).unwrap_or(1);
            eprintln!("error: {err:#}");
            ExitCode::from(code as u8)
        }
    }
}

fn parse_task(s: &str) -> Result<TaskId, CliError> {
    s.parse().map_err(|e: memres::tasks::TaskError| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let points = if cli.ci_scale { CI_POINTS } else { config.points };
    let out = cli.out_dir.as_path();
    let manifest = |preset: &str, task: TaskId| -> anyhow::Result<ExperimentManifest> {
        let cal = config.resolve_calibration(out)?;
        Ok(ExperimentManifest::new(task, preset, &config, cal, points, cli.seed)?)
    };

    match cli.command {
        Command::Calibrate {
            omega_min,
            omega_max,
            grid_points,
        } => {
            let r = calibrate(out, &CalibrateOptions { omega_min, omega_max, grid_points })?;
            println!(
                "omega_prime={} forcing_sign={} matched={}/{}",
                r.chosen.omega_prime,
                r.chosen.forcing_sign,
                r.matched,
                r.landmarks.len()
            );
        }
        Command::Bifurcate {
            channel,
            start,
            stop,
            points: n,
            mode,
        } => {
            let channel: Channel = channel.into();
            let full = match channel {
                Channel::Resistance => find_preset("r-full"),
                Channel::Amplitude => find_preset("a-full"),
            }
            .context("full-range preset")?;
            let cal = config.resolve_calibration(out)?;
            let opts = BifurcateOptions {
                channel,
                start: start.unwrap_or(full.x_min),
                stop: stop.unwrap_or(full.x_max),
                points: n,
                mode: match mode {
                    ModeArg::Strobe => SectionMode::Stroboscopic,
                    ModeArg::Extrema => SectionMode::Extrema,
                },
            };
            let (scan, diagram, summary) = bifurcate(out, &config, cal, &opts)?;
            let (p, c) = scan.window_counts(1);
            println!("{} {} ({p} periodic / {c} chaotic windows)", diagram.display(), summary.display());
        }
        Command::Harvest { preset } => {
            let m = manifest(&preset, TaskId::Poly5)?;
            let cache = cache_for(out);
            let (fm, hit) = cache.load_or_build(&m.reservoir, &unit_grid(points))?;
            let key = memres::reservoir::cache_key(&m.reservoir, &fm.inputs);
            let (csv, _) = cache.paths(&key);
            println!("{} ({}x{}, {})", csv.display(), fm.len(), fm.width(), if hit { "cached" } else { "built" });
        }
        Command::Train { preset, task } => {
            let m = manifest(&preset, parse_task(&task)?)?;
            let (model, alpha, _) = train(&m, Some(&cache_for(out)))?;
            std::fs::create_dir_all(out)?;
            let path = out.join(format!("{}_model.txt", m.stem()));
            save_model(&path, &m, &model)?;
            println!("{} (alpha={alpha})", path.display());
        }
        Command::Eval { preset, task, model } => {
            let m = manifest(&preset, parse_task(&task)?)?;
            let cache = cache_for(out);
            let default_model = out.join(format!("{}_model.txt", m.stem()));
            let model_path = model.or_else(|| default_model.exists().then_some(default_model));
            match model_path {
                Some(path) => {
                    let model = load_model(&path)?;
                    let (record, preds, _) = evaluate(&m, &model, Some(&cache))?;
                    let stem = m.stem();
                    write_records(std::slice::from_ref(&record), std::fs::File::create(out.join(format!("{stem}_result.csv")))?)?;
                    preds.write_csv(&record.manifest_hash, m.seed, std::fs::File::create(out.join(format!("{stem}_predictions.csv")))?)?;
                    report(&record);
                }
                None => {
                    let o = run_experiment(&m, Some(&cache))?;
                    write_outputs(out, &m, &o)?;
                    report(&o.record);
                }
            }
        }
        Command::Reproduce { figure, sweep } => {
            let cal = config.resolve_calibration(out)?;
            let seeds: Vec<u64> = if sweep {
                (cli.seed..cli.seed + config.sweep_seeds as u64).collect()
            } else {
                vec![cli.seed]
            };
            let rows = reproduce(figure, &config, cal, points, &seeds, Some(&cache_for(out)))?;
            write_figure(out, figure, &rows, sweep)?;
            print_rows(out, figure, sweep);
        }
        Command::Presets => {
            for p in PRESETS {
                println!("{:<22} {}", p.name, p.description);
            }
        }
    }
    Ok(())
}

fn report(r: &memres_cli::experiment::ResultRecord) {
    println!(
        "{} {} seed={} alpha={} test_mse={} normalized={}",
        r.preset, r.task, r.seed, r.best_alpha, r.test_mse, r.normalized_test_mse
    );
}

fn print_rows(out: &Path, figure: Figure, sweep: bool) {
    let name = if sweep { format!("{}_sweep.csv", figure.name()) } else { format!("{}.csv", figure.name()) };
    if let Ok(text) = std::fs::read_to_string(out.join(name)) {
        print!("{text}");
    }
}
