use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ssk_isac::experiments::{run_ambiguity, run_ber_sweep, run_link_budget, run_sensing_sweep, write_ambiguity_csv, ambiguity_pulse, ExperimentConfig, WaveformChoice};
use ssk_isac::radar::BeatMethod;
use ssk_isac::Error;

#[derive(Parser)]
#[command(name = "ssk-isac", version, about = "SSK-ISAC link-level simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config; defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Trials per point (BER symbols or sensing scenes).
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true, value_enum)]
    waveform: Option<WaveformChoice>,
    #[arg(long, global = true, value_enum)]
    method: Option<BeatMethod>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// BER versus SNR for each configured antenna count.
    Ber,
    /// Range and velocity accuracy versus SNR.
    Sense,
    /// Ambiguity surface of a short pulse.
    Ambiguity,
    /// Link budget, slant distance and Doppler.
    Linkbudget,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn run(cli: &Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(w) = cli.waveform {
        cfg.waveform = w;
    }
    if let Some(m) = cli.method {
        cfg.beat_method = m;
    }
    if let Some(n) = cli.trials {
        match cli.command {
            Command::Sense => cfg.sense_trials = n,
            _ => cfg.trials = n,
        }
    }
    cfg.validate()?;
    fs::create_dir_all(&cli.out)?;

    match cli.command {
        Command::Ber => {
            for curve in run_ber_sweep(&cfg)? {
                curve.write_csv(&cfg, create(&cli.out, &curve.file_name())?)?;
                println!("wrote {}", cli.out.join(curve.file_name()).display());
            }
        }
        Command::Sense => {
            for curve in run_sensing_sweep(&cfg)? {
                curve.write_csv(&cfg, create(&cli.out, &curve.file_name())?)?;
                curve.write_scenes_csv(&cfg, create(&cli.out, &curve.scenes_file_name())?)?;
                println!("wrote {}", cli.out.join(curve.file_name()).display());
            }
        }
        Command::Ambiguity => {
            let surface = run_ambiguity(&cfg)?;
            write_ambiguity_csv(&surface, &cfg, create(&cli.out, "ambiguity.csv")?)?;
            let name = format!("waveform_{}.csv", cfg.waveform.name());
            ambiguity_pulse(&cfg, cfg.waveform)?.write_csv(create(&cli.out, &name)?)?;
            println!("wrote {}", cli.out.join("ambiguity.csv").display());
        }
        Command::Linkbudget => {
            let report = run_link_budget(&cfg)?;
            let json = serde_json::to_string_pretty(&report)?;
            fs::write(cli.out.join("linkbudget.json"), format!("{json}\n"))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
