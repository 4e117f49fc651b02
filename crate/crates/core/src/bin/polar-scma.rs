use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polar_scma::harness::{
    design_code, emit_results, frozen_set_paths, load_sim_codebook, monotonicity_flags, prepare_code,
    simulate_point, write_code, SimConfig,
};
use polar_scma::validate::{code_summary, run_checks};
use polar_scma::{Error, Result};

#[derive(Parser)]
#[command(name = "polar-scma", about = "Polar-coded SCMA link-level simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct frozen sets by Monte-Carlo design and write them.
    Design(ConfigArgs),
    /// Run an FER sweep and write CSV.
    Simulate(ConfigArgs),
    /// Run the built-in oracle checks.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Config file plus overrides; each flag mirrors the config key.
#[derive(Args)]
struct ConfigArgs {
    /// key=value configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    decoder: Option<String>,
    #[arg(long)]
    list_size: Option<String>,
    #[arg(long)]
    crc_len: Option<String>,
    #[arg(long)]
    n_code: Option<String>,
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    codebook: Option<String>,
    /// Comma-separated frozen-set files (one per MLPC level).
    #[arg(long)]
    frozen_set: Option<String>,
    #[arg(long)]
    design_snr_db: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    mpa_iters: Option<String>,
    /// Comma list or start:step:stop.
    #[arg(long)]
    snr: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    min_errors: Option<String>,
    #[arg(long)]
    max_frames: Option<String>,
    /// CSV path for `simulate`, file stem for `design`.
    #[arg(long)]
    out: Option<String>,
    /// Any other key, as key=value; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(path) => SimConfig::load(path)?,
            None => SimConfig::default(),
        };
        let flags = [
            ("scheme", &self.scheme),
            ("decoder", &self.decoder),
            ("list_size", &self.list_size),
            ("crc_len", &self.crc_len),
            ("n_code", &self.n_code),
            ("rate", &self.rate),
            ("codebook", &self.codebook),
            ("frozen_set", &self.frozen_set),
            ("design_snr_db", &self.design_snr_db),
            ("channel", &self.channel),
            ("mpa_iters", &self.mpa_iters),
            ("snr", &self.snr),
            ("seed", &self.seed),
            ("min_errors", &self.min_errors),
            ("max_frames", &self.max_frames),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn design(args: &ConfigArgs) -> Result<()> {
    let mut cfg = args.load()?;
    let snr = cfg
        .design_snr_db
        .ok_or_else(|| Error::Config("design needs design_snr_db".into()))?;
    if cfg.snr_db.is_empty() {
        cfg.snr_db = vec![snr];
    }
    cfg.frozen_sets.clear();
    cfg.validate()?;
    let cb = load_sim_codebook(&cfg)?;
    let (code, hist) = design_code(&cfg, &cb)?;
    let stem = match &cfg.out {
        Some(p) => p.display().to_string(),
        None => format!("{}_n{}_{}db", cfg.scheme.name(), cfg.n_code, snr),
    };
    let paths = frozen_set_paths(&stem, cfg.scheme, cb.bits_per_symbol());
    write_code(&code, snr, &paths)?;
    println!(
        "design at {snr} dB: {} frames, {} first-error events; codes {}",
        hist.frames,
        hist.total_errors(),
        code_summary(&code)
    );
    for p in &paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn simulate(args: &ConfigArgs) -> Result<()> {
    let cfg = args.load()?;
    cfg.validate()?;
    let cb = load_sim_codebook(&cfg)?;
    let code = prepare_code(&cfg, &cb)?;
    eprintln!("codes {}", code_summary(&code));
    println!("snr_db,frames,errors,fer,wall_time_s");
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr in &cfg.snr_db {
        let p = simulate_point(&cfg, &cb, &code, snr)?;
        println!("{},{},{},{:.6e},{:.2}", p.snr_db, p.frames_run, p.frame_errors, p.fer, p.wall_time_s);
        points.push(p);
    }
    for f in monotonicity_flags(&points) {
        eprintln!(
            "warning: FER rises from {} dB to {} dB ({:.1} sd{})",
            f.from_snr_db,
            f.to_snr_db,
            f.z,
            if f.significant() { ", significant" } else { "" }
        );
    }
    if let Some(path) = &cfg.out {
        emit_results(&points, &cfg, path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Design(args) => design(args),
        Command::Simulate(args) => simulate(args),
        Command::Validate { seed } => {
            let checks = run_checks(*seed);
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok {
                Ok(())
            } else {
                eprintln!("validation failed");
                return ExitCode::FAILURE;
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
