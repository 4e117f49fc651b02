use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{InterleaverMode, SimConfig};
use crate::channel::sigma2_from_snr;
use crate::design::{
    design_histogram, select_info_set, ChainConfig, CodeDesign, DesignChannel, FirstErrorHistogram,
};
use crate::error::{Error, Result};
use crate::link::{transmit_and_detect, LinkParams};
use crate::polar::{read_frozen_set, write_frozen_set, FrozenSetFile, PolarDecoder};
use crate::rng::{stream, Purpose};
use crate::schemes::{
    bipcm_decode_frame, bipcm_encode_frame, mlpc_decode_frame, mlpc_encode_frame, Interleaver, LlrWork,
    Scheme,
};
use crate::scma::{load_codebook, ScmaCodebook};

/// Frame index used to key the interleaver in [`InterleaverMode::Fixed`].
const FIXED_INTERLEAVER_FRAME: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct FerPoint {
    pub snr_db: f64,
    pub frames_run: u64,
    pub frame_errors: u64,
    pub fer: f64,
    /// Payload errors per user.
    pub user_errors: Vec<u64>,
    pub wall_time_s: f64,
}

impl FerPoint {
    pub fn user_fer(&self) -> Vec<f64> {
        self.user_errors
            .iter()
            .map(|&e| e as f64 / self.frames_run.max(1) as f64)
            .collect()
    }
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOutcome {
    pub user_errors: Vec<bool>,
    pub work: LlrWork,
}

impl FrameOutcome {
    pub fn is_error(&self) -> bool {
        self.user_errors.iter().any(|&e| e)
    }
}

pub fn load_sim_codebook(cfg: &SimConfig) -> Result<ScmaCodebook> {
    match &cfg.codebook {
        None => Ok(ScmaCodebook::default_k6_n4_m4()),
        Some(path) => load_codebook(path).map_err(|e| match e {
            Error::Io { path, source } => {
                Error::config(format!("cannot read codebook {}: {source}", path.display()))
            }
            other => other,
        }),
    }
}

fn chain_for(cfg: &SimConfig, cb: &ScmaCodebook) -> ChainConfig {
    ChainConfig {
        scheme: cfg.scheme,
        n_code: cfg.n_code,
        channel: DesignChannel::Scma {
            codebook: cb.clone(),
            fading: cfg.fading,
            mpa_iters: cfg.mpa_iters,
            rate: cfg.rate,
            noiseless: false,
        },
    }
}

/// Information positions needed, assuming every MLPC level carries a CRC.
fn info_count_upper(cfg: &SimConfig, bits: usize) -> usize {
    let crc_codes = if cfg.scheme == Scheme::Mlpc { bits } else { 1 };
    if cfg.crc_in_rate {
        cfg.rate_bits()
    } else {
        cfg.rate_bits() + crc_codes * cfg.crc_len
    }
}

/// Turn a histogram into a code following the configured CRC convention.
pub fn code_from_histogram(
    cfg: &SimConfig,
    hist: &FirstErrorHistogram,
    bits_per_symbol: usize,
) -> Result<CodeDesign> {
    let crc = cfg.crc()?;
    if !cfg.crc_in_rate {
        return select_info_set(hist, cfg.rate_bits(), crc, cfg.scheme, bits_per_symbol);
    }
    // CRC inside the rate: the total number of information positions is
    // fixed, so the payload grows when a level drops its CRC.
    let total = cfg.rate_bits();
    let max_codes = if cfg.scheme == Scheme::Mlpc { bits_per_symbol } else { 1 };
    for codes in (0..=max_codes).rev() {
        let Some(payload) = total.checked_sub(codes * crc.len()) else {
            continue;
        };
        let design = select_info_set(hist, payload, crc, cfg.scheme, bits_per_symbol)?;
        let with_crc = design.specs().iter().filter(|s| s.crc_len() > 0).count();
        if with_crc == codes || crc.is_empty() {
            return Ok(design);
        }
    }
    Err(Error::config("no consistent CRC placement for crc_in_rate"))
}

/// Run the Monte-Carlo design configured by `cfg.design_snr_db`.
pub fn design_code(cfg: &SimConfig, cb: &ScmaCodebook) -> Result<(CodeDesign, FirstErrorHistogram)> {
    let snr = cfg
        .design_snr_db
        .ok_or_else(|| Error::config("design_snr_db is not set"))?;
    let k_info = info_count_upper(cfg, cb.bits_per_symbol()).min(cfg.n_code);
    let hist = design_histogram(&chain_for(cfg, cb), snr, k_info, cfg.design_budget, cfg.design_seed)?;
    let code = code_from_histogram(cfg, &hist, cb.bits_per_symbol())?;
    Ok((code, hist))
}

/// Frozen-set files for `code`, tagged `bipcm` or `mlpc.<level>`.
pub fn frozen_set_files(code: &CodeDesign, design_snr_db: f64) -> Vec<FrozenSetFile> {
    match code {
        CodeDesign::Bipcm(spec) => vec![FrozenSetFile {
            spec: spec.clone(),
            design_snr_db,
            scheme: "bipcm".into(),
        }],
        CodeDesign::Mlpc(levels) => levels
            .iter()
            .enumerate()
            .map(|(j, spec)| FrozenSetFile {
                spec: spec.clone(),
                design_snr_db,
                scheme: format!("mlpc.{j}"),
            })
            .collect(),
    }
}

/// Default output names: `<stem>.frz` or `<stem>.level<j>.frz`.
pub fn frozen_set_paths(stem: &str, scheme: Scheme, bits_per_symbol: usize) -> Vec<PathBuf> {
    match scheme {
        Scheme::Bipcm => vec![PathBuf::from(format!("{stem}.frz"))],
        Scheme::Mlpc => (0..bits_per_symbol)
            .map(|j| PathBuf::from(format!("{stem}.level{j}.frz")))
            .collect(),
    }
}

pub fn write_code(code: &CodeDesign, design_snr_db: f64, paths: &[PathBuf]) -> Result<()> {
    let files = frozen_set_files(code, design_snr_db);
    if files.len() != paths.len() {
        return Err(Error::config(format!(
            "{} frozen-set paths for {} codes",
            paths.len(),
            files.len()
        )));
    }
    for (file, path) in files.iter().zip(paths) {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        write_frozen_set(path, file)?;
    }
    Ok(())
}

/// Load frozen-set files and check them against the configuration.
pub fn load_code(cfg: &SimConfig, bits_per_symbol: usize) -> Result<CodeDesign> {
    let mut specs = Vec::with_capacity(cfg.frozen_sets.len());
    for path in &cfg.frozen_sets {
        let file = read_frozen_set(path).map_err(|e| match e {
            Error::Io { path, source } => {
                Error::config(format!("cannot read frozen set {}: {source}", path.display()))
            }
            other => other,
        })?;
        specs.push(file.spec);
    }
    let code = match cfg.scheme {
        Scheme::Bipcm => {
            if specs.len() != 1 {
                return Err(Error::config("BIPCM needs exactly one frozen-set file"));
            }
            CodeDesign::Bipcm(specs.pop().expect("one spec"))
        }
        Scheme::Mlpc => {
            if specs.len() != bits_per_symbol {
                return Err(Error::config(format!(
                    "MLPC needs {bits_per_symbol} frozen-set files, got {}",
                    specs.len()
                )));
            }
            CodeDesign::Mlpc(specs)
        }
    };
    check_code(cfg, &code, bits_per_symbol)?;
    Ok(code)
}

fn check_code(cfg: &SimConfig, code: &CodeDesign, bits_per_symbol: usize) -> Result<()> {
    let level_len = match code {
        CodeDesign::Bipcm(_) => cfg.n_code,
        CodeDesign::Mlpc(_) => cfg.n_code / bits_per_symbol,
    };
    for spec in code.specs() {
        if spec.n_code() != level_len {
            return Err(Error::config(format!(
                "frozen set has length {}, configuration needs {level_len}",
                spec.n_code()
            )));
        }
        if spec.crc_len() != 0 && spec.crc_len() != cfg.crc_len {
            return Err(Error::config(format!(
                "frozen set carries CRC-{}, configuration asks for CRC-{}",
                spec.crc_len(),
                cfg.crc_len
            )));
        }
    }
    Ok(())
}

/// Frozen sets from files if given, otherwise run the design.
pub fn prepare_code(cfg: &SimConfig, cb: &ScmaCodebook) -> Result<CodeDesign> {
    if !cfg.frozen_sets.is_empty() {
        load_code(cfg, cb.bits_per_symbol())
    } else {
        Ok(design_code(cfg, cb)?.0)
    }
}

fn random_payload(seed: u64, user: usize, frame: u64, len: usize) -> Vec<u8> {
    let mut rng = stream(seed, Purpose::Payload, user as u64, frame);
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn interleaver_for(cfg: &SimConfig, user: usize, frame: u64, n: usize) -> Interleaver {
    let key = match cfg.interleaver {
        InterleaverMode::PerFrame => frame,
        InterleaverMode::Fixed => FIXED_INTERLEAVER_FRAME,
    };
    Interleaver::from_rng(n, &mut stream(cfg.seed, Purpose::Interleaver, user as u64, key))
}

/// Simulate one frame at noise level `n0`. A pure function of its
/// arguments; `decoder` only holds scratch buffers.
pub fn simulate_frame(
    cfg: &SimConfig,
    cb: &ScmaCodebook,
    code: &CodeDesign,
    n0: f64,
    frame: u64,
    decoder: &mut PolarDecoder,
) -> Result<FrameOutcome> {
    let n_users = cb.n_users();
    let payload_len = code.payload_len();
    let payloads: Vec<Vec<u8>> = (0..n_users)
        .map(|k| random_payload(cfg.seed, k, frame, payload_len))
        .collect();
    let params = LinkParams {
        codebook: cb,
        fading: cfg.fading,
        mpa_iters: cfg.mpa_iters,
        n0,
    };
    let mut work = LlrWork::default();
    let mut user_errors = Vec::with_capacity(n_users);
    match code {
        CodeDesign::Bipcm(spec) => {
            let ils: Vec<Interleaver> = (0..n_users)
                .map(|k| interleaver_for(cfg, k, frame, spec.n_code()))
                .collect();
            let symbols = payloads
                .iter()
                .zip(&ils)
                .map(|(p, il)| Ok(bipcm_encode_frame(p, spec, il, cb)?.symbols))
                .collect::<Result<Vec<_>>>()?;
            let post = transmit_and_detect(&symbols, &params, cfg.seed, frame)?;
            for k in 0..n_users {
                let d = bipcm_decode_frame(&post, k, spec, &ils[k], cb, decoder)?;
                work.add(d.work);
                user_errors.push(d.payload != payloads[k]);
            }
        }
        CodeDesign::Mlpc(levels) => {
            let symbols = payloads
                .iter()
                .map(|p| Ok(mlpc_encode_frame(p, levels, cb)?.symbols))
                .collect::<Result<Vec<_>>>()?;
            let post = transmit_and_detect(&symbols, &params, cfg.seed, frame)?;
            for (k, sent) in payloads.iter().enumerate() {
                let d = mlpc_decode_frame(&post, k, levels, cb, decoder)?;
                work.add(d.work);
                user_errors.push(d.payload != *sent);
            }
        }
    }
    Ok(FrameOutcome { user_errors, work })
}

fn check_code_for_codebook(code: &CodeDesign, cfg: &SimConfig, cb: &ScmaCodebook) -> Result<()> {
    let n_total: usize = code.specs().iter().map(|s| s.n_code()).sum();
    if n_total != cfg.n_code {
        return Err(Error::config("code lengths do not add up to n_code"));
    }
    if cfg.n_code % cb.bits_per_symbol() != 0 {
        return Err(Error::config("n_code is not a multiple of bits per symbol"));
    }
    Ok(())
}

/// One SNR point with the stop rule of `cfg`.
///
/// Frames are simulated in parallel batches, and the count is cut at the
/// frame where the `min_errors`-th error occurs, so the result equals a
/// sequential run frame by frame.
pub fn simulate_point(
    cfg: &SimConfig,
    cb: &ScmaCodebook,
    code: &CodeDesign,
    snr_db: f64,
) -> Result<FerPoint> {
    check_code_for_codebook(code, cfg, cb)?;
    let start = Instant::now();
    let n0 = sigma2_from_snr(snr_db, cfg.rate, cb.bits_per_symbol(), 1.0)?;
    let kind = cfg.decoder;
    let mut frames_run = 0u64;
    let mut frame_errors = 0u64;
    let mut user_errors = vec![0u64; cb.n_users()];
    let mut batch = (rayon::current_num_threads() as u64 * 4).max(8);
    while frames_run < cfg.max_frames && frame_errors < cfg.min_errors {
        let end = (frames_run + batch).min(cfg.max_frames);
        let outcomes: Vec<FrameOutcome> = (frames_run..end)
            .into_par_iter()
            .map_init(
                || PolarDecoder::new(kind),
                |dec, f| simulate_frame(cfg, cb, code, n0, f, dec),
            )
            .collect::<Result<_>>()?;
        for o in outcomes {
            frames_run += 1;
            for (acc, &e) in user_errors.iter_mut().zip(&o.user_errors) {
                *acc += e as u64;
            }
            if o.is_error() {
                frame_errors += 1;
                if frame_errors >= cfg.min_errors {
                    break;
                }
            }
        }
        batch = (batch * 2).min(1 << 14);
    }
    Ok(FerPoint {
        snr_db,
        frames_run,
        frame_errors,
        fer: frame_errors as f64 / frames_run as f64,
        user_errors,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Full SNR sweep: validate, load or design the code, simulate every point.
pub fn run_fer_experiment(cfg: &SimConfig) -> Result<Vec<FerPoint>> {
    cfg.validate()?;
    let cb = load_sim_codebook(cfg)?;
    let code = prepare_code(cfg, &cb)?;
    cfg.snr_db
        .iter()
        .map(|&snr| simulate_point(cfg, &cb, &code, snr))
        .collect()
}

/// A measured FER increase between neighbouring SNR points.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityFlag {
    pub from_snr_db: f64,
    pub to_snr_db: f64,
    /// Increase in units of the combined binomial standard deviation.
    pub z: f64,
}

impl MonotonicityFlag {
    /// Below three standard deviations the increase is consistent with noise.
    pub fn significant(&self) -> bool {
        self.z >= 3.0
    }
}

pub fn monotonicity_flags(points: &[FerPoint]) -> Vec<MonotonicityFlag> {
    points
        .windows(2)
        .filter(|w| w[1].fer > w[0].fer)
        .map(|w| {
            let var = |p: &FerPoint| p.fer * (1.0 - p.fer) / p.frames_run.max(1) as f64;
            let sd = (var(&w[0]) + var(&w[1])).sqrt();
            let z = if sd > 0.0 { (w[1].fer - w[0].fer) / sd } else { f64::INFINITY };
            MonotonicityFlag {
                from_snr_db: w[0].snr_db,
                to_snr_db: w[1].snr_db,
                z,
            }
        })
        .collect()
}
