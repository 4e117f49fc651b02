//! Monte-Carlo polar code construction by first-error-event counting.
//!
//! Every position is treated as an information bit and random data is
//! sent through the chosen chain at the design SNR. A genie-aided SC
//! decoder records, at each position, whether its own decision differs
//! from the true bit and then continues with the true bit, so a single
//! codeword can contribute several first-error events. The positions
//! with the fewest events carry information.

use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{sigma2_from_snr, FadingModel};
use crate::error::{Error, Result};
use crate::link::{transmit_and_detect, LinkParams};
use crate::polar::{hard_decision, polar_transform, sc_decode_with, Crc, PolarCodeSpec};
use crate::rng::{stream, Purpose};
use crate::schemes::{
    bipcm_llrs, mlpc_level_llrs, mlpc_position, mlpc_split_positions, Interleaver, LlrWork, Scheme,
};
use crate::scma::ScmaCodebook;

/// Channel seen by the design procedure.
#[derive(Debug, Clone)]
pub enum DesignChannel {
    /// Full SCMA chain: modulation, fading, MPA, posterior-to-LLR.
    Scma {
        codebook: ScmaCodebook,
        fading: FadingModel,
        mpa_iters: usize,
        /// Code rate used to convert `E_mb/N0` to a noise variance.
        rate: f64,
        /// Forces `h = 1` and zero noise.
        noiseless: bool,
    },
    /// Binary symmetric channel with the given crossover probability,
    /// decoded from LLRs `±log((1-p)/p)`. The scheme is ignored.
    Bsc { crossover: f64 },
}

#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub scheme: Scheme,
    pub n_code: usize,
    pub channel: DesignChannel,
}

impl ChainConfig {
    fn validate(&self) -> Result<()> {
        if !self.n_code.is_power_of_two() {
            return Err(Error::config(format!("code length {} is not a power of two", self.n_code)));
        }
        match &self.channel {
            DesignChannel::Bsc { crossover } => {
                if !(*crossover > 0.0 && *crossover < 0.5) {
                    return Err(Error::config(format!("BSC crossover {crossover} outside (0, 0.5)")));
                }
            }
            DesignChannel::Scma {
                codebook,
                mpa_iters,
                rate,
                ..
            } => {
                let bits = codebook.bits_per_symbol();
                if self.n_code % bits != 0 {
                    return Err(Error::config("code length is not a multiple of bits per symbol"));
                }
                if self.scheme == Scheme::Mlpc && !(self.n_code / bits).is_power_of_two() {
                    return Err(Error::config("MLPC level length is not a power of two"));
                }
                if *mpa_iters == 0 {
                    return Err(Error::config("MPA needs at least one iteration"));
                }
                if !(*rate > 0.0 && *rate <= 1.0) {
                    return Err(Error::config(format!("rate {rate} outside (0, 1]")));
                }
            }
        }
        Ok(())
    }
}

/// Per-position first-error counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstErrorHistogram {
    pub counts: Vec<u64>,
    /// Decoded codewords (frames times users for the SCMA chain).
    pub trials: u64,
    pub frames: u64,
    pub design_snr_db: f64,
}

impl FirstErrorHistogram {
    pub fn new(n_code: usize, design_snr_db: f64) -> Self {
        FirstErrorHistogram {
            counts: vec![0; n_code],
            trials: 0,
            frames: 0,
            design_snr_db,
        }
    }

    pub fn merge(mut self, other: FirstErrorHistogram) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.trials += other.trials;
        self.frames += other.frames;
        self
    }

    pub fn total_errors(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Empirical first-error probability per position.
    pub fn rates(&self) -> Vec<f64> {
        let t = self.trials.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }
}

/// Genie SC: count disagreements against `u` and feed `u` back.
fn genie_sc(llrs: &[f64], u: &[u8], counts: &mut [u64], position: impl Fn(usize) -> usize) {
    sc_decode_with(llrs, |i, l| {
        if hard_decision(l) != u[i] {
            counts[position(i)] += 1;
        }
        u[i]
    });
}

fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn simulate_frame(
    chain: &ChainConfig,
    design_snr_db: f64,
    seed: u64,
    frame: u64,
) -> Result<FirstErrorHistogram> {
    let n = chain.n_code;
    let mut hist = FirstErrorHistogram::new(n, design_snr_db);
    hist.frames = 1;
    match &chain.channel {
        DesignChannel::Bsc { crossover } => {
            let mut rng = stream(seed, Purpose::Payload, 0, frame);
            let u = random_bits(&mut rng, n);
            let x = polar_transform(&u)?;
            let mag = ((1.0 - crossover) / crossover).ln();
            let mut noise = stream(seed, Purpose::Noise, 0, frame);
            let llrs: Vec<f64> = x
                .iter()
                .map(|&b| {
                    let flip = noise.random_bool(*crossover);
                    if (b == 1) ^ flip {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect();
            genie_sc(&llrs, &u, &mut hist.counts, |i| i);
            hist.trials = 1;
        }
        DesignChannel::Scma {
            codebook,
            fading,
            mpa_iters,
            rate,
            noiseless,
        } => {
            let bits = codebook.bits_per_symbol();
            let n_users = codebook.n_users();
            let n0 = if *noiseless {
                0.0
            } else {
                sigma2_from_snr(design_snr_db, *rate, bits, 1.0)?
            };
            let params = LinkParams {
                codebook,
                fading: if *noiseless { FadingModel::Unfaded } else { *fading },
                mpa_iters: *mpa_iters,
                n0,
            };
            let mut work = LlrWork::default();
            match chain.scheme {
                Scheme::Bipcm => {
                    let mut us = Vec::with_capacity(n_users);
                    let mut ils = Vec::with_capacity(n_users);
                    let mut symbols = Vec::with_capacity(n_users);
                    for k in 0..n_users {
                        let u = random_bits(&mut stream(seed, Purpose::Payload, k as u64, frame), n);
                        let il = Interleaver::from_rng(
                            n,
                            &mut stream(seed, Purpose::Interleaver, k as u64, frame),
                        );
                        let x = il.interleave(&polar_transform(&u)?);
                        symbols.push(
                            x.chunks(bits)
                                .map(|c| codebook.gray().index_of_bits(c))
                                .collect::<Vec<_>>(),
                        );
                        us.push(u);
                        ils.push(il);
                    }
                    let post = transmit_and_detect(&symbols, &params, seed, frame)?;
                    for k in 0..n_users {
                        let llrs = bipcm_llrs(&post, k, &ils[k], codebook.gray(), &mut work)?;
                        genie_sc(llrs.values(), &us[k], &mut hist.counts, |i| i);
                    }
                }
                Scheme::Mlpc => {
                    let n_sym = n / bits;
                    let mut levels_u = Vec::with_capacity(n_users);
                    let mut levels_x = Vec::with_capacity(n_users);
                    let mut symbols = Vec::with_capacity(n_users);
                    for k in 0..n_users {
                        let mut rng = stream(seed, Purpose::Payload, k as u64, frame);
                        let u: Vec<Vec<u8>> = (0..bits).map(|_| random_bits(&mut rng, n_sym)).collect();
                        let x: Vec<Vec<u8>> = u
                            .iter()
                            .map(|ul| polar_transform(ul))
                            .collect::<Result<_>>()?;
                        let mut tuple = vec![0u8; bits];
                        symbols.push(
                            (0..n_sym)
                                .map(|t| {
                                    for (b, xl) in tuple.iter_mut().zip(&x) {
                                        *b = xl[t];
                                    }
                                    codebook.sp().index_of_bits(&tuple)
                                })
                                .collect::<Vec<_>>(),
                        );
                        levels_u.push(u);
                        levels_x.push(x);
                    }
                    let post = transmit_and_detect(&symbols, &params, seed, frame)?;
                    for k in 0..n_users {
                        for level in 0..bits {
                            let llrs = mlpc_level_llrs(
                                &post,
                                k,
                                level,
                                &levels_x[k][..level],
                                codebook.sp(),
                                &mut work,
                            )?;
                            genie_sc(llrs.values(), &levels_u[k][level], &mut hist.counts, |i| {
                                mlpc_position(level, i, bits)
                            });
                        }
                    }
                }
            }
            hist.trials = n_users as u64;
        }
    }
    Ok(hist)
}

/// Histogram over the frames in `frames`; runs in parallel, and the
/// result depends only on `(chain, design_snr_db, seed, frames)`.
pub fn simulate_frame_range(
    chain: &ChainConfig,
    design_snr_db: f64,
    frames: Range<u64>,
    seed: u64,
) -> Result<FirstErrorHistogram> {
    chain.validate()?;
    frames
        .into_par_iter()
        .map(|f| simulate_frame(chain, design_snr_db, seed, f))
        .try_reduce(
            || FirstErrorHistogram::new(chain.n_code, design_snr_db),
            |a, b| Ok(a.merge(b)),
        )
}

pub fn simulate_first_errors(
    chain: &ChainConfig,
    design_snr_db: f64,
    n_frames: u64,
    seed: u64,
) -> Result<FirstErrorHistogram> {
    if n_frames == 0 {
        return Err(Error::config("design needs at least one frame"));
    }
    simulate_frame_range(chain, design_snr_db, 0..n_frames, seed)
}

/// Positions in reliability order: fewest errors first, ties to the higher index.
fn ranked_positions(counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)));
    order
}

/// The `k_info` positions with the fewest first-error events, ascending.
pub fn select_positions(hist: &FirstErrorHistogram, k_info: usize) -> Result<Vec<usize>> {
    if k_info > hist.counts.len() {
        return Err(Error::invalid(format!(
            "cannot select {k_info} positions out of {}",
            hist.counts.len()
        )));
    }
    let mut chosen = ranked_positions(&hist.counts)[..k_info].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Constructed code: one spec for BIPCM, one per level for MLPC.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeDesign {
    Bipcm(PolarCodeSpec),
    Mlpc(Vec<PolarCodeSpec>),
}

impl CodeDesign {
    pub fn payload_len(&self) -> usize {
        match self {
            CodeDesign::Bipcm(s) => s.payload_len(),
            CodeDesign::Mlpc(levels) => levels.iter().map(|s| s.payload_len()).sum(),
        }
    }

    pub fn specs(&self) -> Vec<&PolarCodeSpec> {
        match self {
            CodeDesign::Bipcm(s) => vec![s],
            CodeDesign::Mlpc(levels) => levels.iter().collect(),
        }
    }
}

/// Select an information set for `payload_len` payload bits plus CRC.
///
/// For BIPCM the CRC takes the last `crc.len()` selected positions. For
/// MLPC the best positions are chosen across all levels at once and then
/// split by level; every level that carries more than `crc.len()`
/// positions gets its own CRC, and levels too small for one carry none.
pub fn select_info_set(
    hist: &FirstErrorHistogram,
    payload_len: usize,
    crc: Crc,
    scheme: Scheme,
    bits_per_symbol: usize,
) -> Result<CodeDesign> {
    let n = hist.counts.len();
    match scheme {
        Scheme::Bipcm => {
            let chosen = select_positions(hist, payload_len + crc.len())?;
            Ok(CodeDesign::Bipcm(PolarCodeSpec::new(n, chosen, crc)?))
        }
        Scheme::Mlpc => {
            if n % bits_per_symbol != 0 {
                return Err(Error::invalid("code length is not a multiple of bits per symbol"));
            }
            let level_len = n / bits_per_symbol;
            let mut with_crc = vec![!crc.is_empty(); bits_per_symbol];
            loop {
                let n_crc = with_crc.iter().filter(|&&c| c).count();
                let chosen = select_positions(hist, payload_len + n_crc * crc.len())?;
                let split = mlpc_split_positions(&chosen, bits_per_symbol);
                let mut changed = false;
                for (flag, level) in with_crc.iter_mut().zip(&split) {
                    if *flag && level.len() <= crc.len() {
                        *flag = false;
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                let specs = split
                    .into_iter()
                    .zip(&with_crc)
                    .map(|(info, &has_crc)| {
                        PolarCodeSpec::new(level_len, info, if has_crc { crc } else { Crc::NONE })
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(CodeDesign::Mlpc(specs));
            }
        }
    }
}

/// Frame budget for adaptive design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignBudget {
    pub batch_frames: u64,
    pub max_frames: u64,
}

impl Default for DesignBudget {
    fn default() -> Self {
        DesignBudget {
            batch_frames: 500,
            max_frames: 20_000,
        }
    }
}

/// True when the last selected and first rejected counts are separated
/// by at least three combined (Poisson) standard deviations.
pub fn boundary_resolved(hist: &FirstErrorHistogram, k_info: usize) -> bool {
    if k_info == 0 || k_info >= hist.counts.len() {
        return true;
    }
    let order = ranked_positions(&hist.counts);
    let inside = hist.counts[order[k_info - 1]] as f64;
    let outside = hist.counts[order[k_info]] as f64;
    outside - inside >= 3.0 * (inside + outside).sqrt() && outside > 0.0
}

/// Run batches of design frames until the selection boundary for `k_info`
/// is resolved or `budget.max_frames` is reached.
pub fn design_histogram(
    chain: &ChainConfig,
    design_snr_db: f64,
    k_info: usize,
    budget: DesignBudget,
    seed: u64,
) -> Result<FirstErrorHistogram> {
    if budget.batch_frames == 0 || budget.max_frames == 0 {
        return Err(Error::config("design budget must be positive"));
    }
    let mut hist = FirstErrorHistogram::new(chain.n_code, design_snr_db);
    let mut next = 0;
    while next < budget.max_frames {
        let end = (next + budget.batch_frames).min(budget.max_frames);
        hist = hist.merge(simulate_frame_range(chain, design_snr_db, next..end, seed)?);
        next = end;
        if boundary_resolved(&hist, k_info) {
            break;
        }
    }
    Ok(hist)
}
