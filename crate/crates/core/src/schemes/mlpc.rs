use super::{mlpc_level_llr, FrameDecode, LlrWork};
use crate::error::{Error, Result};
use crate::mpa::SymbolPosterior;
use crate::polar::{polar_encode, polar_transform, LlrFrame, PolarCodeSpec, PolarDecoder};
use crate::scma::{Labelling, ScmaCodebook};

/// Design-space position of bit `idx` of level `level`: positions are
/// laid out symbol-major, so position `p` belongs to level `p % l_m`.
pub fn mlpc_position(level: usize, idx: usize, l_m: usize) -> usize {
    idx * l_m + level
}

/// Partition design-space positions into per-level bit indices.
pub fn mlpc_split_positions(positions: &[usize], l_m: usize) -> Vec<Vec<usize>> {
    let mut levels = vec![Vec::new(); l_m];
    for &p in positions {
        levels[p % l_m].push(p / l_m);
    }
    for l in levels.iter_mut() {
        l.sort_unstable();
    }
    levels
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlpcFrame {
    pub level_codewords: Vec<Vec<u8>>,
    /// Codebook index per channel use.
    pub symbols: Vec<usize>,
}

fn check_levels(level_specs: &[PolarCodeSpec], cb: &ScmaCodebook) -> Result<usize> {
    if level_specs.len() != cb.bits_per_symbol() {
        return Err(Error::invalid(format!(
            "{} level codes for {} bits per symbol",
            level_specs.len(),
            cb.bits_per_symbol()
        )));
    }
    let n = level_specs[0].n_code();
    if level_specs.iter().any(|s| s.n_code() != n) {
        return Err(Error::invalid("level codes differ in length"));
    }
    Ok(n)
}

/// Payload bits are consumed level by level, lowest level first.
pub fn mlpc_encode_frame(
    payload: &[u8],
    level_specs: &[PolarCodeSpec],
    cb: &ScmaCodebook,
) -> Result<MlpcFrame> {
    let n_sym = check_levels(level_specs, cb)?;
    let total: usize = level_specs.iter().map(|s| s.payload_len()).sum();
    if payload.len() != total {
        return Err(Error::invalid(format!(
            "payload has {} bits, levels expect {total}",
            payload.len()
        )));
    }
    let mut rest = payload;
    let mut level_codewords = Vec::with_capacity(level_specs.len());
    for spec in level_specs {
        let (head, tail) = rest.split_at(spec.payload_len());
        level_codewords.push(polar_encode(head, spec)?);
        rest = tail;
    }
    let mut tuple = vec![0u8; level_specs.len()];
    let symbols = (0..n_sym)
        .map(|t| {
            for (b, cw) in tuple.iter_mut().zip(&level_codewords) {
                *b = cw[t];
            }
            cb.sp().index_of_bits(&tuple)
        })
        .collect();
    Ok(MlpcFrame {
        level_codewords,
        symbols,
    })
}

/// Level-`level` LLRs of `user`, conditioned on `lower[m][t]` for every
/// level `m < level`.
pub fn mlpc_level_llrs(
    posteriors: &[SymbolPosterior],
    user: usize,
    level: usize,
    lower: &[Vec<u8>],
    labelling: &Labelling,
    work: &mut LlrWork,
) -> Result<LlrFrame> {
    if lower.len() != level || lower.iter().any(|cw| cw.len() != posteriors.len()) {
        return Err(Error::invalid("lower-level codewords do not match level and frame length"));
    }
    let mut known = vec![0u8; level];
    let values = posteriors
        .iter()
        .enumerate()
        .map(|(t, post)| {
            for (k, cw) in known.iter_mut().zip(lower) {
                *k = cw[t];
            }
            mlpc_level_llr(post.user(user), labelling, level, &known, work)
        })
        .collect();
    LlrFrame::new(values)
}

/// Sequential multilevel decoding. Each level is conditioned on the
/// re-encoded decision of the levels below, never on genie values.
pub fn mlpc_decode_frame(
    posteriors: &[SymbolPosterior],
    user: usize,
    level_specs: &[PolarCodeSpec],
    cb: &ScmaCodebook,
    decoder: &mut PolarDecoder,
) -> Result<FrameDecode> {
    let n_sym = check_levels(level_specs, cb)?;
    if posteriors.len() != n_sym {
        return Err(Error::invalid(format!(
            "{} posteriors for level codes of length {n_sym}",
            posteriors.len()
        )));
    }
    let mut work = LlrWork::default();
    let mut payload = Vec::new();
    let mut crc_ok = true;
    let mut level_codewords: Vec<Vec<u8>> = Vec::with_capacity(level_specs.len());
    for (level, spec) in level_specs.iter().enumerate() {
        let llrs = mlpc_level_llrs(posteriors, user, level, &level_codewords, cb.sp(), &mut work)?;
        let decoded = decoder.decode(&llrs, spec);
        crc_ok &= decoded.crc_ok;
        payload.extend_from_slice(&decoded.payload);
        level_codewords.push(polar_transform(&decoded.u_hat)?);
    }
    Ok(FrameDecode {
        payload,
        crc_ok,
        work,
        level_codewords,
    })
}
