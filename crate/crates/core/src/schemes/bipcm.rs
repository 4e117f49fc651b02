use super::{bit_llrs_from_posterior, FrameDecode, Interleaver, LlrWork};
use crate::error::{Error, Result};
use crate::mpa::SymbolPosterior;
use crate::polar::{polar_encode, LlrFrame, PolarCodeSpec, PolarDecoder};
use crate::scma::{Labelling, ScmaCodebook};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipcmFrame {
    pub codeword: Vec<u8>,
    pub interleaved: Vec<u8>,
    /// Codebook index per channel use.
    pub symbols: Vec<usize>,
}

fn check_geometry(n_code: usize, bits: usize, il: &Interleaver) -> Result<()> {
    if n_code % bits != 0 {
        return Err(Error::invalid(format!(
            "code length {n_code} is not a multiple of {bits} bits per symbol"
        )));
    }
    if il.len() != n_code {
        return Err(Error::invalid("interleaver length does not match code length"));
    }
    Ok(())
}

pub fn bipcm_encode_frame(
    payload: &[u8],
    spec: &PolarCodeSpec,
    interleaver: &Interleaver,
    cb: &ScmaCodebook,
) -> Result<BipcmFrame> {
    let bits = cb.bits_per_symbol();
    check_geometry(spec.n_code(), bits, interleaver)?;
    let codeword = polar_encode(payload, spec)?;
    let interleaved = interleaver.interleave(&codeword);
    let symbols = interleaved
        .chunks(bits)
        .map(|tuple| cb.gray().index_of_bits(tuple))
        .collect();
    Ok(BipcmFrame {
        codeword,
        interleaved,
        symbols,
    })
}

/// Deinterleaved code-bit LLRs of `user` from per-use posteriors.
pub fn bipcm_llrs(
    posteriors: &[SymbolPosterior],
    user: usize,
    interleaver: &Interleaver,
    labelling: &Labelling,
    work: &mut LlrWork,
) -> Result<LlrFrame> {
    let bits = labelling.bits_per_symbol();
    check_geometry(posteriors.len() * bits, bits, interleaver)?;
    let mut interleaved = vec![0.0; interleaver.len()];
    for (post, out) in posteriors.iter().zip(interleaved.chunks_mut(bits)) {
        bit_llrs_from_posterior(post.user(user), labelling, out, work);
    }
    LlrFrame::new(interleaver.deinterleave(&interleaved))
}

pub fn bipcm_decode_frame(
    posteriors: &[SymbolPosterior],
    user: usize,
    spec: &PolarCodeSpec,
    interleaver: &Interleaver,
    cb: &ScmaCodebook,
    decoder: &mut PolarDecoder,
) -> Result<FrameDecode> {
    if posteriors.len() * cb.bits_per_symbol() != spec.n_code() {
        return Err(Error::invalid(format!(
            "{} posteriors cannot fill a length-{} code",
            posteriors.len(),
            spec.n_code()
        )));
    }
    let mut work = LlrWork::default();
    let llrs = bipcm_llrs(posteriors, user, interleaver, cb.gray(), &mut work)?;
    let decoded = decoder.decode(&llrs, spec);
    Ok(FrameDecode {
        payload: decoded.payload,
        crc_ok: decoded.crc_ok,
        work,
        level_codewords: Vec::new(),
    })
}
