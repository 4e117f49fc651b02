//! Coded-modulation framing on top of the polar codes.
//!
//! * BIPCM: one polar code of length `n_code` per user, a random
//!   interleaver, then consecutive `L_M`-bit tuples Gray-labelled onto
//!   codebook indices. All bit LLRs come from independent marginals.
//! * MLPC: `L_M` polar codes of length `n_code / L_M` per user; symbol `t`
//!   carries bit `t` of every level under set-partitioning labelling.
//!   Levels are decoded in order, each conditioned on the re-encoded
//!   decisions of the levels below.
//!
//! Within a symbol, the first bit of the tuple is the most significant
//! label bit, `c_{k,1}`.

mod bipcm;
mod interleaver;
mod llr;
mod mlpc;

pub use bipcm::{bipcm_decode_frame, bipcm_encode_frame, bipcm_llrs, BipcmFrame};
pub use interleaver::Interleaver;
pub use llr::{bit_llrs_from_posterior, bit_marginals, mlpc_level_llr, mlpc_level_probs, LlrWork};
pub use mlpc::{
    mlpc_decode_frame, mlpc_encode_frame, mlpc_level_llrs, mlpc_position, mlpc_split_positions,
    MlpcFrame,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Bipcm,
    Mlpc,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Bipcm => "bipcm",
            Scheme::Mlpc => "mlpc",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "bipcm" => Ok(Scheme::Bipcm),
            "mlpc" => Ok(Scheme::Mlpc),
            other => Err(Error::invalid(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Result of decoding one user's frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDecode {
    pub payload: Vec<u8>,
    /// CRC status of every constituent code.
    pub crc_ok: bool,
    pub work: LlrWork,
    /// MLPC only: the codeword of each level used for conditioning.
    pub level_codewords: Vec<Vec<u8>>,
}
