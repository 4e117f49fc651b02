//! Binary polar codes: the Arıkan transform, encoding for an arbitrary
//! information set, successive-cancellation (SC) decoding and CRC-aided
//! successive-cancellation list (SCL) decoding.
//!
//! Bit indices use natural order throughout: the transform is
//! `x = u · F^{⊗n}` with `F = [[1, 0], [1, 1]]` and no bit-reversal
//! permutation, and the information set is expressed in the same index
//! space. LLRs are `log P(0)/P(1)`, so a positive value favours bit 0.

mod crc;
mod decoder;
mod frozen_set;
mod sc;
mod scl;

pub use crc::Crc;
pub use decoder::{Decoded, DecoderKind, PolarDecoder};
pub use frozen_set::{read_frozen_set, write_frozen_set, FrozenSetFile};
pub use sc::{sc_decode, sc_decode_with, ScOutput};
pub use scl::{scl_decode, SclDecoder, SclOutput};

use crate::error::{Error, Result};

/// Magnitude at which decoder input LLRs are clipped.
pub const LLR_SATURATION: f64 = 40.0;

/// Clip an LLR to `±LLR_SATURATION`. NaN is passed through.
#[inline]
pub fn saturate(llr: f64) -> f64 {
    llr.clamp(-LLR_SATURATION, LLR_SATURATION)
}

/// Hard decision on an LLR; an exact zero decides 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// Code length, information set and CRC of one polar code.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCodeSpec {
    n_code: usize,
    info_set: Vec<usize>,
    is_info: Vec<bool>,
    crc: Crc,
}

impl PolarCodeSpec {
    /// The information set is sorted; the CRC occupies its last
    /// `crc.len()` positions.
    pub fn new(n_code: usize, mut info_set: Vec<usize>, crc: Crc) -> Result<Self> {
        if !n_code.is_power_of_two() {
            return Err(Error::invalid(format!(
                "code length {n_code} is not a power of two"
            )));
        }
        info_set.sort_unstable();
        if info_set.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate index in information set"));
        }
        if let Some(&last) = info_set.last() {
            if last >= n_code {
                return Err(Error::invalid(format!(
                    "information index {last} out of range for length {n_code}"
                )));
            }
        }
        if info_set.len() < crc.len() {
            return Err(Error::invalid(format!(
                "information set of size {} cannot hold a {}-bit crc",
                info_set.len(),
                crc.len()
            )));
        }
        let mut is_info = vec![false; n_code];
        for &i in &info_set {
            is_info[i] = true;
        }
        Ok(PolarCodeSpec {
            n_code,
            info_set,
            is_info,
            crc,
        })
    }

    /// Every position carries information and there is no CRC.
    pub fn all_info(n_code: usize) -> Result<Self> {
        PolarCodeSpec::new(n_code, (0..n_code).collect(), Crc::NONE)
    }

    pub fn n_code(&self) -> usize {
        self.n_code
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn is_info(&self, index: usize) -> bool {
        self.is_info[index]
    }

    pub fn info_mask(&self) -> &[bool] {
        &self.is_info
    }

    pub fn crc(&self) -> Crc {
        self.crc
    }

    pub fn crc_len(&self) -> usize {
        self.crc.len()
    }

    pub fn payload_len(&self) -> usize {
        self.info_set.len() - self.crc.len()
    }

    pub fn rate(&self) -> f64 {
        self.payload_len() as f64 / self.n_code as f64
    }

    /// Build the pre-transform vector `u`: payload then CRC on the
    /// information positions, zeros elsewhere.
    pub fn place_payload(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.payload_len() {
            return Err(Error::invalid(format!(
                "payload has {} bits, code expects {}",
                payload.len(),
                self.payload_len()
            )));
        }
        let parity = self.crc.compute(payload);
        let mut u = vec![0u8; self.n_code];
        for (&pos, &bit) in self
            .info_set
            .iter()
            .zip(payload.iter().chain(parity.iter()))
        {
            u[pos] = bit & 1;
        }
        Ok(u)
    }

    /// Information bits (payload followed by CRC) read off `u`.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }

    /// Payload bits and whether the CRC over them checks.
    pub fn split_payload(&self, u: &[u8]) -> (Vec<u8>, bool) {
        let info = self.extract_info(u);
        let (payload, parity) = info.split_at(self.payload_len());
        let ok = self.crc.check(payload, parity);
        (payload.to_vec(), ok)
    }
}

/// Decoder input: one LLR per code bit, clipped to `±LLR_SATURATION`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    values: Vec<f64>,
}

impl LlrFrame {
    /// Saturates every entry; NaN is rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        for v in values.iter_mut() {
            if v.is_nan() {
                return Err(Error::Numeric("NaN in LLR frame".into()));
            }
            *v = saturate(*v);
        }
        Ok(LlrFrame { values })
    }

    /// Noiseless channel LLRs: `+magnitude` for a 0, `-magnitude` for a 1.
    pub fn from_bits(bits: &[u8], magnitude: f64) -> Self {
        let values = bits
            .iter()
            .map(|&b| saturate(if b == 0 { magnitude } else { -magnitude }))
            .collect();
        LlrFrame { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// In-place `x ← x · F^{⊗n}` over GF(2) via the butterfly network.
pub fn polar_transform_in_place(bits: &mut [u8]) -> Result<()> {
    let n = bits.len();
    if !n.is_power_of_two() {
        return Err(Error::invalid(format!(
            "transform length {n} is not a power of two"
        )));
    }
    let mut half = 1;
    while half < n {
        for block in bits.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
    Ok(())
}

pub fn polar_transform(bits: &[u8]) -> Result<Vec<u8>> {
    let mut out: Vec<u8> = bits.iter().map(|b| b & 1).collect();
    polar_transform_in_place(&mut out)?;
    Ok(out)
}

/// Encode `payload` (CRC appended internally) into a length-`n_code` codeword.
pub fn polar_encode(payload: &[u8], spec: &PolarCodeSpec) -> Result<Vec<u8>> {
    let mut u = spec.place_payload(payload)?;
    polar_transform_in_place(&mut u)?;
    Ok(u)
}
