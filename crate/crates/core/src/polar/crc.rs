//! Bit-serial CRC over unpacked bit sequences.
//!
//! Generator polynomials are given in the usual normal (MSB-first) form
//! without the leading `x^len` term; the register starts at zero and no
//! reflection or final XOR is applied.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    len: usize,
    poly: u32,
}

impl Crc {
    pub const NONE: Crc = Crc { len: 0, poly: 0 };

    /// CRC-16/CCITT (x^16 + x^12 + x^5 + 1).
    pub const CCITT16: Crc = Crc {
        len: 16,
        poly: 0x1021,
    };

    pub fn new(len: usize, poly: u32) -> Result<Self> {
        if len > 32 {
            return Err(Error::invalid(format!("crc length {len} exceeds 32")));
        }
        if len == 0 {
            return Ok(Crc::NONE);
        }
        if len < 32 && poly >> len != 0 {
            return Err(Error::invalid(format!(
                "crc polynomial {poly:#x} does not fit in {len} bits"
            )));
        }
        if poly & 1 == 0 {
            return Err(Error::invalid(format!(
                "crc polynomial {poly:#x} lacks the constant term"
            )));
        }
        Ok(Crc { len, poly })
    }

    /// Default polynomial for a given CRC length.
    pub fn for_len(len: usize) -> Result<Self> {
        let poly = match len {
            0 => return Ok(Crc::NONE),
            6 => 0x21,
            8 => 0x07,
            11 => 0x621,
            16 => 0x1021,
            24 => 0x86_4CFB,
            _ => {
                return Err(Error::invalid(format!(
                    "no default crc polynomial for length {len}"
                )))
            }
        };
        Crc::new(len, poly)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    fn register(&self, bits: &[u8]) -> u32 {
        let top = 1u64 << (self.len - 1);
        let mask = (1u64 << self.len) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = ((reg & top) != 0) ^ (b & 1 != 0);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly as u64;
            }
        }
        reg as u32
    }

    /// Parity bits for `bits`, most significant first.
    pub fn compute(&self, bits: &[u8]) -> Vec<u8> {
        if self.len == 0 {
            return Vec::new();
        }
        let reg = self.register(bits);
        (0..self.len)
            .rev()
            .map(|i| ((reg >> i) & 1) as u8)
            .collect()
    }

    /// True when `parity` matches the CRC of `bits`.
    pub fn check(&self, bits: &[u8], parity: &[u8]) -> bool {
        parity.len() == self.len && self.compute(bits) == parity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes_to_bits(data: &[u8]) -> Vec<u8> {
        data.iter()
            .flat_map(|byte| (0..8).rev().map(move |i| (byte >> i) & 1))
            .collect()
    }

    #[test]
    fn ccitt16_xmodem_check_value() {
        // CRC-16/XMODEM shares poly 0x1021, init 0, no reflection.
        let bits = bytes_to_bits(b"123456789");
        let parity = Crc::CCITT16.compute(&bits);
        let value = parity.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        assert_eq!(value, 0x31C3);
    }

    #[test]
    fn crc8_smbus_check_value() {
        let bits = bytes_to_bits(b"123456789");
        let parity = Crc::for_len(8).unwrap().compute(&bits);
        let value = parity.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        assert_eq!(value, 0xF4);
    }

    #[test]
    fn appended_crc_zeroes_register() {
        let crc = Crc::CCITT16;
        let mut bits: Vec<u8> = (0..50).map(|i| ((i * 7) % 3 == 0) as u8).collect();
        let parity = crc.compute(&bits);
        assert!(crc.check(&bits, &parity));
        bits.extend(parity);
        assert!(crc.compute(&bits).iter().all(|&b| b == 0));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(Crc::new(8, 0x100).is_err());
        assert!(Crc::new(8, 0x06).is_err());
        assert!(Crc::for_len(13).is_err());
    }
}
