//! Counter-based RNG stream derivation.
//!
//! Every random quantity in a simulation comes from a ChaCha8 stream
//! keyed by `(master_seed, purpose, user)` and selected by the frame
//! index, so a frame's draws never depend on which worker ran it or in
//! which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Payload,
    Interleaver,
    Fading,
    Noise,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Payload => 0x7061_796c,
            Purpose::Interleaver => 0x696e_746c,
            Purpose::Fading => 0x6661_6465,
            Purpose::Noise => 0x6e6f_6973,
        }
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(master_seed: u64, purpose: Purpose, user: u64, frame: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(master_seed) ^ purpose.tag()) ^ user);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(frame);
    rng
}
