//! Design a length-64 code for a binary symmetric channel and compare
//! SC against CRC-aided SCL with growing list size.
//!
//!     cargo run --release --example sc_vs_scl_bsc

use polar_scma::design::{select_info_set, simulate_first_errors, ChainConfig, CodeDesign, DesignChannel};
use polar_scma::polar::{polar_encode, Crc, DecoderKind, LlrFrame, PolarDecoder};
use polar_scma::schemes::Scheme;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> polar_scma::Result<()> {
    let p = 0.04;
    let chain = ChainConfig {
        scheme: Scheme::Bipcm,
        n_code: 64,
        channel: DesignChannel::Bsc { crossover: p },
    };
    let hist = simulate_first_errors(&chain, 0.0, 20_000, 1)?;
    let CodeDesign::Bipcm(spec) = select_info_set(&hist, 32, Crc::for_len(6)?, Scheme::Bipcm, 1)? else {
        unreachable!("BIPCM design")
    };
    let mag = ((1.0 - p) / p).ln();
    for kind in [
        DecoderKind::Sc,
        DecoderKind::Scl { list_size: 2 },
        DecoderKind::Scl { list_size: 8 },
        DecoderKind::Scl { list_size: 32 },
    ] {
        let mut dec = PolarDecoder::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let frames = 20_000;
        let mut errors = 0;
        for _ in 0..frames {
            let payload: Vec<u8> = (0..spec.payload_len()).map(|_| rng.random_range(0..2)).collect();
            let cw = polar_encode(&payload, &spec)?;
            let llrs: Vec<f64> = cw
                .iter()
                .map(|&b| if (b == 1) ^ rng.random_bool(p) { -mag } else { mag })
                .collect();
            errors += (dec.decode(&LlrFrame::new(llrs)?, &spec).payload != payload) as u32;
        }
        println!("{}-{:<2} FER {:.4}", kind.name(), kind.list_size(), errors as f64 / frames as f64);
    }
    Ok(())
}
