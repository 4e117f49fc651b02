//! Encode a CRC-protected payload, send it over BPSK with Gaussian noise,
//! and decode with SC and CRC-aided SCL.
//!
//!     cargo run --release --example polar_roundtrip

use polar_scma::polar::{polar_encode, sc_decode, scl_decode, Crc, LlrFrame, PolarCodeSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> polar_scma::Result<()> {
    let n = 128;
    // the 72 highest indices: a crude but valid information set
    let spec = PolarCodeSpec::new(n, (n - 72..n).collect(), Crc::for_len(8)?)?;
    println!("code: N={n}, payload {} bits, CRC-{}", spec.payload_len(), spec.crc_len());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let payload: Vec<u8> = (0..spec.payload_len()).map(|_| rng.random_range(0..2)).collect();
    let codeword = polar_encode(&payload, &spec)?;

    let sigma = 0.8;
    let noise = Normal::new(0.0, sigma).expect("valid sigma");
    let llrs: Vec<f64> = codeword
        .iter()
        .map(|&b| {
            let y = if b == 0 { 1.0 } else { -1.0 } + noise.sample(&mut rng);
            2.0 * y / (sigma * sigma)
        })
        .collect();
    let llrs = LlrFrame::new(llrs)?;

    let sc = sc_decode(&llrs, &spec);
    println!("SC:     payload ok = {}, crc ok = {}", sc.payload == payload, sc.crc_ok);
    for list in [2, 8, 32] {
        let scl = scl_decode(&llrs, &spec, list);
        println!(
            "SCL-{list:<2}: payload ok = {}, crc ok = {}, path metric {:.2}",
            scl.payload == payload,
            scl.crc_ok,
            scl.path_metric
        );
    }
    Ok(())
}
