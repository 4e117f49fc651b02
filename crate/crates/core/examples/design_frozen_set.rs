//! Construct a BIPCM polar code for the SCMA chain by counting
//! first-error events, then write it as a frozen-set file.
//!
//!     cargo run --release --example design_frozen_set [design_snr_db] [out.frz]

use polar_scma::channel::FadingModel;
use polar_scma::design::{simulate_first_errors, select_info_set, ChainConfig, DesignChannel};
use polar_scma::harness::frozen_set_files;
use polar_scma::mpa::DEFAULT_MPA_ITERS;
use polar_scma::polar::{write_frozen_set, Crc};
use polar_scma::schemes::Scheme;
use polar_scma::scma::ScmaCodebook;

fn main() -> polar_scma::Result<()> {
    let mut args = std::env::args().skip(1);
    let snr: f64 = args.next().map_or(8.0, |s| s.parse().expect("numeric design SNR"));
    let out = args.next().unwrap_or_else(|| "bipcm_n256.frz".into());

    let cb = ScmaCodebook::default_k6_n4_m4();
    let chain = ChainConfig {
        scheme: Scheme::Bipcm,
        n_code: 256,
        channel: DesignChannel::Scma {
            codebook: cb.clone(),
            fading: FadingModel::Fast,
            mpa_iters: DEFAULT_MPA_ITERS,
            rate: 0.5,
            noiseless: false,
        },
    };
    let hist = simulate_first_errors(&chain, snr, 1000, 42)?;
    println!("{} frames, {} codewords, {} first-error events", hist.frames, hist.trials, hist.total_errors());

    let rates = hist.rates();
    let mut order: Vec<usize> = (0..rates.len()).collect();
    order.sort_by(|&a, &b| rates[a].total_cmp(&rates[b]));
    println!("most reliable positions: {:?}", &order[..8]);
    println!("least reliable positions: {:?}", &order[order.len() - 8..]);

    let code = select_info_set(&hist, 128, Crc::for_len(8)?, Scheme::Bipcm, cb.bits_per_symbol())?;
    let file = &frozen_set_files(&code, snr)[0];
    write_frozen_set(&out, file)?;
    println!("wrote {out}: {} information positions", file.spec.info_set().len());
    Ok(())
}
