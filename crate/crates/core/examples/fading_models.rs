//! Compare fast fading, 18-use block fading and an unfaded channel for
//! one BIPCM SCL system at a fixed SNR.
//!
//!     cargo run --release --example fading_models

use polar_scma::channel::FadingModel;
use polar_scma::harness::{load_sim_codebook, prepare_code, simulate_point, SimConfig};

fn main() -> polar_scma::Result<()> {
    let mut cfg = SimConfig::parse(
        "scheme=bipcm\ndecoder=scl\nlist_size=8\ncrc_len=8\nn_code=256\nrate=1/2\n\
         design_snr_db=9\ndesign_frames=2000\nsnr=9\nmin_errors=50\nmax_frames=3000\n",
        "example",
    )?;
    let cb = load_sim_codebook(&cfg)?;
    // one code designed for fast fading, evaluated on every model
    let code = prepare_code(&cfg, &cb)?;
    for fading in [FadingModel::Fast, FadingModel::block(), FadingModel::Unfaded] {
        cfg.fading = fading;
        let p = simulate_point(&cfg, &cb, &code, 9.0)?;
        println!("{:6} FER {:.3e}  ({} errors in {} frames)", fading.name(), p.fer, p.frame_errors, p.frames_run);
    }
    Ok(())
}
