//! Short FER sweep of BIPCM and MLPC with SC decoding at N=256, R=1/2,
//! written to CSV files.
//!
//!     cargo run --release --example bipcm_vs_mlpc

use polar_scma::harness::{emit_results, load_sim_codebook, prepare_code, simulate_point, SimConfig};

fn main() -> polar_scma::Result<()> {
    for scheme in ["bipcm", "mlpc"] {
        let mut cfg = SimConfig::parse(
            "decoder=sc\ncrc_len=8\nn_code=256\nrate=1/2\nchannel=fast\n\
             design_snr_db=9\ndesign_frames=2000\nsnr=7:1:10\nmin_errors=50\nmax_frames=5000\n",
            "example",
        )?;
        cfg.set("scheme", scheme)?;
        let cb = load_sim_codebook(&cfg)?;
        let code = prepare_code(&cfg, &cb)?;
        let mut points = Vec::new();
        for &snr in &cfg.snr_db {
            let p = simulate_point(&cfg, &cb, &code, snr)?;
            println!("{scheme:5} {snr:4} dB  FER {:.3e}  ({} / {})", p.fer, p.frame_errors, p.frames_run);
            points.push(p);
        }
        let path = format!("{scheme}_sc_n256.csv");
        emit_results(&points, &cfg, &path)?;
        println!("wrote {path}");
    }
    Ok(())
}
