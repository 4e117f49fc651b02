//! Detect one SCMA channel use with the message passing algorithm and
//! show how the posteriors sharpen with SNR.
//!
//!     cargo run --example mpa_detection

use num_complex::Complex64;
use polar_scma::channel::{apply_channel, draw_channel, FadingModel};
use polar_scma::mpa::{MpaDetector, DEFAULT_MPA_ITERS};
use polar_scma::scma::{scma_modulate, ScmaCodebook, UserSymbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polar_scma::Result<()> {
    let cb = ScmaCodebook::default_k6_n4_m4();
    let sent = [3usize, 0, 2, 1, 1, 3];
    let codewords: Vec<Vec<Complex64>> = sent
        .iter()
        .enumerate()
        .map(|(user, &index)| scma_modulate(UserSymbol { user, index }, &cb))
        .collect();
    let mut detector = MpaDetector::new(&cb);

    for n0 in [1.0, 0.1, 0.01] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let real = draw_channel(FadingModel::Fast, 1, cb.n_users(), n0, &mut rng);
        let r = apply_channel(&codewords, &real, 0, &mut rng);
        // detector variance is per real dimension
        let post = detector.detect(&r, real.at_use(0), n0 / 2.0, DEFAULT_MPA_ITERS)?;
        println!("N0 = {n0}");
        for (k, &s) in sent.iter().enumerate() {
            let p: Vec<String> = post.user(k).iter().map(|x| format!("{x:.3}")).collect();
            println!("  user {k}: sent {s}, decided {}, posterior [{}]", post.argmax(k), p.join(", "));
        }
    }
    Ok(())
}
