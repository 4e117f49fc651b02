//! One frame through the multiple-access channel: per-use SCMA
//! modulation of every user's symbols, fading and noise, and MPA
//! detection.
//!
//! The MPA likelihood is written with a `2σ²` exponent, which is the
//! exact complex Gaussian density when `σ²` is the variance per real
//! dimension. The channel draws `w ~ CN(0, N0)`, so the detector is run
//! with `σ² = N0 / 2`.

use num_complex::Complex64;

use crate::channel::{apply_channel, draw_channel, FadingModel};
use crate::error::{Error, Result};
use crate::mpa::{MpaDetector, SymbolPosterior};
use crate::rng::{stream, Purpose};
use crate::scma::{scma_modulate, ScmaCodebook, UserSymbol};

/// Smallest variance handed to the detector (noiseless runs).
const MIN_DETECTOR_SIGMA2: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LinkParams<'a> {
    pub codebook: &'a ScmaCodebook,
    pub fading: FadingModel,
    pub mpa_iters: usize,
    /// Channel noise variance `N0 = E|w_n|²`.
    pub n0: f64,
}

impl LinkParams<'_> {
    pub fn detector_sigma2(&self) -> f64 {
        (self.n0 / 2.0).max(MIN_DETECTOR_SIGMA2)
    }
}

/// Transmit `symbols[k][t]` for all users and return the posteriors of
/// every channel use. Fading and noise come from the `(master_seed,
/// frame)` streams only.
pub fn transmit_and_detect(
    symbols: &[Vec<usize>],
    params: &LinkParams<'_>,
    master_seed: u64,
    frame: u64,
) -> Result<Vec<SymbolPosterior>> {
    let cb = params.codebook;
    if symbols.len() != cb.n_users() {
        return Err(Error::invalid(format!(
            "{} user streams for a {}-user codebook",
            symbols.len(),
            cb.n_users()
        )));
    }
    let n_uses = symbols[0].len();
    if symbols.iter().any(|s| s.len() != n_uses) {
        return Err(Error::invalid("user symbol streams differ in length"));
    }
    let mut fading_rng = stream(master_seed, Purpose::Fading, 0, frame);
    let mut noise_rng = stream(master_seed, Purpose::Noise, 0, frame);
    let real = draw_channel(params.fading, n_uses, cb.n_users(), params.n0, &mut fading_rng);
    let mut detector = MpaDetector::new(cb);
    let sigma2 = params.detector_sigma2();

    let mut codewords: Vec<Vec<Complex64>> = vec![Vec::new(); cb.n_users()];
    let mut posteriors = Vec::with_capacity(n_uses);
    for t in 0..n_uses {
        for (k, x) in codewords.iter_mut().enumerate() {
            *x = scma_modulate(
                UserSymbol {
                    user: k,
                    index: symbols[k][t],
                },
                cb,
            );
        }
        let r = apply_channel(&codewords, &real, t, &mut noise_rng);
        posteriors.push(detector.detect(&r, real.at_use(t), sigma2, params.mpa_iters)?);
    }
    Ok(posteriors)
}
