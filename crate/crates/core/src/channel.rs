//! Fading, noise and SNR calibration for the uplink superposition
//! `r = Σ_k diag(h_k) x_k + w`.
//!
//! One channel use is one SCMA codeword interval. A user sees the same
//! coefficient on all of its resources within a use.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Coherence length used in block fading.
pub const DEFAULT_BLOCK_LEN: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    /// Independent Rayleigh draw per user per channel use.
    Fast,
    /// Rayleigh draw held for `len` consecutive uses; blocks start at use 0.
    Block { len: usize },
    /// `h = 1` everywhere.
    Unfaded,
}

impl FadingModel {
    pub fn block() -> Self {
        FadingModel::Block {
            len: DEFAULT_BLOCK_LEN,
        }
    }

    pub fn name(&self) -> String {
        match self {
            FadingModel::Fast => "fast".into(),
            FadingModel::Block { len } if *len == DEFAULT_BLOCK_LEN => "block".into(),
            FadingModel::Block { len } => format!("block{len}"),
            FadingModel::Unfaded => "awgn".into(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "fast" => Ok(FadingModel::Fast),
            "block" => Ok(FadingModel::block()),
            "awgn" | "none" => Ok(FadingModel::Unfaded),
            other => {
                let len = other
                    .strip_prefix("block")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::invalid(format!("unknown channel model `{other}`")))?;
                Ok(FadingModel::Block { len })
            }
        }
    }
}

/// Fading coefficients for one frame plus the noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n_users: usize,
    n_uses: usize,
    /// `coeffs[t * n_users + k]`
    coeffs: Vec<Complex64>,
    sigma2: f64,
}

impl ChannelRealization {
    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_uses(&self) -> usize {
        self.n_uses
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }

    /// `h_{n,k}` at use `t`; equal across the user's resources.
    #[inline]
    pub fn h(&self, _n: usize, k: usize, t: usize) -> Complex64 {
        self.coeffs[t * self.n_users + k]
    }

    /// Coefficients of all users at use `t`.
    pub fn at_use(&self, t: usize) -> &[Complex64] {
        &self.coeffs[t * self.n_users..(t + 1) * self.n_users]
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Draw unit-variance circularly-symmetric Gaussian coefficients.
pub fn draw_channel<R: Rng + ?Sized>(
    model: FadingModel,
    n_uses: usize,
    n_users: usize,
    sigma2: f64,
    rng: &mut R,
) -> ChannelRealization {
    let mut coeffs = Vec::with_capacity(n_uses * n_users);
    match model {
        FadingModel::Unfaded => coeffs.resize(n_uses * n_users, Complex64::new(1.0, 0.0)),
        FadingModel::Fast => {
            for _ in 0..n_uses * n_users {
                coeffs.push(complex_gaussian(rng, 1.0));
            }
        }
        FadingModel::Block { len } => {
            assert!(len > 0, "block length must be positive");
            let mut current = vec![Complex64::new(0.0, 0.0); n_users];
            for t in 0..n_uses {
                if t % len == 0 {
                    for h in current.iter_mut() {
                        *h = complex_gaussian(rng, 1.0);
                    }
                }
                coeffs.extend_from_slice(&current);
            }
        }
    }
    ChannelRealization {
        n_users,
        n_uses,
        coeffs,
        sigma2,
    }
}

/// Received vector for one use: `r_n = Σ_k h_{n,k} x_{n,k} + w_n`, with
/// `w_n ~ CN(0, σ²)`. Noise samples are always drawn so that RNG
/// consumption does not depend on σ².
pub fn apply_channel<R: Rng + ?Sized>(
    codewords: &[Vec<Complex64>],
    real: &ChannelRealization,
    t: usize,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut r = superpose(codewords, real, t);
    for rn in r.iter_mut() {
        *rn += complex_gaussian(rng, real.sigma2);
    }
    r
}

/// Noise-free part of the received vector.
pub fn superpose(codewords: &[Vec<Complex64>], real: &ChannelRealization, t: usize) -> Vec<Complex64> {
    let n_res = codewords.first().map_or(0, |x| x.len());
    let mut r = vec![Complex64::new(0.0, 0.0); n_res];
    for (k, x) in codewords.iter().enumerate() {
        assert_eq!(x.len(), n_res, "codeword lengths differ");
        for (n, (rn, xn)) in r.iter_mut().zip(x).enumerate() {
            *rn += real.h(n, k, t) * xn;
        }
    }
    r
}

/// Noise variance for an `E_mb/N0` in dB: `E_mb = E_s / (L_M R)`,
/// `σ² = N0 = E_mb / 10^(dB/10)`.
pub fn sigma2_from_snr(embn0_db: f64, rate: f64, bits_per_symbol: usize, e_s: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!("rate {rate} outside (0, 1]")));
    }
    if bits_per_symbol == 0 || !(e_s > 0.0) || !embn0_db.is_finite() {
        return Err(Error::invalid("non-positive energy or bits per symbol"));
    }
    let e_mb = e_s / (bits_per_symbol as f64 * rate);
    Ok(e_mb / 10f64.powf(embn0_db / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn snr_calibration_examples() {
        assert!((sigma2_from_snr(0.0, 0.5, 2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma2_from_snr(10.0, 0.5, 2, 1.0).unwrap() - 0.1).abs() < 1e-15);
        let a = sigma2_from_snr(3.0, 0.25, 2, 1.0).unwrap();
        let b = sigma2_from_snr(3.0, 0.5, 2, 1.0).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-15);
        assert!(sigma2_from_snr(3.0, 0.0, 2, 1.0).is_err());
        assert!(sigma2_from_snr(3.0, 0.5, 2, -1.0).is_err());
    }

    #[test]
    fn block_fading_holds_within_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let real = draw_channel(FadingModel::block(), 40, 6, 0.1, &mut rng);
        for k in 0..6 {
            for t in 1..18 {
                assert_eq!(real.h(0, k, t), real.h(0, k, 0));
            }
            assert_ne!(real.h(0, k, 17), real.h(0, k, 18));
            assert_eq!(real.h(0, k, 18), real.h(3, k, 35));
        }
    }

    #[test]
    fn block_of_one_equals_fast() {
        let a = draw_channel(FadingModel::Fast, 30, 6, 1.0, &mut ChaCha8Rng::seed_from_u64(8));
        let b = draw_channel(
            FadingModel::Block { len: 1 },
            30,
            6,
            1.0,
            &mut ChaCha8Rng::seed_from_u64(8),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn unit_average_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let real = draw_channel(FadingModel::Fast, 1_000_000, 1, 0.0, &mut rng);
        let p: f64 = (0..real.n_uses()).map(|t| real.h(0, 0, t).norm_sqr()).sum::<f64>()
            / real.n_uses() as f64;
        assert!((p - 1.0).abs() < 0.01, "E|h|^2 = {p}");
    }

    #[test]
    fn noise_variance_matches_sigma2() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let sigma2 = 0.37;
        let real = draw_channel(FadingModel::Unfaded, 1, 1, sigma2, &mut rng);
        let zero = vec![vec![Complex64::new(0.0, 0.0); 4]];
        let mut acc = 0.0;
        let trials = 250_000;
        for _ in 0..trials {
            acc += apply_channel(&zero, &real, 0, &mut rng)
                .iter()
                .map(|w| w.norm_sqr())
                .sum::<f64>();
        }
        let v = acc / (4 * trials) as f64;
        assert!((v / sigma2 - 1.0).abs() < 0.01, "variance {v}");
    }

    #[test]
    fn noiseless_superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.5, 0.5), Complex64::new(0.0, -1.0)],
        ];
        let real = draw_channel(FadingModel::Unfaded, 1, 2, 0.0, &mut rng);
        let r = apply_channel(&x, &real, 0, &mut rng);
        assert_eq!(r, vec![Complex64::new(1.5, 0.5), Complex64::new(0.0, -1.0)]);

        let faded = draw_channel(FadingModel::Fast, 1, 1, 0.0, &mut rng);
        let r = apply_channel(&x[1..], &faded, 0, &mut rng);
        assert_eq!(r[1], faded.h(1, 0, 0) * x[1][1]);
    }

    #[test]
    fn superposition_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let real = draw_channel(FadingModel::Fast, 3, 2, 0.0, &mut rng);
        let a = vec![vec![Complex64::new(0.3, -0.1); 4], vec![Complex64::new(-1.0, 0.2); 4]];
        let b = vec![vec![Complex64::new(0.7, 0.4); 4], vec![Complex64::new(0.1, 0.9); 4]];
        let sum: Vec<Vec<Complex64>> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
            .collect();
        let ra = superpose(&a, &real, 2);
        let rb = superpose(&b, &real, 2);
        let rs = superpose(&sum, &real, 2);
        for n in 0..4 {
            assert!((rs[n] - ra[n] - rb[n]).norm() < 1e-14);
        }
    }

    #[test]
    fn model_names_round_trip() {
        for m in [FadingModel::Fast, FadingModel::block(), FadingModel::Block { len: 5 }, FadingModel::Unfaded] {
            assert_eq!(FadingModel::parse(&m.name()).unwrap(), m);
        }
    }
}
