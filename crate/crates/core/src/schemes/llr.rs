//! Symbol posterior to bit LLR conversion.
//!
//! Bit-interleaved decoding marginalizes every label bit independently.
//! Multilevel decoding conditions level `m` on the bits already decided
//! at levels `< m` and marginalizes only the levels above it.

use crate::polar::{saturate, LLR_SATURATION};
use crate::scma::Labelling;

/// Marginalization counter. One unit is one hypothesis-pair marginal
/// `(Pr{b=0}, Pr{b=1})` that required summing over at least one free
/// label bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LlrWork {
    pub summations: usize,
    /// Level LLRs whose conditioning prefix had zero probability.
    pub degenerate_prefixes: usize,
}

impl LlrWork {
    pub fn add(&mut self, other: LlrWork) {
        self.summations += other.summations;
        self.degenerate_prefixes += other.degenerate_prefixes;
    }
}

fn llr_from_marginals(p0: f64, p1: f64) -> f64 {
    match (p0 > 0.0, p1 > 0.0) {
        (true, true) => saturate((p0 / p1).ln()),
        (true, false) => LLR_SATURATION,
        (false, true) => -LLR_SATURATION,
        (false, false) => 0.0,
    }
}

/// `(Pr{c_m = 0}, Pr{c_m = 1})` by summing posterior entries whose label
/// has bit `level` equal to each value.
pub fn bit_marginals(post: &[f64], labelling: &Labelling, level: usize) -> (f64, f64) {
    let mut p = [0.0f64; 2];
    for label in 0..post.len() {
        p[labelling.label_bit(label, level) as usize] += post[labelling.index_of_label(label)];
    }
    (p[0], p[1])
}

/// All `L_M` bit LLRs `log Pr{c_m=0|r} / Pr{c_m=1|r}` of one symbol,
/// saturated at `±LLR_SATURATION`.
pub fn bit_llrs_from_posterior(post: &[f64], labelling: &Labelling, out: &mut [f64], work: &mut LlrWork) {
    let bits = labelling.bits_per_symbol();
    debug_assert_eq!(post.len(), labelling.m_points());
    debug_assert_eq!(out.len(), bits);
    for (m, o) in out.iter_mut().enumerate() {
        let (p0, p1) = bit_marginals(post, labelling, m);
        *o = llr_from_marginals(p0, p1);
        if bits > 1 {
            work.summations += 1;
        }
    }
}

/// Conditional probabilities of bit `level` given the lower-level bits
/// `known` (`known.len() == level`). Returns `None` when the prefix has
/// zero probability.
pub fn mlpc_level_probs(post: &[f64], labelling: &Labelling, level: usize, known: &[u8]) -> Option<(f64, f64)> {
    let bits = labelling.bits_per_symbol();
    assert_eq!(known.len(), level, "need exactly `level` known bits");
    assert!(level < bits);
    let free = bits - 1 - level;
    let prefix = Labelling::pack(known) << (bits - level);
    let mut p = [0.0f64; 2];
    for b in 0..2usize {
        let head = prefix | (b << free);
        for tail in 0..(1usize << free) {
            p[b] += post[labelling.index_of_label(head | tail)];
        }
    }
    let total = p[0] + p[1];
    if total > 0.0 {
        Some((p[0] / total, p[1] / total))
    } else {
        None
    }
}

/// Level-`level` LLR conditioned on the known lower-level bits; zero when
/// the known prefix has zero probability.
pub fn mlpc_level_llr(post: &[f64], labelling: &Labelling, level: usize, known: &[u8], work: &mut LlrWork) -> f64 {
    let free = labelling.bits_per_symbol() - 1 - level;
    if free > 0 {
        work.summations += 1;
    }
    match mlpc_level_probs(post, labelling, level, known) {
        Some((p0, p1)) => llr_from_marginals(p0, p1),
        None => {
            work.degenerate_prefixes += 1;
            0.0
        }
    }
}
