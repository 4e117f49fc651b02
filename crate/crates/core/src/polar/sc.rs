use super::{hard_decision, LlrFrame, PolarCodeSpec};

/// Min-sum check-node combination.
#[inline]
pub(crate) fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) ^ (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node combination given the left partial-sum bit.
#[inline]
pub(crate) fn g_combine(a: f64, b: f64, bit: u8) -> f64 {
    if bit == 0 {
        b + a
    } else {
        b - a
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScOutput {
    pub payload: Vec<u8>,
    /// Decided pre-transform vector, frozen positions included.
    pub u_hat: Vec<u8>,
    pub codeword: Vec<u8>,
    pub crc_ok: bool,
}

/// Successive cancellation over `llrs`, calling `decide(index, llr)` at
/// each leaf in decoding order. The returned bit is what the decoder
/// carries forward, which lets callers inject frozen values or genie
/// feedback.
pub fn sc_decode_with<F>(llrs: &[f64], mut decide: F) -> Vec<u8>
where
    F: FnMut(usize, f64) -> u8,
{
    let n = llrs.len();
    assert!(n.is_power_of_two(), "SC input length must be a power of two");
    let mut codeword = vec![0u8; n];
    let mut scratch = vec![0.0f64; n];
    sc_node(llrs, 0, &mut codeword, &mut scratch, &mut decide);
    codeword
}

fn sc_node<F>(llr: &[f64], base: usize, x: &mut [u8], scratch: &mut [f64], decide: &mut F)
where
    F: FnMut(usize, f64) -> u8,
{
    let n = llr.len();
    if n == 1 {
        x[0] = decide(base, llr[0]) & 1;
        return;
    }
    let h = n / 2;
    let (child, rest) = scratch.split_at_mut(h);
    let (left, right) = x.split_at_mut(h);

    for i in 0..h {
        child[i] = f_minsum(llr[i], llr[i + h]);
    }
    sc_node(child, base, left, rest, decide);

    for i in 0..h {
        child[i] = g_combine(llr[i], llr[i + h], left[i]);
    }
    sc_node(child, base + h, right, rest, decide);

    for i in 0..h {
        left[i] ^= right[i];
    }
}

/// Plain SC decoding: frozen bits are forced to 0, information bits follow
/// the sign of their LLR. The CRC is stripped, and `crc_ok` only reports
/// whether it happened to check.
pub fn sc_decode(llrs: &LlrFrame, spec: &PolarCodeSpec) -> ScOutput {
    assert_eq!(
        llrs.len(),
        spec.n_code(),
        "LLR frame length does not match code length"
    );
    let mut u_hat = vec![0u8; spec.n_code()];
    let mask = spec.info_mask();
    let codeword = sc_decode_with(llrs.values(), |i, l| {
        let b = if mask[i] { hard_decision(l) } else { 0 };
        u_hat[i] = b;
        b
    });
    let (payload, crc_ok) = spec.split_payload(&u_hat);
    ScOutput {
        payload,
        u_hat,
        codeword,
        crc_ok,
    }
}
