//! CRC-aided successive cancellation list decoding.
//!
//! Paths share intermediate LLR and partial-sum arrays until one of them
//! writes, at which point the array is copied (reference counted per
//! layer). Layer `λ` holds arrays of length `2^(m-λ)`; layer 0 is the
//! channel. Decisions are kept in an append-only arena of
//! `(parent, bit)` nodes so forking a path costs O(1) for its history.

use super::sc::{f_minsum, g_combine};
use super::{LlrFrame, PolarCodeSpec};

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SclOutput {
    pub payload: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub crc_ok: bool,
    pub path_metric: f64,
}

/// Reusable SCL decoder state for one `(n_code, list_size)` pair.
#[derive(Debug, Clone)]
pub struct SclDecoder {
    m: usize,
    n: usize,
    list_size: usize,
    /// `llr[λ]` holds `list_size` slots of `2^(m-λ)` values; index 0 unused.
    llr: Vec<Vec<f64>>,
    /// `bits[λ]` holds `list_size` slots of two columns of `2^(m-λ)` bits.
    bits: Vec<Vec<u8>>,
    refcount: Vec<Vec<u32>>,
    free_slots: Vec<Vec<usize>>,
    path_slot: Vec<Vec<usize>>,
    active: Vec<bool>,
    free_paths: Vec<usize>,
    metric: Vec<f64>,
    last_node: Vec<u32>,
    arena: Vec<(u32, u8)>,
    candidates: Vec<(f64, usize, u8)>,
}

impl SclDecoder {
    pub fn new(n_code: usize, list_size: usize) -> Self {
        assert!(n_code.is_power_of_two(), "code length must be a power of two");
        assert!(list_size >= 1, "list size must be at least 1");
        let m = n_code.trailing_zeros() as usize;
        let layer_len = |lambda: usize| 1usize << (m - lambda);
        let llr = (0..=m)
            .map(|l| {
                if l == 0 {
                    Vec::new()
                } else {
                    vec![0.0; list_size * layer_len(l)]
                }
            })
            .collect();
        let bits = (0..=m)
            .map(|l| vec![0u8; list_size * 2 * layer_len(l)])
            .collect();
        SclDecoder {
            m,
            n: n_code,
            list_size,
            llr,
            bits,
            refcount: vec![vec![0; list_size]; m + 1],
            free_slots: vec![Vec::with_capacity(list_size); m + 1],
            path_slot: vec![vec![0; m + 1]; list_size],
            active: vec![false; list_size],
            free_paths: Vec::with_capacity(list_size),
            metric: vec![0.0; list_size],
            last_node: vec![NO_PARENT; list_size],
            arena: Vec::new(),
            candidates: Vec::with_capacity(2 * list_size),
        }
    }

    pub fn n_code(&self) -> usize {
        self.n
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    #[inline]
    fn layer_len(&self, lambda: usize) -> usize {
        1 << (self.m - lambda)
    }

    fn reset(&mut self) {
        for lambda in 0..=self.m {
            self.refcount[lambda].iter_mut().for_each(|c| *c = 0);
            self.free_slots[lambda].clear();
            self.free_slots[lambda].extend((0..self.list_size).rev());
        }
        self.free_paths.clear();
        self.free_paths.extend((0..self.list_size).rev());
        self.active.iter_mut().for_each(|a| *a = false);
        self.arena.clear();

        let p = self.free_paths.pop().expect("list has at least one path");
        self.active[p] = true;
        self.metric[p] = 0.0;
        self.last_node[p] = NO_PARENT;
        for lambda in 0..=self.m {
            let s = self.free_slots[lambda].pop().expect("slot available");
            self.refcount[lambda][s] = 1;
            self.path_slot[p][lambda] = s;
        }
    }

    fn kill_path(&mut self, p: usize) {
        self.active[p] = false;
        self.free_paths.push(p);
        for lambda in 0..=self.m {
            let s = self.path_slot[p][lambda];
            self.refcount[lambda][s] -= 1;
            if self.refcount[lambda][s] == 0 {
                self.free_slots[lambda].push(s);
            }
        }
    }

    fn clone_path(&mut self, p: usize) -> usize {
        let q = self.free_paths.pop().expect("path budget exceeded");
        self.active[q] = true;
        for lambda in 0..=self.m {
            let s = self.path_slot[p][lambda];
            self.path_slot[q][lambda] = s;
            self.refcount[lambda][s] += 1;
        }
        self.metric[q] = self.metric[p];
        self.last_node[q] = self.last_node[p];
        q
    }

    /// Slot of path `p` at `lambda`, made private to `p` by copying if shared.
    fn writable_slot(&mut self, lambda: usize, p: usize) -> usize {
        let s = self.path_slot[p][lambda];
        if self.refcount[lambda][s] == 1 {
            return s;
        }
        let t = self.free_slots[lambda]
            .pop()
            .expect("slot budget exceeded");
        self.refcount[lambda][s] -= 1;
        self.refcount[lambda][t] = 1;
        let len = self.layer_len(lambda);
        if lambda > 0 {
            self.llr[lambda].copy_within(s * len..(s + 1) * len, t * len);
        }
        self.bits[lambda].copy_within(s * 2 * len..(s + 1) * 2 * len, t * 2 * len);
        self.path_slot[p][lambda] = t;
        t
    }

    fn calc_llr(&mut self, channel: &[f64], lambda: usize, phi: usize) {
        if lambda == 0 {
            return;
        }
        let psi = phi >> 1;
        if phi & 1 == 0 {
            self.calc_llr(channel, lambda - 1, psi);
        }
        let half = self.layer_len(lambda);
        for p in 0..self.list_size {
            if !self.active[p] {
                continue;
            }
            let dst = self.writable_slot(lambda, p);
            let src = self.path_slot[p][lambda - 1];
            let (lower, upper) = self.llr.split_at_mut(lambda);
            let input: &[f64] = if lambda == 1 {
                channel
            } else {
                &lower[lambda - 1][src * 2 * half..(src + 1) * 2 * half]
            };
            let out = &mut upper[0][dst * half..(dst + 1) * half];
            if phi & 1 == 0 {
                for b in 0..half {
                    out[b] = f_minsum(input[b], input[b + half]);
                }
            } else {
                let left = &self.bits[lambda][dst * 2 * half..dst * 2 * half + half];
                for b in 0..half {
                    out[b] = g_combine(input[b], input[b + half], left[b]);
                }
            }
        }
    }

    fn update_bits(&mut self, lambda: usize, phi: usize) {
        debug_assert!(phi & 1 == 1);
        let psi = phi >> 1;
        let col = psi & 1;
        let half = self.layer_len(lambda);
        for p in 0..self.list_size {
            if !self.active[p] {
                continue;
            }
            let src = self.path_slot[p][lambda];
            let dst = self.writable_slot(lambda - 1, p);
            let (lower, upper) = self.bits.split_at_mut(lambda);
            let from = &upper[0][src * 2 * half..(src + 1) * 2 * half];
            let to = &mut lower[lambda - 1][dst * 4 * half..(dst + 1) * 4 * half];
            let (c0, c1) = from.split_at(half);
            let base = col * 2 * half;
            for b in 0..half {
                to[base + b] = c0[b] ^ c1[b];
                to[base + b + half] = c1[b];
            }
        }
        if psi & 1 == 1 && lambda > 1 {
            self.update_bits(lambda - 1, psi);
        }
    }

    fn leaf_llr(&self, channel: &[f64], p: usize) -> f64 {
        if self.m == 0 {
            channel[0]
        } else {
            self.llr[self.m][self.path_slot[p][self.m]]
        }
    }

    fn set_leaf_bit(&mut self, p: usize, phi: usize, bit: u8) {
        let s = self.writable_slot(self.m, p);
        self.bits[self.m][s * 2 + (phi & 1)] = bit;
        self.arena.push((self.last_node[p], bit));
        self.last_node[p] = (self.arena.len() - 1) as u32;
    }

    fn frozen_step(&mut self, channel: &[f64], phi: usize) {
        for p in 0..self.list_size {
            if !self.active[p] {
                continue;
            }
            let l = self.leaf_llr(channel, p);
            if l < 0.0 {
                self.metric[p] += -l;
            }
            self.set_leaf_bit(p, phi, 0);
        }
    }

    fn info_step(&mut self, channel: &[f64], phi: usize) {
        self.candidates.clear();
        for p in 0..self.list_size {
            if !self.active[p] {
                continue;
            }
            let l = self.leaf_llr(channel, p);
            let pm = self.metric[p];
            let (pm0, pm1) = if l < 0.0 { (pm - l, pm) } else { (pm, pm + l) };
            self.candidates.push((pm0, p, 0));
            self.candidates.push((pm1, p, 1));
        }
        // Stable: equal metrics keep (path, bit 0 before bit 1) order.
        self.candidates
            .sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite path metric"));
        let keep = self.candidates.len().min(self.list_size);

        let mut take = vec![[false; 2]; self.list_size];
        let mut new_metric = vec![[0.0f64; 2]; self.list_size];
        for &(pm, p, b) in &self.candidates[..keep] {
            take[p][b as usize] = true;
            new_metric[p][b as usize] = pm;
        }
        for p in 0..self.list_size {
            if self.active[p] && !take[p][0] && !take[p][1] {
                self.kill_path(p);
            }
        }
        for p in 0..self.list_size {
            if !self.active[p] {
                continue;
            }
            match take[p] {
                [true, true] => {
                    let q = self.clone_path(p);
                    self.metric[p] = new_metric[p][0];
                    self.set_leaf_bit(p, phi, 0);
                    self.metric[q] = new_metric[p][1];
                    self.set_leaf_bit(q, phi, 1);
                }
                [true, false] => {
                    self.metric[p] = new_metric[p][0];
                    self.set_leaf_bit(p, phi, 0);
                }
                [false, true] => {
                    self.metric[p] = new_metric[p][1];
                    self.set_leaf_bit(p, phi, 1);
                }
                [false, false] => {}
            }
        }
    }

    fn trace(&self, p: usize) -> Vec<u8> {
        let mut u = vec![0u8; self.n];
        let mut node = self.last_node[p];
        let mut i = self.n;
        while node != NO_PARENT {
            i -= 1;
            let (parent, bit) = self.arena[node as usize];
            u[i] = bit;
            node = parent;
        }
        debug_assert_eq!(i, 0);
        u
    }

    /// All surviving paths as `(metric, u_hat)`, best metric first.
    pub fn decode_list(&mut self, llrs: &LlrFrame, spec: &PolarCodeSpec) -> Vec<(f64, Vec<u8>)> {
        assert_eq!(llrs.len(), self.n, "LLR frame length does not match decoder");
        assert_eq!(spec.n_code(), self.n, "code length does not match decoder");
        let channel = llrs.values();
        self.reset();
        for phi in 0..self.n {
            self.calc_llr(channel, self.m, phi);
            if spec.is_info(phi) {
                self.info_step(channel, phi);
            } else {
                self.frozen_step(channel, phi);
            }
            if phi & 1 == 1 {
                self.update_bits(self.m, phi);
            }
        }
        let mut survivors: Vec<(f64, Vec<u8>)> = (0..self.list_size)
            .filter(|&p| self.active[p])
            .map(|p| (self.metric[p], self.trace(p)))
            .collect();
        survivors.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite path metric"));
        survivors
    }

    /// Best-metric path whose CRC checks, else the best-metric path.
    pub fn decode(&mut self, llrs: &LlrFrame, spec: &PolarCodeSpec) -> SclOutput {
        let survivors = self.decode_list(llrs, spec);
        let mut fallback = None;
        for (pm, u) in survivors {
            let (payload, ok) = spec.split_payload(&u);
            if ok {
                return SclOutput {
                    payload,
                    u_hat: u,
                    crc_ok: true,
                    path_metric: pm,
                };
            }
            if fallback.is_none() {
                fallback = Some(SclOutput {
                    payload,
                    u_hat: u,
                    crc_ok: false,
                    path_metric: pm,
                });
            }
        }
        fallback.expect("at least one surviving path")
    }
}

/// One-shot SCL decoding; see [`SclDecoder`] to reuse buffers across frames.
pub fn scl_decode(llrs: &LlrFrame, spec: &PolarCodeSpec, list_size: usize) -> SclOutput {
    SclDecoder::new(spec.n_code(), list_size).decode(llrs, spec)
}
