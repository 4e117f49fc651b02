//! Message passing multiuser detection on the SCMA factor graph.
//!
//! User (variable) nodes and resource (check) nodes exchange length-`M`
//! messages along the edges `{(k, n) | s_{n,k} = 1}`. Resource nodes
//! marginalize the channel likelihood over all partner-symbol
//! combinations; user nodes multiply incoming messages. Every message is
//! renormalized to sum to one after it is computed, which only changes
//! the per-user normalization of the final posterior.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scma::ScmaCodebook;

/// Iteration count used when none is configured.
pub const DEFAULT_MPA_ITERS: usize = 6;

/// Per-user symbol posteriors `Pr{c_k = i | r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPosterior {
    m_points: usize,
    probs: Vec<f64>,
}

impl SymbolPosterior {
    pub fn new(m_points: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len() % m_points, 0);
        SymbolPosterior { m_points, probs }
    }

    pub fn n_users(&self) -> usize {
        self.probs.len() / self.m_points
    }

    pub fn m_points(&self) -> usize {
        self.m_points
    }

    pub fn user(&self, k: usize) -> &[f64] {
        &self.probs[k * self.m_points..(k + 1) * self.m_points]
    }

    /// Most probable index for user `k` (lowest index on ties).
    pub fn argmax(&self, k: usize) -> usize {
        let p = self.user(k);
        (0..p.len()).fold(0, |best, i| if p[i] > p[best] { i } else { best })
    }
}

/// `f(r_n | c) = 1/(2πσ²) · exp(-|r_n - Σ_k h_{n,k} V_{n,k}(c_k)|² / (2σ²))`.
///
/// `combo[j]` is the symbol of the `j`-th user of `C_n`; `h[k]` is user
/// `k`'s coefficient on resource `n`.
pub fn channel_likelihood(
    r_n: Complex64,
    n: usize,
    combo: &[usize],
    h: &[Complex64],
    cb: &ScmaCodebook,
    sigma2: f64,
) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::invalid(format!("noise variance {sigma2} must be positive")));
    }
    let users = cb.users_of_resource(n);
    if combo.len() != users.len() {
        return Err(Error::invalid("combination length does not match resource degree"));
    }
    let mean: Complex64 = users
        .iter()
        .zip(combo)
        .map(|(&k, &c)| h[k] * cb.point(n, k, c))
        .sum();
    Ok(gaussian_density(r_n - mean, sigma2))
}

#[inline]
fn gaussian_density(residual: Complex64, sigma2: f64) -> f64 {
    (-residual.norm_sqr() / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2)
}

/// Resource-node update without normalization: for each partner `j`,
/// `out[j][i] = Σ_{combos, c_j = i} lik[combo] · Π_{l ≠ j} incoming[l][c_l]`.
///
/// `likelihoods` is indexed by combination, with the symbol of
/// `incoming[0]`'s user as the most significant base-`m` digit.
pub fn resource_messages(likelihoods: &[f64], incoming: &[Vec<f64>], m: usize) -> Vec<Vec<f64>> {
    let degree = incoming.len();
    let edges: Vec<usize> = (0..degree).collect();
    let mut out = vec![vec![0.0; m]; degree];
    let mut sym = vec![0usize; degree];
    resource_messages_into(likelihoods, incoming, &edges, m, &mut out, &mut sym);
    out
}

/// `incoming[edges[j]]` is the message from the `j`-th partner.
fn resource_messages_into(
    likelihoods: &[f64],
    incoming: &[Vec<f64>],
    edges: &[usize],
    m: usize,
    out: &mut [Vec<f64>],
    sym: &mut [usize],
) {
    let degree = edges.len();
    assert_eq!(likelihoods.len(), m.pow(degree as u32));
    for o in out.iter_mut() {
        o.iter_mut().for_each(|v| *v = 0.0);
    }
    if degree == 3 {
        let (a_in, b_in, c_in) = (&incoming[edges[0]], &incoming[edges[1]], &incoming[edges[2]]);
        let (a_out, rest) = out.split_at_mut(1);
        let (b_out, c_out) = rest.split_at_mut(1);
        let (a_out, b_out, c_out) = (&mut a_out[0], &mut b_out[0], &mut c_out[0]);
        for (a, lik_a) in likelihoods.chunks_exact(m * m).enumerate() {
            let pa = a_in[a];
            let mut acc_a = 0.0;
            for (b, lik_ab) in lik_a.chunks_exact(m).enumerate() {
                let pb = b_in[b];
                let pab = pa * pb;
                let mut acc_bc = 0.0;
                for ((&lik, &pc), oc) in lik_ab.iter().zip(c_in.iter()).zip(c_out.iter_mut()) {
                    *oc += lik * pab;
                    acc_bc += lik * pc;
                }
                acc_a += acc_bc * pb;
                b_out[b] += acc_bc * pa;
            }
            a_out[a] += acc_a;
        }
        return;
    }
    sym.iter_mut().for_each(|s| *s = 0);
    for &lik in likelihoods {
        if lik != 0.0 {
            for j in 0..degree {
                let mut prod = lik;
                for l in 0..degree {
                    if l != j {
                        prod *= incoming[edges[l]][sym[l]];
                    }
                }
                out[j][sym[j]] += prod;
            }
        }
        // odometer, last digit fastest
        for s in sym.iter_mut().rev() {
            *s += 1;
            if *s < m {
                break;
            }
            *s = 0;
        }
    }
}

fn normalize_or_uniform(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 && s.is_finite() {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        let u = 1.0 / v.len() as f64;
        v.iter_mut().for_each(|x| *x = u);
    }
}

/// Reusable detector for one codebook; holds the graph layout and
/// message buffers.
#[derive(Debug, Clone)]
pub struct MpaDetector<'a> {
    cb: &'a ScmaCodebook,
    /// Edge ids of resource `n`, in `users_of_resource(n)` order.
    resource_edges: Vec<Vec<usize>>,
    /// Edge ids of user `k`, in `resources_of_user(k)` order.
    user_edges: Vec<Vec<usize>>,
    /// User-to-resource messages per edge.
    to_resource: Vec<Vec<f64>>,
    /// Resource-to-user messages per edge.
    to_user: Vec<Vec<f64>>,
    likelihoods: Vec<Vec<f64>>,
    out: Vec<Vec<f64>>,
    scratch: Vec<usize>,
}

impl<'a> MpaDetector<'a> {
    pub fn new(cb: &'a ScmaCodebook) -> Self {
        let n_res = cb.n_resources();
        let n_users = cb.n_users();
        let m = cb.m_points();
        let mut edge_of = vec![vec![usize::MAX; n_users]; n_res];
        let mut n_edges = 0;
        for (n, row) in edge_of.iter_mut().enumerate() {
            for &k in cb.users_of_resource(n) {
                row[k] = n_edges;
                n_edges += 1;
            }
        }
        let resource_edges = (0..n_res)
            .map(|n| cb.users_of_resource(n).iter().map(|&k| edge_of[n][k]).collect())
            .collect();
        let user_edges = (0..n_users)
            .map(|k| cb.resources_of_user(k).iter().map(|&n| edge_of[n][k]).collect())
            .collect();
        let max_degree = (0..n_res).map(|n| cb.users_of_resource(n).len()).max().unwrap_or(0);
        MpaDetector {
            cb,
            resource_edges,
            user_edges,
            to_resource: vec![vec![0.0; m]; n_edges],
            to_user: vec![vec![0.0; m]; n_edges],
            likelihoods: (0..n_res)
                .map(|n| vec![0.0; m.pow(cb.users_of_resource(n).len() as u32)])
                .collect(),
            out: vec![vec![0.0; m]; max_degree],
            scratch: vec![0; max_degree],
        }
    }

    pub fn codebook(&self) -> &ScmaCodebook {
        self.cb
    }

    /// Likelihood table of resource `n`, scaled by a common positive factor
    /// so that its largest entry is 1.
    pub fn scaled_likelihoods(
        cb: &ScmaCodebook,
        r_n: Complex64,
        n: usize,
        h: &[Complex64],
        sigma2: f64,
        table: &mut [f64],
    ) {
        let users = cb.users_of_resource(n);
        let degree = users.len();
        let m = cb.m_points();
        // faded constellation of each partner on this resource
        let faded: Vec<Complex64> = users
            .iter()
            .flat_map(|&k| (0..m).map(move |c| h[k] * cb.point(n, k, c)))
            .collect();
        let mut sym = vec![0usize; degree];
        let mut max_log = f64::NEG_INFINITY;
        for slot in table.iter_mut() {
            let mean: Complex64 = (0..degree).map(|j| faded[j * m + sym[j]]).sum();
            let log = -(r_n - mean).norm_sqr() / (2.0 * sigma2);
            *slot = log;
            max_log = max_log.max(log);
            for s in sym.iter_mut().rev() {
                *s += 1;
                if *s < m {
                    break;
                }
                *s = 0;
            }
        }
        for slot in table.iter_mut() {
            *slot = (*slot - max_log).exp();
        }
    }

    /// Detect one channel use. `h[k]` is user `k`'s coefficient.
    pub fn detect(
        &mut self,
        r: &[Complex64],
        h: &[Complex64],
        sigma2: f64,
        n_iters: usize,
    ) -> Result<SymbolPosterior> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::invalid(format!("noise variance {sigma2} must be positive")));
        }
        if r.len() != self.cb.n_resources() || h.len() != self.cb.n_users() {
            return Err(Error::invalid("received vector or coefficient length mismatch"));
        }
        if r.iter().chain(h).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite received sample or channel coefficient".into()));
        }
        for n in 0..self.cb.n_resources() {
            let mut table = std::mem::take(&mut self.likelihoods[n]);
            Self::scaled_likelihoods(self.cb, r[n], n, h, sigma2, &mut table);
            self.likelihoods[n] = table;
        }
        self.run(n_iters)
    }

    /// Run message passing on externally supplied likelihood tables (one
    /// per resource, combination-indexed as in [`resource_messages`]).
    pub fn detect_from_likelihoods(
        &mut self,
        tables: &[Vec<f64>],
        n_iters: usize,
    ) -> Result<SymbolPosterior> {
        if tables.len() != self.likelihoods.len()
            || tables.iter().zip(&self.likelihoods).any(|(a, b)| a.len() != b.len())
        {
            return Err(Error::invalid("likelihood table shape mismatch"));
        }
        if tables.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Numeric("likelihoods must be finite and nonnegative".into()));
        }
        self.likelihoods.clone_from_slice(tables);
        self.run(n_iters)
    }

    fn run(&mut self, n_iters: usize) -> Result<SymbolPosterior> {
        if n_iters == 0 {
            return Err(Error::invalid("MPA needs at least one iteration"));
        }
        let m = self.cb.m_points();
        let uniform = 1.0 / m as f64;
        for msg in self.to_resource.iter_mut() {
            msg.iter_mut().for_each(|v| *v = uniform);
        }
        for _ in 0..n_iters {
            // resource nodes
            for (n, edges) in self.resource_edges.iter().enumerate() {
                let degree = edges.len();
                resource_messages_into(
                    &self.likelihoods[n],
                    &self.to_resource,
                    edges,
                    m,
                    &mut self.out[..degree],
                    &mut self.scratch[..degree],
                );
                for (j, &e) in edges.iter().enumerate() {
                    self.to_user[e].copy_from_slice(&self.out[j]);
                    normalize_or_uniform(&mut self.to_user[e]);
                }
            }
            // user nodes
            for edges in &self.user_edges {
                for &e in edges {
                    let msg = &mut self.to_resource[e];
                    msg.iter_mut().for_each(|v| *v = 1.0);
                    for &other in edges.iter().filter(|&&o| o != e) {
                        for (v, w) in msg.iter_mut().zip(&self.to_user[other]) {
                            *v *= w;
                        }
                    }
                    normalize_or_uniform(msg);
                }
            }
        }
        let mut probs = vec![1.0; self.cb.n_users() * m];
        for (k, edges) in self.user_edges.iter().enumerate() {
            let p = &mut probs[k * m..(k + 1) * m];
            for &e in edges {
                for (v, w) in p.iter_mut().zip(&self.to_user[e]) {
                    *v *= w;
                }
            }
            normalize_or_uniform(p);
        }
        Ok(SymbolPosterior::new(m, probs))
    }
}

/// One-shot detection of a single channel use.
pub fn mpa_detect(
    r: &[Complex64],
    h: &[Complex64],
    cb: &ScmaCodebook,
    sigma2: f64,
    n_iters: usize,
) -> Result<SymbolPosterior> {
    MpaDetector::new(cb).detect(r, h, sigma2, n_iters)
}
