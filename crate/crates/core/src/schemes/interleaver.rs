use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bit permutation; `interleave(x)[i] = x[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
}

impl Interleaver {
    pub fn identity(n: usize) -> Self {
        Interleaver {
            perm: (0..n).collect(),
        }
    }

    /// Fisher–Yates shuffle driven by `rng`.
    pub fn from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        Interleaver { perm }
    }

    pub fn seeded(n: usize, seed: u64) -> Self {
        Interleaver::from_rng(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn interleave<T: Copy>(&self, input: &[T]) -> Vec<T> {
        assert_eq!(input.len(), self.perm.len());
        self.perm.iter().map(|&p| input[p]).collect()
    }

    pub fn deinterleave<T: Copy + Default>(&self, input: &[T]) -> Vec<T> {
        assert_eq!(input.len(), self.perm.len());
        let mut out = vec![T::default(); input.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = input[i];
        }
        out
    }
}
