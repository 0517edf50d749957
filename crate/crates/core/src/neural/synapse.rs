//! Sparse Erdős–Rényi synapse storage.
//!
//! Rows are keyed by pre-synaptic neuron and sampled lazily from a per-row
//! seed, so a row's content never depends on the order in which rows are
//! first touched.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synapse<T> {
    pub target: u32,
    pub weight: T,
}

#[derive(Debug, Clone)]
pub struct SynapseMatrix<T> {
    pre: usize,
    post: usize,
    p: f64,
    seed: u64,
    skip_diagonal: bool,
    rows: Vec<Option<Vec<Synapse<T>>>>,
}

impl<T: Weight> SynapseMatrix<T> {
    pub fn new(pre: usize, post: usize, p: f64, seed: u64, skip_diagonal: bool) -> Self {
        SynapseMatrix {
            pre,
            post,
            p,
            seed,
            skip_diagonal,
            rows: vec![None; pre],
        }
    }

    pub fn pre_len(&self) -> usize {
        self.pre
    }

    pub fn post_len(&self) -> usize {
        self.post
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&mut self, i: usize) -> &[Synapse<T>] {
        self.ensure_row(i);
        self.rows[i].as_deref().unwrap_or(&[])
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Synapse<T>] {
        self.ensure_row(i);
        self.rows[i].as_deref_mut().unwrap_or(&mut [])
    }

    /// Row if it has already been sampled.
    pub fn cached_row(&self, i: usize) -> Option<&[Synapse<T>]> {
        self.rows.get(i).and_then(|r| r.as_deref())
    }

    pub fn materialized_rows(&self) -> impl Iterator<Item = (usize, &[Synapse<T>])> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_deref().map(|r| (i, r)))
    }

    pub fn ensure_row(&mut self, i: usize) {
        if self.rows[i].is_none() {
            let row = sample_row(self.seed, i, self.post, self.p, self.skip_diagonal);
            self.rows[i] = Some(row);
        }
    }

    pub fn materialize_all(&mut self) {
        for i in 0..self.pre {
            self.ensure_row(i);
        }
    }

    pub fn synapse_count(&mut self) -> usize {
        self.materialize_all();
        self.rows.iter().flatten().map(Vec::len).sum()
    }

    /// Replace a row wholesale (snapshot restore). Targets must be sorted and in range.
    pub(crate) fn set_row(&mut self, i: usize, row: Vec<Synapse<T>>) {
        self.rows[i] = Some(row);
    }

    /// `out[j] += w_ij` for every firing pre-synaptic neuron `i`.
    pub fn accumulate(&mut self, firing: &[u32], out: &mut [T]) {
        for &i in firing {
            for s in self.row(i as usize) {
                let slot = &mut out[s.target as usize];
                *slot = *slot + s.weight;
            }
        }
    }

    /// Multiply `w_ij` by `factor` for `i ∈ pre_fired`, `post_fired[j]`.
    pub fn potentiate(&mut self, pre_fired: &[u32], post_fired: &[bool], factor: T) {
        for &i in pre_fired {
            for s in self.row_mut(i as usize) {
                if post_fired[s.target as usize] {
                    s.weight = s.weight * factor;
                }
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit tag for a matrix, derived from names rather than insertion order.
pub(crate) fn matrix_seed(brain_seed: u64, parts: &[&str]) -> u64 {
    // FNV-1a over the parts, separated so ("ab","c") != ("a","bc").
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for b in part.bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    splitmix64(brain_seed ^ splitmix64(h))
}

fn sample_row<T: Weight>(seed: u64, row: usize, n: usize, p: f64, skip_diagonal: bool) -> Vec<Synapse<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(row as u64)));
    let mut out = Vec::with_capacity(((n as f64) * p * 1.2) as usize + 4);
    if p >= 1.0 {
        out.extend(
            (0..n)
                .filter(|&j| !(skip_diagonal && j == row))
                .map(|j| Synapse { target: j as u32, weight: T::one() }),
        );
        return out;
    }
    // Geometric gaps between successes of independent Bernoulli(p) trials.
    let log_q = (1.0 - p).ln();
    let mut pos: i64 = -1;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_q).floor();
        if !gap.is_finite() || gap >= n as f64 {
            break;
        }
        pos += gap as i64 + 1;
        if pos >= n as i64 {
            break;
        }
        let j = pos as usize;
        if skip_diagonal && j == row {
            continue;
        }
        out.push(Synapse { target: j as u32, weight: T::one() });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_order_independent() {
        let mut a = SynapseMatrix::<f64>::new(50, 50, 0.2, 7, true);
        let mut b = SynapseMatrix::<f64>::new(50, 50, 0.2, 7, true);
        let r3 = a.row(3).to_vec();
        b.row(10);
        b.row(40);
        assert_eq!(b.row(3), &r3[..]);
    }

    #[test]
    fn diagonal_is_skipped() {
        let mut m = SynapseMatrix::<f32>::new(30, 30, 0.9, 1, true);
        for i in 0..30 {
            assert!(m.row(i).iter().all(|s| s.target as usize != i));
        }
    }

    #[test]
    fn targets_sorted_and_in_range() {
        let mut m = SynapseMatrix::<f64>::new(20, 1000, 0.05, 3, false);
        for i in 0..20 {
            let row = m.row(i);
            assert!(row.windows(2).all(|w| w[0].target < w[1].target));
            assert!(row.iter().all(|s| (s.target as usize) < 1000));
        }
    }

    #[test]
    fn accumulate_sums_weights() {
        let mut m = SynapseMatrix::<f64>::new(3, 3, 0.5, 0, false);
        m.set_row(0, vec![Synapse { target: 2, weight: 1.0 }]);
        m.set_row(1, vec![Synapse { target: 2, weight: 1.1 }]);
        let mut out = vec![0.0; 3];
        m.accumulate(&[0, 1], &mut out);
        assert!((out[2] - 2.1).abs() < 1e-12);
        assert_eq!(out[0], 0.0);
        assert_eq!(out[1], 0.0);
    }
}
