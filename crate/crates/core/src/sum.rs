//! Deterministic pairwise reductions.
//!
//! Every reduction in the crate goes through [`PairwiseAcc`] or
//! [`pairwise_sum`], so results do not depend on how callers schedule work.

use core::ops::Add;

/// Streaming pairwise accumulator: merges equal-sized blocks like a binary
/// counter, which reproduces the balanced summation tree of the input order.
#[derive(Clone, Debug)]
pub struct PairwiseAcc<T> {
    levels: [Option<T>; 64],
}

impl<T: Copy + Add<Output = T> + Default> Default for PairwiseAcc<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Copy + Add<Output = T> + Default> PairwiseAcc<T> {
    pub fn new() -> Self {
        Self { levels: [None; 64] }
    }

    pub fn push(&mut self, x: T) {
        let mut carry = x;
        for slot in self.levels.iter_mut() {
            match slot.take() {
                Some(prev) => carry = prev + carry,
                None => {
                    *slot = Some(carry);
                    return;
                }
            }
        }
        // 2^64 terms cannot occur in practice.
        unreachable!("pairwise accumulator overflow");
    }

    pub fn total(&self) -> T {
        let mut acc: Option<T> = None;
        for v in self.levels.iter().flatten() {
            acc = Some(match acc {
                None => *v,
                Some(a) => *v + a,
            });
        }
        acc.unwrap_or_default()
    }
}

/// Pairwise sum of a slice.
pub fn pairwise_sum<T: Copy + Add<Output = T> + Default>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Pairwise sum of a mapped iterator.
pub fn pairwise_map<T, I, F>(iter: I, f: F) -> T
where
    T: Copy + Add<Output = T> + Default,
    I: IntoIterator,
    F: FnMut(I::Item) -> T,
{
    let mut acc = PairwiseAcc::new();
    for v in iter.into_iter().map(f) {
        acc.push(v);
    }
    acc.total()
}
