//! Seeded k-fold partitions.

use super::ModelError;
use crate::rng::Stream;

/// Splits `0..n` into `k` disjoint folds after a seeded shuffle. The first
/// `n % k` folds hold one extra index; indices within a fold are sorted.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ModelError> {
    if k < 2 || k > n {
        return Err(ModelError::InvalidArgument(format!(
            "k-fold needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let perm = Stream::new(seed).permutation(n);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut at = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut fold = perm[at..at + size].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        at += size;
    }
    Ok(folds)
}

/// Complement of `fold` within `0..n`.
pub fn training_indices(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut held = vec![false; n];
    for &i in fold {
        held[i] = true;
    }
    (0..n).filter(|&i| !held[i]).collect()
}
