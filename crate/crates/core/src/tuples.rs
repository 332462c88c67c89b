//! Strictly increasing index tuples in colexicographic order.
//!
//! A tuple `t_0 < ... < t_{q-1}` has rank `sum C(t_i, i + 1)`, so every
//! q-subset of `0..n` maps to `0..C(n, q)` without a lookup table.

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn rank(tuple: &[usize]) -> usize {
    tuple.iter().enumerate().map(|(i, &t)| binom(t, i + 1)).sum()
}

/// All increasing q-tuples from `0..n`, ordered by rank.
pub fn all(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binom(n, q));
    let mut cur: Vec<usize> = (0..q).collect();
    if q > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance in colex order: bump the lowest position that can move
        let mut i = 0;
        while i < q {
            let limit = if i + 1 < q { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        if i == q {
            break;
        }
    }
    out
}

/// Sorts a tuple of distinct indices, returning the parity of the sorting
/// permutation, or `None` when an index repeats.
pub fn sort_with_parity(idx: &mut [usize]) -> Option<usize> {
    let mut swaps = 0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(swaps % 2)
}
