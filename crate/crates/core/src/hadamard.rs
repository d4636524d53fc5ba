//! Exact fast Walsh-Hadamard transforms over power-of-two dimensions.
//!
//! `H` is the Sylvester Hadamard matrix (tensor powers of `[[1,1],[1,-1]]`)
//! with unnormalized ±1 entries, so every result here is exact for integer
//! inputs within the f64 exactness range. Normalization is the caller's
//! concern (see the transform layer).
//!
//! Two evaluation paths are provided:
//!
//! * [`fwht_full`] — the full butterfly, `N log2 N` additions/subtractions.
//! * [`fwht_trimmed`] — only the requested output rows, by the half-split
//!   recursion: rows with top bit 0 live in `H_{N/2}(x1 + x2)`, rows with
//!   top bit 1 in `H_{N/2}(x1 - x2)`; branches nobody asked for are pruned.
//!
//! Both paths perform the stage-`N/2`-first operation order, so a trimmed
//! output is bit-identical to the corresponding entry of the full transform,
//! not merely close. [`fwht_op_count`] reproduces the exact add/sub count of
//! the trimmed path without touching data; the count is bounded by
//! [`COST_BOUND_FACTOR`]` * N * (log2(distinct rows) + 1)`.

use crate::error::{Error, Result};

/// Documented constant `C` for the trimmed-transform cost bound:
/// `fwht_op_count(N, rows) <= C * N * (log2(|distinct rows|) + 1)`.
///
/// A visited node of block size `B` charges `B/2` per non-empty branch; at
/// depth `l` there are at most `min(2^l, d)` visited nodes, which sums to
/// `N * (log2 d + 2)`, and `log2 d + 2 <= 2 * (log2 d + 1)` for `d >= 1`.
pub const COST_BOUND_FACTOR: f64 = 2.0;

/// A power-of-two transform length `N = 2^n_log2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardDim {
    n_log2: u32,
}

impl HadamardDim {
    /// Dimension for a given vector length; errors unless `len` is a power of two.
    pub fn from_len(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "Hadamard transform length must be a power of two, got {len}"
            )));
        }
        Ok(Self {
            n_log2: len.trailing_zeros(),
        })
    }

    /// Dimension `N = 2^n_log2`.
    pub fn from_log2(n_log2: u32) -> Self {
        assert!(n_log2 < usize::BITS, "2^{n_log2} does not fit in usize");
        Self { n_log2 }
    }

    /// Smallest power-of-two dimension that covers `len` entries.
    pub fn covering(len: usize) -> Self {
        let padded = len.max(1).next_power_of_two();
        Self {
            n_log2: padded.trailing_zeros(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        1usize << self.n_log2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn log2(&self) -> u32 {
        self.n_log2
    }
}

/// Row indices of `H` drawn uniformly with replacement; realizes the
/// subsampling projection `R`.
///
/// Duplicates are allowed and preserved: a duplicated row is emitted once per
/// occurrence, in the order given. Construction pre-sorts an internal
/// `(row, output slot)` index so the trimmed recursion can partition by
/// binary search instead of allocating per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSample {
    dim: HadamardDim,
    indices: Vec<usize>,
    /// (row, slot) pairs sorted by row; slot is the output position.
    sorted: Vec<(usize, usize)>,
    distinct: usize,
}

impl RowSample {
    pub fn new(indices: Vec<usize>, dim: HadamardDim) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Dimension(
                "row sample must contain at least one index".into(),
            ));
        }
        let n = dim.len();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::Dimension(format!(
                "row index {bad} out of range for N={n}"
            )));
        }
        let mut sorted: Vec<(usize, usize)> =
            indices.iter().copied().enumerate().map(|(s, r)| (r, s)).collect();
        sorted.sort_unstable();
        let mut distinct = 1usize;
        for w in sorted.windows(2) {
            if w[0].0 != w[1].0 {
                distinct += 1;
            }
        }
        Ok(Self {
            dim,
            indices,
            sorted,
            distinct,
        })
    }

    /// All rows `0..N` in order (no trimming).
    pub fn full(dim: HadamardDim) -> Self {
        Self::new((0..dim.len()).collect(), dim).expect("full sample is always valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> HadamardDim {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of distinct rows in the sample.
    pub fn distinct(&self) -> usize {
        self.distinct
    }

    fn sorted_pairs(&self) -> &[(usize, usize)] {
        &self.sorted
    }
}

/// In-place unnormalized FWHT: replaces `x` with `H x`.
///
/// Stages run from stride `N/2` down to 1, matching the half-split recursion
/// of the trimmed path op for op.
pub fn fwht_in_place(x: &mut [f64]) -> Result<()> {
    HadamardDim::from_len(x.len())?;
    let mut h = x.len() / 2;
    while h >= 1 {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let u = *a + *b;
                let v = *a - *b;
                *a = u;
                *b = v;
            }
        }
        h /= 2;
    }
    Ok(())
}

/// Returns `H x` for the unnormalized Sylvester Hadamard matrix.
pub fn fwht_full(x: &[f64]) -> Result<Vec<f64>> {
    let mut out = x.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

/// Returns `(H x)[rows]` in sample order, duplicates repeated.
///
/// Arithmetic cost is `O(N log n)` for `n` requested rows; see
/// [`fwht_op_count`] for the exact count.
pub fn fwht_trimmed(x: &[f64], rows: &RowSample) -> Result<Vec<f64>> {
    let mut scratch = x.to_vec();
    let mut out = vec![0.0; rows.len()];
    fwht_trimmed_scratch(&mut scratch, rows, &mut out)?;
    Ok(out)
}

/// Trimmed FWHT that destroys `x` instead of copying it.
///
/// `out` must have length `rows.len()`. This is the allocation-free core
/// used by the batch pipeline; `x` holds garbage afterwards.
pub fn fwht_trimmed_scratch(x: &mut [f64], rows: &RowSample, out: &mut [f64]) -> Result<()> {
    if x.len() != rows.dim().len() {
        return Err(Error::Dimension(format!(
            "input length {} does not match sample dimension {}",
            x.len(),
            rows.dim().len()
        )));
    }
    if out.len() != rows.len() {
        return Err(Error::Dimension(format!(
            "output length {} does not match sample size {}",
            out.len(),
            rows.len()
        )));
    }
    trimmed_rec(x, 0, rows.sorted_pairs(), out);
    Ok(())
}

/// Recursive half-split on a mutable segment. `base` is the segment's first
/// row index in the original transform; `pairs` are (row, slot) entries
/// sorted by row, all falling inside `[base, base + seg.len())`.
fn trimmed_rec(seg: &mut [f64], base: usize, pairs: &[(usize, usize)], out: &mut [f64]) {
    debug_assert!(!pairs.is_empty());
    let b = seg.len();
    if b == 1 {
        for &(_, slot) in pairs {
            out[slot] = seg[0];
        }
        return;
    }
    if covers_block(pairs, base, b) {
        // Every row of this block is requested: the pruned recursion would
        // perform the complete butterfly anyway, so run it directly.
        let mut h = b / 2;
        while h >= 1 {
            for block in seg.chunks_exact_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (a, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *a + *y;
                    let v = *a - *y;
                    *a = u;
                    *y = v;
                }
            }
            h /= 2;
        }
        for &(row, slot) in pairs {
            out[slot] = seg[row - base];
        }
        return;
    }
    let half = b / 2;
    let mid = base + half;
    let split = pairs.partition_point(|&(row, _)| row < mid);
    let (lo_pairs, hi_pairs) = pairs.split_at(split);
    let (lo, hi) = seg.split_at_mut(half);
    if hi_pairs.is_empty() {
        // Only the sum branch is needed.
        for (a, y) in lo.iter_mut().zip(hi.iter()) {
            *a += *y;
        }
        trimmed_rec(lo, base, lo_pairs, out);
    } else if lo_pairs.is_empty() {
        // Only the difference branch is needed.
        for (a, y) in lo.iter().zip(hi.iter_mut()) {
            *y = *a - *y;
        }
        trimmed_rec(hi, mid, hi_pairs, out);
    } else {
        for (a, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let u = *a + *y;
            let v = *a - *y;
            *a = u;
            *y = v;
        }
        trimmed_rec(lo, base, lo_pairs, out);
        trimmed_rec(hi, mid, hi_pairs, out);
    }
}

/// True when every row in `[base, base + b)` occurs in `pairs`.
fn covers_block(pairs: &[(usize, usize)], base: usize, b: usize) -> bool {
    if pairs.len() < b {
        return false;
    }
    let mut want = base;
    for &(row, _) in pairs {
        if row == want {
            want += 1;
            if want == base + b {
                return true;
            }
        } else if row > want {
            return false;
        }
    }
    false
}

/// Exact number of additions/subtractions [`fwht_trimmed`] performs for this
/// `(N, rows)` pair. Deterministic in the set of distinct rows; duplicates
/// ride already-computed branches and cost nothing extra.
pub fn fwht_op_count(dim: HadamardDim, rows: &RowSample) -> Result<u64> {
    if rows.dim() != dim {
        return Err(Error::Dimension(format!(
            "row sample is for N={}, expected N={}",
            rows.dim().len(),
            dim.len()
        )));
    }
    Ok(count_rec(dim.len(), 0, rows.sorted_pairs()))
}

fn count_rec(b: usize, base: usize, pairs: &[(usize, usize)]) -> u64 {
    if b == 1 {
        return 0;
    }
    // The full-coverage butterfly costs exactly what the recursion would:
    // B/2 per branch at every level, i.e. B log2 B in total, so the count
    // needs no special case for it.
    let half = b / 2;
    let mid = base + half;
    let split = pairs.partition_point(|&(row, _)| row < mid);
    let (lo, hi) = pairs.split_at(split);
    let mut ops = 0u64;
    if !lo.is_empty() {
        ops += half as u64 + count_rec(half, base, lo);
    }
    if !hi.is_empty() {
        ops += half as u64 + count_rec(half, mid, hi);
    }
    ops
}

/// Upper bound `C * N * (log2(distinct) + 1)` the op count is tested against.
pub fn cost_bound(dim: HadamardDim, distinct_rows: usize) -> f64 {
    COST_BOUND_FACTOR * dim.len() as f64 * ((distinct_rows.max(1) as f64).log2() + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Dense Sylvester Hadamard built entry-by-entry: H[r][c] = (-1)^popcount(r & c).
    fn dense_hadamard(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect()
    }

    fn dense_apply(h: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        h.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn unit_vector_gives_all_ones() {
        let mut x = vec![0.0; 8];
        x[0] = 1.0;
        assert_eq!(fwht_full(&x).unwrap(), vec![1.0; 8]);
    }

    #[test]
    fn all_ones_concentrates_in_row_zero() {
        let x = vec![1.0; 8];
        let y = fwht_full(&x).unwrap();
        assert_eq!(y[0], 8.0);
        assert!(y[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_dense_sylvester_oracle_n16() {
        let mut rng = StdRng::seed_from_u64(7);
        let x: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
        let h = dense_hadamard(16);
        let expect = dense_apply(&h, &x);
        let got = fwht_full(&x).unwrap();
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() <= 1e-12 * e.abs().max(1.0), "{g} vs {e}");
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(fwht_full(&[1.0, 2.0, 3.0]), Err(Error::Dimension(_))));
        assert!(matches!(fwht_full(&[]), Err(Error::Dimension(_))));
    }

    #[test]
    fn length_one_is_identity() {
        assert_eq!(fwht_full(&[3.5]).unwrap(), vec![3.5]);
    }

    #[test]
    fn parseval_energy() {
        let mut rng = StdRng::seed_from_u64(11);
        for log2 in [0u32, 3, 7, 10] {
            let n = 1usize << log2;
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = fwht_full(&x).unwrap();
            let ex: f64 = x.iter().map(|v| v * v).sum();
            let ey: f64 = y.iter().map(|v| v * v).sum();
            let rel = (ey - n as f64 * ex).abs() / (n as f64 * ex);
            assert!(rel <= 1e-12, "Parseval violated at N={n}: rel={rel}");
        }
    }

    #[test]
    fn involution_on_integers() {
        let x: Vec<f64> = vec![3.0, -1.0, 4.0, 1.0, -5.0, 9.0, 2.0, -6.0];
        let twice = fwht_full(&fwht_full(&x).unwrap()).unwrap();
        for (t, o) in twice.iter().zip(&x) {
            assert_eq!(*t, 8.0 * o);
        }
    }

    #[test]
    fn trimmed_row_zero_and_three_of_ones() {
        let x = vec![1.0; 8];
        let dim = HadamardDim::from_len(8).unwrap();
        let rows = RowSample::new(vec![0, 3], dim).unwrap();
        assert_eq!(fwht_trimmed(&x, &rows).unwrap(), vec![8.0, 0.0]);
    }

    #[test]
    fn trimmed_all_rows_equals_full() {
        let mut rng = StdRng::seed_from_u64(3);
        let n = 64;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let dim = HadamardDim::from_len(n).unwrap();
        let rows = RowSample::full(dim);
        let full = fwht_full(&x).unwrap();
        let trimmed = fwht_trimmed(&x, &rows).unwrap();
        assert_eq!(full, trimmed, "no-trim path must be bit-identical");
    }

    #[test]
    fn trimmed_matches_full_rows_with_duplicates() {
        let mut rng = StdRng::seed_from_u64(5);
        let n = 1024;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dim = HadamardDim::from_len(n).unwrap();
        let mut idx: Vec<usize> = (0..36).map(|_| rng.random_range(0..n)).collect();
        idx.push(idx[7]); // force one duplicate
        let rows = RowSample::new(idx.clone(), dim).unwrap();
        let full = fwht_full(&x).unwrap();
        let trimmed = fwht_trimmed(&x, &rows).unwrap();
        for (j, &r) in idx.iter().enumerate() {
            assert_eq!(trimmed[j], full[r], "row {r} slot {j} not bit-identical");
        }
        assert_eq!(trimmed[36], trimmed[7]);
    }

    #[test]
    fn trimmed_rejects_out_of_range_index() {
        let dim = HadamardDim::from_len(8).unwrap();
        assert!(RowSample::new(vec![0, 8], dim).is_err());
        assert!(RowSample::new(vec![], dim).is_err());
    }

    #[test]
    fn op_count_full_is_n_log_n() {
        let dim = HadamardDim::from_len(8).unwrap();
        let rows = RowSample::full(dim);
        assert_eq!(fwht_op_count(dim, &rows).unwrap(), 24);
    }

    #[test]
    fn op_count_single_row_pin() {
        // One pruned path: N/2 + N/4 + ... + 1 = N - 1. Regression pin.
        let dim = HadamardDim::from_len(8).unwrap();
        let rows = RowSample::new(vec![0], dim).unwrap();
        assert_eq!(fwht_op_count(dim, &rows).unwrap(), 7);
        let dim = HadamardDim::from_len(1 << 16).unwrap();
        let rows = RowSample::new(vec![12345], dim).unwrap();
        assert_eq!(fwht_op_count(dim, &rows).unwrap(), (1 << 16) - 1);
    }

    #[test]
    fn op_count_ignores_duplicates() {
        let dim = HadamardDim::from_len(64).unwrap();
        let a = RowSample::new(vec![5, 17, 40], dim).unwrap();
        let b = RowSample::new(vec![5, 17, 40, 17, 5, 5], dim).unwrap();
        assert_eq!(
            fwht_op_count(dim, &a).unwrap(),
            fwht_op_count(dim, &b).unwrap()
        );
    }

    #[test]
    fn op_count_bound_random_and_adversarial() {
        let mut rng = StdRng::seed_from_u64(17);
        for log2 in [4u32, 8, 12, 16] {
            let dim = HadamardDim::from_log2(log2);
            let n = dim.len();
            let mut cases: Vec<Vec<usize>> = vec![
                vec![0],
                vec![n - 1],
                (0..n).collect(),
                (0..n / 2).collect(),
            ];
            // Evenly spread rows stress every level of the recursion.
            for d in [2usize, 8, 64] {
                if d <= n {
                    cases.push((0..d).map(|j| j * (n / d)).collect());
                }
            }
            for k in [3usize, 10, 100] {
                if k <= n {
                    cases.push((0..k).map(|_| rng.random_range(0..n)).collect());
                }
            }
            for idx in cases {
                let rows = RowSample::new(idx, dim).unwrap();
                let count = fwht_op_count(dim, &rows).unwrap() as f64;
                let bound = cost_bound(dim, rows.distinct());
                assert!(
                    count <= bound,
                    "count {count} exceeds bound {bound} at N={n}, distinct={}",
                    rows.distinct()
                );
            }
        }
    }

    #[test]
    fn op_count_matches_actual_ops_performed() {
        // Instrumented mirror of the value recursion, including the
        // full-coverage butterfly fast path, counting every add/sub it does.
        fn traced(seg: &mut [f64], base: usize, pairs: &[(usize, usize)], ops: &mut u64) {
            let b = seg.len();
            if b == 1 {
                return;
            }
            if covers_block(pairs, base, b) {
                let mut h = b / 2;
                while h >= 1 {
                    // b/2 pairs per stage, one addition and one subtraction each
                    *ops += b as u64;
                    h /= 2;
                }
                return;
            }
            let half = b / 2;
            let mid = base + half;
            let split = pairs.partition_point(|&(row, _)| row < mid);
            let (lo_pairs, hi_pairs) = pairs.split_at(split);
            let (lo, hi) = seg.split_at_mut(half);
            if !lo_pairs.is_empty() {
                *ops += half as u64;
                traced(lo, base, lo_pairs, ops);
            }
            if !hi_pairs.is_empty() {
                *ops += half as u64;
                traced(hi, mid, hi_pairs, ops);
            }
        }
        let mut rng = StdRng::seed_from_u64(23);
        let dim = HadamardDim::from_len(512).unwrap();
        for k in [1usize, 2, 7, 63, 200, 512] {
            let mut idx: Vec<usize> = (0..k).map(|_| rng.random_range(0..512)).collect();
            if k == 512 {
                idx = (0..512).collect();
            }
            let rows = RowSample::new(idx, dim).unwrap();
            let mut pairs: Vec<(usize, usize)> = rows
                .indices()
                .iter()
                .copied()
                .enumerate()
                .map(|(s, r)| (r, s))
                .collect();
            pairs.sort_unstable();
            let mut buf = vec![0.0; 512];
            let mut ops = 0u64;
            traced(&mut buf, 0, &pairs, &mut ops);
            assert_eq!(fwht_op_count(dim, &rows).unwrap(), ops, "k={k}");
        }
    }
}
