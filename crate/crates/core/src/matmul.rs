//! Fast multiplication of a small dense matrix by a wide rectangular matrix.
//!
//! The blocked path splits `G in R^{m x n}` into `r = ceil(n/m)` square
//! `m x m` blocks and the right factor into matching row blocks, runs each
//! square-times-wide block product through Strassen recursion, and sums the
//! `r` partial results in fixed block order. Zero padding makes every block
//! the same size; padding inside the Strassen step goes to the next power of
//! two of the block side, so memory overhead stays below 4x.
//!
//! Strassen here is a stand-in for an asymptotically better square-times-
//! rectangular family: [`MultiplyPlan`] is the seam where such an algorithm
//! could be plugged in, and it already beats the cubic kernel at desk scale.
//!
//! [`multiply_naive`] is the correctness oracle and the recursion base case.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::DenseMatrix;

/// Default side length below which the Strassen recursion switches to the
/// cubic kernel. Chosen by micro-benchmark on the reference machine; the
/// crossover where the blocked path wins is `m >= 4 * cutoff` for
/// power-of-two `m` (for ragged `m` the power-of-two padding can consume
/// the advantage).
pub const DEFAULT_STRASSEN_CUTOFF: usize = 64;

/// Multiplication strategy for the final dense stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Naive,
    BlockedFast,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Naive => write!(f, "naive"),
            Strategy::BlockedFast => write!(f, "blocked_fast"),
        }
    }
}

/// How to execute a `G * M2` product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplyPlan {
    pub strategy: Strategy,
    /// Side length at or below which Strassen recursion uses the cubic kernel.
    pub strassen_cutoff: usize,
    /// The square block side `m` the plan was made for. Informative for
    /// planning/estimates; the blocked multiply derives the actual side from
    /// the `G` it is given.
    pub block_rows: usize,
}

impl MultiplyPlan {
    pub fn naive() -> Self {
        Self {
            strategy: Strategy::Naive,
            strassen_cutoff: DEFAULT_STRASSEN_CUTOFF,
            block_rows: 1,
        }
    }

    pub fn blocked(block_rows: usize) -> Self {
        Self {
            strategy: Strategy::BlockedFast,
            strassen_cutoff: DEFAULT_STRASSEN_CUTOFF,
            block_rows,
        }
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.strassen_cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.strassen_cutoff < 8 {
            return Err(Error::Dimension(format!(
                "strassen_cutoff must be >= 8, got {}",
                self.strassen_cutoff
            )));
        }
        if self.block_rows < 1 {
            return Err(Error::Dimension("block_rows must be >= 1".into()));
        }
        Ok(())
    }
}

/// `c += a * b` for column-major `a (m x n)`, `b (n x p)`, `c (m x p)`.
/// Accumulates over `k` in ascending order for every entry.
fn naive_accum(a: &[f64], b: &[f64], c: &mut [f64], m: usize, n: usize, p: usize) {
    debug_assert_eq!(a.len(), m * n);
    debug_assert_eq!(b.len(), n * p);
    debug_assert_eq!(c.len(), m * p);
    for j in 0..p {
        let bcol = &b[j * n..(j + 1) * n];
        let ccol = &mut c[j * m..(j + 1) * m];
        for (k, &f) in bcol.iter().enumerate() {
            if f != 0.0 {
                let acol = &a[k * m..(k + 1) * m];
                for (ci, &ai) in ccol.iter_mut().zip(acol) {
                    *ci += f * ai;
                }
            }
        }
    }
}

/// Exact cubic product `A * B`.
pub fn multiply_naive(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut c = DenseMatrix::zeros(a.rows(), b.cols());
    naive_accum(a.data(), b.data(), c.data_mut(), a.rows(), a.cols(), b.cols());
    Ok(c)
}

// --- Strassen recursion on square column-major buffers -----------------------
//
// All temporaries live in one workspace arena carved per recursion level, so
// a multiply performs a constant number of heap allocations no matter how
// many block products it runs.

/// f64 slots the recursion needs below size `n`: 15 quadrant-sized buffers
/// per level (8 operand quadrants, 2 operand temps, 1 product temp, 4 output
/// quadrants).
fn arena_len(n: usize, cutoff: usize) -> usize {
    if n <= cutoff {
        0
    } else {
        let h = n / 2;
        15 * h * h + arena_len(h, cutoff)
    }
}

fn copy_quad(dst: &mut [f64], src: &[f64], n: usize, ri: usize, cj: usize) {
    let h = n / 2;
    for j in 0..h {
        let s = (cj * h + j) * n + ri * h;
        dst[j * h..(j + 1) * h].copy_from_slice(&src[s..s + h]);
    }
}

fn place_quad(dst: &mut [f64], n: usize, ri: usize, cj: usize, src: &[f64]) {
    let h = n / 2;
    for j in 0..h {
        let d = (cj * h + j) * n + ri * h;
        dst[d..d + h].copy_from_slice(&src[j * h..(j + 1) * h]);
    }
}

fn add_into(dst: &mut [f64], a: &[f64], b: &[f64]) {
    for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
        *d = x + y;
    }
}

fn sub_into(dst: &mut [f64], a: &[f64], b: &[f64]) {
    for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
        *d = x - y;
    }
}

fn add_assign(dst: &mut [f64], src: &[f64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn sub_assign(dst: &mut [f64], src: &[f64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d -= s;
    }
}

/// Strassen on `n x n` column-major buffers (`n` a power of two), writing
/// `a * b` into `c`. `ws` must hold at least `arena_len(n, cutoff)` slots.
/// `mults` accumulates the algorithmic multiplication count of the cubic
/// base calls.
fn strassen_square(
    a: &[f64],
    b: &[f64],
    c: &mut [f64],
    n: usize,
    cutoff: usize,
    ws: &mut [f64],
    mults: &mut u64,
) {
    if n <= cutoff {
        c.fill(0.0);
        naive_accum(a, b, c, n, n, n);
        *mults += (n as u64).pow(3);
        return;
    }
    let h = n / 2;
    let hh = h * h;
    let (level, rest) = ws.split_at_mut(15 * hh);
    let (a11, level) = level.split_at_mut(hh);
    let (a12, level) = level.split_at_mut(hh);
    let (a21, level) = level.split_at_mut(hh);
    let (a22, level) = level.split_at_mut(hh);
    let (b11, level) = level.split_at_mut(hh);
    let (b12, level) = level.split_at_mut(hh);
    let (b21, level) = level.split_at_mut(hh);
    let (b22, level) = level.split_at_mut(hh);
    let (ta, level) = level.split_at_mut(hh);
    let (tb, level) = level.split_at_mut(hh);
    let (p, level) = level.split_at_mut(hh);
    let (c11, level) = level.split_at_mut(hh);
    let (c12, level) = level.split_at_mut(hh);
    let (c21, c22) = level.split_at_mut(hh);

    copy_quad(a11, a, n, 0, 0);
    copy_quad(a12, a, n, 0, 1);
    copy_quad(a21, a, n, 1, 0);
    copy_quad(a22, a, n, 1, 1);
    copy_quad(b11, b, n, 0, 0);
    copy_quad(b12, b, n, 0, 1);
    copy_quad(b21, b, n, 1, 0);
    copy_quad(b22, b, n, 1, 1);

    // Each product is computed once into `p` and folded into the output
    // quadrants it contributes to:
    //   C11 = P1 + P4 - P5 + P7     C12 = P3 + P5
    //   C21 = P2 + P4               C22 = P1 - P2 + P3 + P6
    add_into(ta, a11, a22);
    add_into(tb, b11, b22);
    strassen_square(ta, tb, p, h, cutoff, rest, mults); // P1
    c11.copy_from_slice(p);
    c22.copy_from_slice(p);

    add_into(ta, a21, a22);
    strassen_square(ta, b11, p, h, cutoff, rest, mults); // P2
    c21.copy_from_slice(p);
    sub_assign(c22, p);

    sub_into(tb, b12, b22);
    strassen_square(a11, tb, p, h, cutoff, rest, mults); // P3
    c12.copy_from_slice(p);
    add_assign(c22, p);

    sub_into(tb, b21, b11);
    strassen_square(a22, tb, p, h, cutoff, rest, mults); // P4
    add_assign(c11, p);
    add_assign(c21, p);

    add_into(ta, a11, a12);
    strassen_square(ta, b22, p, h, cutoff, rest, mults); // P5
    sub_assign(c11, p);
    add_assign(c12, p);

    sub_into(ta, a21, a11);
    add_into(tb, b11, b12);
    strassen_square(ta, tb, p, h, cutoff, rest, mults); // P6
    add_assign(c22, p);

    sub_into(ta, a12, a22);
    add_into(tb, b21, b22);
    strassen_square(ta, tb, p, h, cutoff, rest, mults); // P7
    add_assign(c11, p);

    place_quad(c, n, 0, 0, c11);
    place_quad(c, n, 0, 1, c12);
    place_quad(c, n, 1, 0, c21);
    place_quad(c, n, 1, 1, c22);
}

/// `A * B` for square `A (m x m)` and `B (m x k)` via Strassen recursion.
///
/// `B` is partitioned into `ceil(k/m)` column blocks of width at most `m`;
/// each block product is padded up to the next power of two of `m` and run
/// through the 7-multiplication recursion down to `cutoff`, then the cubic
/// kernel.
pub fn multiply_strassen(a: &DenseMatrix, b: &DenseMatrix, cutoff: usize) -> Result<DenseMatrix> {
    Ok(multiply_strassen_counted(a, b, cutoff)?.0)
}

/// [`multiply_strassen`] plus the algorithmic multiplication count actually
/// executed by the cubic base calls (counting padded blocks as dense).
pub fn multiply_strassen_counted(
    a: &DenseMatrix,
    b: &DenseMatrix,
    cutoff: usize,
) -> Result<(DenseMatrix, u64)> {
    let m = a.rows();
    if a.cols() != m {
        return Err(Error::Dimension(format!(
            "Strassen left factor must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != m {
        return Err(Error::Dimension(format!(
            "cannot multiply {m}x{m} by {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let k = b.cols();
    let pad = m.next_power_of_two();

    let mut a_pad = vec![0.0; pad * pad];
    for j in 0..m {
        a_pad[j * pad..j * pad + m].copy_from_slice(a.col(j));
    }

    let mut c = DenseMatrix::zeros(m, k);
    let mut mults = 0u64;
    let mut b_pad = vec![0.0; pad * pad];
    let mut prod = vec![0.0; pad * pad];
    let mut arena = vec![0.0; arena_len(pad, cutoff)];
    for block_start in (0..k).step_by(m) {
        let width = m.min(k - block_start);
        b_pad.fill(0.0);
        for j in 0..width {
            b_pad[j * pad..j * pad + m].copy_from_slice(b.col(block_start + j));
        }
        strassen_square(&a_pad, &b_pad, &mut prod, pad, cutoff, &mut arena, &mut mults);
        for j in 0..width {
            c.col_mut(block_start + j)
                .copy_from_slice(&prod[j * pad..j * pad + m]);
        }
    }
    Ok((c, mults))
}

/// `G * M2` by the planned strategy.
///
/// The blocked path splits `G` into `r = ceil(n/m)` horizontal `m x m`
/// blocks (the tail block zero-padded, i.e. `n` padded up to `r*m`) and `M2`
/// into matching `m x p` row blocks, multiplies each pair via
/// [`multiply_strassen`], and accumulates the partial sums in block order
/// `j = 1..r`. Block products are independent and may run in parallel; the
/// accumulation order is fixed, so results are reproducible bit for bit.
pub fn multiply_blocked(g: &DenseMatrix, m2: &DenseMatrix, plan: &MultiplyPlan) -> Result<DenseMatrix> {
    plan.validate()?;
    if g.cols() != m2.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            g.rows(),
            g.cols(),
            m2.rows(),
            m2.cols()
        )));
    }
    if plan.strategy == Strategy::Naive {
        return multiply_naive(g, m2);
    }
    let m = g.rows();
    let n = g.cols();
    let p = m2.cols();
    let r = n.div_ceil(m);

    let partials: Vec<DenseMatrix> = (0..r)
        .into_par_iter()
        .map(|jb| {
            let row_start = jb * m;
            let depth = m.min(n - row_start);
            let mut g_block = DenseMatrix::zeros(m, m);
            for j in 0..depth {
                g_block.col_mut(j).copy_from_slice(g.col(row_start + j));
            }
            let mut v_block = DenseMatrix::zeros(m, p);
            for j in 0..p {
                let src = &m2.col(j)[row_start..row_start + depth];
                v_block.col_mut(j)[..depth].copy_from_slice(src);
            }
            multiply_strassen(&g_block, &v_block, plan.strassen_cutoff)
                .expect("block shapes are consistent by construction")
        })
        .collect();

    let mut c = DenseMatrix::zeros(m, p);
    for part in &partials {
        for (ci, pi) in c.data_mut().iter_mut().zip(part.data()) {
            *ci += pi;
        }
    }
    Ok(c)
}

/// Multiplications in the Strassen recursion on a `side x side` square
/// product: `side^3` at or below the cutoff, else seven times the half size.
pub fn strassen_mult_count(side: usize, cutoff: usize) -> u64 {
    if side <= cutoff {
        (side as u64).pow(3)
    } else {
        7 * strassen_mult_count(side / 2, cutoff)
    }
}

/// Analytic multiplication count for a planned `m x n` times `n x p` product.
///
/// The naive strategy executes exactly `m*n*p`; the blocked strategy runs
/// `ceil(n/m) * ceil(p/m)` padded square Strassen products of side
/// `next_power_of_two(m)`. Counted from the recursion tree, not measured.
pub fn flop_estimate(m: usize, n: usize, p: usize, plan: &MultiplyPlan) -> u64 {
    match plan.strategy {
        Strategy::Naive => (m as u64) * (n as u64) * (p as u64),
        Strategy::BlockedFast => {
            let r = n.div_ceil(m) as u64;
            let col_blocks = p.div_ceil(m) as u64;
            r * col_blocks * strassen_mult_count(m.next_power_of_two(), plan.strassen_cutoff)
        }
    }
}
