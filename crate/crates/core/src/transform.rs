//! Construction, sampling, and application of the JL transforms.
//!
//! The headline construction composes four stages: a Rademacher sign flip
//! `D_xi`, the Hadamard transform `H`, a with-replacement row subsampling
//! `R` (together the fast non-optimal stage), and a small dense ±1/sqrt(m)
//! matrix `G` that reaches the optimal output dimension. Neither `H` nor `R`
//! carries a scale in the construction, so this layer owns the normalization:
//! with unnormalized ±1 Hadamard entries the stage scale `1/sqrt(n)` is the
//! unique choice making `R H D_xi` an expected isometry, and `G` carries its
//! own `1/sqrt(m)`.
//!
//! Inputs of non-power-of-two dimension are zero-padded up to `N_pad`;
//! padding does not change norms, so distortion guarantees transfer as-is.
//!
//! Also here: the dense sign-matrix baseline, the sparse-projection FJLT
//! baseline, and dimension planning from `(p, epsilon, eta, N)`.

use rand::Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::hadamard::{fwht_in_place, fwht_trimmed_scratch, HadamardDim, RowSample};
use crate::mat::{DenseMatrix, PointSet};
use crate::matmul::{multiply_blocked, MultiplyPlan};
use crate::rng::{
    fill_signs, stream_rng, STREAM_FJLT_PROJ, STREAM_ROWS, STREAM_SIGN_MATRIX, STREAM_XI,
};

/// Rademacher vector xi in {-1,+1}^N; the diagonal of `D_xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    signs: Vec<i8>,
}

impl SignVector {
    /// Fair ±1 entries from the xi stream of `seed`.
    pub fn sample(len: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, STREAM_XI);
        let mut signs = vec![0i8; len];
        fill_signs(&mut rng, &mut signs);
        Self { signs }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `x[i] *= xi[i]` over the first `x.len()` signs.
    pub fn flip_in_place(&self, x: &mut [f64]) {
        debug_assert!(x.len() <= self.signs.len());
        for (v, &s) in x.iter_mut().zip(&self.signs) {
            if s < 0 {
                *v = -*v;
            }
        }
    }
}

/// Dense matrix with independent fair ±1 entries, applied with scale
/// `1/sqrt(m)`. Houses the final stage `G` of the composed transform and,
/// with `n = N`, the dense baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSignMatrix {
    m: usize,
    n: usize,
    /// column-major m*n entries in {-1,+1}
    signs: Vec<i8>,
    scale: f64,
}

impl DenseSignMatrix {
    /// Samples an `m x n` sign matrix from the sign-matrix stream of `seed`.
    pub fn sample(m: usize, n: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, STREAM_SIGN_MATRIX);
        let mut signs = vec![0i8; m * n];
        fill_signs(&mut rng, &mut signs);
        Self {
            m,
            n,
            signs,
            scale: 1.0 / (m as f64).sqrt(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `scale * (signs . x)`; sign sums accumulate first, the scale is
    /// applied once at the end.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "expected input of length {}, got {}",
                self.n,
                x.len()
            )));
        }
        let mut acc = vec![0.0; self.m];
        for (k, &xk) in x.iter().enumerate() {
            if xk != 0.0 {
                let col = &self.signs[k * self.m..(k + 1) * self.m];
                for (a, &s) in acc.iter_mut().zip(col) {
                    if s > 0 {
                        *a += xk;
                    } else {
                        *a -= xk;
                    }
                }
            }
        }
        for a in &mut acc {
            *a *= self.scale;
        }
        Ok(acc)
    }

    /// Materializes `scale * signs` as a dense f64 matrix for the multiply
    /// engines.
    pub fn to_dense(&self) -> DenseMatrix {
        let data: Vec<f64> = self
            .signs
            .iter()
            .map(|&s| self.scale * f64::from(s))
            .collect();
        DenseMatrix::from_vec(self.m, self.n, data).expect("sign matrix shape is consistent")
    }
}

/// Dimension plan derived from `(p, epsilon, eta, N)` and the calibration
/// constants `c1, c2`:
///
/// * `m = ceil(c1 * eps^-2 * ln(p/eta))`
/// * `n = ceil(c2 * eps^-2 * ln(p/eta) * (ln N)^4)`
///
/// Natural logarithms throughout; any base change is absorbed by the
/// constants. A plan is only constructible when `m <= n <= N_pad`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionPlan {
    /// Cardinality of the point set the guarantee is for.
    pub p: u64,
    pub epsilon: f64,
    pub eta: f64,
    /// Ambient dimension N before padding.
    pub ambient_dim: usize,
    pub c1: f64,
    pub c2: f64,
    /// Output (embedding) dimension.
    pub m: usize,
    /// Intermediate dimension of the subsampled Hadamard stage.
    pub n: usize,
    /// True when the asymptotic `n` formula exceeded `N_pad` and `n` was
    /// capped there (see [`plan_dimensions_capped`]).
    pub n_capped: bool,
}

impl DimensionPlan {
    /// Smallest power of two >= the ambient dimension.
    pub fn n_pad(&self) -> usize {
        HadamardDim::covering(self.ambient_dim).len()
    }
}

fn validate_plan_inputs(p: u64, epsilon: f64, eta: f64, ambient_dim: usize) -> Result<()> {
    if p < 1 {
        return Err(Error::Plan("p must be >= 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Plan(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::Plan(format!("eta must lie in (0,1/2), got {eta}")));
    }
    if ambient_dim < 2 {
        return Err(Error::Plan(format!("ambient dimension must be >= 2, got {ambient_dim}")));
    }
    Ok(())
}

#[inline]
fn c_positive(c: f64) -> bool {
    c > 0.0 && c.is_finite()
}

/// Raw `(m, n)` from the dimension formulas, before any feasibility check.
pub fn formula_dims(p: u64, epsilon: f64, eta: f64, ambient_dim: usize, c1: f64, c2: f64) -> (u64, u64) {
    let log_term = ((p as f64) / eta).ln();
    let base = epsilon.powi(-2) * log_term;
    let m = (c1 * base).ceil() as u64;
    let n = (c2 * base * (ambient_dim as f64).ln().powi(4)).ceil() as u64;
    (m, n)
}

/// Plans `(m, n)` from the formulas, erring (never clamping) when the plan
/// is infeasible: `n > N_pad` or `m > n`.
pub fn plan_dimensions(
    p: u64,
    epsilon: f64,
    eta: f64,
    ambient_dim: usize,
    c1: f64,
    c2: f64,
) -> Result<DimensionPlan> {
    plan_impl(p, epsilon, eta, ambient_dim, c1, c2, false)
}

/// Desk-scale variant of [`plan_dimensions`] that caps `n` at `N_pad`.
///
/// The asymptotic formula `n = c2 * eps^-2 * ln(p/eta) * (ln N)^4` exceeds
/// `N` for every practically representable `N` at unit constants, because the
/// `(ln N)^4` factor dominates until astronomically large dimensions. Capping
/// `n = N_pad` keeps the construction well defined there: the Hadamard stage
/// then samples as many rows as the ambient space has, which only lowers its
/// per-point variance. The plan records the cap in `n_capped`. The infeasible
/// case `m > n` still errors.
pub fn plan_dimensions_capped(
    p: u64,
    epsilon: f64,
    eta: f64,
    ambient_dim: usize,
    c1: f64,
    c2: f64,
) -> Result<DimensionPlan> {
    plan_impl(p, epsilon, eta, ambient_dim, c1, c2, true)
}

fn plan_impl(
    p: u64,
    epsilon: f64,
    eta: f64,
    ambient_dim: usize,
    c1: f64,
    c2: f64,
    cap: bool,
) -> Result<DimensionPlan> {
    validate_plan_inputs(p, epsilon, eta, ambient_dim)?;
    if !c_positive(c1) || !c_positive(c2) {
        return Err(Error::Plan(format!("constants must be positive, got c1={c1}, c2={c2}")));
    }
    let (m_raw, n_raw) = formula_dims(p, epsilon, eta, ambient_dim, c1, c2);
    let n_pad = HadamardDim::covering(ambient_dim).len() as u64;
    let (n, n_capped) = if n_raw > n_pad {
        if !cap {
            return Err(Error::Plan(format!(
                "n = {n_raw} exceeds padded ambient dimension N_pad = {n_pad} (need n <= N_pad)"
            )));
        }
        (n_pad, true)
    } else {
        (n_raw, false)
    };
    if m_raw > n {
        return Err(Error::Plan(format!(
            "m = {m_raw} exceeds n = {n} (need m <= n)"
        )));
    }
    Ok(DimensionPlan {
        p,
        epsilon,
        eta,
        ambient_dim,
        c1,
        c2,
        m: m_raw as usize,
        n: n as usize,
        n_capped,
    })
}

/// The composed transform `G R H D_xi` mapping `R^{N_input} -> R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedTransform {
    n_input: usize,
    dim: HadamardDim,
    xi: SignVector,
    rows: RowSample,
    g: DenseSignMatrix,
    stage_scale: f64,
}

/// Wall-clock time of the three batch pipeline stages.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct BatchTimings {
    pub m1_ns: u64,
    pub m2_ns: u64,
    pub m3_ns: u64,
}

impl BatchTimings {
    pub fn total_ns(&self) -> u64 {
        self.m1_ns + self.m2_ns + self.m3_ns
    }
}

impl ComposedTransform {
    /// Samples `xi`, the row sample, and `G` independently from the seed's
    /// three streams. The same seed reproduces the transform bit for bit.
    pub fn sample(plan: &DimensionPlan, seed: u64) -> Result<Self> {
        Self::from_dims(plan.ambient_dim, plan.m, plan.n, seed)
    }

    /// Lower-level constructor from explicit dimensions.
    pub fn from_dims(n_input: usize, m: usize, n: usize, seed: u64) -> Result<Self> {
        if n_input < 1 || m < 1 || n < 1 {
            return Err(Error::Plan("all dimensions must be >= 1".into()));
        }
        let dim = HadamardDim::covering(n_input);
        let n_pad = dim.len();
        if n > n_pad {
            return Err(Error::Plan(format!(
                "n = {n} exceeds padded ambient dimension N_pad = {n_pad} (need n <= N_pad)"
            )));
        }
        if m > n {
            return Err(Error::Plan(format!("m = {m} exceeds n = {n} (need m <= n)")));
        }
        let xi = SignVector::sample(n_pad, seed);
        let mut row_rng = stream_rng(seed, STREAM_ROWS);
        let indices: Vec<usize> = (0..n).map(|_| row_rng.random_range(0..n_pad)).collect();
        let rows = RowSample::new(indices, dim)?;
        let g = DenseSignMatrix::sample(m, n, seed);
        Ok(Self {
            n_input,
            dim,
            xi,
            rows,
            g,
            stage_scale: 1.0 / (n as f64).sqrt(),
        })
    }

    #[inline]
    pub fn input_dim(&self) -> usize {
        self.n_input
    }

    #[inline]
    pub fn padded_dim(&self) -> usize {
        self.dim.len()
    }

    #[inline]
    pub fn intermediate_dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn output_dim(&self) -> usize {
        self.g.rows()
    }

    #[inline]
    pub fn stage_scale(&self) -> f64 {
        self.stage_scale
    }

    pub fn xi(&self) -> &SignVector {
        &self.xi
    }

    pub fn rows(&self) -> &RowSample {
        &self.rows
    }

    pub fn sign_matrix(&self) -> &DenseSignMatrix {
        &self.g
    }

    /// Single-point path: zero-pad, flip signs, trimmed transform with the
    /// stage scale, then the dense stage.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_input {
            return Err(Error::Dimension(format!(
                "expected input of length {}, got {}",
                self.n_input,
                x.len()
            )));
        }
        let mut padded = vec![0.0; self.dim.len()];
        padded[..x.len()].copy_from_slice(x);
        self.xi.flip_in_place(&mut padded[..self.n_input]);
        let mut mid = vec![0.0; self.rows.len()];
        fwht_trimmed_scratch(&mut padded, &self.rows, &mut mid)?;
        for v in &mut mid {
            *v *= self.stage_scale;
        }
        self.g.apply(&mid)
    }

    /// `M1 = D_xi M_E`, zero-padded to `N_pad` rows. `O(p N)`.
    pub fn stage_m1(&self, points: &PointSet) -> Result<DenseMatrix> {
        if points.rows() != self.n_input {
            return Err(Error::Dimension(format!(
                "point set has {} rows, transform expects {}",
                points.rows(),
                self.n_input
            )));
        }
        let n_pad = self.dim.len();
        let mut m1 = DenseMatrix::zeros(n_pad, points.cols());
        for j in 0..points.cols() {
            let dst = m1.col_mut(j);
            dst[..self.n_input].copy_from_slice(points.col(j));
            self.xi.flip_in_place(&mut dst[..self.n_input]);
        }
        Ok(m1)
    }

    /// `M2 = R H M1` column by column via the trimmed transform, including
    /// the stage scale. Consumes `M1` as scratch. `O(p N log n)`.
    pub fn stage_m2(&self, mut m1: DenseMatrix) -> Result<DenseMatrix> {
        let n_pad = self.dim.len();
        if m1.rows() != n_pad {
            return Err(Error::Dimension(format!(
                "M1 has {} rows, expected N_pad = {n_pad}",
                m1.rows()
            )));
        }
        let n = self.rows.len();
        let p = m1.cols();
        let mut m2 = DenseMatrix::zeros(n, p);
        let scale = self.stage_scale;
        m2.data_mut()
            .par_chunks_mut(n)
            .zip(m1.data_mut().par_chunks_mut(n_pad))
            .for_each(|(out_col, scratch_col)| {
                fwht_trimmed_scratch(scratch_col, &self.rows, out_col)
                    .expect("column shapes are consistent by construction");
                for v in out_col.iter_mut() {
                    *v *= scale;
                }
            });
        Ok(m2)
    }

    /// `M3 = G M2` by the planned strategy.
    pub fn stage_m3(&self, m2: &DenseMatrix, plan: &MultiplyPlan) -> Result<DenseMatrix> {
        multiply_blocked(&self.g.to_dense(), m2, plan)
    }

    /// `M3` by applying the dense stage to each column individually (the
    /// per-column baseline the blocked path is measured against).
    pub fn stage_m3_per_column(&self, m2: &DenseMatrix) -> Result<DenseMatrix> {
        if m2.rows() != self.rows.len() {
            return Err(Error::Dimension(format!(
                "M2 has {} rows, expected n = {}",
                m2.rows(),
                self.rows.len()
            )));
        }
        let mut out = DenseMatrix::zeros(self.g.rows(), m2.cols());
        for j in 0..m2.cols() {
            let y = self.g.apply(m2.col(j))?;
            out.col_mut(j).copy_from_slice(&y);
        }
        Ok(out)
    }

    /// Batch path: the three-step pipeline over all columns of `points`.
    pub fn apply_batch(&self, points: &PointSet, plan: &MultiplyPlan) -> Result<DenseMatrix> {
        Ok(self.apply_batch_timed(points, plan)?.0)
    }

    /// [`Self::apply_batch`] with per-stage wall times.
    pub fn apply_batch_timed(
        &self,
        points: &PointSet,
        plan: &MultiplyPlan,
    ) -> Result<(DenseMatrix, BatchTimings)> {
        let t0 = Instant::now();
        let m1 = self.stage_m1(points)?;
        let t1 = Instant::now();
        let m2 = self.stage_m2(m1)?;
        let t2 = Instant::now();
        let m3 = self.stage_m3(&m2, plan)?;
        let t3 = Instant::now();
        Ok((
            m3,
            BatchTimings {
                m1_ns: (t1 - t0).as_nanos() as u64,
                m2_ns: (t2 - t1).as_nanos() as u64,
                m3_ns: (t3 - t2).as_nanos() as u64,
            },
        ))
    }

    /// Embeds every column through the single-point path.
    pub fn apply_per_point(&self, points: &PointSet) -> Result<DenseMatrix> {
        if points.rows() != self.n_input {
            return Err(Error::Dimension(format!(
                "point set has {} rows, transform expects {}",
                points.rows(),
                self.n_input
            )));
        }
        let mut out = DenseMatrix::zeros(self.output_dim(), points.cols());
        for j in 0..points.cols() {
            let y = self.apply(points.col(j))?;
            out.col_mut(j).copy_from_slice(&y);
        }
        Ok(out)
    }
}

/// Dense ±1 baseline of the same output dimension: one `m x N` sign matrix,
/// no Hadamard stage, applied by a single dense multiply.
pub fn sample_dense_baseline(m: usize, ambient_dim: usize, seed: u64) -> DenseSignMatrix {
    DenseSignMatrix::sample(m, ambient_dim, seed)
}

/// The fast non-optimal stage alone: `(1/sqrt(n)) R H D_xi` mapping
/// `R^N -> R^n`. This is the sign-randomized subsampled Hadamard embedding;
/// [`HadamardStage::to_dense_unsigned`] exposes the unsigned `(1/sqrt(n)) R H`
/// part, the RIP subject whose column signs the theory then randomizes.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardStage {
    n_input: usize,
    dim: HadamardDim,
    xi: SignVector,
    rows: RowSample,
    scale: f64,
}

impl HadamardStage {
    /// Samples `n_rows` row indices with replacement and a fresh sign vector
    /// from the usual streams of `seed`.
    pub fn sample(n_input: usize, n_rows: usize, seed: u64) -> Result<Self> {
        if n_input < 1 || n_rows < 1 {
            return Err(Error::Plan("dimensions must be >= 1".into()));
        }
        let dim = HadamardDim::covering(n_input);
        let xi = SignVector::sample(dim.len(), seed);
        let mut row_rng = stream_rng(seed, STREAM_ROWS);
        let indices: Vec<usize> = (0..n_rows).map(|_| row_rng.random_range(0..dim.len())).collect();
        let rows = RowSample::new(indices, dim)?;
        Ok(Self {
            n_input,
            dim,
            xi,
            rows,
            scale: 1.0 / (n_rows as f64).sqrt(),
        })
    }

    pub fn rows(&self) -> &RowSample {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_input {
            return Err(Error::Dimension(format!(
                "expected input of length {}, got {}",
                self.n_input,
                x.len()
            )));
        }
        let mut padded = vec![0.0; self.dim.len()];
        padded[..x.len()].copy_from_slice(x);
        self.xi.flip_in_place(&mut padded[..self.n_input]);
        let mut out = vec![0.0; self.rows.len()];
        fwht_trimmed_scratch(&mut padded, &self.rows, &mut out)?;
        for v in &mut out {
            *v *= self.scale;
        }
        Ok(out)
    }

    /// Dense `(1/sqrt(n)) R H` restricted to the first `n_input` columns,
    /// built entry by entry from the Sylvester sign rule.
    pub fn to_dense_unsigned(&self) -> DenseMatrix {
        let n_rows = self.rows.len();
        let mut phi = DenseMatrix::zeros(n_rows, self.n_input);
        for (i, &r) in self.rows.indices().iter().enumerate() {
            for c in 0..self.n_input {
                let sign = if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                phi.set(i, c, self.scale * sign);
            }
        }
        phi
    }
}

impl Embedding for HadamardStage {
    fn input_dim(&self) -> usize {
        self.n_input
    }

    fn output_dim(&self) -> usize {
        self.rows.len()
    }

    fn embed(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).expect("input length checked by caller")
    }
}

/// Batch routing: the per-point path wins while `m <= sqrt(N_pad)` (the
/// desk-scale proxy for the regime split), the blocked batch path after.
/// Boundary inclusive: `m^2 == N_pad` routes per-point. Compared in integer
/// arithmetic as `m^2 <= N_pad`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchRoute {
    PerPoint,
    BlockedFast,
}

pub fn route_batch(plan: &DimensionPlan) -> BatchRoute {
    let m = plan.m as u128;
    if m * m <= plan.n_pad() as u128 {
        BatchRoute::PerPoint
    } else {
        BatchRoute::BlockedFast
    }
}

/// The Ailon-Chazelle baseline `P H D_xi` with a sparse Gaussian projection
/// `P` of density `q = min(c_q (ln p)^2 / N, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FjltTransform {
    n_input: usize,
    dim: HadamardDim,
    m: usize,
    q: f64,
    c_q: f64,
    p_points: u64,
    xi: SignVector,
    /// (row, col, value) of present entries, column-major order.
    entries: Vec<(u32, u32, f64)>,
}

impl FjltTransform {
    /// Samples the sparse projection and sign vector. Each present entry is
    /// Gaussian with variance `1/q`; the applied map is
    /// `P H D_xi / sqrt(N_pad * m)`, the scale that makes the embedding an
    /// expected isometry (`H/sqrt(N_pad)` is orthonormal and the rows of `P`
    /// carry expected squared norm `m` in aggregate).
    pub fn sample(
        p_points: u64,
        epsilon: f64,
        ambient_dim: usize,
        m: usize,
        c_q: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Plan(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        Self::from_dims(p_points, ambient_dim, m, c_q, seed)
    }

    /// Constructor without the (construction-irrelevant) epsilon; used when
    /// re-instantiating from a serialized record.
    pub fn from_dims(
        p_points: u64,
        ambient_dim: usize,
        m: usize,
        c_q: f64,
        seed: u64,
    ) -> Result<Self> {
        if p_points < 1 {
            return Err(Error::Plan("p must be >= 1".into()));
        }
        if !c_positive(c_q) {
            return Err(Error::Plan(format!("c_q must be positive, got {c_q}")));
        }
        let dim = HadamardDim::covering(ambient_dim);
        let n_pad = dim.len();
        if m < 1 || m > n_pad {
            return Err(Error::Plan(format!(
                "m = {m} must satisfy 1 <= m <= N_pad = {n_pad}"
            )));
        }
        let q = fjlt_density(p_points, ambient_dim, c_q);
        let xi = SignVector::sample(n_pad, seed);
        let mut entries = Vec::new();
        if q > 0.0 {
            let std_dev = (1.0 / q).sqrt();
            let gauss = Normal::new(0.0, std_dev).expect("finite std dev");
            let mut rng = stream_rng(seed, STREAM_FJLT_PROJ);
            for k in 0..n_pad {
                for j in 0..m {
                    if rng.random_bool(q) {
                        let v: f64 = rng.sample(gauss);
                        entries.push((j as u32, k as u32, v));
                    }
                }
            }
        }
        Ok(Self {
            n_input: ambient_dim,
            dim,
            m,
            q,
            c_q,
            p_points,
            xi,
            entries,
        })
    }

    #[inline]
    pub fn input_dim(&self) -> usize {
        self.n_input
    }

    #[inline]
    pub fn output_dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn density(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn density_constant(&self) -> f64 {
        self.c_q
    }

    #[inline]
    pub fn planned_points(&self) -> u64 {
        self.p_points
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_input {
            return Err(Error::Dimension(format!(
                "expected input of length {}, got {}",
                self.n_input,
                x.len()
            )));
        }
        let n_pad = self.dim.len();
        let mut w = vec![0.0; n_pad];
        w[..x.len()].copy_from_slice(x);
        self.xi.flip_in_place(&mut w[..self.n_input]);
        fwht_in_place(&mut w)?;
        let mut y = vec![0.0; self.m];
        for &(j, k, v) in &self.entries {
            y[j as usize] += v * w[k as usize];
        }
        let scale = 1.0 / ((n_pad as f64) * (self.m as f64)).sqrt();
        for v in &mut y {
            *v *= scale;
        }
        Ok(y)
    }
}

/// `q = min(c_q (ln p)^2 / N, 1)`. Degenerates to 0 (an empty projection)
/// at `p = 1`.
pub fn fjlt_density(p_points: u64, ambient_dim: usize, c_q: f64) -> f64 {
    let lp = (p_points as f64).ln();
    (c_q * lp * lp / ambient_dim as f64).min(1.0)
}

/// A linear map usable by the verification suite: anything that embeds a
/// point and can state its dimensions.
pub trait Embedding: Sync {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    /// Embeds one point; `x.len()` must equal `input_dim()`.
    fn embed(&self, x: &[f64]) -> Vec<f64>;

    /// Embeds every column. The default loops [`Embedding::embed`];
    /// implementations with a faster batch pipeline override it.
    fn embed_batch(&self, points: &PointSet) -> Result<DenseMatrix> {
        if points.rows() != self.input_dim() {
            return Err(Error::Dimension(format!(
                "point set has {} rows, embedding expects {}",
                points.rows(),
                self.input_dim()
            )));
        }
        let mut out = DenseMatrix::zeros(self.output_dim(), points.cols());
        for j in 0..points.cols() {
            out.col_mut(j).copy_from_slice(&self.embed(points.col(j)));
        }
        Ok(out)
    }
}

impl Embedding for ComposedTransform {
    fn input_dim(&self) -> usize {
        self.n_input
    }

    fn output_dim(&self) -> usize {
        self.g.rows()
    }

    fn embed(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).expect("input length checked by caller")
    }

    /// Batch pipeline with the cubic final stage; callers wanting the
    /// blocked strategy use [`ComposedTransform::apply_batch`] directly.
    fn embed_batch(&self, points: &PointSet) -> Result<DenseMatrix> {
        self.apply_batch(points, &MultiplyPlan::naive())
    }
}

impl Embedding for DenseSignMatrix {
    fn input_dim(&self) -> usize {
        self.n
    }

    fn output_dim(&self) -> usize {
        self.m
    }

    fn embed(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).expect("input length checked by caller")
    }
}

impl Embedding for FjltTransform {
    fn input_dim(&self) -> usize {
        self.n_input
    }

    fn output_dim(&self) -> usize {
        self.m
    }

    fn embed(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).expect("input length checked by caller")
    }
}

/// The identity map; useful as a null verification subject.
#[derive(Debug, Clone, Copy)]
pub struct IdentityEmbedding {
    pub dim: usize,
}

impl Embedding for IdentityEmbedding {
    fn input_dim(&self) -> usize {
        self.dim
    }

    fn output_dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
}
