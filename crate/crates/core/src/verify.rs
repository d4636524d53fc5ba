//! Statistical and exact verification of the embedding guarantees.
//!
//! Everything here treats the transform under test as a black-box
//! [`Embedding`]: distortion reports over a fixed point set, empirical
//! failure rates over fresh transform samples, brute-force restricted
//! isometry constants at toy scale, the sign-randomization implication
//! (RIP matrix -> JL embedding), the two-stage composition argument, and
//! the sketched approximate matrix product.
//!
//! Trials are independent and parallelizable; each derives its RNG from
//! `(seed, trial index)`, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{norm_sq, DenseMatrix, PointSet};
use crate::matmul::multiply_naive;
use crate::rng::derive_seed;
use crate::transform::{
    ComposedTransform, DenseSignMatrix, DimensionPlan, Embedding, HadamardStage, SignVector,
};

// --- distortion ---------------------------------------------------------------

/// Per-point squared-norm ratios of an embedding over a point set.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    /// `|Ax|^2 / |x|^2` per nonzero column, in column order.
    pub per_point_ratio: Vec<f64>,
    /// `max |ratio - 1|`.
    pub max_distortion: f64,
    /// Mean of `|ratio - 1|`.
    pub mean_distortion: f64,
    pub epsilon_target: f64,
    /// `max_distortion <= epsilon_target`.
    pub pass: bool,
    /// Zero columns carry no distortion information and are skipped.
    pub zero_columns_skipped: usize,
}

/// Measures `|Ax|^2 / |x|^2` for every column of `points`.
///
/// Errors when every column is zero; zero columns are otherwise skipped and
/// counted.
pub fn distortion_report<A: Embedding + ?Sized>(
    a: &A,
    points: &PointSet,
    epsilon: f64,
) -> Result<DistortionReport> {
    let embedded = a.embed_batch(points)?;
    let mut ratios = Vec::with_capacity(points.cols());
    let mut skipped = 0usize;
    for j in 0..points.cols() {
        let denom = norm_sq(points.col(j));
        if denom == 0.0 {
            skipped += 1;
            continue;
        }
        ratios.push(norm_sq(embedded.col(j)) / denom);
    }
    if ratios.is_empty() {
        return Err(Error::EmptyInput(
            "point set has no nonzero columns to measure".into(),
        ));
    }
    let max_distortion = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    let mean_distortion =
        ratios.iter().map(|r| (r - 1.0).abs()).sum::<f64>() / ratios.len() as f64;
    Ok(DistortionReport {
        max_distortion,
        mean_distortion,
        epsilon_target: epsilon,
        pass: max_distortion <= epsilon,
        zero_columns_skipped: skipped,
        per_point_ratio: ratios,
    })
}

/// Fraction of freshly sampled embeddings whose distortion report fails at
/// `epsilon` on the fixed point set. Deterministic given `seed`; trial `t`
/// samples from `derive_seed(seed, t)`.
pub fn failure_rate_of<E, F>(
    sampler: F,
    epsilon: f64,
    points: &PointSet,
    trials: u64,
    seed: u64,
) -> Result<f64>
where
    E: Embedding,
    F: Fn(u64) -> Result<E> + Sync,
{
    if trials < 1 {
        return Err(Error::Dimension("trials must be >= 1".into()));
    }
    let failures: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let embedding = sampler(derive_seed(seed, t))?;
            Ok(!distortion_report(&embedding, points, epsilon)?.pass)
        })
        .collect();
    let failures = failures?;
    Ok(failures.iter().filter(|&&f| f).count() as f64 / trials as f64)
}

/// [`failure_rate_of`] for the composed transform of `plan` at the plan's
/// epsilon.
pub fn failure_rate(
    plan: &DimensionPlan,
    points: &PointSet,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    failure_rate_of(
        |s| ComposedTransform::sample(plan, s),
        plan.epsilon,
        points,
        trials,
        seed,
    )
}

// --- restricted isometry ------------------------------------------------------

/// Brute-force restricted isometry constant over all size-k supports.
#[derive(Debug, Clone, Serialize)]
pub struct RipReport {
    pub k: usize,
    /// `max_S |Phi_S^T Phi_S - I|_2` over all size-k supports S.
    pub delta_hat: f64,
    pub supports_checked: u64,
}

/// Enumeration guard for [`rip_bruteforce`].
pub const RIP_SUPPORT_GUARD: u64 = 1_000_000;

/// Exhaustively measures the `(k, delta)`-RIP constant of `phi` by solving
/// the `k x k` symmetric eigenproblem of every column-support Gram matrix.
///
/// Guarded: errors when `C(N, k)` exceeds [`RIP_SUPPORT_GUARD`].
pub fn rip_bruteforce(phi: &DenseMatrix, k: usize) -> Result<RipReport> {
    let n = phi.cols();
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "sparsity k={k} must satisfy 1 <= k <= {n}"
        )));
    }
    let supports = binomial_guarded(n, k, RIP_SUPPORT_GUARD).ok_or_else(|| {
        Error::Guard(format!(
            "C({n},{k}) exceeds the enumeration guard {RIP_SUPPORT_GUARD}"
        ))
    })?;
    let mut delta_hat = 0.0f64;
    let mut gram = vec![0.0; k * k];
    for_each_combination(n, k, |support| {
        for (a, &ca) in support.iter().enumerate() {
            for (b, &cb) in support.iter().enumerate().skip(a) {
                let dot: f64 = phi
                    .col(ca)
                    .iter()
                    .zip(phi.col(cb))
                    .map(|(x, y)| x * y)
                    .sum();
                gram[b * k + a] = dot;
                gram[a * k + b] = dot;
            }
        }
        for lambda in sym_eigenvalues(&mut gram, k) {
            delta_hat = delta_hat.max((lambda - 1.0).abs());
        }
    });
    Ok(RipReport {
        k,
        delta_hat,
        supports_checked: supports,
    })
}

/// `C(n, k)` unless it exceeds `cap`.
pub fn binomial_guarded(n: usize, k: usize, cap: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Visits every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance the rightmost index that still has room
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + n - k {
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return;
            }
        }
    }
}

/// Eigenvalues of a symmetric `k x k` matrix by cyclic Jacobi rotations.
/// The buffer is destroyed.
fn sym_eigenvalues(a: &mut [f64], k: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), k * k);
    if k == 1 {
        return vec![a[0]];
    }
    let fro: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-15 * fro.max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for q in 1..k {
            for p in 0..q {
                off += a[q * k + p].abs();
            }
        }
        if off <= tol {
            break;
        }
        for q in 1..k {
            for p in 0..q {
                let apq = a[q * k + p];
                if apq.abs() <= tol / (k * k) as f64 {
                    continue;
                }
                let theta = (a[q * k + q] - a[p * k + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..k {
                    let aip = a[p * k + i];
                    let aiq = a[q * k + i];
                    a[p * k + i] = c * aip - s * aiq;
                    a[q * k + i] = s * aip + c * aiq;
                }
                for i in 0..k {
                    let api = a[i * k + p];
                    let aqi = a[i * k + q];
                    a[i * k + p] = c * api - s * aqi;
                    a[i * k + q] = s * api + c * aqi;
                }
            }
        }
    }
    (0..k).map(|i| a[i * k + i]).collect()
}

// --- RIP -> JL implication ----------------------------------------------------

/// Outcome of checking the sign-randomization implication: a `(k, delta)`-RIP
/// matrix with `delta <= eps/4` and `k >= 40 ln(4p/eta)` yields a JL
/// embedding after column-sign randomization.
#[derive(Debug, Clone, Serialize)]
pub struct RipToJlReport {
    pub delta_hat: f64,
    pub delta_required: f64,
    pub k: usize,
    pub k_required: f64,
    pub hypothesis_met: bool,
    /// Empirical failure rate of `Phi D_xi` over fresh sign vectors; only
    /// measured when the hypothesis holds (no verdict otherwise).
    pub failure_rate: Option<f64>,
    pub pass: Option<bool>,
    pub trials: u64,
    pub supports_checked: u64,
}

/// Measures `delta_hat` by brute force, then (only when the implication's
/// hypothesis holds) the empirical failure rate of `Phi D_xi` at `epsilon`
/// over fresh Rademacher sign vectors.
pub fn riptojl_check(
    phi: &DenseMatrix,
    k: usize,
    points: &PointSet,
    epsilon: f64,
    eta: f64,
    trials: u64,
    seed: u64,
) -> Result<RipToJlReport> {
    if points.rows() != phi.cols() {
        return Err(Error::Dimension(format!(
            "point set has {} rows, Phi has {} columns",
            points.rows(),
            phi.cols()
        )));
    }
    let rip = rip_bruteforce(phi, k)?;
    let p = points.cols() as f64;
    let delta_required = epsilon / 4.0;
    let k_required = 40.0 * (4.0 * p / eta).ln();
    let hypothesis_met = rip.delta_hat <= delta_required && (k as f64) >= k_required;
    let (failure_rate, pass) = if hypothesis_met {
        let n = phi.cols();
        let fails: Result<Vec<bool>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let xi = SignVector::sample(n, derive_seed(seed, t));
                let mut flipped = points.clone();
                for j in 0..flipped.cols() {
                    xi.flip_in_place(flipped.col_mut(j));
                }
                let embedded = multiply_naive(phi, &flipped)?;
                let mut worst = 0.0f64;
                for j in 0..points.cols() {
                    let denom = norm_sq(points.col(j));
                    if denom > 0.0 {
                        let ratio = norm_sq(embedded.col(j)) / denom;
                        worst = worst.max((ratio - 1.0).abs());
                    }
                }
                Ok(worst > epsilon)
            })
            .collect();
        let fails = fails?;
        let rate = fails.iter().filter(|&&f| f).count() as f64 / trials.max(1) as f64;
        (Some(rate), Some(rate <= eta))
    } else {
        (None, None)
    };
    Ok(RipToJlReport {
        delta_hat: rip.delta_hat,
        delta_required,
        k,
        k_required,
        hypothesis_met,
        failure_rate,
        pass,
        trials,
        supports_checked: rip.supports_checked,
    })
}

// --- composition --------------------------------------------------------------

/// Dimensions and targets for the two-stage composition check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StagePlans {
    /// Ambient dimension N of the point set.
    pub ambient_dim: usize,
    /// Intermediate dimension of the fast stage B.
    pub mid_dim: usize,
    /// Output dimension of the dense stage A.
    pub out_dim: usize,
    /// Composed target distortion; each stage is checked at epsilon/3.
    pub epsilon: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositionReport {
    pub trials: u64,
    /// Trials where stage B exceeded epsilon/3 on some point.
    pub stage_b_failures: u64,
    /// Trials where stage A exceeded epsilon/3 on some embedded point.
    pub stage_a_failures: u64,
    /// Points preserved by both stages whose composed ratio still fell
    /// outside `[(1-eps/3)^2, (1+eps/3)^2]`; zero by interval arithmetic.
    pub containment_violations: u64,
    pub composed_failures: u64,
    pub composed_failure_rate: f64,
    /// `composed_failure_rate <= eta`.
    pub pass: bool,
}

/// Per-point composition data for one stage pair on one point set.
fn composition_trial<A, B>(
    a: &A,
    b: &B,
    points: &PointSet,
    epsilon: f64,
) -> Result<(bool, bool, u64, bool)>
where
    A: Embedding + ?Sized,
    B: Embedding + ?Sized,
{
    let eps3 = epsilon / 3.0;
    let lo = (1.0 - eps3) * (1.0 - eps3);
    let hi = (1.0 + eps3) * (1.0 + eps3);
    let mid = b.embed_batch(points)?;
    let out = a.embed_batch(&mid)?;
    let mut b_fail = false;
    let mut a_fail = false;
    let mut violations = 0u64;
    let mut composed_fail = false;
    for j in 0..points.cols() {
        let x_sq = norm_sq(points.col(j));
        if x_sq == 0.0 {
            continue;
        }
        let mid_sq = norm_sq(mid.col(j));
        let out_sq = norm_sq(out.col(j));
        let ratio_b = mid_sq / x_sq;
        let composed = out_sq / x_sq;
        let b_ok = (ratio_b - 1.0).abs() <= eps3;
        let a_ok = if mid_sq > 0.0 {
            ((out_sq / mid_sq) - 1.0).abs() <= eps3
        } else {
            false
        };
        b_fail |= !b_ok;
        a_fail |= !a_ok;
        if b_ok && a_ok {
            // exact in real arithmetic; the slack absorbs float rounding
            let slack = 1e-12 * hi;
            if composed < lo - slack || composed > hi + slack {
                violations += 1;
            }
        }
        composed_fail |= (composed - 1.0).abs() > epsilon;
    }
    Ok((a_fail, b_fail, violations, composed_fail))
}

/// Samples independent stage transforms per trial — `A` dense, `B` the
/// subsampled-Hadamard stage — and checks the composition argument: points
/// preserved by both stages at `epsilon/3` land in the squared interval, and
/// the composed embedding fails at `epsilon` in at most an `eta` fraction of
/// trials.
pub fn composition_check(
    plans: &StagePlans,
    points: &PointSet,
    trials: u64,
    seed: u64,
) -> Result<CompositionReport> {
    if trials < 1 {
        return Err(Error::Dimension("trials must be >= 1".into()));
    }
    if points.rows() != plans.ambient_dim {
        return Err(Error::Dimension(format!(
            "point set has {} rows, plans expect {}",
            points.rows(),
            plans.ambient_dim
        )));
    }
    let results: Result<Vec<(bool, bool, u64, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, t);
            let b = HadamardStage::sample(plans.ambient_dim, plans.mid_dim, derive_seed(trial_seed, 0))?;
            let a = DenseSignMatrix::sample(plans.out_dim, plans.mid_dim, derive_seed(trial_seed, 1));
            composition_trial(&a, &b, points, plans.epsilon)
        })
        .collect();
    let results = results?;
    let stage_a_failures = results.iter().filter(|r| r.0).count() as u64;
    let stage_b_failures = results.iter().filter(|r| r.1).count() as u64;
    let containment_violations = results.iter().map(|r| r.2).sum();
    let composed_failures = results.iter().filter(|r| r.3).count() as u64;
    let rate = composed_failures as f64 / trials as f64;
    Ok(CompositionReport {
        trials,
        stage_b_failures,
        stage_a_failures,
        containment_violations,
        composed_failures,
        composed_failure_rate: rate,
        pass: rate <= plans.eta,
    })
}

// --- approximate matrix multiplication ------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ApproxMatmulStats {
    /// `|AB - A S^T S B|_F / (|A|_F |B|_F)`; zero when either factor is zero.
    pub frobenius_error_ratio: f64,
    pub epsilon: f64,
    pub within_epsilon: bool,
    pub sketch_dim: usize,
}

/// Sketched product: embeds the rows of `A` and the columns of `B` through
/// `s` and multiplies the small factors, returning the approximation and its
/// normalized Frobenius error against the exact product.
pub fn approx_matmul<S: Embedding + ?Sized>(
    a: &DenseMatrix,
    b: &DenseMatrix,
    s: &S,
    epsilon: f64,
) -> Result<(DenseMatrix, ApproxMatmulStats)> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if s.input_dim() != a.cols() {
        return Err(Error::Dimension(format!(
            "sketch embeds dimension {}, matrices share dimension {}",
            s.input_dim(),
            a.cols()
        )));
    }
    let a_hat = s.embed_batch(&a.transpose())?.transpose(); // q x m
    let b_hat = s.embed_batch(b)?; // m x p
    let product = multiply_naive(&a_hat, &b_hat)?;
    let exact = multiply_naive(a, b)?;
    let denom = a.frobenius_norm() * b.frobenius_norm();
    let ratio = if denom == 0.0 {
        0.0
    } else {
        exact.frobenius_distance(&product)? / denom
    };
    let stats = ApproxMatmulStats {
        frobenius_error_ratio: ratio,
        epsilon,
        within_epsilon: ratio <= epsilon,
        sketch_dim: s.output_dim(),
    };
    Ok((product, stats))
}

// --- Clopper-Pearson binomial confidence bounds ---------------------------------

/// One-sided upper Clopper-Pearson bound for `k` failures in `n` trials at
/// confidence `conf` (e.g. 0.95).
pub fn clopper_pearson_upper(k: u64, n: u64, conf: f64) -> f64 {
    assert!(n >= 1 && k <= n);
    if k >= n {
        return 1.0;
    }
    beta_quantile((k + 1) as f64, (n - k) as f64, conf)
}

/// One-sided lower Clopper-Pearson bound.
pub fn clopper_pearson_lower(k: u64, n: u64, conf: f64) -> f64 {
    assert!(n >= 1 && k <= n);
    if k == 0 {
        return 0.0;
    }
    beta_quantile(k as f64, (n - k + 1) as f64, 1.0 - conf)
}

/// Lanczos log-gamma (g = 7, 9 coefficients).
#[allow(clippy::excessive_precision)]
fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEF.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the regularized incomplete beta (Lentz's method).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-16;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Inverse of `I_x(a, b)` in `x` by bisection.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if incomplete_beta(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
