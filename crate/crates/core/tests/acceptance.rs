//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them; `--test-threads=1`
//! keeps the timing measurements clean).
//!
//! The guarantees are property-based with measured-scaling supplements;
//! every tolerance is pinned here, in code.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fastjl_core::calibrate::{calibrate, CalibrationConfig};
use fastjl_core::hadamard::{
    cost_bound, fwht_full, fwht_op_count, fwht_trimmed, HadamardDim, RowSample,
};
use fastjl_core::mat::{gaussian_matrix, norm_sq, DenseMatrix};
use fastjl_core::matmul::{
    flop_estimate, multiply_blocked, multiply_naive, MultiplyPlan, DEFAULT_STRASSEN_CUTOFF,
};
use fastjl_core::rng::derive_seed;
use fastjl_core::transform::{
    plan_dimensions_capped, route_batch, sample_dense_baseline, BatchRoute, ComposedTransform,
    FjltTransform, HadamardStage,
};
use fastjl_core::verify::{
    approx_matmul, clopper_pearson_upper, composition_check, rip_bruteforce, riptojl_check,
    StagePlans,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1 — Kernel exactness: trimmed output equals full-transform row extraction
/// on 1,000 random (x, rows) cases per dimension — exact for integer inputs,
/// within 1e-12 relative for floats. Budget: under a minute.
#[test]
fn c01_kernel_exactness() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC1);
    for log2 in [4u32, 10, 16] {
        let dim = HadamardDim::from_log2(log2);
        let n = dim.len();
        for case in 0..1000 {
            let integer_case = case % 2 == 0;
            let x: Vec<f64> = if integer_case {
                (0..n).map(|_| rng.random_range(-1000..=1000) as f64).collect()
            } else {
                (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
            };
            let k = rng.random_range(1..=64usize);
            let mut rows: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
            if case % 3 == 0 {
                rows.push(rows[0]); // guarantee a duplicate
            }
            let sample = RowSample::new(rows.clone(), dim).unwrap();
            let full = fwht_full(&x).unwrap();
            let trimmed = fwht_trimmed(&x, &sample).unwrap();
            for (slot, &r) in rows.iter().enumerate() {
                if integer_case {
                    assert_eq!(
                        trimmed[slot], full[r],
                        "integer case must be exact (N={n}, row {r})"
                    );
                } else {
                    let tol = 1e-12 * full[r].abs().max(1.0);
                    assert!(
                        (trimmed[slot] - full[r]).abs() <= tol,
                        "float case out of tolerance (N={n}, row {r})"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "01 kernel-exactness",
        elapsed < Duration::from_secs(60),
        &format!("3000 cases across N in {{2^4, 2^10, 2^16}} in {elapsed:.2?}"),
    );
}

/// Criterion 2 — Trimmed cost bound: instrumented op count stays within
/// C * N * (log2(distinct rows) + 1) for the documented C, across N up to
/// 2^20 including adversarial row patterns.
#[test]
fn c02_trimmed_cost_bound() {
    let mut rng = StdRng::seed_from_u64(0xC2);
    let mut checked = 0usize;
    let mut worst_ratio = 0.0f64;
    for log2 in [4u32, 8, 12, 16, 20] {
        let dim = HadamardDim::from_log2(log2);
        let n = dim.len();
        let mut cases: Vec<Vec<usize>> = vec![
            vec![0],
            vec![n - 1],
            vec![0, n / 2],
            (0..n.min(4096)).collect(),
        ];
        for d in [2usize, 16, 256, 2048] {
            if d <= n {
                // evenly spread rows touch the maximum number of branches
                cases.push((0..d).map(|j| j * (n / d)).collect());
            }
        }
        for k in [5usize, 64, 1000] {
            if k <= n {
                cases.push((0..k).map(|_| rng.random_range(0..n)).collect());
            }
        }
        if log2 <= 12 {
            cases.push((0..n).collect()); // the full butterfly
        }
        for idx in cases {
            let rows = RowSample::new(idx, dim).unwrap();
            let count = fwht_op_count(dim, &rows).unwrap() as f64;
            let bound = cost_bound(dim, rows.distinct());
            assert!(
                count <= bound,
                "count {count} > bound {bound} at N={n}, distinct={}",
                rows.distinct()
            );
            worst_ratio = worst_ratio.max(count / bound);
            checked += 1;
        }
    }
    report(
        "02 trimmed-cost-bound",
        true,
        &format!("{checked} configurations, worst count/bound = {worst_ratio:.3}"),
    );
}

/// Criterion 3 — Fast-MM oracle equivalence: blocked multiply matches the cubic oracle
/// within 1e-9 relative Frobenius error on 200 random shapes. Budget: five
/// minutes.
#[test]
fn c03_fast_mm_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC3);
    let mut worst = 0.0f64;
    for case in 0..200u64 {
        let m = 1usize << rng.random_range(0..=8u32); // up to 256
        let m = rng.random_range(m / 2 + 1..=m);
        let n = rng.random_range(1..=256usize);
        let p = 1usize << rng.random_range(0..=12u32); // up to 4096
        let p = rng.random_range(p / 2 + 1..=p);
        let g = gaussian_matrix(m, n, derive_seed(0xC3, 2 * case));
        let m2 = gaussian_matrix(n, p, derive_seed(0xC3, 2 * case + 1));
        let cutoff = [8usize, 16, 32, 64][case as usize % 4];
        let plan = MultiplyPlan::blocked(m).with_cutoff(cutoff.max(8));
        let blocked = multiply_blocked(&g, &m2, &plan).unwrap();
        let oracle = multiply_naive(&g, &m2).unwrap();
        let err = blocked.rel_frobenius_error(&oracle).unwrap();
        assert!(
            err <= 1e-9,
            "shape {m}x{n}x{p} cutoff {cutoff}: rel error {err:.3e}"
        );
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    report(
        "03 fast-mm-oracle",
        elapsed < Duration::from_secs(300),
        &format!("200 shapes, worst rel error {worst:.2e}, {elapsed:.2?}"),
    );
}

/// Criterion 4 — Batch/single agreement at N=1024, p=500 across both routing regimes.
#[test]
fn c04_batch_single_agreement() {
    let e = gaussian_matrix(1024, 500, 0xC4);
    let mut worst = 0.0f64;
    for (m, n_mid) in [(24usize, 256usize), (64, 512)] {
        let t = ComposedTransform::from_dims(1024, m, n_mid, derive_seed(0xC4, m as u64)).unwrap();
        let mut plan = plan_dimensions_capped(500, 0.3, 0.05, 1024, 1.0, 1.0).unwrap();
        plan.m = m;
        let route = route_batch(&plan);
        match m {
            24 => assert_eq!(route, BatchRoute::PerPoint),
            64 => assert_eq!(route, BatchRoute::BlockedFast),
            _ => unreachable!(),
        }
        let single = t.apply_per_point(&e).unwrap();
        for mult in [MultiplyPlan::naive(), MultiplyPlan::blocked(m).with_cutoff(8)] {
            let batch = t.apply_batch(&e, &mult).unwrap();
            for j in 0..e.cols() {
                let scale = norm_sq(single.col(j)).sqrt().max(1e-300);
                for i in 0..m {
                    let rel = (batch.get(i, j) - single.get(i, j)).abs() / scale;
                    assert!(
                        rel <= 1e-9,
                        "m={m} strategy {:?} col {j}: rel diff {rel:.2e}",
                        mult.strategy
                    );
                    worst = worst.max(rel);
                }
            }
        }
    }
    report(
        "04 batch-single-agreement",
        true,
        &format!("both routes, worst per-entry rel diff {worst:.2e}"),
    );
}

/// Criterion 5 — JL property: calibrated constants at N=1024, p=2000 Gaussian points,
/// eps=0.3, eta=0.05 — the accepting calibration evaluation runs >= 300
/// fresh-transform trials and bounds the failure rate at or below eta with
/// 95% Clopper-Pearson confidence. Budget: fifteen minutes.
#[test]
fn c05_jl_property_calibrated() {
    let start = Instant::now();
    let config = CalibrationConfig {
        max_trials: 300,
        batch: 50,
        ..CalibrationConfig::new(2000, 0.3, 0.05, 1024)
    };
    let points = gaussian_matrix(1024, 2000, 0xC5);
    let outcome = calibrate(&config, &points, 0xC5).expect("calibration must terminate");
    let elapsed = start.elapsed();
    let ok = outcome.trials >= 300 && outcome.cp_upper <= 0.05 && elapsed < Duration::from_secs(900);
    report(
        "05 jl-property",
        ok,
        &format!(
            "calibrated c1={}, c2={} (m={}, n={}): {}/{} failures, CP95 upper {:.4} <= 0.05, {elapsed:.1?}",
            outcome.c1, outcome.c2, outcome.plan.m, outcome.plan.n,
            outcome.failures, outcome.trials, outcome.cp_upper
        ),
    );
}

/// Criterion 6 — Unbiasedness: Monte Carlo mean of |Ax|^2 on a unit vector within 3
/// standard errors of 1.0 over 10^4 fresh samples, for all three transform
/// families.
#[test]
fn c06_unbiasedness() {
    let n_input = 64usize;
    let x: Vec<f64> = {
        let g = gaussian_matrix(n_input, 1, 0xC6);
        let norm = norm_sq(g.col(0)).sqrt();
        g.col(0).iter().map(|v| v / norm).collect()
    };
    let trials = 10_000u64;
    let mut lines = Vec::new();
    let mut all_ok = true;
    let families: [(&str, Box<dyn Fn(u64) -> Vec<f64> + '_>); 3] = [
        (
            "composed",
            Box::new(|s| {
                ComposedTransform::from_dims(64, 8, 32, s).unwrap().apply(&x).unwrap()
            }),
        ),
        (
            "dense",
            Box::new(|s| sample_dense_baseline(8, 64, s).apply(&x).unwrap()),
        ),
        (
            "fjlt",
            Box::new(|s| {
                FjltTransform::sample(500, 0.5, 64, 8, 4.0, s).unwrap().apply(&x).unwrap()
            }),
        ),
    ];
    for (label, apply) in &families {
        let samples: Vec<f64> = (0..trials)
            .map(|t| norm_sq(&apply(derive_seed(0xC6 + label.len() as u64, t))))
            .collect();
        let mean = samples.iter().sum::<f64>() / trials as f64;
        let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        let ok = (mean - 1.0).abs() <= 3.0 * se;
        all_ok &= ok;
        lines.push(format!("{label}: mean={mean:.5} (se {se:.5})"));
    }
    report("06 unbiasedness", all_ok, &lines.join("; "));
}

/// Criterion 7 — Composition: interval containment on an epsilon grid, plus the
/// composed two-stage embedding failing at most an eta fraction of trials.
#[test]
fn c07_composition() {
    for i in 1..=9 {
        let eps = i as f64 / 10.0;
        let lo = (1.0 - eps / 3.0).powi(2);
        let hi = (1.0 + eps / 3.0).powi(2);
        assert!(
            lo >= 1.0 - eps && hi <= 1.0 + eps,
            "interval containment fails at eps={eps}"
        );
    }
    let plans = StagePlans {
        ambient_dim: 512,
        mid_dim: 512,
        out_dim: 128,
        epsilon: 0.75,
        eta: 0.2,
    };
    let e = gaussian_matrix(512, 30, 0xC7);
    let rep = composition_check(&plans, &e, 200, 0xC7).unwrap();
    let ok = rep.containment_violations == 0 && rep.pass;
    report(
        "07 composition",
        ok,
        &format!(
            "containment violations {}, composed failure rate {:.3} <= {}",
            rep.containment_violations, rep.composed_failure_rate, plans.eta
        ),
    );
}

/// Criterion 8 — Approximate matrix multiplication: with a calibrated sketch for
/// q + p = 128 points, the Frobenius error ratio stays at or below eps in at
/// least 95 of 100 trials.
#[test]
fn c08_approx_matmul() {
    // Constants from the shipped calibration at this scale (see criterion 5).
    let plan = plan_dimensions_capped(128, 0.3, 0.05, 1024, 8.0, 1.0).unwrap();
    let a = gaussian_matrix(64, 1024, 0xC8);
    let b = gaussian_matrix(1024, 64, 0xC8 + 1);
    let mut within = 0u32;
    let mut worst: f64 = 0.0;
    for t in 0..100u64 {
        let s = ComposedTransform::sample(&plan, derive_seed(0xC8, t)).unwrap();
        let (_, stats) = approx_matmul(&a, &b, &s, 0.3).unwrap();
        if stats.within_epsilon {
            within += 1;
        }
        worst = worst.max(stats.frobenius_error_ratio);
    }
    report(
        "08 approx-matmul",
        within >= 95,
        &format!("{within}/100 trials within eps=0.3 (m={}, worst ratio {worst:.4})", plan.m),
    );
}

/// Criterion 9 — RIP toy check: brute-force delta of the N=32, n=m=16 subsampled
/// Hadamard stage matches the closed-form per-support eigenvalue oracle to
/// 1e-10 (and the hypothesis is correctly reported unmet at this
/// scale); on an instance that does meet the hypothesis, the sign-randomized
/// embedding's failure rate stays at or below eta.
#[test]
fn c09_rip_toy_check() {
    // Part A: exact delta against the closed-form 2x2 spectrum.
    let stage = HadamardStage::sample(32, 16, 0xC9).unwrap();
    let phi = stage.to_dense_unsigned();
    let rep = rip_bruteforce(&phi, 2).unwrap();
    let mut oracle = 0.0f64;
    for c1 in 0..32 {
        for c2 in (c1 + 1)..32 {
            let a = norm_sq(phi.col(c1));
            let c = norm_sq(phi.col(c2));
            let b: f64 = phi.col(c1).iter().zip(phi.col(c2)).map(|(x, y)| x * y).sum();
            let mean = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            oracle = oracle.max((mean + rad - 1.0).abs()).max((mean - rad - 1.0).abs());
        }
    }
    let delta_matches = (rep.delta_hat - oracle).abs() <= 1e-10;
    assert!(delta_matches, "delta {} vs oracle {oracle}", rep.delta_hat);
    assert_eq!(rep.supports_checked, 496);

    // The implication hypothesis (k >= 40 ln(4p/eta)) is unreachable at k=2, and
    // the checker must say so rather than give a verdict.
    let e32 = gaussian_matrix(32, 4, 0xC9 + 1);
    let toy = riptojl_check(&phi, 2, &e32, 0.6, 0.3, 10, 0xC9).unwrap();
    assert!(!toy.hypothesis_met && toy.pass.is_none());

    // Part B: a near-isometry with k = N meets the hypothesis; randomized
    // signs then never distort beyond delta, so the failure rate is 0.
    let n = 256usize;
    let mut phi_b = DenseMatrix::identity(n);
    let noise = gaussian_matrix(n, n, 0xC9 + 2);
    for j in 0..n {
        for i in 0..n {
            phi_b.set(i, j, phi_b.get(i, j) + 1e-3 * noise.get(i, j));
        }
    }
    let e = gaussian_matrix(n, 2, 0xC9 + 3);
    let full = riptojl_check(&phi_b, n, &e, 0.3, 0.4, 200, 0xC9 + 4).unwrap();
    let ok = full.hypothesis_met
        && full.delta_hat <= 0.3 / 4.0
        && full.failure_rate.is_some()
        && full.failure_rate.unwrap() <= 0.4;
    report(
        "09 rip-toy-check",
        delta_matches && ok,
        &format!(
            "toy delta {:.6} == oracle; hypothesis-met instance: delta {:.4}, failure rate {:?} <= 0.4 over 200 trials",
            rep.delta_hat, full.delta_hat, full.failure_rate
        ),
    );
}

/// Criterion 10 — Performance direction: on N=4096, m=256, n = min(m ceil((ln N)^4), N),
/// p=8192, the blocked final stage is at least as fast as applying the dense
/// stage per column (median of 3), and the Hadamard stage scales linearly in
/// p within a factor of two. Directional only; no absolute constant is
/// claimed.
#[test]
fn c10_performance_direction() {
    let ambient = 4096usize;
    let m = 256usize;
    let ln4 = (ambient as f64).ln().powi(4).ceil() as usize;
    let n_mid = (m * ln4).min(ambient);
    assert_eq!(n_mid, ambient, "reference configuration caps n at N");
    let t = ComposedTransform::from_dims(ambient, m, n_mid, 0xC10).unwrap();

    let p_full = 8192usize;
    let e = gaussian_matrix(ambient, p_full, 0xC10);

    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };

    // Stage scaling in p: M2 cost is per-column, so time should grow
    // linearly within a factor of 2 (one warmup, median of 3 per size).
    let mut m2_times = Vec::new();
    let mut m2_full = None;
    for p in [2048usize, 4096, 8192] {
        let mut sub = DenseMatrix::zeros(ambient, p);
        for j in 0..p {
            sub.col_mut(j).copy_from_slice(e.col(j));
        }
        let mut times = Vec::new();
        for rep in 0..4 {
            let m1 = t.stage_m1(&sub).unwrap();
            let start = Instant::now();
            let m2 = t.stage_m2(m1).unwrap();
            let dt = start.elapsed().as_secs_f64();
            if rep > 0 {
                times.push(dt); // rep 0 is warmup
            }
            if p == p_full {
                m2_full = Some(m2);
            }
        }
        m2_times.push(median(times));
    }
    let r1 = m2_times[1] / m2_times[0];
    let r2 = m2_times[2] / m2_times[1];
    let scaling_ok = (1.0..=4.0).contains(&r1) && (1.0..=4.0).contains(&r2);

    // Final stage: blocked fast multiply vs per-column naive application of
    // the same dense G, median of 3 runs each after one warmup.
    let m2 = m2_full.unwrap();
    drop(e);
    let g_dense = t.sign_matrix().to_dense();
    let blocked_plan = MultiplyPlan::blocked(m).with_cutoff(DEFAULT_STRASSEN_CUTOFF);
    let _ = multiply_blocked(&g_dense, &m2, &blocked_plan).unwrap(); // warmup
    let mut naive_times = Vec::new();
    let mut blocked_times = Vec::new();
    let mut blocked_result = None;
    let mut naive_result = None;
    for _ in 0..3 {
        let start = Instant::now();
        let nv = multiply_naive(&g_dense, &m2).unwrap();
        naive_times.push(start.elapsed().as_secs_f64());
        let start = Instant::now();
        let bl = multiply_blocked(&g_dense, &m2, &blocked_plan).unwrap();
        blocked_times.push(start.elapsed().as_secs_f64());
        naive_result = Some(nv);
        blocked_result = Some(bl);
    }
    let err = blocked_result
        .unwrap()
        .rel_frobenius_error(&naive_result.unwrap())
        .unwrap();
    assert!(err <= 1e-9, "blocked result drifted: {err:.2e}");
    let speedup = median(naive_times) / median(blocked_times);
    let est_blocked = flop_estimate(m, n_mid, p_full, &blocked_plan);
    let est_naive = flop_estimate(m, n_mid, p_full, &MultiplyPlan::naive());
    let ok = speedup >= 1.0 && scaling_ok;
    report(
        "10 performance-direction",
        ok,
        &format!(
            "M3 speedup {speedup:.2} (flops {est_blocked} vs {est_naive}); M2 p-scaling ratios {r1:.2}, {r2:.2} in [1,4]"
        ),
    );
}

/// Clopper-Pearson sanity anchor for the thresholds used above.
#[test]
fn cp_anchor_values() {
    assert!((clopper_pearson_upper(0, 300, 0.95) - 0.009935).abs() < 1e-4);
    assert!(clopper_pearson_upper(6, 300, 0.95) <= 0.05);
    assert!(clopper_pearson_upper(15, 300, 0.95) > 0.05);
}
