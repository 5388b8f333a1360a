//! Polynomial machinery behind the Rényi relative-convexity ordering.
//!
//! The ordering `h_β ≺ h_α` for `α ≥ β ≥ 0` reduces, after the substitution
//! `t = log((1−p)/p)`, to nonnegativity of
//!
//! ```text
//! Φ_α(t) = ((α−1)t − 1) e^{2αt} + (αt − 1) e^{(2α−1)t} + e^{(α+1)t}
//!          − 2t e^{αt} − e^{(α−1)t} + (αt + 1) e^{t} + ((α−1)t + 1)
//! ```
//!
//! for all `α, t ≥ 0`. Its Taylor coefficients at `t = 0` are `P_k(α)/k!`
//! with
//!
//! ```text
//! P_k(α) = k(α−1)(2α)^{k−1} + kα(2α−1)^{k−1} − (2α)^k − (2α−1)^k
//!          + (α+1)^k − (α−1)^k − 2kα^{k−1} + kα + 1,
//! ```
//!
//! which vanishes identically for `k ≤ 2` and at `α = 1` for every `k`. This
//! module evaluates `P_k` (compensated floating point, plus exact integer
//! arithmetic for integer orders), builds the Taylor coefficients of `Φ_α`
//! from the constituent exponentials, and provides the grid sweeps that the
//! verification suites run: `P_k ≥ 0`, the sign of `Q_k = P_k/(α−1)`, and the
//! derivative-ratio inequality between two Rényi orders.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenyiError {
    #[error("Φ_α(t) overflows f64 at alpha = {alpha}, t = {t}")]
    Overflow { alpha: f64, t: f64 },
}

/// Neumaier compensated summation.
fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}

fn pk_terms(k: u32, alpha: f64) -> [f64; 9] {
    let kf = f64::from(k);
    let km1 = (k - 1) as i32;
    let ki = k as i32;
    [
        kf * (alpha - 1.0) * (2.0 * alpha).powi(km1),
        kf * alpha * (2.0 * alpha - 1.0).powi(km1),
        -(2.0 * alpha).powi(ki),
        -(2.0 * alpha - 1.0).powi(ki),
        (alpha + 1.0).powi(ki),
        -(alpha - 1.0).powi(ki),
        -2.0 * kf * alpha.powi(km1),
        kf * alpha,
        1.0,
    ]
}

/// Term-by-term evaluation of `P_k(α)` with compensated summation.
///
/// The displayed formula is the Taylor coefficient of `Φ_α` only for `k ≥ 2`;
/// the coefficients for `k ∈ {0, 1}` vanish identically and are returned as
/// exact zeros.
pub fn pk_eval(k: u32, alpha: f64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    compensated_sum(&pk_terms(k, alpha))
}

/// Magnitude scale `Σ |terms|` of the `P_k(α)` evaluation, for relative
/// tolerances in the nonnegativity sweep.
pub fn pk_scale(k: u32, alpha: f64) -> f64 {
    if k < 2 {
        return 1.0;
    }
    pk_terms(k, alpha).iter().map(|t| t.abs()).sum()
}

/// Exact integer evaluation of `P_k(α)` for integer orders. Overflows i128
/// around `k ≈ 28` at `α = 10`; intended for the `k ≤ 20` cross-checks.
pub fn pk_eval_int(k: u32, alpha: i128) -> i128 {
    if k < 2 {
        return 0;
    }
    fn ipow(base: i128, exp: u32) -> i128 {
        (0..exp).fold(1i128, |acc, _| acc * base)
    }
    let kk = i128::from(k);
    kk * (alpha - 1) * ipow(2 * alpha, k - 1)
        + kk * alpha * ipow(2 * alpha - 1, k - 1)
        - ipow(2 * alpha, k)
        - ipow(2 * alpha - 1, k)
        + ipow(alpha + 1, k)
        - ipow(alpha - 1, k)
        - 2 * kk * ipow(alpha, k - 1)
        + kk * alpha
        + 1
}

/// Closed-form evaluation of `Φ_α(t)`.
pub fn phi_eval(alpha: f64, t: f64) -> Result<f64, RenyiError> {
    let terms = [
        ((alpha - 1.0) * t - 1.0) * (2.0 * alpha * t).exp(),
        (alpha * t - 1.0) * ((2.0 * alpha - 1.0) * t).exp(),
        ((alpha + 1.0) * t).exp(),
        -2.0 * t * (alpha * t).exp(),
        -((alpha - 1.0) * t).exp(),
        (alpha * t + 1.0) * t.exp(),
        (alpha - 1.0) * t + 1.0,
    ];
    let value = compensated_sum(&terms);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RenyiError::Overflow { alpha, t })
    }
}

/// Taylor coefficients `c_k = P_k(α)/k!` of `Φ_α` at `t = 0`, for
/// `k = 0..=max_order`, accumulated from the series of each constituent
/// exponential (`e^{γt} = Σ γ^k/k! t^k`, `t e^{γt} = Σ γ^{k−1}/(k−1)! t^k`).
pub fn phi_series_coeffs(alpha: f64, max_order: usize) -> Vec<f64> {
    // (γ, a, b) for the summands (a + b t) e^{γ t}.
    let exps = [
        (2.0 * alpha, -1.0, alpha - 1.0),
        (2.0 * alpha - 1.0, -1.0, alpha),
        (alpha + 1.0, 1.0, 0.0),
        (alpha, 0.0, -2.0),
        (alpha - 1.0, -1.0, 0.0),
        (1.0, 1.0, alpha),
    ];
    let mut coeffs = Vec::with_capacity(max_order + 1);
    // pow_fact[m] = γ_m^k / k!, updated incrementally.
    let mut pow_fact = [1.0f64; 6];
    let mut prev_pow_fact = [0.0f64; 6];
    for k in 0..=max_order {
        if k > 0 {
            for (m, &(gamma, _, _)) in exps.iter().enumerate() {
                prev_pow_fact[m] = pow_fact[m];
                pow_fact[m] *= gamma / k as f64;
            }
        }
        let mut terms = Vec::with_capacity(13);
        for (m, &(_, a, b)) in exps.iter().enumerate() {
            terms.push(a * pow_fact[m]);
            if k > 0 {
                // b t e^{γt} contributes b γ^{k−1}/(k−1)!.
                terms.push(b * prev_pow_fact[m]);
            }
        }
        // Affine remainder (α−1)t + 1.
        if k == 0 {
            terms.push(1.0);
        } else if k == 1 {
            terms.push(alpha - 1.0);
        }
        coeffs.push(compensated_sum(&terms));
    }
    coeffs
}

/// One grid cell of the `P_k ≥ 0` sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PkRow {
    pub k: u32,
    pub alpha: f64,
    pub value: f64,
    /// `value / scale`, the relative margin against the `−1e−9` floor.
    pub margin: f64,
}

/// Report of the brute-force nonnegativity sweep of `P_k(α)`.
#[derive(Debug, Clone, Serialize)]
pub struct PkReport {
    pub rows: Vec<PkRow>,
    pub worst_margin: f64,
    pub worst_k: u32,
    pub worst_alpha: f64,
    pub violations: usize,
}

pub const PK_NONNEG_TOL: f64 = 1e-9;

/// Evaluates `P_k(α)` for every `k ∈ [3, k_max]` and `α` in the grid, flagging
/// any value below `−1e−9 · Σ|terms|`.
pub fn verify_pk_nonneg(k_max: u32, alpha_grid: &[f64]) -> PkReport {
    let mut rows = Vec::with_capacity((k_max.saturating_sub(2)) as usize * alpha_grid.len());
    let mut worst = (f64::INFINITY, 0u32, 0.0f64);
    let mut violations = 0;
    for k in 3..=k_max {
        for &alpha in alpha_grid {
            let value = pk_eval(k, alpha);
            let margin = value / pk_scale(k, alpha);
            if margin < worst.0 {
                worst = (margin, k, alpha);
            }
            if margin < -PK_NONNEG_TOL {
                violations += 1;
            }
            rows.push(PkRow {
                k,
                alpha,
                value,
                margin,
            });
        }
    }
    PkReport {
        rows,
        worst_margin: worst.0,
        worst_k: worst.1,
        worst_alpha: worst.2,
        violations,
    }
}

/// Coefficients of `P_k` as a polynomial in `α` (index = power of `α`),
/// assembled from binomial expansions of the displayed terms.
pub fn pk_alpha_poly(k: u32) -> Vec<f64> {
    let deg = k as usize;
    let mut c = vec![0.0f64; deg + 1];
    if k < 2 {
        return c;
    }
    let kf = f64::from(k);
    let binom = |n: u32, r: u32| -> f64 {
        let mut acc = 1.0f64;
        for i in 0..r {
            acc = acc * f64::from(n - i) / f64::from(i + 1);
        }
        acc
    };
    let two_pow = |e: u32| (2.0f64).powi(e as i32);

    // k(α−1)(2α)^{k−1} = k 2^{k−1} (α^k − α^{k−1})
    c[deg] += kf * two_pow(k - 1);
    c[deg - 1] -= kf * two_pow(k - 1);
    // kα(2α−1)^{k−1} = Σ_i k C(k−1,i) 2^i (−1)^{k−1−i} α^{i+1}
    for i in 0..k {
        let sign = if (k - 1 - i) % 2 == 0 { 1.0 } else { -1.0 };
        c[(i + 1) as usize] += kf * binom(k - 1, i) * two_pow(i) * sign;
    }
    // −(2α)^k
    c[deg] -= two_pow(k);
    // −(2α−1)^k = −Σ_i C(k,i) 2^i (−1)^{k−i} α^i
    for i in 0..=k {
        let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
        c[i as usize] -= binom(k, i) * two_pow(i) * sign;
    }
    // (α+1)^k
    for i in 0..=k {
        c[i as usize] += binom(k, i);
    }
    // −(α−1)^k = −Σ_i C(k,i) (−1)^{k−i} α^i
    for i in 0..=k {
        let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
        c[i as usize] -= binom(k, i) * sign;
    }
    // −2kα^{k−1} + kα + 1
    c[deg - 1] -= 2.0 * kf;
    c[1] += kf;
    c[0] += 1.0;
    c
}

/// Synthetic division `P_k(α) = (α−1) Q_k(α)`; returns the coefficients of
/// `Q_k` (valid because `P_k(1) = 0`).
pub fn qk_alpha_poly(k: u32) -> Vec<f64> {
    let p = pk_alpha_poly(k);
    let n = p.len() - 1;
    if n == 0 {
        return vec![0.0];
    }
    let mut q = vec![0.0f64; n];
    q[n - 1] = p[n];
    for i in (1..n).rev() {
        q[i - 1] = p[i] + q[i];
    }
    q
}

pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Curvature ratio `h_α''/h_α'` of the regular-order Rényi entropy, with the
/// Shannon limit at `α = 1`.
fn renyi_ratio(alpha: f64, p: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-6 {
        return -1.0 / (p * (1.0 - p) * ((1.0 - p) / p).ln());
    }
    let q = 1.0 - p;
    let n = p.powf(alpha) + q.powf(alpha);
    let n1 = alpha * (p.powf(alpha - 1.0) - q.powf(alpha - 1.0));
    let n2 = alpha * (alpha - 1.0) * (p.powf(alpha - 2.0) + q.powf(alpha - 2.0));
    n2 / n1 - n1 / n
}

/// Checks `h_α''/h_α' ≥ h_β''/h_β'` on the grid (the derivative-ratio face of
/// `h_β ≺ h_α`). Equality within a relative tolerance counts as holding.
pub fn verify_relative_convexity(alpha: f64, beta: f64, p_grid: &[f64]) -> bool {
    p_grid.iter().filter(|&&p| p > 0.0 && p < 0.5).all(|&p| {
        let ra = renyi_ratio(alpha, p);
        let rb = renyi_ratio(beta, p);
        ra >= rb - 1e-9 * (1.0 + ra.abs() + rb.abs())
    })
}

/// Uniform grid with `n` points on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pk_spot_values() {
        // 48 + 54 − 64 − 27 + 27 − 1 − 24 + 6 + 1 = 20
        assert_eq!(pk_eval(3, 2.0), 20.0);
        assert_eq!(pk_eval_int(3, 2), 20);
        assert_eq!(pk_eval(5, 1.0), 0.0);
        for alpha in [0.0, 0.3, 1.0, 2.5, 7.0] {
            assert_eq!(pk_eval(0, alpha), 0.0);
            assert_eq!(pk_eval(1, alpha), 0.0);
            assert!(pk_eval(2, alpha).abs() < 1e-12, "P_2({alpha}) != 0");
        }
    }

    #[test]
    fn pk_root_at_one() {
        for k in 2..=40 {
            let v = pk_eval(k, 1.0);
            assert!(v.abs() <= 1e-9 * pk_scale(k, 1.0), "P_{k}(1) = {v} not ~0");
        }
        for k in 2..=20 {
            assert_eq!(pk_eval_int(k, 1), 0, "exact P_{k}(1)");
        }
    }

    #[test]
    fn pk_float_matches_exact_integers() {
        for k in 2..=20u32 {
            for alpha in 0..=10i128 {
                let exact = pk_eval_int(k, alpha) as f64;
                let approx = pk_eval(k, alpha as f64);
                let scale = pk_scale(k, alpha as f64);
                assert!(
                    (exact - approx).abs() <= 1e-12 * scale.max(1.0),
                    "k={k} alpha={alpha}: {exact} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn phi_at_zero_and_sign() {
        for alpha in [0.0, 0.25, 1.0, 2.0, 4.5] {
            assert!(phi_eval(alpha, 0.0).unwrap().abs() < 1e-15);
        }
        // Master inequality on a coarse grid.
        for ai in 0..=20 {
            let alpha = ai as f64 * 0.25;
            for ti in 0..=20 {
                let t = ti as f64 * 0.25;
                let v = phi_eval(alpha, t).unwrap();
                assert!(v >= -1e-9 * (1.0 + v.abs()), "Φ_{alpha}({t}) = {v}");
            }
        }
    }

    #[test]
    fn phi_overflow_reported() {
        assert!(matches!(
            phi_eval(100.0, 100.0),
            Err(RenyiError::Overflow { .. })
        ));
    }

    #[test]
    fn series_matches_pk() {
        for &alpha in &[0.25, 0.5, 2.0, 5.0] {
            let coeffs = phi_series_coeffs(alpha, 25);
            let mut fact = 1.0f64;
            for (k, &c) in coeffs.iter().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                let expected = pk_eval(k as u32, alpha) / fact;
                let scale = pk_scale(k as u32, alpha) / fact;
                assert!(
                    (c - expected).abs() <= 1e-10 * (1.0 + scale),
                    "alpha={alpha} k={k}: series {c} vs P_k/k! {expected}"
                );
            }
        }
        // First three coefficients vanish for any order.
        for &alpha in &[0.0, 0.7, 1.0, 3.0] {
            let coeffs = phi_series_coeffs(alpha, 2);
            for (k, &c) in coeffs.iter().enumerate() {
                assert!(c.abs() < 1e-12, "c_{k}({alpha}) = {c}");
            }
        }
        // coefficient 3 at α=2 is 20/3! = 10/3.
        let c = phi_series_coeffs(2.0, 3);
        assert!((c[3] - 10.0 / 3.0).abs() < 1e-12);
        // At α=1 the function vanishes identically.
        let c = phi_series_coeffs(1.0, 10);
        assert!(c.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn phi_matches_truncated_series() {
        // Φ_2(0.1) against the K=20 truncation, 1e−10 agreement.
        let coeffs = phi_series_coeffs(2.0, 20);
        let t: f64 = 0.1;
        let series: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * t.powi(k as i32))
            .sum();
        let exact = phi_eval(2.0, t).unwrap();
        assert!((series - exact).abs() < 1e-10, "{series} vs {exact}");
    }

    #[test]
    fn series_tail_bound() {
        // |Φ − Σ_{k≤K} c_k t^k| ≤ |c_{K+1}| t^{K+1} e^{t·max(2α, α+1)},
        // t ≤ 0.5, K = 25.
        const K: usize = 25;
        for &alpha in &[0.0, 0.5, 1.0, 2.0, 3.7, 5.0] {
            let coeffs = phi_series_coeffs(alpha, K + 1);
            for &t in &[0.05f64, 0.2, 0.5] {
                let partial: f64 = coeffs[..=K]
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * t.powi(k as i32))
                    .sum();
                let exact = phi_eval(alpha, t).unwrap();
                let gamma_max = (2.0 * alpha).max(alpha + 1.0);
                let bound = coeffs[K + 1].abs() * t.powi((K + 1) as i32) * (t * gamma_max).exp();
                assert!(
                    (exact - partial).abs() <= bound + 1e-12,
                    "alpha={alpha} t={t}: err {} vs bound {bound}",
                    (exact - partial).abs()
                );
            }
        }
    }

    #[test]
    fn nonneg_sweep_compact() {
        let grid = uniform_grid(0.0, 10.0, 201);
        let report = verify_pk_nonneg(20, &grid);
        assert_eq!(report.violations, 0, "worst {:?}", report.worst_margin);
        assert!(report.worst_margin >= -PK_NONNEG_TOL);
    }

    #[test]
    fn qk_sign_pattern() {
        // (α−1)·Q_k(α) ≥ 0 away from α = 1.
        for k in 3..=30u32 {
            let p = pk_alpha_poly(k);
            // Polynomial expansion must agree with direct evaluation.
            for &alpha in &[0.0, 0.4, 1.0, 2.3, 6.0] {
                let direct = pk_eval(k, alpha);
                let via_poly = eval_poly(&p, alpha);
                let scale = pk_scale(k, alpha);
                assert!(
                    (direct - via_poly).abs() <= 1e-9 * (1.0 + scale),
                    "k={k} alpha={alpha}"
                );
            }
            let q = qk_alpha_poly(k);
            for &alpha in uniform_grid(0.0, 10.0, 501)
                .iter()
                .filter(|&&a| (a - 1.0).abs() > 1e-3)
            {
                let qv = eval_poly(&q, alpha);
                let signed = (alpha - 1.0) * qv;
                let scale = pk_scale(k, alpha).max(1.0);
                assert!(
                    signed >= -1e-9 * scale,
                    "k={k} alpha={alpha}: (α−1)Q = {signed}"
                );
            }
        }
    }

    #[test]
    fn relative_convexity_grid() {
        let grid = uniform_grid(1e-4, 0.5 - 1e-4, 400);
        assert!(verify_relative_convexity(2.0, 0.5, &grid));
        assert!(verify_relative_convexity(3.0, 3.0, &grid));
        assert!(verify_relative_convexity(1.0, 0.5, &grid));
        assert!(!verify_relative_convexity(0.5, 2.0, &grid));
    }
}
