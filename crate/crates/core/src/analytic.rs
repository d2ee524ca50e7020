//! Closed-form competitive ratios and the numeric constants behind them.
//!
//! Indexing note: geometric sequences here are 0-based with `s_0 = 1`,
//! unlike the 1-based ratio sequences in [`crate::sequences`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Default absolute tolerance for the `r_w` minimizer.
pub const DEFAULT_RW_TOL: f64 = 1e-6;

/// Default tolerance for closed-form comparisons.
pub const FORMULA_TOL: f64 = 1e-9;

fn check_paths(w: usize) -> Result<()> {
    if w < 2 {
        return domain(format!("need at least two paths, got w = {w}"));
    }
    Ok(())
}

fn check_robots(w: usize, lambda: usize) -> Result<()> {
    if lambda < 1 || lambda > w {
        return domain(format!("lambda must lie in [1, {w}], got {lambda}"));
    }
    Ok(())
}

/// Turn radius of stage `i` in the cyclic doubling strategy:
/// `(w / (w - 1))^i` for `i >= 0`, and 0 before the first stage.
pub fn radius_f(w: usize, i: i64) -> Result<f64> {
    check_paths(w)?;
    if i < 0 {
        return Ok(0.0);
    }
    let q = w as f64 / (w as f64 - 1.0);
    Ok(match i32::try_from(i) {
        Ok(i) => q.powi(i),
        Err(_) => f64::INFINITY,
    })
}

/// `w^w / (w-1)^(w-1)`, the limit of the cyclic ratio sequence at the optimal
/// growth rate `w / (w - 1)`. Evaluated in log space so large `w` stays finite.
pub fn cyclic_ratio_limit(w: usize) -> f64 {
    if w == 1 {
        return 1.0;
    }
    let w = w as f64;
    (w * w.ln() - (w - 1.0) * (w - 1.0).ln()).exp()
}

/// Optimal deterministic competitive ratio for `w` paths and `lambda` robots.
///
/// With one robot per path the answer is `w` (everyone walks straight).
pub fn det_ratio(w: usize, lambda: usize) -> Result<f64> {
    check_paths(w)?;
    check_robots(w, lambda)?;
    if lambda == w {
        return Ok(w as f64);
    }
    Ok(lambda as f64 + 2.0 * cyclic_ratio_limit(w - lambda + 1))
}

/// `(r^w - 1) / ((r - 1) ln r)` for `r > 1`.
pub fn phi(w: usize, r: f64) -> f64 {
    let geometric_sum: f64 = (0..w).map(|k| r.powi(k as i32)).sum();
    geometric_sum / r.ln()
}

/// Unique minimizer of [`phi`] over `r > 1`.
///
/// Brackets from `[1 + 1e-9, 4]`, doubling the upper end while `phi` is still
/// falling there, then narrows with golden-section search until the bracket
/// is narrower than `tol`.
pub fn solve_rw(w: usize, tol: f64) -> Result<f64> {
    check_paths(w)?;
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let f = |r: f64| phi(w, r);
    let mut lo = 1.0 + 1e-9;
    let mut hi = 4.0;
    // phi is unimodal, so a falling right edge means the minimum lies beyond it.
    while f(hi * (1.0 + 1e-6)) < f(hi) {
        lo = hi;
        hi *= 2.0;
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    Ok((lo + hi) / 2.0)
}

/// `C_w = phi(w, r_w)`.
pub fn c_w(w: usize) -> Result<f64> {
    Ok(phi(w, solve_rw(w, DEFAULT_RW_TOL)?))
}

/// Expected competitive ratio of the single-robot randomized strategy,
/// `1 + (2/w) C_w`; a lone path needs no search and gives 1.
pub fn rand_single_bound(w: usize) -> Result<f64> {
    match w {
        0 => domain("need at least one path"),
        1 => Ok(1.0),
        _ => Ok(1.0 + 2.0 / w as f64 * c_w(w)?),
    }
}

/// Distance ratio between the roaming robot and each pinned robot that
/// minimizes the multi-robot randomized bound.
pub fn speed_v(w: usize, lambda: usize) -> Result<f64> {
    check_robots(w, lambda)?;
    let roaming_paths = w - lambda + 1;
    Ok((roaming_paths as f64 * rand_single_bound(roaming_paths)?).sqrt())
}

/// Upper bound on the randomized competitive ratio with `lambda` robots:
/// `((lambda - 1) + v)^2 / w` at the optimal speed ratio `v`.
pub fn rand_multi_bound(w: usize, lambda: usize) -> Result<f64> {
    check_paths(w)?;
    let v = speed_v(w, lambda)?;
    let s = (lambda - 1) as f64 + v;
    Ok(s * s / w as f64)
}

/// The multi-robot randomized ratio as a function of an arbitrary speed
/// ratio `v`; minimized by [`speed_v`].
pub fn rand_multi_ratio_at(w: usize, lambda: usize, v: f64) -> Result<f64> {
    check_paths(w)?;
    check_robots(w, lambda)?;
    let pinned = (lambda - 1) as f64;
    let roaming_paths = w - lambda + 1;
    let w = w as f64;
    Ok(pinned / w * (pinned + v) + roaming_paths as f64 / w * (pinned / v + 1.0) * rand_single_bound(roaming_paths)?)
}

/// Closed-form summary for a `(w, lambda)` instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub w: usize,
    pub lambda: usize,
    pub det_ratio: f64,
    /// Optimal growth rate for the roaming robot's `w - lambda + 1` paths;
    /// absent when that is a single path.
    pub r_w_prime: Option<f64>,
    pub rand_single: f64,
    pub rand_multi_bound: f64,
    pub speed_v: f64,
    pub c_w: f64,
}

impl AnalyticReport {
    pub fn compute(w: usize, lambda: usize) -> Result<Self> {
        let det_ratio = det_ratio(w, lambda)?;
        let roaming_paths = w - lambda + 1;
        let r_w_prime = if roaming_paths >= 2 { Some(solve_rw(roaming_paths, DEFAULT_RW_TOL)?) } else { None };
        Ok(Self {
            w,
            lambda,
            det_ratio,
            r_w_prime,
            rand_single: rand_single_bound(roaming_paths)?,
            rand_multi_bound: rand_multi_bound(w, lambda)?,
            speed_v: speed_v(w, lambda)?,
            c_w: c_w(w)?,
        })
    }
}

/// A member of the sequence family used by the randomized lower bound:
/// `s_0 = 1`, then an optional explicit prefix, then a geometric tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeometricSequenceSpec {
    /// `s_i = rate^i`.
    Geometric { rate: f64 },
    /// `s_0..s_{k-1} = prefix`, then `s_{k-1+j} = s_{k-1} * rate^j`.
    PrefixWithTail { prefix: Vec<f64>, rate: f64 },
}

impl GeometricSequenceSpec {
    fn parts(&self) -> (&[f64], f64) {
        match self {
            Self::Geometric { rate } => (&[1.0], *rate),
            Self::PrefixWithTail { prefix, rate } => (prefix, *rate),
        }
    }

    /// Term `s_i`.
    pub fn term(&self, i: usize) -> f64 {
        let (prefix, rate) = self.parts();
        match prefix.get(i) {
            Some(&s) => s,
            None => {
                let last = prefix.len() - 1;
                prefix[last] * rate.powi((i - last) as i32)
            }
        }
    }

    /// Checks `s_0 = 1`, positivity, `s_{i+w} > s_i` and divergence.
    pub fn check_membership(&self, w: usize) -> Result<()> {
        let (prefix, rate) = self.parts();
        if !(rate > 1.0) || !rate.is_finite() {
            return domain(format!("tail rate must exceed 1, got {rate}"));
        }
        if prefix.first() != Some(&1.0) {
            return domain("sequence must start at s_0 = 1");
        }
        if prefix.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return domain("sequence terms must be positive and finite");
        }
        // Beyond the prefix the tail is strictly increasing, so only windows
        // touching the prefix need checking.
        for i in 0..prefix.len() {
            if self.term(i + w) <= self.term(i) {
                return domain(format!("s_{} <= s_{i} violates s_(i+w) > s_i", i + w));
            }
        }
        Ok(())
    }
}

/// `eps * sum_i (s_i + ... + s_{i+w-1}) / s_i^(1+eps)`.
///
/// Terms whose window touches the explicit prefix are summed directly; the
/// geometric tail is summed in closed form, so the truncation error is zero
/// and any positive `trunc_tol` is met.
pub fn g_functional(w: usize, epsilon: f64, seq: &GeometricSequenceSpec, trunc_tol: f64) -> Result<f64> {
    check_paths(w)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return domain(format!("epsilon must be positive, got {epsilon}"));
    }
    if !(trunc_tol > 0.0) {
        return domain(format!("truncation tolerance must be positive, got {trunc_tol}"));
    }
    seq.check_membership(w)?;
    let (prefix, rate) = seq.parts();
    let head_len = prefix.len() - 1;

    let mut head = 0.0;
    for i in 0..head_len {
        let s = seq.term(i);
        let window: f64 = (i..i + w).map(|k| seq.term(k)).sum();
        head += window / s.powf(1.0 + epsilon);
    }

    // For i >= head_len, s_i = a * rate^i with a = s_{head_len} / rate^head_len;
    // each term is a^(-eps) * (sum_k rate^k) * rate^(-i eps).
    let ln_rate = rate.ln();
    let ln_a = prefix[head_len].ln() - head_len as f64 * ln_rate;
    let window_factor: f64 = (0..w).map(|k| rate.powi(k as i32)).sum();
    let first = (-epsilon * (ln_a + head_len as f64 * ln_rate)).exp();
    let tail = window_factor * first / -(-epsilon * ln_rate).exp_m1();
    let value = epsilon * (head + tail);
    if !value.is_finite() {
        return domain("series does not converge to a finite value");
    }
    Ok(value)
}

/// Both sides of the chained arithmetic-geometric mean bound
/// `sum_k x_k / x_{k-1}^(1+eps) >= m/(1+eps)^m * (x_m^((1+eps)^-m) / x_0)^E`
/// with `E = eps (1+eps)^m / ((1+eps)^m - 1)`.
pub fn amgm_chain(epsilon: f64, xs: &[f64]) -> Result<(f64, f64)> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return domain(format!("epsilon must be positive, got {epsilon}"));
    }
    if xs.len() < 2 {
        return domain("need at least x_0 and x_1");
    }
    if xs.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
        return domain("all x must be positive and finite");
    }
    let m = (xs.len() - 1) as f64;
    let lhs: f64 = xs.windows(2).map(|p| p[1] / p[0].powf(1.0 + epsilon)).sum();

    let log_growth = m * epsilon.ln_1p();
    let growth_minus_one = log_growth.exp_m1();
    let exponent = epsilon * log_growth.exp() / growth_minus_one;
    let x0 = xs[0];
    let xm = xs[xs.len() - 1];
    let ln_base = (-log_growth).exp() * xm.ln() - x0.ln();
    let rhs = (m.ln() - log_growth + exponent * ln_base).exp();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_examples() {
        assert_eq!(radius_f(2, 0).unwrap(), 1.0);
        assert_eq!(radius_f(2, -1).unwrap(), 0.0);
        assert!((radius_f(3, 2).unwrap() - 2.25).abs() < 1e-12);
        assert!(radius_f(1, 0).is_err());
    }

    #[test]
    fn radius_ratio_is_constant() {
        for w in 2..8 {
            for i in 0..50 {
                let ratio = radius_f(w, i + 1).unwrap() / radius_f(w, i).unwrap();
                assert!((ratio - w as f64 / (w as f64 - 1.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn det_ratio_examples() {
        assert_eq!(det_ratio(2, 1).unwrap(), 9.0);
        assert!((det_ratio(3, 2).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(det_ratio(4, 4).unwrap(), 4.0);
        assert!(det_ratio(3, 4).is_err());
        assert!(det_ratio(3, 0).is_err());
    }

    #[test]
    fn det_ratio_single_robot_formula() {
        for w in 2..=10usize {
            let wf = w as f64;
            let expected = 1.0 + 2.0 * wf.powi(w as i32) / (wf - 1.0).powi(w as i32 - 1);
            let got = det_ratio(w, 1).unwrap();
            assert!((got - expected).abs() <= 1e-9 * expected, "w={w}: {got} vs {expected}");
        }
    }

    #[test]
    fn det_ratio_decreases_with_robots() {
        for w in 2..=8 {
            for lambda in 1..w {
                assert!(det_ratio(w, lambda).unwrap() > det_ratio(w, lambda + 1).unwrap());
            }
        }
    }

    #[test]
    fn solve_rw_rejects_bad_input() {
        assert!(solve_rw(1, 1e-6).is_err());
        assert!(solve_rw(2, 0.0).is_err());
        assert!(solve_rw(2, -1.0).is_err());
    }

    #[test]
    fn rw_two_satisfies_stationarity() {
        let r = solve_rw(2, 1e-9).unwrap();
        assert!((r.ln() - 1.0 - 1.0 / r).abs() < 1e-8);
        let tol = 1e-6;
        let r = solve_rw(2, tol).unwrap();
        assert!(phi(2, r) <= phi(2, r + 10.0 * tol));
        assert!(phi(2, r) <= phi(2, r - 10.0 * tol));
    }

    #[test]
    fn minimizer_certificate() {
        for w in 2..=10 {
            let r = solve_rw(w, DEFAULT_RW_TOL).unwrap();
            let best = phi(w, r);
            assert!(best <= phi(w, r * (1.0 + 1e-4)), "w={w}");
            assert!(best <= phi(w, r * (1.0 - 1e-4)), "w={w}");
        }
    }

    #[test]
    fn single_path_bounds() {
        assert_eq!(rand_single_bound(1).unwrap(), 1.0);
        assert!(rand_single_bound(0).is_err());
        for w in 2..6 {
            assert_eq!(speed_v(w, w).unwrap(), 1.0);
            assert!((rand_multi_bound(w, w).unwrap() - w as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn one_robot_multi_bound_is_single_bound() {
        for w in 2..=10 {
            let a = rand_multi_bound(w, 1).unwrap();
            let b = rand_single_bound(w).unwrap();
            assert!((a - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn speed_minimizes_ratio_expression() {
        for (w, lambda) in [(3, 2), (4, 2), (4, 3), (6, 3)] {
            let v = speed_v(w, lambda).unwrap();
            let best = rand_multi_ratio_at(w, lambda, v).unwrap();
            assert!((best - rand_multi_bound(w, lambda).unwrap()).abs() < 1e-9);
            for dv in [-0.1, 0.1] {
                assert!(rand_multi_ratio_at(w, lambda, v + dv).unwrap() > best);
            }
        }
    }

    #[test]
    fn randomization_helps_every_team() {
        for w in 2..=10 {
            for lambda in 1..w {
                assert!(rand_multi_bound(w, lambda).unwrap() < det_ratio(w, lambda).unwrap());
            }
        }
    }

    #[test]
    fn report_for_full_team_has_no_rate() {
        let report = AnalyticReport::compute(3, 3).unwrap();
        assert_eq!(report.r_w_prime, None);
        assert_eq!(report.det_ratio, 3.0);
        assert!((report.rand_multi_bound - 3.0).abs() < 1e-12);
    }

    #[test]
    fn g_functional_closed_form_examples() {
        let seq = GeometricSequenceSpec::Geometric { rate: 2.0 };
        assert!((g_functional(2, 1.0, &seq, 1e-9).unwrap() - 6.0).abs() < 1e-12);
        let g = g_functional(2, 1e-6, &seq, 1e-9).unwrap();
        assert!((g - 3.0 / 2f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn g_functional_matches_truncated_sum() {
        // Direct partial sums for eps = 1, where the series converges quickly.
        let seq = GeometricSequenceSpec::PrefixWithTail { prefix: vec![1.0, 1.5, 3.0, 3.5], rate: 1.7 };
        let eps = 1.0;
        let direct: f64 =
            (0..200).map(|i| (i..i + 3).map(|k| seq.term(k)).sum::<f64>() / seq.term(i).powf(1.0 + eps)).sum::<f64>()
                * eps;
        let g = g_functional(3, eps, &seq, 1e-12).unwrap();
        assert!((g - direct).abs() < 1e-10, "{g} vs {direct}");
    }

    #[test]
    fn g_functional_rejects_non_members() {
        let bad_start = GeometricSequenceSpec::PrefixWithTail { prefix: vec![2.0, 3.0], rate: 2.0 };
        assert!(g_functional(2, 0.5, &bad_start, 1e-9).is_err());
        // s_2 = 1 is not above s_0 = 1.
        let stalls = GeometricSequenceSpec::PrefixWithTail { prefix: vec![1.0, 4.0, 1.0], rate: 2.0 };
        assert!(g_functional(2, 0.5, &stalls, 1e-9).is_err());
        let flat = GeometricSequenceSpec::Geometric { rate: 1.0 };
        assert!(g_functional(2, 0.5, &flat, 1e-9).is_err());
        let ok = GeometricSequenceSpec::Geometric { rate: 2.0 };
        assert!(g_functional(2, 0.0, &ok, 1e-9).is_err());
        assert!(g_functional(2, 0.5, &ok, 0.0).is_err());
    }

    #[test]
    fn g_functional_increases_with_epsilon() {
        for rate in [1.2, 2.0, 3.591, 5.0] {
            let seq = GeometricSequenceSpec::Geometric { rate };
            let mut prev = 0.0;
            for k in -8..=0 {
                let g = g_functional(3, 10f64.powi(k), &seq, 1e-9).unwrap();
                assert!(g >= prev);
                prev = g;
            }
            let limit = g_functional(3, 1e-12, &seq, 1e-9).unwrap();
            assert!((limit - phi(3, rate)).abs() < 1e-6);
        }
    }

    #[test]
    fn amgm_examples() {
        let (lhs, rhs) = amgm_chain(1.0, &[1.0, 2.0, 4.0]).unwrap();
        assert!((lhs - 3.0).abs() < 1e-12);
        assert!((rhs - 0.5 * 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        for eps in [0.01, 0.3, 1.0] {
            let (lhs, rhs) = amgm_chain(eps, &[0.7, 13.0]).unwrap();
            assert!((rhs - lhs / (1.0 + eps)).abs() < 1e-12 * lhs);
        }
        assert!(amgm_chain(0.0, &[1.0, 2.0]).is_err());
        assert!(amgm_chain(0.5, &[1.0, -2.0]).is_err());
        assert!(amgm_chain(0.5, &[1.0]).is_err());
    }
}
