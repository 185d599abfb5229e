use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};

/// The constant system for `r` colours, degree `D` and target size `n`.
/// Quantities that overflow `f64` are carried as natural logarithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamseyParams {
    pub r: u32,
    #[serde(rename = "D")]
    pub degree: u32,
    pub n: f64,
    pub alpha: f64,
    pub alpha_exact: Alpha,
    /// `-6 ln α / α`, the power of `r` inside `c₁`.
    pub c1_exponent: f64,
    pub c1_log: f64,
    pub c2: f64,
    pub c3: f64,
    pub delta: f64,
    pub lambda: f64,
    #[serde(rename = "N_log")]
    pub n_host_log: f64,
    pub p: f64,
}

impl RamseyParams {
    /// `ln(c₁/c₃)`
    pub fn l(&self) -> f64 {
        self.c1_log - self.c3.ln()
    }
}

/// `α = 1/(6D+14)`, `c₁ = (6D+14)·r^{-6 ln α/α}`, `c₂ = 4D² ln(6D+14) r² ln² r`,
/// `c₃ = 6D+14`, `δ = √(7 ln(c₁/c₃)/(c₂c₃))`, `λ = -α/(3 ln α)`, `N = c₁n`,
/// `p = c₂/n`.
pub fn compute_params(r: u32, degree: u32, n: f64) -> Result<RamseyParams> {
    if r < 2 || degree < 2 || n < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "need r >= 2, D >= 2, n >= 1; got r={r}, D={degree}, n={n}"
        )));
    }
    let c3i = 6 * degree as i64 + 14;
    let c3 = c3i as f64;
    let alpha = 1.0 / c3;
    let ln_c3 = c3.ln();
    let lnr = (r as f64).ln();
    let c1_exponent = 6.0 * c3 * ln_c3;
    let c1_log = ln_c3 + c1_exponent * lnr;
    let d = degree as f64;
    let rf = r as f64;
    let c2 = 4.0 * d * d * ln_c3 * rf * rf * lnr * lnr;
    let l = c1_log - ln_c3;
    let delta = (7.0 * l.max(0.0) / (c2 * c3)).sqrt();
    let lambda = -alpha / (3.0 * alpha.ln());
    Ok(RamseyParams {
        r,
        degree,
        n,
        alpha,
        alpha_exact: Alpha::reciprocal(c3i)?,
        c1_exponent,
        c1_log,
        c2,
        c3,
        delta,
        lambda,
        n_host_log: c1_log + n.ln(),
        p: c2 / n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaWindow {
    pub pass: bool,
    pub delta: f64,
    /// `√(6 ln(c₁e/c₃)/(c₂c₃))`
    pub lower: f64,
    pub upper: f64,
    pub lower_margin: f64,
    pub upper_margin: f64,
    /// `ln(c₁/c₃) - 6`; the lower side holds iff this is positive.
    pub reduced_margin: f64,
}

/// Both sides of `3/2 ≥ δ > √(6 ln(c₁e/c₃)/(c₂c₃))`.
///
/// With `δ² = 7L/(c₂c₃)` the lower side is `7L > 6L + 6`, i.e. `L > 6`; that
/// equivalence is re-asserted numerically on every call.
pub fn check_delta_window(params: &RamseyParams) -> DeltaWindow {
    let l = params.l();
    let k = params.c2 * params.c3;
    let lower = (6.0 * (l + 1.0) / k).max(0.0).sqrt();
    let upper = 1.5;
    let direct = params.delta > lower;
    let reduced = l > 6.0;
    let residual = ((7.0 * l - (6.0 * l + 6.0)) - (l - 6.0)).abs();
    assert!(
        residual <= 1e-9 * l.abs().max(1.0),
        "delta window reduction residual {residual}"
    );
    let sides = 7.0 * l.max(0.0) - 6.0 * (l + 1.0);
    if sides.abs() > 1e-9 * l.abs().max(1.0) {
        assert_eq!(
            direct, reduced,
            "delta window reduction disagrees at L = {l}"
        );
    }
    DeltaWindow {
        pass: direct && params.delta <= upper,
        delta: params.delta,
        lower,
        upper,
        lower_margin: params.delta - lower,
        upper_margin: upper - params.delta,
        reduced_margin: l - 6.0,
    }
}

/// `λ = -α/(3 ln α)`
pub fn lambda_of(alpha: f64) -> f64 {
    -alpha / (3.0 * alpha.ln())
}

/// `f(α) - 1` for `f(α) = (1-α)^{2-λ} + 2α^{1-λ} - 2α^{2-λ}`, evaluated
/// without cancellation.
pub fn f_alpha_minus_one(alpha: f64, lambda: f64) -> f64 {
    let a = ((2.0 - lambda) * (-alpha).ln_1p()).exp_m1();
    let b = 2.0 * alpha * (1.0 - alpha) * (-lambda * alpha.ln()).exp();
    a + b
}

pub fn f_alpha(alpha: f64, lambda: f64) -> f64 {
    1.0 + f_alpha_minus_one(alpha, lambda)
}

/// `f(α)` at `λ = -α/(3 ln α)`, using `α^{-λ} = e^{α/3}`.
pub fn f_alpha_canonical(alpha: f64) -> f64 {
    1.0 + f_canonical_minus_one(alpha)
}

fn f_canonical_minus_one(alpha: f64) -> f64 {
    let lambda = lambda_of(alpha);
    let a = ((2.0 - lambda) * (-alpha).ln_1p()).exp_m1();
    let b = 2.0 * alpha * (1.0 - alpha) * (alpha / 3.0).exp();
    a + b
}

/// `|f(α) - (1 - α²/3 - α²/(3 ln α))|`
pub fn taylor_gap(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    (f_canonical_minus_one(alpha) + a2 / 3.0 + a2 / (3.0 * alpha.ln())).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductionRhs {
    /// `1 - (n/(αN′))^λ`
    pub bracket: f64,
    pub value: f64,
    /// `ln |value|`; `-inf` when the value is zero.
    pub log_abs: f64,
}

/// `(1-δ)(1-(n/(αN′))^λ) p N′²`, signed. `N′` is given by its natural log so
/// that astronomically large hosts can be evaluated.
pub fn induction_rhs_log(n: f64, n_prime_log: f64, params: &RamseyParams) -> InductionRhs {
    // αN′ = N′/c₃ exactly since α = 1/c₃
    let ratio_log = n.ln() - (n_prime_log - params.c3.ln());
    let bracket = -(params.lambda * ratio_log).exp_m1();
    let log_abs =
        (1.0 - params.delta).abs().ln() + bracket.abs().ln() + params.p.ln() + 2.0 * n_prime_log;
    let sign = (1.0 - params.delta).signum() * bracket.signum();
    let value = if bracket == 0.0 {
        0.0
    } else {
        sign * log_abs.exp()
    };
    InductionRhs {
        bracket,
        value,
        log_abs,
    }
}

pub fn induction_rhs(n: f64, n_prime: f64, params: &RamseyParams) -> InductionRhs {
    let ratio = n / (n_prime / params.c3);
    let bracket = -(params.lambda * ratio.ln()).exp_m1();
    let value = (1.0 - params.delta) * bracket * params.p * n_prime * n_prime;
    InductionRhs {
        bracket,
        value,
        log_abs: value.abs().ln(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub r: u32,
    pub n: f64,
    /// `(1-δ)(1-(n/(αN))^λ)` at `N = c₁n`.
    pub achieved: f64,
    /// `(1 - 1/(r ln r))(1 - 1/r²)`
    pub lower: f64,
    /// `(1 - 1/r)(1 + n^{-1/4})`
    pub upper: f64,
    pub achieved_ge_lower: bool,
    pub lower_gt_upper: bool,
    /// Limit of `upper` as `n → ∞`.
    pub upper_limit: f64,
    pub lower_gt_upper_limit: bool,
}

/// Evaluates the closing inequality chain at finite parameters.
pub fn check_contradiction(params: &RamseyParams, n: f64) -> ContradictionReport {
    let r = params.r as f64;
    let achieved = (1.0 - params.delta) * -(-params.lambda * params.l()).exp_m1();
    let lower = (1.0 - 1.0 / (r * r.ln())) * (1.0 - 1.0 / (r * r));
    let upper = (1.0 - 1.0 / r) * (1.0 + n.powf(-0.25));
    let upper_limit = 1.0 - 1.0 / r;
    ContradictionReport {
        r: params.r,
        n,
        achieved,
        lower,
        upper,
        achieved_ge_lower: achieved >= lower,
        lower_gt_upper: lower > upper,
        upper_limit,
        lower_gt_upper_limit: lower > upper_limit,
    }
}

/// `log₂(r^{400 D ln D} n)`
pub fn size_bound_log2(r: u32, degree: u32, n: f64) -> Result<f64> {
    if r < 2 || degree < 2 {
        return Err(Error::InvalidParameter(format!(
            "need r >= 2 and D >= 2; got r={r}, D={degree}"
        )));
    }
    let d = degree as f64;
    Ok(400.0 * d * d.ln() * (r as f64).log2() + n.log2())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBoundComparison {
    /// `log₂((1 + n^{-1/4}) p N²)` with `N = c₁n`, `p = c₂/n`.
    pub edges_log2: f64,
    pub bound_log2: f64,
    pub holds: bool,
    pub margin: f64,
}

pub fn compare_size_bound(params: &RamseyParams) -> Result<SizeBoundComparison> {
    let n = params.n;
    let edges_log2 =
        (n.powf(-0.25)).ln_1p() / LN_2 + params.c2.log2() + 2.0 * params.c1_log / LN_2 + n.log2();
    let bound_log2 = size_bound_log2(params.r, params.degree, n)?;
    Ok(SizeBoundComparison {
        edges_log2,
        bound_log2,
        holds: edges_log2 <= bound_log2,
        margin: bound_log2 - edges_log2,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn params_r2_d3() {
        let p = compute_params(2, 3, 1000.0).unwrap();
        assert_eq!(p.alpha_exact, Alpha::reciprocal(32).unwrap());
        assert!(close(p.lambda, 0.0030056146685186737653, 1e-13));
        assert!(close(p.c2, 239.7777494320292254, 1e-13));
        assert!(close(p.delta, 0.64868023986600233663, 1e-12));
    }

    #[test]
    fn d2_exponent() {
        let p = compute_params(2, 2, 1.0).unwrap();
        assert_eq!(p.c3, 26.0);
        assert!(close(p.c1_exponent, 508.26305993135119909, 1e-14));
    }

    #[test]
    fn f_values() {
        assert!(close(
            f_alpha_canonical(1.0 / 26.0),
            0.99961777744296081664,
            1e-14
        ));
        assert!(close(
            f_alpha_canonical(1.0 / 32.0),
            0.99974698822042599024,
            1e-14
        ));
        let a = 1.0 / 26.0;
        assert!(close(f_alpha(a, lambda_of(a)), f_alpha_canonical(a), 1e-14));
        let tiny = f_canonical_minus_one(1e-6);
        assert!(close(tiny, -3.0920645386333882229e-13, 1e-6));
        for (a, g) in [(26.0, 4.047e-5), (50.0, 5.478e-6), (200.0, 8.129e-8)] {
            assert!(close(taylor_gap(1.0 / a), g, 1e-3));
        }
    }

    #[test]
    fn induction_values() {
        let p = compute_params(2, 3, 1000.0).unwrap();
        let v = induction_rhs(1000.0, 10.0 * 1000.0 * 32.0, &p);
        assert!(close(v.value, 59491985.500163995236, 1e-12));
        let lv = induction_rhs_log(1000.0, (320000.0f64).ln(), &p);
        assert!(close(lv.value, v.value, 1e-10));
        let zero = induction_rhs(1000.0, 32000.0, &p);
        assert_eq!(zero.bracket, 0.0);
        assert_eq!(zero.value, 0.0);
        assert!(induction_rhs(1000.0, 16000.0, &p).value < 0.0);
    }

    #[test]
    fn size_bound_and_window() {
        assert!(close(
            size_bound_log2(2, 2, 1e6).unwrap(),
            574.44931301728042162,
            1e-12
        ));
        assert!(check_delta_window(&compute_params(2, 2, 1.0).unwrap()).pass);
        let mut p = compute_params(3, 3, 1.0).unwrap();
        assert!(check_delta_window(&p).pass);
        p.c1_log = p.c3.ln();
        p.delta = 0.0;
        let w = check_delta_window(&p);
        assert!(!w.pass && w.lower_margin < 0.0);
    }

    #[test]
    fn contradiction_margins() {
        let p = compute_params(2, 2, 1e6).unwrap();
        let c = check_contradiction(&p, 1e6);
        assert!(close(c.lower, 0.2090, 1e-3));
        assert!(close(c.upper, 0.5158, 1e-3));
        assert!(!c.lower_gt_upper);
    }
}
