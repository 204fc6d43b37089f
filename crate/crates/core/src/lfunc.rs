//! Central values `L_f(1)` of weight-2 eta products and their quadratic
//! twists, and modularity spot checks `a_E(p) = a_f(p)`.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_fundamental, kronecker, primes_up_to};
use crate::elliptic::{a_p, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::modfun::SeriesId;
use crate::qseries::FracSeries;

/// Level of `f15 = eta(tau) eta(3tau) eta(5tau) eta(15tau)`.
pub const F15_LEVEL: u64 = 15;

/// Functional-equation sign of `L_{f15}`, equal to `-w_15`.
pub const F15_SIGN: i64 = 1;

/// Coefficient sizes are bounded by `|a_n| / n <= 2` in the tail estimate.
const COEFF_RATIO_BOUND: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueReport {
    pub value: f64,
    pub terms_used: usize,
    pub sign: i64,
    pub tail_estimate: f64,
}

/// `prod_{n >= 1} (1 - q^n)` through `q^(prec - 1)`, via pentagonal numbers.
fn euler_product(prec: i64) -> FracSeries<i64> {
    let mut terms = Vec::new();
    let mut m = 0i64;
    loop {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let e1 = m * (3 * m - 1) / 2;
        let e2 = m * (3 * m + 1) / 2;
        if e1 >= prec {
            break;
        }
        terms.push((e1, sign));
        if m > 0 && e2 < prec {
            terms.push((e2, sign));
        }
        m += 1;
    }
    FracSeries::from_terms(1, prec, terms)
}

/// `[a_0, a_1, ..., a_{n_max}]` for the cusp form `id` (only `F15`).
pub fn a_coeffs(id: SeriesId, n_max: usize) -> Result<Vec<i64>> {
    if id != SeriesId::F15 {
        return Err(Error::InvalidArgument(format!("no L-function data for {}", id.name())));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    // f15 = q * P(q) P(q^3) P(q^5) P(q^15), P = prod (1 - q^n).
    let prec = n_max as i64;
    let p = euler_product(prec);
    let mut acc = p.clone();
    for k in [3, 5, 15] {
        acc = acc.mul(&p.rescale(k).truncate(prec));
    }
    let mut out = vec![0i64; n_max + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = acc.coeff_int(n as i64 - 1).unwrap_or(0);
    }
    Ok(out)
}

fn decay(level: u64) -> f64 {
    2.0 * PI / (level as f64).sqrt()
}

/// Bound on the truncated tail `sum_{n > m}` of the folded sum.
pub fn tail_bound(level: u64, sign: i64, m: usize) -> f64 {
    let c = decay(level);
    (1.0 + sign.abs() as f64) * COEFF_RATIO_BOUND * (-c * (m as f64 + 1.0)).exp() / (1.0 - (-c).exp())
}

/// Smallest `m` with `tail_bound(level, sign, m) < tol`.
pub fn terms_needed(level: u64, sign: i64, tol: f64) -> usize {
    let c = decay(level);
    let lead = (1.0 + sign.abs() as f64) * COEFF_RATIO_BOUND / (1.0 - (-c).exp());
    let mut m = ((lead / tol).ln() / c).max(0.0) as usize;
    while m > 0 && tail_bound(level, sign, m - 1) < tol {
        m -= 1;
    }
    while tail_bound(level, sign, m) >= tol {
        m += 1;
    }
    m
}

/// `L(1) = (1 + sign) sum_{n >= 1} (a_n / n) exp(-2 pi n / sqrt(N))`, with
/// `coeffs[n] = a_n`.
pub fn l_value_at_1(coeffs: &[i64], level: u64, sign: i64, tol: f64) -> Result<LValueReport> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if sign == -1 {
        return Ok(LValueReport { value: 0.0, terms_used: 0, sign, tail_estimate: 0.0 });
    }
    let m = terms_needed(level, sign, tol);
    let available = coeffs.len().saturating_sub(1);
    if m > available {
        return Err(Error::InsufficientCoefficients { needed: m, available });
    }
    let c = decay(level);
    let ratio = (-c).exp();
    let mut w = 1.0;
    let mut sum = 0.0;
    for (n, &a) in coeffs.iter().enumerate().take(m + 1).skip(1) {
        w *= ratio;
        sum += a as f64 / n as f64 * w;
    }
    Ok(LValueReport { value: 2.0 * sum, terms_used: m, sign, tail_estimate: tail_bound(level, sign, m) })
}

/// `L_{f15}(1)`.
pub fn f15_l_value(tol: f64) -> Result<LValueReport> {
    let m = terms_needed(F15_LEVEL, F15_SIGN, tol);
    let a = a_coeffs(SeriesId::F15, m)?;
    l_value_at_1(&a, F15_LEVEL, F15_SIGN, tol)
}

/// Sign of the twist by `d`: `(d | -N) * sign(f)`.
pub fn twist_sign(d: i64, base_level: u64, base_sign: i64) -> i64 {
    kronecker(d, -(base_level as i64)) * base_sign
}

fn check_twist(id: SeriesId, d: i64) -> Result<()> {
    if id != SeriesId::F15 {
        return Err(Error::InvalidArgument(format!("no L-function data for {}", id.name())));
    }
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::InvalidArgument(format!("{d} is not a negative fundamental discriminant")));
    }
    if d.gcd(&(F15_LEVEL as i64)) != 1 {
        return Err(Error::InvalidArgument(format!("{d} is not coprime to {F15_LEVEL}")));
    }
    Ok(())
}

/// Twisted coefficients `a_n (d | n)` and the level `15 d^2`.
pub fn twisted_coeffs(id: SeriesId, d: i64, n_max: usize) -> Result<(Vec<i64>, u64)> {
    check_twist(id, d)?;
    let a = a_coeffs(id, n_max)?;
    let tw = a.iter().enumerate().map(|(n, &c)| c * kronecker(d, n as i64)).collect();
    Ok((tw, F15_LEVEL * (d * d) as u64))
}

/// `L_{f15 (x) chi_d}(1)` for a negative fundamental `d` prime to 15.
pub fn twisted_l_value(id: SeriesId, d: i64, tol: f64) -> Result<LValueReport> {
    twisted_l_value_with_sign(id, d, tol, None)
}

/// As [`twisted_l_value`], optionally forcing the functional-equation sign.
pub fn twisted_l_value_with_sign(id: SeriesId, d: i64, tol: f64, sign: Option<i64>) -> Result<LValueReport> {
    check_twist(id, d)?;
    let level = F15_LEVEL * (d * d) as u64;
    let sign = sign.unwrap_or_else(|| twist_sign(d, F15_LEVEL, F15_SIGN));
    let m = if sign == 1 { terms_needed(level, sign, tol) } else { 1 };
    let (coeffs, level) = twisted_coeffs(id, d, m.max(1))?;
    l_value_at_1(&coeffs, level, sign, tol)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularityRow {
    pub p: u64,
    pub a_e: i64,
    pub a_f: i64,
    /// `p` divides the level; the row is reported, not asserted.
    pub bad: bool,
    pub matches: bool,
}

/// Compares `a_E(p)` (point counts on the model as given) with `coeffs[p]`
/// for primes `p <= p_max`.
pub fn modularity_check(e: &WeierstrassCurve, coeffs: &[i64], level: u64, p_max: u64) -> Result<Vec<ModularityRow>> {
    let available = coeffs.len().saturating_sub(1);
    if (p_max as usize) > available {
        return Err(Error::InsufficientCoefficients { needed: p_max as usize, available });
    }
    primes_up_to(p_max)
        .into_iter()
        .map(|p| {
            let a_e = a_p(e, p)?;
            let a_f = coeffs[p as usize];
            Ok(ModularityRow { p, a_e, a_f, bad: level.is_multiple_of(p), matches: a_e == a_f })
        })
        .collect()
}
