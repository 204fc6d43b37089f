//! Values of modular functions at CM points with rigorous error bounds, and
//! traces of singular moduli.
//!
//! Every value is carried as a [`Ball`]: a complex midpoint and a radius
//! covering both the discarded series tail and floating-point rounding.
//! Exact values are only reported when the whole error budget is below the
//! requested tolerance.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modfun::{McKayThompson3A, SeriesId};
use crate::qseries::chi12;
use crate::quadforms::{genus_char, hurwitz_number, is_fundamental, level_reps, LevelRep};
use crate::scalar::Real;

/// Rounding fires when the total error is below this.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Sign applied to level-1 twisted traces.
pub const TWIST_SIGN: i64 = -1;

/// Normalization used by every trace in this module.
pub const TRACE_CONVENTION: &str = "positive-definite classes, each weighted by 1/|stabilizer in PSL2(Z)|";

/// Complex midpoint with an absolute error radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball<R> {
    pub mid: Complex<R>,
    pub rad: f64,
}

fn cabs<R: Real>(z: Complex<R>) -> f64 {
    z.norm_sqr().sqrt().to_f64()
}

impl<R: Real> Ball<R> {
    pub fn exact(mid: Complex<R>) -> Self {
        Ball { mid, rad: 0.0 }
    }

    pub fn from_real(x: R) -> Self {
        Ball::exact(Complex::new(x, R::zero()))
    }

    pub fn from_i64(n: i64) -> Self {
        Ball::from_real(<R as Real>::from_i64(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        let mut b = Ball::from_real(<R as Real>::from_ratio(num, den));
        b.rad = R::unit_roundoff() * (num as f64 / den as f64).abs();
        b
    }

    pub fn abs_upper(&self) -> f64 {
        cabs(self.mid) + self.rad
    }

    fn rounded(mid: Complex<R>, rad: f64) -> Self {
        Ball { mid, rad: rad + 4.0 * R::unit_roundoff() * cabs(mid) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Ball::rounded(self.mid + o.mid, self.rad + o.rad)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Ball::rounded(self.mid - o.mid, self.rad + o.rad)
    }

    pub fn neg(&self) -> Self {
        Ball { mid: -self.mid, rad: self.rad }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let rad = cabs(self.mid) * o.rad + cabs(o.mid) * self.rad + self.rad * o.rad;
        Ball::rounded(self.mid * o.mid, rad)
    }

    pub fn scale(&self, c: R) -> Self {
        let rad = self.rad * c.abs().to_f64();
        Ball::rounded(self.mid.scale(c), rad)
    }

    pub fn inv(&self) -> Result<Self> {
        let m = cabs(self.mid);
        if self.rad.is_nan() || m.is_nan() || self.rad >= m {
            return Err(Error::NonConvergent(format!(
                "division by a ball containing 0 (|mid| = {m:e}, rad = {:e})",
                self.rad
            )));
        }
        let rad = self.rad / (m * (m - self.rad));
        let n2 = self.mid.norm_sqr();
        let inv = Complex::new(self.mid.re.div_acc(n2), (-self.mid.im).div_acc(n2));
        Ok(Ball::rounded(inv, rad))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        if k < 0 {
            return self.inv()?.powi(-k);
        }
        let mut acc = Ball::from_i64(1);
        let mut base = *self;
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Evaluates a polynomial with rational coefficients (increasing degree).
    pub fn poly(&self, coeffs: &[(i64, i64)]) -> Self {
        let mut acc = Ball::from_i64(0);
        for &(n, d) in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Ball::from_ratio(n, d));
        }
        acc
    }
}

/// Exact value extracted from a numerical one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactValue {
    Integer(BigInt),
    Rational(BigRational),
    /// `(u + v sqrt(d)) / 2`.
    Quadratic {
        u: BigInt,
        v: BigInt,
        d: i64,
    },
}

impl std::fmt::Display for ExactValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactValue::Integer(n) => write!(f, "{n}"),
            ExactValue::Rational(q) => write!(f, "{q}"),
            ExactValue::Quadratic { u, v, d } => write!(f, "({u} + {v} sqrt({d}))/2"),
        }
    }
}

/// A numerically evaluated value with its error budget.
#[derive(Clone, Debug, PartialEq)]
pub struct CMValueReport<R> {
    pub value: Complex<R>,
    /// Upper bound for `|value - true value|` (series tail plus rounding).
    pub tail_bound: f64,
    pub rounded: Option<ExactValue>,
}

/// Nearest integer to `x`, exact beyond 53 bits for double-double input.
pub fn round_to_bigint<R: Real>(x: R) -> BigInt {
    let hi = x.to_f64().round();
    let big = BigInt::from_f64(hi).unwrap_or_default();
    let rem = x - <R as Real>::from_f64(hi);
    big + BigInt::from(rem.to_f64().round() as i64)
}

/// `n` as a scalar, keeping up to 106 bits for double-double.
pub fn bigint_to_real<R: Real>(n: &BigInt) -> R {
    let hi = n.to_f64().unwrap_or(f64::NAN);
    let rem = n - BigInt::from_f64(hi).unwrap_or_default();
    <R as Real>::from_f64(hi) + <R as Real>::from_f64(rem.to_f64().unwrap_or(0.0))
}

impl<R: Real> CMValueReport<R> {
    pub fn from_ball(b: Ball<R>) -> Self {
        CMValueReport { value: b.mid, tail_bound: b.rad, rounded: None }
    }

    /// Distance from the value to `re + 0i`.
    fn distance_real(&self, re: R) -> f64 {
        cabs(self.value - Complex::new(re, R::zero()))
    }

    /// Rounds to the nearest integer when the budget allows.
    pub fn with_integer(mut self, tol: f64) -> Result<Self> {
        if self.tail_bound >= tol {
            return Ok(self);
        }
        let n = round_to_bigint(self.value.re);
        let err = self.distance_real(bigint_to_real(&n)) + self.tail_bound;
        if err >= tol {
            return Err(Error::RoundingFailed(format!(
                "{} is not within {tol:e} of an integer (distance {err:e})",
                self.value
            )));
        }
        self.rounded = Some(ExactValue::Integer(n));
        Ok(self)
    }

    /// Rounds to a rational with denominator dividing `den`.
    pub fn with_rational(mut self, den: i64, tol: f64) -> Result<Self> {
        if self.tail_bound >= tol {
            return Ok(self);
        }
        let d = <R as Real>::from_i64(den);
        let n = round_to_bigint(self.value.re * d);
        let approx = bigint_to_real::<R>(&n).div_acc(d);
        let err = self.distance_real(approx) + self.tail_bound;
        if err >= tol {
            return Err(Error::RoundingFailed(format!(
                "{} is not within {tol:e} of a rational with denominator {den}",
                self.value
            )));
        }
        self.rounded = Some(ExactValue::Rational(BigRational::new(n, den.into())));
        Ok(self)
    }

    /// Rounds to `(u + v sqrt(d))/2` with `d < 0`, `u = v d (mod 2)`.
    pub fn with_quadratic(mut self, d: i64, tol: f64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidArgument(format!("quadratic rounding needs d < 0, got {d}")));
        }
        if self.tail_bound >= tol {
            return Ok(self);
        }
        let two = <R as Real>::from_i64(2);
        let s = (-<R as Real>::from_i64(d)).sqrt();
        let u = round_to_bigint(self.value.re * two);
        let v = round_to_bigint((self.value.im * two).div_acc(s));
        let approx = Complex::new(bigint_to_real::<R>(&u) / two, bigint_to_real::<R>(&v) * s / two);
        let err = cabs(self.value - approx) + self.tail_bound;
        let parity_ok = ((&u - &v * BigInt::from(d)) % 2u32).is_zero();
        if err >= tol || !parity_ok {
            return Err(Error::RoundingFailed(format!(
                "{} is not within {tol:e} of an integer of Q(sqrt({d}))",
                self.value
            )));
        }
        self.rounded = Some(ExactValue::Quadratic { u, v, d });
        Ok(self)
    }

    pub fn integer(&self) -> Option<&BigInt> {
        match &self.rounded {
            Some(ExactValue::Integer(n)) => Some(n),
            _ => None,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match &self.rounded {
            Some(ExactValue::Rational(q)) => Some(q),
            _ => None,
        }
    }
}

fn check_upper_half_plane<R: Real>(tau: Complex<R>) -> Result<()> {
    let y = tau.im.to_f64();
    if y.is_nan() || y <= 0.01 {
        return Err(Error::NonConvergent(format!("Im(tau) = {y} is too small (need > 0.01)")));
    }
    Ok(())
}

const MAX_ETA_TERMS: i64 = 100_000;

/// `eta(tau) = sum (12/n) q^(n^2/24)`, summed until the tail bound is below
/// `target`.
pub fn eta_ball<R: Real>(tau: Complex<R>, target: f64) -> Result<Ball<R>> {
    check_upper_half_plane(tau)?;
    let two_pi = R::PI() + R::PI();
    let c24 = <R as Real>::from_i64(24);
    // |q^(1/24)| = rho.
    let log_rho = -(two_pi * tau.im).div_acc(c24).to_f64();
    let mut sum = Complex::new(R::zero(), R::zero());
    let mut abs_sum = 0.0;
    let mut n = 1i64;
    loop {
        let chi = chi12(n);
        if chi != 0 {
            let nn = <R as Real>::from_i64(n * n);
            let modulus = (-(two_pi * tau.im * nn).div_acc(c24)).exp_acc();
            let (s, c) = (two_pi * (tau.re * nn).div_acc(c24).frac()).sin_cos_acc();
            let term = Complex::new(c * modulus, s * modulus);
            abs_sum += modulus.to_f64();
            if chi > 0 {
                sum = sum + term;
            } else {
                sum = sum - term;
            }
        }
        // Tail from n + 1 on: rho^((n+1)^2) / (1 - rho^(2n+2)).
        let m = (n + 1) as f64;
        let tail = (log_rho * m * m).exp() / (1.0 - (log_rho * 2.0 * m).exp());
        if tail < target {
            let rad = tail + 16.0 * R::unit_roundoff() * (abs_sum + n as f64 * cabs(sum));
            return Ok(Ball { mid: sum, rad });
        }
        n += 1;
        if n > MAX_ETA_TERMS {
            return Err(Error::NonConvergent(format!(
                "eta series did not reach tail {target:e} within {MAX_ETA_TERMS} terms"
            )));
        }
    }
}

/// `eta(tau)` with absolute truncation tolerance `tol`.
pub fn eta_numeric<R: Real>(tau: Complex<R>, tol: f64) -> Result<CMValueReport<R>> {
    Ok(CMValueReport::from_ball(eta_ball(tau, tol)?))
}

/// `eta(k tau)` to full working precision.
fn eta_at<R: Real>(tau: Complex<R>, num: i64, den: i64) -> Result<Ball<R>> {
    let t = tau.scale(<R as Real>::from_ratio(num, den));
    let y = t.im.to_f64();
    // |eta| is at least half of its leading term for Im > 0.01 well before
    // truncation matters; aim the tail at the relative roundoff.
    let lead = (-2.0 * std::f64::consts::PI * y / 24.0).exp();
    eta_ball(t, R::unit_roundoff() * lead * 0.25)
}

/// Quotient `prod eta(k tau)^e` over `(k_num, k_den, e)`.
fn eta_product<R: Real>(tau: Complex<R>, factors: &[(i64, i64, i32)]) -> Result<Ball<R>> {
    let mut acc = Ball::from_i64(1);
    for &(num, den, e) in factors {
        acc = acc.mul(&eta_at(tau, num, den)?.powi(e)?);
    }
    Ok(acc)
}

fn fn_ball<R: Real>(id: SeriesId, tau: Complex<R>) -> Result<Ball<R>> {
    match id {
        SeriesId::J => {
            let e1 = eta_at(tau, 1, 1)?;
            let e2 = eta_at(tau, 2, 1)?;
            let eh = eta_at(tau, 1, 2)?;
            let a = e1.div(&e2)?.powi(24)?;
            let b = e1.div(&eh)?.powi(24)?.scale(<R as Real>::from_i64(4096));
            let c = eh.mul(&e2).powi(24)?.div(&e1.powi(48)?)?.scale(<R as Real>::from_i64(4096));
            Ok(a.add(&b).sub(&c).add(&Ball::from_i64(768)))
        }
        SeriesId::T3 => Ok(eta_product(tau, &[(1, 1, 12), (3, 1, -12)])?.add(&Ball::from_i64(12))),
        SeriesId::T6 => Ok(eta_product(tau, &[(1, 1, 5), (3, 1, 1), (2, 1, -1), (6, 1, -5)])?.add(&Ball::from_i64(5))),
        SeriesId::Fon => Ok(fn_ball(SeriesId::J, tau)?.poly(&[(80256, 1), (-1489, 2), (1, 2)])),
        SeriesId::Fon3a => Ok(fn_ball(SeriesId::T3, tau)?.poly(&[(-54, 1), (-1, 2), (1, 2)])),
        other => Err(Error::InvalidArgument(format!("{other} is not a modular function with a numerical evaluator"))),
    }
}

/// Value of `J`, `T3`, `T6`, `FON` or `FON3A` at `tau`. The tolerance only
/// bounds acceptable output: if the error budget exceeds it the evaluation
/// is reported as non-convergent.
pub fn fn_numeric<R: Real>(id: SeriesId, tau: Complex<R>, tol: f64) -> Result<CMValueReport<R>> {
    let b = fn_ball(id, tau)?;
    if b.rad >= tol {
        return Err(Error::NonConvergent(format!("{id} at {tau}: error bound {:e} exceeds tolerance {tol:e}", b.rad)));
    }
    Ok(CMValueReport::from_ball(b))
}

/// A trace with the data it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport<R> {
    pub report: CMValueReport<R>,
    pub level: i64,
    pub disc: i64,
    pub classes: usize,
    pub convention: &'static str,
}

fn check_level(id: SeriesId, n: i64) -> Result<()> {
    if n % id.level() != 0 {
        return Err(Error::InvalidArgument(format!("{id} lives on level {}, which does not divide {n}", id.level())));
    }
    Ok(())
}

fn weighted_sum<R: Real>(id: SeriesId, reps: &[LevelRep<i64>]) -> Result<Ball<R>> {
    let mut acc = Ball::from_i64(0);
    for rep in reps {
        let tau = rep.form.tau_of()?.to_complex::<R>();
        let v = fn_ball(id, tau)?;
        let w = rep.weight;
        acc = acc.add(&v.mul(&Ball::from_ratio(*w.numer(), *w.denom())));
    }
    Ok(acc)
}

/// `tr_N(1 | D)`: the weighted number of classes, exactly.
pub fn trace_one(n: i64, d: i64) -> Result<Ratio<i64>> {
    match level_reps::<i64>(n, d) {
        Ok(reps) => Ok(reps.iter().map(|r| r.weight).sum()),
        Err(Error::NoSquareRoot { .. }) => Ok(Ratio::from_integer(0)),
        Err(e) => Err(e),
    }
}

/// `tr_N(f | D) = sum over Q_N(D)/Gamma_0(N) of f(tau_Q) / |stabilizer|`,
/// rounded to a rational with denominator dividing 6.
pub fn trace<R: Real>(id: SeriesId, n: i64, d: i64, tol: f64) -> Result<TraceReport<R>> {
    check_level(id, n)?;
    let reps = level_reps::<i64>(n, d)?;
    let report = CMValueReport::from_ball(weighted_sum::<R>(id, &reps)?).with_rational(6, tol)?;
    Ok(TraceReport { report, level: n, disc: d, classes: reps.len(), convention: TRACE_CONVENTION })
}

/// Level-1 twisted trace `sign * sum chi_{D0}(Q) f(tau_Q) / (|stab| sqrt(D0))`
/// for a positive fundamental `D0 | D` with `D/D0` a discriminant.
pub fn twisted_trace<R: Real>(id: SeriesId, d: i64, d0: i64, tol: f64) -> Result<TraceReport<R>> {
    check_level(id, 1)?;
    if d0 <= 1 || !is_fundamental(d0) {
        return Err(Error::NotFundamental(d0));
    }
    let reps = level_reps::<i64>(1, d)?;
    let mut acc = Ball::from_i64(0);
    for rep in &reps {
        let chi = genus_char(&rep.form, d0)?;
        let tau = rep.form.tau_of()?.to_complex::<R>();
        let w = rep.weight;
        let term = fn_ball(id, tau)?.mul(&Ball::from_ratio(chi * *w.numer(), *w.denom()));
        acc = acc.add(&term);
    }
    let sqrt_d0 = Ball::from_real(<R as Real>::from_i64(d0).sqrt());
    let sqrt_d0 = Ball { rad: R::unit_roundoff() * (d0 as f64).sqrt(), ..sqrt_d0 };
    let total = acc.div(&sqrt_d0)?.scale(<R as Real>::from_i64(TWIST_SIGN));
    let report = CMValueReport::from_ball(total).with_integer(tol)?;
    Ok(TraceReport { report, level: 1, disc: d, classes: reps.len(), convention: TRACE_CONVENTION })
}

/// `(1/sqrt(D)) (sum over Q_N(D, r) - sum over Q_N(D, -r))`, with
/// `sqrt(D) = i sqrt(|D|)`, rounded to an integer.
pub fn skew_trace<R: Real>(id: SeriesId, n: i64, d: i64, r: i64, tol: f64) -> Result<TraceReport<R>> {
    check_level(id, n)?;
    let reps = level_reps::<i64>(n, d)?;
    let r = r.rem_euclid(2 * n);
    let pick =
        |s: i64| -> Vec<LevelRep<i64>> { reps.iter().filter(|x| x.residue.rem_euclid(2 * n) == s).cloned().collect() };
    let plus = pick(r);
    let minus = pick((-r).rem_euclid(2 * n));
    if plus.is_empty() {
        return Err(Error::NoSquareRoot { disc: d, modulus: 4 * n });
    }
    let diff = weighted_sum::<R>(id, &plus)?.sub(&weighted_sum::<R>(id, &minus)?);
    let s = <R as Real>::from_i64(-d).sqrt();
    let sqrt_d = Ball { mid: Complex::new(R::zero(), s), rad: R::unit_roundoff() * (-d as f64).sqrt() };
    let report = CMValueReport::from_ball(diff.div(&sqrt_d)?).with_integer(tol)?;
    Ok(TraceReport { report, level: n, disc: d, classes: plus.len() + minus.len(), convention: TRACE_CONVENTION })
}

/// `C^ON_3A(D) = 12 tr_1(1|D) - 12 tr_3(1|D) + tr_3(f^ON_3A | D)`.
pub fn c3a_via_traces_report<R: Real>(d: i64, tol: f64) -> Result<CMValueReport<R>> {
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let tr1 = hurwitz_number(d)?;
    let tr3 = trace_one(3, d)?;
    let exact = tr1 * 12 - tr3 * 12;
    let mut total = Ball::from_ratio(*exact.numer(), *exact.denom());
    match level_reps::<i64>(3, d) {
        Ok(reps) => total = total.add(&weighted_sum::<R>(SeriesId::Fon3a, &reps)?),
        Err(Error::NoSquareRoot { .. }) => {}
        Err(e) => return Err(e),
    }
    let report = CMValueReport::from_ball(total).with_integer(tol)?;
    if report.rounded.is_none() {
        return Err(Error::NonConvergent(format!(
            "error bound {:e} for D = {d} exceeds tolerance {tol:e}",
            report.tail_bound
        )));
    }
    Ok(report)
}

/// The CM-trace route to `C^ON_3A(D)`.
pub fn c3a_via_traces<R: Real>(d: i64, tol: f64) -> Result<BigInt> {
    let r = c3a_via_traces_report::<R>(d, tol)?;
    Ok(r.integer().cloned().expect("rounded to an integer"))
}

/// Both routes to `C^ON_3A(D)`; fails if they disagree.
pub fn c3a_cross_checked<R: Real>(d: i64, mt: &McKayThompson3A, tol: f64) -> Result<BigInt> {
    let series = mt.coefficient(d)?;
    let traces = c3a_via_traces::<R>(d, tol)?;
    if series != traces {
        return Err(Error::CrossCheckFailed { disc: d, series: series.to_string(), traces: traces.to_string() });
    }
    Ok(series)
}
