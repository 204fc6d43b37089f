//! Truncated Laurent series in fractional powers of `q`.
//!
//! A [`FracSeries`] stores the coefficients of `q^(n/d)` for a fixed
//! denominator `d` and every numerator `n` in a window `lo <= n < prec`.
//! Exponents at or beyond `prec/d` are unknown. All operations track the
//! provable precision of their result, so a coefficient that is reported is
//! exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, FieldCoeff};

#[derive(Clone, Debug, PartialEq)]
pub struct FracSeries<T> {
    denom: i64,
    lo: i64,
    coeffs: Vec<T>,
}

impl<T: Coeff> FracSeries<T> {
    /// Series with dense coefficients `coeffs[k]` at exponent `(lo + k)/denom`;
    /// its precision is `lo + coeffs.len()`.
    pub fn from_dense(denom: i64, lo: i64, coeffs: Vec<T>) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        FracSeries { denom, lo, coeffs }
    }

    /// Series known for numerators `< prec`, with the given sparse terms.
    /// Terms at or beyond `prec` are dropped.
    pub fn from_terms<I>(denom: i64, prec: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
    {
        let terms: Vec<(i64, T)> = terms.into_iter().filter(|(n, _)| *n < prec).collect();
        let lo = terms.iter().map(|(n, _)| *n).min().unwrap_or(prec);
        let mut coeffs = vec![T::zero(); (prec - lo) as usize];
        for (n, c) in terms {
            let slot = &mut coeffs[(n - lo) as usize];
            *slot = slot.clone() + c;
        }
        Self::from_dense(denom, lo, coeffs)
    }

    /// `O(q^(prec/denom))`.
    pub fn zero(denom: i64, prec: i64) -> Self {
        Self::from_dense(denom, prec, Vec::new())
    }

    /// The constant `c`, known below `q^(prec/denom)`.
    pub fn constant(c: T, denom: i64, prec: i64) -> Self {
        Self::from_terms(denom, prec, [(0, c)])
    }

    pub fn one(denom: i64, prec: i64) -> Self {
        Self::constant(T::one(), denom, prec)
    }

    /// `c q^(num/denom)`, known below `q^(prec/denom)`.
    pub fn monomial(c: T, num: i64, denom: i64, prec: i64) -> Self {
        Self::from_terms(denom, prec, [(num, c)])
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Smallest stored exponent numerator.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Exponent numerators `>= prec` are unknown.
    pub fn prec(&self) -> i64 {
        self.lo + self.coeffs.len() as i64
    }

    /// The precision as an exponent: the series is known modulo
    /// `O(q^prec_exponent)`.
    pub fn prec_exponent(&self) -> Ratio<i64> {
        Ratio::new(self.prec(), self.denom)
    }

    pub fn dense_coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient at exponent `num/denom` in the series' own lattice:
    /// `None` if unknown, zero below the window.
    pub fn coeff_num(&self, num: i64) -> Option<T> {
        if num >= self.prec() {
            None
        } else if num < self.lo {
            Some(T::zero())
        } else {
            Some(self.coeffs[(num - self.lo) as usize].clone())
        }
    }

    /// Coefficient of `q^(num/den)`; zero off the lattice, `None` if the exponent
    /// is not resolved.
    pub fn coeff(&self, num: i64, den: i64) -> Option<T> {
        let e = Ratio::new(num, den);
        if e >= self.prec_exponent() {
            return None;
        }
        let scaled = e * self.denom;
        if !scaled.is_integer() {
            return Some(T::zero());
        }
        self.coeff_num(scaled.to_integer())
    }

    /// Integer exponent shorthand for `coeff(n, 1)`.
    pub fn coeff_int(&self, n: i64) -> Option<T> {
        self.coeff(n, 1)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Ratio<i64>, &T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (Ratio::new(self.lo + k as i64, self.denom), c))
    }

    /// Numerator of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| self.lo + k as i64)
    }

    /// True when no coefficient in the window is nonzero.
    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drops leading zero coefficients (the window start moves up).
    pub fn trimmed(&self) -> Self {
        match self.valuation() {
            Some(v) => Self::from_dense(self.denom, v, self.coeffs[(v - self.lo) as usize..].to_vec()),
            None => Self::zero(self.denom, self.prec()),
        }
    }

    /// Forget coefficients at numerators `>= prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.lo {
            return Self::zero(self.denom, prec);
        }
        Self::from_dense(self.denom, self.lo, self.coeffs[..(prec - self.lo) as usize].to_vec())
    }

    /// Forget every exponent `>= num/den`.
    pub fn truncate_exponent(&self, num: i64, den: i64) -> Self {
        let bound = Ratio::new(num, den) * self.denom;
        self.truncate(bound.ceil().to_integer())
    }

    /// Same series on the finer lattice `(1/new_denom) Z`; `new_denom` must be a
    /// multiple of the current denominator.
    pub fn with_denom(&self, new_denom: i64) -> Self {
        assert!(new_denom % self.denom == 0, "denominator {new_denom} is not a multiple of {}", self.denom);
        let k = new_denom / self.denom;
        if k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() * k as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Self::from_dense(new_denom, self.lo * k, coeffs)
    }

    /// Moves to the coarsest lattice holding every nonzero term.
    pub fn simplify_denom(&self) -> Self {
        let mut g = self.denom;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(self.lo + k as i64));
            }
            if g == 1 {
                return self.clone();
            }
        }
        let new_denom = self.denom / g;
        // Known region is exponents < prec/denom; coarse numerators n need
        // n * g < prec, and the bound must not overshoot the fine window.
        let new_prec = Ratio::new(self.prec(), g).floor().to_integer();
        let terms = self.terms_num().map(|(n, c)| (n / g, c.clone())).collect::<Vec<_>>();
        Self::from_terms(new_denom, new_prec, terms)
    }

    fn terms_num(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.lo + k as i64, c))
    }

    fn common_denom(&self, other: &Self) -> (Self, Self) {
        let d = self.denom.lcm(&other.denom);
        (self.with_denom(d), other.with_denom(d))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        let (a, b) = self.common_denom(other);
        let prec = a.prec().min(b.prec());
        let lo = a.lo.min(b.lo).min(prec);
        let coeffs = (lo..prec).map(|n| op(a.coeff_num(n).unwrap(), b.coeff_num(n).unwrap())).collect();
        Self::from_dense(a.denom, lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::from_dense(self.denom, self.lo, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_dense(self.denom, self.lo, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Adds a constant (exact, so the precision is unchanged).
    pub fn add_scalar(&self, c: T) -> Self {
        self.add(&Self::constant(c, self.denom, self.prec()))
    }

    /// Cauchy product, known to `min(prec_a + val_b, prec_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common_denom(other);
        let (a, b) = (a.trimmed(), b.trimmed());
        let prec = (a.prec() + b.lo).min(b.prec() + a.lo);
        let lo = (a.lo + b.lo).min(prec);
        let len = (prec - lo) as usize;
        let mut coeffs = vec![T::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                if y.is_zero() {
                    continue;
                }
                let slot = &mut coeffs[i + j];
                *slot = slot.clone() + x.clone() * y.clone();
            }
        }
        Self::from_dense(a.denom, lo, coeffs)
    }

    /// `a^k` for `k >= 0` by square-and-multiply. `a^0` is `1` with the relative
    /// precision of `a`.
    pub fn pow_nonneg(&self, k: u32) -> Self {
        let a = self.trimmed();
        let rel = a.prec() - a.lo;
        let mut acc = Self::one(a.denom, rel);
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `q -> q^(num/den)`: every exponent is multiplied by `num/den`.
    pub fn substitute(&self, num: i64, den: i64) -> Self {
        assert!(num > 0 && den > 0, "substitution factor must be positive");
        let terms = self.terms_num().map(|(n, c)| (n * num, c.clone())).collect::<Vec<_>>();
        Self::from_terms(self.denom * den, self.prec() * num, terms).simplify_denom()
    }

    /// `q -> q^k`, i.e. `f(tau) -> f(k tau)`.
    pub fn rescale(&self, k: i64) -> Self {
        self.substitute(k, 1)
    }

    /// Multiplies by `q^(num/den)`.
    pub fn shift(&self, num: i64, den: i64) -> Self {
        let d = self.denom.lcm(&den);
        let a = self.with_denom(d);
        let s = num * (d / den);
        Self::from_dense(d, a.lo + s, a.coeffs)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> FracSeries<U> {
        FracSeries::from_dense(self.denom, self.lo, self.coeffs.iter().map(f).collect())
    }
}

impl<T: FieldCoeff> FracSeries<T> {
    /// Multiplicative inverse, with `a * invert(a) = 1 + O(q^((prec - val)/d))`.
    pub fn invert(&self) -> Result<Self> {
        let a = self.trimmed();
        if a.coeffs.is_empty() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let n = a.coeffs.len();
        let lead_inv = T::one() / a.coeffs[0].clone();
        let mut b: Vec<T> = Vec::with_capacity(n);
        b.push(lead_inv.clone());
        for k in 1..n {
            let mut s = T::zero();
            for i in 1..=k {
                if a.coeffs[i].is_zero() {
                    continue;
                }
                s = s + a.coeffs[i].clone() * b[k - i].clone();
            }
            b.push(-(s * lead_inv.clone()));
        }
        Ok(Self::from_dense(a.denom, -a.lo, b))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    /// `a^k` for any integer `k`; negative powers need `a` invertible.
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow_nonneg(k as u32))
        } else {
            Ok(self.invert()?.pow_nonneg((-k) as u32))
        }
    }

    /// `q d/dq`: the term `c q^e` becomes `c e q^e`.
    pub fn q_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(
                |(k, c)| {
                    if c.is_zero() {
                        c.clone()
                    } else {
                        c.clone() * T::from_ratio(self.lo + k as i64, self.denom)
                    }
                },
            )
            .collect();
        Self::from_dense(self.denom, self.lo, coeffs)
    }

    /// Evaluates a polynomial (coefficients in increasing degree) at this
    /// series, by Horner's rule.
    pub fn eval_poly(&self, poly: &[T]) -> Self {
        let Some((top, rest)) = poly.split_last() else {
            return Self::zero(self.denom, self.prec());
        };
        if rest.is_empty() {
            return Self::constant(top.clone(), self.denom, self.prec());
        }
        // Constants are exact; starting from `top * x` avoids charging the
        // leading constant a spurious truncation.
        let mut acc = self.scale(top);
        for (k, c) in rest.iter().enumerate().rev() {
            acc = acc.add_scalar(c.clone());
            if k > 0 {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Coeff> $tr<&FracSeries<T>> for &FracSeries<T> {
            type Output = FracSeries<T>;
            fn $method(self, rhs: &FracSeries<T>) -> FracSeries<T> {
                FracSeries::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<T: Coeff> Neg for &FracSeries<T> {
    type Output = FracSeries<T>;
    fn neg(self) -> FracSeries<T> {
        FracSeries::neg(self)
    }
}

fn fmt_exponent(e: Ratio<i64>) -> String {
    if e.is_integer() {
        match e.to_integer() {
            1 => "q".to_string(),
            n => format!("q^{n}"),
        }
    } else {
        format!("q^({}/{})", e.numer(), e.denom())
    }
}

impl<T: Coeff + Signed + fmt::Display> fmt::Display for FracSeries<T> {
    /// `q^-1 + 744 + 196884 q + ... + O(q^4)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_exponent(e))?;
            } else {
                write!(f, "{mag} {}", fmt_exponent(e))?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({})", fmt_exponent(self.prec_exponent()))
    }
}

/// Dirichlet character `(12/n)` appearing in the Euler identity for eta.
pub fn chi12(n: i64) -> i64 {
    match n.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// `eta(tau) = sum_{n>0} (12/n) q^(n^2/24)`, known for exponents `< prec`.
pub fn eta_series<T: Coeff>(prec: i64) -> FracSeries<T> {
    eta_scaled(1, 1, prec)
}

/// `eta((num/den) tau)`, known for exponents `< prec`.
pub fn eta_scaled<T: Coeff>(num: i64, den: i64, prec: i64) -> FracSeries<T> {
    // Exponent of the n-th term is num * n^2 / (24 den).
    let denom = 24 * den;
    let prec = prec * denom;
    let mut terms = Vec::new();
    let mut n = 1i64;
    while num * n * n < prec {
        let c = chi12(n);
        if c != 0 {
            terms.push((num * n * n, T::from_i64(c)));
        }
        n += 1;
    }
    FracSeries::from_terms(denom, prec, terms)
}

/// `theta_r(tau) = sum_{n = r mod 2} q^(n^2/4)` for `r` in `{0, 1}`.
pub fn theta_r<T: Coeff>(r: i64, prec: i64) -> FracSeries<T> {
    let prec_num = 4 * prec;
    let r = r.rem_euclid(2);
    let mut terms = Vec::new();
    let mut n = r;
    while n * n < prec_num {
        // n and -n both contribute, except n = 0.
        let mult = if n == 0 { 1 } else { 2 };
        terms.push((n * n, T::from_i64(mult)));
        n += 2;
    }
    FracSeries::from_terms(4, prec_num, terms)
}

/// `theta^1_{m,r}(tau) = sum_{n = r mod 2m} n q^(n^2/(4m))`.
pub fn theta1_mr<T: Coeff>(m: i64, r: i64, prec: i64) -> FracSeries<T> {
    assert!(m > 0, "index m must be positive");
    let denom = 4 * m;
    let prec_num = denom * prec;
    let step = 2 * m;
    let r = r.rem_euclid(step);
    let mut terms = Vec::new();
    // Positive representatives r, r + 2m, ... and negative ones r - 2m, ...
    let mut n = r;
    while n * n < prec_num {
        if n != 0 {
            terms.push((n * n, T::from_i64(n)));
        }
        n += step;
    }
    let mut n = r - step;
    while n * n < prec_num {
        if n != 0 {
            terms.push((n * n, T::from_i64(n)));
        }
        n -= step;
    }
    FracSeries::from_terms(denom, prec_num, terms)
}
