//! Scalar traits.
//!
//! Exact series arithmetic is written against [`Coeff`] (a commutative ring)
//! and [`FieldCoeff`] (a field); numerical evaluation is written against
//! [`Real`], a floating-point type with a known unit roundoff. The concrete
//! choices used by the rest of the crate are fixed by the aliases in the
//! crate root.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, One, Zero};
use twofloat::TwoFloat;

/// Coefficient ring for truncated q-series.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

/// Coefficient field: adds exact division, needed for inversion and for
/// multiplying by fractional exponents.
pub trait FieldCoeff: Coeff + Div<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

impl Coeff for i64 {
    fn from_i64(n: i64) -> Self {
        n
    }
}

impl Coeff for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Coeff for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl FieldCoeff for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Coeff for Rational64 {
    fn from_i64(n: i64) -> Self {
        Rational64::from_integer(n)
    }
}

impl FieldCoeff for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
}

impl Coeff for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl FieldCoeff for f64 {}

impl Coeff for TwoFloat {
    fn from_i64(n: i64) -> Self {
        TwoFloat::from(n)
    }
}

impl FieldCoeff for TwoFloat {}

/// Floating-point scalar for CM-value and L-value evaluation.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    /// Relative rounding error of one arithmetic operation.
    fn unit_roundoff() -> f64;

    fn from_f64(x: f64) -> Self;

    fn from_i64(n: i64) -> Self;

    fn to_f64(self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        <Self as Real>::from_i64(num).div_acc(<Self as Real>::from_i64(den))
    }

    /// Quotient correct to about the unit roundoff.
    fn div_acc(self, rhs: Self) -> Self {
        self / rhs
    }

    /// Fractional part in `[0, 1)`.
    fn frac(self) -> Self {
        self - self.floor()
    }

    /// `exp` correct to about the unit roundoff.
    fn exp_acc(self) -> Self {
        self.exp()
    }

    /// `(sin, cos)` correct to about the unit roundoff.
    fn sin_cos_acc(self) -> (Self, Self) {
        self.sin_cos()
    }
}

impl Real for f64 {
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for TwoFloat {
    fn unit_roundoff() -> f64 {
        // Arithmetic is good to about 2^-104; the bound leaves headroom for
        // division and the reduced-argument transcendentals.
        1e-30
    }

    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn from_i64(n: i64) -> Self {
        TwoFloat::from(n)
    }

    fn to_f64(self) -> f64 {
        f64::from(self)
    }

    fn div_acc(self, rhs: Self) -> Self {
        dd_div(self, rhs)
    }

    fn exp_acc(self) -> Self {
        dd_exp(self)
    }

    fn sin_cos_acc(self) -> (Self, Self) {
        dd_sin_cos(self)
    }
}

// twofloat's TwoFloat / TwoFloat skips the fused residual and is only good
// to about double precision; long division with exact remainders instead.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

// twofloat's own exp/sin/cos are accurate only to roughly double precision,
// so the double-double path uses Taylor series on reduced arguments.

fn dd_exp(x: TwoFloat) -> TwoFloat {
    let hi = x.hi();
    if hi > 709.0 {
        return TwoFloat::from(f64::INFINITY);
    }
    if hi < -745.0 {
        return TwoFloat::from(0.0);
    }
    let ln2 = <TwoFloat as FloatConst>::LN_2();
    let k = (hi / std::f64::consts::LN_2).round();
    let r = (x - ln2 * k) / 1024.0;
    // expm1(r) by Taylor series; |r| < 3.4e-4.
    let mut term = r;
    let mut sum = r;
    for i in 2..16 {
        term = term * r / (i as f64);
        sum += term;
        if term.hi().abs() < 1e-40 {
            break;
        }
    }
    // expm1(2y) = expm1(y) (2 + expm1(y)), applied ten times.
    for _ in 0..10 {
        sum = sum * (sum + 2.0);
    }
    (sum + 1.0) * 2f64.powi(k as i32)
}

fn dd_sin_cos(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let half_pi = <TwoFloat as FloatConst>::FRAC_PI_2();
    let m = (x / half_pi).hi().round();
    let r = x - half_pi * m;
    let r2 = r * r;
    let mut s = r;
    let mut c = TwoFloat::from(1.0);
    let mut ts = r;
    let mut tc = TwoFloat::from(1.0);
    for i in 1..30 {
        let k = (2 * i) as f64;
        ts = -ts * r2 / (k * (k + 1.0));
        tc = -tc * r2 / ((k - 1.0) * k);
        s += ts;
        c += tc;
        if ts.hi().abs() < 1e-40 && tc.hi().abs() < 1e-40 {
            break;
        }
    }
    match (m as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}
