//! Weierstrass models over Q: invariants, the twist families of the
//! conductor-15 and conductor-14 curves, point counts mod p, torsion and the
//! group law.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{big_mod, is_prime, legendre_mod_p, trial_factor};
use crate::error::{Error, Result};

/// Primes up to this bound are accepted by [`count_points_mod_p`].
pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

impl WeierstrassCurve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Self {
        WeierstrassCurve { a1, a2, a3, a4, a6 }
    }

    pub fn from_i64(a: [i64; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a.map(big);
        WeierstrassCurve::new(a1, a2, a3, a4, a6)
    }

    /// `y^2 = x^3 + A x + B`.
    pub fn short(a: BigInt, b: BigInt) -> Self {
        WeierstrassCurve::new(BigInt::zero(), BigInt::zero(), BigInt::zero(), a, b)
    }

    pub fn is_short(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    pub fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + big(4) * &self.a2
    }

    pub fn b4(&self) -> BigInt {
        &self.a1 * &self.a3 + big(2) * &self.a4
    }

    pub fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + big(4) * &self.a6
    }

    pub fn b8(&self) -> BigInt {
        &self.a1 * &self.a1 * &self.a6 - &self.a1 * &self.a3 * &self.a4
            + big(4) * &self.a2 * &self.a6
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - big(24) * self.b4()
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + big(36) * &b2 * &b4 - big(216) * b6
    }

    /// `-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`.
    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - big(8) * &b4 * &b4 * &b4 - big(27) * &b6 * &b6 + big(9) * &b2 * &b4 * &b6
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// `c4^3 / Delta`; for a short model this is `1728 4A^3 / (4A^3 + 27B^2)`.
    pub fn j_invariant(&self) -> Result<BigRational> {
        if self.is_short() {
            let a3 = big(4) * &self.a4 * &self.a4 * &self.a4;
            let den = &a3 + big(27) * &self.a6 * &self.a6;
            if den.is_zero() {
                return Err(Error::SingularCurve);
            }
            return Ok(BigRational::new(big(1728) * a3, den));
        }
        let d = self.discriminant();
        if d.is_zero() {
            return Err(Error::SingularCurve);
        }
        let c4 = self.c4();
        Ok(BigRational::new(&c4 * &c4 * &c4, d))
    }

    /// The curve reduced mod `p`, coefficients in `[0, p)`.
    fn coeffs_mod(&self, p: u64) -> [u64; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6].map(|a| big_mod(a, p))
    }

    pub fn is_on_curve(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let r = |a: &BigInt| BigRational::from_integer(a.clone());
                let lhs = y * y + r(&self.a1) * x * y + r(&self.a3) * y;
                let rhs = x * x * x + r(&self.a2) * x * x + r(&self.a4) * x + r(&self.a6);
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let r = |a: &BigInt| BigRational::from_integer(a.clone());
                Point::Affine(x.clone(), -y - r(&self.a1) * x - r(&self.a3))
            }
        }
    }

    /// Chord-and-tangent addition on the long model.
    pub fn point_add(&self, p: &Point, q: &Point) -> Result<Point> {
        if !self.is_on_curve(p) || !self.is_on_curve(q) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let r = |a: &BigInt| BigRational::from_integer(a.clone());
        let (a1, a2, a3, a4) = (r(&self.a1), r(&self.a2), r(&self.a3), r(&self.a4));
        let lambda = if x1 != x2 {
            (y2 - y1) / (x2 - x1)
        } else {
            let den = BigRational::from_integer(big(2)) * y1 + &a1 * x1 + &a3;
            if den.is_zero() || y1 != y2 {
                return Point::Infinity;
            }
            (BigRational::from_integer(big(3)) * x1 * x1 + BigRational::from_integer(big(2)) * &a2 * x1 + &a4
                - &a1 * y1)
                / den
        };
        let nu = y1 - &lambda * x1;
        let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
        let y3 = -(&lambda + &a1) * &x3 - nu - a3;
        Point::Affine(x3, y3)
    }

    /// `n P` by double-and-add (negative `n` uses `-P`).
    pub fn multiple(&self, p: &Point, n: i64) -> Result<Point> {
        if !self.is_on_curve(p) {
            return Err(Error::PointNotOnCurve);
        }
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.add_unchecked(&b, &b);
            }
        }
        Ok(acc)
    }

    /// Order of `P` if it is at most `cap`, else `None`.
    pub fn order_up_to(&self, p: &Point, cap: u64) -> Result<Option<u64>> {
        if !self.is_on_curve(p) {
            return Err(Error::PointNotOnCurve);
        }
        let mut q = p.clone();
        for n in 1..=cap {
            if q.is_infinity() {
                return Ok(Some(n));
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_short() {
            write!(f, "y^2 = x^3")?;
            for (c, tail) in [(&self.a4, "x"), (&self.a6, "")] {
                if c.is_negative() {
                    write!(f, " - {}{tail}", -c)?;
                } else if !c.is_zero() {
                    write!(f, " + {c}{tail}")?;
                }
            }
            Ok(())
        } else {
            write!(f, "[{}, {}, {}, {}, {}]", self.a1, self.a2, self.a3, self.a4, self.a6)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(BigRational, BigRational),
}

impl Point {
    pub fn from_i64(x: i64, y: i64) -> Self {
        Point::Affine(BigRational::from_integer(big(x)), BigRational::from_integer(big(y)))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine(x, y) => x.is_integer() && y.is_integer(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// `y^2 = x^3 - 12987 D^2 x - 263466 D^3`.
pub fn twist15(d: i64) -> WeierstrassCurve {
    let d = big(d);
    WeierstrassCurve::short(big(-12987) * &d * &d, big(-263466) * &d * &d * &d)
}

/// `y^2 = x^3 + 5805 D^2 x - 285714 D^3`.
pub fn twist14(d: i64) -> WeierstrassCurve {
    let d = big(d);
    WeierstrassCurve::short(big(5805) * &d * &d, big(-285714) * &d * &d * &d)
}

/// Reduced global minimal model `[1, 1, 1, -10, -10]` of the conductor-15 curve.
pub fn e15_minimal() -> WeierstrassCurve {
    WeierstrassCurve::from_i64([1, 1, 1, -10, -10])
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Projective points over `F_p` by enumerating every affine `(x, y)`.
pub fn count_points_naive(e: &WeierstrassCurve, p: u64) -> Result<u64> {
    check_prime(p)?;
    let [a1, a2, a3, a4, a6] = e.coeffs_mod(p);
    let p128 = p as u128;
    let (a1, a2, a3, a4, a6) = (a1 as u128, a2 as u128, a3 as u128, a4 as u128, a6 as u128);
    let mut count = 1u64;
    for x in 0..p128 {
        let rhs = (((x * x % p128) * x) % p128 + a2 * x % p128 * x % p128 + a4 * x % p128 + a6) % p128;
        for y in 0..p128 {
            let lhs = (y * y + a1 * x % p128 * y + a3 * y) % p128;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `p + 1 + sum_x ((4x^3 + b2 x^2 + 2 b4 x + b6) / p)` for odd `p`.
pub fn count_points_charsum(e: &WeierstrassCurve, p: u64) -> Result<u64> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidArgument("the character-sum count needs an odd prime".into()));
    }
    let (b2, b4, b6) = (big_mod(&e.b2(), p) as u128, big_mod(&e.b4(), p) as u128, big_mod(&e.b6(), p) as u128);
    let p128 = p as u128;
    let mut s: i64 = 0;
    for x in 0..p128 {
        let v = (4 * (x * x % p128) % p128 * x + b2 * (x * x % p128) + 2 * b4 * x + b6) % p128;
        s += legendre_mod_p(v as u64, p);
    }
    Ok((p as i64 + 1 + s) as u64)
}

/// `#E(F_p)` using the model as given: naive enumeration for `p <= 3`,
/// the character sum otherwise.
pub fn count_points_mod_p(e: &WeierstrassCurve, p: u64) -> Result<u64> {
    count_points_bounded(e, p, DEFAULT_PRIME_BOUND)
}

pub fn count_points_bounded(e: &WeierstrassCurve, p: u64, bound: u64) -> Result<u64> {
    check_prime(p)?;
    if p > bound {
        return Err(Error::PrimeTooLarge { p, bound });
    }
    if p <= 3 {
        count_points_naive(e, p)
    } else {
        count_points_charsum(e, p)
    }
}

/// `a_E(p) = p + 1 - #E(F_p)`.
pub fn a_p(e: &WeierstrassCurve, p: u64) -> Result<i64> {
    Ok(p as i64 + 1 - count_points_mod_p(e, p)? as i64)
}

/// True when `p` divides the discriminant of the model.
pub fn is_bad_prime(e: &WeierstrassCurve, p: u64) -> bool {
    big_mod(&e.discriminant(), p) == 0
}

/// Dense bivariate integer polynomial in `X, Y`, keyed by `(deg_X, deg_Y)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Poly2(BTreeMap<(u32, u32), BigInt>);

impl Poly2 {
    fn term(c: BigInt, i: u32, j: u32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((i, j), c);
        }
        Poly2(m)
    }

    fn constant(c: BigInt) -> Self {
        Poly2::term(c, 0, 0)
    }

    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            let e = m.entry(*k).or_insert_with(BigInt::zero);
            *e += v;
        }
        m.retain(|_, v| !v.is_zero());
        Poly2(m)
    }

    fn scale(&self, c: &BigInt) -> Self {
        let mut m: BTreeMap<_, _> = self.0.iter().map(|(k, v)| (*k, v * c)).collect();
        m.retain(|_, v: &mut BigInt| !v.is_zero());
        Poly2(m)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut acc = Poly2::default();
        for ((i1, j1), v1) in &self.0 {
            for ((i2, j2), v2) in &o.0 {
                acc = acc.add(&Poly2::term(v1 * v2, i1 + i2, j1 + j2));
            }
        }
        acc
    }
}

/// `x = ux X + rx`, `y = sy X + uy Y + ty`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubstitution {
    pub ux: BigInt,
    pub rx: BigInt,
    pub sy: BigInt,
    pub uy: BigInt,
    pub ty: BigInt,
}

impl AffineSubstitution {
    pub fn from_i64(ux: i64, rx: i64, sy: i64, uy: i64, ty: i64) -> Self {
        AffineSubstitution { ux: big(ux), rx: big(rx), sy: big(sy), uy: big(uy), ty: big(ty) }
    }

    pub fn identity() -> Self {
        AffineSubstitution::from_i64(1, 0, 0, 1, 0)
    }
}

/// `y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6` evaluated at polynomials.
fn curve_equation(e: &WeierstrassCurve, x: &Poly2, y: &Poly2) -> Poly2 {
    let c = |a: &BigInt| Poly2::constant(a.clone());
    let m1 = big(-1);
    y.mul(y)
        .add(&c(&e.a1).mul(x).mul(y))
        .add(&c(&e.a3).mul(y))
        .add(&x.mul(x).mul(x).scale(&m1))
        .add(&c(&e.a2).mul(x).mul(x).scale(&m1))
        .add(&c(&e.a4).mul(x).scale(&m1))
        .add(&c(&e.a6).scale(&m1))
}

/// Checks that substituting into the equation of `from` and dividing by
/// `divisor` gives exactly the equation of `to`.
pub fn verify_minimal_substitution(
    from: &WeierstrassCurve,
    to: &WeierstrassCurve,
    sub: &AffineSubstitution,
    divisor: &BigInt,
) -> bool {
    let xs = Poly2::term(sub.ux.clone(), 1, 0).add(&Poly2::constant(sub.rx.clone()));
    let ys =
        Poly2::term(sub.sy.clone(), 1, 0).add(&Poly2::term(sub.uy.clone(), 0, 1)).add(&Poly2::constant(sub.ty.clone()));
    let substituted = curve_equation(from, &xs, &ys);
    let target = curve_equation(to, &Poly2::term(big(1), 1, 0), &Poly2::term(big(1), 0, 1)).scale(divisor);
    substituted == target
}

/// The substitution turning the short conductor-15 model into its reduced
/// minimal model, and the divisor that clears it.
pub fn e15_minimal_substitution() -> (AffineSubstitution, BigInt) {
    (AffineSubstitution::from_i64(36, 15, 108, 216, 108), big(46656))
}

/// Rational torsion subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    /// Every torsion point, the identity included.
    pub points: Vec<Point>,
    /// Invariant factors: `[]` trivial, `[n]` cyclic, `[2, n]` otherwise.
    pub structure: Vec<u64>,
}

impl TorsionGroup {
    pub fn order(&self) -> usize {
        self.points.len()
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.structure.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.structure.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Integer roots of `x^3 + a x + c`.
pub fn integer_cubic_roots(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x + c;
    let bound = BigInt::one() + a.abs().max(c.abs());
    let mut roots = Vec::new();
    let mut intervals: Vec<(BigInt, BigInt, bool)> = Vec::new();
    if !a.is_negative() {
        intervals.push((-bound.clone(), bound.clone(), true));
    } else {
        // Critical points at +-s with 3 s^2 = -a.
        let t = (-a) / big(3);
        let mut lo = t.sqrt();
        while big(3) * &lo * &lo > -a {
            lo -= 1;
        }
        while big(3) * (&lo + 1) * (&lo + 1) <= -a {
            lo += 1;
        }
        let hi = if big(3) * &lo * &lo == -a { lo.clone() } else { &lo + 1 };
        intervals.push((-bound.clone(), -hi.clone(), true));
        intervals.push((-lo.clone(), lo.clone(), false));
        intervals.push((hi, bound.clone(), true));
    }
    for (lo, hi, increasing) in intervals {
        if lo > hi {
            continue;
        }
        if let Some(r) = monotone_zero(&f, lo, hi, increasing) {
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots
}

fn monotone_zero(f: &impl Fn(&BigInt) -> BigInt, mut lo: BigInt, mut hi: BigInt, increasing: bool) -> Option<BigInt> {
    let sign = |v: BigInt| if increasing { v } else { -v };
    if sign(f(&lo)).is_positive() || sign(f(&hi)).is_negative() {
        return None;
    }
    while lo < hi {
        let mid = (&lo + &hi).div_floor(&big(2));
        if sign(f(&mid)).is_negative() {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    f(&lo).is_zero().then_some(lo)
}

/// Positive integers `y` with `y^2 | n`, from a full factorisation of `n`.
fn square_divisor_roots(n: &BigInt) -> Vec<BigInt> {
    let (mut factors, rest) = trial_factor(n, 1_000_000);
    if !rest.is_one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            factors.push((s, 2));
        }
    }
    let mut ys = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for y in &ys {
            let mut pk = BigInt::one();
            for _ in 0..=(e / 2) {
                next.push(y * &pk);
                pk *= &p;
            }
        }
        ys = next;
    }
    ys.sort();
    ys
}

/// Torsion of `y^2 = x^3 + A x + B` by Nagell-Lutz: torsion points are
/// integral with `y = 0` or `y^2 | 4A^3 + 27B^2`. Candidates are kept when
/// their order is at most 12.
pub fn torsion_subgroup(e: &WeierstrassCurve) -> Result<TorsionGroup> {
    if !e.is_short() {
        return Err(Error::InvalidArgument("torsion search expects a short model".into()));
    }
    let (a, b) = (&e.a4, &e.a6);
    let disc = big(4) * a * a * a + big(27) * b * b;
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let mut ys = vec![BigInt::zero()];
    ys.extend(square_divisor_roots(&disc));
    let mut points = vec![Point::Infinity];
    for y in ys {
        for x in integer_cubic_roots(a, &(b - &y * &y)) {
            let cands = if y.is_zero() { vec![y.clone()] } else { vec![y.clone(), -y.clone()] };
            for yy in cands {
                let p = Point::Affine(BigRational::from_integer(x.clone()), BigRational::from_integer(yy));
                if is_torsion(e, &p)? {
                    points.push(p);
                }
            }
        }
    }
    let n = points.len() as u64;
    let two_torsion = points.iter().filter(|p| matches!(p, Point::Affine(_, y) if y.is_zero())).count();
    let structure = match (n, two_torsion) {
        (1, _) => vec![],
        (_, 3) => vec![2, n / 2],
        _ => vec![n],
    };
    Ok(TorsionGroup { points, structure })
}

fn is_torsion(e: &WeierstrassCurve, p: &Point) -> Result<bool> {
    let mut q = p.clone();
    for _ in 0..12 {
        if q.is_infinity() {
            return Ok(true);
        }
        if !q.is_integral() {
            return Ok(false);
        }
        q = e.add_unchecked(&q, p);
    }
    Ok(q.is_infinity())
}

/// Evidence that `P` has infinite order: some multiple up to 12 is
/// non-integral (Nagell-Lutz) or none of them vanishes.
pub fn has_infinite_order(e: &WeierstrassCurve, p: &Point) -> Result<bool> {
    if !e.is_on_curve(p) {
        return Err(Error::PointNotOnCurve);
    }
    Ok(!is_torsion(e, p)?)
}

/// `n` factored as `p^e * ...`, any cofactor above the trial bound last.
pub fn factor_string(n: &BigInt) -> String {
    let (f, rest) = trial_factor(n, 100_000);
    let mut parts: Vec<String> =
        f.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
    if !rest.is_one() {
        parts.push(rest.to_string());
    }
    let sign = if n.is_negative() { "-" } else { "" };
    format!("{sign}{}", parts.join(" * "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_15_invariants() {
        let e = e15_minimal();
        assert_eq!(e.discriminant(), big(50625));
        assert_eq!(factor_string(&e.discriminant()), "3^4 * 5^4");
        assert_eq!(count_points_mod_p(&e, 2).unwrap(), 4);
        assert_eq!(count_points_mod_p(&e, 3).unwrap(), 5);
        assert_eq!(a_p(&e, 2).unwrap(), -1);
        let (sub, div) = e15_minimal_substitution();
        assert!(verify_minimal_substitution(&twist15(1), &e, &sub, &div));
        assert!(!verify_minimal_substitution(&twist15(1), &e, &sub, &big(46655)));
        assert!(verify_minimal_substitution(&e, &e, &AffineSubstitution::identity(), &big(1)));
    }

    #[test]
    fn j_invariants() {
        let j = twist15(-8).j_invariant().unwrap();
        assert_eq!(j, BigRational::new(big(111284641), big(50625)));
        assert_eq!(e15_minimal().j_invariant().unwrap(), j);
        let e = WeierstrassCurve::short(big(5), big(0));
        assert_eq!(e.j_invariant().unwrap(), BigRational::from_integer(big(1728)));
        assert_eq!(WeierstrassCurve::short(big(0), big(0)).j_invariant(), Err(Error::SingularCurve));
    }

    #[test]
    fn twist_models() {
        assert_eq!(twist15(-8), WeierstrassCurve::short(big(-831168), big(134894592)));
        assert_eq!(twist15(-68), WeierstrassCurve::short(big(-60051888), big(82842141312)));
        assert_eq!(twist15(1), WeierstrassCurve::short(big(-12987), big(-263466)));
        assert_eq!(twist15(-8).to_string(), "y^2 = x^3 - 831168x + 134894592");
        assert_eq!(e15_minimal().to_string(), "[1, 1, 1, -10, -10]");
    }

    #[test]
    fn torsion_examples() {
        let t = torsion_subgroup(&twist15(1)).unwrap();
        assert_eq!(t.structure, vec![2, 4]);
        assert_eq!(t.to_string(), "Z/2 x Z/4");
        let t = torsion_subgroup(&WeierstrassCurve::short(big(-1), big(0))).unwrap();
        assert_eq!(t.structure, vec![2, 2]);
        let t = torsion_subgroup(&twist15(-8)).unwrap();
        assert_eq!(t.order() % 2, 0);
    }

    #[test]
    fn rank_two_generators() {
        let e = twist15(-68);
        let p = Point::from_i64(852, 179712);
        let q = Point::from_i64(-3468, 499392);
        assert!(e.is_on_curve(&p) && e.is_on_curve(&q));
        assert!(e.point_add(&p, &e.neg(&p)).unwrap().is_infinity());
        assert_eq!(e.point_add(&p, &Point::Infinity).unwrap(), p);
        assert!(has_infinite_order(&e, &p).unwrap());
        assert!(has_infinite_order(&e, &q).unwrap());
        assert!(!e.is_on_curve(&Point::from_i64(852, 179713)));
    }

    #[test]
    fn counting_methods_agree() {
        let e = twist15(1);
        for p in [5u64, 7, 11, 13, 101, 211] {
            assert_eq!(count_points_naive(&e, p).unwrap(), count_points_charsum(&e, p).unwrap(), "p = {p}");
        }
        assert_eq!(count_points_mod_p(&e, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn cubic_roots() {
        assert_eq!(integer_cubic_roots(&big(-1), &big(0)), vec![big(-1), big(0), big(1)]);
        assert_eq!(integer_cubic_roots(&big(0), &big(-8)), vec![big(2)]);
        assert!(integer_cubic_roots(&big(1), &big(1)).is_empty());
    }
}
