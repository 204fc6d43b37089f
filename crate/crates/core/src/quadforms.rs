//! Positive-definite binary quadratic forms `A x^2 + B xy + C y^2`.
//!
//! Reduction, enumeration of reduced forms, class and Hurwitz numbers,
//! representatives of the level-`N` sets `Q_N(D, r)`, genus characters and
//! CM points.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::arith::{self, kronecker};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use crate::arith::is_fundamental;

/// Integer type usable as form coefficients.
pub trait FormInt:
    Integer + Signed + Clone + fmt::Debug + fmt::Display + FromPrimitive + ToPrimitive + Hash + Send + Sync
{
}

impl<T> FormInt for T where
    T: Integer + Signed + Clone + fmt::Debug + fmt::Display + FromPrimitive + ToPrimitive + Hash + Send + Sync
{
}

fn lift<T: FormInt>(n: i64) -> T {
    T::from_i64(n).expect("value fits the form coefficient type")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm<T = BigInt> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// 2x2 integer matrix `[[a, b], [c, d]]`, acting on forms by substitution.
pub type Matrix<T> = [[T; 2]; 2];

impl<T: FormInt> QuadForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        QuadForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        QuadForm::new(lift(a), lift(b), lift(c))
    }

    /// `B^2 - 4AC`.
    pub fn disc(&self) -> T {
        self.b.clone() * self.b.clone() - lift::<T>(4) * self.a.clone() * self.c.clone()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.disc().is_negative()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
    }

    /// GCD of the three coefficients.
    pub fn content(&self) -> T {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `Q(ax + by, cx + dy)`; the matrix must have determinant 1.
    pub fn apply_sl2(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(self.apply(&[[lift(a), lift(b)], [lift(c), lift(d)]]))
    }

    /// Substitution by an arbitrary matrix (no determinant check).
    pub fn apply(&self, m: &Matrix<T>) -> Self {
        let [[a, b], [c, d]] = m.clone();
        let two: T = lift(2);
        let na = self.eval(&a, &c);
        let nb = two.clone() * self.a.clone() * a.clone() * b.clone()
            + self.b.clone() * (a * d.clone() + b.clone() * c.clone())
            + two * self.c.clone() * c * d.clone();
        let nc = self.eval(&b, &d);
        QuadForm::new(na, nb, nc)
    }

    /// `|B| <= A <= C`, with `B >= 0` when `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        if babs > self.a || self.a > self.c {
            return false;
        }
        if (babs == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// The reduced form in the SL2(Z)-class of `self`.
    pub fn reduce(&self) -> Result<Self> {
        self.reduce_with_matrix().map(|(f, _)| f)
    }

    /// The reduced form together with `g` in SL2(Z) such that
    /// `self.apply(g)` is the reduced form.
    pub fn reduce_with_matrix(&self) -> Result<(Self, Matrix<T>)> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(self.to_string()));
        }
        let (zero, one): (T, T) = (T::zero(), T::one());
        let mut g: Matrix<T> = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
        let mut f = self.clone();
        let two: T = lift(2);
        loop {
            // x -> x + k y moves B to B + 2Ak; bring B into (-A, A].
            let two_a = two.clone() * f.a.clone();
            let k = -((f.b.clone() + f.a.clone() - one.clone()).div_floor(&two_a));
            if !k.is_zero() {
                let t = [[one.clone(), k.clone()], [zero.clone(), one.clone()]];
                f = f.apply(&t);
                g = mat_mul(&g, &t);
            }
            if f.a > f.c {
                let s = [[zero.clone(), -one.clone()], [one.clone(), zero.clone()]];
                f = f.apply(&s);
                g = mat_mul(&g, &s);
                continue;
            }
            break;
        }
        if f.a == f.c && f.b.is_negative() {
            let s = [[zero.clone(), -one.clone()], [one.clone(), zero.clone()]];
            f = f.apply(&s);
            g = mat_mul(&g, &s);
        }
        debug_assert!(f.is_reduced());
        Ok((f, g))
    }

    /// Order of the stabilizer of a reduced form in PSL2(Z): 3 for multiples
    /// of `x^2 + xy + y^2`, 2 for multiples of `x^2 + y^2`, else 1.
    pub fn stabilizer_order(&self) -> u32 {
        if self.a == self.b && self.b == self.c {
            3
        } else if self.b.is_zero() && self.a == self.c {
            2
        } else {
            1
        }
    }

    /// Weight `1/|stabilizer|` of the class in traces.
    pub fn weight(&self) -> Ratio<i64> {
        Ratio::new(1, self.stabilizer_order() as i64)
    }

    pub fn tau_of(&self) -> Result<CmPoint> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(self.to_string()));
        }
        let big = |t: &T| BigInt::from(t.to_i128().expect("form coefficient fits in i128"));
        Ok(CmPoint { minus_b: -big(&self.b), two_a: BigInt::from(2) * big(&self.a), disc: big(&self.disc()) })
    }

    pub fn map<U: FormInt>(&self, f: impl Fn(&T) -> U) -> QuadForm<U> {
        QuadForm::new(f(&self.a), f(&self.b), f(&self.c))
    }
}

fn mat_mul<T: FormInt>(x: &Matrix<T>, y: &Matrix<T>) -> Matrix<T> {
    let e = |i: usize, j: usize| x[i][0].clone() * y[0][j].clone() + x[i][1].clone() * y[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

impl<T: FormInt> fmt::Display for QuadForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The point `(minus_b + sqrt(disc)) / two_a` of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmPoint {
    pub minus_b: BigInt,
    pub two_a: BigInt,
    pub disc: BigInt,
}

impl CmPoint {
    pub fn to_complex<R: Real>(&self) -> Complex<R> {
        let f = |n: &BigInt| <R as Real>::from_i64(n.to_i64().expect("CM point data fits in i64"));
        let den = f(&self.two_a);
        let re = f(&self.minus_b).div_acc(den);
        let im = (-f(&self.disc)).sqrt().div_acc(den);
        Complex::new(re, im)
    }

    pub fn imag_f64(&self) -> f64 {
        let d = self.disc.to_f64().unwrap_or(f64::NAN);
        (-d).sqrt() / self.two_a.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for CmPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.minus_b, self.disc, self.two_a)
    }
}

/// Reduced forms of one discriminant with their trace weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassList<T = BigInt> {
    pub disc: i64,
    pub reps: Vec<QuadForm<T>>,
    pub weights: Vec<Ratio<i64>>,
}

impl<T: FormInt> ClassList<T> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Primitive forms only.
    pub fn primitive(&self) -> impl Iterator<Item = &QuadForm<T>> {
        self.reps.iter().filter(|f| f.is_primitive())
    }

    /// Sum of the weights.
    pub fn weighted_count(&self) -> Ratio<i64> {
        self.weights.iter().sum()
    }
}

fn check_negative_disc(d: i64) -> Result<()> {
    if d >= 0 || !arith::is_discriminant(d) {
        return Err(Error::NotADiscriminant(d));
    }
    Ok(())
}

/// Every reduced positive-definite form of discriminant `d` (primitive or
/// not), ordered by `(A, B)`.
pub fn enumerate_reduced<T: FormInt>(d: i64) -> Result<ClassList<T>> {
    check_negative_disc(d)?;
    let n = -d;
    let mut reps = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in (-a + 1)..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            reps.push(QuadForm::<T>::from_i64(a, b, c));
        }
        a += 1;
    }
    let weights = reps.iter().map(|f| f.weight()).collect();
    Ok(ClassList { disc: d, reps, weights })
}

/// Number of SL2(Z)-classes of primitive positive-definite forms.
pub fn class_number(d: i64) -> Result<u64> {
    Ok(enumerate_reduced::<i64>(d)?.primitive().count() as u64)
}

/// Hurwitz class number: classes of all positive-definite forms of
/// discriminant `d`, weighted by `1/|stabilizer|`.
pub fn hurwitz_number(d: i64) -> Result<Ratio<i64>> {
    Ok(enumerate_reduced::<i64>(d)?.weighted_count())
}

/// Residues `r` in `(-N, N]` with `r^2 = D (mod 4N)`.
pub fn square_roots_mod_4n(n: i64, d: i64) -> Vec<i64> {
    ((-n + 1)..=n).filter(|r| (r * r - d).rem_euclid(4 * n) == 0).collect()
}

/// A representative of a class of `Q_N(D, r) / Gamma_0(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRep<T = BigInt> {
    pub form: QuadForm<T>,
    pub residue: i64,
    /// The reduced level-1 form the representative lifts to.
    pub class: QuadForm<T>,
    pub weight: Ratio<i64>,
}

/// Representatives of `Q_N(D, r) / Gamma_0(N)` for every admissible residue
/// `r`, one per class of `Q(D) / SL2(Z)`.
///
/// A form `(A, B, C)` with `N | A` and `B = r (mod 2N)` lifts to
/// `(A/N, B, NC)`. Each reduced form `Q` is moved by SL2(Z) to an equivalent
/// `(a, b, c)` with `N | c` and `b = r (mod 2N)`, chosen with `a` minimal,
/// and pulled back to `(Na, b, c/N)`.
pub fn level_reps<T: FormInt>(n: i64, d: i64) -> Result<Vec<LevelRep<T>>> {
    check_negative_disc(d)?;
    if n < 1 {
        return Err(Error::InvalidArgument(format!("level must be positive, got {n}")));
    }
    let classes = enumerate_reduced::<T>(d)?;
    if n == 1 {
        let r = d.rem_euclid(2);
        return Ok(classes
            .reps
            .iter()
            .zip(&classes.weights)
            .map(|(f, w)| LevelRep { form: f.clone(), residue: r, class: f.clone(), weight: *w })
            .collect());
    }
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let residues = square_roots_mod_4n(n, d);
    if residues.is_empty() {
        return Err(Error::NoSquareRoot { disc: d, modulus: 4 * n });
    }
    let mut out = Vec::new();
    for &r in &residues {
        for (q, w) in classes.reps.iter().zip(&classes.weights) {
            let form = pullback_rep(q, n, r)?;
            out.push(LevelRep { form, residue: r, class: q.clone(), weight: *w });
        }
    }
    Ok(out)
}

fn pullback_rep<T: FormInt>(q: &QuadForm<T>, n: i64, r: i64) -> Result<QuadForm<T>> {
    let bound = 4 * n;
    let nn: T = lift(n);
    let two_n: T = lift(2 * n);
    let rr: T = lift(r);
    let mut best: Option<QuadForm<T>> = None;
    for bv in -bound..=bound {
        for dv in -bound..=bound {
            if bv.gcd(&dv) != 1 {
                continue;
            }
            let (bt, dt): (T, T) = (lift(bv), lift(dv));
            let cval = q.eval(&bt, &dt);
            if !(cval.clone() % nn.clone()).is_zero() {
                continue;
            }
            // Complete (b, d) to a matrix [[a, b], [c, d]] of determinant 1.
            let eg = bv.extended_gcd(&dv);
            let (av, cv) = (eg.y, -eg.x);
            debug_assert_eq!(av * dv - bv * cv, 1);
            let m: Matrix<T> = [[lift(av), bt.clone()], [lift(cv), dt.clone()]];
            let f = q.apply(&m);
            if !(f.b.clone() - rr.clone()).mod_floor(&two_n).is_zero() {
                continue;
            }
            // [[1, 0], [k, 1]] keeps C, shifts B by 2Ck; minimise A.
            let two_c = lift::<T>(2) * f.c.clone();
            let k = -((f.b.clone() + f.c.clone() - T::one()).div_floor(&two_c));
            let f = f.apply(&[[T::one(), T::zero()], [k, T::one()]]);
            let cand = QuadForm::new(nn.clone() * f.a.clone(), f.b.clone(), f.c.clone() / nn.clone());
            let better = match &best {
                None => true,
                Some(b) => (cand.a.clone(), cand.b.abs(), -cand.b.clone()) < (b.a.clone(), b.b.abs(), -b.b.clone()),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best.ok_or_else(|| Error::RepresentativeNotFound { form: q.to_string(), level: n, residue: r })
}

/// Generalized genus character `chi_{D0}(Q) = (D0 | n)` for an integer `n`
/// represented by `Q` and coprime to `D0`.
pub fn genus_char<T: FormInt>(q: &QuadForm<T>, d0: i64) -> Result<i64> {
    let disc = q.disc().to_i64().ok_or_else(|| Error::InvalidArgument("discriminant too large".into()))?;
    if !is_fundamental(d0) || disc % d0 != 0 || !arith::is_discriminant(disc / d0) {
        return Err(Error::InvalidArgument(format!(
            "{d0} is not a fundamental divisor of {disc} with discriminant cofactor"
        )));
    }
    let values = coprime_values(q, d0, 2);
    let first = values.first().ok_or_else(|| Error::NoCoprimeRepresentation { form: q.to_string(), d0 })?;
    let chi = kronecker(d0, *first);
    for v in &values[1..] {
        if kronecker(d0, *v) != chi {
            return Err(Error::InconsistentCharacter { form: q.to_string(), d0 });
        }
    }
    Ok(chi)
}

/// The `count` smallest distinct nonzero values of `q`, coprime to `d0`, on
/// the box `|x|, |y| <= 50`.
pub fn coprime_values<T: FormInt>(q: &QuadForm<T>, d0: i64, count: usize) -> Vec<i64> {
    let mut vals = Vec::new();
    for x in -50i64..=50 {
        for y in -50i64..=50 {
            let Some(v) = q.eval(&lift(x), &lift(y)).to_i64() else { continue };
            if v != 0 && v.gcd(&d0) == 1 {
                vals.push(v.abs());
            }
        }
    }
    vals.sort_unstable();
    vals.dedup();
    vals.truncate(count);
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = QuadForm<i64>;

    #[test]
    fn translation_of_principal_form() {
        let q = F::from_i64(1, 0, 17);
        assert_eq!(q.apply_sl2(1, 1, 0, 1).unwrap(), F::from_i64(1, 2, 18));
        assert_eq!(q.apply_sl2(1, 0, 0, 1).unwrap(), q);
        assert!(matches!(q.apply_sl2(2, 1, 1, 2), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(F::from_i64(1, 2, 18).reduce().unwrap(), F::from_i64(1, 0, 17));
        let r = F::from_i64(3, 2, 6).reduce().unwrap();
        assert_eq!(r, F::from_i64(3, 2, 6));
        let (r, g) = F::from_i64(7, 13, 7).reduce_with_matrix().unwrap();
        assert!(r.is_reduced());
        assert_eq!(F::from_i64(7, 13, 7).apply(&g), r);
        assert!(F::from_i64(-1, 0, -1).reduce().is_err());
    }

    #[test]
    fn class_lists() {
        let l = enumerate_reduced::<i64>(-68).unwrap();
        let pairs: Vec<(i64, i64)> = l.reps.iter().map(|f| (f.a, f.b)).collect();
        assert_eq!(pairs, vec![(1, 0), (2, 2), (3, -2), (3, 2)]);
        assert_eq!(class_number(-8).unwrap(), 1);
        assert_eq!(class_number(-68).unwrap(), 4);
        assert_eq!(class_number(-15).unwrap(), 2);
        assert_eq!(hurwitz_number(-3).unwrap(), Ratio::new(1, 3));
        assert_eq!(hurwitz_number(-4).unwrap(), Ratio::new(1, 2));
        assert_eq!(hurwitz_number(-12).unwrap(), Ratio::new(4, 3));
        assert_eq!(class_number(-7), Ok(1));
        assert_eq!(class_number(-6), Err(Error::NotADiscriminant(-6)));
    }

    #[test]
    fn cm_points() {
        let t = F::from_i64(3, 2, 1).tau_of().unwrap();
        assert_eq!(t.to_string(), "(-2 + sqrt(-8))/6");
        let z = F::from_i64(1, 0, 2).tau_of().unwrap().to_complex::<f64>();
        assert!((z.im - 2f64.sqrt()).abs() < 1e-15 && z.re == 0.0);
    }

    #[test]
    fn level_three_representatives() {
        let r8 = level_reps::<i64>(3, -8).unwrap();
        let forms: Vec<_> = r8.iter().map(|r| (r.form.clone(), r.residue)).collect();
        assert!(forms.contains(&(F::from_i64(3, 2, 1), 2)));
        assert!(forms.contains(&(F::from_i64(3, -2, 1), -2)));
        let r68 = level_reps::<i64>(3, -68).unwrap();
        assert_eq!(r68.len(), 8);
        let principal: Vec<_> =
            r68.iter().filter(|r| r.class == F::from_i64(1, 0, 17)).map(|r| r.form.clone()).collect();
        assert!(principal.contains(&F::from_i64(3, 2, 6)));
        assert!(principal.contains(&F::from_i64(3, -2, 6)));
        for rep in &r68 {
            let f = &rep.form;
            assert_eq!(f.a % 3, 0);
            assert_eq!((f.b - rep.residue).rem_euclid(6), 0);
            let lifted = F::from_i64(f.a / 3, f.b, 3 * f.c);
            assert_eq!(lifted.reduce().unwrap(), rep.class);
        }
        assert!(matches!(level_reps::<i64>(3, -7), Err(Error::NoSquareRoot { .. })));
    }

    #[test]
    fn genus_characters() {
        assert_eq!(genus_char(&F::from_i64(1, 1, 4), 5), Ok(1));
        assert_eq!(genus_char(&F::from_i64(2, 1, 2), 5), Ok(-1));
    }
}
