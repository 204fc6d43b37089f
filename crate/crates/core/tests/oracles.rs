//! Library output checked against independent reference computations written
//! here from scratch: naive products, divisor sums, brute-force form counts.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use moonshine_core::lfunc::{twisted_coeffs, twisted_l_value};
use moonshine_core::modfun::{
    c3a_coeff, f15_series, fon3a_series, fon_mt_3a, fon_series, hurwitz_series, j_series, t3_series, t6_series,
    SeriesId,
};
use moonshine_core::qseries::{eta_scaled, eta_series, theta1_mr, theta_r};
use moonshine_core::quadforms::{class_number, enumerate_reduced, hurwitz_number, level_reps, QuadForm};
use moonshine_core::scalar::Real;
use moonshine_core::singmod::{c3a_via_traces, eta_numeric, fn_numeric, trace_one, twisted_trace};
use moonshine_core::{QSeries, DD};
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

// ---------- reference power series in i128, index = exponent ----------

/// `prod_{k >= 1} (1 - q^(step k))^e` through `q^(n - 1)`.
fn euler_pow(step: usize, e: i64, n: usize) -> Vec<i128> {
    let mut c = vec![0i128; n];
    c[0] = 1;
    for _ in 0..e.unsigned_abs() {
        let mut m = step;
        while m < n {
            if e > 0 {
                for i in (m..n).rev() {
                    c[i] -= c[i - m];
                }
            } else {
                for i in m..n {
                    c[i] += c[i - m];
                }
            }
            m += step;
        }
    }
    c
}

fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().min(b.len());
    let mut out = vec![0i128; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// `a / b` for `b[0] = 1`.
fn div(a: &[i128], b: &[i128]) -> Vec<i128> {
    assert_eq!(b[0], 1);
    let n = a.len().min(b.len());
    let mut out = vec![0i128; n];
    for i in 0..n {
        let s: i128 = (1..=i).map(|k| b[k] * out[i - k]).sum();
        out[i] = a[i] - s;
    }
    out
}

fn sigma(n: u64, k: u32) -> i128 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as i128).pow(k)).sum()
}

/// `q j(q)` through `q^(n - 1)`, as `E4^3 / prod (1 - q^m)^24`.
fn j_times_q(n: usize) -> Vec<i128> {
    let mut e4 = vec![0i128; n];
    e4[0] = 1;
    for (m, c) in e4.iter_mut().enumerate().skip(1) {
        *c = 240 * sigma(m as u64, 3);
    }
    div(&mul(&mul(&e4, &e4), &e4), &euler_pow(1, 24, n))
}

fn int(c: &BigRational) -> i128 {
    assert!(c.is_integer(), "{c} is not an integer");
    c.to_integer().to_i128().unwrap()
}

/// Coefficient of `q^e` for integral `e`, zero when absent.
fn at(s: &QSeries, e: i64) -> i128 {
    s.coeff_int(e).map(|c| int(&c)).unwrap_or_else(|| panic!("q^{e} outside precision"))
}

/// `q^-1 + sum c_k q^k` laid out with index `k + 1`.
fn assert_laurent(s: &QSeries, reference: &[i128]) {
    for (i, &c) in reference.iter().enumerate() {
        assert_eq!(at(s, i as i64 - 1), c, "coefficient of q^{}", i as i64 - 1);
    }
}

// ---------- reference arithmetic ----------

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1i64;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Kronecker symbol by prime factorisation of `n > 0`.
fn kron(d: i64, mut n: i64) -> i64 {
    assert!(n > 0);
    let mut out = 1;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            n /= p;
            let s = if p == 2 {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                match pow_mod(d, (p - 1) / 2, p) {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                }
            };
            out *= s;
            continue;
        }
        p += 1;
    }
    out
}

fn squarefree(n: i64) -> bool {
    (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0)
}

fn fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => squarefree(d.abs()),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree((d / 4).abs()),
        _ => false,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduction by the textbook normalise-and-swap loop.
fn reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            let b2 = b + 2 * k * a;
            c += k * b + k * k * a;
            b = b2;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// Primitive reduced classes found by reducing every form with `A, |B| <= 40`.
fn brute_classes(d: i64) -> BTreeSet<(i64, i64, i64)> {
    let mut out = BTreeSet::new();
    for a in 1..=40i64 {
        for b in -40..=40i64 {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if gcd(gcd(a, b), c) == 1 {
                out.insert(reduce(a, b, c));
            }
        }
    }
    out
}

fn is_disc(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

/// `H(d) = sum_{f^2 | d} h(d/f^2) / (w(d/f^2)/2)`.
fn hurwitz_reference(d: i64) -> Ratio<i64> {
    let mut total = Ratio::from_integer(0);
    let mut f = 1;
    while f * f <= -d {
        let e = d / (f * f);
        if d % (f * f) == 0 && is_disc(e) {
            let h = brute_classes(e).len() as i64;
            let w = match e {
                -3 => 3,
                -4 => 2,
                _ => 1,
            };
            total += Ratio::new(h, w);
        }
        f += 1;
    }
    total
}

// ---------- q-series ----------

#[test]
fn eta_power_24_matches_product() {
    let s = eta_series::<BigRational>(6).pow_nonneg(24).simplify_denom();
    let p = euler_pow(1, 24, 5);
    assert_eq!(&p[..4], &[1, -24, 252, -1472]);
    for k in 0..5 {
        assert_eq!(at(&s, k + 1), p[k as usize], "q^{}", k + 1);
    }
}

#[test]
fn eta_euler_identity_to_order_20() {
    let s = eta_series::<i64>(21);
    let p = euler_pow(1, 1, 21);
    for (k, &c) in p.iter().enumerate() {
        assert_eq!(s.coeff(24 * k as i64 + 1, 24).unwrap() as i128, c, "q^(1/24 + {k})");
    }
}

#[test]
fn theta_squared_counts_sums_of_two_squares() {
    let t = theta_r::<i64>(0, 31);
    let sq = t.mul(&t);
    for n in 0..31i64 {
        let r2 = (-6..=6i64).flat_map(|x| (-6..=6i64).map(move |y| (x, y))).filter(|(x, y)| x * x + y * y == n).count();
        assert_eq!(sq.coeff_int(n).unwrap(), r2 as i64, "n = {n}");
    }
    assert_eq!(sq.coeff_int(1).unwrap(), 4);
}

#[test]
fn inverse_eta_2tau_gives_partitions() {
    let inv = eta_scaled::<BigRational>(2, 1, 12).invert().unwrap();
    let parts = euler_pow(1, -1, 6);
    assert_eq!(&parts[..5], &[1, 1, 2, 3, 5]);
    for (k, &p) in parts.iter().enumerate() {
        // q^(-1/12 + 2k) = q^((24k - 1)/12)
        assert_eq!(int(&inv.coeff(24 * k as i64 - 1, 12).unwrap()), p, "k = {k}");
        assert_eq!(int(&inv.coeff(24 * k as i64 + 11, 12).unwrap_or_default()), 0);
    }
}

fn t3_reference(n: usize) -> Vec<i128> {
    let mut c = div(&euler_pow(1, 12, n), &euler_pow(3, 12, n));
    c[1] += 12;
    c
}

#[test]
fn t3_expansion_and_derivative() {
    let reference = t3_reference(12);
    assert_eq!(&reference[..5], &[1, 0, 54, -76, -243]);
    let t3 = t3_series(10).unwrap().series;
    assert_laurent(&t3, &reference[..11]);
    let dt = t3.q_derivative();
    for (i, &c) in reference[..11].iter().enumerate() {
        let e = i as i64 - 1;
        assert_eq!(at(&dt, e), e as i128 * c);
    }
    assert_eq!([at(&dt, -1), at(&dt, 1), at(&dt, 2), at(&dt, 3)], [-1, 54, -152, -729]);
}

#[test]
fn t6_expansion() {
    let n = 14;
    let num = mul(&euler_pow(1, 5, n), &euler_pow(3, 1, n));
    let den = mul(&euler_pow(2, 1, n), &euler_pow(6, 5, n));
    let mut reference = div(&num, &den);
    reference[1] += 5;
    assert_eq!(&reference[..6], &[1, 0, 6, 4, -3, -12]);
    assert_laurent(&t6_series(12).unwrap().series, &reference[..13]);
}

#[test]
fn rescale_theta_by_four() {
    let s = theta_r::<i64>(0, 10).rescale(4);
    for n in 0..40i64 {
        let expect = if n == 0 {
            1
        } else if n % 4 == 0 && ((n / 4) as f64).sqrt().fract() == 0.0 {
            2
        } else {
            0
        };
        assert_eq!(s.coeff_int(n).unwrap(), expect, "q^{n}");
    }
}

#[test]
fn theta1_index_three() {
    let s = theta1_mr::<i64>(3, 1, 6);
    assert_eq!(s.coeff(1, 12), Some(1));
    assert_eq!(s.coeff(25, 12), Some(-5));
    let expect: Vec<(i64, i64)> =
        (-12..=12i64).filter(|n| n.rem_euclid(6) == 1 && n * n < 72).map(|n| (n * n, n)).collect();
    for (e, c) in expect {
        assert_eq!(s.coeff(e, 12), Some(c), "q^({e}/12)");
    }
}

// ---------- modular functions ----------

#[test]
fn j_matches_eisenstein_quotient() {
    let reference = j_times_q(8);
    assert_eq!(&reference[..6], &[1, 744, 196884, 21493760, 864299970, 20245856256]);
    assert_laurent(&j_series(7).unwrap().series, &reference[..8]);
}

/// Coefficient of `q^1` and `q^0` in `(x^2 - b x)/2 + c` for a Laurent `x`.
fn quadratic_low(x: &[i128], b: i128, c: i128) -> (i128, i128) {
    let sq = |e: i64| -> i128 {
        (-1..=e + 1)
            .map(|a| {
                let other = e - a;
                x[(a + 1) as usize] * x[(other + 1) as usize]
            })
            .sum()
    };
    let coeff = |e: i64| {
        let v = sq(e) - b * x[(e + 1) as usize];
        assert_eq!(v % 2, 0);
        v / 2 + if e == 0 { c } else { 0 }
    };
    (coeff(0), coeff(1))
}

#[test]
fn fon_constant_and_linear_terms() {
    let j = j_times_q(6);
    let (c0, c1) = quadratic_low(&j, 1489, 80256);
    assert_eq!(c0, 0);
    let s = fon_series(3).unwrap().series;
    assert_eq!((at(&s, 0), at(&s, 1)), (c0, c1));
    assert_eq!(s.coeff_int(-2).unwrap(), BigRational::new(1.into(), 2.into()));

    let t = t3_reference(6);
    let (c0, c1) = quadratic_low(&t, 1, -54);
    assert_eq!(c0, 0);
    let s = fon3a_series(3).unwrap().series;
    assert_eq!((at(&s, 0), at(&s, 1)), (c0, c1));
}

#[test]
fn f15_matches_product() {
    let n = 60;
    let p = mul(&mul(&euler_pow(1, 1, n), &euler_pow(3, 1, n)), &mul(&euler_pow(5, 1, n), &euler_pow(15, 1, n)));
    let s = f15_series(n as i64).unwrap().series;
    for k in 1..n {
        assert_eq!(at(&s, k as i64), p[k - 1], "q^{k}");
    }
    assert_eq!(at(&s, 5), 1);
}

#[test]
fn hurwitz_series_matches_class_counts() {
    let s = hurwitz_series(101).unwrap().series;
    assert_eq!(s.coeff_int(15).unwrap(), BigRational::from_integer(2.into()));
    for n in 1..=100i64 {
        let c = s.coeff_int(n).unwrap();
        let expect = if is_disc(-n) { hurwitz_reference(-n) } else { Ratio::from_integer(0) };
        assert_eq!(c, BigRational::new((*expect.numer()).into(), (*expect.denom()).into()), "H({n})");
        if is_disc(-n) {
            assert_eq!(hurwitz_number(-n).unwrap(), expect);
        }
    }
}

// ---------- quadratic forms ----------

#[test]
fn class_numbers_by_brute_force() {
    for n in 1..=400i64 {
        let d = -n;
        if !is_disc(d) {
            assert!(class_number(d).is_err());
            continue;
        }
        let brute = brute_classes(d);
        assert_eq!(class_number(d).unwrap() as usize, brute.len(), "h({d})");
        let listed: BTreeSet<_> = enumerate_reduced::<i64>(d).unwrap().primitive().map(|f| (f.a, f.b, f.c)).collect();
        assert_eq!(listed, brute, "reduced forms of {d}");
    }
}

#[test]
fn class_number_formula() {
    for n in 5..=400i64 {
        let d = -n;
        if !fundamental(d) {
            continue;
        }
        let s: i64 = (1..n).map(|a| a * kron(d, a)).sum();
        assert_eq!(s % n, 0);
        assert_eq!(class_number(d).unwrap() as i64, -s / n, "h({d})");
    }
}

#[test]
fn level_three_counts_twice_class_number() {
    for n in 5..=200i64 {
        let d = -n;
        if !fundamental(d) || d.rem_euclid(3) != 1 {
            continue;
        }
        let h = brute_classes(d).len() as i64;
        assert_eq!(trace_one(3, d).unwrap(), Ratio::from_integer(2 * h), "D = {d}");
        assert_eq!(level_reps::<i64>(3, d).unwrap().len() as i64, 2 * h);
    }
}

#[test]
fn reduction_agrees_with_reference() {
    for (a, b, c) in [(3, 2, 6), (6, 5, 2), (10, 9, 3), (1, 0, 1), (5, -4, 1)] {
        let q = QuadForm::<i64>::from_i64(a, b, c).reduce().unwrap();
        assert_eq!((q.a, q.b, q.c), reduce(a, b, c));
    }
}

// ---------- CM values ----------

fn tau(minus_b: i64, disc: i64, two_a: i64) -> Complex<DD> {
    let den = <DD as Real>::from_i64(two_a);
    Complex::new(<DD as Real>::from_i64(minus_b).div_acc(den), <DD as Real>::from_i64(-disc).sqrt().div_acc(den))
}

#[test]
fn eta_at_i_is_gamma_quarter() {
    let gamma_quarter = 3.625_609_908_221_908_f64;
    let expect = gamma_quarter / (2.0 * PI.powf(0.75));
    let r = eta_numeric(tau(0, -4, 2), 1e-20).unwrap();
    assert!((r.value.re.to_f64() - expect).abs() < 1e-14);
    assert!((expect - 0.768_225_422).abs() < 1e-9);
}

#[test]
fn j_at_small_cm_points() {
    let j = fn_numeric(SeriesId::J, tau(0, -4, 2), 1e-8).unwrap();
    assert!((j.value.re.to_f64() - 1728.0).abs() < 1e-8);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let j = fn_numeric(SeriesId::J, tau(-1, -15, 2), 1e-8).unwrap();
    assert!((j.value.re.to_f64() - (-52515.0 - 85995.0 * phi)).abs() < 1e-6);
    assert!(j.value.im.to_f64().abs() < 1e-6);
}

#[test]
fn twisted_trace_conductor_fifteen() {
    let r = twisted_trace::<DD>(SeriesId::J, -15, 5, 1e-6).unwrap();
    let v = r.report.integer().unwrap().to_i64().unwrap();
    assert_eq!(v, 85995);
    assert_eq!(-2 * v, -171990);
    // Direct evaluation at the two CM points.
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let j1 = -52515.0 - 85995.0 * phi;
    let j2 = -52515.0 - 85995.0 * (1.0 - phi);
    assert!(((j2 - j1) / 5f64.sqrt() - 85995.0).abs() < 1e-6);
}

#[test]
fn c3a_routes_agree_at_minus_23() {
    assert_eq!(c3a_via_traces::<DD>(-23, 1e-6).unwrap(), c3a_coeff(-23).unwrap());
}

#[test]
fn c3a_vanishes_off_discriminants() {
    let mt = fon_mt_3a(12).unwrap();
    for n in 1..40i64 {
        let c0 = mt.pair.comp0.coeff(n, 4).unwrap_or_default();
        let c1 = mt.pair.comp1.coeff(n, 4).unwrap_or_default();
        if n % 4 != 0 {
            assert_eq!(c0, BigRational::default(), "comp0 at q^({n}/4)");
        }
        if n % 4 != 3 {
            assert_eq!(c1, BigRational::default(), "comp1 at q^({n}/4)");
        }
        if matches!(n % 4, 1 | 2) {
            assert!(mt.coefficient(-n).is_err());
        }
    }
}

// ---------- L-values ----------

#[test]
fn twisted_l_value_stable_under_more_terms() {
    let r = twisted_l_value(SeriesId::F15, -8, 1e-8).unwrap();
    let (a, level) = twisted_coeffs(SeriesId::F15, -8, 2 * r.terms_used).unwrap();
    let c = 2.0 * PI / (level as f64).sqrt();
    let sum: f64 = a.iter().enumerate().skip(1).map(|(n, &an)| an as f64 / n as f64 * (-c * n as f64).exp()).sum();
    assert!((2.0 * sum - r.value).abs() < 1e-4);
    assert!((2.0 * sum - r.value).abs() <= r.tail_estimate + 1e-12);
}
