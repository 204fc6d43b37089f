//! Elementary integer arithmetic: residues, primality, squarefree tests,
//! and the Kronecker symbol.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Residue of `a` modulo `m > 0`, taken in `[0, m)`.
pub fn modulo(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `p <= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(k, &p)| p.then_some(k as u64)).collect()
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// `D` is nonzero and `D = 0, 1 (mod 4)`.
pub fn is_discriminant(d: i64) -> bool {
    d != 0 && matches!(modulo(d, 4), 0 | 1)
}

/// Discriminant of a quadratic field: `D = 1 (mod 4)` squarefree, or
/// `D = 4m` with `m` squarefree and `m = 2, 3 (mod 4)`.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match modulo(d, 4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(modulo(m, 4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Kronecker symbol `(a | n)` for arbitrary integers, including negative and
/// even `n`.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i64;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a | 2) = 1 for a = +-1 (mod 8), -1 for a = +-3 (mod 8).
        if twos % 2 == 1 && matches!(modulo(a, 8), 3 | 5) {
            result = -result;
        }
    }
    // n is now odd and positive: a Jacobi symbol remains.
    let mut a = modulo(a, n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol of `a` modulo an odd prime `p`, by Euler's criterion.
pub fn legendre_mod_p(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        _ => -1,
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Reduce a `BigInt` modulo a small positive modulus into `[0, m)`.
pub fn big_mod(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Partial factorisation of `|n|` by trial division up to `bound`.
///
/// Returns the prime-power factors found and the unfactored cofactor
/// (all of whose prime factors exceed `bound`).
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut m = n.abs();
    let mut factors = Vec::new();
    if m.is_zero() {
        return (factors, m);
    }
    for p in primes_up_to(bound) {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
    }
    if m > BigInt::one() {
        let b = BigInt::from(bound);
        if &b * &b >= m {
            factors.push((m.clone(), 1));
            m = BigInt::one();
        }
    }
    (factors, m)
}
