//! Elementary number theory on big integers: trial-division factoring,
//! squarefree parts, Legendre symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime factorization of `|n|` as `(prime, exponent)` pairs, ascending.
/// `n` must be nonzero.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut n = n.abs();
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        let mut m = small;
        let mut d = 2u64;
        while d * d <= m {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            if e > 0 {
                out.push((BigInt::from(d), e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.push((BigInt::from(m), 1));
        }
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Squarefree integer in the same square class as `n ≠ 0` (sign kept).
pub fn squarefree_part(n: &BigInt) -> BigInt {
    let core = factorize(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigInt::one(), |acc, (p, _)| acc * p);
    if n.is_negative() {
        -core
    } else {
        core
    }
}

/// Integer in the square class of a nonzero rational: `p/q ~ p·q`.
pub fn rational_square_class(x: &BigRational) -> BigInt {
    squarefree_part(&(x.numer() * x.denom()))
}

/// `(v, u)` with `n = p^v · u` and `p ∤ u`.
pub fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = n.clone();
    let mut v = 0;
    while !u.is_zero() && (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u | p)` for an odd prime `p` not dividing `u`.
pub fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let r = u.mod_floor(p);
    let e = (p - BigInt::one()) / 2;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}
