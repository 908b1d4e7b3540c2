//! Exact integer number theory at desk scale: trial-division factorization,
//! the fully extended Kronecker symbol, fundamental discriminants and their
//! decomposition into prime discriminants.

use crate::error::{Error, Result};
use num_integer::Integer;
use std::fmt;

/// Largest absolute value accepted by [`factorize`].
pub const TRIAL_DIVISION_BOUND: i64 = 1_000_000_000_000_000;

/// Signed prime factorization `sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    sign: i8,
    factors: Vec<(i64, u32)>,
}

impl PrimeFactorization {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `(prime, exponent)` pairs with strictly ascending primes.
    pub fn factors(&self) -> &[(i64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = i64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: i64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Number of distinct prime divisors.
    pub fn prime_count(&self) -> usize {
        self.factors.len()
    }

    /// Number of distinct odd prime divisors.
    pub fn odd_prime_count(&self) -> usize {
        self.factors.iter().filter(|&&(p, _)| p != 2).count()
    }

    pub fn value(&self) -> i64 {
        self.factors
            .iter()
            .fold(self.sign as i64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<i64> {
        let mut divs = vec![1i64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn factorize(n: i64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if n.unsigned_abs() > TRIAL_DIVISION_BOUND as u64 {
        return Err(Error::TooLarge(n, TRIAL_DIVISION_BOUND));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.abs();
    let mut factors = Vec::new();
    let mut p = 2i64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(PrimeFactorization { sign, factors })
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut p = 5;
    while p * p <= n {
        if n % p == 0 || n % (p + 2) == 0 {
            return false;
        }
        p += 6;
    }
    true
}

/// Primes up to `n` inclusive.
pub fn primes_up_to(n: usize) -> Vec<i64> {
    if n < 2 {
        return Vec::new();
    }
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
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as i64))
        .collect()
}

pub fn isqrt(n: i64) -> i64 {
    assert!(n >= 0, "isqrt of negative number");
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

/// p-adic valuation of a nonzero integer.
pub fn ord_p(n: i64, p: i64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factorize(n).is_ok_and(|fac| fac.factors.iter().all(|&(_, e)| e == 1))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i8 {
    assert!(n > 0 && n % 2 == 1, "jacobi symbol needs odd positive modulus");
    let mut a = a.mod_floor(&n);
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
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

/// The fully extended Kronecker symbol `(d/n)`, defined for all integers.
///
/// At `n = -1` this is `-1` exactly when `d < 0`, so for a discriminant `d`
/// the map `n -> (d/n)` is the character of `Q(sqrt d)` extended to
/// negative arguments.
pub fn kronecker(d: i64, n: i64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= twos;
    }
    result * jacobi(d, n)
}

/// `d = 1 mod 4` squarefree, or `d = 4m` with `m = 2, 3 mod 4` squarefree.
/// `1` is excluded.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Splits a discriminant as `d = f^2 * d_k` with `d_k` fundamental.
pub fn conductor_decompose(d: i64) -> Result<(i64, i64)> {
    if d == 0 {
        return Err(Error::InvalidDiscriminant(d, "zero"));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d, "not 0 or 1 mod 4"));
    }
    if is_square(d) {
        return Err(Error::InvalidDiscriminant(d, "perfect square"));
    }
    let fac = factorize(d)?;
    // squarefree kernel
    let mut core = fac.sign() as i64;
    let mut f = 1i64;
    for &(p, e) in fac.factors() {
        if e % 2 == 1 {
            core *= p;
        }
        f *= p.pow(e / 2);
    }
    if core.rem_euclid(4) != 1 {
        core *= 4;
        f /= 2;
    }
    debug_assert_eq!(f * f * core, d);
    Ok((core, f))
}

/// A fundamental discriminant divisible by exactly one prime:
/// `-4`, `8`, `-8`, or `p* = (-1)^((p-1)/2) p` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeDiscriminant(i64);

impl PrimeDiscriminant {
    pub fn new(value: i64) -> Result<Self> {
        let ok = match value {
            -4 | 8 | -8 => true,
            v if v.rem_euclid(4) == 1 => is_prime(v.abs()),
            _ => false,
        };
        if ok {
            Ok(Self(value))
        } else {
            Err(Error::NotPrimeDiscriminant(value))
        }
    }

    /// The prime discriminant `p*` attached to an odd prime `p`.
    pub fn odd(p: i64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self(if p % 4 == 1 { p } else { -p }))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn prime(self) -> i64 {
        if self.0 % 2 == 0 {
            2
        } else {
            self.0.abs()
        }
    }
}

impl fmt::Display for PrimeDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The unique factorization of a fundamental discriminant into prime
/// discriminants, ordered by prime.
pub fn prime_discriminant_decomposition(d_k: i64) -> Result<Vec<PrimeDiscriminant>> {
    if !is_fundamental(d_k) {
        return Err(Error::NotFundamental(d_k));
    }
    let fac = factorize(d_k)?;
    let mut parts = Vec::with_capacity(fac.prime_count());
    let mut odd_product = 1i64;
    for p in fac.primes().filter(|&p| p != 2) {
        let pd = PrimeDiscriminant::odd(p)?;
        odd_product *= pd.value();
        parts.push(pd);
    }
    if d_k % 2 == 0 {
        let two = PrimeDiscriminant::new(d_k / odd_product)?;
        parts.insert(0, two);
    }
    Ok(parts)
}

/// Extended Euclid on `i128`: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Number of positive divisors.
pub fn divisor_count(n: u64) -> u64 {
    let mut m = n;
    let mut count = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if m > 1 {
        count *= 2;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let one = factorize(1).unwrap();
        assert_eq!(one.sign(), 1);
        assert!(one.factors().is_empty());

        let f = factorize(-15).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.factors(), &[(3, 1), (5, 1)]);

        let f = factorize(884).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (13, 1), (17, 1)]);
        assert_eq!(4 * 13 * 17, 884);
        assert_eq!(f.value(), 884);

        assert_eq!(factorize(0), Err(Error::ZeroInput));
        assert!(matches!(factorize(i64::MAX), Err(Error::TooLarge(..))));
    }

    #[test]
    fn divisors_and_counts() {
        let f = factorize(12).unwrap();
        assert_eq!(f.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(1), 1);
        assert_eq!(factorize(-884).unwrap().odd_prime_count(), 2);
    }

    /// Brute-force Kronecker values at primes from splitting behaviour:
    /// for odd p not dividing d, (d/p) = 1 iff x^2 = d has a solution mod p.
    fn legendre_by_squares(d: i64, p: i64) -> i8 {
        if d.rem_euclid(p) == 0 {
            return 0;
        }
        let is_sq = (1..p).any(|x| (x * x - d).rem_euclid(p) == 0);
        if is_sq {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        for d in [-4, 5, 12, 221, -15] {
            assert_eq!(kronecker(d, 1), 1);
        }
        // x^2 + y^2 = 0 mod 3 forces x = y = 0 mod 3
        assert!(!(1..3).any(|x: i64| (1..3).any(|y: i64| (x * x + y * y) % 3 == 0)));
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(221 % 5, 1);
        assert_eq!(kronecker(221, 5), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(12, 2), 0);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(5, 0), 0);
    }

    #[test]
    fn kronecker_agrees_with_square_search() {
        for d in [-23, -20, -4, -3, 5, 8, 12, 13, 221, 1000] {
            for p in primes_up_to(200).into_iter().filter(|&p| p != 2) {
                assert_eq!(kronecker(d, p), legendre_by_squares(d, p), "d={d}, p={p}");
            }
        }
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor_decompose(12).unwrap(), (12, 1));
        assert_eq!(conductor_decompose(884).unwrap(), (221, 2));
        assert_eq!(conductor_decompose(-16).unwrap(), (-4, 2));
        assert_eq!(conductor_decompose(-3 * 144).unwrap(), (-3, 12));
        assert_eq!(conductor_decompose(8 * 9).unwrap(), (8, 3));
        assert!(conductor_decompose(7).is_err());
        assert!(conductor_decompose(2).is_err());
        assert!(conductor_decompose(16).is_err());
        assert!(conductor_decompose(0).is_err());
    }

    #[test]
    fn fundamental_predicate() {
        let fundamental: Vec<i64> = (-30..=30).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(
            fundamental,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
    }

    #[test]
    fn prime_discriminant_examples() {
        let vals = |d| -> Vec<i64> {
            prime_discriminant_decomposition(d)
                .unwrap()
                .into_iter()
                .map(PrimeDiscriminant::value)
                .collect()
        };
        assert_eq!(vals(221), vec![13, 17]);
        assert_eq!(vals(-4), vec![-4]);
        assert_eq!(vals(24), vec![-8, -3]);
        assert_eq!(vals(-15), vec![-3, 5]);
        assert_eq!(vals(12), vec![-4, -3]);
        assert!(prime_discriminant_decomposition(-16).is_err());
        assert!(prime_discriminant_decomposition(1).is_err());
        assert!(PrimeDiscriminant::new(-5).is_err());
        assert!(PrimeDiscriminant::new(-4).is_ok());
        assert_eq!(PrimeDiscriminant::new(-7).unwrap().prime(), 7);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (12, -18)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, num_integer::gcd(a, b));
        }
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert!(is_square(221 * 221));
        assert!(!is_square(-4));
    }
}
