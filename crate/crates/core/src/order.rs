//! The quadratic order `O_f = Z + Z f w` with `w = (D_K + sqrt D_K)/2`, and its
//! genus-theoretic combinatorics: fundamental divisors, reciprocal pairs,
//! genus characters, genus numbers and local norm indices.

use crate::arith::{self, kronecker, ord_p, PrimeDiscriminant};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticOrder {
    d_k: i64,
    f: i64,
    disc: i64,
}

impl QuadraticOrder {
    /// The order of conductor `f` in the field of fundamental discriminant `d_k`.
    pub fn new(d_k: i64, f: i64) -> Result<Self> {
        if !arith::is_fundamental(d_k) {
            return Err(Error::NotFundamental(d_k));
        }
        if f < 1 {
            return Err(Error::InvalidDiscriminant(d_k, "conductor must be positive"));
        }
        let disc = d_k
            .checked_mul(f * f)
            .ok_or(Error::InvalidDiscriminant(d_k, "discriminant overflows"))?;
        Ok(Self { d_k, f, disc })
    }

    pub fn maximal(d_k: i64) -> Result<Self> {
        Self::new(d_k, 1)
    }

    pub fn from_discriminant(disc: i64) -> Result<Self> {
        let (d_k, f) = arith::conductor_decompose(disc)?;
        Self::new(d_k, f)
    }

    pub fn fundamental_discriminant(&self) -> i64 {
        self.d_k
    }

    pub fn conductor(&self) -> i64 {
        self.f
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.disc > 0
    }

    pub fn is_maximal(&self) -> bool {
        self.f == 1
    }

    /// Trace of the basis element `f w`.
    pub fn generator_trace(&self) -> i64 {
        self.f * self.d_k
    }

    /// Norm of the basis element `f w`.
    pub fn generator_norm(&self) -> i64 {
        self.f * self.f * (self.d_k * self.d_k - self.d_k) / 4
    }

    /// `chi_K(n) = (D_K / n)`.
    pub fn chi_k(&self, n: i64) -> i8 {
        kronecker(self.d_k, n)
    }

    /// The order of conductor `f'` in the same field.
    pub fn with_conductor(&self, f: i64) -> Result<Self> {
        Self::new(self.d_k, f)
    }
}

impl fmt::Display for QuadraticOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O_{} in Q(sqrt {}) [D = {}]", self.f, self.d_k, self.disc)
    }
}

fn is_discriminant_like(n: i64) -> bool {
    matches!(n.rem_euclid(4), 0 | 1)
}

/// All fundamental divisors of `D` (including 1), ascending.
pub fn fundamental_divisors(order: &QuadraticOrder) -> Vec<i64> {
    let d = order.discriminant();
    let fac = arith::factorize(d).expect("valid order has a bounded nonzero discriminant");
    let mut out: Vec<i64> = fac
        .divisors()
        .into_iter()
        .flat_map(|m| [m, -m])
        .filter(|&delta| delta == 1 || arith::is_fundamental(delta))
        .filter(|&delta| is_discriminant_like(d / delta))
        .collect();
    out.sort_unstable();
    out
}

/// The reciprocal fundamental divisor `delta2` with `delta1 * delta2 = f1^2 D_K`.
pub fn reciprocal(order: &QuadraticOrder, delta1: i64) -> Result<i64> {
    let divisors = fundamental_divisors(order);
    let not_divisor = Error::NotFundamentalDivisor {
        delta: delta1,
        disc: order.discriminant(),
    };
    if !divisors.contains(&delta1) {
        return Err(not_divisor);
    }
    let f = order.conductor();
    (1..=f)
        .filter(|f1| f % f1 == 0)
        .filter_map(|f1| {
            let target = f1 * f1 * order.fundamental_discriminant();
            (target % delta1 == 0).then(|| target / delta1)
        })
        .find(|delta2| divisors.contains(delta2))
        .ok_or(not_divisor)
}

/// A genus character, given by an unordered reciprocal pair of fundamental
/// divisors; stored with `delta1 <= delta2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusCharacter {
    delta1: i64,
    delta2: i64,
    f1: i64,
    f0: i64,
}

impl GenusCharacter {
    pub fn new(order: &QuadraticOrder, delta: i64) -> Result<Self> {
        let other = reciprocal(order, delta)?;
        let (delta1, delta2) = if delta <= other { (delta, other) } else { (other, delta) };
        let f1_sq = delta1 * delta2 / order.fundamental_discriminant();
        let f1 = arith::isqrt(f1_sq);
        debug_assert_eq!(f1 * f1, f1_sq);
        Ok(Self {
            delta1,
            delta2,
            f1,
            f0: order.conductor() / f1,
        })
    }

    pub fn delta1(&self) -> i64 {
        self.delta1
    }

    pub fn delta2(&self) -> i64 {
        self.delta2
    }

    pub fn f1(&self) -> i64 {
        self.f1
    }

    pub fn f0(&self) -> i64 {
        self.f0
    }

    /// `delta1 * delta2 * f0^2`.
    pub fn discriminant(&self) -> i64 {
        self.delta1 * self.delta2 * self.f0 * self.f0
    }

    pub fn is_trivial(&self) -> bool {
        self.delta1 == 1 || self.delta2 == 1
    }

    /// `m_p = ord_p(f0)`.
    pub fn m_p(&self, p: i64) -> u32 {
        ord_p(self.f0, p)
    }

    /// `phi(n) = (delta1 / n)`.
    pub fn phi(&self, n: i64) -> i8 {
        kronecker(self.delta1, n)
    }

    /// `psi(n) = (delta2 / n)`.
    pub fn psi(&self, n: i64) -> i8 {
        kronecker(self.delta2, n)
    }
}

impl fmt::Display for GenusCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.delta1, self.delta2)
    }
}

/// One character per reciprocal pair; the trivial pair `(1, D_K)` comes first,
/// the rest ascending.
pub fn genus_characters(order: &QuadraticOrder) -> Vec<GenusCharacter> {
    let mut chars: Vec<GenusCharacter> = fundamental_divisors(order)
        .into_iter()
        .map(|delta| GenusCharacter::new(order, delta).expect("listed divisors are fundamental"))
        .collect();
    chars.sort_by_key(|c| (!c.is_trivial(), c.delta1, c.delta2));
    chars.dedup();
    chars
}

/// Weber's case formula, with `nu` the number of distinct odd primes dividing `D`.
pub fn genus_number_narrow(order: &QuadraticOrder) -> u64 {
    let d = order.discriminant();
    let nu = arith::factorize(d)
        .expect("valid order has a bounded nonzero discriminant")
        .odd_prime_count() as u32;
    if d.rem_euclid(4) == 1 || d.rem_euclid(16) == 4 {
        debug_assert!(nu >= 1);
        1 << (nu - 1)
    } else if d.rem_euclid(32) == 0 {
        1 << (nu + 1)
    } else {
        1 << nu
    }
}

/// True when every odd prime dividing `D` is `1 mod 4` and `16` does not divide `D`.
fn narrow_equals_wide_conditions(order: &QuadraticOrder) -> bool {
    let d = order.discriminant();
    let fac = arith::factorize(d).expect("valid order has a bounded nonzero discriminant");
    fac.primes().filter(|&p| p != 2).all(|p| p % 4 == 1) && d.rem_euclid(16) != 0
}

pub fn genus_number_wide(order: &QuadraticOrder) -> u64 {
    let narrow = genus_number_narrow(order);
    if !order.is_real() || narrow_equals_wide_conditions(order) {
        narrow
    } else {
        narrow / 2
    }
}

/// `e_p = [Z_p^x : N(O_{f,p}^x)]`.
pub fn local_norm_index(order: &QuadraticOrder, p: i64) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let d_k = order.fundamental_discriminant();
    let f = order.conductor();
    let e = ord_p(f, p);
    if e == 0 {
        return Ok(if d_k % p == 0 { 2 } else { 1 });
    }
    if p != 2 {
        return Ok(2);
    }
    let index = if order.discriminant().rem_euclid(32) == 0 {
        4
    } else if e == 1 && d_k % 2 != 0 {
        1
    } else {
        // ord_2 f = 1 with D_K = 12 mod 16, or ord_2 f = 2 with D_K = 1 mod 4
        2
    };
    Ok(index)
}

/// Narrow genus number `g = (prod_p e_p) / [K : Q]` from the local norm indices.
pub fn genus_number_from_local_indices(order: &QuadraticOrder) -> u64 {
    let fac = arith::factorize(order.discriminant()).expect("valid order has a bounded nonzero discriminant");
    let product: u64 = fac
        .primes()
        .map(|p| local_norm_index(order, p).expect("prime"))
        .product();
    product / 2
}

/// Whether `-1` is a norm from the real quadratic field `K`: all odd primes of
/// `D_K` are `1 mod 4`.
pub fn minus_one_is_norm(order: &QuadraticOrder) -> Result<bool> {
    let d_k = order.fundamental_discriminant();
    if d_k < 0 {
        return Err(Error::NotReal(d_k));
    }
    let fac = arith::factorize(d_k)?;
    let all_one_mod_four = fac.primes().filter(|&p| p != 2).all(|p| p % 4 == 1);
    Ok(all_one_mod_four)
}

/// Prime discriminants of the field.
pub fn prime_discriminants(order: &QuadraticOrder) -> Vec<PrimeDiscriminant> {
    arith::prime_discriminant_decomposition(order.fundamental_discriminant())
        .expect("order stores a fundamental discriminant")
}
