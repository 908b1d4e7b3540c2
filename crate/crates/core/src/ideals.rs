//! Proper ideals of `O_f`: the lattice view used for exhaustive enumeration,
//! the normalized `(l, a, b)` form, products, and closed-form local counts.

use crate::arith::{self, kronecker, ord_p};
use crate::classgroup::BinaryQuadraticForm;
use crate::error::{Error, Result};
use crate::order::QuadraticOrder;
use num_integer::Integer;
use num_rational::Ratio;
use std::fmt;

/// The sublattice `Z x + Z (y + z g)` of `O_f = Z + Z g`, `g = f w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeHNF {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl LatticeHNF {
    pub fn new(x: i64, y: i64, z: i64) -> Option<Self> {
        (x >= 1 && z >= 1 && (0..x).contains(&y)).then_some(Self { x, y, z })
    }

    /// The whole order.
    pub fn unit() -> Self {
        Self { x: 1, y: 0, z: 1 }
    }

    pub fn index(&self) -> i64 {
        self.x * self.z
    }

    /// Whether `u + v g` lies in the lattice scaled by `k`.
    fn contains_scaled(&self, u: i128, v: i128, k: i128) -> bool {
        let (x, y, z) = (self.x as i128 * k, self.y as i128 * k, self.z as i128 * k);
        if v % z != 0 {
            return false;
        }
        (u - (v / z) * y) % x == 0
    }

    pub fn contains(&self, u: i64, v: i64) -> bool {
        self.contains_scaled(u as i128, v as i128, 1)
    }

    /// `g L ⊂ k L`.
    fn closed_under_generator(&self, order: &QuadraticOrder, k: i128) -> bool {
        let t = order.generator_trace() as i128;
        let nn = order.generator_norm() as i128;
        let (x, y, z) = (self.x as i128, self.y as i128, self.z as i128);
        // g x = x g,  g (y + z g) = -z nn + (y + z t) g
        self.contains_scaled(0, x, k) && self.contains_scaled(-z * nn, y + z * t, k)
    }

    /// Whether the lattice is an `O_f`-module.
    pub fn is_ideal(&self, order: &QuadraticOrder) -> bool {
        self.closed_under_generator(order, 1)
    }

    /// Whether the multiplier ring of the lattice is exactly `O_f`.
    ///
    /// Orders above `O_f` are `O_{f'}` with `f' | f`, and `O_{f'}` contains
    /// `O_{f/p}` for some prime `p | f/f'`, so it suffices to rule out
    /// stability under `g/p` for each prime `p | f`.
    pub fn is_proper(&self, order: &QuadraticOrder) -> bool {
        if !self.is_ideal(order) {
            return false;
        }
        let fac = arith::factorize(order.conductor()).expect("conductor is positive");
        let proper = fac
            .primes()
            .all(|p| !self.closed_under_generator(order, p as i128));
        proper
    }

    /// `(l, a, b)` data of an `O_f`-ideal lattice.
    pub fn to_ideal(&self, order: &QuadraticOrder) -> Result<ProperIdeal> {
        if !self.is_ideal(order) {
            return Err(Error::NotProper(order.discriminant()));
        }
        let l = self.z;
        let a = self.x / l;
        let d = self.y / l;
        let b = -(2 * d + order.generator_trace());
        Ok(ProperIdeal::from_parts(Ratio::from_integer(l), a, b))
    }
}

/// Every sublattice of index `n` of `O_f`, in Hermite normal form.
pub fn lattices_of_index(n: i64) -> impl Iterator<Item = LatticeHNF> {
    (1..=n)
        .filter(move |z| n % z == 0)
        .flat_map(move |z| {
            let x = n / z;
            (0..x).map(move |y| LatticeHNF { x, y, z })
        })
}

/// `l (Z a + Z (-b + sqrt D)/2)` with `-a < b <= a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProperIdeal {
    scale: Ratio<i64>,
    a: i64,
    b: i64,
}

impl ProperIdeal {
    fn from_parts(scale: Ratio<i64>, a: i64, b: i64) -> Self {
        let two_a = 2 * a;
        let mut b = b.mod_floor(&two_a);
        if b > a {
            b -= two_a;
        }
        Self { scale, a, b }
    }

    /// Validates the data: `a > 0`, `l > 0`, `b^2 = D mod 4a` and a primitive
    /// associated form.
    pub fn new(order: &QuadraticOrder, scale: Ratio<i64>, a: i64, b: i64) -> Result<Self> {
        let disc = order.discriminant();
        let c_num = b as i128 * b as i128 - disc as i128;
        if a <= 0 || *scale.numer() <= 0 || c_num % (4 * a as i128) != 0 {
            return Err(Error::NotProper(disc));
        }
        let c = (c_num / (4 * a as i128)) as i64;
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::NotProper(disc));
        }
        Ok(Self::from_parts(scale, a, b))
    }

    /// `O_f` itself.
    pub fn unit(order: &QuadraticOrder) -> Self {
        Self::from_parts(Ratio::from_integer(1), 1, order.discriminant().rem_euclid(2))
    }

    pub fn scale(&self) -> Ratio<i64> {
        self.scale
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `N = l^2 a`.
    pub fn norm(&self) -> Ratio<i64> {
        self.scale * self.scale * self.a
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    /// The lattice in Hermite normal form; only for integral ideals.
    pub fn to_lattice(&self, order: &QuadraticOrder) -> Option<LatticeHNF> {
        if !self.is_integral() {
            return None;
        }
        let l = self.scale.to_integer();
        let d = (-(self.b + order.generator_trace()) / 2).mod_floor(&self.a);
        LatticeHNF::new(l * self.a, l * d, l)
    }

    /// Product `I1 I2 = l1 l2 d I(A, B)` from Dirichlet composition.
    pub fn mul(&self, other: &Self, order: &QuadraticOrder) -> Result<Self> {
        let f1 = ideal_to_form(self, order)?;
        let f2 = ideal_to_form(other, order)?;
        let (d, f3) = f1.compose_unreduced(&f2)?;
        Ok(Self::from_parts(self.scale * other.scale * d, f3.a(), f3.b()))
    }

    /// The conjugate ideal `l (Z a + Z (b + sqrt D)/2)`.
    pub fn conjugate(&self) -> Self {
        Self::from_parts(self.scale, self.a, -self.b)
    }
}

impl fmt::Display for ProperIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}, ({} + sqrt D)/2]", self.scale, self.a, -self.b)
    }
}

/// `(a, b, (b^2 - D)/(4a))`.
pub fn ideal_to_form(ideal: &ProperIdeal, order: &QuadraticOrder) -> Result<BinaryQuadraticForm> {
    let disc = order.discriminant();
    let (a, b) = (ideal.a, ideal.b);
    let c_num = b as i128 * b as i128 - disc as i128;
    if c_num % (4 * a as i128) != 0 {
        return Err(Error::NotProper(disc));
    }
    BinaryQuadraticForm::with_discriminant(a, b, (c_num / (4 * a as i128)) as i64, disc)
        .map_err(|_| Error::NotProper(disc))
}

/// All integral proper ideals of norm `n`, ordered by their lattices.
pub fn enumerate_proper_ideals(order: &QuadraticOrder, n: i64) -> Vec<ProperIdeal> {
    lattices_of_index(n)
        .filter(|l| l.is_proper(order))
        .map(|l| l.to_ideal(order).expect("proper lattices are ideals"))
        .collect()
}

/// `N_max(p, j)`: ideals of norm `p^j` of the maximal order at `p`.
fn maximal_local_count(chi: i8, j: u32) -> u64 {
    match chi {
        1 => j as u64 + 1,
        -1 => u64::from(j % 2 == 0),
        _ => 1,
    }
}

/// Number of proper ideals of norm `p^k` of the localization `O_{f,p}`.
pub fn count_proper_ideals_local(order: &QuadraticOrder, p: i64, k: u32) -> u64 {
    let chi = order.chi_k(p);
    let e = ord_p(order.conductor(), p);
    if e == 0 {
        return maximal_local_count(chi, k);
    }
    let p = p as u64;
    if k < 2 * e {
        if k % 2 == 1 {
            0
        } else {
            p.pow(k / 2)
        }
    } else {
        let units = p.pow(e - 1) * (p as i64 - chi as i64) as u64;
        units * maximal_local_count(chi, k - 2 * e)
    }
}

/// `prod_p count_proper_ideals_local(p, ord_p n)`.
pub fn count_proper_ideals(order: &QuadraticOrder, n: i64) -> u64 {
    let fac = arith::factorize(n).expect("n is positive");
    fac.factors()
        .iter()
        .map(|&(p, k)| count_proper_ideals_local(order, p, k))
        .product()
}

/// Prime ideals of `O_f` above a prime `q` not dividing `f`.
pub fn prime_ideals_above(order: &QuadraticOrder, q: i64) -> Result<Vec<ProperIdeal>> {
    if !arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let f = order.conductor();
    if f % q == 0 {
        return Err(Error::PrimeDividesConductor { q, f });
    }
    let disc = order.discriminant();
    match kronecker(disc, q) {
        -1 => Ok(vec![ProperIdeal::from_parts(
            Ratio::from_integer(q),
            1,
            disc.rem_euclid(2),
        )]),
        _ => {
            let four_q = 4 * q as i128;
            let mut out: Vec<ProperIdeal> = ((-q + 1)..=q)
                .filter(|&b| (b as i128 * b as i128 - disc as i128) % four_q == 0)
                .map(|b| ProperIdeal::from_parts(Ratio::from_integer(1), q, b))
                .collect();
            out.sort_by_key(|i| i.b);
            Ok(out)
        }
    }
}

/// Norm of `c0 + c1 g`.
fn element_norm(order: &QuadraticOrder, c0: i128, c1: i128) -> i128 {
    let t = order.generator_trace() as i128;
    let nn = order.generator_norm() as i128;
    c0 * c0 + t * c0 * c1 + nn * c1 * c1
}

/// An element `alpha = u x + v (y + z g)` of `L` with
/// `ord_p N(alpha) = ord_p [O_f : L]`, so that `L_p = alpha O_{f,p}`.
///
/// Generators are determined modulo `p L`, so `0 <= u, v < p` suffices.
/// Returns `(u, v)`.
pub fn local_generator(lattice: &LatticeHNF, order: &QuadraticOrder, p: i64) -> Option<(i64, i64)> {
    let target = ord_p(lattice.index(), p);
    let (x, y, z) = (lattice.x as i128, lattice.y as i128, lattice.z as i128);
    let p128 = p as i128;
    for u in 0..p {
        for v in 0..p {
            if u == 0 && v == 0 {
                continue;
            }
            let (u, v) = (u as i128, v as i128);
            let n = element_norm(order, u * x + v * y, v * z);
            let mut n = n.abs();
            let mut k = 0;
            while n % p128 == 0 && k <= target {
                n /= p128;
                k += 1;
            }
            if k == target {
                return Some((u as i64, v as i64));
            }
        }
    }
    None
}
