use crate::arith::{self, ext_gcd, isqrt};
use crate::error::{Error, Result};
use num_integer::Integer;
use std::fmt;

/// A primitive integral binary quadratic form `a x^2 + b x y + c y^2` of
/// non-square discriminant. Definite forms are positive definite.
///
/// Field order makes the derived `Ord` lexicographic on `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let form = Self { a, b, c };
        let disc = form.discriminant();
        if disc == 0 || arith::is_square(disc) {
            return Err(Error::SquareDiscriminant(disc));
        }
        if disc < 0 && a < 0 {
            return Err(Error::NegativeDefinite(a, b, c));
        }
        if form.content() != 1 {
            return Err(Error::Imprimitive(a, b, c));
        }
        Ok(form)
    }

    /// A form with a given discriminant; checks the discriminant as well.
    pub fn with_discriminant(a: i64, b: i64, c: i64, disc: i64) -> Result<Self> {
        let form = Self::new(a, b, c)?;
        if form.discriminant() != disc {
            return Err(Error::DiscriminantMismatch {
                a,
                b,
                c,
                found: form.discriminant(),
                expected: disc,
            });
        }
        Ok(form)
    }

    /// `(1, b0, (b0^2 - D)/4)` with `b0 = D mod 2`.
    pub fn principal(disc: i64) -> Result<Self> {
        let b0 = disc.rem_euclid(2);
        if disc.rem_euclid(4) != b0 {
            return Err(Error::InvalidDiscriminant(disc, "not 0 or 1 mod 4"));
        }
        Self::new(1, b0, (b0 * b0 - disc) / 4)
    }

    #[cfg(test)]
    pub(crate) fn from_coefficients_unchecked(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn discriminant(&self) -> i64 {
        let d = (self.b as i128).pow(2) - 4 * self.a as i128 * self.c as i128;
        d as i64
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// `(-a, b, -c)`: the narrow class obtained by multiplying the ideal by an
    /// element of negative norm. Only meaningful for indefinite forms.
    pub fn negated(&self) -> Self {
        Self {
            a: -self.a,
            b: self.b,
            c: -self.c,
        }
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            b.abs() <= a && a <= c && !(b < 0 && (-b == a || a == c))
        } else {
            // |sqrt D - 2|a|| < b < sqrt D
            let s = isqrt(d);
            let two_a = 2 * self.a.abs();
            let b = self.b;
            if b <= 0 || b > s {
                return false;
            }
            if two_a <= s {
                b >= s + 1 - two_a
            } else {
                b + s >= two_a
            }
        }
    }

    /// The reduction operator on indefinite forms:
    /// `(a, b, c) -> (c, r, (r^2 - D)/(4c))` with `r = -b mod 2c` in the
    /// normalizing window.
    pub fn rho(&self) -> Self {
        let d = self.discriminant();
        debug_assert!(d > 0);
        let s = isqrt(d);
        let c = self.c;
        let m = 2 * c.abs();
        let r = if c.abs() > s {
            // -|c| < r <= |c|
            let r = (-self.b).mod_floor(&m);
            if r > c.abs() {
                r - m
            } else {
                r
            }
        } else {
            // sqrt D - 2|c| < r < sqrt D, i.e. s + 1 - 2|c| <= r <= s
            let lo = s + 1 - m;
            lo + (-self.b - lo).mod_floor(&m)
        };
        let r128 = r as i128;
        let new_c = (r128 * r128 - d as i128) / (4 * c as i128);
        Self {
            a: c,
            b: r,
            c: new_c as i64,
        }
    }

    /// Definite forms: the unique reduced form in the class. Indefinite forms:
    /// a form of the reduction cycle of the class.
    pub fn reduce(&self) -> Result<Self> {
        if self.content() != 1 {
            return Err(Error::Imprimitive(self.a, self.b, self.c));
        }
        let d = self.discriminant();
        if d < 0 {
            if self.a < 0 {
                return Err(Error::NegativeDefinite(self.a, self.b, self.c));
            }
            Ok(self.reduce_definite())
        } else {
            let mut f = *self;
            // rho reaches a reduced form in O(log) steps
            while !f.is_reduced() {
                f = f.rho();
            }
            Ok(f)
        }
    }

    /// Shift `b` into `(-a, a]` by `x -> x + t y`.
    fn normalize_definite(&self) -> Self {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let two_a = 2 * a;
        // b' = b + 2 a t in (-a, a]
        let t = Integer::div_floor(&(a - b), &two_a);
        let nb = b + two_a * t;
        let nc = a * t * t + b * t + c;
        Self {
            a: self.a,
            b: nb as i64,
            c: nc as i64,
        }
    }

    fn reduce_definite(&self) -> Self {
        let mut f = self.normalize_definite();
        while f.a > f.c {
            f = Self {
                a: f.c,
                b: -f.b,
                c: f.a,
            }
            .normalize_definite();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    /// Dirichlet composition without reduction. Returns `(d, F)` where
    /// `d = gcd(a1, a2, (b1+b2)/2)`; for the ideals `I1`, `I2` attached to the
    /// inputs, `I1 I2 = d * I(F)`.
    pub fn compose_unreduced(&self, other: &Self) -> Result<(i64, Self)> {
        let disc = self.discriminant();
        if other.discriminant() != disc {
            return Err(Error::DiscriminantMismatch {
                a: other.a,
                b: other.b,
                c: other.c,
                found: other.discriminant(),
                expected: disc,
            });
        }
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let dd = disc as i128;
        let s = (b1 + b2) / 2;
        // u a1 + v a2 + w s = d
        let (g, x, y) = ext_gcd(a1, a2);
        let (d, p, w) = ext_gcd(g, s);
        let (u, v) = (p * x, p * y);
        let a3 = a1 * a2 / (d * d);
        let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + dd) / 2;
        debug_assert_eq!(num % d, 0);
        let two_a3 = 2 * a3.abs();
        let mut b3 = (num / d).mod_floor(&two_a3);
        if b3 > a3.abs() {
            b3 -= two_a3;
        }
        let c3 = (b3 * b3 - dd) / (4 * a3);
        debug_assert_eq!(b3 * b3 - 4 * a3 * c3, dd);
        Ok((
            d as i64,
            Self {
                a: a3 as i64,
                b: b3 as i64,
                c: c3 as i64,
            },
        ))
    }

    /// Composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let (_, f) = self.compose_unreduced(other)?;
        f.reduce()
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}
