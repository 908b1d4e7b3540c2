//! Type numbers of maximal orders of `M_2(K)` for a quadratic field `K`.
//!
//! Maximal orders are conjugate to `Λ(a) = (O_K, a; a^-1, O_K)` for an ideal
//! `a`, and `Λ(a)`, `Λ(b)` are conjugate exactly when `a ~ b c^n` (`n = 2` here).
//! Conjugacy under `GL_2(K)` uses the wide class group, under `GL_2^+(K)` the
//! narrow one.

use crate::arith::{self, isqrt};
use crate::classgroup::{ClassId, NarrowClassGroup, WideClassGroup};
use crate::error::{Error, Result};
use crate::ideals::{self, ProperIdeal};
use crate::order::QuadraticOrder;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Wide,
    Narrow,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Wide => "wide",
            Sense::Narrow => "narrow",
        })
    }
}

/// `Λ(a)` for one coset of square classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalOrderRep {
    /// The coset of square classes, in the group of the chosen sense.
    pub coset: usize,
    /// Class of `a` in that group.
    pub class: ClassId,
    pub ideal: ProperIdeal,
    pub label: String,
    /// `[[O_K, a], [a^-1, O_K]]`.
    pub pattern: [[String; 2]; 2],
}

fn require_maximal(order: &QuadraticOrder) -> Result<()> {
    if order.is_maximal() {
        Ok(())
    } else {
        Err(Error::NotMaximal(order.conductor()))
    }
}

/// `|Cl / Cl^n|` in the given sense; the type number of `M_n(K)` for `n = 2`.
pub fn classes_modulo_powers(order: &QuadraticOrder, sense: Sense, n: u64) -> Result<usize> {
    require_maximal(order)?;
    let narrow = NarrowClassGroup::build(order);
    Ok(match sense {
        Sense::Narrow => narrow.classes_modulo_powers(n),
        Sense::Wide => WideClassGroup::from_narrow(&narrow).classes_modulo_powers(n),
    })
}

pub fn type_number_wide(order: &QuadraticOrder) -> Result<usize> {
    classes_modulo_powers(order, Sense::Wide, 2)
}

pub fn type_number_narrow(order: &QuadraticOrder) -> Result<usize> {
    classes_modulo_powers(order, Sense::Narrow, 2)
}

pub fn type_number(order: &QuadraticOrder, sense: Sense) -> Result<usize> {
    classes_modulo_powers(order, sense, 2)
}

/// `sqrt m` with `m` the squarefree kernel of `D_K`; `D_K = m` or `4m`.
fn radicand(d_k: i64) -> i64 {
    if d_k % 4 == 0 {
        d_k / 4
    } else {
        d_k
    }
}

/// `alpha = (u + v sqrt D_K)/2` written as `x + y sqrt m`, or as
/// `(x + y sqrt m)/2` when both coordinates are halves.
fn format_element(d_k: i64, u: i64, v: i64) -> String {
    let m = radicand(d_k);
    let root = if m == -1 { "i".to_string() } else { format!("√{m}") };
    // 2 alpha = x2 + y2 sqrt m
    let (x2, y2) = if d_k % 4 == 0 { (u, 2 * v) } else { (u, v) };
    let halves = x2 % 2 != 0 || y2 % 2 != 0;
    let (x, y) = if halves { (x2, y2) } else { (x2 / 2, y2 / 2) };
    let term = |y: i64| match y {
        1 => root.clone(),
        _ => format!("{y}{root}"),
    };
    let body = match (x, y) {
        (x, 0) => x.to_string(),
        (0, y) if y < 0 => format!("-{}", term(-y)),
        (0, y) => term(y),
        (x, y) if y < 0 => format!("{x} - {}", term(-y)),
        (x, y) => format!("{x} + {}", term(y)),
    };
    if halves {
        format!("({body})/2")
    } else {
        body
    }
}

/// A generator `(u + v sqrt D)/2` of an integral ideal, if principal, with
/// the least `v >= 0` and then the least `u >= 0` found within `v <= bound`.
pub fn principal_generator(order: &QuadraticOrder, ideal: &ProperIdeal, bound: i64) -> Option<(i64, i64)> {
    if !ideal.is_integral() {
        return None;
    }
    let disc = order.discriminant() as i128;
    let norm = ideal.norm().to_integer() as i128;
    let l = ideal.scale().to_integer() as i128;
    let (a, b) = (ideal.a() as i128, ideal.b() as i128);
    // alpha = v (-b + sqrt D)/2 + (u + v b)/2 lies in l (Z a + Z (-b + sqrt D)/2)
    let member = |u: i128, v: i128| v % l == 0 && (u + v * b).rem_euclid(2 * l * a) == 0;
    for v in 0..=bound as i128 {
        let mut candidates = Vec::new();
        for target in [disc * v * v + 4 * norm, disc * v * v - 4 * norm] {
            if target < 0 {
                continue;
            }
            let u = isqrt(target as i64) as i128;
            if u * u == target {
                candidates.push(u);
            }
        }
        candidates.sort_unstable();
        for u in candidates {
            for su in [u, -u] {
                if member(su, v) {
                    return Some((u as i64, v as i64));
                }
            }
        }
    }
    None
}

fn ideal_label(order: &QuadraticOrder, ideal: &ProperIdeal) -> String {
    match principal_generator(order, ideal, 10_000) {
        Some((u, v)) => format!("({})", format_element(order.fundamental_discriminant(), u, v)),
        None => {
            let d_k = order.fundamental_discriminant();
            let second = format_element(d_k, -ideal.b(), 1);
            format!("({}, {})", ideal.a(), second)
        }
    }
}

/// One representative `Λ(a)` per coset of square classes. The principal
/// coset is labeled by `O_K`; every other coset by its smallest prime ideal
/// of odd norm, or of norm 2 when no odd prime is found below the bound.
pub fn representatives(order: &QuadraticOrder, sense: Sense) -> Result<Vec<MaximalOrderRep>> {
    require_maximal(order)?;
    let narrow = NarrowClassGroup::build(order);
    let wide = WideClassGroup::from_narrow(&narrow);
    let (cosets, project): (Vec<Vec<ClassId>>, Box<dyn Fn(ClassId) -> ClassId>) = match sense {
        Sense::Narrow => (narrow.genus_cosets(), Box::new(|c| c)),
        Sense::Wide => (wide.genus_cosets(), Box::new(|c| wide.project(c))),
    };
    let coset_of = |class: ClassId| cosets.iter().position(|c| c.contains(&class)).expect("cosets partition");

    let mut chosen: Vec<Option<(ClassId, ProperIdeal)>> = vec![None; cosets.len()];
    chosen[0] = Some((0, ProperIdeal::unit(order)));
    let mut even: Vec<Option<(ClassId, ProperIdeal)>> = vec![None; cosets.len()];
    let bound = 1000 + 50 * order.discriminant().unsigned_abs() as usize;
    for q in arith::primes_up_to(bound) {
        if chosen.iter().all(Option::is_some) {
            break;
        }
        for ideal in ideals::prime_ideals_above(order, q)? {
            if ideal.norm() != num_rational::Ratio::from_integer(q) {
                continue;
            }
            let class = project(narrow.class_of_ideal(&ideal)?);
            let slot = coset_of(class);
            let target = if q == 2 { &mut even } else { &mut chosen };
            if target[slot].is_none() {
                target[slot] = Some((class, ideal));
            }
        }
    }
    chosen
        .into_iter()
        .zip(even)
        .enumerate()
        .map(|(coset, (odd, two))| {
            let (class, ideal) = odd.or(two).ok_or(Error::SearchExhausted {
                class: coset,
                modulus: 2 * order.discriminant(),
                bound: bound as i64,
            })?;
            let label = if coset == 0 {
                "O_K".to_string()
            } else {
                ideal_label(order, &ideal)
            };
            let inv = if coset == 0 {
                "O_K".to_string()
            } else {
                format!("{label}^-1")
            };
            Ok(MaximalOrderRep {
                coset,
                class,
                ideal,
                pattern: [["O_K".into(), label.clone()], [inv, "O_K".into()]],
                label,
            })
        })
        .collect()
}
