//! Narrow and wide class groups of `O_f` realized on binary quadratic forms,
//! the square-class subgroup, and evaluation of genus characters on classes.
//!
//! Definite discriminants use the unique reduced form of each class.
//! Indefinite discriminants group all reduced forms into `rho`-cycles; each
//! cycle is one narrow class, represented by its lexicographically least form.

mod form;

pub use form::BinaryQuadraticForm;

use crate::arith::{self, isqrt, kronecker};
use crate::error::{Error, Result};
use crate::ideals::{self, ProperIdeal};
use crate::order::{GenusCharacter, QuadraticOrder};
use num_integer::Integer;
use std::collections::{BTreeMap, HashMap};

pub type ClassId = usize;

/// Box radius used when searching a class for a represented prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    pub initial: i64,
    pub doublings: u32,
}

impl SearchBound {
    pub fn max_radius(&self) -> i64 {
        self.initial << self.doublings
    }
}

impl Default for SearchBound {
    fn default() -> Self {
        Self {
            initial: 50,
            doublings: 3,
        }
    }
}

/// Multiplication table of a finite abelian group with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CayleyTable {
    table: Vec<Vec<ClassId>>,
}

impl CayleyTable {
    fn order(&self) -> usize {
        self.table.len()
    }

    fn mul(&self, x: ClassId, y: ClassId) -> ClassId {
        self.table[x][y]
    }

    fn pow(&self, x: ClassId, k: u64) -> ClassId {
        let mut acc = 0;
        let mut base = x;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `{x^n}`, ascending.
    fn power_subgroup(&self, n: u64) -> Vec<ClassId> {
        let mut out: Vec<ClassId> = (0..self.order()).map(|x| self.pow(x, n)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Cosets of a subgroup, each ascending, ordered by least element.
    fn cosets(&self, subgroup: &[ClassId]) -> Vec<Vec<ClassId>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let mut coset: Vec<ClassId> = subgroup.iter().map(|&s| self.mul(x, s)).collect();
            coset.sort_unstable();
            for &y in &coset {
                seen[y] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Invariant factors `d1 | d2 | ...`, ascending; empty for the trivial group.
    fn invariant_factors(&self) -> Vec<u64> {
        let h = self.order() as i64;
        if h == 1 {
            return Vec::new();
        }
        let fac = arith::factorize(h).expect("group order is positive");
        // per prime: exponents of the cyclic p-factors, descending
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &(p, k) in fac.factors() {
            let p = p as u64;
            let mut powers: Vec<ClassId> = (0..self.order()).collect();
            let mut log_sizes = vec![0u32];
            for _ in 0..k {
                powers = powers.iter().map(|&x| self.pow(x, p)).collect();
                let killed = powers.iter().filter(|&&x| x == 0).count() as u64;
                log_sizes.push(killed.ilog(p));
            }
            // ranks[j] = number of cyclic factors of order >= p^(j+1)
            let ranks: Vec<u32> = log_sizes.windows(2).map(|w| w[1] - w[0]).collect();
            let mut exps = Vec::new();
            for (j, &r) in ranks.iter().enumerate() {
                let next = ranks.get(j + 1).copied().unwrap_or(0);
                exps.extend(std::iter::repeat_n(j as u32 + 1, (r - next) as usize));
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push((p, exps));
        }
        let count = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..count)
            .map(|i| {
                per_prime
                    .iter()
                    .map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                    .product()
            })
            .collect();
        factors.sort_unstable();
        factors
    }
}

/// The narrow class group `Cl+(O_f)` of proper ideals modulo totally
/// positive principal ideals, on primitive forms of discriminant `D`.
#[derive(Debug, Clone)]
pub struct NarrowClassGroup {
    order: QuadraticOrder,
    representatives: Vec<BinaryQuadraticForm>,
    cycles: Vec<Vec<BinaryQuadraticForm>>,
    index: HashMap<BinaryQuadraticForm, ClassId>,
    table: CayleyTable,
    represented_primes: Vec<Option<i64>>,
    search: SearchBound,
}

fn reduced_forms(disc: i64) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    if disc < 0 {
        let amax = isqrt(-disc / 3);
        for a in 1..=amax {
            for b in (-a + 1)..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if let Ok(f) = BinaryQuadraticForm::new(a, b, c) {
                    if f.is_reduced() {
                        out.push(f);
                    }
                }
            }
        }
    } else {
        let s = isqrt(disc);
        for b in 1..=s {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let ac = (b * b - disc) / 4;
            let m = ac.abs();
            let mut divisors = Vec::new();
            for a in 1..=isqrt(m) {
                if m % a == 0 {
                    divisors.push(a);
                    if a * a != m {
                        divisors.push(m / a);
                    }
                }
            }
            for a in divisors {
                for sa in [a, -a] {
                    if let Ok(f) = BinaryQuadraticForm::new(sa, b, ac / sa) {
                        if f.is_reduced() {
                            out.push(f);
                        }
                    }
                }
            }
        }
    }
    out
}

fn find_represented_prime(form: &BinaryQuadraticForm, modulus: i64, radius: i64) -> Option<i64> {
    for r in 1..=radius {
        for x in -r..=r {
            for y in -r..=r {
                if x.abs().max(y.abs()) != r || x.gcd(&y) != 1 {
                    continue;
                }
                let v = form.eval(x, y);
                if v.unsigned_abs() > i64::MAX as u128 {
                    continue;
                }
                let v = v as i64;
                if arith::is_prime(v.abs()) && v.abs().gcd(&modulus) == 1 {
                    return Some(v);
                }
            }
        }
    }
    None
}

impl NarrowClassGroup {
    pub fn build(order: &QuadraticOrder) -> Self {
        Self::build_with_search_bound(order, SearchBound::default())
    }

    pub fn build_with_search_bound(order: &QuadraticOrder, search: SearchBound) -> Self {
        let disc = order.discriminant();
        let forms = reduced_forms(disc);
        let mut cycles: Vec<Vec<BinaryQuadraticForm>> = if disc < 0 {
            forms.into_iter().map(|f| vec![f]).collect()
        } else {
            let mut seen: HashMap<BinaryQuadraticForm, ()> = HashMap::new();
            let mut cycles = Vec::new();
            for f in forms {
                if seen.contains_key(&f) {
                    continue;
                }
                let mut cycle = vec![f];
                seen.insert(f, ());
                let mut g = f.rho();
                while g != f {
                    seen.insert(g, ());
                    cycle.push(g);
                    g = g.rho();
                }
                cycles.push(cycle);
            }
            cycles
        };
        let principal = BinaryQuadraticForm::principal(disc)
            .and_then(|f| f.reduce())
            .expect("valid discriminant");
        let rep_of = |c: &Vec<BinaryQuadraticForm>| *c.iter().min().expect("nonempty cycle");
        cycles.sort_by_key(|c| (!c.contains(&principal), rep_of(c)));
        let representatives: Vec<BinaryQuadraticForm> = cycles.iter().map(rep_of).collect();
        let mut index = HashMap::new();
        for (id, cycle) in cycles.iter().enumerate() {
            for f in cycle {
                index.insert(*f, id);
            }
        }
        let modulus = 2 * order.conductor() * disc;
        let represented_primes = representatives
            .iter()
            .map(|f| find_represented_prime(f, modulus, search.max_radius()))
            .collect();

        let mut group = Self {
            order: *order,
            representatives,
            cycles,
            index,
            table: CayleyTable { table: Vec::new() },
            represented_primes,
            search,
        };
        let h = group.representatives.len();
        let mut table = vec![vec![0; h]; h];
        for i in 0..h {
            for j in i..h {
                let prod = group.representatives[i]
                    .compose(&group.representatives[j])
                    .expect("same discriminant");
                let id = group.index[&prod];
                table[i][j] = id;
                table[j][i] = id;
            }
        }
        group.table = CayleyTable { table };
        group
    }

    pub fn order(&self) -> &QuadraticOrder {
        &self.order
    }

    pub fn discriminant(&self) -> i64 {
        self.order.discriminant()
    }

    /// `h+(D)`.
    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[BinaryQuadraticForm] {
        &self.representatives
    }

    pub fn representative(&self, class: ClassId) -> Result<BinaryQuadraticForm> {
        self.representatives
            .get(class)
            .copied()
            .ok_or(Error::UnknownClass(class))
    }

    /// Reduced forms of each class; for definite discriminants one per class.
    pub fn cycles(&self) -> &[Vec<BinaryQuadraticForm>] {
        &self.cycles
    }

    pub fn search_bound(&self) -> SearchBound {
        self.search
    }

    pub fn class_of(&self, form: &BinaryQuadraticForm) -> Result<ClassId> {
        if form.discriminant() != self.discriminant() {
            return Err(Error::DiscriminantMismatch {
                a: form.a(),
                b: form.b(),
                c: form.c(),
                found: form.discriminant(),
                expected: self.discriminant(),
            });
        }
        let reduced = form.reduce()?;
        Ok(self.index[&reduced])
    }

    pub fn mul(&self, x: ClassId, y: ClassId) -> ClassId {
        self.table.mul(x, y)
    }

    pub fn pow(&self, x: ClassId, k: u64) -> ClassId {
        self.table.pow(x, k)
    }

    pub fn inverse(&self, x: ClassId) -> ClassId {
        self.class_of(&self.representatives[x].inverse())
            .expect("inverse has the same discriminant")
    }

    pub fn composition_table(&self) -> &[Vec<ClassId>] {
        &self.table.table
    }

    /// Invariant factors of the group, ascending; empty when trivial.
    pub fn structure(&self) -> Vec<u64> {
        self.table.invariant_factors()
    }

    /// The principal genus `{C^2}`.
    pub fn squares_subgroup(&self) -> Vec<ClassId> {
        self.table.power_subgroup(2)
    }

    /// Number of cosets of `{C^n}`.
    pub fn classes_modulo_powers(&self, n: u64) -> usize {
        self.class_number() / self.table.power_subgroup(n).len()
    }

    pub fn genus_number(&self) -> usize {
        self.classes_modulo_powers(2)
    }

    /// Genera as cosets of the principal genus; the principal genus first.
    pub fn genus_cosets(&self) -> Vec<Vec<ClassId>> {
        self.table.cosets(&self.squares_subgroup())
    }

    /// A prime `q`, up to sign, with `q` coprime to `2fD` represented by the class.
    pub fn represented_prime(&self, class: ClassId) -> Result<i64> {
        match self.represented_primes.get(class) {
            None => Err(Error::UnknownClass(class)),
            Some(None) => Err(Error::SearchExhausted {
                class,
                modulus: 2 * self.order.conductor() * self.discriminant(),
                bound: self.search.max_radius(),
            }),
            Some(Some(q)) => Ok(*q),
        }
    }

    /// `chi(C) = (delta1 / q)` for a prime value `q` of the class; values of
    /// either sign are used with the extended Kronecker symbol.
    pub fn character_value(&self, chi: &GenusCharacter, class: ClassId) -> Result<i8> {
        if chi.discriminant() != self.discriminant() {
            return Err(Error::CharacterMismatch {
                found: chi.discriminant(),
                expected: self.discriminant(),
            });
        }
        let q = self.represented_prime(class)?;
        let value = kronecker(chi.delta1(), q);
        debug_assert_eq!(value, kronecker(chi.delta2(), q));
        Ok(value)
    }

    pub fn class_of_ideal(&self, ideal: &ProperIdeal) -> Result<ClassId> {
        let form = ideals::ideal_to_form(ideal, &self.order)?;
        self.class_of(&form)
    }

    pub fn character_value_on_ideal(&self, chi: &GenusCharacter, ideal: &ProperIdeal) -> Result<i8> {
        let class = self.class_of_ideal(ideal)?;
        self.character_value(chi, class)
    }

    /// Character values on every class, indexed by class id.
    pub fn character_table(&self, chi: &GenusCharacter) -> Result<Vec<i8>> {
        (0..self.class_number())
            .map(|c| self.character_value(chi, c))
            .collect()
    }
}

/// The wide class group `Cl(O_f)`: proper ideals modulo all principal ideals.
///
/// Realized as the quotient of the narrow group by the class of
/// `(-1, b0, -c0)`, the class of principal ideals with a generator of
/// negative norm; for definite discriminants it coincides with the narrow group.
#[derive(Debug, Clone)]
pub struct WideClassGroup {
    narrow_to_wide: Vec<ClassId>,
    narrow_members: Vec<Vec<ClassId>>,
    table: CayleyTable,
}

impl WideClassGroup {
    pub fn from_narrow(narrow: &NarrowClassGroup) -> Self {
        let eps = if narrow.discriminant() < 0 {
            0
        } else {
            let p = BinaryQuadraticForm::principal(narrow.discriminant()).expect("valid");
            narrow.class_of(&p.negated()).expect("same discriminant")
        };
        let mut subgroup = vec![0, eps];
        subgroup.sort_unstable();
        subgroup.dedup();
        let cosets = narrow.table.cosets(&subgroup);
        let mut narrow_to_wide = vec![0; narrow.class_number()];
        for (w, coset) in cosets.iter().enumerate() {
            for &c in coset {
                narrow_to_wide[c] = w;
            }
        }
        let table = cosets
            .iter()
            .map(|x| {
                cosets
                    .iter()
                    .map(|y| narrow_to_wide[narrow.mul(x[0], y[0])])
                    .collect()
            })
            .collect();
        Self {
            narrow_to_wide,
            narrow_members: cosets,
            table: CayleyTable { table },
        }
    }

    /// `h(D)`.
    pub fn class_number(&self) -> usize {
        self.table.order()
    }

    pub fn project(&self, narrow_class: ClassId) -> ClassId {
        self.narrow_to_wide[narrow_class]
    }

    /// Narrow classes lying over a wide class.
    pub fn narrow_members(&self, class: ClassId) -> &[ClassId] {
        &self.narrow_members[class]
    }

    pub fn mul(&self, x: ClassId, y: ClassId) -> ClassId {
        self.table.mul(x, y)
    }

    pub fn structure(&self) -> Vec<u64> {
        self.table.invariant_factors()
    }

    pub fn squares_subgroup(&self) -> Vec<ClassId> {
        self.table.power_subgroup(2)
    }

    pub fn classes_modulo_powers(&self, n: u64) -> usize {
        self.class_number() / self.table.power_subgroup(n).len()
    }

    pub fn genus_number(&self) -> usize {
        self.classes_modulo_powers(2)
    }

    pub fn genus_cosets(&self) -> Vec<Vec<ClassId>> {
        self.table.cosets(&self.squares_subgroup())
    }
}

/// Groups the classes of `G` by their vector of genus-character values.
pub fn character_signatures(
    group: &NarrowClassGroup,
    chars: &[GenusCharacter],
) -> Result<BTreeMap<Vec<i8>, Vec<ClassId>>> {
    let tables = chars
        .iter()
        .map(|c| group.character_table(c))
        .collect::<Result<Vec<_>>>()?;
    let mut out: BTreeMap<Vec<i8>, Vec<ClassId>> = BTreeMap::new();
    for class in 0..group.class_number() {
        let sig = tables.iter().map(|t| t[class]).collect();
        out.entry(sig).or_default().push(class);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{genus_characters, genus_number_narrow};

    fn group(d: i64) -> NarrowClassGroup {
        NarrowClassGroup::build(&QuadraticOrder::from_discriminant(d).unwrap())
    }

    #[test]
    fn class_number_examples() {
        let g = group(-4);
        assert_eq!(g.class_number(), 1);
        assert!(g.structure().is_empty());
        let g = group(12);
        assert_eq!(g.class_number(), 2);
        assert_eq!(g.structure(), vec![2]);
        let g = group(-15);
        assert_eq!(
            g.representatives(),
            &[
                BinaryQuadraticForm::new(1, 1, 4).unwrap(),
                BinaryQuadraticForm::new(2, 1, 2).unwrap()
            ]
        );
        assert_eq!(g.structure(), vec![2]);
    }

    #[test]
    fn known_class_groups() {
        // classical tables of h(D) for negative discriminants
        for (d, h, structure) in [
            (-3, 1, vec![]),
            (-23, 3, vec![3]),
            (-56, 4, vec![4]),
            (-84, 4, vec![2, 2]),
            (-420, 8, vec![2, 2, 2]),
            (-47, 5, vec![5]),
            (-16, 1, vec![]),
            (-12, 1, vec![]),
            (-99, 2, vec![2]),
            (-4 * 65, 8, vec![2, 4]),
        ] {
            let g = group(d);
            assert_eq!(g.class_number(), h, "D={d}");
            assert_eq!(g.structure(), structure, "D={d}");
        }
        // narrow class numbers of real orders
        for (d, h_plus) in [(5, 1), (8, 1), (12, 2), (13, 1), (21, 2), (24, 2), (60, 4), (145, 4), (136, 4)] {
            assert_eq!(group(d).class_number(), h_plus, "D={d}");
        }
    }

    #[test]
    fn wide_group_examples() {
        let g = group(12);
        let w = WideClassGroup::from_narrow(&g);
        assert_eq!(w.class_number(), 1);
        assert_eq!(w.genus_number(), 1);
        let g = group(5);
        assert_eq!(WideClassGroup::from_narrow(&g).class_number(), 1);
        // Q(sqrt 221): fundamental unit has norm +1, h = 2 and h+ = 4
        let g = group(221);
        let w = WideClassGroup::from_narrow(&g);
        assert_eq!(g.class_number(), 4);
        assert_eq!(w.class_number(), 2);
        assert_eq!(g.genus_number(), 2);
        assert_eq!(w.genus_number(), 2);
        let g = group(-15);
        assert_eq!(WideClassGroup::from_narrow(&g).class_number(), 2);
    }

    #[test]
    fn squares_examples() {
        let g = group(-15);
        assert_eq!(g.squares_subgroup(), vec![0]);
        assert_eq!(g.genus_number(), 2);
        let g = group(-4);
        assert_eq!(g.squares_subgroup(), vec![0]);
        assert_eq!(g.genus_number(), 1);
        assert_eq!(group(221).genus_number(), 2);
        assert_eq!(group(884).genus_number(), 2);
    }

    #[test]
    fn group_laws_small_discriminants() {
        for d in (-400i64..=400).filter(|&d| QuadraticOrder::from_discriminant(d).is_ok()) {
            let g = group(d);
            let h = g.class_number();
            for x in 0..h {
                assert_eq!(g.mul(0, x), x, "identity D={d}");
                assert_eq!(g.mul(x, g.inverse(x)), 0, "inverse D={d}");
                for y in 0..h {
                    for z in 0..h {
                        assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)), "assoc D={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn character_value_examples() {
        let o = QuadraticOrder::from_discriminant(-15).unwrap();
        let g = NarrowClassGroup::build(&o);
        let chars = genus_characters(&o);
        let trivial = chars[0];
        assert!(trivial.is_trivial());
        let nontrivial = chars[1];
        assert_eq!((nontrivial.delta1(), nontrivial.delta2()), (-3, 5));
        for c in 0..g.class_number() {
            assert_eq!(g.character_value(&trivial, c).unwrap(), 1);
        }
        // (2, 1, 2): the radius-1 values 2, 3, 5 divide 2fD = 30; (-3, -1) gives 23
        let q = g.represented_prime(1).unwrap();
        assert_eq!(q, 23);
        assert_eq!(kronecker(-3, 23), -1);
        assert_eq!(g.character_value(&nontrivial, 1).unwrap(), -1);
        assert_eq!(g.character_value(&nontrivial, 0).unwrap(), 1);

        let o = QuadraticOrder::from_discriminant(12).unwrap();
        let g = NarrowClassGroup::build(&o);
        let chars = genus_characters(&o);
        assert_eq!(g.character_table(&chars[1]).unwrap(), vec![1, -1]);
    }

    #[test]
    fn exhausted_search_is_reported() {
        let o = QuadraticOrder::from_discriminant(-15).unwrap();
        let g = NarrowClassGroup::build_with_search_bound(&o, SearchBound { initial: 1, doublings: 0 });
        let chi = genus_characters(&o)[1];
        assert!(matches!(
            g.character_value(&chi, 0),
            Err(Error::SearchExhausted { .. })
        ));
        let other = genus_characters(&QuadraticOrder::from_discriminant(-20).unwrap())[1];
        assert!(matches!(
            group(-15).character_value(&other, 0),
            Err(Error::CharacterMismatch { .. })
        ));
    }

    #[test]
    fn genus_count_matches_weber_small() {
        for d in (-2000i64..=2000).filter(|&d| QuadraticOrder::from_discriminant(d).is_ok()) {
            let o = QuadraticOrder::from_discriminant(d).unwrap();
            let g = NarrowClassGroup::build(&o);
            assert_eq!(g.genus_number() as u64, genus_number_narrow(&o), "D={d}");
        }
    }
}
