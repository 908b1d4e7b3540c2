//! Dirichlet coefficients of the genus-character L-series
//! `L(s, O_f, chi) = sum chi(a) N(a)^-s` over integral proper ideals, by three
//! routes: a sum over enumerated ideals, an Euler product assembled from the
//! local ideal structure at each prime, and the closed form
//! `L(s, phi) L(s, psi)` times correction factors at primes dividing `f0`.
//!
//! Power series in `X` stand for series in `p^-s`.

use crate::arith::{self, divisor_count};
use crate::classgroup::{ClassId, NarrowClassGroup, SearchBound};
use crate::error::{Error, Result};
use crate::ideals;
use crate::order::{GenusCharacter, QuadraticOrder};

/// How the coefficients beyond the truncation point are controlled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// All coefficients past `N` vanish.
    Finite,
    /// `|a_n| <= C d(n)` for every `n`.
    DivisorBounded(u64),
}

/// `a_1, ..., a_N` of a Dirichlet series.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<i64>,
    tail: TailModel,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<i64>, tail: TailModel) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { coeffs, tail })
    }

    /// The series `1`.
    pub fn one(len: usize) -> Result<Self> {
        let mut coeffs = vec![0; len];
        *coeffs.first_mut().ok_or(Error::EmptySeries)? = 1;
        Ok(Self {
            coeffs,
            tail: TailModel::Finite,
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_n`, `1 <= n <= N`.
    pub fn coeff(&self, n: usize) -> i64 {
        self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [i64] {
        &mut self.coeffs
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    /// Checks `|a_n| <= C d(n)` on the stored range.
    pub fn check_bound(&self) -> Result<()> {
        let TailModel::DivisorBounded(c) = self.tail else {
            return Ok(());
        };
        for (i, &a) in self.coeffs.iter().enumerate() {
            let n = i + 1;
            let bound = c * divisor_count(n as u64);
            if a.unsigned_abs() > bound {
                return Err(Error::CoefficientBound {
                    n,
                    value: a,
                    bound: bound as i64,
                });
            }
        }
        Ok(())
    }
}

/// A truncated power series `sum c_j X^j` for the Euler factor at `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactorPolynomial {
    p: i64,
    coeffs: Vec<i64>,
}

impl LocalFactorPolynomial {
    pub fn prime(&self) -> i64 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `c_j`, zero past the stored degree.
    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn poly_mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / ((1 - u X)(1 - v X))` to `len` terms.
fn inverse_quadratic(u: i64, v: i64, len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = (0..=j as u32).map(|i| u.pow(i) * v.pow(j as u32 - i)).sum();
    }
    out
}

/// `P / (1 - p X^2)` for a polynomial `P`, failing on a nonzero remainder.
fn divide_by_one_minus_p_x2(p: i64, num: &[i64]) -> Result<Vec<i64>> {
    if num.len() < 3 {
        return Err(Error::InexactDivision(p));
    }
    let deg = num.len() - 3;
    let mut q = vec![0i64; deg + 1];
    for j in 0..=deg {
        q[j] = num[j] + if j >= 2 { p * q[j - 2] } else { 0 };
    }
    let mut back = q.clone();
    back.extend([0, 0]);
    for j in 0..=deg {
        back[j + 2] -= p * q[j];
    }
    if back != num {
        return Err(Error::InexactDivision(p));
    }
    Ok(q)
}

/// Series length needed at `p` for coefficients up to `n`: `floor(log_p n) + 1`
/// exponents `0..=floor(log_p n)` plus one spare.
fn local_length(p: i64, n: usize) -> usize {
    (n as u64).ilog(p as u64) as usize + 2
}

/// The correction factor at `p | f0`:
/// `((1 - phi X)(1 - psi X) - p^(m-1) X^(2m) (p X - phi)(p X - psi)) / (1 - p X^2)`,
/// equal to `1` when `m = 0`.
pub fn correction_factor(chi: &GenusCharacter, p: i64) -> Result<LocalFactorPolynomial> {
    let m = chi.m_p(p);
    if m == 0 {
        return Ok(LocalFactorPolynomial { p, coeffs: vec![1] });
    }
    let (phi, psi) = (chi.phi(p) as i64, chi.psi(p) as i64);
    let m = m as usize;
    let mut num = vec![0i64; 2 * m + 3];
    num[0] = 1;
    num[1] = -(phi + psi);
    num[2] = phi * psi;
    let w = p.pow(m as u32 - 1);
    // (pX - phi)(pX - psi) = phi psi - p (phi + psi) X + p^2 X^2
    num[2 * m] -= w * phi * psi;
    num[2 * m + 1] += w * p * (phi + psi);
    num[2 * m + 2] -= w * p * p;
    let coeffs = divide_by_one_minus_p_x2(p, &num)?;
    Ok(LocalFactorPolynomial { p, coeffs })
}

/// The Euler factor at `p` of the closed form, to `len` terms.
pub fn rhs_local_factor(chi: &GenusCharacter, p: i64, len: usize) -> Result<LocalFactorPolynomial> {
    let base = inverse_quadratic(chi.phi(p) as i64, chi.psi(p) as i64, len);
    let corr = correction_factor(chi, p)?;
    Ok(LocalFactorPolynomial {
        p,
        coeffs: poly_mul(&base, &corr.coeffs, len),
    })
}

/// Coefficient of `X^j` in the Euler factor of the maximal order at `p`
/// twisted by the pair: `(j+1) phi^j` split, `[j even]` inert, `v^j` ramified
/// with `v` the nonzero one of `phi(p), psi(p)`.
fn maximal_local_coeff(order: &QuadraticOrder, chi: &GenusCharacter, p: i64, j: usize) -> i64 {
    let (phi, psi) = (chi.phi(p) as i64, chi.psi(p) as i64);
    match order.chi_k(p) {
        1 => (j as i64 + 1) * phi.pow(j as u32),
        -1 => i64::from(j % 2 == 0),
        _ => {
            let v = if phi != 0 { phi } else { psi };
            v.pow(j as u32)
        }
    }
}

/// The Euler factor at `p` from the local classification of proper ideals.
///
/// For `p | f` with `e = ord_p f` and `m = m_p`: if `m < e` only norms `p^(2c)`,
/// `c <= m`, contribute, each with weight `p^c`; if `m = e` the norms `p^(2c)`,
/// `c < e`, contribute `p^c` and the norms `p^(2e + j)` contribute
/// `p^(e-1)(p - chi_K(p))` times the maximal-order coefficient at `p^j`.
pub fn lhs_local_factor(
    order: &QuadraticOrder,
    chi: &GenusCharacter,
    p: i64,
    len: usize,
) -> LocalFactorPolynomial {
    let e = arith::ord_p(order.conductor(), p) as usize;
    let mut coeffs = vec![0i64; len];
    if e == 0 {
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c = maximal_local_coeff(order, chi, p, j);
        }
        return LocalFactorPolynomial { p, coeffs };
    }
    let m = chi.m_p(p) as usize;
    debug_assert!(m <= e);
    let even_top = if m < e { m } else { e - 1 };
    for c in 0..=even_top {
        if 2 * c < len {
            coeffs[2 * c] = p.pow(c as u32);
        }
    }
    if m == e {
        let units = p.pow(e as u32 - 1) * (p - order.chi_k(p) as i64);
        for j in 0..len.saturating_sub(2 * e) {
            coeffs[2 * e + j] += units * maximal_local_coeff(order, chi, p, j);
        }
    }
    LocalFactorPolynomial { p, coeffs }
}

/// Dedekind psi `prod p^(e-1)(p+1)`: the number of proper ideals of norm `n`
/// is at most `psi(f) d(n)`.
pub fn coefficient_constant(order: &QuadraticOrder) -> u64 {
    let fac = arith::factorize(order.conductor()).expect("conductor is positive");
    fac.factors()
        .iter()
        .map(|&(p, e)| (p as u64).pow(e - 1) * (p as u64 + 1))
        .product()
}

fn check_character(order: &QuadraticOrder, chi: &GenusCharacter) -> Result<()> {
    if chi.discriminant() != order.discriminant() {
        return Err(Error::CharacterMismatch {
            found: chi.discriminant(),
            expected: order.discriminant(),
        });
    }
    Ok(())
}

/// Closed form: coefficients of `L(s, phi) L(s, psi)` by Dirichlet convolution,
/// then convolved with the correction factor at each `p | f0`.
pub fn rhs_coeffs(order: &QuadraticOrder, chi: &GenusCharacter, n: usize) -> Result<CoefficientSeries> {
    check_character(order, chi)?;
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let phi: Vec<i64> = (0..=n).map(|k| chi.phi(k as i64) as i64).collect();
    let psi: Vec<i64> = (0..=n).map(|k| chi.psi(k as i64) as i64).collect();
    let mut a = vec![0i64; n + 1];
    for d in 1..=n {
        if phi[d] == 0 {
            continue;
        }
        for k in 1..=n / d {
            a[d * k] += phi[d] * psi[k];
        }
    }
    let f0 = chi.f0();
    let fac = arith::factorize(f0).expect("f0 is positive");
    for p in fac.primes() {
        let corr = correction_factor(chi, p)?;
        let pu = p as usize;
        let mut out = vec![0i64; n + 1];
        for k in 1..=n {
            let mut pj = 1usize;
            let mut j = 0usize;
            while k % pj == 0 {
                out[k] += corr.coeff(j) * a[k / pj];
                j += 1;
                match pj.checked_mul(pu) {
                    Some(next) if next <= k => pj = next,
                    _ => break,
                }
            }
        }
        a = out;
    }
    a.remove(0);
    CoefficientSeries::new(a, TailModel::DivisorBounded(coefficient_constant(order)))
}

/// Euler product of [`lhs_local_factor`] over all primes, multiplicatively.
pub fn lhs_coeffs_local(
    order: &QuadraticOrder,
    chi: &GenusCharacter,
    n: usize,
) -> Result<CoefficientSeries> {
    check_character(order, chi)?;
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let mut a = vec![1i64; n + 1];
    a[0] = 0;
    for p in arith::primes_up_to(n) {
        let factor = lhs_local_factor(order, chi, p, local_length(p, n));
        let pu = p as usize;
        let mut pk = pu;
        let mut k = 1;
        while pk <= n {
            // multiples of p^k not divisible by p^(k+1)
            for m in (pk..=n).step_by(pk) {
                if (m / pk) % pu != 0 {
                    a[m] *= factor.coeff(k);
                }
            }
            k += 1;
            match pk.checked_mul(pu) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    a.remove(0);
    CoefficientSeries::new(a, TailModel::DivisorBounded(coefficient_constant(order)))
}

/// Classes of all integral proper ideals of norm at most `N`, found by
/// exhaustive lattice enumeration.
#[derive(Debug, Clone)]
pub struct IdealCensus {
    group: NarrowClassGroup,
    classes_by_norm: Vec<Vec<ClassId>>,
}

impl IdealCensus {
    pub fn build(order: &QuadraticOrder, n: usize) -> Result<Self> {
        Self::build_with_search_bound(order, n, SearchBound::default())
    }

    pub fn build_with_search_bound(
        order: &QuadraticOrder,
        n: usize,
        search: SearchBound,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySeries);
        }
        let group = NarrowClassGroup::build_with_search_bound(order, search);
        let classes_by_norm = (1..=n as i64)
            .map(|k| {
                ideals::enumerate_proper_ideals(order, k)
                    .iter()
                    .map(|i| group.class_of_ideal(i))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            group,
            classes_by_norm,
        })
    }

    pub fn group(&self) -> &NarrowClassGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.classes_by_norm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes_by_norm.is_empty()
    }

    /// Classes of the proper ideals of norm `k`.
    pub fn classes_of_norm(&self, k: usize) -> &[ClassId] {
        &self.classes_by_norm[k - 1]
    }

    /// `a_n = sum of chi over proper ideals of norm n`.
    pub fn coefficients(&self, chi: &GenusCharacter) -> Result<CoefficientSeries> {
        let table = self.group.character_table(chi)?;
        let coeffs = self
            .classes_by_norm
            .iter()
            .map(|classes| classes.iter().map(|&c| table[c] as i64).sum())
            .collect();
        CoefficientSeries::new(
            coeffs,
            TailModel::DivisorBounded(coefficient_constant(self.group.order())),
        )
    }
}

/// `a_n = sum chi(a)` over enumerated proper ideals of norm `n`.
pub fn lhs_coeffs_bruteforce(
    order: &QuadraticOrder,
    chi: &GenusCharacter,
    n: usize,
) -> Result<CoefficientSeries> {
    check_character(order, chi)?;
    IdealCensus::build(order, n)?.coefficients(chi)
}

/// First index where engines disagree, with each engine's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub len: usize,
    pub mismatch: Option<Mismatch>,
}

impl ComparisonReport {
    pub fn is_equal(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Elementwise comparison of several series over their common length.
pub fn compare_series(series: &[&CoefficientSeries]) -> ComparisonReport {
    let len = series.iter().map(|s| s.len()).min().unwrap_or(0);
    let mismatch = (1..=len).find_map(|n| {
        let values: Vec<i64> = series.iter().map(|s| s.coeff(n)).collect();
        values
            .iter()
            .any(|&v| v != values[0])
            .then_some(Mismatch { n, values })
    });
    ComparisonReport { len, mismatch }
}

/// The three engines on one order and character; values in a mismatch are
/// ordered brute force, local, closed form.
pub fn compare(order: &QuadraticOrder, chi: &GenusCharacter, n: usize) -> Result<ComparisonReport> {
    let brute = lhs_coeffs_bruteforce(order, chi, n)?;
    let local = lhs_coeffs_local(order, chi, n)?;
    let rhs = rhs_coeffs(order, chi, n)?;
    Ok(compare_series(&[&brute, &local, &rhs]))
}

/// A partial sum with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub s: f64,
    pub value: f64,
    pub tail_bound: f64,
}

/// `C d(n) <= 2 C sqrt n` and an integral comparison give
/// `sum_{n>N} |a_n| n^-s <= 2 C N^(3/2 - s)/(s - 3/2)` for `s > 3/2`;
/// for `1 < s <= 3/2` the bound is infinite.
pub fn tail_bound(tail: TailModel, n: usize, s: f64) -> f64 {
    match tail {
        TailModel::Finite => 0.0,
        TailModel::DivisorBounded(c) => {
            if s <= 1.5 {
                f64::INFINITY
            } else {
                2.0 * c as f64 * (n as f64).powf(1.5 - s) / (s - 1.5)
            }
        }
    }
}

pub fn evaluate(series: &CoefficientSeries, s: f64) -> Result<Evaluation> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::BadEvaluationPoint(s));
    }
    // sum small terms first
    let value = series
        .coeffs
        .iter()
        .enumerate()
        .rev()
        .map(|(i, &a)| a as f64 * ((i + 1) as f64).powf(-s))
        .sum();
    Ok(Evaluation {
        s,
        value,
        tail_bound: tail_bound(series.tail, series.len(), s),
    })
}

/// `prod_{p <= P} 1/((1 - p^-s)(1 - chi_K(p) p^-s))` for a maximal order.
pub fn dedekind_zeta_partial_product(order: &QuadraticOrder, s: f64, prime_bound: usize) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::BadEvaluationPoint(s));
    }
    if !order.is_maximal() {
        return Err(Error::NotMaximal(order.conductor()));
    }
    Ok(arith::primes_up_to(prime_bound)
        .into_iter()
        .map(|p| {
            let x = (p as f64).powf(-s);
            1.0 / ((1.0 - x) * (1.0 - order.chi_k(p) as f64 * x))
        })
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::genus_characters;

    fn order(d_k: i64, f: i64) -> QuadraticOrder {
        QuadraticOrder::new(d_k, f).unwrap()
    }

    #[test]
    fn gaussian_trivial_character() {
        let o = order(-4, 1);
        let chi = genus_characters(&o)[0];
        let brute = lhs_coeffs_bruteforce(&o, &chi, 200).unwrap();
        for n in 1..=200 {
            let expected: i64 = (1..=n as i64)
                .filter(|d| n as i64 % d == 0)
                .map(|d| arith::kronecker(-4, d) as i64)
                .sum();
            assert_eq!(brute.coeff(n), expected, "n={n}");
        }
        assert_eq!(brute.coeff(5), 2);
        assert!(compare(&o, &chi, 200).unwrap().is_equal());
    }

    #[test]
    fn no_norm_two_ideal_in_conductor_two() {
        let o = order(-4, 2);
        for chi in genus_characters(&o) {
            let s = lhs_coeffs_bruteforce(&o, &chi, 50).unwrap();
            assert_eq!(s.coeff(1), 1);
            assert_eq!(s.coeff(2), 0);
            assert!(compare(&o, &chi, 300).unwrap().is_equal(), "{chi}");
        }
    }

    #[test]
    fn local_engine_matches_closed_form_real() {
        let o = order(12, 1);
        for chi in genus_characters(&o) {
            let l = lhs_coeffs_local(&o, &chi, 100).unwrap();
            let r = rhs_coeffs(&o, &chi, 100).unwrap();
            assert_eq!(compare_series(&[&l, &r]).mismatch, None, "{chi}");
        }
    }

    #[test]
    fn local_factors_agree() {
        for (d_k, f) in [(-4, 4), (-3, 12), (5, 6), (12, 4), (221, 12), (-8, 6), (13, 9), (-20, 8)] {
            let o = order(d_k, f);
            for chi in genus_characters(&o) {
                for p in [2, 3, 5, 7, 13, 17] {
                    let lhs = lhs_local_factor(&o, &chi, p, 12);
                    let rhs = rhs_local_factor(&chi, p, 12).unwrap();
                    assert_eq!(lhs, rhs, "D_K={d_k} f={f} chi={chi} p={p}");
                }
            }
        }
    }

    #[test]
    fn correction_factor_shapes() {
        let o = order(-4, 2);
        for chi in genus_characters(&o) {
            for p in [2, 3, 5] {
                let c = correction_factor(&chi, p).unwrap();
                assert_eq!(c.coeff(0), 1);
                if chi.m_p(p) == 0 {
                    assert_eq!(c.coeffs(), &[1]);
                }
            }
        }
        // m_p < e forces phi(p) = psi(p) = 0: factor (1 - p^(m+1) X^(2m+2))/(1 - p X^2)
        let o = order(5, 9);
        let chi = GenusCharacter::new(&o, -3).unwrap();
        assert_eq!((chi.delta1(), chi.delta2(), chi.f0()), (-15, -3, 3));
        assert_eq!(correction_factor(&chi, 3).unwrap().coeffs(), &[1, 0, 3]);
        assert!(matches!(divide_by_one_minus_p_x2(2, &[1, 0, 0, 1]), Err(Error::InexactDivision(2))));
    }

    #[test]
    fn evaluation_examples() {
        let one = CoefficientSeries::one(10).unwrap();
        let e = evaluate(&one, 2.0).unwrap();
        assert_eq!((e.value, e.tail_bound), (1.0, 0.0));
        assert!(matches!(evaluate(&one, 1.0), Err(Error::BadEvaluationPoint(_))));
        assert!(evaluate(&one, f64::NAN).is_err());
        assert!(CoefficientSeries::new(Vec::new(), TailModel::Finite).is_err());

        // zeta(2) L(2, chi_-4) = zeta_Q(i)(2)
        let o = order(-4, 1);
        let chi = genus_characters(&o)[0];
        let s = rhs_coeffs(&o, &chi, 2000).unwrap();
        let e = evaluate(&s, 2.0).unwrap();
        let catalan = 0.915_965_594_177_219_f64;
        let exact = std::f64::consts::PI.powi(2) / 6.0 * catalan;
        assert!((e.value - exact).abs() <= e.tail_bound, "{e:?} vs {exact}");
        let prod = dedekind_zeta_partial_product(&o, 2.0, 2000).unwrap();
        assert!((e.value - prod).abs() <= e.tail_bound);
        assert!(tail_bound(TailModel::DivisorBounded(1), 100, 1.2).is_infinite());

        let o = order(12, 1);
        let chi = genus_characters(&o)[0];
        let brute = evaluate(&lhs_coeffs_bruteforce(&o, &chi, 500).unwrap(), 2.0).unwrap();
        let closed = evaluate(&rhs_coeffs(&o, &chi, 500).unwrap(), 2.0).unwrap();
        assert!((brute.value - closed.value).abs() < 1e-6);
    }

    #[test]
    fn mismatch_is_located() {
        let o = order(5, 1);
        let chi = genus_characters(&o)[0];
        let a = rhs_coeffs(&o, &chi, 100).unwrap();
        let mut b = a.clone();
        b.coeffs_mut()[36] += 1;
        let report = compare_series(&[&a, &b]);
        let m = report.mismatch.unwrap();
        assert_eq!(m.n, 37);
        assert_eq!(m.values, vec![a.coeff(37), a.coeff(37) + 1]);
    }

    #[test]
    fn coefficient_bound_holds() {
        let o = order(-3, 12);
        for chi in genus_characters(&o) {
            lhs_coeffs_local(&o, &chi, 1000).unwrap().check_bound().unwrap();
        }
        // d(n) alone is too small once f > 1
        let o = order(-4, 3);
        let chi = genus_characters(&o)[0];
        let a = lhs_coeffs_bruteforce(&o, &chi, 9).unwrap();
        assert_eq!(a.coeff(9), 4);
        assert_eq!(coefficient_constant(&o), 4);
        let bad = CoefficientSeries::new(vec![1, 5], TailModel::DivisorBounded(1)).unwrap();
        assert!(matches!(bad.check_bound(), Err(Error::CoefficientBound { n: 2, .. })));
    }
}
