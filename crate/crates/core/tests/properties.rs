use genus_core::arith::{self, jacobi, kronecker};
use genus_core::classgroup::{character_signatures, BinaryQuadraticForm, NarrowClassGroup, WideClassGroup};
use genus_core::ideals::{self, count_proper_ideals, enumerate_proper_ideals, lattices_of_index, local_generator};
use genus_core::lseries::{self, IdealCensus};
use genus_core::order::{genus_characters, minus_one_is_norm};
use genus_core::typenumbers::{self, Sense};
use genus_core::QuadraticOrder;
use num_integer::Integer;
use proptest::prelude::*;

fn valid_disc(bound: i64) -> impl Strategy<Value = QuadraticOrder> {
    (-bound..=bound).prop_filter_map("not a discriminant", |d| QuadraticOrder::from_discriminant(d).ok())
}

fn fundamental(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("not fundamental", |&d| arith::is_fundamental(d))
}

/// `(a, b, c) -> (a, b + 2at, at^2 + bt + c)` or `(c, -b, a)`.
fn transform(f: BinaryQuadraticForm, moves: &[i64]) -> BinaryQuadraticForm {
    moves.iter().fold(f, |f, &t| {
        let (a, b, c) = (f.a(), f.b(), f.c());
        if t == 0 {
            BinaryQuadraticForm::new(c, -b, a).unwrap()
        } else {
            BinaryQuadraticForm::new(a, b + 2 * a * t, a * t * t + b * t + c).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kronecker_is_multiplicative(d in -500i64..500, m in 1i64..500, n in 1i64..500) {
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }

    #[test]
    fn kronecker_is_multiplicative_in_top(a in -300i64..300, b in -300i64..300, n in -300i64..300) {
        prop_assume!(n != 0);
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn kronecker_has_period_d(d in fundamental(1000), n in 1i64..5000) {
        prop_assert_eq!(kronecker(d, n), kronecker(d, n + d.abs()));
    }

    #[test]
    fn jacobi_agrees_on_odd_moduli(a in -1000i64..1000, k in 0i64..1000) {
        let n = 2 * k + 1;
        prop_assert_eq!(jacobi(a, n), kronecker(a, n));
    }

    #[test]
    fn factorization_round_trips(n in (-1_000_000i64..1_000_000).prop_filter("nonzero", |n| *n != 0)) {
        let fac = arith::factorize(n).unwrap();
        prop_assert_eq!(fac.value(), n);
        prop_assert!(fac.factors().iter().all(|&(p, _)| arith::is_prime(p)));
    }

    #[test]
    fn conductor_decomposition_round_trips(o in valid_disc(100_000)) {
        let (d_k, f) = arith::conductor_decompose(o.discriminant()).unwrap();
        prop_assert_eq!(d_k * f * f, o.discriminant());
        prop_assert!(arith::is_fundamental(d_k));
    }

    #[test]
    fn reduction_is_a_class_invariant(o in valid_disc(3000), class in 0usize..64, moves in prop::collection::vec(-3i64..3, 0..8)) {
        let g = NarrowClassGroup::build(&o);
        let class = class % g.class_number();
        let f = transform(g.representatives()[class], &moves);
        prop_assert_eq!(g.class_of(&f).unwrap(), class);
        let r = f.reduce().unwrap();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce().unwrap().discriminant(), o.discriminant());
    }

    #[test]
    fn composition_respects_classes(o in valid_disc(2000), x in 0usize..64, y in 0usize..64, mx in prop::collection::vec(-2i64..2, 0..6), my in prop::collection::vec(-2i64..2, 0..6)) {
        let g = NarrowClassGroup::build(&o);
        let (x, y) = (x % g.class_number(), y % g.class_number());
        let fx = transform(g.representatives()[x], &mx);
        let fy = transform(g.representatives()[y], &my);
        prop_assert_eq!(g.class_of(&fx.compose(&fy).unwrap()).unwrap(), g.mul(x, y));
        prop_assert_eq!(g.mul(x, y), g.mul(y, x));
    }

    #[test]
    fn group_structure_multiplies_to_class_number(o in valid_disc(10_000)) {
        let g = NarrowClassGroup::build(&o);
        let structure = g.structure();
        prop_assert_eq!(structure.iter().product::<u64>(), g.class_number() as u64);
        prop_assert!(structure.windows(2).all(|w| w[1] % w[0] == 0));
        let two_rank = structure.iter().filter(|&&d| d % 2 == 0).count();
        prop_assert_eq!(1usize << two_rank, g.genus_number());
    }

    #[test]
    fn characters_are_homomorphisms(o in valid_disc(2000)) {
        let g = NarrowClassGroup::build(&o);
        for chi in genus_characters(&o) {
            let t = g.character_table(&chi).unwrap();
            for x in 0..g.class_number() {
                for y in 0..g.class_number() {
                    prop_assert_eq!(t[g.mul(x, y)], t[x] * t[y]);
                }
            }
        }
    }

    #[test]
    fn characters_separate_genera(o in valid_disc(5000)) {
        let g = NarrowClassGroup::build(&o);
        let chars = genus_characters(&o);
        prop_assert_eq!(chars.len(), g.genus_number());
        let sigs = character_signatures(&g, &chars).unwrap();
        prop_assert_eq!(sigs.len(), g.genus_number());
        let squares = g.squares_subgroup();
        let principal = sigs.get(&vec![1; chars.len()]).unwrap();
        prop_assert_eq!(principal, &squares);
    }

    #[test]
    fn wide_group_is_a_quotient(o in valid_disc(5000)) {
        let g = NarrowClassGroup::build(&o);
        let w = WideClassGroup::from_narrow(&g);
        prop_assert!(g.class_number() == w.class_number() || g.class_number() == 2 * w.class_number());
        if !o.is_real() {
            prop_assert_eq!(g.class_number(), w.class_number());
        }
        for x in 0..g.class_number() {
            for y in 0..g.class_number() {
                prop_assert_eq!(w.project(g.mul(x, y)), w.mul(w.project(x), w.project(y)));
            }
        }
    }

    #[test]
    fn properness_is_primitivity(d_k in fundamental(60), f in 1i64..7, n in 1i64..120) {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        for l in lattices_of_index(n).filter(|l| l.is_ideal(&o)) {
            let i = l.to_ideal(&o).unwrap();
            let (a, b) = (i.a(), i.b());
            let c = (b * b - o.discriminant()) / (4 * a);
            prop_assert_eq!(l.is_proper(&o), a.gcd(&b).gcd(&c) == 1, "{:?}", l);
        }
    }

    #[test]
    fn proper_ideals_are_locally_principal(d_k in fundamental(60), f in 1i64..9, n in 1i64..200) {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        let primes = arith::factorize(n * f).unwrap();
        for i in enumerate_proper_ideals(&o, n) {
            let l = i.to_lattice(&o).unwrap();
            for p in primes.primes() {
                prop_assert!(local_generator(&l, &o, p).is_some(), "{} at {}", i, p);
            }
        }
    }

    #[test]
    fn norms_multiply_away_from_conductor(d_k in fundamental(100), f in 1i64..7, picks in prop::collection::vec((0usize..10_000, 0usize..10_000), 100)) {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        let pool: Vec<_> = (1..=60)
            .filter(|n: &i64| n.gcd(&f) == 1)
            .flat_map(|n| enumerate_proper_ideals(&o, n))
            .collect();
        for (i, j) in picks {
            let (a, b) = (pool[i % pool.len()], pool[j % pool.len()]);
            let ab = a.mul(&b, &o).unwrap();
            prop_assert_eq!(ab.norm(), a.norm() * b.norm());
            prop_assert!(ab.to_lattice(&o).unwrap().is_proper(&o));
        }
    }

    #[test]
    fn engines_are_multiplicative(d_k in fundamental(300), f in 1i64..13, m in 1usize..40, n in 1usize..40) {
        prop_assume!(m.gcd(&n) == 1);
        let o = QuadraticOrder::new(d_k, f).unwrap();
        for chi in genus_characters(&o) {
            let local = lseries::lhs_coeffs_local(&o, &chi, m * n).unwrap();
            let rhs = lseries::rhs_coeffs(&o, &chi, m * n).unwrap();
            prop_assert_eq!(local.coeff(m * n), local.coeff(m) * local.coeff(n));
            prop_assert_eq!(rhs.coeff(m * n), rhs.coeff(m) * rhs.coeff(n));
            prop_assert_eq!(local.coeff(1), 1);
            rhs.check_bound().unwrap();
        }
    }

    #[test]
    fn local_and_closed_form_engines_agree(d_k in fundamental(2000), f in 1i64..25) {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        for chi in genus_characters(&o) {
            let local = lseries::lhs_coeffs_local(&o, &chi, 600).unwrap();
            let rhs = lseries::rhs_coeffs(&o, &chi, 600).unwrap();
            prop_assert_eq!(lseries::compare_series(&[&local, &rhs]).mismatch, None, "{} {}", o, chi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brute_force_matches_engines_on_random_orders(d_k in fundamental(200), f in 1i64..9) {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        let census = IdealCensus::build(&o, 300).unwrap();
        for chi in genus_characters(&o) {
            let brute = census.coefficients(&chi).unwrap();
            let rhs = lseries::rhs_coeffs(&o, &chi, 300).unwrap();
            prop_assert_eq!(lseries::compare_series(&[&brute, &rhs]).mismatch, None, "{} {}", o, chi);
        }
    }

    #[test]
    fn type_number_ratio(d_k in fundamental(10_000)) {
        let k = QuadraticOrder::maximal(d_k).unwrap();
        let wide = typenumbers::type_number_wide(&k).unwrap();
        let narrow = typenumbers::type_number_narrow(&k).unwrap();
        let doubled = k.is_real() && !minus_one_is_norm(&k).unwrap();
        prop_assert_eq!(narrow, if doubled { 2 * wide } else { wide });
        for sense in [Sense::Wide, Sense::Narrow] {
            let reps = typenumbers::representatives(&k, sense).unwrap();
            prop_assert_eq!(reps.len(), typenumbers::type_number(&k, sense).unwrap());
            let mut cosets: Vec<usize> = reps.iter().map(|r| r.coset).collect();
            cosets.dedup();
            prop_assert_eq!(cosets.len(), reps.len());
        }
    }
}

#[test]
fn ideal_counts_match_local_formula() {
    for (d_k, f) in [(-4, 2), (-3, 6), (5, 4), (12, 3), (13, 2), (-20, 1), (221, 2), (-8, 12)] {
        let o = QuadraticOrder::new(d_k, f).unwrap();
        for n in 1..=2000 {
            assert_eq!(
                enumerate_proper_ideals(&o, n).len() as u64,
                count_proper_ideals(&o, n),
                "D_K={d_k} f={f} n={n}"
            );
        }
    }
}

#[test]
fn prime_ideals_have_prime_norm_classes() {
    let o = QuadraticOrder::new(-23, 1).unwrap();
    let g = NarrowClassGroup::build(&o);
    for q in arith::primes_up_to(200) {
        for i in ideals::prime_ideals_above(&o, q).unwrap() {
            let class = g.class_of_ideal(&i).unwrap();
            let conj = g.class_of_ideal(&i.conjugate()).unwrap();
            assert_eq!(g.inverse(class), conj);
        }
    }
}
