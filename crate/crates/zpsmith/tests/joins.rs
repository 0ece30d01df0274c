use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zpsmith::complex::{Cochain, FreeZpChainComplex, ZpComplex};
use zpsmith::corpus::{cyclic_moore, example_a, random_zp_complex, sigma, sphere};
use zpsmith::join::{check_operator_identity, join, join_free, join_smith, OperatorIdentity};
use zpsmith::smith::{smith_report, SmithOptions, SmithReport};
use zpsmith::Int;

fn quick() -> SmithOptions {
    SmithOptions {
        skip_certificates: true,
        ..Default::default()
    }
}

fn direct(k: &ZpComplex, l: &ZpComplex) -> SmithReport {
    smith_report(&join(k, l).unwrap().result.to_free(), quick()).unwrap()
}

fn same_classes(a: &SmithReport, b: &SmithReport) -> bool {
    a.classes.len() == b.classes.len()
        && a.classes.iter().zip(&b.classes).all(|(x, y)| {
            x.trivial_over_z == y.trivial_over_z
                && x.minimal_modulus_exponent == y.minimal_modulus_exponent
        })
}

fn pair() -> impl Strategy<Value = (ZpComplex, ZpComplex)> {
    (
        prop_oneof![Just(2u64), Just(3)],
        1u32..=2,
        1usize..5,
        any::<u64>(),
        0u32..=1,
        1usize..5,
        any::<u64>(),
    )
        .prop_map(|(p, d1, f1, s1, d2, f2, s2)| {
            let m = if p == 2 { 3 } else { 2 };
            (
                random_zp_complex(p, m, d1, f1, s1),
                random_zp_complex(p, m, d2, f2, s2),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn join_index_is_subadditive_and_formula_matches_direct((k, l) in pair()) {
        let js = join_smith(&k, &l, &quick()).unwrap();
        prop_assert!(js.joined.index <= js.left.index + js.right.index);
        prop_assert!(js.joined.index <= js.prediction.upper);
        if let (Some(lower), false) = (js.prediction.lower, js.prediction.conditional) {
            prop_assert!(js.joined.index_mod_p >= lower);
        }
        prop_assert!(same_classes(&js.joined, &direct(&k, &l)));
    }
}

#[test]
fn sphere_joins_are_stable() {
    for m in 0..=2u32 {
        for n in 0..=2u32 {
            if m + n > 3 {
                continue;
            }
            let js = join_smith(&sphere(m), &sphere(n), &quick()).unwrap();
            assert_eq!(
                js.joined.index,
                (m + n + 2) as i32,
                "sphere({m}) * sphere({n})"
            );
            let r = smith_report(&sphere(m + n + 1).to_free(), quick()).unwrap();
            assert_eq!(js.joined.index, r.index);
        }
    }
}

#[test]
fn example_a_self_join_is_unstable() {
    let a = example_a(1);
    let js = join_smith(&a, &a, &quick()).unwrap();
    assert_eq!(js.cells, vec![64, 1228, 6672, 15012, 14688, 5184]);
    assert!(js.prediction.unstable);
    let r = &js.joined;
    assert_eq!((r.index, r.index_mod_p), (5, 4));
    let c4 = r.class(4).unwrap();
    assert!(!c4.trivial_over_z && c4.trivial_mod_exponent(1));
    assert_eq!(r.class(3).unwrap().minimal_modulus_exponent, Some(1));
}

#[test]
fn cyclic_moore_self_join_is_unstable_for_p_3() {
    let z = cyclic_moore(3, 3).unwrap();
    let js = join_smith(&z, &z, &quick()).unwrap();
    assert!(js.prediction.unstable && js.prediction.conditional);
    assert_eq!((js.joined.index, js.joined.index_mod_p), (5, 4));
    assert_eq!(js.joined.moduli_exponents, vec![1, 1, 1, 2]);
}

#[test]
fn suspension_prepends_a_modulus() {
    let js = join_smith(&sigma(2), &example_a(1), &quick()).unwrap();
    assert_eq!(js.joined.moduli_exponents, vec![1, 1, 2]);
    assert_eq!(js.joined.index, 4);
    let direct = direct(&sigma(2), &example_a(1));
    assert!(same_classes(&js.joined, &direct));
}

fn random_cochain(rng: &mut ChaCha8Rng, x: &FreeZpChainComplex, dim: i32) -> Cochain {
    let values: Vec<Int> = (0..x.count(dim))
        .map(|_| Int::from(rng.gen_range(-3i64..=3)))
        .collect();
    Cochain::from_dense(dim, &values)
}

#[test]
fn operator_identities_on_random_cochains() {
    for p in [2u64, 3, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut checked = 0;
        for round in 0..10u64 {
            let k = random_zp_complex(p, 2, 1, 3, 100 * p + round).to_free();
            let l = random_zp_complex(p, 2, 1, 2, 200 * p + round).to_free();
            let (joined, table) = join_free(&k, &l).unwrap();
            for _ in 0..10 {
                let a = rng.gen_range(-1..=k.dim());
                let b = rng.gen_range(-1..=l.dim());
                let x = random_cochain(&mut rng, &k, a);
                let y = random_cochain(&mut rng, &l, b);
                for id in OperatorIdentity::ALL {
                    assert!(
                        check_operator_identity(id, &k, &l, &joined, &table, &x, &y),
                        "{id:?}, p = {p}"
                    );
                }
                checked += 1;
            }
        }
        assert!(checked >= 100);
    }
}
