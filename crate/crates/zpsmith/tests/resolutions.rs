use proptest::prelude::*;
use zpsmith::complex::ZpComplex;
use zpsmith::corpus::{cyclic_moore, example_a, example_b, random_zp_complex, sigma, sphere};
use zpsmith::smith::{
    build_resolution, shorten_resolution, smith_report, validate_resolution, SmithEngine,
    SmithOptions,
};

fn quick() -> SmithOptions {
    SmithOptions {
        skip_certificates: true,
        ..Default::default()
    }
}

/// Random complexes with at most 12 vertices.
fn small_complex() -> impl Strategy<Value = ZpComplex> {
    (
        prop_oneof![Just(2u64), Just(3), Just(5)],
        1u32..=2,
        1usize..10,
        any::<u64>(),
    )
        .prop_map(|(p, dim, facets, seed)| {
            let m = (12 / p as u32).min(4);
            random_zp_complex(p, m, dim, facets, seed)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn built_resolutions_are_valid(z in small_complex()) {
        let x = z.to_free();
        let res = build_resolution(&x, None).unwrap();
        prop_assert!(validate_resolution(&x, &res).is_ok());
    }

    #[test]
    fn classes_are_p_torsion(z in small_complex()) {
        let r = smith_report(&z.to_free(), quick()).unwrap();
        for c in r.classes.iter().filter(|c| c.dim >= 1) {
            prop_assert!(c.torsion_ok, "class {} of a random complex", c.dim);
        }
    }

    #[test]
    fn index_mod_p_never_exceeds_index(z in small_complex()) {
        let r = smith_report(&z.to_free(), quick()).unwrap();
        prop_assert!(r.index_mod_p <= r.index);
        prop_assert_eq!(r.moduli_exponents.len() as i32, (r.index - 1).max(0));
        // shape p, p, ..., p, p^m
        if let Some((_, head)) = r.moduli_exponents.split_last() {
            prop_assert!(head.iter().all(|&m| m == 1));
        }
    }

    #[test]
    fn shortening_keeps_classes(z in small_complex()) {
        let x = z.to_free();
        let r = smith_report(&x, quick()).unwrap();
        let res = shorten_resolution(&x, build_resolution(&x, None).unwrap(), r.index).unwrap();
        validate_resolution(&x, &res).unwrap();
        let mut e = SmithEngine::with_resolution(&x, res, quick()).unwrap();
        let again = e.scan().unwrap();
        prop_assert_eq!(again.len(), r.classes.len());
        for (a, b) in again.iter().zip(&r.classes) {
            prop_assert_eq!(a.minimal_modulus_exponent, b.minimal_modulus_exponent);
        }
    }
}

#[test]
fn corpus_classes_are_p_torsion() {
    let items = vec![
        sigma(2),
        sigma(5),
        sphere(1),
        sphere(2),
        example_a(1),
        example_a(2),
        example_b(),
        cyclic_moore(3, 3).unwrap(),
        cyclic_moore(5, 5).unwrap(),
    ];
    for z in items {
        let r = smith_report(&z.to_free(), SmithOptions::default()).unwrap();
        for c in r.classes.iter().filter(|c| c.dim >= 1) {
            assert!(c.torsion_ok, "p = {}, class {}", z.p, c.dim);
        }
    }
}

#[test]
fn sphere_indices() {
    for k in 0..=3 {
        let r = smith_report(&sphere(k).to_free(), quick()).unwrap();
        assert_eq!(r.index, k as i32 + 1);
        assert_eq!(r.index_mod_p, k as i32 + 1);
    }
    assert_eq!(smith_report(&sigma(3).to_free(), quick()).unwrap().index, 1);
}

#[test]
fn cyclic_moore_top_class_vanishes_mod_p() {
    for (z, p) in [
        (cyclic_moore(2, 4).unwrap(), 2),
        (cyclic_moore(3, 3).unwrap(), 3),
        (cyclic_moore(5, 5).unwrap(), 5),
    ] {
        let r = smith_report(&z.to_free(), quick()).unwrap();
        assert_eq!(
            (r.index, r.index_mod_p, r.moduli_exponents.clone()),
            (3, 2, vec![1, 2]),
            "p = {p}"
        );
    }
}
