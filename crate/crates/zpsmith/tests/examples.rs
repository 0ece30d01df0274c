use zpsmith::certificates::{find_boundary_equivariant_dual, verify, verify_equivariant_dual};
use zpsmith::corpus::{example_a, example_b, melikhov};
use zpsmith::deleted::deleted_join;
use zpsmith::join::join_smith;
use zpsmith::smith::{SmithEngine, SmithOptions};
use zpsmith::Int;

fn quick() -> SmithOptions {
    SmithOptions {
        skip_certificates: true,
        ..Default::default()
    }
}

#[test]
fn example_a_heights_one_and_two() {
    for (h, top) in [(1, 2), (2, 3)] {
        let x = example_a(h).to_free();
        let mut e = SmithEngine::new(&x, SmithOptions::default()).unwrap();
        let classes = e.scan().unwrap();
        let r = zpsmith::smith::summarize(2, classes, 0).unwrap();
        assert_eq!((r.index, r.index_mod_p), (3, 2));
        assert_eq!(r.moduli_exponents, vec![1, top]);
        for c in &r.classes {
            if let Some(cert) = &c.certificate {
                assert!(verify(&e, cert).unwrap(), "class {}", c.dim);
            }
        }
    }
}

#[test]
fn example_b_has_no_dual_mod_4() {
    let x = example_b().to_free();
    let mut e = SmithEngine::new(&x, quick()).unwrap();
    let c2 = e.class(2).unwrap();
    assert_eq!(c2.minimal_modulus_exponent, Some(1));
    let rep = e.representative(2);
    let d2 = find_boundary_equivariant_dual(&e, 2, &Int::from(2))
        .unwrap()
        .expect("a dual mod 2");
    assert!(verify_equivariant_dual(&x, &rep, &d2.chain, &Int::from(2)));
    assert!(find_boundary_equivariant_dual(&e, 2, &Int::from(4))
        .unwrap()
        .is_none());
}

#[test]
fn example_b_join_example_a_kills_the_fifth_class() {
    let js = join_smith(&example_b(), &example_a(1), &quick()).unwrap();
    assert!(js.joined.class(5).is_none_or(|c| c.trivial_over_z));
    assert_eq!(js.joined.index, 5);
}

#[test]
fn melikhov_deleted_join_class() {
    let x = deleted_join(&melikhov(2, 1).unwrap()).result.to_free();
    let mut e = SmithEngine::new(&x, quick()).unwrap();
    let c = e.class(5).unwrap();
    assert!(!c.trivial_over_z);
    assert!(c.trivial_mod_exponent(1));
}
