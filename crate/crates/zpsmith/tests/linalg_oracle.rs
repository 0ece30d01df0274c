//! Smith normal form and solver checks against an independent dense oracle.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zpsmith::linalg::{
    diagonalize, image_membership, invariant_factors, snf, solve, EliminationOptions, IntMatrix,
};
use zpsmith::Int;

/// Textbook dense Smith normal form over BigInt: move the smallest entry to
/// the corner, reduce its row and column, repeat until it divides everything.
fn oracle_invariant_factors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return out };
            m.swap(k, bi);
            for row in m.iter_mut() {
                row.swap(k, bj);
            }
            let piv = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..rows {
                let q = m[i][k].div_floor(&piv);
                for j in k..cols {
                    let t = &q * &m[k][j];
                    m[i][j] -= t;
                }
                if !m[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                let q = m[k][j].div_floor(&piv);
                for i in k..rows {
                    let t = &q * &m[i][k];
                    m[i][j] -= t;
                }
                if !m[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest: fold an offending row into row k
            let mut bad = None;
            'outer: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&m[i][j] % &piv).is_zero() {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in k..cols {
                        let t = m[i][j].clone();
                        m[k][j] += t;
                    }
                }
                None => {
                    out.push(piv.abs());
                    break;
                }
            }
        }
    }
    out
}

fn bareiss_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn to_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_dense()
        .iter()
        .map(|r| r.iter().map(|v| v.to_bigint()).collect())
        .collect()
}

fn random_dense(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    density: f64,
) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(lo..=hi)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn invariant_factors_match_dense_oracle_on_1000_small_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let density = rng.gen_range(0.2..1.0);
        let a = random_dense(&mut rng, rows, cols, -10, 10, density);
        let ours: Vec<BigInt> = invariant_factors(&IntMatrix::from_i64(&a))
            .iter()
            .map(|v| v.to_bigint())
            .collect();
        assert_eq!(ours, oracle_invariant_factors(&a), "matrix {a:?}");
    }
}

#[test]
fn first_invariant_factor_is_gcd_of_entries_and_product_matches_minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let a = random_dense(&mut rng, n, n, -10, 10, 0.8);
        let f = invariant_factors(&IntMatrix::from_i64(&a));
        let g = a.iter().flatten().fold(0i64, |acc, &v| acc.gcd(&v));
        if g == 0 {
            assert!(f.is_empty());
            continue;
        }
        assert_eq!(f[0], Int::from(g));
        let big: Vec<Vec<BigInt>> = a
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let det = bareiss_det(&big).abs();
        if f.len() == n {
            let prod = f.iter().fold(BigInt::from(1), |acc, v| acc * v.to_bigint());
            assert_eq!(prod, det);
        } else {
            assert!(det.is_zero());
        }
    }
}

#[test]
fn reconstruction_up_to_sixty_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(rows, cols) in &[(60, 60), (45, 60), (60, 37), (20, 20), (1, 60)] {
        let a = random_dense(&mut rng, rows, cols, -9, 9, 0.15);
        let m = IntMatrix::from_i64(&a);
        let d = snf(&m);
        assert_eq!(d.v.mul(&d.s).mul(&d.u), m);
        assert_eq!(bareiss_det(&to_big(&d.u)).abs(), BigInt::from(1));
        assert_eq!(bareiss_det(&to_big(&d.v)).abs(), BigInt::from(1));
        let diag = d.diagonal();
        let nz: Vec<&Int> = diag.iter().filter(|v| !v.is_zero()).collect();
        for w in nz.windows(2) {
            assert!(w[1].is_divisible_by(w[0]));
        }
        // zeros come last
        let first_zero = diag.iter().position(|v| v.is_zero()).unwrap_or(diag.len());
        assert!(diag[first_zero..].iter().all(|v| v.is_zero()));
    }
}

#[test]
fn rhs_in_image_always_has_a_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let a = IntMatrix::from_i64(&random_dense(&mut rng, rows, cols, -5, 5, 0.4));
        let r: Vec<Int> = (0..cols)
            .map(|_| Int::from(rng.gen_range(-4i64..=4)))
            .collect();
        let v = a.mul_vec(&r);
        let x = image_membership(&a, &v, None)
            .unwrap()
            .expect("in image by construction");
        assert_eq!(a.mul_vec(&x), v);
        let n = Int::from(rng.gen_range(2i64..=30));
        let x = solve(&a, &v, Some(&n)).unwrap().expect("in image mod n");
        let ax = a.mul_vec(&x);
        assert!(ax.iter().zip(&v).all(|(l, r)| (l - r).is_divisible_by(&n)));
    }
}

#[test]
fn modular_elimination_agrees_with_integer_queries() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=10);
        let cols = rng.gen_range(1..=10);
        let a = IntMatrix::from_i64(&random_dense(&mut rng, rows, cols, -6, 6, 0.5));
        let b: Vec<Int> = (0..rows)
            .map(|_| Int::from(rng.gen_range(-6i64..=6)))
            .collect();
        let n = Int::from([2i64, 4, 8, 9, 12][rng.gen_range(0..5)]);
        let z = diagonalize(
            &a,
            vec![b.clone()],
            &EliminationOptions {
                log_rows: true,
                ..Default::default()
            },
        )
        .unwrap();
        let opts = EliminationOptions {
            modulus: Some(n.clone()),
            log_rows: true,
            ..Default::default()
        };
        let md = diagonalize(&a, vec![b.clone()], &opts).unwrap();
        assert_eq!(z.in_image(0, Some(&n)), md.in_image(0, Some(&n)));
        for d in [&z, &md] {
            if let Some(c) = d.dual_certificate(0, &n) {
                assert!(a.vec_mul(&c).iter().all(|v| v.is_divisible_by(&n)));
                let cb: Int = c.iter().zip(&b).map(|(x, y)| x * y).sum();
                assert!(!cb.is_divisible_by(&n));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_reconstructs(rows in 1usize..10, cols in 1usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = IntMatrix::from_i64(&random_dense(&mut rng, rows, cols, -9, 9, 0.5));
        let d = snf(&m);
        prop_assert_eq!(d.v.mul(&d.s).mul(&d.u), m);
    }
}
