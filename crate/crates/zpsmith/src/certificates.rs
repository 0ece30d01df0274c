//! Certificates for torsion d- and s-cohomology classes and
//! boundary-equivariant duals.
//!
//! A certificate for a class h with modulus n is a chain c whose (s or d)
//! boundary vanishes mod n and on which the representative of h is nonzero
//! mod n. Over the folded complex this is a row of the left transform R of
//! the coboundary, scaled by n / gcd(D_i, n) for a row i that obstructs h.

use crate::complex::{Chain, Cochain, FreeZpChainComplex, Orbits};
use crate::int::Int;
use crate::linalg::{diagonalize, EliminationOptions, IntMatrix, LinalgError};
use crate::smith::{
    Certificate, ClassAnalysis, FoldKind, FoldedComplex, SmithEngine, SmithError, SmithOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("cell {cell} of the certificate lies outside the fundamental domain")]
    SupportOutsideDomain { cell: usize },
    #[error("cochain value on cell {cell} lies outside the fundamental domain")]
    CochainOutsideDomain { cell: usize },
    #[error("certificate of dimension {got} for a class of dimension {want}")]
    DimensionMismatch { got: i32, want: i32 },
    #[error("d-certificates need an even class dimension, s-certificates an odd one (got {0})")]
    KindMismatch(i32),
}

/// Certificate for a plain chain complex: given the boundary D (columns =
/// j-cells, rows = (j-1)-cells), a j-cochain φ and n, find c with D·c ≡ 0 and
/// φ(c) ≢ 0 mod n. None when [φ] vanishes mod n (or φ is not a cocycle mod n,
/// in which case the question is ill-posed and also answered with None).
pub fn chain_certificate(
    boundary: &IntMatrix,
    phi: &[Int],
    n: &Int,
) -> Result<Option<Vec<Int>>, LinalgError> {
    let cob = boundary.transpose();
    let opts = EliminationOptions {
        log_rows: true,
        ..Default::default()
    };
    let diag = diagonalize(&cob, vec![phi.to_vec()], &opts)?;
    Ok(diag.dual_certificate(0, n))
}

/// Fundamental-domain cochain φ with sφ = sψ_j for even j: φ(σ_o) = (sψ_j)(σ_o).
pub fn fundamental_cochain(engine: &SmithEngine, j: i32) -> Cochain {
    let (v, _) = engine.class_data(j);
    let mut phi = Cochain::zero(j);
    if j % 2 == 0 && j >= 0 && j <= engine.orbits.dim() {
        for (o, &rep) in engine.orbits.levels[j as usize].reps.iter().enumerate() {
            phi.set(rep as usize, v[o].clone());
        }
    }
    phi
}

/// Maps a folded chain back to the base complex: Σ c_o σ_o for the d-fold,
/// Σ c_{o,k} t^k σ_o for the s-fold.
pub fn unfold_chain(orbits: &Orbits, kind: FoldKind, j: i32, c: &[Int]) -> Chain {
    let mut out = Chain::zero(j);
    if j < 0 {
        return out;
    }
    let lv = &orbits.levels[j as usize];
    match kind {
        FoldKind::D => {
            for (o, &rep) in lv.reps.iter().enumerate() {
                out.set(rep as usize, c[o].clone());
            }
        }
        FoldKind::S => {
            let p = orbits.p;
            for o in 0..lv.len() {
                for k in 0..p as usize - 1 {
                    let v = &c[FoldedComplex::s_index(p, o, k)];
                    if v.is_zero() {
                        continue;
                    }
                    let (i, e) = lv.members[o][k];
                    out.add_term(i as usize, &(v * &Int::from(e as i64)));
                }
            }
        }
    }
    out
}

pub(crate) fn certificate_from_analysis(
    engine: &SmithEngine,
    a: &ClassAnalysis,
    n: &Int,
) -> Option<Certificate> {
    let c = a.diag.dual_certificate(0, n)?;
    let kind = if a.dim % 2 == 0 {
        FoldKind::D
    } else {
        FoldKind::S
    };
    let chain = unfold_chain(&engine.orbits, kind, a.dim, &c);
    Some(Certificate {
        chain,
        modulus: n.clone(),
        kind,
        dim: a.dim,
    })
}

/// Finds a certificate for A^j modulo n, or None if the class vanishes mod n.
pub fn find_certificate(
    engine: &mut SmithEngine,
    j: i32,
    n: &Int,
) -> Result<Option<Certificate>, SmithError> {
    let a = engine.analyze(j, true, false)?;
    Ok(certificate_from_analysis(engine, &a, n))
}

/// Check for d-classes: c and φ inside the fundamental domain,
/// s∂c ≡ 0 mod n, φ(c) ≢ 0 mod n.
pub fn verify_certificate_d(
    x: &FreeZpChainComplex,
    orbits: &Orbits,
    phi: &Cochain,
    c: &Chain,
    n: &Int,
) -> Result<bool, CertError> {
    if phi.dim != c.dim {
        return Err(CertError::DimensionMismatch {
            got: c.dim,
            want: phi.dim,
        });
    }
    if c.dim % 2 != 0 {
        return Err(CertError::KindMismatch(c.dim));
    }
    if c.dim >= 0 {
        let lv = &orbits.levels[c.dim as usize];
        let in_domain = |i: usize| lv.locate[i].1 == 0;
        if let Some(i) = c.support().find(|&i| !in_domain(i)) {
            return Err(CertError::SupportOutsideDomain { cell: i });
        }
        if let Some(i) = phi.support().find(|&i| !in_domain(i)) {
            return Err(CertError::CochainOutsideDomain { cell: i });
        }
    }
    let sbc = x.s_chain(&x.boundary(c));
    Ok(sbc.is_zero_mod(n) && !phi.eval(c).is_divisible_by(n))
}

/// Check for s-classes [dφ]: d∂c ≡ 0 mod n and φ(dc) ≢ 0 mod n.
pub fn verify_certificate_s(
    x: &FreeZpChainComplex,
    phi: &Cochain,
    c: &Chain,
    n: &Int,
) -> Result<bool, CertError> {
    if phi.dim != c.dim {
        return Err(CertError::DimensionMismatch {
            got: c.dim,
            want: phi.dim,
        });
    }
    if c.dim % 2 == 0 {
        return Err(CertError::KindMismatch(c.dim));
    }
    let dbc = x.d_chain(&x.boundary(c));
    Ok(dbc.is_zero_mod(n) && !phi.eval(&x.d_chain(c)).is_divisible_by(n))
}

/// Verifies a certificate produced for A^j by `engine`.
pub fn verify(engine: &SmithEngine, cert: &Certificate) -> Result<bool, CertError> {
    let j = cert.dim;
    match cert.kind {
        FoldKind::D => verify_certificate_d(
            engine.x,
            &engine.orbits,
            &fundamental_cochain(engine, j),
            &cert.chain,
            &cert.modulus,
        ),
        FoldKind::S => verify_certificate_s(
            engine.x,
            &engine.resolution.psi(j),
            &cert.chain,
            &cert.modulus,
        ),
    }
}

/// d∂c ≡ 0 mod q.
pub fn boundary_equivariant(x: &FreeZpChainComplex, c: &Chain, q: &Int) -> bool {
    x.d_chain(&x.boundary(c)).is_zero_mod(q)
}

/// A boundary-equivariant dual of an even class: a chain c on the full
/// chain group with s∂c ≡ 0 mod p, d∂c ≡ 0 mod q and (sψ_j)(c) ≢ 0 mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantDual {
    pub chain: Chain,
    pub q: Int,
    pub dim: i32,
}

/// Checks the three defining congruences of a dual found by
/// [`find_boundary_equivariant_dual`].
pub fn verify_equivariant_dual(x: &FreeZpChainComplex, rep: &Cochain, c: &Chain, q: &Int) -> bool {
    let p = Int::from(x.p);
    let b = x.boundary(c);
    x.s_chain(&b).is_zero_mod(&p)
        && x.d_chain(&b).is_zero_mod(q)
        && !rep.eval(c).is_divisible_by(&p)
}

/// Searches the lattice {c : s∂c ≡ 0 mod p, d∂c ≡ 0 mod q} of j-chains for a
/// chain on which sψ_j is nonzero mod p. Only even j; see
/// [`find_boundary_equivariant_dual_any`] for odd classes.
pub fn find_boundary_equivariant_dual(
    engine: &SmithEngine,
    j: i32,
    q: &Int,
) -> Result<Option<EquivariantDual>, SmithError> {
    assert!(
        j % 2 == 0,
        "boundary-equivariant duals are defined for d-classes"
    );
    let x = engine.x;
    let p = Int::from(x.p);
    let big_q = p.lcm(q);
    let (sp, sq) = (big_q.div_exact(&p), big_q.div_exact(q));
    let below = x.count(j - 1);
    let mut trips = Vec::new();
    for i in 0..x.count(j) {
        let b = x.boundary(&Chain::basis(j, i));
        for (r, v) in x.s_chain(&b).coeffs {
            trips.push((r, i, &v * &sp));
        }
        for (r, v) in x.d_chain(&b).coeffs {
            trips.push((below + r, i, &v * &sq));
        }
    }
    let m = IntMatrix::from_triplets(2 * below, x.count(j), trips);
    let opts = EliminationOptions {
        modulus: Some(big_q.clone()),
        log_cols: true,
        memory_cap: engine.opts.memory_cap,
        ..Default::default()
    };
    let diag = diagonalize(&m, Vec::new(), &opts)?;
    let rep = engine.representative(j);
    let f = rep.to_dense(x.count(j));
    let fc = diag.apply_ct(&f);
    let mut scale = vec![Int::ONE; x.count(j)];
    for (_, c, d) in &diag.pivots {
        scale[*c as usize] = big_q.div_exact(&d.gcd(&big_q));
    }
    for col in 0..x.count(j) {
        if (&fc[col] * &scale[col]).is_divisible_by(&p) {
            continue;
        }
        let mut y = vec![Int::ZERO; x.count(j)];
        y[col] = scale[col].clone();
        let c: Vec<Int> = diag
            .apply_c(&y)
            .into_iter()
            .map(|v| v.mod_symmetric(&big_q))
            .collect();
        let chain = Chain::from_dense(j, &c);
        debug_assert!(verify_equivariant_dual(x, &rep, &chain, q));
        return Ok(Some(EquivariantDual {
            chain,
            q: q.clone(),
            dim: j,
        }));
    }
    Ok(None)
}

/// Even classes are searched directly; an odd class A^j(X) is searched as
/// A^{j+1}(Σ_p * X), whose minimal modulus agrees with that of A^j(X).
pub fn find_boundary_equivariant_dual_any(
    x: &FreeZpChainComplex,
    j: i32,
    q: &Int,
    opts: &SmithOptions,
) -> Result<(Option<EquivariantDual>, bool), SmithError> {
    if j % 2 == 0 {
        let e = SmithEngine::new(x, opts.clone())?;
        Ok((find_boundary_equivariant_dual(&e, j, q)?, false))
    } else {
        let sigma = crate::corpus::sigma(x.p).to_free();
        let (y, _) = crate::join::join_free(&sigma, x)
            .map_err(|e| SmithError::Consistency(e.to_string()))?;
        let e = SmithEngine::new(&y, opts.clone())?;
        Ok((find_boundary_equivariant_dual(&e, j + 1, q)?, true))
    }
}
