//! Deleted joins and deleted products of a simplicial complex with the swap
//! action of Z_2.

use crate::complex::{
    simplex_label, ComplexError, FreeZpChainComplex, SimplicialComplex, ZpComplex,
};
use crate::int::Int;
use crate::join::JoinTable;

/// M^{*2}_Δ on vertices 0..n (first copy) and n..2n (second copy).
#[derive(Debug, Clone)]
pub struct DeletedJoin {
    pub result: ZpComplex,
    /// Cell σ ⊔ τ' of the result ↦ (dim σ, index of σ in M, index of τ in M).
    pub provenance: JoinTable,
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    // both sorted
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Simplices σ ⊔ τ' with σ ∩ τ = ∅; t swaps the copies.
pub fn deleted_join(m: &SimplicialComplex) -> DeletedJoin {
    let n = m.vertex_count();
    let mut simplices = Vec::new();
    for a in -1..=m.dim() {
        for b in -1..=m.dim() {
            for s in m.simplices(a) {
                for t in m.simplices(b) {
                    if disjoint(s, t) {
                        let mut c = s.clone();
                        c.extend(t.iter().map(|&v| v + n));
                        simplices.push(c);
                    }
                }
            }
        }
    }
    let complex = SimplicialComplex::from_closed(2 * n, &simplices)
        .expect("disjoint pairs are closed under faces");
    let action: Vec<u32> = (0..2 * n)
        .map(|v| if v < n { v + n } else { v - n })
        .collect();
    let result = ZpComplex::new(complex, 2, action).expect("swap of disjoint pairs is free");
    let mut pairs = Vec::new();
    for k in -1..=result.complex.dim() {
        let level = result
            .complex
            .simplices(k)
            .iter()
            .map(|c| {
                let cut = c.partition_point(|&v| v < n);
                let tau: Vec<u32> = c[cut..].iter().map(|&v| v - n).collect();
                let a = cut as i32 - 1;
                (
                    a,
                    m.index_of(&c[..cut]).expect("face of M") as u32,
                    m.index_of(&tau).expect("face of M") as u32,
                )
            })
            .collect();
        pairs.push(level);
    }
    DeletedJoin {
        result,
        provenance: JoinTable::from_pairs(pairs),
    }
}

/// M^{×2}_Δ as a free chain complex.
#[derive(Debug, Clone)]
pub struct DeletedProduct {
    pub result: FreeZpChainComplex,
    /// `cells[n][i] = (dim σ, σ, τ)` for the i-th cell of dimension n (n >= 0).
    pub cells: Vec<Vec<(i32, u32, u32)>>,
}

/// Cells σ×τ with σ, τ nonempty and disjoint, dimension dim σ + dim τ,
/// ∂(σ×τ) = ∂σ×τ + (-1)^{dim σ} σ×∂τ (faces with an empty factor dropped,
/// vertex cells bounding the empty cell) and swap (σ×τ) ↦ (-1)^{dim σ·dim τ} τ×σ.
pub fn deleted_product(m: &SimplicialComplex) -> Result<DeletedProduct, ComplexError> {
    let top = 2 * m.dim().max(0);
    let mut cells: Vec<Vec<(i32, u32, u32)>> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for n in 0..=top {
        let mut level = Vec::new();
        for a in 0..=n.min(m.dim()) {
            let b = n - a;
            if b > m.dim() {
                continue;
            }
            for (si, s) in m.simplices(a).iter().enumerate() {
                for (ti, t) in m.simplices(b).iter().enumerate() {
                    if disjoint(s, t) {
                        index.insert((a, si as u32, b, ti as u32), level.len() as u32);
                        level.push((a, si as u32, ti as u32));
                    }
                }
            }
        }
        if level.is_empty() {
            break;
        }
        cells.push(level);
    }
    let face_of = |s: &[u32], i: usize| {
        let mut f = s.to_vec();
        f.remove(i);
        m.index_of(&f).expect("face") as u32
    };
    let mut labels = vec![vec!["()".to_string()]];
    let mut boundary = vec![vec![Vec::new()]];
    let mut action = vec![vec![(0u32, 1i8)]];
    for (n, level) in cells.iter().enumerate() {
        let n = n as i32;
        let mut lab = Vec::with_capacity(level.len());
        let mut bd = Vec::with_capacity(level.len());
        let mut act = Vec::with_capacity(level.len());
        for &(a, si, ti) in level {
            let b = n - a;
            let s = &m.simplices(a)[si as usize];
            let t = &m.simplices(b)[ti as usize];
            lab.push(format!("{}x{}", simplex_label(s), simplex_label(t)));
            let mut col: Vec<(u32, Int)> = Vec::new();
            if n == 0 {
                col.push((0, Int::ONE));
            } else {
                if a > 0 {
                    for i in 0..s.len() {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        col.push((index[&(a - 1, face_of(s, i), b, ti)], Int::from(sign)));
                    }
                }
                if b > 0 {
                    for i in 0..t.len() {
                        let sign = if (a + i as i32) % 2 == 0 { 1 } else { -1 };
                        col.push((index[&(a, si, b - 1, face_of(t, i))], Int::from(sign)));
                    }
                }
            }
            col.sort_by_key(|e| e.0);
            bd.push(col);
            let sign = if a * b % 2 == 0 { 1 } else { -1 };
            act.push((index[&(b, ti, a, si)], sign));
        }
        labels.push(lab);
        boundary.push(bd);
        action.push(act);
    }
    let result = FreeZpChainComplex {
        p: 2,
        labels,
        boundary,
        action,
    };
    result.validate()?;
    Ok(DeletedProduct { result, cells })
}
