//! Joins of Z_p-complexes, the closed-form resolution of the unit cocycle on
//! a join built from resolutions of the factors, and the four operator
//! identities on tensor products of cochains as executable checks.
//!
//! A cell of a join in dimension n is a pair (σ, τ) with dim σ + dim τ = n - 1.
//! [`JoinTable`] records that pairing once per join, and μ(x⊗y)(σ*τ) = x(σ)·y(τ)
//! flattens tensor terms through it.

use std::collections::HashMap;

use crate::complex::{Cochain, ComplexError, FreeZpChainComplex, SimplicialComplex, ZpComplex};
use crate::int::Int;
use crate::smith::{
    summarize, validate_resolution, Resolution, SmithEngine, SmithError, SmithOptions, SmithReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JoinError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("flattened join resolution is invalid: {0}")]
    Resolution(#[from] SmithError),
}

/// Bijection between cells of a join and pairs of factor cells.
#[derive(Debug, Clone, Default)]
pub struct JoinTable {
    /// `pairs[n + 1][i] = (a, σ, τ)`: cell i of dimension n is σ*τ with dim σ = a.
    pub pairs: Vec<Vec<(i32, u32, u32)>>,
    lookup: HashMap<(i32, i32, u32, u32), u32>,
}

impl JoinTable {
    pub(crate) fn from_pairs(pairs: Vec<Vec<(i32, u32, u32)>>) -> Self {
        let mut lookup = HashMap::new();
        for (n, level) in pairs.iter().enumerate() {
            for (i, &(a, s, t)) in level.iter().enumerate() {
                lookup.insert((a, n as i32 - a - 2, s, t), i as u32);
            }
        }
        JoinTable { pairs, lookup }
    }

    /// Index of σ*τ (dim σ = a, dim τ = b) among the cells of dimension a + b + 1.
    pub fn cell(&self, a: i32, sigma: u32, b: i32, tau: u32) -> Option<u32> {
        self.lookup.get(&(a, b, sigma, tau)).copied()
    }

    pub fn split(&self, n: i32, i: usize) -> (i32, u32, u32) {
        self.pairs[(n + 1) as usize][i]
    }
}

/// K*L with the vertices of K first, then those of L shifted by |V(K)|.
#[derive(Debug, Clone)]
pub struct JoinComplex {
    pub result: ZpComplex,
    pub left_vertices: Vec<u32>,
    pub right_vertices: Vec<u32>,
    pub table: JoinTable,
}

fn facets_or_empty(c: &SimplicialComplex) -> Vec<Vec<u32>> {
    let f = c.facets();
    if f.is_empty() {
        vec![Vec::new()]
    } else {
        f
    }
}

/// Simplicial join of two Z_p-complexes with the factor-wise action.
pub fn join(k: &ZpComplex, l: &ZpComplex) -> Result<JoinComplex, ComplexError> {
    if k.p != l.p {
        return Err(ComplexError::PrimeMismatch(k.p, l.p));
    }
    let nk = k.complex.vertex_count();
    let nl = l.complex.vertex_count();
    let mut facets = Vec::new();
    for f in facets_or_empty(&k.complex) {
        for g in facets_or_empty(&l.complex) {
            let mut s = f.clone();
            s.extend(g.iter().map(|&v| v + nk));
            facets.push(s);
        }
    }
    let complex = SimplicialComplex::from_facets(nk + nl, &facets)?;
    let mut action: Vec<u32> = k.action.clone();
    action.extend(l.action.iter().map(|&v| v + nk));
    let result = ZpComplex::new(complex, k.p, action)?;
    let mut pairs = Vec::new();
    for n in -1..=result.complex.dim() {
        let level = result
            .complex
            .simplices(n)
            .iter()
            .map(|s| {
                let cut = s.partition_point(|&v| v < nk);
                let sigma = &s[..cut];
                let tau: Vec<u32> = s[cut..].iter().map(|&v| v - nk).collect();
                let a = sigma.len() as i32 - 1;
                let si = k.complex.index_of(sigma).expect("join face in K") as u32;
                let ti = l.complex.index_of(&tau).expect("join face in L") as u32;
                (a, si, ti)
            })
            .collect();
        pairs.push(level);
    }
    Ok(JoinComplex {
        result,
        left_vertices: (0..nk).collect(),
        right_vertices: (nk..nk + nl).collect(),
        table: JoinTable::from_pairs(pairs),
    })
}

/// Join of free chain complexes: cells σ⊗τ in dimension dim σ + dim τ + 1,
/// ∂(σ⊗τ) = ∂σ⊗τ + (-1)^{dim σ + 1} σ⊗∂τ, t acting on both factors.
pub fn join_free(
    x: &FreeZpChainComplex,
    y: &FreeZpChainComplex,
) -> Result<(FreeZpChainComplex, JoinTable), ComplexError> {
    if x.p != y.p {
        return Err(ComplexError::PrimeMismatch(x.p, y.p));
    }
    let top = x.dim() + y.dim() + 1;
    let mut pairs: Vec<Vec<(i32, u32, u32)>> = Vec::new();
    for n in -1..=top {
        let mut level = Vec::new();
        for a in -1..=x.dim() {
            let b = n - a - 1;
            if b < -1 || b > y.dim() {
                continue;
            }
            for s in 0..x.count(a) {
                for t in 0..y.count(b) {
                    level.push((a, s as u32, t as u32));
                }
            }
        }
        pairs.push(level);
    }
    let table = JoinTable::from_pairs(pairs);
    let mut labels = Vec::new();
    let mut boundary = Vec::new();
    let mut action = Vec::new();
    for n in -1..=top {
        let level = &table.pairs[(n + 1) as usize];
        let mut lab = Vec::with_capacity(level.len());
        let mut bd = Vec::with_capacity(level.len());
        let mut act = Vec::with_capacity(level.len());
        for &(a, s, t) in level {
            let b = n - a - 1;
            lab.push(format!(
                "{}*{}",
                x.labels[(a + 1) as usize][s as usize],
                y.labels[(b + 1) as usize][t as usize]
            ));
            let mut col: Vec<(u32, Int)> = Vec::new();
            if a >= 0 {
                for (f, c) in x.boundary_of(a, s as usize) {
                    col.push((table.cell(a - 1, *f, b, t).expect("face pair"), c.clone()));
                }
            }
            if b >= 0 {
                let sign = if (a + 1) % 2 == 0 {
                    Int::ONE
                } else {
                    -Int::ONE
                };
                for (f, c) in y.boundary_of(b, t as usize) {
                    col.push((table.cell(a, s, b - 1, *f).expect("face pair"), c * &sign));
                }
            }
            col.sort_by_key(|e| e.0);
            bd.push(col);
            let (si, se) = x.act(a, s as usize);
            let (ti, te) = y.act(b, t as usize);
            act.push((table.cell(a, si, b, ti).expect("image pair"), se * te));
        }
        labels.push(lab);
        boundary.push(bd);
        action.push(act);
    }
    let out = FreeZpChainComplex {
        p: x.p,
        labels,
        boundary,
        action,
    };
    Ok((out, table))
}

/// μ(x⊗y): the cochain on the join with value x(σ)·y(τ) on σ*τ.
pub fn flatten_tensor(table: &JoinTable, x: &Cochain, y: &Cochain) -> Cochain {
    let mut out = Cochain::zero(x.dim + y.dim + 1);
    for (&s, xv) in &x.values {
        for (&t, yv) in &y.values {
            let i = table
                .cell(x.dim, s as u32, y.dim, t as u32)
                .expect("pair present in the join");
            out.add_term(i as usize, &(xv * yv));
        }
    }
    out
}

/// One summand of Φ_j: `left ⊗ t^{t_power} right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTerm {
    /// Dimension k of the left factor (the subscript of Φ^j_k).
    pub k: i32,
    pub left: Cochain,
    pub right: Cochain,
    /// Exponent of t on the right factor, reduced to 0..p-1.
    pub t_power: u64,
}

/// Φ_0..Φ_top on K*L as symbolic tensor terms.
#[derive(Debug, Clone)]
pub struct JoinResolution {
    pub p: u64,
    pub terms: Vec<Vec<TensorTerm>>,
}

fn t_exp(p: u64, e: i64) -> u64 {
    e.rem_euclid(p as i64) as u64
}

/// φ_j of a resolution, with φ_{-1} the dual of the empty cell.
fn factor_psi(res: &Resolution, j: i32) -> Cochain {
    if j == -1 {
        Cochain::basis(-1, 0)
    } else {
        res.psi(j)
    }
}

/// Builds Φ_0..Φ_top from resolutions φ of K and φ' of L:
///
/// Φ_j = Σ_{k=-1}^{j} Φ^j_k with Φ^j_{-1} = ∅⊗φ'_j and, for j = 2m,
/// Φ_{2l} = φ_{2l} ⊗ t^{-l} φ'_{2m-2l-1}, Φ_{2l+1} = φ_{2l+1} ⊗ t^{-(l+1)} φ'_{2m-2l-2};
/// for j = 2m+1,
/// Φ_{2l} = Σ_{q=0}^{p-2} ((s - s_q) φ_{2l}) ⊗ t^{-l+q} φ'_{2m-2l},
/// Φ_{2l+1} = φ_{2l+1} ⊗ t^{-(l+1)} φ'_{2m-2l-1}.
pub fn join_resolution(
    k: &FreeZpChainComplex,
    rk: &Resolution,
    l: &FreeZpChainComplex,
    rl: &Resolution,
    top: i32,
) -> JoinResolution {
    let p = k.p;
    let mut terms = Vec::new();
    let push = |out: &mut Vec<TensorTerm>, kk: i32, left: Cochain, right: Cochain, e: i64| {
        if left.is_zero() || right.is_zero() {
            return;
        }
        out.push(TensorTerm {
            k: kk,
            left,
            right,
            t_power: t_exp(p, e),
        });
    };
    for j in 0..=top {
        let mut phi_j = Vec::new();
        push(&mut phi_j, -1, Cochain::basis(-1, 0), factor_psi(rl, j), 0);
        let m = j / 2;
        for kk in 0..=j.min(k.dim()) {
            let lidx = kk / 2;
            let rdim = j - kk - 1;
            if rdim > l.dim() {
                continue;
            }
            let phi = factor_psi(rk, kk);
            let right = factor_psi(rl, rdim);
            if kk % 2 == 1 {
                push(&mut phi_j, kk, phi, right, -(lidx as i64 + 1));
            } else if j % 2 == 0 {
                push(&mut phi_j, kk, phi, right, -(lidx as i64));
            } else {
                debug_assert_eq!(rdim, 2 * m - 2 * lidx);
                let s_phi = k.s_cochain(&phi);
                for q in 0..p - 1 {
                    let left = s_phi.sub(&k.sq_cochain(&phi, q));
                    push(&mut phi_j, kk, left, right.clone(), q as i64 - lidx as i64);
                }
            }
        }
        terms.push(phi_j);
    }
    JoinResolution { p, terms }
}

impl JoinResolution {
    pub fn top(&self) -> i32 {
        self.terms.len() as i32 - 1
    }

    /// Flattened Φ_j on the join.
    pub fn flatten(&self, l: &FreeZpChainComplex, table: &JoinTable, j: i32) -> Cochain {
        let mut out = Cochain::zero(j);
        if j < 0 || j > self.top() {
            return out;
        }
        for term in &self.terms[j as usize] {
            let right = l.t_cochain(&term.right, term.t_power as i64);
            out = out.add(&flatten_tensor(table, &term.left, &right));
        }
        out
    }

    /// Flattened resolution as dense cochains on the join `joined`.
    pub fn to_resolution(
        &self,
        l: &FreeZpChainComplex,
        table: &JoinTable,
        joined: &FreeZpChainComplex,
    ) -> Resolution {
        let psis = (0..=self.top().min(joined.dim()))
            .map(|j| self.flatten(l, table, j).to_dense(joined.count(j)))
            .collect();
        Resolution { psis }
    }
}

/// Builds the join resolution, flattens it and validates it on the join.
pub fn validated_join_resolution(
    k: &FreeZpChainComplex,
    rk: &Resolution,
    l: &FreeZpChainComplex,
    rl: &Resolution,
    table: &JoinTable,
    joined: &FreeZpChainComplex,
) -> Result<Resolution, JoinError> {
    let jr = join_resolution(k, rk, l, rl, joined.dim());
    let res = jr.to_resolution(l, table, joined);
    validate_resolution(joined, &res)?;
    Ok(res)
}

/// Smith data of K, L and K*L, the last from the join resolution.
#[derive(Debug, Clone)]
pub struct JoinSmith {
    pub left: SmithReport,
    pub right: SmithReport,
    pub joined: SmithReport,
    pub prediction: JoinIndexPrediction,
    pub cells: Vec<usize>,
    pub peak_bytes: usize,
}

/// Resolves both factors, shortens them at their indices, and scans the join
/// with the flattened join resolution.
pub fn join_smith(
    k: &ZpComplex,
    l: &ZpComplex,
    opts: &SmithOptions,
) -> Result<JoinSmith, JoinError> {
    let (xk, xl) = (k.to_free(), l.to_free());
    let mut ek = SmithEngine::new(&xk, opts.clone())?;
    let left = summarize(xk.p, ek.scan()?, ek.peak_bytes)?;
    ek.shorten(left.index)?;
    let mut el = SmithEngine::new(&xl, opts.clone())?;
    let right = summarize(xl.p, el.scan()?, el.peak_bytes)?;
    el.shorten(right.index)?;
    let j = join(k, l)?;
    let x = j.result.to_free();
    let res = validated_join_resolution(&xk, &ek.resolution, &xl, &el.resolution, &j.table, &x)?;
    let mut e = SmithEngine::with_resolution(&x, res, opts.clone())?;
    let joined = summarize(x.p, e.scan()?, e.peak_bytes)?;
    let prediction = predict_join_index(x.p, &left, &right);
    let peak_bytes = e.peak_bytes.max(ek.peak_bytes).max(el.peak_bytes);
    let cells = (0..=x.dim()).map(|n| x.count(n)).collect();
    Ok(JoinSmith {
        left,
        right,
        joined,
        prediction,
        cells,
        peak_bytes,
    })
}

/// What the factor indices say about the index of K*L before computing it.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct JoinIndexPrediction {
    /// I(K*L) <= upper always holds.
    pub upper: i32,
    /// I(K*L) >= lower; for p > 2 only under the extra hypotheses, see `conditional`.
    pub lower: Option<i32>,
    /// Set when `lower` relies on hypotheses this prediction does not check
    /// (boundary-equivariant duals for p > 2).
    pub conditional: bool,
    /// Both top classes vanish mod p, so A^{I(K)+I(L)-2}(K*L) vanishes mod p.
    pub unstable: bool,
}

/// Bounds from the factor data: I(K*L) <= I(K) + I(L), minus one when both
/// top classes vanish mod p; I_p(K*L) >= I_p(K) + I_p(L) for p = 2, and for
/// p > 2 conditionally.
pub fn predict_join_index(p: u64, k: &SmithReport, l: &SmithReport) -> JoinIndexPrediction {
    let unstable =
        k.index_mod_p == k.index - 1 && l.index_mod_p == l.index - 1 && k.index > 0 && l.index > 0;
    let upper = k.index + l.index - i32::from(unstable);
    let lower = if k.index_mod_p >= 2 && l.index_mod_p >= 2 {
        Some(k.index_mod_p + l.index_mod_p)
    } else {
        None
    };
    JoinIndexPrediction {
        upper,
        lower,
        conditional: p != 2 && lower.is_some(),
        unstable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorIdentity {
    /// d(Σ_{k=0}^{p-2} (s - s_k)x ⊗ t^k y) = sx⊗y - x⊗sy
    DOfTwistedSum,
    /// x⊗sy + Σ_{k=0}^{p-2} ((s - s_k)dx) ⊗ t^k y = s(x ⊗ t^{p-1}y)
    SOfShiftedTensor,
    /// sx⊗y - Σ_{k=0}^{p-2} ((s - s_k)x) ⊗ t^k dy = s(x⊗y)
    SOfTensor,
    /// dx⊗y + x⊗t^{p-1}dy = (1 - t)(x ⊗ t^{p-1}y)
    DOfShiftedTensor,
}

impl OperatorIdentity {
    pub const ALL: [OperatorIdentity; 4] = [
        OperatorIdentity::DOfTwistedSum,
        OperatorIdentity::SOfShiftedTensor,
        OperatorIdentity::SOfTensor,
        OperatorIdentity::DOfShiftedTensor,
    ];
}

/// Both sides of an operator identity, flattened on the join.
pub fn operator_identity_sides(
    id: OperatorIdentity,
    k: &FreeZpChainComplex,
    l: &FreeZpChainComplex,
    joined: &FreeZpChainComplex,
    table: &JoinTable,
    x: &Cochain,
    y: &Cochain,
) -> (Cochain, Cochain) {
    let p = k.p;
    let mu = |a: &Cochain, b: &Cochain| flatten_tensor(table, a, b);
    // Σ_{q=0}^{p-2} ((s - s_q)u) ⊗ t^q v
    let twisted = |u: &Cochain, v: &Cochain| {
        let su = k.s_cochain(u);
        let mut acc = Cochain::zero(u.dim + v.dim + 1);
        for q in 0..p - 1 {
            acc = acc.add(&mu(&su.sub(&k.sq_cochain(u, q)), &l.t_cochain(v, q as i64)));
        }
        acc
    };
    let top_t = (p - 1) as i64;
    match id {
        OperatorIdentity::DOfTwistedSum => {
            let lhs = joined.d_cochain(&twisted(x, y));
            let rhs = mu(&k.s_cochain(x), y).sub(&mu(x, &l.s_cochain(y)));
            (lhs, rhs)
        }
        OperatorIdentity::SOfShiftedTensor => {
            let lhs = mu(x, &l.s_cochain(y)).add(&twisted(&k.d_cochain(x), y));
            let rhs = joined.s_cochain(&mu(x, &l.t_cochain(y, top_t)));
            (lhs, rhs)
        }
        OperatorIdentity::SOfTensor => {
            let lhs = mu(&k.s_cochain(x), y).sub(&twisted(x, &l.d_cochain(y)));
            let rhs = joined.s_cochain(&mu(x, y));
            (lhs, rhs)
        }
        OperatorIdentity::DOfShiftedTensor => {
            let lhs = mu(&k.d_cochain(x), y).add(&mu(x, &l.t_cochain(&l.d_cochain(y), top_t)));
            let rhs = joined.d_cochain(&mu(x, &l.t_cochain(y, top_t)));
            (lhs, rhs)
        }
    }
}

/// True iff both sides of the identity agree on every cell of the join.
pub fn check_operator_identity(
    id: OperatorIdentity,
    k: &FreeZpChainComplex,
    l: &FreeZpChainComplex,
    joined: &FreeZpChainComplex,
    table: &JoinTable,
    x: &Cochain,
    y: &Cochain,
) -> bool {
    let (lhs, rhs) = operator_identity_sides(id, k, l, joined, table, x, y);
    lhs.sub(&rhs).is_zero()
}
