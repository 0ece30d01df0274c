//! Augmented simplicial complexes, Z_p-actions and free chain complexes with
//! a signed basis action, plus the operators t, d = 1 - t, s = 1 + ... + t^{p-1}
//! and s_q = 1 + ... + t^q on chains and cochains.

use std::collections::{BTreeMap, HashMap};

use crate::int::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("facet {0:?} repeats a vertex")]
    RepeatedVertex(Vec<u32>),
    #[error("facet {facet:?} references vertex {vertex} but only {count} vertices exist")]
    VertexOutOfRange {
        facet: Vec<u32>,
        vertex: u32,
        count: u32,
    },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("action has length {len}, expected {expected}")]
    ActionLength { len: usize, expected: usize },
    #[error("action is not a permutation of the vertices")]
    NotPermutation,
    #[error("t^p is not the identity (vertex {vertex} returns to {image})")]
    NotOrderP { vertex: u32, image: u32 },
    #[error("action maps simplex {simplex:?} to non-simplex {image:?}")]
    NotSimplicial { simplex: Vec<u32>, image: Vec<u32> },
    #[error("simplex {simplex:?} is fixed by t^{power}")]
    FixedSimplex { simplex: Vec<u32>, power: u64 },
    #[error("chain complex check failed: {0}")]
    Chain(String),
    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u64, u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Augmented simplicial complex. `simplices[k + 1]` lists the k-simplices as
/// strictly increasing vertex tuples in lexicographic order; `simplices[0]`
/// holds the single empty simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: u32,
    simplices: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of `facets` on vertices `0..vertex_count`.
    pub fn from_facets(vertex_count: u32, facets: &[Vec<u32>]) -> Result<Self, ComplexError> {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = vec![Default::default()];
        by_dim[0].insert(Vec::new());
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(f.clone()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange {
                    facet: f.clone(),
                    vertex: v,
                    count: vertex_count,
                });
            }
            let k = s.len();
            // every subset of the facet
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<u32> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                let d = sub.len();
                while by_dim.len() <= d {
                    by_dim.push(Default::default());
                }
                by_dim[d].insert(sub);
            }
        }
        let simplices: Vec<Vec<Vec<u32>>> = by_dim
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        Ok(Self::from_sorted(vertex_count, simplices))
    }

    /// Like [`from_facets`](Self::from_facets) but also adds every vertex
    /// `0..vertex_count` as a simplex, so isolated vertices are kept.
    pub fn with_all_vertices(vertex_count: u32, facets: &[Vec<u32>]) -> Result<Self, ComplexError> {
        let mut all: Vec<Vec<u32>> = (0..vertex_count).map(|v| vec![v]).collect();
        all.extend(facets.iter().cloned());
        Self::from_facets(vertex_count, &all)
    }

    /// Builds from an explicit list of simplices that must already be closed
    /// under taking faces (the empty simplex may be omitted).
    pub fn from_closed(vertex_count: u32, simplices: &[Vec<u32>]) -> Result<Self, ComplexError> {
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
        for s in simplices {
            if s.is_empty() {
                continue;
            }
            let mut s = s.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(s));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange {
                    facet: s.clone(),
                    vertex: v,
                    count: vertex_count,
                });
            }
            while by_dim.len() <= s.len() {
                by_dim.push(Vec::new());
            }
            by_dim[s.len()].push(s);
        }
        for level in by_dim.iter_mut() {
            level.sort();
            level.dedup();
        }
        let c = Self::from_sorted(vertex_count, by_dim);
        for k in 1..=c.dim() {
            for s in c.simplices(k) {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    if !c.contains(&face) {
                        return Err(ComplexError::Chain(format!(
                            "face {face:?} of {s:?} is missing"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    fn from_sorted(vertex_count: u32, simplices: Vec<Vec<Vec<u32>>>) -> Self {
        let index = simplices
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        SimplicialComplex {
            vertex_count,
            simplices,
            index,
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Top dimension; -1 for the complex holding only the empty simplex.
    pub fn dim(&self) -> i32 {
        self.simplices.len() as i32 - 2
    }

    /// Simplices of dimension `k >= -1`.
    pub fn simplices(&self, k: i32) -> &[Vec<u32>] {
        let i = (k + 1) as usize;
        if k < -1 || i >= self.simplices.len() {
            &[]
        } else {
            &self.simplices[i]
        }
    }

    pub fn count(&self, k: i32) -> usize {
        self.simplices(k).len()
    }

    /// Simplex counts in dimensions 0..=dim.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.count(k)).collect()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let i = s.len();
        self.index.get(i).and_then(|m| m.get(s).copied())
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    /// Maximal simplices in dimension order.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for k in 0..=self.dim() {
            let mut covered = vec![false; self.count(k)];
            for t in self.simplices(k + 1) {
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    covered[self.index_of(&face).expect("closed under faces")] = true;
                }
            }
            for (s, c) in self.simplices(k).iter().zip(covered) {
                if !c {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Boundary of every simplex with standard simplicial signs, indexed like `simplices`.
    fn boundary_columns(&self) -> Vec<Vec<Vec<(u32, Int)>>> {
        let mut out = vec![Vec::new(); self.simplices.len()];
        out[0] = vec![Vec::new()];
        for k in 0..=self.dim() {
            let col: Vec<Vec<(u32, Int)>> = self
                .simplices(k)
                .iter()
                .map(|s| {
                    let mut entries: Vec<(u32, Int)> = (0..s.len())
                        .map(|i| {
                            let mut face = s.clone();
                            face.remove(i);
                            let idx = self.index_of(&face).expect("closed under faces") as u32;
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (idx, Int::from(sign))
                        })
                        .collect();
                    entries.sort_by_key(|e| e.0);
                    entries
                })
                .collect();
            out[(k + 1) as usize] = col;
        }
        out
    }
}

/// Sorts `v` in place and returns the sign of the sorting permutation.
pub fn sort_with_sign(v: &mut [u32]) -> i8 {
    let mut sign = 1i8;
    // insertion sort: each swap is a transposition
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// A simplicial complex with a vertex permutation `t` of prime order `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpComplex {
    pub complex: SimplicialComplex,
    pub p: u64,
    pub action: Vec<u32>,
}

impl ZpComplex {
    /// Builds and validates.
    pub fn new(complex: SimplicialComplex, p: u64, action: Vec<u32>) -> Result<Self, ComplexError> {
        let z = ZpComplex { complex, p, action };
        z.validate()?;
        Ok(z)
    }

    /// Closes `facets` under the action before building.
    pub fn from_orbit_facets(
        vertex_count: u32,
        p: u64,
        action: Vec<u32>,
        facets: &[Vec<u32>],
    ) -> Result<Self, ComplexError> {
        if action.len() != vertex_count as usize {
            return Err(ComplexError::ActionLength {
                len: action.len(),
                expected: vertex_count as usize,
            });
        }
        let mut all = Vec::new();
        for f in facets {
            let mut cur = f.clone();
            for _ in 0..p {
                all.push(cur.clone());
                cur = cur.iter().map(|&v| action[v as usize]).collect();
            }
        }
        let complex = SimplicialComplex::from_facets(vertex_count, &all)?;
        Self::new(complex, p, action)
    }

    pub fn image(&self, s: &[u32]) -> Vec<u32> {
        s.iter().map(|&v| self.action[v as usize]).collect()
    }

    /// Checks primality, permutation, order p, simpliciality and simplicity.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let n = self.complex.vertex_count() as usize;
        if !is_prime(self.p) {
            return Err(ComplexError::NotPrime(self.p));
        }
        if self.action.len() != n {
            return Err(ComplexError::ActionLength {
                len: self.action.len(),
                expected: n,
            });
        }
        let mut seen = vec![false; n];
        for &v in &self.action {
            if v as usize >= n || seen[v as usize] {
                return Err(ComplexError::NotPermutation);
            }
            seen[v as usize] = true;
        }
        for v in 0..n as u32 {
            let mut w = v;
            for _ in 0..self.p {
                w = self.action[w as usize];
            }
            if w != v {
                return Err(ComplexError::NotOrderP {
                    vertex: v,
                    image: w,
                });
            }
        }
        for k in 0..=self.complex.dim() {
            for s in self.complex.simplices(k) {
                let mut img = self.image(s);
                img.sort_unstable();
                if !self.complex.contains(&img) {
                    return Err(ComplexError::NotSimplicial {
                        simplex: s.clone(),
                        image: img,
                    });
                }
                // with p prime, a simplex fixed by some t^k (0<k<p) is fixed by t
                if img == *s {
                    return Err(ComplexError::FixedSimplex {
                        simplex: s.clone(),
                        power: 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Chain complex with standard signs and the signed action from re-sorting.
    pub fn to_free(&self) -> FreeZpChainComplex {
        let cx = &self.complex;
        let boundary = cx.boundary_columns();
        let mut labels = Vec::new();
        let mut action = Vec::new();
        for k in -1..=cx.dim() {
            labels.push(cx.simplices(k).iter().map(|s| simplex_label(s)).collect());
            let act: Vec<(u32, i8)> = cx
                .simplices(k)
                .iter()
                .map(|s| {
                    let mut img = self.image(s);
                    let sign = sort_with_sign(&mut img);
                    (cx.index_of(&img).expect("validated") as u32, sign)
                })
                .collect();
            action.push(act);
        }
        FreeZpChainComplex {
            p: self.p,
            labels,
            boundary,
            action,
        }
    }
}

pub fn simplex_label(s: &[u32]) -> String {
    if s.is_empty() {
        "()".to_string()
    } else {
        let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Graded free chain complex in dimensions -1..=D with a signed basis action.
///
/// `boundary[k + 1][i]` is the boundary of basis cell i of dimension k as a
/// sorted list of (face index, coefficient). `action[k + 1][i] = (j, e)` means
/// t(cell i) = e * cell j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeZpChainComplex {
    pub p: u64,
    pub labels: Vec<Vec<String>>,
    pub boundary: Vec<Vec<Vec<(u32, Int)>>>,
    pub action: Vec<Vec<(u32, i8)>>,
}

impl FreeZpChainComplex {
    pub fn dim(&self) -> i32 {
        self.labels.len() as i32 - 2
    }

    pub fn count(&self, k: i32) -> usize {
        if k < -1 || k > self.dim() {
            0
        } else {
            self.labels[(k + 1) as usize].len()
        }
    }

    pub fn boundary_of(&self, k: i32, i: usize) -> &[(u32, Int)] {
        &self.boundary[(k + 1) as usize][i]
    }

    pub fn act(&self, k: i32, i: usize) -> (u32, i8) {
        self.action[(k + 1) as usize][i]
    }

    /// Total number of stored boundary entries, a size measure.
    pub fn nnz(&self) -> usize {
        self.boundary.iter().flatten().map(|c| c.len()).sum()
    }

    /// ∂∂ = 0, t∂ = ∂t, t^p = id with signs, and freeness in dims >= 0.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let bad = |m: String| Err(ComplexError::Chain(m));
        if !is_prime(self.p) {
            return Err(ComplexError::NotPrime(self.p));
        }
        if self.labels.is_empty() || self.labels[0].len() != 1 {
            return bad("dimension -1 must hold exactly one cell".into());
        }
        for k in -1..=self.dim() {
            let n = self.count(k);
            if self.boundary[(k + 1) as usize].len() != n
                || self.action[(k + 1) as usize].len() != n
            {
                return bad(format!("dimension {k} has inconsistent sizes"));
            }
            for i in 0..n {
                // t^p = id including sign; free in dims >= 0
                let (mut j, mut e) = (i as u32, 1i8);
                for step in 1..=self.p {
                    let (nj, ne) = self.act(k, j as usize);
                    j = nj;
                    e *= ne;
                    if step < self.p && k >= 0 && j as usize == i {
                        return bad(format!(
                            "cell {} of dimension {k} fixed by t^{step}",
                            self.labels[(k + 1) as usize][i]
                        ));
                    }
                }
                if j as usize != i || e != 1 {
                    return bad(format!(
                        "t^p is not the identity on cell {i} of dimension {k}"
                    ));
                }
                for (f, _) in self.boundary_of(k, i) {
                    if *f as usize >= self.count(k - 1) {
                        return bad(format!("boundary index out of range in dimension {k}"));
                    }
                }
            }
            for i in 0..n {
                let c = Chain::basis(k, i);
                let bb = self.boundary(&self.boundary(&c));
                if !bb.is_zero() {
                    return bad(format!(
                        "boundary of boundary nonzero on cell {i} of dimension {k}"
                    ));
                }
                let lhs = self.boundary(&self.t_chain(&c, 1));
                let rhs = self.t_chain(&self.boundary(&c), 1);
                if lhs != rhs {
                    return bad(format!(
                        "action does not commute with boundary on cell {i} of dimension {k}"
                    ));
                }
            }
        }
        Ok(())
    }

    // ---- chains ----

    pub fn boundary(&self, c: &Chain) -> Chain {
        let mut out = Chain::zero(c.dim - 1);
        if c.dim < 0 {
            return out;
        }
        for (&i, a) in &c.coeffs {
            for (f, b) in self.boundary_of(c.dim, i) {
                out.add_term(*f as usize, &(a * b));
            }
        }
        out
    }

    /// t^k on a chain (k may be any integer; reduced mod p).
    pub fn t_chain(&self, c: &Chain, k: i64) -> Chain {
        let k = k.rem_euclid(self.p as i64) as u64;
        let mut out = c.clone();
        for _ in 0..k {
            let mut next = Chain::zero(c.dim);
            for (&i, a) in &out.coeffs {
                let (j, e) = self.act(c.dim, i);
                next.add_term(j as usize, &(a * &Int::from(e as i64)));
            }
            out = next;
        }
        out
    }

    /// s_q = 1 + t + ... + t^q on a chain; s_{p-1} = s.
    pub fn sq_chain(&self, c: &Chain, q: u64) -> Chain {
        let mut acc = Chain::zero(c.dim);
        let mut cur = c.clone();
        for _ in 0..=q {
            acc = acc.add(&cur);
            cur = self.t_chain(&cur, 1);
        }
        acc
    }

    pub fn s_chain(&self, c: &Chain) -> Chain {
        self.sq_chain(c, self.p - 1)
    }

    pub fn d_chain(&self, c: &Chain) -> Chain {
        c.sub(&self.t_chain(c, 1))
    }

    // ---- cochains ----

    /// δφ(σ) = φ(∂σ).
    pub fn coboundary(&self, phi: &Cochain) -> Cochain {
        let k = phi.dim + 1;
        let mut out = Cochain::zero(k);
        if k > self.dim() {
            return out;
        }
        for i in 0..self.count(k) {
            let mut v = Int::ZERO;
            for (f, b) in self.boundary_of(k, i) {
                if let Some(a) = phi.values.get(&(*f as usize)) {
                    v += a * b;
                }
            }
            out.set(i, v);
        }
        out
    }

    /// (t^♯)^k φ, where (t^♯φ)(σ) = φ(t_♯σ).
    pub fn t_cochain(&self, phi: &Cochain, k: i64) -> Cochain {
        let k = k.rem_euclid(self.p as i64) as u64;
        let mut out = phi.clone();
        for _ in 0..k {
            let mut next = Cochain::zero(phi.dim);
            for i in 0..self.count(phi.dim) {
                let (j, e) = self.act(phi.dim, i);
                if let Some(a) = out.values.get(&(j as usize)) {
                    next.set(i, a * &Int::from(e as i64));
                }
            }
            out = next;
        }
        out
    }

    pub fn sq_cochain(&self, phi: &Cochain, q: u64) -> Cochain {
        let mut acc = Cochain::zero(phi.dim);
        let mut cur = phi.clone();
        for _ in 0..=q {
            acc = acc.add(&cur);
            cur = self.t_cochain(&cur, 1);
        }
        acc
    }

    pub fn s_cochain(&self, phi: &Cochain) -> Cochain {
        self.sq_cochain(phi, self.p - 1)
    }

    pub fn d_cochain(&self, phi: &Cochain) -> Cochain {
        phi.sub(&self.t_cochain(phi, 1))
    }

    /// The unit cocycle: value 1 on every vertex cell.
    pub fn unit_cochain(&self) -> Cochain {
        let mut c = Cochain::zero(0);
        for i in 0..self.count(0) {
            c.set(i, Int::ONE);
        }
        c
    }
}

/// Sparse integer chain in a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    pub dim: i32,
    pub coeffs: BTreeMap<usize, Int>,
}

/// Sparse integer cochain in a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cochain {
    pub dim: i32,
    pub values: BTreeMap<usize, Int>,
}

macro_rules! sparse_common {
    ($t:ident, $field:ident) => {
        impl $t {
            pub fn zero(dim: i32) -> Self {
                $t {
                    dim,
                    $field: BTreeMap::new(),
                }
            }

            pub fn basis(dim: i32, i: usize) -> Self {
                let mut c = Self::zero(dim);
                c.set(i, Int::ONE);
                c
            }

            pub fn from_dense(dim: i32, v: &[Int]) -> Self {
                let mut c = Self::zero(dim);
                for (i, a) in v.iter().enumerate() {
                    c.set(i, a.clone());
                }
                c
            }

            pub fn to_dense(&self, n: usize) -> Vec<Int> {
                let mut v = vec![Int::ZERO; n];
                for (&i, a) in &self.$field {
                    v[i] = a.clone();
                }
                v
            }

            pub fn get(&self, i: usize) -> Int {
                self.$field.get(&i).cloned().unwrap_or(Int::ZERO)
            }

            pub fn set(&mut self, i: usize, a: Int) {
                if a.is_zero() {
                    self.$field.remove(&i);
                } else {
                    self.$field.insert(i, a);
                }
            }

            pub fn add_term(&mut self, i: usize, a: &Int) {
                let v = self.get(i) + a;
                self.set(i, v);
            }

            pub fn is_zero(&self) -> bool {
                self.$field.is_empty()
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.dim, other.dim);
                let mut out = self.clone();
                for (&i, a) in &other.$field {
                    out.add_term(i, a);
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(&Int::from(-1)))
            }

            pub fn scale(&self, a: &Int) -> Self {
                let mut out = Self::zero(self.dim);
                for (&i, b) in &self.$field {
                    out.set(i, a * b);
                }
                out
            }

            /// All coefficients divisible by `n`.
            pub fn is_zero_mod(&self, n: &Int) -> bool {
                self.$field.values().all(|a| a.is_divisible_by(n))
            }

            pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
                self.$field.keys().copied()
            }
        }
    };
}

sparse_common!(Chain, coeffs);
sparse_common!(Cochain, values);

impl Cochain {
    /// φ(c); zero if dimensions differ.
    pub fn eval(&self, c: &Chain) -> Int {
        if self.dim != c.dim {
            return Int::ZERO;
        }
        let mut acc = Int::ZERO;
        for (i, a) in &c.coeffs {
            if let Some(b) = self.values.get(i) {
                acc += a * b;
            }
        }
        acc
    }
}

/// Orbit bookkeeping for one dimension of a free complex.
///
/// Orbit `o` has representative `reps[o]` (its lowest basis index) and
/// `members[o][k] = (i, e)` with t^k(rep) = e * cell i. `locate[i] = (o, k, e)`
/// inverts this: cell i = e * t^k(rep of o).
#[derive(Debug, Clone)]
pub struct OrbitLevel {
    pub reps: Vec<u32>,
    pub members: Vec<Vec<(u32, i8)>>,
    pub locate: Vec<(u32, u32, i8)>,
}

impl OrbitLevel {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Boundary of an orbit representative expressed in orbit coordinates:
/// ∂(rep o) = Σ coef · t^shift(rep of face orbit).
#[derive(Debug, Clone)]
pub struct OrbitFace {
    pub orbit: u32,
    pub shift: u32,
    pub coef: Int,
}

/// Orbit decomposition of all dimensions >= 0 and orbit-coordinate boundaries.
#[derive(Debug, Clone)]
pub struct Orbits {
    pub p: u64,
    pub levels: Vec<OrbitLevel>,
    /// `faces[k][o]`: boundary of the representative of orbit o in dimension k >= 1.
    pub faces: Vec<Vec<Vec<OrbitFace>>>,
    /// Coefficient of the empty cell in the boundary of each vertex-orbit representative.
    pub augmentation: Vec<Int>,
}

impl Orbits {
    pub fn new(x: &FreeZpChainComplex) -> Self {
        let p = x.p as usize;
        let mut levels = Vec::new();
        for k in 0..=x.dim() {
            let n = x.count(k);
            let mut locate = vec![(u32::MAX, 0u32, 0i8); n];
            let mut reps = Vec::new();
            let mut members = Vec::new();
            for i in 0..n {
                if locate[i].0 != u32::MAX {
                    continue;
                }
                let o = reps.len() as u32;
                reps.push(i as u32);
                let mut mem = Vec::with_capacity(p);
                let (mut j, mut e) = (i as u32, 1i8);
                for step in 0..p {
                    mem.push((j, e));
                    locate[j as usize] = (o, step as u32, e);
                    let (nj, ne) = x.act(k, j as usize);
                    j = nj;
                    e *= ne;
                }
                members.push(mem);
            }
            levels.push(OrbitLevel {
                reps,
                members,
                locate,
            });
        }
        let mut faces = vec![Vec::new()];
        for k in 1..=x.dim() {
            let lv = &levels[k as usize];
            let below = &levels[(k - 1) as usize];
            let f: Vec<Vec<OrbitFace>> = lv
                .reps
                .iter()
                .map(|&r| {
                    x.boundary_of(k, r as usize)
                        .iter()
                        .map(|(f, c)| {
                            let (o, sh, e) = below.locate[*f as usize];
                            OrbitFace {
                                orbit: o,
                                shift: sh,
                                coef: c * &Int::from(e as i64),
                            }
                        })
                        .collect()
                })
                .collect();
            faces.push(f);
        }
        let augmentation = if x.dim() >= 0 {
            levels[0]
                .reps
                .iter()
                .map(|&r| {
                    x.boundary_of(0, r as usize)
                        .iter()
                        .map(|(_, c)| c.clone())
                        .sum()
                })
                .collect()
        } else {
            Vec::new()
        };
        Orbits {
            p: x.p,
            levels,
            faces,
            augmentation,
        }
    }

    pub fn dim(&self) -> i32 {
        self.levels.len() as i32 - 1
    }

    pub fn orbit_count(&self, k: i32) -> usize {
        if k < 0 || k > self.dim() {
            0
        } else {
            self.levels[k as usize].len()
        }
    }

    /// Orbit coordinates of a dense cochain: `a[o * p + k] = φ(t^k rep_o)`.
    pub fn to_orbit_coords(&self, k: i32, phi: &[Int]) -> Vec<Int> {
        let p = self.p as usize;
        let lv = &self.levels[k as usize];
        let mut a = vec![Int::ZERO; lv.len() * p];
        for (o, mem) in lv.members.iter().enumerate() {
            for (step, &(i, e)) in mem.iter().enumerate() {
                let v = &phi[i as usize];
                a[o * p + step] = if e > 0 { v.clone() } else { -v };
            }
        }
        a
    }

    /// Inverse of [`to_orbit_coords`](Self::to_orbit_coords).
    pub fn from_orbit_coords(&self, k: i32, a: &[Int]) -> Vec<Int> {
        let p = self.p as usize;
        let lv = &self.levels[k as usize];
        let n = lv.locate.len();
        let mut phi = vec![Int::ZERO; n];
        for (o, mem) in lv.members.iter().enumerate() {
            for (step, &(i, e)) in mem.iter().enumerate() {
                let v = &a[o * p + step];
                phi[i as usize] = if e > 0 { v.clone() } else { -v };
            }
        }
        phi
    }

    /// δ in orbit coordinates, from dimension k to k + 1 (k >= 0).
    pub fn coboundary_coords(&self, k: i32, a: &[Int]) -> Vec<Int> {
        let p = self.p as usize;
        let up = k + 1;
        if up > self.dim() {
            return Vec::new();
        }
        let faces = &self.faces[up as usize];
        let mut out = vec![Int::ZERO; faces.len() * p];
        for (o, fl) in faces.iter().enumerate() {
            for step in 0..p {
                let mut v = Int::ZERO;
                for f in fl {
                    let idx = f.orbit as usize * p + (step + f.shift as usize) % p;
                    if !a[idx].is_zero() {
                        v += &f.coef * &a[idx];
                    }
                }
                out[o * p + step] = v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0() -> ZpComplex {
        let cx = SimplicialComplex::from_facets(2, &[vec![0], vec![1]]).unwrap();
        ZpComplex::new(cx, 2, vec![1, 0]).unwrap()
    }

    fn square() -> ZpComplex {
        // vertices 1..4 of the usual picture become 0..3; t = (13)(24)
        let facets = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let cx = SimplicialComplex::from_facets(4, &facets).unwrap();
        ZpComplex::new(cx, 2, vec![2, 3, 0, 1]).unwrap()
    }

    #[test]
    fn closure_of_an_edge() {
        let cx = SimplicialComplex::from_facets(2, &[vec![0, 1]]).unwrap();
        assert_eq!(cx.count(-1), 1);
        assert_eq!(cx.simplices(0), &[vec![0], vec![1]]);
        assert_eq!(cx.simplices(1), &[vec![0, 1]]);
        assert_eq!(cx.dim(), 1);
    }

    #[test]
    fn empty_complex_has_only_the_empty_simplex() {
        let cx = SimplicialComplex::from_facets(0, &[]).unwrap();
        assert_eq!(cx.dim(), -1);
        assert_eq!(cx.count(-1), 1);
    }

    #[test]
    fn two_skeleton_of_six_simplex_counts() {
        let mut f = Vec::new();
        for a in 0..7u32 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    f.push(vec![a, b, c]);
                }
            }
        }
        let cx = SimplicialComplex::from_facets(7, &f).unwrap();
        assert_eq!((cx.count(0), cx.count(1), cx.count(2)), (7, 21, 35));
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(matches!(
            SimplicialComplex::from_facets(3, &[vec![0, 0, 1]]),
            Err(ComplexError::RepeatedVertex(_))
        ));
    }

    #[test]
    fn validation_cases() {
        s0().validate().unwrap();
        let tri = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        let err = ZpComplex::new(tri, 2, vec![1, 0, 2]).unwrap_err();
        assert!(matches!(err, ComplexError::FixedSimplex { .. }));
        let hex: Vec<Vec<u32>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        let cx = SimplicialComplex::from_facets(6, &hex).unwrap();
        ZpComplex::new(cx, 2, (0..6).map(|i| (i + 3) % 6).collect()).unwrap();
    }

    #[test]
    fn s0_chain_complex() {
        let x = s0().to_free();
        assert_eq!(x.dim(), 0);
        assert_eq!(x.boundary_of(0, 0), &[(0, Int::ONE)]);
        assert_eq!(x.act(0, 0), (1, 1));
        x.validate().unwrap();
    }

    #[test]
    fn square_action_signs() {
        let z = square();
        let x = z.to_free();
        let e = |s: &[u32]| z.complex.index_of(s).unwrap();
        // [12] -> +[34], [23] -> -[14] in 1-based labels
        assert_eq!(x.act(1, e(&[0, 1])), (e(&[2, 3]) as u32, 1));
        assert_eq!(x.act(1, e(&[1, 2])), (e(&[0, 3]) as u32, -1));
        x.validate().unwrap();
    }

    #[test]
    fn operator_relations() {
        let x = square().to_free();
        let mut c = Chain::zero(1);
        c.set(0, Int::from(3));
        c.set(2, Int::from(-5));
        assert!(x.s_chain(&x.d_chain(&c)).is_zero());
        assert!(x.d_chain(&x.s_chain(&c)).is_zero());
        // p = 2: d ≡ s mod 2
        let diff = x.d_chain(&c).sub(&x.s_chain(&c));
        assert!(diff.is_zero_mod(&Int::from(2)));
        assert_eq!(x.boundary(&x.d_chain(&c)), x.d_chain(&x.boundary(&c)));
        let phi = Cochain::from_dense(1, &[1, 2, 3, 4].map(Int::from));
        assert!(x.s_cochain(&x.d_cochain(&phi)).is_zero());
        // (t^♯φ)(c) = φ(t_♯ c)
        assert_eq!(x.t_cochain(&phi, 1).eval(&c), phi.eval(&x.t_chain(&c, 1)));
    }

    #[test]
    fn sq_on_three_points() {
        let cx = SimplicialComplex::from_facets(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let x = ZpComplex::new(cx, 3, vec![1, 2, 0]).unwrap().to_free();
        let c = Chain::basis(0, 0);
        let s1 = x.sq_chain(&c, 1);
        assert_eq!(s1, c.add(&x.t_chain(&c, 1)));
        assert_eq!(x.sq_chain(&c, 2), x.s_chain(&c));
    }

    #[test]
    fn orbit_coordinates_roundtrip_and_coboundary() {
        let x = square().to_free();
        let orb = Orbits::new(&x);
        assert_eq!(orb.orbit_count(0), 2);
        assert_eq!(orb.orbit_count(1), 2);
        let phi: Vec<Int> = [5, -1, 2, 7].map(Int::from).to_vec();
        let a = orb.to_orbit_coords(0, &phi);
        assert_eq!(orb.from_orbit_coords(0, &a), phi);
        let direct = x.coboundary(&Cochain::from_dense(0, &phi)).to_dense(4);
        let via = orb.from_orbit_coords(1, &orb.coboundary_coords(0, &a));
        assert_eq!(direct, via);
    }

    #[test]
    fn sort_sign() {
        let mut v = vec![3, 0];
        assert_eq!(sort_with_sign(&mut v), -1);
        let mut w = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut w), 1);
        assert_eq!(w, vec![0, 1, 2]);
    }
}
