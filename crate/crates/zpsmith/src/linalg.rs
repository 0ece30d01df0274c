//! Exact sparse integer linear algebra.
//!
//! The workhorse is [`diagonalize`]: unimodular row and column operations
//! bring a sparse matrix `A` to a matrix with at most one nonzero entry per
//! row and column, `R·A·C = M`. Row operations are logged so that rows of `R`
//! can be recovered later (certificates), column operations are optionally
//! logged so that `C·y` can be formed (witnesses), and right-hand sides can be
//! carried along. Everything can run over Z or over Z/n.
//!
//! Pivoting first takes ±1 entries by a Markowitz-style rule (sparsest column,
//! then shortest row) and falls back to Euclidean reduction on the smallest
//! entry in absolute value. Ties go to the lowest (row, column) index.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::int::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("estimated matrix storage {needed} bytes exceeds the memory cap of {cap} bytes")]
    MemoryCap { needed: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus must be at least 2, got {0}")]
    Modulus(Int),
}

/// Sparse integer matrix stored by rows; each row is sorted by column and
/// holds no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, Int)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i as u32, Int::ONE));
        }
        m
    }

    /// Builds from (row, col, value) triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        trips: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in trips {
            assert!(
                r < rows && c < cols,
                "triplet ({r},{c}) out of range {rows}x{cols}"
            );
            m.data[r].push((c as u32, v));
        }
        for row in &mut m.data {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, Int)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        m
    }

    /// Builds from sparse rows, which must already be sorted and zero-free.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(u32, Int)>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(rows
            .iter()
            .flatten()
            .all(|e| !e.1.is_zero() && (e.0 as usize) < cols));
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_dense(dense: &[Vec<Int>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(dense.len(), cols);
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].push((c as u32, v.clone()));
                }
            }
        }
        m
    }

    pub fn from_i64(dense: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<Int>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| Int::from(v)).collect())
            .collect();
        Self::from_dense(&d)
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::ZERO; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[r][*c as usize] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(u32, Int)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        match self.data[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c as usize].push((r as u32, v.clone()));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        let mut acc: Vec<Int> = vec![Int::ZERO; other.cols];
        let mut touched: Vec<u32> = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.data[*k as usize] {
                    if acc[*c as usize].is_zero() {
                        touched.push(*c);
                    }
                    acc[*c as usize] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &c in &touched {
                let v = std::mem::take(&mut acc[c as usize]);
                if !v.is_zero() {
                    out.data[r].push((c, v));
                }
            }
            touched.clear();
        }
        out
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(
            x.len(),
            self.cols,
            "vector length differs from column count"
        );
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, v)| v * &x[*c as usize]).sum())
            .collect()
    }

    /// x^T · A.
    pub fn vec_mul(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.rows, "vector length differs from row count");
        let mut out = vec![Int::ZERO; self.cols];
        for (r, row) in self.data.iter().enumerate() {
            if x[r].is_zero() {
                continue;
            }
            for (c, v) in row {
                out[*c as usize] += v * &x[r];
            }
        }
        out
    }
}

/// One logged elementary operation: line `target` += `q` · line `source`.
#[derive(Debug, Clone)]
pub struct ElemOp {
    pub target: u32,
    pub source: u32,
    pub q: Int,
}

/// Settings for [`diagonalize`].
#[derive(Debug, Clone, Default)]
pub struct EliminationOptions {
    /// Work over Z/modulus instead of Z.
    pub modulus: Option<Int>,
    /// Keep the row-operation log (needed for rows of R).
    pub log_rows: bool,
    /// Keep the column-operation log (needed for C·y).
    pub log_cols: bool,
    /// Abort when the estimated storage exceeds this many bytes.
    pub memory_cap: Option<usize>,
}

/// Output of [`diagonalize`]: R·A·C = M with M having the entries `pivots`.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub rows: usize,
    pub cols: usize,
    pub modulus: Option<Int>,
    /// (row, col, value) of the surviving entries of M, in pivot order.
    pub pivots: Vec<(u32, u32, Int)>,
    /// Right-hand sides after the row operations, R·b.
    pub rhs: Vec<Vec<Int>>,
    pub row_ops: Vec<ElemOp>,
    pub col_ops: Vec<ElemOp>,
    /// Largest estimated storage seen, in bytes.
    pub peak_bytes: usize,
    pivot_of_row: Vec<u32>,
    cols_logged: bool,
}

const NONE: u32 = u32::MAX;

fn entry_bytes(v: &Int) -> usize {
    match v {
        Int::Small(_) => 24,
        Int::Big(_) => 32 + (v.bits() as usize).div_ceil(8),
    }
}

struct Eliminator {
    rows: Vec<Vec<(u32, Int)>>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    row_active: Vec<bool>,
    col_active: Vec<bool>,
    deferred: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    modulus: Option<Int>,
    rhs: Vec<Vec<Int>>,
    log_rows: bool,
    log_cols: bool,
    row_ops: Vec<ElemOp>,
    col_ops: Vec<ElemOp>,
    pivots: Vec<(u32, u32, Int)>,
    bytes: usize,
    peak: usize,
    cap: Option<usize>,
}

impl Eliminator {
    fn reduce(&self, v: Int) -> Int {
        match &self.modulus {
            Some(n) => v.mod_symmetric(n),
            None => v,
        }
    }

    fn charge(&mut self, add: usize, remove: usize) -> Result<(), LinalgError> {
        self.bytes = self.bytes + add - remove.min(self.bytes + add);
        if self.bytes > self.peak {
            self.peak = self.bytes;
            if let Some(cap) = self.cap {
                if self.peak > cap {
                    return Err(LinalgError::MemoryCap {
                        needed: self.peak,
                        cap,
                    });
                }
            }
        }
        Ok(())
    }

    fn entry(&self, r: usize, c: u32) -> Option<&Int> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|i| &row[i].1)
    }

    fn touch_col(&mut self, c: u32) {
        if self.col_active[c as usize] {
            self.deferred[c as usize] = false;
            self.heap.push(Reverse((self.col_count[c as usize], c)));
        }
    }

    /// row t += q · row s.
    fn row_axpy(&mut self, t: usize, s: usize, q: &Int) -> Result<(), LinalgError> {
        if q.is_zero() {
            return Ok(());
        }
        let src = std::mem::take(&mut self.rows[s]);
        let dst = std::mem::take(&mut self.rows[t]);
        let mut out: Vec<(u32, Int)> = Vec::with_capacity(dst.len() + src.len());
        let (mut old_bytes, mut new_bytes) = (0usize, 0usize);
        let mut changed: Vec<u32> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let ord = match (dst.get(i), src.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    out.push(dst[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (c, b) = &src[j];
                    let v = self.reduce(q * b);
                    if !v.is_zero() {
                        new_bytes += entry_bytes(&v);
                        self.col_count[*c as usize] += 1;
                        self.col_rows[*c as usize].push(t as u32);
                        changed.push(*c);
                        out.push((*c, v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let (c, a) = &dst[i];
                    let v = self.reduce(a + &(q * &src[j].1));
                    old_bytes += entry_bytes(a);
                    changed.push(*c);
                    if v.is_zero() {
                        self.col_count[*c as usize] -= 1;
                    } else {
                        new_bytes += entry_bytes(&v);
                        out.push((*c, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        self.rows[s] = src;
        self.rows[t] = out;
        for c in changed {
            self.touch_col(c);
        }
        for b in &mut self.rhs {
            let v = &b[t] + &(q * &b[s]);
            b[t] = match &self.modulus {
                Some(n) => v.mod_symmetric(n),
                None => v,
            };
        }
        let mut log_bytes = 0;
        if self.log_rows {
            log_bytes = 16 + entry_bytes(q);
            self.row_ops.push(ElemOp {
                target: t as u32,
                source: s as u32,
                q: q.clone(),
            });
        }
        self.charge(new_bytes + log_bytes, old_bytes)
    }

    /// col t += q · col s, when col s is known to be nonzero only in row r.
    fn col_axpy_single(&mut self, r: usize, t: u32, s: u32, q: &Int) -> Result<(), LinalgError> {
        if q.is_zero() {
            return Ok(());
        }
        let a = self.entry(r, s).cloned().unwrap_or(Int::ZERO);
        let row = &mut self.rows[r];
        let pos = row.binary_search_by_key(&t, |e| e.0);
        let old = match pos {
            Ok(i) => row[i].1.clone(),
            Err(_) => Int::ZERO,
        };
        let v = match &self.modulus {
            Some(n) => (&old + &(q * &a)).mod_symmetric(n),
            None => &old + &(q * &a),
        };
        match (pos, v.is_zero()) {
            (Ok(i), true) => {
                row.remove(i);
                self.col_count[t as usize] -= 1;
            }
            (Ok(i), false) => row[i].1 = v,
            (Err(i), false) => {
                row.insert(i, (t, v));
                self.col_count[t as usize] += 1;
                self.col_rows[t as usize].push(r as u32);
            }
            (Err(_), true) => {}
        }
        self.touch_col(t);
        if self.log_cols {
            self.col_ops.push(ElemOp {
                target: t,
                source: s,
                q: q.clone(),
            });
            return self.charge(16 + entry_bytes(q), 0);
        }
        Ok(())
    }

    /// Live rows holding column c, deduplicated and sorted.
    fn live_rows(&mut self, c: u32) -> Vec<u32> {
        let mut list = std::mem::take(&mut self.col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.row_active[r as usize] && self.entry(r as usize, c).is_some());
        self.col_rows[c as usize] = list.clone();
        list
    }

    fn retire(&mut self, r: usize, c: u32, a: Int) {
        let row = std::mem::take(&mut self.rows[r]);
        debug_assert!(row.len() == 1 && row[0].0 == c);
        for (cc, v) in &row {
            self.col_count[*cc as usize] -= 1;
            self.bytes = self.bytes.saturating_sub(entry_bytes(v));
        }
        self.row_active[r] = false;
        self.col_active[c as usize] = false;
        self.col_rows[c as usize] = Vec::new();
        self.pivots.push((r as u32, c, a));
    }

    /// Eliminates around a ±1 pivot.
    fn unit_pivot(&mut self, r: usize, c: u32) -> Result<(), LinalgError> {
        let u = self.entry(r, c).cloned().expect("pivot present");
        for r2 in self.live_rows(c) {
            if r2 as usize == r {
                continue;
            }
            let b = self.entry(r2 as usize, c).cloned().expect("live");
            self.row_axpy(r2 as usize, r, &-(&b * &u))?;
        }
        let others: Vec<(u32, Int)> = self.rows[r].iter().filter(|e| e.0 != c).cloned().collect();
        for (c2, b) in others {
            self.col_axpy_single(r, c2, c, &-(&b * &u))?;
        }
        self.retire(r, c, u);
        Ok(())
    }

    /// Euclidean pivoting starting from (r, c) until row and column are clean.
    fn general_pivot(&mut self, mut r: usize, mut c: u32) -> Result<(), LinalgError> {
        loop {
            let a = self.entry(r, c).cloned().expect("pivot present");
            // clear the column
            let mut best: Option<(u32, Int)> = None;
            for r2 in self.live_rows(c) {
                if r2 as usize == r {
                    continue;
                }
                let b = self.entry(r2 as usize, c).cloned().expect("live");
                let q = b.div_round(&a);
                self.row_axpy(r2 as usize, r, &-q)?;
                if let Some(rem) = self.entry(r2 as usize, c) {
                    if best
                        .as_ref()
                        .is_none_or(|(_, bv)| rem.cmp_abs(bv) == Ordering::Less)
                    {
                        best = Some((r2, rem.clone()));
                    }
                }
            }
            if let Some((r2, _)) = best {
                r = r2 as usize;
                continue;
            }
            // clear the row; column c now holds only row r
            let others: Vec<(u32, Int)> =
                self.rows[r].iter().filter(|e| e.0 != c).cloned().collect();
            let mut best: Option<(u32, Int)> = None;
            for (c2, b) in others {
                let q = b.div_round(&a);
                self.col_axpy_single(r, c2, c, &-q)?;
                if let Some(rem) = self.entry(r, c2) {
                    if best
                        .as_ref()
                        .is_none_or(|(_, bv)| rem.cmp_abs(bv) == Ordering::Less)
                    {
                        best = Some((c2, rem.clone()));
                    }
                }
            }
            match best {
                Some((c2, _)) => c = c2,
                None => {
                    self.retire(r, c, a);
                    return Ok(());
                }
            }
        }
    }

    /// Pops the sparsest column with a ±1 entry; returns (row, col).
    fn next_unit(&mut self) -> Option<(usize, u32)> {
        while let Some(Reverse((cnt, c))) = self.heap.pop() {
            let ci = c as usize;
            if !self.col_active[ci] || self.deferred[ci] || cnt != self.col_count[ci] {
                continue;
            }
            if cnt == 0 {
                self.col_active[ci] = false;
                continue;
            }
            let mut best: Option<(usize, usize)> = None;
            for r in self.live_rows(c) {
                let ri = r as usize;
                if self.entry(ri, c).is_some_and(|v| v.is_unit()) {
                    let len = self.rows[ri].len();
                    if best.is_none_or(|(bl, br)| (len, ri) < (bl, br)) {
                        best = Some((len, ri));
                    }
                }
            }
            match best {
                Some((_, r)) => return Some((r, c)),
                None => self.deferred[ci] = true,
            }
        }
        None
    }

    /// Smallest |entry| over the active part, Markowitz cost and index as ties.
    fn smallest_entry(&self) -> Option<(usize, u32)> {
        let mut best: Option<(Int, u64, usize, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.row_active[r] {
                continue;
            }
            for (c, v) in row {
                let cost =
                    (row.len() as u64 - 1) * (self.col_count[*c as usize] as u64).saturating_sub(1);
                let better = match &best {
                    None => true,
                    Some((bv, bc, br, bcol)) => match v.cmp_abs(bv) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (cost, r, *c) < (*bc, *br, *bcol),
                    },
                };
                if better {
                    best = Some((v.abs(), cost, r, *c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn run(&mut self) -> Result<(), LinalgError> {
        loop {
            while let Some((r, c)) = self.next_unit() {
                self.unit_pivot(r, c)?;
            }
            match self.smallest_entry() {
                None => return Ok(()),
                Some((r, c)) => {
                    self.general_pivot(r, c)?;
                    for c in 0..self.col_active.len() as u32 {
                        self.touch_col(c);
                    }
                }
            }
        }
    }
}

/// Diagonalizes `a` by unimodular row and column operations.
pub fn diagonalize(
    a: &IntMatrix,
    rhs: Vec<Vec<Int>>,
    opts: &EliminationOptions,
) -> Result<Diagonalization, LinalgError> {
    if let Some(n) = &opts.modulus {
        if n.cmp(&Int::from(2)) == Ordering::Less {
            return Err(LinalgError::Modulus(n.clone()));
        }
    }
    for b in &rhs {
        if b.len() != a.rows {
            return Err(LinalgError::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                a.rows
            )));
        }
    }
    let mut e = Eliminator {
        rows: Vec::with_capacity(a.rows),
        col_rows: vec![Vec::new(); a.cols],
        col_count: vec![0; a.cols],
        row_active: vec![true; a.rows],
        col_active: vec![true; a.cols],
        deferred: vec![false; a.cols],
        heap: BinaryHeap::new(),
        modulus: opts.modulus.clone(),
        rhs: Vec::new(),
        log_rows: opts.log_rows,
        log_cols: opts.log_cols,
        row_ops: Vec::new(),
        col_ops: Vec::new(),
        pivots: Vec::new(),
        bytes: 0,
        peak: 0,
        cap: opts.memory_cap,
    };
    let mut initial = 0;
    for (r, row) in a.data.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (c, v) in row {
            let v = e.reduce(v.clone());
            if !v.is_zero() {
                initial += entry_bytes(&v);
                e.col_count[*c as usize] += 1;
                e.col_rows[*c as usize].push(r as u32);
                out.push((*c, v));
            }
        }
        e.rows.push(out);
    }
    e.rhs = rhs
        .into_iter()
        .map(|b| b.into_iter().map(|v| e.reduce(v)).collect())
        .collect();
    e.charge(initial, 0)?;
    for c in 0..a.cols as u32 {
        e.touch_col(c);
    }
    e.run()?;
    let mut pivot_of_row = vec![NONE; a.rows];
    for (i, (r, _, _)) in e.pivots.iter().enumerate() {
        pivot_of_row[*r as usize] = i as u32;
    }
    Ok(Diagonalization {
        rows: a.rows,
        cols: a.cols,
        modulus: e.modulus,
        pivots: e.pivots,
        rhs: e.rhs,
        row_ops: e.row_ops,
        col_ops: e.col_ops,
        peak_bytes: e.peak,
        pivot_of_row,
        cols_logged: opts.log_cols,
    })
}

impl Diagonalization {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Row `i` of R, by replaying the row log backwards.
    pub fn r_row(&self, i: usize) -> Vec<Int> {
        let mut u = vec![Int::ZERO; self.rows];
        u[i] = Int::ONE;
        for op in self.row_ops.iter().rev() {
            let ut = &u[op.target as usize];
            if !ut.is_zero() {
                let add = &op.q * ut;
                u[op.source as usize] += add;
            }
        }
        u
    }

    /// C·y, by replaying the column log backwards.
    pub fn apply_c(&self, y: &[Int]) -> Vec<Int> {
        let mut x = y.to_vec();
        for op in self.col_ops.iter().rev() {
            let yt = &x[op.target as usize];
            if !yt.is_zero() {
                let add = &op.q * yt;
                x[op.source as usize] += add;
            }
        }
        x
    }

    /// f^T·C, by replaying the column log forwards.
    pub fn apply_ct(&self, f: &[Int]) -> Vec<Int> {
        let mut g = f.to_vec();
        for op in &self.col_ops {
            let fs = &g[op.source as usize];
            if !fs.is_zero() {
                let add = &op.q * fs;
                g[op.target as usize] += add;
            }
        }
        g
    }

    /// Pivot value in row `r` of M, if any.
    pub fn pivot_in_row(&self, r: usize) -> Option<&(u32, u32, Int)> {
        match self.pivot_of_row[r] {
            NONE => None,
            i => Some(&self.pivots[i as usize]),
        }
    }

    /// Effective modulus for a query: the elimination modulus and the query
    /// modulus must agree (query mod n on a mod-m elimination needs n | m).
    fn check_query(&self, n: Option<&Int>) {
        if let Some(m) = &self.modulus {
            let n = n.expect("a modular elimination answers modular queries only");
            assert!(
                m.is_divisible_by(n),
                "query modulus {n} does not divide elimination modulus {m}"
            );
        }
    }

    /// Rows where right-hand side `k` obstructs solvability mod n (or over Z),
    /// with the gcd g that the entry fails to be divisible by (None over Z for
    /// zero rows).
    pub fn obstructions(&self, k: usize, n: Option<&Int>) -> Vec<(usize, Int)> {
        self.check_query(n);
        let w = &self.rhs[k];
        let mut out = Vec::new();
        for (r, wr) in w.iter().enumerate() {
            let g = match (self.pivot_in_row(r), n) {
                (Some((_, _, d)), Some(n)) => d.gcd(n),
                (Some((_, _, d)), None) => d.abs(),
                (None, Some(n)) => n.clone(),
                (None, None) => Int::ZERO,
            };
            if !wr.is_divisible_by(&g) {
                out.push((r, g));
            }
        }
        out
    }

    /// Whether right-hand side `k` lies in the image of A (mod n).
    pub fn in_image(&self, k: usize, n: Option<&Int>) -> bool {
        self.obstructions(k, n).is_empty()
    }

    /// A solution x of A·x = b_k (mod n), or None. Requires the column log.
    pub fn witness(&self, k: usize, n: Option<&Int>) -> Option<Vec<Int>> {
        if !self.in_image(k, n) {
            return None;
        }
        assert!(self.cols_logged, "witness needs the column log");
        let w = &self.rhs[k];
        let mut y = vec![Int::ZERO; self.cols];
        for (r, c, d) in &self.pivots {
            let wr = &w[*r as usize];
            if wr.is_zero() {
                continue;
            }
            y[*c as usize] = match n {
                None => wr.div_exact(d),
                Some(n) => {
                    let g = d.gcd(n);
                    let nn = n.div_exact(&g);
                    if nn.is_one() {
                        Int::ZERO
                    } else {
                        let inv = d
                            .div_exact(&g)
                            .inv_mod(&nn)
                            .expect("coprime after dividing gcd");
                        (&wr.div_exact(&g) * &inv).mod_floor(&nn)
                    }
                }
            };
        }
        let x = self.apply_c(&y);
        Some(match n {
            Some(n) => x.into_iter().map(|v| v.mod_floor(n)).collect(),
            None => x,
        })
    }

    /// A vector c with c^T·A ≡ 0 and c·b_k ≢ 0 (mod n), or None if b_k lies
    /// in the image mod n. Requires the row log.
    pub fn dual_certificate(&self, k: usize, n: &Int) -> Option<Vec<Int>> {
        let obs = self.obstructions(k, Some(n));
        // prefer the obstruction with the largest multiplier-free gcd, then lowest row
        let (r, g) = obs
            .into_iter()
            .min_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)))?;
        let scale = n.div_exact(&g);
        let mut c = self.r_row(r);
        for v in &mut c {
            *v = (&*v * &scale).mod_floor(n);
        }
        Some(c)
    }
}

/// D = V·S·U with U, V unimodular and S diagonal with s_1 | s_2 | ... .
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal of S (length min(rows, cols)).
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i)).collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diagonal()
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect()
    }
}

/// Turns a list of nonzero diagonal entries into a divisibility chain of
/// positive values with the same product and gcd structure.
pub fn divisibility_chain(mut d: Vec<Int>) -> Vec<Int> {
    for v in &mut d {
        *v = v.abs();
    }
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            if !d[j].is_divisible_by(&d[i]) {
                let g = d[i].gcd(&d[j]);
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Nonzero invariant factors of `a` without forming U and V.
pub fn invariant_factors(a: &IntMatrix) -> Vec<Int> {
    let diag = diagonalize(a, Vec::new(), &EliminationOptions::default()).expect("no cap");
    divisibility_chain(diag.pivots.into_iter().map(|p| p.2).collect())
}

/// Smith normal form with unimodular transforms.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let opts = EliminationOptions {
        log_rows: true,
        log_cols: true,
        ..Default::default()
    };
    let diag = diagonalize(a, Vec::new(), &opts).expect("no cap");
    let (m, n) = (a.rows, a.cols);
    // V' = R^{-1}: start from I, right-multiply by inverse row ops in order
    let mut v = vec![vec![Int::ZERO; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Int::ONE;
    }
    for op in &diag.row_ops {
        // column source -= q * column target
        let (t, s) = (op.target as usize, op.source as usize);
        for row in v.iter_mut() {
            if !row[t].is_zero() {
                let d = &op.q * &row[t];
                row[s] -= d;
            }
        }
    }
    // U' = C^{-1}: start from I, left-multiply by inverse column ops in order
    let mut u = vec![vec![Int::ZERO; n]; n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = Int::ONE;
    }
    for op in &diag.col_ops {
        // row source -= q * row target
        let (t, s) = (op.target as usize, op.source as usize);
        let tr = u[t].clone();
        for (x, y) in u[s].iter_mut().zip(&tr) {
            if !y.is_zero() {
                *x -= &op.q * y;
            }
        }
    }
    // permute pivots to the leading diagonal
    let mut row_order: Vec<usize> = diag.pivots.iter().map(|p| p.0 as usize).collect();
    let mut col_order: Vec<usize> = diag.pivots.iter().map(|p| p.1 as usize).collect();
    let mut used_r = vec![false; m];
    let mut used_c = vec![false; n];
    for &r in &row_order {
        used_r[r] = true;
    }
    for &c in &col_order {
        used_c[c] = true;
    }
    row_order.extend((0..m).filter(|&r| !used_r[r]));
    col_order.extend((0..n).filter(|&c| !used_c[c]));
    // D = V' M U' and M = P^T S Q^T; V = V' P^T has columns reordered, U = Q^T U' rows reordered
    let mut vp: Vec<Vec<Int>> = v
        .iter()
        .map(|row| row_order.iter().map(|&r| row[r].clone()).collect())
        .collect();
    let mut up: Vec<Vec<Int>> = col_order.iter().map(|&c| u[c].clone()).collect();
    let mut s: Vec<Int> = diag.pivots.iter().map(|p| p.2.clone()).collect();
    let k = s.len();
    for i in 0..k {
        for j in i + 1..k {
            if s[j].is_divisible_by(&s[i]) {
                continue;
            }
            let (a, b) = (s[i].clone(), s[j].clone());
            let (g, x, y) = a.ext_gcd(&b);
            let (a1, b1) = (a.div_exact(&g), b.div_exact(&g));
            // V <- V · [[a1, -y], [b1, x]] on columns i, j
            for row in vp.iter_mut() {
                let (ci, cj) = (row[i].clone(), row[j].clone());
                row[i] = &ci * &a1 + &cj * &b1;
                row[j] = &cj * &x - &ci * &y;
            }
            // U <- [[x a1, y b1], [-1, 1]] · U on rows i, j
            let (ri, rj) = (up[i].clone(), up[j].clone());
            let xa1 = &x * &a1;
            let yb1 = &y * &b1;
            for col in 0..n {
                up[i][col] = &xa1 * &ri[col] + &yb1 * &rj[col];
                up[j][col] = &rj[col] - &ri[col];
            }
            s[i] = g;
            s[j] = (&a * &b).div_exact(&s[i]);
        }
    }
    for i in 0..k {
        if s[i].is_negative() {
            s[i] = -&s[i];
            for row in vp.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }
    let s_mat = IntMatrix::from_triplets(m, n, s.into_iter().enumerate().map(|(i, d)| (i, i, d)));
    SnfDecomposition {
        u: IntMatrix::from_dense(&up),
        s: s_mat,
        v: IntMatrix::from_dense(&vp),
    }
}

/// Some x with A·x = b (or ≡ b mod `modulus`), checked by back-substitution.
pub fn solve(
    a: &IntMatrix,
    b: &[Int],
    modulus: Option<&Int>,
) -> Result<Option<Vec<Int>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::Dimension(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    let opts = EliminationOptions {
        modulus: modulus.cloned(),
        log_cols: true,
        ..Default::default()
    };
    let diag = diagonalize(a, vec![b.to_vec()], &opts)?;
    let x = diag.witness(0, modulus);
    if let Some(x) = &x {
        let ax = a.mul_vec(x);
        let ok = ax.iter().zip(b).all(|(l, r)| match modulus {
            Some(n) => (l - r).is_divisible_by(n),
            None => l == r,
        });
        assert!(ok, "solver produced a wrong solution");
    }
    Ok(x)
}

/// Witness x with A·x = v (mod n), or None if v is not in the image.
pub fn image_membership(
    a: &IntMatrix,
    v: &[Int],
    modulus: Option<&Int>,
) -> Result<Option<Vec<Int>>, LinalgError> {
    solve(a, v, modulus)
}

/// Parses a matrix given as one row per line of whitespace-separated integers.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, String> {
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<Int>, _> = line.split_whitespace().map(|t| t.parse::<Int>()).collect();
        let row = row.map_err(|e| format!("line {}: {e}", ln + 1))?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(format!(
                    "line {}: expected {} entries, found {}",
                    ln + 1,
                    first.len(),
                    row.len()
                ));
            }
        }
        rows.push(row);
    }
    Ok(IntMatrix::from_dense(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(&d.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn snf_two_by_two() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let d = snf(&a);
        assert_eq!(d.invariant_factors(), ints(&[2, 4]));
        assert_eq!(d.v.mul(&d.s).mul(&d.u), a);
    }

    #[test]
    fn snf_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        let d = snf(&i3);
        assert_eq!(d.s, i3);
        assert_eq!(d.u, i3);
        assert_eq!(d.v, i3);
        let z = IntMatrix::zeros(2, 3);
        let d = snf(&z);
        assert_eq!(d.s, z);
        assert_eq!(d.v.mul(&d.s).mul(&d.u), z);
    }

    #[test]
    fn solve_small_cases() {
        let a = m(&[&[2]]);
        assert_eq!(solve(&a, &ints(&[4]), None).unwrap(), Some(ints(&[2])));
        assert_eq!(solve(&a, &ints(&[1]), None).unwrap(), None);
        assert_eq!(
            solve(&a, &ints(&[1]), Some(&Int::from(3))).unwrap(),
            Some(ints(&[2]))
        );
    }

    #[test]
    fn zero_vector_has_zero_witness() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(
            image_membership(&a, &ints(&[0, 0, 0]), None).unwrap(),
            Some(ints(&[0, 0]))
        );
    }

    #[test]
    fn general_pivot_path() {
        // no unit entries at all
        let a = m(&[&[6, 10], &[15, 4], &[9, 21]]);
        let f = invariant_factors(&a);
        // gcd of entries is 1; 2x2 minors -126, 36, 279 have gcd 9
        assert_eq!(f, ints(&[1, 9]));
        let d = snf(&a);
        assert_eq!(d.v.mul(&d.s).mul(&d.u), a);
    }

    #[test]
    fn dual_certificate_mod_n() {
        // A^T of the boundary 2 e1: coboundary from C^1 to C^2 is [2]
        let a = m(&[&[2]]);
        let opts = EliminationOptions {
            log_rows: true,
            ..Default::default()
        };
        let d = diagonalize(&a, vec![ints(&[1])], &opts).unwrap();
        let c = d.dual_certificate(0, &Int::from(2)).unwrap();
        assert_eq!(c, ints(&[1]));
        let d = diagonalize(&a, vec![ints(&[2])], &opts).unwrap();
        assert!(d.dual_certificate(0, &Int::from(2)).is_none());
    }

    #[test]
    fn memory_cap_aborts() {
        let a = m(&[&[1, 1, 1], &[1, 2, 3], &[1, 4, 9]]);
        let opts = EliminationOptions {
            memory_cap: Some(10),
            ..Default::default()
        };
        assert!(matches!(
            diagonalize(&a, Vec::new(), &opts),
            Err(LinalgError::MemoryCap { .. })
        ));
    }

    #[test]
    fn parse_matrix_text() {
        let a = parse_matrix("2 4\n6 8\n").unwrap();
        assert_eq!(a, m(&[&[2, 4], &[6, 8]]));
        assert!(parse_matrix("1 2\n3\n").is_err());
    }
}
