//! Resolutions of the unit cocycle, the d- and s-folded complexes, Smith
//! classes, the Smith index and the sequence of moduli.
//!
//! A cochain ψ is handled in orbit coordinates: for orbit `o` with
//! representative σ, `a[o*p + k] = ψ(t^k σ)`. In these coordinates t^♯ is a
//! cyclic shift, dψ has entries a_k - a_{k+1} and sψ is constant Σ a_k, so
//! each step of a resolution can be solved orbit by orbit.
//!
//! Classes are tested in the folded complexes. The d-fold has one generator
//! sσ per orbit (plus the empty cell in dimension -1, whose boundary
//! coefficient picks up a factor p since s∅ = p∅). The s-fold has generators
//! d t^k σ for k = 0..p-2 and nothing in dimension -1.

use std::time::Instant;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Cochain, FreeZpChainComplex, Orbits};
use crate::int::Int;
use crate::linalg::{diagonalize, Diagonalization, EliminationOptions, IntMatrix, LinalgError};

/// Largest exponent m tried when looking for the minimal modulus p^m.
pub const MODULUS_EXPONENT_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmithError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("resolution step failed in dimension {dim}: {reason}")]
    Resolution { dim: i32, reason: String },
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("class A^{0} is nonzero over Z but vanishes modulo p^m for every m <= {MODULUS_EXPONENT_CAP}")]
    ModulusCap(i32),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("shortening at {at} requires A^{at} = 0 over Z")]
    ShortenNonzero { at: i32 },
}

/// A resolution of the unit cocycle: ψ_0..ψ_D as dense cochains indexed by
/// basis cell, with sψ_0 = 1, δψ_j = dψ_{j+1} (j even), δψ_j = sψ_{j+1} (j odd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub psis: Vec<Vec<Int>>,
}

impl Resolution {
    pub fn psi(&self, j: i32) -> Cochain {
        match self.psis.get(j as usize) {
            Some(v) if j >= 0 => Cochain::from_dense(j, v),
            _ => Cochain::zero(j),
        }
    }
}

fn orbit_coords(orbits: &Orbits, res: &Resolution) -> Vec<Vec<Int>> {
    (0..=orbits.dim())
        .map(|j| match res.psis.get(j as usize) {
            Some(v) => orbits.to_orbit_coords(j, v),
            None => vec![Int::ZERO; orbits.orbit_count(j) * orbits.p as usize],
        })
        .collect()
}

/// Builds ψ_0..ψ_{max_dim} orbit by orbit.
pub fn build_resolution(
    x: &FreeZpChainComplex,
    max_dim: Option<i32>,
) -> Result<Resolution, SmithError> {
    let orbits = Orbits::new(x);
    let coords = build_coords(&orbits, max_dim.unwrap_or(x.dim()).min(x.dim()))?;
    Ok(Resolution {
        psis: coords
            .iter()
            .enumerate()
            .map(|(j, a)| orbits.from_orbit_coords(j as i32, a))
            .collect(),
    })
}

fn build_coords(orbits: &Orbits, top: i32) -> Result<Vec<Vec<Int>>, SmithError> {
    let p = orbits.p as usize;
    let mut coords: Vec<Vec<Int>> = Vec::new();
    if top < 0 {
        return Ok(coords);
    }
    let mut a0 = vec![Int::ZERO; orbits.orbit_count(0) * p];
    for o in 0..orbits.orbit_count(0) {
        a0[o * p] = Int::ONE;
    }
    coords.push(a0);
    for j in 0..top {
        let r = orbits.coboundary_coords(j, &coords[j as usize]);
        let n = orbits.orbit_count(j + 1);
        let mut next = vec![Int::ZERO; n * p];
        for o in 0..n {
            let ro = &r[o * p..(o + 1) * p];
            let out = &mut next[o * p..(o + 1) * p];
            if j % 2 == 0 {
                // d ψ = r: a_{k+1} = a_k - r_k, needs Σ r = 0
                if !ro.iter().sum::<Int>().is_zero() {
                    return Err(SmithError::Resolution {
                        dim: j + 1,
                        reason: format!("δψ_{j} is not in the image of d on orbit {o}"),
                    });
                }
                for k in 0..p - 1 {
                    out[k + 1] = &out[k] - &ro[k];
                }
            } else {
                // s ψ = r: r must be constant on the orbit
                if ro.iter().any(|v| v != &ro[0]) {
                    return Err(SmithError::Resolution {
                        dim: j + 1,
                        reason: format!("δψ_{j} is not in the image of s on orbit {o}"),
                    });
                }
                out[0] = ro[0].clone();
            }
        }
        coords.push(next);
    }
    Ok(coords)
}

/// Checks the defining relations of a resolution with basis-level operators.
pub fn validate_resolution(x: &FreeZpChainComplex, res: &Resolution) -> Result<(), SmithError> {
    let bad = |m: String| Err(SmithError::InvalidResolution(m));
    for (j, v) in res.psis.iter().enumerate() {
        if v.len() != x.count(j as i32) {
            return bad(format!(
                "ψ_{j} has length {} but dimension {j} has {} cells",
                v.len(),
                x.count(j as i32)
            ));
        }
    }
    if x.dim() < 0 {
        return Ok(());
    }
    let psi0 = res.psi(0);
    if x.s_cochain(&psi0) != x.unit_cochain() {
        return bad("sψ_0 differs from the unit cochain".into());
    }
    for j in 0..x.dim() {
        let lhs = x.coboundary(&res.psi(j));
        let next = res.psi(j + 1);
        let rhs = if j % 2 == 0 {
            x.d_cochain(&next)
        } else {
            x.s_cochain(&next)
        };
        if lhs != rhs {
            let op = if j % 2 == 0 { "d" } else { "s" };
            return bad(format!("δψ_{j} differs from {op}ψ_{}", j + 1));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldKind {
    D,
    S,
}

/// Free complex with basis {sσ} (d-fold) or {d t^k σ : k < p-1} (s-fold)
/// stored through its coboundary matrices.
#[derive(Debug, Clone)]
pub struct FoldedComplex {
    pub kind: FoldKind,
    pub p: u64,
    /// Generator count per dimension, starting at dimension -1.
    pub sizes: Vec<usize>,
    /// `coboundary[j + 1]`: rows = generators of dimension j, columns =
    /// generators of dimension j - 1 (the transpose of the folded boundary).
    pub coboundary: Vec<IntMatrix>,
}

impl FoldedComplex {
    pub fn size(&self, j: i32) -> usize {
        if j < -1 {
            return 0;
        }
        self.sizes.get((j + 1) as usize).copied().unwrap_or(0)
    }

    /// Coboundary into dimension j (rows in dimension j).
    pub fn coboundary_into(&self, j: i32) -> IntMatrix {
        match self.coboundary.get((j + 1) as usize) {
            Some(m) if j >= -1 => m.clone(),
            _ => IntMatrix::zeros(self.size(j), self.size(j - 1)),
        }
    }

    /// Generator index of d t^k σ_o in the s-fold.
    pub fn s_index(p: u64, o: usize, k: usize) -> usize {
        o * (p as usize - 1) + k
    }
}

/// Folds the complex into the d- or s-fold.
pub fn fold(x: &FreeZpChainComplex, orbits: &Orbits, kind: FoldKind) -> FoldedComplex {
    let p = x.p as usize;
    let top = x.dim();
    let mut sizes = Vec::new();
    let mut coboundary = Vec::new();
    match kind {
        FoldKind::D => {
            sizes.push(1);
            coboundary.push(IntMatrix::zeros(1, 0));
            for j in 0..=top {
                let n = orbits.orbit_count(j);
                sizes.push(n);
                let m = if j == 0 {
                    let pp = Int::from(x.p);
                    let trips = orbits
                        .augmentation
                        .iter()
                        .enumerate()
                        .map(|(o, c)| (o, 0usize, c * &pp));
                    IntMatrix::from_triplets(n, 1, trips)
                } else {
                    let faces = &orbits.faces[j as usize];
                    let trips = faces.iter().enumerate().flat_map(|(o, fl)| {
                        fl.iter()
                            .map(move |f| (o, f.orbit as usize, f.coef.clone()))
                    });
                    IntMatrix::from_triplets(n, orbits.orbit_count(j - 1), trips)
                };
                coboundary.push(m);
            }
        }
        FoldKind::S => {
            sizes.push(0);
            coboundary.push(IntMatrix::zeros(0, 0));
            for j in 0..=top {
                let n = orbits.orbit_count(j) * (p - 1);
                sizes.push(n);
                let m = if j == 0 {
                    IntMatrix::zeros(n, 0)
                } else {
                    let below = orbits.orbit_count(j - 1) * (p - 1);
                    let mut trips = Vec::new();
                    for (o, fl) in orbits.faces[j as usize].iter().enumerate() {
                        for k in 0..p - 1 {
                            let row = FoldedComplex::s_index(x.p, o, k);
                            for f in fl {
                                let m = (k + f.shift as usize) % p;
                                if m < p - 1 {
                                    trips.push((
                                        row,
                                        FoldedComplex::s_index(x.p, f.orbit as usize, m),
                                        f.coef.clone(),
                                    ));
                                } else {
                                    // d t^{p-1} ρ = -Σ_{r<p-1} d t^r ρ
                                    for r in 0..p - 1 {
                                        trips.push((
                                            row,
                                            FoldedComplex::s_index(x.p, f.orbit as usize, r),
                                            -&f.coef,
                                        ));
                                    }
                                }
                            }
                        }
                    }
                    IntMatrix::from_triplets(n, below, trips)
                };
                coboundary.push(m);
            }
        }
    }
    FoldedComplex {
        kind,
        p: x.p,
        sizes,
        coboundary,
    }
}

pub fn parity_kind(j: i32) -> FoldKind {
    if j % 2 == 0 {
        FoldKind::D
    } else {
        FoldKind::S
    }
}

/// Folded coordinates of the class A^j given ψ_j in orbit coordinates:
/// (sψ_j)(σ_o) for even j, ψ_j(d t^k σ_o) for odd j.
pub fn class_vector(p: u64, j: i32, coords: &[Int]) -> Vec<Int> {
    let p = p as usize;
    let n = coords.len() / p;
    let mut v = Vec::new();
    for o in 0..n {
        let a = &coords[o * p..(o + 1) * p];
        if j % 2 == 0 {
            v.push(a.iter().sum());
        } else {
            for k in 0..p - 1 {
                v.push(&a[k] - &a[k + 1]);
            }
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    DClass,
    SClass,
}

impl Parity {
    pub fn of(j: i32) -> Parity {
        if j % 2 == 0 {
            Parity::DClass
        } else {
            Parity::SClass
        }
    }
}

/// Torsion-class certificate: a chain c and modulus n with (s or d)∂c ≡ 0
/// and the class representative nonzero on c modulo n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub chain: Chain,
    pub modulus: Int,
    pub kind: FoldKind,
    pub dim: i32,
}

#[derive(Debug, Clone)]
pub struct SmithClassReport {
    pub dim: i32,
    pub parity: Parity,
    /// sψ_j for even j, dψ_j for odd j.
    pub representative: Cochain,
    pub trivial_over_z: bool,
    pub minimal_modulus_exponent: Option<u32>,
    /// p·A^j is a coboundary (always expected for j >= 1).
    pub torsion_ok: bool,
    pub certificate: Option<Certificate>,
}

impl SmithClassReport {
    pub fn trivial_mod_exponent(&self, m: u32) -> bool {
        match self.minimal_modulus_exponent {
            None => true,
            Some(e) => m < e,
        }
    }
}

/// Options for the engine.
#[derive(Debug, Clone, Default)]
pub struct SmithOptions {
    pub memory_cap: Option<usize>,
    /// Skip certificate extraction (saves the row log).
    pub skip_certificates: bool,
}

/// Folded data and elimination for one class.
pub struct ClassAnalysis {
    pub dim: i32,
    pub vector: Vec<Int>,
    pub matrix: IntMatrix,
    pub diag: Diagonalization,
}

impl ClassAnalysis {
    pub fn trivial_over_z(&self) -> bool {
        self.diag.in_image(0, None)
    }

    pub fn trivial_mod(&self, n: &Int) -> bool {
        self.diag.in_image(0, Some(n))
    }
}

/// Smith class computations on one free Z_p-complex.
pub struct SmithEngine<'a> {
    pub x: &'a FreeZpChainComplex,
    pub orbits: Orbits,
    pub resolution: Resolution,
    coords: Vec<Vec<Int>>,
    d_fold: FoldedComplex,
    s_fold: FoldedComplex,
    pub opts: SmithOptions,
    pub peak_bytes: usize,
}

impl<'a> SmithEngine<'a> {
    pub fn new(x: &'a FreeZpChainComplex, opts: SmithOptions) -> Result<Self, SmithError> {
        let orbits = Orbits::new(x);
        let coords = build_coords(&orbits, x.dim())?;
        let resolution = Resolution {
            psis: coords
                .iter()
                .enumerate()
                .map(|(j, a)| orbits.from_orbit_coords(j as i32, a))
                .collect(),
        };
        Ok(Self::assemble(x, orbits, resolution, coords, opts))
    }

    /// Uses a given resolution (validated first).
    pub fn with_resolution(
        x: &'a FreeZpChainComplex,
        res: Resolution,
        opts: SmithOptions,
    ) -> Result<Self, SmithError> {
        validate_resolution(x, &res)?;
        let orbits = Orbits::new(x);
        let coords = orbit_coords(&orbits, &res);
        Ok(Self::assemble(x, orbits, res, coords, opts))
    }

    fn assemble(
        x: &'a FreeZpChainComplex,
        orbits: Orbits,
        resolution: Resolution,
        coords: Vec<Vec<Int>>,
        opts: SmithOptions,
    ) -> Self {
        let d_fold = fold(x, &orbits, FoldKind::D);
        let s_fold = fold(x, &orbits, FoldKind::S);
        SmithEngine {
            x,
            orbits,
            resolution,
            coords,
            d_fold,
            s_fold,
            opts,
            peak_bytes: 0,
        }
    }

    pub fn p(&self) -> u64 {
        self.x.p
    }

    pub fn folded(&self, kind: FoldKind) -> &FoldedComplex {
        match kind {
            FoldKind::D => &self.d_fold,
            FoldKind::S => &self.s_fold,
        }
    }

    /// Orbit coordinates of ψ_j (zero beyond the top dimension).
    pub fn coords(&self, j: i32) -> Vec<Int> {
        match self.coords.get(j as usize) {
            Some(a) if j >= 0 => a.clone(),
            _ => vec![Int::ZERO; self.orbits.orbit_count(j) * self.p() as usize],
        }
    }

    /// Folded coordinates of A^j and the coboundary into dimension j.
    pub fn class_data(&self, j: i32) -> (Vec<Int>, IntMatrix) {
        let v = class_vector(self.p(), j, &self.coords(j));
        let m = self.folded(parity_kind(j)).coboundary_into(j);
        (v, m)
    }

    /// Eliminates the folded coboundary into dimension j with the class vector
    /// and p times it as right-hand sides.
    pub fn analyze(
        &mut self,
        j: i32,
        log_rows: bool,
        log_cols: bool,
    ) -> Result<ClassAnalysis, SmithError> {
        let (v, m) = self.class_data(j);
        let pv: Vec<Int> = v.iter().map(|a| a * &Int::from(self.p())).collect();
        let opts = EliminationOptions {
            modulus: None,
            log_rows,
            log_cols,
            memory_cap: self.opts.memory_cap,
        };
        let started = Instant::now();
        let diag = diagonalize(&m, vec![v.clone(), pv], &opts)?;
        debug!(
            "A^{j}: {}x{} matrix, rank {}, {:.2?}",
            m.rows(),
            m.cols(),
            diag.rank(),
            started.elapsed()
        );
        self.peak_bytes = self.peak_bytes.max(diag.peak_bytes);
        Ok(ClassAnalysis {
            dim: j,
            vector: v,
            matrix: m,
            diag,
        })
    }

    fn minimal_exponent(&self, a: &ClassAnalysis) -> Result<Option<u32>, SmithError> {
        if a.trivial_over_z() {
            return Ok(None);
        }
        let p = Int::from(self.p());
        let mut n = Int::ONE;
        for m in 1..=MODULUS_EXPONENT_CAP {
            n = &n * &p;
            if !a.trivial_mod(&n) {
                return Ok(Some(m));
            }
        }
        Err(SmithError::ModulusCap(a.dim))
    }

    /// The representative cochain sψ_j or dψ_j on the base complex.
    pub fn representative(&self, j: i32) -> Cochain {
        let psi = self.resolution.psi(j);
        if j < 0 || j > self.x.dim() {
            return Cochain::zero(j);
        }
        if j % 2 == 0 {
            self.x.s_cochain(&psi)
        } else {
            self.x.d_cochain(&psi)
        }
    }

    /// Full report on A^j, with a certificate at the minimal modulus when nontrivial.
    pub fn class(&mut self, j: i32) -> Result<SmithClassReport, SmithError> {
        let want_cert = !self.opts.skip_certificates;
        let a = self.analyze(j, want_cert, false)?;
        self.report_from(&a)
    }

    pub fn report_from(&self, a: &ClassAnalysis) -> Result<SmithClassReport, SmithError> {
        let j = a.dim;
        let trivial = a.trivial_over_z();
        let m = self.minimal_exponent(a)?;
        let torsion_ok = j == 0 || a.diag.in_image(1, None);
        let certificate = match m {
            Some(m) if !self.opts.skip_certificates => {
                let n = Int::from(self.p()).pow(m);
                crate::certificates::certificate_from_analysis(self, a, &n)
            }
            _ => None,
        };
        Ok(SmithClassReport {
            dim: j,
            parity: Parity::of(j),
            representative: self.representative(j),
            trivial_over_z: trivial,
            minimal_modulus_exponent: m,
            torsion_ok,
            certificate,
        })
    }

    /// Classes A^0, A^1, ... up to and including the first one trivial over Z.
    pub fn scan(&mut self) -> Result<Vec<SmithClassReport>, SmithError> {
        self.scan_to(None)
    }

    /// Like [`scan`](Self::scan) but never past dimension `max_dim`.
    pub fn scan_to(&mut self, max_dim: Option<i32>) -> Result<Vec<SmithClassReport>, SmithError> {
        let mut out = Vec::new();
        let top = max_dim.map_or(self.x.dim() + 1, |m| m.min(self.x.dim() + 1));
        for j in 0..=top {
            let r = self.class(j)?;
            let stop = r.trivial_over_z;
            out.push(r);
            if stop {
                break;
            }
        }
        Ok(out)
    }

    /// Replaces the resolution by one with ψ_j = 0 for j >= at; needs A^at = 0 over Z.
    pub fn shorten(&mut self, at: i32) -> Result<(), SmithError> {
        if at > self.x.dim() {
            return Ok(());
        }
        let pp = self.p();
        let p = pp as usize;
        if at <= 0 {
            if self.x.count(0) > 0 {
                return Err(SmithError::ShortenNonzero { at });
            }
        } else {
            let a = self.analyze(at, false, true)?;
            let y = a
                .diag
                .witness(0, None)
                .ok_or(SmithError::ShortenNonzero { at })?;
            let prev = &mut self.coords[(at - 1) as usize];
            let n = prev.len() / p;
            for o in 0..n {
                if at % 2 == 0 {
                    // subtract s η where η(σ_o) = y_o on the fundamental domain
                    for k in 0..p {
                        prev[o * p + k] -= &y[o];
                    }
                } else {
                    // subtract d η with η(d t^k σ_o) = y_{o,k}
                    let mut b = vec![Int::ZERO; p];
                    for k in (0..p - 1).rev() {
                        b[k] = &y[FoldedComplex::s_index(pp, o, k)] + &b[k + 1];
                    }
                    for k in 0..p {
                        let dk = &b[k] - &b[(k + 1) % p];
                        prev[o * p + k] -= dk;
                    }
                }
            }
        }
        for j in at.max(0)..=self.x.dim() {
            for v in &mut self.coords[j as usize] {
                *v = Int::ZERO;
            }
        }
        self.resolution = Resolution {
            psis: self
                .coords
                .iter()
                .enumerate()
                .map(|(j, a)| self.orbits.from_orbit_coords(j as i32, a))
                .collect(),
        };
        validate_resolution(self.x, &self.resolution)
    }
}

/// Per-dimension data, index, index mod p, and moduli of one complex.
#[derive(Debug, Clone)]
pub struct SmithReport {
    pub p: u64,
    pub classes: Vec<SmithClassReport>,
    pub index: i32,
    pub index_mod_p: i32,
    /// Exponents m_j for j = 1..index-1 (moduli are p^{m_j}).
    pub moduli_exponents: Vec<u32>,
    pub peak_bytes: usize,
}

impl SmithReport {
    pub fn moduli(&self) -> Vec<Int> {
        self.moduli_exponents
            .iter()
            .map(|&m| Int::from(self.p).pow(m))
            .collect()
    }

    pub fn class(&self, j: i32) -> Option<&SmithClassReport> {
        self.classes.iter().find(|c| c.dim == j)
    }
}

/// Index, index mod p^m and moduli from a scan, with the consistency checks
/// I - 1 <= I_p <= I and "only the top class may vanish mod p".
pub fn summarize(
    p: u64,
    classes: Vec<SmithClassReport>,
    peak_bytes: usize,
) -> Result<SmithReport, SmithError> {
    let index = classes
        .iter()
        .find(|c| c.trivial_over_z)
        .map(|c| c.dim)
        .unwrap_or(classes.len() as i32);
    let index_mod_p = index_mod(&classes, 1).unwrap_or(index);
    if !(index - 1 <= index_mod_p && index_mod_p <= index) {
        return Err(SmithError::Consistency(format!(
            "I = {index} but I_p = {index_mod_p}"
        )));
    }
    let mut exps = Vec::new();
    for j in 1..index {
        let c = classes
            .iter()
            .find(|c| c.dim == j)
            .expect("scan covers 0..=index");
        let m = c
            .minimal_modulus_exponent
            .expect("nontrivial below the index");
        if m != 1 && j != index - 1 {
            return Err(SmithError::Consistency(format!(
                "A^{j} vanishes mod p although it is not the top class"
            )));
        }
        exps.push(m);
    }
    for c in &classes {
        if c.dim >= 1 && !c.torsion_ok {
            return Err(SmithError::Consistency(format!(
                "p·A^{} is not a coboundary",
                c.dim
            )));
        }
    }
    Ok(SmithReport {
        p,
        classes,
        index,
        index_mod_p,
        moduli_exponents: exps,
        peak_bytes,
    })
}

fn index_mod(classes: &[SmithClassReport], m: u32) -> Option<i32> {
    classes
        .iter()
        .find(|c| c.trivial_mod_exponent(m))
        .map(|c| c.dim)
}

/// Scan of all classes up to the index.
pub fn smith_report(x: &FreeZpChainComplex, opts: SmithOptions) -> Result<SmithReport, SmithError> {
    let mut e = SmithEngine::new(x, opts)?;
    let classes = e.scan()?;
    summarize(x.p, classes, e.peak_bytes)
}

pub fn smith_class(x: &FreeZpChainComplex, j: i32) -> Result<SmithClassReport, SmithError> {
    SmithEngine::new(x, SmithOptions::default())?.class(j)
}

/// Smallest n with A^n = 0 over Z.
pub fn smith_index(x: &FreeZpChainComplex) -> Result<i32, SmithError> {
    let opts = SmithOptions {
        skip_certificates: true,
        ..Default::default()
    };
    Ok(smith_report(x, opts)?.index)
}

/// Smallest n with A^n = 0 modulo p^m.
pub fn smith_index_mod(x: &FreeZpChainComplex, m: u32) -> Result<i32, SmithError> {
    let opts = SmithOptions {
        skip_certificates: true,
        ..Default::default()
    };
    let r = smith_report(x, opts)?;
    Ok(index_mod(&r.classes, m).unwrap_or(r.index))
}

/// (p^{m_1}, ..., p^{m_{I-1}}).
pub fn moduli_sequence(x: &FreeZpChainComplex) -> Result<Vec<Int>, SmithError> {
    let opts = SmithOptions {
        skip_certificates: true,
        ..Default::default()
    };
    Ok(smith_report(x, opts)?.moduli())
}

/// Shortens a resolution at `at`.
pub fn shorten_resolution(
    x: &FreeZpChainComplex,
    res: Resolution,
    at: i32,
) -> Result<Resolution, SmithError> {
    let mut e = SmithEngine::with_resolution(x, res, SmithOptions::default())?;
    e.shorten(at)?;
    Ok(e.resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{SimplicialComplex, ZpComplex};

    fn zp(n: u32, p: u64, action: Vec<u32>, facets: &[Vec<u32>]) -> FreeZpChainComplex {
        let cx = SimplicialComplex::with_all_vertices(n, facets).unwrap();
        ZpComplex::new(cx, p, action).unwrap().to_free()
    }

    fn s0() -> FreeZpChainComplex {
        zp(2, 2, vec![1, 0], &[])
    }

    fn square() -> FreeZpChainComplex {
        zp(
            4,
            2,
            vec![2, 3, 0, 1],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
    }

    #[test]
    fn s0_resolution_and_fold() {
        let x = s0();
        let r = build_resolution(&x, None).unwrap();
        assert_eq!(r.psis, vec![vec![Int::ONE, Int::ZERO]]);
        let orb = Orbits::new(&x);
        let d = fold(&x, &orb, FoldKind::D);
        assert_eq!(d.coboundary_into(0).to_dense(), vec![vec![Int::from(2)]]);
    }

    #[test]
    fn square_resolution_is_valid() {
        let x = square();
        let r = build_resolution(&x, None).unwrap();
        validate_resolution(&x, &r).unwrap();
        // hand solution ψ_0 = 1* + 2*, ψ_1 = [41]* with vertices renumbered from 0;
        // the edge [41] runs from 3 to 0, so it is -(0,3)
        let mut psi0 = vec![Int::ZERO; 4];
        psi0[0] = Int::ONE;
        psi0[1] = Int::ONE;
        let e41 = x.labels[2].iter().position(|l| l == "(0,3)").unwrap();
        let mut psi1 = vec![Int::ZERO; 4];
        psi1[e41] = -Int::ONE;
        validate_resolution(
            &x,
            &Resolution {
                psis: vec![psi0, psi1],
            },
        )
        .unwrap();
    }

    #[test]
    fn sphere_classes() {
        let x = square();
        let rep = smith_report(&x, SmithOptions::default()).unwrap();
        assert_eq!(rep.index, 2);
        assert_eq!(rep.index_mod_p, 2);
        assert_eq!(rep.moduli_exponents, vec![1]);
        let a0 = rep.class(0).unwrap();
        assert!(!a0.trivial_over_z);
    }

    #[test]
    fn three_points() {
        let x = zp(3, 3, vec![1, 2, 0], &[]);
        let r = build_resolution(&x, None).unwrap();
        assert_eq!(r.psis[0], vec![Int::ONE, Int::ZERO, Int::ZERO]);
        assert_eq!(smith_index(&x).unwrap(), 1);
        let d = fold(&x, &Orbits::new(&x), FoldKind::S);
        assert_eq!(d.size(0), 2);
    }

    #[test]
    fn empty_complex_has_index_zero() {
        let x = zp(0, 2, vec![], &[]);
        assert_eq!(smith_index(&x).unwrap(), 0);
    }

    #[test]
    fn shortening_square_at_index() {
        let x = square();
        let r = build_resolution(&x, None).unwrap();
        let short = shorten_resolution(&x, r, 2).unwrap();
        validate_resolution(&x, &short).unwrap();
    }
}
