//! Van Kampen obstructions through deleted joins, and embeddability verdicts
//! for joins M*N in R^{2(d_M + d_N + 1)}.

use serde::Serialize;

use crate::certificates::find_boundary_equivariant_dual_any;
use crate::complex::SimplicialComplex;
use crate::deleted::{deleted_join, deleted_product};
use crate::int::Int;
use crate::smith::{SmithEngine, SmithError, SmithOptions};

/// Deleted-product class A^{2d}(M^{×2}_Δ), computed for cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub class_dim: i32,
    pub trivial_over_z: bool,
    pub trivial_mod_2: bool,
}

/// The class A^{2d+1}(M^{*2}_Δ) of one complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub dim: i32,
    pub class_dim: i32,
    pub deleted_join_cells: usize,
    pub trivial_over_z: bool,
    /// Smallest m with the class nonzero mod 2^m; None when trivial over Z.
    pub minimal_modulus_exponent: Option<u32>,
    pub product_check: Option<ProductCheck>,
}

impl ObstructionReport {
    pub fn trivial_mod_2(&self) -> bool {
        self.minimal_modulus_exponent.is_none_or(|m| m > 1)
    }

    /// Nonzero modulo 2^m.
    pub fn nonzero_mod_power(&self, m: u32) -> bool {
        self.minimal_modulus_exponent.is_some_and(|e| e <= m)
    }
}

/// Computes the deleted-join obstruction; with `with_product` also the
/// deleted-product class for comparison.
pub fn van_kampen_obstruction(
    m: &SimplicialComplex,
    opts: &SmithOptions,
    with_product: bool,
) -> Result<ObstructionReport, SmithError> {
    let d = m.dim();
    if d < 0 {
        return Ok(ObstructionReport {
            dim: d,
            class_dim: 2 * d + 1,
            deleted_join_cells: 1,
            trivial_over_z: true,
            minimal_modulus_exponent: None,
            product_check: None,
        });
    }
    let dj = deleted_join(m).result.to_free();
    let cells = (-1..=dj.dim()).map(|k| dj.count(k)).sum();
    let mut opts = opts.clone();
    opts.skip_certificates = true;
    let mut e = SmithEngine::new(&dj, opts.clone())?;
    let c = e.class(2 * d + 1)?;
    let product_check = if with_product {
        let dp = deleted_product(m)
            .map_err(|err| SmithError::Consistency(err.to_string()))?
            .result;
        let mut pe = SmithEngine::new(&dp, opts)?;
        let pc = pe.class(2 * d)?;
        Some(ProductCheck {
            class_dim: 2 * d,
            trivial_over_z: pc.trivial_over_z,
            trivial_mod_2: pc.trivial_mod_exponent(1),
        })
    } else {
        None
    };
    Ok(ObstructionReport {
        dim: d,
        class_dim: 2 * d + 1,
        deleted_join_cells: cells,
        trivial_over_z: c.trivial_over_z,
        minimal_modulus_exponent: c.minimal_modulus_exponent,
        product_check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Embeds,
    DoesNotEmbed,
    Inconclusive,
}

/// Which part of the decision table produced the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// One obstruction vanishes, or both vanish modulo 2.
    #[serde(rename = "1")]
    One,
    /// Both nonzero and some factor has dimension <= 1.
    #[serde(rename = "2.a")]
    TwoA,
    /// Both nonzero modulo 2.
    #[serde(rename = "2.b")]
    TwoB,
    /// One nonzero mod 2 with a boundary-equivariant dual mod 2^m, the other nonzero mod 2^m.
    #[serde(rename = "2.c")]
    TwoC,
    /// None of the above applies.
    #[serde(rename = "open")]
    Open,
}

impl Clause {
    pub fn tag(self) -> &'static str {
        match self {
            Clause::One => "1",
            Clause::TwoA => "2.a",
            Clause::TwoB => "2.b",
            Clause::TwoC => "2.c",
            Clause::Open => "open",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub target_dim: i32,
    pub clause: Clause,
    pub caveats: Vec<String>,
    /// Steps of the decision, in order.
    pub trace: Vec<String>,
    pub left: ObstructionReport,
    pub right: ObstructionReport,
}

/// Applies the decision table to two obstruction reports. `dual_search`
/// answers whether the obstruction class of the given side (0 = left,
/// 1 = right) has a boundary-equivariant dual modulo 2^m.
pub fn decide(
    left: ObstructionReport,
    right: ObstructionReport,
    mut dual_search: impl FnMut(usize, u32) -> Result<bool, SmithError>,
) -> Result<Verdict, SmithError> {
    let (dm, dn) = (left.dim, right.dim);
    let target_dim = 2 * (dm + dn + 1);
    let mut trace = Vec::new();
    let mut caveats = Vec::new();
    if dm == 2 || dn == 2 {
        caveats.push(
            "a 2-dimensional factor: its obstruction is not complete for embedding that factor in R^4; \
             the verdict concerns the join only"
                .to_string(),
        );
    }
    if dm + dn + 1 < 3 {
        caveats.push(format!("target dimension {target_dim} is below 6; this case is settled directly, not via the obstruction"));
    }
    let describe = |name: &str, r: &ObstructionReport| match r.minimal_modulus_exponent {
        None => format!(
            "{name}: A^{} of the deleted join vanishes over Z",
            r.class_dim
        ),
        Some(m) => format!(
            "{name}: A^{} of the deleted join is nonzero, first nonzero mod 2^{m}",
            r.class_dim
        ),
    };
    trace.push(describe("M", &left));
    trace.push(describe("N", &right));
    let done = |outcome, clause, trace, caveats, left, right| {
        Ok(Verdict {
            outcome,
            target_dim,
            clause,
            caveats,
            trace,
            left,
            right,
        })
    };
    if left.trivial_over_z
        || right.trivial_over_z
        || (left.trivial_mod_2() && right.trivial_mod_2())
    {
        trace.push("an obstruction vanishes, or both vanish modulo 2".into());
        return done(Outcome::Embeds, Clause::One, trace, caveats, left, right);
    }
    if !left.trivial_mod_2() && !right.trivial_mod_2() {
        trace.push("both obstructions nonzero modulo 2".into());
        return done(
            Outcome::DoesNotEmbed,
            Clause::TwoB,
            trace,
            caveats,
            left,
            right,
        );
    }
    if dm <= 1 || dn <= 1 {
        trace.push("both obstructions nonzero and a factor has dimension at most 1".into());
        return done(
            Outcome::DoesNotEmbed,
            Clause::TwoA,
            trace,
            caveats,
            left,
            right,
        );
    }
    // exactly one side is nonzero mod 2
    let (side, other) = if !left.trivial_mod_2() {
        (0, &right)
    } else {
        (1, &left)
    };
    let m = other.minimal_modulus_exponent.expect("nonzero over Z");
    let found = dual_search(side, m)?;
    trace.push(format!(
        "{} obstruction nonzero mod 2; boundary-equivariant dual mod 2^{m}: {}",
        if side == 0 { "M" } else { "N" },
        if found { "found" } else { "not found" }
    ));
    if found {
        done(
            Outcome::DoesNotEmbed,
            Clause::TwoC,
            trace,
            caveats,
            left,
            right,
        )
    } else {
        trace.push("mixed case without a boundary-equivariant dual is left open".into());
        done(
            Outcome::Inconclusive,
            Clause::Open,
            trace,
            caveats,
            left,
            right,
        )
    }
}

/// Verdict for M*N in R^{2(d_M + d_N + 1)}.
pub fn embed_verdict(
    m: &SimplicialComplex,
    n: &SimplicialComplex,
    opts: &SmithOptions,
) -> Result<Verdict, SmithError> {
    let left = van_kampen_obstruction(m, opts, false)?;
    let right = van_kampen_obstruction(n, opts, false)?;
    decide(left, right, |side, power| {
        let c = if side == 0 { m } else { n };
        let x = deleted_join(c).result.to_free();
        let j = 2 * c.dim() + 1;
        let q = Int::from(2).pow(power);
        Ok(find_boundary_equivariant_dual_any(&x, j, &q, opts)?
            .0
            .is_some())
    })
}
