//! Command implementations. Each returns the JSON document to print.

use std::path::Path;
use std::time::Instant;

use log::info;
use serde_json::{json, Value};
use zpsmith::certificates::{find_certificate, verify};
use zpsmith::complex::FreeZpChainComplex;
use zpsmith::corpus::{by_name, CorpusItem};
use zpsmith::deleted::{deleted_join, deleted_product};
use zpsmith::embed::{embed_verdict, van_kampen_obstruction};
use zpsmith::join::{join, join_smith};
use zpsmith::linalg::{
    diagonalize, divisibility_chain, parse_matrix, snf, EliminationOptions, IntMatrix,
};
use zpsmith::smith::{
    summarize, Certificate, SmithClassReport, SmithEngine, SmithOptions, SmithReport,
};
use zpsmith::Int;

use crate::error::CliError;
use crate::files::{
    read_any, read_simplicial, read_text, ChainComplexFile, ComplexFile, LoadedComplex,
};

/// Bytes charged per stored cell when checking a complex against the cap.
const BYTES_PER_CELL: usize = 160;

pub fn parse_bytes(s: &str) -> Result<usize, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1usize << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    let n: usize = num
        .parse()
        .map_err(|_| format!("invalid byte count {s:?}"))?;
    n.checked_mul(mult)
        .ok_or_else(|| format!("byte count {s:?} overflows"))
}

/// Peak resident set size of this process in KiB, where the OS reports it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn check_cells(cells: usize, cap: Option<usize>) -> Result<(), CliError> {
    if let Some(cap) = cap {
        let needed = cells.saturating_mul(BYTES_PER_CELL);
        if needed > cap {
            return Err(zpsmith::linalg::LinalgError::MemoryCap { needed, cap }.into());
        }
    }
    Ok(())
}

fn total_cells(x: &FreeZpChainComplex) -> usize {
    (-1..=x.dim()).map(|k| x.count(k)).sum()
}

fn meta(started: Instant, peak_matrix_bytes: usize) -> Value {
    json!({
        "elapsed_ms": started.elapsed().as_secs_f64() * 1000.0,
        "peak_matrix_bytes": peak_matrix_bytes,
        "peak_rss_kib": peak_rss_kib(),
    })
}

fn cell_count_vector(x: &FreeZpChainComplex) -> Vec<usize> {
    (0..=x.dim()).map(|k| x.count(k)).collect()
}

fn certificate_json(x: &FreeZpChainComplex, cert: &Certificate, verified: bool) -> Value {
    let chain: Vec<Value> = cert
        .chain
        .coeffs
        .iter()
        .map(|(&i, c)| json!({ "cell": x.labels[(cert.dim + 1) as usize][i], "coef": c }))
        .collect();
    json!({ "modulus": cert.modulus, "kind": cert.kind, "chain": chain, "verified": verified })
}

fn class_json(engine: &SmithEngine, c: &SmithClassReport) -> Value {
    let p = Int::from(engine.p());
    json!({
        "j": c.dim,
        "parity": c.parity,
        "trivial_over_Z": c.trivial_over_z,
        "minimal_modulus_exponent": c.minimal_modulus_exponent,
        "modulus": c.minimal_modulus_exponent.map(|m| p.pow(m)),
        "torsion_ok": c.torsion_ok,
        "certificate": c.certificate.as_ref().map(|cert| {
            let ok = verify(engine, cert).unwrap_or(false);
            certificate_json(engine.x, cert, ok)
        }),
    })
}

fn report_fields(r: &SmithReport, mod_exp: Option<u32>) -> Value {
    let index_mod_pm = mod_exp.map(|m| {
        let v = r
            .classes
            .iter()
            .find(|c| c.trivial_mod_exponent(m))
            .map_or(r.index, |c| c.dim);
        json!({ "m": m, "index": v })
    });
    json!({
        "index": r.index,
        "index_mod_p": r.index_mod_p,
        "index_mod_pm": index_mod_pm,
        "moduli": r.moduli(),
        "moduli_exponents": r.moduli_exponents,
    })
}

/// Scans classes and assembles the report document.
fn smith_document(
    x: &FreeZpChainComplex,
    engine: &mut SmithEngine,
    max_dim: Option<i32>,
    mod_exp: Option<u32>,
    started: Instant,
) -> Result<Value, CliError> {
    let classes = engine.scan_to(max_dim)?;
    let reached = classes.last().is_some_and(|c| c.trivial_over_z);
    let class_docs: Vec<Value> = classes.iter().map(|c| class_json(engine, c)).collect();
    let mut doc = json!({
        "p": x.p,
        "dim": x.dim(),
        "cells": cell_count_vector(x),
        "classes": class_docs,
    });
    if reached {
        let r = summarize(x.p, classes, engine.peak_bytes)?;
        merge(&mut doc, report_fields(&r, mod_exp));
    } else {
        merge(
            &mut doc,
            json!({ "index": null, "index_at_least": classes.len() }),
        );
    }
    merge(
        &mut doc,
        json!({ "timing": meta(started, engine.peak_bytes) }),
    );
    Ok(doc)
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (doc, extra) {
        a.extend(b);
    }
}

fn smith_opts(cap: Option<usize>, certificates: bool) -> SmithOptions {
    SmithOptions {
        memory_cap: cap,
        skip_certificates: !certificates,
    }
}

pub fn cmd_validate(path: &Path) -> Result<Value, CliError> {
    let c = read_any(path)?;
    Ok(match c {
        crate::files::AnyComplex::Simplicial(l) => {
            let cx = &l.complex;
            json!({
                "valid": true,
                "kind": if l.zp.is_some() { "zp-complex" } else { "simplicial-complex" },
                "p": l.zp.as_ref().map(|z| z.p),
                "dim": cx.dim(),
                "f_vector": cx.f_vector(),
            })
        }
        crate::files::AnyComplex::Chain(x) => json!({
            "valid": true,
            "kind": "chain-complex",
            "p": x.p,
            "dim": x.dim(),
            "cells": cell_count_vector(&x),
        }),
    })
}

pub fn cmd_smith(
    path: &Path,
    mod_exp: Option<u32>,
    max_dim: Option<i32>,
    certificates: bool,
    cap: Option<usize>,
) -> Result<Value, CliError> {
    let started = Instant::now();
    let x = read_any(path)?.free("smith")?;
    check_cells(total_cells(&x), cap)?;
    info!("{} cells, p = {}", total_cells(&x), x.p);
    let mut e = SmithEngine::new(&x, smith_opts(cap, certificates))?;
    smith_document(&x, &mut e, max_dim, mod_exp, started)
}

pub fn cmd_certificate(
    path: &Path,
    j: i32,
    modulus: Option<Int>,
    cap: Option<usize>,
) -> Result<Value, CliError> {
    let started = Instant::now();
    let x = read_any(path)?.free("certificate")?;
    check_cells(total_cells(&x), cap)?;
    let mut e = SmithEngine::new(&x, smith_opts(cap, true))?;
    let n = match modulus {
        Some(n) if n.is_zero() || n.is_unit() => {
            return Err(CliError::domain("the modulus must be at least 2"))
        }
        Some(n) => n,
        None => {
            let c = e.class(j)?;
            match c.minimal_modulus_exponent {
                Some(m) => Int::from(x.p).pow(m),
                None => {
                    return Ok(json!({
                        "j": j,
                        "trivial_over_Z": true,
                        "certificate": null,
                        "timing": meta(started, e.peak_bytes),
                    }))
                }
            }
        }
    };
    let cert = find_certificate(&mut e, j, &n)?;
    let doc = cert.as_ref().map(|c| {
        let ok = verify(&e, c).unwrap_or(false);
        certificate_json(&x, c, ok)
    });
    Ok(json!({
        "j": j,
        "modulus": n,
        "vanishes_mod_modulus": doc.is_none(),
        "certificate": doc,
        "timing": meta(started, e.peak_bytes),
    }))
}

fn joined_names(a: &LoadedComplex, b: &LoadedComplex) -> Vec<String> {
    let mut names: Vec<String> = a.names.iter().map(|n| format!("1:{n}")).collect();
    names.extend(b.names.iter().map(|n| format!("2:{n}")));
    names
}

fn estimate_join_cells(a: &LoadedComplex, b: &LoadedComplex) -> usize {
    let total =
        |c: &zpsmith::complex::SimplicialComplex| (-1..=c.dim()).map(|k| c.count(k)).sum::<usize>();
    total(&a.complex).saturating_mul(total(&b.complex))
}

pub fn cmd_join(a: &Path, b: &Path, cap: Option<usize>) -> Result<Value, CliError> {
    let (ka, kb) = (read_simplicial(a)?, read_simplicial(b)?);
    check_cells(estimate_join_cells(&ka, &kb), cap)?;
    let j = join(ka.require_zp("join")?, kb.require_zp("join")?)?;
    Ok(
        serde_json::to_value(ComplexFile::from_zp(&joined_names(&ka, &kb), &j.result))
            .expect("serializable"),
    )
}

pub fn cmd_deleted(path: &Path, product: bool, cap: Option<usize>) -> Result<Value, CliError> {
    let m = read_simplicial(path)?;
    check_cells(estimate_join_cells(&m, &m), cap)?;
    if product {
        let d = deleted_product(&m.complex)?;
        Ok(serde_json::to_value(ChainComplexFile::from_free(&d.result)).expect("serializable"))
    } else {
        let d = deleted_join(&m.complex);
        let mut names: Vec<String> = m.names.clone();
        names.extend(m.names.iter().map(|n| format!("{n}'")));
        Ok(serde_json::to_value(ComplexFile::from_zp(&names, &d.result)).expect("serializable"))
    }
}

fn class_summary(c: &SmithClassReport) -> Value {
    json!({
        "j": c.dim,
        "trivial_over_Z": c.trivial_over_z,
        "minimal_modulus_exponent": c.minimal_modulus_exponent,
    })
}

fn factor_summary(r: &SmithReport) -> Value {
    json!({ "index": r.index, "index_mod_p": r.index_mod_p, "moduli": r.moduli() })
}

pub fn cmd_join_smith(
    a: &Path,
    b: &Path,
    direct: bool,
    cap: Option<usize>,
) -> Result<Value, CliError> {
    let started = Instant::now();
    let (ka, kb) = (read_simplicial(a)?, read_simplicial(b)?);
    let (za, zb) = (ka.require_zp("join-smith")?, kb.require_zp("join-smith")?);
    check_cells(estimate_join_cells(&ka, &kb), cap)?;
    let opts = smith_opts(cap, false);
    info!("joining {} and {}", a.display(), b.display());
    let js = join_smith(za, zb, &opts)?;
    info!("join has cells {:?}", js.cells);
    let r = &js.joined;
    let mut peak = js.peak_bytes;
    let mut doc = json!({
        "p": za.p,
        "left": factor_summary(&js.left),
        "right": factor_summary(&js.right),
        "prediction": js.prediction,
        "join": {
            "cells": js.cells,
            "resolution": "join formula",
            "classes": r.classes.iter().map(class_summary).collect::<Vec<_>>(),
            "index": r.index,
            "index_mod_p": r.index_mod_p,
            "moduli": r.moduli(),
        },
    });
    if direct {
        let x = join(za, zb)?.result.to_free();
        let mut d = SmithEngine::new(&x, opts)?;
        let rd = summarize(x.p, d.scan()?, d.peak_bytes)?;
        peak = peak.max(d.peak_bytes);
        let same = rd.index == r.index
            && rd.index_mod_p == r.index_mod_p
            && rd.moduli_exponents == r.moduli_exponents
            && rd.classes.iter().zip(&r.classes).all(|(a, b)| {
                a.trivial_over_z == b.trivial_over_z
                    && a.minimal_modulus_exponent == b.minimal_modulus_exponent
            });
        merge(
            &mut doc,
            json!({ "direct": {
                "classes": rd.classes.iter().map(class_summary).collect::<Vec<_>>(),
                "index": rd.index,
                "index_mod_p": rd.index_mod_p,
                "moduli": rd.moduli(),
                "agrees": same,
            }}),
        );
        if !same {
            return Err(CliError::domain(
                "join formula and direct resolution disagree",
            ));
        }
    }
    merge(&mut doc, json!({ "timing": meta(started, peak) }));
    Ok(doc)
}

pub fn cmd_embed_verdict(
    m: &Path,
    n: &Path,
    product_check: bool,
    cap: Option<usize>,
) -> Result<Value, CliError> {
    let started = Instant::now();
    let (a, b) = (read_simplicial(m)?, read_simplicial(n)?);
    check_cells(
        estimate_join_cells(&a, &a).max(estimate_join_cells(&b, &b)),
        cap,
    )?;
    let opts = smith_opts(cap, false);
    info!("obstructions of {} and {}", m.display(), n.display());
    let v = embed_verdict(&a.complex, &b.complex, &opts)?;
    let mut doc = serde_json::to_value(&v).expect("serializable");
    if product_check {
        let checks: Vec<Value> = [&a, &b]
            .iter()
            .map(|c| -> Result<Value, CliError> {
                let r = van_kampen_obstruction(&c.complex, &opts, true)?;
                let pc = r.product_check.clone();
                let agrees = pc.as_ref().is_none_or(|pc| {
                    pc.trivial_over_z == r.trivial_over_z && pc.trivial_mod_2 == r.trivial_mod_2()
                });
                Ok(json!({ "product": pc, "agrees": agrees }))
            })
            .collect::<Result<_, _>>()?;
        merge(&mut doc, json!({ "product_check": checks }));
    }
    merge(&mut doc, json!({ "timing": meta(started, 0) }));
    Ok(doc)
}

pub fn cmd_corpus(name: &str, params: &[u64]) -> Result<Value, CliError> {
    let item = by_name(name, params)?;
    let file = match item {
        CorpusItem::Zp(z) => {
            let names: Vec<String> = (0..z.complex.vertex_count())
                .map(|v| v.to_string())
                .collect();
            ComplexFile::from_zp(&names, &z)
        }
        CorpusItem::Plain(c) => {
            let names: Vec<String> = (0..c.vertex_count()).map(|v| v.to_string()).collect();
            ComplexFile::from_complex(&names, &c, None)
        }
    };
    Ok(serde_json::to_value(file).expect("serializable"))
}

/// A matrix file: a JSON array of rows, or one row per line of integers.
pub fn read_matrix(path: &Path) -> Result<IntMatrix, CliError> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<Int>> =
            serde_json::from_str(&text).map_err(|e| CliError::parse(e.to_string()))?;
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(CliError::parse("matrix rows have different lengths"));
        }
        Ok(IntMatrix::from_dense(&rows))
    } else {
        parse_matrix(&text).map_err(CliError::parse)
    }
}

pub fn cmd_snf(path: &Path, full: bool, cap: Option<usize>) -> Result<Value, CliError> {
    let started = Instant::now();
    let a = read_matrix(path)?;
    let opts = EliminationOptions {
        memory_cap: cap,
        ..Default::default()
    };
    let diag = diagonalize(&a, Vec::new(), &opts)?;
    let factors = divisibility_chain(diag.pivots.iter().map(|p| p.2.clone()).collect());
    let mut doc = json!({
        "rows": a.rows(),
        "cols": a.cols(),
        "rank": factors.len(),
        "invariant_factors": factors,
    });
    if full {
        let d = snf(&a);
        merge(
            &mut doc,
            json!({ "u": d.u.to_dense(), "s": d.s.to_dense(), "v": d.v.to_dense() }),
        );
    }
    merge(
        &mut doc,
        json!({ "timing": meta(started, diag.peak_bytes) }),
    );
    Ok(doc)
}
