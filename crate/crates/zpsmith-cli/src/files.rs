//! On-disk formats: simplicial complex files, chain complex files (for
//! deleted products) and matrix files.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use zpsmith::complex::{FreeZpChainComplex, SimplicialComplex, ZpComplex};
use zpsmith::Int;

use crate::error::CliError;

/// A vertex name: written as a string, read from a string or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexName {
    Num(u64),
    Str(String),
}

impl std::fmt::Display for VertexName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexName::Num(n) => write!(f, "{n}"),
            VertexName::Str(s) => f.write_str(s),
        }
    }
}

/// `{p, vertices, action, facets}`; `p` and `action` are omitted for plain complexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub vertices: Vec<VertexName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<u32>>,
    pub facets: Vec<Vec<VertexName>>,
}

/// A parsed complex file.
#[derive(Debug, Clone)]
pub struct LoadedComplex {
    pub names: Vec<String>,
    pub complex: SimplicialComplex,
    pub zp: Option<ZpComplex>,
}

impl LoadedComplex {
    pub fn require_zp(&self, what: &str) -> Result<&ZpComplex, CliError> {
        self.zp
            .as_ref()
            .ok_or_else(|| CliError::domain(format!("{what} needs a Z_p-complex (p and action)")))
    }
}

impl ComplexFile {
    pub fn from_complex(
        names: &[String],
        complex: &SimplicialComplex,
        zp: Option<(u64, &[u32])>,
    ) -> Self {
        let vertices = names.iter().map(|n| VertexName::Str(n.clone())).collect();
        let facets = complex
            .facets()
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&v| VertexName::Str(names[v as usize].clone()))
                    .collect()
            })
            .collect();
        ComplexFile {
            p: zp.map(|z| z.0),
            vertices,
            action: zp.map(|z| z.1.to_vec()),
            facets,
        }
    }

    pub fn from_zp(names: &[String], z: &ZpComplex) -> Self {
        Self::from_complex(names, &z.complex, Some((z.p, &z.action)))
    }

    pub fn load(&self) -> Result<LoadedComplex, CliError> {
        let names: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i as u32).is_some() {
                return Err(CliError::parse(format!("vertex name {n:?} is repeated")));
            }
        }
        let mut facets = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            let mut ids = Vec::with_capacity(f.len());
            for v in f {
                let key = v.to_string();
                ids.push(*index.get(&key).ok_or_else(|| {
                    CliError::parse(format!("facet uses unknown vertex {key:?}"))
                })?);
            }
            facets.push(ids);
        }
        let n = names.len() as u32;
        let complex = SimplicialComplex::with_all_vertices(n, &facets).map_err(CliError::from)?;
        let zp = match (self.p, &self.action) {
            (Some(p), Some(action)) => {
                Some(ZpComplex::new(complex.clone(), p, action.clone()).map_err(CliError::from)?)
            }
            (None, None) => None,
            _ => return Err(CliError::parse("p and action must be given together")),
        };
        Ok(LoadedComplex { names, complex, zp })
    }
}

/// One cell of a chain complex file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub label: String,
    /// (face index in the dimension below, coefficient)
    pub boundary: Vec<(u32, Int)>,
    /// (image index, sign)
    pub action: (u32, i8),
}

/// `{p, cells}` with `cells[0]` the single cell of dimension -1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainComplexFile {
    pub p: u64,
    pub cells: Vec<Vec<CellEntry>>,
}

impl ChainComplexFile {
    pub fn from_free(x: &FreeZpChainComplex) -> Self {
        let cells = (-1..=x.dim())
            .map(|k| {
                (0..x.count(k))
                    .map(|i| CellEntry {
                        label: x.labels[(k + 1) as usize][i].clone(),
                        boundary: x.boundary_of(k, i).to_vec(),
                        action: x.act(k, i),
                    })
                    .collect()
            })
            .collect();
        ChainComplexFile { p: x.p, cells }
    }

    pub fn to_free(&self) -> Result<FreeZpChainComplex, CliError> {
        let x = FreeZpChainComplex {
            p: self.p,
            labels: self
                .cells
                .iter()
                .map(|l| l.iter().map(|c| c.label.clone()).collect())
                .collect(),
            boundary: self
                .cells
                .iter()
                .map(|l| l.iter().map(|c| c.boundary.clone()).collect())
                .collect(),
            action: self
                .cells
                .iter()
                .map(|l| l.iter().map(|c| c.action).collect())
                .collect(),
        };
        x.validate().map_err(CliError::from)?;
        Ok(x)
    }
}

/// Either kind of input file.
#[derive(Debug, Clone)]
pub enum AnyComplex {
    Simplicial(LoadedComplex),
    Chain(FreeZpChainComplex),
}

impl AnyComplex {
    /// The free chain complex the Smith engine works on.
    pub fn free(&self, what: &str) -> Result<FreeZpChainComplex, CliError> {
        match self {
            AnyComplex::Simplicial(l) => Ok(l.require_zp(what)?.to_free()),
            AnyComplex::Chain(x) => Ok(x.clone()),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn parse_any(text: &str) -> Result<AnyComplex, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))?;
    if v.get("cells").is_some() {
        let f: ChainComplexFile =
            serde_json::from_value(v).map_err(|e| CliError::parse(e.to_string()))?;
        Ok(AnyComplex::Chain(f.to_free()?))
    } else {
        let f: ComplexFile =
            serde_json::from_value(v).map_err(|e| CliError::parse(e.to_string()))?;
        Ok(AnyComplex::Simplicial(f.load()?))
    }
}

pub fn read_any(path: &Path) -> Result<AnyComplex, CliError> {
    parse_any(&read_text(path)?)
}

pub fn read_simplicial(path: &Path) -> Result<LoadedComplex, CliError> {
    match read_any(path)? {
        AnyComplex::Simplicial(l) => Ok(l),
        AnyComplex::Chain(_) => Err(CliError::domain(format!(
            "{} is a chain complex, a simplicial complex is needed",
            path.display()
        ))),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_and_string_names_parse_alike() {
        let a = parse_any(
            r#"{"p":2,"vertices":[0,1,2,3],"action":[2,3,0,1],"facets":[[0,1],[1,2],[2,3],[3,0]]}"#,
        )
        .unwrap();
        let b = parse_any(r#"{"p":2,"vertices":["0","1","2","3"],"action":[2,3,0,1],"facets":[["0","1"],["1","2"],["2","3"],["3","0"]]}"#).unwrap();
        match (a, b) {
            (AnyComplex::Simplicial(a), AnyComplex::Simplicial(b)) => assert_eq!(a.zp, b.zp),
            _ => panic!("expected simplicial complexes"),
        }
    }

    #[test]
    fn unknown_vertex_is_a_parse_error() {
        let e = parse_any(r#"{"vertices":["a"],"facets":[["a","b"]]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn fixed_simplex_is_a_domain_error() {
        let e = parse_any(r#"{"p":2,"vertices":["a","b"],"action":[1,0],"facets":[["a","b"]]}"#)
            .unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn chain_file_roundtrip() {
        let x = zpsmith::corpus::sphere(1).to_free();
        let f = ChainComplexFile::from_free(&x);
        let back: ChainComplexFile = serde_json::from_str(&to_json(&f)).unwrap();
        assert_eq!(back.to_free().unwrap(), x);
    }
}
