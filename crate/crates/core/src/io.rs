//! JSON documents for module complexes and dimension tables. Matrix entries are exact
//! rationals written as "p/q" (or "p").

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bgg::{BggError, ExtModuleComplex, SymComplex};
use crate::exact_linalg::{format_scalar, parse_scalar, Matrix};
use crate::gradedcat::{Degree, GradedOperator, MultiGradedSpace};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("not a module: {0}")]
    Module(#[from] BggError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    /// Ω-module complex, degrees `(i, k)`.
    Exterior,
    /// S-module complex, degrees `(p, q)`.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub degree: Degree,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub source: Degree,
    pub target: Degree,
    /// Row-major.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub kind: ModuleKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    pub pieces: Vec<PieceDoc>,
    #[serde(default)]
    pub differential: Vec<BlockDoc>,
    /// One list of blocks per generator, in order.
    #[serde(default)]
    pub action: Vec<Vec<BlockDoc>>,
}

fn op_to_blocks(op: &GradedOperator) -> Vec<BlockDoc> {
    op.blocks()
        .map(|((s, t), m)| BlockDoc {
            source: s.clone(),
            target: t.clone(),
            matrix: (0..m.rows()).map(|r| (0..m.cols()).map(|c| format_scalar(m.get(r, c))).collect()).collect(),
        })
        .collect()
}

fn blocks_to_op(space: &MultiGradedSpace, blocks: &[BlockDoc]) -> Result<GradedOperator, IoError> {
    let mut out = Vec::new();
    for b in blocks {
        let rows: Result<Vec<Vec<_>>, _> =
            b.matrix.iter().map(|r| r.iter().map(|e| parse_scalar(e)).collect::<Result<Vec<_>, _>>()).collect();
        let rows = rows.map_err(|e| IoError::Parse(e.to_string()))?;
        let m = if rows.is_empty() {
            Matrix::zeros(0, space.dim(&b.source))
        } else {
            Matrix::from_rows(rows).map_err(|e| IoError::Parse(e.to_string()))?
        };
        out.push(((b.source.clone(), b.target.clone()), m));
    }
    GradedOperator::from_blocks(space, space, out).map_err(|e| IoError::Parse(e.to_string()))
}

impl ModuleDoc {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    fn space(&self) -> Result<MultiGradedSpace, IoError> {
        let mut space = MultiGradedSpace::new(2);
        for p in &self.pieces {
            if p.degree.len() != 2 {
                return Err(IoError::Parse(format!("degree {:?} needs two entries", p.degree)));
            }
            space.set_dim(p.degree.clone(), p.dim);
        }
        Ok(space)
    }

    fn parts(&self) -> Result<(MultiGradedSpace, GradedOperator, Vec<GradedOperator>), IoError> {
        if self.action.len() != self.n {
            return Err(IoError::Parse(format!("{} action lists for n = {}", self.action.len(), self.n)));
        }
        let space = self.space()?;
        let d = blocks_to_op(&space, &self.differential)?;
        let action = self.action.iter().map(|b| blocks_to_op(&space, b)).collect::<Result<_, _>>()?;
        Ok((space, d, action))
    }

    pub fn from_exterior(m: &ExtModuleComplex) -> Self {
        ModuleDoc {
            kind: ModuleKind::Exterior,
            n: m.n(),
            window: None,
            pieces: pieces(m.space()),
            differential: op_to_blocks(m.differential()),
            action: (1..=m.n()).map(|j| op_to_blocks(m.action(j))).collect(),
        }
    }

    pub fn from_symmetric(c: &SymComplex) -> Self {
        ModuleDoc {
            kind: ModuleKind::Symmetric,
            n: c.n(),
            window: c.window(),
            pieces: pieces(c.space()),
            differential: op_to_blocks(c.differential()),
            action: (1..=c.n()).map(|j| op_to_blocks(c.action(j))).collect(),
        }
    }

    pub fn to_exterior(&self) -> Result<ExtModuleComplex, IoError> {
        if self.kind != ModuleKind::Exterior {
            return Err(IoError::Parse("expected an exterior module".into()));
        }
        let (space, d, action) = self.parts()?;
        Ok(ExtModuleComplex::new(self.n, space, d, action)?)
    }

    pub fn to_symmetric(&self) -> Result<SymComplex, IoError> {
        if self.kind != ModuleKind::Symmetric {
            return Err(IoError::Parse("expected a symmetric module".into()));
        }
        let (space, d, action) = self.parts()?;
        Ok(SymComplex::new(self.n, self.window, space, d, action)?)
    }
}

fn pieces(space: &MultiGradedSpace) -> Vec<PieceDoc> {
    space.components().filter(|(_, d)| *d > 0).map(|(deg, d)| PieceDoc { degree: deg.clone(), dim: d }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub index: Vec<i64>,
    pub dims: Vec<usize>,
}

/// `{ "n": .., "entries": [ { "index": [..], "dims": [..] } ] }`, entries in sorted index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub n: usize,
    pub entries: Vec<TableEntry>,
}

impl TableDoc {
    pub fn new(n: usize, mut entries: Vec<TableEntry>) -> Self {
        entries.sort_by(|a, b| a.index.cmp(&b.index));
        TableDoc { n, entries }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    /// One line per entry: the index components, then the dimensions.
    pub fn to_csv(&self) -> String {
        let width = self.entries.first().map_or(0, |e| e.index.len());
        let dims = self.entries.iter().map(|e| e.dims.len()).max().unwrap_or(0);
        let names = ["i", "j", "k"];
        let mut header: Vec<String> = (0..width).map(|a| names.get(a).map_or(format!("x{a}"), |s| s.to_string())).collect();
        header.extend((0..dims).map(|d| format!("dim{d}")));
        let mut out = header.join(",") + "\n";
        for e in &self.entries {
            let mut row: Vec<String> = e.index.iter().map(i64::to_string).collect();
            row.extend(e.dims.iter().map(usize::to_string));
            out += &(row.join(",") + "\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_round_trip() {
        let m = ExtModuleComplex::exterior_algebra(2);
        let doc = ModuleDoc::from_exterior(&m);
        let back = ModuleDoc::from_json(&doc.to_json()).unwrap().to_exterior().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(ModuleDoc::from_json("{"), Err(IoError::Parse(_))));
        let bad = r#"{"kind":"exterior","n":1,"pieces":[{"degree":[0,0],"dim":1}],"action":[[{"source":[0,0],"target":[0,1],"matrix":[["x"]]}]]}"#;
        assert!(matches!(ModuleDoc::from_json(bad).unwrap().to_exterior(), Err(IoError::Parse(_))));
    }
}
