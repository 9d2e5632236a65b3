//! Interchange formats. Matrices travel as shape-explicit sparse row
//! supports, codes as their two check matrices, complexes as boundary
//! matrices plus cell counts; the alist parity-check text format is read
//! (never written). Every file the tools emit is wrapped in an [`Envelope`]
//! recording the seed, the parameters, and the writing version, so a run
//! can be reproduced from its output alone.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, CssCode};
use crate::complex::{CellComplex, CellKind, ComplexError};
use crate::embed::{CoarseCertificate, EmbedTrace, EmbeddedComplex};
use crate::f2::{BitMatrix, F2Error};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("alist: {0}")]
    Alist(String),
    #[error("interchange: {0}")]
    Interchange(String),
    #[error(transparent)]
    Matrix(#[from] F2Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Serialize as pretty JSON with a trailing newline. Field order follows
/// struct order and maps are avoided in interchange types, so equal values
/// render to equal bytes.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("interchange types serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(s)?)
}

/// Output wrapper stamped on every file the tools write.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub version: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub payload: T,
}

impl<T> Envelope<T> {
    pub fn new(seed: u64, params: serde_json::Value, payload: T) -> Self {
        Envelope {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            params,
            payload,
        }
    }
}

/// Sparse matrix: row supports only, shape explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub row_support: Vec<Vec<usize>>,
}

impl From<&BitMatrix> for MatrixJson {
    fn from(m: &BitMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            row_support: m.row_support(),
        }
    }
}

impl TryFrom<&MatrixJson> for BitMatrix {
    type Error = IoError;
    fn try_from(j: &MatrixJson) -> Result<Self, IoError> {
        Ok(BitMatrix::from_support(j.rows, j.cols, &j.row_support)?)
    }
}

/// A CSS code: `h1` checks X, `h2` checks Z, optional qubit labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub h1: MatrixJson,
    pub h2: MatrixJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl From<&CssCode> for CodeJson {
    fn from(c: &CssCode) -> Self {
        CodeJson {
            h1: (&c.h1).into(),
            h2: (&c.h2).into(),
            labels: vec![],
        }
    }
}

impl TryFrom<&CodeJson> for CssCode {
    type Error = IoError;
    fn try_from(j: &CodeJson) -> Result<Self, IoError> {
        if !j.labels.is_empty() && j.labels.len() != j.h1.cols {
            return Err(IoError::Interchange(format!(
                "{} labels for {} qubits",
                j.labels.len(),
                j.h1.cols
            )));
        }
        // Validates shapes and the chain condition h1·h2ᵀ = 0.
        Ok(CssCode::new((&j.h1).try_into()?, (&j.h2).try_into()?)?)
    }
}

/// A code together with its qubit placement — what folding and padding
/// produce, and what locality certification consumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedCodeJson {
    pub code: CodeJson,
    pub placement: crate::locality::Placement,
}

/// A cell complex: cell counts per dimension and one boundary matrix per
/// positive dimension ((k−1)-cells × k-cells).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dims: usize,
    pub cells: Vec<usize>,
    pub boundary: Vec<MatrixJson>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
}

impl From<&CellComplex> for ComplexJson {
    fn from(x: &CellComplex) -> Self {
        let dims = x.dims();
        ComplexJson {
            dims,
            cells: (0..=dims).map(|k| x.cells(k)).collect(),
            // Subdivided complexes run to hundreds of thousands of cells;
            // boundary supports are inverted face lists, never a dense
            // matrix.
            boundary: (1..=dims)
                .map(|k| {
                    let mut row_support = vec![Vec::new(); x.cells(k - 1)];
                    for i in 0..x.cells(k) {
                        for &f in x.faces_of(k, i) {
                            row_support[f].push(i);
                        }
                    }
                    MatrixJson {
                        rows: x.cells(k - 1),
                        cols: x.cells(k),
                        row_support,
                    }
                })
                .collect(),
            kind: match x.kind() {
                CellKind::Simplicial => "simplicial".into(),
                CellKind::Cubical => "cubical".into(),
            },
            coords: x.coords().map(<[Vec<f64>]>::to_vec),
        }
    }
}

impl TryFrom<&ComplexJson> for CellComplex {
    type Error = IoError;
    fn try_from(j: &ComplexJson) -> Result<Self, IoError> {
        let kind = match j.kind.as_str() {
            "simplicial" => CellKind::Simplicial,
            "cubical" => CellKind::Cubical,
            other => {
                return Err(IoError::Interchange(format!(
                    "unknown complex kind {other:?}"
                )))
            }
        };
        if j.cells.len() != j.dims + 1 || j.boundary.len() != j.dims {
            return Err(IoError::Interchange(format!(
                "a {}-complex needs {} cell counts and {} boundary matrices, got {} and {}",
                j.dims,
                j.dims + 1,
                j.dims,
                j.cells.len(),
                j.boundary.len()
            )));
        }
        for (ki, b) in j.boundary.iter().enumerate() {
            if b.rows != j.cells[ki] || b.cols != j.cells[ki + 1] {
                return Err(IoError::Interchange(format!(
                    "boundary {} is {}×{}, cell counts say {}×{}",
                    ki + 1,
                    b.rows,
                    b.cols,
                    j.cells[ki],
                    j.cells[ki + 1]
                )));
            }
        }
        // from_faces wants column supports: faces of k-cell i = rows hit in
        // column i of the k-th boundary matrix. Inverted directly — a
        // dense detour would square the memory of large complexes.
        let faces: Vec<Vec<Vec<usize>>> = j
            .boundary
            .iter()
            .enumerate()
            .map(|(ki, b)| -> Result<_, IoError> {
                if b.row_support.len() != b.rows {
                    return Err(IoError::Interchange(format!(
                        "boundary {}: {} support rows for {} rows",
                        ki + 1,
                        b.row_support.len(),
                        b.rows
                    )));
                }
                let mut cols: Vec<Vec<usize>> = vec![Vec::new(); b.cols];
                for (r, support) in b.row_support.iter().enumerate() {
                    if support.windows(2).any(|w| w[0] >= w[1])
                        || support.last().is_some_and(|&c| c >= b.cols)
                    {
                        return Err(IoError::Interchange(format!(
                            "boundary {} row {r}: support not strictly sorted below {}",
                            ki + 1,
                            b.cols
                        )));
                    }
                    for &c in support {
                        cols[c].push(r);
                    }
                }
                Ok(cols)
            })
            .collect::<Result<_, _>>()?;
        let x = CellComplex::from_faces(kind, j.cells[0], faces)?;
        match &j.coords {
            Some(c) => Ok(x.with_coords(c.clone())?),
            None => Ok(x),
        }
    }
}

/// An embedding result: the subdivided complex, its vertex coordinates,
/// and the measured certificate and search trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedJson {
    pub complex: ComplexJson,
    pub coords: Vec<Vec<f64>>,
    pub certificate: CoarseCertificate,
    pub trace: EmbedTrace,
}

impl From<&EmbeddedComplex> for EmbeddedJson {
    fn from(e: &EmbeddedComplex) -> Self {
        EmbeddedJson {
            complex: (&e.complex).into(),
            coords: e.coords.clone(),
            certificate: e.certificate.clone(),
            trace: e.trace.clone(),
        }
    }
}

impl TryFrom<&EmbeddedJson> for EmbeddedComplex {
    type Error = IoError;
    fn try_from(j: &EmbeddedJson) -> Result<Self, IoError> {
        let complex: CellComplex = (&j.complex).try_into()?;
        if j.coords.len() != complex.cells(0) {
            return Err(IoError::Interchange(format!(
                "{} coordinate rows for {} vertices",
                j.coords.len(),
                complex.cells(0)
            )));
        }
        Ok(EmbeddedComplex {
            complex,
            coords: j.coords.clone(),
            certificate: j.certificate.clone(),
            trace: j.trace.clone(),
        })
    }
}

/// Parse the classical alist sparse parity-check format: `N M`, max
/// degrees, per-column then per-row degree lists, then 1-based index lists
/// (zero-padded rows allowed). Returns the M×N check matrix. Column and
/// row lists are cross-checked against each other.
pub fn parse_alist(text: &str) -> Result<BitMatrix, IoError> {
    let bad = |msg: String| IoError::Alist(msg);
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| bad(format!("non-integer token {t:?}")))
    });
    let mut next = |what: &str| {
        nums.next()
            .unwrap_or_else(|| Err(bad(format!("missing {what}"))))
    };
    let n = next("column count")?;
    let m = next("row count")?;
    let dc_max = next("max column degree")?;
    let dr_max = next("max row degree")?;
    let col_deg: Vec<usize> = (0..n)
        .map(|i| next(&format!("degree of column {i}")))
        .collect::<Result<_, _>>()?;
    let row_deg: Vec<usize> = (0..m)
        .map(|i| next(&format!("degree of row {i}")))
        .collect::<Result<_, _>>()?;
    if col_deg.iter().any(|&d| d > dc_max) || row_deg.iter().any(|&d| d > dr_max) {
        return Err(bad("degree exceeds declared maximum".into()));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(bad("column and row degree sums disagree".into()));
    }
    // Index blocks are padded to the max degree with zeros; entries are
    // 1-based.
    let mut read_block = |count: usize,
                          width: usize,
                          degrees: &[usize],
                          limit: usize,
                          what: &str|
     -> Result<Vec<Vec<usize>>, IoError> {
        let mut out = Vec::with_capacity(count);
        for (i, &deg) in degrees.iter().enumerate().take(count) {
            let mut support = Vec::with_capacity(deg);
            for j in 0..width {
                let v = next(&format!("{what} {i} entry {j}"))?;
                if j < deg {
                    if v == 0 || v > limit {
                        return Err(bad(format!("{what} {i}: index {v} out of range 1..={limit}")));
                    }
                    support.push(v - 1);
                } else if v != 0 {
                    return Err(bad(format!("{what} {i}: nonzero padding {v}")));
                }
            }
            support.sort_unstable();
            support.dedup();
            if support.len() != deg {
                return Err(bad(format!("{what} {i}: repeated index")));
            }
            out.push(support);
        }
        Ok(out)
    };
    let cols = read_block(n, dc_max, &col_deg, m, "column")?;
    let rows = read_block(m, dr_max, &row_deg, n, "row")?;
    if nums.next().is_some() {
        return Err(bad("trailing tokens after final block".into()));
    }
    let mat = BitMatrix::from_support(m, n, &rows)?;
    // The two redundant halves must describe the same matrix.
    if mat.transpose().row_support() != cols {
        return Err(bad("row and column blocks describe different matrices".into()));
    }
    Ok(mat)
}
