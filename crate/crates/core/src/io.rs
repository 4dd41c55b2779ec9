//! JSON file formats for systems, Markov sequences and Grassmannian points.
//!
//! Systems:
//! `{"field": "Q" | {"Fp": q}, "m": .., "n": .., "p": .., "A": [[..]], "B": [[..]], "C": [[..]]}`
//! with matrices as lists of rows of strings (`"a/b"` over `Q`, residues over `F_q`).
//! A flat row-major list is accepted too, as are bare JSON integers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grassmann::{GrassmannPoint, InfiniteGrassmannPoint};
use crate::matrix::Matrix;
use crate::realization::MarkovSequence;
use crate::system::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl FieldJson {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldJson::Name(s) if s == "Q" => Ok(Field::Rationals),
            FieldJson::Name(s) => Err(Error::Parse(format!("unknown field {s:?}, expected \"Q\" or {{\"Fp\": q}}"))),
            FieldJson::Prime { fp } => Field::prime(*fp),
        }
    }
}

impl From<Field> for FieldJson {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => FieldJson::Name("Q".into()),
            Field::Prime(q) => FieldJson::Prime { fp: q },
        }
    }
}

/// Nested rows of decimal strings.
pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect()
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(Error::Parse(format!("matrix entry {other} is neither a string nor an integer"))),
    }
}

/// Reads a `rows x cols` matrix from nested rows or a flat row-major list.
pub fn matrix_from_json(field: Field, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let Value::Array(items) = v else {
        return Err(Error::Parse("matrix must be a JSON array".into()));
    };
    let texts: Vec<String> = if items.iter().any(Value::is_array) {
        if items.len() != rows {
            return Err(Error::ShapeMismatch { rows, cols });
        }
        let mut out = Vec::with_capacity(rows * cols);
        for row in items {
            let Value::Array(row) = row else {
                return Err(Error::Parse("mixed nested and flat matrix rows".into()));
            };
            if row.len() != cols {
                return Err(Error::ShapeMismatch { rows, cols });
            }
            for x in row {
                out.push(scalar_text(x)?);
            }
        }
        out
    } else if items.is_empty() && rows > 0 && cols == 0 {
        Vec::new()
    } else {
        items.iter().map(scalar_text).collect::<Result<_>>()?
    };
    let data = texts.iter().map(|t| field.parse_scalar(t)).collect::<Result<Vec<_>>>()?;
    Matrix::new(field, rows, cols, data)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub field: FieldJson,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: Value,
    #[serde(rename = "B")]
    pub b: Value,
    #[serde(rename = "C")]
    pub c: Value,
}

pub fn system_to_json(sys: &LinearSystem) -> SystemJson {
    let (m, n, p) = sys.dims();
    SystemJson {
        field: sys.field().into(),
        m,
        n,
        p,
        a: serde_json::to_value(matrix_to_json(sys.a())).expect("strings serialize"),
        b: serde_json::to_value(matrix_to_json(sys.b())).expect("strings serialize"),
        c: serde_json::to_value(matrix_to_json(sys.c())).expect("strings serialize"),
    }
}

pub fn system_from_json(js: &SystemJson) -> Result<LinearSystem> {
    let field = js.field.to_field()?;
    let a = matrix_from_json(field, js.n, js.n, &js.a)?;
    let b = matrix_from_json(field, js.n, js.m, &js.b)?;
    let c = matrix_from_json(field, js.p, js.n, &js.c)?;
    LinearSystem::new(a, b, c)
}

pub fn parse_system(text: &str) -> Result<LinearSystem> {
    system_from_json(&serde_json::from_str(text)?)
}

pub fn system_to_string(sys: &LinearSystem) -> String {
    serde_json::to_string_pretty(&system_to_json(sys)).expect("serializable")
}

/// Markov sequences: `{"field", "m", "p", "blocks": [block, …]}`, or a bare list of blocks
/// over `Q` with the shape read off the first block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovJson {
    pub field: FieldJson,
    pub m: usize,
    pub p: usize,
    pub blocks: Vec<Value>,
}

pub fn markov_to_json(seq: &MarkovSequence) -> MarkovJson {
    MarkovJson {
        field: seq.field().into(),
        m: seq.m(),
        p: seq.p(),
        blocks: seq
            .blocks()
            .iter()
            .map(|b| serde_json::to_value(matrix_to_json(b)).expect("strings serialize"))
            .collect(),
    }
}

pub fn parse_markov(text: &str) -> Result<MarkovSequence> {
    let v: Value = serde_json::from_str(text)?;
    let js = match v {
        Value::Array(blocks) => {
            let (p, m) = match blocks.first() {
                Some(Value::Array(rows)) if rows.iter().all(Value::is_array) => {
                    let m = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
                    (rows.len(), m)
                }
                Some(_) => (1, 1),
                None => return Err(Error::Parse("a bare Markov list needs at least one block".into())),
            };
            // Scalar shorthand: [1, 1, 2, 3] means 1 x 1 blocks.
            let blocks = blocks.into_iter().map(|b| if b.is_array() { b } else { Value::Array(vec![b]) }).collect();
            MarkovJson { field: FieldJson::Name("Q".into()), m, p, blocks }
        }
        other => serde_json::from_value(other)?,
    };
    let field = js.field.to_field()?;
    let blocks = js.blocks.iter().map(|b| matrix_from_json(field, js.p, js.m, b)).collect::<Result<Vec<_>>>()?;
    MarkovSequence::new(field, js.m, js.p, blocks)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannJson {
    pub field: FieldJson,
    pub k: usize,
    #[serde(rename = "N")]
    pub ambient: usize,
    /// 1-based pivot columns.
    pub pivots: Vec<usize>,
    pub rep: Vec<Vec<String>>,
}

pub fn grassmann_to_json(pt: &GrassmannPoint) -> GrassmannJson {
    GrassmannJson {
        field: pt.field().into(),
        k: pt.k(),
        ambient: pt.ambient(),
        pivots: pt.pivots().one_based(),
        rep: matrix_to_json(pt.rep()),
    }
}

pub fn grassmann_from_json(js: &GrassmannJson) -> Result<GrassmannPoint> {
    let field = js.field.to_field()?;
    let v = serde_json::to_value(&js.rep)?;
    let rep = matrix_from_json(field, js.k, js.ambient, &v)?;
    let pt = GrassmannPoint::from_matrix(&rep)?;
    if pt.pivots().one_based() != js.pivots {
        return Err(Error::Parse(format!(
            "pivots {:?} do not match the representative (expected {:?})",
            js.pivots,
            pt.pivots().one_based()
        )));
    }
    Ok(pt)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinitePointJson {
    pub m: usize,
    pub p: usize,
    pub stratum: usize,
    pub point: GrassmannJson,
}

pub fn infinite_point_to_json(pt: &InfiniteGrassmannPoint) -> InfinitePointJson {
    InfinitePointJson { m: pt.m(), p: pt.p(), stratum: pt.stratum(), point: grassmann_to_json(pt.point()) }
}
