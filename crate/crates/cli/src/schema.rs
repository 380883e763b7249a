//! JSON input formats and their conversion to library types.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use modulikit_core::connection::{ConnectionData, FrameTuple, TorusWitness};
use modulikit_core::quiver::{double, Arrow, DoubleQuiverRep, Quiver};
use modulikit_core::weights::{decompose, WeightData};
use modulikit_core::{CMatrix, C64};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

/// Reads a file, or stdin for `-`.
pub fn read_value(path: &Path) -> Result<Value> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("not a valid {what}"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn into_matrix(self) -> Result<CMatrix> {
        let data = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(CMatrix::new(self.rows, self.cols, data)?)
    }
}

pub fn matrix_json(m: &CMatrix) -> Value {
    let entries: Vec<Value> = m.entries().iter().map(|z| json!([z.re, z.im])).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Either a plain list of integers (rank one) or the full form.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightsJson {
    Flat(Vec<i64>),
    Full { rank: usize, weights: Vec<Vec<i64>> },
}

impl WeightsJson {
    pub fn into_data(self) -> Result<WeightData> {
        Ok(match self {
            WeightsJson::Flat(ws) => WeightData::rank_one(&ws)?,
            WeightsJson::Full { rank, weights } => WeightData::new(rank, weights)?,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectionJson {
    weights: WeightsJson,
    #[serde(rename = "A")]
    a: MatrixJson,
    #[serde(rename = "B")]
    b: MatrixJson,
}

pub fn connection(v: Value) -> Result<ConnectionData> {
    let c: ConnectionJson = parse(v, "connection (expected keys weights, A, B)")?;
    let d = decompose(&c.weights.into_data()?);
    Ok(ConnectionData::new(d, c.a.into_matrix()?, c.b.into_matrix()?)?)
}

pub fn connection_json(c: &ConnectionData) -> Value {
    let d = c.decomposition();
    let weights: Vec<i64> = (0..d.dim()).map(|i| d.weight_of(i)[0]).collect();
    json!({ "weights": weights, "A": matrix_json(c.a()), "B": matrix_json(c.b()) })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    k: MatrixJson,
    from: Vec<usize>,
    to: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameJson {
    rank: usize,
    #[serde(rename = "A_list")]
    a_list: Vec<MatrixJson>,
    #[serde(rename = "B_list")]
    b_list: Vec<MatrixJson>,
    weights: Option<WeightsJson>,
    witnesses: Option<Vec<WitnessJson>>,
}

pub struct FrameInput {
    pub tuple: FrameTuple,
    pub witnesses: Option<Vec<TorusWitness>>,
}

pub fn is_frame(v: &Value) -> bool {
    v.get("A_list").is_some()
}

pub fn frame(v: Value) -> Result<FrameInput> {
    let f: FrameJson = parse(v, "frame tuple (expected keys rank, A_list, B_list)")?;
    if f.a_list.len() != f.rank || f.b_list.len() != f.rank {
        bail!("rank is {} but A_list has {} and B_list {} matrices", f.rank, f.a_list.len(), f.b_list.len());
    }
    let a = f.a_list.into_iter().map(MatrixJson::into_matrix).collect::<Result<_>>()?;
    let b = f.b_list.into_iter().map(MatrixJson::into_matrix).collect::<Result<_>>()?;
    let weights = f.weights.map(WeightsJson::into_data).transpose()?;
    let tuple = FrameTuple::new(a, b, weights)?;
    let witnesses = f
        .witnesses
        .map(|ws| {
            ws.into_iter()
                .map(|w| Ok(TorusWitness { k: w.k.into_matrix()?, from: w.from, to: w.to }))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(FrameInput { tuple, witnesses })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowJson {
    tail: usize,
    head: usize,
    label: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    vertices: Vec<usize>,
    arrows: Vec<ArrowJson>,
    matrices: BTreeMap<String, MatrixJson>,
}

/// `arrows` lists the original quiver; `matrices` is keyed by every arrow
/// label of its double.
pub fn rep(v: Value) -> Result<DoubleQuiverRep> {
    let r: RepJson = parse(v, "quiver representation (expected keys vertices, arrows, matrices)")?;
    let arrows = r.arrows.into_iter().map(|a| Arrow::new(a.tail, a.head, a.label)).collect();
    let dq = double(&Quiver::new(r.vertices, arrows)?);
    let mut matrices = r.matrices;
    let mut ordered = Vec::with_capacity(dq.arrows().len());
    for a in dq.arrows() {
        let m = matrices.remove(&a.label).ok_or_else(|| anyhow!("no matrix for arrow {}", a.label))?;
        ordered.push(m.into_matrix().with_context(|| format!("matrix {}", a.label))?);
    }
    if let Some(extra) = matrices.keys().next() {
        bail!("matrix {extra} does not belong to any arrow of the doubled quiver");
    }
    Ok(DoubleQuiverRep::new(dq, ordered)?)
}

pub fn matrix(v: Value) -> Result<CMatrix> {
    parse::<MatrixJson>(v, "matrix (expected keys rows, cols, entries)")?.into_matrix()
}
