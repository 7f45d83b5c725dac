//! JSON file formats for functors, sheaves, compose specs, and reports.
//!
//! Scalars are written as decimal or `"a/b"` strings; bare JSON integers are
//! accepted on input.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::functor::FunctorData;
use crate::linalg::{Field, Matrix, Scalar};
use crate::sheaves::{CoherentSheaf, P1Point, TorsionBlock, TorsionSheaf};
use crate::structure::{Decomposition, PropertyReport};

fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => field.parse(&n.to_string()),
        },
        other => Err(Error::Format(format!("expected a scalar, found {other}"))),
    }
}

fn matrix_from_json(field: Field, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let bad = || Error::Format(format!("expected a {rows}x{cols} matrix"));
    let rs = v.as_array().ok_or_else(bad)?;
    if rs.len() != rows {
        return Err(bad());
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in rs {
        let cs = r.as_array().ok_or_else(bad)?;
        if cs.len() != cols {
            return Err(bad());
        }
        for c in cs {
            data.push(scalar_from_json(field, c)?);
        }
    }
    Ok(Matrix::from_vec(field, rows, cols, data))
}

fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|s| Value::String(s.to_string())).collect()))
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct FunctorFile {
    field: String,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    x0: Vec<Value>,
    x1: Vec<Value>,
}

pub fn functor_from_json(text: &str) -> Result<FunctorData> {
    let raw: FunctorFile = serde_json::from_str(text)?;
    let field = Field::parse_tag(&raw.field)?;
    if raw.hi < raw.lo || raw.dims.len() as i64 != raw.hi - raw.lo + 1 {
        return Err(Error::Format("dims do not cover the window".into()));
    }
    let len = (raw.hi - raw.lo) as usize;
    if raw.x0.len() != len || raw.x1.len() != len {
        return Err(Error::Format(format!("expected {len} maps of each kind")));
    }
    let read = |ms: &[Value]| -> Result<Vec<Matrix>> {
        ms.iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(field, raw.dims[k + 1], raw.dims[k], m))
            .collect()
    };
    let x0 = read(&raw.x0)?;
    let x1 = read(&raw.x1)?;
    FunctorData::new(field, raw.lo, raw.hi, raw.dims.clone(), x0, x1)
}

pub fn functor_to_json(f: &FunctorData) -> String {
    let file = FunctorFile {
        field: f.field().tag(),
        lo: f.lo(),
        hi: f.hi(),
        dims: f.dims().to_vec(),
        x0: f.x0_maps().iter().map(matrix_to_json).collect(),
        x1: f.x1_maps().iter().map(matrix_to_json).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BlockEntry {
    pub point: [Value; 2],
    pub mult: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct H1Entry {
    pub i: i64,
    pub l: usize,
}

fn torsion_from_entries(field: Field, entries: &[BlockEntry]) -> Result<TorsionSheaf> {
    let mut blocks = Vec::new();
    for e in entries {
        if e.mult == 0 {
            return Err(Error::Format("multiplicity must be positive".into()));
        }
        let p0 = scalar_from_json(field, &e.point[0])?;
        let p1 = scalar_from_json(field, &e.point[1])?;
        blocks.push(TorsionBlock {
            point: P1Point::new(&p0, &p1)?,
            mult: e.mult,
        });
    }
    Ok(TorsionSheaf::new(blocks))
}

fn torsion_to_entries(t: &TorsionSheaf) -> Vec<BlockEntry> {
    t.blocks()
        .iter()
        .map(|b| BlockEntry {
            point: [Value::String(b.point.p0().to_string()), Value::String(b.point.p1().to_string())],
            mult: b.mult,
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SheafFile {
    #[serde(default)]
    bundle: Vec<i64>,
    #[serde(default)]
    torsion: Vec<BlockEntry>,
}

/// Reads a sheaf with its points taken in `field`.
pub fn sheaf_from_json(text: &str, field: Field) -> Result<CoherentSheaf> {
    let raw: SheafFile = serde_json::from_str(text)?;
    Ok(CoherentSheaf::new(raw.bundle, torsion_from_entries(field, &raw.torsion)?))
}

pub fn sheaf_to_json(s: &CoherentSheaf) -> String {
    let file = SheafFile {
        bundle: s.bundle().to_vec(),
        torsion: torsion_to_entries(s.torsion()),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

/// Instance description: a window, torsion blocks, `H^1` multiplicities, and
/// an optional gauge seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposeSpec {
    pub field: Field,
    pub lo: i64,
    pub hi: i64,
    pub decomposition: Decomposition,
    pub gauge_seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct ComposeFile {
    field: String,
    lo: i64,
    hi: i64,
    #[serde(default)]
    torsion: Vec<BlockEntry>,
    #[serde(default)]
    h1: Vec<H1Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gauge_seed: Option<u64>,
}

pub fn compose_spec_from_json(text: &str) -> Result<ComposeSpec> {
    let raw: ComposeFile = serde_json::from_str(text)?;
    let field = Field::parse_tag(&raw.field)?;
    let torsion = torsion_from_entries(field, &raw.torsion)?;
    let mut h1_mults = std::collections::BTreeMap::new();
    for e in &raw.h1 {
        if e.l > 0 {
            *h1_mults.entry(e.i).or_insert(0) += e.l;
        }
    }
    let spec = ComposeSpec {
        field,
        lo: raw.lo,
        hi: raw.hi,
        decomposition: Decomposition { torsion, h1_mults },
        gauge_seed: raw.gauge_seed,
    };
    spec.check()?;
    Ok(spec)
}

pub fn compose_spec_to_json(spec: &ComposeSpec) -> String {
    let file = ComposeFile {
        field: spec.field.tag(),
        lo: spec.lo,
        hi: spec.hi,
        torsion: torsion_to_entries(&spec.decomposition.torsion),
        h1: h1_entries(&spec.decomposition),
        gauge_seed: spec.gauge_seed,
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

fn h1_entries(d: &Decomposition) -> Vec<H1Entry> {
    d.h1_mults.iter().map(|(&i, &l)| H1Entry { i, l }).collect()
}

impl ComposeSpec {
    /// `hi >= 2`, `lo <= hi - 2`, and for every `H^1` twist `i` both
    /// `lo <= -i-3` and `hi >= 1-i`, so the window holds a degree below every
    /// socle and two stable degrees above every `H^1` summand.
    pub fn check(&self) -> Result<()> {
        if self.hi < 2 {
            return Err(Error::Format(format!("window top {} is below 2", self.hi)));
        }
        if self.lo > self.hi - 2 {
            return Err(Error::Format(format!("window [{}, {}] spans fewer than three degrees", self.lo, self.hi)));
        }
        if let Some(&i) = self.decomposition.h1_mults.keys().next_back() {
            if self.lo > -i - 3 {
                return Err(Error::Format(format!("window bottom {} is above {}", self.lo, -i - 3)));
            }
        }
        if let Some(&i) = self.decomposition.h1_mults.keys().next() {
            if self.hi < 1 - i {
                return Err(Error::Format(format!("window top {} is below {}", self.hi, 1 - i)));
            }
        }
        Ok(())
    }

    /// The composed functor, gauged when a seed is present.
    pub fn build(&self) -> FunctorData {
        let f = self.decomposition.compose(self.field, self.lo, self.hi);
        match self.gauge_seed {
            Some(s) => crate::functor::gauge_scramble(&f, s),
            None => f,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CertificateSummary {
    pub checked: bool,
    pub window: [i64; 2],
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PropertyLine {
    pub claim: String,
    pub pass: bool,
    pub status: String,
}

/// The decomposition report written by the command-line frontend.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub torsion: Vec<BlockEntry>,
    pub h1: Vec<H1Entry>,
    pub certificate: CertificateSummary,
    pub properties: Vec<PropertyLine>,
}

impl Report {
    pub fn new(d: &Decomposition, checked: bool, window: [i64; 2], props: &PropertyReport) -> Report {
        Report {
            torsion: torsion_to_entries(&d.torsion),
            h1: h1_entries(d),
            certificate: CertificateSummary { checked, window },
            properties: props
                .entries
                .iter()
                .map(|e| PropertyLine {
                    claim: e.claim.clone(),
                    pass: e.status == crate::structure::Status::Pass,
                    status: e.status.to_string(),
                })
                .collect(),
        }
    }

    pub fn decomposition(&self, field: Field) -> Result<Decomposition> {
        Ok(Decomposition {
            torsion: torsion_from_entries(field, &self.torsion)?,
            h1_mults: self.h1.iter().map(|e| (e.i, e.l)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
