//! JSON files: `premodular-data/v1` and `extension-witness/v1`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{CMatrix, PreModularData};
use crate::error::{Error, Result};
use crate::extensions::{EmbeddedCategory, ExtensionWitness};
use crate::phase::Phase;
use crate::ring::FusionRing;

pub const DATA_FORMAT: &str = "premodular-data/v1";
pub const WITNESS_FORMAT: &str = "extension-witness/v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DataBody {
    rank: usize,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    fusion: Vec<[i64; 4]>,
    twists: Vec<String>,
    smatrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct DataFile {
    format: String,
    #[serde(flatten)]
    body: DataBody,
}

#[derive(Serialize, Deserialize)]
struct OverBody {
    data: DataBody,
    embedding: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    format: String,
    #[serde(flatten)]
    bulk: DataBody,
    base: DataFile,
    embedding: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    over: Option<OverBody>,
}

#[derive(Deserialize)]
struct Header {
    format: String,
}

/// A parsed file.
#[derive(Clone, Debug)]
pub enum Document {
    Data(PreModularData),
    Witness(ExtensionWitness),
}

fn at(location: impl Into<String>, message: impl ToString) -> Error {
    Error::Parse { location: location.into(), message: message.to_string() }
}

fn from_serde(e: serde_json::Error) -> Error {
    at(format!("line {} column {}", e.line(), e.column()), e)
}

fn body_of(data: &PreModularData) -> DataBody {
    let r = data.rank();
    DataBody {
        rank: r,
        labels: data.labels().to_vec(),
        unit: data.unit(),
        dual: data.ring().duals().to_vec(),
        fusion: data.ring().entries().map(|(a, b, c, n)| [a as i64, b as i64, c as i64, i64::from(n)]).collect(),
        twists: data.twists().iter().map(|t| t.to_string()).collect(),
        smatrix: (0..r).map(|a| (0..r).map(|b| [data.s(a, b).re, data.s(a, b).im]).collect()).collect(),
    }
}

fn data_of(body: &DataBody, path: &str) -> Result<PreModularData> {
    let r = body.rank;
    let field = |name: &str| if path.is_empty() { name.to_string() } else { format!("{path}.{name}") };
    if body.labels.len() != r {
        return Err(at(field("labels"), format!("{} labels for rank {r}", body.labels.len())));
    }
    if body.dual.len() != r {
        return Err(at(field("dual"), format!("{} entries for rank {r}", body.dual.len())));
    }
    if let Some(i) = body.dual.iter().position(|&d| d >= r) {
        return Err(at(format!("{}[{i}]", field("dual")), "index out of range"));
    }
    if body.unit >= r {
        return Err(at(field("unit"), "index out of range"));
    }
    let mut entries = Vec::with_capacity(body.fusion.len());
    for (i, &[a, b, c, n]) in body.fusion.iter().enumerate() {
        let loc = format!("{}[{i}]", field("fusion"));
        if [a, b, c].iter().any(|&x| x < 0 || x as usize >= r) {
            return Err(at(loc, "index out of range"));
        }
        if n < 0 {
            return Err(at(loc, format!("negative multiplicity {n}")));
        }
        let n = u32::try_from(n).map_err(|_| at(loc.clone(), "multiplicity too large"))?;
        entries.push((a as usize, b as usize, c as usize, n));
    }
    if body.twists.len() != r {
        return Err(at(field("twists"), format!("{} twists for rank {r}", body.twists.len())));
    }
    let twists = body
        .twists
        .iter()
        .enumerate()
        .map(|(i, t)| t.parse::<Phase>().map_err(|e| at(format!("{}[{i}]", field("twists")), e)))
        .collect::<Result<Vec<_>>>()?;
    if body.smatrix.len() != r || body.smatrix.iter().any(|row| row.len() != r) {
        return Err(at(field("smatrix"), format!("expected a {r}x{r} array")));
    }
    let smatrix = CMatrix::from_fn(r, r, |a, b| Complex64::new(body.smatrix[a][b][0], body.smatrix[a][b][1]));
    let ring = FusionRing::new(body.labels.clone(), body.unit, body.dual.clone(), entries)
        .map_err(|e| at(field("fusion"), e))?;
    PreModularData::new(ring, twists, smatrix).map_err(|e| at(if path.is_empty() { "$" } else { path }, e))
}

fn check_embedding(emb: &[usize], len: usize, bulk_rank: usize, loc: &str) -> Result<()> {
    if emb.len() != len {
        return Err(at(loc, format!("{} entries for {len} labels", emb.len())));
    }
    if let Some(i) = emb.iter().position(|&x| x >= bulk_rank) {
        return Err(at(format!("{loc}[{i}]"), "index out of range"));
    }
    Ok(())
}

/// Parses either file format, dispatching on the `format` tag.
pub fn parse_str(text: &str) -> Result<Document> {
    let header: Header = serde_json::from_str(text).map_err(from_serde)?;
    match header.format.as_str() {
        DATA_FORMAT => {
            let file: DataFile = serde_json::from_str(text).map_err(from_serde)?;
            Ok(Document::Data(data_of(&file.body, "")?))
        }
        WITNESS_FORMAT => {
            let file: WitnessFile = serde_json::from_str(text).map_err(from_serde)?;
            if file.base.format != DATA_FORMAT {
                return Err(at("base.format", format!("expected {DATA_FORMAT}")));
            }
            let bulk = data_of(&file.bulk, "")?;
            let base = data_of(&file.base.body, "base")?;
            check_embedding(&file.embedding, base.rank(), bulk.rank(), "embedding")?;
            let over = match &file.over {
                Some(o) => {
                    let data = data_of(&o.data, "over.data")?;
                    check_embedding(&o.embedding, data.rank(), bulk.rank(), "over.embedding")?;
                    Some(EmbeddedCategory { data, embedding: o.embedding.clone() })
                }
                None => None,
            };
            Ok(Document::Witness(ExtensionWitness { base, bulk, embedding: file.embedding, over }))
        }
        other => Err(at("format", format!("unknown format tag {other:?}"))),
    }
}

pub fn parse_data_str(text: &str) -> Result<PreModularData> {
    match parse_str(text)? {
        Document::Data(d) => Ok(d),
        Document::Witness(_) => Err(at("format", format!("expected {DATA_FORMAT}"))),
    }
}

pub fn parse_witness_str(text: &str) -> Result<ExtensionWitness> {
    match parse_str(text)? {
        Document::Witness(w) => Ok(w),
        Document::Data(_) => Err(at("format", format!("expected {WITNESS_FORMAT}"))),
    }
}

/// Canonically ordered JSON for premodular data.
pub fn data_to_string(data: &PreModularData) -> String {
    let (canon, _) = data.canonical_form();
    let file = DataFile { format: DATA_FORMAT.into(), body: body_of(&canon) };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// Canonically ordered JSON for an extension witness.
pub fn witness_to_string(w: &ExtensionWitness) -> String {
    let w = w.canonicalized();
    let file = WitnessFile {
        format: WITNESS_FORMAT.into(),
        bulk: body_of(&w.bulk),
        base: DataFile { format: DATA_FORMAT.into(), body: body_of(&w.base) },
        embedding: w.embedding.clone(),
        over: w.over.as_ref().map(|c| OverBody { data: body_of(&c.data), embedding: c.embedding.clone() }),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn document_to_string(doc: &Document) -> String {
    match doc {
        Document::Data(d) => data_to_string(d),
        Document::Witness(w) => witness_to_string(w),
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        other => other,
    }
}

pub fn read_document(path: &Path) -> Result<Document> {
    parse_str(&fs::read_to_string(path)?).map_err(|e| with_path(path, e))
}

pub fn read_data(path: &Path) -> Result<PreModularData> {
    parse_data_str(&fs::read_to_string(path)?).map_err(|e| with_path(path, e))
}

pub fn read_witness(path: &Path) -> Result<ExtensionWitness> {
    parse_witness_str(&fs::read_to_string(path)?).map_err(|e| with_path(path, e))
}

pub fn write_document(path: &Path, doc: &Document) -> Result<()> {
    fs::write(path, document_to_string(doc) + "\n")?;
    Ok(())
}

/// `*.json` files of a directory in file-name order.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn read_witness_dir(dir: &Path) -> Result<Vec<(PathBuf, ExtensionWitness)>> {
    json_files(dir)?.into_iter().map(|p| read_witness(&p).map(|w| (p, w))).collect()
}

/// Writes `NN.json` for each witness; returns the paths.
pub fn write_witness_dir(dir: &Path, witnesses: &[ExtensionWitness]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let width = witnesses.len().saturating_sub(1).to_string().len().max(2);
    witnesses
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let path = dir.join(format!("{i:0width$}.json"));
            fs::write(&path, witness_to_string(w) + "\n")?;
            Ok(path)
        })
        .collect()
}
