//! JSON input files and deterministic pretty printing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cover::{MonodromyCover, RawCover, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::graphcover::CoverGraph;
use crate::lifting::CutPresentation;
use crate::presentation::{relator_preserved, Automorphism, Generator, GroupWord, Signature};
use crate::verdict::SearchData;

fn check_format(found: Option<u32>, what: &str) -> Result<()> {
    match found {
        None => Ok(()),
        Some(v) if v == FORMAT_VERSION => Ok(()),
        Some(v) => Err(Error::Format(format!(
            "{what}: unsupported format {v}, expected {FORMAT_VERSION}"
        ))),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

pub fn read_cover(text: &str) -> Result<MonodromyCover> {
    let raw: RawCover = parse(text, "cover file")?;
    check_format(raw.format, "cover file")?;
    MonodromyCover::from_raw(&raw)
}

pub fn read_graph(text: &str) -> Result<CoverGraph> {
    let graph: CoverGraph = parse(text, "graph file")?;
    check_format(graph.format, "graph file")?;
    graph.check()?;
    Ok(graph)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomorphism {
    label: String,
    /// Generator token to image word; unlisted generators are fixed.
    images: BTreeMap<String, GroupWord>,
    /// Images of the inverse automorphism, added to the set as `label^-1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<BTreeMap<String, GroupWord>>,
}

/// Mapping class data for a base surface:
/// `{"format", "genus", "branch_points", "automorphisms": [...], "cuts": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGens {
    #[serde(default)]
    format: Option<u32>,
    genus: usize,
    branch_points: usize,
    #[serde(default)]
    automorphisms: Option<Vec<RawAutomorphism>>,
    #[serde(default)]
    cuts: Option<Vec<CutPresentation>>,
}

fn automorphism(sig: Signature, label: &str, images: &BTreeMap<String, GroupWord>) -> Result<Automorphism> {
    let pairs = images
        .iter()
        .map(|(tok, w)| Ok((tok.parse::<Generator>()?, w.clone())))
        .collect::<Result<Vec<_>>>()?;
    let f = Automorphism::from_images(label, sig, pairs)?;
    if !relator_preserved(&f, sig) {
        return Err(Error::NotRelatorPreserving(label.to_string()));
    }
    Ok(f)
}

pub fn read_gens(text: &str, sig: Signature) -> Result<SearchData> {
    let raw: RawGens = parse(text, "gens file")?;
    check_format(raw.format, "gens file")?;
    let file_sig = Signature::new(raw.genus, raw.branch_points);
    if file_sig != sig {
        return Err(Error::Format(format!(
            "gens file is for {file_sig}, but the cover has signature {sig}"
        )));
    }
    let automorphisms = match raw.automorphisms {
        None => None,
        Some(list) => {
            let mut out = Vec::new();
            for entry in &list {
                let f = automorphism(sig, &entry.label, &entry.images)?;
                if let Some(inv) = &entry.inverse {
                    let g = automorphism(sig, &format!("{}^-1", entry.label), inv)?;
                    if !f.is_inverse_of(&g) {
                        return Err(Error::Format(format!(
                            "gens file: automorphism {:?} and its listed inverse do not compose to the identity",
                            entry.label
                        )));
                    }
                    out.push(f);
                    out.push(g);
                } else {
                    out.push(f);
                }
            }
            let mut labels: Vec<&str> = out.iter().map(Automorphism::label).collect();
            labels.sort_unstable();
            if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Format(format!("gens file: duplicate label {:?}", w[0])));
            }
            Some(out)
        }
    };
    if let Some(cuts) = &raw.cuts {
        for (i, c) in cuts.iter().enumerate() {
            c.check(sig).map_err(|e| Error::Format(format!("gens file: cuts[{i}]: {e}")))?;
        }
    }
    Ok(SearchData {
        automorphisms,
        cuts: raw.cuts,
    })
}

/// Pretty JSON with two-space indentation, keeping arrays of scalars on one
/// line. Output ends with a newline.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, depth + 1);
                let _ = write!(out, "{}: ", Value::String(k.clone()));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        scalar => {
            let _ = write!(out, "{scalar}");
        }
    }
}
