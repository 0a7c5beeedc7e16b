//! JSON space documents and DOT export.
//!
//! ```json
//! {
//!   "name": "S2",
//!   "points": ["a", "b"],
//!   "limits": { "a": ["a", "b"], "b": ["b"], "a b": ["b"] }
//! }
//! ```
//!
//! Keys of `limits` are bases written as labels in point order joined by
//! single spaces. Missing keys mean an empty limit set.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::Error;
use crate::filters::{Carrier, Mapping, PointSet};
use crate::function_space::FunctionSpace;
use crate::search::Witness;
use crate::spaces::{open_sets, FiniteTopology, Preconvergence};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("bad subset key `{0}`")]
    BadSubsetKey(String),
    #[error(transparent)]
    Space(#[from] Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Schema {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// A JSON object read into a list so that key order and duplicates survive.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OrderedMap<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for OrderedMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor<V>(std::marker::PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for EntriesVisitor<V> {
            type Value = OrderedMap<V>;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = access.next_entry()? {
                    entries.push(entry);
                }
                Ok(OrderedMap(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor(std::marker::PhantomData))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    name: String,
    graph: OrderedMap<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: String,
    points: Vec<String>,
    limits: OrderedMap<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    functions: Option<Vec<RawFunction>>,
}

/// A named space with optional metadata. `functions` is present on
/// documents describing a function space and lists, per point, the map it
/// stands for as a graph from source labels to target labels.
/// A function's name and its graph as `(point, value)` label pairs.
pub type NamedGraph = (String, Vec<(String, String)>);

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDocument {
    pub name: String,
    pub space: Preconvergence,
    pub description: Option<String>,
    pub provenance: Option<String>,
    pub functions: Option<Vec<NamedGraph>>,
}

impl SpaceDocument {
    pub fn new(name: impl Into<String>, space: Preconvergence) -> Self {
        SpaceDocument {
            name: name.into(),
            space,
            description: None,
            provenance: None,
            functions: None,
        }
    }

    /// Document for `C(X,Y)` with its function index table.
    pub fn for_function_space(name: impl Into<String>, fs: &FunctionSpace) -> Self {
        let source = fs.source().carrier();
        let target = fs.target().carrier();
        let functions = fs
            .structure()
            .carrier()
            .labels()
            .iter()
            .zip(fs.functions())
            .map(|(label, f)| {
                let graph = (0..source.len())
                    .map(|p| (source.label(p).to_string(), target.label(f.apply(p)).to_string()))
                    .collect();
                (label.clone(), graph)
            })
            .collect();
        SpaceDocument {
            functions: Some(functions),
            ..SpaceDocument::new(name, fs.structure().clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub document: SpaceDocument,
    pub warnings: Vec<String>,
}

fn parse_key(carrier: &Carrier, key: &str) -> Result<PointSet, FormatError> {
    let labels: Vec<&str> = key.split(' ').collect();
    if labels.iter().any(|l| l.is_empty()) {
        return Err(FormatError::BadSubsetKey(key.to_string()));
    }
    let mut last = None;
    let mut set = PointSet::EMPTY;
    for label in labels {
        let i = carrier
            .index_of(label)
            .ok_or_else(|| FormatError::UnknownLabel(label.to_string()))?;
        if last.is_some_and(|j| j >= i) {
            return Err(FormatError::BadSubsetKey(key.to_string()));
        }
        last = Some(i);
        set = set.with(i);
    }
    Ok(set)
}

fn parse_labels(carrier: &Carrier, labels: &[String]) -> Result<PointSet, FormatError> {
    labels.iter().try_fold(PointSet::EMPTY, |acc, l| {
        carrier
            .index_of(l)
            .map(|i| acc.with(i))
            .ok_or_else(|| FormatError::UnknownLabel(l.clone()))
    })
}

pub fn parse_space(text: &str) -> Result<Parsed, FormatError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    let carrier = Arc::new(Carrier::new(raw.points.iter().cloned())?);
    let mut space = Preconvergence::empty(carrier.clone());
    let mut seen = vec![false; 1usize << carrier.len()];
    for (key, values) in &raw.limits.0 {
        let base = parse_key(&carrier, key)?;
        if std::mem::replace(&mut seen[base.bits() as usize], true) {
            return Err(FormatError::DuplicateKey(key.clone()));
        }
        space.set_limits(base, parse_labels(&carrier, values)?);
    }
    let missing: Vec<String> = carrier
        .full()
        .nonempty_subsets()
        .filter(|b| !seen[b.bits() as usize])
        .map(|b| format!("\"{}\"", carrier.set_key(b)))
        .collect();
    let mut warnings = vec![];
    if !missing.is_empty() {
        let shown = missing.len().min(4);
        let more = match missing.len() - shown {
            0 => String::new(),
            rest => format!(" and {rest} more"),
        };
        warnings.push(format!(
            "no limits given for {}{more}; treated as empty",
            missing[..shown].join(", ")
        ));
    }
    let functions = raw.functions.map(|fs| {
        fs.into_iter()
            .map(|f| (f.name, f.graph.0))
            .collect::<Vec<_>>()
    });
    Ok(Parsed {
        document: SpaceDocument {
            name: raw.name,
            space,
            description: raw.description,
            provenance: raw.provenance,
            functions,
        },
        warnings,
    })
}

/// Bases ordered by size, then lexicographically by point indices.
fn canonical_bases(n: usize) -> Vec<PointSet> {
    let mut bases: Vec<PointSet> = PointSet::full(n).nonempty_subsets().collect();
    bases.sort_by_key(|b| (b.len(), b.iter().collect::<Vec<_>>()));
    bases
}

fn raw_document(doc: &SpaceDocument) -> RawDocument {
    let l = &doc.space;
    let c = l.carrier();
    let limits = canonical_bases(l.size())
        .into_iter()
        .filter(|&b| !l.limits(b).is_empty())
        .map(|b| {
            let values = l.limits(b).iter().map(|p| c.label(p).to_string()).collect();
            (c.set_key(b), values)
        })
        .collect();
    RawDocument {
        name: doc.name.clone(),
        points: c.labels().to_vec(),
        limits: OrderedMap(limits),
        description: doc.description.clone(),
        provenance: doc.provenance.clone(),
        functions: doc.functions.as_ref().map(|fs| {
            fs.iter()
                .map(|(name, graph)| RawFunction {
                    name: name.clone(),
                    graph: OrderedMap(graph.clone()),
                })
                .collect()
        }),
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn serialize_document(doc: &SpaceDocument) -> String {
    let mut text = serde_json::to_string_pretty(&raw_document(doc)).expect("plain data");
    text.push('\n');
    text
}

pub fn serialize_space(l: &Preconvergence, name: &str) -> String {
    serialize_document(&SpaceDocument::new(name, l.clone()))
}

#[derive(Serialize)]
struct RawWitness {
    property: String,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    replay_seed: Option<u64>,
    spaces: Vec<RawDocument>,
    maps: Vec<Vec<String>>,
    sets: Vec<String>,
    points: Vec<String>,
}

/// Deterministic JSON for a search witness. Maps are written as the list
/// of image labels of the domain points.
pub fn serialize_witness(w: &Witness) -> String {
    let x = &w.spaces[0];
    let names = ["domain", "target"];
    let second = if matches!(w.property, crate::search::Property::QuotientLimit) {
        "quotient"
    } else {
        names[1]
    };
    let spaces = w
        .spaces
        .iter()
        .enumerate()
        .map(|(i, s)| raw_document(&SpaceDocument::new(if i == 0 { names[0] } else { second }, s.clone())))
        .collect();
    let target = w.spaces.get(1).map(|s| s.carrier().clone());
    let maps = w
        .maps
        .iter()
        .map(|m: &Mapping| {
            m.graph()
                .iter()
                .map(|&v| match &target {
                    Some(t) => t.label(v).to_string(),
                    None => v.to_string(),
                })
                .collect()
        })
        .collect();
    let raw = RawWitness {
        property: w.property.name().to_string(),
        detail: w.detail.clone(),
        replay_seed: w.replay_seed,
        spaces,
        maps,
        sets: w.sets.iter().map(|&s| x.carrier().set_key(s)).collect(),
        points: w.points.iter().map(|&p| x.carrier().label(p).to_string()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("plain data");
    text.push('\n');
    text
}

fn dot_id(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Specialization preorder of a finite topology: an edge `x → y` for
/// `x ≠ y` with `x` in the closure of `{y}`.
pub fn export_dot_topology(tau: &FiniteTopology, name: &str) -> String {
    let c = tau.carrier();
    let mut out = format!("digraph {} {{\n", dot_id(name));
    for label in c.labels() {
        let _ = writeln!(out, "  {};", dot_id(label));
    }
    for x in 0..c.len() {
        for y in 0..c.len() {
            if x != y && tau.neighborhood(x).contains(y) {
                let _ = writeln!(out, "  {} -> {};", dot_id(c.label(x)), dot_id(c.label(y)));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// DOT for the induced topology of `l`.
pub fn export_dot(l: &Preconvergence, name: &str) -> String {
    export_dot_topology(&open_sets(l), name)
}
