//! JSON formats for every domain type, the bundled reference table, and
//! Hasse-diagram export.
//!
//! Output is canonical: struct fields serialize in declaration order and
//! every collection is sorted, so equal values give byte-identical text.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bracketing::{OneBracketing, OneBracketingJson};
use crate::poset::{GradedPoset, PosetJson};
use crate::rrt::Rrt;
use crate::treepair::{TreePair, TreePairJson};
use crate::twobracketing::{TwoBracketing, TwoBracketingCandidate};

const APPENDIX_JSON: &str = include_str!("../data/appendix.json");
const APPENDIX_SHA256: &str = include_str!("../data/appendix.json.sha256");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid {kind}: {message}")]
    Invalid { kind: &'static str, message: String },
    #[error("reference data checksum mismatch: expected {expected}, found {found}")]
    CorruptReferenceData { expected: String, found: String },
    #[error("unrecognized document shape")]
    UnknownShape,
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn invalid(kind: &'static str) -> impl Fn(&dyn std::fmt::Display) -> IoError {
    move |e| IoError::Invalid { kind, message: e.to_string() }
}

/// Lossless text form of a value: `decode(encode(x)) == x`.
pub trait JsonCodec: Sized {
    fn encode(&self) -> String;
    fn decode(text: &str) -> Result<Self, IoError>;
}

fn pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("domain JSON always serializes")
}

impl JsonCodec for Rrt {
    fn encode(&self) -> String {
        self.to_nested()
    }

    fn decode(text: &str) -> Result<Self, IoError> {
        let v: Value = serde_json::from_str(text)?;
        Rrt::from_json(&v).map_err(|e| invalid("tree")(&e))
    }
}

impl JsonCodec for OneBracketing {
    fn encode(&self) -> String {
        pretty(&self.to_json())
    }

    fn decode(text: &str) -> Result<Self, IoError> {
        let j: OneBracketingJson = serde_json::from_str(text)?;
        OneBracketing::from_json(&j).map_err(|e| invalid("1-bracketing")(&e))
    }
}

impl JsonCodec for TreePair {
    fn encode(&self) -> String {
        pretty(&self.to_json())
    }

    fn decode(text: &str) -> Result<Self, IoError> {
        let j: TreePairJson = serde_json::from_str(text)?;
        TreePair::from_json(&j).map_err(|e| invalid("tree-pair")(&e))
    }
}

impl JsonCodec for TwoBracketing {
    fn encode(&self) -> String {
        pretty(&self.to_candidate())
    }

    fn decode(text: &str) -> Result<Self, IoError> {
        let c: TwoBracketingCandidate = serde_json::from_str(text)?;
        TwoBracketing::validate(&c).map_err(|e| invalid("2-bracketing")(&e))
    }
}

impl JsonCodec for GradedPoset {
    fn encode(&self) -> String {
        pretty(&self.to_json())
    }

    fn decode(text: &str) -> Result<Self, IoError> {
        let j: PosetJson = serde_json::from_str(text)?;
        GradedPoset::from_json(&j).map_err(|e| invalid("poset")(&e))
    }
}

/// Any document this crate reads, told apart by its JSON shape.
#[derive(Clone, Debug)]
pub enum Document {
    Tree(Rrt),
    OneBracketing(OneBracketing),
    TreePair(TreePair),
    TwoBracketing(TwoBracketing),
    Poset(GradedPoset),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Tree(_) => "tree",
            Document::OneBracketing(_) => "1-bracketing",
            Document::TreePair(_) => "tree-pair",
            Document::TwoBracketing(_) => "2-bracketing",
            Document::Poset(_) => "poset",
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Document::Tree(x) => x.encode(),
            Document::OneBracketing(x) => x.encode(),
            Document::TreePair(x) => x.encode(),
            Document::TwoBracketing(x) => x.encode(),
            Document::Poset(x) => x.encode(),
        }
    }
}

pub fn detect(text: &str) -> Result<Document, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    if v.is_array() {
        Rrt::decode(text).map(Document::Tree)
    } else if has("bubble") {
        TreePair::decode(text).map(Document::TreePair)
    } else if has("brackets2") {
        TwoBracketing::decode(text).map(Document::TwoBracketing)
    } else if has("brackets") {
        OneBracketing::decode(text).map(Document::OneBracketing)
    } else if has("elements") {
        GradedPoset::decode(text).map(Document::Poset)
    } else {
        Err(IoError::UnknownShape)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub n: Vec<u32>,
    pub faces: Vec<usize>,
    pub simple: bool,
}

impl AppendixRow {
    pub fn label(&self) -> String {
        self.n.iter().map(|x| x.to_string()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.faces.len() - 1
    }
}

/// The reference face-vector table, checked against its bundled digest.
pub fn load_appendix_table() -> Result<Vec<AppendixRow>, IoError> {
    parse_appendix(APPENDIX_JSON, APPENDIX_SHA256.trim())
}

fn parse_appendix(text: &str, digest: &str) -> Result<Vec<AppendixRow>, IoError> {
    let found = hex::encode(Sha256::digest(text.as_bytes()));
    if found != digest {
        return Err(IoError::CorruptReferenceData { expected: digest.to_string(), found });
    }
    let rows: Vec<AppendixRow> = serde_json::from_str(text)?;
    for row in &rows {
        let r = row.n.len();
        let total: usize = row.n.iter().map(|&x| x as usize).sum();
        if row.faces.len() + 2 != total + r || row.faces.last() != Some(&1) {
            return Err(IoError::Invalid { kind: "appendix row", message: row.label() });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotOptions {
    pub name: String,
    /// Label nodes by key rather than by index.
    pub keys: bool,
    /// Drop the adjoined bottom element, if any.
    pub hide_bottom: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions { name: "poset".into(), keys: true, hide_bottom: true }
    }
}

/// Graphviz source with one `rank=same` layer per dimension.
pub fn export_dot(p: &GradedPoset, opts: &DotOptions) -> String {
    let shown: Vec<usize> = (0..p.len()).filter(|&i| !(opts.hide_bottom && p.dim(i) < 0)).collect();
    let mut s = format!("digraph {} {{\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n", opts.name);
    let mut dims: Vec<i64> = shown.iter().map(|&i| p.dim(i)).collect();
    dims.sort_unstable();
    dims.dedup();
    for d in dims {
        s.push_str("  { rank=same;");
        for &i in shown.iter().filter(|&&i| p.dim(i) == d) {
            let label = if opts.keys { p.key(i).replace('"', "\\\"") } else { i.to_string() };
            s.push_str(&format!(" n{i} [label=\"{label}\"];"));
        }
        s.push_str(" }\n");
    }
    for (a, b) in p.covers() {
        if shown.contains(&a) && shown.contains(&b) {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treepair::enumerate_wn;
    use crate::twobracketing::two_nu;

    #[test]
    fn table_loads() {
        let rows = load_appendix_table().unwrap();
        assert_eq!(rows.len(), 20);
        assert_eq!(rows.iter().filter(|r| r.dimension() == 2).count(), 6);
        let find = |l: &str| rows.iter().find(|r| r.label() == l).unwrap().clone();
        assert_eq!(find("020"), AppendixRow { n: vec![0, 2, 0], faces: vec![6, 6, 1], simple: true });
        assert_eq!(find("31"), AppendixRow { n: vec![3, 1], faces: vec![36, 56, 22, 1], simple: false });
        assert_eq!(find("1001").faces, vec![10, 15, 7, 1]);
    }

    #[test]
    fn tampered_table_is_rejected() {
        let edited = APPENDIX_JSON.replacen("[6, 6, 1]", "[6, 6, 2]", 1);
        assert!(matches!(parse_appendix(&edited, APPENDIX_SHA256.trim()), Err(IoError::CorruptReferenceData { .. })));
    }

    #[test]
    fn roundtrip_w200() {
        let w = enumerate_wn(&[2, 0, 0]).unwrap();
        for p in &w.elements {
            assert_eq!(&TreePair::decode(&p.encode()).unwrap(), p);
            let x = two_nu(p);
            assert_eq!(TwoBracketing::decode(&x.encode()).unwrap(), x);
            assert_eq!(&Rrt::decode(&p.seam().encode()).unwrap(), p.seam());
        }
        let back = GradedPoset::decode(&w.poset.encode()).unwrap();
        assert_eq!(back.encode(), w.poset.encode());
    }

    #[test]
    fn parse_errors_carry_position() {
        match TreePair::decode("{\n  \"n\": [1,\n  oops") {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detect_shapes() {
        let p = TreePair::top(&[1, 1]).unwrap();
        assert_eq!(detect(&p.encode()).unwrap().kind(), "tree-pair");
        assert_eq!(detect(&two_nu(&p).encode()).unwrap().kind(), "2-bracketing");
        assert_eq!(detect("[[],[]]").unwrap().kind(), "tree");
        assert!(matches!(detect("{}"), Err(IoError::UnknownShape)));
    }

    #[test]
    fn empty_poset_dot() {
        let p = GradedPoset::new(vec![], vec![], &[]).unwrap();
        let dot = export_dot(&p, &DotOptions::default());
        assert_eq!(dot, "digraph poset {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n}\n");
    }
}
