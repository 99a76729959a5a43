//! Command-line front end. [`run`] returns a report instead of printing, so
//! the binary stays a thin wrapper and tests can drive every subcommand.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bracketing::{enumerate_kr_brackets, nu, tau};
use crate::io::{detect, export_dot, load_appendix_table, Document, DotOptions, JsonCodec};
use crate::poset::{GradedPoset, PolytopeCheck};
use crate::rrt::enumerate_kr;
use crate::structure::{decompose, Memo};
use crate::treepair::{enumerate_wn, TreePair};
use crate::twobracketing::{compare_oracle, two_nu, two_tau, DEFAULT_ORACLE_BOUND};

#[derive(Parser, Debug)]
#[command(name = "twoassoc", version, about = "Associahedra and 2-associahedra as graded posets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Refuse enumerations above this dimension unless forced.
    #[arg(long, global = true, env = "TWOASSOC_MAX_DIM", default_value_t = 4)]
    pub max_dim: i64,
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate W_n or K_r and print counts per dimension.
    Enumerate {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Model::Tree)]
        model: Model,
        /// Also list every face key.
        #[arg(long)]
        list: bool,
    },
    /// Certify the face poset as an abstract polytope.
    Verify {
        #[command(flatten)]
        target: Target,
    },
    /// Print the face vector, comma separated.
    FaceVector {
        #[command(flatten)]
        target: Target,
    },
    /// Recompute every row of the bundled face-vector table.
    CompareAppendix,
    /// Convert a JSON document between the tree and bracket models.
    Convert {
        /// Input file, or `-` for stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Decompose the closure of one face of W_n into factors.
    Decompose {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Face key, or its index in the enumeration.
        #[arg(long)]
        face: String,
    },
    /// Compare the move enumeration of W_n with brute force.
    OracleCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Largest `|n| + r` the brute force accepts.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        bound: u32,
    },
    /// Export the face poset.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Model::Tree)]
        model: Model,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Weights of W_n, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "r")]
    pub n: Vec<u32>,
    /// Leaf count of K_r.
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Tree,
    Bracket,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

/// Outcome of one command: human text, the same content as JSON, and
/// whether every check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn pass(text: String, json: Value) -> Self {
        Report { ok: true, text, json }
    }

    fn fail(message: impl Into<String>) -> Self {
        let message = message.into();
        Report { ok: false, json: json!({ "ok": false, "error": message }), text: message }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    /// What goes to stdout.
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n"
        } else if self.text.ends_with('\n') {
            self.text.clone()
        } else {
            format!("{}\n", self.text)
        }
    }
}

enum Object {
    W(Vec<u32>),
    K(usize),
}

impl Object {
    fn label(&self) -> String {
        match self {
            Object::W(n) => format!("W_{}", join(n, ",")),
            Object::K(r) => format!("K_{r}"),
        }
    }

    fn dimension(&self) -> i64 {
        match self {
            Object::W(n) => n.iter().map(|&x| x as i64).sum::<i64>() + n.len() as i64 - 3,
            Object::K(r) => *r as i64 - 2,
        }
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn object(t: &Target) -> Result<Object, String> {
    match (t.n.is_empty(), t.r) {
        (false, None) if t.n.iter().any(|&x| x > 0) => Ok(Object::W(t.n.clone())),
        (false, None) => Err("weight vector must be nonzero".into()),
        (true, Some(r)) if r >= 1 => Ok(Object::K(r)),
        (true, Some(_)) => Err("r must be positive".into()),
        _ => Err("give exactly one of --n or --r".into()),
    }
}

fn bounded(cli: &Cli, o: &Object) -> Result<(), String> {
    let d = o.dimension();
    if d > cli.max_dim && !cli.force {
        return Err(format!(
            "{} has dimension {d}, above --max-dim {}; pass --force to proceed",
            o.label(),
            cli.max_dim
        ));
    }
    Ok(())
}

/// The face poset in the requested model. Bracket keys replace tree keys;
/// the order is carried over element by element.
fn face_poset(o: &Object, model: Model) -> Result<GradedPoset, String> {
    match (o, model) {
        (Object::W(n), Model::Tree) => Ok(enumerate_wn(n).map_err(|e| e.to_string())?.poset),
        (Object::W(n), Model::Bracket) => {
            let w = enumerate_wn(n).map_err(|e| e.to_string())?;
            let keys = w.elements.iter().map(|p| two_nu(p).key()).collect();
            GradedPoset::new(keys, w.poset.dims().to_vec(), &w.poset.covers()).map_err(|e| e.to_string())
        }
        (Object::K(r), Model::Tree) => Ok(enumerate_kr(*r).poset),
        (Object::K(r), Model::Bracket) => Ok(enumerate_kr_brackets(*r).poset),
    }
}

pub fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Enumerate { target, model, list } => with_target(cli, target, |o| enumerate(o, *model, *list)),
        Command::Verify { target } => with_target(cli, target, verify),
        Command::FaceVector { target } => with_target(cli, target, |o| {
            let p = face_poset(o, Model::Tree)?;
            let fv = p.face_vector();
            Ok(Report::pass(join(&fv, ","), json!({ "object": o.label(), "face_vector": fv })))
        }),
        Command::CompareAppendix => compare_appendix(),
        Command::Convert { input } => convert(input).unwrap_or_else(Report::fail),
        Command::Decompose { n, face } => {
            let o = Object::W(n.clone());
            bounded(cli, &o).and_then(|()| decompose_face(n, face)).unwrap_or_else(Report::fail)
        }
        Command::OracleCheck { n, bound } => oracle_check(n, *bound),
        Command::Export { target, format, model } => with_target(cli, target, |o| {
            let p = face_poset(o, *model)?;
            let text = match format {
                Format::Dot => export_dot(&p, &DotOptions::default()),
                Format::Json => p.encode(),
            };
            Ok(Report::pass(text, json!({ "object": o.label(), "poset": p.to_json() })))
        }),
    }
}

fn with_target(cli: &Cli, t: &Target, f: impl FnOnce(&Object) -> Result<Report, String>) -> Report {
    object(t).and_then(|o| bounded(cli, &o).map(|()| o)).and_then(|o| f(&o)).unwrap_or_else(Report::fail)
}

fn enumerate(o: &Object, model: Model, list: bool) -> Result<Report, String> {
    let p = face_poset(o, model)?;
    let fv = p.face_vector();
    let mut text =
        format!("{}: {} faces, dimension {}\nface vector {}\n", o.label(), p.len(), p.max_dim(), join(&fv, ","));
    for (d, c) in fv.iter().enumerate() {
        text.push_str(&format!("  dim {d}: {c}\n"));
    }
    if list {
        for i in 0..p.len() {
            text.push_str(&format!("{}\t{}\n", p.dim(i), p.key(i)));
        }
    }
    let keys: Option<&[String]> = list.then(|| p.keys());
    Ok(Report::pass(
        text,
        json!({ "object": o.label(), "model": model, "faces": p.len(), "face_vector": fv, "keys": keys }),
    ))
}

fn verify(o: &Object) -> Result<Report, String> {
    let p = face_poset(o, Model::Tree)?;
    let hat = p.adjoin_bottom().map_err(|e| e.to_string())?;
    let check = hat.check_abstract_polytope();
    let rank_ok = matches!(&check, PolytopeCheck::Polytope(c) if c.rank == o.dimension());
    let defects = p.cover_defects().len();
    let formulas = match o {
        Object::W(n) => {
            let w = enumerate_wn(n).map_err(|e| e.to_string())?;
            w.elements.iter().all(|t| t.dimension() == t.dimension_by_valence() && t.valence_identity_holds())
        }
        Object::K(r) => enumerate_kr(*r).elements.iter().all(|t| t.dimension() == t.dimension_by_valence()),
    };
    let ok = rank_ok && defects == 0 && formulas;
    let text = match &check {
        PolytopeCheck::Polytope(c) => format!(
            "{}: abstract polytope, certificate rank {}, {} faces including the empty face\nsimple: {}\ncover defects: {defects}\ndimension formulas: {}",
            o.label(),
            c.rank,
            c.faces,
            yes_no(p.is_simple()),
            if formulas { "agree" } else { "DISAGREE" }
        ),
        PolytopeCheck::Violation(v) => format!("{}: not an abstract polytope, {} fails", o.label(), v.name()),
    };
    Ok(Report {
        ok,
        text,
        json: json!({
            "ok": ok, "object": o.label(), "check": check, "expected_rank": o.dimension(),
            "simple": p.is_simple(), "cover_defects": defects, "dimension_formulas": formulas,
        }),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn compare_appendix() -> Report {
    let rows = match load_appendix_table() {
        Ok(r) => r,
        Err(e) => return Report::fail(e.to_string()),
    };
    let mut text = String::new();
    let mut out = Vec::new();
    let mut ok = true;
    for row in &rows {
        let (fv, simple) = match enumerate_wn(&row.n) {
            Ok(w) => (w.poset.face_vector(), w.poset.is_simple()),
            Err(e) => return Report::fail(e.to_string()),
        };
        let good = fv == row.faces && simple == row.simple;
        ok &= good;
        text.push_str(&format!(
            "{:<5} ({}) {:<3}  ({}) {:<3}  {}\n",
            row.label(),
            join(&row.faces, ","),
            yes_no(row.simple),
            join(&fv, ","),
            yes_no(simple),
            if good { "ok" } else { "MISMATCH" }
        ));
        out.push(json!({ "n": row.n, "expected": row.faces, "found": fv, "expected_simple": row.simple, "simple": simple, "ok": good }));
    }
    text.push_str(&format!("{} of {} rows match", out.iter().filter(|r| r["ok"] == true).count(), rows.len()));
    Report { ok, text, json: json!({ "ok": ok, "rows": out }) }
}

fn convert(input: &PathBuf) -> Result<Report, String> {
    let text = if input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("{}: {e}", input.display()))?
    };
    let doc = detect(&text).map_err(|e| e.to_string())?;
    let out = match &doc {
        Document::Tree(t) => Document::OneBracketing(nu(t)),
        Document::OneBracketing(b) => Document::Tree(tau(b)),
        Document::TreePair(p) => Document::TwoBracketing(two_nu(p)),
        Document::TwoBracketing(x) => Document::TreePair(two_tau(x).map_err(|e| e.to_string())?),
        Document::Poset(_) => return Err("a poset has no other model to convert to".into()),
    };
    let encoded = out.encode();
    let value: Value = serde_json::from_str(&encoded).expect("encoded documents are JSON");
    Ok(Report::pass(encoded, json!({ "from": doc.kind(), "to": out.kind(), "document": value })))
}

fn decompose_face(n: &[u32], face: &str) -> Result<Report, String> {
    let w = enumerate_wn(n).map_err(|e| e.to_string())?;
    let anchor: TreePair = match face.parse::<usize>() {
        Ok(i) => {
            w.elements.get(i).cloned().ok_or_else(|| format!("index {i} out of range, W_n has {} faces", w.len()))?
        }
        Err(_) => TreePair::from_key(n, face).map_err(|e| e.to_string())?,
    };
    let d = decompose(&anchor, &Memo::new()).map_err(|e| e.to_string())?;
    let text = format!(
        "face {} (dimension {})\nclosure = {}\n{} faces, order isomorphism verified",
        d.anchor,
        d.dimension,
        if d.factors.is_empty() { "point".to_string() } else { d.factors.join(" x ") },
        d.faces
    );
    Ok(Report::pass(text, serde_json::to_value(&d).expect("report serializes")))
}

fn oracle_check(n: &[u32], bound: u32) -> Report {
    match compare_oracle(n, bound) {
        Ok(c) => {
            let text = if c.matches() {
                "match".to_string()
            } else {
                format!(
                    "mismatch: {} by moves, {} by brute force, {} missing, {} extra, order {}",
                    c.moves,
                    c.oracle,
                    c.missing.len(),
                    c.extra.len(),
                    if c.order { "agrees" } else { "differs" }
                )
            };
            let mut j = serde_json::to_value(&c).expect("report serializes");
            j["ok"] = c.matches().into();
            Report { ok: c.matches(), text, json: j }
        }
        Err(e) => Report::fail(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Report {
        let mut full = vec!["twoassoc"];
        full.extend(args);
        run(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn face_vector_w30() {
        assert_eq!(go(&["face-vector", "--n", "3,0"]).text, "6,6,1");
    }

    #[test]
    fn verify_w110_rank() {
        let r = go(&["verify", "--n", "1,1,0"]);
        assert!(r.ok);
        assert!(r.text.contains("certificate rank 2"));
    }

    #[test]
    fn oracle_w11() {
        assert_eq!(go(&["oracle-check", "--n", "1,1"]).text, "match");
    }

    #[test]
    fn bound_refuses_without_force() {
        let r = go(&["--max-dim", "2", "enumerate", "--n", "3,0,0"]);
        assert!(!r.ok);
        assert!(go(&["--max-dim", "2", "--force", "enumerate", "--n", "3,0,0"]).ok);
    }

    #[test]
    fn zero_weights_rejected() {
        assert!(!go(&["enumerate", "--n", "0,0"]).ok);
    }
}
