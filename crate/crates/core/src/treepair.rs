//! Stable tree-pairs and the 2-associahedron `W_n` in the tree model.
//!
//! A tree-pair is a bubble tree `T_b` (vertices tagged `C2`, `SEAM`, `MARK`),
//! a seam tree `T_s` and the coherence map `f: T_b -> T_s`. Children of a
//! `C2` vertex are seams (solid edges); children of a seam are `C2` or
//! `MARK` vertices (dashed edges). Since `f` is forced by `(T_b, T_s)` it is
//! recomputed rather than stored by the caller, but `T_b` alone does not
//! determine `T_s`, so both trees enter the canonical key.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::poset::{bfs_enumerate, Enumerated};
use crate::rrt::{check_tree_shape, preorder, Rrt, RrtCandidate, RrtError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    #[serde(rename = "C2")]
    C2,
    #[serde(rename = "SEAM")]
    Seam,
    #[serde(rename = "MARK")]
    Mark,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreePairError {
    #[error("weights must be a nonempty vector with positive total")]
    BadWeights,
    #[error("bubble tree: {0}")]
    BubbleShape(RrtError),
    #[error("vertex {vertex}: {detail}")]
    KindEdgeMismatch { vertex: usize, detail: &'static str },
    #[error("C2 vertex {vertex} is unstable")]
    UnstableC2 { vertex: usize },
    #[error("seam tree: {0}")]
    SeamTreeInvalid(RrtError),
    #[error("seam tree has {found} leaves, weights need {expected}")]
    SeamLeafCount { expected: usize, found: usize },
    #[error("coherence map does not contract the edge into vertex {vertex}")]
    CoherenceNotContracting { vertex: usize },
    #[error("C2 vertex {vertex} has {found} seams but its image has {expected} incoming edges")]
    CoherenceArityMismatch { vertex: usize, expected: usize, found: usize },
    #[error("coherence map has {found} entries, bubble tree has {expected} vertices")]
    CoherenceLength { expected: usize, found: usize },
    #[error("mark {vertex} does not map to a leaf")]
    MarkNotOnLeaf { vertex: usize },
    #[error("leaf {leaf} carries {found} marks, weight is {expected}")]
    MarkCountMismatch { leaf: usize, expected: u32, found: u32 },
    #[error("expected weights of length 1, got {0}")]
    WrongArity(usize),
    #[error("malformed encoding: {0}")]
    Malformed(String),
}

/// A bubble tree in preorder, root at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BubbleTree {
    kinds: Vec<VertexKind>,
    children: Vec<Vec<usize>>,
}

/// An unvalidated bubble tree with arbitrary labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubbleCandidate {
    pub root: usize,
    pub kinds: Vec<VertexKind>,
    pub children: Vec<Vec<usize>>,
}

impl BubbleTree {
    pub(crate) fn from_arena(root: usize, kinds: &[VertexKind], children: &[Vec<usize>]) -> (BubbleTree, Vec<usize>) {
        let (order, map) = preorder(root, children);
        let tree = BubbleTree {
            kinds: order.iter().map(|&o| kinds[o]).collect(),
            children: order.iter().map(|&o| children[o].iter().map(|&c| map[c]).collect()).collect(),
        };
        (tree, map)
    }

    /// Checks tree shape, edge kinds and stability; returns the canonical
    /// tree and the old-to-new label map.
    pub fn validate(c: &BubbleCandidate) -> Result<(BubbleTree, Vec<usize>), TreePairError> {
        if c.kinds.len() != c.children.len() {
            return Err(TreePairError::Malformed("one kind per vertex".into()));
        }
        check_tree_shape(c.root, &c.children).map_err(TreePairError::BubbleShape)?;
        let (t, map) = Self::from_arena(c.root, &c.kinds, &c.children);
        t.check_kinds()?;
        t.check_stability()?;
        Ok((t, map))
    }

    fn check_kinds(&self) -> Result<(), TreePairError> {
        use VertexKind::*;
        if self.len() == 1 && self.kinds[0] == Mark {
            return Ok(());
        }
        if self.kinds[0] != C2 {
            return Err(TreePairError::KindEdgeMismatch { vertex: 0, detail: "root must be C2" });
        }
        for v in 0..self.len() {
            let ok = match self.kinds[v] {
                C2 if self.children[v].is_empty() => {
                    return Err(TreePairError::KindEdgeMismatch { vertex: v, detail: "C2 vertex without seams" })
                }
                C2 => self.children[v].iter().all(|&c| self.kinds[c] == Seam),
                Seam => self.children[v].iter().all(|&c| self.kinds[c] != Seam),
                Mark => self.children[v].is_empty(),
            };
            if !ok {
                let detail = match self.kinds[v] {
                    C2 => "solid edge to a non-seam vertex",
                    Seam => "dashed edge to a seam",
                    Mark => "mark with children",
                };
                return Err(TreePairError::KindEdgeMismatch { vertex: v, detail });
            }
        }
        Ok(())
    }

    fn check_stability(&self) -> Result<(), TreePairError> {
        for v in 0..self.len() {
            if self.kinds[v] != VertexKind::C2 {
                continue;
            }
            let cs = &self.children[v];
            let stable = if cs.len() == 1 {
                self.children[cs[0]].len() >= 2
            } else {
                cs.iter().any(|&b| !self.children[b].is_empty())
            };
            if !stable {
                return Err(TreePairError::UnstableC2 { vertex: v });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn arena(&self) -> &[Vec<usize>] {
        &self.children
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.len()];
        for (v, cs) in self.children.iter().enumerate() {
            for &c in cs {
                p[c] = Some(v);
            }
        }
        p
    }

    /// A `C2` vertex with exactly one seam.
    pub fn is_fused(&self, v: usize) -> bool {
        self.kinds[v] == VertexKind::C2 && self.children[v].len() == 1
    }

    /// A `C2` vertex with at least two seams.
    pub fn is_split(&self, v: usize) -> bool {
        self.kinds[v] == VertexKind::C2 && self.children[v].len() >= 2
    }

    pub fn count(&self, kind: VertexKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn to_json(&self) -> Value {
        fn go(t: &BubbleTree, v: usize) -> Value {
            serde_json::json!({
                "kind": t.kinds[v],
                "children": t.children[v].iter().map(|&c| go(t, c)).collect::<Vec<_>>(),
            })
        }
        go(self, 0)
    }

    pub fn candidate_from_json(v: &Value) -> Result<BubbleCandidate, TreePairError> {
        fn go(v: &Value, kinds: &mut Vec<VertexKind>, children: &mut Vec<Vec<usize>>) -> Result<usize, TreePairError> {
            let kind: VertexKind = serde_json::from_value(v.get("kind").cloned().unwrap_or(Value::Null))
                .map_err(|e| TreePairError::Malformed(format!("vertex kind: {e}")))?;
            let id = kinds.len();
            kinds.push(kind);
            children.push(vec![]);
            let empty = vec![];
            let items = match v.get("children") {
                None => &empty,
                Some(c) => c.as_array().ok_or_else(|| TreePairError::Malformed("children must be an array".into()))?,
            };
            let mut cs = Vec::new();
            for item in items {
                cs.push(go(item, kinds, children)?);
            }
            children[id] = cs;
            Ok(id)
        }
        let (mut kinds, mut children) = (Vec::new(), Vec::new());
        go(v, &mut kinds, &mut children)?;
        Ok(BubbleCandidate { root: 0, kinds, children })
    }

    /// Compact form: `C(...)`, `S(...)`, `m`.
    pub fn compact(&self) -> String {
        fn go(t: &BubbleTree, v: usize, s: &mut String) {
            match t.kinds[v] {
                VertexKind::Mark => s.push('m'),
                k => {
                    s.push(if k == VertexKind::C2 { 'C' } else { 'S' });
                    s.push('(');
                    for (i, &c) in t.children[v].iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        go(t, c, s);
                    }
                    s.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        s
    }

    pub fn candidate_from_compact(src: &str) -> Result<BubbleCandidate, TreePairError> {
        let bytes = src.as_bytes();
        let mut pos = 0;
        let (mut kinds, mut children) = (Vec::new(), Vec::new());
        fn go(
            b: &[u8],
            pos: &mut usize,
            kinds: &mut Vec<VertexKind>,
            children: &mut Vec<Vec<usize>>,
        ) -> Result<usize, TreePairError> {
            let bad = |p: usize| TreePairError::Malformed(format!("unexpected input at byte {p}"));
            let kind = match b.get(*pos) {
                Some(b'm') => VertexKind::Mark,
                Some(b'C') => VertexKind::C2,
                Some(b'S') => VertexKind::Seam,
                _ => return Err(bad(*pos)),
            };
            *pos += 1;
            let id = kinds.len();
            kinds.push(kind);
            children.push(vec![]);
            if kind == VertexKind::Mark {
                return Ok(id);
            }
            if b.get(*pos) != Some(&b'(') {
                return Err(bad(*pos));
            }
            *pos += 1;
            let mut cs = Vec::new();
            if b.get(*pos) == Some(&b')') {
                *pos += 1;
                return Ok(id);
            }
            loop {
                cs.push(go(b, pos, kinds, children)?);
                match b.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(bad(*pos)),
                }
            }
            children[id] = cs;
            Ok(id)
        }
        go(bytes, &mut pos, &mut kinds, &mut children)?;
        if pos != bytes.len() {
            return Err(TreePairError::Malformed(format!("trailing input at byte {pos}")));
        }
        Ok(BubbleCandidate { root: 0, kinds, children })
    }
}

/// A validated stable tree-pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePair {
    n: Vec<u32>,
    bubble: BubbleTree,
    seam: Rrt,
    coherence: Vec<usize>,
    marks: Vec<Option<(usize, u32)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePairCandidate {
    pub n: Vec<u32>,
    pub bubble: BubbleCandidate,
    pub seam: RrtCandidate,
    /// Optional explicit coherence map, bubble label to seam label.
    pub coherence: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePairJson {
    pub n: Vec<u32>,
    pub bubble: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seam: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeriveError {
    #[error("bubble tree: {0}")]
    Bubble(TreePairError),
    #[error("C2 vertices {a} and {b} are identified but have different seam counts")]
    ArityConflict { a: usize, b: usize },
    #[error("the quotient is not a stable tree with the right leaves")]
    QuotientUnstable,
    #[error("the quotient has {found} leaves, weights need {expected}")]
    LeafCountMismatch { expected: usize, found: usize },
    #[error("leaf {leaf} carries {found} marks, weight is {expected}")]
    MarkCountMismatch { leaf: usize, expected: u32, found: u32 },
}

impl TreePair {
    /// Assembles a tree-pair from canonical trees, computing the coherence map.
    pub fn assemble(n: Vec<u32>, bubble: BubbleTree, seam: Rrt) -> Result<TreePair, TreePairError> {
        check_weights(&n)?;
        bubble.check_kinds()?;
        bubble.check_stability()?;
        if seam.leaf_count() != n.len() {
            return Err(TreePairError::SeamLeafCount { expected: n.len(), found: seam.leaf_count() });
        }
        let coherence = induced_coherence(&bubble, &seam)?;
        let marks = label_marks(&n, &bubble, &seam, &coherence)?;
        Ok(TreePair { n, bubble, seam, coherence, marks })
    }

    /// Validates a candidate with arbitrary labels, checking an explicit
    /// coherence map against the induced one when given.
    pub fn validate(c: &TreePairCandidate) -> Result<TreePair, TreePairError> {
        check_weights(&c.n)?;
        let (bubble, bmap) = BubbleTree::validate(&c.bubble)?;
        let (seam, smap) = Rrt::validate_with_map(&c.seam).map_err(TreePairError::SeamTreeInvalid)?;
        if seam.leaf_count() != c.n.len() {
            return Err(TreePairError::SeamLeafCount { expected: c.n.len(), found: seam.leaf_count() });
        }
        if let Some(explicit) = &c.coherence {
            if explicit.len() != c.bubble.kinds.len() {
                return Err(TreePairError::CoherenceLength { expected: c.bubble.kinds.len(), found: explicit.len() });
            }
            let mut given = vec![usize::MAX; bubble.len()];
            for (old, &img) in explicit.iter().enumerate() {
                given[bmap[old]] = smap.get(img).copied().unwrap_or(usize::MAX);
            }
            check_explicit_coherence(&bubble, &seam, &given)?;
        }
        Self::assemble(c.n.clone(), bubble, seam)
    }

    /// The greatest face of `W_n`.
    pub fn top(n: &[u32]) -> Result<TreePair, TreePairError> {
        check_weights(n)?;
        use VertexKind::*;
        let (mut kinds, mut children) = (vec![C2], vec![vec![]]);
        let push = |kinds: &mut Vec<VertexKind>, children: &mut Vec<Vec<usize>>, k| {
            kinds.push(k);
            children.push(vec![]);
            kinds.len() - 1
        };
        if n == [1] {
            return Self::assemble(n.to_vec(), BubbleTree { kinds: vec![Mark], children: vec![vec![]] }, Rrt::point());
        }
        for &ni in n {
            let s = push(&mut kinds, &mut children, Seam);
            children[0].push(s);
            for _ in 0..ni {
                let m = push(&mut kinds, &mut children, Mark);
                children[s].push(m);
            }
        }
        let (bubble, _) = BubbleTree::from_arena(0, &kinds, &children);
        Self::assemble(n.to_vec(), bubble, Rrt::corolla(n.len()))
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    pub fn bubble(&self) -> &BubbleTree {
        &self.bubble
    }

    pub fn seam(&self) -> &Rrt {
        &self.seam
    }

    pub fn coherence(&self) -> &[usize] {
        &self.coherence
    }

    /// `(i, j)` for each mark: the `j`-th mark (1-based) over seam leaf `i`.
    pub fn mark_label(&self, v: usize) -> Option<(usize, u32)> {
        self.marks[v]
    }

    pub fn mark_labels(&self) -> &[Option<(usize, u32)>] {
        &self.marks
    }

    /// `|n| + r - #C2^1 - #int(T_s) - 2`.
    pub fn dimension(&self) -> i64 {
        let total: i64 = self.n.iter().map(|&x| x as i64).sum();
        let fused = (0..self.bubble.len()).filter(|&v| self.bubble.is_fused(v)).count() as i64;
        total + self.r() as i64 - fused - self.seam.interior().len() as i64 - 2
    }

    /// The same dimension as a sum of local contributions.
    pub fn dimension_by_valence(&self) -> i64 {
        let b = &self.bubble;
        let mut d = 0i64;
        for v in 0..b.len() {
            if b.is_fused(v) {
                d += b.children(b.children(v)[0]).len() as i64 - 2;
            } else if b.is_split(v) {
                d += b.children(v).iter().map(|&s| b.children(s).len() as i64).sum::<i64>() - 1;
            }
        }
        d + self.seam.dimension_by_valence()
    }

    /// `sum over seams of #in == #C2 + |n| - 1`.
    pub fn valence_identity_holds(&self) -> bool {
        let b = &self.bubble;
        let lhs: usize = (0..b.len()).filter(|&v| b.kind(v) == VertexKind::Seam).map(|v| b.children(v).len()).sum();
        let total: usize = self.n.iter().map(|&x| x as usize).sum();
        lhs + 1 == b.count(VertexKind::C2) + total
    }

    pub fn key(&self) -> String {
        format!("{}@{}", self.bubble.compact(), self.seam.to_nested())
    }

    pub fn from_key(n: &[u32], key: &str) -> Result<TreePair, TreePairError> {
        let (b, s) =
            key.split_once('@').ok_or_else(|| TreePairError::Malformed("key needs the form BUBBLE@SEAM".into()))?;
        let bubble = BubbleTree::candidate_from_compact(b)?;
        let seam = Rrt::from_nested(s).map_err(TreePairError::SeamTreeInvalid)?;
        let seam = RrtCandidate { root: 0, children: seam.arena().to_vec() };
        Self::validate(&TreePairCandidate { n: n.to_vec(), bubble, seam, coherence: None })
    }

    pub fn to_json(&self) -> TreePairJson {
        TreePairJson {
            n: self.n.clone(),
            bubble: self.bubble.to_json(),
            seam: Some(self.seam.to_json()),
            coherence: Some(self.coherence.clone()),
        }
    }

    /// Imports JSON; without a seam tree the coherence is derived.
    pub fn from_json(j: &TreePairJson) -> Result<TreePair, TreePairError> {
        let bubble = BubbleTree::candidate_from_json(&j.bubble)?;
        match &j.seam {
            Some(s) => {
                let seam = Rrt::from_json(s).map_err(TreePairError::SeamTreeInvalid)?;
                let seam = RrtCandidate { root: 0, children: seam.arena().to_vec() };
                Self::validate(&TreePairCandidate { n: j.n.clone(), bubble, seam, coherence: j.coherence.clone() })
            }
            None => {
                let (b, _) = BubbleTree::validate(&bubble)?;
                let (seam, _) = derive_coherence(&b, &j.n).map_err(|e| TreePairError::Malformed(e.to_string()))?;
                Self::assemble(j.n.clone(), b, seam)
            }
        }
    }

    /// Mirror image: every child list reversed and the weights reversed.
    pub fn reversed(&self) -> TreePair {
        let children: Vec<Vec<usize>> =
            self.bubble.children.iter().map(|c| c.iter().rev().copied().collect()).collect();
        let (bubble, _) = BubbleTree::from_arena(0, &self.bubble.kinds, &children);
        let n: Vec<u32> = self.n.iter().rev().copied().collect();
        Self::assemble(n, bubble, self.seam.mirror()).expect("mirror of a stable tree-pair is stable")
    }

    /// Codimension-one degenerations, deduplicated, each with every move
    /// that produces it.
    pub fn moves_detailed(&self) -> Vec<MoveOutcome> {
        let mut out: Vec<MoveOutcome> = Vec::new();
        let mut seen: HashMap<TreePair, usize> = HashMap::new();
        let mut record = |mv: TwoMove, tp: TreePair| match seen.get(&tp) {
            Some(&i) => out[i].moves.push(mv),
            None => {
                seen.insert(tp.clone(), out.len());
                out.push(MoveOutcome { result: tp, moves: vec![mv] });
            }
        };
        for (mv, tp) in self.type1_moves() {
            record(mv, tp);
        }
        for (mv, tp) in self.type2_moves() {
            record(mv, tp);
        }
        for (mv, tp) in self.type3_moves() {
            record(mv, tp);
        }
        out
    }

    pub fn moves(&self) -> Vec<TreePair> {
        self.moves_detailed().into_iter().map(|o| o.result).collect()
    }

    fn arena(&self) -> (Vec<VertexKind>, Vec<Vec<usize>>) {
        (self.bubble.kinds.clone(), self.bubble.children.clone())
    }

    fn finish(&self, kinds: &[VertexKind], children: &[Vec<usize>], seam: Rrt) -> TreePair {
        let (bubble, _) = BubbleTree::from_arena(0, kinds, children);
        Self::assemble(self.n.clone(), bubble, seam).expect("moves preserve stability")
    }

    /// A consecutive block of a seam's children moves under a new fused bubble.
    fn type1_moves(&self) -> Vec<(TwoMove, TreePair)> {
        let mut out = Vec::new();
        let b = &self.bubble;
        for alpha in 0..b.len() {
            if b.kind(alpha) != VertexKind::C2 {
                continue;
            }
            for &beta in b.children(alpha) {
                let k = b.children(beta).len();
                let max_len = if b.is_fused(alpha) { k.saturating_sub(1) } else { k };
                for len in 2..=max_len {
                    for start in 0..=k - len {
                        let (mut kinds, mut children) = self.arena();
                        let block: Vec<usize> = children[beta].drain(start..start + len).collect();
                        let new_seam = push(&mut kinds, &mut children, VertexKind::Seam, block);
                        let new_c2 = push(&mut kinds, &mut children, VertexKind::C2, vec![new_seam]);
                        children[beta].insert(start, new_c2);
                        let mv = TwoMove::Bubble { vertex: alpha, seam: beta, start, len };
                        out.push((mv, self.finish(&kinds, &children, self.seam.clone())));
                    }
                }
            }
        }
        out
    }

    /// A seam-tree vertex splits off a block of its children; every split
    /// bubble over it regroups the matching seams.
    fn type2_moves(&self) -> Vec<(TwoMove, TreePair)> {
        let mut out = Vec::new();
        let b = &self.bubble;
        for rho in bfs_order(&self.seam) {
            let k = self.seam.children(rho).len();
            if k < 3 {
                continue;
            }
            let anchors: Vec<usize> = (0..b.len()).filter(|&v| b.is_split(v) && self.coherence[v] == rho).collect();
            for len in 2..k {
                for start in 0..=k - len {
                    let new_seam_tree = self.seam.apply_move(crate::rrt::RrtMove { vertex: rho, start, len });
                    let options: Vec<Vec<Vec<Vec<u32>>>> = anchors
                        .iter()
                        .map(|&a| {
                            let sizes: Vec<u32> =
                                b.children(a)[start..start + len].iter().map(|&s| b.children(s).len() as u32).collect();
                            compositions(&sizes, 0)
                        })
                        .collect();
                    for choice in cartesian(&options) {
                        let (mut kinds, mut children) = self.arena();
                        for (&a, parts) in anchors.iter().zip(&choice) {
                            let old: Vec<usize> = children[a].drain(start..start + len).collect();
                            let regrouped = regroup(&mut kinds, &mut children, &old, parts);
                            let s = push(&mut kinds, &mut children, VertexKind::Seam, regrouped);
                            children[a].insert(start, s);
                        }
                        let splits = anchors.iter().copied().zip(choice.iter().cloned()).collect();
                        let mv = TwoMove::Seam { vertex: rho, start, len, splits };
                        out.push((mv, self.finish(&kinds, &children, new_seam_tree.clone())));
                    }
                }
            }
        }
        out
    }

    /// A split bubble becomes fused over two or more split bubbles.
    fn type3_moves(&self) -> Vec<(TwoMove, TreePair)> {
        let mut out = Vec::new();
        let b = &self.bubble;
        for alpha in 0..b.len() {
            if !b.is_split(alpha) {
                continue;
            }
            let sizes: Vec<u32> = b.children(alpha).iter().map(|&s| b.children(s).len() as u32).collect();
            for parts in compositions(&sizes, 2) {
                let (mut kinds, mut children) = self.arena();
                let old = std::mem::take(&mut children[alpha]);
                let regrouped = regroup(&mut kinds, &mut children, &old, &parts);
                let s = push(&mut kinds, &mut children, VertexKind::Seam, regrouped);
                children[alpha] = vec![s];
                out.push((TwoMove::Split { vertex: alpha, parts }, self.finish(&kinds, &children, self.seam.clone())));
            }
        }
        out
    }
}

fn push(kinds: &mut Vec<VertexKind>, children: &mut Vec<Vec<usize>>, kind: VertexKind, cs: Vec<usize>) -> usize {
    kinds.push(kind);
    children.push(cs);
    kinds.len() - 1
}

/// New split bubbles, one per part; seam `i` of bubble `j` takes the next
/// `parts[j][i]` children of `old[i]`.
fn regroup(
    kinds: &mut Vec<VertexKind>,
    children: &mut Vec<Vec<usize>>,
    old: &[usize],
    parts: &[Vec<u32>],
) -> Vec<usize> {
    let mut cursor = vec![0usize; old.len()];
    let mut bubbles = Vec::with_capacity(parts.len());
    for part in parts {
        let mut seams = Vec::with_capacity(old.len());
        for (i, &count) in part.iter().enumerate() {
            let take: Vec<usize> = children[old[i]][cursor[i]..cursor[i] + count as usize].to_vec();
            cursor[i] += count as usize;
            seams.push(push(kinds, children, VertexKind::Seam, take));
        }
        bubbles.push(push(kinds, children, VertexKind::C2, seams));
    }
    bubbles
}

fn bfs_order(t: &Rrt) -> Vec<usize> {
    let mut out = vec![0];
    let mut i = 0;
    while i < out.len() {
        out.extend_from_slice(t.children(out[i]));
        i += 1;
    }
    out
}

/// Ordered decompositions of `a` into nonzero vectors with at least
/// `min_parts` parts, in colexicographic order.
pub fn compositions(a: &[u32], min_parts: usize) -> Vec<Vec<Vec<u32>>> {
    fn go(a: &[u32], out: &mut Vec<Vec<Vec<u32>>>, prefix: &mut Vec<Vec<u32>>) {
        if a.iter().all(|&x| x == 0) {
            out.push(prefix.clone());
            return;
        }
        let mut b = vec![0u32; a.len()];
        loop {
            // Advance b through the box 0..=a, skipping zero.
            let mut i = 0;
            while i < a.len() && b[i] == a[i] {
                b[i] = 0;
                i += 1;
            }
            if i == a.len() {
                return;
            }
            b[i] += 1;
            let rest: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            prefix.push(b.clone());
            go(&rest, out, prefix);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(a, &mut out, &mut Vec::new());
    out.retain(|p| p.len() >= min_parts);
    out.sort_by_key(|p| (p.len(), p.iter().rev().flat_map(|v| v.iter().rev().copied()).collect::<Vec<u32>>()));
    out
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![vec![]];
    for opts in options {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                opts.iter().map(move |o| {
                    let mut p = p.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

fn check_weights(n: &[u32]) -> Result<(), TreePairError> {
    if n.is_empty() || n.iter().all(|&x| x == 0) {
        return Err(TreePairError::BadWeights);
    }
    Ok(())
}

/// Top-down coherence: the root maps to the root, the `i`-th seam of a split
/// bubble to the `i`-th child of its image, everything else to its parent's image.
fn induced_coherence(b: &BubbleTree, s: &Rrt) -> Result<Vec<usize>, TreePairError> {
    let mut f = vec![0usize; b.len()];
    for v in 0..b.len() {
        let cs = b.children(v);
        if b.is_split(v) {
            let img = s.children(f[v]);
            if img.len() != cs.len() {
                return Err(TreePairError::CoherenceArityMismatch { vertex: v, expected: img.len(), found: cs.len() });
            }
            for (&c, &w) in cs.iter().zip(img) {
                f[c] = w;
            }
        } else {
            for &c in cs {
                f[c] = f[v];
            }
        }
    }
    Ok(f)
}

fn check_explicit_coherence(b: &BubbleTree, s: &Rrt, given: &[usize]) -> Result<(), TreePairError> {
    if given[0] != 0 {
        return Err(TreePairError::CoherenceNotContracting { vertex: 0 });
    }
    for v in 0..b.len() {
        let cs = b.children(v);
        if b.is_split(v) {
            let img = s.children(given[v]);
            let found: Vec<usize> = cs.iter().map(|&c| given[c]).collect();
            if found != img {
                return Err(TreePairError::CoherenceArityMismatch { vertex: v, expected: img.len(), found: cs.len() });
            }
        } else if let Some(&c) = cs.iter().find(|&&c| given[c] != given[v]) {
            return Err(TreePairError::CoherenceNotContracting { vertex: c });
        }
    }
    Ok(())
}

fn label_marks(n: &[u32], b: &BubbleTree, s: &Rrt, f: &[usize]) -> Result<Vec<Option<(usize, u32)>>, TreePairError> {
    let mut leaf_index = vec![usize::MAX; s.len()];
    for (i, l) in s.leaves().into_iter().enumerate() {
        leaf_index[l] = i;
    }
    let mut counts = vec![0u32; n.len()];
    let mut labels = vec![None; b.len()];
    for v in 0..b.len() {
        if b.kind(v) != VertexKind::Mark {
            continue;
        }
        let i = leaf_index[f[v]];
        if i == usize::MAX {
            return Err(TreePairError::MarkNotOnLeaf { vertex: v });
        }
        counts[i] += 1;
        labels[v] = Some((i + 1, counts[i]));
    }
    for (i, (&c, &e)) in counts.iter().zip(n).enumerate() {
        if c != e {
            return Err(TreePairError::MarkCountMismatch { leaf: i + 1, expected: e, found: c });
        }
    }
    Ok(labels)
}

/// Recovers `(T_s, f)` from a bubble tree alone, when possible.
///
/// Vertices joined by a dashed edge or by the solid edge below a fused
/// bubble are identified, and so are the `j`-th seams of identified split
/// bubbles. The result is accepted only if the quotient is a stable tree
/// with `r` leaves carrying the right marks. This fails whenever the
/// coherence map of the intended tree-pair is not surjective.
pub fn derive_coherence(b: &BubbleTree, n: &[u32]) -> Result<(Rrt, Vec<usize>), DeriveError> {
    b.check_kinds().map_err(DeriveError::Bubble)?;
    b.check_stability().map_err(DeriveError::Bubble)?;
    let len = b.len();
    let mut uf: Vec<usize> = (0..len).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let next = uf[y];
            uf[y] = r;
            y = next;
        }
        r
    }
    fn union(uf: &mut [usize], a: usize, c: usize) -> bool {
        let (ra, rc) = (find(uf, a), find(uf, c));
        if ra == rc {
            return false;
        }
        uf[ra.max(rc)] = ra.min(rc);
        true
    }
    for v in 0..len {
        if b.kind(v) == VertexKind::Seam || b.is_fused(v) {
            for &c in b.children(v) {
                union(&mut uf, v, c);
            }
        }
    }
    loop {
        let mut changed = false;
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for v in (0..len).filter(|&v| b.is_split(v)) {
            let cls = find(&mut uf, v);
            match rep.get(&cls) {
                None => {
                    rep.insert(cls, v);
                }
                Some(&w) => {
                    if b.children(w).len() != b.children(v).len() {
                        return Err(DeriveError::ArityConflict { a: w, b: v });
                    }
                    for (&x, &y) in b.children(w).iter().zip(b.children(v)) {
                        changed |= union(&mut uf, x, y);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Quotient: a class's children are the classes of any split member's seams.
    let mut quotient_children: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in (0..len).filter(|&v| b.is_split(v)) {
        let cls = find(&mut uf, v);
        let cs: Vec<usize> = b.children(v).iter().map(|&c| find(&mut uf, c)).collect();
        quotient_children.entry(cls).or_insert(cs);
    }
    let classes: Vec<usize> = {
        let mut c: Vec<usize> = (0..len).map(|v| find(&mut uf, v)).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let slot: HashMap<usize, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let arena: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| quotient_children.get(c).map_or(vec![], |cs| cs.iter().map(|x| slot[x]).collect()))
        .collect();
    let root = slot[&find(&mut uf, 0)];
    let (seam, map) =
        Rrt::validate_with_map(&RrtCandidate { root, children: arena }).map_err(|_| DeriveError::QuotientUnstable)?;
    if seam.leaf_count() != n.len() {
        return Err(DeriveError::LeafCountMismatch { expected: n.len(), found: seam.leaf_count() });
    }
    let f: Vec<usize> = (0..len).map(|v| map[slot[&find(&mut uf, v)]]).collect();
    match label_marks(n, b, &seam, &f) {
        Ok(_) => {}
        Err(TreePairError::MarkCountMismatch { leaf, expected, found }) => {
            return Err(DeriveError::MarkCountMismatch { leaf, expected, found })
        }
        Err(_) => return Err(DeriveError::QuotientUnstable),
    }
    if induced_coherence(b, &seam).ok().as_deref() != Some(&f[..]) {
        return Err(DeriveError::QuotientUnstable);
    }
    Ok((seam, f))
}

/// One way of producing a codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoMove {
    /// Type 1: a block of `seam`'s children moves under a new fused bubble.
    Bubble { vertex: usize, seam: usize, start: usize, len: usize },
    /// Type 2: seam-tree vertex `vertex` splits off a block; each split
    /// bubble over it regroups the matching seams into the given parts.
    Seam { vertex: usize, start: usize, len: usize, splits: Vec<(usize, Vec<Vec<u32>>)> },
    /// Type 3: a split bubble becomes fused over one new split bubble per part.
    Split { vertex: usize, parts: Vec<Vec<u32>> },
}

impl TwoMove {
    pub fn kind(&self) -> u8 {
        match self {
            TwoMove::Bubble { .. } => 1,
            TwoMove::Seam { .. } => 2,
            TwoMove::Split { .. } => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub result: TreePair,
    pub moves: Vec<TwoMove>,
}

impl MoveOutcome {
    pub fn multiplicity(&self) -> usize {
        self.moves.len()
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreePair({:?}, {})", self.n, self.key())
    }
}

/// `W_n`, enumerated breadth-first from the top face.
pub fn enumerate_wn(n: &[u32]) -> Result<Enumerated<TreePair>, TreePairError> {
    let top = TreePair::top(n)?;
    Ok(bfs_enumerate(top, |t| t.moves(), |t| t.dimension(), |t| t.key()))
}

/// For `r = 1`: the tree with one interior vertex per bubble and one leaf per mark.
pub fn collapse_to_kn(p: &TreePair) -> Result<Rrt, TreePairError> {
    if p.r() != 1 {
        return Err(TreePairError::WrongArity(p.r()));
    }
    let b = p.bubble();
    if b.len() == 1 {
        return Ok(Rrt::point());
    }
    let mut arena: Vec<Vec<usize>> = vec![vec![]; b.len()];
    for v in 0..b.len() {
        if b.kind(v) == VertexKind::C2 {
            arena[v] = b.children(b.children(v)[0]).to_vec();
        }
    }
    // Seam vertices are unreachable from the root and drop out here.
    Ok(Rrt::from_arena_unchecked(0, &arena))
}

/// Inverse of [`collapse_to_kn`].
pub fn inflate_from_kn(t: &Rrt) -> TreePair {
    let n = vec![t.leaf_count() as u32];
    if t.len() == 1 {
        return TreePair::top(&n).expect("point");
    }
    let (mut kinds, mut children) = (Vec::new(), Vec::new());
    fn go(t: &Rrt, v: usize, kinds: &mut Vec<VertexKind>, children: &mut Vec<Vec<usize>>) -> usize {
        if t.is_leaf(v) {
            return push(kinds, children, VertexKind::Mark, vec![]);
        }
        let cs: Vec<usize> = t.children(v).iter().map(|&c| go(t, c, kinds, children)).collect();
        let s = push(kinds, children, VertexKind::Seam, cs);
        push(kinds, children, VertexKind::C2, vec![s])
    }
    let root = go(t, 0, &mut kinds, &mut children);
    let (bubble, _) = BubbleTree::from_arena(root, &kinds, &children);
    TreePair::assemble(n, bubble, Rrt::point()).expect("inflated tree is stable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(n: &[u32], key: &str) -> TreePair {
        TreePair::from_key(n, key).unwrap()
    }

    #[test]
    fn tops() {
        assert_eq!(TreePair::top(&[1]).unwrap().key(), "m@[]");
        assert_eq!(TreePair::top(&[3]).unwrap().key(), "C(S(m,m,m))@[]");
        assert_eq!(TreePair::top(&[1, 0]).unwrap().key(), "C(S(m),S())@[[],[]]");
        assert_eq!(TreePair::top(&[2, 0, 0]).unwrap().dimension(), 2);
        assert_eq!(TreePair::top(&[0, 0]), Err(TreePairError::BadWeights));
    }

    #[test]
    fn top_of_w200_has_five_edges() {
        let top = TreePair::top(&[2, 0, 0]).unwrap();
        let out = top.moves_detailed();
        let kinds: Vec<u8> = out.iter().flat_map(|o| o.moves.iter().map(|m| m.kind())).collect();
        assert_eq!(out.len(), 5);
        assert_eq!(kinds.iter().filter(|&&k| k == 1).count(), 1);
        assert_eq!(kinds.iter().filter(|&&k| k == 2).count(), 3);
        assert_eq!(kinds.iter().filter(|&&k| k == 3).count(), 1);
    }

    #[test]
    fn unstable_bubbles_are_rejected() {
        use VertexKind::*;
        let c = BubbleCandidate { root: 0, kinds: vec![C2, Seam, Mark], children: vec![vec![1], vec![2], vec![]] };
        assert_eq!(BubbleTree::validate(&c).unwrap_err(), TreePairError::UnstableC2 { vertex: 0 });
        let c = BubbleCandidate { root: 0, kinds: vec![C2, Seam, Seam], children: vec![vec![1, 2], vec![], vec![]] };
        assert_eq!(BubbleTree::validate(&c).unwrap_err(), TreePairError::UnstableC2 { vertex: 0 });
        let c = BubbleCandidate { root: 0, kinds: vec![C2, Mark], children: vec![vec![1], vec![]] };
        assert!(matches!(BubbleTree::validate(&c), Err(TreePairError::KindEdgeMismatch { .. })));
    }

    #[test]
    fn explicit_coherence_is_checked() {
        use VertexKind::*;
        let bubble = BubbleCandidate {
            root: 0,
            kinds: vec![C2, Seam, Mark, Seam],
            children: vec![vec![1, 3], vec![2], vec![], vec![]],
        };
        let seam = RrtCandidate { root: 0, children: vec![vec![1, 2], vec![], vec![]] };
        let ok = TreePairCandidate {
            n: vec![1, 0],
            bubble: bubble.clone(),
            seam: seam.clone(),
            coherence: Some(vec![0, 1, 1, 2]),
        };
        assert!(TreePair::validate(&ok).is_ok());
        let swapped = TreePairCandidate { coherence: Some(vec![0, 2, 2, 1]), ..ok.clone() };
        assert!(matches!(TreePair::validate(&swapped), Err(TreePairError::CoherenceArityMismatch { .. })));
        let loose = TreePairCandidate { coherence: Some(vec![0, 1, 0, 2]), ..ok.clone() };
        assert!(matches!(TreePair::validate(&loose), Err(TreePairError::CoherenceNotContracting { .. })));
        let wrong_n = TreePairCandidate { n: vec![0, 1], coherence: None, ..ok };
        assert!(matches!(TreePair::validate(&wrong_n), Err(TreePairError::MarkCountMismatch { .. })));
    }

    #[test]
    fn key_roundtrip() {
        let w = enumerate_wn(&[1, 1, 0]).unwrap();
        for x in &w.elements {
            assert_eq!(&TreePair::from_key(&[1, 1, 0], &x.key()).unwrap(), x);
            assert_eq!(&TreePair::from_json(&x.to_json()).unwrap(), x);
        }
    }

    #[test]
    fn bubble_tree_does_not_determine_seam_tree() {
        // A face of W_100 and the top of W_10 share a bubble tree.
        let a = tp(&[1, 0, 0], "C(S(m),S())@[[],[[],[]]]");
        let b = TreePair::top(&[1, 0]).unwrap();
        assert_eq!(a.bubble(), b.bubble());
        assert!(derive_coherence(a.bubble(), &[1, 0, 0]).is_err());
        let (s, _) = derive_coherence(b.bubble(), &[1, 0]).unwrap();
        assert_eq!(&s, b.seam());
    }

    #[test]
    fn compositions_small() {
        assert_eq!(compositions(&[0, 0], 0), vec![Vec::<Vec<u32>>::new()]);
        assert_eq!(compositions(&[2], 2), vec![vec![vec![1], vec![1]]]);
        assert_eq!(compositions(&[1, 1], 0).len(), 3);
        assert_eq!(compositions(&[1, 1], 2).len(), 2);
    }

    #[test]
    fn collapse_inflate() {
        for t in &crate::rrt::enumerate_kr(5).elements {
            assert_eq!(&collapse_to_kn(&inflate_from_kn(t)).unwrap(), t);
        }
        assert_eq!(collapse_to_kn(&TreePair::top(&[1, 1]).unwrap()), Err(TreePairError::WrongArity(2)));
    }

    #[test]
    fn dimensions_agree_small() {
        for n in [&[2, 1][..], &[1, 1, 0], &[3, 0]] {
            let w = enumerate_wn(n).unwrap();
            for x in &w.elements {
                assert_eq!(x.dimension(), x.dimension_by_valence(), "{x:?}");
                assert!(x.valence_identity_holds(), "{x:?}");
            }
            assert!(w.poset.cover_defects().is_empty());
        }
    }
}
