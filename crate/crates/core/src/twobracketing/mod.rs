//! 2-bracketings and the maps `2nu`, `2tau` to and from tree-pairs.

mod oracle;

pub use oracle::{enumerate_one_bracketings, enumerate_oracle, OracleError, DEFAULT_ORACLE_BOUND};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bracketing::{nu, tau, BracketingError, OneBracket, OneBracketing};
use crate::poset::Enumerated;
use crate::rrt::{meet_children, RrtCandidate};
use crate::treepair::{enumerate_wn, BubbleCandidate, TreePair, TreePairCandidate, TreePairError, VertexKind};

/// `(width, rows)`: a 1-bracket and, for each seam in it, a possibly empty
/// consecutive range of marks `(lo, hi)`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBracket {
    pub width: OneBracket,
    pub rows: Vec<Option<(u32, u32)>>,
}

impl TwoBracket {
    pub fn new(width: OneBracket, rows: Vec<Option<(u32, u32)>>) -> Self {
        TwoBracket { width, rows }
    }

    pub fn mark(i: usize, j: u32) -> Self {
        TwoBracket { width: OneBracket::singleton(i), rows: vec![Some((j, j))] }
    }

    pub fn root(n: &[u32]) -> Self {
        TwoBracket {
            width: OneBracket::new(1, n.len()),
            rows: n.iter().map(|&x| if x == 0 { None } else { Some((1, x)) }).collect(),
        }
    }

    /// Row of seam `i`, which must lie in the width.
    pub fn row(&self, i: usize) -> Option<(u32, u32)> {
        self.rows[i - self.width.lo]
    }

    pub fn is_mark(&self) -> bool {
        self.width.lo == self.width.hi && matches!(self.rows[0], Some((a, b)) if a == b)
    }

    /// `other ⊂ self`, not necessarily proper.
    pub fn contains(&self, other: &TwoBracket) -> bool {
        self.width.contains_bracket(&other.width)
            && other.width.indices().all(|i| match (other.row(i), self.row(i)) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some((a, b)), Some((c, d))) => c <= a && b <= d,
            })
    }

    pub fn properly_contains(&self, other: &TwoBracket) -> bool {
        self != other && self.contains(other)
    }

    /// Some shared seam has intersecting rows.
    pub fn meets(&self, other: &TwoBracket) -> bool {
        let lo = self.width.lo.max(other.width.lo);
        let hi = self.width.hi.min(other.width.hi);
        (lo..=hi).any(|i| match (self.row(i), other.row(i)) {
            (Some((a, b)), Some((c, d))) => a <= d && c <= b,
            _ => false,
        })
    }

    fn well_formed(&self, n: &[u32]) -> Result<(), &'static str> {
        if self.width.lo < 1 || self.width.lo > self.width.hi || self.width.hi > n.len() {
            return Err("width outside 1..=r");
        }
        if self.rows.len() != self.width.len() {
            return Err("one row per seam in the width");
        }
        for (k, row) in self.rows.iter().enumerate() {
            if let Some((a, b)) = *row {
                if a < 1 || a > b || b > n[self.width.lo + k - 1] {
                    return Err("row outside 1..=n_i");
                }
            }
        }
        if self.rows.iter().all(Option::is_none) {
            return Err("all rows empty");
        }
        Ok(())
    }
}

impl fmt::Display for TwoBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}..{}|", self.width.lo, self.width.hi)?;
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match row {
                None => f.write_str("-")?,
                Some((a, b)) if a == b => write!(f, "{a}")?,
                Some((a, b)) => write!(f, "{a}-{b}")?,
            }
        }
        f.write_str(")")
    }
}

/// The axiom a validation failure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    Structure,
    OneBracketing,
    TwoBracketing,
    RootAndMarks,
    Unfused,
    PartialOrder,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoBracketingError {
    #[error("weights must be nonempty with positive total")]
    BadWeights,
    #[error("underlying 1-bracketing: {0}")]
    Base(BracketingError),
    #[error("2-bracket {bracket} is malformed: {detail}")]
    Malformed { bracket: String, detail: &'static str },
    #[error("width of {bracket} is not in the 1-bracketing")]
    WidthNotInBase { bracket: String },
    #[error("{a} and {b} share a mark but are not nested")]
    Overlap { a: String, b: String },
    #[error("root 2-bracket is missing")]
    MissingRoot,
    #[error("mark ({i},{j}) is missing")]
    MissingMark { i: usize, j: u32 },
    #[error("2-brackets of width {width} do not cover seam {seam}")]
    CoverageViolated { width: OneBracket, seam: usize },
    #[error("{outer} has a proper sub-bracket of its width but none containing mark {mark} of seam {seam}")]
    RefinementViolated { outer: String, seam: usize, mark: u32 },
    #[error("ordered pair mentions {bracket}, which is not in the 2-bracketing")]
    OrderUnknownBracket { bracket: String },
    #[error("ordered pair {a} < {b} spans two widths")]
    OrderAcrossWidths { a: String, b: String },
    #[error("the order is not a strict partial order: {a} lies below itself")]
    OrderNotTransitive { a: String },
    #[error("{a} and {b}: comparable iff disjoint fails")]
    OrderComparabilityMismatch { a: String, b: String },
    #[error("marks ({i},{j}) and ({i},{k}) are out of order")]
    MarkOrderViolated { i: usize, j: u32, k: u32 },
    #[error("{a} < {b} but their sub-brackets {sub_a} and {sub_b} are not ordered the same way")]
    HeredityViolated { a: String, b: String, sub_a: String, sub_b: String },
}

impl TwoBracketingError {
    pub fn axiom(&self) -> Axiom {
        use TwoBracketingError::*;
        match self {
            BadWeights | Base(_) | Malformed { .. } => Axiom::Structure,
            WidthNotInBase { .. } => Axiom::OneBracketing,
            Overlap { .. } => Axiom::TwoBracketing,
            MissingRoot | MissingMark { .. } => Axiom::RootAndMarks,
            CoverageViolated { .. } | RefinementViolated { .. } => Axiom::Unfused,
            _ => Axiom::PartialOrder,
        }
    }
}

/// A validated 2-bracketing. The order is stored transitively closed, as
/// pairs of indices into the sorted bracket list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoBracketing {
    n: Vec<u32>,
    base: OneBracketing,
    brackets: Vec<TwoBracket>,
    order: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBracketingCandidate {
    pub n: Vec<u32>,
    pub brackets1: Vec<(usize, usize)>,
    pub brackets2: Vec<TwoBracket>,
    /// Pairs `(a, b)` meaning `a < b`.
    pub order: Vec<(TwoBracket, TwoBracket)>,
}

impl TwoBracketing {
    pub fn validate(c: &TwoBracketingCandidate) -> Result<TwoBracketing, TwoBracketingError> {
        use TwoBracketingError::*;
        let n = &c.n;
        if n.is_empty() || n.iter().all(|&x| x == 0) {
            return Err(BadWeights);
        }
        let base = OneBracketing::from_pairs(n.len(), &c.brackets1).map_err(Base)?;
        let brackets: Vec<TwoBracket> = c.brackets2.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        for b in &brackets {
            b.well_formed(n).map_err(|detail| Malformed { bracket: b.to_string(), detail })?;
        }
        if let Some(b) = brackets.iter().find(|b| !base.contains(&b.width)) {
            return Err(WidthNotInBase { bracket: b.to_string() });
        }
        for (x, a) in brackets.iter().enumerate() {
            for b in &brackets[x + 1..] {
                if a.meets(b) && !a.contains(b) && !b.contains(a) {
                    return Err(Overlap { a: a.to_string(), b: b.to_string() });
                }
            }
        }
        let pos: HashMap<&TwoBracket, usize> = brackets.iter().enumerate().map(|(i, b)| (b, i)).collect();
        if !pos.contains_key(&TwoBracket::root(n)) {
            return Err(MissingRoot);
        }
        for (i, &ni) in n.iter().enumerate() {
            for j in 1..=ni {
                if !pos.contains_key(&TwoBracket::mark(i + 1, j)) {
                    return Err(MissingMark { i: i + 1, j });
                }
            }
        }
        check_unfused(n, &base, &brackets)?;

        let mut lt = vec![vec![false; brackets.len()]; brackets.len()];
        for (a, b) in &c.order {
            let ia = *pos.get(a).ok_or_else(|| OrderUnknownBracket { bracket: a.to_string() })?;
            let ib = *pos.get(b).ok_or_else(|| OrderUnknownBracket { bracket: b.to_string() })?;
            if a.width != b.width {
                return Err(OrderAcrossWidths { a: a.to_string(), b: b.to_string() });
            }
            lt[ia][ib] = true;
        }
        for k in 0..brackets.len() {
            for i in 0..brackets.len() {
                if lt[i][k] {
                    for j in 0..brackets.len() {
                        if lt[k][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..brackets.len()).find(|&i| lt[i][i]) {
            return Err(OrderNotTransitive { a: brackets[i].to_string() });
        }
        let order: BTreeSet<(usize, usize)> = (0..brackets.len())
            .flat_map(|i| (0..brackets.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| lt[i][j])
            .collect();
        let out = TwoBracketing { n: n.clone(), base, brackets, order };
        out.check_order()?;
        Ok(out)
    }

    fn check_order(&self) -> Result<(), TwoBracketingError> {
        use TwoBracketingError::*;
        let bs = &self.brackets;
        let lt = |i: usize, j: usize| self.order.contains(&(i, j));
        for i in 0..bs.len() {
            for j in i + 1..bs.len() {
                if bs[i].width != bs[j].width {
                    continue;
                }
                let comparable = lt(i, j) || lt(j, i);
                if comparable == bs[i].meets(&bs[j]) {
                    return Err(OrderComparabilityMismatch { a: bs[i].to_string(), b: bs[j].to_string() });
                }
            }
        }
        for (i, &ni) in self.n.iter().enumerate() {
            for j in 1..ni {
                let a = self.index_of(&TwoBracket::mark(i + 1, j)).expect("marks present");
                let b = self.index_of(&TwoBracket::mark(i + 1, j + 1)).expect("marks present");
                if !lt(a, b) {
                    return Err(MarkOrderViolated { i: i + 1, j, k: j + 1 });
                }
            }
        }
        for &(a, b) in &self.order {
            for sa in (0..bs.len()).filter(|&s| bs[a].contains(&bs[s])) {
                for sb in (0..bs.len()).filter(|&s| bs[b].contains(&bs[s]) && bs[s].width == bs[sa].width) {
                    if !lt(sa, sb) {
                        return Err(HeredityViolated {
                            a: bs[a].to_string(),
                            b: bs[b].to_string(),
                            sub_a: bs[sa].to_string(),
                            sub_b: bs[sb].to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn base(&self) -> &OneBracketing {
        &self.base
    }

    pub fn brackets(&self) -> &[TwoBracket] {
        &self.brackets
    }

    pub fn index_of(&self, b: &TwoBracket) -> Option<usize> {
        self.brackets.binary_search(b).ok()
    }

    pub fn less(&self, a: &TwoBracket, b: &TwoBracket) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.order.contains(&(i, j)),
            _ => false,
        }
    }

    /// Ordered pairs of the closed order.
    pub fn order_pairs(&self) -> impl Iterator<Item = (&TwoBracket, &TwoBracket)> {
        self.order.iter().map(|&(i, j)| (&self.brackets[i], &self.brackets[j]))
    }

    /// Non-mark brackets with a proper sub-bracket of the same width.
    pub fn fused_count(&self) -> usize {
        self.brackets
            .iter()
            .filter(|b| !b.is_mark() && self.brackets.iter().any(|c| c.width == b.width && b.properly_contains(c)))
            .count()
    }

    /// `|n| - 1 - #fused + d(B)`; agrees with the tree-pair dimension.
    pub fn dimension(&self) -> i64 {
        let total: i64 = self.n.iter().map(|&x| x as i64).sum();
        total - 1 - self.fused_count() as i64 + self.base.dimension()
    }

    /// `self <= other`: both collections contain `other`'s, and the orders
    /// agree on `other`'s brackets when `strict`.
    pub fn leq(&self, other: &TwoBracketing, strict: bool) -> bool {
        if self.n != other.n || !self.base.leq(&other.base) {
            return false;
        }
        if !other.brackets.iter().all(|b| self.index_of(b).is_some()) {
            return false;
        }
        !strict || other.order_pairs().all(|(a, b)| self.less(a, b))
    }

    pub fn to_candidate(&self) -> TwoBracketingCandidate {
        TwoBracketingCandidate {
            n: self.n.clone(),
            brackets1: self.base.brackets().iter().map(|b| (b.lo, b.hi)).collect(),
            brackets2: self.brackets.clone(),
            order: self.order_pairs().map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    /// Compact canonical key.
    pub fn key(&self) -> String {
        let mut s = self.base.key();
        s.push('|');
        for b in &self.brackets {
            s.push_str(&b.to_string());
        }
        s.push('|');
        for (k, (i, j)) in self.order.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&format!("{i}<{j}"));
        }
        s
    }
}

fn check_unfused(n: &[u32], base: &OneBracketing, brackets: &[TwoBracket]) -> Result<(), TwoBracketingError> {
    for w in base.brackets() {
        let group: Vec<&TwoBracket> = brackets.iter().filter(|b| b.width == *w).collect();
        for i in w.indices() {
            let mut covered = vec![false; n[i - 1] as usize + 1];
            for b in &group {
                if let Some((a, c)) = b.row(i) {
                    for j in a..=c {
                        covered[j as usize] = true;
                    }
                }
            }
            if covered[1..].iter().any(|&x| !x) {
                return Err(TwoBracketingError::CoverageViolated { width: *w, seam: i });
            }
        }
        for b in &group {
            let subs: Vec<&&TwoBracket> = group.iter().filter(|c| b.properly_contains(c)).collect();
            if subs.is_empty() {
                continue;
            }
            for i in w.indices() {
                let Some((a, c)) = b.row(i) else { continue };
                for j in a..=c {
                    if !subs.iter().any(|s| matches!(s.row(i), Some((x, y)) if x <= j && j <= y)) {
                        return Err(TwoBracketingError::RefinementViolated { outer: b.to_string(), seam: i, mark: j });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The 2-bracket of each `C2` or mark vertex; `None` for seams.
pub fn vertex_brackets(p: &TreePair) -> Vec<Option<TwoBracket>> {
    let b = p.bubble();
    let ranges = p.seam().leaf_ranges();
    let r = p.r();
    // Marks below each vertex, per seam, as (min, max).
    let mut below: Vec<Vec<Option<(u32, u32)>>> = vec![vec![None; r]; b.len()];
    for v in (0..b.len()).rev() {
        if let Some((i, j)) = p.mark_label(v) {
            below[v][i - 1] = Some((j, j));
        }
        for &c in b.children(v) {
            for i in 0..r {
                below[v][i] = merge(below[v][i], below[c][i]);
            }
        }
    }
    (0..b.len())
        .map(|v| {
            (b.kind(v) != VertexKind::Seam).then(|| {
                let (lo, hi) = ranges[p.coherence()[v]];
                TwoBracket { width: OneBracket::new(lo, hi), rows: (lo..=hi).map(|i| below[v][i - 1]).collect() }
            })
        })
        .collect()
}

/// The 2-bracketing of a tree-pair: one 2-bracket per `C2` or mark vertex.
pub fn two_nu(p: &TreePair) -> TwoBracketing {
    let b = p.bubble();
    let n = p.n();
    let all = vertex_brackets(p);
    let verts: Vec<usize> = (0..b.len()).filter(|&v| all[v].is_some()).collect();
    let brackets: Vec<TwoBracket> = verts.iter().map(|&v| all[v].clone().expect("non-seam")).collect();
    let parents = b.parents();
    let mut order = Vec::new();
    for x in 0..verts.len() {
        for y in 0..verts.len() {
            let (u, v) = (verts[x], verts[y]);
            if x == y || p.coherence()[u] != p.coherence()[v] || brackets[x].meets(&brackets[y]) {
                continue;
            }
            let (du, dv) = meet_children(&parents, u, v);
            if du < dv {
                order.push((brackets[x].clone(), brackets[y].clone()));
            }
        }
    }
    let cand = TwoBracketingCandidate {
        n: n.to_vec(),
        brackets1: nu(p.seam()).brackets().iter().map(|w| (w.lo, w.hi)).collect(),
        brackets2: brackets,
        order,
    };
    TwoBracketing::validate(&cand).expect("the image of a stable tree-pair is a 2-bracketing")
}

fn merge(a: Option<(u32, u32)>, b: Option<(u32, u32)>) -> Option<(u32, u32)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

/// The tree-pair of a 2-bracketing, built vertex set by vertex set.
pub fn two_tau(x: &TwoBracketing) -> Result<TreePair, TreePairError> {
    let bs = x.brackets();
    let seam = tau(x.base());
    let seam_ranges = seam.leaf_ranges();
    let seam_vertex: HashMap<OneBracket, usize> =
        seam_ranges.iter().enumerate().map(|(v, &(lo, hi))| (OneBracket::new(lo, hi), v)).collect();

    if x.n() == [1] {
        return TreePair::top(&[1]);
    }
    let mut kinds: Vec<VertexKind> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut coherence: Vec<usize> = Vec::new();
    // One bubble-tree vertex per 2-bracket: C2 or mark.
    for b in bs {
        kinds.push(if b.is_mark() { VertexKind::Mark } else { VertexKind::C2 });
        children.push(vec![]);
        coherence.push(seam_vertex[&b.width]);
    }
    let immediate = |outer: &TwoBracket, inner: &TwoBracket| {
        outer.properly_contains(inner) && !bs.iter().any(|m| outer.properly_contains(m) && m.properly_contains(inner))
    };
    for (k, b) in bs.iter().enumerate() {
        if b.is_mark() {
            continue;
        }
        let fused = bs.iter().any(|c| c.width == b.width && b.properly_contains(c));
        let seam_widths: Vec<OneBracket> = if fused { vec![b.width] } else { x.base().children_of(&b.width) };
        for w in seam_widths {
            let mut members: Vec<usize> = (0..bs.len()).filter(|&c| bs[c].width == w && immediate(b, &bs[c])).collect();
            members.sort_by(|&p, &q| {
                if x.less(&bs[p], &bs[q]) {
                    std::cmp::Ordering::Less
                } else if x.less(&bs[q], &bs[p]) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            });
            let s = kinds.len();
            kinds.push(VertexKind::Seam);
            children.push(members);
            coherence.push(seam_vertex[&w]);
            children[k].push(s);
        }
    }
    let root = x.index_of(&TwoBracket::root(x.n())).expect("root present");
    TreePair::validate(&TreePairCandidate {
        n: x.n().to_vec(),
        bubble: BubbleCandidate { root, kinds, children },
        seam: RrtCandidate { root: 0, children: seam.arena().to_vec() },
        coherence: Some(coherence),
    })
}

/// Agreement of the tree and bracket models on an enumerated `W_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub elements: usize,
    /// `2tau(2nu(p)) == p` for every element.
    pub roundtrip: bool,
    /// `p <= q` iff `2nu(p) <= 2nu(q)`.
    pub order: bool,
}

impl ModelReport {
    pub fn holds(&self) -> bool {
        self.roundtrip && self.order
    }
}

pub fn check_models(w: &Enumerated<TreePair>) -> ModelReport {
    let img: Vec<TwoBracketing> = w.elements.iter().map(two_nu).collect();
    let roundtrip = w.elements.iter().zip(&img).all(|(p, x)| two_tau(x).as_ref() == Ok(p));
    let order = (0..w.len()).all(|a| (0..w.len()).all(|b| w.poset.leq(a, b) == img[a].leq(&img[b], true)));
    ModelReport { elements: w.len(), roundtrip, order }
}

/// Brute-force enumeration against the move-generated poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub n: Vec<u32>,
    pub moves: usize,
    pub oracle: usize,
    /// Oracle elements not reached by moves, as keys.
    pub missing: Vec<String>,
    /// Move-generated elements the oracle rejects, as keys.
    pub extra: Vec<String>,
    /// Order on the oracle side agrees with the move order.
    pub order: bool,
}

impl OracleComparison {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.order
    }
}

pub fn compare_oracle(n: &[u32], bound: u32) -> Result<OracleComparison, OracleError> {
    let oracle = enumerate_oracle(n, bound)?;
    let w = enumerate_wn(n).map_err(|_| OracleError::BadWeights)?;
    let img: Vec<TwoBracketing> = w.elements.iter().map(two_nu).collect();
    let theirs: BTreeSet<&TwoBracketing> = oracle.iter().collect();
    let ours: BTreeSet<&TwoBracketing> = img.iter().collect();
    let missing = theirs.difference(&ours).map(|x| x.key()).collect();
    let extra = ours.difference(&theirs).map(|x| x.key()).collect();
    let order = (0..w.len()).all(|a| (0..w.len()).all(|b| w.poset.leq(a, b) == img[a].leq(&img[b], true)));
    Ok(OracleComparison { n: n.to_vec(), moves: w.len(), oracle: oracle.len(), missing, extra, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treepair::enumerate_wn;

    fn br(lo: usize, hi: usize, rows: &[Option<(u32, u32)>]) -> TwoBracket {
        TwoBracket::new(OneBracket::new(lo, hi), rows.to_vec())
    }

    #[test]
    fn containment_and_meets() {
        let a = br(1, 2, &[Some((1, 1)), Some((1, 1))]);
        let b = br(1, 2, &[None, Some((1, 1))]);
        let c = br(2, 2, &[Some((1, 1))]);
        assert!(a.contains(&b) && a.contains(&c) && b.contains(&c));
        assert!(!b.contains(&a));
        assert!(a.meets(&b));
        assert!(!br(1, 2, &[Some((1, 1)), None]).meets(&b));
    }

    #[test]
    fn roundtrip_w21() {
        let w = enumerate_wn(&[2, 1]).unwrap();
        for p in &w.elements {
            let x = two_nu(p);
            assert_eq!(x.dimension(), p.dimension());
            assert_eq!(&two_tau(&x).unwrap(), p);
        }
    }

    #[test]
    fn point_case() {
        let p = TreePair::top(&[1]).unwrap();
        let x = two_nu(&p);
        assert_eq!(x.brackets().len(), 1);
        assert_eq!(x.dimension(), 0);
        assert_eq!(two_tau(&x).unwrap(), p);
    }
}
