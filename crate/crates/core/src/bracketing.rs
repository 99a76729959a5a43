//! 1-bracketings of `{1..r}` and the maps `nu` and `tau` to and from trees.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{bfs_enumerate, Enumerated};
use crate::rrt::Rrt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketingError {
    #[error("brackets {a} and {b} overlap without nesting")]
    Overlap { a: OneBracket, b: OneBracket },
    #[error("the full bracket (1..{r}) is missing")]
    MissingRoot { r: usize },
    #[error("singleton bracket ({leaf}) is missing")]
    MissingLeaf { leaf: usize },
    #[error("bracket {indices:?} is empty or not a consecutive range in 1..={r}")]
    NotConsecutive { indices: Vec<usize>, r: usize },
    #[error("r must be at least 1")]
    EmptyRange,
}

/// A consecutive range `lo..=hi`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OneBracket {
    pub lo: usize,
    pub hi: usize,
}

impl OneBracket {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(1 <= lo && lo <= hi);
        OneBracket { lo, hi }
    }

    pub fn singleton(i: usize) -> Self {
        OneBracket { lo: i, hi: i }
    }

    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn contains_bracket(&self, other: &OneBracket) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn meets(&self, other: &OneBracket) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }

    /// Parses an index set, requiring it to be a nonempty range inside `1..=r`.
    pub fn from_indices(indices: &[usize], r: usize) -> Result<Self, BracketingError> {
        let err = || BracketingError::NotConsecutive { indices: indices.to_vec(), r };
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let (&lo, &hi) = (sorted.first().ok_or_else(err)?, sorted.last().ok_or_else(err)?);
        if lo < 1 || hi > r || sorted.len() != hi + 1 - lo {
            return Err(err());
        }
        Ok(OneBracket { lo, hi })
    }
}

impl fmt::Display for OneBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "({})", self.lo)
        } else {
            write!(f, "({}..{})", self.lo, self.hi)
        }
    }
}

/// A validated 1-bracketing, brackets sorted by `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneBracketing {
    r: usize,
    brackets: BTreeSet<OneBracket>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneBracketingJson {
    pub r: usize,
    pub brackets: Vec<[usize; 2]>,
}

impl OneBracketing {
    /// Validates brackets given as index sets.
    pub fn validate(r: usize, brackets: &[Vec<usize>]) -> Result<Self, BracketingError> {
        let bs = brackets.iter().map(|b| OneBracket::from_indices(b, r)).collect::<Result<Vec<_>, _>>()?;
        Self::from_brackets(r, bs)
    }

    /// Validates brackets given as `(lo, hi)` pairs.
    pub fn from_pairs(r: usize, pairs: &[(usize, usize)]) -> Result<Self, BracketingError> {
        let bs = pairs
            .iter()
            .map(|&(lo, hi)| {
                if lo < 1 || lo > hi || hi > r {
                    Err(BracketingError::NotConsecutive { indices: vec![lo, hi], r })
                } else {
                    Ok(OneBracket { lo, hi })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_brackets(r, bs)
    }

    pub fn from_brackets(r: usize, bs: impl IntoIterator<Item = OneBracket>) -> Result<Self, BracketingError> {
        if r == 0 {
            return Err(BracketingError::EmptyRange);
        }
        let brackets: BTreeSet<OneBracket> = bs.into_iter().collect();
        if let Some(b) = brackets.iter().find(|b| b.lo < 1 || b.hi > r || b.lo > b.hi) {
            return Err(BracketingError::NotConsecutive { indices: b.indices().collect(), r });
        }
        // Nesting-stack scan in (lo asc, hi desc) order.
        let mut scan: Vec<OneBracket> = brackets.iter().copied().collect();
        scan.sort_by_key(|b| (b.lo, std::cmp::Reverse(b.hi)));
        let mut stack: Vec<OneBracket> = Vec::new();
        for b in scan {
            while stack.last().is_some_and(|t| t.hi < b.lo) {
                stack.pop();
            }
            if let Some(t) = stack.last() {
                if b.hi > t.hi {
                    return Err(BracketingError::Overlap { a: *t, b });
                }
            }
            stack.push(b);
        }
        if !brackets.contains(&OneBracket::new(1, r)) {
            return Err(BracketingError::MissingRoot { r });
        }
        if let Some(leaf) = (1..=r).find(|&i| !brackets.contains(&OneBracket::singleton(i))) {
            return Err(BracketingError::MissingLeaf { leaf });
        }
        Ok(OneBracketing { r, brackets })
    }

    /// The bracketing with only the mandatory brackets.
    pub fn top(r: usize) -> Self {
        let mut b: BTreeSet<OneBracket> = (1..=r).map(OneBracket::singleton).collect();
        b.insert(OneBracket::new(1, r));
        OneBracketing { r, brackets: b }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn brackets(&self) -> &BTreeSet<OneBracket> {
        &self.brackets
    }

    pub fn contains(&self, b: &OneBracket) -> bool {
        self.brackets.contains(b)
    }

    pub fn len(&self) -> usize {
        self.brackets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `2r - |B| - 1`.
    pub fn dimension(&self) -> i64 {
        2 * self.r as i64 - self.brackets.len() as i64 - 1
    }

    /// `self <= other` iff `self` refines `other`, i.e. contains it.
    pub fn leq(&self, other: &OneBracketing) -> bool {
        self.r == other.r && other.brackets.is_subset(&self.brackets)
    }

    /// Maximal proper sub-brackets of `b`, in order.
    pub fn children_of(&self, b: &OneBracket) -> Vec<OneBracket> {
        let mut out: Vec<OneBracket> = Vec::new();
        let mut cursor = b.lo;
        while cursor <= b.hi && b.len() > 1 {
            let next = self
                .brackets
                .iter()
                .filter(|c| c.lo == cursor && c.hi <= b.hi && *c != b)
                .max_by_key(|c| c.hi)
                .copied()
                .expect("singletons are present");
            out.push(next);
            cursor = next.hi + 1;
        }
        out
    }

    pub fn to_json(&self) -> OneBracketingJson {
        OneBracketingJson { r: self.r, brackets: self.brackets.iter().map(|b| [b.lo, b.hi]).collect() }
    }

    pub fn from_json(j: &OneBracketingJson) -> Result<Self, BracketingError> {
        let pairs: Vec<(usize, usize)> = j.brackets.iter().map(|b| (b[0], b[1])).collect();
        Self::from_pairs(j.r, &pairs)
    }

    /// Compact canonical key, e.g. `4:(1..4)(1..2)(1)(2)(3)(4)` sorted by `(lo, hi)`.
    pub fn key(&self) -> String {
        let mut s = format!("{}:", self.r);
        for b in &self.brackets {
            s.push_str(&b.to_string());
        }
        s
    }

    /// Every bracketing obtained by adding one admissible bracket.
    pub fn moves(&self) -> Vec<OneBracketing> {
        let mut out = Vec::new();
        for lo in 1..=self.r {
            for hi in lo + 1..=self.r {
                let b = OneBracket::new(lo, hi);
                if b.len() == self.r || self.brackets.contains(&b) {
                    continue;
                }
                if self.brackets.iter().all(|c| !c.meets(&b) || c.contains_bracket(&b) || b.contains_bracket(c)) {
                    let mut next = self.clone();
                    next.brackets.insert(b);
                    out.push(next);
                }
            }
        }
        out
    }
}

/// Leaf intervals of all vertices.
pub fn nu(t: &Rrt) -> OneBracketing {
    let r = t.leaf_count();
    let brackets = t.leaf_ranges().into_iter().map(|(lo, hi)| OneBracket::new(lo, hi)).collect();
    OneBracketing { r, brackets }
}

/// The tree whose vertices are the brackets, children being maximal proper
/// sub-brackets.
pub fn tau(b: &OneBracketing) -> Rrt {
    // In (lo asc, hi desc) order the brackets are already in preorder.
    let mut order: Vec<OneBracket> = b.brackets.iter().copied().collect();
    order.sort_by_key(|x| (x.lo, std::cmp::Reverse(x.hi)));
    let mut arena: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    let mut stack: Vec<usize> = Vec::new();
    for (i, x) in order.iter().enumerate() {
        while stack.last().is_some_and(|&t| !order[t].contains_bracket(x)) {
            stack.pop();
        }
        if let Some(&p) = stack.last() {
            arena[p].push(i);
        }
        stack.push(i);
    }
    Rrt::from_arena_unchecked(0, &arena)
}

/// `K_r` in the bracket model, enumerated from the top bracketing.
pub fn enumerate_kr_brackets(r: usize) -> Enumerated<OneBracketing> {
    bfs_enumerate(OneBracketing::top(r), |b| b.moves(), |b| b.dimension(), |b| b.key())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rrt::enumerate_kr;

    #[test]
    fn axioms_are_named() {
        assert_eq!(
            OneBracketing::from_pairs(3, &[(1, 3), (1, 2), (2, 3), (1, 1), (2, 2), (3, 3)]),
            Err(BracketingError::Overlap { a: OneBracket::new(1, 2), b: OneBracket::new(2, 3) })
        );
        assert_eq!(OneBracketing::from_pairs(3, &[(1, 1), (2, 2), (3, 3)]), Err(BracketingError::MissingRoot { r: 3 }));
        assert_eq!(
            OneBracketing::from_pairs(3, &[(1, 3), (1, 1), (3, 3)]),
            Err(BracketingError::MissingLeaf { leaf: 2 })
        );
        assert!(matches!(OneBracketing::validate(3, &[vec![1, 3]]), Err(BracketingError::NotConsecutive { .. })));
    }

    #[test]
    fn nu_tau_roundtrip_small() {
        let k5 = enumerate_kr(5);
        for t in &k5.elements {
            let b = nu(t);
            assert_eq!(&tau(&b), t);
            assert_eq!(b.dimension(), t.dimension());
        }
    }

    #[test]
    fn bracket_model_matches_tree_model() {
        for r in 1..=6 {
            let a = enumerate_kr(r);
            let b = enumerate_kr_brackets(r);
            assert_eq!(a.poset.face_vector(), b.poset.face_vector());
            assert!(a.poset.is_isomorphic(&b.poset));
        }
    }

    #[test]
    fn children_of_root() {
        let b = OneBracketing::from_pairs(4, &[(1, 4), (2, 3), (1, 1), (2, 2), (3, 3), (4, 4)]).unwrap();
        assert_eq!(
            b.children_of(&OneBracket::new(1, 4)),
            vec![OneBracket::new(1, 1), OneBracket::new(2, 3), OneBracket::new(4, 4)]
        );
    }
}
