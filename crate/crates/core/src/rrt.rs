//! Rooted ribbon trees and the associahedron `K_r` in the tree model.
//!
//! A tree is stored as a preorder arena with the root at index 0 and every
//! child list in planar order. Two trees are isomorphic exactly when their
//! arenas are equal, so the derived `Eq`, `Hash` and `Ord` are the canonical
//! ones.

use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::poset::{bfs_enumerate, Enumerated};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RrtError {
    #[error("vertex {vertex} lists the root as a child")]
    RootIsChild { vertex: usize },
    #[error("vertex {vertex} has {parents} parents")]
    OrphanOrMultiParent { vertex: usize, parents: usize },
    #[error("directed cycle through vertex {vertex}")]
    DirectedCycle { vertex: usize },
    #[error("vertex {vertex} has exactly one child")]
    UnaryVertex { vertex: usize },
    #[error("vertex {vertex} refers to unknown child {child}")]
    UnknownVertex { vertex: usize, child: usize },
    #[error("vertex {vertex} expects a component with {expected} leaves, got {found}")]
    ArityMismatch { vertex: usize, expected: usize, found: usize },
    #[error("expected {expected} components, got {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("leaf counts differ: {left} vs {right}")]
    LeafCountMismatch { left: usize, right: usize },
    #[error("malformed nested-array encoding: {0}")]
    Malformed(String),
}

/// An unvalidated tree with arbitrary vertex labels `0..children.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrtCandidate {
    pub root: usize,
    pub children: Vec<Vec<usize>>,
}

/// Checks that `children` describes a tree rooted at `root` covering every
/// vertex. Stability is not checked here.
pub(crate) fn check_tree_shape(root: usize, children: &[Vec<usize>]) -> Result<(), RrtError> {
    let n = children.len();
    if root >= n {
        return Err(RrtError::UnknownVertex { vertex: root, child: root });
    }
    let mut parents = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    for (v, cs) in children.iter().enumerate() {
        for &c in cs {
            if c >= n {
                return Err(RrtError::UnknownVertex { vertex: v, child: c });
            }
            if c == root {
                return Err(RrtError::RootIsChild { vertex: v });
            }
            parents[c] += 1;
            parent[c] = v;
        }
    }
    for (v, &p) in parents.iter().enumerate() {
        if v != root && p != 1 {
            return Err(RrtError::OrphanOrMultiParent { vertex: v, parents: p });
        }
    }
    // With unique parents, a vertex lies on a cycle iff it never reaches the root.
    let mut reaches = vec![false; n];
    reaches[root] = true;
    for start in 0..n {
        let mut path = Vec::new();
        let mut v = start;
        while !reaches[v] {
            if path.len() > n {
                return Err(RrtError::DirectedCycle { vertex: start });
            }
            path.push(v);
            v = parent[v];
        }
        for u in path {
            reaches[u] = true;
        }
    }
    Ok(())
}

/// Preorder relabelling: returns `(order, old_to_new)` where `order[new] = old`.
pub(crate) fn preorder(root: usize, children: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(children.len());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children[v].iter().rev());
    }
    let mut old_to_new = vec![usize::MAX; children.len()];
    for (new, &old) in order.iter().enumerate() {
        old_to_new[old] = new;
    }
    (order, old_to_new)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rrt {
    children: Vec<Vec<usize>>,
}

/// Insert a new vertex under `vertex` adopting children `start..start+len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RrtMove {
    pub vertex: usize,
    pub start: usize,
    pub len: usize,
}

impl Rrt {
    /// Validates a candidate and relabels it canonically.
    pub fn validate(c: &RrtCandidate) -> Result<Rrt, RrtError> {
        Self::validate_with_map(c).map(|(t, _)| t)
    }

    /// As [`Rrt::validate`], also returning the old-to-new vertex map.
    pub fn validate_with_map(c: &RrtCandidate) -> Result<(Rrt, Vec<usize>), RrtError> {
        check_tree_shape(c.root, &c.children)?;
        if let Some(v) = (0..c.children.len()).find(|&v| c.children[v].len() == 1) {
            return Err(RrtError::UnaryVertex { vertex: v });
        }
        let (order, map) = preorder(c.root, &c.children);
        let children = order.iter().map(|&old| c.children[old].iter().map(|&ch| map[ch]).collect()).collect();
        Ok((Rrt { children }, map))
    }

    pub(crate) fn from_arena_unchecked(root: usize, children: &[Vec<usize>]) -> Rrt {
        let (order, map) = preorder(root, children);
        let children = order.iter().map(|&old| children[old].iter().map(|&ch| map[ch]).collect()).collect();
        Rrt { children }
    }

    /// The one-vertex tree `•`, the only tree with one leaf.
    pub fn point() -> Rrt {
        Rrt { children: vec![vec![]] }
    }

    /// The corolla with `r` leaves; `r = 1` gives `•`.
    pub fn corolla(r: usize) -> Rrt {
        assert!(r >= 1, "a tree has at least one leaf");
        if r == 1 {
            return Self::point();
        }
        let mut children = vec![(1..=r).collect::<Vec<_>>()];
        children.extend(std::iter::repeat_n(vec![], r));
        Rrt { children }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn arena(&self) -> &[Vec<usize>] {
        &self.children
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
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

    /// Leaves in planar order (preorder restricted to leaves).
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.is_leaf(v)).collect()
    }

    /// `r - #interior - 1`.
    pub fn dimension(&self) -> i64 {
        self.leaf_count() as i64 - self.interior().len() as i64 - 1
    }

    /// `sum over interior vertices of (#in - 2)`.
    pub fn dimension_by_valence(&self) -> i64 {
        self.interior().iter().map(|&v| self.children[v].len() as i64 - 2).sum()
    }

    /// 1-based inclusive leaf interval below each vertex.
    pub fn leaf_ranges(&self) -> Vec<(usize, usize)> {
        let mut ranges = vec![(0, 0); self.len()];
        let mut next = 1;
        for v in 0..self.len() {
            if self.is_leaf(v) {
                ranges[v] = (next, next);
                next += 1;
            }
        }
        for v in (0..self.len()).rev() {
            if let (Some(&a), Some(&b)) = (self.children[v].first(), self.children[v].last()) {
                ranges[v] = (ranges[a].0, ranges[b].1);
            }
        }
        ranges
    }

    pub fn apply_move(&self, m: RrtMove) -> Rrt {
        let mut arena = self.children.clone();
        let fresh = arena.len();
        let block: Vec<usize> = arena[m.vertex].drain(m.start..m.start + m.len).collect();
        arena[m.vertex].insert(m.start, fresh);
        arena.push(block);
        Self::from_arena_unchecked(0, &arena)
    }

    /// Every codimension-one degeneration, in preorder of the anchor vertex.
    pub fn moves(&self) -> Vec<(RrtMove, Rrt)> {
        let mut out = Vec::new();
        for v in self.interior() {
            let k = self.children[v].len();
            for len in 2..k {
                for start in 0..=k - len {
                    let m = RrtMove { vertex: v, start, len };
                    out.push((m, self.apply_move(m)));
                }
            }
        }
        out
    }

    /// Substitutes `components[i]` into the corolla at the `i`-th interior
    /// vertex (preorder).
    pub fn gamma(&self, components: &[Rrt]) -> Result<Rrt, RrtError> {
        let interior = self.interior();
        if components.len() != interior.len() {
            return Err(RrtError::ComponentCount { expected: interior.len(), found: components.len() });
        }
        for (&v, c) in interior.iter().zip(components) {
            if c.leaf_count() != self.children[v].len() {
                return Err(RrtError::ArityMismatch {
                    vertex: v,
                    expected: self.children[v].len(),
                    found: c.leaf_count(),
                });
            }
        }
        let mut slot = vec![usize::MAX; self.len()];
        for (i, &v) in interior.iter().enumerate() {
            slot[v] = i;
        }
        let mut arena: Vec<Vec<usize>> = Vec::new();
        let root = self.emit_gamma(0, components, &slot, &mut arena);
        Ok(Self::from_arena_unchecked(root, &arena))
    }

    fn emit_gamma(&self, v: usize, comps: &[Rrt], slot: &[usize], arena: &mut Vec<Vec<usize>>) -> usize {
        if self.is_leaf(v) {
            arena.push(vec![]);
            return arena.len() - 1;
        }
        let sub: Vec<usize> = self.children[v].iter().map(|&c| self.emit_gamma(c, comps, slot, arena)).collect();
        let comp = &comps[slot[v]];
        let mut leaf = 0;
        let mut ids = vec![0; comp.len()];
        for u in 0..comp.len() {
            if comp.is_leaf(u) {
                ids[u] = sub[leaf];
                leaf += 1;
            } else {
                ids[u] = arena.len();
                arena.push(vec![]);
            }
        }
        for u in 0..comp.len() {
            if !comp.is_leaf(u) {
                arena[ids[u]] = comp.children[u].iter().map(|&c| ids[c]).collect();
            }
        }
        ids[0]
    }

    /// The RRT homomorphism `fine -> coarse` if one exists.
    ///
    /// The candidate map sends each vertex to the coarse vertex with the
    /// smallest leaf interval containing its own; it is then checked against
    /// every homomorphism condition independently.
    pub fn contraction_hom(fine: &Rrt, coarse: &Rrt) -> Result<Option<Vec<usize>>, RrtError> {
        if fine.leaf_count() != coarse.leaf_count() {
            return Err(RrtError::LeafCountMismatch { left: fine.leaf_count(), right: coarse.leaf_count() });
        }
        let fr = fine.leaf_ranges();
        let cr = coarse.leaf_ranges();
        let map: Vec<usize> = fr
            .iter()
            .map(|&(lo, hi)| {
                (0..coarse.len())
                    .filter(|&w| cr[w].0 <= lo && hi <= cr[w].1)
                    .min_by_key(|&w| cr[w].1 - cr[w].0)
                    .expect("root contains everything")
            })
            .collect();
        if map[0] != 0 {
            return Ok(None);
        }
        for v in 0..fine.len() {
            if fine.is_leaf(v) != coarse.is_leaf(map[v]) {
                return Ok(None);
            }
        }
        let mut hit = vec![0usize; coarse.len()];
        for &w in &map {
            hit[w] += 1;
        }
        if hit.contains(&0) {
            return Ok(None);
        }
        let mut inner_edges = vec![0usize; coarse.len()];
        for a in 0..fine.len() {
            for &b in &fine.children[a] {
                if map[b] == map[a] {
                    inner_edges[map[a]] += 1;
                } else if !coarse.children[map[a]].contains(&map[b]) {
                    return Ok(None);
                }
            }
        }
        // A fiber is connected iff it is a subtree: edges = vertices - 1.
        if (0..coarse.len()).any(|w| inner_edges[w] + 1 != hit[w]) {
            return Ok(None);
        }
        let parents = fine.parents();
        for w in 0..coarse.len() {
            let cs = coarse.children(w);
            for x in 0..cs.len() {
                for y in x + 1..cs.len() {
                    for b1 in (0..fine.len()).filter(|&b| map[b] == cs[x]) {
                        for b2 in (0..fine.len()).filter(|&b| map[b] == cs[y]) {
                            let (d1, d2) = meet_children(&parents, b1, b2);
                            if d1 >= d2 {
                                return Ok(None);
                            }
                        }
                    }
                }
            }
        }
        Ok(Some(map))
    }

    /// Reverses every child list.
    pub fn mirror(&self) -> Rrt {
        let arena: Vec<Vec<usize>> = self.children.iter().map(|c| c.iter().rev().copied().collect()).collect();
        Self::from_arena_unchecked(0, &arena)
    }

    /// Nested-array serialization: a leaf is `[]`.
    pub fn to_nested(&self) -> String {
        let mut s = String::new();
        self.write_nested(0, &mut s);
        s
    }

    fn write_nested(&self, v: usize, s: &mut String) {
        s.push('[');
        for (i, &c) in self.children[v].iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            self.write_nested(c, s);
        }
        s.push(']');
    }

    pub fn to_json(&self) -> Value {
        fn go(t: &Rrt, v: usize) -> Value {
            Value::Array(t.children[v].iter().map(|&c| go(t, c)).collect())
        }
        go(self, 0)
    }

    pub fn from_json(v: &Value) -> Result<Rrt, RrtError> {
        fn go(v: &Value, arena: &mut Vec<Vec<usize>>) -> Result<usize, RrtError> {
            let items = v.as_array().ok_or_else(|| RrtError::Malformed(format!("expected array, got {v}")))?;
            let id = arena.len();
            arena.push(vec![]);
            let mut cs = Vec::with_capacity(items.len());
            for item in items {
                cs.push(go(item, arena)?);
            }
            arena[id] = cs;
            Ok(id)
        }
        let mut arena = Vec::new();
        go(v, &mut arena)?;
        Self::validate(&RrtCandidate { root: 0, children: arena })
    }

    pub fn from_nested(s: &str) -> Result<Rrt, RrtError> {
        let v: Value = serde_json::from_str(s).map_err(|e| RrtError::Malformed(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// Children of the meet of `a` and `b` on the paths towards `a` and `b`,
/// as positions in the meet's child list. Requires `a` and `b` incomparable.
pub(crate) fn meet_children(parents: &[Option<usize>], a: usize, b: usize) -> (usize, usize) {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while let Some(u) = parents[v] {
            p.push(u);
            v = u;
        }
        p.reverse();
        p
    };
    let (pa, pb) = (path(a), path(b));
    let mut i = 0;
    while i < pa.len() && i < pb.len() && pa[i] == pb[i] {
        i += 1;
    }
    assert!(i < pa.len() && i < pb.len(), "meet_children needs incomparable vertices");
    // Preorder labels order siblings the same way as the child list.
    (pa[i], pb[i])
}

impl fmt::Display for Rrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_nested())
    }
}

impl fmt::Debug for Rrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rrt({})", self.to_nested())
    }
}

/// `K_r`, enumerated breadth-first from the corolla.
pub fn enumerate_kr(r: usize) -> Enumerated<Rrt> {
    bfs_enumerate(
        Rrt::corolla(r),
        |t| t.moves().into_iter().map(|(_, s)| s).collect(),
        |t| t.dimension(),
        |t| t.to_nested(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Rrt {
        Rrt::from_nested(s).unwrap()
    }

    #[test]
    fn corolla_dimensions() {
        assert_eq!(Rrt::corolla(1).dimension(), 0);
        assert_eq!(Rrt::corolla(2).dimension(), 0);
        assert_eq!(Rrt::corolla(5).dimension(), 3);
        assert_eq!(Rrt::corolla(5).to_nested(), "[[],[],[],[],[]]");
    }

    #[test]
    fn four_corolla_has_five_moves() {
        let ms = Rrt::corolla(4).moves();
        assert_eq!(ms.len(), 5);
        assert!(ms.iter().all(|(_, s)| s.dimension() == 1));
    }

    #[test]
    fn validation_errors() {
        let c = |root, children: Vec<Vec<usize>>| Rrt::validate(&RrtCandidate { root, children });
        assert_eq!(c(0, vec![vec![1], vec![]]), Err(RrtError::UnaryVertex { vertex: 0 }));
        assert_eq!(c(0, vec![vec![1, 2], vec![0], vec![]]), Err(RrtError::RootIsChild { vertex: 1 }));
        assert_eq!(
            c(0, vec![vec![1, 2], vec![], vec![], vec![]]),
            Err(RrtError::OrphanOrMultiParent { vertex: 3, parents: 0 })
        );
        assert_eq!(
            c(0, vec![vec![1, 2], vec![3, 4], vec![], vec![1, 4], vec![]]).unwrap_err(),
            RrtError::OrphanOrMultiParent { vertex: 1, parents: 2 }
        );
        assert!(matches!(
            c(0, vec![vec![1, 2], vec![], vec![], vec![4, 5], vec![3, 6], vec![], vec![]]),
            Err(RrtError::DirectedCycle { .. })
        ));
    }

    #[test]
    fn relabelling_is_canonical() {
        let a =
            Rrt::validate(&RrtCandidate { root: 2, children: vec![vec![], vec![], vec![3, 0], vec![4, 1], vec![]] })
                .unwrap();
        assert_eq!(a.to_nested(), "[[[],[]],[]]");
    }

    #[test]
    fn leaf_ranges_match_shape() {
        let x = t("[[],[[],[]],[]]");
        assert_eq!(x.leaf_ranges(), vec![(1, 4), (1, 1), (2, 3), (2, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn gamma_substitutes_in_preorder() {
        let x = t("[[],[[],[]]]");
        let g = x.gamma(&[Rrt::corolla(2), Rrt::corolla(2)]).unwrap();
        assert_eq!(g, x);
        let c = t("[[],[],[]]");
        let g = c.gamma(&[t("[[[],[]],[]]")]).unwrap();
        assert_eq!(g.to_nested(), "[[[],[]],[]]");
        assert!(matches!(c.gamma(&[Rrt::corolla(2)]), Err(RrtError::ArityMismatch { .. })));
    }

    #[test]
    fn contraction_hom_follows_order() {
        let fine = t("[[[],[]],[],[]]");
        assert!(Rrt::contraction_hom(&fine, &Rrt::corolla(4)).unwrap().is_some());
        assert!(Rrt::contraction_hom(&fine, &t("[[],[[],[],[]]]")).unwrap().is_none());
        assert!(Rrt::contraction_hom(&Rrt::corolla(4), &fine).unwrap().is_none());
    }

    #[test]
    fn small_associahedra() {
        let k4 = enumerate_kr(4);
        assert_eq!(k4.poset.len(), 11);
        assert_eq!(k4.poset.face_vector(), vec![5, 5, 1]);
        assert_eq!(enumerate_kr(1).poset.face_vector(), vec![1]);
        assert_eq!(enumerate_kr(2).poset.face_vector(), vec![1]);
    }
}
