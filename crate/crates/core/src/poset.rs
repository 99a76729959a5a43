//! Finite graded posets given by their Hasse diagram.
//!
//! Elements are indices `0..len()`, each carrying a canonical key and a
//! dimension. The order is the reflexive-transitive closure of the covers and
//! is precomputed as one down-set bitset per element.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const BOTTOM_KEY: &str = "⊥";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover {lower} < {upper} does not raise dimension by one")]
    NotGraded { lower: String, upper: String },
    #[error("duplicate key {0}")]
    DuplicateKey(String),
    #[error("poset already has a least element")]
    AlreadyHatted,
    #[error("{lower} is not below {upper}")]
    NotComparable { lower: String, upper: String },
    #[error("factor {factor} map is undefined at element {element}")]
    MapUndefined { factor: usize, element: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
}

#[derive(Clone, Debug)]
pub struct GradedPoset {
    keys: Vec<String>,
    dims: Vec<i64>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    below: Vec<FixedBitSet>,
    index: HashMap<String, usize>,
    bottom: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Dimension of the greatest face.
    pub rank: i64,
    pub faces: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    Extremal { minimal: Vec<String>, maximal: Vec<String> },
    FlagLength { element: String, shortest: Vec<String>, longest: Vec<String> },
    RankDimension { element: String, height: usize, dim: i64 },
    Diamond { lower: String, upper: String, between: Vec<String> },
    StronglyConnected { lower: String, upper: String, components: usize },
}

impl AxiomViolation {
    pub fn name(&self) -> &'static str {
        match self {
            AxiomViolation::Extremal { .. } => "EXTREMAL",
            AxiomViolation::FlagLength { .. } | AxiomViolation::RankDimension { .. } => "FLAG-LENGTH",
            AxiomViolation::Diamond { .. } => "DIAMOND",
            AxiomViolation::StronglyConnected { .. } => "STRONGLY CONNECTED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum PolytopeCheck {
    Polytope(Certificate),
    Violation(AxiomViolation),
}

impl PolytopeCheck {
    pub fn is_polytope(&self) -> bool {
        matches!(self, PolytopeCheck::Polytope(_))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementJson {
    pub key: String,
    pub dim: i64,
}

/// A fiber product together with the component tuple behind each element:
/// `(factor element indices, base element index)`.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub poset: GradedPoset,
    pub tuples: Vec<(Vec<usize>, usize)>,
}

impl GradedPoset {
    /// Builds a poset from covers `(lower, upper)`, requiring each cover to
    /// raise dimension by exactly one.
    pub fn new(keys: Vec<String>, dims: Vec<i64>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let p = Self::build(keys, dims, covers)?;
        if let Some((a, b)) = p.cover_defects().first() {
            return Err(PosetError::NotGraded { lower: p.keys[*a].clone(), upper: p.keys[*b].clone() });
        }
        Ok(p)
    }

    /// As [`GradedPoset::new`] without the grading check; see
    /// [`GradedPoset::cover_defects`].
    pub fn build(keys: Vec<String>, dims: Vec<i64>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = keys.len();
        assert_eq!(n, dims.len(), "one dimension per key");
        let mut index = HashMap::with_capacity(n);
        for (i, k) in keys.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(PosetError::DuplicateKey(k.clone()));
            }
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(PosetError::IndexOutOfRange(a.max(b)));
            }
            if seen.insert((a, b)) {
                up[a].push(b);
                down[b].push(a);
            }
        }
        for l in up.iter_mut().chain(down.iter_mut()) {
            l.sort_unstable();
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| dims[i]);
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &x in &order {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &y in &down[x] {
                s.union_with(&below[y]);
            }
            below[x] = s;
        }
        let minimal: Vec<usize> = (0..n).filter(|&i| down[i].is_empty()).collect();
        let bottom = match minimal.as_slice() {
            [b] if below.iter().all(|s| s.contains(*b)) => Some(*b),
            _ => None,
        };
        Ok(GradedPoset { keys, dims, up, down, below, index, bottom })
    }

    /// Builds the Hasse diagram of the order `leq` by transitive reduction.
    pub fn from_relation(
        keys: Vec<String>,
        dims: Vec<i64>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let n = keys.len();
        let mut lt = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    lt[a].insert(b);
                }
            }
        }
        let mut covers = Vec::new();
        for a in 0..n {
            for b in lt[a].ones() {
                if !lt[a].ones().any(|c| lt[c].contains(b)) {
                    covers.push((a, b));
                }
            }
        }
        Self::new(keys, dims, &covers)
    }

    /// The one-element poset of dimension 0.
    pub fn point() -> Self {
        Self::new(vec!["pt".into()], vec![0], &[]).expect("point")
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> &str {
        &self.keys[i]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn dim(&self, i: usize) -> i64 {
        self.dims[i]
    }

    pub fn dims(&self) -> &[i64] {
        &self.dims
    }

    pub fn find(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn up(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.up[a].iter().map(move |&b| (a, b))).collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn has_bottom(&self) -> bool {
        self.bottom.is_some()
    }

    /// Covers whose dimensions do not differ by exactly one.
    pub fn cover_defects(&self) -> Vec<(usize, usize)> {
        self.covers().into_iter().filter(|&(a, b)| self.dims[b] != self.dims[a] + 1).collect()
    }

    /// Adds a face `⊥` of dimension `-1` covered by every face of dimension 0.
    pub fn adjoin_bottom(&self) -> Result<GradedPoset, PosetError> {
        if self.dims.iter().any(|&d| d < 0) || self.index.contains_key(BOTTOM_KEY) {
            return Err(PosetError::AlreadyHatted);
        }
        let mut keys = vec![BOTTOM_KEY.to_string()];
        keys.extend(self.keys.iter().cloned());
        let mut dims = vec![-1];
        dims.extend(&self.dims);
        let mut covers: Vec<(usize, usize)> = self.covers().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
        covers.extend((0..self.len()).filter(|&i| self.dims[i] == 0).map(|i| (0, i + 1)));
        Self::new(keys, dims, &covers)
    }

    /// Number of faces of each dimension `0..=max`, ignoring `⊥`.
    pub fn face_vector(&self) -> Vec<usize> {
        let max = self.dims.iter().copied().max().unwrap_or(-1);
        let mut fv = vec![0; (max + 1).max(0) as usize];
        for &d in &self.dims {
            if d >= 0 {
                fv[d as usize] += 1;
            }
        }
        fv
    }

    pub fn max_dim(&self) -> i64 {
        self.dims.iter().copied().max().unwrap_or(-1)
    }

    /// Every vertex lies in exactly `d` edges, `d` the top dimension.
    pub fn is_simple(&self) -> bool {
        let d = self.max_dim();
        (0..self.len())
            .filter(|&i| self.dims[i] == 0)
            .all(|i| self.up[i].iter().filter(|&&j| self.dims[j] == 1).count() as i64 == d)
    }

    fn above(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (b, s) in self.below.iter().enumerate() {
            for a in s.ones() {
                above[a].insert(b);
            }
        }
        above
    }

    fn names(&self, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
        xs.into_iter().map(|i| self.keys[i].clone()).collect()
    }

    /// Checks the abstract-polytope axioms, returning the first violation in
    /// axiom order, then element order.
    pub fn check_abstract_polytope(&self) -> PolytopeCheck {
        let n = self.len();
        let minimal: Vec<usize> = (0..n).filter(|&i| self.down[i].is_empty()).collect();
        let maximal: Vec<usize> = (0..n).filter(|&i| self.up[i].is_empty()).collect();
        if minimal.len() != 1 || maximal.len() != 1 || self.bottom.is_none() {
            return PolytopeCheck::Violation(AxiomViolation::Extremal {
                minimal: self.names(minimal),
                maximal: self.names(maximal),
            });
        }
        let bot = minimal[0];
        let top = maximal[0];

        // Shortest and longest cover paths from the bottom.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.dims[i]);
        let mut short = vec![usize::MAX; n];
        let mut long = vec![0usize; n];
        let mut short_pred = vec![usize::MAX; n];
        let mut long_pred = vec![usize::MAX; n];
        short[bot] = 0;
        for &x in &order {
            if x == bot {
                continue;
            }
            for &y in &self.down[x] {
                if short[y] != usize::MAX && short[y] + 1 < short[x] {
                    short[x] = short[y] + 1;
                    short_pred[x] = y;
                }
                if long[y] + 1 > long[x] {
                    long[x] = long[y] + 1;
                    long_pred[x] = y;
                }
            }
        }
        let chain = |pred: &Vec<usize>, mut x: usize| {
            let mut c = vec![x];
            while x != bot {
                x = pred[x];
                c.push(x);
            }
            c.reverse();
            self.names(c)
        };
        for &x in &order {
            if short[x] != long[x] {
                return PolytopeCheck::Violation(AxiomViolation::FlagLength {
                    element: self.keys[x].clone(),
                    shortest: chain(&short_pred, x),
                    longest: chain(&long_pred, x),
                });
            }
        }
        for &x in &order {
            if short[x] as i64 != self.dims[x] - self.dims[bot] {
                return PolytopeCheck::Violation(AxiomViolation::RankDimension {
                    element: self.keys[x].clone(),
                    height: short[x],
                    dim: self.dims[x],
                });
            }
        }

        for f in 0..n {
            for &h in &self.up[f] {
                for &g in &self.up[h] {
                    let between: Vec<usize> = self.up[f].iter().copied().filter(|m| self.down[g].contains(m)).collect();
                    if between.len() != 2 {
                        return PolytopeCheck::Violation(AxiomViolation::Diamond {
                            lower: self.keys[f].clone(),
                            upper: self.keys[g].clone(),
                            between: self.names(between),
                        });
                    }
                }
            }
        }

        let above = self.above();
        for f in 0..n {
            for g in above[f].ones() {
                if self.dims[g] - self.dims[f] < 3 {
                    continue;
                }
                let mut open = self.below[g].clone();
                open.intersect_with(&above[f]);
                open.set(f, false);
                open.set(g, false);
                let components = self.components(&open);
                if components != 1 {
                    return PolytopeCheck::Violation(AxiomViolation::StronglyConnected {
                        lower: self.keys[f].clone(),
                        upper: self.keys[g].clone(),
                        components,
                    });
                }
            }
        }
        PolytopeCheck::Polytope(Certificate { rank: self.dims[top], faces: n })
    }

    fn components(&self, set: &FixedBitSet) -> usize {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut count = 0;
        for s in set.ones() {
            if seen.contains(s) {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(x) = queue.pop_front() {
                for &y in self.up[x].iter().chain(&self.down[x]) {
                    if set.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    /// The closed interval `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> Result<GradedPoset, PosetError> {
        if !self.leq(lo, hi) {
            return Err(PosetError::NotComparable { lower: self.keys[lo].clone(), upper: self.keys[hi].clone() });
        }
        let members: Vec<usize> = self.below[hi].ones().filter(|&x| self.leq(lo, x)).collect();
        Ok(self.induced(&members))
    }

    /// The down-set of `x`.
    pub fn closure(&self, x: usize) -> Vec<usize> {
        self.below[x].ones().collect()
    }

    fn induced(&self, members: &[usize]) -> GradedPoset {
        let mut pos = HashMap::new();
        for (i, &m) in members.iter().enumerate() {
            pos.insert(m, i);
        }
        let mut covers = Vec::new();
        for &a in members {
            for b in &self.up[a] {
                if let Some(&j) = pos.get(b) {
                    covers.push((pos[&a], j));
                }
            }
        }
        Self::build(
            members.iter().map(|&m| self.keys[m].clone()).collect(),
            members.iter().map(|&m| self.dims[m]).collect(),
            &covers,
        )
        .expect("induced subposet of a valid poset")
    }

    /// An order isomorphism `self -> other`, matching dimensions, if one exists.
    pub fn isomorphism(&self, other: &GradedPoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.covers().len() != other.covers().len() {
            return None;
        }
        let colors = refine_colors(&[self, other]);
        let (ca, cb) = colors.split_at(n);
        let mut hist_a: BTreeMap<usize, usize> = BTreeMap::new();
        let mut hist_b: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in ca {
            *hist_a.entry(c).or_default() += 1;
        }
        for &c in cb {
            *hist_b.entry(c).or_default() += 1;
        }
        if hist_a != hist_b {
            return None;
        }
        // Assign in BFS order so each new element has assigned neighbours.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                order.push(x);
                for &y in self.up[x].iter().chain(&self.down[x]) {
                    if !seen[y] {
                        seen[y] = true;
                        q.push_back(y);
                    }
                }
            }
        }
        let other_covers: HashSet<(usize, usize)> = other.covers().into_iter().collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.extend_iso(other, ca, cb, &order, 0, &mut map, &mut used, &other_covers) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_iso(
        &self,
        other: &GradedPoset,
        ca: &[usize],
        cb: &[usize],
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        other_covers: &HashSet<(usize, usize)>,
    ) -> bool {
        let Some(&x) = order.get(depth) else { return true };
        for y in 0..other.len() {
            if used[y] || cb[y] != ca[x] {
                continue;
            }
            let consistent = self.up[x]
                .iter()
                .filter(|&&u| map[u] != usize::MAX)
                .all(|&u| other_covers.contains(&(y, map[u])))
                && self.down[x].iter().filter(|&&d| map[d] != usize::MAX).all(|&d| other_covers.contains(&(map[d], y)))
                && other.up[y].iter().all(|&u| !used[u] || self.up[x].iter().any(|&a| map[a] == u))
                && other.down[y].iter().all(|&d| !used[d] || self.down[x].iter().any(|&a| map[a] == d));
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if self.extend_iso(other, ca, cb, order, depth + 1, map, used, other_covers) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }

    pub fn is_isomorphic(&self, other: &GradedPoset) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Fiber product of `factors` over `base`. Each factor comes with its
    /// map to the base as a vector of base indices. The dimension of a tuple
    /// is `d(y) + sum(d(x_i) - d(y))`. With no factors the base is returned.
    pub fn fiber_product(base: &GradedPoset, factors: &[(&GradedPoset, &[usize])]) -> Result<FiberProduct, PosetError> {
        for (fi, (p, m)) in factors.iter().enumerate() {
            if m.len() != p.len() {
                return Err(PosetError::MapUndefined { factor: fi, element: m.len().min(p.len()) });
            }
            if let Some(e) = m.iter().position(|&y| y >= base.len()) {
                return Err(PosetError::MapUndefined { factor: fi, element: e });
            }
        }
        let mut tuples: Vec<(Vec<usize>, usize)> = Vec::new();
        for y in 0..base.len() {
            let fibers: Vec<Vec<usize>> =
                factors.iter().map(|(p, m)| (0..p.len()).filter(|&x| m[x] == y).collect()).collect();
            let mut acc: Vec<Vec<usize>> = vec![vec![]];
            for fib in &fibers {
                acc = acc
                    .into_iter()
                    .flat_map(|t| {
                        fib.iter().map(move |&x| {
                            let mut t = t.clone();
                            t.push(x);
                            t
                        })
                    })
                    .collect();
            }
            tuples.extend(acc.into_iter().map(|t| (t, y)));
        }
        let keys: Vec<String> = tuples
            .iter()
            .map(|(t, y)| {
                if factors.is_empty() {
                    base.keys[*y].clone()
                } else {
                    let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, (p, _))| p.key(x)).collect();
                    format!("({})", parts.join(" ; "))
                }
            })
            .collect();
        let dims: Vec<i64> = tuples
            .iter()
            .map(|(t, y)| {
                let dy = base.dims[*y];
                dy + t.iter().zip(factors).map(|(&x, (p, _))| p.dims[x] - dy).sum::<i64>()
            })
            .collect();
        let poset = Self::from_relation(keys, dims, |a, b| {
            let ((ta, ya), (tb, yb)) = (&tuples[a], &tuples[b]);
            base.leq(*ya, *yb) && ta.iter().zip(tb).zip(factors).all(|((&x, &z), (p, _))| p.leq(x, z))
        })?;
        Ok(FiberProduct { poset, tuples })
    }

    /// Cartesian product, as the fiber product over a point.
    pub fn product(factors: &[&GradedPoset]) -> Result<FiberProduct, PosetError> {
        let maps: Vec<Vec<usize>> = factors.iter().map(|p| vec![0; p.len()]).collect();
        let fs: Vec<(&GradedPoset, &[usize])> = factors.iter().zip(&maps).map(|(p, m)| (*p, m.as_slice())).collect();
        Self::fiber_product(&Self::point(), &fs)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: (0..self.len()).map(|i| ElementJson { key: self.keys[i].clone(), dim: self.dims[i] }).collect(),
            covers: self.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<GradedPoset, PosetError> {
        let covers: Vec<(usize, usize)> = j.covers.iter().map(|c| (c[0], c[1])).collect();
        Self::new(
            j.elements.iter().map(|e| e.key.clone()).collect(),
            j.elements.iter().map(|e| e.dim).collect(),
            &covers,
        )
    }

    /// Graphviz source with one layer per dimension.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
        let mut by_dim: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for i in 0..self.len() {
            by_dim.entry(self.dims[i]).or_default().push(i);
        }
        for (d, xs) in by_dim {
            s.push_str(&format!("  subgraph dim_{} {{\n    rank=same;\n", d.max(-1).to_string().replace('-', "m")));
            for x in xs {
                s.push_str(&format!("    n{} [label=\"{}\"];\n", x, self.keys[x].replace('"', "\\\"")));
            }
            s.push_str("  }\n");
        }
        for (a, b) in self.covers() {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Colour refinement on the disjoint union of `posets`, starting from
/// `(dim, up-degree, down-degree)`. Colours are comparable across posets.
fn refine_colors(posets: &[&GradedPoset]) -> Vec<usize> {
    let mut offsets = vec![0];
    for p in posets {
        offsets.push(offsets.last().unwrap() + p.len());
    }
    let total = *offsets.last().unwrap();
    let locate = |g: usize| {
        let k = offsets.iter().rposition(|&o| o <= g).unwrap();
        (k, g - offsets[k])
    };
    let mut palette: HashMap<(i64, usize, usize), usize> = HashMap::new();
    let mut colors: Vec<usize> = (0..total)
        .map(|g| {
            let (k, i) = locate(g);
            let p = posets[k];
            let next = palette.len();
            *palette.entry((p.dims[i], p.up[i].len(), p.down[i].len())).or_insert(next)
        })
        .collect();
    let mut classes = palette.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..total)
            .map(|g| {
                let (k, i) = locate(g);
                let p = posets[k];
                let mut u: Vec<usize> = p.up[i].iter().map(|&j| colors[offsets[k] + j]).collect();
                let mut d: Vec<usize> = p.down[i].iter().map(|&j| colors[offsets[k] + j]).collect();
                u.sort_unstable();
                d.sort_unstable();
                let fresh = sigs.len();
                *sigs.entry((colors[g], u, d)).or_insert(fresh)
            })
            .collect();
        colors = next;
        if sigs.len() == classes {
            return colors;
        }
        classes = sigs.len();
    }
}

/// Elements of a BFS enumeration with their poset.
#[derive(Clone, Debug)]
pub struct Enumerated<T: Eq + Hash> {
    pub elements: Vec<T>,
    pub poset: GradedPoset,
    index: HashMap<T, usize>,
}

impl<T: Eq + Hash + Clone> Enumerated<T> {
    pub fn get(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the greatest element.
    pub fn top(&self) -> usize {
        (0..self.len()).max_by_key(|&i| self.poset.dim(i)).expect("nonempty")
    }
}

/// Breadth-first closure of `top` under `moves`, each move a cover.
/// Elements are sorted by `(dimension, key)`.
pub fn bfs_enumerate<T, M, D, K>(top: T, moves: M, dim: D, key: K) -> Enumerated<T>
where
    T: Clone + Eq + Hash,
    M: Fn(&T) -> Vec<T>,
    D: Fn(&T) -> i64,
    K: Fn(&T) -> String,
{
    let mut found: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![top.clone()];
    found.insert(top, 0);
    let mut covers = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let current = elements[i].clone();
        for next in moves(&current) {
            let j = match found.get(&next) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    found.insert(next.clone(), j);
                    elements.push(next);
                    queue.push_back(j);
                    j
                }
            };
            covers.push((j, i));
        }
    }
    let keys: Vec<String> = elements.iter().map(&key).collect();
    let dims: Vec<i64> = elements.iter().map(&dim).collect();
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| (dims[a], &keys[a]).cmp(&(dims[b], &keys[b])));
    let mut new_of = vec![0; elements.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let covers: Vec<(usize, usize)> = covers.into_iter().map(|(a, b)| (new_of[a], new_of[b])).collect();
    let poset = GradedPoset::build(
        order.iter().map(|&o| keys[o].clone()).collect(),
        order.iter().map(|&o| dims[o]).collect(),
        &covers,
    )
    .expect("canonical keys are distinct");
    let elements: Vec<T> = order.iter().map(|&o| elements[o].clone()).collect();
    let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Enumerated { elements, poset, index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(k: usize) -> GradedPoset {
        let mut keys: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        keys.extend((0..k).map(|i| format!("e{i}")));
        keys.push("P".into());
        let mut dims = vec![0; k];
        dims.extend(vec![1; k]);
        dims.push(2);
        let mut covers = Vec::new();
        for i in 0..k {
            covers.push((i, k + i));
            covers.push(((i + 1) % k, k + i));
            covers.push((k + i, 2 * k));
        }
        GradedPoset::new(keys, dims, &covers).unwrap()
    }

    #[test]
    fn polygon_is_polytope() {
        let p = polygon(5).adjoin_bottom().unwrap();
        assert_eq!(p.check_abstract_polytope(), PolytopeCheck::Polytope(Certificate { rank: 2, faces: 12 }));
        assert!(p.is_simple());
        assert_eq!(p.face_vector(), vec![5, 5, 1]);
        assert_eq!(p.adjoin_bottom().unwrap_err(), PosetError::AlreadyHatted);
    }

    #[test]
    fn missing_bottom_breaks_extremal() {
        let v = polygon(4).check_abstract_polytope();
        assert!(matches!(v, PolytopeCheck::Violation(AxiomViolation::Extremal { .. })));
    }

    #[test]
    fn broken_diamond_is_found() {
        // A square whose edge e0 has a single vertex.
        let keys: Vec<String> =
            ["v0", "v1", "v2", "v3", "e0", "e1", "e2", "e3", "P"].iter().map(|s| s.to_string()).collect();
        let covers = [(0, 4), (1, 5), (2, 5), (2, 6), (3, 6), (3, 7), (0, 7), (1, 4), (4, 8), (5, 8), (6, 8), (7, 8)];
        let mut p = GradedPoset::new(keys.clone(), vec![0, 0, 0, 0, 1, 1, 1, 1, 2], &covers).unwrap();
        assert!(p.adjoin_bottom().unwrap().check_abstract_polytope().is_polytope());
        p = GradedPoset::new(keys, vec![0, 0, 0, 0, 1, 1, 1, 1, 2], &covers[1..]).unwrap();
        let v = p.adjoin_bottom().unwrap().check_abstract_polytope();
        assert!(matches!(v, PolytopeCheck::Violation(AxiomViolation::Diamond { .. })), "{v:?}");
    }

    #[test]
    fn disjoint_digons_are_not_connected() {
        let keys: Vec<String> =
            ["a", "b", "c", "d", "ab", "cd", "ab2", "cd2", "T"].iter().map(|s| s.to_string()).collect();
        let covers = [(0, 4), (1, 4), (0, 6), (1, 6), (2, 5), (3, 5), (2, 7), (3, 7), (4, 8), (5, 8), (6, 8), (7, 8)];
        let p = GradedPoset::new(keys, vec![0, 0, 0, 0, 1, 1, 1, 1, 2], &covers).unwrap();
        let v = p.adjoin_bottom().unwrap().check_abstract_polytope();
        assert!(
            matches!(v, PolytopeCheck::Violation(AxiomViolation::StronglyConnected { components: 2, .. })),
            "{v:?}"
        );
    }

    #[test]
    fn not_graded_is_rejected() {
        let e = GradedPoset::new(vec!["a".into(), "b".into()], vec![0, 2], &[(0, 1)]).unwrap_err();
        assert!(matches!(e, PosetError::NotGraded { .. }));
    }

    #[test]
    fn isomorphism_of_polygons() {
        assert!(polygon(5).is_isomorphic(&polygon(5)));
        assert!(!polygon(5).is_isomorphic(&polygon(6)));
    }

    #[test]
    fn fiber_product_of_segments() {
        let seg = GradedPoset::new(vec!["0".into(), "1".into(), "I".into()], vec![0, 0, 1], &[(0, 2), (1, 2)]).unwrap();
        let sq = GradedPoset::product(&[&seg, &seg]).unwrap();
        assert_eq!(sq.poset.face_vector(), vec![4, 4, 1]);
        assert!(sq.poset.is_isomorphic(&polygon(4)));
        let over = GradedPoset::fiber_product(&seg, &[(&seg, &[0, 1, 2][..]), (&seg, &[0, 1, 2][..])]).unwrap();
        assert!(over.poset.is_isomorphic(&seg));
        let none = GradedPoset::fiber_product(&seg, &[]).unwrap();
        assert_eq!(none.poset.len(), 3);
        assert!(matches!(
            GradedPoset::fiber_product(&seg, &[(&seg, &[0, 1][..])]),
            Err(PosetError::MapUndefined { factor: 0, .. })
        ));
    }

    #[test]
    fn interval_and_json_roundtrip() {
        let p = polygon(5).adjoin_bottom().unwrap();
        let top = p.find("P").unwrap();
        let e = p.find("e0").unwrap();
        assert_eq!(p.interval(e, top).unwrap().len(), 2);
        assert!(p.interval(top, e).is_err());
        let back = GradedPoset::from_json(&p.to_json()).unwrap();
        assert_eq!(back.covers(), p.covers());
        assert!(p.to_dot().contains("rank=same"));
    }
}
