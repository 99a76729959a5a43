//! Structural maps on `W_n`: the forgetful map to `K_r`, avatars, the
//! recursive face decomposition, and the reversal and `r = 1` identifications.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::bracketing::{nu, OneBracket, OneBracketing};
use crate::poset::{Enumerated, GradedPoset, PosetError};
use crate::rrt::{enumerate_kr, Rrt, RrtError};
use crate::treepair::{collapse_to_kn, enumerate_wn, BubbleTree, TreePair, TreePairError, VertexKind};
use crate::twobracketing::{two_nu, vertex_brackets, TwoBracketing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("the finer tree-pair is not below the coarser one")]
    NotBelow,
    #[error("vertex {0:?} has no avatar")]
    NoAvatar(Vertex),
    #[error("vertex {0:?} is not a C2 or mark vertex of the bubble tree, or a seam-tree vertex")]
    InvalidVertex(Vertex),
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error(transparent)]
    TreePair(#[from] TreePairError),
    #[error(transparent)]
    Rrt(#[from] RrtError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A vertex of the bubble tree or of the seam tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    Bubble(usize),
    Seam(usize),
}

/// Thread-safe memo of enumerations, keyed by weights or leaf count.
#[derive(Default)]
pub struct Memo {
    w: Mutex<HashMap<Vec<u32>, Arc<Enumerated<TreePair>>>>,
    k: Mutex<HashMap<usize, Arc<Enumerated<Rrt>>>>,
}

impl Memo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn w(&self, n: &[u32]) -> Result<Arc<Enumerated<TreePair>>, TreePairError> {
        if let Some(e) = self.w.lock().expect("memo lock").get(n) {
            return Ok(e.clone());
        }
        let e = Arc::new(enumerate_wn(n)?);
        Ok(self.w.lock().expect("memo lock").entry(n.to_vec()).or_insert(e).clone())
    }

    pub fn k(&self, r: usize) -> Arc<Enumerated<Rrt>> {
        if let Some(e) = self.k.lock().expect("memo lock").get(&r) {
            return e.clone();
        }
        let e = Arc::new(enumerate_kr(r));
        self.k.lock().expect("memo lock").entry(r).or_insert(e).clone()
    }
}

pub fn forget_tree(p: &TreePair) -> Rrt {
    p.seam().clone()
}

pub fn forget_brackets(x: &TwoBracketing) -> OneBracketing {
    x.base().clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForgetfulReport {
    pub monotone: bool,
    pub surjective: bool,
    pub commutes_with_nu: bool,
}

impl ForgetfulReport {
    pub fn holds(&self) -> bool {
        self.monotone && self.surjective && self.commutes_with_nu
    }
}

/// Checks that `W_n -> K_r` is monotone and surjective and that the tree
/// and bracket versions agree under `nu` and `2nu`.
pub fn check_forgetful(w: &Enumerated<TreePair>, k: &Enumerated<Rrt>) -> ForgetfulReport {
    let img: Vec<usize> = w.elements.iter().map(|p| k.get(&forget_tree(p)).expect("seam tree lies in K_r")).collect();
    let monotone = (0..w.len()).all(|a| (0..w.len()).all(|b| !w.poset.leq(a, b) || k.poset.leq(img[a], img[b])));
    let mut hit = vec![false; k.len()];
    for &i in &img {
        hit[i] = true;
    }
    let commutes_with_nu = w.elements.iter().all(|p| nu(&forget_tree(p)) == forget_brackets(&two_nu(p)));
    ForgetfulReport { monotone, surjective: hit.iter().all(|&h| h), commutes_with_nu }
}

/// The vertex of `fine` that `v` of `coarse` degenerates to: the one with the
/// same 2-bracket (bubble vertices) or 1-bracket (seam vertices).
pub fn avatar(coarse: &TreePair, fine: &TreePair, v: Vertex) -> Result<Vertex, StructureError> {
    if !two_nu(fine).leq(&two_nu(coarse), true) {
        return Err(StructureError::NotBelow);
    }
    avatar_unchecked(coarse, fine, v)
}

fn avatar_unchecked(coarse: &TreePair, fine: &TreePair, v: Vertex) -> Result<Vertex, StructureError> {
    match v {
        Vertex::Bubble(x) => {
            let cb = vertex_brackets(coarse);
            let target = cb.get(x).cloned().flatten().ok_or(StructureError::InvalidVertex(v))?;
            let fb = vertex_brackets(fine);
            fb.iter().position(|b| b.as_ref() == Some(&target)).map(Vertex::Bubble).ok_or(StructureError::NoAvatar(v))
        }
        Vertex::Seam(x) => {
            let cr = coarse.seam().leaf_ranges();
            let target = *cr.get(x).ok_or(StructureError::InvalidVertex(v))?;
            fine.seam()
                .leaf_ranges()
                .iter()
                .position(|&r| r == target)
                .map(Vertex::Seam)
                .ok_or(StructureError::NoAvatar(v))
        }
    }
}

/// The components of a face `fine <= anchor` under the decomposition of
/// the closure of `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Components {
    /// Fused bubble of the anchor (preorder index) to a face of `W_(#in seam)`.
    pub fused: Vec<(usize, TreePair)>,
    /// Interior seam-tree vertex to a face of `K_(#in)`.
    pub seams: Vec<(usize, Rrt)>,
    /// Split bubble to a face of `W_(#in of its seams)`.
    pub split: Vec<(usize, TreePair)>,
}

/// Factors of the decomposition, one per fused bubble and per interior
/// seam-tree vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    /// `W_(k)` for a fused bubble.
    Fused { vertex: usize, weight: u32 },
    /// Fiber product over `K_k` of one `W` per split bubble over the vertex.
    Seam { vertex: usize, arity: usize, splits: Vec<(usize, Vec<u32>)> },
}

impl Factor {
    pub fn describe(&self) -> String {
        let w = |n: &[u32]| format!("W_{}", n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        match self {
            Factor::Fused { weight, .. } => w(&[*weight]),
            Factor::Seam { arity, splits, .. } if splits.is_empty() => format!("K_{arity}"),
            Factor::Seam { arity, splits, .. } => {
                let parts: Vec<String> = splits.iter().map(|(_, n)| w(n)).collect();
                format!("({} over K_{arity})", parts.join(" x "))
            }
        }
    }
}

pub fn factors(anchor: &TreePair) -> Vec<Factor> {
    let b = anchor.bubble();
    let mut out = Vec::new();
    for v in 0..b.len() {
        if b.is_fused(v) {
            out.push(Factor::Fused { vertex: v, weight: b.children(b.children(v)[0]).len() as u32 });
        }
    }
    for rho in anchor.seam().interior() {
        let splits = (0..b.len())
            .filter(|&v| b.is_split(v) && anchor.coherence()[v] == rho)
            .map(|v| (v, seam_sizes(b, v)))
            .collect();
        out.push(Factor::Seam { vertex: rho, arity: anchor.seam().children(rho).len(), splits });
    }
    out
}

fn seam_sizes(b: &BubbleTree, v: usize) -> Vec<u32> {
    b.children(v).iter().map(|&s| b.children(s).len() as u32).collect()
}

/// Copies the subtree of `b` at `top`, turning each vertex in `cuts` into a mark.
fn cut_portion(b: &BubbleTree, top: usize, cuts: &[usize]) -> (Vec<VertexKind>, Vec<Vec<usize>>, Vec<usize>) {
    let mut kinds = Vec::new();
    let mut children = Vec::new();
    let mut cut_order = Vec::new();
    fn go(
        b: &BubbleTree,
        v: usize,
        cuts: &[usize],
        kinds: &mut Vec<VertexKind>,
        children: &mut Vec<Vec<usize>>,
        cut_order: &mut Vec<usize>,
        is_top: bool,
    ) -> usize {
        let id = kinds.len();
        if !is_top && (cuts.contains(&v) || b.kind(v) == VertexKind::Mark) {
            kinds.push(VertexKind::Mark);
            children.push(vec![]);
            cut_order.push(v);
            return id;
        }
        kinds.push(b.kind(v));
        children.push(vec![]);
        let cs: Vec<usize> = b.children(v).iter().map(|&c| go(b, c, cuts, kinds, children, cut_order, false)).collect();
        children[id] = cs;
        id
    }
    go(b, top, cuts, &mut kinds, &mut children, &mut cut_order, true);
    (kinds, children, cut_order)
}

/// Splits a face below `anchor` into its components.
pub fn extract_subpair(anchor: &TreePair, fine: &TreePair) -> Result<Components, StructureError> {
    if !two_nu(fine).leq(&two_nu(anchor), true) {
        return Err(StructureError::NotBelow);
    }
    let b = anchor.bubble();
    let fb = fine.bubble();
    let bubble_avatar = |v: usize| -> Result<usize, StructureError> {
        match avatar_unchecked(anchor, fine, Vertex::Bubble(v))? {
            Vertex::Bubble(x) => Ok(x),
            Vertex::Seam(_) => unreachable!(),
        }
    };
    let seam_avatar = |v: usize| -> Result<usize, StructureError> {
        match avatar_unchecked(anchor, fine, Vertex::Seam(v))? {
            Vertex::Seam(x) => Ok(x),
            Vertex::Bubble(_) => unreachable!(),
        }
    };
    let mismatch = |what: String| StructureError::FactorMismatch(what);

    let mut seams = Vec::new();
    let mut seam_parts: HashMap<usize, Rrt> = HashMap::new();
    for rho in anchor.seam().interior() {
        let top = seam_avatar(rho)?;
        let cuts: Vec<usize> = anchor.seam().children(rho).iter().map(|&s| seam_avatar(s)).collect::<Result<_, _>>()?;
        let mut arena: Vec<Vec<usize>> = Vec::new();
        let mut leaves = Vec::new();
        fn go(
            t: &Rrt,
            v: usize,
            cuts: &[usize],
            arena: &mut Vec<Vec<usize>>,
            leaves: &mut Vec<usize>,
            is_top: bool,
        ) -> usize {
            let id = arena.len();
            arena.push(vec![]);
            if !is_top && (cuts.contains(&v) || t.is_leaf(v)) {
                leaves.push(v);
                return id;
            }
            let cs: Vec<usize> = t.children(v).iter().map(|&c| go(t, c, cuts, arena, leaves, false)).collect();
            arena[id] = cs;
            id
        }
        go(fine.seam(), top, &cuts, &mut arena, &mut leaves, true);
        if leaves != cuts {
            return Err(mismatch(format!("seam portion at {rho} does not end at the avatars of its children")));
        }
        let part = Rrt::from_arena_unchecked(0, &arena);
        seam_parts.insert(rho, part.clone());
        seams.push((rho, part));
    }

    let mut fused = Vec::new();
    let mut split = Vec::new();
    for v in 0..b.len() {
        if b.kind(v) != VertexKind::C2 {
            continue;
        }
        let top = bubble_avatar(v)?;
        let grand: Vec<Vec<usize>> = b.children(v).iter().map(|&s| b.children(s).to_vec()).collect();
        let flat: Vec<usize> = grand.iter().flatten().copied().collect();
        let cuts: Vec<usize> = flat.iter().map(|&g| bubble_avatar(g)).collect::<Result<_, _>>()?;
        let (kinds, children, order) = cut_portion(fb, top, &cuts);
        let mut sorted_order = order.clone();
        let mut sorted_cuts = cuts.clone();
        sorted_order.sort_unstable();
        sorted_cuts.sort_unstable();
        if sorted_order != sorted_cuts {
            return Err(mismatch(format!("bubble portion at {v} does not end at the avatars of its grandchildren")));
        }
        let (tree, _) = BubbleTree::from_arena(0, &kinds, &children);
        let p = if b.is_fused(v) {
            TreePair::assemble(vec![flat.len() as u32], tree, Rrt::point())?
        } else {
            let rho = anchor.coherence()[v];
            let seam = seam_parts.get(&rho).cloned().unwrap_or_else(|| Rrt::corolla(b.children(v).len()));
            TreePair::assemble(seam_sizes(b, v), tree, seam)?
        };
        // The cut at each mark must carry the label of its grandchild.
        let expected: HashMap<usize, (usize, u32)> = if b.is_fused(v) {
            cuts.iter().enumerate().map(|(k, &c)| (c, (1, k as u32 + 1))).collect()
        } else {
            let mut m = HashMap::new();
            let mut k = 0;
            for (i, gs) in grand.iter().enumerate() {
                for j in 0..gs.len() {
                    m.insert(cuts[k], (i + 1, j as u32 + 1));
                    k += 1;
                }
            }
            m
        };
        let labels = (0..p.bubble().len()).filter_map(|x| p.mark_label(x));
        if !labels.zip(&order).all(|(l, c)| expected[c] == l) {
            return Err(mismatch(format!("marks of the factor at {v} are not in seam order")));
        }
        if b.is_fused(v) {
            fused.push((v, p));
        } else {
            split.push((v, p));
        }
    }
    Ok(Components { fused, seams, split })
}

/// Emitted vertex for mark `(i, j)` of a factor.
type MarkSlot = Box<dyn Fn(usize, u32) -> usize>;

/// Substitutes components into the anchor, the inverse of [`extract_subpair`].
pub fn gamma2t(anchor: &TreePair, comps: &Components) -> Result<TreePair, StructureError> {
    let fused: HashMap<usize, &TreePair> = comps.fused.iter().map(|(v, p)| (*v, p)).collect();
    let split: HashMap<usize, &TreePair> = comps.split.iter().map(|(v, p)| (*v, p)).collect();
    let seam_parts: HashMap<usize, &Rrt> = comps.seams.iter().map(|(v, t)| (*v, t)).collect();
    let interior = anchor.seam().interior();
    let seam_list: Vec<Rrt> = interior
        .iter()
        .map(|rho| {
            seam_parts
                .get(rho)
                .map(|t| (*t).clone())
                .ok_or_else(|| StructureError::FactorMismatch(format!("no seam factor at {rho}")))
        })
        .collect::<Result<_, _>>()?;
    let seam = anchor.seam().gamma(&seam_list)?;

    let mut kinds = Vec::new();
    let mut children = Vec::new();
    fn emit(
        anchor: &TreePair,
        v: usize,
        fused: &HashMap<usize, &TreePair>,
        split: &HashMap<usize, &TreePair>,
        seam_parts: &HashMap<usize, &Rrt>,
        kinds: &mut Vec<VertexKind>,
        children: &mut Vec<Vec<usize>>,
    ) -> Result<usize, StructureError> {
        let b = anchor.bubble();
        if b.kind(v) == VertexKind::Mark {
            kinds.push(VertexKind::Mark);
            children.push(vec![]);
            return Ok(kinds.len() - 1);
        }
        let grand: Vec<Vec<usize>> = b.children(v).iter().map(|&s| b.children(s).to_vec()).collect();
        let mut sub: Vec<Vec<usize>> = Vec::new();
        for gs in &grand {
            let mut row = Vec::new();
            for &g in gs {
                row.push(emit(anchor, g, fused, split, seam_parts, kinds, children)?);
            }
            sub.push(row);
        }
        let (comp, slot): (&TreePair, MarkSlot) = if b.is_fused(v) {
            let p = fused
                .get(&v)
                .ok_or_else(|| StructureError::FactorMismatch(format!("no factor for fused bubble {v}")))?;
            let flat: Vec<usize> = sub.concat();
            (p, Box::new(move |_, j| flat[j as usize - 1]))
        } else {
            let p = split
                .get(&v)
                .ok_or_else(|| StructureError::FactorMismatch(format!("no factor for split bubble {v}")))?;
            let rho = anchor.coherence()[v];
            let expected = seam_parts.get(&rho).map(|t| (*t).clone()).unwrap_or_else(|| Rrt::corolla(grand.len()));
            if p.seam() != &expected {
                return Err(StructureError::FactorMismatch(format!("split bubble {v} disagrees with the seam factor")));
            }
            let sub = sub.clone();
            (p, Box::new(move |i, j| sub[i - 1][j as usize - 1]))
        };
        if comp.n().iter().map(|&x| x as usize).sum::<usize>() != grand.iter().map(Vec::len).sum::<usize>() {
            return Err(StructureError::FactorMismatch(format!("factor at {v} has the wrong weights")));
        }
        let cb = comp.bubble();
        let mut ids = vec![usize::MAX; cb.len()];
        for x in 0..cb.len() {
            if let Some((i, j)) = comp.mark_label(x) {
                ids[x] = slot(i, j);
            } else {
                ids[x] = kinds.len();
                kinds.push(cb.kind(x));
                children.push(vec![]);
            }
        }
        for x in 0..cb.len() {
            if comp.mark_label(x).is_none() {
                children[ids[x]] = cb.children(x).iter().map(|&c| ids[c]).collect();
            }
        }
        Ok(ids[0])
    }
    let root = emit(anchor, 0, &fused, &split, &seam_parts, &mut kinds, &mut children)?;
    let (tree, _) = BubbleTree::from_arena(root, &kinds, &children);
    Ok(TreePair::assemble(anchor.n().to_vec(), tree, seam)?)
}

/// Reads one factor element into the components it stands for.
type Reader = Box<dyn Fn(usize, &mut Components)>;

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub anchor: String,
    pub factors: Vec<String>,
    pub faces: usize,
    pub dimension: i64,
}

/// Builds the product of the factors of `anchor`, maps it into `W_n`, and
/// checks that the map is an order isomorphism onto the closure of the
/// anchor that preserves dimension and inverts [`extract_subpair`].
pub fn decompose(anchor: &TreePair, memo: &Memo) -> Result<Decomposition, StructureError> {
    let w = memo.w(anchor.n())?;
    let anchor_index = w.get(anchor).ok_or_else(|| StructureError::FactorMismatch("anchor not in W_n".into()))?;
    let fs = factors(anchor);

    // Each factor as a poset plus a way to read components off its elements.
    let mut posets: Vec<GradedPoset> = Vec::new();
    let mut readers: Vec<Reader> = Vec::new();
    for f in &fs {
        match f {
            Factor::Fused { vertex, weight } => {
                let e = memo.w(&[*weight])?;
                posets.push(e.poset.clone());
                let v = *vertex;
                readers.push(Box::new(move |x, c| c.fused.push((v, e.elements[x].clone()))));
            }
            Factor::Seam { vertex, arity, splits } => {
                let k = memo.k(*arity);
                let parts: Vec<Arc<Enumerated<TreePair>>> =
                    splits.iter().map(|(_, n)| memo.w(n)).collect::<Result<_, _>>()?;
                let maps: Vec<Vec<usize>> = parts
                    .iter()
                    .map(|e| e.elements.iter().map(|p| k.get(p.seam()).expect("seam tree in K")).collect())
                    .collect();
                let args: Vec<(&GradedPoset, &[usize])> =
                    parts.iter().zip(&maps).map(|(e, m)| (&e.poset, m.as_slice())).collect();
                let fp = GradedPoset::fiber_product(&k.poset, &args)?;
                posets.push(fp.poset.clone());
                let (v, tuples, split_vertices) =
                    (*vertex, fp.tuples, splits.iter().map(|(s, _)| *s).collect::<Vec<_>>());
                readers.push(Box::new(move |x, c| {
                    let (t, y) = &tuples[x];
                    c.seams.push((v, k.elements[*y].clone()));
                    for ((sv, e), &xi) in split_vertices.iter().zip(&parts).zip(t) {
                        c.split.push((*sv, e.elements[xi].clone()));
                    }
                }));
            }
        }
    }
    let refs: Vec<&GradedPoset> = posets.iter().collect();
    let product = GradedPoset::product(&refs)?;

    let mut image = Vec::with_capacity(product.tuples.len());
    for (t, _) in &product.tuples {
        let mut comps = Components { fused: vec![], seams: vec![], split: vec![] };
        for (reader, &x) in readers.iter().zip(t) {
            reader(x, &mut comps);
        }
        let face = gamma2t(anchor, &comps)?;
        let idx = w.get(&face).ok_or_else(|| StructureError::FactorMismatch(format!("{face} is not a face of W_n")))?;
        if face.dimension() != product.poset.dim(image.len()) {
            return Err(StructureError::FactorMismatch(format!("dimension of {face} differs from its factor sum")));
        }
        let mut back = extract_subpair(anchor, &face)?;
        let mut want = comps.clone();
        for c in [&mut back, &mut want] {
            c.fused.sort_by_key(|x| x.0);
            c.seams.sort_by_key(|x| x.0);
            c.split.sort_by_key(|x| x.0);
        }
        if back != want {
            return Err(StructureError::FactorMismatch(format!("extracting {face} does not recover its components")));
        }
        image.push(idx);
    }
    let mut closure = w.poset.closure(anchor_index);
    let mut sorted = image.clone();
    sorted.sort_unstable();
    closure.sort_unstable();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(StructureError::FactorMismatch("two component tuples give the same face".into()));
    }
    if sorted != closure {
        return Err(StructureError::FactorMismatch("image differs from the closure of the anchor".into()));
    }
    for a in 0..image.len() {
        for c in 0..image.len() {
            if product.poset.leq(a, c) != w.poset.leq(image[a], image[c]) {
                return Err(StructureError::FactorMismatch("substitution does not preserve the order".into()));
            }
        }
    }
    Ok(Decomposition {
        anchor: anchor.key(),
        factors: fs.iter().map(Factor::describe).collect(),
        faces: image.len(),
        dimension: anchor.dimension(),
    })
}

/// Checks that substitution into the corollas of `t` is an order
/// isomorphism from the product of `K_(#in)` onto the closure of `t` in `K_r`.
pub fn verify_gamma_t(t: &Rrt, memo: &Memo) -> Result<usize, StructureError> {
    let kr = memo.k(t.leaf_count());
    let ti = kr.get(t).ok_or_else(|| StructureError::FactorMismatch("tree not in K_r".into()))?;
    let parts: Vec<Arc<Enumerated<Rrt>>> = t.interior().iter().map(|&v| memo.k(t.children(v).len())).collect();
    let refs: Vec<&GradedPoset> = parts.iter().map(|e| &e.poset).collect();
    let product = GradedPoset::product(&refs)?;
    let mut image = Vec::new();
    for (k, (tuple, _)) in product.tuples.iter().enumerate() {
        let comps: Vec<Rrt> = tuple.iter().zip(&parts).map(|(&x, e)| e.elements[x].clone()).collect();
        let g = t.gamma(&comps)?;
        if g.dimension() != product.poset.dim(k) {
            return Err(StructureError::FactorMismatch(format!("dimension of {g} differs from its factor sum")));
        }
        image.push(kr.get(&g).ok_or_else(|| StructureError::FactorMismatch(format!("{g} not in K_r")))?);
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() || sorted != kr.poset.closure(ti) {
        return Err(StructureError::FactorMismatch("image differs from the closure".into()));
    }
    for a in 0..image.len() {
        for c in 0..image.len() {
            if product.poset.leq(a, c) != kr.poset.leq(image[a], image[c]) {
                return Err(StructureError::FactorMismatch("substitution does not preserve the order".into()));
            }
        }
    }
    Ok(image.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    /// The explicit map is a bijection preserving order and dimension.
    pub explicit_map: bool,
    /// An isomorphism exists, found by search.
    pub isomorphic: bool,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.explicit_map && self.isomorphic
    }
}

fn check_map<S, T: Eq + std::hash::Hash + Clone>(
    from: &Enumerated<S>,
    to: &Enumerated<T>,
    map: impl Fn(&S) -> Option<T>,
) -> bool
where
    S: Eq + std::hash::Hash + Clone,
{
    if from.len() != to.len() {
        return false;
    }
    let mut img = Vec::with_capacity(from.len());
    for x in &from.elements {
        match map(x).and_then(|y| to.get(&y)) {
            Some(i) => img.push(i),
            None => return false,
        }
    }
    let mut seen = vec![false; to.len()];
    for &i in &img {
        if std::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    (0..from.len()).all(|a| {
        from.poset.dim(a) == to.poset.dim(img[a])
            && (0..from.len()).all(|b| from.poset.leq(a, b) == to.poset.leq(img[a], img[b]))
    })
}

/// `W_n` and `W_rev(n)` via mirroring every tree.
pub fn check_reversal(n: &[u32], memo: &Memo) -> Result<SymmetryReport, StructureError> {
    let rev: Vec<u32> = n.iter().rev().copied().collect();
    let (a, b) = (memo.w(n)?, memo.w(&rev)?);
    Ok(SymmetryReport {
        explicit_map: check_map(&a, &b, |p| Some(p.reversed())),
        isomorphic: a.poset.is_isomorphic(&b.poset),
    })
}

/// `W_(k)` and `K_k` via collapsing bubbles to vertices.
pub fn check_single_seam(k: u32, memo: &Memo) -> Result<SymmetryReport, StructureError> {
    let (a, b) = (memo.w(&[k])?, memo.k(k as usize));
    Ok(SymmetryReport {
        explicit_map: check_map(&a, &b, |p| collapse_to_kn(p).ok()),
        isomorphic: a.poset.is_isomorphic(&b.poset),
    })
}

/// `W_(k,0)` and `W_(0,k)` by isomorphism search.
pub fn check_zero_swap(k: u32, memo: &Memo) -> Result<bool, StructureError> {
    Ok(memo.w(&[k, 0])?.poset.is_isomorphic(&memo.w(&[0, k])?.poset))
}

/// Seam-tree vertex of a 1-bracket, if present.
pub fn seam_vertex_of(p: &TreePair, b: OneBracket) -> Option<usize> {
    p.seam().leaf_ranges().iter().position(|&(lo, hi)| lo == b.lo && hi == b.hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_top_is_trivial() {
        let memo = Memo::new();
        let top = TreePair::top(&[2, 1]).unwrap();
        let d = decompose(&top, &memo).unwrap();
        assert_eq!(d.faces, 17);
        assert_eq!(d.factors, vec!["(W_2,1 over K_2)"]);
    }

    #[test]
    fn decompose_every_face_of_w110() {
        let memo = Memo::new();
        let w = memo.w(&[1, 1, 0]).unwrap();
        for p in &w.elements {
            let d = decompose(p, &memo).unwrap();
            assert_eq!(d.faces, w.poset.closure(w.get(p).unwrap()).len());
        }
    }

    #[test]
    fn avatar_of_root_is_root() {
        let memo = Memo::new();
        let w = memo.w(&[2, 0, 0]).unwrap();
        let top = TreePair::top(&[2, 0, 0]).unwrap();
        for p in &w.elements {
            assert_eq!(avatar(&top, p, Vertex::Bubble(0)).unwrap(), Vertex::Bubble(0));
            assert_eq!(avatar(&top, p, Vertex::Seam(0)).unwrap(), Vertex::Seam(0));
        }
        let low = &w.elements[0];
        assert_eq!(avatar(low, &top, Vertex::Bubble(0)), Err(StructureError::NotBelow));
        assert!(matches!(avatar(&top, low, Vertex::Bubble(1)), Err(StructureError::InvalidVertex(_))));
    }

    #[test]
    fn gamma_t_small() {
        let memo = Memo::new();
        for t in &memo.k(5).elements {
            verify_gamma_t(t, &memo).unwrap();
        }
    }

    #[test]
    fn symmetries_small() {
        let memo = Memo::new();
        assert!(check_reversal(&[2, 1], &memo).unwrap().holds());
        assert!(check_single_seam(4, &memo).unwrap().holds());
        assert!(check_zero_swap(2, &memo).unwrap());
    }

    #[test]
    fn forgetful_w21() {
        let memo = Memo::new();
        assert!(check_forgetful(&memo.w(&[1, 1, 0]).unwrap(), &memo.k(3)).holds());
    }
}
