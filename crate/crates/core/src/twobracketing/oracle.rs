//! Brute-force enumeration of 2-bracketings straight from the axioms.
//!
//! Shares nothing with the move generator: 1-bracketings come from subsets
//! of intervals, 2-bracket collections from a compatibility backtrack, and
//! orders from orientations of disjoint pairs. The full validator is the
//! final filter.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{check_unfused, TwoBracket, TwoBracketing, TwoBracketingCandidate};
use crate::bracketing::{OneBracket, OneBracketing};

/// Largest `|n| + r` accepted without an explicit bound.
pub const DEFAULT_ORACLE_BOUND: u32 = 6;
const MAX_FREE_PAIRS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("|n| + r = {size} exceeds the oracle bound {bound}")]
    BoundExceeded { size: u32, bound: u32 },
    #[error("weights must be nonempty with positive total")]
    BadWeights,
}

/// All 1-bracketings of `r`, by filtering every subset of the optional intervals.
pub fn enumerate_one_bracketings(r: usize) -> Vec<OneBracketing> {
    let optional: Vec<(usize, usize)> =
        (1..=r).flat_map(|lo| (lo + 1..=r).map(move |hi| (lo, hi))).filter(|&(lo, hi)| hi - lo + 1 < r).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << optional.len()) {
        let mut pairs: Vec<(usize, usize)> = (1..=r).map(|i| (i, i)).collect();
        pairs.push((1, r));
        pairs.extend(optional.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p));
        if let Ok(b) = OneBracketing::from_pairs(r, &pairs) {
            out.push(b);
        }
    }
    out
}

fn rows_for(n: &[u32], w: OneBracket) -> Vec<TwoBracket> {
    let mut acc: Vec<Vec<Option<(u32, u32)>>> = vec![vec![]];
    for i in w.indices() {
        let mut options = vec![None];
        for a in 1..=n[i - 1] {
            for b in a..=n[i - 1] {
                options.push(Some((a, b)));
            }
        }
        acc = acc
            .into_iter()
            .flat_map(|p| {
                options.iter().map(move |&o| {
                    let mut p = p.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    acc.into_iter().filter(|r| r.iter().any(Option::is_some)).map(|rows| TwoBracket::new(w, rows)).collect()
}

fn compatible(a: &TwoBracket, b: &TwoBracket) -> bool {
    !a.meets(b) || a.contains(b) || b.contains(a)
}

/// Every 2-bracketing of `n`, sorted. Refuses `|n| + r > bound`.
pub fn enumerate_oracle(n: &[u32], bound: u32) -> Result<Vec<TwoBracketing>, OracleError> {
    if n.is_empty() || n.iter().all(|&x| x == 0) {
        return Err(OracleError::BadWeights);
    }
    let size = n.iter().sum::<u32>() + n.len() as u32;
    if size > bound {
        return Err(OracleError::BoundExceeded { size, bound });
    }
    let mut out = BTreeSet::new();
    for base in enumerate_one_bracketings(n.len()) {
        let universe: Vec<TwoBracket> = base.brackets().iter().flat_map(|&w| rows_for(n, w)).collect();
        let mut mandatory = vec![TwoBracket::root(n)];
        for (i, &ni) in n.iter().enumerate() {
            mandatory.extend((1..=ni).map(|j| TwoBracket::mark(i + 1, j)));
        }
        if !mandatory.iter().enumerate().all(|(k, a)| mandatory[k + 1..].iter().all(|b| compatible(a, b))) {
            continue;
        }
        let optional: Vec<TwoBracket> = universe.into_iter().filter(|b| !mandatory.contains(b)).collect();
        let mut chosen = mandatory.clone();
        let mut collections = Vec::new();
        choose(&optional, 0, &mut chosen, &mut collections);
        for coll in collections {
            if check_unfused(n, &base, &coll).is_err() {
                continue;
            }
            orders(n, &base, coll, &mut out)?;
        }
    }
    Ok(out.into_iter().collect())
}

fn choose(optional: &[TwoBracket], k: usize, chosen: &mut Vec<TwoBracket>, out: &mut Vec<Vec<TwoBracket>>) {
    if k == optional.len() {
        out.push(chosen.clone());
        return;
    }
    choose(optional, k + 1, chosen, out);
    if chosen.iter().all(|c| compatible(c, &optional[k])) {
        chosen.push(optional[k].clone());
        choose(optional, k + 1, chosen, out);
        chosen.pop();
    }
}

fn orders(
    n: &[u32],
    base: &OneBracketing,
    coll: Vec<TwoBracket>,
    out: &mut BTreeSet<TwoBracketing>,
) -> Result<(), OracleError> {
    let mut forced = Vec::new();
    let mut free = Vec::new();
    for (x, a) in coll.iter().enumerate() {
        for b in &coll[x + 1..] {
            if a.width != b.width || a.meets(b) {
                continue;
            }
            // A seam where both are nonempty fixes the orientation through the marks.
            let witness = a.width.indices().find_map(|i| match (a.row(i), b.row(i)) {
                (Some((p, _)), Some((q, _))) => Some(p < q),
                _ => None,
            });
            match witness {
                Some(true) => forced.push((a.clone(), b.clone())),
                Some(false) => forced.push((b.clone(), a.clone())),
                None => free.push((a.clone(), b.clone())),
            }
        }
    }
    if free.len() > MAX_FREE_PAIRS {
        return Err(OracleError::BoundExceeded { size: free.len() as u32, bound: MAX_FREE_PAIRS as u32 });
    }
    let pairs1: Vec<(usize, usize)> = base.brackets().iter().map(|b| (b.lo, b.hi)).collect();
    for mask in 0u32..(1u32 << free.len()) {
        let mut order = forced.clone();
        for (k, (a, b)) in free.iter().enumerate() {
            order.push(if mask >> k & 1 == 0 { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
        }
        let cand = TwoBracketingCandidate { n: n.to_vec(), brackets1: pairs1.clone(), brackets2: coll.clone(), order };
        if let Ok(x) = TwoBracketing::validate(&cand) {
            out.insert(x);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bracketings_are_catalan() {
        let counts: Vec<usize> = (1..=6).map(|r| enumerate_one_bracketings(r).len()).collect();
        // Faces of K_r: 1, 1, 3, 11, 45, 197.
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197]);
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(
            enumerate_oracle(&[3, 3], DEFAULT_ORACLE_BOUND),
            Err(OracleError::BoundExceeded { size: 8, bound: 6 })
        );
    }

    #[test]
    fn tiny_cases() {
        assert_eq!(enumerate_oracle(&[1], 6).unwrap().len(), 1);
        assert_eq!(enumerate_oracle(&[2], 6).unwrap().len(), 1);
        assert_eq!(enumerate_oracle(&[1, 1], 6).unwrap().len(), 3);
    }
}
