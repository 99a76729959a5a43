//! The closure of a face splits as a product of smaller associahedra and
//! fiber products of 2-associahedra.

use twoassoc::structure::{decompose, extract_subpair, gamma2t, Memo};
use twoassoc::treepair::TreePair;

pub fn run() {
    let memo = Memo::new();
    let w = memo.w(&[3, 0, 0]).unwrap();
    for (i, p) in w.elements.iter().enumerate().filter(|(i, _)| w.poset.dim(*i) >= 1) {
        let d = decompose(p, &memo).unwrap();
        println!("[{}] {}  =  {}  ({} faces)", w.poset.dim(i), d.anchor, d.factors.join(" x "), d.faces);
    }

    // Cut a face into components below an anchor and glue it back.
    let anchor = TreePair::top(&[3, 0, 0]).unwrap();
    let fine = &w.elements[0];
    let parts = extract_subpair(&anchor, fine).unwrap();
    assert_eq!(&gamma2t(&anchor, &parts).unwrap(), fine);
    println!("{} splits into {} seam and {} split components", fine.key(), parts.seams.len(), parts.split.len());
}

#[allow(dead_code)]
fn main() {
    run();
}
