//! Builds tree-pairs by hand and by enumeration and walks their moves.

use twoassoc::treepair::{enumerate_wn, TreePair};

pub fn run() {
    let top = TreePair::top(&[2, 0, 0]).unwrap();
    println!("top of W_2,0,0: {} (dimension {})", top.key(), top.dimension());
    for outcome in top.moves_detailed() {
        let kinds: Vec<u8> = outcome.moves.iter().map(|m| m.kind()).collect();
        println!("  -> {}  via move types {kinds:?}", outcome.result.key());
    }

    let w = enumerate_wn(&[1, 1, 0]).unwrap();
    println!("W_1,1,0 has {} faces:", w.len());
    for (i, p) in w.elements.iter().enumerate() {
        assert_eq!(p.dimension(), p.dimension_by_valence());
        assert!(p.valence_identity_holds());
        println!("  [{}] {}", w.poset.dim(i), p.key());
    }

    // Keys parse back to the same tree-pair.
    let p = &w.elements[0];
    assert_eq!(&TreePair::from_key(&[1, 1, 0], &p.key()).unwrap(), p);
}

#[allow(dead_code)]
fn main() {
    run();
}
