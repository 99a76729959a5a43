//! Abstract-polytope certificates, and what a violation looks like.

use twoassoc::poset::{GradedPoset, PolytopeCheck};
use twoassoc::treepair::enumerate_wn;

pub fn run() {
    for n in [vec![3, 0], vec![2, 2], vec![0, 1, 1, 0]] {
        let w = enumerate_wn(&n).unwrap();
        let hat = w.poset.adjoin_bottom().unwrap();
        match hat.check_abstract_polytope() {
            PolytopeCheck::Polytope(c) => {
                println!("W_{n:?}: polytope of rank {} with {} faces, simple: {}", c.rank, c.faces, w.poset.is_simple())
            }
            PolytopeCheck::Violation(v) => panic!("W_{n:?} fails {}", v.name()),
        }
    }

    // Two triangles glued at a vertex: the shared vertex lies in four edges,
    // so the section between it and the top is not a diamond.
    let keys = ["⊥", "a", "b", "c", "d", "e", "ab", "bc", "ca", "cd", "de", "ec", "T"];
    let dims = [-1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2];
    let covers = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (1, 6),
        (2, 6),
        (2, 7),
        (3, 7),
        (3, 8),
        (1, 8),
        (3, 9),
        (4, 9),
        (4, 10),
        (5, 10),
        (5, 11),
        (3, 11),
        (6, 12),
        (7, 12),
        (8, 12),
        (9, 12),
        (10, 12),
        (11, 12),
    ];
    let bowtie = GradedPoset::new(keys.iter().map(|k| k.to_string()).collect(), dims.to_vec(), &covers).unwrap();
    let check = bowtie.check_abstract_polytope();
    println!("bowtie: {}", serde_json::to_string(&check).unwrap());
    assert!(!check.is_polytope());
}

#[allow(dead_code)]
fn main() {
    run();
}
