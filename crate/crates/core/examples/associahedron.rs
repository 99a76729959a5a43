//! Enumerates K_r in both models and checks that nu and tau match them up.

use twoassoc::bracketing::{enumerate_kr_brackets, nu, tau};
use twoassoc::rrt::{enumerate_kr, Rrt};

pub fn run() {
    for r in 2..=6 {
        let trees = enumerate_kr(r);
        let brackets = enumerate_kr_brackets(r);
        println!("K_{r}: face vector {:?}", trees.poset.face_vector());
        assert!(trees.poset.is_isomorphic(&brackets.poset));
        for t in &trees.elements {
            assert_eq!(&tau(&nu(t)), t);
        }
    }

    // The pentagon K_4, one vertex at a time.
    let k4 = enumerate_kr(4);
    for (i, t) in k4.elements.iter().enumerate().filter(|(i, _)| k4.poset.dim(*i) == 0) {
        println!("  vertex {i}: {t}  <->  {}", nu(t).key());
    }

    let t = Rrt::from_nested("[[[],[]],[],[]]").unwrap();
    println!("{t} has dimension {} and {} codimension-one degenerations", t.dimension(), t.moves().len());
}

#[allow(dead_code)]
fn main() {
    run();
}
