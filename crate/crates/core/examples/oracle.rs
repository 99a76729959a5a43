//! Brute-force 2-bracketings straight from the axioms, compared with the
//! move-generated W_n.

use twoassoc::twobracketing::{compare_oracle, enumerate_oracle, DEFAULT_ORACLE_BOUND};

pub fn run() {
    let all = enumerate_oracle(&[1, 1], DEFAULT_ORACLE_BOUND).unwrap();
    println!("W_1,1 by brute force:");
    for x in &all {
        println!("  {} (dimension {})", x.key(), x.dimension());
    }

    for n in [vec![2, 1], vec![1, 0, 1], vec![0, 2, 0], vec![1, 1, 1]] {
        let c = compare_oracle(&n, DEFAULT_ORACLE_BOUND).unwrap();
        println!(
            "{n:?}: {} by moves, {} by brute force, {}",
            c.moves,
            c.oracle,
            if c.matches() { "match" } else { "MISMATCH" }
        );
        assert!(c.matches());
    }

    // Larger weights need an explicit bound.
    assert!(compare_oracle(&[4, 0, 0], DEFAULT_ORACLE_BOUND).is_err());
}

#[allow(dead_code)]
fn main() {
    run();
}
