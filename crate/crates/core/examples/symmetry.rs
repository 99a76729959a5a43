//! Reversing seams, the single-seam case W_(k) = K_k, and W_k,0 = W_0,k.

use twoassoc::structure::{check_forgetful, check_reversal, check_single_seam, check_zero_swap, Memo};

pub fn run() {
    let memo = Memo::new();
    for n in [vec![2, 1], vec![2, 1, 0], vec![1, 1, 0, 0]] {
        let rep = check_reversal(&n, &memo).unwrap();
        println!("W_{n:?} vs its reverse: {rep:?}");
        assert!(rep.holds());
    }
    for k in 1..=5 {
        assert!(check_single_seam(k, &memo).unwrap().holds());
    }
    println!("W_(k) = K_k for k <= 5");
    for k in 1..=3 {
        assert!(check_zero_swap(k, &memo).unwrap());
    }
    println!("W_k,0 = W_0,k for k <= 3");

    let f = check_forgetful(&memo.w(&[1, 2, 0]).unwrap(), &memo.k(3));
    println!("forgetful map W_1,2,0 -> K_3: {f:?}");
}

#[allow(dead_code)]
fn main() {
    run();
}
