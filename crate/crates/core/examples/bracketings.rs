//! The worked W_1,1,4,1,0 2-bracketing, its tree-pair under 2tau, and one
//! broken variant.

use twoassoc::bracketing::OneBracket;
use twoassoc::twobracketing::{two_nu, two_tau, TwoBracket, TwoBracketing, TwoBracketingCandidate};

fn b(lo: usize, hi: usize, rows: &[Option<(u32, u32)>]) -> TwoBracket {
    TwoBracket::new(OneBracket::new(lo, hi), rows.to_vec())
}

pub fn example() -> TwoBracketingCandidate {
    let n = vec![1, 1, 4, 1, 0];
    let mut brackets2 = vec![TwoBracket::root(&n)];
    for (i, &ni) in n.iter().enumerate() {
        brackets2.extend((1..=ni).map(|j| TwoBracket::mark(i + 1, j)));
    }
    let (a1, a2) = (b(1, 2, &[Some((1, 1)), None]), b(1, 2, &[None, Some((1, 1))]));
    let (c1, c2, c3) = (
        b(3, 5, &[Some((1, 2)), None, None]),
        b(3, 5, &[Some((3, 3)), None, None]),
        b(3, 5, &[Some((4, 4)), Some((1, 1)), None]),
    );
    let (d1, d2) = (
        b(1, 5, &[None, None, Some((1, 3)), None, None]),
        b(1, 5, &[Some((1, 1)), Some((1, 1)), Some((4, 4)), Some((1, 1)), None]),
    );
    brackets2.extend([
        b(1, 2, &[Some((1, 1)), Some((1, 1))]),
        a1.clone(),
        a2.clone(),
        c1.clone(),
        c2.clone(),
        c3.clone(),
        d1.clone(),
        d2.clone(),
    ]);
    let marks: Vec<TwoBracket> = (1..=4).map(|j| TwoBracket::mark(3, j)).collect();
    let order = vec![
        (marks[0].clone(), marks[1].clone()),
        (marks[1].clone(), marks[2].clone()),
        (marks[2].clone(), marks[3].clone()),
        (a1, a2),
        (c1, c2.clone()),
        (c2, c3),
        (d1, d2),
    ];
    TwoBracketingCandidate {
        n,
        brackets1: vec![(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (1, 2), (3, 5), (1, 5)],
        brackets2,
        order,
    }
}

pub fn run() {
    let c = example();
    let x = TwoBracketing::validate(&c).unwrap();
    println!("valid: {} (dimension {})", x.key(), x.dimension());

    let p = two_tau(&x).unwrap();
    println!("as a tree-pair: {}", p.key());
    assert_eq!(two_nu(&p), x);

    // Deleting the 1-bracket (1..2) orphans its 2-brackets.
    let mut bad = c.clone();
    bad.brackets1.retain(|&w| w != (1, 2));
    let err = TwoBracketing::validate(&bad).unwrap_err();
    println!("without (1..2): {err} [{:?}]", err.axiom());
}

#[allow(dead_code)]
fn main() {
    run();
}
