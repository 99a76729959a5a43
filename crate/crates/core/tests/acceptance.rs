//! The eight acceptance criteria, each checked exactly, one line of output per
//! criterion. Runs without the libtest harness so the lines always print.

use twoassoc::bracketing::{nu, OneBracket};
use twoassoc::io::{load_appendix_table, AppendixRow};
use twoassoc::poset::PolytopeCheck;
use twoassoc::structure::{
    check_forgetful, check_reversal, check_single_seam, check_zero_swap, decompose, verify_gamma_t, Memo,
};
use twoassoc::twobracketing::{
    check_models, compare_oracle, two_nu, Axiom, TwoBracket, TwoBracketing, TwoBracketingCandidate, TwoBracketingError,
    DEFAULT_ORACLE_BOUND,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows() -> Vec<AppendixRow> {
    load_appendix_table().expect("reference table loads")
}

fn appendix(memo: &Memo) -> Outcome {
    let rows = rows();
    ensure(rows.len() == 20, || format!("table has {} rows", rows.len()))?;
    for row in &rows {
        let w = memo.w(&row.n).map_err(|e| e.to_string())?;
        let fv = w.poset.face_vector();
        ensure(fv == row.faces, || format!("{}: face vector {fv:?}, table {:?}", row.label(), row.faces))?;
        ensure(w.poset.is_simple() == row.simple, || format!("{}: simplicity differs", row.label()))?;
    }
    Ok("20 rows, face vectors and simplicity exact".into())
}

fn certificates(memo: &Memo) -> Outcome {
    let mut count = 0;
    let mut check = |label: String, poset: &twoassoc::poset::GradedPoset, rank: i64| -> Result<(), String> {
        let hat = poset.adjoin_bottom().map_err(|e| e.to_string())?;
        match hat.check_abstract_polytope() {
            PolytopeCheck::Polytope(c) if c.rank == rank => {
                count += 1;
                Ok(())
            }
            PolytopeCheck::Polytope(c) => Err(format!("{label}: rank {} expected {rank}", c.rank)),
            PolytopeCheck::Violation(v) => Err(format!("{label}: {} fails", v.name())),
        }
    };
    for row in rows() {
        let w = memo.w(&row.n).map_err(|e| e.to_string())?;
        let rank = row.n.iter().map(|&x| x as i64).sum::<i64>() + row.n.len() as i64 - 3;
        check(row.label(), &w.poset, rank)?;
    }
    for r in 2..=6 {
        check(format!("K_{r}"), &memo.k(r).poset, r as i64 - 2)?;
    }
    Ok(format!("{count} posets certified with the expected rank"))
}

fn models(memo: &Memo) -> Outcome {
    let mut total = 0;
    for row in rows() {
        let w = memo.w(&row.n).map_err(|e| e.to_string())?;
        let rep = check_models(&w);
        ensure(rep.holds(), || format!("{}: {rep:?}", row.label()))?;
        total += rep.elements;
    }
    Ok(format!("{total} elements round trip, orders agree"))
}

/// Every nonzero weight vector with `|n| + r - 3 <= 2`.
fn low_dimensional_weights() -> Vec<Vec<u32>> {
    let mut out = vec![];
    for r in 1..=5u32 {
        let mut acc: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..r {
            acc = acc.into_iter().flat_map(|v| (0..=5 - r).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out.extend(acc.into_iter().filter(|n| n.iter().any(|&x| x > 0) && n.iter().sum::<u32>() + r <= 5));
    }
    out
}

fn oracle() -> Outcome {
    let listed: [&[u32]; 12] =
        [&[1], &[2], &[1, 1], &[2, 0], &[0, 2], &[3], &[2, 1], &[2, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 2, 0], &[3, 0]];
    let all = low_dimensional_weights();
    ensure(listed.iter().all(|n| all.contains(&n.to_vec())), || "a listed weight vector is missing".into())?;
    for n in &all {
        let c = compare_oracle(n, DEFAULT_ORACLE_BOUND).map_err(|e| e.to_string())?;
        ensure(c.matches(), || format!("{n:?}: {c:?}"))?;
    }
    Ok(format!("all {} weight vectors of dimension at most 2 match brute force as posets", all.len()))
}

fn recursive(memo: &Memo) -> Outcome {
    let mut faces = 0;
    for n in [&[2u32, 0, 0][..], &[1, 1, 0], &[3, 0, 0]] {
        let w = memo.w(n).map_err(|e| e.to_string())?;
        for p in &w.elements {
            decompose(p, memo).map_err(|e| format!("{}: {e}", p.key()))?;
            faces += 1;
        }
    }
    let mut trees = 0;
    for r in [4, 5] {
        for t in &memo.k(r).elements {
            verify_gamma_t(t, memo).map_err(|e| format!("{t}: {e}"))?;
            trees += 1;
        }
    }
    Ok(format!("{faces} tree-pair faces and {trees} trees decompose, zero factor mismatches"))
}

fn symmetry(memo: &Memo) -> Outcome {
    for row in rows() {
        let rep = check_reversal(&row.n, memo).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("{} reversal: {rep:?}", row.label()))?;
    }
    for k in 1..=6 {
        let rep = check_single_seam(k, memo).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("W_({k}) vs K_{k}: {rep:?}"))?;
    }
    for k in 1..=3 {
        ensure(check_zero_swap(k, memo).map_err(|e| e.to_string())?, || format!("W_{k},0 vs W_0,{k}"))?;
    }
    Ok("reversal on 20 rows, single seam up to 6, zero swap up to 3".into())
}

fn forgetful(memo: &Memo) -> Outcome {
    for row in rows() {
        let w = memo.w(&row.n).map_err(|e| e.to_string())?;
        let rep = check_forgetful(&w, &memo.k(row.n.len()));
        ensure(rep.holds(), || format!("{}: {rep:?}", row.label()))?;
    }
    Ok("monotone, surjective and compatible with nu on 20 rows".into())
}

fn b(lo: usize, hi: usize, rows: &[Option<(u32, u32)>]) -> TwoBracket {
    TwoBracket::new(OneBracket::new(lo, hi), rows.to_vec())
}

/// The worked 2-bracketing of W_1,1,4,1,0, written out bracket by bracket.
fn worked_example() -> TwoBracketingCandidate {
    let n = vec![1, 1, 4, 1, 0];
    let mut brackets2 = vec![
        TwoBracket::mark(1, 1),
        TwoBracket::mark(2, 1),
        TwoBracket::mark(3, 1),
        TwoBracket::mark(3, 2),
        TwoBracket::mark(3, 3),
        TwoBracket::mark(3, 4),
        TwoBracket::mark(4, 1),
        b(1, 2, &[Some((1, 1)), None]),
        b(1, 2, &[None, Some((1, 1))]),
        b(1, 2, &[Some((1, 1)), Some((1, 1))]),
        b(3, 5, &[Some((4, 4)), Some((1, 1)), None]),
        b(3, 5, &[Some((3, 3)), None, None]),
        b(3, 5, &[Some((1, 2)), None, None]),
        b(1, 5, &[Some((1, 1)), Some((1, 1)), Some((4, 4)), Some((1, 1)), None]),
        b(1, 5, &[None, None, Some((1, 3)), None, None]),
    ];
    brackets2.push(TwoBracket::root(&n));
    let order = vec![
        (TwoBracket::mark(3, 1), TwoBracket::mark(3, 2)),
        (TwoBracket::mark(3, 2), TwoBracket::mark(3, 3)),
        (TwoBracket::mark(3, 3), TwoBracket::mark(3, 4)),
        (b(1, 2, &[Some((1, 1)), None]), b(1, 2, &[None, Some((1, 1))])),
        (b(3, 5, &[Some((1, 2)), None, None]), b(3, 5, &[Some((3, 3)), None, None])),
        (b(3, 5, &[Some((3, 3)), None, None]), b(3, 5, &[Some((4, 4)), Some((1, 1)), None])),
        (
            b(1, 5, &[None, None, Some((1, 3)), None, None]),
            b(1, 5, &[Some((1, 1)), Some((1, 1)), Some((4, 4)), Some((1, 1)), None]),
        ),
    ];
    let brackets1 = vec![(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (1, 2), (3, 5), (1, 5)];
    TwoBracketingCandidate { n, brackets1, brackets2, order }
}

fn replace(c: &mut TwoBracketingCandidate, old: &TwoBracket, new: &TwoBracket) {
    for x in c.brackets2.iter_mut() {
        if x == old {
            *x = new.clone();
        }
    }
    for (x, y) in c.order.iter_mut() {
        for z in [x, y] {
            if z == old {
                *z = new.clone();
            }
        }
    }
}

fn remove(c: &mut TwoBracketingCandidate, old: &TwoBracket) {
    c.brackets2.retain(|x| x != old);
    c.order.retain(|(x, y)| x != old && y != old);
}

fn non_examples() -> Vec<(&'static str, TwoBracketingCandidate, Axiom)> {
    let base = worked_example();
    let c345_1 = b(3, 5, &[Some((4, 4)), Some((1, 1)), None]);
    let c345_2 = b(3, 5, &[Some((3, 3)), None, None]);
    let c345_3 = b(3, 5, &[Some((1, 2)), None, None]);

    let mut one = base.clone();
    one.brackets1.retain(|&w| w != (1, 2));

    let mut two = base.clone();
    replace(&mut two, &c345_2, &b(3, 5, &[Some((2, 3)), None, None]));

    let mut three = base.clone();
    remove(&mut three, &c345_1);

    let mut four = base.clone();
    remove(&mut four, &b(1, 2, &[Some((1, 1)), None]));

    let mut five = base.clone();
    five.order.retain(|(x, _)| x.width != OneBracket::new(3, 5));
    five.order.push((c345_2.clone(), c345_3.clone()));
    five.order.push((c345_3, c345_1));

    vec![
        ("missing 1-bracket", one, Axiom::OneBracketing),
        ("overlapping 2-brackets", two, Axiom::TwoBracketing),
        ("uncovered mark", three, Axiom::Unfused),
        ("unrefined bracket", four, Axiom::Unfused),
        ("order against the marks", five, Axiom::PartialOrder),
    ]
}

fn properties(memo: &Memo) -> Outcome {
    let mut elements = 0;
    for row in rows() {
        let w = memo.w(&row.n).map_err(|e| e.to_string())?;
        ensure(w.poset.cover_defects().is_empty(), || format!("{}: Hasse edge skips a dimension", row.label()))?;
        for p in &w.elements {
            ensure(p.dimension() == p.dimension_by_valence(), || format!("{}: dimension formulas differ", p.key()))?;
            ensure(p.valence_identity_holds(), || format!("{}: valence identity fails", p.key()))?;
            ensure(two_nu(p).dimension() == p.dimension(), || format!("{}: bracket dimension differs", p.key()))?;
            elements += 1;
        }
    }
    for r in 2..=6 {
        let k = memo.k(r);
        ensure(k.poset.cover_defects().is_empty(), || format!("K_{r}: Hasse edge skips a dimension"))?;
        for t in &k.elements {
            ensure(t.dimension() == t.dimension_by_valence(), || format!("{t}: dimension formulas differ"))?;
            ensure(nu(t).dimension() == t.dimension(), || format!("{t}: bracket dimension differs"))?;
        }
    }
    TwoBracketing::validate(&worked_example()).map_err(|e| format!("worked example rejected: {e}"))?;
    for (label, cand, axiom) in non_examples() {
        match TwoBracketing::validate(&cand) {
            Ok(_) => return Err(format!("{label}: accepted")),
            Err(e) => {
                ensure(e.axiom() == axiom, || format!("{label}: failed {:?} ({e}), expected {axiom:?}", e.axiom()))?
            }
        }
    }
    Ok(format!("{elements} tree-pairs satisfy the identities; 5 non-examples fail the named axiom"))
}

fn specific_errors() -> Outcome {
    let specific: Vec<fn(&TwoBracketingError) -> bool> = vec![
        |e| matches!(e, TwoBracketingError::WidthNotInBase { .. }),
        |e| matches!(e, TwoBracketingError::Overlap { .. }),
        |e| matches!(e, TwoBracketingError::CoverageViolated { .. }),
        |e| matches!(e, TwoBracketingError::RefinementViolated { .. }),
        |e| matches!(e, TwoBracketingError::HeredityViolated { .. }),
    ];
    for ((label, cand, _), is) in non_examples().into_iter().zip(specific) {
        match TwoBracketing::validate(&cand) {
            Ok(_) => return Err(format!("{label}: accepted")),
            Err(e) => ensure(is(&e), || format!("{label}: {e:?}"))?,
        }
    }
    Ok(String::new())
}

fn main() {
    let memo = Memo::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("appendix face vectors", appendix(&memo)),
        ("abstract polytope certificates", certificates(&memo)),
        ("tree and bracket models agree", models(&memo)),
        ("brute-force oracle", oracle()),
        ("recursive face structure", recursive(&memo)),
        ("symmetry and specialization", symmetry(&memo)),
        ("forgetful map", forgetful(&memo)),
        ("property suite", properties(&memo).and_then(|d| specific_errors().map(|_| d))),
    ];
    let mut failed = 0;
    for (k, (name, out)) in results.iter().enumerate() {
        match out {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1)
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
