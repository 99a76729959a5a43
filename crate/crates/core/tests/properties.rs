use proptest::prelude::*;

use twoassoc::bracketing::{nu, tau};
use twoassoc::io::JsonCodec;
use twoassoc::poset::GradedPoset;
use twoassoc::rrt::Rrt;
use twoassoc::treepair::{compositions, enumerate_wn, TreePair};
use twoassoc::twobracketing::{two_nu, two_tau};

/// Stable trees as nested-array text: every interior vertex has 2 or more children.
fn stable_tree() -> impl Strategy<Value = Rrt> {
    let leaf = Just("[]".to_string());
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop::collection::vec(inner, 2..=4).prop_map(|cs| format!("[{}]", cs.join(",")))
    })
    .prop_map(|s| Rrt::from_nested(&s).unwrap())
}

fn weights() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=2, 1..=3).prop_filter("nonzero, dimension at most 3", |n| {
        n.iter().any(|&x| x > 0) && n.iter().sum::<u32>() + n.len() as u32 <= 6
    })
}

/// A face of a small W_n, chosen by index.
fn face() -> impl Strategy<Value = TreePair> {
    (weights(), any::<prop::sample::Index>()).prop_map(|(n, i)| {
        let w = enumerate_wn(&n).unwrap();
        w.elements[i.index(w.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_text_round_trips(t in stable_tree()) {
        prop_assert_eq!(Rrt::from_nested(&t.to_nested()).unwrap(), t.clone());
        prop_assert_eq!(Rrt::decode(&t.encode()).unwrap(), t);
    }

    #[test]
    fn nu_and_tau_are_inverse(t in stable_tree()) {
        let b = nu(&t);
        prop_assert_eq!(tau(&b), t.clone());
        prop_assert_eq!(b.dimension(), t.dimension());
        prop_assert_eq!(b.len(), t.len());
    }

    #[test]
    fn tree_dimension_formulas_agree(t in stable_tree()) {
        prop_assert_eq!(t.dimension(), t.dimension_by_valence());
        prop_assert!(t.dimension() >= 0);
    }

    #[test]
    fn mirror_is_an_involution(t in stable_tree()) {
        prop_assert_eq!(t.mirror().mirror(), t.clone());
        prop_assert_eq!(t.mirror().dimension(), t.dimension());
    }

    #[test]
    fn tree_moves_drop_dimension_and_contract(t in stable_tree()) {
        for (_, finer) in t.moves() {
            prop_assert_eq!(finer.dimension(), t.dimension() - 1);
            prop_assert!(Rrt::contraction_hom(&finer, &t).unwrap().is_some());
            prop_assert!(nu(&finer).leq(&nu(&t)));
        }
    }

    #[test]
    fn gamma_into_corollas_is_identity(t in stable_tree()) {
        let parts: Vec<Rrt> = t.interior().iter().map(|&v| Rrt::corolla(t.children(v).len())).collect();
        prop_assert_eq!(t.gamma(&parts).unwrap(), t);
    }

    #[test]
    fn tree_pair_models_round_trip(p in face()) {
        let x = two_nu(&p);
        prop_assert_eq!(x.dimension(), p.dimension());
        prop_assert_eq!(two_tau(&x).unwrap(), p.clone());
        prop_assert_eq!(TreePair::decode(&p.encode()).unwrap(), p.clone());
        prop_assert_eq!(TreePair::from_key(p.n(), &p.key()).unwrap(), p);
    }

    #[test]
    fn tree_pair_invariants(p in face()) {
        prop_assert_eq!(p.dimension(), p.dimension_by_valence());
        prop_assert!(p.valence_identity_holds());
        prop_assert_eq!(p.reversed().reversed(), p.clone());
        prop_assert_eq!(p.reversed().dimension(), p.dimension());
        for q in p.moves() {
            prop_assert_eq!(q.dimension(), p.dimension() - 1);
            prop_assert!(two_nu(&q).leq(&two_nu(&p), true));
        }
    }

    #[test]
    fn compositions_partition_the_block(a in prop::collection::vec(0u32..=2, 1..=3), min in 0usize..=2) {
        for comp in compositions(&a, min) {
            prop_assert!(comp.len() >= min);
            for (i, &ai) in a.iter().enumerate() {
                prop_assert_eq!(comp.iter().map(|part| part[i]).sum::<u32>(), ai);
            }
        }
    }

    #[test]
    fn product_dimensions_add(r in 2usize..=4, s in 2usize..=4) {
        let (a, b) = (twoassoc::rrt::enumerate_kr(r).poset, twoassoc::rrt::enumerate_kr(s).poset);
        let prod = GradedPoset::product(&[&a, &b]).unwrap();
        prop_assert_eq!(prod.poset.len(), a.len() * b.len());
        prop_assert_eq!(prod.poset.max_dim(), a.max_dim() + b.max_dim());
        prop_assert!(prod.poset.cover_defects().is_empty());
    }
}
