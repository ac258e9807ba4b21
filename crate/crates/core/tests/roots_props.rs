use std::collections::{BTreeMap, BTreeSet};

use higgs_core::bundle::flag_degree_term;
use higgs_core::roots::{
    all_roots, degree_via_character, evaluate_character, parabolic_root_sets, s_of_character,
    simple_roots, trace_form, Character, Family, RootSystemSpec, RootVector,
};
use higgs_core::{CoordinateFlag, Group, HiggsPair, HiggsPattern, Rat, Subset, Support, WeightedFlag};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn pairing_value(g: &[Vec<Rat>], x: &[Rat], y: &[Rat]) -> Rat {
    let mut total = Rat::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            total += x[i] * g[i][j] * y[j];
        }
    }
    total
}

fn root_value(root: &RootVector, s: &[Rat]) -> Rat {
    root.0.iter().zip(s).map(|(a, b)| Rat::from_integer(*a) * b).sum()
}

fn family_strategy() -> impl Strategy<Value = RootSystemSpec> {
    prop_oneof![Just(Family::A), Just(Family::B), Just(Family::C), Just(Family::D)]
        .prop_flat_map(|f| (Just(f), if f == Family::D { 2usize..=5 } else { 1usize..=5 }))
        .prop_map(|(f, r)| RootSystemSpec::new(f, r).unwrap())
}

#[test]
fn root_counts() {
    for r in 1..=7usize {
        let n = r;
        assert_eq!(all_roots(&RootSystemSpec::new(Family::A, r).unwrap()).len(), (n + 1) * n);
        assert_eq!(all_roots(&RootSystemSpec::new(Family::B, r).unwrap()).len(), 2 * n * n);
        assert_eq!(all_roots(&RootSystemSpec::new(Family::C, r).unwrap()).len(), 2 * n * n);
        if r >= 2 {
            assert_eq!(all_roots(&RootSystemSpec::new(Family::D, r).unwrap()).len(), 2 * n * (n - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn levi_and_unipotent_closure(spec in family_strategy(), mask in any::<u8>()) {
        let a: Vec<usize> = (0..spec.rank).filter(|i| mask >> i & 1 == 1).collect();
        let sets = parabolic_root_sets(&spec, &a).unwrap();
        let levi: BTreeSet<RootVector> = sets.levi.iter().cloned().collect();
        let roots: BTreeSet<RootVector> = all_roots(&spec).into_iter().collect();
        for r in &levi {
            prop_assert!(levi.contains(&RootVector(r.0.iter().map(|x| -x).collect())));
        }
        let unipotent: BTreeSet<RootVector> = sets.unipotent.iter().cloned().collect();
        for x in &unipotent {
            for y in &unipotent {
                let sum = RootVector(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect());
                if roots.contains(&sum) {
                    prop_assert!(unipotent.contains(&sum));
                }
            }
        }
        prop_assert_eq!(sets.parabolic.len(), sets.levi.len() + sets.unipotent.len());
    }

    #[test]
    fn s_chi_separates_levi_from_unipotent(
        spec in family_strategy(),
        mask in 1u8..,
        coeffs in prop::collection::vec((1i64..6, 1i64..4), 5),
    ) {
        let a: Vec<usize> = (0..spec.rank).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!a.is_empty());
        let chi = Character {
            simple_coeffs: a.iter().map(|&i| (i, -Rat::new(coeffs[i].0, coeffs[i].1))).collect::<BTreeMap<_, _>>(),
            central_part: vec![],
        };
        prop_assert!(chi.is_strictly_antidominant());
        let s = s_of_character(&spec, &chi).unwrap().0;
        let sets = parabolic_root_sets(&spec, &a).unwrap();
        let levi: BTreeSet<RootVector> = sets.levi.into_iter().collect();
        let unipotent: BTreeSet<RootVector> = sets.unipotent.into_iter().collect();
        for root in all_roots(&spec) {
            let v = root_value(&root, &s);
            prop_assert_eq!(v.is_zero(), levi.contains(&root));
            prop_assert_eq!(v.is_negative(), unipotent.contains(&root));
        }
        // s lies in the span it was solved on, so it pairs with itself as χ does.
        let g = trace_form(&spec);
        prop_assert_eq!(pairing_value(&g, &s, &s), evaluate_character(&spec, &chi, &s).unwrap());
        for (i, delta) in simple_roots(&spec).iter().enumerate() {
            if !a.contains(&i) {
                prop_assert!(root_value(delta, &s).is_zero());
            }
        }
    }

    /// The degree of the reduction computed from the eigenvalues of `s_χ`
    /// agrees with the filtration formula on the matching coordinate flag.
    #[test]
    fn character_degree_matches_flag_formula(
        k in 2usize..=6,
        mask in 1u8..,
        coeffs in prop::collection::vec((1i64..6, 1i64..4), 5),
        degrees in prop::collection::vec(-3i64..=3, 6),
        shuffle in prop::collection::vec(0usize..50, 6),
    ) {
        let spec = RootSystemSpec::new(Family::A, k - 1).unwrap();
        let a: Vec<usize> = (0..k - 1).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!a.is_empty());
        let chi = Character {
            simple_coeffs: a.iter().map(|&i| (i, -Rat::new(coeffs[i].0, coeffs[i].1))).collect(),
            central_part: vec![],
        };
        let s = s_of_character(&spec, &chi).unwrap().0;

        // Blocks of the flag in the e-basis, then moved to summands by a permutation.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (shuffle[i], i));
        let mut pieces = Vec::new();
        let mut lambda = Vec::new();
        let mut start = 0;
        for cut in a.iter().map(|i| i + 1).chain([k]) {
            pieces.push(Subset::from_indices(&order[start..cut]));
            lambda.push(s[start]);
            prop_assert!(s[start..cut].iter().all(|x| *x == s[start]));
            start = cut;
        }
        let flag = CoordinateFlag::new(pieces);
        let degrees = degrees[..k].to_vec();
        let mut weights = vec![Rat::zero(); k];
        for (e, &summand) in order.iter().enumerate() {
            weights[summand] = s[e];
        }
        let pattern = HiggsPattern::SymPair { beta: Support::EMPTY, gamma: Support::EMPTY };
        let pair = HiggsPair::new(Group::Sp2nR, degrees.clone(), pattern);
        let via_flag = flag_degree_term(&pair, &WeightedFlag::new(flag, lambda), Rat::zero()).unwrap();
        prop_assert_eq!(degree_via_character(&weights, &degrees).unwrap(), via_flag);
    }
}
