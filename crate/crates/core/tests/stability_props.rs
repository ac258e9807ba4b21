mod common;

use common::{pair_flag_strategy, pair_strategy};
use higgs_core::bundle::{degree_coefficients, flag_degree_term};
use higgs_core::cones::RayEngine;
use higgs_core::roots::degree_via_character;
use higgs_core::stability::{
    chain_condition, degeneration_table_entry, prepare, slope_check, verdict_general,
    verdict_simplified, Alpha, DegenerationRow, Status,
};
use higgs_core::{Group, HiggsPair, HiggsPattern, Rat, Subset, Support, WeightedFlag};
use num_traits::Zero;
use proptest::prelude::*;

fn alpha_for(pair: &HiggsPair, pick: u8) -> Alpha {
    if pair.group != Group::Sp2nR {
        return Alpha::Value(Rat::zero());
    }
    match pick % 4 {
        0 => Alpha::Value(Rat::from_integer(-1)),
        1 => Alpha::Value(Rat::zero()),
        2 => Alpha::Value(Rat::from_integer(1)),
        _ => Alpha::Mu,
    }
}

/// Permutations commuting with the reversal pairing when there is one.
fn compatible_perm(pair: &HiggsPair, seed: &[usize], flips: &[bool]) -> Vec<usize> {
    let k = pair.rank();
    match pair.pairing() {
        None => {
            let mut idx: Vec<usize> = (0..k).collect();
            idx.sort_by_key(|&i| (seed[i], i));
            let mut perm = vec![0; k];
            for (to, &from) in idx.iter().enumerate() {
                perm[from] = to;
            }
            perm
        }
        Some(_) => {
            let half = k / 2;
            let mut order: Vec<usize> = (0..half).collect();
            order.sort_by_key(|&i| (seed[i], i));
            let mut perm: Vec<usize> = (0..k).collect();
            for (to, &from) in order.iter().enumerate() {
                let (a, b) = if flips[from] { (k - 1 - to, to) } else { (to, k - 1 - to) };
                perm[from] = a;
                perm[k - 1 - from] = b;
            }
            perm
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn general_and_simplified_agree(pair in pair_strategy(4), pick in any::<u8>()) {
        let alpha = alpha_for(&pair, pick);
        let engine = RayEngine::new();
        let g = verdict_general(&engine, &pair, alpha).unwrap().status;
        let s = verdict_simplified(&pair, alpha).unwrap().status;
        prop_assert_eq!(g.is_semistable(), s.is_semistable());
        prop_assert_eq!(g == Status::Stable, s == Status::Stable);
        if s.is_polystable() {
            prop_assert!(g.is_semistable());
        }
    }

    #[test]
    fn status_survives_compatible_permutations(
        pair in pair_strategy(5),
        seed in prop::collection::vec(0usize..100, 8),
        flips in prop::collection::vec(any::<bool>(), 8),
        pick in any::<u8>(),
    ) {
        let alpha = alpha_for(&pair, pick);
        let perm = compatible_perm(&pair, &seed, &flips);
        let moved = pair.permuted(&perm);
        prop_assert_eq!(moved.pairing(), pair.pairing());
        let a = verdict_simplified(&pair, alpha).unwrap().status;
        let b = verdict_simplified(&moved, alpha).unwrap().status;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn degree_term_is_character_degree(
        (pair, flag) in pair_flag_strategy(6),
        raw in prop::collection::vec(-5i64..=5, 6),
        scale in 1i64..7,
    ) {
        let lambda: Vec<Rat> = raw[..flag.steps()].iter().map(|x| Rat::new(*x, scale)).collect();
        let wf = WeightedFlag::new(flag.clone(), lambda.clone());
        let term = flag_degree_term(&pair, &wf, Rat::zero()).unwrap();
        let mu = wf.summand_weights(pair.rank());
        prop_assert_eq!(term, degree_via_character(&mu, pair.degrees()).unwrap());

        let doubled: Vec<Rat> = lambda.iter().map(|x| *x * Rat::from_integer(2)).collect();
        let twice = flag_degree_term(&pair, &WeightedFlag::new(flag, doubled), Rat::zero()).unwrap();
        prop_assert_eq!(twice, term * Rat::from_integer(2));
    }

    #[test]
    fn ray_identity_on_perpendicular_flags((pair, flag) in pair_flag_strategy(8)) {
        prop_assume!(pair.pairing().is_some());
        let m = flag.steps();
        let d = degree_coefficients(pair.degrees(), &flag, Rat::zero());
        for j in 1..=m / 2 {
            let l: Vec<i64> = (1..=m)
                .map(|c| if c <= j { -1 } else if c > m - j { 1 } else { 0 })
                .collect();
            let value: Rat = d.iter().zip(&l).map(|(x, y)| *x * Rat::from_integer(*y)).sum();
            let deg = |i: usize| Rat::from_integer(flag.member(i).degree(pair.degrees()));
            prop_assert_eq!(value, -deg(m - j) - deg(j));
        }
    }

    #[test]
    fn degenerate_chains_follow_the_table(
        n in 1usize..=3,
        raw in prop::collection::vec(-2i64..=2, 3),
        mask in any::<u64>(),
        s1 in any::<u16>(),
        s2 in any::<u16>(),
        pick in any::<u8>(),
    ) {
        let pattern = higgs_core::sweep::pattern_from_mask(Group::Sp2nR, n, u128::from(mask));
        let pair = HiggsPair::new(Group::Sp2nR, raw[..n].to_vec(), pattern);
        let alpha = alpha_for(&pair, pick).resolve(&pair);
        let full = Subset::full(n);
        let s2 = Subset(s2).intersection(full);
        let s1 = Subset(s1).intersection(s2);
        if let Some(entry) = degeneration_table_entry(&pair, alpha, s1, s2) {
            prop_assert_eq!(entry, chain_condition(&pair, alpha, s1, s2));
        } else {
            prop_assert_eq!(DegenerationRow::of(n, s1, s2), DegenerationRow::Generic);
        }
    }
}

#[test]
fn every_degenerate_row_is_reached() {
    let mut seen = std::collections::BTreeSet::new();
    for n in 1..=3 {
        for s2 in Subset::all(n) {
            for s1 in Subset::all(n).filter(|s| s.is_subset_of(s2)) {
                seen.insert(format!("{:?}", DegenerationRow::of(n, s1, s2)));
            }
        }
    }
    for row in DegenerationRow::DEGENERATE {
        assert!(seen.contains(&format!("{row:?}")), "{row:?}");
    }
}

#[test]
fn zero_field_laws() {
    let engine = RayEngine::new();
    for n in 1..=3usize {
        let pattern = HiggsPattern::SymPair {
            beta: Support::EMPTY,
            gamma: Support::EMPTY,
        };
        let prepared = prepare(&engine, &HiggsPair::new(Group::Sp2nR, vec![0; n], pattern)).unwrap();
        for raw in 0..5i64.pow(n as u32) {
            let degrees: Vec<i64> = (0..n).map(|i| (raw / 5i64.pow(i as u32)) % 5 - 2).collect();
            let pair = HiggsPair::new(Group::Sp2nR, degrees.clone(), pattern);
            for alpha in [Rat::from_integer(-1), Rat::zero(), Rat::from_integer(1), pair.slope()] {
                let v = prepared.verdict(&degrees, alpha);
                let balanced = alpha == pair.slope();
                assert_eq!(v.status.is_semistable(), balanced && slope_check(&degrees, false), "{degrees:?} {alpha}");
                assert_eq!(v.status == Status::Stable, balanced && slope_check(&degrees, true), "{degrees:?} {alpha}");
            }
        }
    }
}

#[test]
fn prepared_verdicts_match_fresh_ones() {
    let engine = RayEngine::new();
    let pair = HiggsPair::endo(Group::SLnC, vec![1, 0, -1], &[(1, 0), (2, 1)]);
    let prepared = prepare(&engine, &pair).unwrap();
    for d in [[1, 0, -1], [0, 0, 0], [-1, 0, 1], [2, -1, -1]] {
        let fresh = HiggsPair::endo(Group::SLnC, d.to_vec(), &[(1, 0), (2, 1)]);
        assert_eq!(
            prepared.verdict(&d, Rat::zero()),
            verdict_general(&engine, &fresh, Alpha::Value(Rat::zero())).unwrap()
        );
    }
}
