#![allow(dead_code)]

use higgs_core::bundle::flags_for;
use higgs_core::sweep::{pattern_bits, pattern_from_mask};
use higgs_core::{CoordinateFlag, Group, HiggsPair, HiggsPattern};
use proptest::prelude::*;

pub fn summands(group: Group, n: usize) -> usize {
    group.summands(n)
}

pub fn group_strategy() -> impl Strategy<Value = Group> {
    prop_oneof![
        Just(Group::Sp2nC),
        Just(Group::SLnC),
        Just(Group::Sp2nR),
        Just(Group::GLnR)
    ]
}

/// Largest `n` keeping the number of summands at most `max_k`.
pub fn max_n(group: Group, max_k: usize) -> usize {
    match group {
        Group::Sp2nC => max_k / 2,
        _ => max_k,
    }
}

/// Degrees respecting the pairing (and, for SL, summing to zero).
pub fn shape_degrees(group: Group, raw: &[i64]) -> Vec<i64> {
    let k = raw.len();
    match group {
        Group::Sp2nR => raw.to_vec(),
        Group::SLnC => {
            let mut d = raw.to_vec();
            let s: i64 = d[..k - 1].iter().sum();
            d[k - 1] = -s;
            d
        }
        Group::Sp2nC | Group::GLnR => {
            let mut d = raw.to_vec();
            for i in 0..k {
                let j = k - 1 - i;
                if i < j {
                    d[j] = -d[i];
                } else if i == j {
                    d[i] = 0;
                }
            }
            d
        }
    }
}

/// A valid pair with `k ≤ max_k` summands, chosen uniformly among the
/// admissible patterns.
pub fn pair_strategy(max_k: usize) -> impl Strategy<Value = HiggsPair> {
    group_strategy()
        .prop_flat_map(move |g| (Just(g), 1..=max_n(g, max_k)))
        .prop_flat_map(|(g, n)| {
            let k = g.summands(n);
            let bits = pattern_bits(g, k);
            (
                Just(g),
                prop::collection::vec(-2i64..=2, k),
                (any::<u128>(), any::<u128>()).prop_map(move |(a, b)| { let m = a & b; if bits >= 128 { m } else { m & ((1u128 << bits) - 1) } }),
            )
        })
        .prop_map(|(g, raw, mask)| {
            let k = raw.len();
            HiggsPair::new(g, shape_degrees(g, &raw), pattern_from_mask(g, k, mask))
        })
}

pub fn flags_of(pair: &HiggsPair) -> Vec<CoordinateFlag> {
    flags_for(pair.rank(), pair.pairing(), pair.rank())
}

/// A pair together with one of its admissible flags.
pub fn pair_flag_strategy(max_k: usize) -> impl Strategy<Value = (HiggsPair, CoordinateFlag)> {
    pair_strategy(max_k).prop_flat_map(|pair| {
        let flags = flags_of(&pair);
        (Just(pair), prop::sample::select(flags))
    })
}

pub fn is_zero_pattern(p: &HiggsPattern) -> bool {
    p.is_zero()
}
