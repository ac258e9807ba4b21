//! Exhaustive comparison of the general and simplified checkers over a
//! finite family of pairs.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bundle::{validate_pair, Group, HiggsPair, HiggsPattern, Support, Twist};
use crate::cones::RayEngine;
use crate::error::{Error, Result};
use crate::stability::{prepare, verdict_simplified_resolved, Alpha, Verdict};
use crate::Rat;

/// Default cap on the number of instances a sweep may produce.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternFamily {
    /// Every symmetry-admissible pattern.
    All,
    /// Admissible patterns whose support is also a symmetric matrix.
    SymmetricOnly,
    /// A deterministic subsample (ChaCha, seed 0) of at most `cap` instances.
    BudgetLimited { cap: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub group: Group,
    pub n_min: usize,
    pub n_max: usize,
    pub d_min: i64,
    pub d_max: i64,
    pub twists: Vec<i64>,
    pub genus: u32,
    pub alphas: Vec<Alpha>,
    pub patterns: PatternFamily,
    pub strict_sections: bool,
    pub budget: u64,
}

impl SweepSpec {
    pub fn new(group: Group, n_max: usize, d_range: (i64, i64)) -> SweepSpec {
        SweepSpec {
            group,
            n_min: 1,
            n_max,
            d_min: d_range.0,
            d_max: d_range.1,
            twists: vec![0],
            genus: 1,
            alphas: vec![Alpha::Value(Rat::from_integer(0))],
            patterns: PatternFamily::All,
            strict_sections: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Non-increasing degree vectors in `[lo, hi]` compatible with the group.
pub fn degree_vectors(group: Group, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn nonincreasing(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (lo..=hi).rev() {
            for mut rest in nonincreasing(len - 1, lo, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    if lo > hi || n == 0 {
        return vec![];
    }
    match group {
        Group::Sp2nR => nonincreasing(n, lo, hi),
        Group::SLnC => nonincreasing(n, lo, hi)
            .into_iter()
            .filter(|d| d.iter().sum::<i64>() == 0)
            .collect(),
        Group::Sp2nC | Group::GLnR => {
            let half = if group == Group::Sp2nC { n } else { n / 2 };
            let middle = group == Group::GLnR && n % 2 == 1;
            let top = hi.min(-lo);
            if top < 0 || (middle && (lo > 0 || hi < 0)) {
                return vec![];
            }
            nonincreasing(half, 0, top)
                .into_iter()
                .map(|a| {
                    let mut d = a.clone();
                    if middle {
                        d.push(0);
                    }
                    d.extend(a.iter().rev().map(|x| -x));
                    d
                })
                .collect()
        }
    }
}

/// Entry orbits of the group's symmetry. An admissible support (β and γ
/// separately for Sp2nR) is exactly a union of orbits.
pub fn pattern_orbits(group: Group, k: usize) -> Vec<Vec<(usize, usize)>> {
    let sigma: Vec<usize> = (0..k).rev().collect();
    let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for t in 0..k {
        for s in 0..k {
            if seen.contains(&(t, s)) {
                continue;
            }
            let partner = match group {
                Group::Sp2nC | Group::GLnR => (sigma[s], sigma[t]),
                Group::Sp2nR => (s, t),
                Group::SLnC => (t, s),
            };
            let mut orbit = vec![(t, s)];
            if partner != (t, s) {
                orbit.push(partner);
            }
            seen.extend(orbit.iter().copied());
            orbits.push(orbit);
        }
    }
    orbits
}

fn support_from_mask(orbits: &[Vec<(usize, usize)>], mask: u128) -> Support {
    let mut s = Support::EMPTY;
    for (b, orbit) in orbits.iter().enumerate() {
        if mask >> b & 1 == 1 {
            for &(t, u) in orbit {
                s.insert(t, u);
            }
        }
    }
    s
}

/// The pattern whose orbits are selected by the bits of `mask`; for Sp2nR
/// the low bits choose β and the next ones γ.
pub fn pattern_from_mask(group: Group, k: usize, mask: u128) -> HiggsPattern {
    let orbits = pattern_orbits(group, k);
    match group {
        Group::Sp2nR => HiggsPattern::SymPair {
            beta: support_from_mask(&orbits, mask),
            gamma: support_from_mask(&orbits, mask >> orbits.len()),
        },
        _ => HiggsPattern::Endo(support_from_mask(&orbits, mask)),
    }
}

/// Number of admissible patterns, as a power of two.
pub fn pattern_bits(group: Group, k: usize) -> u32 {
    let orbits = pattern_orbits(group, k).len() as u32;
    if group == Group::Sp2nR {
        2 * orbits
    } else {
        orbits
    }
}

/// Every symmetry-admissible pattern on `k` summands, in a fixed order.
///
/// Panics when there are more than 2^24 of them.
pub fn admissible_patterns(group: Group, k: usize) -> Vec<HiggsPattern> {
    let bits = pattern_bits(group, k);
    assert!(bits <= 24, "2^{bits} patterns is too many to enumerate");
    let orbits = pattern_orbits(group, k);
    let supports: Vec<Support> = (0..1u128 << orbits.len())
        .map(|m| support_from_mask(&orbits, m))
        .collect();
    match group {
        Group::Sp2nR => {
            let mut out = Vec::with_capacity(supports.len() * supports.len());
            for &beta in &supports {
                for &gamma in &supports {
                    out.push(HiggsPattern::SymPair { beta, gamma });
                }
            }
            out
        }
        _ => supports.into_iter().map(HiggsPattern::Endo).collect(),
    }
}

/// The patterns of one rank in a sweep, addressable by index.
struct PatternSpace {
    group: Group,
    k: usize,
    /// For symmetric-only sweeps: orbit masks of each transpose class.
    classes: Option<Vec<u128>>,
}

impl PatternSpace {
    fn new(group: Group, k: usize, family: PatternFamily) -> PatternSpace {
        let classes = (family == PatternFamily::SymmetricOnly && group.uses_endo_pattern()).then(|| {
            let orbits = pattern_orbits(group, k);
            let find = |e: (usize, usize)| orbits.iter().position(|o| o.contains(&e)).expect("entry has an orbit");
            let mut classes: Vec<u128> = Vec::new();
            let mut used = 0u128;
            for i in 0..orbits.len() {
                if used >> i & 1 == 1 {
                    continue;
                }
                let mut mask = 1u128 << i;
                loop {
                    let grown = (0..orbits.len())
                        .filter(|&j| mask >> j & 1 == 1)
                        .flat_map(|j| orbits[j].iter().map(|&(t, u)| 1u128 << find((u, t))))
                        .fold(mask, |acc, m| acc | m);
                    if grown == mask {
                        break;
                    }
                    mask = grown;
                }
                used |= mask;
                classes.push(mask);
            }
            classes
        });
        PatternSpace { group, k, classes }
    }

    fn bits(&self) -> u32 {
        match &self.classes {
            Some(c) => c.len() as u32,
            None => pattern_bits(self.group, self.k),
        }
    }

    fn len(&self) -> Option<u64> {
        1u64.checked_shl(self.bits()).filter(|_| self.bits() < 64)
    }

    fn get(&self, index: u64) -> HiggsPattern {
        let mask = match &self.classes {
            Some(classes) => classes
                .iter()
                .enumerate()
                .filter(|(b, _)| index >> b & 1 == 1)
                .fold(0u128, |acc, (_, m)| acc | m),
            None => u128::from(index),
        };
        pattern_from_mask(self.group, self.k, mask)
    }
}

/// One pair of the sweep, before α is chosen.
#[derive(Debug, Clone)]
pub struct Case {
    pub pair: HiggsPair,
}

/// Cases grouped by pattern so the flag data is computed once per group.
#[derive(Debug, Clone)]
pub struct CaseGroup {
    pub pattern: HiggsPattern,
    pub rank: usize,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub groups: Vec<CaseGroup>,
    /// Cases dropped because a pattern entry has no nonzero section.
    pub infeasible: u64,
    pub instances: u64,
}

struct RankBlock {
    patterns: PatternSpace,
    degrees: Vec<Vec<i64>>,
}

impl RankBlock {
    /// Cases per pattern.
    fn per_pattern(&self, twists: usize) -> u64 {
        self.degrees.len() as u64 * twists as u64
    }
}

fn rank_blocks(spec: &SweepSpec) -> Result<Vec<RankBlock>> {
    let mut out = Vec::new();
    for n in spec.n_min.max(1)..=spec.n_max {
        let k = spec.group.summands(n);
        if k > crate::MAX_SUMMANDS {
            return Err(Error::InvalidPair(format!(
                "n = {n} needs {k} summands, more than {}",
                crate::MAX_SUMMANDS
            )));
        }
        let degrees = degree_vectors(spec.group, n, spec.d_min, spec.d_max);
        if degrees.is_empty() {
            continue;
        }
        out.push(RankBlock {
            patterns: PatternSpace::new(spec.group, k, spec.patterns),
            degrees,
        });
    }
    Ok(out)
}

/// Number of instances before any section-feasibility filtering, saturating
/// at `u64::MAX`.
pub fn instance_count(spec: &SweepSpec) -> Result<u64> {
    let mut total = 0u64;
    for block in rank_blocks(spec)? {
        let count = block
            .patterns
            .len()
            .and_then(|p| p.checked_mul(block.per_pattern(spec.twists.len())))
            .and_then(|c| c.checked_mul(spec.alphas.len() as u64))
            .unwrap_or(u64::MAX);
        total = total.saturating_add(count);
    }
    Ok(total)
}

fn make_case(spec: &SweepSpec, pattern: HiggsPattern, degrees: &[i64], ell: i64) -> Case {
    let mut pair = HiggsPair::new(spec.group, degrees.to_vec(), pattern);
    pair.twist = Twist {
        ell,
        genus: spec.genus,
        is_canonical: false,
    };
    Case { pair }
}

pub fn plan(spec: &SweepSpec) -> Result<Plan> {
    let blocks = rank_blocks(spec)?;
    let total = instance_count(spec)?;
    let n_alpha = spec.alphas.len() as u64;
    let n_twist = spec.twists.len();
    let keep = match spec.patterns {
        PatternFamily::BudgetLimited { cap } => {
            let cap = cap.min(spec.budget);
            (total > cap).then(|| cap.checked_div(n_alpha).unwrap_or(0))
        }
        _ if total > spec.budget => {
            return Err(Error::BudgetExceeded {
                count: total,
                budget: spec.budget,
            })
        }
        _ => None,
    };

    let mut groups: Vec<CaseGroup> = Vec::new();
    match keep {
        None => {
            for block in &blocks {
                for index in 0..block.patterns.len().unwrap_or(0) {
                    let pattern = block.patterns.get(index);
                    let mut cases = Vec::new();
                    for d in &block.degrees {
                        for &ell in &spec.twists {
                            cases.push(make_case(spec, pattern, d, ell));
                        }
                    }
                    groups.push(CaseGroup {
                        pattern,
                        rank: block.patterns.k,
                        cases,
                    });
                }
            }
        }
        Some(keep) => {
            // Cases are numbered by (rank, pattern, degrees, twist).
            let sizes: Vec<u64> = blocks
                .iter()
                .map(|b| {
                    b.patterns
                        .len()
                        .and_then(|p| p.checked_mul(b.per_pattern(n_twist)))
                        .unwrap_or(u64::MAX)
                })
                .collect();
            let n_cases = sizes.iter().fold(0u64, |a, b| a.saturating_add(*b));
            let n_cases = usize::try_from(n_cases).unwrap_or(usize::MAX);
            let keep = usize::try_from(keep).unwrap_or(usize::MAX).min(n_cases);
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut chosen = sample(&mut rng, n_cases, keep).into_vec();
            chosen.sort_unstable();
            for index in chosen {
                let mut rest = index as u64;
                let mut b = 0;
                while rest >= sizes[b] {
                    rest -= sizes[b];
                    b += 1;
                }
                let block = &blocks[b];
                let per = block.per_pattern(n_twist);
                let pattern = block.patterns.get(rest / per);
                let within = (rest % per) as usize;
                let case = make_case(spec, pattern, &block.degrees[within / n_twist], spec.twists[within % n_twist]);
                match groups.last_mut() {
                    Some(g) if g.pattern == pattern && g.rank == block.patterns.k => g.cases.push(case),
                    _ => groups.push(CaseGroup {
                        pattern,
                        rank: block.patterns.k,
                        cases: vec![case],
                    }),
                }
            }
        }
    }

    let mut infeasible = 0u64;
    for g in groups.iter_mut() {
        let before = g.cases.len();
        g.cases
            .retain(|c| validate_pair(&c.pair, spec.strict_sections).is_ok());
        infeasible += (before - g.cases.len()) as u64 * n_alpha;
    }
    groups.retain(|g| !g.cases.is_empty());
    let instances = groups.iter().map(|g| g.cases.len() as u64).sum::<u64>() * n_alpha;
    Ok(Plan {
        groups,
        infeasible,
        instances,
    })
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub pair: HiggsPair,
    pub alpha: Rat,
    pub general: Verdict,
    pub simplified: Verdict,
}

impl InstanceResult {
    pub fn semistable_agrees(&self) -> bool {
        self.general.status.is_semistable() == self.simplified.status.is_semistable()
    }

    pub fn stable_agrees(&self) -> bool {
        (self.general.status == crate::stability::Status::Stable)
            == (self.simplified.status == crate::stability::Status::Stable)
    }

    /// Sort key: summands, pattern, degrees, twist, α.
    pub fn key(&self) -> (usize, HiggsPattern, Vec<i64>, i64, Rat) {
        (
            self.pair.rank(),
            self.pair.pattern,
            self.pair.degrees().to_vec(),
            self.pair.twist.ell,
            self.alpha,
        )
    }
}

/// `[general][simplified]` counts, index 1 meaning the property holds.
pub type Agreement = [[u64; 2]; 2];

#[derive(Debug, Clone, Default)]
pub struct PolystableProbe {
    pub both: u64,
    pub neither: u64,
    pub general_only: u64,
    pub simplified_only: u64,
    pub disagreements: Vec<InstanceResult>,
    /// Simplified-polystable instances that fail general semistability.
    /// The theory says this never happens.
    pub simplified_polystable_not_semistable: u64,
}

impl PolystableProbe {
    pub fn total(&self) -> u64 {
        self.both + self.neither + self.general_only + self.simplified_only
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub instances: u64,
    pub infeasible: u64,
    pub semistable: Agreement,
    pub stable: Agreement,
    pub disagreements: Vec<InstanceResult>,
    pub polystable: PolystableProbe,
    pub elapsed_ms: u128,
}

impl SweepReport {
    pub fn fully_agrees(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.instances += other.instances;
        for i in 0..2 {
            for j in 0..2 {
                self.semistable[i][j] += other.semistable[i][j];
                self.stable[i][j] += other.stable[i][j];
            }
        }
        self.disagreements.extend(other.disagreements);
        let p = &mut self.polystable;
        let q = other.polystable;
        p.both += q.both;
        p.neither += q.neither;
        p.general_only += q.general_only;
        p.simplified_only += q.simplified_only;
        p.simplified_polystable_not_semistable += q.simplified_polystable_not_semistable;
        p.disagreements.extend(q.disagreements);
        self
    }

    fn record(&mut self, r: InstanceResult) {
        self.instances += 1;
        let g = &r.general.status;
        let s = &r.simplified.status;
        self.semistable[g.is_semistable() as usize][s.is_semistable() as usize] += 1;
        let stable = crate::stability::Status::Stable;
        self.stable[(*g == stable) as usize][(*s == stable) as usize] += 1;
        let p = &mut self.polystable;
        if s.is_polystable() && !g.is_semistable() {
            p.simplified_polystable_not_semistable += 1;
        }
        match (g.is_polystable(), s.is_polystable()) {
            (true, true) => p.both += 1,
            (false, false) => p.neither += 1,
            (true, false) => p.general_only += 1,
            (false, true) => p.simplified_only += 1,
        }
        let poly_disagree = g.is_polystable() != s.is_polystable();
        let main_disagree = !r.semistable_agrees() || !r.stable_agrees();
        if poly_disagree {
            p.disagreements.push(r.clone());
        }
        if main_disagree {
            self.disagreements.push(r);
        }
    }
}

/// Runs both checkers on every instance. `observe` sees every result (in
/// no particular order; it runs on worker threads).
pub fn equivalence_sweep<F>(spec: &SweepSpec, engine: &RayEngine, observe: F) -> Result<SweepReport>
where
    F: Fn(&InstanceResult) + Sync,
{
    let start = Instant::now();
    let plan = plan(spec)?;
    let partials: Vec<Result<SweepReport>> = plan
        .groups
        .par_iter()
        .map(|group| {
            let mut report = SweepReport::default();
            let first = &group.cases[0].pair;
            let prepared = prepare(engine, first)?;
            for case in &group.cases {
                for alpha in &spec.alphas {
                    let a = alpha.resolve(&case.pair);
                    if !a.is_zero_value() && !spec.group.admits_alpha() {
                        return Err(Error::NonzeroAlphaUnsupported);
                    }
                    let result = InstanceResult {
                        general: prepared.verdict(case.pair.degrees(), a),
                        simplified: verdict_simplified_resolved(&case.pair, a),
                        pair: case.pair.clone(),
                        alpha: a,
                    };
                    observe(&result);
                    report.record(result);
                }
            }
            Ok(report)
        })
        .collect();
    let mut report = SweepReport {
        infeasible: plan.infeasible,
        ..SweepReport::default()
    };
    for partial in partials {
        report = report.merge(partial?);
    }
    report.disagreements.sort_by_key(InstanceResult::key);
    report.polystable.disagreements.sort_by_key(InstanceResult::key);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

trait IsZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl IsZeroValue for Rat {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}
