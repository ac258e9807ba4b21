//! Splitting a polystable Sp(2n,ℝ) pair into stable pieces of type
//! Sp(2m,ℝ), U(m) and U(p,q), and putting them back together.

use std::fmt;

use crate::bundle::{validate_pair, Group, HiggsPair, HiggsPattern, Subset, Support, Twist};
use crate::cones::RayEngine;
use crate::error::{Error, Result};
use crate::stability::{prepare, slope_check, verdict_simplified_resolved, Alpha, Status};
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorLabel {
    /// Zero field.
    Un(usize),
    /// `V = Ṽ ⊕ W̃*` with both fields purely off-diagonal.
    Upq(usize, usize),
    SpR(usize),
}

impl FactorLabel {
    pub fn rank(self) -> usize {
        match self {
            FactorLabel::Un(m) | FactorLabel::SpR(m) => m,
            FactorLabel::Upq(p, q) => p + q,
        }
    }
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorLabel::SpR(m) => write!(f, "Sp({},R)", 2 * m),
            FactorLabel::Un(m) => write!(f, "U({m})"),
            FactorLabel::Upq(p, q) => write!(f, "U({p},{q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub label: FactorLabel,
    /// Summands of the input pair, in the order used by `embedded_pair`.
    /// For U(p,q) the first `p` of them form `Ṽ`.
    pub indices: Vec<usize>,
    pub embedded_pair: HiggsPair,
}

/// Label plus degree data; equal keys mean isomorphic factors in the
/// split model.
pub type FactorKey = (FactorLabel, Vec<i64>);

impl Factor {
    pub fn key(&self) -> FactorKey {
        let d = self.embedded_pair.degrees();
        let cut = match self.label {
            FactorLabel::Upq(p, _) => p,
            _ => d.len(),
        };
        let mut head = d[..cut].to_vec();
        let mut tail = d[cut..].to_vec();
        head.sort_unstable_by(|a, b| b.cmp(a));
        tail.sort_unstable_by(|a, b| b.cmp(a));
        head.extend(tail);
        (self.label, head)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
    pub rank: usize,
    pub twist: Twist,
    /// Factors are sorted by key, then by indices.
    pub normalized: bool,
    /// Blocks that fitted more than one label, with the label chosen.
    pub notes: Vec<String>,
}

impl Decomposition {
    pub fn keys(&self) -> Vec<FactorKey> {
        let mut keys: Vec<FactorKey> = self.factors.iter().map(Factor::key).collect();
        keys.sort();
        keys
    }
}

fn pattern_parts(pattern: &HiggsPattern) -> (Support, Support) {
    match *pattern {
        HiggsPattern::SymPair { beta, gamma } => (beta, gamma),
        HiggsPattern::Endo(_) => unreachable!("checked to be Sp2nR"),
    }
}

fn restrict(pair: &HiggsPair, indices: &[usize]) -> HiggsPair {
    let (beta, gamma) = pattern_parts(&pair.pattern);
    let mut out = HiggsPair::new(
        Group::Sp2nR,
        indices.iter().map(|&i| pair.degrees()[i]).collect(),
        HiggsPattern::SymPair {
            beta: beta.restrict(indices),
            gamma: gamma.restrict(indices),
        },
    );
    out.twist = pair.twist;
    out
}

/// Connected components of the graph joining `i` and `j` whenever a β or γ
/// entry sits at `(i, j)`.
fn coupling_blocks(k: usize, beta: Support, gamma: Support) -> Vec<Vec<usize>> {
    let mut block = (0..k).collect::<Vec<_>>();
    fn root(block: &mut [usize], mut i: usize) -> usize {
        while block[i] != i {
            block[i] = block[block[i]];
            i = block[i];
        }
        i
    }
    for (i, j) in beta.entries().chain(gamma.entries()) {
        let (a, b) = (root(&mut block, i), root(&mut block, j));
        if a != b {
            block[a.max(b)] = a.min(b);
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        let r = root(&mut block, i);
        match out.iter_mut().find(|b| b[0] == r) {
            Some(b) => b.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

/// Splittings `(P, Q)` of the block with every entry joining `P` to `Q`,
/// one per unordered pair, `P` holding the first index.
fn bipartitions(block: &[usize], beta: Support, gamma: Support) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = block.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask & 1 == 0 {
            continue;
        }
        let side = |i: usize| {
            let pos = block.iter().position(|&b| b == i).expect("entry inside block");
            mask >> pos & 1 == 1
        };
        let across = beta
            .entries()
            .chain(gamma.entries())
            .filter(|(i, j)| block.contains(i) && block.contains(j))
            .all(|(i, j)| side(i) != side(j));
        if across {
            let (p, q): (Vec<usize>, Vec<usize>) = block.iter().partition(|&&i| side(i));
            out.push((p, q));
        }
    }
    out
}

/// Puts the side with the larger (degree sum, size, sorted degrees) first.
fn orient(p: Vec<usize>, q: Vec<usize>, degrees: &[i64]) -> (Vec<usize>, Vec<usize>) {
    let rank_of = |side: &[usize]| {
        let mut d: Vec<i64> = side.iter().map(|&i| degrees[i]).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        (d.iter().sum::<i64>(), side.len(), d)
    };
    if rank_of(&q) > rank_of(&p) {
        (q, p)
    } else {
        (p, q)
    }
}

fn upq_stable(engine: &RayEngine, block_pair: &HiggsPair, p: usize, alpha: Rat) -> Result<bool> {
    let m = block_pair.rank();
    let center: Vec<i64> = (0..m).map(|i| if i < p { 1 } else { -1 }).collect();
    let prepared = prepare(engine, block_pair)?;
    Ok(prepared
        .stable_modulo(block_pair.degrees(), alpha, &[vec![1; m], center])
        .passed)
}

fn classify(
    engine: &RayEngine,
    pair: &HiggsPair,
    block: &[usize],
    alpha: Rat,
) -> Result<(Vec<Factor>, bool)> {
    let (beta, gamma) = pattern_parts(&pair.pattern);
    let m = block.len();
    let mut fits = Vec::new();

    let natural = restrict(pair, block);
    if natural.pattern.is_zero() && slope_check(natural.degrees(), true) {
        fits.push(Factor {
            label: FactorLabel::Un(m),
            indices: block.to_vec(),
            embedded_pair: natural.clone(),
        });
    }
    for (p, q) in bipartitions(block, beta, gamma) {
        let (p, q) = orient(p, q, pair.degrees());
        let mut indices = p.clone();
        indices.extend(&q);
        let embedded = restrict(pair, &indices);
        if upq_stable(engine, &embedded, p.len(), alpha)? {
            fits.push(Factor {
                label: FactorLabel::Upq(p.len(), q.len()),
                indices,
                embedded_pair: embedded,
            });
        }
    }
    if verdict_simplified_resolved(&natural, alpha).status == Status::Stable {
        fits.push(Factor {
            label: FactorLabel::SpR(m),
            indices: block.to_vec(),
            embedded_pair: natural,
        });
    }
    let ambiguous = fits.len() > 1;
    fits.sort_by_key(|f| f.label);
    fits.truncate(1);
    Ok((fits, ambiguous))
}

pub fn decompose(pair: &HiggsPair, alpha: Alpha) -> Result<Decomposition> {
    decompose_with(&RayEngine::new(), pair, alpha)
}

pub fn decompose_with(engine: &RayEngine, pair: &HiggsPair, alpha: Alpha) -> Result<Decomposition> {
    if pair.group != Group::Sp2nR {
        return Err(Error::InvalidPair(format!(
            "decomposition is only defined for Sp2nR, got {}",
            pair.group
        )));
    }
    validate_pair(pair, false)?;
    let a = alpha.resolve(pair);
    let status = verdict_simplified_resolved(pair, a).status;
    if !status.is_polystable() {
        return Err(Error::NotPolystable {
            status: status.name().to_string(),
        });
    }
    let (beta, gamma) = pattern_parts(&pair.pattern);
    let mut factors = Vec::new();
    let mut notes = Vec::new();
    for block in coupling_blocks(pair.rank(), beta, gamma) {
        let (mut fit, ambiguous) = classify(engine, pair, &block, a)?;
        let Some(factor) = fit.pop() else {
            let one_based: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
            return Err(Error::FactorNotStable {
                indices: format!("{{{}}}", one_based.join(",")),
            });
        };
        if ambiguous {
            let one_based: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
            notes.push(format!(
                "block {{{}}} fits several labels; chose {}",
                one_based.join(","),
                factor.label
            ));
        }
        factors.push(factor);
    }
    factors.sort_by(|x, y| (x.key(), &x.indices).cmp(&(y.key(), &y.indices)));
    Ok(Decomposition {
        factors,
        rank: pair.rank(),
        twist: pair.twist,
        normalized: true,
        notes,
    })
}

/// Direct sum of the factors, each placed back at its recorded summands.
pub fn reassemble(dec: &Decomposition) -> HiggsPair {
    let mut degrees = vec![0; dec.rank];
    let mut beta = Support::EMPTY;
    let mut gamma = Support::EMPTY;
    for f in &dec.factors {
        for (pos, &i) in f.indices.iter().enumerate() {
            degrees[i] = f.embedded_pair.degrees()[pos];
        }
        let (b, g) = pattern_parts(&f.embedded_pair.pattern);
        for (x, y) in b.entries() {
            beta.insert(f.indices[x], f.indices[y]);
        }
        for (x, y) in g.entries() {
            gamma.insert(f.indices[x], f.indices[y]);
        }
    }
    let mut out = HiggsPair::new(Group::Sp2nR, degrees, HiggsPattern::SymPair { beta, gamma });
    out.twist = dec.twist;
    out
}

/// Every summand lies in exactly one factor.
pub fn is_partition(dec: &Decomposition) -> bool {
    let mut seen = Subset::default();
    for f in &dec.factors {
        for &i in &f.indices {
            if i >= dec.rank || seen.contains(i) {
                return false;
            }
            seen = seen.union(Subset::from_indices(&[i]));
        }
    }
    seen == Subset::full(dec.rank)
}

/// Re-runs the stability check belonging to each factor's label.
pub fn factor_is_stable(engine: &RayEngine, factor: &Factor, alpha: Rat) -> Result<bool> {
    let pair = &factor.embedded_pair;
    Ok(match factor.label {
        FactorLabel::Un(_) => pair.pattern.is_zero() && slope_check(pair.degrees(), true),
        FactorLabel::Upq(p, _) => upq_stable(engine, pair, p, alpha)?,
        FactorLabel::SpR(_) => verdict_simplified_resolved(pair, alpha).status == Status::Stable,
    })
}
