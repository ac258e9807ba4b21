//! The split model: bundles as sums of line bundles, Higgs fields as support
//! patterns, coordinate flags and the admissibility bookkeeping.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{int_vec, Scalar};
use crate::{Rat, MAX_SUMMANDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Sp2nC,
    SLnC,
    Sp2nR,
    GLnR,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Sp2nC, Group::SLnC, Group::Sp2nR, Group::GLnR];

    pub fn name(self) -> &'static str {
        match self {
            Group::Sp2nC => "Sp2nC",
            Group::SLnC => "SLnC",
            Group::Sp2nR => "Sp2nR",
            Group::GLnR => "GLnR",
        }
    }

    pub fn parse(s: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.name().eq_ignore_ascii_case(s))
    }

    /// Number of line summands of the model bundle for the group parameter `n`.
    pub fn summands(self, n: usize) -> usize {
        match self {
            Group::Sp2nC => 2 * n,
            _ => n,
        }
    }

    pub fn form(self) -> Form {
        match self {
            Group::Sp2nC => Form::Symplectic,
            Group::GLnR => Form::Orthogonal,
            Group::SLnC | Group::Sp2nR => Form::None,
        }
    }

    pub fn is_paired(self) -> bool {
        self.form() != Form::None
    }

    /// Only Sp(2n,ℝ) has a positive-dimensional center in its complexified
    /// maximal compact, so only there can α be nonzero.
    pub fn admits_alpha(self) -> bool {
        self == Group::Sp2nR
    }

    pub fn uses_endo_pattern(self) -> bool {
        self != Group::Sp2nR
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    None,
    Symplectic,
    Orthogonal,
}

/// A set of summand indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u16);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(k: usize) -> Subset {
        Subset(((1u32 << k) - 1) as u16)
    }

    pub fn from_indices(indices: &[usize]) -> Subset {
        Subset(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, k: usize) -> Subset {
        Subset::full(k).minus(self)
    }

    pub fn indices(self) -> Vec<usize> {
        (0..16).filter(|&i| self.contains(i)).collect()
    }

    pub fn image(self, sigma: &[usize]) -> Subset {
        Subset::from_indices(&self.indices().iter().map(|&i| sigma[i]).collect::<Vec<_>>())
    }

    /// All subsets of `{0, …, k−1}` in increasing bitmask order.
    pub fn all(k: usize) -> impl Iterator<Item = Subset> {
        (0..(1u32 << k)).map(|m| Subset(m as u16))
    }

    pub fn degree(self, degrees: &[i64]) -> i64 {
        self.indices().iter().map(|&i| degrees[i]).sum()
    }
}

/// Support of a `k × k` matrix pattern, entry `(t, s)` at bit `t·8 + s`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support(pub u64);

impl Support {
    pub const EMPTY: Support = Support(0);

    fn bit(t: usize, s: usize) -> u64 {
        1u64 << (t * MAX_SUMMANDS + s)
    }

    pub fn from_entries(entries: &[(usize, usize)]) -> Support {
        Support(entries.iter().fold(0, |acc, &(t, s)| acc | Support::bit(t, s)))
    }

    pub fn contains(self, t: usize, s: usize) -> bool {
        self.0 & Support::bit(t, s) != 0
    }

    pub fn insert(&mut self, t: usize, s: usize) {
        self.0 |= Support::bit(t, s);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn entries(self) -> impl Iterator<Item = (usize, usize)> {
        (0..64)
            .filter(move |b| self.0 >> b & 1 == 1)
            .map(|b| (b / MAX_SUMMANDS, b % MAX_SUMMANDS))
    }

    pub fn is_symmetric(self) -> bool {
        self.entries().all(|(i, j)| self.contains(j, i))
    }

    /// Closed under `(t, s) ↦ (σ(s), σ(t))`: the support shape of an element
    /// of 𝔰𝔭 or of `ψ∘Q` for symmetric `ψ`.
    pub fn is_sigma_closed(self, sigma: &[usize]) -> bool {
        self.entries().all(|(t, s)| self.contains(sigma[s], sigma[t]))
    }

    pub fn restrict(self, indices: &[usize]) -> Support {
        let mut out = Support::EMPTY;
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                if self.contains(i, j) {
                    out.insert(a, b);
                }
            }
        }
        out
    }

    pub fn max_index(self) -> Option<usize> {
        self.entries().map(|(t, s)| t.max(s)).max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HiggsPattern {
    /// Endomorphism-valued field; entry `(t, s)` maps summand `s` to summand `t`.
    Endo(Support),
    /// `β ∈ S²V ⊗ L` and `γ ∈ S²V* ⊗ L`.
    SymPair { beta: Support, gamma: Support },
}

impl HiggsPattern {
    pub fn is_zero(&self) -> bool {
        match self {
            HiggsPattern::Endo(s) => s.is_empty(),
            HiggsPattern::SymPair { beta, gamma } => beta.is_empty() && gamma.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitBundle {
    pub degrees: Vec<i64>,
    pub pairing: Option<Vec<usize>>,
    pub form: Form,
    pub det_trivial: bool,
}

impl SplitBundle {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }
}

/// `σ(i) = k − 1 − i`.
pub fn default_pairing(k: usize) -> Vec<usize> {
    (0..k).rev().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Twist {
    pub ell: i64,
    pub genus: u32,
    pub is_canonical: bool,
}

impl Twist {
    pub fn canonical(genus: u32) -> Twist {
        Twist {
            ell: 2 * i64::from(genus) - 2,
            genus,
            is_canonical: true,
        }
    }
}

impl Default for Twist {
    fn default() -> Self {
        Twist::canonical(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HiggsPair {
    pub group: Group,
    pub bundle: SplitBundle,
    pub twist: Twist,
    pub pattern: HiggsPattern,
}

impl HiggsPair {
    /// A pair with the group's default form, pairing and twist.
    pub fn new(group: Group, degrees: Vec<i64>, pattern: HiggsPattern) -> HiggsPair {
        let k = degrees.len();
        HiggsPair {
            group,
            bundle: SplitBundle {
                pairing: group.is_paired().then(|| default_pairing(k)),
                form: group.form(),
                det_trivial: group == Group::SLnC,
                degrees,
            },
            twist: Twist::default(),
            pattern,
        }
    }

    pub fn endo(group: Group, degrees: Vec<i64>, entries: &[(usize, usize)]) -> HiggsPair {
        HiggsPair::new(group, degrees, HiggsPattern::Endo(Support::from_entries(entries)))
    }

    pub fn sym_pair(degrees: Vec<i64>, beta: &[(usize, usize)], gamma: &[(usize, usize)]) -> HiggsPair {
        HiggsPair::new(
            Group::Sp2nR,
            degrees,
            HiggsPattern::SymPair {
                beta: Support::from_entries(beta),
                gamma: Support::from_entries(gamma),
            },
        )
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.bundle.degrees
    }

    pub fn pairing(&self) -> Option<&[usize]> {
        self.bundle.pairing.as_deref()
    }

    /// `deg V / rk V`.
    pub fn slope(&self) -> Rat {
        Rat::new(self.bundle.total_degree(), self.rank() as i64)
    }

    /// Applies the summand relabeling `i ↦ perm[i]` to degrees, pattern and
    /// pairing.
    pub fn permuted(&self, perm: &[usize]) -> HiggsPair {
        let k = self.rank();
        let mut degrees = vec![0; k];
        for i in 0..k {
            degrees[perm[i]] = self.bundle.degrees[i];
        }
        let map = |s: Support| {
            Support::from_entries(&s.entries().map(|(a, b)| (perm[a], perm[b])).collect::<Vec<_>>())
        };
        let pattern = match self.pattern {
            HiggsPattern::Endo(s) => HiggsPattern::Endo(map(s)),
            HiggsPattern::SymPair { beta, gamma } => HiggsPattern::SymPair {
                beta: map(beta),
                gamma: map(gamma),
            },
        };
        let pairing = self.bundle.pairing.as_ref().map(|sigma| {
            let mut out = vec![0; k];
            for i in 0..k {
                out[perm[i]] = perm[sigma[i]];
            }
            out
        });
        HiggsPair {
            bundle: SplitBundle {
                degrees,
                pairing,
                ..self.bundle.clone()
            },
            pattern,
            ..self.clone()
        }
    }
}

fn one_based(entry: (usize, usize)) -> String {
    format!("({},{})", entry.0 + 1, entry.1 + 1)
}

pub fn validate_pair(pair: &HiggsPair, strict_sections: bool) -> Result<HiggsPair> {
    let k = pair.rank();
    let group = pair.group;
    if k == 0 || k > MAX_SUMMANDS {
        return Err(Error::InvalidPair(format!(
            "number of summands must be between 1 and {MAX_SUMMANDS}, got {k}"
        )));
    }
    if pair.bundle.form != group.form() {
        return Err(Error::InvalidPair(format!(
            "{group} requires form {:?}",
            group.form()
        )));
    }
    if group.uses_endo_pattern() != matches!(pair.pattern, HiggsPattern::Endo(_)) {
        return Err(Error::InvalidPair(format!("wrong Higgs field kind for {group}")));
    }
    if group == Group::Sp2nC && !k.is_multiple_of(2) {
        return Err(Error::InvalidPair("Sp2nC needs an even number of summands".into()));
    }
    if pair.bundle.det_trivial != (group == Group::SLnC) {
        return Err(Error::InvalidPair(format!(
            "det_trivial must be {} for {group}",
            group == Group::SLnC
        )));
    }
    if pair.bundle.det_trivial && pair.bundle.total_degree() != 0 {
        return Err(Error::InvalidPair(format!(
            "determinant must be trivial, degrees sum to {}",
            pair.bundle.total_degree()
        )));
    }
    if pair.twist.is_canonical && pair.twist.ell != 2 * i64::from(pair.twist.genus) - 2 {
        return Err(Error::InvalidPair(format!(
            "canonical twist on genus {} has degree {}, got {}",
            pair.twist.genus,
            2 * i64::from(pair.twist.genus) - 2,
            pair.twist.ell
        )));
    }

    let degrees = pair.degrees();
    match (group.is_paired(), pair.pairing()) {
        (true, None) => return Err(Error::PairingViolation(format!("{group} needs a pairing"))),
        (false, Some(_)) => {
            return Err(Error::PairingViolation(format!("{group} takes no pairing")));
        }
        (true, Some(sigma)) => {
            if sigma.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    found: sigma.len(),
                });
            }
            for i in 0..k {
                let j = sigma[i];
                if j >= k || sigma[j] != i {
                    return Err(Error::PairingViolation("pairing is not an involution".into()));
                }
                if j == i && pair.bundle.form == Form::Symplectic {
                    return Err(Error::PairingViolation(format!(
                        "symplectic pairing fixes summand {}",
                        i + 1
                    )));
                }
                if degrees[j] != -degrees[i] {
                    return Err(Error::PairingViolation(format!(
                        "summands {} and {} are paired but have degrees {} and {}",
                        i + 1,
                        j + 1,
                        degrees[i],
                        degrees[j]
                    )));
                }
            }
        }
        (false, None) => {}
    }

    let supports: Vec<Support> = match pair.pattern {
        HiggsPattern::Endo(s) => vec![s],
        HiggsPattern::SymPair { beta, gamma } => vec![beta, gamma],
    };
    for s in &supports {
        if let Some(m) = s.max_index() {
            if m >= k {
                return Err(Error::IndexOutOfRange { index: m, len: k });
            }
        }
    }
    match pair.pattern {
        HiggsPattern::Endo(s) => {
            if let Some(sigma) = pair.pairing() {
                if let Some(e) = s.entries().find(|&(t, u)| !s.contains(sigma[u], sigma[t])) {
                    return Err(Error::SymmetryViolation(format!(
                        "entry {} present but {} missing",
                        one_based(e),
                        one_based((sigma[e.1], sigma[e.0]))
                    )));
                }
            }
        }
        HiggsPattern::SymPair { beta, gamma } => {
            for (name, s) in [("beta", beta), ("gamma", gamma)] {
                if let Some(e) = s.entries().find(|&(i, j)| !s.contains(j, i)) {
                    return Err(Error::SymmetryViolation(format!(
                        "{name} entry {} present but {} missing",
                        one_based(e),
                        one_based((e.1, e.0))
                    )));
                }
            }
        }
    }

    if strict_sections && pair.twist.genus == 0 {
        let ell = pair.twist.ell;
        let check = |kind: &str, e: (usize, usize), deg: i64| {
            if deg < 0 {
                Err(Error::SectionInfeasible(format!(
                    "{kind} entry {} lives in a line bundle of degree {deg}",
                    one_based(e)
                )))
            } else {
                Ok(())
            }
        };
        match pair.pattern {
            HiggsPattern::Endo(s) => {
                for (t, u) in s.entries() {
                    check("endo", (t, u), ell + degrees[t] - degrees[u])?;
                }
            }
            HiggsPattern::SymPair { beta, gamma } => {
                for (i, j) in beta.entries() {
                    check("beta", (i, j), ell + degrees[i] + degrees[j])?;
                }
                for (i, j) in gamma.entries() {
                    check("gamma", (i, j), ell - degrees[i] - degrees[j])?;
                }
            }
        }
    }
    Ok(pair.clone())
}

/// An ordered set partition `P₁, …, P_k` of the summands; the flag is the
/// chain `S_i = P₁ ∪ … ∪ P_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateFlag {
    pub pieces: Vec<Subset>,
}

impl CoordinateFlag {
    pub fn new(pieces: Vec<Subset>) -> CoordinateFlag {
        CoordinateFlag { pieces }
    }

    pub fn trivial(k: usize) -> CoordinateFlag {
        CoordinateFlag::new(vec![Subset::full(k)])
    }

    /// Builds a flag from its chain `S₁ ⊊ … ⊊ S_k`.
    pub fn from_chain(chain: &[Subset], k: usize) -> Result<CoordinateFlag> {
        let mut prev = Subset::EMPTY;
        let mut pieces = Vec::with_capacity(chain.len());
        for &s in chain {
            if !prev.is_subset_of(s) || prev == s {
                return Err(Error::InvalidFlag("chain is not strictly increasing".into()));
            }
            pieces.push(s.minus(prev));
            prev = s;
        }
        if prev != Subset::full(k) {
            return Err(Error::InvalidFlag("last member must be the whole bundle".into()));
        }
        Ok(CoordinateFlag::new(pieces))
    }

    pub fn steps(&self) -> usize {
        self.pieces.len()
    }

    /// `S_i` for `i` in `0..=steps`, with `S₀ = ∅`.
    pub fn member(&self, i: usize) -> Subset {
        self.pieces[..i].iter().fold(Subset::EMPTY, |acc, p| acc.union(*p))
    }

    pub fn chain(&self) -> Vec<Subset> {
        (1..=self.steps()).map(|i| self.member(i)).collect()
    }

    /// The step (0-based) each summand enters the flag at.
    pub fn step_of(&self, k: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; k];
        for (j, p) in self.pieces.iter().enumerate() {
            for i in p.indices() {
                out[i] = j;
            }
        }
        out
    }

    pub fn piece_indices(&self) -> Vec<Vec<usize>> {
        self.pieces.iter().map(|p| p.indices()).collect()
    }

    /// Pieces are disjoint, nonempty and cover the summands; with a pairing,
    /// `S_{k−i}` is the complement of `σ(S_i)`.
    pub fn validate(&self, k: usize, pairing: Option<&[usize]>) -> Result<()> {
        let mut seen = Subset::EMPTY;
        for p in &self.pieces {
            if p.is_empty() {
                return Err(Error::InvalidFlag("empty step".into()));
            }
            if !p.intersection(seen).is_empty() {
                return Err(Error::InvalidFlag("steps overlap".into()));
            }
            seen = seen.union(*p);
        }
        if seen != Subset::full(k) {
            return Err(Error::InvalidFlag("steps do not cover all summands".into()));
        }
        if let Some(sigma) = pairing {
            if !is_perpendicular(&self.pieces, sigma) {
                return Err(Error::InvalidFlag(
                    "flag is not perpendicular for the pairing".into(),
                ));
            }
        }
        Ok(())
    }
}

fn is_perpendicular(pieces: &[Subset], sigma: &[usize]) -> bool {
    let m = pieces.len();
    (0..m).all(|j| pieces[m - 1 - j] == pieces[j].image(sigma))
}

/// Every coordinate flag with at most `max_steps` steps (perpendicular ones
/// only when the pair has a pairing), in lexicographic order of their piece
/// index lists.
pub fn enumerate_flags(pair: &HiggsPair, max_steps: usize) -> Vec<CoordinateFlag> {
    flags_for(pair.rank(), pair.pairing(), max_steps)
}

pub fn flags_for(k: usize, pairing: Option<&[usize]>, max_steps: usize) -> Vec<CoordinateFlag> {
    fn rec(
        remaining: Subset,
        prefix: &mut Vec<Subset>,
        max_steps: usize,
        out: &mut Vec<Vec<Subset>>,
    ) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        if prefix.len() == max_steps {
            return;
        }
        // Nonempty subsets of `remaining`.
        let mut sub = remaining.0;
        while sub != 0 {
            prefix.push(Subset(sub));
            rec(remaining.minus(Subset(sub)), prefix, max_steps, out);
            prefix.pop();
            sub = (sub - 1) & remaining.0;
        }
    }
    let mut raw = Vec::new();
    if k > 0 {
        rec(Subset::full(k), &mut Vec::new(), max_steps, &mut raw);
    }
    let mut flags: Vec<(Vec<Vec<usize>>, CoordinateFlag)> = raw
        .into_iter()
        .filter(|pieces| pairing.is_none_or(|sigma| is_perpendicular(pieces, sigma)))
        .map(|pieces| {
            let f = CoordinateFlag::new(pieces);
            (f.piece_indices(), f)
        })
        .collect();
    flags.sort();
    flags.into_iter().map(|(_, f)| f).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFlag<T> {
    pub flag: CoordinateFlag,
    pub lambda: Vec<T>,
}

impl<T: Scalar> WeightedFlag<T> {
    pub fn new(flag: CoordinateFlag, lambda: Vec<T>) -> Self {
        Self { flag, lambda }
    }

    pub fn check_shape(&self, k: usize) -> Result<()> {
        if self.lambda.len() != self.flag.steps() {
            return Err(Error::LengthMismatch {
                expected: self.flag.steps(),
                found: self.lambda.len(),
            });
        }
        self.flag.validate(k, None)
    }

    /// `w(s) = λ_{step(s)}`.
    pub fn summand_weights(&self, k: usize) -> Vec<T> {
        self.flag
            .step_of(k)
            .into_iter()
            .map(|j| self.lambda[j].clone())
            .collect()
    }
}

/// Admissibility of the pattern for per-summand weights: the field lies in
/// `N(𝒱, λ)`.
pub fn pattern_in_n_weights<T: Scalar>(pattern: &HiggsPattern, w: &[T]) -> bool {
    match pattern {
        HiggsPattern::Endo(s) => s.entries().all(|(t, u)| w[t] <= w[u]),
        HiggsPattern::SymPair { beta, gamma } => {
            beta.entries()
                .all(|(i, j)| !(w[i].clone() + w[j].clone()).is_positive())
                && gamma
                    .entries()
                    .all(|(i, j)| !(w[i].clone() + w[j].clone()).is_negative())
        }
    }
}

/// Every supported entry sits at weight zero.
pub fn pattern_in_n0_weights<T: Scalar>(pattern: &HiggsPattern, w: &[T]) -> bool {
    match pattern {
        HiggsPattern::Endo(s) => s.entries().all(|(t, u)| w[t] == w[u]),
        HiggsPattern::SymPair { beta, gamma } => beta
            .entries()
            .chain(gamma.entries())
            .all(|(i, j)| (w[i].clone() + w[j].clone()).is_zero()),
    }
}

pub fn pattern_in_n<T: Scalar>(pair: &HiggsPair, wf: &WeightedFlag<T>) -> Result<bool> {
    wf.check_shape(pair.rank())?;
    Ok(pattern_in_n_weights(&pair.pattern, &wf.summand_weights(pair.rank())))
}

pub fn pattern_in_n0<T: Scalar>(pair: &HiggsPair, wf: &WeightedFlag<T>) -> Result<bool> {
    wf.check_shape(pair.rank())?;
    Ok(pattern_in_n0_weights(&pair.pattern, &wf.summand_weights(pair.rank())))
}

fn check_alpha(group: Group, alpha: &Rat) -> Result<()> {
    if !alpha.is_zero() && !group.admits_alpha() {
        Err(Error::NonzeroAlphaUnsupported)
    } else {
        Ok(())
    }
}

/// `λ_k(deg V − αn) + Σ_{j<k} (λ_j − λ_{j+1})(deg S_j − α|S_j|)`.
pub fn flag_degree_term(pair: &HiggsPair, wf: &WeightedFlag<Rat>, alpha: Rat) -> Result<Rat> {
    check_alpha(pair.group, &alpha)?;
    wf.check_shape(pair.rank())?;
    let k = wf.flag.steps();
    let corrected = |s: Subset| Rat::from_integer(s.degree(pair.degrees())) - alpha * Rat::from_integer(s.len() as i64);
    let mut total = wf.lambda[k - 1] * corrected(Subset::full(pair.rank()));
    for j in 0..k - 1 {
        total += (wf.lambda[j] - wf.lambda[j + 1]) * corrected(wf.flag.member(j + 1));
    }
    Ok(total)
}

/// Coefficients `c_j = deg P_j − α|P_j|` of the degree functional on a flag,
/// so that the degree term equals `Σ_j c_j λ_j`.
pub fn degree_coefficients(degrees: &[i64], flag: &CoordinateFlag, alpha: Rat) -> Vec<Rat> {
    flag.pieces
        .iter()
        .map(|p| Rat::from_integer(p.degree(degrees)) - alpha * Rat::from_integer(p.len() as i64))
        .collect()
}

/// Per-summand weights `−1` on `S₁`, `0` on `S₂ \ S₁`, `+1` outside `S₂`.
pub fn chain_weights(k: usize, s1: Subset, s2: Subset) -> Vec<i64> {
    (0..k)
        .map(|i| {
            if s1.contains(i) {
                -1
            } else if s2.contains(i) {
                0
            } else {
                1
            }
        })
        .collect()
}

/// Is `S` invariant under an endomorphism pattern?
pub fn is_invariant(support: Support, s: Subset) -> bool {
    support.entries().all(|(t, u)| !s.contains(u) || s.contains(t))
}

pub fn is_isotropic(s: Subset, sigma: &[usize]) -> bool {
    s.intersection(s.image(sigma)).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariants {
    Subsets(Vec<Subset>),
    Chains(Vec<(Subset, Subset)>),
}

/// The subsets (or, for Sp(2n,ℝ), chains `S₁ ⊆ S₂`) quantified over by the
/// simplified criteria.
pub fn invariant_subbundles(pair: &HiggsPair) -> Invariants {
    let k = pair.rank();
    match pair.pattern {
        HiggsPattern::Endo(support) => Invariants::Subsets(
            Subset::all(k)
                .filter(|s| !s.is_empty())
                .filter(|&s| pair.pairing().is_none_or(|sigma| is_isotropic(s, sigma)))
                .filter(|&s| is_invariant(support, s))
                .collect(),
        ),
        HiggsPattern::SymPair { .. } => {
            let mut out = Vec::new();
            for s2 in Subset::all(k) {
                for s1 in Subset::all(k).filter(|s1| s1.is_subset_of(s2)) {
                    if pattern_in_n_weights(&pair.pattern, &int_vec::<Rat>(&chain_weights(k, s1, s2))) {
                        out.push((s1, s2));
                    }
                }
            }
            Invariants::Chains(out)
        }
    }
}
