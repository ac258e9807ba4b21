//! Stability decisions: the general flag-and-weights procedure and the
//! simplified subbundle criteria for each group.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::bundle::{
    chain_weights, degree_coefficients, enumerate_flags, flag_degree_term, invariant_subbundles,
    is_invariant, pattern_in_n0_weights, validate_pair, CoordinateFlag, Group, HiggsPair,
    HiggsPattern, Invariants, Subset, WeightedFlag,
};
use crate::cones::{nonneg_on_rays, weight_cone, ConeSpec, NonnegOutcome, RayEngine, RaySet};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::scalar::{dot_int, int_vec, primitive_direction};
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Unstable,
    SemistableOnly,
    Polystable,
    Stable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Unstable => "unstable",
            Status::SemistableOnly => "semistable",
            Status::Polystable => "polystable",
            Status::Stable => "stable",
        }
    }

    pub fn is_semistable(self) -> bool {
        self >= Status::SemistableOnly
    }

    pub fn is_polystable(self) -> bool {
        self >= Status::Polystable
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// `d < 0` on an admissible weighted flag.
    Destabilizer,
    /// `d = 0` on a non-central admissible weighted flag.
    EqualityWitness,
    /// `d = 0` and the field sits at weight zero.
    SplittingWitness,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Destabilizer => "destabilizer",
            CertificateKind::EqualityWitness => "equality_witness",
            CertificateKind::SplittingWitness => "splitting_witness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub flag: CoordinateFlag,
    pub lambda: Vec<i64>,
    /// The degree functional at `lambda`.
    pub value: Rat,
}

/// Outcome of one stability clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub certificate: Option<Certificate>,
}

impl Check {
    fn pass() -> Check {
        Check {
            passed: true,
            certificate: None,
        }
    }

    fn fail(certificate: Certificate) -> Check {
        Check {
            passed: false,
            certificate: Some(certificate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
}

/// A stability parameter, either explicit or the slope of the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alpha {
    Value(Rat),
    Mu,
}

impl Alpha {
    pub fn resolve(self, pair: &HiggsPair) -> Rat {
        match self {
            Alpha::Value(a) => a,
            Alpha::Mu => pair.slope(),
        }
    }
}

impl From<Rat> for Alpha {
    fn from(a: Rat) -> Alpha {
        Alpha::Value(a)
    }
}

fn check_alpha(group: Group, alpha: Rat) -> Result<()> {
    if !alpha.is_zero() && !group.admits_alpha() {
        Err(Error::NonzeroAlphaUnsupported)
    } else {
        Ok(())
    }
}

fn is_central(lambda: &[i64]) -> bool {
    lambda.windows(2).all(|w| w[0] == w[1])
}

fn to_rows(vs: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| int_vec(v)).collect()
}

/// The flag-dependent data of a pair, independent of degrees and α.
#[derive(Debug, Clone)]
pub struct PreparedFlag {
    pub flag: CoordinateFlag,
    pub cone: ConeSpec,
    pub rays: Arc<RaySet>,
    /// Linear functionals (on step weights) of the supported entries; the
    /// field lies in `N⁰` exactly when all of them vanish.
    pub entry_functionals: Vec<Vec<i64>>,
}

/// Everything the general checker needs about a pattern. Shared by every
/// choice of degrees and α.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub group: Group,
    pub rank: usize,
    pub flags: Vec<PreparedFlag>,
}

fn entry_functionals(pattern: &HiggsPattern, flag: &CoordinateFlag, k: usize) -> Vec<Vec<i64>> {
    let m = flag.steps();
    let step = flag.step_of(k);
    let mut out = Vec::new();
    let mut push = |a: usize, sa: i64, b: usize, sb: i64| {
        let mut v = vec![0; m];
        v[a] += sa;
        v[b] += sb;
        if v.iter().any(|x| *x != 0) {
            out.push(v);
        }
    };
    match pattern {
        HiggsPattern::Endo(s) => {
            for (t, u) in s.entries() {
                push(step[t], 1, step[u], -1);
            }
        }
        HiggsPattern::SymPair { beta, gamma } => {
            for (i, j) in beta.entries().chain(gamma.entries()) {
                push(step[i], 1, step[j], 1);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn prepare(engine: &RayEngine, pair: &HiggsPair) -> Result<Prepared> {
    let k = pair.rank();
    let flags = enumerate_flags(pair, k)
        .into_iter()
        .map(|flag| {
            let cone = weight_cone(pair, &flag);
            let rays = engine.rays(&cone)?;
            let entry_functionals = entry_functionals(&pair.pattern, &flag, k);
            Ok(PreparedFlag {
                flag,
                cone,
                rays,
                entry_functionals,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        group: pair.group,
        rank: k,
        flags,
    })
}

impl Prepared {
    pub fn semistable(&self, degrees: &[i64], alpha: Rat) -> Check {
        for pf in &self.flags {
            let d = degree_coefficients(degrees, &pf.flag, alpha);
            if let NonnegOutcome::Violated { witness, value } = nonneg_on_rays(&d, &pf.rays) {
                return Check::fail(Certificate {
                    kind: CertificateKind::Destabilizer,
                    flag: pf.flag.clone(),
                    lambda: witness,
                    value,
                });
            }
        }
        Check::pass()
    }

    /// Semistable, and `d > 0` on every non-central admissible direction.
    pub fn stable(&self, degrees: &[i64], alpha: Rat) -> Check {
        self.stable_modulo(degrees, alpha, &[vec![1; self.rank]])
    }

    /// Like [`Prepared::stable`], with the exempt directions given
    /// explicitly as summand weight vectors. A step weight vector is exempt
    /// when its summand weights lie in their span.
    pub fn stable_modulo(&self, degrees: &[i64], alpha: Rat, exempt: &[Vec<i64>]) -> Check {
        let ss = self.semistable(degrees, alpha);
        if !ss.passed {
            return ss;
        }
        let exempt_rank = rank(&to_rows(exempt), self.rank);
        for pf in &self.flags {
            let d = degree_coefficients(degrees, &pf.flag, alpha);
            let step = pf.flag.step_of(self.rank);
            let is_exempt = |lambda: &Vec<i64>| {
                let mut rows = to_rows(exempt);
                rows.push(step.iter().map(|&j| Rat::from_integer(lambda[j])).collect());
                rank(&rows, self.rank) == exempt_rank
            };
            let mut failing: Vec<Vec<i64>> = pf
                .rays
                .lineality
                .iter()
                .filter(|v| !is_exempt(v))
                .cloned()
                .collect();
            failing.extend(
                pf.rays
                    .rays
                    .iter()
                    .filter(|r| dot_int(&d, r).is_zero() && !is_exempt(r))
                    .cloned(),
            );
            if let Some(lambda) = failing.into_iter().min() {
                return Check::fail(Certificate {
                    kind: CertificateKind::EqualityWitness,
                    value: dot_int(&d, &lambda),
                    flag: pf.flag.clone(),
                    lambda,
                });
            }
        }
        Check::pass()
    }

    /// For every flag whose zero face `{d = 0}` contains a strictly
    /// increasing weight vector, the field must sit at weight zero on the
    /// whole face (the tautological coordinate splitting).
    pub fn polystable_taut(&self, degrees: &[i64], alpha: Rat) -> Result<Check> {
        if !self.semistable(degrees, alpha).passed {
            return Err(Error::PreconditionUnstable);
        }
        let mut witness: Option<Certificate> = None;
        for pf in self.flags.iter().filter(|pf| pf.flag.steps() >= 2) {
            let m = pf.flag.steps();
            let d = degree_coefficients(degrees, &pf.flag, alpha);
            let zero: Vec<&Vec<i64>> = pf
                .rays
                .rays
                .iter()
                .filter(|r| dot_int(&d, r).is_zero())
                .collect();
            let lin = &pf.rays.lineality;
            let increasing = (0..m - 1).all(|i| {
                zero.iter().any(|z| z[i + 1] > z[i]) || lin.iter().any(|v| v[i + 1] != v[i])
            });
            if !increasing {
                continue;
            }
            let mut generic = vec![0i64; m];
            for z in &zero {
                for (g, x) in generic.iter_mut().zip(z.iter()) {
                    *g += x;
                }
            }
            let lambda = primitive_direction(&int_vec::<Rat>(&generic)).unwrap_or(generic);
            let on_face = |f: &Vec<i64>| {
                zero.iter().all(|z| dot(f, z) == 0) && lin.iter().all(|v| dot(f, v) == 0)
            };
            let cert = |kind| Certificate {
                kind,
                flag: pf.flag.clone(),
                lambda: lambda.clone(),
                value: Rat::zero(),
            };
            if !pf.entry_functionals.iter().all(on_face) {
                return Ok(Check::fail(cert(CertificateKind::EqualityWitness)));
            }
            if witness.is_none() {
                witness = Some(cert(CertificateKind::SplittingWitness));
            }
        }
        Ok(Check {
            passed: true,
            certificate: witness,
        })
    }

    pub fn verdict(&self, degrees: &[i64], alpha: Rat) -> Verdict {
        let ss = self.semistable(degrees, alpha);
        if !ss.passed {
            return Verdict {
                status: Status::Unstable,
                certificate: ss.certificate,
            };
        }
        let st = self.stable(degrees, alpha);
        if st.passed {
            return Verdict {
                status: Status::Stable,
                certificate: None,
            };
        }
        let poly = self
            .polystable_taut(degrees, alpha)
            .expect("semistability was just established");
        Verdict {
            status: if poly.passed {
                Status::Polystable
            } else {
                Status::SemistableOnly
            },
            certificate: poly.certificate.or(st.certificate),
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn checked(pair: &HiggsPair, alpha: Alpha) -> Result<Rat> {
    validate_pair(pair, false)?;
    let a = alpha.resolve(pair);
    check_alpha(pair.group, a)?;
    Ok(a)
}

pub fn semistable_general(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    Ok(prepare(&RayEngine::new(), pair)?.semistable(pair.degrees(), a))
}

pub fn stable_general(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    Ok(prepare(&RayEngine::new(), pair)?.stable(pair.degrees(), a))
}

pub fn polystable_general_taut(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    prepare(&RayEngine::new(), pair)?.polystable_taut(pair.degrees(), a)
}

pub fn verdict_general(engine: &RayEngine, pair: &HiggsPair, alpha: Alpha) -> Result<Verdict> {
    let a = checked(pair, alpha)?;
    Ok(prepare(engine, pair)?.verdict(pair.degrees(), a))
}

/// A subbundle or chain quantified over by a simplified criterion, with the
/// value of the degree functional at its `{−1, 0, 1}` weights.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Witness {
    flag: CoordinateFlag,
    lambda: Vec<i64>,
    value: Rat,
    /// Not a central direction.
    proper: bool,
    /// The candidate splitting for the polystable clause is valid.
    splits: bool,
}

impl Witness {
    fn certificate(&self, kind: CertificateKind) -> Certificate {
        Certificate {
            kind,
            flag: self.flag.clone(),
            lambda: self.lambda.clone(),
            value: self.value,
        }
    }
}

fn flag_from_parts(parts: &[(Subset, i64)]) -> (CoordinateFlag, Vec<i64>) {
    let kept: Vec<&(Subset, i64)> = parts.iter().filter(|(s, _)| !s.is_empty()).collect();
    (
        CoordinateFlag::new(kept.iter().map(|(s, _)| *s).collect()),
        kept.iter().map(|(_, w)| *w).collect(),
    )
}

fn simplified_witnesses(pair: &HiggsPair, alpha: Rat) -> Vec<Witness> {
    let k = pair.rank();
    let degrees = pair.degrees();
    let all = Subset::full(k);
    let mut out = Vec::new();
    match (invariant_subbundles(pair), pair.pattern) {
        (Invariants::Subsets(subsets), HiggsPattern::Endo(support)) => {
            for s in subsets {
                let deg = s.degree(degrees);
                let complement = s.complement(k);
                let (flag, lambda) = match pair.pairing() {
                    Some(sigma) => {
                        let image = s.image(sigma);
                        flag_from_parts(&[(s, -1), (all.minus(s.union(image)), 0), (image, 1)])
                    }
                    None => {
                        if complement.is_empty() {
                            (CoordinateFlag::trivial(k), vec![0])
                        } else {
                            let g = gcd(complement.len() as i64, s.len() as i64);
                            flag_from_parts(&[
                                (s, -(complement.len() as i64) / g),
                                (complement, s.len() as i64 / g),
                            ])
                        }
                    }
                };
                let value = crate::scalar::dot_int(&degree_coefficients(degrees, &flag, alpha), &lambda);
                debug_assert_eq!(value.is_negative(), deg > 0);
                out.push(Witness {
                    proper: s != all,
                    splits: is_invariant(support, complement),
                    flag,
                    lambda,
                    value,
                });
            }
        }
        (Invariants::Chains(chains), pattern) => {
            for (s1, s2) in chains {
                let (flag, lambda) = flag_from_parts(&[(s1, -1), (s2.minus(s1), 0), (all.minus(s2), 1)]);
                let value = crate::scalar::dot_int(&degree_coefficients(degrees, &flag, alpha), &lambda);
                let weights = int_vec::<Rat>(&chain_weights(k, s1, s2));
                out.push(Witness {
                    proper: !is_central(&lambda),
                    splits: pattern_in_n0_weights(&pattern, &weights),
                    flag,
                    lambda,
                    value,
                });
            }
        }
        _ => unreachable!("invariant kind follows the pattern kind"),
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

fn first_by_flag<'a>(ws: impl Iterator<Item = &'a Witness>) -> Option<&'a Witness> {
    ws.min_by(|a, b| {
        (a.flag.piece_indices(), &a.lambda).cmp(&(b.flag.piece_indices(), &b.lambda))
    })
}

fn simplified_semistable_from(ws: &[Witness]) -> Check {
    match first_by_flag(ws.iter().filter(|w| w.value.is_negative())) {
        Some(w) => Check::fail(w.certificate(CertificateKind::Destabilizer)),
        None => Check::pass(),
    }
}

fn simplified_stable_from(ws: &[Witness]) -> Check {
    let ss = simplified_semistable_from(ws);
    if !ss.passed {
        return ss;
    }
    match first_by_flag(ws.iter().filter(|w| w.proper && w.value.is_zero())) {
        Some(w) => Check::fail(w.certificate(CertificateKind::EqualityWitness)),
        None => Check::pass(),
    }
}

fn simplified_polystable_from(pair: &HiggsPair, alpha: Rat, ws: &[Witness]) -> Result<Check> {
    if !simplified_semistable_from(ws).passed {
        return Err(Error::PreconditionUnstable);
    }
    let zero_proper: Vec<&Witness> = ws.iter().filter(|w| w.proper && w.value.is_zero()).collect();
    if let Some(w) = first_by_flag(zero_proper.iter().copied().filter(|w| !w.splits)) {
        return Ok(Check::fail(w.certificate(CertificateKind::EqualityWitness)));
    }
    if let (Some(first), HiggsPattern::SymPair { beta, gamma }) = (first_by_flag(zero_proper.iter().copied()), pair.pattern) {
        // A zero central direction must also carry the field at weight zero.
        let balanced = Rat::from_integer(pair.bundle.total_degree()) == alpha * Rat::from_integer(pair.rank() as i64);
        if balanced && (beta.is_empty() != gamma.is_empty()) {
            return Ok(Check::fail(first.certificate(CertificateKind::EqualityWitness)));
        }
    }
    Ok(Check {
        passed: true,
        certificate: first_by_flag(zero_proper.into_iter()).map(|w| w.certificate(CertificateKind::SplittingWitness)),
    })
}

pub fn semistable_simplified(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    Ok(simplified_semistable_from(&simplified_witnesses(pair, a)))
}

pub fn stable_simplified(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    Ok(simplified_stable_from(&simplified_witnesses(pair, a)))
}

pub fn polystable_simplified(pair: &HiggsPair, alpha: Alpha) -> Result<Check> {
    let a = checked(pair, alpha)?;
    simplified_polystable_from(pair, a, &simplified_witnesses(pair, a))
}

pub fn verdict_simplified(pair: &HiggsPair, alpha: Alpha) -> Result<Verdict> {
    let a = checked(pair, alpha)?;
    Ok(verdict_simplified_resolved(pair, a))
}

/// As [`verdict_simplified`] for an already validated pair and resolved α.
pub fn verdict_simplified_resolved(pair: &HiggsPair, alpha: Rat) -> Verdict {
    let ws = simplified_witnesses(pair, alpha);
    let ss = simplified_semistable_from(&ws);
    if !ss.passed {
        return Verdict {
            status: Status::Unstable,
            certificate: ss.certificate,
        };
    }
    let st = simplified_stable_from(&ws);
    if st.passed {
        return Verdict {
            status: Status::Stable,
            certificate: None,
        };
    }
    let poly = simplified_polystable_from(pair, alpha, &ws).expect("semistable");
    Verdict {
        status: if poly.passed {
            Status::Polystable
        } else {
            Status::SemistableOnly
        },
        certificate: poly.certificate,
    }
}

/// Shape of a Sp(2n,ℝ) chain `S₁ ⊆ S₂` with `a = |S₁|`, `a + b = |S₂|`.
/// Every row except `Generic` has at least one non-strict inclusion in
/// `0 ⊆ S₁ ⊆ S₂ ⊆ V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegenerationRow {
    /// `0 = a < a+b = n`
    ZeroToAll,
    /// `0 = a = a+b < n`
    Zero,
    /// `0 < a = a+b = n`
    All,
    /// `0 < a < a+b = n`
    LowerToAll,
    /// `0 < a = a+b < n`
    Doubled,
    /// `0 = a < a+b < n`
    ZeroToMiddle,
    Generic,
}

impl DegenerationRow {
    pub const DEGENERATE: [DegenerationRow; 6] = [
        DegenerationRow::ZeroToAll,
        DegenerationRow::Zero,
        DegenerationRow::All,
        DegenerationRow::LowerToAll,
        DegenerationRow::Doubled,
        DegenerationRow::ZeroToMiddle,
    ];

    pub fn of(n: usize, s1: Subset, s2: Subset) -> DegenerationRow {
        let (a, ab) = (s1.len(), s2.len());
        match (a == 0, a == ab, ab == n) {
            (true, false, true) => DegenerationRow::ZeroToAll,
            (true, true, _) => DegenerationRow::Zero,
            (false, true, true) => DegenerationRow::All,
            (false, false, true) => DegenerationRow::LowerToAll,
            (false, true, false) => DegenerationRow::Doubled,
            (true, false, false) => DegenerationRow::ZeroToMiddle,
            (false, false, false) => DegenerationRow::Generic,
        }
    }
}

/// The chain condition and inequality evaluated the generic way: the field
/// lies in `N` for the weights `(−1, 0, 1)` and
/// `deg V − deg S₂ − deg S₁ ≥ α(n − n₂ − n₁)`.
pub fn chain_condition(pair: &HiggsPair, alpha: Rat, s1: Subset, s2: Subset) -> (bool, bool) {
    let k = pair.rank();
    let w = int_vec::<Rat>(&chain_weights(k, s1, s2));
    let admissible = crate::bundle::pattern_in_n_weights(&pair.pattern, &w);
    let d = pair.degrees();
    let lhs = Rat::from_integer(pair.bundle.total_degree() - s2.degree(d) - s1.degree(d));
    let rhs = alpha * Rat::from_integer(k as i64 - s2.len() as i64 - s1.len() as i64);
    (admissible, lhs >= rhs)
}

/// The closed forms of the degenerate rows, or `None` for a generic chain.
pub fn degeneration_table_entry(pair: &HiggsPair, alpha: Rat, s1: Subset, s2: Subset) -> Option<(bool, bool)> {
    let HiggsPattern::SymPair { beta, gamma } = pair.pattern else {
        return None;
    };
    let n = pair.rank();
    let d = pair.degrees();
    let r = |x: i64| Rat::from_integer(x);
    let deg_v = r(pair.bundle.total_degree());
    let an = alpha * r(n as i64);
    let (n1, n2) = (s1.len() as i64, s2.len() as i64);
    Some(match DegenerationRow::of(n, s1, s2) {
        DegenerationRow::ZeroToAll => (true, true),
        DegenerationRow::Zero => (beta.is_empty(), deg_v >= an),
        DegenerationRow::All => (gamma.is_empty(), deg_v <= an),
        DegenerationRow::LowerToAll => (
            gamma.entries().all(|(i, j)| !s1.contains(i) && !s1.contains(j)),
            r(s1.degree(d)) <= alpha * r(n1),
        ),
        DegenerationRow::Doubled => (
            beta.entries().all(|(i, j)| s1.contains(i) || s1.contains(j))
                && gamma.entries().all(|(i, j)| !s1.contains(i) || !s1.contains(j)),
            deg_v - r(2 * s1.degree(d)) >= alpha * r(n as i64 - 2 * n1),
        ),
        DegenerationRow::ZeroToMiddle => (
            beta.entries().all(|(i, j)| s2.contains(i) && s2.contains(j)),
            deg_v - r(s2.degree(d)) >= alpha * r(n as i64 - n2),
        ),
        DegenerationRow::Generic => return None,
    })
}

/// Checks `Σ μ_i d_i` against the filtration formula for per-summand
/// character weights constant on the steps of `flag`.
pub fn degree_consistency_check(pair: &HiggsPair, flag: &CoordinateFlag, weights: &[Rat]) -> Result<bool> {
    let k = pair.rank();
    if weights.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: weights.len(),
        });
    }
    flag.validate(k, None)?;
    let lambda: Vec<Rat> = flag.pieces.iter().map(|p| weights[p.indices()[0]]).collect();
    let wf = WeightedFlag::new(flag.clone(), lambda);
    if wf.summand_weights(k) != weights {
        return Err(Error::InvalidFlag("weights are not constant on the steps".into()));
    }
    let via_character = crate::roots::degree_via_character(weights, pair.degrees())?;
    let via_flag = flag_degree_term(pair, &wf, Rat::zero())?;
    Ok(via_character == via_flag)
}

/// Slope semistability of a split bundle, by brute force over coordinate
/// subbundles: `μ(S) ≤ μ(V)` (strict for stability) for every proper `S`.
pub fn slope_check(degrees: &[i64], strict: bool) -> bool {
    let k = degrees.len();
    let total = degrees.iter().sum::<i64>();
    Subset::all(k)
        .filter(|s| !s.is_empty() && *s != Subset::full(k))
        .all(|s| {
            // μ(S) ≤ μ(V)  ⟺  deg S · k ≤ total · |S|
            let lhs = s.degree(degrees) * k as i64;
            let rhs = total * s.len() as i64;
            if strict {
                lhs < rhs
            } else {
                lhs <= rhs
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> Alpha {
        Alpha::Value(Rat::zero())
    }

    fn status(pair: &HiggsPair, alpha: Alpha) -> (Status, Status) {
        let engine = RayEngine::new();
        (
            verdict_general(&engine, pair, alpha).unwrap().status,
            verdict_simplified(pair, alpha).unwrap().status,
        )
    }

    #[test]
    fn sp2nc_isotropic_invariant_destabilizes() {
        let pair = HiggsPair::endo(Group::Sp2nC, vec![1, -1], &[(0, 1)]);
        let check = semistable_general(&pair, zero()).unwrap();
        assert!(!check.passed);
        let cert = check.certificate.unwrap();
        assert_eq!(cert.kind, CertificateKind::Destabilizer);
        assert_eq!(cert.flag.piece_indices(), vec![vec![0], vec![1]]);
        assert_eq!(cert.lambda, vec![-1, 1]);
        assert_eq!(cert.value, Rat::from_integer(-2));
        assert!(!semistable_simplified(&pair, zero()).unwrap().passed);
    }

    #[test]
    fn sl_rank_two_stable() {
        let pair = HiggsPair::endo(Group::SLnC, vec![1, -1], &[(1, 0)]);
        assert_eq!(status(&pair, zero()), (Status::Stable, Status::Stable));
    }

    #[test]
    fn sl_phi_zero_equal_degrees_is_polystable() {
        let pair = HiggsPair::endo(Group::SLnC, vec![0, 0], &[]);
        assert_eq!(status(&pair, zero()), (Status::Polystable, Status::Polystable));
        assert!(!stable_general(&pair, zero()).unwrap().passed);
    }

    #[test]
    fn sp2nr_rank_one_with_both_fields_is_stable() {
        let pair = HiggsPair::sym_pair(vec![0], &[(0, 0)], &[(0, 0)]);
        assert_eq!(status(&pair, zero()), (Status::Stable, Status::Stable));
    }

    #[test]
    fn sp2nr_phi_zero_needs_alpha_mu() {
        let pair = HiggsPair::sym_pair(vec![1], &[], &[]);
        assert_eq!(status(&pair, zero()).0, Status::Unstable);
        assert_eq!(status(&pair, Alpha::Mu), (Status::Stable, Status::Stable));
    }

    #[test]
    fn gl_n_r_isotropic_invariant_destabilizes() {
        // ψ∘Q fixing each summand; {1} is isotropic, invariant and of degree 1.
        let pair = HiggsPair::endo(Group::GLnR, vec![1, -1], &[(0, 0), (1, 1)]);
        assert_eq!(status(&pair, zero()), (Status::Unstable, Status::Unstable));
    }

    #[test]
    fn upper_triangular_coupling_is_only_semistable() {
        let pair = HiggsPair::endo(Group::SLnC, vec![0, 0], &[(0, 1)]);
        assert_eq!(status(&pair, zero()), (Status::SemistableOnly, Status::SemistableOnly));
    }

    #[test]
    fn nonzero_alpha_rejected_outside_sp2nr() {
        let pair = HiggsPair::endo(Group::SLnC, vec![0, 0], &[]);
        assert!(matches!(
            semistable_general(&pair, Alpha::Value(Rat::from_integer(1))),
            Err(Error::NonzeroAlphaUnsupported)
        ));
    }

    #[test]
    fn degree_consistency_examples() {
        let pair = HiggsPair::endo(Group::SLnC, vec![1, -1], &[]);
        let flag = CoordinateFlag::new(vec![Subset::from_indices(&[0]), Subset::from_indices(&[1])]);
        assert!(degree_consistency_check(&pair, &flag, &int_vec::<Rat>(&[-1, 1])).unwrap());
        assert!(degree_consistency_check(&pair, &CoordinateFlag::trivial(2), &int_vec::<Rat>(&[3, 3])).unwrap());
        assert!(degree_consistency_check(&pair, &CoordinateFlag::trivial(2), &int_vec::<Rat>(&[3, 1])).is_err());
    }

    #[test]
    fn slope_oracle() {
        assert!(slope_check(&[1, 1], false));
        assert!(!slope_check(&[1, 1], true));
        assert!(slope_check(&[5], true));
        assert!(!slope_check(&[2, 0], false));
    }
}
