//! Classical root systems in the standard `e`-basis, parabolic root sets,
//! antidominant characters and the Cartan element `s_χ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, int_vec, Scalar};
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::D => rank >= 2,
            _ => rank >= 1,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidRootSystem {
                family: family.letter(),
                rank,
            })
        }
    }

    /// Number of coordinates of the ambient `e`-basis.
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A root as an integer vector in the `e`-basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(pub Vec<i64>);

/// `χ = z + Σ_{δ ∈ A} n_δ λ_δ`, keyed by simple-root index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Character {
    pub simple_coeffs: BTreeMap<usize, Rat>,
    pub central_part: Vec<Rat>,
}

impl Character {
    pub fn is_antidominant(&self) -> bool {
        self.simple_coeffs.values().all(|c| !c.is_positive())
    }

    pub fn is_strictly_antidominant(&self) -> bool {
        self.simple_coeffs.values().all(Signed::is_negative)
    }
}

/// Diagonal element of the Cartan subalgebra in the `e`-basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanElement(pub Vec<Rat>);

fn unit(dim: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = c;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn simple_roots(spec: &RootSystemSpec) -> Vec<RootVector> {
    let m = spec.ambient_dim();
    let chain = match spec.family {
        Family::A => spec.rank,
        _ => spec.rank - 1,
    };
    let mut out: Vec<RootVector> = (0..chain)
        .map(|i| RootVector(add(&unit(m, i, 1), &unit(m, i + 1, -1))))
        .collect();
    let n = spec.rank;
    match spec.family {
        Family::A => {}
        Family::B => out.push(RootVector(unit(m, n - 1, 1))),
        Family::C => out.push(RootVector(unit(m, n - 1, 2))),
        Family::D => out.push(RootVector(add(&unit(m, n - 2, 1), &unit(m, n - 1, 1)))),
    }
    out
}

/// Every root, sorted lexicographically.
pub fn all_roots(spec: &RootSystemSpec) -> Vec<RootVector> {
    let m = spec.ambient_dim();
    let mut out = Vec::new();
    match spec.family {
        Family::A => {
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        out.push(add(&unit(m, i, 1), &unit(m, j, -1)));
                    }
                }
            }
        }
        family => {
            for i in 0..m {
                for j in (i + 1)..m {
                    for si in [-1, 1] {
                        for sj in [-1, 1] {
                            out.push(add(&unit(m, i, si), &unit(m, j, sj)));
                        }
                    }
                }
                match family {
                    Family::B => out.extend([unit(m, i, 1), unit(m, i, -1)]),
                    Family::C => out.extend([unit(m, i, 2), unit(m, i, -2)]),
                    _ => {}
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(RootVector).collect()
}

/// Coefficients of `target` in the given basis, assuming it lies in the span.
fn coords_in_basis(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let r = basis.len();
    let rows: Vec<Vec<Rat>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let (red, pivots) = linalg::rref(&rows, r + 1);
    if pivots.contains(&r) || pivots.len() != r {
        return None;
    }
    Some(red.iter().map(|row| row[r]).collect())
}

/// Expansion of a root in simple roots.
pub fn simple_root_coeffs(spec: &RootSystemSpec, root: &RootVector) -> Vec<i64> {
    let basis: Vec<Vec<Rat>> = simple_roots(spec).iter().map(|s| int_vec(&s.0)).collect();
    coords_in_basis(&basis, &int_vec(&root.0))
        .expect("roots lie in the span of the simple roots")
        .iter()
        .map(|c| c.to_integer())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicRootSets {
    /// `R_A`: roots whose coefficients on `A` are all nonnegative.
    pub parabolic: Vec<RootVector>,
    /// `R_A⁰`: roots whose coefficients on `A` all vanish.
    pub levi: Vec<RootVector>,
    /// `R_A \ R_A⁰`, the roots of the unipotent radical.
    pub unipotent: Vec<RootVector>,
}

pub fn parabolic_root_sets(spec: &RootSystemSpec, a: &[usize]) -> Result<ParabolicRootSets> {
    if let Some(&bad) = a.iter().find(|&&i| i >= spec.rank) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: spec.rank,
        });
    }
    let mut sets = ParabolicRootSets {
        parabolic: vec![],
        levi: vec![],
        unipotent: vec![],
    };
    for root in all_roots(spec) {
        let c = simple_root_coeffs(spec, &root);
        if a.iter().all(|&i| c[i] >= 0) {
            if a.iter().all(|&i| c[i] == 0) {
                sets.levi.push(root.clone());
            } else {
                sets.unipotent.push(root.clone());
            }
            sets.parabolic.push(root);
        }
    }
    Ok(sets)
}

/// Fundamental weights `λ_i` with `λ_i(α_j^∨) = δ_ij`, taken in the span of
/// the roots.
pub fn fundamental_weights(spec: &RootSystemSpec) -> Vec<Vec<Rat>> {
    let simple: Vec<Vec<Rat>> = simple_roots(spec).iter().map(|s| int_vec(&s.0)).collect();
    let coroots: Vec<Vec<Rat>> = simple
        .iter()
        .map(|a| {
            let scale = Rat::from_integer(2) / dot(a, a);
            a.iter().map(|x| *x * scale).collect()
        })
        .collect();
    let r = simple.len();
    // λ_i = Σ_k c_k α_k with Σ_k c_k (α_k · α_j^∨) = δ_ij.
    let m: Vec<Vec<Rat>> = (0..r)
        .map(|j| (0..r).map(|k| dot(&simple[k], &coroots[j])).collect())
        .collect();
    (0..r)
        .map(|i| {
            let rhs: Vec<Rat> = (0..r)
                .map(|j| Rat::from_integer(i64::from(i == j)))
                .collect();
            let c = linalg::solve(&m, &rhs).expect("Cartan matrix is invertible");
            (0..spec.ambient_dim())
                .map(|x| (0..r).fold(Rat::zero(), |acc, k| acc + c[k] * simple[k][x]))
                .collect()
        })
        .collect()
}

/// Weights of the fundamental (vector) representation.
pub fn rep_weights(spec: &RootSystemSpec) -> Vec<Vec<Rat>> {
    let m = spec.ambient_dim();
    let e = |i: usize, c: i64| -> Vec<Rat> { int_vec(&unit(m, i, c)) };
    match spec.family {
        Family::A => (0..m).map(|i| e(i, 1)).collect(),
        family => {
            let mut out: Vec<Vec<Rat>> = (0..m).map(|i| e(i, 1)).collect();
            if family == Family::B {
                out.push(vec![Rat::zero(); m]);
            }
            out.extend((0..m).rev().map(|i| e(i, -1)));
            out
        }
    }
}

/// Gram matrix of the trace form `⟨x, y⟩ = Tr ρ(x)ρ(y)` in the `e`-basis.
pub fn trace_form(spec: &RootSystemSpec) -> Vec<Vec<Rat>> {
    let m = spec.ambient_dim();
    let weights = rep_weights(spec);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| weights.iter().fold(Rat::zero(), |acc, w| acc + w[i] * w[j]))
                .collect()
        })
        .collect()
}

/// Evaluates `χ` on a Cartan element.
pub fn evaluate_character(spec: &RootSystemSpec, chi: &Character, x: &[Rat]) -> Result<Rat> {
    let m = spec.ambient_dim();
    let lambdas = fundamental_weights(spec);
    let mut value = Rat::zero();
    if !chi.central_part.is_empty() {
        if chi.central_part.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: chi.central_part.len(),
            });
        }
        value += dot(&chi.central_part, x);
    }
    for (&i, c) in &chi.simple_coeffs {
        let l = lambdas.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: spec.rank,
        })?;
        value += *c * dot(l, x);
    }
    Ok(value)
}

/// The unique `s ∈ 𝔷 ⊕ 𝔠_A` with `⟨s, u⟩ = χ(u)` for every `u ∈ 𝔷 ⊕ 𝔠_A`,
/// where `A` is the set of simple roots carrying a coefficient in `χ` and
/// `𝔠_A` is the part of the root span killed by the simple roots outside `A`.
pub fn s_of_character(spec: &RootSystemSpec, chi: &Character) -> Result<CartanElement> {
    let m = spec.ambient_dim();
    let simple: Vec<Vec<Rat>> = simple_roots(spec).iter().map(|s| int_vec(&s.0)).collect();
    for (&i, c) in &chi.simple_coeffs {
        if i >= spec.rank {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: spec.rank,
            });
        }
        if c.is_positive() {
            return Err(Error::NotAntidominant {
                index: i,
                coeff: crate::scalar::format_ratio(c),
            });
        }
    }
    // 𝔷: orthogonal complement of the root span; 𝔠_A: root span ∩ ker(Δ \ A).
    let center = linalg::nullspace(&simple, m);
    let outside: Vec<Vec<Rat>> = (0..spec.rank)
        .filter(|i| !chi.simple_coeffs.contains_key(i))
        .map(|i| simple[i].clone())
        .collect();
    let mut constraints = outside;
    constraints.extend(center.iter().cloned());
    let c_a = linalg::nullspace(&constraints, m);
    let mut basis = center;
    basis.extend(c_a);
    if basis.is_empty() {
        return Ok(CartanElement(vec![Rat::zero(); m]));
    }

    let g = trace_form(spec);
    let gb: Vec<Vec<Rat>> = basis.iter().map(|b| linalg::mat_vec(&g, b)).collect();
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|u| gb.iter().map(|v| dot(u, v)).collect())
        .collect();
    let rhs: Vec<Rat> = basis
        .iter()
        .map(|u| evaluate_character(spec, chi, u))
        .collect::<Result<_>>()?;
    let coeffs = linalg::solve(&gram, &rhs).expect("trace form is nondegenerate");
    let s = (0..m)
        .map(|x| {
            basis
                .iter()
                .zip(&coeffs)
                .fold(Rat::zero(), |acc, (b, c)| acc + *c * b[x])
        })
        .collect();
    Ok(CartanElement(s))
}

/// `Σ μ_i d_i`: the degree of a split bundle reduced along a character whose
/// value on summand `i` is `μ_i`.
pub fn degree_via_character<T: Scalar>(summand_weights: &[T], degrees: &[i64]) -> Result<T> {
    if summand_weights.len() != degrees.len() {
        return Err(Error::LengthMismatch {
            expected: summand_weights.len(),
            found: degrees.len(),
        });
    }
    Ok(crate::scalar::dot_int(summand_weights, degrees))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, r: usize) -> RootSystemSpec {
        RootSystemSpec::new(f, r).unwrap()
    }

    #[test]
    fn simple_roots_match_standard_lists() {
        let a2: Vec<Vec<i64>> = simple_roots(&spec(Family::A, 2)).into_iter().map(|r| r.0).collect();
        assert_eq!(a2, vec![vec![1, -1, 0], vec![0, 1, -1]]);
        let c2: Vec<Vec<i64>> = simple_roots(&spec(Family::C, 2)).into_iter().map(|r| r.0).collect();
        assert_eq!(c2, vec![vec![1, -1], vec![0, 2]]);
        assert!(RootSystemSpec::new(Family::D, 1).is_err());
        assert!(RootSystemSpec::new(Family::A, 0).is_err());
    }

    #[test]
    fn parabolic_sets_for_a2() {
        let sets = parabolic_root_sets(&spec(Family::A, 2), &[0]).unwrap();
        let mut expect = vec![vec![1, -1, 0], vec![1, 0, -1], vec![0, 1, -1], vec![0, -1, 1]];
        expect.sort();
        let got: Vec<Vec<i64>> = sets.parabolic.iter().map(|r| r.0.clone()).collect();
        assert_eq!(got, expect);
        let levi: Vec<Vec<i64>> = sets.levi.iter().map(|r| r.0.clone()).collect();
        assert_eq!(levi, vec![vec![0, -1, 1], vec![0, 1, -1]]);
        assert!(parabolic_root_sets(&spec(Family::A, 2), &[2]).is_err());
    }

    #[test]
    fn s_chi_examples() {
        let chi = Character {
            simple_coeffs: BTreeMap::from([(0, Rat::from_integer(-1))]),
            central_part: vec![],
        };
        let s = s_of_character(&spec(Family::A, 1), &chi).unwrap();
        assert_eq!(s.0, vec![Rat::new(-1, 2), Rat::new(1, 2)]);
        let s = s_of_character(&spec(Family::C, 1), &chi).unwrap();
        assert_eq!(s.0, vec![Rat::new(-1, 2)]);
        let zero = s_of_character(&spec(Family::B, 3), &Character::default()).unwrap();
        assert!(zero.0.iter().all(Zero::is_zero));
        let bad = Character {
            simple_coeffs: BTreeMap::from([(0, Rat::from_integer(1))]),
            central_part: vec![],
        };
        assert!(matches!(
            s_of_character(&spec(Family::A, 1), &bad),
            Err(Error::NotAntidominant { .. })
        ));
    }

    #[test]
    fn rep_weights_examples() {
        let c2 = rep_weights(&spec(Family::C, 2));
        let as_int: Vec<Vec<i64>> = c2.iter().map(|w| w.iter().map(|x| x.to_integer()).collect()).collect();
        assert_eq!(as_int, vec![vec![1, 0], vec![0, 1], vec![0, -1], vec![-1, 0]]);
        assert_eq!(rep_weights(&spec(Family::B, 1)).len(), 3);
    }

    #[test]
    fn degree_via_character_examples() {
        let w = int_vec::<Rat>(&[-1, 1]);
        assert_eq!(degree_via_character(&w, &[1, -1]).unwrap(), Rat::from_integer(-2));
        let w = int_vec::<Rat>(&[-1, -1, 1, 1]);
        assert_eq!(degree_via_character(&w, &[2, 1, -1, -2]).unwrap(), Rat::from_integer(-6));
        assert!(degree_via_character(&w, &[1]).is_err());
    }
}
