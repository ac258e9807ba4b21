//! Cones of admissible weights and their extremal rays.
//!
//! A cone is `{λ : ⟨h, λ⟩ ≤ 0 for every inequality h, ⟨v, λ⟩ = 0 for every
//! equality v}`. When it contains a line, rays are reported on a canonical
//! pointed section: the lineality space `L` is put in reduced row echelon
//! form and the coordinates at its pivot columns are set to zero. The cone is
//! then exactly `section + L`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use crate::bundle::{CoordinateFlag, Group, HiggsPair, HiggsPattern};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{self, Constraint, LpOutcome, Relation};
use crate::scalar::{dot_int, int_vec, primitive_direction};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeSpec {
    pub dim: usize,
    /// Normals `h` of constraints `⟨h, λ⟩ ≤ 0`.
    pub ineqs: Vec<Vec<i64>>,
    /// Normals `v` of constraints `⟨v, λ⟩ = 0`.
    pub eqs: Vec<Vec<i64>>,
}

fn primitive_int(v: &[i64]) -> Option<Vec<i64>> {
    primitive_direction(&int_vec::<Rat>(v))
}

/// Scales to primitive form with a positive leading entry.
fn normalize_eq(v: &[i64]) -> Option<Vec<i64>> {
    let p = primitive_int(v)?;
    let lead = p.iter().find(|x| **x != 0).copied().unwrap_or(1);
    Some(if lead < 0 { p.iter().map(|x| -x).collect() } else { p })
}

impl ConeSpec {
    /// Builds a cone with primitive, deduplicated and sorted normals. Zero
    /// normals are dropped.
    pub fn new(dim: usize, ineqs: Vec<Vec<i64>>, eqs: Vec<Vec<i64>>) -> ConeSpec {
        let mut ineqs: Vec<Vec<i64>> = ineqs.iter().filter_map(|v| primitive_int(v)).collect();
        ineqs.sort();
        ineqs.dedup();
        let mut eqs: Vec<Vec<i64>> = eqs.iter().filter_map(|v| normalize_eq(v)).collect();
        eqs.sort();
        eqs.dedup();
        ConeSpec { dim, ineqs, eqs }
    }

    pub fn contains(&self, lambda: &[Rat]) -> bool {
        self.ineqs.iter().all(|h| !dot_int(lambda, h).is_positive())
            && self.eqs.iter().all(|v| dot_int(lambda, v).is_zero())
    }

    pub fn contains_int(&self, lambda: &[i64]) -> bool {
        self.contains(&int_vec::<Rat>(lambda))
    }

    fn all_normals(&self) -> Vec<Vec<Rat>> {
        self.ineqs
            .iter()
            .chain(&self.eqs)
            .map(|v| int_vec(v))
            .collect()
    }
}

/// The weight cone of a pair along a flag: ordering, group equalities and
/// the constraints placing the Higgs field in `N(𝒱, λ)`.
pub fn weight_cone(pair: &HiggsPair, flag: &CoordinateFlag) -> ConeSpec {
    weight_cone_for(pair.group, &pair.pattern, flag, pair.rank())
}

pub fn weight_cone_for(group: Group, pattern: &HiggsPattern, flag: &CoordinateFlag, k: usize) -> ConeSpec {
    let m = flag.steps();
    let e = |i: usize| -> Vec<i64> {
        let mut v = vec![0; m];
        v[i] = 1;
        v
    };
    let plus = |a: &[i64], b: &[i64], sb: i64| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + sb * y).collect() };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for i in 0..m.saturating_sub(1) {
        ineqs.push(plus(&e(i), &e(i + 1), -1));
    }
    match group {
        Group::Sp2nC | Group::GLnR => {
            for i in 0..m.div_ceil(2) {
                eqs.push(plus(&e(i), &e(m - 1 - i), 1));
            }
        }
        Group::SLnC => eqs.push(flag.pieces.iter().map(|p| p.len() as i64).collect()),
        Group::Sp2nR => {}
    }
    let step = flag.step_of(k);
    match pattern {
        HiggsPattern::Endo(support) => {
            for (t, s) in support.entries() {
                let (b, a) = (step[t], step[s]);
                if b > a {
                    ineqs.push(plus(&e(b), &e(a), -1));
                }
            }
        }
        HiggsPattern::SymPair { beta, gamma } => {
            for (i, j) in beta.entries() {
                ineqs.push(plus(&e(step[i]), &e(step[j]), 1));
            }
            for (i, j) in gamma.entries() {
                ineqs.push(plus(&e(step[i]), &e(step[j]), 1).iter().map(|x| -x).collect());
            }
        }
    }
    ConeSpec::new(m, ineqs, eqs)
}

/// Lineality space plus the extremal rays of the canonical pointed section.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RaySet {
    pub lineality: Vec<Vec<i64>>,
    pub rays: Vec<Vec<i64>>,
}

fn primitive_rows(rows: &[Vec<Rat>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|v| primitive_direction(v).expect("basis vectors are nonzero and small"))
        .collect()
}

fn lineality_of(normals: &[Vec<Rat>], dim: usize) -> Vec<Vec<i64>> {
    primitive_rows(&linalg::nullspace(normals, dim))
}

/// Basis of the largest linear subspace inside the cone.
pub fn lineality(cone: &ConeSpec) -> Vec<Vec<i64>> {
    lineality_of(&cone.all_normals(), cone.dim)
}

/// Coordinates fixed to zero by the canonical section.
fn section_coords(lineality: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let rows: Vec<Vec<Rat>> = lineality.iter().map(|v| int_vec(v)).collect();
    linalg::rref(&rows, dim).1
}

fn sort_dedup(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v.dedup();
    v
}

enum EqKind {
    Special,
    Transversal,
}

fn is_special_ineq(h: &[i64]) -> bool {
    let nz: Vec<i64> = h.iter().copied().filter(|x| *x != 0).collect();
    match nz.as_slice() {
        [a] => a.abs() == 1,
        [a, b] => a.abs() == 1 && b.abs() == 1,
        _ => false,
    }
}

fn classify_eq(v: &[i64]) -> Option<EqKind> {
    let nz: Vec<i64> = v.iter().copied().filter(|x| *x != 0).collect();
    if nz.len() <= 2 && nz.iter().all(|x| *x == 1) {
        Some(EqKind::Special)
    } else if nz.iter().all(|x| *x > 0) {
        Some(EqKind::Transversal)
    } else {
        None
    }
}

/// Extremal rays by the `{−1, 0, 1}` property: every extremal ray of a cone cut
/// out by normals of the form `e_a − e_b` and `±(e_a + e_b)` has a
/// representative with coordinates in `{−1, 0, 1}`. A rank-weighted equality
/// transversal to the lineality is handled by projecting along it.
pub fn extremal_rays_special(cone: &ConeSpec) -> Result<Vec<Vec<i64>>> {
    Ok(special_ray_set(cone)?.rays)
}

pub fn special_ray_set(cone: &ConeSpec) -> Result<RaySet> {
    let k = cone.dim;
    if let Some(h) = cone.ineqs.iter().find(|h| !is_special_ineq(h)) {
        return Err(Error::MalformedNormal(h.clone()));
    }
    let mut special_eqs = Vec::new();
    let mut transversal = Vec::new();
    for v in &cone.eqs {
        match classify_eq(v) {
            Some(EqKind::Special) => special_eqs.push(v.clone()),
            Some(EqKind::Transversal) => transversal.push(v.clone()),
            None => return Err(Error::MalformedNormal(v.clone())),
        }
    }

    let special_normals: Vec<Vec<Rat>> = cone
        .ineqs
        .iter()
        .chain(&special_eqs)
        .map(|v| int_vec(v))
        .collect();
    let lin_s = lineality_of(&special_normals, k);
    let pivots = section_coords(&lin_s, k);

    // Members of the pointed section with coordinates in {−1, 0, 1}.
    let mut members: Vec<Vec<i64>> = Vec::new();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..k)
            .map(|_| {
                let x = (c % 3) as i64 - 1;
                c /= 3;
                x
            })
            .collect();
        if v.iter().all(|x| *x == 0) || pivots.iter().any(|&p| v[p] != 0) {
            continue;
        }
        let ok = cone.ineqs.iter().all(|h| dot(h, &v) <= 0)
            && special_eqs.iter().all(|e| dot(e, &v) == 0);
        if ok {
            members.push(v);
        }
    }
    let as_rat: Vec<Vec<Rat>> = members.iter().map(|v| int_vec(v)).collect();
    let mut rays: Vec<Vec<i64>> = (0..members.len())
        .filter(|&i| {
            let others: Vec<Vec<Rat>> = as_rat
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            !lp::feasible_nonneg_combination(&as_rat[i], &others)
        })
        .map(|i| members[i].clone())
        .collect();

    let mut lineality = lin_s;
    if !transversal.is_empty() {
        // π(p) = p − L (E L)⁻¹ E p maps the section onto the full cone.
        let l = lineality.len();
        if l != transversal.len() {
            return Err(Error::MalformedNormal(transversal[0].clone()));
        }
        let e_mat: Vec<Vec<Rat>> = transversal.iter().map(|v| int_vec(v)).collect();
        let l_cols: Vec<Vec<Rat>> = lineality.iter().map(|v| int_vec(v)).collect();
        let el: Vec<Vec<Rat>> = e_mat
            .iter()
            .map(|row| l_cols.iter().map(|c| crate::scalar::dot(row, c)).collect())
            .collect();
        let inv = linalg::inverse(&el).ok_or_else(|| Error::MalformedNormal(transversal[0].clone()))?;
        rays = rays
            .iter()
            .map(|p| {
                let p: Vec<Rat> = int_vec(p);
                let coeffs = linalg::mat_vec(&inv, &linalg::mat_vec(&e_mat, &p));
                let projected: Vec<Rat> = (0..k)
                    .map(|x| {
                        p[x] - l_cols
                            .iter()
                            .zip(&coeffs)
                            .fold(Rat::zero(), |acc, (c, a)| acc + *a * c[x])
                    })
                    .collect();
                primitive_direction(&projected).expect("projection of a ray is nonzero")
            })
            .collect();
        lineality = Vec::new();
    }
    Ok(RaySet {
        lineality,
        rays: sort_dedup(rays),
    })
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest cone dimension the double-description oracle accepts.
pub const ORACLE_MAX_DIM: usize = 8;

/// Extremal rays by an independent double-description computation.
pub fn brute_rays_oracle(cone: &ConeSpec) -> Result<Vec<Vec<i64>>> {
    Ok(brute_ray_set(cone)?.rays)
}

pub fn brute_ray_set(cone: &ConeSpec) -> Result<RaySet> {
    let k = cone.dim;
    if k > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge(k));
    }
    let lin = lineality(cone);
    let pivots = section_coords(&lin, k);

    // Parametrize {eqs = 0, λ_pivot = 0} as λ = B y.
    let mut eq_rows: Vec<Vec<Rat>> = cone.eqs.iter().map(|v| int_vec(v)).collect();
    for &p in &pivots {
        let mut row = vec![Rat::zero(); k];
        row[p] = Rat::from_integer(1);
        eq_rows.push(row);
    }
    let basis = linalg::nullspace(&eq_rows, k);
    let p = basis.len();
    if p == 0 {
        return Ok(RaySet { lineality: lin, rays: vec![] });
    }
    let rows: Vec<Vec<Rat>> = cone
        .ineqs
        .iter()
        .map(|h| {
            let h: Vec<Rat> = int_vec(h);
            basis.iter().map(|b| crate::scalar::dot(&h, b)).collect::<Vec<Rat>>()
        })
        .filter(|r: &Vec<Rat>| r.iter().any(|x| !x.is_zero()))
        .collect();

    // Initial simplicial cone from p independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<Rat>> = chosen.iter().map(|&j| rows[j].clone()).collect();
        trial.push(r.clone());
        if linalg::rank(&trial, p) == trial.len() {
            chosen.push(i);
            if chosen.len() == p {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), p, "canonical section of a cone is pointed");
    let a0: Vec<Vec<Rat>> = chosen.iter().map(|&j| rows[j].clone()).collect();
    let inv = linalg::inverse(&a0).expect("chosen rows are independent");
    let mut rays: Vec<Vec<Rat>> = (0..p)
        .map(|c| (0..p).map(|r| -inv[r][c]).collect())
        .collect();
    let mut processed: Vec<Vec<Rat>> = a0;

    for (i, a) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| crate::scalar::dot(a, r)).collect();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_positive() {
                next.push(r.clone());
            }
        }
        if p >= 2 {
            for (ip, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
                for (ineg, vn) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                    let tight: Vec<Vec<Rat>> = processed
                        .iter()
                        .filter(|row| {
                            crate::scalar::dot(row, &rays[ip]).is_zero()
                                && crate::scalar::dot(row, &rays[ineg]).is_zero()
                        })
                        .cloned()
                        .collect();
                    if linalg::rank(&tight, p) != p - 2 {
                        continue;
                    }
                    let combo: Vec<Rat> = (0..p)
                        .map(|x| *vp * rays[ineg][x] - *vn * rays[ip][x])
                        .collect();
                    if combo.iter().any(|x| !x.is_zero()) {
                        next.push(combo);
                    }
                }
            }
        }
        rays = next;
        processed.push(a.clone());
    }

    let lifted: Vec<Vec<i64>> = rays
        .iter()
        .map(|y| {
            let lam: Vec<Rat> = (0..k)
                .map(|x| basis.iter().zip(y).fold(Rat::zero(), |acc, (b, c)| acc + *c * b[x]))
                .collect();
            primitive_direction(&lam).expect("rays are nonzero")
        })
        .collect();
    Ok(RaySet {
        lineality: lin,
        rays: sort_dedup(lifted),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonnegOutcome {
    Ok,
    Violated { witness: Vec<i64>, value: Rat },
}

/// `⟨d, ·⟩ ≥ 0` on the cone described by `rays`: zero on the lineality and
/// nonnegative on every extremal ray. The witness is the lexicographically
/// least violating ray or sign-adjusted lineality vector.
pub fn nonneg_on_rays(d: &[Rat], rays: &RaySet) -> NonnegOutcome {
    let mut candidates: Vec<(Vec<i64>, Rat)> = Vec::new();
    for v in &rays.lineality {
        let val = dot_int(d, v);
        if val.is_positive() {
            candidates.push((v.iter().map(|x| -x).collect(), -val));
        } else if val.is_negative() {
            candidates.push((v.clone(), val));
        }
    }
    for r in &rays.rays {
        let val = dot_int(d, r);
        if val.is_negative() {
            candidates.push((r.clone(), val));
        }
    }
    match candidates.into_iter().min_by(|a, b| a.0.cmp(&b.0)) {
        None => NonnegOutcome::Ok,
        Some((witness, value)) => NonnegOutcome::Violated { witness, value },
    }
}

pub fn nonneg_on_cone(d: &[Rat], cone: &ConeSpec) -> Result<NonnegOutcome> {
    if d.len() != cone.dim {
        return Err(Error::LengthMismatch {
            expected: cone.dim,
            found: d.len(),
        });
    }
    Ok(nonneg_on_rays(d, &special_ray_set(cone)?))
}

/// Minimum of `⟨d, λ⟩` over the cone intersected with the box `[−1, 1]^dim`.
/// An independent LP oracle for [`nonneg_on_cone`].
pub fn lp_min_on_box(d: &[Rat], cone: &ConeSpec) -> Rat {
    let k = cone.dim;
    let one = Rat::from_integer(1);
    let mut cons: Vec<Constraint<Rat>> = Vec::new();
    for h in &cone.ineqs {
        cons.push(Constraint::new(int_vec(h), Relation::Le, Rat::zero()));
    }
    for v in &cone.eqs {
        cons.push(Constraint::new(int_vec(v), Relation::Eq, Rat::zero()));
    }
    for i in 0..k {
        let mut row = vec![Rat::zero(); k];
        row[i] = one;
        cons.push(Constraint::new(row.clone(), Relation::Le, one));
        cons.push(Constraint::new(row, Relation::Ge, -one));
    }
    match lp::minimize_free(d, &cons) {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("a bounded feasible LP returned {other:?}"),
    }
}

/// Memoizes ray sets by cone. Shared across threads.
#[derive(Debug, Default)]
pub struct RayEngine {
    cache: RwLock<HashMap<ConeSpec, Arc<RaySet>>>,
}

impl RayEngine {
    pub fn new() -> RayEngine {
        RayEngine::default()
    }

    pub fn rays(&self, cone: &ConeSpec) -> Result<Arc<RaySet>> {
        if let Some(hit) = self.cache.read().expect("ray cache poisoned").get(cone) {
            return Ok(Arc::clone(hit));
        }
        let computed = Arc::new(special_ray_set(cone)?);
        let mut guard = self.cache.write().expect("ray cache poisoned");
        Ok(Arc::clone(guard.entry(cone.clone()).or_insert(computed)))
    }

    /// Every cone seen so far, sorted.
    pub fn cones(&self) -> Vec<ConeSpec> {
        let mut out: Vec<ConeSpec> = self
            .cache
            .read()
            .expect("ray cache poisoned")
            .keys()
            .cloned()
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("ray cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
