//! Exact two-phase simplex on a dense tableau with Bland's anti-cycling rule.
//!
//! Problems are stated over nonnegative variables. [`minimize_free`] handles
//! sign-unrestricted variables by the usual `x = x⁺ − x⁻` split.

use num_traits::Zero;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub rel: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn new(coeffs: Vec<T>, rel: Relation, rhs: T) -> Self {
        Self { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..=self.ncols {
                let sub = f.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - sub;
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex method for `min cost · x` over the columns in
    /// `allowed`. Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[T], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    r = r - cost[b].clone() * self.rows[i][j].clone();
                }
                r.is_negative()
            });
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rows[i][self.ncols].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn value(&self, cost: &[T]) -> T {
        self.basis
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &b)| {
                acc + cost[b].clone() * self.rows[i][self.ncols].clone()
            })
    }
}

/// Minimizes `objective · x` subject to `constraints` and `x ≥ 0`.
pub fn minimize<T: Scalar>(objective: &[T], constraints: &[Constraint<T>]) -> LpOutcome<T> {
    let n = objective.len();
    let m = constraints.len();
    // Normalize to nonnegative right-hand sides.
    let normalized: Vec<(Vec<T>, Relation, T)> = constraints
        .iter()
        .map(|c| {
            debug_assert_eq!(c.coeffs.len(), n);
            if c.rhs.is_negative() {
                let rel = match c.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|x| -x.clone()).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.rel, c.rhs.clone())
            }
        })
        .collect();

    let n_slack = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
    let n_art = normalized.iter().filter(|c| c.1 != Relation::Le).count();
    let ncols = n + n_slack + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, n + n_slack);
    for (coeffs, rel, rhs) in &normalized {
        let mut row = vec![T::zero(); ncols + 1];
        row[..n].clone_from_slice(coeffs);
        row[ncols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[s] = T::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -T::one();
                s += 1;
                row[a] = T::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = T::one();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    let art_start = n + n_slack;
    if n_art > 0 {
        let cost1: Vec<T> = (0..ncols)
            .map(|j| if j >= art_start { T::one() } else { T::zero() })
            .collect();
        let all = vec![true; ncols];
        tab.optimize(&cost1, &all);
        if !tab.value(&cost1).is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis where possible;
        // rows where that is impossible are redundant and get dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost2 = vec![T::zero(); ncols];
    cost2[..n].clone_from_slice(objective);
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art_start).collect();
    if !tab.optimize(&cost2, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![T::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rows[i][ncols].clone();
        }
    }
    LpOutcome::Optimal {
        value: tab.value(&cost2),
        point,
    }
}

/// Minimizes over sign-unrestricted variables.
pub fn minimize_free<T: Scalar>(objective: &[T], constraints: &[Constraint<T>]) -> LpOutcome<T> {
    let split = |v: &[T]| -> Vec<T> {
        v.iter()
            .cloned()
            .chain(v.iter().map(|x| -x.clone()))
            .collect()
    };
    let cons: Vec<Constraint<T>> = constraints
        .iter()
        .map(|c| Constraint::new(split(&c.coeffs), c.rel, c.rhs.clone()))
        .collect();
    match minimize(&split(objective), &cons) {
        LpOutcome::Optimal { value, point } => {
            let n = objective.len();
            let point = (0..n)
                .map(|i| point[i].clone() - point[n + i].clone())
                .collect();
            LpOutcome::Optimal { value, point }
        }
        other => other,
    }
}

/// Decides whether `target` is a nonnegative combination of `generators`.
pub fn feasible_nonneg_combination<T: Scalar>(target: &[T], generators: &[Vec<T>]) -> bool {
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let cons: Vec<Constraint<T>> = (0..target.len())
        .map(|row| {
            Constraint::new(
                generators.iter().map(|g| g[row].clone()).collect(),
                Relation::Eq,
                target[row].clone(),
            )
        })
        .collect();
    !matches!(
        minimize(&vec![T::zero(); generators.len()], &cons),
        LpOutcome::Infeasible
    )
}
