//! Dense exact linear algebra on row-major `Vec<Vec<T>>` matrices.

use crate::scalar::Scalar;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row).take(ncols) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column, in RREF-derived
/// canonical form (each basis vector has a 1 at its own free column and 0 at
/// every other free column).
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a · x = b`; `None` when `a` is singular.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let aug: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec<T: Scalar>(a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter().map(|row| crate::scalar::dot(row, x)).collect()
}

pub fn transpose<T: Scalar>(a: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
            .collect()
    }

    #[test]
    fn nullspace_of_difference_constraints_is_constants() {
        let a = q(&[&[1, -1, 0], &[0, 1, -1]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns, q(&[&[1, 1, 1]]));
    }

    #[test]
    fn solve_and_inverse_agree() {
        let a = q(&[&[2, 1], &[1, 3]]);
        let b = vec![Q::from_integer(3), Q::from_integer(5)];
        let x = solve(&a, &b).unwrap();
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_vec(&inv, &b), x);
        assert_eq!(mat_vec(&a, &x), b);
        assert!(solve(&q(&[&[1, 2], &[2, 4]]), &b).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(rank(&q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 0]]), 3), 2);
        assert_eq!(rank::<Q>(&[], 3), 0);
    }
}
