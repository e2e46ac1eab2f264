//! Exact linear algebra over the integers and rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{primitive_int, Rational};

/// Reduced row echelon form over the rationals. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(rows: &[Vec<Rational>], dim: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let k = m[i][col].clone();
                for j in col..dim {
                    let delta = &k * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn to_rational_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

fn rational_to_primitive(row: &[Rational]) -> Vec<BigInt> {
    crate::arith::RationalVector::new(row.to_vec()).primitive()
}

/// Rank of an integer matrix (fraction-free elimination).
pub fn rank(rows: &[Vec<BigInt>], dim: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for col in 0..dim {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let a = pivot_row[col].clone();
            let b = row[col].clone();
            for j in col..dim {
                row[j] = &row[j] * &a - &pivot_row[j] * &b;
            }
            let reduced = primitive_int(std::mem::take(row));
            *row = reduced;
        }
        r += 1;
    }
    r
}

/// Canonical basis of the row space: the RREF rows, each scaled to a
/// primitive integer vector.
pub fn row_space_basis(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let (r, _) = rref(&to_rational_rows(rows), dim);
    r.iter().map(|row| rational_to_primitive(row)).collect()
}

/// Primitive integer basis of `{x : row · x = 0 for every row}`, in a
/// canonical order (one vector per free column, increasing).
pub fn nullspace(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(&to_rational_rows(rows), dim);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); dim];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(rational_to_primitive(&v));
    }
    basis
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`, scaled
/// to a primitive integer vector.
pub fn project_out(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    if basis.is_empty() {
        return primitive_int(v.to_vec());
    }
    // Solve G c = B v with G = B B^T, then v - B^T c.
    let k = basis.len();
    let dim = v.len();
    let dot = |a: &[BigInt], b: &[BigInt]| crate::arith::int_dot(a, b);
    let mut aug: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rational> = (0..k)
                .map(|j| Rational::from_integer(dot(&basis[i], &basis[j])))
                .collect();
            row.push(Rational::from_integer(dot(&basis[i], v)));
            row
        })
        .collect();
    let (red, pivots) = rref(&aug, k);
    debug_assert_eq!(pivots.len(), k, "projection basis must be independent");
    aug = red;
    let coeffs: Vec<Rational> = aug.iter().map(|row| row[k].clone()).collect();
    let mut out: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
    for (c, b) in coeffs.iter().zip(basis) {
        for j in 0..dim {
            out[j] -= c * &b[j];
        }
    }
    rational_to_primitive(&out)
}

/// Solves `sum_i coeffs[i] * cols[i] = target` exactly if a solution exists.
pub fn solve_combination(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let dim = target.len();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&rows, n + 1);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::to_big;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![to_big(&[1, 2, 3]), to_big(&[2, 4, 6]), to_big(&[0, 1, 1])];
        assert_eq!(rank(&rows, 3), 2);
        assert_eq!(rank(&[], 3), 0);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![to_big(&[1, 1, 0, 0]), to_big(&[0, 0, 1, -1])];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(crate::arith::int_dot(v, r).is_zero());
            }
        }
    }

    #[test]
    fn projection_removes_component() {
        let basis = vec![to_big(&[0, 1])];
        assert_eq!(project_out(&to_big(&[3, 5]), &basis), to_big(&[1, 0]));
        let basis = vec![to_big(&[1, 1])];
        assert_eq!(project_out(&to_big(&[1, 0]), &basis), to_big(&[1, -1]));
    }
}
