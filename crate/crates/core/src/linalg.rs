//! Exact elimination over [`Scalar`].
//!
//! Scalars form an integral domain, so elimination is fraction-free unless the
//! pivot happens to be a unit, in which case the pivot row is normalized.

use crate::scalars::{Scalar, ScalarError};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn transpose(a: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Scalar::zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Reduced echelon data: rows with pivots, pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

/// Pick a pivot row for `col`: prefer units, then fewest exponential terms.
fn choose_pivot(rows: &Matrix, from: usize, col: usize) -> Option<usize> {
    (from..rows.len())
        .filter(|&r| !rows[r][col].is_zero())
        .min_by_key(|&r| {
            let c = &rows[r][col];
            (!c.is_unit(), c.exp_forms().count(), r)
        })
}

/// Gauss–Jordan elimination. Unit pivots are normalized to 1; non-unit pivots
/// are eliminated by cross-multiplication.
pub fn echelon(a: &Matrix, cols: usize) -> Echelon {
    let mut rows = a.clone();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = choose_pivot(&rows, next, col) else {
            continue;
        };
        rows.swap(next, p);
        if let Ok(inv) = rows[next][col].inv() {
            rows[next] = rows[next].iter().map(|x| x.mul(&inv)).collect();
        }
        let pivot_row = rows[next].clone();
        let piv = pivot_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            if piv.is_one() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            } else {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = piv.mul(x).sub(&f.mul(y));
                }
            }
            if let Some(u) = unit_content(row) {
                *row = row.iter().map(|x| x.mul(&u)).collect();
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next.max(pivots.len()));
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    Echelon { rows, pivots }
}

/// If the first nonzero entry of a row is a non-trivial unit, its inverse
/// (to keep entries small). Leaves rows with non-unit leads untouched.
fn unit_content(row: &[Scalar]) -> Option<Scalar> {
    let lead = row.iter().find(|x| !x.is_zero())?;
    if lead.is_one() || !lead.is_unit() {
        return None;
    }
    lead.inv().ok()
}

pub fn rank(a: &Matrix, cols: usize) -> usize {
    echelon(a, cols).pivots.len()
}

/// Basis of the right kernel `{v : A v = 0}`; entries lie in the ring.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let e = echelon(a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    let pivot_entries: Vec<Scalar> = e.pivots.iter().zip(&e.rows).map(|(&p, r)| r[p].clone()).collect();
    let mut out = Vec::new();
    for &f in &free {
        // Row i reads piv_i x_{p_i} + Σ_free a_{if} x_f = 0.
        let all_units = pivot_entries.iter().all(Scalar::is_unit);
        let mut v = vec![Scalar::zero(); cols];
        if all_units {
            v[f] = Scalar::one();
            for (i, &p) in e.pivots.iter().enumerate() {
                let a = &e.rows[i][f];
                if !a.is_zero() {
                    v[p] = a.neg().div(&pivot_entries[i]).expect("unit pivot");
                }
            }
        } else {
            let l = pivot_entries.iter().fold(Scalar::one(), |acc, x| acc.mul(x));
            v[f] = l.clone();
            for (i, &p) in e.pivots.iter().enumerate() {
                let a = &e.rows[i][f];
                if !a.is_zero() {
                    let others = pivot_entries
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .fold(Scalar::one(), |acc, (_, x)| acc.mul(x));
                    v[p] = a.neg().mul(&others);
                }
            }
        }
        out.push(v);
    }
    out
}

/// Coordinates of `v` in the span of `basis` (rows); `None` when outside the span.
pub fn solve_in_span(basis: &Matrix, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, ScalarError> {
    let n = basis.len();
    let dim = v.len();
    // Columns are basis vectors; augment with v.
    let mut aug: Matrix = (0..dim)
        .map(|i| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let e = echelon(&aug, n + 1);
    if e.pivots.contains(&n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &p) in e.pivots.iter().enumerate() {
        x[p] = e.rows[i][n].div(&e.rows[i][p])?;
    }
    aug.clear();
    Ok(Some(x))
}

/// Inverse of a square matrix whose elimination only meets unit pivots.
pub fn inverse(a: &Matrix) -> Result<Matrix, ScalarError> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let e = echelon(&aug, n);
    if e.pivots.len() != n {
        return Err(ScalarError::DivisionByZero);
    }
    e.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let inv = r[i].inv()?;
            Ok(r[n..].iter().map(|x| x.mul(&inv)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExpForm, Scalar};
    use num_rational::BigRational;
    use num_traits::One;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        assert_eq!(rank(&a, 3), 1);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let r: Scalar = a[0].iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            assert!(r.is_zero());
        }
    }

    #[test]
    fn kernel_with_non_unit_pivots() {
        // (q - 1) x + (q^2 - 1) y = 0 with q = exp(t): kernel spanned by (q+1, -1) up to scale.
        let q = Scalar::exp(ExpForm::symbol(0, BigRational::one()));
        let a = vec![vec![q.sub(&s(1)), q.mul(&q).sub(&s(1))]];
        let k = nullspace(&a, 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let r = a[0][0].mul(&v[0]).add(&a[0][1].mul(&v[1]));
        assert!(r.is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![s(0), s(1)], vec![s(-1), s(0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![s(0), s(-1)], vec![s(1), s(0)]]);
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }
}
