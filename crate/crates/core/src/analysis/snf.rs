//! Smith normal form over ℤ and lattice kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row_i -= q row_t
fn row_axpy(m: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// col_j -= q col_t
fn col_axpy(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[t].clone();
        row[j] -= q * s;
    }
}

/// Smith normal form of an `rows × cols` matrix; pivots are chosen as the
/// first entry of smallest absolute value, so output is deterministic.
pub fn snf(a: &IntMatrix, cols: usize) -> Snf {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v, rank);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let p = d[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&p);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&p);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !d[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    // Bring the offending row in; the next pass lowers the pivot.
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        rank = t + 1;
    }
    finish(u, d, v, rank)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix, rank: usize) -> Snf {
    Snf { u, d, v, rank }
}

/// Basis (as rows) of `{x ∈ ℤ^cols : A x = 0}`.
pub fn lattice_kernel(a: &IntMatrix, cols: usize) -> IntMatrix {
    let s = snf(a, cols);
    (s.rank..cols).map(|c| s.v.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Echelon basis (rows) of the lattice spanned by `gens`, with positive pivots.
pub fn lattice_basis(gens: &IntMatrix, cols: usize) -> IntMatrix {
    let mut m: IntMatrix = gens.clone();
    let mut t = 0;
    for c in 0..cols {
        loop {
            let piv = (t..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].abs());
            let Some(p) = piv else { break };
            m.swap(t, p);
            let mut done = true;
            for i in t + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[t][c]);
                row_axpy(&mut m, i, t, &q);
                done &= m[i][c].is_zero();
            }
            if done {
                if m[t][c].is_negative() {
                    for x in m[t].iter_mut() {
                        *x = -x.clone();
                    }
                }
                t += 1;
                break;
            }
        }
    }
    m.truncate(t);
    m
}

/// Invariant factors of `ℤ^n / span(gens)` other than 1; a `0` stands for a
/// free `ℤ` summand.
pub fn quotient_factors(gens: &IntMatrix, n: usize) -> Vec<BigInt> {
    let s = snf(gens, n);
    let mut out: Vec<BigInt> = s.diagonal().into_iter().filter(|x| !x.is_one()).collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), n - s.rank));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn det2(a: &IntMatrix) -> BigInt {
        &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
    }

    fn check(a: &IntMatrix, cols: usize) -> Snf {
        let s = snf(a, cols);
        let uav = int_mul(&int_mul(&s.u, a, a.len(), cols), &s.v, cols, cols);
        assert_eq!(uav, s.d);
        for i in 0..a.len() {
            for j in 0..cols {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn scalar_matrix() {
        let s = check(&m(&[&[5, 0], &[0, 5]]), 2);
        assert_eq!(s.diagonal(), vec![BigInt::from(5), BigInt::from(5)]);
    }

    #[test]
    fn rotation() {
        let s = check(&m(&[&[0, 1], &[-1, 0]]), 2);
        assert_eq!(s.diagonal(), vec![BigInt::one(), BigInt::one()]);
        assert_eq!(det2(&s.u).abs(), BigInt::one());
        assert_eq!(det2(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn against_minors() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = check(&a, 2);
        // d1 = gcd of entries, d1 d2 = |det|.
        let g = a.iter().flatten().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let det = det2(&a).abs();
        assert_eq!(s.diagonal(), vec![g.clone(), det / g]);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn kernel_and_quotient() {
        // 3x ≡ 0 style system: [1 1 0; 0 0 0] has kernel rank 2.
        let a = m(&[&[1, 1, 0]]);
        let k = lattice_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1]).is_zero());
        }
        let q = quotient_factors(&m(&[&[3, 0], &[0, 3]]), 2);
        assert_eq!(q, vec![BigInt::from(3), BigInt::from(3)]);
        let q = quotient_factors(&m(&[&[2, 0]]), 2);
        assert_eq!(q, vec![BigInt::from(2), BigInt::zero()]);
        assert!(quotient_factors(&int_identity(2), 2).is_empty());
        let b = lattice_basis(&m(&[&[6, 0], &[4, 0], &[0, -3]]), 2);
        assert_eq!(b, m(&[&[2, 0], &[0, 3]]));
    }
}
