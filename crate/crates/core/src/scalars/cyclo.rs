//! Elements of K[ζ]/Φ_N(ζ) with K = ℚ(params), stored as coefficient vectors
//! of length φ(N) in the power basis 1, ζ, …, ζ^{φ(N)-1}.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratfunc::RatFunc;

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache").get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = div_monic(&p, &cyclotomic_poly(d));
        }
    }
    cache.lock().expect("cyclotomic cache").insert(n, p.clone());
    p
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// Reduce an arbitrary-length power-basis vector modulo Φ_n.
pub fn reduce(mut coeffs: Vec<RatFunc>, n: u32) -> Vec<RatFunc> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    while coeffs.len() > d {
        let top = coeffs.pop().expect("non-empty");
        if top.is_zero() {
            continue;
        }
        let shift = coeffs.len() - d;
        // ζ^{shift+d} = -Σ_{j<d} phi_j ζ^{shift+j}
        for (j, &c) in phi[..d].iter().enumerate() {
            if c != 0 {
                let t = top.scale(&BigRational::from_integer((-c).into()));
                coeffs[shift + j] = coeffs[shift + j].add(&t);
            }
        }
    }
    coeffs.resize(d, RatFunc::zero());
    coeffs
}

/// Power-basis vector of ζ_n^k.
pub fn root_power(n: u32, k: i64) -> Vec<RatFunc> {
    let k = k.rem_euclid(n as i64) as usize;
    let mut v = vec![RatFunc::zero(); k + 1];
    v[k] = RatFunc::one();
    reduce(v, n)
}

pub fn mul(a: &[RatFunc], b: &[RatFunc], n: u32) -> Vec<RatFunc> {
    if a.len() == 1 && b.len() == 1 {
        return vec![a[0].mul(&b[0])];
    }
    let mut out = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    reduce(out, n)
}

/// Re-express an element of ℚ(ζ_from) inside ℚ(ζ_to); `from` must divide `to`.
pub fn lift(a: &[RatFunc], from: u32, to: u32) -> Vec<RatFunc> {
    if from == to {
        return a.to_vec();
    }
    let step = (to / from) as usize;
    let mut out = vec![RatFunc::zero(); (a.len().max(1) - 1) * step + 1];
    for (i, c) in a.iter().enumerate() {
        out[i * step] = c.clone();
    }
    reduce(out, to)
}

/// Left inverse of the lift map ℚ(ζ_d) → ℚ(ζ_n) in power-basis coordinates.
fn descent_matrix(d: u32, n: u32) -> Vec<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().expect("descent cache").get(&(d, n)) {
        return m.clone();
    }
    let (pd, pn) = (euler_phi(d), euler_phi(n));
    let cols: Vec<Vec<BigRational>> = (0..pd as i64)
        .map(|k| {
            lift(&root_power(d, k), d, n)
                .iter()
                .map(|c| c.as_rational().expect("rational basis image"))
                .collect()
        })
        .collect();
    // Row-reduce [B | I] where B is pn × pd.
    let mut rows: Vec<(Vec<BigRational>, Vec<BigRational>)> = (0..pn)
        .map(|i| {
            let b = (0..pd).map(|k| cols[k][i].clone()).collect();
            let mut e = vec![BigRational::zero(); pn];
            e[i] = BigRational::one();
            (b, e)
        })
        .collect();
    let mut out = Vec::with_capacity(pd);
    let mut next = 0;
    for col in 0..pd {
        let piv = (next..pn).find(|&r| !rows[r].0[col].is_zero()).expect("lift is injective");
        rows.swap(next, piv);
        let inv = rows[next].0[col].recip();
        let (b, e) = &mut rows[next];
        b.iter_mut().for_each(|x| *x *= &inv);
        e.iter_mut().for_each(|x| *x *= &inv);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && !row.0[col].is_zero() {
                let f = row.0[col].clone();
                for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                    *x -= &f * y;
                }
                for (x, y) in row.1.iter_mut().zip(&pivot.1) {
                    *x -= &f * y;
                }
            }
        }
        next += 1;
    }
    for row in rows.iter().take(pd) {
        out.push(row.1.clone());
    }
    cache.lock().expect("descent cache").insert((d, n), out.clone());
    out
}

/// Smallest order `d | n` such that `a` lies in ℚ(params)(ζ_d), with coordinates there.
pub fn descend(a: &[RatFunc], n: u32) -> (u32, Vec<RatFunc>) {
    if n == 1 || a[1..].iter().all(RatFunc::is_zero) {
        return (1, vec![a[0].clone()]);
    }
    for d in 2..n {
        if n % d != 0 {
            continue;
        }
        let m = descent_matrix(d, n);
        let c: Vec<RatFunc> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(a)
                    .filter(|(q, _)| !q.is_zero())
                    .fold(RatFunc::zero(), |acc, (q, x)| acc.add(&x.scale(q)))
            })
            .collect();
        if lift(&c, d, n) == a {
            return (d, c);
        }
    }
    (n, a.to_vec())
}

pub fn lcm_order(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn trim(mut p: Vec<RatFunc>) -> Vec<RatFunc> {
    while p.last().is_some_and(RatFunc::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[RatFunc], b: &[RatFunc]) -> (Vec<RatFunc>, Vec<RatFunc>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("non-zero leading coefficient");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![RatFunc::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1].mul(&lead_inv);
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&c.mul(bj));
        }
        q[shift] = c;
        r = trim(r);
    }
    (q, r)
}

fn poly_mul(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

fn poly_sub(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let n = a.len().max(b.len());
    let z = RatFunc::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z))).collect())
}

/// Multiplicative inverse in K[ζ]/Φ_n via the extended Euclidean algorithm.
pub fn inverse(a: &[RatFunc], n: u32) -> Option<Vec<RatFunc>> {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return None;
    }
    if a.len() == 1 {
        let mut v = vec![a[0].inv()?];
        v.resize(euler_phi(n), RatFunc::zero());
        return Some(v);
    }
    let phi: Vec<RatFunc> = cyclotomic_poly(n).into_iter().map(RatFunc::from_int).collect();
    // Invariant: s * a ≡ r (mod Φ_n).
    let (mut r0, mut r1) = (phi, a);
    let (mut s0, mut s1): (Vec<RatFunc>, Vec<RatFunc>) = (Vec::new(), vec![RatFunc::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // Φ_n is irreducible over ℚ(params), so the gcd is a non-zero constant.
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].inv()?;
    let v: Vec<RatFunc> = s0.iter().map(|x| x.mul(&c)).collect();
    Some(reduce(v, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(9), 6);
    }

    #[test]
    fn zeta3_times_zeta3_squared_is_one() {
        // Oracle: ζ^3 - 1 = (ζ - 1)Φ_3(ζ), so ζ^3 ≡ 1 modulo Φ_3.
        let z = root_power(3, 1);
        let z2 = root_power(3, 2);
        assert_eq!(z2, vec![RatFunc::from_int(-1), RatFunc::from_int(-1)]);
        let p = mul(&z, &z2, 3);
        assert_eq!(p, root_power(3, 0));
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let a = vec![RatFunc::one(), RatFunc::one()];
        let inv = inverse(&a, 5).unwrap();
        assert_eq!(mul(&a, &inv, 5), root_power(5, 0));
    }

    #[test]
    fn lift_preserves_products() {
        let z3 = root_power(3, 1);
        let lifted = lift(&z3, 3, 6);
        assert_eq!(lifted, root_power(6, 2));
    }
}
