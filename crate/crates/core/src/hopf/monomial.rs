use std::cmp::Ordering;

/// `x^α z^β` with α ∈ ℤ^k (torus) and β ∈ ℕ^m (filtered).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub torus: Vec<i32>,
    pub filt: Vec<u32>,
}

impl Monomial {
    pub fn one(k: usize, m: usize) -> Self {
        Monomial { torus: vec![0; k], filt: vec![0; m] }
    }

    pub fn new(torus: Vec<i32>, filt: Vec<u32>) -> Self {
        Monomial { torus, filt }
    }

    pub fn torus_var(k: usize, m: usize, i: usize, e: i32) -> Self {
        let mut out = Monomial::one(k, m);
        out.torus[i] = e;
        out
    }

    pub fn filt_var(k: usize, m: usize, j: usize, e: u32) -> Self {
        let mut out = Monomial::one(k, m);
        out.filt[j] = e;
        out
    }

    pub fn is_one(&self) -> bool {
        self.torus.iter().all(|&a| a == 0) && self.filt.iter().all(|&b| b == 0)
    }

    /// Grouplike: no filtered part.
    pub fn is_torus(&self) -> bool {
        self.filt.iter().all(|&b| b == 0)
    }

    pub fn torus_part(&self) -> Monomial {
        Monomial { torus: self.torus.clone(), filt: vec![0; self.filt.len()] }
    }

    pub fn filt_part(&self) -> Monomial {
        Monomial { torus: vec![0; self.torus.len()], filt: self.filt.clone() }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| a + b).collect(),
            filt: self.filt.iter().zip(&other.filt).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / z_j`, if `z_j` divides.
    pub fn lower_filt(&self, j: usize) -> Option<Monomial> {
        if self.filt[j] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.filt[j] -= 1;
        Some(out)
    }

    pub fn filt_total(&self) -> u32 {
        self.filt.iter().sum()
    }

    pub fn torus_total(&self) -> u32 {
        self.torus.iter().map(|a| a.unsigned_abs()).sum()
    }

    /// Σ β_j deg(z_j).
    pub fn weighted_degree(&self, degrees: &[u32]) -> u32 {
        self.filt.iter().zip(degrees).map(|(b, d)| b * d).sum()
    }

    /// Σ|α| + Σβ.
    pub fn total_degree(&self) -> u32 {
        self.torus_total() + self.filt_total()
    }

    pub fn uses_torus(&self) -> bool {
        self.torus.iter().any(|&a| a != 0)
    }
}

fn graded_lex<T: Ord + Copy>(a: &[T], b: &[T], weight: impl Fn(T) -> u64) -> Ordering {
    let wa: u64 = a.iter().map(|&x| weight(x)).sum();
    let wb: u64 = b.iter().map(|&x| weight(x)).sum();
    wa.cmp(&wb).then_with(|| a.cmp(b))
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex(&self.torus, &other.torus, |a: i32| a.unsigned_abs() as u64)
            .then_with(|| graded_lex(&self.filt, &other.filt, |b: u32| b as u64))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_torus_first() {
        let one = Monomial::one(1, 1);
        let x = Monomial::torus_var(1, 1, 0, 1);
        let xinv = Monomial::torus_var(1, 1, 0, -1);
        let z = Monomial::filt_var(1, 1, 0, 1);
        assert!(one < z && z < x);
        assert!(xinv < x);
        assert!(x.mul(&xinv).is_one());
    }
}
