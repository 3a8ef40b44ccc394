//! Exact integer linear algebra over Q without fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rank over Q by Bareiss fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n_rows {
            for j in c + 1..n_cols {
                // Bareiss step: the division is exact.
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// An incrementally built basis kept in echelon form: each row is zero on
/// the pivots of all earlier rows and is stored primitive (content 1).
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim, "vector length does not match the basis");
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let (a, b) = (row[*pivot].clone(), v[*pivot].clone());
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = &a * &*vi - &b * ri;
            }
            make_primitive(&mut v);
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it lies outside the span; returns whether it was added.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let reduced = self.reduce(v);
        match reduced.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(pivot) => {
                self.rows.push((pivot, reduced));
                true
            }
        }
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    let g = g.abs();
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}
