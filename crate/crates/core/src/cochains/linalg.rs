//! Exact linear algebra over the integers and rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Divide out the content and make the first nonzero entry positive.
pub fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let sign = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if sign {
            *x = -&*x;
        }
    }
}

/// Fraction-free reduced echelon form; returns pivot columns.
pub fn echelon(rows: &mut Vec<Vec<BigInt>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pv = pivot_row[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &pv * &*x - &a * y;
            }
            primitive(row);
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A primitive integer basis of the kernel, one vector per free column, together
/// with the free columns themselves (each basis vector vanishes on the other free columns).
pub fn nullspace(rows: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let l = m
            .iter()
            .zip(&pivots)
            .fold(BigInt::one(), |l, (row, &pc)| l.lcm(&row[pc]));
        let mut v = vec![BigInt::zero(); ncols];
        v[f] = l.clone();
        for (row, &pc) in m.iter().zip(&pivots) {
            // p x_pc + a x_f = 0
            v[pc] = -(&row[f] * &l) / &row[pc];
        }
        primitive(&mut v);
        basis.push(v);
    }
    (basis, free)
}

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn q_identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn q_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Clear denominators row by row.
pub fn integer_rows(a: &QMatrix) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}
