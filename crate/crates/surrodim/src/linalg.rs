//! Exact rational linear algebra: vectors, Gaussian elimination, kernels.

use crate::rational::Rational;
use num::Zero;

/// Dense rational vector.
pub type RationalVector = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> RationalVector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vector(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn zeros(n: usize) -> RationalVector {
    vec![Rational::zero(); n]
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// pivot row, in order.
pub fn rref(rows: &mut Vec<RationalVector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Vec<RationalVector> = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the kernel {x : A x = 0}, one vector per free column of A.
/// The basis is independent by construction; an empty input matrix has the
/// full standard basis as kernel.
pub fn kernel(rows: &[RationalVector], ncols: usize) -> Vec<RationalVector> {
    let mut m: Vec<RationalVector> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.clone()
        })
        .collect();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = zeros(ncols);
        v[free] = Rational::from_integer(1.into());
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b. Returns `Some(x)` only when the solution exists and is
/// unique; inconsistent and underdetermined systems return `None`.
pub fn solve_unique(a: &[RationalVector], b: &[Rational]) -> Option<RationalVector> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<RationalVector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent: a pivot in the augmented column.
    if pivots.last() == Some(&ncols) {
        return None;
    }
    if pivots.len() != ncols {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Some(x)
}

/// Basis of the annihilator {w : w . v = 0 for every v in `vectors`}.
/// Equals the kernel of the matrix whose rows are `vectors`.
pub fn annihilator(vectors: &[RationalVector], ncols: usize) -> Vec<RationalVector> {
    kernel(vectors, ncols)
}
