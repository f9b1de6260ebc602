//! Exact rational row reduction used by the basis solves and the lattice code.

use num_traits::{One, Zero};

use crate::exactmath::Rational;

/// Reduced row echelon form of a set of row vectors, with the transform
/// expressing each reduced row in terms of the input rows.
#[derive(Clone, Debug)]
pub(crate) struct Rref {
    /// Nonzero reduced rows; row `i` has a leading 1 at `pivots[i]`.
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    /// `rows[i] = sum_j transform[i][j] * input[j]`.
    pub transform: Vec<Vec<Rational>>,
    pub input_len: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn full_rank(&self) -> bool {
        self.rank() == self.input_len
    }

    /// Writes `v` as a combination of the input rows if it lies in their span.
    pub fn express(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut residual = v.to_vec();
        let mut coeffs = vec![Rational::zero(); self.input_len];
        for (row, (&p, t)) in self.rows.iter().zip(self.pivots.iter().zip(&self.transform)) {
            let c = residual[p].clone();
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &c * x;
                }
            }
            for (k, x) in coeffs.iter_mut().zip(t) {
                if !x.is_zero() {
                    *k += &c * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }
}

pub(crate) fn rref(input: &[Vec<Rational>]) -> Rref {
    let n = input.len();
    let width = input.iter().map(Vec::len).max().unwrap_or(0);
    let mut rows: Vec<Vec<Rational>> = input.to_vec();
    let mut transform: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            e
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == n {
            break;
        }
        let Some(sel) = (r..n).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        transform.swap(r, sel);
        let inv = rows[r][col].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        transform[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..n {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            let (pr, pt) = (rows[r].clone(), transform[r].clone());
            for (x, y) in rows[i].iter_mut().zip(&pr) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in transform[i].iter_mut().zip(&pt) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    transform.truncate(r);
    Rref {
        rows,
        pivots,
        transform,
        input_len: n,
    }
}
