use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1, …, d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols() {
            let t = m[(a, j)].clone();
            m[(a, j)] = m[(b, j)].clone();
            m[(b, j)] = t;
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows() {
            let t = m[(i, a)].clone();
            m[(i, a)] = m[(i, b)].clone();
            m[(i, b)] = t;
        }
    }
}

/// row_dst -= q·row_src
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let t = q * &m[(src, j)];
        m[(dst, j)] -= t;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let t = q * &m[(i, src)];
        m[(i, dst)] -= t;
    }
}

/// Smith normal form with smallest-magnitude pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    'outer: for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = &a[(i, t)] / &a[(t, t)];
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = &a[(t, j)] / &a[(t, t)];
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= a[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..c {
                a[(t, j)] = -a[(t, j)].clone();
            }
            for j in 0..r {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    SnfDecomposition { u, d: a, v }
}
