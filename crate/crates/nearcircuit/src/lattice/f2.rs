use num_integer::Integer;
use num_traits::Zero;

use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn of<T: num_traits::Signed>(x: &T) -> Option<Sign> {
        if x.is_positive() {
            Some(Sign::Pos)
        } else if x.is_negative() {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn is_neg(self) -> bool {
        self == Sign::Neg
    }

    pub fn from_neg(neg: bool) -> Sign {
        if neg {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

/// Outcome of solving the sign part of `x^{w_i} = β_i` over `{±1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSolution {
    pub solvable: bool,
    /// Dimension of the kernel of `W` mod 2; each solvable sign pattern has
    /// `2^kernel_dim` real sign solutions.
    pub kernel_dim: usize,
    /// One solution `σ` (true = negative coordinate), when solvable.
    pub particular: Option<Vec<bool>>,
}

impl SignSolution {
    pub fn multiplier(&self) -> num_bigint::BigInt {
        num_bigint::BigInt::from(1) << self.kernel_dim
    }

    pub fn count(&self) -> num_bigint::BigInt {
        if self.solvable {
            self.multiplier()
        } else {
            num_bigint::BigInt::zero()
        }
    }
}

/// Solve the sign system of `x^{w_i} = β_i`, where the `w_i` are the columns
/// of `w` and `signs[i]` is the sign of `β_i`.
pub fn sign_solvability(w: &IntMatrix, signs: &[Sign]) -> Result<SignSolution> {
    let n = w.rows();
    if w.cols() != n || signs.len() != n {
        return Err(Error::Input("sign system must be square".into()));
    }
    if w.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    // Equation i: Σ_j W[j][i]·σ_j = τ_i (mod 2).
    let mut rows: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut r: Vec<bool> = (0..n).map(|j| w[(j, i)].is_odd()).collect();
            r.push(signs[i].is_neg());
            r
        })
        .collect();
    let mut pivots = vec![];
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..n).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(p, rank);
        for i in 0..n {
            if i != rank && rows[i][c] {
                for j in 0..=n {
                    let b = rows[rank][j];
                    rows[i][j] ^= b;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let solvable = rows[rank..].iter().all(|r| !r[n]);
    let particular = solvable.then(|| {
        let mut x = vec![false; n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rows[r][n];
        }
        x
    });
    Ok(SignSolution { solvable, kernel_dim: n - rank, particular })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_examples() {
        let w2 = IntMatrix::from_i64(&[vec![2]]);
        let s = sign_solvability(&w2, &[Sign::Pos]).unwrap();
        assert!(s.solvable);
        assert_eq!(s.multiplier(), 2.into());
        assert!(!sign_solvability(&w2, &[Sign::Neg]).unwrap().solvable);
        let w3 = IntMatrix::from_i64(&[vec![3]]);
        for sg in [Sign::Pos, Sign::Neg] {
            let s = sign_solvability(&w3, &[sg]).unwrap();
            assert!(s.solvable);
            assert_eq!(s.multiplier(), 1.into());
        }
    }

    #[test]
    fn singular() {
        let w = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(sign_solvability(&w, &[Sign::Pos, Sign::Pos]), Err(Error::SingularMatrix));
    }

    #[test]
    fn particular_solution_satisfies_system() {
        let w = IntMatrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 2], vec![3, 0, 1]]);
        for mask in 0..8u32 {
            let signs: Vec<Sign> = (0..3).map(|i| Sign::from_neg(mask >> i & 1 == 1)).collect();
            let s = sign_solvability(&w, &signs).unwrap();
            if let Some(x) = s.particular {
                for i in 0..3 {
                    let parity = (0..3).filter(|&j| x[j] && w[(j, i)].is_odd()).count() % 2 == 1;
                    assert_eq!(parity, signs[i].is_neg());
                }
            }
        }
    }
}
