use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dense::ZPoly;
use super::SparsePolynomial;
use crate::error::{Error, Result};

fn variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for x in c {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// `p(x) -> p(x + 1)` in place.
fn taylor_shift(c: &mut [BigInt]) {
    let d = c.len() - 1;
    for i in 0..d {
        for j in (i..d).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

fn primitive(c: Vec<BigInt>) -> Vec<BigInt> {
    ZPoly(c).primitive().0
}

/// Roots in the open interval `(0, 1)` of a square-free `p` with `p(0) ≠ 0`,
/// by bisection until Descartes' rule on each piece is exact.
fn roots_in_unit(p: Vec<BigInt>) -> usize {
    let mut count = 0;
    let mut stack = vec![p];
    while let Some(p) = stack.pop() {
        if p.len() < 2 {
            continue;
        }
        // (x + 1)^d p(1 / (x + 1)) has its positive roots over (0, 1)
        let mut t: Vec<BigInt> = p.iter().rev().cloned().collect();
        taylor_shift(&mut t);
        match variations(&t) {
            0 => continue,
            1 => {
                count += 1;
                continue;
            }
            _ => {}
        }
        let d = p.len() - 1;
        // 2^d p(x / 2) covers (0, 1/2); shifted by one it covers (1/2, 1)
        let left: Vec<BigInt> = p.iter().enumerate().map(|(i, a)| a << (d - i)).collect();
        let mut right = left.clone();
        taylor_shift(&mut right);
        if right[0].is_zero() {
            count += 1;
            right.remove(0);
        }
        stack.push(primitive(left));
        stack.push(primitive(right));
    }
    count
}

/// Distinct positive roots of a square-free `p` with `p(0) ≠ 0`.
fn positive_roots(p: &[BigInt]) -> usize {
    let at_one: BigInt = p.iter().sum();
    let below = roots_in_unit(p.to_vec());
    let above = roots_in_unit(p.iter().rev().cloned().collect());
    below + above + usize::from(at_one.is_zero())
}

/// Distinct positive and negative real roots of `f`, zero excluded.
pub fn descartes_signed_counts(f: &SparsePolynomial) -> Result<(usize, usize)> {
    let Some(low) = f.lowest_exponent() else {
        return Err(Error::ZeroPolynomial);
    };
    let s = ZPoly::from_sparse(&f.unshift(low)).squarefree();
    if s.degree() == 0 {
        return Ok((0, 0));
    }
    let reflected: Vec<BigInt> = s.0.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    Ok((positive_roots(&s.0), positive_roots(&reflected)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift() {
        let mut c: Vec<BigInt> = [1, 2, 3].iter().map(|&x| x.into()).collect();
        taylor_shift(&mut c);
        let want: Vec<BigInt> = [6, 8, 3].iter().map(|&x| x.into()).collect();
        assert_eq!(c, want);
    }

    #[test]
    fn roots_on_bisection_points() {
        // (x - 1)(x - 1/2)(x - 3/4)(x + 2)(x - 5)
        let f = SparsePolynomial::from_coeffs(&[1, -1])
            .mul(&SparsePolynomial::from_coeffs(&[-1, 2]))
            .mul(&SparsePolynomial::from_coeffs(&[-3, 4]))
            .mul(&SparsePolynomial::from_coeffs(&[2, 1]))
            .mul(&SparsePolynomial::from_coeffs(&[-5, 1]));
        assert_eq!(descartes_signed_counts(&f).unwrap(), (4, 1));
        let sq = f.mul(&f).shift(3);
        assert_eq!(descartes_signed_counts(&sq).unwrap(), (4, 1));
        assert_eq!(descartes_signed_counts(&SparsePolynomial::from_coeffs(&[1, 0, 1])).unwrap(), (0, 0));
    }

    #[test]
    fn close_roots() {
        // (1000x - 999)(1000x - 1001)(x^2 + 1)
        let f = SparsePolynomial::from_coeffs(&[-999, 1000])
            .mul(&SparsePolynomial::from_coeffs(&[-1001, 1000]))
            .mul(&SparsePolynomial::from_coeffs(&[1, 0, 1]));
        assert_eq!(descartes_signed_counts(&f).unwrap(), (2, 0));
    }
}
