//! Exact univariate real-root machinery: Sturm counting, isolation,
//! multiplicities and Descartes-type bounds.

pub(crate) mod dense;
mod descartes;
mod isolate;
mod poly;
mod sturm;

pub use descartes::descartes_signed_counts;
pub use isolate::{isolate, sign_at_root, IsolatedRoot, RootIsolation, RootLocation};
pub use poly::SparsePolynomial;
pub use sturm::{sturm_count, SturmChain};

pub(crate) use isolate::refine;
pub(crate) use poly::pow_rat;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bounds::overline;
use crate::error::{Error, Result};

/// Interval endpoint, possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(BigRational),
    PosInf,
}

/// Σ overline(p_{i+1} − p_i) over consecutive exponents.
pub fn descartes_gap_bound(exponents: &[usize]) -> Result<u64> {
    if exponents.len() < 2 {
        return Err(Error::Input("need at least two exponents".into()));
    }
    if exponents.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("exponents must be strictly increasing".into()));
    }
    Ok(exponents.windows(2).map(|w| overline(&((w[1] - w[0]) as i64).into())).sum())
}

/// Descartes' rule of signs applied to `f(x)` and `f(−x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignVariationBound {
    pub positive: usize,
    pub negative: usize,
}

impl SignVariationBound {
    /// Bound on nonzero real roots.
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }
}

pub fn sign_variation_bound(f: &SparsePolynomial) -> Result<SignVariationBound> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(SignVariationBound { positive: f.sign_changes(), negative: f.reflect().sign_changes() })
}

/// Number of positive and negative real roots (distinct).
pub fn signed_root_counts(f: &SparsePolynomial) -> Result<(usize, usize)> {
    descartes_signed_counts(f)
}

/// Distinct nonzero real roots over the whole line.
pub fn count_real_roots(f: &SparsePolynomial) -> Result<usize> {
    let (pos, neg) = descartes_signed_counts(f)?;
    Ok(pos + neg)
}

/// Whether every root of `f` other than zero is simple.
pub fn nonzero_roots_simple(f: &SparsePolynomial) -> bool {
    let Some(low) = f.lowest_exponent() else {
        return false;
    };
    let g = dense::ZPoly::from_sparse(&f.unshift(low));
    dense::ZPoly::gcd(&g, &g.derivative()).degree() == 0
}

/// Monic-free gcd of two polynomials (primitive, positive leading coefficient).
pub fn poly_gcd(a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
    dense::ZPoly::gcd(&dense::ZPoly::from_sparse(a), &dense::ZPoly::from_sparse(b)).to_sparse()
}

/// Whether `f` vanishes at a rational point.
pub fn is_root(f: &SparsePolynomial, x: &BigRational) -> bool {
    f.eval(x).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_bounds() {
        assert_eq!(descartes_gap_bound(&[0, 1, 2, 3, 5, 6, 7, 8, 9, 10, 11]).unwrap(), 11);
        assert_eq!(descartes_gap_bound(&[0, 1]).unwrap(), 1);
        assert_eq!(descartes_gap_bound(&[0, 2]).unwrap(), 2);
        assert!(descartes_gap_bound(&[3]).is_err());
    }

    #[test]
    fn sign_variations() {
        let b = sign_variation_bound(&SparsePolynomial::from_coeffs(&[2, -3, 1])).unwrap();
        assert_eq!(b.positive, 2);
        let b = sign_variation_bound(&SparsePolynomial::from_coeffs(&[1, 1, 1])).unwrap();
        assert_eq!(b.positive, 0);
        let g1 = SparsePolynomial::from_coeffs(&[5, 11, 23, 41]);
        let g2 = SparsePolynomial::from_coeffs(&[8, 18, 38, 72]);
        let g3 = SparsePolynomial::from_coeffs(&[2, 6, 14, 30]);
        let f = g1.mul(&g2).shift(5).sub(&g3);
        let b = sign_variation_bound(&f).unwrap();
        assert!(b.total() >= 3 && b.total() <= 11);
    }
}
