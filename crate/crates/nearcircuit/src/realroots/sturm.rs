use num_rational::BigRational;

use super::dense::ZPoly;
use super::{Bound, SparsePolynomial};
use crate::error::{Error, Result};

/// Sturm chain of the square-free part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<ZPoly>,
}

impl SturmChain {
    pub fn new(f: &SparsePolynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::from_zpoly(&ZPoly::from_sparse(f)))
    }

    pub(crate) fn from_zpoly(f: &ZPoly) -> Self {
        let s = f.squarefree();
        let mut chain = vec![s.clone()];
        if s.degree() > 0 {
            chain.push(s.derivative().primitive());
            loop {
                let n = chain.len();
                let (a, b) = (&chain[n - 2], &chain[n - 1]);
                if b.degree() == 0 {
                    break;
                }
                let e = a.degree() - b.degree() + 1;
                let r = ZPoly::prem(a, b);
                if r.is_zero() {
                    break;
                }
                // remainder = prem / lc(b)^e; the chain needs -remainder up to a positive factor
                let flip = b.lc() < &num_bigint::BigInt::from(0) && e % 2 == 1;
                let next = if flip { r } else { r.neg() };
                chain.push(next.primitive());
            }
        }
        SturmChain { chain }
    }

    /// The square-free polynomial heading the chain.
    pub(crate) fn head(&self) -> &ZPoly {
        &self.chain[0]
    }

    fn signs(&self, x: &Bound) -> Vec<i8> {
        self.chain
            .iter()
            .map(|p| match x {
                Bound::NegInf => p.sign_at_infinity(false),
                Bound::PosInf => p.sign_at_infinity(true),
                Bound::Finite(v) => p.sign_at(v),
            })
            .collect()
    }

    pub fn variations(&self, x: &Bound) -> usize {
        let s: Vec<i8> = self.signs(x).into_iter().filter(|&v| v != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Bound, b: &Bound) -> usize {
        let va = self.variations(a);
        let vb = self.variations(b);
        va.saturating_sub(vb)
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Bound, b: &Bound) -> usize {
        let c = self.count_half_open(a, b);
        match b {
            Bound::Finite(v) if self.chain[0].sign_at(v) == 0 => c - 1,
            _ => c,
        }
    }

    pub fn count_all(&self) -> usize {
        self.count_open(&Bound::NegInf, &Bound::PosInf)
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        self.chain[0].sign_at(x) == 0
    }
}

/// Number of distinct real roots of `f` in the open interval `(lo, hi)`,
/// optionally excluding zero.
pub fn sturm_count(f: &SparsePolynomial, lo: &Bound, hi: &Bound, nonzero_only: bool) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = if nonzero_only { f.unshift(f.lowest_exponent().unwrap()) } else { f.clone() };
    Ok(SturmChain::new(&g)?.count_open(lo, hi))
}
