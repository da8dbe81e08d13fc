//! Rational interval arithmetic with outward dyadic rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::realroots::SparsePolynomial;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn floor_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits as usize;
    BigRational::new((x * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn ceil_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits as usize;
    BigRational::new((x * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// Widen to dyadic endpoints with denominator `2^bits`.
    pub fn round(&self, bits: u32) -> Self {
        Interval { lo: floor_dyadic(&self.lo, bits), hi: ceil_dyadic(&self.hi, bits) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            Some(1) => self.clone(),
            Some(_) => self.neg(),
            None => Interval { lo: BigRational::zero(), hi: self.lo.abs().max(self.hi.abs()) },
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        self.mul(&Interval::point(s.clone()))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::HypothesisViolated("interval reciprocal across zero".into()));
        }
        Ok(Interval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    /// Integer power, rounding after each multiplication.
    pub fn powi(&self, e: i64, bits: u32) -> Result<Self> {
        let base = if e < 0 { self.recip()?.round(bits) } else { self.clone() };
        let mut out = Interval::point(BigRational::one());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&b).round(bits);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b).round(bits);
            }
        }
        Ok(out)
    }

    /// Positive real `n`-th root of a positive interval.
    pub fn nth_root(&self, n: u32, bits: u32) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::HypothesisViolated("root of a non-positive interval".into()));
        }
        let scale = BigInt::one() << (bits as usize * n as usize);
        let den = BigInt::one() << bits as usize;
        let a = (&self.lo * BigRational::from_integer(scale.clone())).floor().to_integer();
        let b = (&self.hi * BigRational::from_integer(scale)).ceil().to_integer();
        let lo = a.nth_root(n);
        let mut hi = b.nth_root(n);
        if num_traits::pow(hi.clone(), n as usize) < b {
            hi += 1;
        }
        Ok(Interval { lo: BigRational::new(lo, den.clone()), hi: BigRational::new(hi, den) })
    }

    /// Enclosure of `p` over the interval (Horner form).
    pub fn eval_poly(p: &SparsePolynomial, x: &Self, bits: u32) -> Self {
        let mut acc = Interval::point(BigRational::zero());
        for c in p.dense().into_iter().rev() {
            acc = acc.mul(x).round(bits).add(&Interval::point(c));
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.lo.to_f64().unwrap_or(f64::NAN), self.hi.to_f64().unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn root_encloses() {
        let two = Interval::point(q(2, 1));
        let r = two.nth_root(2, 64).unwrap();
        assert!(r.lo() * r.lo() <= q(2, 1) && r.hi() * r.hi() >= q(2, 1));
        assert!(r.width() <= q(1, 1 << 62));
        let c = Interval::point(q(27, 8)).nth_root(3, 32).unwrap();
        assert_eq!(c, Interval::point(q(3, 2)));
    }

    #[test]
    fn powers_and_products() {
        let x = Interval::new(q(-1, 2), q(1, 3));
        assert_eq!(x.mul(&x), Interval::new(q(-1, 6), q(1, 4)));
        let y = Interval::new(q(2, 1), q(3, 1));
        let p = y.powi(-2, 80).unwrap();
        assert!(p.lo() <= &q(1, 9) && p.hi() >= &q(1, 4));
        assert!(x.recip().is_err());
        let f = SparsePolynomial::from_coeffs(&[-2, 0, 1]);
        assert!(Interval::eval_poly(&f, &Interval::point(q(3, 2)), 40).sign() == Some(1));
    }
}
