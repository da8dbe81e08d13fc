use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial with exact rational coefficients, stored sparsely
/// as `(exponent, coefficient)` pairs with strictly increasing exponents and
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePolynomial {
    terms: Vec<(usize, BigRational)>,
}

impl SparsePolynomial {
    pub fn new(terms: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(BigRational::zero) += c;
        }
        SparsePolynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn zero() -> Self {
        SparsePolynomial { terms: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: usize, c: BigRational) -> Self {
        Self::new([(e, c)])
    }

    pub fn x() -> Self {
        Self::monomial(1, BigRational::one())
    }

    /// Dense ascending integer coefficients `c_0 + c_1 x + …`.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().enumerate().map(|(e, &c)| (e, BigRational::from_integer(c.into()))))
    }

    pub fn from_int_coeffs(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().enumerate().map(|(e, c)| (e, BigRational::from_integer(c.clone()))))
    }

    /// `∏ (x - r)` over the given rational roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| acc.mul(&Self::new([(1, BigRational::one()), (0, -r.clone())])))
    }

    pub fn terms(&self) -> &[(usize, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    pub fn lowest_exponent(&self) -> Option<usize> {
        self.terms.first().map(|t| t.0)
    }

    pub fn exponents(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn coeff(&self, e: usize) -> BigRational {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.last().map_or_else(BigRational::zero, |t| t.1.clone())
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    /// Dense ascending coefficients up to the degree.
    pub fn dense(&self) -> Vec<BigRational> {
        let Some(d) = self.degree() else {
            return vec![];
        };
        let mut v = vec![BigRational::zero(); d + 1];
        for (e, c) in &self.terms {
            v[*e] = c.clone();
        }
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.terms.iter().chain(&o.terms).cloned())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.terms.iter().cloned().chain(o.terms.iter().map(|(e, c)| (*e, -c.clone()))))
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        // multiply over the integers and rescale once per coefficient
        let (la, a) = self.integer_parts();
        let (lb, b) = o.integer_parts();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (e1, c1) in &a {
            for (e2, c2) in &b {
                *acc.entry(e1 + e2).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let l = la * lb;
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero());
        SparsePolynomial {
            terms: if l.is_one() {
                terms.map(|(e, c)| (e, BigRational::from_integer(c))).collect()
            } else {
                terms.map(|(e, c)| (e, BigRational::new(c, l.clone()))).collect()
            },
        }
    }

    /// `(L, L · terms)` with `L` the lcm of the denominators.
    fn integer_parts(&self) -> (BigInt, Vec<(usize, BigInt)>) {
        let l = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints = self.terms.iter().map(|(e, c)| (*e, c.numer() * (&l / c.denom()))).collect();
        (l, ints)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiply by `x^m`.
    pub fn shift(&self, m: usize) -> Self {
        SparsePolynomial { terms: self.terms.iter().map(|(e, c)| (e + m, c.clone())).collect() }
    }

    /// Divide by `x^m`; every exponent must be at least `m`.
    pub fn unshift(&self, m: usize) -> Self {
        assert!(self.lowest_exponent().map_or(true, |e| e >= m), "unshift below lowest exponent");
        SparsePolynomial { terms: self.terms.iter().map(|(e, c)| (e - m, c.clone())).collect() }
    }

    /// `f(x) ↦ f(x^l)`.
    pub fn compose_power(&self, l: usize) -> Self {
        SparsePolynomial { terms: self.terms.iter().map(|(e, c)| (e * l, c.clone())).collect() }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e - 1, c * BigRational::from_integer(BigInt::from(*e)))),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Horner over the dense range, skipping gaps with powers.
        let mut acc = BigRational::zero();
        let mut prev = match self.degree() {
            Some(d) => d,
            None => return acc,
        };
        for (e, c) in self.terms.iter().rev() {
            if prev > *e {
                acc *= pow_rat(x, prev - e);
            }
            acc += c;
            prev = *e;
        }
        acc * pow_rat(x, prev)
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        SparsePolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, if e % 2 == 1 { -c.clone() } else { c.clone() })).collect(),
        }
    }

    /// Long division over Q: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lc = d.leading_coeff();
        let mut r = self.dense();
        let dv = d.dense();
        let mut q = vec![];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] / &lc;
            if !c.is_zero() {
                for (j, dj) in dv.iter().enumerate() {
                    let t = &c * dj;
                    r[top - dd + j] -= t;
                }
                q.push((top - dd, c));
            }
            r.pop();
        }
        (Self::new(q), Self::new(r.into_iter().enumerate()))
    }

    /// Number of coefficient sign changes in exponent order.
    pub fn sign_changes(&self) -> usize {
        self.terms.windows(2).filter(|w| w[0].1.is_positive() != w[1].1.is_positive()).count()
    }
}

pub(crate) fn pow_rat(x: &BigRational, k: usize) -> BigRational {
    num_traits::pow::pow(x.clone(), k)
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{c}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arithmetic() {
        let a = SparsePolynomial::from_coeffs(&[1, 1]);
        let b = SparsePolynomial::from_coeffs(&[-1, 1]);
        assert_eq!(a.mul(&b), SparsePolynomial::from_coeffs(&[-1, 0, 1]));
        assert_eq!(a.pow(3), SparsePolynomial::from_coeffs(&[1, 3, 3, 1]));
        assert_eq!(a.compose_power(2), SparsePolynomial::from_coeffs(&[1, 0, 1]));
        assert_eq!(a.pow(3).derivative(), SparsePolynomial::from_coeffs(&[3, 6, 3]));
        assert_eq!(a.sub(&a), SparsePolynomial::zero());
        assert_eq!(a.pow(3).eval(&q(2)), q(27));
        assert_eq!(SparsePolynomial::from_coeffs(&[0, 0, 5]).eval(&q(3)), q(45));
        let (qq, r) = SparsePolynomial::from_coeffs(&[-1, 0, 1]).div_rem(&b);
        assert_eq!(qq, a);
        assert!(r.is_zero());
        assert_eq!(SparsePolynomial::from_roots(&[q(1), q(-1)]), SparsePolynomial::from_coeffs(&[-1, 0, 1]));
        assert_eq!(SparsePolynomial::from_coeffs(&[2, -3, 1]).sign_changes(), 2);
    }
}
