//! Dense integer polynomials used inside the Sturm and gcd kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SparsePolynomial;

const PRIMES: [u64; 3] = [(1 << 61) - 1, 1_000_000_007, 998_244_353];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    r
}

fn reduce_mod(a: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a.0.iter().map(|c| u64::try_from(c.mod_floor(&pb)).unwrap()).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Degree of `gcd(a mod p, b mod p)`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    while !b.is_empty() {
        // a ← a mod b
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = mul_mod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, x) in b.iter().enumerate() {
                let t = mul_mod(c, *x, p);
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Certifies `gcd(a, b) = 1` over `Q`: a common factor of positive degree
/// keeps its degree modulo any prime not dividing both leading coefficients.
fn coprime_mod_p(a: &ZPoly, b: &ZPoly) -> bool {
    PRIMES.iter().any(|&p| {
        let (ra, rb) = (reduce_mod(a, p), reduce_mod(b, p));
        ra.len() == a.0.len() && rb.len() == b.0.len() && gcd_degree_mod(ra, rb, p) == 0
    })
}

/// Ascending integer coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn trimmed(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    /// Clear denominators by a positive factor; the result is primitive with
    /// positive content, so signs are preserved.
    pub fn from_sparse(f: &SparsePolynomial) -> Self {
        let l = f.terms().iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let dense: Vec<BigInt> = f.dense().into_iter().map(|c| (c * &l).to_integer()).collect();
        ZPoly::trimmed(dense).primitive()
    }

    pub fn to_sparse(&self) -> SparsePolynomial {
        SparsePolynomial::from_int_coeffs(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the (positive) content.
    pub fn primitive(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let g = self.content();
        if g.is_one() {
            self
        } else {
            ZPoly(self.0.into_iter().map(|c| c / &g).collect())
        }
    }

    pub fn neg(self) -> Self {
        ZPoly(self.0.into_iter().map(|c| -c).collect())
    }

    pub fn derivative(&self) -> Self {
        ZPoly::trimmed(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn prem(a: &ZPoly, b: &ZPoly) -> ZPoly {
        let db = b.degree();
        if a.is_zero() || a.degree() < db {
            return a.clone();
        }
        let lcb = b.lc().clone();
        let mut r = a.0.clone();
        let mut e = a.degree() - db + 1;
        while !r.is_empty() && r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c *= &lcb;
            }
            for (j, bj) in b.0.iter().enumerate() {
                r[shift + j] -= &lr * bj;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        if e > 0 {
            let f = num_traits::pow(lcb, e);
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        ZPoly::trimmed(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        let mut a = a.clone().primitive();
        let mut b = b.clone().primitive();
        if a.is_zero() {
            return b.normalize_sign();
        }
        if b.is_zero() {
            return a.normalize_sign();
        }
        if coprime_mod_p(&a, &b) {
            return ZPoly(vec![BigInt::one()]);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = ZPoly::prem(&a, &b).primitive();
            a = b;
            b = r;
        }
        a.normalize_sign()
    }

    pub fn normalize_sign(self) -> Self {
        if !self.is_zero() && self.lc().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Exact quotient `a / b` up to a positive scalar.
    pub fn div_exact(a: &ZPoly, b: &ZPoly) -> ZPoly {
        let (q, r) = a.to_sparse().div_rem(&b.to_sparse());
        debug_assert!(r.is_zero(), "inexact polynomial division");
        ZPoly::from_sparse(&q)
    }

    /// Square-free part (roots without multiplicity), positive scalar.
    pub fn squarefree(&self) -> ZPoly {
        let g = ZPoly::gcd(self, &self.derivative());
        if g.degree() == 0 {
            self.clone().primitive()
        } else {
            ZPoly::div_exact(self, &g)
        }
    }

    /// Sign of `self(p/q)`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        // Homogeneous evaluation: Σ c_i p^i q^(d-i), q > 0.
        let p = x.numer();
        let q = x.denom();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (i, c) in self.0.iter().rev().enumerate() {
            if i == 0 {
                acc = c.clone();
                qpow = q.clone();
            } else {
                acc = acc * p + c * &qpow;
                qpow *= q;
            }
        }
        sign_of(&acc)
    }

    /// Sign as x → +∞ (`positive = true`) or −∞.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let s = sign_of(self.lc());
        if positive || self.degree() % 2 == 0 {
            s
        } else {
            -s
        }
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
