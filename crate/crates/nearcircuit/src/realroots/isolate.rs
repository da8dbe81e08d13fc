use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dense::ZPoly;
use super::sturm::SturmChain;
use super::{Bound, SparsePolynomial};
use crate::error::{Error, Result};

/// Where an isolated root lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(BigRational),
    /// Open interval containing exactly one root.
    Interval(BigRational, BigRational),
}

impl RootLocation {
    pub fn lo(&self) -> &BigRational {
        match self {
            RootLocation::Exact(x) => x,
            RootLocation::Interval(a, _) => a,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            RootLocation::Exact(x) => x,
            RootLocation::Interval(_, b) => b,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lo() + self.hi()) / BigRational::from_integer(2.into())
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub location: RootLocation,
    pub multiplicity: usize,
}

/// Disjoint isolating intervals (or exact points), sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootIsolation {
    pub roots: Vec<IsolatedRoot>,
}

impl RootIsolation {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// A power of two strictly exceeding the absolute value of every root.
pub(crate) fn root_bound(f: &ZPoly) -> BigRational {
    let lc = f.lc().abs();
    let mut m = BigRational::zero();
    for c in &f.0[..f.0.len() - 1] {
        let r = BigRational::new(c.abs(), lc.clone());
        if r > m {
            m = r;
        }
    }
    let bound = m + BigRational::one();
    let mut p = BigRational::one();
    while p <= bound {
        p *= BigRational::from_integer(2.into());
    }
    p
}

/// Isolate the real roots of `f` by bisection with dyadic endpoints until
/// every interval is narrower than `width`.
pub fn isolate(f: &SparsePolynomial, width: &BigRational) -> Result<RootIsolation> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let z = ZPoly::from_sparse(f);
    let chain = SturmChain::from_zpoly(&z);
    let s = chain.head().clone();
    if s.degree() == 0 {
        return Ok(RootIsolation::default());
    }
    // Multiplicity classes from the derivative gcd chain: layers[j] holds the
    // square-free polynomial whose roots are those of multiplicity > j.
    let mut layers: Vec<SturmChain> = vec![];
    let mut g = z.clone();
    while g.degree() > 0 {
        let c = SturmChain::from_zpoly(&g);
        layers.push(c);
        g = ZPoly::gcd(&g, &g.derivative());
    }
    let multiplicity = |loc: &RootLocation| -> usize {
        layers
            .iter()
            .take_while(|c| match loc {
                RootLocation::Exact(x) => c.is_root(x),
                RootLocation::Interval(a, b) => c.count_open(&Bound::Finite(a.clone()), &Bound::Finite(b.clone())) > 0,
            })
            .count()
    };

    let b = root_bound(&s);
    let mut stack = vec![(-b.clone(), b)];
    let mut found: Vec<RootLocation> = vec![];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count_open(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 && &hi - &lo < *width {
            found.push(RootLocation::Interval(lo, hi));
            continue;
        }
        let mid = (&lo + &hi) * half();
        if s.sign_at(&mid) == 0 {
            found.push(RootLocation::Exact(mid.clone()));
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    found.sort_by(|x, y| x.lo().cmp(y.lo()));
    let roots = found
        .into_iter()
        .map(|location| {
            let multiplicity = multiplicity(&location);
            IsolatedRoot { location, multiplicity }
        })
        .collect();
    Ok(RootIsolation { roots })
}

/// Shrink an isolating interval of a simple root of the square-free `s`
/// by bisection until narrower than `width`.
pub(crate) fn refine(s: &ZPoly, loc: &RootLocation, width: &BigRational) -> RootLocation {
    let RootLocation::Interval(a, b) = loc else {
        return loc.clone();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let sa = s.sign_at(&a);
    let sb = s.sign_at(&b);
    if sa != 0 && sb != 0 && sa != sb {
        while &b - &a >= *width {
            let m = (&a + &b) * half();
            let sm = s.sign_at(&m);
            if sm == 0 {
                return RootLocation::Exact(m);
            }
            if sm == sa {
                a = m;
            } else {
                b = m;
            }
        }
        return RootLocation::Interval(a, b);
    }
    let chain = SturmChain::from_zpoly(s);
    while &b - &a >= *width {
        let m = (&a + &b) * half();
        if s.sign_at(&m) == 0 {
            return RootLocation::Exact(m);
        }
        if chain.count_open(&Bound::Finite(a.clone()), &Bound::Finite(m.clone())) > 0 {
            b = m;
        } else {
            a = m;
        }
    }
    RootLocation::Interval(a, b)
}

/// Sign of `p` at the unique root of the square-free `s` located by `loc`.
pub fn sign_at_root(p: &SparsePolynomial, s: &SparsePolynomial, loc: &RootLocation) -> Result<i8> {
    let pz = ZPoly::from_sparse(p);
    if pz.is_zero() {
        return Ok(0);
    }
    let (a, b) = match loc {
        RootLocation::Exact(x) => return Ok(pz.sign_at(x)),
        RootLocation::Interval(a, b) => (a.clone(), b.clone()),
    };
    let sz = ZPoly::from_sparse(s).squarefree();
    let g = ZPoly::gcd(&pz, &sz);
    if g.degree() > 0 {
        let gc = SturmChain::from_zpoly(&g);
        if gc.count_open(&Bound::Finite(a.clone()), &Bound::Finite(b.clone())) > 0 {
            return Ok(0);
        }
    }
    let pc = SturmChain::from_zpoly(&pz);
    let sc = SturmChain::from_zpoly(&sz);
    let (mut a, mut b) = (a, b);
    for _ in 0..20_000 {
        let clear = pz.sign_at(&a) != 0
            && pz.sign_at(&b) != 0
            && pc.count_open(&Bound::Finite(a.clone()), &Bound::Finite(b.clone())) == 0;
        if clear {
            return Ok(pz.sign_at(&a));
        }
        let m = (&a + &b) * half();
        if sz.sign_at(&m) == 0 {
            return Ok(pz.sign_at(&m));
        }
        if sc.count_open(&Bound::Finite(a.clone()), &Bound::Finite(m.clone())) > 0 {
            b = m;
        } else {
            a = m;
        }
    }
    Err(Error::HypothesisViolated("sign evaluation at an algebraic root did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn double_and_simple_root() {
        let f = SparsePolynomial::from_coeffs(&[2, -3, 0, 1]);
        let iso = isolate(&f, &q(1, 1024)).unwrap();
        assert_eq!(iso.len(), 2);
        let r0 = &iso.roots[0];
        assert!(r0.location.lo() <= &q(-2, 1) && r0.location.hi() >= &q(-2, 1));
        assert_eq!(r0.multiplicity, 1);
        assert_eq!(iso.roots[1].multiplicity, 2);
        assert_eq!(iso.total_multiplicity(), 3);
    }

    #[test]
    fn sqrt_two() {
        let f = SparsePolynomial::from_coeffs(&[-2, 0, 1]);
        let iso = isolate(&f, &q(1, 1 << 20)).unwrap();
        assert_eq!(iso.len(), 2);
        let r = &iso.roots[1].location;
        assert!(r.lo() * r.lo() < q(2, 1) && r.hi() * r.hi() > q(2, 1));
        assert!(r.width() < q(1, 1 << 20));
    }

    #[test]
    fn sign_at_algebraic_root() {
        let s = SparsePolynomial::from_coeffs(&[-2, 0, 1]);
        let iso = isolate(&s, &q(1, 2)).unwrap();
        let p = SparsePolynomial::from_coeffs(&[-3, 2]); // 2x - 3 at ±√2
        assert_eq!(sign_at_root(&p, &s, &iso.roots[0].location).unwrap(), -1);
        assert_eq!(sign_at_root(&p, &s, &iso.roots[1].location).unwrap(), -1);
        let p = SparsePolynomial::from_coeffs(&[-2, 0, 1]).mul(&SparsePolynomial::from_coeffs(&[1, 1]));
        assert_eq!(sign_at_root(&p, &s, &iso.roots[1].location).unwrap(), 0);
        let p = SparsePolynomial::from_coeffs(&[0, 1]);
        assert_eq!(sign_at_root(&p, &s, &iso.roots[0].location).unwrap(), -1);
    }
}
