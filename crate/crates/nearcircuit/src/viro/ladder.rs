use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::Interval;
use crate::realroots::dense::ZPoly;
use crate::realroots::{isolate, refine, sturm_count, Bound, RootLocation, SparsePolynomial};

const REFINE_ROUNDS: u32 = 24;

/// `−λ − f` with its exact number of distinct real roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderRung {
    pub shift: BigRational,
    pub polynomial: SparsePolynomial,
    pub count: usize,
}

fn all_roots(f: &SparsePolynomial) -> Result<usize> {
    sturm_count(f, &Bound::NegInf, &Bound::PosInf, false)
}

/// Enclosures of the critical values of `f`, pairwise disjoint and sorted.
fn critical_values(f: &SparsePolynomial) -> Result<Vec<Interval>> {
    let df = f.derivative();
    if df.degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let iso = isolate(&df, &BigRational::one())?;
    if iso.roots.iter().any(|r| r.multiplicity > 1) {
        return Err(Error::CriticalValueCollision);
    }
    let s = ZPoly::from_sparse(&df).squarefree();
    let mut locs: Vec<RootLocation> = iso.roots.into_iter().map(|r| r.location).collect();
    for round in 0..REFINE_ROUNDS {
        let bits = 32 + 16 * round;
        let width = BigRational::new(BigInt::one(), BigInt::one() << (8 + 8 * round) as usize);
        locs = locs.iter().map(|l| refine(&s, l, &width)).collect();
        let mut values: Vec<Interval> = locs
            .iter()
            .map(|l| match l {
                RootLocation::Exact(x) => Interval::point(f.eval(x)),
                RootLocation::Interval(a, b) => Interval::eval_poly(f, &Interval::new(a.clone(), b.clone()), bits),
            })
            .collect();
        values.sort_by(|a, b| a.lo().cmp(b.lo()));
        if values.windows(2).all(|w| w[0].hi() < w[1].lo()) {
            return Ok(values);
        }
    }
    Err(Error::CriticalValueCollision)
}

/// Shifts of `f` realizing every other root count reachable by moving a
/// horizontal level across the critical values of `f`, highest count first.
/// Each level is a rational strictly between consecutive critical values.
pub fn root_ladder(f: &SparsePolynomial) -> Result<Vec<LadderRung>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let base = all_roots(f)?;
    let values = critical_values(f)?;
    if values.is_empty() {
        return Ok(vec![]);
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    // (level, a nearby point inside the same region to fall back on)
    let mut levels: Vec<(BigRational, BigRational)> = vec![];
    levels.push((values[0].lo() - &one, values[0].lo() - &two));
    for w in values.windows(2) {
        let mid = (w[0].hi() + w[1].lo()) / &two;
        let alt = (w[0].hi() + &mid) / &two;
        levels.push((mid, alt));
    }
    let last = values.last().unwrap();
    levels.push((last.hi() + &one, last.hi() + &two));
    let f0 = f.constant_term();
    let mut by_count: BTreeMap<usize, LadderRung> = BTreeMap::new();
    for (c, alt) in levels {
        // Keep zero out of the shifted polynomial's roots.
        let c = if c == f0 { alt } else { c };
        let h = SparsePolynomial::constant(c.clone()).sub(f);
        let count = all_roots(&h)?;
        if count != base {
            by_count.entry(count).or_insert(LadderRung { shift: -c, polynomial: h, count });
        }
    }
    Ok(by_count.into_values().rev().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn cubic_and_square() {
        let f = SparsePolynomial::from_coeffs(&[0, -1, 0, 1]);
        let rungs = root_ladder(&f).unwrap();
        assert_eq!(rungs.iter().map(|r| r.count).collect::<Vec<_>>(), vec![1]);
        let sq = SparsePolynomial::from_coeffs(&[0, 0, 1]);
        let rungs = root_ladder(&sq).unwrap();
        assert_eq!(rungs.iter().map(|r| r.count).collect::<Vec<_>>(), vec![2, 0]);
        assert!(rungs[0].shift < BigRational::zero());
        assert!(root_ladder(&SparsePolynomial::from_coeffs(&[3, 1])).unwrap().is_empty());
    }

    #[test]
    fn quartic_steps() {
        // (x^2 − 1)(x^2 − 4) − x/8 has four real roots and distinct critical values.
        let f = SparsePolynomial::new([
            (0, BigRational::from_integer(4.into())),
            (1, BigRational::new((-1).into(), 8.into())),
            (2, BigRational::from_integer((-5).into())),
            (4, BigRational::one()),
        ]);
        let counts: Vec<usize> = root_ladder(&f).unwrap().iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![2, 0]);
    }

    #[test]
    fn equal_critical_values_collide() {
        let f = SparsePolynomial::from_coeffs(&[0, 0, -2, 0, 1]);
        assert_eq!(root_ladder(&f), Err(Error::CriticalValueCollision));
    }
}
