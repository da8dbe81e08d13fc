use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{rational_det, rational_rank, SupportSet};
use crate::error::{Error, Result};

type RVec = Vec<BigRational>;

fn sub(a: &RVec, b: &RVec) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Coordinates on which the affine hull of `pts` projects injectively.
fn chart(pts: &[RVec], d: usize) -> Vec<usize> {
    let n = pts[0].len();
    let diffs: Vec<RVec> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    let mut chosen = vec![];
    for c in 0..n {
        let mut trial = chosen.clone();
        trial.push(c);
        let m: Vec<RVec> = diffs.iter().map(|v| trial.iter().map(|&j| v[j].clone()).collect()).collect();
        if rational_rank(&m) == trial.len() {
            chosen = trial;
            if chosen.len() == d {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), d);
    chosen
}

fn k_subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        k_subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Facets (as index sets) of the full-dimensional polytope conv(q) ⊂ Q^d.
fn facets(q: &[RVec], d: usize) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut subsets = vec![];
    k_subsets(q.len(), d, 0, &mut vec![], &mut subsets);
    for s in subsets {
        let base = &q[s[0]];
        let rows: Vec<RVec> = s[1..].iter().map(|&i| sub(&q[i], base)).collect();
        // Normal vector by cofactor expansion of the (d-1)×d matrix.
        let normal: RVec = (0..d)
            .map(|j| {
                let minor: Vec<RVec> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let m = if minor.is_empty() { BigRational::from_integer(1.into()) } else { rational_det(&minor) };
                if j % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
            .collect();
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let side: Vec<BigRational> =
            q.iter().map(|p| sub(p, base).iter().zip(&normal).map(|(a, b)| a * b).sum()).collect();
        let pos = side.iter().any(Signed::is_positive);
        let neg = side.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        let on: Vec<usize> = (0..q.len()).filter(|&i| side[i].is_zero()).collect();
        seen.insert(on);
    }
    seen.into_iter().collect()
}

/// Triangulation of conv(pts), whose affine hull has dimension `d`, into
/// d-simplices: a fan from the centroid over triangulated facets.
fn fan_triangulation(pts: &[RVec], d: usize) -> Vec<Vec<RVec>> {
    if d == 0 {
        return vec![vec![pts[0].clone()]];
    }
    let coords = chart(pts, d);
    let q: Vec<RVec> = pts.iter().map(|p| coords.iter().map(|&j| p[j].clone()).collect()).collect();
    if d == 1 {
        let lo = (0..q.len()).min_by(|&a, &b| q[a][0].cmp(&q[b][0])).unwrap();
        let hi = (0..q.len()).max_by(|&a, &b| q[a][0].cmp(&q[b][0])).unwrap();
        return vec![vec![pts[lo].clone(), pts[hi].clone()]];
    }
    let n = pts[0].len();
    let count = BigRational::from_integer(BigInt::from(pts.len()));
    let apex: RVec = (0..n).map(|j| pts.iter().map(|p| p[j].clone()).sum::<BigRational>() / &count).collect();
    let mut out = vec![];
    for f in facets(&q, d) {
        let fpts: Vec<RVec> = f.iter().map(|&i| pts[i].clone()).collect();
        for mut simplex in fan_triangulation(&fpts, d - 1) {
            simplex.push(apex.clone());
            out.push(simplex);
        }
    }
    out
}

/// n!·vol(conv A) for a full-dimensional configuration.
pub fn normalized_volume(a: &SupportSet) -> Result<BigInt> {
    let n = a.dim();
    if !a.spans() {
        return Err(Error::NotFullRank(n));
    }
    let pts: Vec<RVec> =
        a.points().iter().map(|p| p.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut total = BigRational::zero();
    for s in fan_triangulation(&pts, n) {
        let rows: Vec<RVec> = s[1..].iter().map(|v| sub(v, &s[0])).collect();
        total += rational_det(&rows).abs();
    }
    debug_assert!(total.is_integer());
    Ok(total.to_integer())
}
