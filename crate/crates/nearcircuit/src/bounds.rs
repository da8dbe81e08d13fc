//! Closed-form upper bounds and sharp values for the number of real
//! solutions of generic systems supported on simplices and near circuits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{invariant_factors, normalized_volume, to_primitive_coordinates, SupportSet};
use crate::realroots::descartes_gap_bound;
use crate::supports::{classify, near_circuit_data, NearCircuitData, SupportClass};
use crate::systems::{congruence_constraints, Congruence};

/// `0` for `a ≤ 0`, `1` for positive odd `a`, `2` for positive even `a`.
pub fn overline(a: &BigInt) -> u64 {
    if !a.is_positive() {
        0
    } else if a.is_odd() {
        1
    } else {
        2
    }
}

pub fn overline_u(a: u64) -> u64 {
    overline(&BigInt::from(a))
}

pub fn chi(y: bool) -> u64 {
    u64::from(y)
}

/// `2^n · 2^(m(m−1)/2) · (n+1)^m`.
pub fn khovanskii_bound(n: u64, m: u64) -> BigInt {
    let e = n + m * m.saturating_sub(1) / 2;
    (BigInt::one() << e as usize) * num_traits::pow(BigInt::from(n + 1), m as usize)
}

/// Possible numbers of real solutions of a generic system supported on a simplex.
pub fn simplex_bound(a: &SupportSet) -> Result<Vec<BigInt>> {
    if classify(a)? != SupportClass::Simplex {
        return Err(Error::NotSimplex);
    }
    let inv = invariant_factors(a)?;
    if inv.index.is_odd() {
        Ok(vec![BigInt::one()])
    } else {
        Ok(vec![BigInt::zero(), BigInt::one() << inv.e_count])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperBounds {
    pub b1: u64,
    pub b2: u64,
    pub b3: Option<u64>,
}

impl UpperBounds {
    pub fn min(&self) -> u64 {
        let m = self.b1.min(self.b2);
        self.b3.map_or(m, |b| m.min(b))
    }
}

struct Params {
    k: u64,
    lb: u64,
    p: u64,
    nu: u64,
    n_pos: bool,
    n_zero: bool,
    n_even: bool,
    n_odd: bool,
    d_pos: bool,
    d_neg: bool,
    d_zero: bool,
    d_odd: bool,
    bar_pos: u64,
    bar_neg: u64,
}

fn params(d: &NearCircuitData) -> Params {
    let n = &d.big_n;
    let delta = &d.delta;
    Params {
        k: d.k as u64,
        lb: overline_u(d.ell as u64),
        p: d.p as u64,
        nu: d.nu as u64,
        n_pos: n.is_positive(),
        n_zero: n.is_zero(),
        n_even: n.is_positive() && n.is_even(),
        n_odd: n.is_odd(),
        d_pos: delta.is_positive(),
        d_neg: delta.is_negative(),
        d_zero: delta.is_zero(),
        d_odd: delta.is_odd(),
        bar_pos: d.lambdas[..d.p].iter().map(overline).sum(),
        bar_neg: d.lambdas[d.p..].iter().map(overline).sum(),
    }
}

/// Replace a non-primitive near circuit of odd index by its primitive
/// re-coordinatization.
pub fn primitive_data(d: &NearCircuitData) -> Result<NearCircuitData> {
    if d.primitive {
        return Ok(d.clone());
    }
    if d.index.is_even() {
        return Err(Error::IndexNotOdd(d.index.to_string()));
    }
    let (a, _) = to_primitive_coordinates(&d.support.translated(&d.apex))?;
    near_circuit_data(&a)
}

fn upper_bounds_primitive(d: &NearCircuitData) -> UpperBounds {
    let q = params(d);
    let tail = q.lb * (chi(q.d_zero) + chi(q.n_zero)) + chi(q.d_zero);
    let b1 = (2 * q.k * q.lb * q.p + q.k * q.lb * q.bar_neg + chi(q.n_pos) + 1)
        .saturating_sub(chi(q.d_pos && q.d_odd) + tail);
    let b2 = (2 * q.k * q.lb * (q.nu - q.p) + q.k * q.lb * q.bar_pos + chi(q.n_even) + 1)
        .saturating_sub(chi(q.d_neg && q.d_odd) + tail);
    let b3 = (d.ell % 2 == 0 && q.n_odd).then_some(2 * q.k * q.nu + 1);
    UpperBounds { b1, b2, b3 }
}

/// The three upper bounds on real solutions for a near circuit.
pub fn near_circuit_upper_bounds(d: &NearCircuitData) -> Result<UpperBounds> {
    Ok(upper_bounds_primitive(&primitive_data(d)?))
}

/// `k(2ν−1)+2` for odd `ℓ`, `2kν+1` for even `ℓ`.
pub fn absolute_bound(d: &NearCircuitData) -> Result<u64> {
    let d = primitive_data(d)?;
    let (k, nu) = (d.k as u64, d.nu as u64);
    Ok(if d.ell % 2 == 1 { k * (2 * nu - 1) + 2 } else { 2 * k * nu + 1 })
}

/// Maximal possible number of real solutions, with the rule establishing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpValue {
    pub value: u64,
    pub rule: &'static str,
}

/// Values for the two mirrored parts whose statement may read `n` or `ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirroredSharpValue {
    pub rule: &'static str,
    pub with_n: u64,
    pub with_nu: u64,
}

fn sum(xs: &[BigInt]) -> BigInt {
    xs.iter().sum()
}

/// The maximal number of real solutions when one of the known sharp cases
/// applies.
pub fn sharp_value(d: &NearCircuitData) -> Result<Option<SharpValue>> {
    let d = primitive_data(d)?;
    let q = params(&d);
    let kl = BigInt::from(d.k * d.ell);
    let s_pos = sum(&d.lambdas[..d.p]);
    let s_neg = sum(&d.lambdas[d.p..]);
    let large_n = d.big_n > &kl * &s_neg;
    let ell_odd = d.ell % 2 == 1;
    let pos_odd = d.lambdas[..d.p].iter().filter(|x| x.is_odd()).count();

    if large_n && !ell_odd {
        return Ok(Some(SharpValue { value: 2 * q.k * q.nu + 1, rule: "large-N-even-ell" }));
    }
    if large_n && pos_odd == 0 {
        let value = 2 * q.k * q.p + q.k * q.bar_neg + overline(&d.delta);
        return Ok(Some(SharpValue { value, rule: "large-N-even-positive-lambdas" }));
    }
    if large_n && pos_odd == 1 && d.k == 1 && d.ell == 1 && d.delta.is_odd() {
        let value = 2 * q.p + 1 + q.bar_neg;
        return Ok(Some(SharpValue { value, rule: "large-N-one-odd-positive-lambda" }));
    }
    let small_lambdas = d.lambdas.iter().all(|x| *x == BigInt::one() || *x == BigInt::from(2));
    if small_lambdas && ell_odd {
        if large_n {
            let total = (BigInt::from(d.k) * sum(&d.lambdas)).to_u64().unwrap();
            let value = total + overline(&(&d.big_n - &kl * &s_neg));
            return Ok(Some(SharpValue { value, rule: "lambdas-one-or-two-large-N" }));
        }
        let kk = BigInt::from(d.k);
        if d.ell == 1 && d.big_n < &kk * &s_neg {
            let v = (&kk * &s_neg).max(&d.big_n + &kk * &s_pos);
            return Ok(Some(SharpValue { value: v.to_u64().unwrap(), rule: "lambdas-one-or-two-small-N" }));
        }
    }
    Ok(None)
}

/// Mirrored parts of the large-`N` sharp statement (negative-side parity
/// conditions), reported with both readings of the ambient count.
pub fn mirrored_sharp_values(d: &NearCircuitData) -> Result<Option<MirroredSharpValue>> {
    let d = primitive_data(d)?;
    let q = params(&d);
    let kl = BigInt::from(d.k * d.ell);
    if d.ell % 2 == 0 || d.big_n <= &kl * sum(&d.lambdas[d.p..]) {
        return Ok(None);
    }
    let n = d.n as u64;
    let neg_odd = d.lambdas[d.p..].iter().filter(|x| x.is_odd()).count();
    if neg_odd == 0 {
        let base = q.k * q.bar_pos + overline(&d.big_n);
        return Ok(Some(MirroredSharpValue {
            rule: "large-N-even-negative-lambdas",
            with_n: 2 * q.k * (n - q.p) + base,
            with_nu: 2 * q.k * (q.nu - q.p) + base,
        }));
    }
    if neg_odd == 1 && d.k == 1 && d.ell == 1 && d.big_n.is_odd() {
        return Ok(Some(MirroredSharpValue {
            rule: "large-N-one-odd-negative-lambda",
            with_n: 2 * (n - q.p) + 1 + q.bar_pos,
            with_nu: 2 * (q.nu - q.p) + 1 + q.bar_pos,
        }));
    }
    Ok(None)
}

/// Real-root count guaranteed by the patchworking construction for
/// degrees `d_i ≤ k`, or `None` if the degrees are not admissible.
pub fn construction_count(d: &NearCircuitData, degrees: &[usize]) -> Option<u64> {
    if degrees.len() != d.nu || degrees.iter().any(|&x| x > d.k) {
        return None;
    }
    let ell = BigInt::from(d.ell);
    let weighted: BigInt = degrees.iter().zip(&d.lambdas).map(|(&di, l)| BigInt::from(di) * l).sum();
    let rhs = &d.big_n + BigInt::from(d.k) * &ell * sum(&d.lambdas[..d.p]);
    let gap = &rhs - &ell * &weighted;
    if !gap.is_positive() {
        return None;
    }
    if d.ell % 2 == 1 {
        let s: u64 = degrees.iter().zip(&d.lambdas).map(|(&di, l)| di as u64 * overline(l)).sum();
        Some(s + overline(&gap))
    } else {
        Some(2 * degrees.iter().map(|&x| x as u64).sum::<u64>() + 1)
    }
}

/// Count reached by the single-edge construction (all roots from the
/// negative side), available when `ℓ` is odd and `δ ≤ 0`.
pub fn single_edge_count(d: &NearCircuitData) -> Option<u64> {
    if d.ell % 2 == 0 || d.delta.is_positive() {
        return None;
    }
    Some(d.k as u64 * d.lambdas[d.p..].iter().map(overline).sum::<u64>())
}

/// All admissible degree vectors, best count first.
pub fn construction_degrees(d: &NearCircuitData) -> Vec<(Vec<usize>, u64)> {
    let mut out = vec![];
    let mut cur = vec![0usize; d.nu];
    loop {
        if let Some(c) = construction_count(d, &cur) {
            out.push((cur.clone(), c));
        }
        let mut i = 0;
        while i < d.nu && cur[i] == d.k {
            cur[i] = 0;
            i += 1;
        }
        if i == d.nu {
            break;
        }
        cur[i] += 1;
    }
    // Prefer larger counts, then full degrees (no perturbation needed).
    out.sort_by(|a, b| {
        b.1.cmp(&a.1).then_with(|| b.0.iter().sum::<usize>().cmp(&a.0.iter().sum())).then(a.0.cmp(&b.0))
    });
    out
}

/// Best lower bound on the maximal count available from the constructions.
pub fn construction_lower_bound(d: &NearCircuitData) -> u64 {
    let a = construction_degrees(d).first().map_or(0, |x| x.1);
    a.max(single_edge_count(d).unwrap_or(0))
}

/// Exponents of the generic eliminant.
pub fn eliminant_exponents(d: &NearCircuitData) -> Vec<usize> {
    let n = d.n_usize();
    let kp = d.k * d.sum_pos().to_usize().unwrap();
    let kn = d.k * d.sum_neg().to_usize().unwrap();
    let mut e: Vec<usize> = (0..=kp).map(|j| n + d.ell * j).chain((0..=kn).map(|j| d.ell * j)).collect();
    e.sort_unstable();
    e.dedup();
    e
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub class: SupportClass,
    pub kouchnirenko: BigInt,
    pub khovanskii: BigInt,
    pub congruence: Congruence,
    pub simplex_counts: Option<Vec<BigInt>>,
    pub descartes_gap: Option<u64>,
    pub upper: Option<UpperBounds>,
    pub absolute: Option<u64>,
    pub sharp: Option<SharpValue>,
    pub mirrored: Option<MirroredSharpValue>,
    /// `[construction lower bound, min upper bound]` when no sharp value is known.
    pub interval: Option<(u64, u64)>,
    /// Whether bounds were computed on a primitive re-coordinatization.
    pub recoordinatized: bool,
}

pub fn bound_report(a: &SupportSet) -> Result<BoundReport> {
    let class = classify(a)?;
    let mut r = BoundReport {
        class,
        kouchnirenko: normalized_volume(a)?,
        khovanskii: khovanskii_bound(a.dim() as u64, a.len() as u64),
        congruence: congruence_constraints(a)?,
        simplex_counts: None,
        descartes_gap: None,
        upper: None,
        absolute: None,
        sharp: None,
        mirrored: None,
        interval: None,
        recoordinatized: false,
    };
    match class {
        SupportClass::Simplex => r.simplex_counts = Some(simplex_bound(a)?),
        SupportClass::Circuit | SupportClass::NearCircuit if a.dim() >= 2 => {
            let raw = near_circuit_data(a)?;
            let d = primitive_data(&raw)?;
            r.recoordinatized = !raw.primitive;
            let up = upper_bounds_primitive(&d);
            r.descartes_gap = Some(descartes_gap_bound(&eliminant_exponents(&d))?);
            r.upper = Some(up);
            r.absolute = Some(absolute_bound(&d)?);
            r.sharp = sharp_value(&d)?;
            r.mirrored = mirrored_sharp_values(&d)?;
            if r.sharp.is_none() {
                r.interval = Some((construction_lower_bound(&d), up.min()));
            }
        }
        _ => {}
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::{construct_near_circuit, delta_family};

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn overline_and_chi() {
        assert_eq!([-3, 0, 1, 2, 7, 8].map(|a| overline(&BigInt::from(a))), [0, 0, 1, 2, 1, 2]);
        assert_eq!(chi(1 < 0), 0);
        assert_eq!(chi(0 < 1), 1);
    }

    #[test]
    fn khovanskii_examples() {
        assert_eq!(khovanskii_bound(2, 5), BigInt::from(995_328));
        assert_eq!(khovanskii_bound(1, 1), BigInt::from(4));
        assert_eq!(khovanskii_bound(2, 6), BigInt::from(95_551_488));
    }

    #[test]
    fn simplex_examples() {
        let s =
            |pts: &[[i64; 2]]| SupportSet::from_i64(2, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap();
        assert_eq!(simplex_bound(&s(&[[0, 0], [1, 0], [0, 1]])).unwrap(), b(&[1]));
        assert_eq!(simplex_bound(&s(&[[0, 0], [2, 0], [0, 2]])).unwrap(), b(&[0, 4]));
        assert_eq!(simplex_bound(&s(&[[0, 0], [1, 0], [0, 2]])).unwrap(), b(&[0, 2]));
        assert_eq!(simplex_bound(&s(&[[0, 0], [1, 0], [0, 1], [1, 1]])), Err(Error::NotSimplex));
    }

    #[test]
    fn upper_bound_examples() {
        let a = construct_near_circuit(2, 1, 1, &3.into(), 1, &b(&[2, 1])).unwrap();
        let d = near_circuit_data(&a).unwrap();
        assert_eq!(d.delta, 4.into());
        let u = near_circuit_upper_bounds(&d).unwrap();
        assert_eq!((u.b1, u.b2, u.b3), (5, 5, None));

        let a = construct_near_circuit(2, 1, 2, &3.into(), 1, &b(&[1, 1])).unwrap();
        let d = near_circuit_data(&a).unwrap();
        assert_eq!(near_circuit_upper_bounds(&d).unwrap().b3, Some(5));
        assert_eq!(absolute_bound(&d).unwrap(), 5);
        assert_eq!(sharp_value(&d).unwrap().unwrap().value, 5);
    }

    #[test]
    fn delta_family_values() {
        for k in 1..=5usize {
            for l in k + 1..=6 {
                for eps in [vec![1u8, 0], vec![1, 1]] {
                    let d = near_circuit_data(&delta_family(3, k, l, &eps).unwrap()).unwrap();
                    let e = eps.iter().filter(|&&x| x == 1).count() as u64;
                    let (k, l) = (k as u64, l as u64);
                    let sharp = sharp_value(&d).unwrap().unwrap();
                    assert_eq!(sharp.value, k * (e + 1) + overline_u(l - k));
                    let u = near_circuit_upper_bounds(&d).unwrap();
                    assert!(u.min() >= sharp.value);
                    let gap = descartes_gap_bound(&eliminant_exponents(&d)).unwrap();
                    assert_eq!(gap, k + k * e + overline_u(l - k));
                }
            }
        }
    }

    #[test]
    fn absolute_examples() {
        let a = construct_near_circuit(3, 1, 1, &1.into(), 0, &b(&[1, 1, 1])).unwrap();
        assert_eq!(absolute_bound(&near_circuit_data(&a).unwrap()).unwrap(), 7);
        let a = construct_near_circuit(3, 2, 1, &2.into(), 1, &b(&[2, 2, 1])).unwrap();
        assert_eq!(absolute_bound(&near_circuit_data(&a).unwrap()).unwrap(), 12);
    }

    #[test]
    fn small_n_sharp_case() {
        // λ = (1, 2), ℓ = 1, N < kΣ_{i>p} λ_i.
        let a = construct_near_circuit(2, 1, 1, &1.into(), 1, &b(&[1, 2])).unwrap();
        let d = near_circuit_data(&a).unwrap();
        let s = sharp_value(&d).unwrap().unwrap();
        assert_eq!(s.rule, "lambdas-one-or-two-small-N");
        assert_eq!(BigInt::from(s.value), d.eliminant_degree());
    }

    #[test]
    fn construction_counts() {
        let d = near_circuit_data(&delta_family(3, 3, 5, &[1, 1]).unwrap()).unwrap();
        assert_eq!(construction_count(&d, &[3, 3, 3]), Some(11));
        assert_eq!(construction_lower_bound(&d), 11);
        assert_eq!(construction_count(&d, &[4, 0, 0]), None);
    }
}
