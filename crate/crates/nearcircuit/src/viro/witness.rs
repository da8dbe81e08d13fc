use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{certify, find_small_t, lower_hull, pow2, predicted_count, root_ladder, ViroInput, WitnessCertificate};
use crate::bounds::{construction_count, construction_degrees, overline, single_edge_count};
use crate::eliminant::{build_eliminant, eliminant_terms};
use crate::error::{Error, Result};
use crate::realroots::SparsePolynomial;
use crate::supports::NearCircuitData;
use crate::systems::{check_genericity, near_circuit_system, SystemSpec};

/// A generic near-circuit system together with the certificate for the
/// real-root count of its eliminant.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Degrees `d_i` of the patchworked factors; `None` for the single-edge
    /// construction.
    pub degrees: Option<Vec<usize>>,
    pub g: Vec<SparsePolynomial>,
    pub system: SystemSpec,
    pub epsilon: Option<BigRational>,
    /// `λ` when the eliminant is `−λ − f` for a ladder step from a witness `f`.
    pub ladder_shift: Option<BigRational>,
    pub certificate: WitnessCertificate,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `t^a ∏_{R_1}(t^{−b}x^ℓ − ζ)^m − x^μ ∏_{R_2}(ζ − x^ℓ)^m` with
/// `a = μ_1 + μ` and `b = 2ℓ`, so that `μ_1 < aℓ/b < μ`.
pub fn lemma_input(
    ell: usize,
    mu: usize,
    r1: &[(BigRational, usize)],
    r2: &[(BigRational, usize)],
) -> Result<ViroInput> {
    let mu1: usize = ell * r1.iter().map(|x| x.1).sum::<usize>();
    if mu1 >= mu {
        return Err(Error::ConstraintViolated(format!("need μ_1 = {mu1} < μ = {mu}")));
    }
    let b = 2 * ell as i64;
    let one = BigRational::one();
    let mut first = ViroInput::new([(0, q((mu1 + mu) as i64), one.clone())])?;
    for (zeta, m) in r1 {
        let factor = ViroInput::new([(ell, q(-b), one.clone()), (0, q(0), -zeta.clone())])?;
        first = first.mul(&factor.pow(*m));
    }
    let mut second = ViroInput::new([(mu, q(0), one.clone())])?;
    for (zeta, m) in r2 {
        let factor = ViroInput::new([(0, q(0), zeta.clone()), (ell, q(0), -one.clone())])?;
        second = second.mul(&factor.pow(*m));
    }
    Ok(first.add(&second.neg()))
}

/// `2e + o + overline(μ − μ_1)` for odd `ℓ`; `2e + 2o + 1` for even `ℓ` and odd `μ`.
pub fn lemma_count(ell: usize, mu: usize, mu1: usize, even: u64, odd: u64) -> Option<u64> {
    if ell % 2 == 1 {
        Some(2 * even + odd + overline(&(BigInt::from(mu) - BigInt::from(mu1))))
    } else if mu % 2 == 1 {
        Some(2 * even + 2 * odd + 1)
    } else {
        None
    }
}

/// Integers `u` with `Σ w_i u_i = target`, given `gcd(w) = 1`.
fn solve_linear(w: &[BigInt], target: &BigInt) -> Option<Vec<BigInt>> {
    if let Some(i) = w.iter().position(|x| x.abs().is_one()) {
        let mut u = vec![BigInt::zero(); w.len()];
        u[i] = target * &w[i];
        return Some(u);
    }
    let mut g = BigInt::zero();
    let mut coef: Vec<BigInt> = vec![];
    for x in w {
        let e = g.extended_gcd(x);
        for c in coef.iter_mut() {
            *c *= &e.x;
        }
        coef.push(e.y);
        g = e.gcd;
    }
    if !g.abs().is_one() {
        return None;
    }
    let s = target * &g;
    Some(coef.into_iter().map(|c| c * &s).collect())
}

/// Degree-`k` polynomials with fresh negative integer roots.
struct Fresh(i64);

impl Fresh {
    fn poly(&mut self, k: usize) -> SparsePolynomial {
        let roots: Vec<BigRational> = (0..k)
            .map(|_| {
                self.0 += 1;
                q(-self.0)
            })
            .collect();
        SparsePolynomial::from_roots(&roots)
    }
}

fn check_data(data: &NearCircuitData) -> Result<()> {
    if !data.primitive {
        return Err(Error::ConstraintViolated("the near circuit must be primitive".into()));
    }
    if data.big_n.to_usize().is_none() || data.lambdas.iter().any(|x| x.to_usize().is_none()) {
        return Err(Error::ConstraintViolated("exponents too large".into()));
    }
    Ok(())
}

fn eps_schedule() -> impl Iterator<Item = i64> {
    std::iter::successors(Some(2i64), |s| Some(s + (s / 2).max(2))).take_while(|&s| s <= 4096)
}

fn finish(
    data: &NearCircuitData,
    g: Vec<SparsePolynomial>,
    degrees: Option<Vec<usize>>,
    epsilon: Option<BigRational>,
    mut cert: WitnessCertificate,
    target: u64,
) -> Result<Witness> {
    let bundle = build_eliminant(data, &g)?;
    let (count, simple) = certify(&bundle.f)?;
    if !simple || count < target {
        return Err(Error::PerturbationExhausted);
    }
    cert.polynomial = bundle.f;
    cert.predicted = target;
    cert.certified = count;
    cert.simple = simple;
    let system = near_circuit_system(data, &g)?;
    Ok(Witness { degrees, g, system, epsilon, ladder_shift: None, certificate: cert })
}

/// The patchworking construction for factor degrees `d_1..d_ν`: a generic
/// system whose eliminant has at least the guaranteed number of real roots
/// (exactly that many when every `d_i = k`).
pub fn build_witness(data: &NearCircuitData, degrees: &[usize]) -> Result<Witness> {
    check_data(data)?;
    let (k, ell, p, nu) = (data.k, data.ell, data.p, data.nu);
    if degrees.len() != nu || degrees.iter().any(|&d| d > k) {
        return Err(Error::ConstraintViolated(format!("need {nu} degrees in [0, {k}]")));
    }
    let lam: Vec<usize> = (0..nu).map(|i| data.lambda_usize(i)).collect();
    let mu = data.n_usize() + ell * (0..p).map(|i| (k - degrees[i]) * lam[i]).sum::<usize>();
    let mu1 = ell * (p..nu).map(|i| degrees[i] * lam[i]).sum::<usize>();
    if mu1 >= mu {
        return Err(Error::ConstraintViolated(format!(
            "ℓΣd_iλ_i must stay below N + kℓΣ_(i≤p)λ_i (μ_1 = {mu1}, μ = {mu})"
        )));
    }
    let even: u64 = (0..nu).filter(|&i| lam[i] % 2 == 0).map(|i| degrees[i] as u64).sum();
    let odd: u64 = (0..nu).filter(|&i| lam[i] % 2 == 1).map(|i| degrees[i] as u64).sum();
    let target =
        lemma_count(ell, mu, mu1, even, odd).ok_or_else(|| Error::ConstraintViolated("ℓ even needs odd μ".into()))?;
    debug_assert_eq!(Some(target), construction_count(data, degrees));

    // Roots: R_1 (i > p) at 1, 2, … with odd λ first; R_2 (i ≤ p) from
    // |R_1| + 2 on with even λ first.
    let mut roots: Vec<Vec<i64>> = vec![vec![]; nu];
    let mut next = 1i64;
    let mut place = |idx: Vec<usize>, next: &mut i64| {
        for i in idx {
            for _ in 0..degrees[i] {
                roots[i].push(*next);
                *next += 1;
            }
        }
    };
    let r1_order: Vec<usize> =
        (p..nu).filter(|&i| lam[i] % 2 == 1).chain((p..nu).filter(|&i| lam[i] % 2 == 0)).collect();
    place(r1_order, &mut next);
    next += 1;
    let r2_order: Vec<usize> = (0..p).filter(|&i| lam[i] % 2 == 0).chain((0..p).filter(|&i| lam[i] % 2 == 1)).collect();
    place(r2_order, &mut next);
    let listed = |range: std::ops::Range<usize>| -> Vec<(BigRational, usize)> {
        range.flat_map(|i| roots[i].iter().map(|&z| (q(z), lam[i])).collect::<Vec<_>>()).collect()
    };
    let v = lemma_input(ell, mu, &listed(p..nu), &listed(0..p))?;
    let pred = predicted_count(&lower_hull(&v)?)?;
    if pred.count != target {
        return Err(Error::HypothesisViolated(format!("patchworking predicts {} instead of {target}", pred.count)));
    }
    let cert = find_small_t(&v, &pred)?;
    let j = cert.j as i64;

    // 2^{U_- − U_+} must equal t^{μ−μ_1}.
    let weights: Vec<BigInt> =
        (0..nu).map(|i| if i < p { -BigInt::from(lam[i]) } else { BigInt::from(lam[i]) }).collect();
    let u = solve_linear(&weights, &BigInt::from(-j * (mu - mu1) as i64))
        .ok_or_else(|| Error::ConstraintViolated("λ_i are not coprime".into()))?;
    let scale = |i: usize| pow2(u[i].to_i64().expect("scaling exponent fits"));
    let tb = pow2(-2 * ell as i64 * j);
    let mut fresh = Fresh(next);
    let h: Vec<SparsePolynomial> = (0..nu)
        .map(|i| {
            if i < p {
                let r: Vec<BigRational> = roots[i].iter().map(|&z| q(z)).collect();
                let sign = if degrees[i] % 2 == 0 { q(1) } else { q(-1) };
                SparsePolynomial::from_roots(&r).scale(&(sign * scale(i)))
            } else {
                let r: Vec<BigRational> = roots[i].iter().map(|&z| q(z) * &tb).collect();
                SparsePolynomial::from_roots(&r).scale(&scale(i))
            }
        })
        .collect();
    let tail: Vec<SparsePolynomial> = (nu..data.n).map(|_| fresh.poly(k)).collect();

    let assemble = |eps: &BigRational| -> Vec<SparsePolynomial> {
        let mut g: Vec<SparsePolynomial> = (0..nu)
            .map(|i| {
                let d = degrees[i];
                if i < p {
                    let low = SparsePolynomial::new((0..k - d).map(|e| (e, eps.clone())));
                    h[i].shift(k - d).add(&low)
                } else {
                    let high = SparsePolynomial::new((d + 1..=k).map(|e| (e, eps.clone())));
                    h[i].add(&high)
                }
            })
            .collect();
        g.extend(tail.iter().cloned());
        g
    };

    // The unperturbed polynomial is a constant multiple of f_{t*}.
    let g0 = assemble(&BigRational::zero());
    let (big_f, big_g) = eliminant_terms(data, &g0);
    let (c0, s0) = certify(&big_f.sub(&big_g))?;
    if c0 != target || !s0 {
        return Err(Error::HypothesisViolated(format!("unperturbed eliminant has {c0} real roots, expected {target}")));
    }
    if degrees.iter().all(|&d| d == k) {
        return finish(data, g0, Some(degrees.to_vec()), None, cert, target);
    }
    for s in eps_schedule() {
        let eps = pow2(-s);
        let g = assemble(&eps);
        if !check_genericity(data, &g).passed() {
            continue;
        }
        let (big_f, big_g) = eliminant_terms(data, &g);
        let (count, simple) = certify(&big_f.sub(&big_g))?;
        if simple && count >= target {
            return finish(data, g, Some(degrees.to_vec()), Some(eps), cert, target);
        }
    }
    Err(Error::PerturbationExhausted)
}

/// For odd `ℓ` and `δ ≤ 0`: every real root comes from the negative side,
/// `k Σ_{i>p} overline(λ_i)` in total.
pub fn build_single_edge_witness(data: &NearCircuitData) -> Result<Witness> {
    check_data(data)?;
    let target = single_edge_count(data)
        .ok_or_else(|| Error::ConstraintViolated("single-edge construction needs odd ℓ and δ ≤ 0".into()))?;
    let (k, p, nu) = (data.k, data.p, data.nu);
    let lam: Vec<usize> = (0..nu).map(|i| data.lambda_usize(i)).collect();
    let mut next = 1i64;
    let mut g0: Vec<SparsePolynomial> = vec![SparsePolynomial::zero(); data.n];
    for i in (p..nu).filter(|&i| lam[i] % 2 == 1).chain((p..nu).filter(|&i| lam[i] % 2 == 0)) {
        let r: Vec<BigRational> = (0..k).map(|x| q(next + x as i64)).collect();
        next += k as i64;
        g0[i] = SparsePolynomial::from_roots(&r);
    }
    let mut fresh = Fresh(0);
    for (i, gi) in g0.iter_mut().enumerate() {
        if i < p || i >= nu {
            *gi = fresh.poly(k);
        }
    }
    let (big_f, big_g) = eliminant_terms(data, &g0);
    let v = ViroInput::from_parts(&[(q(1), big_f), (q(0), big_g.neg())]);
    let pred = predicted_count(&lower_hull(&v)?)?;
    if pred.count != target {
        return Err(Error::HypothesisViolated(format!("patchworking predicts {} instead of {target}", pred.count)));
    }
    let cert = find_small_t(&v, &pred)?;
    let j = cert.j as i64;
    // 2^{U_+ − U_-} must equal t.
    let weights: Vec<BigInt> =
        (0..nu).map(|i| if i < p { BigInt::from(lam[i]) } else { -BigInt::from(lam[i]) }).collect();
    let u = solve_linear(&weights, &BigInt::from(-j))
        .ok_or_else(|| Error::ConstraintViolated("λ_i are not coprime".into()))?;
    let g: Vec<SparsePolynomial> = g0
        .into_iter()
        .enumerate()
        .map(|(i, gi)| if i < nu { gi.scale(&pow2(u[i].to_i64().expect("scaling exponent fits"))) } else { gi })
        .collect();
    finish(data, g, None, None, cert, target)
}

/// Candidate constructions, largest guaranteed count first.
fn candidates(data: &NearCircuitData) -> Vec<(Option<Vec<usize>>, u64)> {
    let mut out: Vec<(Option<Vec<usize>>, u64)> =
        construction_degrees(data).into_iter().map(|(d, c)| (Some(d), c)).collect();
    if let Some(c) = single_edge_count(data) {
        out.push((None, c));
    }
    out.sort_by(|a, b| b.1.cmp(&a.1));
    out
}

fn build(data: &NearCircuitData, degrees: &Option<Vec<usize>>) -> Result<Witness> {
    match degrees {
        Some(d) => build_witness(data, d),
        None => build_single_edge_witness(data),
    }
}

/// The witness with the most certified real roots among the constructions.
pub fn best_witness(data: &NearCircuitData) -> Result<Witness> {
    let mut last = Error::ConstraintViolated("no admissible construction".into());
    for (d, _) in candidates(data).into_iter().take(6) {
        match build(data, &d) {
            Ok(w) => return Ok(w),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// A certified witness with exactly `target` real solutions: a construction
/// if one lands on the target, otherwise a level shift of the best witness
/// absorbed into a factor `g_i` with `λ_i = 1` that forms a whole term.
pub fn witness_with_count(data: &NearCircuitData, target: u64) -> Result<Witness> {
    let degree = data.eliminant_degree();
    if (degree - BigInt::from(target)).is_odd() {
        return Err(Error::Infeasible(format!("{target} has the wrong parity for an eliminant of this degree")));
    }
    for (d, c) in candidates(data) {
        if c == target {
            if let Ok(w) = build(data, &d) {
                if w.certificate.certified == target {
                    return Ok(w);
                }
            }
        }
    }
    let base = best_witness(data)?;
    let best = base.certificate.certified;
    if target == best {
        return Ok(base);
    }
    if target > best {
        return Err(Error::Infeasible(format!("{target} exceeds the constructed maximum {best}")));
    }
    // −λ − f = −(F − (G − λ)) or −((F + λ) − G).
    let slot = if data.nu - data.p == 1 && data.lambdas[data.p].is_one() {
        Some((data.p, -1))
    } else if data.p == 1 && data.big_n.is_zero() && data.lambdas[0].is_one() {
        Some((0, 1))
    } else {
        None
    };
    let Some((i, sign)) = slot else {
        return Err(Error::Infeasible("no unit-exponent factor forms a whole term of the eliminant".into()));
    };
    let rungs = root_ladder(&base.certificate.polynomial)?;
    let rung = rungs
        .into_iter()
        .find(|r| r.count as u64 == target)
        .ok_or_else(|| Error::Infeasible(format!("no level of the witness eliminant has {target} real roots")))?;
    let mut g = base.g.clone();
    g[i] = g[i].add(&SparsePolynomial::constant(rung.shift.clone() * q(sign)));
    let mut w = finish(data, g, base.degrees.clone(), base.epsilon.clone(), base.certificate.clone(), target)?;
    if w.certificate.certified != target {
        return Err(Error::Infeasible(format!("shifted eliminant has {} real roots", w.certificate.certified)));
    }
    w.ladder_shift = Some(rung.shift);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{absolute_bound, near_circuit_upper_bounds};
    use crate::supports::{construct_near_circuit, delta_family, near_circuit_data, near_circuit_data_at};

    #[test]
    fn lemma_example() {
        let v = lemma_input(1, 4, &[(q(1), 1)], &[(q(2), 1)]).unwrap();
        let h = lower_hull(&v).unwrap();
        let spans: Vec<(usize, usize)> = h.edges.iter().map(|e| (e.start, e.end)).collect();
        assert_eq!(spans, vec![(0, 1), (1, 4), (4, 5)]);
        let p = predicted_count(&h).unwrap();
        assert_eq!(p.count, 3);
        assert_eq!(lemma_count(1, 4, 1, 0, 2), Some(3));
        let c = find_small_t(&v, &p).unwrap();
        assert_eq!(c.certified, 3);
    }

    #[test]
    fn delta_family_maximum() {
        let a = delta_family(3, 3, 5, &[1, 1]).unwrap();
        let d = near_circuit_data(&a).unwrap();
        let w = build_witness(&d, &[3, 3, 3]).unwrap();
        assert_eq!(w.certificate.certified, 11);
        assert!(w.certificate.check().unwrap());
        assert_eq!(w.certificate.polynomial.degree(), Some(11));
    }

    #[test]
    fn circuit_reaches_two_n_plus_one() {
        // n = 2: λ = (1, 2), p = 1, N = 4 gives 5 = 2n + 1.
        let a = construct_near_circuit(2, 1, 1, &4.into(), 1, &[1.into(), 2.into()]).unwrap();
        let d = near_circuit_data_at(&a, 0, 1).unwrap();
        assert_eq!(absolute_bound(&d).unwrap(), 5);
        let w = best_witness(&d).unwrap();
        assert_eq!(w.certificate.certified, 5);
        assert!(near_circuit_upper_bounds(&d).unwrap().min() >= 5);
    }

    #[test]
    fn perturbed_degrees_and_ladder() {
        let a = delta_family(3, 2, 3, &[1, 0]).unwrap();
        let d = near_circuit_data(&a).unwrap();
        let w = build_witness(&d, &[1, 2]).unwrap();
        assert!(w.epsilon.is_some());
        assert!(w.certificate.certified >= construction_count(&d, &[1, 2]).unwrap());
        for r in [1, 3] {
            let w = witness_with_count(&d, r).unwrap();
            assert_eq!(w.certificate.certified, r);
        }
        assert!(matches!(witness_with_count(&d, 2), Err(Error::Infeasible(_))));
        assert!(matches!(witness_with_count(&d, 7), Err(Error::Infeasible(_))));
    }

    #[test]
    fn even_ell() {
        // ℓ = 2, N = 3, λ = (1, 1), p = 1, k = 1: 2Σd_i + 1 = 5.
        let a = construct_near_circuit(2, 1, 2, &3.into(), 1, &[1.into(), 1.into()]).unwrap();
        let d = near_circuit_data_at(&a, 0, 1).unwrap();
        assert_eq!(d.ell, 2);
        let w = build_witness(&d, &[1, 1]).unwrap();
        assert_eq!(w.certificate.certified, 5);
    }

    #[test]
    fn linear_solver() {
        let w = [BigInt::from(-4), BigInt::from(6), BigInt::from(9)];
        let u = solve_linear(&w, &BigInt::from(7)).unwrap();
        let s: BigInt = w.iter().zip(&u).map(|(a, b)| a * b).sum();
        assert_eq!(s, BigInt::from(7));
        assert!(solve_linear(&[BigInt::from(2), BigInt::from(4)], &BigInt::one()).is_none());
    }
}
