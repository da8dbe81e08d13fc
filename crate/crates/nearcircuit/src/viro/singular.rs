use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{find_small_t, lower_hull, predicted_count, ViroInput};
use crate::bounds::{chi, overline};
use crate::eliminant::EliminantBundle;
use crate::error::{Error, Result};
use crate::numeric::Interval;
use crate::realroots::dense::ZPoly;
use crate::realroots::{isolate, poly_gcd, refine, sign_at_root, RootLocation, SparsePolynomial};
use crate::supports::NearCircuitData;

/// A nonzero real root of `H` and the parameter `t = G(ρ)/F(ρ)` at which
/// `tF − G` has a singular root there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularRoot {
    pub root: RootLocation,
    /// Multiplicity as a root of `H`; the singular root of `f_t` has one more.
    pub multiplicity: usize,
    pub t_sign: i8,
    pub t: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularTAnalysis {
    pub h: SparsePolynomial,
    /// `H(y) = h(y^ℓ)`.
    pub big_h: SparsePolynomial,
    pub roots: Vec<SingularRoot>,
    pub multiplicity_positive: u64,
    pub multiplicity_negative: u64,
}

impl SingularTAnalysis {
    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicity_positive + self.multiplicity_negative
    }
}

/// `2kℓ̄ν − 2ℓ̄(χ(δ=0) + χ(N=0))`.
pub fn singular_multiplicity_bound(d: &NearCircuitData) -> u64 {
    let lb = overline(&BigInt::from(d.ell));
    let drop = chi(d.delta.is_zero()) + chi(d.big_n.is_zero());
    (2 * d.k as u64 * lb * d.nu as u64).saturating_sub(2 * lb * drop)
}

/// `h(z) = N·∏g_i + ℓz·Σ ±λ_i g_i' ∏_{j≠i} g_j` (or `ℓ·Σ…` when `N = 0`).
fn h_polynomial(d: &NearCircuitData, g: &[SparsePolynomial]) -> SparsePolynomial {
    let g = &g[..d.nu];
    let prod = g.iter().fold(SparsePolynomial::one(), |acc, x| acc.mul(x));
    let mut e = SparsePolynomial::zero();
    for i in 0..d.nu {
        let others =
            g.iter().enumerate().filter(|&(j, _)| j != i).fold(SparsePolynomial::one(), |acc, (_, x)| acc.mul(x));
        let lam = BigRational::from_integer(d.lambdas[i].clone());
        let term = g[i].derivative().mul(&others).scale(&lam);
        e = if i < d.p { e.add(&term) } else { e.sub(&term) };
    }
    let ell = BigRational::from_integer(d.ell.into());
    if d.big_n.is_zero() {
        e.scale(&ell)
    } else {
        prod.scale(&BigRational::from_integer(d.big_n.clone())).add(&e.shift(1).scale(&ell))
    }
}

/// Nonzero real `ρ` with `(F'G − FG')(ρ) = 0` and their parameters `t`.
pub fn singular_t_values(bundle: &EliminantBundle) -> Result<SingularTAnalysis> {
    let d = &bundle.data;
    let (f, g) = (&bundle.big_f, &bundle.big_g);
    if poly_gcd(f, g).degree().unwrap_or(0) > 0 {
        return Err(Error::CommonFactor);
    }
    let h = h_polynomial(d, &bundle.g);
    let big_h = h.compose_power(d.ell);
    let mut out = SingularTAnalysis { h, big_h, roots: vec![], multiplicity_positive: 0, multiplicity_negative: 0 };
    if out.big_h.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let s = ZPoly::from_sparse(&out.big_h).squarefree();
    let width = BigRational::new(BigInt::one(), BigInt::one() << 64);
    for r in isolate(&out.big_h, &BigRational::one())?.roots {
        if matches!(&r.location, RootLocation::Exact(x) if x.is_zero()) {
            continue;
        }
        let sf = sign_at_root(f, &out.big_h, &r.location)?;
        let sg = sign_at_root(g, &out.big_h, &r.location)?;
        if sf == 0 || sg == 0 {
            return Err(Error::HypothesisViolated("F or G vanishes at a root of H".into()));
        }
        let loc = refine(&s, &r.location, &width);
        let x = Interval::new(loc.lo().clone(), loc.hi().clone());
        let fx = Interval::eval_poly(f, &x, 96);
        let gx = Interval::eval_poly(g, &x, 96);
        let t = match fx.recip() {
            Ok(inv) => gx.mul(&inv),
            Err(_) => Interval::new(
                -BigRational::from_integer(BigInt::one() << 64),
                BigRational::from_integer(BigInt::one() << 64),
            ),
        };
        let weight = r.multiplicity as u64 + 1;
        if sf * sg > 0 {
            out.multiplicity_positive += weight;
        } else {
            out.multiplicity_negative += weight;
        }
        out.roots.push(SingularRoot { root: loc, multiplicity: r.multiplicity, t_sign: sf * sg, t });
    }
    Ok(out)
}

/// Numbers of nonzero real roots of `tF − G` as `t → 0±` and `t → ±∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AsymptoticCounts {
    pub r_zero_plus: u64,
    pub r_zero_minus: u64,
    pub r_inf_plus: u64,
    pub r_inf_minus: u64,
}

fn small_t_count(v: ViroInput) -> Result<u64> {
    let pred = predicted_count(&lower_hull(&v)?)?;
    Ok(find_small_t(&v, &pred)?.certified)
}

/// Each count is a patchworking prediction confirmed by a certified `t`.
pub fn asymptotic_counts(bundle: &EliminantBundle) -> Result<AsymptoticCounts> {
    let (f, g) = (&bundle.big_f, &bundle.big_g);
    let zero = BigRational::zero();
    let one = BigRational::one();
    Ok(AsymptoticCounts {
        r_zero_plus: small_t_count(ViroInput::from_parts(&[(one.clone(), f.clone()), (zero.clone(), g.neg())]))?,
        r_zero_minus: small_t_count(ViroInput::from_parts(&[(one.clone(), f.neg()), (zero.clone(), g.neg())]))?,
        // tF − G = t(F − sG) with s = 1/t.
        r_inf_plus: small_t_count(ViroInput::from_parts(&[(zero.clone(), f.clone()), (one.clone(), g.neg())]))?,
        r_inf_minus: small_t_count(ViroInput::from_parts(&[(zero, f.clone()), (one, g.clone())]))?,
    })
}

/// The limit-count inequalities, each as `(name, holds)`.
pub fn extremal_inequalities(d: &NearCircuitData, r: &AsymptoticCounts) -> Vec<(&'static str, bool)> {
    let kl = d.k as i64 * overline(&BigInt::from(d.ell)) as i64;
    let (p, nu) = (d.p as i64, d.nu as i64);
    let bar = |s: &[BigInt]| s.iter().map(|x| overline(x) as i64).sum::<i64>();
    let c = |b: bool| chi(b) as i64;
    let delta = &d.delta;
    let n = &d.big_n;
    let even_pos = |x: &BigInt| x.is_positive() && (x % 2i32).is_zero();
    let (z_p, z_m) = (r.r_zero_plus as i64, r.r_zero_minus as i64);
    let (i_p, i_m) = (r.r_inf_plus as i64, r.r_inf_minus as i64);
    let mut out = vec![
        ("zero-sum", z_p + z_m <= 2 * (kl * (nu - p) + c(delta.is_positive()))),
        ("infinity-sum", i_p + i_m <= 2 * (kl * p + c(n.is_positive()) + c(delta.is_negative()))),
        (
            "zero-difference",
            (z_p - z_m).abs() <= 2 * (kl * bar(&d.lambdas[d.p..]) - kl * (nu - p) + c(even_pos(delta))),
        ),
        (
            "infinity-difference",
            (i_p - i_m).abs()
                <= 2 * (kl * bar(&d.lambdas[..d.p]) - kl * p + c(even_pos(n)) + c(even_pos(&-delta.clone()))),
        ),
    ];
    if d.ell % 2 == 0 && n.to_i64().is_some_and(|x| x % 2 != 0) {
        out.push(("even-ell-positive", z_p + i_p <= 2 * (d.k as i64 * nu + 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminant::build_eliminant;
    use crate::supports::{construct_near_circuit, near_circuit_data_at};

    fn poly(c: &[i64]) -> SparsePolynomial {
        SparsePolynomial::from_coeffs(c)
    }

    #[test]
    fn factorization_of_wronskian() {
        // k = 1, ν = 2, N = 3, λ = (1, 1), p = 1.
        let a = construct_near_circuit(2, 1, 1, &3.into(), 1, &[1.into(), 1.into()]).unwrap();
        let data = near_circuit_data_at(&a, 0, 1).unwrap();
        let g = vec![poly(&[2, 1]), poly(&[-3, 1])];
        let b = build_eliminant(&data, &g).unwrap();
        let s = singular_t_values(&b).unwrap();
        assert_eq!(s.h.degree(), Some(2));
        let (f, gg) = (&b.big_f, &b.big_g);
        let w = f.derivative().mul(gg).sub(&f.mul(&gg.derivative()));
        let n = data.n_usize();
        assert_eq!(w, s.big_h.shift(n - 1));
        assert!(s.total_multiplicity() <= singular_multiplicity_bound(&data));
        let r = asymptotic_counts(&b).unwrap();
        assert!(extremal_inequalities(&data, &r).iter().all(|x| x.1));
    }
}
