//! The univariate eliminant of a reduced near-circuit system and the
//! back-substitution of its real roots to full solutions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{normalized_volume, sign_solvability, smith_normal_form, IntMatrix, Sign};
use crate::numeric::Interval;
use crate::realroots::{dense::ZPoly, refine, RootLocation, SparsePolynomial};
use crate::supports::NearCircuitData;
use crate::systems::{check_genericity, SystemSpec};

/// `(x^N ∏_{i≤p} g_i(x^ℓ)^{λ_i}, ∏_{p<i≤ν} g_i(x^ℓ)^{λ_i})`.
pub fn eliminant_terms(data: &NearCircuitData, g: &[SparsePolynomial]) -> (SparsePolynomial, SparsePolynomial) {
    let term = |range: std::ops::Range<usize>| {
        range.fold(SparsePolynomial::one(), |acc, i| {
            acc.mul(&g[i].compose_power(data.ell).pow(data.lambda_usize(i) as u32))
        })
    };
    (term(0..data.p).shift(data.n_usize()), term(data.p..data.nu))
}

/// The eliminant `f = F − G` together with its two terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminantBundle {
    pub f: SparsePolynomial,
    pub big_f: SparsePolynomial,
    pub big_g: SparsePolynomial,
    pub data: NearCircuitData,
    pub g: Vec<SparsePolynomial>,
}

pub fn build_eliminant(data: &NearCircuitData, g: &[SparsePolynomial]) -> Result<EliminantBundle> {
    if g.len() != data.n {
        return Err(Error::Input(format!("expected {} polynomials g_i, got {}", data.n, g.len())));
    }
    let gen = check_genericity(data, g);
    if let Some(why) = gen.failure() {
        return Err(Error::GenericityFailure(why.into()));
    }
    let (big_f, big_g) = eliminant_terms(data, g);
    let f = big_f.sub(&big_g);
    debug_assert_eq!(BigInt::from(f.degree().unwrap()), data.eliminant_degree());
    Ok(EliminantBundle { f, big_f, big_g, data: data.clone(), g: g.to_vec() })
}

impl EliminantBundle {
    /// Degree of `f` against the normalized volume of the support.
    pub fn degree_matches_volume(&self) -> Result<bool> {
        let v = normalized_volume(&self.data.support)?;
        Ok(self.f.degree().map(BigInt::from) == Some(v))
    }
}

/// `x^l · ∏ g_i^{ε_i} − g_n` for the Δ-family.
pub fn build_delta_eliminant(k: usize, l: usize, eps: &[u8], g: &[SparsePolynomial]) -> Result<SparsePolynomial> {
    if g.len() != eps.len() + 1 || g.iter().any(|gi| gi.degree() != Some(k)) {
        return Err(Error::Input(format!("need {} polynomials of degree {k}", eps.len() + 1)));
    }
    let mut f = SparsePolynomial::monomial(l, BigRational::one());
    for (gi, &e) in g.iter().zip(eps) {
        if e == 1 {
            f = f.mul(gi);
        }
    }
    Ok(f.sub(g.last().unwrap()))
}

/// A real solution recovered from a real root of the eliminant.
#[derive(Clone, Debug, PartialEq)]
pub struct BackSubstitution {
    /// Isolating interval of the root after refinement.
    pub root: RootLocation,
    /// Enclosures of the normalized coordinates `x'_1..x'_n`.
    pub normalized: Vec<Interval>,
    /// Enclosures of the original coordinates.
    pub solution: Vec<Interval>,
    /// Midpoints of `solution`.
    pub approximate: Vec<BigRational>,
    /// Exact values of the original equations at `approximate`.
    pub residuals: Vec<BigRational>,
    pub precision_bits: u32,
    /// Residuals below tolerance and the dropped equation consistent.
    pub verified: bool,
}

impl BackSubstitution {
    pub fn max_residual(&self) -> BigRational {
        self.residuals.iter().map(|r| r.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

pub fn residual_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 20))
}

fn eval_system_exact(s: &SystemSpec, x: &[BigRational]) -> Vec<BigRational> {
    let monos: Vec<BigRational> = s
        .support
        .points()
        .iter()
        .map(|a| {
            a.iter().zip(x).fold(BigRational::one(), |acc, (e, xi)| {
                let e = e.to_i64().unwrap();
                let p = crate::realroots::pow_rat(xi, e.unsigned_abs() as usize);
                if e < 0 {
                    acc / p
                } else {
                    acc * p
                }
            })
        })
        .collect();
    s.coefficients
        .iter()
        .map(|row| row.iter().zip(&monos).fold(BigRational::zero(), |acc, (c, m)| acc + c * m))
        .collect()
}

/// Extend a real root of `f` to the unique real solution of the reduced
/// system and map it back to the original coordinates of `system`.
pub fn back_substitute(
    bundle: &EliminantBundle,
    system: &SystemSpec,
    root: &RootLocation,
    precision_cap: u32,
) -> Result<BackSubstitution> {
    let data = &bundle.data;
    let n = data.n;
    let q = (0..data.nu)
        .find(|&i| data.lambdas[i].to_u64().is_some_and(|x| x % 2 == 1))
        .ok_or_else(|| Error::Unsupported("no odd λ".into()))?;
    let others: Vec<usize> = (0..n).filter(|&i| i != q).collect();
    let v_cols: Vec<Vec<BigInt>> = others.iter().map(|&i| data.v[i].clone()).collect();
    let vmat = IntMatrix::from_columns(&v_cols)?;
    // With V'^T = U^{-1} D W^{-1}: log|y| = W D^{-1} U log|β|.
    let snf = smith_normal_form(&vmat.transpose());
    let dvec = snf.diagonal();
    if dvec.iter().any(Zero::is_zero) || dvec.len() != n - 1 {
        return Err(Error::SingularMatrix);
    }
    let s = ZPoly::from_sparse(&bundle.f).squarefree();
    let tol = residual_tolerance();
    let mut bits = 128u32;
    loop {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let loc = refine(&s, root, &width);
        let xn = match &loc {
            RootLocation::Exact(x) => Interval::point(x.clone()),
            RootLocation::Interval(a, b) => Interval::new(a.clone(), b.clone()),
        };
        let attempt = (|| -> Result<Option<(Vec<Interval>, bool)>> {
            let z = xn.powi(data.ell as i64, bits)?;
            let mut beta = vec![];
            for &i in &others {
                let gi = Interval::eval_poly(&bundle.g[i], &z, bits);
                let b = xn.powi(-data.l[i].to_i64().unwrap(), bits)?.mul(&gi).round(bits);
                beta.push(b);
            }
            let Some(signs) = beta.iter().map(|b| b.sign().map(|s| Sign::from_neg(s < 0))).collect::<Option<Vec<_>>>()
            else {
                return Ok(None);
            };
            let sol = sign_solvability(&vmat, &signs)?;
            if !sol.solvable {
                return Err(Error::SignInfeasible);
            }
            let sigma = sol.particular.unwrap();
            let mags: Vec<Interval> = beta.iter().map(Interval::abs).collect();
            let mut u = vec![];
            for (i, d) in dvec.iter().enumerate() {
                let mut z = Interval::point(BigRational::one());
                for (j, m) in mags.iter().enumerate() {
                    z = z.mul(&m.powi(snf.u[(i, j)].to_i64().unwrap(), bits)?).round(bits);
                }
                u.push(z.nth_root(d.to_u32().unwrap(), bits)?);
            }
            let mut y = vec![];
            for j in 0..n - 1 {
                let mut m = Interval::point(BigRational::one());
                for (i, ui) in u.iter().enumerate() {
                    m = m.mul(&ui.powi(snf.v[(j, i)].to_i64().unwrap(), bits)?).round(bits);
                }
                y.push(if sigma[j] { m.neg() } else { m });
            }
            // The dropped equation must be consistent with the solution.
            let mut lhs = xn.powi(data.l[q].to_i64().unwrap(), bits)?;
            for (j, yj) in y.iter().enumerate() {
                lhs = lhs.mul(&yj.powi(data.v[q][j].to_i64().unwrap(), bits)?).round(bits);
            }
            let rhs = Interval::eval_poly(&bundle.g[q], &z, bits);
            let consistent = lhs.sub(&rhs).contains_zero();
            y.push(xn.clone());
            Ok(Some((y, consistent)))
        })()?;
        if let Some((normalized, consistent)) = attempt {
            // x_k = ∏_j x'_j^{T_jk}
            let t = &data.normalizer;
            let mut solution = vec![];
            for kk in 0..n {
                let mut m = Interval::point(BigRational::one());
                for (j, xj) in normalized.iter().enumerate() {
                    m = m.mul(&xj.powi(t[(j, kk)].to_i64().unwrap(), bits)?).round(bits);
                }
                solution.push(m);
            }
            let approximate: Vec<BigRational> = solution.iter().map(Interval::mid).collect();
            let residuals = eval_system_exact(system, &approximate);
            let small = residuals.iter().all(|r| r.abs() < tol);
            if (small && consistent) || bits >= precision_cap {
                return Ok(BackSubstitution {
                    root: loc,
                    normalized,
                    solution,
                    approximate,
                    residuals,
                    precision_bits: bits,
                    verified: small && consistent,
                });
            }
        } else if bits >= precision_cap {
            return Err(Error::HypothesisViolated("sign of a back-substitution target undetermined".into()));
        }
        bits = (bits * 2).min(precision_cap.max(128));
    }
}
