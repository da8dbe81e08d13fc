//! Polynomial systems with a prescribed support: random generic systems,
//! Gaussian reduction to binomial or near-circuit form, and exact real
//! counting for binomial systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{
    invariant_factors, normalized_volume, rational_inverse, rational_rank, sign_solvability, IntMatrix, Sign,
    SupportSet,
};
use crate::realroots::{poly_gcd, SparsePolynomial};
use crate::supports::{classify, near_circuit_data, NearCircuitData, SupportClass};

/// `n` polynomial equations; row `i` holds the coefficients of `f_i` in the
/// order of the support points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub support: SupportSet,
    pub coefficients: Vec<Vec<BigRational>>,
}

impl SystemSpec {
    pub fn new(support: SupportSet, coefficients: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = support.dim();
        if coefficients.len() != n || coefficients.iter().any(|r| r.len() != support.len()) {
            return Err(Error::Input(format!("expected a {n}×{} coefficient matrix", support.len())));
        }
        if rational_rank(&coefficients) != n {
            return Err(Error::Input("coefficient matrix is not of full row rank".into()));
        }
        Ok(SystemSpec { support, coefficients })
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    /// Values of the equations at a point of the real torus (floating point).
    pub fn residuals_f64(&self, x: &[f64]) -> Vec<f64> {
        let monos: Vec<f64> = self
            .support
            .points()
            .iter()
            .map(|a| a.iter().zip(x).map(|(e, xi)| xi.powi(e.to_i32().unwrap())).product())
            .collect();
        self.coefficients.iter().map(|row| row.iter().zip(&monos).map(|(c, m)| c.to_f64().unwrap() * m).sum()).collect()
    }
}

/// Outcome of the genericity checklist for a reduced near-circuit system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub degrees_exact: bool,
    pub nonzero_constants: bool,
    pub distinct_roots: bool,
    pub coprime: bool,
}

impl Genericity {
    pub fn passed(&self) -> bool {
        self.degrees_exact && self.nonzero_constants && self.distinct_roots && self.coprime
    }

    pub fn failure(&self) -> Option<&'static str> {
        if !self.degrees_exact {
            Some("some g_i has degree below k")
        } else if !self.nonzero_constants {
            Some("some g_i vanishes at 0")
        } else if !self.distinct_roots {
            Some("the g_i have a repeated root")
        } else if !self.coprime {
            Some("the two terms of the eliminant share a factor")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedSystem {
    /// `x^{w_i} = β_i`, with `w_i` the columns of `w` (translated so that
    /// the point at `base` is the origin).
    Simplex { base: usize, w: IntMatrix, beta: Vec<BigRational> },
    /// `x^{w_i} = g_i(x_n^ℓ)` in the normalized coordinates of `data`.
    NearCircuit { data: Box<NearCircuitData>, g: Vec<SparsePolynomial>, genericity: Genericity },
}

/// Genericity checklist for `g_1..g_n` against near-circuit data.
pub fn check_genericity(data: &NearCircuitData, g: &[SparsePolynomial]) -> Genericity {
    let degrees_exact = g.iter().all(|gi| gi.degree() == Some(data.k));
    let nonzero_constants = g.iter().all(|gi| !gi.constant_term().is_zero());
    let prod = g.iter().fold(SparsePolynomial::one(), |acc, gi| acc.mul(gi));
    let distinct_roots = !prod.is_zero() && poly_gcd(&prod, &prod.derivative()).degree() == Some(0);
    let coprime = degrees_exact && nonzero_constants && {
        let (f, gg) = crate::eliminant::eliminant_terms(data, g);
        poly_gcd(&f, &gg).degree() == Some(0)
    };
    Genericity { degrees_exact, nonzero_constants, distinct_roots, coprime }
}

fn column(s: &SystemSpec, j: usize) -> Vec<BigRational> {
    s.coefficients.iter().map(|r| r[j].clone()).collect()
}

/// Solve `C_pivot · X = C_rest` and return `X` row by row.
fn eliminate(s: &SystemSpec, pivots: &[usize], rest: &[usize]) -> Result<Vec<Vec<BigRational>>> {
    let n = s.dim();
    let block: Vec<Vec<BigRational>> =
        (0..n).map(|i| pivots.iter().map(|&j| s.coefficients[i][j].clone()).collect()).collect();
    let inv = rational_inverse(&block).map_err(|_| Error::SingularPivot)?;
    let cols: Vec<Vec<BigRational>> = rest.iter().map(|&j| column(s, j)).collect();
    Ok((0..n)
        .map(|i| {
            cols.iter().map(|c| (0..n).map(|r| &inv[i][r] * &c[r]).fold(BigRational::zero(), |a, b| a + b)).collect()
        })
        .collect())
}

/// Gaussian elimination to binomial form (simplices) or to the form
/// `x^{w_i} = g_i(x_n^ℓ)` (circuits and near circuits).
pub fn gaussian_reduce(s: &SystemSpec) -> Result<ReducedSystem> {
    let a = &s.support;
    match classify(a)? {
        SupportClass::Simplex => {
            let base = a.origin_index().unwrap_or(0);
            let pivots: Vec<usize> = (0..a.len()).filter(|&j| j != base).collect();
            let x = eliminate(s, &pivots, &[base])?;
            let beta: Vec<BigRational> = x.into_iter().map(|r| -r[0].clone()).collect();
            let cols: Vec<Vec<BigInt>> = pivots
                .iter()
                .map(|&j| a.points()[j].iter().zip(&a.points()[base]).map(|(p, q)| p - q).collect())
                .collect();
            Ok(ReducedSystem::Simplex { base, w: IntMatrix::from_columns(&cols)?, beta })
        }
        SupportClass::Circuit | SupportClass::NearCircuit if a.dim() >= 2 => {
            let data = near_circuit_data(a)?;
            reduce_near_circuit(s, data)
        }
        _ => Err(Error::Unsupported("reduction needs a simplex, circuit or near circuit".into())),
    }
}

/// Reduction against a given presentation of the support.
pub fn reduce_near_circuit(s: &SystemSpec, data: NearCircuitData) -> Result<ReducedSystem> {
    let mut prog = vec![data.roles.apex];
    prog.extend(&data.roles.progression);
    let x = eliminate(s, &data.roles.w, &prog)?;
    let g: Vec<SparsePolynomial> =
        x.into_iter().map(|row| SparsePolynomial::new(row.into_iter().enumerate().map(|(j, c)| (j, -c)))).collect();
    let genericity = check_genericity(&data, &g);
    Ok(ReducedSystem::NearCircuit { data: Box::new(data), g, genericity })
}

/// The system `x^{w_i} − g_i(x_n^ℓ) = 0` written on the original support.
pub fn near_circuit_system(data: &NearCircuitData, g: &[SparsePolynomial]) -> Result<SystemSpec> {
    let n = data.n;
    if g.len() != n || g.iter().any(|gi| gi.degree().is_none_or(|d| d > data.k)) {
        return Err(Error::Input(format!("need {n} polynomials of degree at most {}", data.k)));
    }
    let mut prog = vec![data.roles.apex];
    prog.extend(&data.roles.progression);
    let m = data.support.len();
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![BigRational::zero(); m];
            r[data.roles.w[i]] = BigRational::one();
            for (j, &col) in prog.iter().enumerate() {
                r[col] = -g[i].coeff(j);
            }
            r
        })
        .collect();
    SystemSpec::new(data.support.clone(), rows)
}

/// The binomial system `x^{a_i − a_base} = β_i` written on the support.
pub fn binomial_system(a: &SupportSet, base: usize, beta: &[BigRational]) -> Result<SystemSpec> {
    let n = a.dim();
    if a.len() != n + 1 || beta.len() != n {
        return Err(Error::Input("binomial system needs a simplex and n targets".into()));
    }
    let pivots: Vec<usize> = (0..a.len()).filter(|&j| j != base).collect();
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![BigRational::zero(); a.len()];
            r[pivots[i]] = BigRational::one();
            r[base] = -beta[i].clone();
            r
        })
        .collect();
    SystemSpec::new(a.clone(), rows)
}

const MAX_REDRAWS: usize = 100;

/// A system with integer coefficients drawn uniformly from [−1000, 1000],
/// redrawn until the reduction passes its genericity checks.
pub fn random_generic_system(a: &SupportSet, seed: u64) -> Result<SystemSpec> {
    if !a.spans() {
        return Err(Error::NotFullRank(a.dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.dim();
    for _ in 0..MAX_REDRAWS {
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..a.len()).map(|_| BigRational::from_integer(rng.gen_range(-1000i64..=1000).into())).collect())
            .collect();
        let Ok(s) = SystemSpec::new(a.clone(), rows) else {
            continue;
        };
        match gaussian_reduce(&s) {
            Ok(ReducedSystem::Simplex { beta, .. }) if beta.iter().all(|b| !b.is_zero()) => return Ok(s),
            Ok(ReducedSystem::NearCircuit { genericity, .. }) if genericity.passed() => return Ok(s),
            Err(Error::Unsupported(_)) => return Ok(s),
            _ => continue,
        }
    }
    Err(Error::GenericityFailure(format!("no generic system after {MAX_REDRAWS} draws")))
}

/// Like [`random_generic_system`] but reducing against a fixed presentation.
pub fn random_generic_system_for(data: &NearCircuitData, seed: u64) -> Result<(SystemSpec, Vec<SparsePolynomial>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = &data.support;
    for _ in 0..MAX_REDRAWS {
        let rows: Vec<Vec<BigRational>> = (0..a.dim())
            .map(|_| (0..a.len()).map(|_| BigRational::from_integer(rng.gen_range(-1000i64..=1000).into())).collect())
            .collect();
        let Ok(s) = SystemSpec::new(a.clone(), rows) else {
            continue;
        };
        if let Ok(ReducedSystem::NearCircuit { g, genericity, .. }) = reduce_near_circuit(&s, data.clone()) {
            if genericity.passed() {
                return Ok((s, g));
            }
        }
    }
    Err(Error::GenericityFailure(format!("no generic system after {MAX_REDRAWS} draws")))
}

/// Number of solutions in `(R^*)^n` of `x^{w_i} = β_i`.
pub fn simplex_real_count(w: &IntMatrix, beta: &[BigRational]) -> Result<BigInt> {
    if w.rows() != w.cols() || beta.len() != w.cols() {
        return Err(Error::Input("binomial system must be square".into()));
    }
    let signs: Vec<Sign> = beta.iter().map(|b| Sign::of(b).ok_or(Error::ZeroTarget)).collect::<Result<_>>()?;
    Ok(sign_solvability(w, &signs)?.count())
}

/// Parity constraints: every real count is at most `max_count` and
/// congruent to it modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub max_count: BigInt,
    pub modulus: BigInt,
}

impl Congruence {
    pub fn admits(&self, count: &BigInt) -> bool {
        !count.is_negative() && count <= &self.max_count && (&self.max_count - count).is_multiple_of(&self.modulus)
    }
}

pub fn congruence_constraints(a: &SupportSet) -> Result<Congruence> {
    if !a.spans() {
        return Err(Error::NotFullRank(a.dim()));
    }
    let inv = invariant_factors(a)?;
    let v = normalized_volume(a)?;
    let modulus = (BigInt::one() << inv.e_count).max(BigInt::from(2));
    Ok(Congruence { max_count: v / inv.odd_part(), modulus })
}

/// `2^-40`, the size of the boundary perturbation.
pub fn boundary_epsilon() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 40)
}

/// When `δ = 0` (resp. `N = 0`) and the degree (resp. order) of `tF − G`
/// drops by more than one at the critical `t`, bump the leading (resp.
/// constant) coefficient of `g_1` by `2^-40`. Returns `None` when no bump is
/// needed. The caller re-checks genericity and the real-root count.
pub fn boundary_perturbation(data: &NearCircuitData, g: &[SparsePolynomial]) -> Option<Vec<SparsePolynomial>> {
    let (f, gg) = crate::eliminant::eliminant_terms(data, g);
    let drops_twice = |top: bool| -> Option<bool> {
        let (ef, eg) = if top { (f.degree()?, gg.degree()?) } else { (f.lowest_exponent()?, gg.lowest_exponent()?) };
        if ef != eg {
            return Some(false);
        }
        let t = gg.coeff(eg) / f.coeff(ef);
        let h = f.scale(&t).sub(&gg);
        let next = if top { ef.checked_sub(1)? } else { ef + 1 };
        Some(h.coeff(next).is_zero())
    };
    let bump = |top: bool| -> Vec<SparsePolynomial> {
        let mut out = g.to_vec();
        let e = if top { data.k } else { 0 };
        out[0] = out[0].add(&SparsePolynomial::monomial(e, boundary_epsilon()));
        out
    };
    let check = |top: bool| drops_twice(top).unwrap_or(false);
    if data.delta.is_zero() && check(true) {
        return Some(bump(true));
    }
    if data.big_n.is_zero() && check(false) {
        return Some(bump(false));
    }
    None
}
