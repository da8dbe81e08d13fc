//! Univariate Viro patchworking: lower Newton hulls in the `(y, t)`
//! exponent plane, facial subpolynomials, predicted real-root counts for
//! small `t`, and certified searches for an explicit small `t`.

mod ladder;
mod singular;
mod witness;

pub use ladder::{root_ladder, LadderRung};
pub use singular::{
    asymptotic_counts, extremal_inequalities, singular_multiplicity_bound, singular_t_values, AsymptoticCounts,
    SingularRoot, SingularTAnalysis,
};
pub use witness::{
    best_witness, build_single_edge_witness, build_witness, lemma_count, lemma_input, witness_with_count, Witness,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::realroots::{
    isolate, nonzero_roots_simple, sign_at_root, sturm_count, Bound, RootLocation, SparsePolynomial,
};

/// Largest `j` tried by [`find_small_t`] for `t = 2^-j`.
pub const MAX_T_EXPONENT: u32 = 96;

/// `Σ c_{p,q} t^q y^p` with rational `t`-exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViroInput {
    terms: BTreeMap<(usize, BigRational), BigRational>,
}

impl ViroInput {
    /// Monomials `(p, q, c)`; pairs `(p, q)` must be distinct, zero
    /// coefficients are dropped.
    pub fn new(monomials: impl IntoIterator<Item = (usize, BigRational, BigRational)>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (p, q, c) in monomials {
            if c.is_zero() {
                continue;
            }
            if terms.insert((p, q.clone()), c).is_some() {
                return Err(Error::Input(format!("repeated monomial (p, q) = ({p}, {q})")));
            }
        }
        Ok(ViroInput { terms })
    }

    /// `Σ t^{q_i} f_i(y)`, merging equal monomials.
    pub fn from_parts(parts: &[(BigRational, SparsePolynomial)]) -> Self {
        let mut out = ViroInput::default();
        for (q, f) in parts {
            for (p, c) in f.terms() {
                out.add_term(*p, q.clone(), c.clone());
            }
        }
        out
    }

    fn add_term(&mut self, p: usize, q: BigRational, c: BigRational) {
        let key = (p, q);
        let v = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn monomials(&self) -> Vec<(usize, BigRational, BigRational)> {
        self.terms.iter().map(|((p, q), c)| (*p, q.clone(), c.clone())).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in &o.terms {
            out.add_term(*p, q.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ViroInput { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = ViroInput::default();
        for ((p1, q1), c1) in &self.terms {
            for ((p2, q2), c2) in &o.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = ViroInput::from_parts(&[(BigRational::zero(), SparsePolynomial::one())]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Least common denominator of the `t`-exponents.
    pub fn exponent_denominator(&self) -> BigInt {
        self.terms.keys().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()))
    }

    /// The polynomial `f_t` at `t = 2^-j`, if every `j·q` is an integer.
    pub fn at_dyadic(&self, j: u32) -> Option<SparsePolynomial> {
        let mut terms = vec![];
        for ((p, q), c) in &self.terms {
            let e = q * BigRational::from_integer(j.into());
            if !e.is_integer() {
                return None;
            }
            terms.push((*p, c * pow2(-e.to_integer().to_i64()?)));
        }
        Some(SparsePolynomial::new(terms))
    }
}

/// `2^e` as an exact rational.
pub fn pow2(e: i64) -> BigRational {
    let m = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        BigRational::from_integer(m)
    } else {
        BigRational::new(BigInt::one(), m)
    }
}

/// One lower edge `q = a·p + b` of the Newton polygon over `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerEdge {
    pub start: usize,
    pub end: usize,
    pub slope: BigRational,
    pub intercept: BigRational,
    /// Sum of the terms `c y^p` on the edge.
    pub facial: SparsePolynomial,
    /// `(A, d)`: the terms of smallest positive `t`-power after recentering.
    pub correction: Option<(BigRational, SparsePolynomial)>,
}

impl LowerEdge {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacialDecomposition {
    pub edges: Vec<LowerEdge>,
}

impl FacialDecomposition {
    /// The Newton segment `[p_0, d]`.
    pub fn newton_segment(&self) -> (usize, usize) {
        (self.edges[0].start, self.edges.last().unwrap().end)
    }
}

fn cross(o: &(usize, BigRational), a: &(usize, BigRational), b: &(usize, BigRational)) -> BigRational {
    let dx1 = BigRational::from_integer(BigInt::from(a.0) - BigInt::from(o.0));
    let dx2 = BigRational::from_integer(BigInt::from(b.0) - BigInt::from(o.0));
    dx1 * (&b.1 - &o.1) - (&a.1 - &o.1) * dx2
}

/// Lower hull of the exponent points with the facial data of every edge.
///
/// A segment with two distinct `y`-exponents is accepted as a single edge;
/// only a hull over one `y`-exponent is rejected.
pub fn lower_hull(v: &ViroInput) -> Result<FacialDecomposition> {
    let mut lowest: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (p, q) in v.terms.keys() {
        lowest.entry(*p).and_modify(|m| *m = m.clone().min(q.clone())).or_insert_with(|| q.clone());
    }
    if lowest.len() < 2 {
        return Err(Error::DegenerateHull);
    }
    let mut hull: Vec<(usize, BigRational)> = vec![];
    for pt in lowest {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &pt).is_positive() {
            hull.pop();
        }
        hull.push(pt);
    }
    let edges = hull
        .windows(2)
        .map(|w| {
            let (p1, q1) = &w[0];
            let (p2, q2) = &w[1];
            let slope = (q2 - q1) / BigRational::from_integer(BigInt::from(p2 - p1));
            let intercept = q1 - &slope * BigRational::from_integer((*p1).into());
            let mut facial = vec![];
            let mut lift: Vec<(BigRational, usize, BigRational)> = vec![];
            for ((p, q), c) in &v.terms {
                let e = q - &slope * BigRational::from_integer((*p).into()) - &intercept;
                if e.is_zero() {
                    facial.push((*p, c.clone()));
                } else {
                    lift.push((e, *p, c.clone()));
                }
            }
            let correction = lift.iter().map(|x| &x.0).min().map(|a| {
                let d = SparsePolynomial::new(lift.iter().filter(|x| &x.0 == a).map(|x| (x.1, x.2.clone())));
                (a.clone(), d)
            });
            LowerEdge { start: *p1, end: *p2, slope, intercept, facial: SparsePolynomial::new(facial), correction }
        })
        .collect();
    Ok(FacialDecomposition { edges })
}

/// Contribution `c(ρ)` of one nonzero real facial root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootContribution {
    pub edge: usize,
    pub root: RootLocation,
    pub multiplicity: usize,
    pub contribution: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub count: u64,
    pub ledger: Vec<RootContribution>,
}

fn isolation_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 20))
}

/// Sign of `r` on a punctured neighbourhood of its root at `loc`.
fn sign_near(r: &SparsePolynomial, loc: &RootLocation, m: usize) -> i8 {
    match loc {
        RootLocation::Exact(x) => {
            let factor = SparsePolynomial::new([(1, BigRational::one()), (0, -x.clone())]).pow(m as u32);
            let (quot, _) = r.div_rem(&factor);
            sign_of(&quot.eval(x))
        }
        // Endpoints of an isolating interval are never roots, and no other
        // root lies between the left endpoint and ρ.
        RootLocation::Interval(a, _) => sign_of(&r.eval(a)),
    }
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Σ c(ρ) over the nonzero real roots of every facial polynomial.
pub fn predicted_count(f: &FacialDecomposition) -> Result<Prediction> {
    let mut ledger = vec![];
    for (i, edge) in f.edges.iter().enumerate() {
        let r = edge.facial.unshift(edge.start);
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        for root in isolate(&r, &isolation_width())?.roots {
            let m = root.multiplicity;
            let contribution = if m == 1 {
                1
            } else {
                let d = edge.correction.as_ref().map(|x| x.1.clone()).unwrap_or_default();
                let sd = sign_at_root(&d, &r, &root.location)?;
                if sd == 0 {
                    return Err(Error::HypothesisViolated(format!(
                        "edge {i}: root of multiplicity {m} where the correction term vanishes"
                    )));
                }
                if m % 2 == 1 {
                    1
                } else {
                    // f^(i) = y^start · r(y); y^start has the sign of ρ^start.
                    let below = sign_at_root(&SparsePolynomial::x(), &r, &root.location)? < 0;
                    let rho_sign: i8 = if below && edge.start % 2 == 1 { -1 } else { 1 };
                    let s = rho_sign * sign_near(&r, &root.location, m) * sd;
                    if s > 0 {
                        0
                    } else {
                        2
                    }
                }
            };
            ledger.push(RootContribution { edge: i, root: root.location, multiplicity: m, contribution });
        }
    }
    Ok(Prediction { count: ledger.iter().map(|c| c.contribution as u64).sum(), ledger })
}

/// An exact parameter `t* = 2^-j` with a Sturm-certified root count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub j: u32,
    pub t_star: BigRational,
    pub polynomial: SparsePolynomial,
    pub predicted: u64,
    pub certified: u64,
    pub simple: bool,
    pub ledger: Vec<RootContribution>,
}

impl WitnessCertificate {
    /// Re-run the Sturm count and the simplicity test on `polynomial` alone.
    pub fn check(&self) -> Result<bool> {
        let count = sturm_nonzero(&self.polynomial)?;
        Ok(count == self.certified && nonzero_roots_simple(&self.polynomial) == self.simple)
    }
}

/// Certified count and simplicity of the nonzero real roots of `f`.
pub fn certify(f: &SparsePolynomial) -> Result<(u64, bool)> {
    Ok((sturm_nonzero(f)?, nonzero_roots_simple(f)))
}

fn sturm_nonzero(f: &SparsePolynomial) -> Result<u64> {
    Ok(sturm_count(f, &Bound::NegInf, &Bound::PosInf, true)? as u64)
}

/// Search `t = 2^-j` (with `j` a multiple of the exponent denominator) for
/// the first parameter whose polynomial has only simple nonzero roots and
/// exactly the predicted number of nonzero real ones.
pub fn find_small_t(v: &ViroInput, prediction: &Prediction) -> Result<WitnessCertificate> {
    let step = v.exponent_denominator().to_u32().filter(|&s| s <= MAX_T_EXPONENT).unwrap_or(0);
    let js: Vec<u32> = if step == 0 { vec![0] } else { (0..=MAX_T_EXPONENT).step_by(step as usize).collect() };
    for j in js {
        let Some(f) = v.at_dyadic(j) else { continue };
        if f.is_zero() || f.degree() == f.lowest_exponent() {
            if prediction.count == 0 && !f.is_zero() {
                return Ok(certificate(j, f, prediction, 0, true));
            }
            continue;
        }
        let (count, simple) = certify(&f)?;
        if simple && count == prediction.count {
            return Ok(certificate(j, f, prediction, count, simple));
        }
    }
    Err(Error::SearchExhausted(MAX_T_EXPONENT))
}

fn certificate(j: u32, f: SparsePolynomial, p: &Prediction, count: u64, simple: bool) -> WitnessCertificate {
    WitnessCertificate {
        j,
        t_star: pow2(-(j as i64)),
        polynomial: f,
        predicted: p.count,
        certified: count,
        simple,
        ledger: p.ledger.clone(),
    }
}
