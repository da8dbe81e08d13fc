#![allow(dead_code)]

use nearcircuit::lattice::{invariant_factors, IntMatrix, SupportSet};
use nearcircuit::realroots::SparsePolynomial;
use nearcircuit::supports::{circuit_data, classify, construct_near_circuit, near_circuit_data, SupportClass};
use nearcircuit::viro::ViroInput;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| x.into()).collect()
}

/// Random primitive nondegenerate circuit in `Z^n`, coordinates in [−3, 3].
pub fn random_circuit(rng: &mut ChaCha8Rng, n: usize) -> SupportSet {
    loop {
        let pts: Vec<Vec<i64>> = (0..n + 2).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let Ok(a) = SupportSet::from_i64(n, &pts) else { continue };
        if !matches!(classify(&a), Ok(SupportClass::Circuit)) {
            continue;
        }
        let Ok(c) = circuit_data(&a) else { continue };
        if c.alphas.iter().any(Zero::is_zero) || !invariant_factors(&a).unwrap().index.is_one() {
            continue;
        }
        if near_circuit_data(&a).is_ok() {
            return a;
        }
    }
}

/// A random unimodular matrix: a product of elementary row operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let c = rng.gen_range(-1..=1);
            for k in 0..n {
                m[i][k] += c * m[j][k];
            }
        }
    }
    IntMatrix::from_i64(&m)
}

/// Parameters of a random near circuit with `n ≤ 3`, `k ≤ 2`, `ℓ ≤ 3`.
#[derive(Clone, Debug)]
pub struct NearCircuitParams {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub big_n: i64,
    pub p: usize,
    pub lambdas: Vec<i64>,
}

pub fn random_near_circuit(rng: &mut ChaCha8Rng) -> (NearCircuitParams, SupportSet) {
    loop {
        let n = rng.gen_range(2..=3);
        let nu = rng.gen_range(2..=n);
        let ell = rng.gen_range(1..=3);
        let mut lambdas: Vec<i64> = (0..nu).map(|_| rng.gen_range(1..=3)).collect();
        let one = rng.gen_range(0..nu);
        lambdas[one] = 1;
        let params = NearCircuitParams {
            n,
            k: rng.gen_range(1..=2),
            ell,
            big_n: rng.gen_range(0..=6),
            p: rng.gen_range(0..=nu),
            lambdas,
        };
        let Ok(a) = construct_near_circuit(
            params.n,
            params.k,
            params.ell,
            &params.big_n.into(),
            params.p,
            &big(&params.lambdas),
        ) else {
            continue;
        };
        let m = random_unimodular(rng, n);
        let a = a.transformed(&m).unwrap();
        let shift: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        let a = a.translated(&shift);
        return (params, a);
    }
}

/// Generated Viro input with the lower hull it was built on.
#[derive(Clone, Debug)]
pub struct GeneratedViro {
    pub input: ViroInput,
    /// `(start, end, slope)` for each lower edge.
    pub edges: Vec<(usize, usize, i64)>,
    /// Whether some facial polynomial carries a double real root.
    pub double_root: bool,
}

fn nonzero(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    *[(-r..0).collect::<Vec<_>>(), (1..=r).collect()].concat().choose(rng).unwrap()
}

/// Facial polynomials `c_i ∏(y − ρ)` glued along a convex chain with
/// integer slopes, plus monomials strictly above the hull. With `double`,
/// one edge gets a double root `ρ` and the extra monomials are what decides
/// whether it splits.
pub fn random_viro(rng: &mut ChaCha8Rng, double: bool) -> GeneratedViro {
    let edges_n = rng.gen_range(1..=3);
    let double_edge = rng.gen_range(0..edges_n);
    let mut p = rng.gen_range(0..=2usize);
    let mut height = q(rng.gen_range(0..=2));
    let mut slope = rng.gen_range(-3..=0i64);
    let mut lead = q(nonzero(rng, 3));
    let mut monomials: Vec<(usize, BigRational, BigRational)> = vec![];
    let mut edges = vec![];
    for e in 0..edges_n {
        let mut factors: Vec<SparsePolynomial> = vec![];
        let mut used = vec![];
        let mut pick_root = |rng: &mut ChaCha8Rng| loop {
            let r = nonzero(rng, 5);
            if !used.contains(&r) {
                used.push(r);
                return r;
            }
        };
        let mut len = 0;
        if double && e == double_edge {
            let r = pick_root(rng);
            factors.push(SparsePolynomial::from_coeffs(&[-r, 1]).pow(2));
            len += 2;
        }
        for _ in 0..rng.gen_range(usize::from(len == 0)..=2) {
            if rng.gen_bool(0.25) {
                // y^2 + a, no real roots
                factors.push(SparsePolynomial::from_coeffs(&[rng.gen_range(1..=4), 0, 1]));
                len += 2;
            } else {
                let r = pick_root(rng);
                factors.push(SparsePolynomial::from_coeffs(&[-r, 1]));
                len += 1;
            }
        }
        let prod = factors.iter().fold(SparsePolynomial::one(), |a, f| a.mul(f));
        // Match the coefficient at the shared vertex.
        let c = &lead / prod.constant_term();
        let facial = prod.scale(&c);
        for j in 0..=len {
            let coef = facial.coeff(j);
            if j == 0 && e > 0 {
                continue;
            }
            monomials.push((p + j, &height + q(slope * j as i64), coef));
        }
        edges.push((p, p + len, slope));
        lead = facial.leading_coeff();
        height = &height + q(slope * len as i64);
        p += len;
        slope += rng.gen_range(1..=3);
    }
    let (p0, h0) = (monomials[0].0, monomials[0].1.clone());
    let hull_height = |x: usize| -> BigRational {
        let mut h = h0.clone();
        let (mut at, mut out) = (p0, None);
        for &(s, t, sl) in &edges {
            if x >= s && x <= t {
                out = Some(&h + q(sl * (x - at) as i64));
                break;
            }
            h = &h + q(sl * (t - s) as i64);
            at = t;
        }
        out.expect("inside the hull")
    };
    let (lo, hi) = (edges[0].0, edges.last().unwrap().1);
    let extra = rng.gen_range(usize::from(double)..=3);
    let mut added = 0;
    while added < extra {
        let x = rng.gen_range(lo..=hi);
        let t = hull_height(x) + q(rng.gen_range(1..=2));
        if !monomials.iter().any(|m| m.0 == x && m.1 == t) {
            monomials.push((x, t, q(nonzero(rng, 5))));
            added += 1;
        }
    }
    GeneratedViro { input: ViroInput::new(monomials).unwrap(), edges, double_root: double }
}

/// Number of sign vectors `σ ∈ {±1}^n` with `∏_j σ_j^{W_ji} = sign β_i` for
/// every column `i`. Each one carries exactly one solution of `x^W = β`
/// since `W` is invertible over `Q`.
pub fn brute_force_binomial_count(w: &[Vec<i64>], beta_neg: &[bool]) -> u64 {
    let n = w.len();
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        let ok = (0..n).all(|i| {
            let neg = (0..n).filter(|&j| mask >> j & 1 == 1 && w[j][i].rem_euclid(2) == 1).count() % 2 == 1;
            neg == beta_neg[i]
        });
        count += u64::from(ok);
    }
    count
}
