//! Classification of supports and extraction of circuit and near-circuit
//! arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{gcd_all, invariant_factors, smith_normal_form, IntMatrix, SupportSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportClass {
    Simplex,
    Circuit,
    NearCircuit,
    Other,
}

impl SupportClass {
    pub fn name(self) -> &'static str {
        match self {
            SupportClass::Simplex => "Simplex",
            SupportClass::Circuit => "Circuit",
            SupportClass::NearCircuit => "NearCircuit",
            SupportClass::Other => "Other",
        }
    }
}

/// A presentation `{a, a+w0, …, a+k·w0, rest}` of a near circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Presentation {
    apex: usize,
    /// Indices of `a + j·w0`, j = 1..k.
    progression: Vec<usize>,
    direction: Vec<BigInt>,
    ell: BigInt,
}

fn primitive_direction(v: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let g = gcd_all(v);
    (v.iter().map(|x| x / &g).collect(), g)
}

/// Try apex `a` and first step `b` as a presentation with exactly `k` steps.
fn try_presentation(pts: &[Vec<BigInt>], a: usize, b: usize, k: usize) -> Option<Presentation> {
    let w0: Vec<BigInt> = pts[b].iter().zip(&pts[a]).map(|(x, y)| x - y).collect();
    let (d, ell) = primitive_direction(&w0);
    // Points on the line a + R·d, with their parameter t (in units of d).
    let mut on_line: Vec<(BigInt, usize)> = vec![];
    for (i, p) in pts.iter().enumerate() {
        let diff: Vec<BigInt> = p.iter().zip(&pts[a]).map(|(x, y)| x - y).collect();
        // diff = t·d ?
        let j = d.iter().position(|x| !x.is_zero()).unwrap();
        if !diff[j].is_multiple_of(&d[j]) {
            continue;
        }
        let t = &diff[j] / &d[j];
        if diff.iter().zip(&d).all(|(x, y)| *x == &t * y) {
            on_line.push((t, i));
        }
    }
    if on_line.len() != k + 1 {
        return None;
    }
    on_line.sort();
    let expected: Vec<BigInt> = (0..=k).map(|j| &ell * BigInt::from(j)).collect();
    if on_line.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>() != expected {
        return None;
    }
    Some(Presentation { apex: a, progression: on_line[1..].iter().map(|x| x.1).collect(), direction: d, ell })
}

/// All presentations with `k` steps, best first: origin apex preferred, then
/// lexicographically smallest primitive direction, then smallest apex.
fn presentations(a: &SupportSet, k: usize) -> Vec<Presentation> {
    let pts = a.points();
    let mut out = vec![];
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i != j {
                if let Some(p) = try_presentation(pts, i, j, k) {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    let origin = a.origin_index();
    out.sort_by(|x, y| {
        let ox = Some(x.apex) != origin;
        let oy = Some(y.apex) != origin;
        ox.cmp(&oy).then_with(|| x.direction.cmp(&y.direction)).then_with(|| pts[x.apex].cmp(&pts[y.apex]))
    });
    out
}

/// Classify a full-dimensional support.
pub fn classify(a: &SupportSet) -> Result<SupportClass> {
    let n = a.dim();
    if !a.spans() {
        return Err(Error::NotFullRank(n));
    }
    let m = a.len();
    if m == n + 1 {
        return Ok(SupportClass::Simplex);
    }
    if m == n + 2 {
        return Ok(SupportClass::Circuit);
    }
    if n >= 2 && !presentations(a, m - n - 1).is_empty() {
        return Ok(SupportClass::NearCircuit);
    }
    Ok(SupportClass::Other)
}

/// Arithmetic of a circuit `{w_{-1}, w_0, …, w_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitData {
    /// Original indices of `w_{-1}, w_0, w_1, …, w_n` (after reordering).
    pub roles: Vec<usize>,
    /// `w_i − w_{-1}` for i = 0..n.
    pub vectors: Vec<Vec<BigInt>>,
    /// `α_{-1}, α_0, …, α_n`.
    pub alphas: Vec<BigInt>,
    pub index: BigInt,
    /// `|α_i|` in the same order as `alphas`.
    pub lambdas: Vec<BigInt>,
    pub p: usize,
    pub nu: usize,
    /// `v(A_i)`: volume of the simplex omitting `w_i`, same order.
    pub simplex_volumes: Vec<BigInt>,
    /// `a · max(Σ_{i=0}^{p} λ_i, Σ_{i>p} λ_i)`.
    pub volume: BigInt,
}

/// Kernel vector of an n×(n+1) integer matrix by signed maximal minors.
fn cramer_kernel(cols: &[Vec<BigInt>]) -> Vec<BigInt> {
    (0..cols.len())
        .map(|i| {
            let rest: Vec<Vec<BigInt>> =
                cols.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
            let d = IntMatrix::from_columns(&rest).map(|m| m.det()).unwrap_or_default();
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn stable_sign_order(c: &[BigInt]) -> Vec<usize> {
    let pos = (0..c.len()).filter(|&i| c[i].is_positive());
    let neg = (0..c.len()).filter(|&i| c[i].is_negative());
    let zero = (0..c.len()).filter(|&i| c[i].is_zero());
    pos.chain(neg).chain(zero).collect()
}

pub fn circuit_data(c: &SupportSet) -> Result<CircuitData> {
    let n = c.dim();
    if c.len() != n + 2 {
        return Err(Error::Unsupported(format!("a circuit in dimension {n} has {} points", n + 2)));
    }
    if !c.spans() {
        return Err(Error::NotFullRank(n));
    }
    let pts = c.points();
    let base = c.origin_index().unwrap_or(0);
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != base).collect();
    let vecs = |idx: &[usize]| -> Vec<Vec<BigInt>> {
        idx.iter().map(|&i| pts[i].iter().zip(&pts[base]).map(|(x, y)| x - y).collect()).collect()
    };
    let raw = cramer_kernel(&vecs(&others));
    if raw.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateInput("all cofactors vanish".into()));
    }
    let g = gcd_all(&raw);
    let mut alpha: Vec<BigInt> = raw.iter().map(|x| x / &g).collect();
    let first = alpha.iter().find(|x| !x.is_zero()).unwrap();
    if alpha[0].is_negative() || (alpha[0].is_zero() && first.is_negative()) {
        alpha.iter_mut().for_each(|x| *x = -x.clone());
    }
    // Reorder w_1..w_n by sign, keeping w_0 first.
    let tail_order = stable_sign_order(&alpha[1..]);
    let mut order = vec![others[0]];
    order.extend(tail_order.iter().map(|&i| others[i + 1]));
    let mut alphas_tail = vec![alpha[0].clone()];
    alphas_tail.extend(tail_order.iter().map(|&i| alpha[i + 1].clone()));
    let alpha_m1: BigInt = -alphas_tail.iter().sum::<BigInt>();
    let mut alphas = vec![alpha_m1];
    alphas.extend(alphas_tail);

    let mut roles = vec![base];
    roles.extend(order.iter().copied());
    let vectors = vecs(&order);
    // v(A_i): drop w_i from {w_{-1}, …, w_n}.
    let all: Vec<Vec<BigInt>> = roles.iter().map(|&i| pts[i].clone()).collect();
    let simplex_volumes: Vec<BigInt> = (0..all.len())
        .map(|i| {
            let rest: Vec<&Vec<BigInt>> = all.iter().enumerate().filter(|&(j, _)| j != i).map(|x| x.1).collect();
            let cols: Vec<Vec<BigInt>> =
                rest[1..].iter().map(|p| p.iter().zip(rest[0]).map(|(x, y)| x - y).collect()).collect();
            IntMatrix::from_columns(&cols).map(|m| m.det().abs()).unwrap_or_default()
        })
        .collect();
    let index = gcd_all(&simplex_volumes);
    let lambdas: Vec<BigInt> = alphas.iter().map(|x| x.abs()).collect();
    let p = alphas[2..].iter().filter(|x| x.is_positive()).count();
    let nu = alphas[2..].iter().filter(|x| !x.is_zero()).count();
    let pos: BigInt = lambdas[1..p + 2].iter().sum();
    let neg: BigInt = lambdas[p + 2..].iter().sum();
    let volume = &index * pos.max(neg);
    Ok(CircuitData { roles, vectors, alphas, index, lambdas, p, nu, simplex_volumes, volume })
}

/// Where each near-circuit role sits in the original support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearCircuitRoles {
    pub apex: usize,
    /// Indices of `j·w0`, j = 1..k.
    pub progression: Vec<usize>,
    /// Indices of `w_1, …, w_n` in canonical order.
    pub w: Vec<usize>,
}

/// Arithmetic of a near circuit in normalized coordinates (`w0 = ℓ·e_n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearCircuitData {
    pub support: SupportSet,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    /// Primitive generator of `R·w0 ∩ Z^n` in original coordinates.
    pub direction: Vec<BigInt>,
    pub apex: Vec<BigInt>,
    /// Unimodular `T` with `T·direction = e_n`; normalized points are `T(x − apex)`.
    pub normalizer: IntMatrix,
    pub w: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub l: Vec<BigInt>,
    /// Signed coefficients `c_i` of the relation `N e_n + Σ c_i w_i = 0`.
    pub coefficients: Vec<BigInt>,
    pub big_n: BigInt,
    /// `λ_1, …, λ_ν`.
    pub lambdas: Vec<BigInt>,
    pub p: usize,
    pub nu: usize,
    pub delta: BigInt,
    pub index: BigInt,
    pub primitive: bool,
    pub roles: NearCircuitRoles,
}

impl NearCircuitData {
    pub fn n_usize(&self) -> usize {
        self.big_n.to_usize().expect("N fits in usize")
    }

    pub fn lambda_usize(&self, i: usize) -> usize {
        self.lambdas[i].to_usize().expect("λ fits in usize")
    }

    pub fn sum_pos(&self) -> BigInt {
        self.lambdas[..self.p].iter().sum()
    }

    pub fn sum_neg(&self) -> BigInt {
        self.lambdas[self.p..].iter().sum()
    }

    /// `max(N + kℓΣ_{i≤p}λ_i, kℓΣ_{i>p}λ_i)`: degree of the eliminant.
    pub fn eliminant_degree(&self) -> BigInt {
        let kl = BigInt::from(self.k * self.ell);
        let f = &self.big_n + &kl * self.sum_pos();
        let g = &kl * self.sum_neg();
        f.max(g)
    }

    /// Whether `gcd(N, ℓ) = 1`, as it must be for a primitive near circuit.
    pub fn coprimality_holds(&self) -> bool {
        if self.big_n.is_zero() {
            self.ell == 1
        } else {
            self.big_n.gcd(&BigInt::from(self.ell)).is_one()
        }
    }

    /// Map a point of the support into normalized coordinates.
    pub fn normalize(&self, x: &[BigInt]) -> Vec<BigInt> {
        let d: Vec<BigInt> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        self.normalizer.mul_vec(&d)
    }
}

/// Unimodular `T` with `T·d = e_n` for a primitive vector `d`.
fn normalizer_for(d: &[BigInt]) -> Result<IntMatrix> {
    let n = d.len();
    let last = &d[n - 1];
    if last.abs().is_one() {
        // [[I, −d_n·d'], [0, d_n]]
        let mut t = IntMatrix::identity(n);
        for i in 0..n - 1 {
            t[(i, n - 1)] = -(last * &d[i]);
        }
        t[(n - 1, n - 1)] = last.clone();
        return Ok(t);
    }
    let col = IntMatrix::from_columns(&[d.to_vec()])?;
    let snf = smith_normal_form(&col);
    // U·d·V = e_1 with V = [±1].
    let sign = snf.v[(0, 0)].clone();
    let mut t = IntMatrix::zeros(n, n);
    for i in 0..n {
        let target = if i == 0 { n - 1 } else { i - 1 };
        for j in 0..n {
            t[(target, j)] = &snf.u[(i, j)] * &sign;
        }
    }
    debug_assert!(t.is_unimodular());
    Ok(t)
}

/// Near-circuit data using the canonical presentation.
pub fn near_circuit_data(a: &SupportSet) -> Result<NearCircuitData> {
    let n = a.dim();
    if !a.spans() {
        return Err(Error::NotFullRank(n));
    }
    if n < 2 || a.len() < n + 2 {
        return Err(Error::Unsupported("not a near circuit".into()));
    }
    let k = a.len() - n - 1;
    let pres = presentations(a, k);
    let best = pres.into_iter().next().ok_or_else(|| Error::Unsupported("not a near circuit".into()))?;
    near_circuit_from(a, best)
}

/// Near-circuit data for an explicit presentation: `apex` and the first
/// progression point `w0` given as indices into the support.
pub fn near_circuit_data_at(a: &SupportSet, apex: usize, w0: usize) -> Result<NearCircuitData> {
    let n = a.dim();
    if !a.spans() {
        return Err(Error::NotFullRank(n));
    }
    if n < 2 || a.len() < n + 2 || apex >= a.len() || w0 >= a.len() || apex == w0 {
        return Err(Error::Unsupported("not a near circuit presentation".into()));
    }
    let k = a.len() - n - 1;
    let pres = try_presentation(a.points(), apex, w0, k)
        .ok_or_else(|| Error::Unsupported("not a near circuit presentation".into()))?;
    if pres.progression.first() != Some(&w0) {
        return Err(Error::Unsupported("w0 is not the first progression step".into()));
    }
    near_circuit_from(a, pres)
}

fn near_circuit_from(a: &SupportSet, pres: Presentation) -> Result<NearCircuitData> {
    let n = a.dim();
    let pts = a.points();
    let k = pres.progression.len();
    let ell = pres.ell.to_usize().ok_or_else(|| Error::Unsupported("ℓ too large".into()))?;
    let t = normalizer_for(&pres.direction)?;
    let apex = pts[pres.apex].clone();
    let norm = |x: &[BigInt]| -> Vec<BigInt> {
        let d: Vec<BigInt> = x.iter().zip(&apex).map(|(p, q)| p - q).collect();
        t.mul_vec(&d)
    };
    let rest: Vec<usize> = (0..pts.len()).filter(|i| *i != pres.apex && !pres.progression.contains(i)).collect();
    debug_assert_eq!(rest.len(), n);
    let w: Vec<Vec<BigInt>> = rest.iter().map(|&i| norm(&pts[i])).collect();
    let v: Vec<Vec<BigInt>> = w.iter().map(|x| x[..n - 1].to_vec()).collect();
    let l: Vec<BigInt> = w.iter().map(|x| x[n - 1].clone()).collect();
    let raw = if n == 1 { vec![] } else { cramer_kernel_rows(&v) };
    if raw.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateInput("the v_i do not span".into()));
    }
    let g = gcd_all(&raw);
    let mut c: Vec<BigInt> = raw.iter().map(|x| x / &g).collect();
    let mut big_n: BigInt = -c.iter().zip(&l).map(|(ci, li)| ci * li).sum::<BigInt>();
    let first_neg = c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if big_n.is_negative() || (big_n.is_zero() && first_neg) {
        c.iter_mut().for_each(|x| *x = -x.clone());
        big_n = -big_n;
    }
    let order = stable_sign_order(&c);
    let w: Vec<Vec<BigInt>> = order.iter().map(|&i| w[i].clone()).collect();
    let v: Vec<Vec<BigInt>> = order.iter().map(|&i| v[i].clone()).collect();
    let l: Vec<BigInt> = order.iter().map(|&i| l[i].clone()).collect();
    let c: Vec<BigInt> = order.iter().map(|&i| c[i].clone()).collect();
    let w_roles: Vec<usize> = order.iter().map(|&i| rest[i]).collect();
    let p = c.iter().filter(|x| x.is_positive()).count();
    let nu = c.iter().filter(|x| !x.is_zero()).count();
    let lambdas: Vec<BigInt> = c[..nu].iter().map(|x| x.abs()).collect();
    let kl = BigInt::from(k * ell);
    let sp: BigInt = lambdas[..p].iter().sum();
    let sn: BigInt = lambdas[p..].iter().sum();
    let delta = &big_n + &kl * sp - &kl * sn;
    let index = invariant_factors(a)?.index;
    let primitive = index.is_one();
    let progression = pres.progression.clone();
    Ok(NearCircuitData {
        support: a.clone(),
        n,
        k,
        ell,
        direction: pres.direction,
        apex,
        normalizer: t,
        w,
        v,
        l,
        coefficients: c,
        big_n,
        lambdas,
        p,
        nu,
        delta,
        index,
        primitive,
        roles: NearCircuitRoles { apex: pres.apex, progression, w: w_roles },
    })
}

/// Kernel of the (n−1)×n matrix whose columns are the given vectors.
fn cramer_kernel_rows(cols: &[Vec<BigInt>]) -> Vec<BigInt> {
    cramer_kernel(cols)
}

/// The near circuit with prescribed arithmetic, in normalized coordinates:
/// `{0, ℓe_n, …, kℓe_n, w_1, …, w_n}`.
pub fn construct_near_circuit(
    n: usize,
    k: usize,
    ell: usize,
    big_n: &BigInt,
    p: usize,
    lambdas: &[BigInt],
) -> Result<SupportSet> {
    let bad = |m: &str| Err(Error::InvalidParameters(m.into()));
    let nu = lambdas.len();
    if n < 2 || k < 1 || ell < 1 {
        return bad("need n ≥ 2, k ≥ 1, ℓ ≥ 1");
    }
    if nu < 2 || nu > n || p > nu {
        return bad("need 2 ≤ ν ≤ n and p ≤ ν");
    }
    if lambdas.iter().any(|x| !x.is_positive()) || !gcd_all(lambdas).is_one() {
        return bad("λ must be positive with gcd 1");
    }
    if big_n.is_negative() {
        return bad("N must be nonnegative");
    }
    if big_n.is_zero() && ell != 1 || !big_n.is_zero() && !big_n.gcd(&BigInt::from(ell)).is_one() {
        return bad("N and ℓ must be coprime (ℓ = 1 when N = 0)");
    }
    let Some(q) = (0..nu).rev().find(|&i| lambdas[i].is_one()) else {
        return bad("one λ_i must equal 1");
    };
    let c: Vec<BigInt> = (0..nu).map(|i| if i < p { lambdas[i].clone() } else { -lambdas[i].clone() }).collect();
    let mut v: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n - 1]; n];
    let mut unit = 0;
    for (i, vi) in v.iter_mut().enumerate().take(nu) {
        if i != q {
            vi[unit] = BigInt::one();
            unit += 1;
        }
    }
    // c_q = ±1, so v_q = −c_q·Σ_{i≠q} c_i v_i.
    let mut vq = vec![BigInt::zero(); n - 1];
    for i in (0..nu).filter(|&i| i != q) {
        for (j, x) in vq.iter_mut().enumerate() {
            *x -= &c[q] * &c[i] * &v[i][j];
        }
    }
    v[q] = vq;
    for (i, vi) in v.iter_mut().enumerate().skip(nu) {
        vi[i - 1] = BigInt::one();
    }
    let mut l = vec![BigInt::zero(); n];
    l[q] = -(&c[q] * big_n);
    let mut points = vec![vec![BigInt::zero(); n]];
    for j in 1..=k {
        let mut e = vec![BigInt::zero(); n];
        e[n - 1] = BigInt::from(j * ell);
        points.push(e);
    }
    for i in 0..n {
        let mut w = v[i].clone();
        w.push(l[i].clone());
        points.push(w);
    }
    SupportSet::new(n, points).map_err(|e| Error::InvalidParameters(e.to_string()))
}

/// The Δ-family support `{0, e_1, …, e_{n−1}, e_n, …, k·e_n, (ε, l)}`.
pub fn delta_family(n: usize, k: usize, l: usize, eps: &[u8]) -> Result<SupportSet> {
    if n < 3 || k == 0 || l <= k || eps.len() != n - 1 || eps.iter().any(|&e| e > 1) || eps.iter().all(|&e| e == 0) {
        return Err(Error::InvalidParameters("need l > k > 0, n ≥ 3, ε ∈ {0,1}^(n−1) nonzero".into()));
    }
    let mut points = vec![vec![BigInt::zero(); n]];
    for i in 0..n - 1 {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        points.push(e);
    }
    for j in 1..=k {
        let mut e = vec![BigInt::zero(); n];
        e[n - 1] = BigInt::from(j);
        points.push(e);
    }
    let mut last: Vec<BigInt> = eps.iter().map(|&e| BigInt::from(e)).collect();
    last.push(BigInt::from(l));
    points.push(last);
    SupportSet::new(n, points)
}
