//! End-to-end acceptance run. Prints one `criterion N: PASS|FAIL` line per
//! criterion and exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{big, brute_force_binomial_count, q, random_circuit, random_near_circuit, random_viro};
use nearcircuit::bounds::{near_circuit_upper_bounds, simplex_bound};
use nearcircuit::commands::solution_count;
use nearcircuit::eliminant::{back_substitute, build_eliminant, residual_tolerance};
use nearcircuit::error::Error;
use nearcircuit::json;
use nearcircuit::lattice::{normalized_volume, IntMatrix, SupportSet};
use nearcircuit::realroots::{count_real_roots, isolate, nonzero_roots_simple, sturm_count, Bound, SparsePolynomial};
use nearcircuit::supports::{circuit_data, classify, construct_near_circuit, delta_family, near_circuit_data};
use nearcircuit::systems::{
    congruence_constraints, gaussian_reduce, random_generic_system, random_generic_system_for, simplex_real_count,
    ReducedSystem,
};
use nearcircuit::viro::{
    asymptotic_counts, best_witness, extremal_inequalities, find_small_t, lower_hull, predicted_count,
    singular_multiplicity_bound, singular_t_values, witness_with_count, ViroInput,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Counts and supports produced along the way, checked by criteria 6 and 7.
#[derive(Default)]
struct Log {
    counts: Vec<(String, SupportSet, BigInt)>,
    supports: Vec<(String, SupportSet)>,
}

impl Log {
    fn count(&mut self, tag: &str, a: &SupportSet, c: impl Into<BigInt>) {
        self.counts.push((tag.to_string(), a.clone(), c.into()));
    }

    fn support(&mut self, tag: &str, a: &SupportSet) {
        self.supports.push((tag.to_string(), a.clone()));
    }
}

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: vec![], notes: vec![] }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn p(c: &[i64]) -> SparsePolynomial {
    SparsePolynomial::from_coeffs(c)
}

fn proportional(a: &SparsePolynomial, b: &SparsePolynomial) -> bool {
    !a.is_zero() && !b.is_zero() && a.scale(&(b.leading_coeff() / a.leading_coeff())) == *b
}

fn criterion_1(log: &mut Log) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let v: serde_json::Value = serde_json::from_str(include_str!("fixtures/delta_3_5_system.json")).unwrap();
    let s = json::parse_system(&v).unwrap();
    let ReducedSystem::NearCircuit { data, g, .. } = gaussian_reduce(&s).unwrap() else {
        o.require(false, "system did not reduce to near-circuit form");
        return o;
    };
    // Displayed reduced form: x = g_x(z), y = g_y(z), xyz^5 = g_xyz(z).
    let displayed = [
        (vec![1, 0, 0], p(&[5, 11, 23, 41])),
        (vec![0, 1, 0], p(&[-8, -18, -38, -72])),
        (vec![1, 1, 5], p(&[2, 6, 14, 30])),
    ];
    let identity = data.normalizer == IntMatrix::identity(3) && data.apex.iter().all(Zero::is_zero);
    o.require(identity, "reduction is not in the original coordinates");
    for (pt, want) in &displayed {
        let i = data.roles.w.iter().position(|&j| s.support.points()[j] == big(pt));
        let got = i.map(|i| &g[i]);
        o.require(got == Some(want), format!("reduced coefficient for x^{pt:?}: got {got:?}"));
    }
    let bundle = build_eliminant(&data, &g).unwrap();
    let shown = p(&[5, 11, 23, 41]).mul(&p(&[8, 18, 38, 72])).shift(5).sub(&p(&[2, 6, 14, 30]));
    o.require(bundle.f.degree() == Some(11), "eliminant degree is not 11");
    o.require(proportional(&bundle.f, &shown), "eliminant differs from the displayed degree-11 polynomial");
    let shown_count = count_real_roots(&shown).unwrap();
    o.note(format!("displayed polynomial has {shown_count} real roots"));
    let count = solution_count(&s).unwrap();
    o.note(format!("system has {count} real solutions"));
    let sturm = sturm_count(&bundle.f, &Bound::NegInf, &Bound::PosInf, true).unwrap();
    o.require(BigInt::from(sturm) == count, format!("Sturm count {sturm} differs from {count}"));
    o.require(count == BigInt::from(3), format!("real solution count is {count}, expected 3"));
    log.count("example", &s.support, count);
    log.support("example", &s.support);
    let tol = residual_tolerance();
    for r in isolate(&bundle.f, &BigRational::one()).unwrap().roots {
        let b = back_substitute(&bundle, &s, &r.location, 4096).unwrap();
        o.require(b.verified && b.max_residual() < tol, "back-substitution residual above 1e-20");
    }
    let t = start.elapsed();
    o.require(t < Duration::from_secs(1), format!("took {t:?}"));
    o
}

fn criterion_2(log: &mut Log) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut witnesses = 0;
    let mut randoms = 0;
    for (k, l) in [(1usize, 2usize), (1, 3), (2, 3), (2, 4), (3, 5)] {
        for eps in [[1u8, 0], [1, 1]] {
            let e = eps.iter().filter(|&&x| x == 1).count();
            let a = delta_family(3, k, l, &eps).unwrap();
            let data = near_circuit_data(&a).unwrap();
            log.support("delta", &a);
            let top = k + k * e + 2;
            let bound = k + k * e + if (l - k) % 2 == 1 { 1 } else { 2 };
            let tag = format!("Δ(3,{k},{l},{eps:?})");
            for r in (0..=top).filter(|r| (r + l + k * e) % 2 == 0) {
                match witness_with_count(&data, r as u64) {
                    Ok(w) => {
                        let c = &w.certificate;
                        o.require(c.certified == r as u64, format!("{tag} r={r}: certified {}", c.certified));
                        o.require(c.check().unwrap(), format!("{tag} r={r}: certificate recount differs"));
                        let recount = solution_count(&w.system);
                        o.require(
                            recount.as_ref().ok() == Some(&BigInt::from(r)),
                            format!("{tag} r={r}: system re-reduction counts {recount:?}"),
                        );
                        log.count("delta-witness", &w.system.support, r);
                        log.support("delta-witness", &w.system.support);
                        witnesses += 1;
                    }
                    Err(err) => o.require(false, format!("{tag} r={r}: {err}")),
                }
            }
            for seed in 0..200u64 {
                let s = random_generic_system(&a, seed).unwrap();
                let c = solution_count(&s).unwrap();
                o.require(c <= BigInt::from(bound), format!("{tag} seed {seed}: {c} > {bound}"));
                log.count("delta-random", &a, c);
                randoms += 1;
            }
        }
    }
    let t = start.elapsed();
    o.note(format!("{witnesses} certified witnesses, {randoms} random systems, {t:.1?}"));
    o.require(t < Duration::from_secs(300), format!("took {t:?}"));
    o
}

fn criterion_3(log: &mut Log) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2usize, 3] {
        let bound = BigInt::from(2 * n + 1);
        let mut max = BigInt::zero();
        for i in 0..50u64 {
            let a = random_circuit(&mut rng, n);
            log.support("circuit", &a);
            let s = random_generic_system(&a, 1000 * n as u64 + i).unwrap();
            let c = solution_count(&s).unwrap();
            o.require(c <= bound, format!("n={n} circuit {i}: {c} > {bound}"));
            max = max.max(c.clone());
            log.count("circuit-random", &a, c);
        }
        o.note(format!("n={n}: max observed {max}"));
        let (nn, lam): (i64, &[i64]) = if n == 2 { (4, &[1, 2]) } else { (6, &[1, 2, 2]) };
        let a = construct_near_circuit(n, 1, 1, &nn.into(), 1, &big(lam)).unwrap();
        let data = near_circuit_data(&a).unwrap();
        log.support("circuit-witness", &a);
        match best_witness(&data) {
            Ok(w) => {
                let c = &w.certificate;
                o.require(c.certified == 2 * n as u64 + 1, format!("n={n}: witness reaches {}", c.certified));
                o.require(c.check().unwrap(), format!("n={n}: certificate recount differs"));
                let recount = solution_count(&w.system).unwrap();
                o.require(recount == bound, format!("n={n}: re-reduced witness counts {recount}"));
                log.count("circuit-witness", &w.system.support, recount);
            }
            Err(e) => o.require(false, format!("n={n}: {e}")),
        }
    }
    let t = start.elapsed();
    o.note(format!("{t:.1?}"));
    o.require(t < Duration::from_secs(300), format!("took {t:?}"));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut split = BTreeSet::new();
    let mut rejected = 0;
    for double in [false, true] {
        let mut accepted = 0;
        while accepted < 20 {
            let gen = random_viro(&mut rng, double);
            let v: &ViroInput = &gen.input;
            let hull = lower_hull(v).unwrap();
            let edges: Vec<(usize, usize, BigRational)> =
                hull.edges.iter().map(|e| (e.start, e.end, e.slope.clone())).collect();
            let want: Vec<(usize, usize, BigRational)> = gen.edges.iter().map(|&(s, t, m)| (s, t, q(m))).collect();
            o.require(edges == want, format!("hull {edges:?} differs from generated {want:?}"));
            let pred = match predicted_count(&hull) {
                Ok(pr) => pr,
                Err(Error::HypothesisViolated(_)) => {
                    rejected += 1;
                    continue;
                }
                Err(e) => {
                    o.require(false, format!("prediction failed: {e}"));
                    break;
                }
            };
            accepted += 1;
            for c in pred.ledger.iter().filter(|c| c.multiplicity == 2) {
                split.insert(c.contribution);
            }
            match find_small_t(v, &pred) {
                Ok(cert) => {
                    o.require(cert.certified == pred.count, format!("certified {} ≠ {}", cert.certified, pred.count));
                    o.require(cert.check().unwrap(), "certificate recount differs");
                }
                Err(e) => o.require(false, format!("no certified t: {e}")),
            }
            if let Some(f) = v.at_dyadic(96) {
                let c = count_real_roots(&f).unwrap() as u64;
                o.require(c == pred.count && nonzero_roots_simple(&f), format!("t=2^-96 count {c} ≠ {}", pred.count));
            }
        }
    }
    o.require(split.contains(&0) && split.contains(&2), format!("double-root sign cases seen: {split:?}"));
    o.note(format!("40 inputs, {rejected} rejected for a vanishing correction"));
    o
}

fn criterion_5(log: &mut Log) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut seed = 0u64;
    let mut skipped = 0;
    while done < 100 {
        let (params, a) = random_near_circuit(&mut rng);
        let data = near_circuit_data(&a).unwrap();
        if !data.primitive {
            skipped += 1;
            continue;
        }
        seed += 1;
        let tag = format!("{params:?}");
        let (_, g) = random_generic_system_for(&data, seed).unwrap();
        let bundle = build_eliminant(&data, &g).unwrap();
        match singular_t_values(&bundle) {
            Ok(st) => {
                let b = singular_multiplicity_bound(&data);
                o.require(
                    st.total_multiplicity() <= b,
                    format!("{tag}: singular multiplicity {} > {b}", st.total_multiplicity()),
                );
            }
            Err(e) => o.require(false, format!("{tag}: {e}")),
        }
        match asymptotic_counts(&bundle) {
            Ok(r) => {
                for (name, ok) in extremal_inequalities(&data, &r) {
                    o.require(ok, format!("{tag}: {name} fails for {r:?}"));
                }
            }
            Err(e) => o.require(false, format!("{tag}: {e}")),
        }
        let c = count_real_roots(&bundle.f).unwrap() as u64;
        let up = near_circuit_upper_bounds(&data).unwrap();
        o.require(c <= up.min(), format!("{tag}: count {c} > {up:?}"));
        log.count("near-circuit", &a, c);
        log.support("near-circuit", &a);
        done += 1;
    }
    o.note(format!("{skipped} non-primitive draws skipped"));
    o
}

fn criterion_6(log: &Log) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    // failures for one exponent matrix, None when it is singular
    let check = |w: &Vec<Vec<i64>>| -> Option<Vec<String>> {
        let n = w.len();
        let m = IntMatrix::from_i64(w);
        if m.det().is_zero() {
            return None;
        }
        let mut pts = vec![vec![0i64; n]];
        pts.extend((0..n).map(|i| (0..n).map(|j| w[j][i]).collect::<Vec<_>>()));
        let a = SupportSet::from_i64(n, &pts).unwrap();
        let predicted: BTreeSet<BigInt> = simplex_bound(&a).unwrap().into_iter().collect();
        let cong = congruence_constraints(&a).unwrap();
        let mut seen = BTreeSet::new();
        let mut bad = vec![];
        for mask in 0u32..(1 << n) {
            let neg: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let beta: Vec<BigRational> = neg.iter().map(|&x| q(if x { -1 } else { 1 })).collect();
            let c = simplex_real_count(&m, &beta).unwrap();
            let oracle = brute_force_binomial_count(w, &neg);
            if c != BigInt::from(oracle) || !cong.admits(&c) {
                bad.push(format!("W={w:?} β-signs={neg:?}: count {c}, oracle {oracle}"));
            }
            seen.insert(c);
        }
        if seen != predicted {
            bad.push(format!("W={w:?}: counts {seen:?}, predicted {predicted:?}"));
        }
        Some(bad)
    };
    let mut all: Vec<Vec<Vec<i64>>> = (1..=4).map(|a| vec![vec![a]]).collect();
    for e in 0..5i64.pow(4) {
        let d: Vec<i64> = (0..4).map(|i| e / 5i64.pow(i) % 5).collect();
        all.push(vec![d[0..2].to_vec(), d[2..4].to_vec()]);
    }
    // n = 3 up to row and column permutations, which relabel the variables
    // and permute the signs of β, leaving the set of counts unchanged
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for e in 0..5i64.pow(9) {
        let d: Vec<i64> = (0..9).map(|i| e / 5i64.pow(i) % 5).collect();
        let canonical = perms.iter().all(|r| {
            perms.iter().all(|c| {
                let pd: Vec<i64> = (0..9).map(|i| d[3 * r[i / 3] + c[i % 3]]).collect();
                pd >= d
            })
        });
        if canonical {
            all.push(vec![d[0..3].to_vec(), d[3..6].to_vec(), d[6..9].to_vec()]);
        }
    }
    let results: Vec<Vec<String>> = all.par_iter().filter_map(check).collect();
    let simplices = results.len();
    for why in results.into_iter().flatten() {
        o.require(false, why);
    }
    let mut bad = 0;
    for (tag, a, c) in &log.counts {
        let cong = congruence_constraints(a).unwrap();
        if !cong.admits(c) {
            bad += 1;
            o.require(false, format!("{tag}: count {c} violates {cong:?}"));
        }
    }
    o.note(format!(
        "{simplices} simplices exhaustively, {} logged counts ({bad} bad), {:.1?}",
        log.counts.len(),
        start.elapsed()
    ));
    o
}

fn criterion_7(log: &Log) -> Outcome {
    let mut o = Outcome::new();
    let mut checked = 0;
    let mut seen = BTreeSet::new();
    for (tag, a) in &log.supports {
        if !seen.insert(a.points().to_vec()) {
            continue;
        }
        let v = normalized_volume(a).unwrap();
        let data = near_circuit_data(a).unwrap();
        let formula = data.eliminant_degree();
        let (_, g) = random_generic_system_for(&data, 7).unwrap();
        let deg = build_eliminant(&data, &g).unwrap().f.degree().map(BigInt::from);
        o.require(deg.as_ref() == Some(&v), format!("{tag} {:?}: degree {deg:?}, volume {v}", a.points()));
        o.require(formula == v, format!("{tag} {:?}: formula {formula}, volume {v}", a.points()));
        if classify(a).unwrap() == nearcircuit::supports::SupportClass::Circuit {
            let cv = circuit_data(a).unwrap().volume;
            o.require(cv == v, format!("{tag} {:?}: circuit formula {cv}, volume {v}", a.points()));
        }
        checked += 1;
    }
    o.note(format!("{checked} distinct supports"));
    o
}

fn main() {
    let mut log = Log::default();
    let mut results = vec![];
    let mut timed = |i: usize, f: &mut dyn FnMut(&mut Log) -> Outcome, log: &mut Log| {
        let t = Instant::now();
        let r = f(log);
        eprintln!("criterion {i} finished in {:.1?}", t.elapsed());
        results.push(r);
    };
    timed(1, &mut criterion_1, &mut log);
    timed(2, &mut criterion_2, &mut log);
    timed(3, &mut criterion_3, &mut log);
    timed(4, &mut |_| criterion_4(), &mut log);
    timed(5, &mut criterion_5, &mut log);
    timed(6, &mut |l| criterion_6(l), &mut log);
    timed(7, &mut |l| criterion_7(l), &mut log);
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} ({})", i + 1, r.notes.join("; "));
        for f in r.failures.iter().take(10) {
            println!("    {f}");
        }
        if r.failures.len() > 10 {
            println!("    … {} more", r.failures.len() - 10);
        }
        failed += usize::from(!r.failures.is_empty());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
}
