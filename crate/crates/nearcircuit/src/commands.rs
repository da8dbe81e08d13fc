//! Subcommands behind the `nearcircuit` binary. Each takes parsed JSON and
//! returns a JSON document plus an exit code.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::bounds::bound_report;
use crate::eliminant::{back_substitute, build_eliminant, EliminantBundle};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{invariant_factors, normalized_volume, SupportSet};
use crate::realroots::{
    count_real_roots, isolate, nonzero_roots_simple, signed_root_counts, sturm_count, Bound, RootLocation,
    SparsePolynomial,
};
use crate::supports::{circuit_data, classify, near_circuit_data, NearCircuitData, SupportClass};
use crate::systems::{
    congruence_constraints, gaussian_reduce, random_generic_system, simplex_real_count, ReducedSystem, SystemSpec,
};
use crate::viro::{best_witness, root_ladder, witness_with_count};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Settings shared by all subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub trials: usize,
    pub precision_cap: u32,
    pub target: Option<u64>,
    pub check: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: None, trials: 200, precision_cap: 4096, target: None, check: false }
    }
}

impl RunConfig {
    fn seed(&self, what: &str) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Input(format!("{what} is randomized and needs --seed")))
    }
}

/// A finished command: its JSON report and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: EXIT_OK }
    }

    fn checked(value: Value, pass: bool) -> Self {
        Outcome { value, code: if pass { EXIT_OK } else { EXIT_VERIFICATION } }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_)
        | Error::ConstraintViolated(_)
        | Error::Unsupported(_)
        | Error::IndexNotOdd(_)
        | Error::SignInfeasible
        | Error::NotSimplex => EXIT_INFEASIBLE,
        Error::HypothesisViolated(_)
        | Error::SearchExhausted(_)
        | Error::PerturbationExhausted
        | Error::CriticalValueCollision
        | Error::SingularMatrix
        | Error::CommonFactor => EXIT_VERIFICATION,
        _ => EXIT_INPUT,
    }
}

/// Inline JSON (starting with `{`), `-` for stdin, or a file path.
pub fn load_input(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

fn is_system(v: &Value) -> bool {
    v.get("coefficients").is_some()
}

fn near_circuit_of(a: &SupportSet) -> Result<NearCircuitData> {
    match classify(a)? {
        SupportClass::Circuit | SupportClass::NearCircuit if a.dim() >= 2 => near_circuit_data(a),
        c => Err(Error::Unsupported(format!("{} support has no near-circuit presentation", c.name()))),
    }
}

pub fn cmd_classify(input: &Value) -> Result<Outcome> {
    let a = json::parse_support(input)?;
    let class = classify(&a)?;
    let mut m = Map::new();
    m.insert("class".into(), json!(class.name()));
    m.insert("support".into(), json::support(&a));
    m.insert("volume".into(), json::int(&normalized_volume(&a)?));
    m.insert("invariant_factors".into(), json::invariant_factors(&invariant_factors(&a)?));
    if class == SupportClass::Circuit {
        m.insert("circuit".into(), json::circuit(&circuit_data(&a)?));
    }
    if matches!(class, SupportClass::Circuit | SupportClass::NearCircuit) && a.dim() >= 2 {
        m.insert("near_circuit".into(), json::near_circuit(&near_circuit_data(&a)?));
    }
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn cmd_bounds(input: &Value) -> Result<Outcome> {
    let a = json::parse_support(input)?;
    Ok(Outcome::ok(json::bound_report(&bound_report(&a)?)))
}

/// The system given as input, or a random generic one on the given support.
fn system_or_random(input: &Value, cfg: &RunConfig, what: &str) -> Result<SystemSpec> {
    if is_system(input) {
        json::parse_system(input)
    } else {
        random_generic_system(&json::parse_support(input)?, cfg.seed(what)?)
    }
}

fn reduced_json(r: &ReducedSystem) -> Value {
    match r {
        ReducedSystem::Simplex { base, w, beta } => json!({
            "form": "binomial",
            "base": base,
            "w": json::matrix(w),
            "beta": beta.iter().map(json::rat).collect::<Vec<_>>(),
        }),
        ReducedSystem::NearCircuit { data, g, genericity } => json!({
            "form": "near-circuit",
            "data": json::near_circuit(data),
            "g": g.iter().map(json::poly).collect::<Vec<_>>(),
            "genericity": json::genericity(genericity),
        }),
    }
}

fn eliminant_json(b: &EliminantBundle) -> Result<Value> {
    Ok(json!({
        "F": json::poly(&b.big_f),
        "G": json::poly(&b.big_g),
        "f": json::poly(&b.f),
        "degree": b.f.degree(),
        "volume": json::int(&normalized_volume(&b.data.support)?),
        "degree_matches_volume": b.degree_matches_volume()?,
    }))
}

pub fn cmd_eliminate(input: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let s = system_or_random(input, cfg, "eliminate on a bare support")?;
    let r = gaussian_reduce(&s)?;
    let mut m = Map::new();
    m.insert("system".into(), json::system(&s));
    m.insert("reduced".into(), reduced_json(&r));
    let mut pass = true;
    if let ReducedSystem::NearCircuit { data, g, .. } = &r {
        let b = build_eliminant(data, g)?;
        pass = b.degree_matches_volume()?;
        m.insert("eliminant".into(), eliminant_json(&b)?);
    }
    Ok(Outcome::checked(Value::Object(m), pass))
}

/// Exact number of real solutions in the torus of a generic system.
/// For near circuits every real root of the eliminant lifts to exactly one
/// real solution when the index is odd.
pub fn solution_count(s: &SystemSpec) -> Result<BigInt> {
    match gaussian_reduce(s)? {
        ReducedSystem::Simplex { w, beta, .. } => simplex_real_count(&w, &beta),
        ReducedSystem::NearCircuit { data, g, .. } => {
            if data.index.is_even() {
                return Err(Error::IndexNotOdd(data.index.to_string()));
            }
            let b = build_eliminant(&data, &g)?;
            Ok(count_real_roots(&b.f)?.into())
        }
    }
}

fn count_report(s: &SystemSpec, cfg: &RunConfig) -> Result<(Value, bool)> {
    let r = gaussian_reduce(s)?;
    let cong = congruence_constraints(&s.support)?;
    let mut m = Map::new();
    m.insert("reduced".into(), reduced_json(&r));
    let (count, verified) = match &r {
        ReducedSystem::Simplex { w, beta, .. } => (simplex_real_count(w, beta)?, true),
        ReducedSystem::NearCircuit { data, g, .. } => {
            if data.index.is_even() {
                return Err(Error::IndexNotOdd(data.index.to_string()));
            }
            let b = build_eliminant(data, g)?;
            let (pos, neg) = signed_root_counts(&b.f)?;
            let roots: Vec<_> = isolate(&b.f, &BigRational::one())?
                .roots
                .into_iter()
                .filter(|r| !matches!(&r.location, RootLocation::Exact(x) if x.is_zero()))
                .collect();
            let mut sols = vec![];
            let mut verified = true;
            for r in &roots {
                let bs = back_substitute(&b, s, &r.location, cfg.precision_cap)?;
                verified &= bs.verified;
                sols.push(json::back_substitution(&bs));
            }
            m.insert("eliminant".into(), eliminant_json(&b)?);
            m.insert("eliminant_roots".into(), json!({ "positive": pos, "negative": neg, "total": pos + neg }));
            m.insert("solutions".into(), Value::Array(sols));
            (BigInt::from(roots.len()), verified)
        }
    };
    let admits = cong.admits(&count);
    m.insert("count".into(), json::int(&count));
    m.insert("congruence".into(), json::congruence(&cong));
    m.insert("congruence_pass".into(), json!(admits));
    m.insert("verified".into(), json!(verified));
    Ok((Value::Object(m), admits && verified))
}

pub fn cmd_count(input: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let s = system_or_random(input, cfg, "count on a bare support")?;
    let (mut v, pass) = count_report(&s, cfg)?;
    v["system"] = json::system(&s);
    Ok(Outcome::checked(v, pass))
}

pub fn cmd_witness(input: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let a = json::parse_support(input)?;
    let data = near_circuit_of(&a)?;
    let w = match cfg.target {
        Some(t) => witness_with_count(&data, t)?,
        None => best_witness(&data)?,
    };
    let report = bound_report(&a)?;
    let bound = report.upper.map(|u| u.min());
    let c = &w.certificate;
    let within = bound.is_none_or(|b| c.certified <= b);
    let hits = cfg.target.is_none_or(|t| c.certified == t);
    let mut pass = within && hits && c.simple;
    let mut m = Map::new();
    m.insert("witness".into(), json::witness(&w));
    m.insert("count".into(), json!(c.certified));
    m.insert("bound".into(), json!(bound));
    if cfg.check {
        let ok = c.check()?;
        pass &= ok;
        m.insert("check".into(), json!(ok));
    }
    Ok(Outcome::checked(Value::Object(m), pass))
}

fn polynomial_input(v: &Value) -> Result<SparsePolynomial> {
    if v.get("terms").is_some() {
        return json::parse_poly(v);
    }
    if let Some(p) = v.get("polynomial") {
        return json::parse_poly(p);
    }
    let w = v.get("witness").unwrap_or(v);
    match w.get("certificate").and_then(|c| c.get("polynomial")) {
        Some(p) => json::parse_poly(p),
        None => Err(Error::Input("expected a polynomial, a certificate or a witness".into())),
    }
}

pub fn cmd_ladder(input: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let f = polynomial_input(input)?;
    let base = sturm_count(&f, &Bound::NegInf, &Bound::PosInf, false)?;
    let rungs = root_ladder(&f)?;
    let mut pass = true;
    let mut out = vec![];
    for r in &rungs {
        let mut v = json::rung(r);
        if cfg.check {
            let recount = sturm_count(&r.polynomial, &Bound::NegInf, &Bound::PosInf, false)?;
            pass &= recount == r.count;
            v["check"] = json!(recount == r.count);
        }
        out.push(v);
    }
    Ok(Outcome::checked(json!({ "polynomial": json::poly(&f), "count": base, "rungs": out }), pass))
}

/// Re-count the roots of a serialized certificate polynomial.
pub fn cmd_check(input: &Value) -> Result<Outcome> {
    let v = input.get("witness").unwrap_or(input);
    let c = json::parse_certificate(v)?;
    let recount = sturm_count(&c.polynomial, &Bound::NegInf, &Bound::PosInf, true)? as u64;
    let simple = nonzero_roots_simple(&c.polynomial);
    let ledger_sum: u64 = c.ledger.iter().map(|x| x.contribution as u64).sum();
    let ledger_ok = c.ledger.is_empty() || ledger_sum == c.predicted;
    let pass = recount == c.certified && simple == c.simple && ledger_ok;
    let value = json!({
        "claimed": c.certified,
        "recount": recount,
        "simple": simple,
        "predicted": c.predicted,
        "ledger_consistent": ledger_ok,
        "pass": pass,
    });
    Ok(Outcome::checked(value, pass))
}

/// Per-trial seeds drawn from one stream so trial `i` is fixed by `(seed, i)`.
fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen()).collect()
}

pub fn cmd_verify(input: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.seed("verify")?;
    let a = json::parse_support(input)?;
    let report = bound_report(&a)?;
    let cong = &report.congruence;
    let mut bound = report.kouchnirenko.clone();
    if let Some(s) = &report.simplex_counts {
        bound = bound.min(s.iter().max().cloned().unwrap_or_default());
    }
    if let Some(u) = &report.upper {
        bound = bound.min(u.min().into());
    }
    if let Some(x) = report.absolute {
        bound = bound.min(x.into());
    }
    let counts: Vec<BigInt> = trial_seeds(seed, cfg.trials)
        .into_par_iter()
        .map(|s| random_generic_system(&a, s).and_then(|sys| solution_count(&sys)))
        .collect::<Result<_>>()?;
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for c in &counts {
        *histogram.entry(c.to_string()).or_default() += 1;
    }
    let max = counts.iter().max().cloned();
    let bound_pass = counts.iter().all(|c| c <= &bound);
    let congruence_pass = counts.iter().all(|c| cong.admits(c));
    let mut pass = bound_pass && congruence_pass;
    let mut m = Map::new();
    m.insert("class".into(), json!(report.class.name()));
    m.insert("seed".into(), json!(seed));
    m.insert("trials".into(), json!(cfg.trials));
    m.insert("max_observed".into(), max.as_ref().map_or(Value::Null, json::int));
    m.insert("bound".into(), json::int(&bound));
    m.insert("bound_pass".into(), json!(bound_pass));
    m.insert("congruence".into(), json::congruence(cong));
    m.insert("congruence_pass".into(), json!(congruence_pass));
    m.insert("histogram".into(), json!(histogram));
    if let Some(set) = &report.simplex_counts {
        let ok = counts.iter().all(|c| set.contains(c));
        pass &= ok;
        m.insert("simplex_counts".into(), Value::Array(set.iter().map(json::int).collect()));
        m.insert("simplex_pass".into(), json!(ok));
    }
    if is_system(input) {
        let s = json::parse_system(input)?;
        let (v, ok) = count_report(&s, cfg)?;
        pass &= ok;
        m.insert("system".into(), v);
    }
    m.insert("pass".into(), json!(pass));
    Ok(Outcome::checked(Value::Object(m), pass))
}

/// `path: value` lines, one per leaf.
pub fn pretty(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix}: {s}")),
            _ => out.push(format!("{prefix}: {v}")),
        }
    }
    let mut out = vec![];
    walk("", v, &mut out);
    let mut s = out.join("\n");
    s.push('\n');
    s
}
