//! JSON encodings. Rationals are `"num/den"` strings, integers that may
//! overflow are decimal strings, polynomials are `{"terms": [[e, "num/den"], …]}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::bounds::BoundReport;
use crate::eliminant::BackSubstitution;
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, InvariantFactors, SupportSet};
use crate::numeric::Interval;
use crate::realroots::{RootLocation, SparsePolynomial};
use crate::supports::{CircuitData, NearCircuitData};
use crate::systems::{Congruence, Genericity, SystemSpec};
use crate::viro::{LadderRung, RootContribution, Witness, WitnessCertificate};

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub fn rat(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn parse_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            n.as_i64().map(|x| BigRational::from_integer(x.into())).ok_or_else(|| bad(format!("not an integer: {n}")))
        }
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?;
            if den.is_zero() {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("bad integer {s:?}"))),
        _ => Err(bad(format!("expected an integer, got {v}"))),
    }
}

fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn poly(p: &SparsePolynomial) -> Value {
    json!({ "terms": p.terms().iter().map(|(e, c)| json!([e, rat(c)])).collect::<Vec<_>>() })
}

pub fn parse_poly(v: &Value) -> Result<SparsePolynomial> {
    let terms = array(field(v, "terms")?, "terms")?;
    let mut out = vec![];
    for t in terms {
        let pair = array(t, "term")?;
        if pair.len() != 2 {
            return Err(bad("each term is [exponent, coefficient]"));
        }
        let e = pair[0].as_u64().ok_or_else(|| bad("exponents must be nonnegative integers"))? as usize;
        out.push((e, parse_rat(&pair[1])?));
    }
    Ok(SparsePolynomial::new(out))
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn support(a: &SupportSet) -> Value {
    json!({ "dim": a.dim(), "points": a.points().iter().map(|p| ints(p)).collect::<Vec<_>>() })
}

/// `{"dim": n, "points": [[…], …]}`, or an object holding it under `"support"`.
pub fn parse_support(v: &Value) -> Result<SupportSet> {
    let v = v.get("support").unwrap_or(v);
    let points: Vec<Vec<BigInt>> = array(field(v, "points")?, "points")?
        .iter()
        .map(|p| array(p, "point")?.iter().map(parse_int).collect())
        .collect::<Result<_>>()?;
    let dim = match v.get("dim") {
        Some(d) => d.as_u64().ok_or_else(|| bad("dim must be a nonnegative integer"))? as usize,
        None => points.first().map_or(0, |p| p.len()),
    };
    SupportSet::new(dim, points)
}

pub fn system(s: &SystemSpec) -> Value {
    json!({
        "support": support(&s.support),
        "coefficients": s.coefficients.iter().map(|r| r.iter().map(rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn parse_system(v: &Value) -> Result<SystemSpec> {
    let a = parse_support(v)?;
    let rows: Vec<Vec<BigRational>> = array(field(v, "coefficients")?, "coefficients")?
        .iter()
        .map(|r| array(r, "coefficient row")?.iter().map(parse_rat).collect())
        .collect::<Result<_>>()?;
    SystemSpec::new(a, rows)
}

pub fn invariant_factors(f: &InvariantFactors) -> Value {
    json!({ "factors": ints(&f.factors), "index": int(&f.index), "e_count": f.e_count })
}

pub fn circuit(c: &CircuitData) -> Value {
    json!({
        "roles": c.roles,
        "vectors": c.vectors.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "alphas": ints(&c.alphas),
        "lambdas": ints(&c.lambdas),
        "index": int(&c.index),
        "p": c.p,
        "nu": c.nu,
        "simplex_volumes": ints(&c.simplex_volumes),
        "volume": int(&c.volume),
    })
}

pub fn near_circuit(d: &NearCircuitData) -> Value {
    json!({
        "n": d.n,
        "k": d.k,
        "ell": d.ell,
        "N": int(&d.big_n),
        "p": d.p,
        "nu": d.nu,
        "lambdas": ints(&d.lambdas),
        "coefficients": ints(&d.coefficients),
        "delta": int(&d.delta),
        "index": int(&d.index),
        "primitive": d.primitive,
        "apex": ints(&d.apex),
        "direction": ints(&d.direction),
        "normalizer": matrix(&d.normalizer),
        "w": d.w.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "l": ints(&d.l),
        "roles": {
            "apex": d.roles.apex,
            "progression": d.roles.progression,
            "w": d.roles.w,
        },
        "eliminant_degree": int(&d.eliminant_degree()),
    })
}

pub fn congruence(c: &Congruence) -> Value {
    json!({ "max_count": int(&c.max_count), "modulus": int(&c.modulus) })
}

pub fn genericity(g: &Genericity) -> Value {
    json!({
        "degrees_exact": g.degrees_exact,
        "nonzero_constants": g.nonzero_constants,
        "distinct_roots": g.distinct_roots,
        "coprime": g.coprime,
        "passed": g.passed(),
    })
}

pub fn bound_report(r: &BoundReport) -> Value {
    let mut m = Map::new();
    m.insert("class".into(), json!(r.class.name()));
    m.insert("kouchnirenko".into(), int(&r.kouchnirenko));
    m.insert("khovanskii".into(), int(&r.khovanskii));
    m.insert("congruence".into(), congruence(&r.congruence));
    m.insert("recoordinatized".into(), json!(r.recoordinatized));
    if let Some(s) = &r.simplex_counts {
        m.insert("simplex_counts".into(), ints(s));
    }
    if let Some(g) = r.descartes_gap {
        m.insert("descartes_gap".into(), json!(g));
    }
    if let Some(u) = &r.upper {
        m.insert("upper".into(), json!({ "B1": u.b1, "B2": u.b2, "B3": u.b3, "min": u.min() }));
    }
    if let Some(a) = r.absolute {
        m.insert("absolute".into(), json!(a));
    }
    if let Some(s) = &r.sharp {
        m.insert("sharp".into(), json!({ "value": s.value, "rule": s.rule }));
    }
    if let Some(s) = &r.mirrored {
        m.insert("mirrored".into(), json!({ "rule": s.rule, "with_n": s.with_n, "with_nu": s.with_nu }));
    }
    if let Some((lo, hi)) = r.interval {
        m.insert("interval".into(), json!([lo, hi]));
    }
    Value::Object(m)
}

pub fn location(l: &RootLocation) -> Value {
    match l {
        RootLocation::Exact(x) => json!({ "exact": rat(x) }),
        RootLocation::Interval(a, b) => json!({ "lo": rat(a), "hi": rat(b) }),
    }
}

pub fn parse_location(v: &Value) -> Result<RootLocation> {
    if let Some(x) = v.get("exact") {
        return Ok(RootLocation::Exact(parse_rat(x)?));
    }
    Ok(RootLocation::Interval(parse_rat(field(v, "lo")?)?, parse_rat(field(v, "hi")?)?))
}

pub fn interval(i: &Interval) -> Value {
    json!({ "lo": rat(i.lo()), "hi": rat(i.hi()) })
}

fn contribution(c: &RootContribution) -> Value {
    json!({ "edge": c.edge, "root": location(&c.root), "multiplicity": c.multiplicity, "contribution": c.contribution })
}

pub fn certificate(c: &WitnessCertificate) -> Value {
    json!({
        "j": c.j,
        "t_star": rat(&c.t_star),
        "polynomial": poly(&c.polynomial),
        "predicted": c.predicted,
        "certified": c.certified,
        "simple": c.simple,
        "ledger": c.ledger.iter().map(contribution).collect::<Vec<_>>(),
    })
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| bad(format!("{key} must be a nonnegative integer")))
}

/// Accepts a bare certificate or an object holding one under `"certificate"`.
pub fn parse_certificate(v: &Value) -> Result<WitnessCertificate> {
    let v = v.get("certificate").unwrap_or(v);
    let ledger = match v.get("ledger") {
        Some(l) => array(l, "ledger")?
            .iter()
            .map(|c| {
                Ok(RootContribution {
                    edge: get_u64(c, "edge")? as usize,
                    root: parse_location(field(c, "root")?)?,
                    multiplicity: get_u64(c, "multiplicity")? as usize,
                    contribution: get_u64(c, "contribution")? as u8,
                })
            })
            .collect::<Result<_>>()?,
        None => vec![],
    };
    Ok(WitnessCertificate {
        j: get_u64(v, "j")? as u32,
        t_star: parse_rat(field(v, "t_star")?)?,
        polynomial: parse_poly(field(v, "polynomial")?)?,
        predicted: get_u64(v, "predicted")?,
        certified: get_u64(v, "certified")?,
        simple: field(v, "simple")?.as_bool().ok_or_else(|| bad("simple must be a boolean"))?,
        ledger,
    })
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "construction": if w.degrees.is_some() { "patchwork" } else { "single-edge" },
        "degrees": w.degrees,
        "epsilon": w.epsilon.as_ref().map(rat),
        "ladder_shift": w.ladder_shift.as_ref().map(rat),
        "g": w.g.iter().map(poly).collect::<Vec<_>>(),
        "system": system(&w.system),
        "certificate": certificate(&w.certificate),
    })
}

pub fn rung(r: &LadderRung) -> Value {
    json!({ "shift": rat(&r.shift), "polynomial": poly(&r.polynomial), "count": r.count })
}

/// Short decimal rendering for display next to exact values.
pub fn approx(x: &BigRational) -> String {
    format!("{:.12e}", x.to_f64().unwrap_or(f64::NAN))
}

pub fn back_substitution(b: &BackSubstitution) -> Value {
    json!({
        "root": location(&b.root),
        "solution": b.solution.iter().map(interval).collect::<Vec<_>>(),
        "approximate": b.approximate.iter().map(approx).collect::<Vec<_>>(),
        "max_residual": approx(&b.max_residual()),
        "precision_bits": b.precision_bits,
        "verified": b.verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        let x = BigRational::new((-7).into(), 3.into());
        assert_eq!(rat(&x), json!("-7/3"));
        assert_eq!(parse_rat(&rat(&x)).unwrap(), x);
        assert_eq!(parse_rat(&json!("4")).unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(parse_rat(&json!(5)).unwrap(), BigRational::from_integer(5.into()));
        assert!(parse_rat(&json!("1/0")).is_err());
        assert!(parse_rat(&json!("x")).is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let p = SparsePolynomial::from_coeffs(&[3, 0, -1, 0, 0, 2]);
        let v = poly(&p);
        assert_eq!(v, json!({"terms": [[0, "3/1"], [2, "-1/1"], [5, "2/1"]]}));
        assert_eq!(parse_poly(&v).unwrap(), p);
    }

    #[test]
    fn support_and_system() {
        let v = json!({"dim": 2, "points": [[0, 0], [1, 0], [0, 1]]});
        let a = parse_support(&v).unwrap();
        assert_eq!(support(&a), v);
        let s = json!({"support": v, "coefficients": [["1/1", "2", "0/1"], [0, "1/2", 3]]});
        let sys = parse_system(&s).unwrap();
        assert_eq!(parse_system(&system(&sys)).unwrap(), sys);
    }
}
