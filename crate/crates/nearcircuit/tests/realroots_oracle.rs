//! Sturm counts against a floating-point companion-matrix oracle.

use nalgebra::DMatrix;
use nearcircuit::realroots::{
    count_real_roots, descartes_gap_bound, sign_variation_bound, signed_root_counts, sturm_count, Bound,
    SparsePolynomial,
};
use num_rational::BigRational;
use proptest::prelude::*;

/// Real eigenvalues of the companion matrix, or `None` when some eigenvalue
/// is too close to the real axis to classify in double precision.
fn companion_real_roots(c: &[i64]) -> Option<usize> {
    let d = c.len() - 1;
    let lc = c[d] as f64;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(c[i] as f64) / lc;
    }
    let mut real = 0;
    for z in m.complex_eigenvalues().iter() {
        let rel = z.im.abs() / z.norm().max(1.0);
        if rel < 1e-9 {
            real += 1;
        } else if rel < 1e-4 {
            return None;
        }
    }
    Some(real)
}

/// Real roots closer together than this are beyond what the oracle resolves.
fn well_separated(c: &[i64]) -> bool {
    let d = c.len() - 1;
    let lc = c[d] as f64;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(c[i] as f64) / lc;
    }
    let mut re: Vec<f64> = m.complex_eigenvalues().iter().filter(|z| z.im.abs() < 1e-4).map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    re.windows(2).all(|w| w[1] - w[0] > 1e-4)
}

fn poly_strategy() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=20).prop_flat_map(|d| {
        (proptest::collection::vec(-100i64..=100, d - 1), (1i64..=100), any::<bool>(), (1i64..=100), any::<bool>())
            .prop_map(|(mut mid, c0, s0, lc, s1)| {
                let mut c = vec![if s0 { c0 } else { -c0 }];
                c.append(&mut mid);
                c.push(if s1 { lc } else { -lc });
                c
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sturm_matches_companion_eigenvalues(c in poly_strategy()) {
        let oracle = companion_real_roots(&c);
        prop_assume!(oracle.is_some() && well_separated(&c));
        let f = SparsePolynomial::from_coeffs(&c);
        prop_assert_eq!(count_real_roots(&f).unwrap(), oracle.unwrap());
    }

    #[test]
    fn bisection_counts_match_sturm(a in poly_strategy(), b in poly_strategy(), shift in 0usize..3) {
        // a * b^2 * x^shift exercises repeated roots and the zero root
        let bf = SparsePolynomial::from_coeffs(&b);
        let f = SparsePolynomial::from_coeffs(&a).mul(&bf).mul(&bf).shift(shift);
        let zero = Bound::Finite(BigRational::from_integer(0.into()));
        let pos = sturm_count(&f, &zero, &Bound::PosInf, false).unwrap();
        let neg = sturm_count(&f, &Bound::NegInf, &zero, false).unwrap();
        prop_assert_eq!(signed_root_counts(&f).unwrap(), (pos, neg));
    }

    #[test]
    fn sturm_below_descartes_below_gap(c in poly_strategy()) {
        let f = SparsePolynomial::from_coeffs(&c);
        let sturm = count_real_roots(&f).unwrap();
        let signs = sign_variation_bound(&f).unwrap().total();
        let gap = descartes_gap_bound(&f.exponents()).map(|g| g as usize).unwrap_or(0);
        prop_assert!(sturm <= signs);
        prop_assert!(signs <= gap || f.exponents().len() < 2);
    }
}

#[test]
fn oracle_rejection_rate_is_small() {
    // The filter above must not silently discard most cases.
    let mut rejected = 0;
    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 201) as i64 - 100
    };
    for d in 1..=20usize {
        for _ in 0..25 {
            let mut c: Vec<i64> = (0..=d).map(|_| next()).collect();
            if c[0] == 0 {
                c[0] = 1;
            }
            if c[d] == 0 {
                c[d] = 1;
            }
            if companion_real_roots(&c).is_none() || !well_separated(&c) {
                rejected += 1;
            }
        }
    }
    assert!(rejected < 25, "rejected {rejected} of 500");
}
