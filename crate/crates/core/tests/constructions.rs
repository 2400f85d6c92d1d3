mod common;

use lemkit::constructions::{
    cc_counterexample, circle_pair, flower_pair, m_formula, no_affine_equivalence, verify_counterexample_with,
    CC_COEFFICIENTS,
};
use lemkit::factorcount::composition_reducibility_witness;
use lemkit::solvekit::{lemniscate_intersections, on_lemniscate, SolveOptions, Status};
use lemkit::{ExactComplex, Poly, RatFunc};
use num_complex::Complex64;

/// The polynomial as typeset, parsed independently of the stored table.
const S_TEXT: &str = "1/11*z^11 - (a+1)*z^9 + 2*z^8 + (3*a-9)*z^7 - 16*(a+1)*z^6 + (21*a+36)*z^5 \
                      + (30*a-90)*z^4 - 63*a*z^3 + (100*a+120)*z^2 + (24*a-117)*z - 18*(a+1)";

#[test]
fn m_formula_bounds() {
    for n2 in 1..=50 {
        for n1 in 1..=n2 {
            let m = m_formula(n1, n2).unwrap();
            assert!(m <= 2 * n1 * n2);
            assert_eq!(m == 2 * n1 * n2, n1 == 1, "({n1}, {n2})");
        }
    }
    assert_eq!(m_formula(1, 7).unwrap(), 14);
    assert_eq!(m_formula(2, 3).unwrap(), 10);
    assert_eq!(m_formula(2, 2).unwrap(), 6);
    assert!(m_formula(3, 2).is_err());
}

#[test]
fn counterexample_polynomial() {
    let (s, p) = cc_counterexample();
    let parsed: RatFunc = S_TEXT.parse().unwrap();
    assert_eq!(parsed.as_poly().unwrap(), &s);
    assert_eq!(s.deg(), 11);
    assert_eq!(s.lc(), "1/11".parse().unwrap());
    assert_eq!(s.coeff(1), "24*a-117".parse().unwrap());
    assert_eq!(s.coeff(10), ExactComplex::zero());
    // serializer and parser round trip
    let again: RatFunc = s.to_expr("z").parse().unwrap();
    assert_eq!(again.as_poly().unwrap(), &s);
    for (k, c) in CC_COEFFICIENTS.iter().enumerate() {
        assert_eq!(s.coeff(k).to_string(), *c);
    }
    assert_eq!(p, RatFunc::cayley().compose(&RatFunc::from_poly(s)).unwrap());
    assert_eq!(p.degree(), 11);
}

#[test]
fn affine_equivalence() {
    let (s, _) = cc_counterexample();
    let r = no_affine_equivalence(&s).unwrap();
    assert!(r.no_equivalence);
    assert!(r.transcript.len() > 3);
    assert!(!no_affine_equivalence(&Poly::from_ints(&[1, 4, -2, 0, 3])).unwrap().no_equivalence);
    assert!(!no_affine_equivalence(&Poly::monomial(1.into(), 2)).unwrap().no_equivalence);
    // S(z) = R(z + i) with R real: conj(S)(z) = S(z - 2i)
    let shifted = Poly::from_ints(&[5, 0, 1, 1]).compose(&Poly::new(vec![ExactComplex::i(), 1.into()]));
    assert!(!no_affine_equivalence(&shifted).unwrap().no_equivalence);
    // conj(S)(z) = z^4 - i z^2 + 1 = S(iz)
    let rotated = Poly::new(vec![1.into(), 0.into(), ExactComplex::i(), 0.into(), 1.into()]);
    assert!(!no_affine_equivalence(&rotated).unwrap().no_equivalence);
    // z^3 + i z would need c^3 = 1 and c = -1
    let clash = Poly::new(vec![0.into(), ExactComplex::i(), 0.into(), 1.into()]);
    assert!(no_affine_equivalence(&clash).unwrap().no_equivalence);
    assert!(no_affine_equivalence(&Poly::z()).is_err());
}

#[test]
fn counterexample_controls() {
    let opts = SolveOptions::default();
    let real = Poly::from_ints(&[1, -3, 0, 2, 0, 1]);
    let r = verify_counterexample_with(&real, &opts).unwrap();
    assert!(!r.is_counterexample);
    assert_eq!(r.conclusion, "not a counterexample");
    assert!(composition_reducibility_witness(&RatFunc::from_poly(Poly::monomial(1.into(), 2)), &RatFunc::z()).is_ok());
}

#[test]
fn flower_pairs_reach_target() {
    let opts = SolveOptions::default();
    for (n1, n2) in [(1, 1), (1, 3), (2, 2)] {
        let r = flower_pair(n1, n2, 0, &opts).unwrap();
        assert_eq!(r.verified_count, Some(m_formula(n1, n2).unwrap()));
        assert_eq!((r.p1.degree(), r.p2.degree()), (n1, n2));
        // re-verification from the serialized form
        let v = serde_json::to_value(&r).unwrap();
        let p1: RatFunc = v["p1"].as_str().unwrap().parse().unwrap();
        let p2: RatFunc = v["p2"].as_str().unwrap().parse().unwrap();
        let again = lemniscate_intersections(&p1, &p2, &opts).unwrap();
        assert_eq!(again.count, r.expected_count);
        assert_eq!(v["seed"], 0);
    }
}

/// Preimage of `u` under `delta(z) = (alpha z + beta)/(-conj(beta) z + conj(alpha))`.
fn delta_inverse(alpha: Complex64, beta: Complex64, u: Complex64) -> Complex64 {
    (alpha.conj() * u - beta) / (beta.conj() * u + alpha)
}

#[test]
fn circle_pairs_lie_on_great_circles() {
    let opts = SolveOptions::default();
    for (n1, n2) in [(1, 1), (1, 2), (2, 2)] {
        let r = circle_pair(n1, n2, 3, &opts).unwrap();
        assert_eq!(r.verified_count, Some(2 * n1 * n2));
        let v = serde_json::to_value(&r).unwrap();
        let alpha: ExactComplex = v["parameters"]["alpha"].as_str().unwrap().parse().unwrap();
        let beta: ExactComplex = v["parameters"]["beta"].as_str().unwrap().parse().unwrap();
        let (alpha, beta) = (common::c64(&alpha), common::c64(&beta));
        let tol = 1e-9;
        for k in 0..100 {
            let t = -5.0 + 10.0 * k as f64 / 99.0 + 1e-3;
            // |T(z^n)| = 1 exactly when z^n is real
            for m in 0..n1 {
                let z = Complex64::from_polar(t, std::f64::consts::PI * m as f64 / n1 as f64);
                assert!(on_lemniscate(&r.p1, &common::to_rug(z), tol).unwrap());
            }
            for m in 0..n2 {
                let u = Complex64::from_polar(t.abs().powf(1.0 / n2 as f64) * t.signum(), std::f64::consts::PI * m as f64 / n2 as f64);
                let z = delta_inverse(alpha, beta, u);
                assert!(on_lemniscate(&r.p2, &common::to_rug(z), tol).unwrap());
            }
        }
        let again = r.reverify(&opts).unwrap();
        assert_eq!((again.status, again.count), (Status::Finite, 2 * n1 * n2));
    }
}
