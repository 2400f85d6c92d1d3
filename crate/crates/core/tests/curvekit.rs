mod common;

use common::{c64, eval64, eval_bivar64};
use lemkit::curvekit::{bivariate_gcd, hermitian_numerator, lemniscate_poly, separated_numerator, BivarPoly};
use lemkit::{ExactComplex, RatFunc};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    s.parse().unwrap()
}

/// `sum c_jk (x + iy)^j (x - iy)^k` expanded with plain bivariate products.
fn substitute_by_expansion(e: &BivarPoly) -> BivarPoly {
    let i = ExactComplex::i();
    let zx = &BivarPoly::z() + &BivarPoly::w().scale(&i);
    let wx = &BivarPoly::z() - &BivarPoly::w().scale(&i);
    let mut out = BivarPoly::zero();
    for (j, row) in e.matrix().iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = BivarPoly::constant(c.clone());
            for _ in 0..j {
                t = &t * &zx;
            }
            for _ in 0..k {
                t = &t * &wx;
            }
            out = &out + &t;
        }
    }
    out
}

#[test]
fn separated_examples() {
    assert_eq!(separated_numerator(&rf("z^2"), &rf("z")).unwrap().to_expr("x", "y"), "x^2-y");
    assert_eq!(separated_numerator(&rf("z^2"), &rf("1/z^2")).unwrap().to_expr("x", "y"), "x^2*y^2-1");
    assert_eq!(separated_numerator(&rf("z"), &rf("z")).unwrap().to_expr("x", "y"), "x-y");
}

#[test]
fn hermitian_examples() {
    assert_eq!(hermitian_numerator(&rf("z")).unwrap().to_string(), "z*w-1");
    assert_eq!(hermitian_numerator(&rf("z^2")).unwrap().to_string(), "z^2*w^2-1");
    // (z - i)(w + i) - (z + i)(w - i) = 2i (z - w)
    let t = hermitian_numerator(&RatFunc::cayley()).unwrap();
    let zw = &BivarPoly::z() - &BivarPoly::w();
    let ratio = t.coeff(1, 0);
    assert_eq!(t, zw.scale(&ratio));
    assert_eq!(&ratio * &ratio.conj(), ExactComplex::one());
}

#[test]
fn lemniscate_examples() {
    assert_eq!(lemniscate_poly(&rf("z")).unwrap().to_expr("x", "y"), "x^2+y^2-1");
    assert_eq!(lemniscate_poly(&rf("z^2")).unwrap().to_expr("x", "y"), "x^4+2*x^2*y^2+y^4-1");
    let l = lemniscate_poly(&RatFunc::cayley()).unwrap();
    assert_eq!(l.bidegree(), (0, 1));
    assert!(l.coeff(0, 1).is_rational());
}

#[test]
fn gcd_examples() {
    let e = |s: &str| -> BivarPoly { separated_numerator(&rf(s), &rf("1/z")).unwrap() };
    let zw1 = e("z");
    let zw4 = separated_numerator(&rf("z"), &rf("4/z")).unwrap();
    let zmw = separated_numerator(&rf("z"), &rf("z")).unwrap();
    assert_eq!(bivariate_gcd(&zw1, &(&zw1 * &zmw)), zw1.normalized());
    assert!(bivariate_gcd(&zw1, &zw4).is_constant());

    let w = rf("z+1");
    let p = rf("z^2").compose(&w).unwrap();
    let ew = hermitian_numerator(&w).unwrap();
    let ep = hermitian_numerator(&p).unwrap();
    assert_eq!(bivariate_gcd(&ep, &ew), ew.normalized());
    assert!(ew.divides(&ep));
}

#[test]
fn bivar_json_round_trip() {
    let e = hermitian_numerator(&rf("(z-a)/(z+2*i)")).unwrap();
    let s = serde_json::to_string(&e).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["bidegree"], serde_json::json!([1, 1]));
    let back: BivarPoly = serde_json::from_str(&s).unwrap();
    assert_eq!(back, e);
    assert!(serde_json::from_str::<BivarPoly>(r#"{"bidegree":[1,1],"coeff":[["1"]]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermitian_numerator_structure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::ratfunc(&mut rng, 6);
        let n = p.degree();
        let e = hermitian_numerator(&p).unwrap();
        prop_assert_eq!(e.bidegree(), (n, n));
        for j in 0..=n {
            for k in 0..=n {
                prop_assert_eq!(e.coeff(j, k), e.coeff(k, j).conj());
            }
        }
        let l = lemniscate_poly(&p).unwrap();
        for row in l.matrix() {
            for c in row {
                prop_assert!(c.is_rational(), "coefficient {} is not real", c);
            }
        }
        prop_assert!(l.total_degree() <= 2 * n);
        prop_assert_eq!(l, substitute_by_expansion(&e));
    }

    #[test]
    fn lemniscate_sign_matches_modulus(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::ratfunc(&mut rng, 4);
        let e = hermitian_numerator(&p).unwrap();
        let l = lemniscate_poly(&p).unwrap();
        // positive factor relating 𝓔_P to N(z)conj(N)(w) - D(z)conj(D)(w)
        let (num, den) = (p.num(), p.den());
        let lead = {
            let raw = &(&BivarPoly::from_z_poly(num) * &BivarPoly::from_w_poly(&num.conj()))
                - &(&BivarPoly::from_z_poly(den) * &BivarPoly::from_w_poly(&den.conj()));
            let (j, k) = (0..=p.degree())
                .flat_map(|j| (0..=p.degree()).map(move |k| (j, k)))
                .find(|&(j, k)| !e.coeff(j, k).is_zero())
                .unwrap();
            c64(&raw.coeff(j, k)) / c64(&e.coeff(j, k))
        };
        prop_assert!(lead.im.abs() < 1e-9 * lead.norm() && lead.re > 0.0, "{:?}", lead);
        for _ in 0..50 {
            let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let z = Complex64::new(x, y);
            let (nv, dv) = (eval64(num, z), eval64(den, z));
            if dv.norm() < 1e-6 {
                continue;
            }
            let m = nv.norm() / dv.norm();
            if (m - 1.0).abs() < 1e-6 {
                continue;
            }
            let lv = eval_bivar64(&l, Complex64::new(x, 0.0), Complex64::new(y, 0.0));
            prop_assert!(lv.im.abs() <= 1e-9 * lv.norm().max(1.0));
            prop_assert_eq!(lv.re > 0.0, m > 1.0, "x={} y={} L={} |P|={}", x, y, lv.re, m);
            let ev = eval_bivar64(&e, z, z.conj());
            prop_assert!((ev - lv).norm() <= 1e-8 * ev.norm().max(1.0));
        }
    }

    #[test]
    fn gcd_extracts_common_factor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = |rng: &mut ChaCha8Rng| loop {
            let m: Vec<Vec<ExactComplex>> = (0..rng.gen_range(1..=3))
                .map(|_| (0..rng.gen_range(1..=3)).map(|_| common::gauss(rng, 3)).collect())
                .collect();
            let b = BivarPoly::from_matrix(m);
            if !b.is_constant() {
                break b;
            }
        };
        let f = small(&mut rng);
        let g = small(&mut rng);
        let h = small(&mut rng);
        let lhs = bivariate_gcd(&(&f * &h), &(&g * &h));
        let rhs = (&h * &bivariate_gcd(&f, &g)).normalized();
        prop_assert_eq!(lhs, rhs);
    }
}
