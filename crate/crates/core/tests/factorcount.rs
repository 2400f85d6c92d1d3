mod common;

use lemkit::curvekit::{hermitian_numerator, separated_numerator, BivarPoly};
use lemkit::factorcount::{
    absolute_factor_count, certify_irreducible_tp, composition_reducibility_witness, monodromy, Method,
};
use lemkit::ratfunc::proper_power_decomposition;
use lemkit::solvekit::roots::squarefree_roots;
use lemkit::solvekit::SolveOptions;
use lemkit::{ExactComplex, Poly, RatFunc};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    s.parse().unwrap()
}

fn count(f: &BivarPoly) -> usize {
    absolute_factor_count(f, &SolveOptions::default()).unwrap().count
}

#[test]
fn count_examples() {
    assert_eq!(count(&hermitian_numerator(&rf("z")).unwrap()), 1);
    let c = absolute_factor_count(&hermitian_numerator(&rf("z^2")).unwrap(), &SolveOptions::default()).unwrap();
    assert_eq!(c.count, 2);
    assert_eq!(c.method, Method::Monodromy);
    assert_eq!(c.orbit_sizes, vec![1, 1]);
    assert_eq!(count(&separated_numerator(&rf("z^2"), &rf("1/z")).unwrap()), 1);
    assert_eq!(count(&separated_numerator(&rf("z^2"), &rf("1/z^2")).unwrap()), 2);
    assert_eq!(count(&separated_numerator(&rf("z^3"), &rf("z^3")).unwrap()), 3);
}

#[test]
fn w_only_and_repeated_factors() {
    let zw1 = hermitian_numerator(&rf("z")).unwrap();
    let wp = BivarPoly::from_w_poly(&Poly::from_ints(&[-2, 0, 1]));
    let c = absolute_factor_count(&(&zw1 * &wp), &SolveOptions::default()).unwrap();
    assert_eq!((c.count, c.w_only_factors), (3, 2));
    let c = absolute_factor_count(&(&zw1 * &zw1), &SolveOptions::default()).unwrap();
    assert_eq!(c.count, 1);
    assert!(!c.squarefree);
    assert!(absolute_factor_count(&BivarPoly::one(), &SolveOptions::default()).is_err());
}

#[test]
fn tp_examples() {
    let c = certify_irreducible_tp(&rf("z^2"), &rf("1/z")).unwrap().unwrap();
    assert_eq!((c.count, c.method), (1, Method::TpCriterion));
    assert!(certify_irreducible_tp(&rf("z^2"), &rf("1/z^2")).unwrap().is_none());
    assert!(certify_irreducible_tp(&rf("z^3+z"), &rf("(z^2+1)/(z*(z-1)^2)")).unwrap().is_some());
    assert!(certify_irreducible_tp(&rf("1/z"), &rf("z")).is_err());
}

#[test]
fn witness_examples() {
    let w = composition_reducibility_witness(&rf("z^2"), &rf("z")).unwrap();
    assert_eq!(w.factor.to_string(), "z*w-1");
    assert_eq!(&w.factor * &w.cofactor, hermitian_numerator(&rf("z^2")).unwrap());
    assert!(w.certificate.count >= 2);
    let w = composition_reducibility_witness(&rf("z^2"), &rf("z+1")).unwrap();
    assert_eq!(w.factor, hermitian_numerator(&rf("z+1")).unwrap());
    assert_eq!(&w.factor * &w.cofactor, hermitian_numerator(&w.p).unwrap());
    assert!(composition_reducibility_witness(&RatFunc::cayley(), &rf("z")).is_err());
    assert!(composition_reducibility_witness(&rf("2*z^2"), &rf("z")).is_err());
}

#[test]
fn certificate_json_shape() {
    let c = absolute_factor_count(&hermitian_numerator(&rf("z^2+z")).unwrap(), &SolveOptions::default()).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["method"], "monodromy");
    let bp = v["branch_points"].as_array().unwrap();
    assert!(!bp.is_empty());
    let re = bp[0][0].as_str().unwrap();
    // 32 significant digits
    assert_eq!(re.trim_start_matches('-').split('e').next().unwrap().replace('.', "").len(), 32);
}

/// `W(z) conj(W)(w) - zeta` over the `d`-th roots of unity, for `W` real.
fn power_factors(w: &Poly, d: usize) -> Vec<BivarPoly> {
    let base = &BivarPoly::from_z_poly(w) * &BivarPoly::from_w_poly(&w.conj());
    let roots: Vec<ExactComplex> = match d {
        2 => vec![1.into(), (-1).into()],
        4 => vec![1.into(), (-1).into(), ExactComplex::i(), -ExactComplex::i()],
        _ => unreachable!(),
    };
    roots.into_iter().map(|z| &base - &BivarPoly::constant(z)).collect()
}

#[test]
fn proper_powers_split_into_d_factors() {
    for (w, d) in [("z^2+z+3", 2), ("z^2-2*z", 4)] {
        let w = rf(w).as_poly().unwrap().clone();
        let p = RatFunc::from_poly(w.pow(d as u32));
        let e = hermitian_numerator(&p).unwrap();
        assert_eq!(count(&e), d);
        for f in power_factors(&w, d) {
            assert!(f.divides(&e));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn count_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = separated_numerator(&common::ratfunc(&mut rng, 2), &common::ratfunc(&mut rng, 2)).unwrap();
        let g = separated_numerator(&common::ratfunc(&mut rng, 2), &common::ratfunc(&mut rng, 2)).unwrap();
        prop_assume!(lemkit::curvekit::bivariate_gcd(&f, &g).is_constant());
        let opts = SolveOptions::default();
        let (cf, cg) = (absolute_factor_count(&f, &opts).unwrap(), absolute_factor_count(&g, &opts).unwrap());
        prop_assume!(cf.squarefree && cg.squarefree);
        prop_assert_eq!(absolute_factor_count(&(&f * &g), &opts).unwrap().count, cf.count + cg.count);
    }

    #[test]
    fn generic_polynomial_lemniscates_are_irreducible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::nonconstant_poly(&mut rng, 4);
        let (_, d, _) = proper_power_decomposition(&p).unwrap();
        prop_assume!(d == 1);
        prop_assert_eq!(count(&hermitian_numerator(&RatFunc::from_poly(p)).unwrap()), 1);
    }

    #[test]
    fn tp_certificates_agree_with_monodromy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = RatFunc::from_poly(common::nonconstant_poly(&mut rng, 3));
        let q = common::ratfunc(&mut rng, 3);
        prop_assume!(certify_irreducible_tp(&p, &q).unwrap().is_some());
        prop_assert_eq!(count(&separated_numerator(&p, &q).unwrap()), 1);
    }

    #[test]
    fn monodromy_loops_compose_to_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::ratfunc(&mut rng, 3);
        prop_assume!(p.degree() >= 2);
        let f = hermitian_numerator(&p).unwrap();
        let f = f.primitive_part_z();
        prop_assume!(lemkit::curvekit::bivariate_gcd(&f, &f.derivative_z()).is_constant());
        let disc = &f.resultant_z(&f.derivative_z()) * &f.lc_z();
        let branch = squarefree_roots(&disc.squarefree_part(), 256).unwrap();
        let m = monodromy(&f, &disc, &branch, rng.gen(), 4096).unwrap();
        prop_assert!(m.is_consistent());
        prop_assert_eq!(m.base_fiber.len(), f.deg_z());
    }
}

