//! Explicit examples: sharpness pairs, flower pairs, and the degree-11
//! counterexample to the Composition Condition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::Serialize;

use crate::curvekit::hermitian_numerator;
use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;
use crate::factorcount::{absolute_factor_count, FactorCountCertificate};
use crate::ratfunc::{gcd, Poly, RatFunc};
use crate::solvekit::{lemniscate_intersections, IntersectionReport, SolveOptions, Status};

/// `M(n1, n2) = n1 n2 + n2 + d e` with `d = gcd(n1, n2)` and `e = 1` exactly
/// when `n1/d` is even.
pub fn m_formula(n1: usize, n2: usize) -> Result<usize> {
    if n1 == 0 || n1 > n2 {
        return Err(Error::InvalidInput(format!("need 1 <= n1 <= n2, got ({n1}, {n2})")));
    }
    let d = gcd(n1, n2);
    let e = usize::from((n1 / d).is_multiple_of(2));
    Ok(n1 * n2 + n2 + d * e)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionResult {
    pub kind: String,
    pub n1: usize,
    pub n2: usize,
    pub p1: RatFunc,
    pub p2: RatFunc,
    /// Exact parameters in field text.
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub attempts: usize,
    pub expected_count: usize,
    pub verified_count: Option<usize>,
    pub verification: Option<IntersectionReport>,
}

impl ConstructionResult {
    /// Recounts the intersection from the stored functions.
    pub fn reverify(&self, opts: &SolveOptions) -> Result<IntersectionReport> {
        lemniscate_intersections(&self.p1, &self.p2, opts)
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `e^{i alpha}` as the exact unit `((1 - t^2) + 2 t i)/(1 + t^2)`.
fn unit_from_slope(t: &Rational) -> ExactComplex {
    let t2 = Rational::from(t.square_ref());
    let den = Rational::from(1) + &t2;
    let re = (Rational::from(1) - &t2) / &den;
    let im = Rational::from(t * 2u32) / den;
    ExactComplex::gaussian(re, im)
}

/// Flower pair: `P2 = (z/r2)^n2 - 1` and `P1 = (u (z - s)/r1)^n1 - 1` with
/// `|u| = 1`, searched over seeded `(u, s, r2/r1)` until the intersection
/// count reaches `M(n1, n2)`. The degree-`n2` flower is the large one.
pub fn flower_pair(n1: usize, n2: usize, seed: u64, opts: &SolveOptions) -> Result<ConstructionResult> {
    let target = m_formula(n1, n2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let budget = 200;
    for attempt in 0..budget {
        let ratio: i64 = if attempt % 2 == 0 { 10 } else { 100 };
        let t = q(rng.gen_range(-1000..=1000), 1000);
        let u = unit_from_slope(&t);
        let radius = rng.gen_range(1..=100);
        let phase = rng.gen_range(0..4);
        // |s| in [1e-3, 1e-1] r1 with r1 = 1
        let s = ExactComplex::gaussian(q(radius, 1000), q(rng.gen_range(-radius..=radius), 1000))
            * ExactComplex::i().pow(phase);
        let r2 = ExactComplex::from_int(ratio);
        let p2 = RatFunc::from_poly(
            &Poly::monomial(r2.inv()?.pow(n2 as u32), n2) - &Poly::one(),
        );
        let inner = Poly::new(vec![-(&u * &s), u.clone()]);
        let p1 = RatFunc::from_poly(&inner.pow(n1 as u32) - &Poly::one());
        let report = lemniscate_intersections(&p1, &p2, opts)?;
        if report.status == Status::Finite {
            best = best.max(report.count);
        }
        if report.status == Status::Finite && report.count == target {
            let mut parameters = BTreeMap::new();
            parameters.insert("r1".into(), "1".into());
            parameters.insert("r2".into(), r2.to_string());
            parameters.insert("rotation".into(), u.to_string());
            parameters.insert("rotation_slope".into(), t.to_string());
            parameters.insert("shift".into(), s.to_string());
            return Ok(ConstructionResult {
                kind: "flower".into(),
                n1,
                n2,
                p1,
                p2,
                parameters,
                seed,
                attempts: attempt + 1,
                expected_count: target,
                verified_count: Some(report.count),
                verification: Some(report),
            });
        }
    }
    Err(Error::SearchExhausted(format!(
        "flower pair ({n1}, {n2}): best count {best} after {budget} parameter triples, target {target}"
    )))
}

/// `delta(z) = (alpha z + beta)/(-conj(beta) z + conj(alpha))`, a rotation of
/// the sphere, from a seeded integer quaternion. Rotations that put the
/// common points `0, inf` of one family on a circle of the other are skipped.
fn sphere_rotation(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> (ExactComplex, ExactComplex) {
    loop {
        let mut c = || rng.gen_range(-6i64..=6);
        let alpha = ExactComplex::gaussian_int(c(), c());
        let beta = ExactComplex::gaussian_int(c(), c());
        if alpha.is_zero() || beta.is_zero() {
            continue;
        }
        let image_of_zero = &beta / &alpha.conj();
        let preimage_of_zero = -(&beta / &alpha);
        if image_of_zero.pow(n2 as u32).is_real() || preimage_of_zero.pow(n1 as u32).is_real() {
            continue;
        }
        return (alpha, beta);
    }
}

/// Sharpness pair `P1 = T ∘ z^n1`, `P2 = T ∘ z^n2 ∘ delta` whose lemniscates
/// are unions of great circles; retried over up to five seeds until the
/// count is `2 n1 n2`.
pub fn circle_pair(n1: usize, n2: usize, seed: u64, opts: &SolveOptions) -> Result<ConstructionResult> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput("degrees must be positive".into()));
    }
    let target = 2 * n1 * n2;
    let t = RatFunc::cayley();
    let p1 = t.compose(&RatFunc::from_poly(Poly::monomial(1.into(), n1)))?;
    let mut tried = Vec::new();
    for k in 0..5u64 {
        let s = seed.wrapping_add(k);
        tried.push(s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (alpha, beta) = sphere_rotation(&mut rng, n1, n2);
        let delta = RatFunc::mobius(&alpha, &beta, &-beta.conj(), &alpha.conj())?;
        let p2 = t
            .compose(&RatFunc::from_poly(Poly::monomial(1.into(), n2)))?
            .compose(&delta)?;
        let mut o = opts.clone();
        o.seed = s;
        let report = lemniscate_intersections(&p1, &p2, &o)?;
        if report.status == Status::Finite && report.count == target {
            let mut parameters = BTreeMap::new();
            parameters.insert("nu".into(), t.to_string());
            parameters.insert("delta".into(), delta.to_string());
            parameters.insert("alpha".into(), alpha.to_string());
            parameters.insert("beta".into(), beta.to_string());
            return Ok(ConstructionResult {
                kind: "circles".into(),
                n1,
                n2,
                p1,
                p2,
                parameters,
                seed: s,
                attempts: tried.len(),
                expected_count: target,
                verified_count: Some(report.count),
                verification: Some(report),
            });
        }
    }
    Err(Error::SearchExhausted(format!(
        "circle pair ({n1}, {n2}): no seed among {tried:?} gave {target} points"
    )))
}

/// The degree-11 polynomial `S` over `Q(a)` and `P = T ∘ S`.
pub fn cc_counterexample() -> (Poly, RatFunc) {
    let s = cc_polynomial();
    let p = RatFunc::cayley()
        .compose(&RatFunc::from_poly(s.clone()))
        .expect("S is non-constant");
    (s, p)
}

/// Coefficients of `S`, constant term first.
pub const CC_COEFFICIENTS: [&str; 12] = [
    "-18-18*a",
    "-117+24*a",
    "120+100*a",
    "-63*a",
    "-90+30*a",
    "36+21*a",
    "-16-16*a",
    "-9+3*a",
    "2",
    "-1-a",
    "0",
    "1/11",
];

fn cc_polynomial() -> Poly {
    Poly::new(CC_COEFFICIENTS.iter().map(|c| c.parse().expect("valid field text")).collect())
}

/// Decision of whether `conj(S)(z) = S(cz + b)` for some `c != 0`, `b`.
#[derive(Clone, Debug, Serialize)]
pub struct AffineEquivalence {
    /// True when no `(c, b)` exists.
    pub no_equivalence: bool,
    /// `c^g` for the gcd `g` of the supporting degrees, when consistent.
    pub c_power: Option<(usize, ExactComplex)>,
    pub transcript: Vec<String>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn pow_signed(x: &ExactComplex, e: i64) -> Result<ExactComplex> {
    let p = x.pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inv()
    } else {
        Ok(p)
    }
}

/// Exact decision by depression: with `t0 = -s_{n-1}/(n s_n)` and
/// `D(z) = S(z + t0)`, an affine equivalence exists iff `conj(D)(z) = D(cz)`,
/// i.e. `c^k = conj(d_k)/d_k` for every `k >= 1` with `d_k != 0` and
/// `conj(d_0) = d_0`.
pub fn no_affine_equivalence(s: &Poly) -> Result<AffineEquivalence> {
    let n = s.deg();
    if n < 2 {
        return Err(Error::Precondition("S must have degree at least 2".into()));
    }
    let mut tr = Vec::new();
    let sn = s.lc();
    let t0 = -(&s.coeff(n - 1) / &(&sn * &ExactComplex::from_int(n as i64)));
    tr.push(format!("degree n = {n}; leading coefficient {sn}"));
    tr.push(format!("depressing shift t0 = {t0}"));
    let d = s.compose(&Poly::new(vec![t0, ExactComplex::one()]));
    if !d.coeff(n - 1).is_zero() {
        return Err(Error::Internal("depressed polynomial keeps a z^(n-1) term".into()));
    }
    tr.push(format!("D(z) = S(z + t0) = {d}"));
    tr.push("the z^(n-1) coefficient of D(cz + b') is n d_n c^(n-1) b', so b' = 0 and the condition is conj(D)(z) = D(cz)".into());

    let finish = |mut tr: Vec<String>, verdict: bool, c_power| {
        tr.push(if verdict {
            "no (c, b) with conj(S)(z) = S(cz + b) exists".to_string()
        } else {
            "an affine equivalence conj(S)(z) = S(cz + b) exists".to_string()
        });
        Ok(AffineEquivalence {
            no_equivalence: verdict,
            c_power,
            transcript: tr,
        })
    };

    let d0 = d.coeff(0);
    if d0.conj() != d0 {
        tr.push(format!("k = 0: conj(d_0) = {} differs from d_0 = {d0}", d0.conj()));
        return finish(tr, true, None);
    }
    tr.push("k = 0: d_0 is fixed by conjugation".into());

    let mut support = Vec::new();
    for k in 1..=n {
        let dk = d.coeff(k);
        if dk.is_zero() {
            continue;
        }
        let rho = &dk.conj() / &dk;
        tr.push(format!("k = {k}: c^{k} = conj(d_{k})/d_{k} = {rho}"));
        support.push((k as i64, rho));
    }
    // Bezout combination g = sum e_k k over the support.
    let mut g = 0i64;
    let mut coeffs: Vec<i64> = Vec::new();
    for (k, _) in &support {
        let (ng, x, y) = ext_gcd(g, *k);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs.push(y);
        g = ng;
    }
    let mut gamma = ExactComplex::one();
    for ((_, rho), e) in support.iter().zip(&coeffs) {
        gamma = &gamma * &pow_signed(rho, *e)?;
    }
    let combo: Vec<String> = support.iter().zip(&coeffs).map(|((k, _), e)| format!("({e})*{k}")).collect();
    tr.push(format!("g = gcd of supporting degrees = {g} = {}", combo.join(" + ")));
    tr.push(format!("any solution has c^{g} = {gamma}"));
    let mut consistent = true;
    for (k, rho) in &support {
        let lhs = gamma.pow((k / g) as u32);
        if &lhs == rho {
            tr.push(format!("k = {k}: (c^{g})^{} = {rho} holds", k / g));
        } else {
            tr.push(format!("k = {k}: (c^{g})^{} = {lhs} contradicts c^{k} = {rho}", k / g));
            consistent = false;
        }
    }
    finish(tr, !consistent, consistent.then_some((g as usize, gamma)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub s: Poly,
    pub p: RatFunc,
    pub degree: usize,
    pub degree_is_prime: bool,
    pub factor_count: Option<FactorCountCertificate>,
    pub affine: AffineEquivalence,
    pub stages: Vec<Stage>,
    pub is_counterexample: bool,
    pub conclusion: String,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The counterexample pipeline for `P = T ∘ S`.
pub fn verify_counterexample_with(s: &Poly, opts: &SolveOptions) -> Result<CounterexampleReport> {
    let p = RatFunc::cayley().compose(&RatFunc::from_poly(s.clone()))?;
    let mut stages = vec![Stage {
        name: "build".into(),
        status: "passed".into(),
        detail: format!("P = T o S has degree {}", p.degree()),
    }];

    let e = hermitian_numerator(&p)?;
    let factor_count = match absolute_factor_count(&e, opts) {
        Ok(c) => {
            stages.push(Stage {
                name: "reducibility".into(),
                status: if c.count >= 2 { "passed" } else { "failed" }.into(),
                detail: format!("absolute factor count of 𝓔_P is {}", c.count),
            });
            Some(c)
        }
        Err(err) => {
            stages.push(Stage {
                name: "reducibility".into(),
                status: "indeterminate".into(),
                detail: err.to_string(),
            });
            None
        }
    };

    let degree = p.degree();
    let prime = is_prime(degree);
    stages.push(Stage {
        name: "prime-degree".into(),
        status: if prime { "passed" } else { "failed" }.into(),
        detail: format!("deg P = {degree}"),
    });

    let affine = no_affine_equivalence(s)?;
    stages.push(Stage {
        name: "no-affine-equivalence".into(),
        status: if affine.no_equivalence { "passed" } else { "failed" }.into(),
        detail: affine.transcript.last().cloned().unwrap_or_default(),
    });

    let reducible = factor_count.as_ref().is_some_and(|c| c.count >= 2);
    let is_counterexample = reducible && prime && affine.no_equivalence;
    let conclusion = if is_counterexample {
        "L_P is reducible, yet P = B o W with B a Blaschke quotient of degree at least two is impossible: \
         deg P is prime, so W would be Möbius, forcing conj(S) = S o delta with delta affine, which is excluded"
            .to_string()
    } else if factor_count.is_none() {
        "indeterminate: the reducibility stage did not complete".to_string()
    } else {
        "not a counterexample".to_string()
    };
    stages.push(Stage {
        name: "conclusion".into(),
        status: if is_counterexample { "passed" } else { "failed" }.into(),
        detail: conclusion.clone(),
    });
    Ok(CounterexampleReport {
        s: s.clone(),
        p,
        degree,
        degree_is_prime: prime,
        factor_count,
        affine,
        stages,
        is_counterexample,
        conclusion,
    })
}

pub fn verify_counterexample(opts: &SolveOptions) -> Result<CounterexampleReport> {
    verify_counterexample_with(&cc_polynomial(), opts)
}
