#![allow(dead_code)]

use lemkit::curvekit::BivarPoly;
use lemkit::ratfunc::Poly;
use lemkit::{ExactComplex, RatFunc};
use num_complex::Complex64;
use rand::Rng;
use rug::Rational;

pub fn gauss<R: Rng>(rng: &mut R, bound: i64) -> ExactComplex {
    let den = rng.gen_range(1..=3);
    ExactComplex::gaussian(
        Rational::from((rng.gen_range(-bound..=bound), den)),
        Rational::from((rng.gen_range(-bound..=bound), den)),
    )
}

pub fn field<R: Rng>(rng: &mut R, bound: i64) -> ExactComplex {
    let mut c = || Rational::from((rng.gen_range(-bound..=bound), rng.gen_range(1..=4)));
    ExactComplex::new(c(), c(), c(), c())
}

/// Random polynomial of exact degree `deg` with Gaussian-rational coefficients.
pub fn poly<R: Rng>(rng: &mut R, deg: usize) -> Poly {
    let mut c: Vec<ExactComplex> = (0..=deg).map(|_| gauss(rng, 5)).collect();
    while c[deg].is_zero() {
        c[deg] = gauss(rng, 5);
    }
    Poly::new(c)
}

/// Random non-constant rational function of degree at most `max_deg`.
pub fn ratfunc<R: Rng>(rng: &mut R, max_deg: usize) -> RatFunc {
    loop {
        let dn = rng.gen_range(0..=max_deg);
        let dd = if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..=max_deg) };
        let r = RatFunc::new(poly(rng, dn), poly(rng, dd)).unwrap();
        if !r.is_constant() {
            return r;
        }
    }
}

pub fn nonconstant_poly<R: Rng>(rng: &mut R, max_deg: usize) -> Poly {
    let d = rng.gen_range(1..=max_deg);
    poly(rng, d)
}

/// Random Hermitian matrix `M[j][k] = conj(M[k][j])` of size `n + 1` with a
/// nonzero corner so the bidegree is `(n, n)`.
#[allow(clippy::needless_range_loop)]
pub fn hermitian<R: Rng>(rng: &mut R, n: usize) -> BivarPoly {
    let mut m = vec![vec![ExactComplex::zero(); n + 1]; n + 1];
    for j in 0..=n {
        for k in j..=n {
            let c = gauss(rng, 4);
            if j == k {
                m[j][j] = ExactComplex::from_rational(c.u0().clone());
            } else {
                m[k][j] = c.conj();
                m[j][k] = c;
            }
        }
    }
    while m[n][0].is_zero() && m[n][n].is_zero() {
        let c = gauss(rng, 4);
        m[0][n] = c.conj();
        m[n][0] = c;
    }
    BivarPoly::from_matrix(m)
}

pub fn c64(c: &ExactComplex) -> Complex64 {
    let z = c.to_complex(64);
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Horner in double precision from the exact coefficients.
pub fn eval64(p: &Poly, z: Complex64) -> Complex64 {
    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c64(c))
}

pub fn eval_bivar64(f: &BivarPoly, z: Complex64, w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, row) in f.matrix().iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            acc += c64(c) * z.powu(j as u32) * w.powu(k as u32);
        }
    }
    acc
}

pub fn to_rug(z: Complex64) -> rug::Complex {
    rug::Complex::with_val(128, (z.re, z.im))
}
