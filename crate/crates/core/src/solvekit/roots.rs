//! Aberth–Ehrlich simultaneous root finding at arbitrary precision.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::ratfunc::poly::{horner, horner_with_derivative};
use crate::ratfunc::Poly;

/// Default and maximal working precision (bits).
pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 4096;

const GUARD_BITS: u32 = 64;

/// All roots of `p` with multiplicities read off the exact square-free
/// decomposition.
pub fn univariate_roots(p: &Poly, prec: u32) -> Result<Vec<(Complex, usize)>> {
    univariate_roots_with(p, prec, MAX_PRECISION).map(|(r, _)| r)
}

/// Like [`univariate_roots`], escalating precision up to `max_prec`.
/// Also returns the precision that succeeded.
pub fn univariate_roots_with(p: &Poly, prec: u32, max_prec: u32) -> Result<(Vec<(Complex, usize)>, u32)> {
    if p.deg() == 0 {
        return Err(Error::Precondition("root finding needs a polynomial of degree at least 1".into()));
    }
    let mut out = Vec::new();
    let mut used = prec;
    for (f, k) in p.squarefree_decomposition() {
        let (roots, bits) = squarefree_roots_with(&f, prec, max_prec)?;
        used = used.max(bits);
        out.extend(roots.into_iter().map(|r| (r, k)));
    }
    Ok((out, used))
}

/// Roots of a square-free polynomial.
pub fn squarefree_roots(p: &Poly, prec: u32) -> Result<Vec<Complex>> {
    squarefree_roots_with(p, prec, MAX_PRECISION).map(|(r, _)| r)
}

pub fn squarefree_roots_with(p: &Poly, prec: u32, max_prec: u32) -> Result<(Vec<Complex>, u32)> {
    let mut bits = prec.max(53);
    loop {
        let last = match attempt(p, bits) {
            Ok(r) => return Ok((r, bits)),
            Err(reason) => reason,
        };
        if bits >= max_prec {
            return Err(Error::Indeterminate {
                precision_bits: bits,
                reason: last,
            });
        }
        bits = (bits * 2).min(max_prec);
    }
}

fn attempt(p: &Poly, prec: u32) -> std::result::Result<Vec<Complex>, String> {
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut roots: Vec<Complex> = (0..zeros).map(|_| Complex::new(prec)).collect();
    let q = Poly::new(p.coeffs()[zeros..].to_vec());
    let n = q.deg();
    if n == 0 {
        return Ok(roots);
    }
    let wp = prec + GUARD_BITS;
    let coeffs = q.to_complex_coeffs(wp);
    if n == 1 {
        let r = Complex::with_val(wp, &coeffs[0] / &coeffs[1]);
        roots.push(Complex::with_val(prec, -r));
        return Ok(roots);
    }

    let low: Vec<Complex> = coeffs.iter().map(|c| Complex::with_val(64, c)).collect();
    let mut z = initial_guesses(&low);
    aberth(&low, &mut z, 50, 40 * n + 200);

    let mut z: Vec<Complex> = z.into_iter().map(|c| Complex::with_val(wp, c)).collect();
    if !aberth(&coeffs, &mut z, wp - 8, 200) {
        return Err(format!("Aberth iteration did not converge at {prec} bits"));
    }

    let abs: Vec<Float> = coeffs.iter().map(|c| Float::with_val(wp, c.abs_ref())).collect();
    let tol = Float::with_val(wp, 1) >> (prec as i32 - 20);
    for r in &z {
        let res = Float::with_val(wp, horner(&coeffs, r).abs_ref());
        let scale = residual_scale(&abs, r);
        if res > Float::with_val(wp, &scale * &tol) {
            return Err(format!("residual check failed at {prec} bits"));
        }
    }
    // Distinct roots of a square-free polynomial must come out distinct.
    let sep_tol = Float::with_val(wp, 1) >> (prec as i32 / 2);
    for i in 0..z.len() {
        for j in 0..i {
            let d = Float::with_val(wp, Complex::with_val(wp, &z[i] - &z[j]).abs_ref());
            let m = Float::with_val(wp, z[i].abs_ref()).max(&Float::with_val(wp, 1));
            if d < Float::with_val(wp, &m * &sep_tol) {
                return Err(format!("roots {i} and {j} coalesced at {prec} bits"));
            }
        }
    }
    roots.extend(z.into_iter().map(|c| Complex::with_val(prec, c)));
    Ok(roots)
}

/// `sum |a_k| |z|^k`, the natural scale for the residual at `z`.
pub fn residual_scale(abs_coeffs: &[Float], z: &Complex) -> Float {
    let prec = z.prec().0;
    let r = Float::with_val(prec, z.abs_ref());
    let mut acc = Float::new(prec);
    for a in abs_coeffs.iter().rev() {
        acc *= &r;
        acc += a;
    }
    acc
}

/// Starting points on circles given by the upper convex hull of the
/// Newton polygon `(k, log|a_k|)`.
fn initial_guesses(coeffs: &[Complex]) -> Vec<Complex> {
    let prec = coeffs[0].prec().0;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, Float::with_val(prec, c.abs_ref()).ln().to_f64()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::new();
    for (s, w) in hull.windows(2).enumerate() {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let cnt = j - i;
        let log_r = (li - lj) / cnt as f64;
        let r = Float::with_val(prec, log_r).exp();
        for m in 0..cnt {
            let theta = Float::with_val(prec, &two_pi * (m as f64 / cnt as f64)) + (0.4 + 0.9 * s as f64);
            let mut c = Complex::with_val(prec, (theta.clone().cos(), theta.sin()));
            c *= &r;
            out.push(c);
        }
    }
    out
}

/// Gauss–Seidel Aberth iteration. An approximation is final once its
/// correction is below `2^-tol_bits` relative to `max(1, |z|)` or its
/// residual is at the rounding level of the evaluation. Returns true when
/// every approximation is final.
fn aberth(coeffs: &[Complex], z: &mut [Complex], tol_bits: u32, max_iter: usize) -> bool {
    let prec = coeffs[0].prec().0;
    let n = z.len();
    let eps = Float::with_val(prec, 1) >> tol_bits as i32;
    let noise = Float::with_val(prec, 1) >> (prec as i32 - 4 - (usize::BITS - n.leading_zeros()) as i32);
    let abs: Vec<Float> = coeffs.iter().map(|c| Float::with_val(prec, c.abs_ref())).collect();
    let one = Float::with_val(prec, 1);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(coeffs, &z[i]);
            if p.is_zero()
                || Float::with_val(prec, p.abs_ref()) <= Float::with_val(prec, residual_scale(&abs, &z[i]) * &noise)
            {
                done[i] = true;
                continue;
            }
            let ratio = Complex::with_val(prec, &p / &dp);
            let mut sum = Complex::new(prec);
            for j in 0..n {
                if j != i {
                    let d = Complex::with_val(prec, &z[i] - &z[j]);
                    sum += d.recip();
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &ratio * &sum);
            let w = if denom.is_zero() || !dp.real().is_finite() || dp.is_zero() {
                Complex::with_val(prec, (1e-3, 1e-3))
            } else {
                Complex::with_val(prec, &ratio / &denom)
            };
            if !w.real().is_finite() || !w.imag().is_finite() {
                all = false;
                continue;
            }
            z[i] -= &w;
            let size = Float::with_val(prec, z[i].abs_ref()).max(&one);
            let step = Float::with_val(prec, w.abs_ref());
            if step <= Float::with_val(prec, &size * &eps) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return true;
        }
    }
    false
}

/// `2^e` at precision `prec`.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 2).pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ExactComplex;

    fn close(a: &Complex, re: f64, im: f64) -> bool {
        (a.real().to_f64() - re).abs() < 1e-30 && (a.imag().to_f64() - im).abs() < 1e-30
    }

    #[test]
    fn simple_examples() {
        let r = univariate_roots(&Poly::from_ints(&[1, 0, 1]), 128).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|(z, _)| close(z, 0.0, 1.0)));
        assert!(r.iter().any(|(z, _)| close(z, 0.0, -1.0)));

        let r = univariate_roots(&Poly::from_ints(&[1, -2, 1]), 128).unwrap();
        assert_eq!(r.len(), 1);
        assert!(close(&r[0].0, 1.0, 0.0) && r[0].1 == 2);

        // (z/2)^3 - 1
        let p = Poly::new(vec![ExactComplex::from_int(-1), 0.into(), 0.into(), "1/8".parse().unwrap()]);
        let r = univariate_roots(&p, 128).unwrap();
        assert_eq!(r.len(), 3);
        for (z, k) in &r {
            assert_eq!(*k, 1);
            assert!((z.clone().abs().real().to_f64() - 2.0).abs() < 1e-30);
        }
    }

    #[test]
    fn wide_dynamic_range() {
        // (z - 10^-20)(z - 1)(z - 10^20)
        let e = |s: &str| -> ExactComplex { s.parse().unwrap() };
        let p = &(&Poly::new(vec![e("-1/100000000000000000000"), e("1")]) * &Poly::from_ints(&[-1, 1]))
            * &Poly::new(vec![e("-100000000000000000000"), e("1")]);
        let mut r: Vec<f64> = squarefree_roots(&p, 128)
            .unwrap()
            .iter()
            .map(|z| z.real().to_f64())
            .collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] / 1e-20 - 1.0).abs() < 1e-12);
        assert!((r[1] - 1.0).abs() < 1e-12);
        assert!((r[2] / 1e20 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn root_at_zero_and_clusters() {
        // z (z - 1)(z - 1 - 2^-100)
        let e: ExactComplex = "1267650600228229401496703205377/1267650600228229401496703205376".parse().unwrap();
        let p = &(&Poly::z() * &Poly::from_ints(&[-1, 1])) * &Poly::new(vec![-e, 1.into()]);
        let r = squarefree_roots(&p, 256).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[0].is_zero());
    }
}
