//! The curves `E_{P,Q}`, `𝓔_P` and `L_P` attached to rational functions.

pub mod bivar;

use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;

pub use bivar::BivarPoly;

fn require_nonconstant(p: &RatFunc) -> Result<()> {
    if p.is_constant() {
        return Err(Error::Precondition(format!("{p} is constant")));
    }
    Ok(())
}

/// Numerator of `P(x) - Q(y)`: `num_P(x) den_Q(y) - num_Q(y) den_P(x)`,
/// scaled so the leading coefficient (top row, top column) is 1.
pub fn separated_numerator(p: &RatFunc, q: &RatFunc) -> Result<BivarPoly> {
    require_nonconstant(p)?;
    require_nonconstant(q)?;
    let e = &(&BivarPoly::from_z_poly(p.num()) * &BivarPoly::from_w_poly(q.den()))
        - &(&BivarPoly::from_w_poly(q.num()) * &BivarPoly::from_z_poly(p.den()));
    Ok(e.normalized())
}

/// `𝓔_P(z, w) = N(z) conj(N)(w) - D(z) conj(D)(w)` for `P = N/D`, with the
/// positive rational content removed. Hermitian symmetry is verified.
pub fn hermitian_numerator(p: &RatFunc) -> Result<BivarPoly> {
    require_nonconstant(p)?;
    let (n, d) = (p.num(), p.den());
    let e = &(&BivarPoly::from_z_poly(n) * &BivarPoly::from_w_poly(&n.conj()))
        - &(&BivarPoly::from_z_poly(d) * &BivarPoly::from_w_poly(&d.conj()));
    let e = e.primitive_rational();
    if !e.is_hermitian() {
        return Err(Error::Internal(format!("numerator of {p} is not Hermitian")));
    }
    let n = p.degree();
    if e.bidegree() != (n, n) {
        return Err(Error::Internal(format!("bidegree {:?} differs from ({n}, {n})", e.bidegree())));
    }
    Ok(e)
}

/// `L_P(x, y) = 𝓔_P(x + iy, x - iy)`, a polynomial with real coefficients
/// whose sign agrees with the sign of `|P(x + iy)| - 1` away from poles.
pub fn lemniscate_poly(p: &RatFunc) -> Result<BivarPoly> {
    let l = hermitian_numerator(p)?.substitute_real_coordinates();
    if !l.is_real() {
        return Err(Error::Internal(format!("L_P for {p} has non-real coefficients")));
    }
    Ok(l)
}

/// Greatest common divisor over the algebraic closure, computed as the
/// gcd in `K(w)[z]` by a primitive remainder sequence with the content in
/// `w` restored. Normalized like [`BivarPoly::normalized`]; a constant
/// result is 1.
pub fn bivariate_gcd(f: &BivarPoly, g: &BivarPoly) -> BivarPoly {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let c = f.content_z().gcd(&g.content_z());
    let mut a = f.primitive_part_z();
    let mut b = g.primitive_part_z();
    if a.deg_z() < b.deg_z() {
        std::mem::swap(&mut a, &mut b);
    }
    let core = loop {
        if b.deg_z() == 0 {
            break BivarPoly::one();
        }
        let r = a.prem_z(&b);
        if r.is_zero() {
            break b;
        }
        a = b;
        b = r.primitive_part_z();
    };
    core.mul_w_poly(&c).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ExactComplex;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn bp(rows: &[&[i64]]) -> BivarPoly {
        BivarPoly::from_matrix(
            rows.iter()
                .map(|r| r.iter().map(|&c| ExactComplex::from_int(c)).collect())
                .collect(),
        )
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
        let t = hermitian_numerator(&RatFunc::cayley()).unwrap();
        assert_eq!(t.to_string(), "i*z-i*w");
    }

    #[test]
    fn lemniscate_examples() {
        assert_eq!(lemniscate_poly(&rf("z")).unwrap().to_expr("x", "y"), "x^2+y^2-1");
        assert_eq!(lemniscate_poly(&rf("z^2")).unwrap().to_expr("x", "y"), "x^4+2*x^2*y^2+y^4-1");
        assert_eq!(lemniscate_poly(&RatFunc::cayley()).unwrap().to_expr("x", "y"), "-2*y");
    }

    #[test]
    fn gcd_examples() {
        let zw1 = bp(&[&[-1], &[0, 1]]);
        let zmw = bp(&[&[0, -1], &[1]]);
        assert_eq!(bivariate_gcd(&zw1, &(&zw1 * &zmw)), zw1);
        assert_eq!(bivariate_gcd(&zw1, &bp(&[&[-4], &[0, 1]])), BivarPoly::one());
        // common factor depending on w only
        let wp1 = bp(&[&[1, 1]]);
        assert_eq!(bivariate_gcd(&(&zw1 * &wp1), &(&zmw * &wp1)), wp1);

        let w = rf("z+1");
        let p = rf("z^2").compose(&w).unwrap();
        let ew = hermitian_numerator(&w).unwrap();
        let ep = hermitian_numerator(&p).unwrap();
        assert_eq!(bivariate_gcd(&ep, &ew), ew.normalized());
        assert!(ew.divides(&ep));
    }
}
