//! Dense univariate polynomials over [`ExactComplex`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Complex;

use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;

/// Dense polynomial; `coeffs[k]` multiplies `z^k`. The zero polynomial has
/// no coefficients and the leading coefficient is otherwise nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<ExactComplex>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactComplex::one())
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(ExactComplex::one(), 1)
    }

    pub fn monomial(c: ExactComplex, k: usize) -> Self {
        let mut v = vec![ExactComplex::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&n| ExactComplex::from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> ExactComplex {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> ExactComplex {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Coefficient-wise complex conjugation.
    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactComplex::from_int(k as i64))
                .collect(),
        )
    }

    /// `z^n * p(1/z)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.is_zero() || n >= self.deg());
        let mut v = vec![ExactComplex::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[n - k] = c.clone();
        }
        Poly::new(v)
    }

    pub fn eval(&self, x: &ExactComplex) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn to_complex_coeffs(&self, prec: u32) -> Vec<Complex> {
        self.coeffs.iter().map(|c| c.to_complex(prec)).collect()
    }

    /// Numeric evaluation at the precision of `z`.
    pub fn eval_complex(&self, z: &Complex) -> Complex {
        horner(&self.to_complex_coeffs(z.prec().0), z)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(q(z))`.
    pub fn compose(&self, q: &Poly) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division over the field.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lc = d.lc().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![ExactComplex::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Square-free decomposition `p = lc * prod f_k^k` (Yun). Returns the
    /// monic nonconstant factors `f_k` with their multiplicities `k`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let b = f.gcd(&df);
        let mut c = f.exact_div(&b).unwrap();
        let mut d = &df.exact_div(&b).unwrap() - &c.derivative();
        let mut k = 1;
        while c.deg() > 0 {
            let a = c.gcd(&d);
            c = c.exact_div(&a).unwrap();
            d = &d.exact_div(&a).unwrap() - &c.derivative();
            if a.deg() > 0 {
                out.push((a, k));
            }
            k += 1;
        }
        out
    }

    /// Monic square-free part.
    pub fn squarefree_part(&self) -> Poly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, (f, _)| &acc * &f)
    }

    /// Resultant with respect to the actual degrees of both polynomials.
    pub fn resultant(&self, other: &Poly) -> ExactComplex {
        if self.is_zero() || other.is_zero() {
            return ExactComplex::zero();
        }
        let mut f = self.clone();
        let mut g = other.clone();
        let mut acc = ExactComplex::one();
        loop {
            let (m, n) = (f.deg(), g.deg());
            if n == 0 {
                return &acc * &g.lc().pow(m as u32);
            }
            if m == 0 {
                return &acc * &f.lc().pow(n as u32);
            }
            if m < n {
                // res(f, g) = (-1)^{mn} res(g, f)
                if (m * n) % 2 == 1 {
                    acc = -acc;
                }
                std::mem::swap(&mut f, &mut g);
                continue;
            }
            let r = f.rem(&g).unwrap();
            if r.is_zero() {
                return ExactComplex::zero();
            }
            // res(f, g) = (-1)^{mn} lc(g)^{m - deg r} res(g, r)
            let k = r.deg();
            acc = &acc * &g.lc().pow((m - k) as u32);
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            f = g;
            g = r;
        }
    }

    /// Canonical expression text in the variable `var`, highest degree
    /// first, with coefficients in canonical field text.
    pub fn to_expr(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let text = c.to_string();
            let term = if monomial.is_empty() {
                if is_single_term(&text) {
                    text
                } else {
                    format!("({text})")
                }
            } else if c.is_one() {
                monomial
            } else if (-c).is_one() {
                format!("-{monomial}")
            } else if is_single_term(&text) {
                format!("{text}*{monomial}")
            } else {
                format!("({text})*{monomial}")
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }
}

fn is_single_term(text: &str) -> bool {
    !text[1..].contains(['+', '-'])
}

/// Horner evaluation of complex coefficients (lowest degree first).
pub fn horner(coeffs: &[Complex], z: &Complex) -> Complex {
    let mut acc = Complex::new(z.prec());
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// Value and derivative by Horner.
pub fn horner_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let mut p = Complex::new(z.prec());
    let mut dp = Complex::new(z.prec());
    for c in coeffs.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|k| match (self.coeffs.get(k), o.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactComplex::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Poly::new(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("z"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_expr("z"))
    }
}
