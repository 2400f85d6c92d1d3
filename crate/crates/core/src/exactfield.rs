//! Exact arithmetic in the quartic field `Q(i, a)`, where `a^2 + a + 3 = 0`.
//!
//! An element is stored as `(u0 + u1*i) + (v0 + v1*i)*a` with four reduced
//! rationals, which makes the representation canonical. Complex conjugation
//! is the field automorphism `i -> -i`, `a -> -1 - a`; it agrees with complex
//! conjugation under the embedding `a -> (-1 + i*sqrt(11))/2`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Element of `Q(i, a)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    u0: Rational,
    u1: Rational,
    v0: Rational,
    v1: Rational,
}

/// Gaussian rational, used internally for the tower `Q(i)(a)`.
#[derive(Clone, Default)]
struct Gauss(Rational, Rational);

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        let re = Rational::from(&self.0 * &o.0) - Rational::from(&self.1 * &o.1);
        let im = Rational::from(&self.0 * &o.1) + Rational::from(&self.1 * &o.0);
        Gauss(re, im)
    }

    fn add(&self, o: &Gauss) -> Gauss {
        Gauss(Rational::from(&self.0 + &o.0), Rational::from(&self.1 + &o.1))
    }

    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss(Rational::from(&self.0 - &o.0), Rational::from(&self.1 - &o.1))
    }

    fn scale(&self, k: i32) -> Gauss {
        Gauss(Rational::from(&self.0 * k), Rational::from(&self.1 * k))
    }

    fn inv(&self) -> Gauss {
        let n = Rational::from(self.0.square_ref()) + Rational::from(self.1.square_ref());
        Gauss(Rational::from(&self.0 / &n), -Rational::from(&self.1 / &n))
    }
}

impl ExactComplex {
    pub fn new(u0: Rational, u1: Rational, v0: Rational, v1: Rational) -> Self {
        ExactComplex { u0, u1, v0, v1 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::from(1))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactComplex {
            u1: Rational::from(1),
            ..Self::default()
        }
    }

    /// The generator `a`, a root of `t^2 + t + 3`.
    pub fn a() -> Self {
        ExactComplex {
            v0: Rational::from(1),
            ..Self::default()
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        ExactComplex {
            u0: q,
            ..Self::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        ExactComplex {
            u0: re,
            u1: im,
            ..Self::default()
        }
    }

    /// Gaussian integer `re + im*i`.
    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Self::gaussian(Rational::from(re), Rational::from(im))
    }

    pub fn u0(&self) -> &Rational {
        &self.u0
    }
    pub fn u1(&self) -> &Rational {
        &self.u1
    }
    pub fn v0(&self) -> &Rational {
        &self.v0
    }
    pub fn v1(&self) -> &Rational {
        &self.v1
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.u0, &self.u1, &self.v0, &self.v1]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|q| q.cmp0().is_eq())
    }

    pub fn is_one(&self) -> bool {
        self.u0 == 1 && self.u1.cmp0().is_eq() && self.v0.cmp0().is_eq() && self.v1.cmp0().is_eq()
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.u1.cmp0().is_eq() && self.v0.cmp0().is_eq() && self.v1.cmp0().is_eq()
    }

    /// True when the element is fixed by complex conjugation, i.e. it is real
    /// under the embedding.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Returns the rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.u0)
    }

    fn lower(&self) -> Gauss {
        Gauss(self.u0.clone(), self.u1.clone())
    }

    fn upper(&self) -> Gauss {
        Gauss(self.v0.clone(), self.v1.clone())
    }

    fn from_parts(p: Gauss, q: Gauss) -> Self {
        ExactComplex {
            u0: p.0,
            u1: p.1,
            v0: q.0,
            v1: q.1,
        }
    }

    /// Field automorphism `i -> -i`, `a -> -1 - a`.
    pub fn conj(&self) -> Self {
        // conj(p + q a) = (conj p - conj q) - conj(q) a
        ExactComplex {
            u0: Rational::from(&self.u0 - &self.v0),
            u1: Rational::from(-&self.u1) + &self.v1,
            v0: Rational::from(-&self.v0),
            v1: self.v1.clone(),
        }
    }

    /// `x * conj(x)`, the squared modulus; always real.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.lower();
        let q = self.upper();
        // (p + q a)(p - q - q a) = p^2 - p q + 3 q^2
        let norm = p.mul(&p).sub(&p.mul(&q)).add(&q.mul(&q).scale(3));
        let ninv = norm.inv();
        let num_p = p.sub(&q);
        let num_q = q.scale(-1);
        Ok(Self::from_parts(num_p.mul(&ninv), num_q.mul(&ninv)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    pub fn scale_rational(&self, q: &Rational) -> Self {
        ExactComplex {
            u0: Rational::from(&self.u0 * q),
            u1: Rational::from(&self.u1 * q),
            v0: Rational::from(&self.v0 * q),
            v1: Rational::from(&self.v1 * q),
        }
    }

    /// Embedding into `C` with `a -> (-1 + i*sqrt(11))/2`.
    pub fn to_complex(&self, prec: u32) -> Complex {
        let work = prec + 32;
        let half_sqrt11 = Float::with_val(work, 11).sqrt() / 2u32;
        // a = -1/2 + i*h
        let mut re = Float::with_val(work, &self.u0);
        re -= Float::with_val(work, &self.v0) / 2u32;
        re -= Float::with_val(work, &self.v1) * &half_sqrt11;
        let mut im = Float::with_val(work, &self.u1);
        im += Float::with_val(work, &self.v0) * &half_sqrt11;
        im -= Float::with_val(work, &self.v1) / 2u32;
        Complex::with_val(prec, (re, im))
    }

    /// Least common multiple of the four denominators.
    pub fn denominator_lcm(&self) -> Integer {
        let mut l = Integer::from(1);
        for q in self.components() {
            l.lcm_mut(q.denom());
        }
        l
    }

    /// Greatest common divisor of the four numerators (zero for zero).
    pub fn numerator_gcd(&self) -> Integer {
        let mut g = Integer::new();
        for q in self.components() {
            g.gcd_mut(q.numer());
        }
        g
    }
}

/// The single arithmetic entry point; division by zero is an error.
pub fn field_arith(x: &ExactComplex, y: &ExactComplex, op: FieldOp) -> Result<ExactComplex> {
    Ok(match op {
        FieldOp::Add => x + y,
        FieldOp::Sub => x - y,
        FieldOp::Mul => x * y,
        FieldOp::Div => x.checked_div(y)?,
    })
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for ExactComplex {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            u0: Rational::from(&self.u0 + &o.u0),
            u1: Rational::from(&self.u1 + &o.u1),
            v0: Rational::from(&self.v0 + &o.v0),
            v1: Rational::from(&self.v1 + &o.v1),
        }
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            u0: Rational::from(&self.u0 - &o.u0),
            u1: Rational::from(&self.u1 - &o.u1),
            v0: Rational::from(&self.v0 - &o.v0),
            v1: Rational::from(&self.v1 - &o.v1),
        }
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        if self.v0.cmp0().is_eq() && self.v1.cmp0().is_eq() && o.v0.cmp0().is_eq() && o.v1.cmp0().is_eq() {
            let p = self.lower().mul(&o.lower());
            return ExactComplex::from_parts(p, Gauss::default());
        }
        let (p1, q1, p2, q2) = (self.lower(), self.upper(), o.lower(), o.upper());
        // (p1 + q1 a)(p2 + q2 a) with a^2 = -a - 3
        let qq = q1.mul(&q2);
        let p = p1.mul(&p2).sub(&qq.scale(3));
        let q = p1.mul(&q2).add(&q1.mul(&p2)).sub(&qq);
        ExactComplex::from_parts(p, q)
    }
}

impl Div<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    /// Panics on division by zero; use [`ExactComplex::checked_div`] for a
    /// fallible variant.
    fn div(self, o: &ExactComplex) -> ExactComplex {
        self.checked_div(o).expect("ExactComplex division by zero")
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            u0: Rational::from(-&self.u0),
            u1: Rational::from(-&self.u1),
            v0: Rational::from(-&self.v0),
            v1: Rational::from(-&self.v1),
        }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                (&self).$m(&o)
            }
        }
        impl $tr<&ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: &ExactComplex) -> ExactComplex {
                (&self).$m(o)
            }
        }
        impl $tr<ExactComplex> for &ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, o: &ExactComplex) {
        self.u0 += &o.u0;
        self.u1 += &o.u1;
        self.v0 += &o.v0;
        self.v1 += &o.v1;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, o: &ExactComplex) {
        self.u0 -= &o.u0;
        self.u1 -= &o.u1;
        self.v0 -= &o.v0;
        self.v1 -= &o.v1;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, o: &ExactComplex) {
        *self = &*self * o;
    }
}

impl Sum for ExactComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for ExactComplex {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| &acc * &x)
    }
}

impl fmt::Display for ExactComplex {
    /// Canonical text: terms ordered `1, i, a, i*a`, no spaces, unit
    /// coefficients elided (`i`, `-a`, `2/3*i*a`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: [(&Rational, &str); 4] = [(&self.u0, ""), (&self.u1, "i"), (&self.v0, "a"), (&self.v1, "i*a")];
        let mut first = true;
        for (q, unit) in terms {
            if q.cmp0().is_eq() {
                continue;
            }
            let neg = q.cmp0().is_lt();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            let mag = Rational::from(q.abs_ref());
            if unit.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                f.write_str(unit)?;
            } else {
                write!(f, "{mag}*{unit}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactComplex {
    type Err = Error;

    /// Parses sums of terms `[+|-][p[/q]][*i][*a]`, e.g. `-117+24*a` or
    /// `3/7+2*i+a`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Syntax {
                position: 0,
                message: "empty field element".into(),
            });
        }
        let mut pos = 0usize;
        let mut acc = ExactComplex::zero();
        let err = |p: usize, m: &str| Error::Syntax {
            position: chars.get(p).map(|c| c.0).unwrap_or(s.len()),
            message: m.to_string(),
        };
        let read_int = |pos: &mut usize| -> Option<Integer> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
                *pos += 1;
            }
            (start < *pos).then(|| {
                let digits: String = chars[start..*pos].iter().map(|c| c.1).collect();
                digits.parse::<Integer>().unwrap()
            })
        };
        while pos < chars.len() {
            let mut sign = 1;
            match chars[pos].1 {
                '+' => pos += 1,
                '-' => {
                    sign = -1;
                    pos += 1
                }
                _ if pos > 0 => return Err(err(pos, "expected '+' or '-'")),
                _ => {}
            }
            let mut coef = Rational::from(sign);
            let mut have_number = false;
            if let Some(n) = read_int(&mut pos) {
                have_number = true;
                let mut q = Rational::from(n);
                if pos < chars.len() && chars[pos].1 == '/' {
                    pos += 1;
                    let d = read_int(&mut pos).ok_or_else(|| err(pos, "expected denominator"))?;
                    if d.cmp0().is_eq() {
                        return Err(Error::DivisionByZero);
                    }
                    q /= Rational::from(d);
                }
                coef *= q;
            }
            let mut unit_i = false;
            let mut unit_a = false;
            loop {
                let mut p = pos;
                if have_number || unit_i || unit_a {
                    if p < chars.len() && chars[p].1 == '*' {
                        p += 1;
                    } else {
                        break;
                    }
                }
                match chars.get(p).map(|c| c.1) {
                    Some('i') if !unit_i && !unit_a => unit_i = true,
                    Some('a') if !unit_a => unit_a = true,
                    _ if have_number || unit_i || unit_a => return Err(err(p, "expected 'i' or 'a'")),
                    _ => return Err(err(p, "expected number, 'i' or 'a'")),
                }
                pos = p + 1;
            }
            let unit = match (unit_i, unit_a) {
                (false, false) => ExactComplex::one(),
                (true, false) => ExactComplex::i(),
                (false, true) => ExactComplex::a(),
                (true, true) => ExactComplex::i() * ExactComplex::a(),
            };
            acc += &unit.scale_rational(&coef);
        }
        Ok(acc)
    }
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
