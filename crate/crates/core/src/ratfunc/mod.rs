//! Polynomials and rational functions over [`ExactComplex`].

mod parse;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;
use crate::solvekit::roots::squarefree_roots;

pub use parse::parse;
pub use poly::Poly;

/// A point of the Riemann sphere at floating precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Extended {
    Finite(Complex),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<Complex> {
        match self {
            Extended::Finite(c) => Some(c),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

/// Rational function `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.deg() > 0 {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        } else {
            (num, den)
        };
        if !den.is_monic() {
            let s = den.lc().inv()?;
            num = num.scale(&s);
            den = den.scale(&s);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    /// `(az + b)/(cz + d)`.
    pub fn mobius(a: &ExactComplex, b: &ExactComplex, c: &ExactComplex, d: &ExactComplex) -> Result<Self> {
        if (&(a * d) - &(b * c)).is_zero() {
            return Err(Error::DegenerateMobius);
        }
        Self::new(
            Poly::new(vec![b.clone(), a.clone()]),
            Poly::new(vec![d.clone(), c.clone()]),
        )
    }

    /// The Cayley transform `(z - i)/(z + i)`.
    pub fn cayley() -> Self {
        let i = ExactComplex::i();
        Self::mobius(&ExactComplex::one(), &-&i, &ExactComplex::one(), &i).unwrap()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == 0
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn conj(&self) -> Self {
        RatFunc {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `self ∘ q`.
    pub fn compose(&self, q: &RatFunc) -> Result<Self> {
        if q.is_constant() {
            return Err(Error::Precondition("inner function of a composition must be non-constant".into()));
        }
        let n = self.degree();
        let num = homogenize(&self.num, n, &q.num, &q.den);
        let den = homogenize(&self.den, n, &q.num, &q.den);
        Self::new(num, den)
    }

    /// Exact test of `B(z) * conj(B)(1/z) = 1`, cross-multiplied as
    /// `N * rev(conj N) = D * rev(conj D)` with reversal at degree `deg B`.
    pub fn is_blaschke_quotient(&self) -> bool {
        let n = self.degree();
        let lhs = &self.num * &self.num.conj().reversed(n);
        let rhs = &self.den * &self.den.conj().reversed(n);
        lhs == rhs
    }

    /// Exact value, `None` at a pole.
    pub fn eval_exact(&self, x: &ExactComplex) -> Option<ExactComplex> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(x) / &d)
    }

    /// Exact value at infinity, `None` when infinity is a pole.
    pub fn value_at_infinity(&self) -> Option<ExactComplex> {
        let (m, n) = (self.num.deg(), self.den.deg());
        match m.cmp(&n) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => Some(&self.num.lc() / &self.den.lc()),
            std::cmp::Ordering::Less => Some(ExactComplex::zero()),
        }
    }

    /// Floating evaluation at the precision of `z`.
    pub fn evaluate(&self, z: &Complex) -> Extended {
        let d = self.den.eval_complex(z);
        if d.is_zero() {
            if self.num.is_zero() {
                return Extended::Finite(Complex::new(z.prec()));
            }
            return Extended::Infinity;
        }
        Extended::Finite(self.num.eval_complex(z) / d)
    }

    pub fn evaluate_extended(&self, z: &Extended, prec: u32) -> Extended {
        match z {
            Extended::Finite(c) => self.evaluate(c),
            Extended::Infinity => match self.value_at_infinity() {
                Some(v) => Extended::Finite(v.to_complex(prec)),
                None => Extended::Infinity,
            },
        }
    }

    /// Poles with exact multiplicities; finite poles are ordered by real
    /// then imaginary part and infinity comes last.
    pub fn poles_with_multiplicity(&self, prec: u32) -> Result<Vec<(Extended, usize)>> {
        let mut out = Vec::new();
        for (f, k) in self.den.squarefree_decomposition() {
            for r in squarefree_roots(&f, prec)? {
                out.push((r, k));
            }
        }
        out.sort_by(|(x, _), (y, _)| {
            let kx = (x.real().clone(), x.imag().clone());
            let ky = (y.real().clone(), y.imag().clone());
            cmp_pair(&kx, &ky)
        });
        let mut out: Vec<(Extended, usize)> = out.into_iter().map(|(c, k)| (Extended::Finite(c), k)).collect();
        if self.num.deg() > self.den.deg() {
            out.push((Extended::Infinity, self.num.deg() - self.den.deg()));
        }
        Ok(out)
    }

    /// Multiplicities of all poles, infinity included, without locating them.
    pub fn pole_multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, k) in self.den.squarefree_decomposition() {
            out.extend(std::iter::repeat_n(k, f.deg()));
        }
        if self.num.deg() > self.den.deg() {
            out.push(self.num.deg() - self.den.deg());
        }
        out
    }
}

fn cmp_pair(x: &(Float, Float), y: &(Float, Float)) -> std::cmp::Ordering {
    use std::cmp::Ordering::Equal;
    match x.0.partial_cmp(&y.0).unwrap_or(Equal) {
        Equal => x.1.partial_cmp(&y.1).unwrap_or(Equal),
        o => o,
    }
}

/// `sum c_k a^k b^(n-k)`, i.e. `b^n p(a/b)`.
fn homogenize(p: &Poly, n: usize, a: &Poly, b: &Poly) -> Poly {
    let mut apow = vec![Poly::one()];
    let mut bpow = vec![Poly::one()];
    for k in 1..=n {
        apow.push(&apow[k - 1] * a);
        bpow.push(&bpow[k - 1] * b);
    }
    let mut acc = Poly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &(&apow[k] * &bpow[n - k]).scale(c);
    }
    acc
}

/// Writes `p = c * p1^d` with `d` maximal and `p1` monic; for `d = 1` the
/// result is `(p, 1, 1)`.
pub fn proper_power_decomposition(p: &Poly) -> Result<(Poly, usize, ExactComplex)> {
    if p.deg() == 0 {
        return Err(Error::Precondition("proper-power decomposition needs a non-constant polynomial".into()));
    }
    let parts = p.squarefree_decomposition();
    let d = parts.iter().fold(0, |g, &(_, k)| gcd(g, k));
    if d == 1 {
        return Ok((p.clone(), 1, ExactComplex::one()));
    }
    let p1 = parts
        .iter()
        .fold(Poly::one(), |acc, (f, k)| &acc * &f.pow((k / d) as u32));
    let c = p.lc();
    if p1.pow(d as u32).scale(&c) != *p {
        return Err(Error::Internal("proper-power decomposition failed to expand back".into()));
    }
    Ok((p1, d, c))
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.to_expr("z"), self.den.to_expr("z"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc{self}")
    }
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_and_monic_denominator() {
        let r = rf("(2*z^2-2)/(2*z+2)");
        assert_eq!(r, RatFunc::from_poly(Poly::from_ints(&[-1, 1])));
        let r = rf("1/(2*z)");
        assert!(r.den().is_monic());
        assert_eq!(r.num(), &Poly::constant("1/2".parse().unwrap()));
    }

    #[test]
    fn composition() {
        assert_eq!(rf("z^2").compose(&rf("z+1")).unwrap(), rf("z^2+2*z+1"));
        assert_eq!(rf("z^3").compose(&rf("z^2")).unwrap().degree(), 6);
        assert!(rf("z").compose(&rf("3")).is_err());
        let t = RatFunc::cayley();
        assert_eq!(t.compose(&rf("1/z")).unwrap(), rf("(1-i*z)/(1+i*z)"));
    }

    #[test]
    fn blaschke_examples() {
        assert!(rf("z^5").is_blaschke_quotient());
        assert!(rf("(z-2)/(1-2*z)").is_blaschke_quotient());
        assert!(!rf("2*z").is_blaschke_quotient());
        assert!(!RatFunc::cayley().compose(&rf("z^3")).unwrap().is_blaschke_quotient());
    }

    #[test]
    fn mobius_and_evaluation() {
        let i = ExactComplex::i();
        let t = RatFunc::mobius(&1.into(), &-&i, &1.into(), &i).unwrap();
        assert_eq!(t, rf("(z-i)/(z+i)"));
        assert_eq!(t.eval_exact(&ExactComplex::zero()), Some(ExactComplex::from_int(-1)));
        assert_eq!(t.eval_exact(&ExactComplex::one()), Some(-&i));
        assert_eq!(t.eval_exact(&-&i), None);
        assert_eq!(
            RatFunc::mobius(&1.into(), &2.into(), &2.into(), &4.into()),
            Err(Error::DegenerateMobius)
        );
        let v = t.evaluate(&Complex::with_val(64, (0, -1)));
        assert!(v.is_infinite());
    }

    #[test]
    fn pole_multiplicities_from_exact_decomposition() {
        let p = rf("(z^2+1)/(z*(z-1)^2)");
        let poles = p.poles_with_multiplicity(128).unwrap();
        assert_eq!(poles.len(), 2);
        assert_eq!(poles[0].1, 1);
        assert_eq!(poles[1].1, 2);
        let one = poles[1].0.clone().finite().unwrap();
        assert!(Complex::with_val(128, &one - 1u32).abs().real().to_f64() < 1e-30);
        assert_eq!(rf("z^3").poles_with_multiplicity(64).unwrap(), vec![(Extended::Infinity, 3)]);
        assert_eq!(rf("1/z^2").pole_multiplicities(), vec![2]);
    }

    #[test]
    fn proper_powers() {
        let (p1, d, c) = proper_power_decomposition(&Poly::from_ints(&[1, 0, 2, 0, 1])).unwrap();
        assert_eq!((p1, d, c), (Poly::from_ints(&[1, 0, 1]), 2, ExactComplex::one()));
        let (p1, d, _) = proper_power_decomposition(&Poly::monomial(1.into(), 6)).unwrap();
        assert_eq!((p1, d), (Poly::z(), 6));
        let p = Poly::from_ints(&[0, 1, 1]);
        assert_eq!(proper_power_decomposition(&p).unwrap(), (p, 1, ExactComplex::one()));
        let (_, d, c) = proper_power_decomposition(&Poly::from_ints(&[-8, 12, -6, 1]).scale(&3.into())).unwrap();
        assert_eq!((d, c), (3, ExactComplex::from_int(3)));
    }

    #[test]
    fn canonical_text_round_trip() {
        let t = RatFunc::cayley();
        assert_eq!(t.to_string(), "(z-i)/(z+i)");
        assert_eq!(rf(&t.to_string()), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<RatFunc>(&json).unwrap(), t);
    }
}
