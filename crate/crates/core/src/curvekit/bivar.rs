//! Bivariate polynomials stored as polynomials in `z` with coefficients in `K[w]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;
use crate::ratfunc::Poly;

/// `rows[j]` is the coefficient of `z^j`, a polynomial in `w`. Trailing zero
/// rows are trimmed, so the last row is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    rows: Vec<Poly>,
}

impl BivarPoly {
    pub fn from_rows(mut rows: Vec<Poly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BivarPoly { rows }
    }

    /// From a coefficient matrix, `m[j][k]` multiplying `z^j w^k`.
    pub fn from_matrix(m: Vec<Vec<ExactComplex>>) -> Self {
        Self::from_rows(m.into_iter().map(Poly::new).collect())
    }

    pub fn zero() -> Self {
        BivarPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactComplex::one())
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::from_rows(vec![Poly::constant(c)])
    }

    /// `c z^j w^k`.
    pub fn monomial(c: ExactComplex, j: usize, k: usize) -> Self {
        let mut rows = vec![Poly::zero(); j + 1];
        rows[j] = Poly::monomial(c, k);
        Self::from_rows(rows)
    }

    pub fn z() -> Self {
        Self::monomial(ExactComplex::one(), 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(ExactComplex::one(), 0, 1)
    }

    /// `p(z)` viewed as a bivariate polynomial.
    pub fn from_z_poly(p: &Poly) -> Self {
        Self::from_rows(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    /// `p(w)` viewed as a bivariate polynomial.
    pub fn from_w_poly(p: &Poly) -> Self {
        Self::from_rows(vec![p.clone()])
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.rows.len() <= 1 && self.rows.first().is_none_or(|r| r.is_constant())
    }

    pub fn deg_z(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_w(&self) -> usize {
        self.rows.iter().map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.deg_z(), self.deg_w())
    }

    pub fn total_degree(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, r)| j + r.deg())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, j: usize, k: usize) -> ExactComplex {
        self.rows.get(j).map(|r| r.coeff(k)).unwrap_or_default()
    }

    /// Dense coefficient matrix of shape `(deg_z + 1) x (deg_w + 1)`.
    pub fn matrix(&self) -> Vec<Vec<ExactComplex>> {
        let cols = self.deg_w() + 1;
        if self.is_zero() {
            return vec![vec![ExactComplex::zero()]];
        }
        self.rows
            .iter()
            .map(|r| (0..cols).map(|k| r.coeff(k)).collect())
            .collect()
    }

    /// Leading coefficient in `z`, a polynomial in `w`.
    pub fn lc_z(&self) -> Poly {
        self.rows.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        Self::from_rows(self.rows.iter().map(|r| r.scale(c)).collect())
    }

    pub fn mul_w_poly(&self, p: &Poly) -> Self {
        Self::from_rows(self.rows.iter().map(|r| r * p).collect())
    }

    /// Multiplication by `z^s`.
    pub fn shift_z(&self, s: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut rows = vec![Poly::zero(); s];
        rows.extend(self.rows.iter().cloned());
        BivarPoly { rows }
    }

    pub fn conj(&self) -> Self {
        BivarPoly {
            rows: self.rows.iter().map(|r| r.conj()).collect(),
        }
    }

    /// Swaps the roles of `z` and `w`.
    pub fn transpose(&self) -> Self {
        let m = self.matrix();
        let (r, c) = (m.len(), m[0].len());
        Self::from_matrix((0..c).map(|k| (0..r).map(|j| m[j][k].clone()).collect()).collect())
    }

    /// `coeff[j][k] = conj(coeff[k][j])` for all `j, k`.
    pub fn is_hermitian(&self) -> bool {
        *self == self.conj().transpose()
    }

    /// Every coefficient fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.rows.iter().all(|r| r.coeffs().iter().all(|c| c.is_real()))
    }

    pub fn derivative_z(&self) -> Self {
        Self::from_rows(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(&ExactComplex::from_int(j as i64)))
                .collect(),
        )
    }

    pub fn derivative_w(&self) -> Self {
        Self::from_rows(self.rows.iter().map(|r| r.derivative()).collect())
    }

    /// `F(z0, w)` as a polynomial in `w`.
    pub fn eval_z(&self, z0: &ExactComplex) -> Poly {
        let mut acc = Poly::zero();
        for r in self.rows.iter().rev() {
            acc = &acc.scale(z0) + r;
        }
        acc
    }

    /// `F(z, w0)` as a polynomial in `z`.
    pub fn eval_w(&self, w0: &ExactComplex) -> Poly {
        Poly::new(self.rows.iter().map(|r| r.eval(w0)).collect())
    }

    pub fn eval(&self, z: &ExactComplex, w: &ExactComplex) -> ExactComplex {
        self.eval_w(w).eval(z)
    }

    /// Complex coefficient matrix, `m[j][k]` for `z^j w^k`.
    pub fn to_complex_matrix(&self, prec: u32) -> Vec<Vec<Complex>> {
        self.rows.iter().map(|r| r.to_complex_coeffs(prec)).collect()
    }

    pub fn eval_complex(&self, z: &Complex, w: &Complex) -> Complex {
        let prec = z.prec().0.max(w.prec().0);
        let mut acc = Complex::new(prec);
        for r in self.rows.iter().rev() {
            acc *= z;
            acc += horner_at(r, w, prec);
        }
        acc
    }

    /// Substitutes `z = x + i y`, `w = x - i y`; the result is in `(x, y)`.
    pub fn substitute_real_coordinates(&self) -> Self {
        let i = ExactComplex::i();
        let zp = &Self::z() + &Self::w().scale(&i);
        let wp = &Self::z() - &Self::w().scale(&i);
        let mut zpow = vec![Self::one()];
        for j in 1..=self.deg_z() {
            zpow.push(&zpow[j - 1] * &zp);
        }
        let mut wpow = vec![Self::one()];
        for k in 1..=self.deg_w() {
            wpow.push(&wpow[k - 1] * &wp);
        }
        let mut acc = Self::zero();
        for (j, r) in self.rows.iter().enumerate() {
            for (k, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(&zpow[j] * &wpow[k]).scale(c);
                }
            }
        }
        acc
    }

    /// Positive rational content: gcd of all component numerators over
    /// the lcm of all component denominators.
    pub fn rational_content(&self) -> Rational {
        let mut g = Integer::new();
        let mut l = Integer::from(1);
        for r in &self.rows {
            for c in r.coeffs() {
                g.gcd_mut(&c.numerator_gcd());
                l.lcm_mut(&c.denominator_lcm());
            }
        }
        if g == 0 {
            return Rational::from(1);
        }
        Rational::from((g, l))
    }

    /// Divides out the positive rational content.
    pub fn primitive_rational(&self) -> Self {
        let c = self.rational_content();
        if c == 1 {
            return self.clone();
        }
        let inv = Rational::from(c.recip_ref());
        Self::from_rows(
            self.rows
                .iter()
                .map(|r| Poly::new(r.coeffs().iter().map(|x| x.scale_rational(&inv)).collect()))
                .collect(),
        )
    }

    /// The leading coefficient in descending row-major order: the top
    /// coefficient in `w` of the top row in `z`.
    pub fn leading_coeff(&self) -> ExactComplex {
        self.rows.last().map(|r| r.lc()).unwrap_or_default()
    }

    /// Scaled so that [`BivarPoly::leading_coeff`] is 1.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.inv().expect("nonzero leading coefficient"))
    }

    /// Greatest common divisor in `K[w]` of the `z`-coefficients.
    pub fn content_z(&self) -> Poly {
        self.rows.iter().fold(Poly::zero(), |g, r| g.gcd(r))
    }

    pub fn primitive_part_z(&self) -> Self {
        let c = self.content_z();
        if c.deg() == 0 {
            return self.clone();
        }
        Self::from_rows(self.rows.iter().map(|r| r.exact_div(&c).unwrap()).collect())
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &BivarPoly) -> Result<Option<BivarPoly>> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dz = d.deg_z();
        let lc = d.lc_z();
        let mut r = self.clone();
        let mut q = vec![Poly::zero(); self.deg_z().saturating_sub(dz) + 1];
        while !r.is_zero() {
            if r.deg_z() < dz {
                return Ok(None);
            }
            let (t, rem) = r.lc_z().div_rem(&lc)?;
            if !rem.is_zero() {
                return Ok(None);
            }
            let s = r.deg_z() - dz;
            r = &r - &d.mul_w_poly(&t).shift_z(s);
            q[s] = t;
        }
        Ok(Some(Self::from_rows(q)))
    }

    pub fn divides(&self, other: &BivarPoly) -> bool {
        matches!(other.exact_div(self), Ok(Some(_)))
    }

    /// Pseudo-remainder in `z`.
    pub fn prem_z(&self, d: &BivarPoly) -> Self {
        let dz = d.deg_z();
        let lc = d.lc_z();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_z() >= dz {
            let s = r.deg_z() - dz;
            let top = r.lc_z();
            r = &r.mul_w_poly(&lc) - &d.mul_w_poly(&top).shift_z(s);
        }
        r
    }

    /// Resultant in `w`, a polynomial in `z`. Computed from values at
    /// integer points followed by exact Newton interpolation.
    pub fn resultant_w(&self, g: &BivarPoly) -> Poly {
        if self.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let (fz, fw) = self.bidegree();
        let (gz, gw) = g.bidegree();
        if fw == 0 && gw == 0 {
            return Poly::one();
        }
        let bound = fz * gw + gz * fw;
        let lf = self.lc_w_poly();
        let lg = g.lc_w_poly();
        let mut xs = Vec::with_capacity(bound + 1);
        let mut ys = Vec::with_capacity(bound + 1);
        let mut t: i64 = 0;
        while xs.len() <= bound {
            let x = ExactComplex::from_int(t);
            t = if t > 0 { -t } else { 1 - t };
            if lf.eval(&x).is_zero() || lg.eval(&x).is_zero() {
                continue;
            }
            let y = self.eval_z(&x).resultant(&g.eval_z(&x));
            xs.push(x);
            ys.push(y);
        }
        newton_interpolate(&xs, &ys)
    }

    /// Resultant in `z`, a polynomial in `w`.
    pub fn resultant_z(&self, g: &BivarPoly) -> Poly {
        self.transpose().resultant_w(&g.transpose())
    }

    /// Leading coefficient in `w`, as a polynomial in `z`.
    fn lc_w_poly(&self) -> Poly {
        let k = self.deg_w();
        Poly::new(self.rows.iter().map(|r| r.coeff(k)).collect())
    }

    /// Canonical expression text in the given variable names.
    pub fn to_expr(&self, x: &str, y: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (j, r) in self.rows.iter().enumerate().rev() {
            for (k, c) in r.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mut mono = Vec::new();
                match j {
                    0 => {}
                    1 => mono.push(x.to_string()),
                    _ => mono.push(format!("{x}^{j}")),
                }
                match k {
                    0 => {}
                    1 => mono.push(y.to_string()),
                    _ => mono.push(format!("{y}^{k}")),
                }
                let mono = mono.join("*");
                let text = c.to_string();
                let single = !text[1..].contains(['+', '-']);
                let term = if mono.is_empty() {
                    if single { text } else { format!("({text})") }
                } else if c.is_one() {
                    mono
                } else if (-c).is_one() {
                    format!("-{mono}")
                } else if single {
                    format!("{text}*{mono}")
                } else {
                    format!("({text})*{mono}")
                };
                if !out.is_empty() && !term.starts_with('-') {
                    out.push('+');
                }
                out.push_str(&term);
            }
        }
        out
    }
}

fn horner_at(p: &Poly, w: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for c in p.coeffs().iter().rev() {
        acc *= w;
        acc += c.to_complex(prec);
    }
    acc
}

/// Exact Newton interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn newton_interpolate(xs: &[ExactComplex], ys: &[ExactComplex]) -> Poly {
    let n = xs.len();
    let mut dd: Vec<ExactComplex> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            if num.is_zero() {
                dd[i] = num;
                continue;
            }
            let den = &xs[i] - &xs[i - level];
            dd[i] = num.checked_div(&den).expect("distinct nodes");
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &Poly::new(vec![-&xs[i], ExactComplex::one()])) + &Poly::constant(dd[i].clone());
    }
    acc
}

impl<'a> Add<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn add(self, o: &BivarPoly) -> BivarPoly {
        let n = self.rows.len().max(o.rows.len());
        BivarPoly::from_rows(
            (0..n)
                .map(|j| match (self.rows.get(j), o.rows.get(j)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn sub(self, o: &BivarPoly) -> BivarPoly {
        self + &(-o)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            rows: self.rows.iter().map(|r| -r).collect(),
        }
    }
}

impl<'a> Mul<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn mul(self, o: &BivarPoly) -> BivarPoly {
        if self.is_zero() || o.is_zero() {
            return BivarPoly::zero();
        }
        let mut rows = vec![Poly::zero(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BivarPoly::from_rows(rows)
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("z", "w"))
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    bidegree: [usize; 2],
    coeff: Vec<Vec<ExactComplex>>,
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (j, k) = self.bidegree();
        Wire {
            bidegree: [j, k],
            coeff: self.matrix(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = Wire::deserialize(d)?;
        if wire.coeff.is_empty() || wire.coeff.iter().any(|r| r.len() != wire.coeff[0].len()) {
            return Err(D::Error::custom("coefficient matrix must be rectangular and nonempty"));
        }
        let p = BivarPoly::from_matrix(wire.coeff);
        let (j, k) = p.bidegree();
        if [j, k] != wire.bidegree {
            return Err(D::Error::custom(format!(
                "bidegree {:?} does not match the trimmed coefficient matrix ({j}, {k})",
                wire.bidegree
            )));
        }
        Ok(p)
    }
}
