//! Lemniscate intersection counting and the real Bézout check.

pub mod roots;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde::{Serialize, Serializer};

use crate::curvekit::{bivariate_gcd, hermitian_numerator, BivarPoly};
use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;
use crate::ratfunc::{Extended, Poly, RatFunc};

pub use roots::{univariate_roots, DEFAULT_PRECISION, MAX_PRECISION};

/// Precision, tolerance and randomness for the numeric stages.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    /// Overrides the default tolerance `2^(-precision/2)`.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            precision_bits: DEFAULT_PRECISION,
            max_precision_bits: MAX_PRECISION,
            tol: None,
            seed: 0,
        }
    }
}

impl SolveOptions {
    pub fn with_precision(precision_bits: u32) -> Self {
        SolveOptions {
            precision_bits,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 53 {
            return Err(Error::InvalidInput("precision must be at least 53 bits".into()));
        }
        if self.max_precision_bits < self.precision_bits {
            return Err(Error::InvalidInput("maximal precision is below the starting precision".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput("tolerance must be positive".into()));
            }
        }
        Ok(())
    }

    /// Tolerance at the given precision.
    pub fn tol_at(&self, prec: u32) -> Float {
        match self.tol {
            Some(t) => Float::with_val(prec + 64, t),
            None => Float::with_val(prec + 64, 1) >> (prec / 2) as i32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Finite,
    Infinite,
    Indeterminate,
    Falsification,
}

/// Outcome of an intersection count on the anti-diagonal `w = conj z`.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub status: Status,
    pub infinite: bool,
    pub common_component: Option<BivarPoly>,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex>,
    pub count: usize,
    pub bound: usize,
    pub min_separation: Option<f64>,
    pub precision_bits_used: u32,
    /// Möbius change of variable applied before solving, if any.
    pub normalization: Option<String>,
    pub falsification: Option<String>,
    pub diagnostics: Vec<String>,
}

impl IntersectionReport {
    fn infinite(gcd: BivarPoly, bound: usize, prec: u32) -> Self {
        IntersectionReport {
            status: Status::Infinite,
            infinite: true,
            common_component: Some(gcd),
            points: Vec::new(),
            count: 0,
            bound,
            min_separation: None,
            precision_bits_used: prec,
            normalization: None,
            falsification: None,
            diagnostics: Vec::new(),
        }
    }

    fn indeterminate(bound: usize, prec: u32, reason: String) -> Self {
        IntersectionReport {
            status: Status::Indeterminate,
            infinite: false,
            common_component: None,
            points: Vec::new(),
            count: 0,
            bound,
            min_separation: None,
            precision_bits_used: prec,
            normalization: None,
            falsification: None,
            diagnostics: vec![reason],
        }
    }

    fn finite(points: Vec<Complex>, bound: usize, prec: u32) -> Self {
        let count = points.len();
        let falsification = (count > bound)
            .then(|| format!("{count} isolated common points exceed the bound {bound}"));
        IntersectionReport {
            status: if falsification.is_some() {
                Status::Falsification
            } else {
                Status::Finite
            },
            infinite: false,
            common_component: None,
            min_separation: min_separation(&points),
            points,
            count,
            bound,
            precision_bits_used: prec,
            normalization: None,
            falsification,
            diagnostics: Vec::new(),
        }
    }
}

/// Decimal digits matching a binary precision.
pub fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// `["re", "im"]` in scientific notation with digits matching the precision.
pub fn complex_strings(c: &Complex) -> [String; 2] {
    let d = digits_for(c.prec().0).max(1);
    [format!("{:.*e}", d, c.real()), format!("{:.*e}", d, c.imag())]
}

fn ser_points<S: Serializer>(points: &[Complex], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(points.iter().map(complex_strings))
}

fn abs(c: &Complex) -> Float {
    Float::with_val(c.prec().0, c.abs_ref())
}

fn dist(a: &Complex, b: &Complex) -> Float {
    abs(&Complex::with_val(a.prec().0.max(b.prec().0), a - b))
}

fn min_separation(points: &[Complex]) -> Option<f64> {
    let mut best: Option<Float> = None;
    for i in 0..points.len() {
        for j in 0..i {
            let d = dist(&points[i], &points[j]);
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    }
    best.map(|b| b.to_f64())
}

/// Orders points by real then imaginary part.
pub fn sort_points(points: &mut [Complex]) {
    points.sort_by(|a, b| {
        a.real()
            .partial_cmp(b.real())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.imag().partial_cmp(b.imag()).unwrap_or(std::cmp::Ordering::Equal))
    });
}

#[derive(PartialEq)]
enum Verdict {
    Accept,
    Ambiguous,
    Reject,
}

fn classify(r: &Float, tol: &Float, loose: &Float) -> Verdict {
    if r < tol {
        Verdict::Accept
    } else if r < loose {
        Verdict::Ambiguous
    } else {
        Verdict::Reject
    }
}

struct Solved {
    points: Vec<Complex>,
    prec: u32,
}

/// Common solutions of `F = G = 0` with `w = conj z`, found as roots of
/// `Res_w(F, G)` and screened by `residuals`. Each residual is compared
/// with `tol`; values between `tol` and `sqrt(tol)` trigger escalation.
fn solve_on_antidiagonal(
    f: &BivarPoly,
    g: &BivarPoly,
    opts: &SolveOptions,
    residuals: &dyn Fn(&Complex) -> [Float; 2],
) -> Result<Solved> {
    let r = f.resultant_w(g);
    if r.is_zero() {
        return Err(Error::Internal("eliminant vanishes identically without a common component".into()));
    }
    let factors: Vec<Poly> = r.squarefree_decomposition().into_iter().map(|(p, _)| p).collect();
    let mut prec = opts.precision_bits;
    loop {
        match attempt(&factors, prec, opts, residuals) {
            Ok(points) => return Ok(Solved { points, prec }),
            Err(reason) if prec >= opts.max_precision_bits => {
                return Err(Error::Indeterminate {
                    precision_bits: prec,
                    reason,
                })
            }
            Err(_) => prec = (prec * 2).min(opts.max_precision_bits),
        }
    }
}

fn attempt(
    factors: &[Poly],
    prec: u32,
    opts: &SolveOptions,
    residuals: &dyn Fn(&Complex) -> [Float; 2],
) -> std::result::Result<Vec<Complex>, String> {
    let tol = opts.tol_at(prec);
    let loose = Float::with_val(tol.prec(), tol.sqrt_ref());
    let mut kept = Vec::new();
    for p in factors {
        let (rs, _) = roots::squarefree_roots_with(p, prec, prec).map_err(|e| e.to_string())?;
        for z in rs {
            let z = Complex::with_val(prec + 64, &z);
            let res = residuals(&z);
            let v: Vec<Verdict> = res.iter().map(|r| classify(r, &tol, &loose)).collect();
            if v.contains(&Verdict::Reject) {
                continue;
            }
            if v.contains(&Verdict::Ambiguous) {
                return Err(format!("candidate {:?} is ambiguous at {prec} bits", complex_strings(&z)));
            }
            kept.push(z);
        }
    }
    let gap = Float::with_val(tol.prec(), &tol * 10u32);
    for i in 0..kept.len() {
        for j in 0..i {
            if dist(&kept[i], &kept[j]) < gap {
                return Err(format!("two solutions closer than 10*tol at {prec} bits"));
            }
        }
    }
    Ok(kept)
}

/// `| |Q(z)| - 1 |` from precomputed complex coefficients; infinite at poles.
fn modulus_defect(num: &[Complex], den: &[Complex], z: &Complex) -> Float {
    let prec = z.prec().0;
    let d = abs(&roots_horner(den, z));
    if d.is_zero() {
        return Float::with_val(prec, rug::float::Special::Infinity);
    }
    let n = abs(&roots_horner(num, z));
    let mut q = n / d;
    q -= 1u32;
    q.abs()
}

fn roots_horner(c: &[Complex], z: &Complex) -> Complex {
    crate::ratfunc::poly::horner(c, z)
}

fn has_unimodular_value_at_infinity(p: &RatFunc) -> bool {
    p.value_at_infinity().is_some_and(|v| v.abs_sq().is_one())
}

fn unimodular_at(p: &RatFunc, x: &ExactComplex) -> bool {
    p.eval_exact(x).is_some_and(|v| v.abs_sq().is_one())
}

/// A Möbius map `mu` with finite `mu(inf)` off both lemniscates.
fn seeded_mobius(p1: &RatFunc, p2: &RatFunc, seed: u64) -> Result<RatFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = |rng: &mut ChaCha8Rng| ExactComplex::gaussian_int(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
    for _ in 0..1000 {
        let (a, b, c, d) = (g(&mut rng), g(&mut rng), g(&mut rng), g(&mut rng));
        if c.is_zero() {
            continue;
        }
        let at_inf = &a / &c;
        if unimodular_at(p1, &at_inf) || unimodular_at(p2, &at_inf) {
            continue;
        }
        if let Ok(m) = RatFunc::mobius(&a, &b, &c, &d) {
            return Ok(m);
        }
    }
    Err(Error::SearchExhausted("no admissible Möbius normalization found".into()))
}

/// Counts `#{z in C : |P1(z)| = |P2(z)| = 1}` or certifies it infinite.
pub fn lemniscate_intersections(p1: &RatFunc, p2: &RatFunc, opts: &SolveOptions) -> Result<IntersectionReport> {
    opts.validate()?;
    let e1 = hermitian_numerator(p1)?;
    let e2 = hermitian_numerator(p2)?;
    let bound = 2 * p1.degree() * p2.degree();
    let g = bivariate_gcd(&e1, &e2);
    if !g.is_constant() {
        return Ok(IntersectionReport::infinite(g, bound, opts.precision_bits));
    }

    let mu = if has_unimodular_value_at_infinity(p1) || has_unimodular_value_at_infinity(p2) {
        Some(seeded_mobius(p1, p2, opts.seed)?)
    } else {
        None
    };
    let (q1, q2) = match &mu {
        Some(m) => (p1.compose(m)?, p2.compose(m)?),
        None => (p1.clone(), p2.clone()),
    };
    let (f, g) = match &mu {
        Some(_) => (hermitian_numerator(&q1)?, hermitian_numerator(&q2)?),
        None => (e1, e2),
    };

    let cache = std::cell::RefCell::new(None::<(u32, [Vec<Complex>; 4])>);
    let residuals = |z: &Complex| -> [Float; 2] {
        let prec = z.prec().0;
        let mut c = cache.borrow_mut();
        if c.as_ref().is_none_or(|(p, _)| *p != prec) {
            *c = Some((
                prec,
                [
                    q1.num().to_complex_coeffs(prec),
                    q1.den().to_complex_coeffs(prec),
                    q2.num().to_complex_coeffs(prec),
                    q2.den().to_complex_coeffs(prec),
                ],
            ));
        }
        let k = &c.as_ref().unwrap().1;
        [modulus_defect(&k[0], &k[1], z), modulus_defect(&k[2], &k[3], z)]
    };

    let solved = match solve_on_antidiagonal(&f, &g, opts, &residuals) {
        Ok(s) => s,
        Err(Error::Indeterminate { precision_bits, reason }) => {
            return Ok(IntersectionReport::indeterminate(bound, precision_bits, reason))
        }
        Err(e) => return Err(e),
    };

    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for z in solved.points {
        match &mu {
            None => points.push(z),
            Some(m) => match m.evaluate(&z) {
                Extended::Finite(p) => points.push(p),
                Extended::Infinity => diagnostics.push("a common point at infinity was discarded".to_string()),
            },
        }
    }
    let out_prec = solved.prec;
    let mut points: Vec<Complex> = points.into_iter().map(|p| Complex::with_val(out_prec, p)).collect();
    sort_points(&mut points);
    let mut report = IntersectionReport::finite(points, bound, out_prec);
    report.normalization = mu.map(|m| m.to_string());
    report.diagnostics = diagnostics;
    Ok(report)
}

/// Verdict of the real Bézout check.
#[derive(Clone, Debug, Serialize)]
pub struct BezoutReport {
    pub status: Status,
    pub infinite: bool,
    pub common_component: Option<BivarPoly>,
    pub count: usize,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex>,
    pub bound: usize,
    pub precision_bits_used: u32,
    pub falsification: Option<String>,
    pub diagnostics: Vec<String>,
}

/// Counts solutions of `F = G = 0` on `w = conj z` for Hermitian `F, G`
/// against the bound `2 deg_z F deg_z G`.
pub fn real_bezout_check(f: &BivarPoly, g: &BivarPoly, opts: &SolveOptions) -> Result<BezoutReport> {
    opts.validate()?;
    if f.is_zero() || g.is_zero() {
        return Err(Error::Precondition("inputs must be nonzero".into()));
    }
    for (name, h) in [("F", f), ("G", g)] {
        if !is_hermitian_up_to_unit(h) {
            return Err(Error::Precondition(format!("{name} is not Hermitian-symmetric")));
        }
    }
    let bound = 2 * f.deg_z() * g.deg_z();
    let mut report = BezoutReport {
        status: Status::Finite,
        infinite: false,
        common_component: None,
        count: 0,
        points: Vec::new(),
        bound,
        precision_bits_used: opts.precision_bits,
        falsification: None,
        diagnostics: Vec::new(),
    };
    let h = bivariate_gcd(f, g);
    if !h.is_constant() {
        report.status = Status::Infinite;
        report.infinite = true;
        report.common_component = Some(h);
        return Ok(report);
    }
    if f.is_constant() || g.is_constant() {
        return Ok(report);
    }

    let cache = std::cell::RefCell::new(None::<(u32, [Vec<Vec<Complex>>; 2], [Vec<Vec<Float>>; 2])>);
    let residuals = |z: &Complex| -> [Float; 2] {
        let prec = z.prec().0;
        let mut c = cache.borrow_mut();
        if c.as_ref().is_none_or(|(p, _, _)| *p != prec) {
            let m = [f.to_complex_matrix(prec), g.to_complex_matrix(prec)];
            let a = [abs_matrix(&m[0]), abs_matrix(&m[1])];
            *c = Some((prec, m, a));
        }
        let (_, m, a) = c.as_ref().unwrap();
        let w = Complex::with_val(prec, z.conj_ref());
        [relative_value(&m[0], &a[0], z, &w), relative_value(&m[1], &a[1], z, &w)]
    };
    match solve_on_antidiagonal(f, g, opts, &residuals) {
        Ok(s) => {
            let mut points: Vec<Complex> = s.points.into_iter().map(|p| Complex::with_val(s.prec, p)).collect();
            sort_points(&mut points);
            report.count = points.len();
            report.points = points;
            report.precision_bits_used = s.prec;
            if report.count > bound {
                report.status = Status::Falsification;
                report.falsification = Some(format!("{} solutions exceed the bound {bound}", report.count));
            }
        }
        Err(Error::Indeterminate { precision_bits, reason }) => {
            report.status = Status::Indeterminate;
            report.precision_bits_used = precision_bits;
            report.diagnostics.push(reason);
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// `conj(F)(w, z) = lambda F(z, w)` with `|lambda| = 1`, so that a unit
/// multiple of `F` is Hermitian and the zero set on `w = conj z` is the
/// zero set of a Hermitian polynomial.
pub fn is_hermitian_up_to_unit(f: &BivarPoly) -> bool {
    let t = f.conj().transpose();
    let (j, k) = (f.deg_z(), f.rows()[f.deg_z()].deg());
    let Ok(lambda) = t.coeff(j, k).checked_div(&f.coeff(j, k)) else {
        return false;
    };
    lambda.abs_sq().is_one() && f.scale(&lambda) == t
}

fn abs_matrix(m: &[Vec<Complex>]) -> Vec<Vec<Float>> {
    m.iter().map(|r| r.iter().map(abs).collect()).collect()
}

/// `|F(z, w)| / sum |c_jk| |z|^j |w|^k`.
fn relative_value(m: &[Vec<Complex>], a: &[Vec<Float>], z: &Complex, w: &Complex) -> Float {
    let prec = z.prec().0;
    let (rz, rw) = (abs(z), abs(w));
    let mut val = Complex::new(prec);
    let mut scale = Float::new(prec);
    for (row, arow) in m.iter().zip(a).rev() {
        val *= z;
        val += roots_horner(row, w);
        scale *= &rz;
        let mut s = Float::new(prec);
        for x in arow.iter().rev() {
            s *= &rw;
            s += x;
        }
        scale += s;
    }
    if scale.is_zero() {
        return scale;
    }
    abs(&val) / scale
}

/// `| |P(z)| - 1 | < tol`; an error when `z` is within `tol` of a pole.
pub fn on_lemniscate(p: &RatFunc, z: &Complex, tol: f64) -> Result<bool> {
    let prec = z.prec().0.max(64);
    let z = Complex::with_val(prec, z);
    let den = p.den().to_complex_coeffs(prec);
    let d = abs(&roots_horner(&den, &z));
    let dd = abs(&roots_horner(&p.den().derivative().to_complex_coeffs(prec), &z));
    // First-order distance estimate to the nearest zero of the denominator.
    if p.den().deg() > 0 && (d.is_zero() || Float::with_val(prec, &d / &dd) < tol) {
        return Err(Error::Precondition("point lies within tol of a pole".into()));
    }
    let n = abs(&roots_horner(&p.num().to_complex_coeffs(prec), &z));
    let mut q = n / d;
    q -= 1u32;
    Ok(q.abs() < tol)
}
