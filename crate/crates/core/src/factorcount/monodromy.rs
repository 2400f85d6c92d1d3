//! Fiber permutations of `F(z, w) = 0` over loops in the `w`-plane.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Rational};

use crate::curvekit::BivarPoly;
use crate::error::{Error, Result};
use crate::exactfield::ExactComplex;
use crate::ratfunc::poly::horner_with_derivative;
use crate::ratfunc::Poly;
use crate::solvekit::roots::{residual_scale, squarefree_roots_with};

const GOLDEN: f64 = 1.618_033_988_749_895;
const CIRCLE_STEPS: usize = 64;
const BASE_CANDIDATES: usize = 24;
const START_BITS: u32 = 64;

/// Loop permutations around every branch point, plus the loop at infinity.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub base_point: ExactComplex,
    pub base_fiber: Vec<Complex>,
    /// Branch points in counter-clockwise order seen from the base point,
    /// starting after the outward ray.
    pub branch_points: Vec<C64>,
    /// `loops[j][i]` is the base-fiber index reached from `i` around branch point `j`.
    pub loops: Vec<Vec<usize>>,
    /// Clockwise loop enclosing all branch points.
    pub loop_at_infinity: Vec<usize>,
    pub min_fiber_separation: f64,
    pub tracking_bits: u32,
}

impl Monodromy {
    /// Number of orbits of the group generated by the loop permutations.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.base_fiber.len();
        let mut uf = UnionFind::<usize>::new(n);
        for perm in &self.loops {
            for (i, &j) in perm.iter().enumerate() {
                uf.union(i, j);
            }
        }
        let labels = uf.into_labeling();
        let mut sizes = std::collections::BTreeMap::new();
        for l in labels {
            *sizes.entry(l).or_insert(0usize) += 1;
        }
        let mut out: Vec<usize> = sizes.into_values().collect();
        out.sort_unstable();
        out
    }

    /// The loops taken in order, followed by the loop at infinity, act
    /// trivially on the fiber.
    pub fn is_consistent(&self) -> bool {
        let n = self.base_fiber.len();
        let mut state: Vec<usize> = (0..n).collect();
        for perm in self.loops.iter().chain(std::iter::once(&self.loop_at_infinity)) {
            for s in state.iter_mut() {
                *s = perm[*s];
            }
        }
        state.iter().enumerate().all(|(i, &s)| i == s)
    }
}

fn to_c64(c: &Complex) -> C64 {
    C64::new(c.real().to_f64(), c.imag().to_f64())
}

fn seg_dist(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

fn dyadic(x: f64) -> Rational {
    Rational::from(((x * (1u64 << 20) as f64).round() as i64, 1u64 << 20))
}

/// Base point on the circle of radius equal to the golden ratio, chosen among
/// seeded candidates to stay clear of branch points and of the segments
/// joining it to them.
fn choose_base(branch: &[C64], disc: &Poly, seed: u64) -> (ExactComplex, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(ExactComplex, f64)> = None;
    for _ in 0..BASE_CANDIDATES {
        let theta = rng.gen::<f64>() * 2.0 * PI;
        let w0 = ExactComplex::gaussian(dyadic(GOLDEN * theta.cos()), dyadic(GOLDEN * theta.sin()));
        if disc.eval(&w0).is_zero() {
            continue;
        }
        let p = w0.to_complex(53);
        let p = to_c64(&p);
        let mut score = branch.iter().map(|b| (b - p).norm()).fold(f64::INFINITY, f64::min);
        for (j, &bj) in branch.iter().enumerate() {
            for (k, &bk) in branch.iter().enumerate() {
                if j != k {
                    score = score.min(seg_dist(bk, p, bj));
                }
            }
        }
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((w0, score));
        }
    }
    best.expect("a base point off the discriminant")
}

struct Tracker {
    /// `a[j][k]` multiplies `z^j w^k`.
    a: Vec<Vec<Complex>>,
    prec: u32,
    branch: Vec<C64>,
}

impl Tracker {
    fn dist_to_branch(&self, w: C64) -> f64 {
        self.branch.iter().map(|b| (b - w).norm()).fold(f64::INFINITY, f64::min)
    }

    fn w_complex(&self, w: C64) -> Complex {
        Complex::with_val(self.prec, (w.re, w.im))
    }

    /// Coefficients in `z` of `F(., w)` and of `F_w(., w)`.
    fn coeffs_at(&self, w: &Complex) -> (Vec<Complex>, Vec<Complex>) {
        let mut c = Vec::with_capacity(self.a.len());
        let mut d = Vec::with_capacity(self.a.len());
        for row in &self.a {
            let (v, dv) = horner_with_derivative(row, w);
            c.push(v);
            d.push(dv);
        }
        (c, d)
    }

    fn separations(z: &[Complex]) -> Vec<f64> {
        let zs: Vec<C64> = z.iter().map(to_c64).collect();
        (0..zs.len())
            .map(|i| {
                (0..zs.len())
                    .filter(|&j| j != i)
                    .map(|j| (zs[i] - zs[j]).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Newton in `z`; converged once the correction is at working precision
    /// or the residual is at the rounding level of the evaluation.
    fn newton(&self, c: &[Complex], z: &mut Complex) -> bool {
        let eps = Float::with_val(self.prec, 1) >> (self.prec as i32 - 12);
        let noise = Float::with_val(self.prec, 1) >> (self.prec as i32 - 8);
        let abs: Vec<Float> = c.iter().map(|x| Float::with_val(self.prec, x.abs_ref())).collect();
        for k in 0..16 {
            let (f, df) = horner_with_derivative(c, z);
            if k > 0 && Float::with_val(self.prec, f.abs_ref()) <= residual_scale(&abs, z) * c.len() as u32 * &noise {
                return true;
            }
            if df.is_zero() {
                return false;
            }
            let dz = Complex::with_val(self.prec, &f / &df);
            *z -= &dz;
            let size = Float::with_val(self.prec, z.abs_ref()).max(&Float::with_val(self.prec, 1));
            if Float::with_val(self.prec, dz.abs_ref()) <= size * &eps {
                return true;
            }
        }
        false
    }

    /// Continues the fiber `z` along the polyline `path`.
    fn track(&self, z: &mut Vec<Complex>, path: &[C64], min_sep: &mut f64) -> std::result::Result<(), String> {
        let mut h = f64::INFINITY;
        for pair in path.windows(2) {
            let (mut cur, target) = (pair[0], pair[1]);
            let mut cur_c = self.w_complex(cur);
            let (mut c, mut d) = self.coeffs_at(&cur_c);
            while cur != target {
                let remaining = (target - cur).norm();
                let cap = 0.3 * self.dist_to_branch(cur);
                let scale = 1.0 + cur.norm();
                h = h.min(cap);
                if h < 1e-13 * scale {
                    return Err(format!("step size underflow near w = {cur}"));
                }
                let next = if h >= remaining { target } else { cur + (target - cur) * (h / remaining) };
                let next_c = self.w_complex(next);
                let dw = Complex::with_val(self.prec, &next_c - &cur_c);
                let sep = Self::separations(z);
                let (c2, d2) = self.coeffs_at(&next_c);
                let mut ok = true;
                let mut moved = Vec::with_capacity(z.len());
                for (i, zi) in z.iter().enumerate() {
                    let (_, fz) = horner_with_derivative(&c, zi);
                    let fw = crate::ratfunc::poly::horner(&d, zi);
                    if fz.is_zero() {
                        ok = false;
                        break;
                    }
                    let slope = Complex::with_val(self.prec, &fw / &fz);
                    let pred = Complex::with_val(self.prec, zi - Complex::with_val(self.prec, &slope * &dw));
                    let mut corr = pred.clone();
                    if !self.newton(&c2, &mut corr) {
                        ok = false;
                        break;
                    }
                    let jump = (to_c64(&corr) - to_c64(zi)).norm();
                    let miss = (to_c64(&corr) - to_c64(&pred)).norm();
                    if !(jump < sep[i] / 3.0 && miss < sep[i] / 8.0) {
                        ok = false;
                        break;
                    }
                    moved.push(corr);
                }
                if !ok {
                    h /= 2.0;
                    continue;
                }
                *z = moved;
                let fiber_sep = Self::separations(z).into_iter().fold(f64::INFINITY, f64::min);
                *min_sep = min_sep.min(fiber_sep);
                cur = next;
                cur_c = next_c;
                (c, d) = (c2, d2);
                h *= 2.0;
            }
        }
        Ok(())
    }
}

/// Permutation taking base-fiber index `i` to the index nearest `end[i]`.
fn match_fibers(base: &[Complex], end: &[Complex]) -> std::result::Result<Vec<usize>, String> {
    let b: Vec<C64> = base.iter().map(to_c64).collect();
    let sep = Tracker::separations(base).into_iter().fold(f64::INFINITY, f64::min);
    let mut perm = Vec::with_capacity(end.len());
    let mut used = vec![false; b.len()];
    for e in end.iter().map(to_c64) {
        let (k, d) = b
            .iter()
            .enumerate()
            .map(|(k, x)| (k, (x - e).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if d >= sep / 4.0 || used[k] {
            return Err("end fiber does not match the base fiber".into());
        }
        used[k] = true;
        perm.push(k);
    }
    Ok(perm)
}

fn circle(center: C64, radius: f64, start_angle: f64, clockwise: bool) -> Vec<C64> {
    let sign = if clockwise { -1.0 } else { 1.0 };
    (0..=CIRCLE_STEPS)
        .map(|m| {
            let t = start_angle + sign * 2.0 * PI * m as f64 / CIRCLE_STEPS as f64;
            if m == CIRCLE_STEPS {
                center + C64::from_polar(radius, start_angle)
            } else {
                center + C64::from_polar(radius, t)
            }
        })
        .collect()
}

/// Monodromy of a square-free `F` with `deg_z F >= 1`, no factor free of
/// `z`, and discriminant `disc` whose distinct roots are `branch`.
pub fn monodromy(f: &BivarPoly, disc: &Poly, branch: &[Complex], seed: u64, max_bits: u32) -> Result<Monodromy> {
    let bc: Vec<C64> = branch.iter().map(to_c64).collect();
    let (w0, _) = choose_base(&bc, disc, seed);
    let p0 = to_c64(&w0.to_complex(53));

    // Loop order: counter-clockwise from the outward ray, which bisects the
    // widest angular gap between branch directions.
    let mut order: Vec<usize> = (0..bc.len()).collect();
    let angle = |b: C64| (b - p0).arg().rem_euclid(2.0 * PI);
    order.sort_by(|&i, &j| angle(bc[i]).total_cmp(&angle(bc[j])));
    let out_angle = if order.is_empty() {
        0.0
    } else {
        let mut best = (0.0, 0.0);
        for (k, &i) in order.iter().enumerate() {
            let a = angle(bc[i]);
            let next = if k + 1 < order.len() { angle(bc[order[k + 1]]) } else { angle(bc[order[0]]) + 2.0 * PI };
            if next - a > best.0 {
                best = (next - a, a + (next - a) / 2.0);
            }
        }
        best.1
    };
    order.sort_by(|&i, &j| {
        let ki = (angle(bc[i]) - out_angle).rem_euclid(2.0 * PI);
        let kj = (angle(bc[j]) - out_angle).rem_euclid(2.0 * PI);
        ki.total_cmp(&kj)
    });
    let bc: Vec<C64> = order.iter().map(|&i| bc[i]).collect();

    let radii: Vec<f64> = (0..bc.len())
        .map(|k| {
            let mut r = 0.5 * (bc[k] - p0).norm();
            for j in 0..bc.len() {
                if j != k {
                    r = r.min(0.25 * (bc[k] - bc[j]).norm());
                    r = r.min(0.5 * seg_dist(bc[k], p0, bc[j]));
                }
            }
            r
        })
        .collect();

    let mut paths: Vec<Vec<C64>> = Vec::new();
    for (k, &b) in bc.iter().enumerate() {
        let dir = (p0 - b) / (p0 - b).norm();
        let mut path = vec![p0];
        path.extend(circle(b, radii[k], dir.arg(), false));
        path.push(p0);
        paths.push(path);
    }
    let big_r = 2.0 * bc.iter().map(|b| (b - p0).norm()).fold(0.0, f64::max) + 1.0;
    let mut inf_path = vec![p0];
    inf_path.extend(circle(p0, big_r, out_angle, true));
    inf_path.push(p0);

    let (fiber, _) = squarefree_roots_with(&f.eval_w(&w0), 128, max_bits.max(128))?;
    let mut bits = START_BITS;
    let mut min_sep = Tracker::separations(&fiber).into_iter().fold(f64::INFINITY, f64::min);
    let mut perms: Vec<Option<Vec<usize>>> = vec![None; paths.len() + 1];
    loop {
        let tracker = Tracker {
            a: f.to_complex_matrix(bits),
            prec: bits,
            branch: bc.clone(),
        };
        let base: Vec<Complex> = fiber.iter().map(|z| Complex::with_val(bits, z)).collect();
        let mut failure = None;
        for (k, path) in paths.iter().chain(std::iter::once(&inf_path)).enumerate() {
            if perms[k].is_some() {
                continue;
            }
            let mut z = base.clone();
            let res = tracker
                .track(&mut z, path, &mut min_sep)
                .and_then(|_| match_fibers(&base, &z));
            match res {
                Ok(p) => perms[k] = Some(p),
                Err(e) => {
                    failure = Some(e);
                }
            }
        }
        match failure {
            None => break,
            Some(e) if bits >= max_bits => {
                return Err(Error::Indeterminate {
                    precision_bits: bits,
                    reason: format!("path tracking failed: {e}"),
                })
            }
            Some(_) => bits = (bits * 2).min(max_bits),
        }
    }
    let mut perms: Vec<Vec<usize>> = perms.into_iter().map(|p| p.unwrap()).collect();
    let loop_at_infinity = perms.pop().unwrap();
    Ok(Monodromy {
        base_point: w0,
        base_fiber: fiber,
        branch_points: bc,
        loops: perms,
        loop_at_infinity,
        min_fiber_separation: min_sep,
        tracking_bits: bits,
    })
}
