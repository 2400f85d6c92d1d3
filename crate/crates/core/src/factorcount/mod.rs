//! Counting absolutely irreducible components of curves `F(z, w) = 0`.

pub mod monodromy;

use serde::Serialize;

use crate::curvekit::{bivariate_gcd, hermitian_numerator, BivarPoly};
use crate::error::{Error, Result};
use crate::ratfunc::{gcd, RatFunc};
use crate::solvekit::roots::squarefree_roots_with;
use crate::solvekit::{sort_points, SolveOptions};

pub use monodromy::{monodromy, Monodromy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "monodromy")]
    Monodromy,
    #[serde(rename = "tp-criterion")]
    TpCriterion,
    #[serde(rename = "composition-witness")]
    CompositionWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCountCertificate {
    pub count: usize,
    pub method: Method,
    /// `["re", "im"]` at 32 significant digits.
    pub branch_points: Vec<[String; 2]>,
    pub loops_traced: usize,
    pub min_fiber_separation: Option<f64>,
    pub precision_bits_used: u32,
    /// Sizes of the monodromy orbits on the generic fiber.
    pub orbit_sizes: Vec<usize>,
    /// Distinct factors depending on `w` alone, split off exactly.
    pub w_only_factors: usize,
    /// False when repeated factors were removed before counting.
    pub squarefree: bool,
    pub seed: Option<u64>,
}

impl FactorCountCertificate {
    fn exact(count: usize, method: Method) -> Self {
        FactorCountCertificate {
            count,
            method,
            branch_points: Vec::new(),
            loops_traced: 0,
            min_fiber_separation: None,
            precision_bits_used: 0,
            orbit_sizes: Vec::new(),
            w_only_factors: 0,
            squarefree: true,
            seed: None,
        }
    }
}

fn digits32(x: &rug::Float) -> String {
    // rug counts significant digits here
    format!("{x:.32e}")
}

/// Number of irreducible factors of `F` over the complex numbers, by
/// monodromy of the fiber over a seeded base point. Repeated factors are
/// counted once.
pub fn absolute_factor_count(f: &BivarPoly, opts: &SolveOptions) -> Result<FactorCountCertificate> {
    opts.validate()?;
    if f.is_zero() || f.is_constant() {
        return Err(Error::Precondition("factor counting needs a non-constant polynomial".into()));
    }
    let content = f.content_z();
    let w_only = if content.deg() > 0 {
        content.squarefree_part().deg()
    } else {
        0
    };
    let prim = f.primitive_part_z();
    let mut cert = FactorCountCertificate::exact(w_only, Method::Monodromy);
    cert.w_only_factors = w_only;
    cert.seed = Some(opts.seed);
    cert.precision_bits_used = opts.precision_bits;
    if prim.deg_z() == 0 {
        return Ok(cert);
    }
    let g = bivariate_gcd(&prim, &prim.derivative_z());
    let sq = if g.is_constant() {
        prim
    } else {
        cert.squarefree = false;
        prim.exact_div(&g)?
            .ok_or_else(|| Error::Internal("gcd with the derivative does not divide".into()))?
    };
    if content.squarefree_decomposition().iter().any(|(_, k)| *k > 1) {
        cert.squarefree = false;
    }
    if sq.deg_z() == 1 {
        cert.count += 1;
        cert.orbit_sizes = vec![1];
        return Ok(cert);
    }

    let disc = &sq.resultant_z(&sq.derivative_z()) * &sq.lc_z();
    let disc_sf = disc.squarefree_part();
    let (branch, bits) = if disc_sf.deg() > 0 {
        squarefree_roots_with(&disc_sf, opts.precision_bits, opts.max_precision_bits)?
    } else {
        (Vec::new(), opts.precision_bits)
    };
    let m = monodromy(&sq, &disc, &branch, opts.seed, opts.max_precision_bits)?;
    if !m.is_consistent() {
        return Err(Error::Indeterminate {
            precision_bits: m.tracking_bits,
            reason: "loop permutations do not compose to the inverse of the loop at infinity".into(),
        });
    }
    let orbits = m.orbits();
    cert.count += orbits.len();
    cert.orbit_sizes = orbits;
    let mut sorted = branch.clone();
    sort_points(&mut sorted);
    cert.branch_points = sorted.iter().map(|b| [digits32(b.real()), digits32(b.imag())]).collect();
    cert.loops_traced = m.loops.len() + 1;
    cert.min_fiber_separation = Some(m.min_fiber_separation);
    cert.precision_bits_used = bits.max(m.tracking_bits);
    Ok(cert)
}

/// Irreducibility of `E_{P,Q}` when `gcd(q_1, ..., q_l, deg P) = 1` over the
/// pole multiplicities `q_i` of `Q`, infinity included. `None` means the
/// criterion does not apply, which is not a claim of reducibility.
pub fn certify_irreducible_tp(p: &RatFunc, q: &RatFunc) -> Result<Option<FactorCountCertificate>> {
    if !p.is_polynomial() || p.is_constant() {
        return Err(Error::Precondition(format!("{p} is not a non-constant polynomial")));
    }
    if q.is_constant() {
        return Err(Error::Precondition("Q must be non-constant".into()));
    }
    let g = q.pole_multiplicities().into_iter().fold(p.degree(), gcd);
    Ok((g == 1).then(|| FactorCountCertificate::exact(1, Method::TpCriterion)))
}

/// Constructive reducibility of `L_P` for `P = B ∘ W`: `𝓔_W` divides `𝓔_P`.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionWitness {
    pub p: RatFunc,
    pub factor: BivarPoly,
    pub cofactor: BivarPoly,
    pub certificate: FactorCountCertificate,
}

pub fn composition_reducibility_witness(b: &RatFunc, w: &RatFunc) -> Result<CompositionWitness> {
    if b.degree() < 2 {
        return Err(Error::Precondition("the outer function must have degree at least two".into()));
    }
    if !b.is_blaschke_quotient() {
        return Err(Error::Precondition(format!("{b} is not a quotient of Blaschke products")));
    }
    let p = b.compose(w)?;
    let factor = hermitian_numerator(w)?;
    let ep = hermitian_numerator(&p)?;
    let cofactor = ep
        .exact_div(&factor)?
        .ok_or_else(|| Error::Internal("𝓔_W does not divide 𝓔_P".into()))?;
    Ok(CompositionWitness {
        p,
        factor,
        cofactor,
        certificate: FactorCountCertificate::exact(2, Method::CompositionWitness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn count(f: &BivarPoly) -> usize {
        absolute_factor_count(f, &SolveOptions::default()).unwrap().count
    }

    #[test]
    fn small_counts() {
        let zw1 = hermitian_numerator(&rf("z")).unwrap();
        assert_eq!(count(&zw1), 1);
        let z2w2 = hermitian_numerator(&rf("z^2")).unwrap();
        assert_eq!(count(&z2w2), 2);
        let m = monodromy::monodromy(
            &z2w2,
            &(&z2w2.resultant_z(&z2w2.derivative_z()) * &z2w2.lc_z()),
            &[rug::Complex::new(128)],
            0,
            4096,
        )
        .unwrap();
        assert!(m.is_consistent());
    }

    #[test]
    fn tp_examples() {
        assert!(certify_irreducible_tp(&rf("z^2"), &rf("1/z")).unwrap().is_some());
        assert!(certify_irreducible_tp(&rf("z^2"), &rf("1/z^2")).unwrap().is_none());
        assert!(certify_irreducible_tp(&rf("z^3+z"), &rf("(z^2+1)/(z*(z-1)^2)")).unwrap().is_some());
        assert!(certify_irreducible_tp(&rf("1/z"), &rf("z")).is_err());
    }

    #[test]
    fn witness_examples() {
        let w = composition_reducibility_witness(&rf("z^2"), &rf("z")).unwrap();
        assert_eq!(w.factor.to_string(), "z*w-1");
        let w = composition_reducibility_witness(&rf("z^2"), &rf("z+1")).unwrap();
        assert_eq!(&w.factor * &w.cofactor, hermitian_numerator(&w.p).unwrap());
        assert!(composition_reducibility_witness(&RatFunc::cayley(), &rf("z")).is_err());
    }
}
