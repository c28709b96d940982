//! Factorization of bivariate polynomials and plane curves over GF(2^n) and
//! its extensions, with absolute-irreducibility decisions built on it.
//!
//! Trivariate inputs are homogeneous polynomials defining plane projective
//! curves; they are handled through the affine chart z = 1 plus the power of
//! z dividing them.

mod absolute;
mod bivariate;
mod hensel;
mod surface;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_embedding, FieldElement, FieldSpec, MAX_DEGREE};
use crate::mvpoly::{MPoly, Monomial, X, Y, Z};

use bivariate::Bi;

pub use absolute::{
    absolute_factorization, definition_degree, has_reduced_abs_irred_component_over_base, is_absolutely_irreducible,
    AbsoluteFactor, BaseFactor, FactorizationResult,
};
pub use surface::{surface_abs_irred_by_sections, SurfaceVerdict, Verdict};

/// Largest total degree accepted by the factorization routines.
pub const MAX_FACTOR_DEGREE: u32 = 32;

/// A homogeneous trivariate polynomial restricted to the chart `var = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dehomogenized {
    /// Bivariate in the two remaining variables, in their original order.
    pub poly: MPoly,
    pub var: usize,
    /// Power of `var` dividing the input; these factors have no affine trace.
    pub dropped_power: u16,
    pub degree: u32,
}

pub fn dehomogenize(p: &MPoly, var: usize) -> Result<Dehomogenized> {
    if p.nvars() != 3 || !p.is_homogeneous() {
        return Err(Error::Precondition(
            "dehomogenize needs a homogeneous trivariate polynomial".into(),
        ));
    }
    let others: Vec<usize> = (0..3).filter(|&v| v != var).collect();
    let mut map = [None; 3];
    map[others[0]] = Some(X);
    map[others[1]] = Some(Y);
    let poly = p.substitute_value(var, FieldElement::ONE).remap(2, &map);
    Ok(Dehomogenized {
        poly,
        var,
        dropped_power: p.min_degree_in(var),
        degree: p.total_degree().unwrap_or(0),
    })
}

/// Inverse of [`dehomogenize`] for a factor: z^deg * g(x/z, y/z) in the chart's variables.
pub fn rehomogenize(g: &MPoly, degree: u32, var: usize) -> MPoly {
    let others: Vec<usize> = (0..3).filter(|&v| v != var).collect();
    MPoly::from_terms(
        g.field(),
        3,
        g.terms().map(|(m, c)| {
            let mut e = [0u16; 4];
            e[others[0]] = m.0[X];
            e[others[1]] = m.0[Y];
            e[var] = (degree - m.degree()) as u16;
            (Monomial(e), c)
        }),
    )
}

/// The field GF(q^r) used for factoring over a degree-r extension of `base`.
pub fn extension_field(base: FieldSpec, r: u32) -> Result<FieldSpec> {
    if r == 1 {
        return Ok(base);
    }
    let n = base.n() * r;
    if n > MAX_DEGREE {
        return Err(Error::FieldTooLarge {
            bits: n,
            limit: MAX_DEGREE,
        });
    }
    FieldSpec::default_of_degree(n)
}

/// Irreducible factorization `unit * prod(f_i^m_i)` over `field`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BivariateFactorization {
    pub field: FieldSpec,
    pub unit: FieldElement,
    /// Normalized so the leading term has coefficient 1; sorted by degree.
    pub factors: Vec<(MPoly, usize)>,
}

impl BivariateFactorization {
    pub fn expand(&self) -> MPoly {
        let nvars = self.factors.first().map_or(2, |(f, _)| f.nvars());
        self.factors
            .iter()
            .fold(MPoly::constant(self.field, nvars, self.unit), |acc, (f, m)| {
                &acc * &f.pow(*m as u64)
            })
    }
}

fn check_degree(p: &MPoly) -> Result<()> {
    let d = p.total_degree().unwrap_or(0);
    if d > MAX_FACTOR_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d as usize,
            limit: MAX_FACTOR_DEGREE as usize,
        });
    }
    Ok(())
}

/// Factors a nonzero bivariate polynomial over the degree-r extension of its field.
pub fn factor_bivariate(p: &MPoly, r: u32) -> Result<BivariateFactorization> {
    let field = extension_field(p.field(), r)?;
    factor_over(p, field)
}

/// Factors a nonzero bivariate polynomial over `field`, which must contain its coefficient field.
pub fn factor_over(p: &MPoly, field: FieldSpec) -> Result<BivariateFactorization> {
    if p.nvars() != 2 {
        return Err(Error::Precondition("expected a bivariate polynomial".into()));
    }
    if p.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    check_degree(p)?;
    let lifted = lift_to(p, field)?;
    let (unit, factors) = bivariate::factor(&Bi::from_mpoly(&lifted))?;
    Ok(BivariateFactorization {
        field,
        unit,
        factors: factors.into_iter().map(|(b, m)| (b.to_mpoly(), m)).collect(),
    })
}

/// Factors a homogeneous trivariate polynomial over `field` into homogeneous factors.
pub fn factor_homogeneous_over(p: &MPoly, field: FieldSpec) -> Result<BivariateFactorization> {
    check_degree(p)?;
    let target = lift_to(p, field)?;
    let dh = dehomogenize(&target, Z)?;
    let mut factors = Vec::new();
    if dh.dropped_power > 0 {
        factors.push((MPoly::var(field, 3, Z), dh.dropped_power as usize));
    }
    if !dh.poly.is_constant() {
        for (g, m) in factor_over(&dh.poly, field)?.factors {
            let d = g.total_degree().unwrap();
            factors.push((rehomogenize(&g, d, Z).monic(), m));
        }
    }
    let mut out = BivariateFactorization {
        field,
        unit: FieldElement::ONE,
        factors,
    };
    let lc = |q: &MPoly| q.leading_term().expect("nonzero").1;
    out.unit = field.div(lc(&target), lc(&out.expand())).unwrap();
    Ok(out)
}

/// `p` with coefficients embedded into `field`.
pub(crate) fn lift_to(p: &MPoly, field: FieldSpec) -> Result<MPoly> {
    if field == p.field() {
        Ok(p.clone())
    } else {
        Ok(p.embed(&*build_embedding(p.field(), field)?))
    }
}

/// None if squarefree, otherwise an irreducible h with h^2 dividing `p`.
/// Accepts bivariate polynomials and homogeneous trivariate ones.
pub fn squarefree_witness(p: &MPoly) -> Result<Option<MPoly>> {
    match p.nvars() {
        2 => {
            let b = Bi::from_mpoly(p);
            let g = b.gcd(&b.deriv_x());
            let bt = b.transpose();
            let g = g.gcd(&bt.deriv_x().transpose());
            if g.is_constant() {
                return Ok(None);
            }
            // Over a perfect field every irreducible factor of gcd(p, p_x, p_y) is repeated in p.
            let fac = factor_over(&g.to_mpoly(), p.field())?;
            Ok(fac.factors.into_iter().next().map(|(h, _)| h))
        }
        3 => {
            let dh = dehomogenize(p, Z)?;
            if dh.dropped_power >= 2 {
                return Ok(Some(MPoly::var(p.field(), 3, Z)));
            }
            Ok(squarefree_witness(&dh.poly)?.map(|g| {
                let d = g.total_degree().unwrap();
                rehomogenize(&g, d, Z)
            }))
        }
        _ => Err(Error::Precondition("squarefree test needs 2 or 3 variables".into())),
    }
}

pub fn is_squarefree(p: &MPoly) -> Result<bool> {
    Ok(squarefree_witness(p)?.is_none())
}

/// All a in GF(2^k) outside F2 for which x + a*y + (a+1)*z divides `p`.
pub fn linear_form_divisors(p: &MPoly, k: u32) -> Result<Vec<FieldElement>> {
    if p.nvars() != 3 || !p.is_homogeneous() {
        return Err(Error::Precondition(
            "linear form divisors need a homogeneous trivariate polynomial".into(),
        ));
    }
    let g = FieldSpec::default_of_degree(k)?;
    let e = build_embedding(p.field(), g)?;
    Ok(g.elements()
        .filter(|a| a.bits() > 1)
        .filter(|&a| p.divisible_by_linear_form(a, &e))
        .collect())
}

/// Whether `p` shares no factor with the product of the forms x + a*y + (a+1)*z,
/// a in GF(2^k) outside F2.
pub fn coprime_to_gold(p: &MPoly, k: u32) -> Result<bool> {
    Ok(linear_form_divisors(p, k)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::build_phi_j;

    fn f2() -> FieldSpec {
        FieldSpec::f2()
    }

    #[test]
    fn dehomogenize_examples() {
        let p5 = build_phi_j(5, f2());
        let d = dehomogenize(&p5, Z).unwrap();
        assert_eq!(d.poly, MPoly::parse(f2(), 2, "x^2+y^2+1+x*y+x+y").unwrap());
        assert_eq!(d.dropped_power, 0);
        assert_eq!(rehomogenize(&d.poly, 2, Z), p5);

        let xy = MPoly::parse(f2(), 3, "x*y").unwrap();
        let d = dehomogenize(&xy, Y).unwrap();
        assert_eq!(d.poly, MPoly::parse(f2(), 2, "x").unwrap());
        assert_eq!(d.dropped_power, 1);

        let one = MPoly::one(f2(), 3);
        assert!(dehomogenize(&one, Z).unwrap().poly.is_one());
        assert!(dehomogenize(&MPoly::parse(f2(), 3, "x^2+y").unwrap(), Z).is_err());
    }

    #[test]
    fn phi6_section_factors_into_lines() {
        let p6 = dehomogenize(&build_phi_j(6, f2()), Z).unwrap().poly;
        let fac = factor_bivariate(&p6, 1).unwrap();
        assert_eq!(fac.expand(), p6);
        let lines: Vec<MPoly> = ["x+1", "y+1", "x+y"]
            .iter()
            .map(|s| MPoly::parse(f2(), 2, s).unwrap())
            .collect();
        assert_eq!(fac.factors.len(), 3);
        for l in lines {
            assert!(fac.factors.contains(&(l, 1)));
        }
    }

    #[test]
    fn phi5_splits_only_over_f4() {
        let p5 = dehomogenize(&build_phi_j(5, f2()), Z).unwrap().poly;
        assert_eq!(factor_bivariate(&p5, 1).unwrap().factors.len(), 1);
        let over4 = factor_bivariate(&p5, 2).unwrap();
        assert_eq!(over4.factors.len(), 2);
        assert!(over4
            .factors
            .iter()
            .all(|(f, m)| f.total_degree() == Some(1) && *m == 1));
        let f4 = over4.field;
        assert_eq!(over4.expand(), p5.embed(&build_embedding(f2(), f4).unwrap()));
    }

    #[test]
    fn homogeneous_factorization() {
        let p = build_phi_j(12, f2());
        let fac = factor_homogeneous_over(&p, f2()).unwrap();
        assert_eq!(fac.expand(), p);
        assert_eq!(fac.factors.len(), 3);
        assert!(fac.factors.iter().all(|(_, m)| *m == 3));
        let zx = MPoly::parse(f2(), 3, "z^2*x+z*x^2").unwrap();
        let fac = factor_homogeneous_over(&zx, f2()).unwrap();
        assert_eq!(fac.expand(), zx);
        assert_eq!(fac.factors.len(), 3);
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&build_phi_j(9, f2())).unwrap());
        assert!(is_squarefree(&build_phi_j(6, f2())).unwrap());
        assert!(!is_squarefree(&build_phi_j(10, f2())).unwrap());
        assert!(!is_squarefree(&build_phi_j(12, f2())).unwrap());
        let sq = MPoly::parse(f2(), 2, "x^2+y^2+1").unwrap();
        assert!(!is_squarefree(&sq).unwrap());
    }

    #[test]
    fn linear_forms() {
        let all = linear_form_divisors(&build_phi_j(9, f2()), 3).unwrap();
        assert_eq!(all.len(), 6);
        assert!(linear_form_divisors(&build_phi_j(7, f2()), 3).unwrap().is_empty());
        assert!(linear_form_divisors(&build_phi_j(5, f2()), 3).unwrap().is_empty());
        assert!(coprime_to_gold(&build_phi_j(5, f2()), 3).unwrap());
        assert!(!coprime_to_gold(&build_phi_j(5, f2()), 4).unwrap());
        assert!(!coprime_to_gold(&build_phi_j(9, f2()), 3).unwrap());
    }
}
