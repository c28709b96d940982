//! Absolute irreducibility and absolute factorization.
//!
//! An F_q-irreducible polynomial of total degree D splits over the algebraic
//! closure into r Galois-conjugate absolutely irreducible factors of degree
//! D / r, each defined over F_{q^r}. Over F_{q^m} it has gcd(r, m) factors.
//! Hence it is absolutely irreducible iff it stays irreducible over F_{q^l}
//! for every prime l dividing D, and r is recovered one prime at a time from
//! the factor counts over F_{q^(l^v)} with l^v the largest power of l in D.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{prime_factors, FieldElement, FieldSpec};
use crate::mvpoly::MPoly;

use super::{extension_field, factor_homogeneous_over, factor_over};

/// An F_q-irreducible factor of the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseFactor {
    pub poly: MPoly,
    pub multiplicity: usize,
    /// Degree of the smallest extension over which its absolute factors are defined.
    pub definition_degree: u32,
    pub absolutely_irreducible: bool,
}

/// An absolutely irreducible factor, with coefficients in GF(q^definition_degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsoluteFactor {
    pub poly: MPoly,
    pub multiplicity: usize,
    pub definition_degree: u32,
    /// Index into `base_factors` of the F_q-factor it divides.
    pub parent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    pub input: MPoly,
    pub base_field: FieldSpec,
    pub unit: FieldElement,
    pub base_factors: Vec<BaseFactor>,
    pub factors: Vec<AbsoluteFactor>,
}

impl FactorizationResult {
    /// Degree over F_2 of the smallest field containing every factor's coefficients.
    pub fn splitting_degree(&self) -> u32 {
        let r = self
            .factors
            .iter()
            .fold(1, |acc, f| crate::field::lcm(acc, f.definition_degree));
        self.base_field.n() * r
    }

    /// Multiplies the absolute factors back together in the common extension
    /// and compares with the input.
    pub fn verify_product(&self) -> Result<bool> {
        let big = extension_field(self.base_field, self.splitting_degree() / self.base_field.n())?;
        let nvars = self.input.nvars();
        let emb = crate::field::build_embedding(self.base_field, big)?;
        let mut prod = MPoly::constant(big, nvars, emb.embed(self.unit));
        for f in &self.factors {
            let lifted = super::lift_to(&f.poly, big)?;
            prod = &prod * &lifted.pow(f.multiplicity as u64);
        }
        Ok(prod == self.input.embed(&emb))
    }

    pub fn is_absolutely_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].multiplicity == 1
    }
}

/// Factors over `field`, dispatching on bivariate versus homogeneous trivariate input.
fn factor_any(p: &MPoly, field: FieldSpec) -> Result<super::BivariateFactorization> {
    match p.nvars() {
        2 => factor_over(p, field),
        3 => factor_homogeneous_over(p, field),
        _ => Err(Error::Precondition(
            "expected a bivariate or homogeneous trivariate polynomial".into(),
        )),
    }
}

fn factor_count(p: &MPoly, r: u32) -> Result<usize> {
    let field = extension_field(p.field(), r)?;
    Ok(factor_any(p, field)?.factors.iter().map(|(_, m)| m).sum())
}

fn l_adic_valuation(mut d: u32, l: u32) -> u32 {
    let mut v = 0;
    while d.is_multiple_of(l) {
        d /= l;
        v += 1;
    }
    v
}

/// Definition degree r of an F_q-irreducible polynomial.
pub fn definition_degree(p: &MPoly) -> Result<u32> {
    let d = p.total_degree().unwrap_or(0);
    if d <= 1 {
        return Ok(1);
    }
    let parts: Vec<u32> = prime_factors(d as u64)
        .into_par_iter()
        .map(|l| {
            let l = l as u32;
            if factor_count(p, l)? == 1 {
                return Ok(1);
            }
            let lv = l.pow(l_adic_valuation(d, l));
            if lv == l {
                return Ok(l);
            }
            Ok(factor_count(p, lv)? as u32)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().product())
}

fn require_irreducible(p: &MPoly) -> Result<()> {
    let fac = factor_any(p, p.field())?;
    if fac.factors.len() == 1 && fac.factors[0].1 == 1 {
        Ok(())
    } else {
        Err(Error::NotIrreducibleOverBase)
    }
}

/// Whether an F_q-irreducible polynomial stays irreducible over every extension.
pub fn is_absolutely_irreducible(p: &MPoly) -> Result<bool> {
    require_irreducible(p)?;
    let d = p.total_degree().unwrap_or(0);
    let counts: Vec<usize> = prime_factors(d as u64)
        .into_par_iter()
        .map(|l| factor_count(p, l as u32))
        .collect::<Result<_>>()?;
    Ok(counts.into_iter().all(|c| c == 1))
}

/// Full absolute factorization of a bivariate or homogeneous trivariate polynomial.
pub fn absolute_factorization(p: &MPoly) -> Result<FactorizationResult> {
    let base = p.field();
    let fac = factor_any(p, base)?;
    let per_factor: Vec<(BaseFactor, Vec<MPoly>)> = fac
        .factors
        .par_iter()
        .map(|(g, m)| {
            let r = definition_degree(g)?;
            let pieces = if r == 1 {
                vec![g.clone()]
            } else {
                let big = extension_field(base, r)?;
                let split = factor_any(g, big)?;
                debug_assert_eq!(split.factors.len(), r as usize);
                split.factors.into_iter().map(|(h, _)| h).collect()
            };
            Ok((
                BaseFactor {
                    poly: g.clone(),
                    multiplicity: *m,
                    definition_degree: r,
                    absolutely_irreducible: r == 1,
                },
                pieces,
            ))
        })
        .collect::<Result<_>>()?;
    let mut base_factors = Vec::new();
    let mut factors = Vec::new();
    for (i, (bf, pieces)) in per_factor.into_iter().enumerate() {
        for h in pieces {
            factors.push(AbsoluteFactor {
                poly: h,
                multiplicity: bf.multiplicity,
                definition_degree: bf.definition_degree,
                parent: i,
            });
        }
        base_factors.push(bf);
    }
    Ok(FactorizationResult {
        input: p.clone(),
        base_field: base,
        unit: fac.unit,
        base_factors,
        factors,
    })
}

/// A multiplicity-one F_q-factor that is absolutely irreducible, if any.
pub fn has_reduced_abs_irred_component_over_base(p: &MPoly) -> Result<Option<MPoly>> {
    let fac = factor_any(p, p.field())?;
    for (g, m) in &fac.factors {
        if *m == 1 && definition_degree(g)? == 1 {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}
