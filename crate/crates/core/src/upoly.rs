//! Univariate polynomials over GF(2^n) and their factorization.
//!
//! Storage is dense (`coeffs[i]` is the coefficient of x^i) with trailing
//! zeros trimmed, so the zero polynomial has no coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EmbeddingMap, FieldElement, FieldSpec};

/// Seed used by randomized splitting when none is supplied.
pub const DEFAULT_SEED: u64 = 0xa9f0_7e5d;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

/// `unit * prod(factor^multiplicity)`, factors monic, irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(UPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self, field: FieldSpec) -> UPoly {
        self.factors
            .iter()
            .fold(UPoly::constant(field, self.unit), |acc, (f, m)| {
                &acc * &f.pow(*m as u64)
            })
    }
}

impl UPoly {
    pub fn zero(field: FieldSpec) -> Self {
        UPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field, FieldElement::ONE)
    }

    pub fn x(field: FieldSpec) -> Self {
        Self::monomial(field, FieldElement::ONE, 1)
    }

    pub fn constant(field: FieldSpec, c: FieldElement) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn monomial(field: FieldSpec, c: FieldElement, degree: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    /// Sums repeated degrees.
    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (usize, FieldElement)>) -> Self {
        let mut coeffs = Vec::new();
        for (d, c) in terms {
            if coeffs.len() <= d {
                coeffs.resize(d + 1, FieldElement::ZERO);
            }
            coeffs[d] += c;
        }
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Nonzero terms as (degree, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lead().is_one() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()).unwrap())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FieldElement::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        UPoly {
            field: self.field,
            coeffs,
        }
    }

    pub fn square(&self) -> Self {
        let f = self.field;
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len() * 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = f.square(c);
        }
        Self::from_coeffs(f, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn divmod(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        assert_eq!(self.field, d.field, "field mismatch");
        let dd = d.degree().ok_or(Error::DivisionByZeroPoly)?;
        let f = self.field;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lead = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![FieldElement::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = f.mul(r[i], inv_lead);
            q[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] += f.mul(c, dc);
            }
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(f, q), Self::from_coeffs(f, r)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.divmod(d)?.1)
    }

    pub fn exact_div(&self, d: &UPoly) -> Result<UPoly> {
        let (q, r) = self.divmod(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision {
                remainder: format!("{r:?}"),
            })
        }
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            let s = &s0 + &(&q * &s1);
            let t = &t0 + &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Formal derivative; in characteristic 2 the even-degree terms vanish.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { FieldElement::ZERO })
            .collect();
        Self::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, u: FieldElement) -> FieldElement {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.mul(acc, u) + c)
    }

    /// self(inner(x)).
    pub fn compose(&self, inner: &UPoly) -> Self {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(f), |acc, &c| &(&acc * inner) + &Self::constant(f, c))
    }

    /// self(x + c).
    pub fn shift_arg(&self, c: FieldElement) -> Self {
        let f = self.field;
        let lin = Self::from_coeffs(f, vec![c, FieldElement::ONE]);
        self.compose(&lin)
    }

    /// Applies `map` to every coefficient, landing in `field`.
    pub fn map_coeffs(&self, field: FieldSpec, map: impl Fn(FieldElement) -> FieldElement) -> Self {
        Self::from_coeffs(field, self.coeffs.iter().map(|&c| map(c)).collect())
    }

    pub fn embed(&self, e: &EmbeddingMap) -> Self {
        assert_eq!(self.field, e.source());
        self.map_coeffs(e.target(), |c| e.embed(c))
    }

    /// Coefficient-wise e -> e^(2^j).
    pub fn coefficient_frobenius(&self, j: u32) -> Self {
        let f = self.field;
        self.map_coeffs(f, |c| f.frobenius(c, j))
    }

    /// The polynomial r with r^2 = self, if it exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        let f = self.field;
        Some(Self::from_coeffs(
            f,
            self.coeffs.iter().step_by(2).map(|&c| f.sqrt(c)).collect(),
        ))
    }

    /// self^(2^k) mod m.
    fn frobenius_mod(&self, k: u64, m: &UPoly) -> UPoly {
        let mut t = self.rem(m).unwrap();
        for _ in 0..k {
            t = t.square().rem(m).unwrap();
        }
        t
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        let d = self.derivative();
        !d.is_zero() && self.gcd(&d).is_one()
    }

    /// Rabin's irreducibility test over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let n = self.field.n() as u64;
        let x = Self::x(self.field);
        let m = self.monic();
        if &x.frobenius_mod(n * d as u64, &m) + &x != Self::zero(self.field) {
            return false;
        }
        crate::field::prime_factors(d as u64).into_iter().all(|p| {
            let t = &x.frobenius_mod(n * (d as u64 / p), &m) + &x;
            m.gcd(&t).is_one()
        })
    }

    /// Squarefree decomposition of a monic polynomial: pairs (s_i, i) with
    /// self = prod s_i^i and each s_i squarefree.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        self.squarefree_impl(1, &mut out);
        out.sort_by_key(|(_, m)| *m);
        out
    }

    fn squarefree_impl(&self, mult: usize, out: &mut Vec<(UPoly, usize)>) {
        if self.is_constant() {
            return;
        }
        let d = self.derivative();
        let mut dup = self.gcd(&d);
        let mut sf = self.exact_div(&dup).unwrap();
        let mut i = 0;
        while !sf.is_constant() {
            let common = dup.gcd(&sf);
            let factor = sf.exact_div(&common).unwrap();
            dup = dup.exact_div(&common).unwrap();
            sf = common;
            i += 1;
            if !factor.is_constant() {
                out.push((factor.monic(), i * mult));
            }
        }
        // what is left has zero derivative, so it is a square
        if !dup.is_constant() {
            dup.sqrt()
                .expect("residual factor has zero derivative")
                .squarefree_impl(mult * 2, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Vec<(UPoly, usize)> {
        let f = self.field;
        let n = f.n() as u64;
        let x = Self::x(f);
        let mut rest = self.clone();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 0usize;
        while let Some(deg) = rest.degree() {
            if deg == 0 {
                break;
            }
            d += 1;
            if 2 * d > deg {
                out.push((rest.clone(), deg));
                break;
            }
            h = h.frobenius_mod(n, &rest);
            let g = rest.gcd(&(&h + &x));
            if !g.is_one() {
                rest = rest.exact_div(&g).unwrap();
                h = h.rem(&rest).unwrap_or_else(|_| Self::zero(f));
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d` using
    /// the absolute trace, which takes values in F2 modulo each factor.
    fn equal_degree<R: Rng>(&self, d: usize, rng: &mut R, out: &mut Vec<UPoly>) {
        let deg = self.degree().unwrap();
        if deg == d {
            out.push(self.clone());
            return;
        }
        let f = self.field;
        let steps = f.n() as usize * d;
        loop {
            let r = Self::from_coeffs(f, (0..deg).map(|_| f.random(rng)).collect());
            if r.is_constant() {
                continue;
            }
            let mut t = r.rem(self).unwrap();
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.square().rem(self).unwrap();
                acc = &acc + &t;
            }
            let g = self.gcd(&acc);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < deg {
                let other = self.exact_div(&g).unwrap();
                g.equal_degree(d, rng, out);
                other.equal_degree(d, rng, out);
                return;
            }
        }
    }

    pub fn factor(&self) -> Factorization {
        self.factor_with_seed(DEFAULT_SEED)
    }

    pub fn factor_with_seed(&self, seed: u64) -> Factorization {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unit = self.lead();
        let mut factors = Vec::new();
        for (sf, mult) in self.monic().squarefree_decomposition() {
            for (part, d) in sf.distinct_degree() {
                let mut pieces = Vec::new();
                part.equal_degree(d, &mut rng, &mut pieces);
                factors.extend(pieces.into_iter().map(|p| (p, mult)));
            }
        }
        factors.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
        Factorization { unit, factors }
    }

    /// Distinct roots in the coefficient field, ascending by bits.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.field;
        let m = self.monic();
        let x = Self::x(f);
        let split = m.gcd(&(&x.frobenius_mod(f.n() as u64, &m) + &x));
        if split.is_constant() {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let mut lin = Vec::new();
        split.equal_degree(1, &mut rng, &mut lin);
        let mut roots: Vec<_> = lin.iter().map(|l| l.coeff(0)).collect();
        roots.sort();
        roots
    }

    /// Reduces modulo x^q + x (q = field order): the same function on the field,
    /// with every exponent brought below q.
    pub fn reduce_mod_field_equation(&self) -> Self {
        let q = self.field.order() as usize;
        if self.coeffs.len() <= q {
            return self.clone();
        }
        Self::from_terms(
            self.field,
            self.terms()
                .map(|(e, c)| (if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 }, c)),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }
}

/// Orders polynomials by degree, then coefficients from the top.
pub fn cmp_poly(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(d, c)| match (d, c.is_one()) {
                (0, _) => format!("{c}"),
                (_, true) => format!("x^{d}"),
                _ => format!("{c}*x^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        UPoly::from_coeffs(self.field, coeffs)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero(f);
        }
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += f.mul(a, b);
            }
        }
        UPoly::from_coeffs(f, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct UPolyRepr {
    field: FieldSpec,
    coeffs: BTreeMap<String, FieldElement>,
}

impl Serialize for UPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // keys are sorted numerically by degree in the output map
        use serde::ser::SerializeMap;
        #[derive(Serialize)]
        struct Repr<'a> {
            field: FieldSpec,
            coeffs: Terms<'a>,
        }
        struct Terms<'a>(&'a UPoly);
        impl Serialize for Terms<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(None)?;
                for (d, c) in self.0.terms() {
                    m.serialize_entry(&d.to_string(), &c)?;
                }
                m.end()
            }
        }
        Repr {
            field: self.field,
            coeffs: Terms(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = UPolyRepr::deserialize(d)?;
        UPoly::from_json_parts(r.field, &r.coeffs).map_err(serde::de::Error::custom)
    }
}

impl UPoly {
    /// Builds a polynomial from a degree -> hex coefficient map.
    pub fn from_json_parts(field: FieldSpec, coeffs: &BTreeMap<String, FieldElement>) -> Result<Self> {
        let mut terms = Vec::new();
        for (k, &c) in coeffs {
            let d: usize = k.parse().map_err(|_| Error::Parse(format!("bad degree key {k:?}")))?;
            if !field.contains(c) {
                return Err(Error::Parse(format!("coefficient {c} is not in GF(2^{})", field.n())));
            }
            terms.push((d, c));
        }
        Ok(Self::from_terms(field, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(b: u32) -> FieldElement {
        FieldElement::from_bits(b)
    }

    fn f2poly(bits: u64) -> UPoly {
        let f = FieldSpec::f2();
        UPoly::from_coeffs(f, (0..64).map(|i| e((bits >> i & 1) as u32)).collect())
    }

    #[test]
    fn derivative_kills_even_terms() {
        let f = FieldSpec::default_of_degree(2).unwrap();
        let a = f.generator();
        let p = UPoly::from_terms(f, [(9, FieldElement::ONE), (6, a), (3, f.square(a))]);
        let expect = UPoly::from_terms(f, [(8, FieldElement::ONE), (2, f.square(a))]);
        assert_eq!(p.derivative(), expect);
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let f = FieldSpec::default_of_degree(3).unwrap();
        let p = UPoly::from_coeffs(f, vec![e(3), e(1), e(5)]);
        assert_eq!(p.gcd(&UPoly::zero(f)), p.monic());
        assert_eq!(UPoly::zero(f).gcd(&p), p.monic());
    }

    #[test]
    fn eval_cube() {
        let f = FieldSpec::default_of_degree(8).unwrap();
        let x3 = UPoly::monomial(f, FieldElement::ONE, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let u = f.random(&mut rng);
            assert_eq!(x3.eval(u), f.mul(u, f.mul(u, u)));
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(f2poly(0b111).is_irreducible());
        assert!(!f2poly(0b101).is_irreducible());
        assert!(f2poly(0b1011).is_irreducible());
        // exhaustive root search agrees for cubics over F2
        for bits in 0b1000u64..0b10000 {
            let p = f2poly(bits);
            let has_root = p.eval(FieldElement::ZERO).is_zero() || p.eval(FieldElement::ONE).is_zero();
            assert_eq!(p.is_irreducible(), !has_root, "{bits:#b}");
        }
    }

    #[test]
    fn factor_examples() {
        let p = f2poly(0b10101);
        let fac = p.factor();
        assert_eq!(fac.factors, vec![(f2poly(0b111), 2)]);
        let irr = f2poly(0b1011);
        assert_eq!(irr.factor().factors, vec![(irr.clone(), 1)]);
    }

    #[test]
    fn field_polynomial_splits_completely() {
        for n in [1u32, 2, 3, 4] {
            let f = FieldSpec::default_of_degree(n).unwrap();
            let q = f.order() as usize;
            let p = &UPoly::monomial(f, FieldElement::ONE, q) + &UPoly::x(f);
            let fac = p.factor();
            assert_eq!(fac.factors.len(), q);
            let mut roots: Vec<_> = fac
                .factors
                .iter()
                .map(|(l, m)| {
                    assert_eq!((l.degree(), *m), (Some(1), 1));
                    l.coeff(0)
                })
                .collect();
            roots.sort();
            assert_eq!(roots, f.elements().collect::<Vec<_>>());
        }
    }

    #[test]
    fn roots_in_large_field() {
        let f = FieldSpec::default_of_degree(24).unwrap();
        let rs = [e(0x123456), e(0xabcdef), e(7)];
        let p = rs.iter().fold(UPoly::one(f), |acc, &r| {
            &acc * &UPoly::from_coeffs(f, vec![r, FieldElement::ONE])
        });
        let mut expect = rs.to_vec();
        expect.sort();
        assert_eq!(p.roots(), expect);
    }

    #[test]
    fn reduction_mod_field_equation() {
        let f = FieldSpec::default_of_degree(2).unwrap();
        let p = UPoly::from_terms(f, [(12, FieldElement::ONE), (3, f.generator())]);
        let r = p.reduce_mod_field_equation();
        assert_eq!(r.degree(), Some(3));
        for u in f.elements() {
            assert_eq!(p.eval(u), r.eval(u));
        }
    }

    #[test]
    fn json_round_trip() {
        let f = FieldSpec::new(2, Some(0x7)).unwrap();
        let p = UPoly::from_terms(f, [(9, e(1)), (6, e(2)), (3, e(3))]);
        let v = p.to_json();
        assert_eq!(
            v,
            serde_json::json!({"field": {"n": 2, "modulus": "0x7"}, "coeffs": {"3": "0x3", "6": "0x2", "9": "0x1"}})
        );
        let back: UPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly(n: u32, max_deg: usize) -> impl Strategy<Value = UPoly> {
        let f = FieldSpec::default_of_degree(n).unwrap();
        let mask = (f.order() - 1) as u32;
        prop::collection::vec(any::<u32>(), 1..=max_deg + 1)
            .prop_map(move |v| UPoly::from_coeffs(f, v.into_iter().map(|b| e(b & mask)).collect()))
    }

    fn check_factorization(p: &UPoly) -> std::result::Result<(), TestCaseError> {
        if p.is_zero() {
            return Ok(());
        }
        let fac = p.factor();
        prop_assert_eq!(&fac.expand(p.field()), p);
        for (q, _) in &fac.factors {
            prop_assert!(q.is_irreducible());
            prop_assert!(q.lead().is_one());
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn factor_multiplies_back_f2(p in arb_poly(1, 30)) { check_factorization(&p)?; }

        #[test]
        fn factor_multiplies_back_f4(p in arb_poly(2, 30)) { check_factorization(&p)?; }

        #[test]
        fn factor_multiplies_back_f8(p in arb_poly(3, 30)) { check_factorization(&p)?; }

        #[test]
        fn factor_multiplies_back_f16(p in arb_poly(4, 30)) { check_factorization(&p)?; }

        #[test]
        fn factor_multiplies_back_f256(p in arb_poly(8, 30)) { check_factorization(&p)?; }

        #[test]
        fn squarefree_part(p in arb_poly(3, 20)) {
            let d = p.derivative();
            prop_assume!(!d.is_zero());
            let sf = p.exact_div(&p.gcd(&d)).unwrap();
            // even multiplicities divide the derivative completely in characteristic 2
            let odd = p.factor().factors.iter().filter(|(_, m)| m % 2 == 1)
                .fold(UPoly::one(p.field()), |acc, (q, _)| &acc * q);
            prop_assert_eq!(sf.monic(), odd);
        }

        #[test]
        fn divmod_identity(a in arb_poly(4, 25), b in arb_poly(4, 10)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
