//! Sparse polynomials in up to four variables x, y, z, t over GF(2^n).
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is
//! graded lexicographic with x > y > z > t, so the last entry is the leading
//! term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EmbeddingMap, FieldElement, FieldSpec};
use crate::upoly::UPoly;

pub const MAX_VARS: usize = 4;
pub const VAR_NAMES: [&str; MAX_VARS] = ["x", "y", "z", "t"];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const T: usize = 3;

/// Exponent vector; unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn var(i: usize, e: u16) -> Self {
        let mut m = [0; MAX_VARS];
        m[i] = e;
        Monomial(m)
    }

    fn mul(self, other: Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("exponent overflow");
        }
        Monomial(m)
    }

    fn div(self, other: Self) -> Option<Self> {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(m))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

/// Homogeneous parts keyed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousDecomposition {
    pub parts: BTreeMap<u32, MPoly>,
}

impl HomogeneousDecomposition {
    pub fn sum(&self, field: FieldSpec, nvars: usize) -> MPoly {
        self.parts.values().fold(MPoly::zero(field, nvars), |acc, p| &acc + p)
    }

    /// The part of the given degree, or zero.
    pub fn part(&self, degree: u32, field: FieldSpec, nvars: usize) -> MPoly {
        self.parts
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(field, nvars))
    }
}

impl MPoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars), "nvars must be 1..=4");
        MPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: FieldElement) -> Self {
        Self::monomial(field, nvars, Monomial::default(), c)
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, FieldElement::ONE)
    }

    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(field, nvars, Monomial::var(i, 1), FieldElement::ONE)
    }

    pub fn monomial(field: FieldSpec, nvars: usize, m: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(m, c);
        p
    }

    /// Sums repeated monomials.
    pub fn from_terms(
        field: FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.0[self.nvars..].iter().all(|&e| e == 0));
        debug_assert!(self.field.contains(c));
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The univariate polynomial `u` placed in variable `var`.
    pub fn from_upoly(u: &UPoly, nvars: usize, var: usize) -> Self {
        Self::from_terms(
            u.field(),
            nvars,
            u.terms().map(|(d, c)| (Monomial::var(var, d as u16), c)),
        )
    }

    /// Converts to a univariate polynomial if only `var` occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, &c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e != 0) {
                return None;
            }
            terms.push((m.0[var] as usize, c));
        }
        Some(UPoly::from_terms(self.field, terms))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Monomial::default()).is_one()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, FieldElement)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> FieldElement {
        self.terms.get(&m).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(&m, &c)| (m, c))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = self.field;
        Self::from_terms(f, self.nvars, self.terms().map(|(m, a)| (m, f.mul(a, c))))
    }

    pub fn mul_monomial(&self, m: Monomial, c: FieldElement) -> Self {
        let f = self.field;
        Self::from_terms(f, self.nvars, self.terms().map(|(k, a)| (k.mul(m), f.mul(a, c))))
    }

    /// Divides every term by the monomial, which must divide each of them.
    pub fn div_monomial(&self, m: Monomial) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in self.terms() {
            terms.push((k.div(m)?, c));
        }
        Some(Self::from_terms(self.field, self.nvars, terms))
    }

    /// Squares via the Frobenius: (sum c m)^2 = sum c^2 m^2.
    pub fn square(&self) -> Self {
        let f = self.field;
        Self::from_terms(f, self.nvars, self.terms().map(|(m, c)| (m.mul(m), f.square(c))))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, self.nvars);
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

    /// Quotient a / b, failing with the remainder when b does not divide a.
    pub fn exact_div(&self, b: &MPoly) -> Result<MPoly> {
        self.check_compatible(b);
        let (lm, lc) = b.leading_term().ok_or(Error::DivisionByZeroPoly)?;
        let f = self.field;
        let inv = f.inv(lc).unwrap();
        let mut r = self.clone();
        let mut q = Self::zero(f, self.nvars);
        while let Some((m, c)) = r.leading_term() {
            let Some(qm) = m.div(lm) else {
                return Err(Error::InexactDivision {
                    remainder: format!("{r:?}"),
                });
            };
            let qc = f.mul(c, inv);
            q.add_term(qm, qc);
            for (bm, bc) in b.terms() {
                r.add_term(bm.mul(qm), f.mul(bc, qc));
            }
        }
        Ok(q)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Simultaneous substitution; assigned variables no longer occur in the
    /// result, which keeps the same number of variables.
    pub fn substitute(&self, assignments: &[(usize, MPoly)]) -> MPoly {
        let f = self.field;
        let mut slot: [Option<&MPoly>; MAX_VARS] = [None; MAX_VARS];
        for (v, p) in assignments {
            assert!(*v < self.nvars, "variable out of range");
            assert_eq!(p.field, f, "field mismatch");
            assert_eq!(p.nvars, self.nvars, "variable count mismatch");
            slot[*v] = Some(p);
        }
        // powers of each substituted polynomial, built on demand
        let mut powers: [Vec<MPoly>; MAX_VARS] = Default::default();
        let mut out = Self::zero(f, self.nvars);
        for (m, c) in self.terms() {
            let mut keep = m;
            let mut acc = Self::constant(f, self.nvars, c);
            for v in 0..self.nvars {
                let Some(p) = slot[v] else { continue };
                let e = m.0[v] as usize;
                keep.0[v] = 0;
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[v];
                if pw.is_empty() {
                    pw.push(Self::one(f, self.nvars));
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap() * p;
                    pw.push(next);
                }
                acc = &acc * &pw[e];
            }
            for (am, ac) in acc.terms() {
                out.add_term(am.mul(keep), ac);
            }
        }
        out
    }

    /// Substitutes a field value for one variable.
    pub fn substitute_value(&self, var: usize, c: FieldElement) -> MPoly {
        let f = self.field;
        let mut pw = vec![FieldElement::ONE];
        Self::from_terms(
            f,
            self.nvars,
            self.terms().map(|(mut m, a)| {
                let e = m.0[var] as usize;
                while pw.len() <= e {
                    pw.push(f.mul(*pw.last().unwrap(), c));
                }
                m.0[var] = 0;
                (m, f.mul(a, pw[e]))
            }),
        )
    }

    /// Moves variables: variable i of `self` becomes variable `map[i]` of the
    /// result, which has `nvars` variables. Variables mapped to `None` must not occur.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> MPoly {
        Self::from_terms(
            self.field,
            nvars,
            self.terms().map(|(m, c)| {
                let mut out = [0u16; MAX_VARS];
                for (i, &e) in m.0.iter().enumerate().take(self.nvars) {
                    match map.get(i).copied().flatten() {
                        Some(j) => out[j] += e,
                        None => assert_eq!(e, 0, "dropped variable {} occurs", VAR_NAMES[i]),
                    }
                }
                (Monomial(out), c)
            }),
        )
    }

    pub fn homogeneous_components(&self) -> HomogeneousDecomposition {
        let mut parts: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in self.terms() {
            parts
                .entry(m.degree())
                .or_insert_with(|| Self::zero(self.field, self.nvars))
                .add_term(m, c);
        }
        HomogeneousDecomposition { parts }
    }

    /// Formal partial derivative; terms with an even exponent of `var` vanish.
    pub fn partial_derivative(&self, var: usize) -> MPoly {
        Self::from_terms(
            self.field,
            self.nvars,
            self.terms().filter(|(m, _)| m.0[var] % 2 == 1).map(|(mut m, c)| {
                m.0[var] -= 1;
                (m, c)
            }),
        )
    }

    /// The square root, present iff every exponent is even.
    pub fn is_square(&self) -> Option<MPoly> {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms() {
            if m.0.iter().any(|e| e % 2 == 1) {
                return None;
            }
            terms.push((Monomial(m.0.map(|e| e / 2)), f.sqrt(c)));
        }
        Some(Self::from_terms(f, self.nvars, terms))
    }

    /// Applies e -> e^(2^j) to every coefficient.
    pub fn coefficient_frobenius(&self, j: u32) -> MPoly {
        let f = self.field;
        self.map_coeffs(f, |c| f.frobenius(c, j))
    }

    pub fn map_coeffs(&self, field: FieldSpec, map: impl Fn(FieldElement) -> FieldElement) -> MPoly {
        Self::from_terms(field, self.nvars, self.terms().map(|(m, c)| (m, map(c))))
    }

    pub fn embed(&self, e: &EmbeddingMap) -> MPoly {
        assert_eq!(self.field, e.source(), "embedding source mismatch");
        self.map_coeffs(e.target(), |c| e.embed(c))
    }

    /// Pulls coefficients back along `e`; `None` if some coefficient lies outside the subfield.
    pub fn preimage(&self, e: &EmbeddingMap) -> Option<MPoly> {
        assert_eq!(self.field, e.target(), "embedding target mismatch");
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms() {
            terms.push((m, e.preimage(c)?));
        }
        Some(Self::from_terms(e.source(), self.nvars, terms))
    }

    /// Whether x + alpha*y + (alpha+1)*z divides `self`, with `alpha` in the
    /// target of `e` and `self` over its source.
    pub fn divisible_by_linear_form(&self, alpha: FieldElement, e: &EmbeddingMap) -> bool {
        assert!(self.nvars >= 3, "needs variables x, y, z");
        let g = e.target();
        let p = self.embed(e);
        let lin = MPoly::from_terms(
            g,
            self.nvars,
            [
                (Monomial::var(Y, 1), alpha),
                (Monomial::var(Z, 1), alpha + FieldElement::ONE),
            ],
        );
        p.substitute(&[(X, lin)]).is_zero()
    }

    /// Monic scaling by the inverse of the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(self.field.inv(c).unwrap()),
            _ => self.clone(),
        }
    }

    /// Coefficients with respect to `var`: `out[i]` multiplies var^i and is free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.field, self.nvars); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (mut m, c) in self.terms() {
            let e = m.0[var] as usize;
            m.0[var] = 0;
            out[e].add_term(m, c);
        }
        out
    }

    /// Evaluates at a point with one value per variable.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars);
        let f = self.field;
        self.terms().fold(FieldElement::ZERO, |acc, (m, c)| {
            let v = point.iter().zip(m.0).fold(c, |t, (&x, e)| f.mul(t, f.pow(x, e as u64)));
            acc + v
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }

    fn check_compatible(&self, other: &MPoly) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }

    /// Parses expressions like `x^2*y + 0x3*z + 1`; constants are hex or decimal
    /// field-element bit patterns.
    pub fn parse(field: FieldSpec, nvars: usize, s: &str) -> Result<MPoly> {
        let mut p = Self::zero(field, nvars);
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(p);
        }
        for term in s.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut m = Monomial::default();
            let mut c = FieldElement::ONE;
            for factor in term.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<u16>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                if let Some(v) = VAR_NAMES[..nvars].iter().position(|&n| n == base) {
                    m.0[v] += exp;
                } else {
                    let bits = if let Some(h) = base.strip_prefix("0x") {
                        u32::from_str_radix(h, 16)
                    } else {
                        base.parse::<u32>()
                    }
                    .map_err(|_| Error::Parse(format!("unknown factor {base:?}")))?;
                    let e = field.element(bits)?;
                    c = field.mul(c, field.pow(e, exp as u64));
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            VAR_NAMES[i].to_string()
                        } else {
                            format!("{}^{e}", VAR_NAMES[i])
                        }
                    })
                    .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_compatible(rhs);
        let f = self.field;
        let mut acc: std::collections::HashMap<Monomial, FieldElement> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (a, ac) in self.terms() {
            for (b, bc) in rhs.terms() {
                *acc.entry(a.mul(b)).or_insert(FieldElement::ZERO) += f.mul(ac, bc);
            }
        }
        MPoly {
            field: f,
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    exp: Vec<u16>,
    coeff: FieldElement,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MPolyRepr {
    field: FieldSpec,
    nvars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for MPoly {
    /// Terms are listed leading term first.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MPolyRepr {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermRepr {
                    exp: m.0[..self.nvars].to_vec(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MPolyRepr::deserialize(d)?;
        if !(1..=MAX_VARS).contains(&r.nvars) {
            return Err(D::Error::custom("nvars must be between 1 and 4"));
        }
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            if t.exp.len() != r.nvars {
                return Err(D::Error::custom("exponent length differs from nvars"));
            }
            if !r.field.contains(t.coeff) {
                return Err(D::Error::custom(format!("coefficient {} outside field", t.coeff)));
            }
            let mut m = [0u16; MAX_VARS];
            m[..r.nvars].copy_from_slice(&t.exp);
            terms.push((Monomial(m), t.coeff));
        }
        Ok(MPoly::from_terms(r.field, r.nvars, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_embedding;
    use proptest::prelude::*;

    fn f2() -> FieldSpec {
        FieldSpec::f2()
    }

    fn p3(f: FieldSpec, s: &str) -> MPoly {
        MPoly::parse(f, 3, s).unwrap()
    }

    fn phi5() -> MPoly {
        p3(f2(), "x^2+y^2+z^2+x*y+x*z+y*z")
    }

    #[test]
    fn exact_division_examples() {
        let f = f2();
        let a = &p3(f, "x+y") * &p3(f, "x+z");
        assert_eq!(a.exact_div(&p3(f, "x+y")).unwrap(), p3(f, "x+z"));
        let num = &p3(f, "x^3+y^3+z^3") + &p3(f, "x+y+z").pow(3);
        let den = &(&p3(f, "x+y") * &p3(f, "x+z")) * &p3(f, "y+z");
        assert!(num.exact_div(&den).unwrap().is_one());
        assert!(matches!(
            p3(f, "x+y").exact_div(&p3(f, "x+z")),
            Err(Error::InexactDivision { .. })
        ));
    }

    #[test]
    fn substitution_examples() {
        let f = f2();
        let q = MPoly::parse(f, 2, "x+y").unwrap();
        assert!(q.substitute(&[(Y, MPoly::var(f, 2, X))]).is_zero());
        let sec = phi5().substitute_value(Z, FieldElement::ZERO);
        assert_eq!(sec, p3(f, "x^2+y^2+x*y"));
    }

    #[test]
    fn homogeneous_parts() {
        let f = f2();
        let p = MPoly::parse(f, 2, "x^2+x").unwrap();
        let h = p.homogeneous_components();
        assert_eq!(h.parts.len(), 2);
        assert_eq!(h.parts[&2], MPoly::parse(f, 2, "x^2").unwrap());
        assert_eq!(h.parts[&1], MPoly::parse(f, 2, "x").unwrap());
        assert_eq!(phi5().homogeneous_components().parts.len(), 1);
    }

    #[test]
    fn derivatives() {
        let f = f2();
        let v = |s| MPoly::parse(f, 2, s).unwrap();
        assert!(v("x^2").partial_derivative(X).is_zero());
        assert_eq!(v("x*y").partial_derivative(X), v("y"));
        let d = phi5().partial_derivative(X);
        assert_eq!(d, p3(f, "y+z"));
        assert!(p3(f, "y+z").divides(&d));
    }

    #[test]
    fn squares() {
        let f = f2();
        let l = MPoly::parse(f, 2, "x+y").unwrap();
        assert_eq!(l.square().is_square(), Some(l.clone()));
        assert_eq!(l.is_square(), None);
    }

    #[test]
    fn linear_form_divisibility() {
        let f4 = FieldSpec::default_of_degree(2).unwrap();
        let e = build_embedding(f2(), f4).unwrap();
        let w = f4.generator();
        assert!(phi5().divisible_by_linear_form(w, &e));
        assert!(phi5().divisible_by_linear_form(f4.square(w), &e));
        assert!(!phi5().divisible_by_linear_form(FieldElement::ONE, &e));
        let lin = MPoly::from_terms(
            f4,
            3,
            [
                (Monomial::var(X, 1), FieldElement::ONE),
                (Monomial::var(Y, 1), w),
                (Monomial::var(Z, 1), w + FieldElement::ONE),
            ],
        );
        let id = build_embedding(f4, f4).unwrap();
        assert!(lin.divisible_by_linear_form(w, &id));
    }

    #[test]
    fn frobenius_on_coefficients() {
        let f4 = FieldSpec::new(2, Some(0x7)).unwrap();
        let c = FieldElement::from_bits(2);
        let p = MPoly::monomial(f4, 2, Monomial::var(X, 1), c);
        assert_eq!(
            p.coefficient_frobenius(1),
            MPoly::monomial(f4, 2, Monomial::var(X, 1), c + FieldElement::ONE)
        );
        assert_eq!(p.coefficient_frobenius(2), p);
        assert_eq!(phi5().coefficient_frobenius(1), phi5());
    }

    #[test]
    fn json_form() {
        let p = MPoly::parse(f2(), 3, "x^2+y*z+1").unwrap();
        let v = p.to_json();
        assert_eq!(
            v,
            serde_json::json!({
                "field": {"n": 1, "modulus": "0x3"},
                "nvars": 3,
                "terms": [
                    {"exp": [2, 0, 0], "coeff": "0x1"},
                    {"exp": [0, 1, 1], "coeff": "0x1"},
                    {"exp": [0, 0, 0], "coeff": "0x1"}
                ]
            })
        );
        let back: MPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn graded_lex_order() {
        let mut ms = vec![
            Monomial([0, 0, 1, 0]),
            Monomial([1, 0, 0, 0]),
            Monomial([0, 2, 0, 0]),
            Monomial([1, 1, 0, 0]),
        ];
        ms.sort();
        assert_eq!(
            ms,
            vec![
                Monomial([0, 0, 1, 0]),
                Monomial([1, 0, 0, 0]),
                Monomial([0, 2, 0, 0]),
                Monomial([1, 1, 0, 0]),
            ]
        );
    }

    fn arb_mpoly(n: u32, nvars: usize, max_deg: u16, max_terms: usize) -> impl Strategy<Value = MPoly> {
        let f = FieldSpec::default_of_degree(n).unwrap();
        let mask = (f.order() - 1) as u32;
        prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), any::<u32>()), 0..=max_terms).prop_map(
            move |ts| {
                MPoly::from_terms(
                    f,
                    nvars,
                    ts.into_iter().filter_map(|(e, c)| {
                        let total: u16 = e.iter().sum();
                        if total > max_deg {
                            return None;
                        }
                        let mut m = [0u16; MAX_VARS];
                        m[..nvars].copy_from_slice(&e);
                        Some((Monomial(m), FieldElement::from_bits(c & mask)))
                    }),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn exact_div_recovers_factor(a in arb_mpoly(3, 3, 6, 8), b in arb_mpoly(3, 3, 6, 8)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn homogeneous_parts_resum(p in arb_mpoly(2, 4, 10, 20)) {
            let h = p.homogeneous_components();
            for (d, part) in &h.parts {
                prop_assert!(part.is_homogeneous());
                prop_assert_eq!(part.total_degree(), Some(*d));
            }
            prop_assert_eq!(h.sum(p.field(), 4), p);
        }

        #[test]
        fn square_root_of_square(p in arb_mpoly(4, 3, 8, 10)) {
            prop_assert_eq!(p.square().is_square(), Some(p));
        }

        #[test]
        fn substitution_is_a_ring_map(
            a in arb_mpoly(2, 3, 5, 6),
            b in arb_mpoly(2, 3, 5, 6),
            s in arb_mpoly(2, 3, 2, 3),
        ) {
            let sub = |p: &MPoly| p.substitute(&[(Y, s.clone())]);
            prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
            prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        }
    }
}
