//! Reference computations shared by the integration tests.
//!
//! `oracle_absolute_factor_count` counts the absolutely irreducible factors of
//! a squarefree bivariate polynomial without Hensel lifting or extension-field
//! refactorization. After a projective change of coordinates making the top
//! homogeneous part squarefree, that part splits into distinct linear forms
//! over a small extension E. Every factor P of p has as top part a product of
//! a subset of those forms, and given the subset the lower homogeneous parts
//! of P and p / P are the unique solution of a sequence of linear systems over
//! E. Trying all subsets therefore decides every splitting.

#![allow(dead_code)]

use apnforge_core::factorcheck::{absolute_factorization, is_squarefree};
use apnforge_core::field::build_embedding;
use apnforge_core::mvpoly::{Monomial, X, Y};
use apnforge_core::{FieldElement, FieldSpec, MPoly, UPoly};

/// Largest field, as a power of two, the oracle works in.
const ORACLE_MAX_BITS: u32 = 24;

fn monomials2(k: u32) -> Vec<Monomial> {
    (0..=k as u16)
        .rev()
        .map(|i| Monomial([i, k as u16 - i, 0, 0]))
        .collect()
}

/// Gaussian elimination; columns are the unknowns. Free unknowns are zero.
fn solve(field: FieldSpec, columns: &[Vec<FieldElement>], rhs: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut a: Vec<Vec<FieldElement>> = (0..rows)
        .map(|i| columns.iter().map(|c| c[i]).chain([rhs[i]]).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = field.inv(a[r][c]).unwrap();
        for v in a[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (dst, src) in a[i].iter_mut().zip(&pivot_row) {
                    *dst = field.add(*dst, field.mul(f, *src));
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![FieldElement::ZERO; cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[i][cols];
    }
    Some(x)
}

fn part(p: &MPoly, k: u32) -> MPoly {
    MPoly::from_terms(p.field(), 2, p.terms().filter(|(m, _)| m.degree() == k))
}

fn product(field: FieldSpec, forms: &[MPoly]) -> MPoly {
    forms.iter().fold(MPoly::one(field, 2), |acc, f| &acc * f)
}

fn try_split(p: &MPoly, forms: &[MPoly], subset: &[usize]) -> Option<(MPoly, MPoly)> {
    let field = p.field();
    let d = p.total_degree().unwrap();
    let ps: Vec<MPoly> = subset.iter().map(|&i| forms[i].clone()).collect();
    let p_top = product(field, &ps);
    let q_top = part(p, d).exact_div(&p_top).ok()?;
    let s = p_top.total_degree().unwrap();
    let t = d - s;
    let mut pp = vec![MPoly::zero(field, 2); s as usize + 1];
    let mut qq = vec![MPoly::zero(field, 2); t as usize + 1];
    pp[s as usize] = p_top.clone();
    qq[t as usize] = q_top.clone();
    for m in 1..=s.max(t) {
        let k = d - m;
        let mut rhs = part(p, k);
        for i in 0..s {
            if k >= i && k - i < t {
                rhs = &rhs + &(&pp[i as usize] * &qq[(k - i) as usize]);
            }
        }
        let target = monomials2(k);
        let a_monos = s.checked_sub(m).map(monomials2).unwrap_or_default();
        let b_monos = t.checked_sub(m).map(monomials2).unwrap_or_default();
        let mut columns = Vec::new();
        for &mu in &a_monos {
            let c = q_top.mul_monomial(mu, FieldElement::ONE);
            columns.push(target.iter().map(|&x| c.coeff(x)).collect());
        }
        for &mu in &b_monos {
            let c = p_top.mul_monomial(mu, FieldElement::ONE);
            columns.push(target.iter().map(|&x| c.coeff(x)).collect());
        }
        let b: Vec<FieldElement> = target.iter().map(|&x| rhs.coeff(x)).collect();
        let sol = solve(field, &columns, &b)?;
        let (sa, sb) = sol.split_at(a_monos.len());
        if let Some(i) = s.checked_sub(m) {
            pp[i as usize] = MPoly::from_terms(field, 2, a_monos.iter().copied().zip(sa.iter().copied()));
        }
        if let Some(j) = t.checked_sub(m) {
            qq[j as usize] = MPoly::from_terms(field, 2, b_monos.iter().copied().zip(sb.iter().copied()));
        }
    }
    let big_p = pp.iter().fold(MPoly::zero(field, 2), |a, x| &a + x);
    let big_q = qq.iter().fold(MPoly::zero(field, 2), |a, x| &a + x);
    (&big_p * &big_q == *p).then_some((big_p, big_q))
}

fn subsets_with_first(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let rest: Vec<usize> = (1..n).collect();
    let k = size - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    if k > rest.len() {
        return out;
    }
    loop {
        out.push(std::iter::once(0).chain(idx.iter().map(|&i| rest[i])).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + rest.len() - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn count_pieces(p: &MPoly, forms: &[MPoly]) -> usize {
    let n = forms.len();
    for size in 1..n {
        for subset in subsets_with_first(n, size) {
            if let Some((a, b)) = try_split(p, forms, &subset) {
                let (fa, fb): (Vec<MPoly>, Vec<MPoly>) = {
                    let mut fa = Vec::new();
                    let mut fb = Vec::new();
                    for (i, f) in forms.iter().enumerate() {
                        if subset.contains(&i) {
                            fa.push(f.clone())
                        } else {
                            fb.push(f.clone())
                        }
                    }
                    (fa, fb)
                };
                return count_pieces(&a, &fa) + count_pieces(&b, &fb);
            }
        }
    }
    1
}

fn lcm(a: u32, b: u32) -> u32 {
    let g = (1..=a.min(b))
        .rev()
        .find(|g| a.is_multiple_of(*g) && b.is_multiple_of(*g))
        .unwrap_or(1);
    a / g * b
}

/// p(x, y) with z := 1 + a x + b y in its homogenization.
fn transform(p: &MPoly, a: FieldElement, b: FieldElement) -> MPoly {
    let field = p.field();
    let d = p.total_degree().unwrap();
    let line = MPoly::from_terms(
        field,
        2,
        [
            (Monomial::default(), FieldElement::ONE),
            (Monomial::var(X, 1), a),
            (Monomial::var(Y, 1), b),
        ],
    );
    let mut out = MPoly::zero(field, 2);
    for (m, c) in p.terms() {
        let term = MPoly::from_terms(field, 2, [(m, c)]);
        out = &out + &(&term * &line.pow((d - m.degree()) as u64));
    }
    out
}

/// The distinct linear factors of a squarefree binary form over a field
/// where they all exist, or None if the form is not squarefree or too large
/// a field would be needed.
fn split_form(top: &MPoly) -> Option<(FieldSpec, Vec<MPoly>)> {
    let field = top.field();
    let d = top.total_degree().unwrap();
    let y_power = top.terms().map(|(m, _)| m.0[Y]).min().unwrap();
    if y_power > 1 {
        return None;
    }
    let u = UPoly::from_terms(field, top.terms().map(|(m, c)| (m.0[X] as usize, c)));
    if !u.is_squarefree() {
        return None;
    }
    let fac = u.factor();
    let r = fac
        .factors
        .iter()
        .fold(1, |acc, (g, _)| lcm(acc, g.degree().unwrap() as u32));
    let bits = field.n() * r;
    if bits > ORACLE_MAX_BITS {
        return None;
    }
    let big = FieldSpec::default_of_degree(bits).ok()?;
    let emb = build_embedding(field, big).ok()?;
    let mut forms: Vec<MPoly> = u
        .embed(&emb)
        .roots()
        .into_iter()
        .map(|rho| {
            MPoly::from_terms(
                big,
                2,
                [(Monomial::var(X, 1), FieldElement::ONE), (Monomial::var(Y, 1), rho)],
            )
        })
        .collect();
    if y_power == 1 {
        forms.push(MPoly::var(big, 2, Y));
    }
    (forms.len() == d as usize).then_some((big, forms))
}

/// Number of absolutely irreducible factors of a squarefree bivariate
/// polynomial; None if no usable coordinates were found.
pub fn oracle_absolute_factor_count(p: &MPoly) -> Option<usize> {
    let base = p.field();
    let d = p.total_degree()?;
    if d == 0 {
        return Some(0);
    }
    if d == 1 {
        return Some(1);
    }
    for k in 1..=4u32 {
        let bits = base.n() * k;
        if bits > 8 {
            break;
        }
        let ext = FieldSpec::default_of_degree(bits).ok()?;
        let emb = build_embedding(base, ext).ok()?;
        let q = p.embed(&emb);
        for a in ext.elements() {
            for b in ext.elements() {
                let moved = transform(&q, a, b);
                if moved.total_degree() != Some(d) {
                    continue;
                }
                let Some((big, forms)) = split_form(&part(&moved, d)) else {
                    continue;
                };
                let lift = build_embedding(ext, big).ok()?;
                return Some(count_pieces(&moved.embed(&lift), &forms));
            }
        }
    }
    None
}

/// Every bivariate polynomial over `field` with monomials of degree <= d, in a
/// fixed order, excluding constants.
pub fn all_bivariate(field: FieldSpec, d: u32) -> Vec<MPoly> {
    let monos: Vec<Monomial> = (0..=d).flat_map(monomials2).collect();
    let q = field.order();
    let total = q.pow(monos.len() as u32);
    (0..total)
        .map(|mut idx| {
            let terms: Vec<(Monomial, FieldElement)> = monos
                .iter()
                .map(|&m| {
                    let c = FieldElement::from_bits((idx % q) as u32);
                    idx /= q;
                    (m, c)
                })
                .collect();
            MPoly::from_terms(field, 2, terms)
        })
        .filter(|p| p.total_degree().is_some_and(|d| d >= 1))
        .collect()
}

/// A random bivariate polynomial of total degree exactly d.
pub fn random_bivariate<R: rand::Rng>(field: FieldSpec, d: u32, rng: &mut R) -> MPoly {
    loop {
        let terms: Vec<(Monomial, FieldElement)> =
            (0..=d).flat_map(monomials2).map(|m| (m, field.random(rng))).collect();
        let p = MPoly::from_terms(field, 2, terms);
        if p.total_degree() == Some(d) {
            return p;
        }
    }
}

/// Compares the library with the oracle on one input; returns whether the
/// oracle applied.
pub fn agrees(p: &MPoly) -> bool {
    let res = absolute_factorization(p).unwrap();
    assert!(res.verify_product().unwrap(), "product check failed for {p:?}");
    let squarefree = res.factors.iter().all(|f| f.multiplicity == 1);
    assert_eq!(squarefree, is_squarefree(p).unwrap(), "{p:?}");
    if !squarefree {
        return false;
    }
    let Some(count) = oracle_absolute_factor_count(p) else {
        return false;
    };
    assert_eq!(res.factors.len(), count, "absolute factor count of {p:?}");
    if res.base_factors.len() == 1 {
        assert_eq!(res.is_absolutely_irreducible(), count == 1, "{p:?}");
    }
    true
}
