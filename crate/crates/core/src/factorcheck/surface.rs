//! Absolute irreducibility of a surface phi(x, y, z) = 0 from its sections
//! and homogeneous parts.
//!
//! Criteria, tried in order:
//! (a) phi(x, y, y) = r^2 with 2 deg r = deg phi and r absolutely irreducible
//!     over F_q;
//! (b) a plane section z = l + m x + n y over F_q of full degree that is
//!     absolutely irreducible;
//! (c) for degree at most 10 with a squarefree top part, an exhaustive search
//!     for phi = P Q: P_s Q_t is the top part, so P_s is a product of a subset
//!     of its absolute factors, and each lower pair (P_{s-m}, Q_{t-m}) is the
//!     unique solution of a linear system once the higher parts are known;
//! (d) a linear factor l + c of phi, where l is a linear factor of the top part.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{lcm, FieldElement, FieldSpec};
use crate::mvpoly::{MPoly, Monomial, X, Y, Z};
use crate::upoly::UPoly;

use super::{absolute_factorization, extension_field, factor_over, is_absolutely_irreducible, lift_to};

/// Largest total degree accepted.
pub const MAX_SURFACE_DEGREE: u32 = 30;
/// Largest total degree for the homogeneous-part search.
pub const MAX_SEARCH_DEGREE: u32 = 10;
/// Number of full-degree plane sections examined.
const PLANE_ATTEMPTS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AbsolutelyIrreducible,
    /// Reducible over the closure, with a multiplicity-one absolutely
    /// irreducible component defined over F_q.
    #[serde(rename = "HasF_qComponent")]
    HasFqComponent,
    /// Reducible over the closure; no component over F_q was identified.
    SplitsOverExtension,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Linear,
    YEqualsZSquare,
    PlaneSection,
    HomogeneousParts,
    LinearFactor,
    None,
}

/// An absolutely irreducible factor of phi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub poly: MPoly,
    pub definition_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceVerdict {
    pub verdict: Verdict,
    pub criterion: Criterion,
    /// Complete absolute factorization when the homogeneous-part search ran.
    pub components: Option<Vec<Component>>,
    /// A proper factor of phi over an extension, when reducibility was shown.
    pub factor_witness: Option<MPoly>,
    pub evidence: serde_json::Value,
}

impl SurfaceVerdict {
    fn new(verdict: Verdict, criterion: Criterion, evidence: serde_json::Value) -> Self {
        SurfaceVerdict {
            verdict,
            criterion,
            components: None,
            factor_witness: None,
            evidence,
        }
    }
}

pub fn surface_abs_irred_by_sections(phi: &MPoly) -> Result<SurfaceVerdict> {
    if phi.nvars() != 3 {
        return Err(Error::Precondition("phi must be trivariate".into()));
    }
    let Some(d) = phi.total_degree() else {
        return Err(Error::Precondition("phi is zero".into()));
    };
    if d > MAX_SURFACE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d as usize,
            limit: MAX_SURFACE_DEGREE as usize,
        });
    }
    if d == 0 {
        return Ok(SurfaceVerdict::new(
            Verdict::Inconclusive,
            Criterion::None,
            serde_json::json!({"reason": "phi is a nonzero constant and defines no surface"}),
        ));
    }
    if d == 1 {
        return Ok(SurfaceVerdict::new(
            Verdict::AbsolutelyIrreducible,
            Criterion::Linear,
            serde_json::json!({"reason": "phi has degree 1"}),
        ));
    }
    let mut tried = Vec::new();
    match y_equals_z_square(phi)? {
        Ok(v) => return Ok(v),
        Err(why) => tried.push(serde_json::json!({"criterion": "y_equals_z_square", "result": why})),
    }
    match plane_sections(phi)? {
        Ok(v) => return Ok(v),
        Err(why) => tried.push(serde_json::json!({"criterion": "plane_section", "result": why})),
    }
    if d <= MAX_SEARCH_DEGREE {
        match homogeneous_parts_search(phi)? {
            Ok(v) => return Ok(v),
            Err(why) => tried.push(serde_json::json!({"criterion": "homogeneous_parts", "result": why})),
        }
    }
    match linear_factor_witness(phi)? {
        Ok(v) => return Ok(v),
        Err(why) => tried.push(serde_json::json!({"criterion": "linear_factor", "result": why})),
    }
    Ok(SurfaceVerdict::new(
        Verdict::Inconclusive,
        Criterion::None,
        serde_json::json!({ "tried": tried }),
    ))
}

/// Inner error strings explain why a criterion did not apply.
type Attempt = std::result::Result<SurfaceVerdict, String>;

fn y_equals_z_square(phi: &MPoly) -> Result<Attempt> {
    let d = phi.total_degree().unwrap();
    let sec = phi
        .substitute(&[(Z, MPoly::var(phi.field(), 3, Y))])
        .remap(2, &[Some(X), Some(Y), None]);
    let Some(root) = sec.is_square() else {
        return Ok(Err("phi(x,y,y) is not a square".into()));
    };
    if root.total_degree().map(|r| 2 * r) != Some(d) {
        return Ok(Err("phi(x,y,y) has lower degree than phi".into()));
    }
    let fac = factor_over(&root, root.field())?;
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Ok(Err(format!("square root {root} is reducible over the base field")));
    }
    if !is_absolutely_irreducible(&root)? {
        return Ok(Err(format!("square root {root} is not absolutely irreducible")));
    }
    Ok(Ok(SurfaceVerdict::new(
        Verdict::AbsolutelyIrreducible,
        Criterion::YEqualsZSquare,
        serde_json::json!({ "section": sec, "root": root }),
    )))
}

/// Planes z = l + m x + n y over F_q, simplest first.
fn candidate_planes(field: FieldSpec) -> impl Iterator<Item = [FieldElement; 3]> {
    let q = field.order().min(1 << 8) as u32;
    let lambdas = (0..q).map(|l| [FieldElement::from_bits(l), FieldElement::ZERO, FieldElement::ZERO]);
    let small = field.order().min(4) as u32;
    let tilted = (0..small).flat_map(move |l| {
        (0..small).flat_map(move |m| {
            (0..small).filter(move |&n| m != 0 || n != 0).map(move |n| {
                [
                    FieldElement::from_bits(l),
                    FieldElement::from_bits(m),
                    FieldElement::from_bits(n),
                ]
            })
        })
    });
    lambdas.take(PLANE_ATTEMPTS).chain(tilted)
}

fn plane_sections(phi: &MPoly) -> Result<Attempt> {
    let field = phi.field();
    let d = phi.total_degree().unwrap();
    let mut examined = Vec::new();
    for [l, m, n] in candidate_planes(field) {
        if examined.len() >= PLANE_ATTEMPTS {
            break;
        }
        let plane = MPoly::from_terms(
            field,
            3,
            [
                (Monomial::default(), l),
                (Monomial::var(X, 1), m),
                (Monomial::var(Y, 1), n),
            ],
        );
        let sec = phi.substitute(&[(Z, plane)]).remap(2, &[Some(X), Some(Y), None]);
        if sec.total_degree() != Some(d) {
            continue;
        }
        let fac = factor_over(&sec, field)?;
        let irreducible = fac.factors.len() == 1 && fac.factors[0].1 == 1;
        let plane_json = serde_json::json!({"lambda": l, "mu": m, "nu": n});
        if irreducible && is_absolutely_irreducible(&sec)? {
            return Ok(Ok(SurfaceVerdict::new(
                Verdict::AbsolutelyIrreducible,
                Criterion::PlaneSection,
                serde_json::json!({ "plane": plane_json, "section": sec }),
            )));
        }
        examined.push(plane_json);
    }
    Ok(Err(format!(
        "no absolutely irreducible full-degree section among {} planes",
        examined.len()
    )))
}

/// Monomials of degree k in x, y, z.
fn monomials(k: u32) -> Vec<Monomial> {
    let k = k as u16;
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            out.push(Monomial([a, b, k - a - b, 0]));
        }
    }
    out
}

/// Solves A v = b (A given by columns); free variables are set to zero.
fn solve(field: FieldSpec, columns: &[Vec<FieldElement>], rhs: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<FieldElement>> = (0..rows)
        .map(|i| {
            let mut r: Vec<FieldElement> = columns.iter().map(|c| c[i]).collect();
            r.push(rhs[i]);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = field.inv(m[row][col]).unwrap();
        for v in m[row].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col];
                let pivot_row = m[row].clone();
                for (dst, src) in m[i].iter_mut().zip(&pivot_row) {
                    *dst += field.mul(factor, *src);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![FieldElement::ZERO; cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][cols];
    }
    Some(sol)
}

/// Tries to write `p` = P Q where the top part of P is the product of
/// `tops[i]` for i in `subset`; `tops` are the absolute factors of the top part.
fn try_split(p: &MPoly, tops: &[MPoly], subset: &[usize]) -> Option<(MPoly, MPoly)> {
    let field = p.field();
    let d = p.total_degree().unwrap();
    let parts = p.homogeneous_components();
    let top = parts.part(d, field, 3);
    let ps = subset.iter().fold(MPoly::one(field, 3), |acc, &i| &acc * &tops[i]);
    let qt = top.exact_div(&ps).ok()?;
    let s = ps.total_degree().unwrap();
    let t = d - s;
    let mut pp: Vec<MPoly> = vec![MPoly::zero(field, 3); s as usize + 1];
    let mut qq: Vec<MPoly> = vec![MPoly::zero(field, 3); t as usize + 1];
    pp[s as usize] = ps.clone();
    qq[t as usize] = qt.clone();
    for m in 1..=s.max(t) {
        let deg = d - m;
        let mut rhs = parts.part(deg, field, 3);
        for i in 0..s {
            let Some(j) = deg.checked_sub(i) else { continue };
            if j < t {
                rhs = &rhs + &(&pp[i as usize] * &qq[j as usize]);
            }
        }
        let target = monomials(deg);
        let pm = s.checked_sub(m);
        let qm = t.checked_sub(m);
        let p_monos = pm.map(monomials).unwrap_or_default();
        let q_monos = qm.map(monomials).unwrap_or_default();
        let mut columns = Vec::with_capacity(p_monos.len() + q_monos.len());
        for &mu in &p_monos {
            let col = qt.mul_monomial(mu, FieldElement::ONE);
            columns.push(target.iter().map(|&k| col.coeff(k)).collect());
        }
        for &nu in &q_monos {
            let col = ps.mul_monomial(nu, FieldElement::ONE);
            columns.push(target.iter().map(|&k| col.coeff(k)).collect());
        }
        let b: Vec<FieldElement> = target.iter().map(|&k| rhs.coeff(k)).collect();
        let sol = solve(field, &columns, &b)?;
        let (sp, sq) = sol.split_at(p_monos.len());
        if let Some(pm) = pm {
            pp[pm as usize] = MPoly::from_terms(field, 3, p_monos.iter().copied().zip(sp.iter().copied()));
        }
        if let Some(qm) = qm {
            qq[qm as usize] = MPoly::from_terms(field, 3, q_monos.iter().copied().zip(sq.iter().copied()));
        }
    }
    let big_p = pp.iter().fold(MPoly::zero(field, 3), |acc, x| &acc + x);
    let big_q = qq.iter().fold(MPoly::zero(field, 3), |acc, x| &acc + x);
    (&big_p * &big_q == *p).then_some((big_p, big_q))
}

/// Splits `p` into absolutely irreducible factors given the absolute factors of its top part.
fn split_completely(p: &MPoly, tops: &[MPoly], out: &mut Vec<MPoly>) {
    let n = tops.len();
    for size in 1..=n / 2 {
        for rest in combinations(n - 1, size - 1) {
            let subset: Vec<usize> = std::iter::once(0).chain(rest.iter().map(|&i| i + 1)).collect();
            if let Some((a, b)) = try_split(p, tops, &subset) {
                let (ta, tb): (Vec<MPoly>, Vec<MPoly>) = (0..n).map(|i| (subset.contains(&i), tops[i].clone())).fold(
                    (Vec::new(), Vec::new()),
                    |(mut x, mut y), (inside, t)| {
                        if inside {
                            x.push(t)
                        } else {
                            y.push(t)
                        }
                        (x, y)
                    },
                );
                split_completely(&a, &ta, out);
                split_completely(&b, &tb, out);
                return;
            }
        }
    }
    out.push(p.clone());
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Size of the orbit of a normalized polynomial under c -> c^(2^base_n).
fn frobenius_orbit(p: &MPoly, base_n: u32) -> u32 {
    let mut h = p.coefficient_frobenius(base_n);
    let mut r = 1;
    while h != *p {
        h = h.coefficient_frobenius(base_n);
        r += 1;
    }
    r
}

fn homogeneous_parts_search(phi: &MPoly) -> Result<Attempt> {
    let base = phi.field();
    let d = phi.total_degree().unwrap();
    let top = phi.homogeneous_components().part(d, base, 3);
    if !super::is_squarefree(&top)? {
        return Ok(Err("top homogeneous part is not squarefree".into()));
    }
    let abs_top = absolute_factorization(&top)?;
    let r = abs_top.factors.iter().fold(1, |acc, f| lcm(acc, f.definition_degree));
    let big = match extension_field(base, r) {
        Ok(f) => f,
        Err(Error::FieldTooLarge { .. }) => {
            return Ok(Err(format!("top part splits only over a degree-{r} extension")))
        }
        Err(e) => return Err(e),
    };
    let tops: Vec<MPoly> = abs_top
        .factors
        .iter()
        .map(|f| lift_to(&f.poly, big).map(|p| p.monic()))
        .collect::<Result<_>>()?;
    let target = lift_to(phi, big)?;
    let mut pieces = Vec::new();
    split_completely(&target, &tops, &mut pieces);
    let components: Vec<Component> = pieces
        .iter()
        .map(|p| {
            let p = p.monic();
            Component {
                definition_degree: frobenius_orbit(&p, base.n()),
                poly: p,
            }
        })
        .collect();
    let evidence = serde_json::json!({
        "top_part_factors": abs_top.factors.len(),
        "search_field": big,
        "component_count": components.len(),
    });
    let verdict = if components.len() == 1 {
        Verdict::AbsolutelyIrreducible
    } else if components.iter().any(|c| c.definition_degree == 1) {
        Verdict::HasFqComponent
    } else {
        Verdict::SplitsOverExtension
    };
    let witness = (components.len() > 1).then(|| components[0].poly.clone());
    Ok(Ok(SurfaceVerdict {
        verdict,
        criterion: Criterion::HomogeneousParts,
        components: Some(components),
        factor_witness: witness,
        evidence,
    }))
}

/// Values c in the field of `l` with l + c dividing `p`; `l` = x + a y + b z
/// with `p` and `l` over the same field.
fn linear_shifts(p: &MPoly, l: &MPoly) -> Vec<FieldElement> {
    let field = p.field();
    // x = a y + b z + w, with w in the slot of t
    let wide = p.remap(4, &[Some(X), Some(Y), Some(Z)]);
    let sub = MPoly::from_terms(
        field,
        4,
        [
            (Monomial::var(Y, 1), l.coeff(Monomial::var(Y, 1))),
            (Monomial::var(Z, 1), l.coeff(Monomial::var(Z, 1))),
            (Monomial::var(3, 1), FieldElement::ONE),
        ],
    );
    let restricted = wide.substitute(&[(X, sub)]);
    let mut groups: std::collections::BTreeMap<(u16, u16), Vec<(usize, FieldElement)>> = Default::default();
    for (m, c) in restricted.terms() {
        groups.entry((m.0[Y], m.0[Z])).or_default().push((m.0[3] as usize, c));
    }
    let g = groups
        .into_values()
        .fold(UPoly::zero(field), |acc, ts| acc.gcd(&UPoly::from_terms(field, ts)));
    if g.is_zero() {
        return field.elements().take(1).collect();
    }
    g.roots()
}

fn linear_factor_witness(phi: &MPoly) -> Result<Attempt> {
    let base = phi.field();
    let d = phi.total_degree().unwrap();
    let top = phi.homogeneous_components().part(d, base, 3);
    let abs_top = absolute_factorization(&top)?;
    for f in abs_top.factors.iter().filter(|f| f.poly.total_degree() == Some(1)) {
        let l = f.poly.monic();
        if l.coeff(Monomial::var(X, 1)) != FieldElement::ONE {
            continue;
        }
        let field = l.field();
        let p = lift_to(phi, field)?;
        for c in linear_shifts(&p, &l) {
            let factor = &l + &MPoly::constant(field, 3, c);
            if d > 1 && factor.divides(&p) {
                let r = f.definition_degree;
                let verdict = if r == 1 {
                    Verdict::HasFqComponent
                } else {
                    Verdict::SplitsOverExtension
                };
                let cofactor = p.exact_div(&factor).expect("checked divisibility");
                return Ok(Ok(SurfaceVerdict {
                    verdict,
                    criterion: Criterion::LinearFactor,
                    components: None,
                    factor_witness: Some(factor.clone()),
                    evidence: serde_json::json!({
                        "factor": factor,
                        "definition_degree": r,
                        "cofactor_degree": cofactor.total_degree(),
                    }),
                }));
            }
        }
    }
    Ok(Err(
        "no linear factor of phi lies over a linear factor of its top part".into()
    ))
}

/// Confirms a nonzero constant field element has a preimage in `base`; used by tests.
#[cfg(test)]
fn defined_over(p: &MPoly, base: FieldSpec) -> bool {
    let e = crate::field::build_embedding(base, p.field()).unwrap();
    p.preimage(&e).is_some()
}
