//! y-adic Hensel lifting and factor recombination.
//!
//! A series is a vector of polynomials in x: `s[k]` multiplies y^k.

use crate::field::FieldSpec;
use crate::upoly::UPoly;

use super::bivariate::Bi;

pub(crate) type Series = Vec<UPoly>;

fn coeff(s: &Series, k: usize, field: FieldSpec) -> UPoly {
    s.get(k).cloned().unwrap_or_else(|| UPoly::zero(field))
}

/// Inverse of a polynomial in y with nonzero constant term, modulo y^n.
fn inverse_mod_power(c: &UPoly, n: usize) -> UPoly {
    let f = c.field();
    let inv0 = f.inv(c.coeff(0)).expect("constant term is nonzero");
    let mut out = vec![inv0];
    for k in 1..n {
        let mut acc = crate::field::FieldElement::ZERO;
        for i in 1..=k.min(c.degree().unwrap_or(0)) {
            acc += f.mul(c.coeff(i), out[k - i]);
        }
        out.push(f.mul(acc, inv0));
    }
    UPoly::from_coeffs(f, out)
}

fn truncate(p: &UPoly, n: usize) -> UPoly {
    UPoly::from_coeffs(p.field(), p.coeffs().iter().take(n).copied().collect())
}

/// Converts K[y][x] rows into a y-adic series truncated at y^n.
fn to_series(g: &Bi, n: usize) -> Series {
    let f = g.field();
    (0..n)
        .map(|k| UPoly::from_coeffs(f, g.rows().iter().map(|r| r.coeff(k)).collect()))
        .collect()
}

fn from_series(s: &Series, field: FieldSpec) -> Bi {
    let dx = s.iter().filter_map(|p| p.degree()).max().map_or(0, |d| d + 1);
    Bi::from_rows(
        field,
        (0..dx)
            .map(|i| UPoly::from_coeffs(field, s.iter().map(|p| p.coeff(i)).collect()))
            .collect(),
    )
}

fn series_mul(a: &Series, b: &Series, n: usize, field: FieldSpec) -> Series {
    (0..n)
        .map(|k| {
            (0..=k).fold(UPoly::zero(field), |acc, i| {
                let (ai, bj) = (coeff(a, i, field), coeff(b, k - i, field));
                if ai.is_zero() || bj.is_zero() {
                    acc
                } else {
                    &acc + &(&ai * &bj)
                }
            })
        })
        .collect()
}

/// Lifts the factorization g(x, 0) = lc * prod(locals) to monic factors of
/// lc(g)^-1 * g modulo y^precision. `locals` are monic, pairwise coprime.
pub(crate) fn lift(g: &Bi, locals: &[UPoly], precision: usize) -> Vec<Series> {
    let f = g.field();
    let inv = inverse_mod_power(g.lc_x(), precision);
    let monic = Bi::from_rows(f, g.rows().iter().map(|r| truncate(&(r * &inv), precision)).collect());
    let target = to_series(&monic, precision);
    lift_tree(&target, locals, precision)
}

fn lift_tree(target: &Series, locals: &[UPoly], precision: usize) -> Vec<Series> {
    if locals.len() == 1 {
        return vec![target.clone()];
    }
    let field = locals[0].field();
    let (left, right) = locals.split_at(locals.len() / 2);
    let prod = |ps: &[UPoly]| ps.iter().fold(UPoly::one(field), |acc, p| &acc * p);
    let (a, b) = lift_pair(target, &prod(left), &prod(right), precision);
    let mut out = lift_tree(&a, left, precision);
    out.extend(lift_tree(&b, right, precision));
    out
}

/// Linear lifting of target = A * B from A(0) = a, B(0) = b.
fn lift_pair(target: &Series, a: &UPoly, b: &UPoly, precision: usize) -> (Series, Series) {
    let field = a.field();
    let (g, _, v) = a.ext_gcd(b);
    debug_assert!(g.is_one(), "local factors must be coprime");
    let mut sa: Series = vec![a.clone()];
    let mut sb: Series = vec![b.clone()];
    for k in 1..precision {
        let mut e = coeff(target, k, field);
        for i in 1..k {
            let (ai, bj) = (&sa[i], &sb[k - i]);
            if !ai.is_zero() && !bj.is_zero() {
                e = &e + &(ai * bj);
            }
        }
        let da = (&e * &v).rem(a).unwrap();
        let db = (&e + &(&da * b)).exact_div(a).expect("lifting step is exact");
        sa.push(da);
        sb.push(db);
    }
    (sa, sb)
}

/// Finds the true factors of g among products of lifted local factors.
pub(crate) fn recombine(g: &Bi, lifted: &[Series], precision: usize) -> Vec<Bi> {
    let field = g.field();
    let mut rest = g.clone();
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in combinations(&remaining, size) {
            let prod = subset.iter().fold(vec![UPoly::one(field)], |acc: Series, &i| {
                series_mul(&acc, &lifted[i], precision, field)
            });
            let lc = to_series(&Bi::from_y(rest.lc_x().clone()), precision);
            let scaled = series_mul(&prod, &lc, precision, field);
            let cand = from_series(&scaled, field).primitive_x();
            if let Some(q) = rest.exact_div(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                remaining.retain(|i| !subset.contains(i));
            }
            None => size += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest.primitive_x());
    }
    found
}

/// All size-k subsets of `items`, in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
