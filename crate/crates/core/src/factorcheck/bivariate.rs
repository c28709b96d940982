//! Factorization in K[x, y] for K = GF(2^n).
//!
//! Polynomials are handled as elements of K[y][x]. Irreducible factors are
//! found by splitting off contents and repeated parts, specializing y at a
//! point where the x-degree is kept and the univariate image is squarefree,
//! lifting the univariate factorization y-adically and recombining.

use crate::error::{Error, Result};
use crate::field::{build_embedding, FieldElement, FieldSpec, MAX_DEGREE};
use crate::mvpoly::{MPoly, Monomial, X, Y};
use crate::upoly::UPoly;

use super::hensel;

/// Sum of rows[i](y) * x^i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Bi {
    field: FieldSpec,
    rows: Vec<UPoly>,
}

impl Bi {
    #[cfg(test)]
    pub fn zero(field: FieldSpec) -> Self {
        Bi {
            field,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(field: FieldSpec, mut rows: Vec<UPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        Bi { field, rows }
    }

    /// A polynomial in y alone.
    pub fn from_y(p: UPoly) -> Self {
        let field = p.field();
        Self::from_rows(field, vec![p])
    }

    /// A polynomial in x alone.
    pub fn from_x(p: &UPoly) -> Self {
        let field = p.field();
        Self::from_rows(field, p.coeffs().iter().map(|&c| UPoly::constant(field, c)).collect())
    }

    pub fn from_mpoly(p: &MPoly) -> Self {
        assert_eq!(p.nvars(), 2, "expected a bivariate polynomial");
        let field = p.field();
        let mut rows: Vec<Vec<(usize, FieldElement)>> = Vec::new();
        for (m, c) in p.terms() {
            let i = m.0[X] as usize;
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            rows[i].push((m.0[Y] as usize, c));
        }
        Self::from_rows(field, rows.into_iter().map(|t| UPoly::from_terms(field, t)).collect())
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(
            self.field,
            2,
            self.rows
                .iter()
                .enumerate()
                .flat_map(|(i, r)| r.terms().map(move |(j, c)| (Monomial([i as u16, j as u16, 0, 0]), c))),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> &[UPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.rows.len() <= 1 && self.rows.first().is_none_or(|r| r.is_constant())
    }

    pub fn lc_x(&self) -> &UPoly {
        self.rows.last().expect("zero polynomial has no leading coefficient")
    }

    fn row(&self, i: usize) -> UPoly {
        self.rows.get(i).cloned().unwrap_or_else(|| UPoly::zero(self.field))
    }

    pub fn add(&self, other: &Bi) -> Bi {
        let n = self.rows.len().max(other.rows.len());
        Self::from_rows(self.field, (0..n).map(|i| &self.row(i) + &other.row(i)).collect())
    }

    #[cfg(test)]
    pub fn mul(&self, other: &Bi) -> Bi {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut rows = vec![UPoly::zero(self.field); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        Self::from_rows(self.field, rows)
    }

    pub fn scale_y(&self, c: &UPoly) -> Bi {
        Self::from_rows(self.field, self.rows.iter().map(|r| r * c).collect())
    }

    /// Exact division by a polynomial in y.
    pub fn div_y(&self, c: &UPoly) -> Bi {
        Self::from_rows(
            self.field,
            self.rows
                .iter()
                .map(|r| r.exact_div(c).expect("content divides every row"))
                .collect(),
        )
    }

    /// x^k * self
    fn shift_x(&self, k: usize) -> Bi {
        let mut rows = vec![UPoly::zero(self.field); k];
        rows.extend(self.rows.iter().cloned());
        Self::from_rows(self.field, rows)
    }

    /// Monic gcd of the rows, a polynomial in y.
    pub fn content_x(&self) -> UPoly {
        self.rows
            .iter()
            .fold(UPoly::zero(self.field), |g, r| if g.is_one() { g } else { g.gcd(r) })
    }

    pub fn primitive_x(&self) -> Bi {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_x();
        if c.is_one() {
            self.clone()
        } else {
            self.div_y(&c)
        }
    }

    /// Swaps the roles of x and y.
    pub fn transpose(&self) -> Bi {
        let dy = match self.deg_y() {
            Some(d) => d,
            None => return self.clone(),
        };
        let f = self.field;
        let mut rows = vec![Vec::with_capacity(self.rows.len()); dy + 1];
        for r in &self.rows {
            for (j, row) in rows.iter_mut().enumerate() {
                row.push(r.coeff(j));
            }
        }
        Self::from_rows(f, rows.into_iter().map(|c| UPoly::from_coeffs(f, c)).collect())
    }

    pub fn deriv_x(&self) -> Bi {
        Self::from_rows(
            self.field,
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| if i % 2 == 1 { r.clone() } else { UPoly::zero(self.field) })
                .collect(),
        )
    }

    /// The polynomial in x obtained by setting y = y0.
    pub fn eval_y(&self, y0: FieldElement) -> UPoly {
        UPoly::from_coeffs(self.field, self.rows.iter().map(|r| r.eval(y0)).collect())
    }

    /// self(x, y + c)
    pub fn shift_y(&self, c: FieldElement) -> Bi {
        if c.is_zero() {
            return self.clone();
        }
        Self::from_rows(self.field, self.rows.iter().map(|r| r.shift_arg(c)).collect())
    }

    /// The square root, if every exponent is even.
    pub fn sqrt(&self) -> Option<Bi> {
        let mut rows = Vec::with_capacity(self.rows.len() / 2 + 1);
        for (i, r) in self.rows.iter().enumerate() {
            if i % 2 == 1 {
                if !r.is_zero() {
                    return None;
                }
            } else {
                rows.push(r.sqrt()?);
            }
        }
        Some(Self::from_rows(self.field, rows))
    }

    /// Quotient when `b` divides `self` in K[y][x].
    pub fn exact_div(&self, b: &Bi) -> Option<Bi> {
        let db = b.deg_x()?;
        let lb = b.lc_x();
        let mut r = self.clone();
        let mut q = vec![UPoly::zero(self.field); self.rows.len().saturating_sub(db)];
        while let Some(dr) = r.deg_x() {
            if dr < db {
                return None;
            }
            let (c, rem) = r.lc_x().divmod(lb).ok()?;
            if !rem.is_zero() {
                return None;
            }
            let k = dr - db;
            r = r.add(&b.scale_y(&c).shift_x(k));
            debug_assert!(r.deg_x().is_none_or(|d| d < dr));
            q[k] = c;
        }
        Some(Self::from_rows(self.field, q))
    }

    /// A pseudo-remainder of self by b (scaled by a power of lc(b)).
    fn prem(&self, b: &Bi) -> Bi {
        let db = b.deg_x().expect("nonzero divisor");
        let lb = b.lc_x().clone();
        let mut r = self.clone();
        while let Some(dr) = r.deg_x() {
            if dr < db {
                break;
            }
            let lr = r.lc_x().clone();
            r = r.scale_y(&lb).add(&b.scale_y(&lr).shift_x(dr - db));
        }
        r
    }

    /// gcd in K[y][x], normalized to be primitive and monic in its leading term.
    pub fn gcd(&self, other: &Bi) -> Bi {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let c = self.content_x().gcd(&other.content_x());
        let (mut a, mut b) = (self.primitive_x(), other.primitive_x());
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.deg_x() > Some(0) {
            let r = a.prem(&b);
            a = b;
            b = r.primitive_x();
        }
        let g = if b.is_zero() {
            a
        } else {
            Bi::from_y(UPoly::one(self.field))
        };
        g.scale_y(&c).normalized()
    }

    /// Scaled so that the leading term in graded-lex order has coefficient 1.
    pub fn normalized(&self) -> Bi {
        let mut best: Option<((usize, usize), FieldElement)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(j) = r.degree() {
                let key = (i + j, i);
                if best.is_none_or(|(k, _)| key > k) {
                    best = Some((key, r.lead()));
                }
            }
        }
        match best {
            Some((_, c)) if !c.is_one() => {
                let inv = self.field.inv(c).unwrap();
                Self::from_rows(self.field, self.rows.iter().map(|r| r.scale(inv)).collect())
            }
            _ => self.clone(),
        }
    }

    pub fn map_coeffs(&self, field: FieldSpec, map: impl Fn(FieldElement) -> FieldElement + Copy) -> Bi {
        Self::from_rows(field, self.rows.iter().map(|r| r.map_coeffs(field, map)).collect())
    }
}

/// Irreducible factorization of a nonzero bivariate polynomial over its field:
/// `unit * prod(f_i^m_i)` with each `f_i` normalized.
pub(crate) fn factor(p: &Bi) -> Result<(FieldElement, Vec<(Bi, usize)>)> {
    assert!(!p.is_zero(), "cannot factor zero");
    let mut irreducibles: Vec<Bi> = Vec::new();
    split(p, &mut irreducibles)?;
    let mut distinct: Vec<Bi> = Vec::new();
    for h in irreducibles {
        let h = h.normalized();
        if !distinct.contains(&h) {
            distinct.push(h);
        }
    }
    let mut rest = p.clone();
    let mut out = Vec::with_capacity(distinct.len());
    for h in distinct {
        let mut m = 0;
        while let Some(q) = rest.exact_div(&h) {
            rest = q;
            m += 1;
        }
        assert!(m > 0, "split produced a non-factor");
        out.push((h, m));
    }
    assert!(rest.is_constant(), "cofactor is not a unit");
    let unit = rest.rows[0].coeff(0);
    out.sort_by(|a, b| cmp_bi(&a.0, &b.0));
    Ok((unit, out))
}

/// Orders by total degree, then by terms from the top.
pub(crate) fn cmp_bi(a: &Bi, b: &Bi) -> std::cmp::Ordering {
    let ma = a.to_mpoly();
    let mb = b.to_mpoly();
    ma.total_degree().cmp(&mb.total_degree()).then_with(|| {
        ma.terms()
            .rev()
            .map(|(m, c)| (m, c.bits()))
            .cmp(mb.terms().rev().map(|(m, c)| (m, c.bits())))
    })
}

/// Pushes irreducible factors covering every irreducible factor of `p`
/// (with repetitions possible, multiplicities not tracked).
fn split(p: &Bi, out: &mut Vec<Bi>) -> Result<()> {
    if p.is_constant() {
        return Ok(());
    }
    let mut f = p.clone();
    let cx = f.content_x();
    if !cx.is_constant() {
        for (q, _) in cx.factor().factors {
            out.push(Bi::from_y(q));
        }
        f = f.div_y(&cx);
    }
    let ft = f.transpose();
    let cy = ft.content_x();
    if !cy.is_constant() {
        for (q, _) in cy.factor().factors {
            out.push(Bi::from_x(&q));
        }
        f = ft.div_y(&cy).transpose();
    }
    if f.is_constant() {
        return Ok(());
    }
    let fx = f.deriv_x();
    if !fx.is_zero() {
        let g = f.gcd(&fx);
        if g.is_constant() {
            out.extend(factor_squarefree(&f)?);
        } else {
            let h = f.exact_div(&g).expect("gcd divides");
            split(&g, out)?;
            split(&h, out)?;
        }
        return Ok(());
    }
    let ft = f.transpose();
    let fy = ft.deriv_x();
    if !fy.is_zero() {
        let g = ft.gcd(&fy);
        if g.is_constant() {
            out.extend(factor_squarefree(&ft)?.into_iter().map(|b| b.transpose()));
        } else {
            let h = ft.exact_div(&g).expect("gcd divides");
            split(&g.transpose(), out)?;
            split(&h.transpose(), out)?;
        }
        return Ok(());
    }
    let r = f.sqrt().expect("both partial derivatives vanish, so f is a square");
    split(&r, out)
}

/// Number of candidate points compared when choosing where to specialize.
const POINTS_COMPARED: usize = 3;

/// Factors a squarefree polynomial, primitive in x, with nonzero x-derivative.
fn factor_squarefree(f: &Bi) -> Result<Vec<Bi>> {
    let dx = f.deg_x().unwrap_or(0);
    if dx <= 1 {
        return Ok(vec![f.clone()]);
    }
    if f.deg_y() == Some(0) {
        let u = f.eval_y(FieldElement::ZERO);
        return Ok(u.factor().factors.into_iter().map(|(q, _)| Bi::from_x(&q)).collect());
    }
    if let Some(y0) = choose_point(f) {
        return factor_at_point(f, y0);
    }
    let k = f.field();
    for e in 2.. {
        let n = k.n() * e;
        if n > MAX_DEGREE {
            return Err(Error::FieldTooLarge {
                bits: n,
                limit: MAX_DEGREE,
            });
        }
        let big = FieldSpec::default_of_degree(n)?;
        let emb = build_embedding(k, big)?;
        let fe = f.map_coeffs(big, |c| emb.embed(c));
        let Some(y0) = choose_point(&fe) else { continue };
        let over_big = factor_at_point(&fe, y0)?;
        return Ok(descend(over_big, k.n(), &emb));
    }
    unreachable!()
}

/// Groups factors over an extension into Frobenius orbits (x -> x^(2^base_n))
/// and pulls each orbit product back to the base field.
fn descend(factors: Vec<Bi>, base_n: u32, emb: &crate::field::EmbeddingMap) -> Vec<Bi> {
    let mut pool: Vec<MPoly> = factors.iter().map(|b| b.normalized().to_mpoly()).collect();
    let mut out = Vec::new();
    while let Some(g) = pool.pop() {
        let mut prod = g.clone();
        let mut h = g.coefficient_frobenius(base_n);
        while h != g {
            let pos = pool
                .iter()
                .position(|q| *q == h)
                .expect("Frobenius conjugate of a factor is a factor");
            pool.swap_remove(pos);
            prod = &prod * &h;
            h = h.coefficient_frobenius(base_n);
        }
        let base = prod.preimage(emb).expect("orbit product lies over the base field");
        out.push(Bi::from_mpoly(&base));
    }
    out
}

/// Picks y0 in the field keeping the x-degree with F(x, y0) squarefree,
/// preferring points whose image has the fewest irreducible factors.
fn choose_point(f: &Bi) -> Option<FieldElement> {
    let k = f.field();
    let dx = f.deg_x()?;
    let dy = f.deg_y().unwrap_or(0);
    // bad points are roots of lc * discriminant, of degree at most dy * (2 dx - 1)
    let budget = (dy * (2 * dx - 1) + 4 * POINTS_COMPARED) as u64;
    let mut best: Option<(usize, FieldElement)> = None;
    let mut found = 0;
    for bits in 0..k.order().min(budget + 1) {
        let y0 = FieldElement::from_bits(bits as u32);
        if f.lc_x().eval(y0).is_zero() {
            continue;
        }
        let u = f.eval_y(y0);
        if !u.is_squarefree() {
            continue;
        }
        let count = u.factor().factors.len();
        if best.is_none_or(|(c, _)| count < c) {
            best = Some((count, y0));
        }
        found += 1;
        if found == POINTS_COMPARED || count == 1 {
            break;
        }
    }
    best.map(|(_, y0)| y0)
}

fn factor_at_point(f: &Bi, y0: FieldElement) -> Result<Vec<Bi>> {
    let g = f.shift_y(y0);
    let image = g.eval_y(FieldElement::ZERO);
    let fac = image.factor();
    if fac.factors.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let precision = 2 * g.deg_y().unwrap_or(0) + 1;
    let locals: Vec<UPoly> = fac.factors.into_iter().map(|(q, _)| q).collect();
    let lifted = hensel::lift(&g, &locals, precision);
    let found = hensel::recombine(&g, &lifted, precision);
    Ok(found.into_iter().map(|h| h.shift_y(y0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(f: FieldSpec, s: &str) -> Bi {
        Bi::from_mpoly(&MPoly::parse(f, 2, s).unwrap())
    }

    fn expand(unit: FieldElement, fs: &[(Bi, usize)], field: FieldSpec) -> Bi {
        fs.iter().fold(Bi::from_y(UPoly::constant(field, unit)), |acc, (h, m)| {
            (0..*m).fold(acc, |a, _| a.mul(h))
        })
    }

    #[test]
    fn round_trip_and_transpose() {
        let f = FieldSpec::f2();
        let p = bi(f, "x^3*y+x*y^2+1");
        assert_eq!(Bi::from_mpoly(&p.to_mpoly()), p);
        assert_eq!(p.transpose().to_mpoly(), MPoly::parse(f, 2, "y^3*x+y*x^2+1").unwrap());
        assert_eq!(p.transpose().transpose(), p);
    }

    #[test]
    fn gcd_and_division() {
        let f = FieldSpec::default_of_degree(2).unwrap();
        let a = bi(f, "x*y+1");
        let b = bi(f, "x^2+y^3+x");
        let c = bi(f, "x+y^2");
        let ab = a.mul(&b);
        let ac = a.mul(&c);
        assert_eq!(ab.gcd(&ac), a.normalized());
        assert_eq!(ab.exact_div(&b).unwrap(), a);
        assert!(ab.exact_div(&c).is_none());
    }

    #[test]
    fn factors_products() {
        let f = FieldSpec::f2();
        let cases = ["x^2*y+y^3+x+1", "x+y", "x^2+x*y+y^2+x+y+1", "x*y+x+y", "x^3+y^2"];
        for a in cases {
            for b in cases {
                let p = bi(f, a).mul(&bi(f, b));
                let (u, fs) = factor(&p).unwrap();
                assert_eq!(expand(u, &fs, f), p, "{a} * {b}");
                let total: usize = fs.iter().map(|(_, m)| m).sum();
                assert!(total >= 2, "{a} * {b}: {fs:?}");
                for (h, _) in &fs {
                    let (_, again) = factor(h).unwrap();
                    assert_eq!(again, vec![(h.clone(), 1)]);
                }
            }
        }
    }

    #[test]
    fn contents_squares_and_y_only() {
        let f = FieldSpec::f2();
        let p = bi(f, "x^2*y^2+y^2");
        let (u, fs) = factor(&p).unwrap();
        assert_eq!(expand(u, &fs, f), p);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(_, m)| *m == 2));
        let q = bi(f, "x^4+y^2*x^2+y^6");
        let (u, fs) = factor(&q).unwrap();
        assert_eq!(expand(u, &fs, f), q);
    }

    #[test]
    fn phi6_section_has_three_lines() {
        let f = FieldSpec::f2();
        let p = bi(f, "x^2*y+x^2+x*y^2+y^2+x+y");
        let (_, fs) = factor(&p).unwrap();
        let expect: Vec<Bi> = ["x+y", "x+1", "y+1"].iter().map(|s| bi(f, s)).collect();
        assert_eq!(fs.len(), 3);
        for e in expect {
            assert!(fs.iter().any(|(h, m)| *h == e && *m == 1));
        }
    }

    #[test]
    fn needs_extension_points() {
        // every y0 in F2 is bad: lc vanishes at 0 and the image is a square at 1
        let f = FieldSpec::f2();
        let p = bi(f, "x^3*y+x^2*y^2+x^2+y^2*x+y^3+x*y^2+1");
        let (u, fs) = factor(&p).unwrap();
        assert_eq!(expand(u, &fs, f), p);
    }
}
