//! The surface polynomial
//! phi(x,y,z) = (f(x)+f(y)+f(z)+f(x+y+z)) / ((x+y)(x+z)(y+z)),
//! its homogenization and the sections used to study it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_embedding, FieldElement, FieldSpec};
use crate::mvpoly::{MPoly, Monomial, T, X, Y, Z};
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiSurface {
    pub f: UPoly,
    /// Trivariate in x, y, z.
    pub phi: MPoly,
    /// In x, y, z, t; equals `phi` at t = 1.
    pub phibar: MPoly,
    pub d: usize,
    /// Set when phi vanishes identically.
    pub degenerate: bool,
}

/// (x+y)(x+z)(y+z) in `nvars` variables.
pub fn denominator(field: FieldSpec, nvars: usize) -> MPoly {
    let v = |i| MPoly::var(field, nvars, i);
    let xy = &v(X) + &v(Y);
    let xz = &v(X) + &v(Z);
    let yz = &v(Y) + &v(Z);
    &(&xy * &xz) * &yz
}

/// x^j + y^j + z^j + (x+y+z)^j over F2.
fn power_numerator(j: u32) -> MPoly {
    let f = FieldSpec::f2();
    let s = &(&MPoly::var(f, 3, X) + &MPoly::var(f, 3, Y)) + &MPoly::var(f, 3, Z);
    let mut num = s.pow(j as u64);
    for v in [X, Y, Z] {
        num = &num + &MPoly::monomial(f, 3, Monomial::var(v, j as u16), FieldElement::ONE);
    }
    num
}

fn phi_j_cache() -> &'static Mutex<HashMap<u32, Arc<MPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<MPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// phi_j over F2. Zero for j < 3 and whenever the numerator vanishes (j a power of 2).
pub fn phi_j_f2(j: u32) -> Arc<MPoly> {
    if let Some(p) = phi_j_cache().lock().unwrap().get(&j) {
        return p.clone();
    }
    let f = FieldSpec::f2();
    let p = if j < 3 {
        MPoly::zero(f, 3)
    } else {
        power_numerator(j)
            .exact_div(&denominator(f, 3))
            .expect("the power numerator is always divisible by the denominator")
    };
    let p = Arc::new(p);
    phi_j_cache().lock().unwrap().insert(j, p.clone());
    p
}

/// phi_j with coefficients placed in `spec` (F2 sits inside every field as {0, 1}).
pub fn build_phi_j(j: u32, spec: FieldSpec) -> MPoly {
    phi_j_f2(j).map_coeffs(spec, |c| c)
}

/// Builds phi by exact division and phibar from the phi_j basis, and checks
/// that the two constructions agree.
pub fn build_phi(f: &UPoly) -> Result<PhiSurface> {
    let field = f.field();
    let d = f.degree().unwrap_or(0);
    if d > u16::MAX as usize / 4 {
        return Err(Error::DegreeTooLarge {
            degree: d,
            limit: u16::MAX as usize / 4,
        });
    }
    let vx = MPoly::var(field, 3, X);
    let vy = MPoly::var(field, 3, Y);
    let vz = MPoly::var(field, 3, Z);
    let s = &(&vx + &vy) + &vz;
    let mut num = MPoly::zero(field, 3);
    let mut s_pow = MPoly::one(field, 3);
    for j in 0..=d {
        let a = f.coeff(j);
        if !a.is_zero() {
            let mut term = s_pow.clone();
            for v in [X, Y, Z] {
                term = &term + &MPoly::monomial(field, 3, Monomial::var(v, j as u16), FieldElement::ONE);
            }
            num = &num + &term.scale(a);
        }
        if j < d {
            s_pow = &s_pow * &s;
        }
    }
    let phi = num.exact_div(&denominator(field, 3))?;

    let mut phibar = MPoly::zero(field, 4);
    for (j, a) in f.terms() {
        let pj = build_phi_j(j as u32, field).remap(4, &[Some(X), Some(Y), Some(Z)]);
        let tpow = MPoly::monomial(field, 4, Monomial::var(T, (d - j) as u16), a);
        phibar = &phibar + &(&pj * &tpow);
    }
    let affine = phibar
        .substitute_value(T, FieldElement::ONE)
        .remap(3, &[Some(X), Some(Y), Some(Z), None]);
    assert_eq!(affine, phi, "phi constructions disagree");

    Ok(PhiSurface {
        f: f.clone(),
        degenerate: phi.is_zero(),
        phi,
        phibar,
        d,
    })
}

/// The linear forms x + a*y + (a+1)*z for a in GF(2^k) outside F2, over GF(2^k).
pub fn gold_linear_forms(k: u32) -> Result<Vec<MPoly>> {
    let g = FieldSpec::default_of_degree(k)?;
    Ok(g.elements()
        .filter(|a| a.bits() > 1)
        .map(|a| {
            MPoly::from_terms(
                g,
                3,
                [
                    (Monomial::var(X, 1), FieldElement::ONE),
                    (Monomial::var(Y, 1), a),
                    (Monomial::var(Z, 1), a + FieldElement::ONE),
                ],
            )
        })
        .collect())
}

/// The product of [`gold_linear_forms`], pulled back to F2 and placed in `spec`.
pub fn gold_product(k: u32, spec: FieldSpec) -> Result<MPoly> {
    if k < 2 {
        return Err(Error::Precondition(format!("gold product needs k >= 2, got {k}")));
    }
    let forms = gold_linear_forms(k)?;
    let g = forms[0].field();
    let prod = forms.iter().fold(MPoly::one(g, 3), |acc, l| &acc * l);
    let e = build_embedding(FieldSpec::f2(), g)?;
    let over_f2 = prod
        .preimage(&e)
        .ok_or_else(|| Error::Precondition("gold product has coefficients outside F2".into()))?;
    Ok(over_f2.map_coeffs(spec, |c| c))
}

/// Splits d = 2^j * e with e odd.
pub fn two_adic(d: u32) -> (u32, u32) {
    let j = d.trailing_zeros();
    (j, d >> j)
}

/// Checks phi_d = phi_e^(2^j) * ((x+y)(x+z)(y+z))^(2^j - 1) for d = 2^j e, e odd.
pub fn reduction_identity_check(d: u32, spec: FieldSpec) -> Result<bool> {
    if d < 4 || d % 2 == 1 {
        return Err(Error::Precondition(format!(
            "reduction identity needs even d >= 4, got {d}"
        )));
    }
    let (j, e) = two_adic(d);
    let lhs = build_phi_j(d, spec);
    let pe = build_phi_j(e, spec).pow(1 << j);
    let rhs = &pe * &denominator(spec, 3).pow((1 << j) - 1);
    Ok(lhs == rhs)
}

/// phibar at t = 0, as a trivariate polynomial (a_d * phi_d).
pub fn section_infinity(s: &PhiSurface) -> MPoly {
    s.phibar
        .substitute_value(T, FieldElement::ZERO)
        .remap(3, &[Some(X), Some(Y), Some(Z), None])
}

/// phi(x, y, y) as a bivariate polynomial in x, y, with its square root.
pub fn section_y_equals_z(s: &PhiSurface) -> (MPoly, Option<MPoly>) {
    let field = s.phi.field();
    let sec = s
        .phi
        .substitute(&[(Z, MPoly::var(field, 3, Y))])
        .remap(2, &[Some(X), Some(Y), None]);
    let root = sec.is_square();
    (sec, root)
}

/// Result of rewriting x^r+y^r+z^r+(x+y+z)^r in s = x + y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddTermWitness {
    pub r: u32,
    /// Coefficient of s^0; zero.
    pub constant_coefficient: MPoly,
    /// Coefficient of s^1, in x and z.
    pub linear_coefficient: MPoly,
    /// Whether the linear coefficient is x^(r-1) + z^(r-1) and nonzero, so
    /// (x+y)^2 does not divide the numerator.
    pub holds: bool,
}

/// Substitutes y = x + s into the degree-r numerator for an odd r with x^r a term of f.
pub fn odd_term_s_substitution(f: &UPoly, r: u32) -> Result<OddTermWitness> {
    if r.is_multiple_of(2) {
        return Err(Error::Precondition(format!("r must be odd, got {r}")));
    }
    if f.coeff(r as usize).is_zero() {
        return Err(Error::Precondition(format!("x^{r} is not a term of f")));
    }
    let field = FieldSpec::f2();
    // y now plays the role of s
    let shifted = &MPoly::var(field, 3, X) + &MPoly::var(field, 3, Y);
    let num = power_numerator(r).substitute(&[(Y, shifted)]);
    let coeffs = num.coefficients_in(Y);
    let get = |i: usize| coeffs.get(i).cloned().unwrap_or_else(|| MPoly::zero(field, 3));
    let c0 = get(0);
    let c1 = get(1);
    let expected = MPoly::from_terms(
        field,
        3,
        [
            (Monomial::var(X, r as u16 - 1), FieldElement::ONE),
            (Monomial::var(Z, r as u16 - 1), FieldElement::ONE),
        ],
    );
    let holds = c0.is_zero() && !c1.is_zero() && c1 == expected;
    Ok(OddTermWitness {
        r,
        constant_coefficient: c0,
        linear_coefficient: c1,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvpoly::MPoly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FieldSpec {
        FieldSpec::f2()
    }

    fn mono(field: FieldSpec, d: usize) -> UPoly {
        UPoly::monomial(field, FieldElement::ONE, d)
    }

    fn p3(s: &str) -> MPoly {
        MPoly::parse(f2(), 3, s).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert!(build_phi(&mono(f2(), 3)).unwrap().phi.is_one());
        assert_eq!(build_phi(&mono(f2(), 5)).unwrap().phi, p3("x^2+y^2+z^2+x*y+x*z+y*z"));
        assert_eq!(build_phi(&mono(f2(), 6)).unwrap().phi, denominator(f2(), 3));
    }

    #[test]
    fn phi_j_examples() {
        assert!(phi_j_f2(3).is_one());
        assert!(phi_j_f2(4).is_zero());
        let p13 = phi_j_f2(13);
        assert!(p13.is_homogeneous());
        assert_eq!(p13.total_degree(), Some(10));
        let s = build_phi(&mono(f2(), 4)).unwrap();
        assert!(s.degenerate);
        assert!(build_phi(&UPoly::x(f2())).unwrap().degenerate);
    }

    #[test]
    fn phi_j_basis_identity() {
        let den = denominator(f2(), 3);
        for j in 3..=40 {
            let p = phi_j_f2(j);
            assert_eq!(&*p * &den, power_numerator(j), "j = {j}");
            if !j.is_power_of_two() {
                assert_eq!(p.total_degree(), Some(j - 3));
                assert!(p.is_homogeneous());
            }
        }
    }

    #[test]
    fn gold_products() {
        let f4 = FieldSpec::default_of_degree(2).unwrap();
        let forms = gold_linear_forms(2).unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].field(), f4);
        for k in 2..=5 {
            assert_eq!(gold_linear_forms(k).unwrap().len(), (1 << k) - 2);
            assert_eq!(
                gold_product(k, f2()).unwrap(),
                build_phi_j((1 << k) + 1, f2()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn reduction_identity_examples() {
        assert_eq!(build_phi_j(6, f2()), denominator(f2(), 3));
        assert_eq!(build_phi_j(12, f2()), denominator(f2(), 3).pow(3));
        assert_eq!(
            build_phi_j(10, f2()),
            &build_phi_j(5, f2()).square() * &denominator(f2(), 3)
        );
        for d in (4..=64).step_by(2) {
            assert!(reduction_identity_check(d, f2()).unwrap(), "d = {d}");
        }
        assert!(reduction_identity_check(7, f2()).is_err());
    }

    #[test]
    fn homogeneous_parts_follow_the_exponents() {
        let f4 = FieldSpec::default_of_degree(2).unwrap();
        let a = f4.generator();
        let f = UPoly::from_terms(f4, [(9, FieldElement::ONE), (6, a), (3, f4.square(a))]);
        let s = build_phi(&f).unwrap();
        let parts = s.phi.homogeneous_components().parts;
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 3, 6]);
        assert_eq!(parts[&6], build_phi_j(9, f4));
        assert_eq!(parts[&3], build_phi_j(6, f4).scale(a));
        assert_eq!(s.phi.total_degree(), Some(6));
    }

    #[test]
    fn sections() {
        let f4 = FieldSpec::default_of_degree(2).unwrap();
        let a = f4.generator();
        let f = UPoly::from_terms(f4, [(9, FieldElement::ONE), (6, a)]);
        assert_eq!(section_infinity(&build_phi(&f).unwrap()), build_phi_j(9, f4));
        let cubic = UPoly::from_terms(f4, [(3, a)]);
        let s = build_phi(&cubic).unwrap();
        assert_eq!(section_infinity(&s), MPoly::constant(f4, 3, a));
        assert_eq!(
            section_infinity(&build_phi(&mono(f2(), 6)).unwrap()),
            denominator(f2(), 3)
        );

        let (sec, root) = section_y_equals_z(&build_phi(&mono(f2(), 5)).unwrap());
        assert_eq!(sec, MPoly::parse(f2(), 2, "x^2+y^2").unwrap());
        assert_eq!(root.unwrap(), MPoly::parse(f2(), 2, "x+y").unwrap());

        let x9 = build_phi(&mono(f2(), 9)).unwrap();
        let x96 = build_phi(&UPoly::from_terms(
            f2(),
            [(9, FieldElement::ONE), (6, FieldElement::ONE)],
        ))
        .unwrap();
        assert_eq!(section_y_equals_z(&x9).0, section_y_equals_z(&x96).0);
        let root = section_y_equals_z(&x9).1.unwrap();
        assert_eq!(root.total_degree(), Some(3));
    }

    #[test]
    fn odd_term_substitution() {
        for r in [3u32, 9, 5, 7, 21] {
            let w = odd_term_s_substitution(&mono(f2(), r as usize), r).unwrap();
            assert!(w.holds, "r = {r}");
            assert!(w.constant_coefficient.is_zero());
        }
        let w = odd_term_s_substitution(&mono(f2(), 3), 3).unwrap();
        assert_eq!(w.linear_coefficient, p3("x^2+z^2"));
        assert!(odd_term_s_substitution(&mono(f2(), 4), 4).is_err());
        assert!(odd_term_s_substitution(&mono(f2(), 5), 3).is_err());
    }

    #[test]
    fn y_plus_z_divides_x_derivative() {
        let yz = p3("y+z");
        for d in 3..=33 {
            let dp = phi_j_f2(d).partial_derivative(X);
            assert!(dp.is_zero() || yz.divides(&dp), "d = {d}");
        }
    }

    #[test]
    fn phibar_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f8 = FieldSpec::default_of_degree(3).unwrap();
        for _ in 0..5 {
            let f = UPoly::from_coeffs(f8, (0..15).map(|_| f8.random(&mut rng)).collect());
            let s = build_phi(&f).unwrap();
            assert!(s.phibar.is_homogeneous());
        }
    }

    fn arb_f(n: u32) -> impl Strategy<Value = UPoly> {
        let field = FieldSpec::default_of_degree(n).unwrap();
        let mask = (field.order() - 1) as u32;
        prop::collection::vec(any::<u32>(), 1..=41).prop_map(move |v| {
            UPoly::from_coeffs(
                field,
                v.into_iter().map(|b| FieldElement::from_bits(b & mask)).collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn y_equals_z_section_is_a_square(f in prop_oneof![arb_f(1), arb_f(2), arb_f(3)]) {
            let s = build_phi(&f).unwrap();
            let (sec, root) = section_y_equals_z(&s);
            let root = root.expect("section must be a square");
            prop_assert_eq!(root.square(), sec);
        }
    }
}
