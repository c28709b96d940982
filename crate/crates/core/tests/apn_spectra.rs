use apnforge_core::apn::{
    classify_degree, differential_count, extension_scan, linearized_compose_apn_check, spectrum, spectrum_naive,
    DegreeKind,
};
use apnforge_core::field::build_embedding;
use apnforge_core::{FieldElement, FieldSpec, UPoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(n: u32) -> FieldSpec {
    FieldSpec::default_of_degree(n).unwrap()
}

fn mono(field: FieldSpec, d: usize) -> UPoly {
    UPoly::monomial(field, FieldElement::ONE, d)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn gold_and_kasami_conditions() {
    for n in 1..=12 {
        for k in 1..=4u32 {
            let gold = spectrum(&mono(field(n), (1 << k) + 1)).unwrap();
            assert_eq!(gold.is_apn, gcd(k, n) == 1, "Gold k={k} n={n}");
        }
    }
    for n in 1..=10 {
        let kasami = spectrum(&mono(field(n), 13)).unwrap();
        assert_eq!(kasami.is_apn, gcd(2, n) == 1, "x^13 n={n}");
    }
}

#[test]
fn histogram_accounts_for_every_pair() {
    for n in 2..=10 {
        let q = 1u64 << n;
        let s = spectrum(&mono(field(n), 7)).unwrap();
        assert_eq!(s.histogram.values().sum::<u64>(), (q - 1) * q);
        assert_eq!(s.histogram.iter().map(|(c, m)| c * m).sum::<u64>(), (q - 1) * q);
        assert!(s.histogram.keys().all(|c| c % 2 == 0));
        assert!(s.image_criterion_agrees);
    }
}

#[test]
fn rows_sum_to_the_field_size() {
    let fld = field(5);
    let f = UPoly::from_terms(
        fld,
        [(7, FieldElement::ONE), (3, fld.generator()), (1, FieldElement::ONE)],
    );
    for a in fld.elements().skip(1) {
        let counts: Vec<u64> = fld.elements().map(|b| differential_count(&f, a, b).unwrap()).collect();
        assert_eq!(counts.iter().sum::<u64>(), 32);
        assert!(counts.iter().all(|c| c % 2 == 0));
    }
    let x = mono(fld, 1);
    let a = fld.generator();
    for b in fld.elements() {
        assert_eq!(differential_count(&x, a, b).unwrap(), if b == a { 32 } else { 0 });
    }
}

#[test]
fn apn_passes_to_subfields() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f2 = field(1);
    let mut fs = vec![mono(f2, 3), mono(f2, 5), &mono(f2, 5) + &mono(f2, 3)];
    for d in [6usize, 7, 9] {
        let mut coeffs: Vec<FieldElement> = (0..d).map(|_| f2.random(&mut rng)).collect();
        coeffs.push(FieldElement::ONE);
        fs.push(UPoly::from_coeffs(f2, coeffs));
    }
    for f in fs {
        let scan = extension_scan(&f, 10).unwrap();
        for e in scan.entries.iter().filter(|e| e.is_apn) {
            for sub in scan.entries.iter().filter(|s| e.m % s.m == 0) {
                assert!(sub.is_apn, "{f:?} APN at m={} but not at m={}", e.m, sub.m);
            }
        }
    }
}

#[test]
fn differential_count_matches_the_spectrum() {
    let fld = field(4);
    let f = &mono(fld, 5) + &mono(fld, 3);
    let s = spectrum(&f).unwrap();
    let max = fld
        .elements()
        .skip(1)
        .flat_map(|a| fld.elements().map(move |b| (a, b)))
        .map(|(a, b)| differential_count(&f, a, b).unwrap())
        .max()
        .unwrap();
    assert_eq!(max, s.max_count);
    assert!(differential_count(&f, FieldElement::ZERO, FieldElement::ONE).is_err());
}

#[test]
fn the_x12_scan() {
    let f4 = field(2);
    let f = UPoly::from_terms(f4, [(12, FieldElement::ONE), (3, f4.generator())]);
    let scan = extension_scan(&f, 3).unwrap();
    let flags: Vec<bool> = scan.entries.iter().map(|e| e.is_apn).collect();
    assert_eq!(flags, [true, true, false]);
    assert_eq!(scan.first_non_apn(), Some(3));
}

#[test]
fn linearized_composition_preserves_apn_when_bijective() {
    for n in [2u32, 4, 6] {
        let big = field(n);
        let f4 = field(2);
        let c = build_embedding(f4, big).unwrap().embed(f4.generator());
        let target = UPoly::from_terms(big, [(12, FieldElement::ONE), (3, c)]);
        let r =
            linearized_compose_apn_check(&mono(big, 3), &[(2, FieldElement::ONE), (0, c)], big, Some(&target)).unwrap();
        assert_eq!(r.matches_target, Some(true));
        assert_eq!(r.bijective, n % 6 != 0);
        if r.bijective {
            assert_eq!(r.apn_status_matches, Some(true));
        }
    }
}

#[test]
fn classification() {
    assert_eq!(classify_degree(3).class, DegreeKind::Gold(1));
    assert_eq!(classify_degree(33).class, DegreeKind::Gold(5));
    assert_eq!(classify_degree(57).class, DegreeKind::KasamiWelch(3));
    assert_eq!(classify_degree(15).class, DegreeKind::Neither);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dense_matches_naive(n in 1u32..=7, d in 1usize..=12, seed in any::<u64>()) {
        let fld = field(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<FieldElement> = (0..=d).map(|_| fld.random(&mut rng)).collect();
        let f = UPoly::from_coeffs(fld, coeffs);
        prop_assert_eq!(spectrum(&f).unwrap(), spectrum_naive(&f));
    }

    #[test]
    fn affine_terms_do_not_change_the_spectrum(n in 2u32..=7, seed in any::<u64>()) {
        let fld = field(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = &mono(fld, 5) + &mono(fld, 3);
        let affine = UPoly::from_terms(fld, [(0, fld.random(&mut rng)), (1, fld.random(&mut rng)), (2, fld.random(&mut rng))]);
        let g = &f + &affine;
        prop_assert_eq!(spectrum(&f).unwrap().max_count, spectrum(&g).unwrap().max_count);
    }
}
