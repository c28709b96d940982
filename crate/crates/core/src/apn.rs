//! Differential uniformity: solution counts of f(x + a) + f(x) = b, full
//! spectra, extension scans, exponent classification and the linearized
//! composition check.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_embedding, FieldElement, FieldSpec};
use crate::upoly::UPoly;

/// Largest field, as a power of two, handled by the dense spectrum.
pub const MAX_SPECTRUM_BITS: u32 = 20;

/// Values f(x) for every x, indexed by the bit pattern of x.
pub fn value_table(f: &UPoly) -> Vec<u32> {
    let field = f.field();
    let f = f.reduce_mod_field_equation();
    field.elements().map(|x| f.eval(x).bits()).collect()
}

/// Number of x with f(x + a) + f(x) = b.
pub fn differential_count(f: &UPoly, a: FieldElement, b: FieldElement) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::ZeroDifference);
    }
    let field = f.field();
    let f = f.reduce_mod_field_equation();
    Ok(field.elements().filter(|&x| f.eval(x + a) + f.eval(x) == b).count() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialSpectrum {
    pub field: FieldSpec,
    pub f: UPoly,
    /// Differential uniformity: the largest solution count over a != 0 and all b.
    #[serde(rename = "delta")]
    pub max_count: u64,
    /// Solution count -> number of pairs (a, b), a != 0, attaining it.
    #[serde(serialize_with = "string_keys")]
    pub histogram: BTreeMap<u64, u64>,
    pub is_apn: bool,
    /// Smallest size of a difference image {f(x + a) + f(x)} over a != 0.
    pub min_image_size: u64,
    /// APN exactly when every difference image has q/2 elements.
    pub image_criterion_agrees: bool,
}

fn string_keys<S: serde::Serializer>(h: &BTreeMap<u64, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(h.len()))?;
    for (k, v) in h {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

impl DifferentialSpectrum {
    fn from_parts(f: &UPoly, histogram: BTreeMap<u64, u64>, min_image_size: u64) -> Self {
        let q = f.field().order();
        let max_count = histogram
            .iter()
            .filter(|(_, &pairs)| pairs > 0)
            .map(|(&c, _)| c)
            .max()
            .unwrap_or(0);
        let is_apn = max_count <= 2;
        DifferentialSpectrum {
            field: f.field(),
            f: f.clone(),
            max_count,
            histogram,
            is_apn,
            min_image_size,
            image_criterion_agrees: is_apn == (min_image_size == q / 2),
        }
    }
}

/// Per-a tallies merged across workers.
#[derive(Default)]
struct Tally {
    histogram: BTreeMap<u64, u64>,
    min_image: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.min_image = self.min_image.min(other.min_image);
        self
    }
}

/// Full differential spectrum. Runs in O(q^2) time, parallel over a.
pub fn spectrum(f: &UPoly) -> Result<DifferentialSpectrum> {
    let field = f.field();
    if field.n() > MAX_SPECTRUM_BITS {
        return Err(Error::FieldTooLarge {
            bits: field.n(),
            limit: MAX_SPECTRUM_BITS,
        });
    }
    let q = field.order() as usize;
    let table = value_table(f);
    let tally = (1..q)
        .into_par_iter()
        .fold(
            || {
                (
                    vec![0u32; q],
                    Tally {
                        histogram: BTreeMap::new(),
                        min_image: u64::MAX,
                    },
                )
            },
            |(mut counts, mut tally), a| {
                counts.iter_mut().for_each(|c| *c = 0);
                // x and x + a give the same difference; visit each pair once.
                let high = 1usize << (usize::BITS - 1 - a.leading_zeros());
                for x in (0..q).filter(|x| x & high == 0) {
                    counts[(table[x] ^ table[x ^ a]) as usize] += 2;
                }
                let mut image = 0;
                let mut local: BTreeMap<u64, u64> = BTreeMap::new();
                for &c in &counts {
                    image += u64::from(c > 0);
                    *local.entry(c as u64).or_default() += 1;
                }
                for (k, v) in local {
                    *tally.histogram.entry(k).or_default() += v;
                }
                tally.min_image = tally.min_image.min(image);
                (counts, tally)
            },
        )
        .map(|(_, t)| t)
        .reduce(
            || Tally {
                histogram: BTreeMap::new(),
                min_image: u64::MAX,
            },
            Tally::merge,
        );
    Ok(DifferentialSpectrum::from_parts(f, tally.histogram, tally.min_image))
}

/// Reference spectrum by a direct loop over (a, b, x), evaluating f each time.
pub fn spectrum_naive(f: &UPoly) -> DifferentialSpectrum {
    let field = f.field();
    let g = f.reduce_mod_field_equation();
    let mut histogram = BTreeMap::new();
    let mut min_image = u64::MAX;
    for a in field.elements().skip(1) {
        let mut image = 0;
        for b in field.elements() {
            let c = field.elements().filter(|&x| g.eval(x + a) + g.eval(x) == b).count() as u64;
            image += u64::from(c > 0);
            *histogram.entry(c).or_default() += 1;
        }
        min_image = min_image.min(image);
    }
    DifferentialSpectrum::from_parts(f, histogram, min_image)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub m: u32,
    pub field: FieldSpec,
    pub delta: u64,
    pub is_apn: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub base_field: FieldSpec,
    pub f: UPoly,
    pub max_ext: u32,
    pub entries: Vec<ScanEntry>,
    /// Why the scan ended before `max_ext`, if it did.
    pub stopped_early: Option<String>,
    pub note: &'static str,
}

impl ScanReport {
    pub fn first_non_apn(&self) -> Option<u32> {
        self.entries.iter().find(|e| !e.is_apn).map(|e| e.m)
    }
}

const SCAN_NOTE: &str = "finite evidence over the listed extensions only; \
    it does not decide whether f is APN on infinitely many extensions";

/// APN status of f over F_{q^m} for m = 1..=max_ext, stopping once q^m
/// exceeds 2^max_bits.
pub fn extension_scan_with_budget(f: &UPoly, max_ext: u32, max_bits: u32) -> Result<ScanReport> {
    scan(f, max_ext, max_bits, false)
}

/// Like [`extension_scan_with_budget`], but ends at the first non-APN extension.
pub fn scan_until_non_apn(f: &UPoly, max_ext: u32, max_bits: u32) -> Result<ScanReport> {
    scan(f, max_ext, max_bits, true)
}

fn scan(f: &UPoly, max_ext: u32, max_bits: u32, stop_at_non_apn: bool) -> Result<ScanReport> {
    let base = f.field();
    let mut entries = Vec::new();
    let mut stopped_early = None;
    for m in 1..=max_ext {
        let bits = base.n() * m;
        if bits > max_bits.min(MAX_SPECTRUM_BITS) {
            stopped_early = Some(format!(
                "F_(q^{m}) has 2^{bits} elements, beyond the budget 2^{}",
                max_bits.min(MAX_SPECTRUM_BITS)
            ));
            break;
        }
        let big = FieldSpec::default_of_degree(bits)?;
        let g = f.embed(&*build_embedding(base, big)?);
        let s = spectrum(&g)?;
        entries.push(ScanEntry {
            m,
            field: big,
            delta: s.max_count,
            is_apn: s.is_apn,
        });
        if stop_at_non_apn && !s.is_apn {
            break;
        }
    }
    Ok(ScanReport {
        base_field: base,
        f: f.clone(),
        max_ext,
        entries,
        stopped_early,
        note: SCAN_NOTE,
    })
}

pub fn extension_scan(f: &UPoly, max_ext: u32) -> Result<ScanReport> {
    extension_scan_with_budget(f, max_ext, MAX_SPECTRUM_BITS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "k")]
pub enum DegreeKind {
    Gold(u32),
    KasamiWelch(u32),
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeClass {
    pub d: u64,
    #[serde(flatten)]
    pub class: DegreeKind,
}

/// Exponents k scanned in each family.
pub const CLASSIFY_MAX_K: u32 = 32;

/// Gold (2^k + 1) or Kasami-Welch (4^k - 2^k + 1) membership, k >= 1; Gold
/// takes precedence for d = 3, which is in both.
pub fn classify_degree(d: u64) -> DegreeClass {
    let d128 = u128::from(d);
    let gold = (1..=CLASSIFY_MAX_K).find(|&k| (1u128 << k) + 1 == d128);
    let kasami = (1..=CLASSIFY_MAX_K).find(|&k| (1u128 << (2 * k)) - (1u128 << k) + 1 == d128);
    let class = match (gold, kasami) {
        (Some(k), _) => DegreeKind::Gold(k),
        (None, Some(k)) => DegreeKind::KasamiWelch(k),
        _ => DegreeKind::Neither,
    };
    DegreeClass { d, class }
}

/// Largest field, as a power of two, on which the composition check computes spectra.
pub const LINEARIZED_SPECTRUM_BITS: u32 = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearizedReport {
    pub field: FieldSpec,
    pub rank: usize,
    pub bijective: bool,
    /// L(f(x)) reduced modulo x^q + x.
    pub composition: UPoly,
    pub matches_target: Option<bool>,
    pub f_delta: Option<u64>,
    pub composed_delta: Option<u64>,
    /// Whether f and L(f) agree on APN status; only asked when L is bijective.
    pub apn_status_matches: Option<bool>,
    pub note: Option<String>,
}

/// Compares f with L o f on `field`, where L(x) = sum c_i x^(2^i); f, the c_i
/// and `target` live over a subfield of `field` and are embedded first.
pub fn linearized_compose_apn_check(
    f: &UPoly,
    l_coeffs: &[(u32, FieldElement)],
    field: FieldSpec,
    target: Option<&UPoly>,
) -> Result<LinearizedReport> {
    let emb = build_embedding(f.field(), field)?;
    let fe = f.embed(&emb).reduce_mod_field_equation();
    let coeffs: Vec<(u32, FieldElement)> = l_coeffs.iter().map(|&(i, c)| (i, emb.embed(c))).collect();
    let rank = field.linearized_rank(&coeffs);
    let bijective = rank == field.n() as usize;
    let mut composition = UPoly::zero(field);
    for &(i, c) in &coeffs {
        let mut power = fe.clone();
        for _ in 0..i {
            power = power.square().reduce_mod_field_equation();
        }
        composition = &composition + &power.scale(c);
    }
    let composition = composition.reduce_mod_field_equation();
    let matches_target = match target {
        Some(t) => {
            Some(build_embedding(t.field(), field).map(|e| t.embed(&e).reduce_mod_field_equation() == composition)?)
        }
        None => None,
    };
    let mut report = LinearizedReport {
        field,
        rank,
        bijective,
        composition: composition.clone(),
        matches_target,
        f_delta: None,
        composed_delta: None,
        apn_status_matches: None,
        note: None,
    };
    if field.n() > LINEARIZED_SPECTRUM_BITS {
        report.note = Some(format!("spectra skipped: field exceeds 2^{LINEARIZED_SPECTRUM_BITS}"));
        return Ok(report);
    }
    let sf = spectrum(&fe)?;
    let sc = spectrum(&composition)?;
    report.f_delta = Some(sf.max_count);
    report.composed_delta = Some(sc.max_count);
    if bijective {
        report.apn_status_matches = Some(sf.is_apn == sc.is_apn);
    } else {
        report.note = Some(
            "L is not bijective on this field, so L o f is not equivalent to f and APN status is not compared".into(),
        );
    }
    Ok(report)
}
