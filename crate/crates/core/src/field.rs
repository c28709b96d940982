//! Arithmetic in GF(2^n), n <= 32, with subfield embeddings.
//!
//! Elements are packed bit-vectors (bit i is the coefficient of x^i in the
//! polynomial basis). The field itself is a small `Copy` value; arithmetic
//! goes through it because multiplication needs the modulus.
//!
//! The default modulus of every degree is the Conway polynomial. Conway
//! polynomials are norm-compatible, so the canonical embeddings between
//! default fields commute and polynomials can be moved up and down towers
//! of extensions without bookkeeping.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::upoly::UPoly;

pub const MAX_DEGREE: u32 = 32;

/// Conway polynomials over F2, indexed by degree. Pinned: serialized
/// elements depend on this table.
const CONWAY: [u64; 33] = [
    0,
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x5b,
    0x83,
    0x11d,
    0x211,
    0x46f,
    0x805,
    0x10eb,
    0x201b,
    0x40a9,
    0x8035,
    0x1002d,
    0x20009,
    0x41403,
    0x80027,
    0x1006f3,
    0x200065,
    0x401f61,
    0x800021,
    0x101e6a9,
    0x2000145,
    0x40045d3,
    0x80016ad,
    0x100020e5,
    0x20000005,
    0x400328af,
    0x80000009,
    0x100008299,
];

/// A field element as a packed bit-vector. Only meaningful together with the
/// [`FieldSpec`] it was produced by.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub const fn from_bits(bits: u32) -> Self {
        FieldElement(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub const fn is_one(self) -> bool {
        self.0 == 1
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let v = parse_hex_u64(s)?;
        u32::try_from(v)
            .map(FieldElement)
            .map_err(|_| Error::Parse(format!("element {s} does not fit in 32 bits")))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// Addition is XOR in every GF(2^n), so it does not need the modulus.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldElement::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn parse_hex_u64(s: &str) -> Result<u64> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .ok_or_else(|| Error::Parse(format!("expected a 0x-prefixed hex string, got {s:?}")))?;
    u64::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// GF(2^n) presented as F2[x]/(modulus).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSpec {
    n: u32,
    modulus: u64,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.n, self.modulus)
    }
}

impl FieldSpec {
    /// Builds GF(2^n). Without a modulus the Conway polynomial is used.
    pub fn new(n: u32, modulus: Option<u64>) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        let modulus = match modulus {
            None => CONWAY[n as usize],
            Some(m) => {
                if gf2::degree(m) != Some(n) {
                    return Err(Error::InvalidModulus(format!("{m:#x} does not have degree {n}")));
                }
                if m & 1 == 0 {
                    // x divides the modulus; for n = 1 this is the modulus x itself,
                    // which is excluded so that x + 1 is the unique presentation of F2.
                    if n == 1 {
                        return Err(Error::InvalidModulus("the degree-1 modulus must be x + 1".into()));
                    }
                    return Err(Error::ReducibleModulus { modulus: m });
                }
                if !gf2::is_irreducible(m) {
                    return Err(Error::ReducibleModulus { modulus: m });
                }
                m
            }
        };
        Ok(FieldSpec { n, modulus })
    }

    /// The default presentation of GF(2^n).
    pub fn default_of_degree(n: u32) -> Result<Self> {
        FieldSpec::new(n, None)
    }

    pub fn f2() -> Self {
        FieldSpec { n: 1, modulus: 0x3 }
    }

    pub fn default_modulus(n: u32) -> Option<u64> {
        (1..=MAX_DEGREE).contains(&n).then(|| CONWAY[n as usize])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_default(&self) -> bool {
        CONWAY[self.n as usize] == self.modulus
    }

    pub fn contains(&self, e: FieldElement) -> bool {
        (e.0 as u64) < self.order()
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        let e = FieldElement(bits);
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::Precondition(format!(
                "{bits:#x} is not an element of GF(2^{})",
                self.n
            )))
        }
    }

    /// The class of x, which generates the field over F2.
    pub fn generator(&self) -> FieldElement {
        if self.n == 1 {
            FieldElement::ONE
        } else {
            FieldElement(2)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(|b| FieldElement(b as u32))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mask = (self.order() - 1) as u32;
        FieldElement(rng.gen::<u32>() & mask)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        FieldElement(self.reduce(clmul(a.0, b.0)))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    #[inline]
    fn reduce(&self, mut r: u64) -> u32 {
        let n = self.n;
        while r >> n != 0 {
            let top = 63 - r.leading_zeros();
            r ^= self.modulus << (top - n);
        }
        r as u32
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // extended Euclid on F2[x]: invariant  s*a == r (mod modulus)
        let (mut r0, mut r1) = (self.modulus, a.0 as u64);
        let (mut s0, mut s1) = (0u64, 1u64);
        while r1 != 1 {
            let mut q = 0u64;
            let mut r = r0;
            let d1 = gf2::degree(r1).unwrap();
            while let Some(dr) = gf2::degree(r) {
                if dr < d1 {
                    break;
                }
                q ^= 1 << (dr - d1);
                r ^= r1 << (dr - d1);
            }
            let s = s0 ^ gf2::mul(q, s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        Ok(FieldElement(self.reduce_wide(s1)))
    }

    fn reduce_wide(&self, r: u64) -> u32 {
        self.reduce(r)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut base: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// e^(2^j).
    pub fn frobenius(&self, mut e: FieldElement, j: u32) -> FieldElement {
        for _ in 0..(j % self.n) {
            e = self.square(e);
        }
        e
    }

    /// The unique square root (inverse Frobenius).
    pub fn sqrt(&self, e: FieldElement) -> FieldElement {
        self.frobenius(e, self.n - 1)
    }

    /// Absolute trace to F2.
    pub fn trace(&self, e: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut t = e;
        for _ in 0..self.n {
            acc += t;
            t = self.square(t);
        }
        acc
    }

    /// F2-rank of the linearized map x -> sum_i c_i x^(2^i) on this field.
    pub fn linearized_rank(&self, coeffs: &[(u32, FieldElement)]) -> usize {
        let apply = |x: FieldElement| {
            coeffs.iter().fold(FieldElement::ZERO, |acc, &(i, c)| {
                acc + self.mul(c, self.frobenius(x, i))
            })
        };
        let images: Vec<u64> = (0..self.n).map(|j| apply(FieldElement(1 << j)).0 as u64).collect();
        gf2::rank(images)
    }

    /// The smallest d dividing n with e^(2^d) = e, i.e. the degree of the
    /// subfield generated by e.
    pub fn element_degree(&self, e: FieldElement) -> u32 {
        (1..=self.n)
            .filter(|d| self.n.is_multiple_of(*d))
            .find(|&d| self.frobenius(e, d) == e)
            .unwrap_or(self.n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "modulus": format!("{:#x}", self.modulus) })
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: u32,
            modulus: String,
        }
        Repr {
            n: self.n,
            modulus: format!("{:#x}", self.modulus),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            n: u32,
            #[serde(default)]
            modulus: Option<String>,
        }
        let r = Repr::deserialize(d)?;
        let modulus = r
            .modulus
            .as_deref()
            .map(parse_hex_u64)
            .transpose()
            .map_err(serde::de::Error::custom)?;
        FieldSpec::new(r.n, modulus).map_err(serde::de::Error::custom)
    }
}

#[inline]
fn clmul(a: u32, b: u32) -> u64 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul_pclmul(a, b) };
        }
    }
    clmul_soft(a, b)
}

#[inline]
fn clmul_soft(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut r = 0u64;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_pclmul(a: u32, b: u32) -> u64 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_cvtsi64_si128};
    let x = _mm_cvtsi64_si128(a as i64);
    let y = _mm_cvtsi64_si128(b as i64);
    _mm_cvtsi128_si64(_mm_clmulepi64_si128(x, y, 0)) as u64
}

/// A field homomorphism GF(2^m) -> GF(2^M), m | M.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    source: FieldSpec,
    target: FieldSpec,
    image_of_generator: FieldElement,
    /// image of x^i for i < m
    basis: Vec<u32>,
    /// echelon form of `basis` for preimages: (row, combination of source bits)
    echelon: Vec<(u64, u32)>,
}

impl EmbeddingMap {
    fn from_root(source: FieldSpec, target: FieldSpec, root: FieldElement) -> Self {
        let mut basis = Vec::with_capacity(source.n as usize);
        let mut p = FieldElement::ONE;
        for _ in 0..source.n {
            basis.push(p.0);
            p = target.mul(p, root);
        }
        let mut echelon: Vec<(u64, u32)> = Vec::new();
        for (i, &b) in basis.iter().enumerate() {
            let mut row = b as u64;
            let mut combo = 1u32 << i;
            for &(r, c) in &echelon {
                if row ^ r < row {
                    row ^= r;
                    combo ^= c;
                }
            }
            if row != 0 {
                echelon.push((row, combo));
                echelon.sort_by_key(|e| std::cmp::Reverse(e.0));
            }
        }
        EmbeddingMap {
            source,
            target,
            image_of_generator: root,
            basis,
            echelon,
        }
    }

    pub fn source(&self) -> FieldSpec {
        self.source
    }

    pub fn target(&self) -> FieldSpec {
        self.target
    }

    pub fn image_of_generator(&self) -> FieldElement {
        self.image_of_generator
    }

    #[inline]
    pub fn embed(&self, u: FieldElement) -> FieldElement {
        let mut bits = u.0;
        let mut acc = 0u32;
        while bits != 0 {
            acc ^= self.basis[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        FieldElement(acc)
    }

    /// The element of the source mapping to `v`, if `v` lies in the image.
    pub fn preimage(&self, v: FieldElement) -> Option<FieldElement> {
        let mut row = v.0 as u64;
        let mut combo = 0u32;
        for &(r, c) in &self.echelon {
            if row ^ r < row {
                row ^= r;
                combo ^= c;
            }
        }
        (row == 0).then_some(FieldElement(combo))
    }

    fn spot_check(&self) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..16).all(|_| {
            let u = self.source.random(&mut rng);
            let v = self.source.random(&mut rng);
            self.embed(self.source.mul(u, v)) == self.target.mul(self.embed(u), self.embed(v))
                && self.embed(u + v) == self.embed(u) + self.embed(v)
        })
    }
}

type EmbeddingCache = Mutex<HashMap<(FieldSpec, FieldSpec), Arc<EmbeddingMap>>>;

fn embedding_cache() -> &'static EmbeddingCache {
    static CACHE: OnceLock<EmbeddingCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the cache) the embedding of `source` into `target`.
///
/// Between default fields the map sends the Conway generator to
/// x^((2^M - 1)/(2^m - 1)); a non-default source is first identified with the
/// default field of its degree. Into a non-default target the least root of
/// the source modulus is used.
pub fn build_embedding(source: FieldSpec, target: FieldSpec) -> Result<Arc<EmbeddingMap>> {
    if !target.n.is_multiple_of(source.n) {
        return Err(Error::NotASubfield {
            sub: source.n,
            target: target.n,
        });
    }
    if let Some(e) = embedding_cache().lock().unwrap().get(&(source, target)) {
        return Ok(e.clone());
    }
    let root = if source == target {
        source.generator()
    } else if target.is_default() {
        let conway_root = |src: FieldSpec| {
            let e = (target.order() - 1) / (src.order() - 1);
            target.pow(target.generator(), e)
        };
        if source.is_default() {
            conway_root(source)
        } else {
            let canon = FieldSpec::default_of_degree(source.n)?;
            let iso = least_root(source.modulus, canon)?;
            let up = EmbeddingMap::from_root(canon, target, conway_root(canon));
            up.embed(iso)
        }
    } else {
        least_root(source.modulus, target)?
    };
    debug_assert_eq!(eval_f2_poly(source.modulus, root, target), FieldElement::ZERO);
    let map = EmbeddingMap::from_root(source, target, root);
    assert!(
        map.spot_check(),
        "embedding {source:?} -> {target:?} is not a homomorphism"
    );
    let map = Arc::new(map);
    embedding_cache().lock().unwrap().insert((source, target), map.clone());
    Ok(map)
}

fn eval_f2_poly(poly: u64, at: FieldElement, field: FieldSpec) -> FieldElement {
    let deg = gf2::degree(poly).unwrap_or(0);
    let mut acc = FieldElement::ZERO;
    for i in (0..=deg).rev() {
        acc = field.mul(acc, at);
        if poly >> i & 1 == 1 {
            acc += FieldElement::ONE;
        }
    }
    acc
}

/// Least (by bits) root of an F2 polynomial inside `field`.
fn least_root(poly: u64, field: FieldSpec) -> Result<FieldElement> {
    let found = if field.n <= 20 {
        field.elements().find(|&e| eval_f2_poly(poly, e, field).is_zero())
    } else {
        let coeffs = (0..=gf2::degree(poly).unwrap_or(0))
            .map(|i| FieldElement((poly >> i & 1) as u32))
            .collect();
        UPoly::from_coeffs(field, coeffs).roots().into_iter().min()
    };
    found.ok_or(Error::NotASubfield {
        sub: gf2::degree(poly).unwrap_or(0),
        target: field.n,
    })
}

/// The smallest default field containing both GF(2^a) and GF(2^b).
pub fn compositum(a: u32, b: u32) -> Result<FieldSpec> {
    let l = lcm(a, b);
    if l > MAX_DEGREE {
        return Err(Error::FieldTooLarge {
            bits: l,
            limit: MAX_DEGREE,
        });
    }
    FieldSpec::default_of_degree(l)
}

pub(crate) fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

pub(crate) fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Polynomials over F2 packed into machine words.
pub(crate) mod gf2 {
    pub fn degree(p: u64) -> Option<u32> {
        (p != 0).then(|| 63 - p.leading_zeros())
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        let mut r = 0u64;
        let mut b = b;
        while b != 0 {
            r ^= a << b.trailing_zeros();
            b &= b - 1;
        }
        r
    }

    pub fn rem(mut a: u64, m: u64) -> u64 {
        let dm = degree(m).expect("modulus is nonzero");
        while let Some(da) = degree(a) {
            if da < dm {
                break;
            }
            a ^= m << (da - dm);
        }
        a
    }

    fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        // operands have degree < deg m <= 32, so the product fits in 64 bits
        rem(mul(a, b), m)
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    /// x^(2^k) mod m.
    fn frob_x(k: u32, m: u64) -> u64 {
        let mut t = rem(2, m);
        for _ in 0..k {
            t = mulmod(t, t, m);
        }
        t
    }

    /// Rabin's test.
    pub fn is_irreducible(m: u64) -> bool {
        let Some(n) = degree(m) else { return false };
        if n == 0 {
            return false;
        }
        if frob_x(n, m) != rem(2, m) {
            return false;
        }
        super::prime_factors(n as u64).into_iter().all(|p| {
            let t = frob_x(n / p as u32, m) ^ rem(2, m);
            degree(gcd(m, t)) == Some(0)
        })
    }

    /// Rank over F2 of a set of bit-vectors.
    pub fn rank(mut rows: Vec<u64>) -> usize {
        let mut rank = 0;
        for bit in (0..64).rev() {
            let Some(pos) = rows[rank..].iter().position(|r| r >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, rank + pos);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r >> bit & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}
