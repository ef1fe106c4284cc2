//! Arithmetic in the binary fields F_{2^r}, r <= 20.
//!
//! Elements are plain `u32` residues (bit `i` is the coefficient of `x^i`)
//! interpreted relative to a [`FieldSpec`]. The modulus for each degree is
//! fixed by [`MODULI`], so element encodings are reproducible everywhere.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 20;

/// One irreducible (in fact primitive) polynomial per degree, bit-encoded.
/// `MODULI[r - 1]` is the modulus of F_{2^r}.
pub const MODULI: [u32; 20] = [
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
    0x20009,  // x^17 + x^3 + 1
    0x40081,  // x^18 + x^7 + 1
    0x80027,  // x^19 + x^5 + x^2 + x + 1
    0x100009, // x^20 + x^3 + 1
];

/// Handle for F_{2^r} under the table modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    r: u32,
    modulus: u32,
}

pub fn make_field(r: u32) -> Result<FieldSpec> {
    FieldSpec::new(r)
}

impl FieldSpec {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::FieldDegree(r));
        }
        Ok(FieldSpec {
            r,
            modulus: MODULI[(r - 1) as usize],
        })
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.r
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.order()
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order()
    }

    pub fn elem(&self, bits: u32) -> Result<FieldElement> {
        FieldElement::new(*self, bits)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut prod: u64 = 0;
        let mut a64 = a as u64;
        let mut b = b;
        while b != 0 {
            if b & 1 != 0 {
                prod ^= a64;
            }
            a64 <<= 1;
            b >>= 1;
        }
        let m = self.modulus as u64;
        while prod >> self.r != 0 {
            let top = 63 - prod.leading_zeros();
            prod ^= m << (top - self.r);
        }
        prod as u32
    }

    #[inline]
    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (self.order() - 2) as u64))
    }

    /// Division `a / b`; panics on `b == 0` (callers guard this).
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    /// x^(2^e).
    pub fn frobenius(&self, x: u32, e: u32) -> u32 {
        let mut y = x;
        for _ in 0..(e % self.r) {
            y = self.square(y);
        }
        y
    }

    pub fn sqrt(&self, x: u32) -> u32 {
        self.frobenius(x, self.r - 1)
    }

    /// Absolute trace to F_2.
    pub fn trace(&self, x: u32) -> u32 {
        self.rel_trace(x, 1).expect("1 divides every degree")
    }

    /// Trace from F_{2^r} down to the subfield F_{2^sub}.
    pub fn rel_trace(&self, x: u32, sub: u32) -> Result<u32> {
        self.check_subfield(sub)?;
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.r / sub {
            acc ^= y;
            y = self.frobenius(y, sub);
        }
        Ok(acc)
    }

    /// Norm from F_{2^r} down to the subfield F_{2^sub}.
    pub fn rel_norm(&self, x: u32, sub: u32) -> Result<u32> {
        self.check_subfield(sub)?;
        let mut acc = 1;
        let mut y = x;
        for _ in 0..self.r / sub {
            acc = self.mul(acc, y);
            y = self.frobenius(y, sub);
        }
        Ok(acc)
    }

    fn check_subfield(&self, sub: u32) -> Result<()> {
        if sub == 0 || !self.r.is_multiple_of(sub) {
            return Err(Error::NonDivisibleDegree { sub, r: self.r });
        }
        Ok(())
    }

    pub fn in_subfield(&self, x: u32, sub: u32) -> bool {
        sub != 0 && self.r.is_multiple_of(sub) && self.frobenius(x, sub) == x
    }

    /// Elements of the subfield F_{2^sub}, ascending by encoding.
    pub fn subfield_elements(&self, sub: u32) -> Result<Vec<u32>> {
        self.check_subfield(sub)?;
        Ok(self
            .elements()
            .filter(|&x| self.frobenius(x, sub) == x)
            .collect())
    }

    /// The Tits endomorphism x -> x^(2 n_0) of F_n, n = 2^(2m+1), n_0 = 2^m.
    pub fn tits_power(&self, x: u32) -> Result<u32> {
        if self.r.is_multiple_of(2) {
            return Err(Error::NotTitsField(self.r));
        }
        let m = (self.r - 1) / 2;
        Ok(self.frobenius(x, m + 1))
    }

    /// All `y` with `y^2 + y = c`; empty or a pair `{y, y + 1}`.
    pub fn solve_artin_schreier(&self, c: u32) -> Vec<u32> {
        if self.trace(c) != 0 {
            return Vec::new();
        }
        // y -> y^2 + y is F_2-linear; solve the r x r system by elimination.
        let r = self.r as usize;
        // rows: (column image bits, which basis vectors combine to it)
        let mut rows: Vec<(u32, u32)> = (0..r)
            .map(|k| {
                let b = 1u32 << k;
                (self.square(b) ^ b, b)
            })
            .collect();
        let mut pivots: Vec<(u32, u32)> = Vec::new();
        for row in rows.iter_mut() {
            let (mut v, mut combo) = *row;
            for &(pv, pc) in &pivots {
                if v ^ pv < v {
                    v ^= pv;
                    combo ^= pc;
                }
            }
            if v != 0 {
                pivots.push((v, combo));
                pivots.sort_by_key(|p| std::cmp::Reverse(p.0));
            }
        }
        let mut target = c;
        let mut y = 0;
        for &(pv, pc) in &pivots {
            if target ^ pv < target {
                target ^= pv;
                y ^= pc;
            }
        }
        debug_assert_eq!(target, 0, "trace-zero element must lie in the image");
        let mut out = vec![y, y ^ 1];
        out.sort_unstable();
        out
    }

    /// Smallest element (by encoding) generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let order = (self.order() - 1) as u64;
        if order == 1 {
            return 1;
        }
        let primes = prime_factors(order);
        (2..self.order())
            .find(|&g| primes.iter().all(|&p| self.pow(g, order / p) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Multiplicative order of a non-zero element.
    pub fn mult_order(&self, x: u32) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut ord = (self.order() - 1) as u64;
        for p in prime_factors(ord) {
            while ord.is_multiple_of(p) && self.pow(x, ord / p) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A field element tagged with its field; mixing fields is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    bits: u32,
}

impl FieldElement {
    pub fn new(spec: FieldSpec, bits: u32) -> Result<Self> {
        if !spec.contains(bits) {
            return Err(Error::NotAnElement {
                value: bits,
                r: spec.r,
            });
        }
        Ok(FieldElement { spec, bits })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn same(&self, other: &Self) -> Result<FieldSpec> {
        if self.spec != other.spec {
            return Err(Error::MixedFields(self.spec.r, other.spec.r));
        }
        Ok(self.spec)
    }

    fn with(&self, bits: u32) -> Self {
        FieldElement {
            spec: self.spec,
            bits,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let s = self.same(other)?;
        Ok(self.with(s.add(self.bits, other.bits)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let s = self.same(other)?;
        Ok(self.with(s.mul(self.bits, other.bits)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.spec.inv(self.bits)?))
    }

    pub fn pow(&self, k: u64) -> Self {
        self.with(self.spec.pow(self.bits, k))
    }

    pub fn frobenius(&self, e: u32) -> Self {
        self.with(self.spec.frobenius(self.bits, e))
    }

    pub fn tits_power(&self) -> Result<Self> {
        Ok(self.with(self.spec.tits_power(self.bits)?))
    }

    pub fn rel_trace(&self, sub: u32) -> Result<Self> {
        Ok(self.with(self.spec.rel_trace(self.bits, sub)?))
    }

    pub fn rel_norm(&self, sub: u32) -> Result<Self> {
        Ok(self.with(self.spec.rel_norm(self.bits, sub)?))
    }

    pub fn solve_artin_schreier(&self) -> Vec<Self> {
        self.spec
            .solve_artin_schreier(self.bits)
            .into_iter()
            .map(|b| self.with(b))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    r: u32,
    val: u32,
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            r: self.spec.r,
            val: self.bits,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        let spec = FieldSpec::new(repr.r).map_err(serde::de::Error::custom)?;
        FieldElement::new(spec, repr.val).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mod(a: u64, m: u64) -> u64 {
        let dm = 63 - m.leading_zeros();
        let mut a = a;
        while a != 0 && 63 - a.leading_zeros() >= dm {
            a ^= m << (63 - a.leading_zeros() - dm);
        }
        a
    }

    // trial division by every polynomial of degree 1..=deg/2
    fn irreducible_by_trial_division(m: u32) -> bool {
        let deg = 31 - m.leading_zeros();
        for d in 1..=deg / 2 {
            for cand in (1u64 << d)..(1u64 << (d + 1)) {
                if poly_mod(m as u64, cand) == 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn make_field_orders() {
        assert_eq!(make_field(1).unwrap().order(), 2);
        assert_eq!(make_field(3).unwrap().order(), 8);
        let f16 = make_field(4).unwrap();
        assert_eq!(f16.order(), 16);
        assert_eq!(f16.modulus(), 0x13);
        assert_eq!(make_field(4).unwrap(), f16);
        assert!(matches!(make_field(0), Err(Error::FieldDegree(0))));
        assert!(matches!(make_field(21), Err(Error::FieldDegree(21))));
    }

    #[test]
    fn moduli_are_irreducible() {
        for r in 1..=MAX_DEGREE {
            let m = MODULI[(r - 1) as usize];
            assert_eq!(31 - m.leading_zeros(), r);
            assert!(irreducible_by_trial_division(m), "modulus for r={r}");
        }
    }

    #[test]
    fn x_is_primitive_for_table_moduli() {
        for r in 2..=16 {
            let f = make_field(r).unwrap();
            assert_eq!(f.mult_order(2).unwrap(), (f.order() - 1) as u64, "r={r}");
            assert_eq!(f.primitive_element(), 2);
        }
    }

    #[test]
    fn exhaustive_inverse_and_lagrange() {
        for r in 1..=8 {
            let f = make_field(r).unwrap();
            for x in 1..f.order() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                assert_eq!(f.pow(x, (f.order() - 1) as u64), 1);
                assert_eq!(f.add(x, x), 0);
            }
        }
        assert!(matches!(
            make_field(4).unwrap().inv(0),
            Err(Error::ZeroInverse)
        ));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5A5A);
        for r in 1..=8 {
            let f = make_field(r).unwrap();
            for _ in 0..10_000 {
                let (a, b, c) = (
                    rng.gen_range(0..f.order()),
                    rng.gen_range(0..f.order()),
                    rng.gen_range(0..f.order()),
                );
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
    }

    #[test]
    fn frobenius_basics() {
        let f = make_field(5).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 0), x);
            assert_eq!(f.frobenius(x, 5), x);
            assert_eq!(f.frobenius(x, 1), f.mul(x, x));
            assert_eq!(f.square(f.sqrt(x)), x);
        }
    }

    #[test]
    fn trace_is_balanced() {
        for r in 1..=10 {
            let f = make_field(r).unwrap();
            let zeros = f.elements().filter(|&x| f.trace(x) == 0).count();
            assert_eq!(zeros as u32, f.order() / 2, "r={r}");
            assert!(f.elements().all(|x| f.trace(x) <= 1));
        }
    }

    #[test]
    fn relative_trace_and_norm_f16_over_f4() {
        let f = make_field(4).unwrap();
        assert_eq!(f.rel_trace(0, 2).unwrap(), 0);
        assert_eq!(f.rel_norm(1, 2).unwrap(), 1);
        let zero_trace = f
            .elements()
            .filter(|&x| f.rel_trace(x, 2).unwrap() == 0)
            .count();
        // kernel of a surjective F_4-linear map F_16 -> F_4
        assert_eq!(zero_trace, 4);
        assert_eq!(f.elements().filter(|&x| f.trace(x) == 0).count(), 8);
        let mut fibers = std::collections::HashMap::new();
        for x in 1..16 {
            let n = f.rel_norm(x, 2).unwrap();
            assert!(f.in_subfield(n, 2));
            *fibers.entry(n).or_insert(0) += 1;
        }
        assert_eq!(fibers.len(), 3);
        assert!(fibers.values().all(|&c| c == 5));
        assert!(matches!(
            f.rel_trace(3, 3),
            Err(Error::NonDivisibleDegree { .. })
        ));
    }

    #[test]
    fn tits_power_in_f8() {
        let f = make_field(3).unwrap();
        assert_eq!(f.tits_power(0).unwrap(), 0);
        assert_eq!(f.tits_power(1).unwrap(), 1);
        for x in f.elements() {
            assert_eq!(f.tits_power(x).unwrap(), f.frobenius(x, 2));
            let t2 = f.tits_power(f.tits_power(x).unwrap()).unwrap();
            assert_eq!(t2, f.square(x));
        }
        assert!(matches!(
            make_field(4).unwrap().tits_power(3),
            Err(Error::NotTitsField(4))
        ));
    }

    #[test]
    fn tits_power_is_an_automorphism_in_f32() {
        let f = make_field(5).unwrap();
        let img: std::collections::HashSet<u32> =
            f.elements().map(|x| f.tits_power(x).unwrap()).collect();
        assert_eq!(img.len(), 32);
        for a in f.elements() {
            for b in f.elements() {
                let t = |x| f.tits_power(x).unwrap();
                assert_eq!(t(f.mul(a, b)), f.mul(t(a), t(b)));
                assert_eq!(t(a ^ b), t(a) ^ t(b));
            }
            let t2 = f.tits_power(f.tits_power(a).unwrap()).unwrap();
            assert_eq!(t2, f.square(a));
        }
    }

    #[test]
    fn artin_schreier_solutions() {
        let f4 = make_field(2).unwrap();
        assert_eq!(f4.solve_artin_schreier(0), vec![0, 1]);
        for c in f4.elements() {
            let brute: Vec<u32> = f4.elements().filter(|&y| f4.square(y) ^ y == c).collect();
            assert_eq!(f4.solve_artin_schreier(c), brute);
            if f4.trace(c) == 1 {
                assert!(brute.is_empty());
            }
        }
        for r in [3, 4, 6, 9] {
            let f = make_field(r).unwrap();
            for c in f.elements() {
                let sols = f.solve_artin_schreier(c);
                assert_eq!(sols.is_empty(), f.trace(c) == 1);
                for &y in &sols {
                    assert_eq!(f.square(y) ^ y, c);
                    assert!(sols.contains(&(y ^ 1)));
                }
            }
        }
    }

    #[test]
    fn typed_elements_reject_mixing_and_round_trip() {
        let a = make_field(3).unwrap().elem(5).unwrap();
        let b = make_field(4).unwrap().elem(5).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MixedFields(3, 4))));
        assert!(make_field(3).unwrap().elem(8).is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"r":3,"val":5}"#);
        let back: FieldElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<FieldElement>(r#"{"r":3,"val":9}"#).is_err());
    }
}
