//! Dense univariate polynomials over F_{2^e} and their factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::NotAnElement {
                value: c,
                r: field.degree(),
            });
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Poly { field, coeffs })
    }

    fn raw(field: FieldSpec, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: FieldSpec, c: u32) -> Self {
        Poly::raw(field, vec![c])
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly::constant(field, 1)
    }

    /// `c x^k`.
    pub fn monomial(field: FieldSpec, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::raw(field, coeffs)
    }

    pub fn x(field: FieldSpec) -> Self {
        Poly::monomial(field, 1, 1)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::raw(
            self.field,
            (0..n).map(|i| self.coeff(i) ^ other.coeff(i)).collect(),
        )
    }

    pub fn scale(&self, c: u32) -> Poly {
        Poly::raw(
            self.field,
            self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] ^= self.field.mul(a, b);
            }
        }
        Poly::raw(self.field, out)
    }

    pub fn pow(&self, k: u64) -> Poly {
        let mut result = Poly::one(self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::Poly("division by the zero polynomial".into()))?;
        let f = &self.field;
        let inv = f.inv(d.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = f.mul(c, inv);
            quot[i - dd] = q;
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] ^= f.mul(q, b);
            }
        }
        Ok((Poly::raw(self.field, quot), Poly::raw(self.field, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Poly("inexact division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(
            self.field
                .inv(self.lead())
                .expect("non-zero leading coefficient"),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is non-zero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        Poly::raw(self.field, coeffs)
    }

    /// Square root of a polynomial with only even-degree terms.
    pub fn sqrt(&self) -> Result<Poly> {
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, &c)| i % 2 == 1 && c != 0)
        {
            return Err(Error::Poly("not a square".into()));
        }
        Ok(Poly::raw(
            self.field,
            self.coeffs
                .iter()
                .step_by(2)
                .map(|&c| self.field.sqrt(c))
                .collect(),
        ))
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, k: u128, m: &Poly) -> Result<Poly> {
        let mut result = Poly::one(self.field).rem(m)?;
        let mut base = self.rem(m)?;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            k >>= 1;
        }
        Ok(result)
    }

    /// `self^(2^k) mod m`.
    fn frobenius_mod(&self, k: u32, m: &Poly) -> Result<Poly> {
        let mut p = self.rem(m)?;
        for _ in 0..k {
            p = p.mul_mod(&p, m)?;
        }
        Ok(p)
    }

    fn random_below(field: FieldSpec, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
        Poly::raw(
            field,
            (0..deg).map(|_| rng.gen_range(0..field.order())).collect(),
        )
    }

    /// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::Poly("cannot factor zero".into()));
        }
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5A5A);
        for (sqf, mult) in self.monic().squarefree()? {
            for (g, d) in sqf.distinct_degree()? {
                for p in g.equal_degree(d, &mut rng)? {
                    out.push((p, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.degree(), a.0.coeffs.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.degree(), b.0.coeffs.iter().rev().collect::<Vec<_>>()))
        });
        Ok(out)
    }

    fn squarefree(&self) -> Result<Vec<(Poly, u32)>> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let d = self.derivative();
        if d.is_zero() {
            for (p, m) in self.sqrt()?.squarefree()? {
                out.push((p, 2 * m));
            }
            return Ok(out);
        }
        let mut c = self.gcd(&d);
        let mut w = self.exact_div(&c)?;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y)?;
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.exact_div(&w)?;
            i += 1;
        }
        if !c.is_one() {
            for (p, m) in c.sqrt()?.squarefree()? {
                out.push((p, 2 * m));
            }
        }
        Ok(out)
    }

    fn distinct_degree(&self) -> Result<Vec<(Poly, usize)>> {
        let e = self.field.degree();
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Poly::x(self.field);
        let mut h = x.rem(&f)?;
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = h.frobenius_mod(e, &f)?;
            let g = h.add(&x).gcd(&f);
            if !g.is_one() {
                f = f.exact_div(&g)?;
                h = h.rem(&f)?;
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let deg = f.degree().unwrap();
            out.push((f, deg));
        }
        Ok(out)
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return Ok(vec![self.clone()]);
        }
        let k = self.field.degree() * d as u32;
        loop {
            let a = Poly::random_below(self.field, n, rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            // absolute trace of a in F_{2^k}[x]/(f), which splits the CRT factors
            let mut t = a.clone();
            let mut term = a.clone();
            for _ in 1..k {
                term = term.mul_mod(&term, self)?;
                t = t.add(&term);
            }
            let g = t.gcd(self);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let mut out = g.equal_degree(d, rng)?;
                out.extend(self.exact_div(&g)?.monic().equal_degree(d, rng)?);
                return Ok(out);
            }
        }
    }
}
