//! The linear groups PSL(2,n), Sz(n), PGU(3,n), PSU(3,n) in their natural
//! 2-transitive actions, and SU(3,n) as a matrix group acting on vectors.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, log2_exact};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::perm::{Action, ChainOptions, PermGroup, Permutation, StabChain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    PSL2,
    SZ,
    PGU3,
    PSU3,
    SU3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::PSL2 => "PSL2",
            Family::SZ => "SZ",
            Family::PGU3 => "PGU3",
            Family::PSU3 => "PSU3",
            Family::SU3 => "SU3",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psl2" => Ok(Family::PSL2),
            "sz" => Ok(Family::SZ),
            "pgu3" => Ok(Family::PGU3),
            "psu3" => Ok(Family::PSU3),
            "su3" => Ok(Family::SU3),
            other => Err(Error::InvalidFamily(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyId {
    pub name: Family,
    pub n: u64,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.n)
    }
}

impl FamilyId {
    pub fn new(name: Family, n: u64) -> Result<Self> {
        let r = log2_exact(n)
            .ok_or_else(|| Error::InvalidFamily(format!("n = {n} is not a power of 2")))?;
        if r < 2 {
            return Err(Error::InvalidFamily(format!("n = {n} must be at least 4")));
        }
        if name == Family::SZ && r % 2 == 0 {
            return Err(Error::InvalidFamily(format!(
                "Sz(n) needs n = 2^(2m+1) >= 8, got {n}"
            )));
        }
        // F_{n^2} must fit the field table
        if matches!(name, Family::PGU3 | Family::PSU3 | Family::SU3)
            && 2 * r > crate::field::MAX_DEGREE
        {
            return Err(Error::InvalidFamily(format!(
                "n = {n} too large for F_(n^2)"
            )));
        }
        if r > crate::field::MAX_DEGREE {
            return Err(Error::InvalidFamily(format!("n = {n} too large")));
        }
        Ok(FamilyId { name, n })
    }

    pub fn r(&self) -> u32 {
        self.n.trailing_zeros()
    }

    /// `n_0 = sqrt(n/2)` for Suzuki parameters.
    pub fn n0(&self) -> Option<u64> {
        (self.r() % 2 == 1).then(|| 1u64 << ((self.r() - 1) / 2))
    }

    /// `gcd(3, n + 1)`.
    pub fn mu(&self) -> u64 {
        gcd(3, self.n + 1)
    }
}

pub fn expected_order(f: &FamilyId) -> u128 {
    let n = f.n as u128;
    let unitary = (n * n * n + 1) * n * n * n * (n * n - 1);
    match f.name {
        Family::PSL2 => n * n * n - n,
        Family::SZ => (n * n + 1) * n * n * (n - 1),
        Family::PGU3 | Family::SU3 => unitary,
        Family::PSU3 => unitary / f.mu() as u128,
    }
}

/// `|S_P|`, `|S_P^(1)|`, `|H|` and the degree of the natural action.
/// For SU3 these refer to the action on the unital points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerConstants {
    pub sp: u128,
    pub sp1: u128,
    pub h: u128,
    pub degree: u128,
}

pub fn stabilizer_constants(f: &FamilyId) -> StabilizerConstants {
    let n = f.n as u128;
    let mu = f.mu() as u128;
    let (sp1, h, degree) = match f.name {
        Family::PSL2 => (n, n - 1, n + 1),
        Family::SZ => (n * n, n - 1, n * n + 1),
        Family::PGU3 | Family::SU3 => (n * n * n, n * n - 1, n * n * n + 1),
        Family::PSU3 => (n * n * n, (n * n - 1) / mu, n * n * n + 1),
    };
    StabilizerConstants {
        sp: sp1 * h,
        sp1,
        h,
        degree,
    }
}

/// Point label: a field element, an affine pair, or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointLabel {
    Elem(u32),
    Pair(u32, u32),
    Infinity,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Elem(x) => write!(f, "{x}"),
            PointLabel::Pair(a, b) => write!(f, "({a},{b})"),
            PointLabel::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for PointLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PointLabel::Elem(x) => s.serialize_u32(*x),
            PointLabel::Pair(a, b) => [*a, *b].serialize(s),
            PointLabel::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PointLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "inf" => Ok(PointLabel::Infinity),
            serde_json::Value::Number(n) => n
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .map(PointLabel::Elem)
                .ok_or_else(|| de::Error::custom("label out of range")),
            serde_json::Value::Array(v) if v.len() == 2 => {
                let get = |x: &serde_json::Value| x.as_u64().and_then(|v| u32::try_from(v).ok());
                match (get(&v[0]), get(&v[1])) {
                    (Some(a), Some(b)) => Ok(PointLabel::Pair(a, b)),
                    _ => Err(de::Error::custom("bad pair label")),
                }
            }
            other => Err(de::Error::custom(format!("bad point label {other}"))),
        }
    }
}

/// A linear group in its natural action, with the Sylow 2-subgroup fixing
/// infinity and a cyclic complement in the stabilizer of infinity and 0.
#[derive(Clone, Debug)]
pub struct NaturalAction {
    pub family: FamilyId,
    pub group: PermGroup,
    pub labels: Vec<PointLabel>,
    pub infinity: usize,
    pub sylow2: Vec<Permutation>,
    pub complement: Vec<Permutation>,
}

impl NaturalAction {
    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &PointLabel) -> Option<usize> {
        // affine labels are sorted, infinity is last
        if *label == PointLabel::Infinity {
            return Some(self.infinity);
        }
        self.labels[..self.infinity].binary_search(label).ok()
    }

    pub fn sylow2_group(&self) -> Result<PermGroup> {
        PermGroup::new(self.degree(), self.sylow2.clone())
    }

    pub fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.name,
            "n": self.family.n,
            "expected_order": expected_order(&self.family).to_string(),
            "labels": self.labels,
        })
    }
}

/// Builds the natural action of a projective family.
pub fn build(f: &FamilyId) -> Result<NaturalAction> {
    match f.name {
        Family::PSL2 => build_psl2(f.n),
        Family::SZ => build_sz(f.n),
        Family::PGU3 => build_pgu3(f.n),
        Family::PSU3 => build_psu3(f.n),
        Family::SU3 => Err(Error::Unsupported(
            "SU3 has no faithful unital action; use build_su3_matrix".into(),
        )),
    }
}

fn f2_basis(elems: impl Iterator<Item = u32>) -> Vec<u32> {
    // greedy basis over F_2 using xor elimination
    let mut reduced: Vec<u32> = Vec::new();
    let mut basis = Vec::new();
    for x in elems {
        let mut y = x;
        for &b in &reduced {
            y = y.min(y ^ b);
        }
        if y != 0 {
            reduced.push(y);
            reduced.sort_unstable_by(|a, b| b.cmp(a));
            basis.push(x);
        }
    }
    basis
}

fn mobius(f: &FieldSpec, m: [u32; 4], x: Option<u32>) -> Option<u32> {
    let [a, b, c, d] = m;
    match x {
        None => (c != 0).then(|| f.div(a, c)),
        Some(x) => {
            let den = f.mul(c, x) ^ d;
            (den != 0).then(|| f.div(f.mul(a, x) ^ b, den))
        }
    }
}

pub fn build_psl2(n: u64) -> Result<NaturalAction> {
    let family = FamilyId::new(Family::PSL2, n)?;
    let f = FieldSpec::new(family.r())?;
    let inf = n as usize;
    let perm = |m: [u32; 4]| {
        Permutation::from_fn(inf + 1, |i| {
            let x = (i != inf).then_some(i as u32);
            mobius(&f, m, x).map(|y| y as usize).unwrap_or(inf)
        })
    };
    let a = f.primitive_element();
    let gens = vec![
        perm([1, 1, 0, 1])?,
        perm([a, 0, 0, 1])?,
        perm([0, 1, 1, 0])?,
    ];
    let sylow2 = (0..family.r())
        .map(|k| perm([1, 1 << k, 0, 1]))
        .collect::<Result<Vec<_>>>()?;
    let mut labels: Vec<PointLabel> = (0..n as u32).map(PointLabel::Elem).collect();
    labels.push(PointLabel::Infinity);
    Ok(NaturalAction {
        family,
        group: PermGroup::new(inf + 1, gens)?,
        labels,
        infinity: inf,
        sylow2,
        complement: vec![perm([a, 0, 0, 1])?],
    })
}

/// Points of the unital `y^n + y = x^(n+1)` over F_(n^2), plus `(0:1:0)`.
#[derive(Clone, Debug)]
pub struct Unital {
    pub field: FieldSpec,
    pub n: u64,
    pub points: Vec<(u32, u32)>,
    index: Vec<u32>,
}

const NO_POINT: u32 = u32::MAX;

impl Unital {
    pub fn new(n: u64) -> Result<Self> {
        let r = log2_exact(n)
            .ok_or_else(|| Error::InvalidFamily(format!("n = {n} is not a power of 2")))?;
        let field = FieldSpec::new(2 * r)?;
        let q = field.order();
        let mut points = Vec::new();
        let mut index = vec![NO_POINT; (q as usize) * (q as usize)];
        for x in 0..q {
            let rhs = field.pow(x, n + 1);
            for y in 0..q {
                if field.pow(y, n) ^ y == rhs {
                    index[(x * q + y) as usize] = points.len() as u32;
                    points.push((x, y));
                }
            }
        }
        Ok(Unital {
            field,
            n,
            points,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.points.len() + 1
    }

    pub fn infinity(&self) -> usize {
        self.points.len()
    }

    pub fn labels(&self) -> Vec<PointLabel> {
        let mut labels: Vec<PointLabel> = self
            .points
            .iter()
            .map(|&(x, y)| PointLabel::Pair(x, y))
            .collect();
        labels.push(PointLabel::Infinity);
        labels
    }

    pub fn index_of(&self, x: u32, y: u32) -> Option<usize> {
        let q = self.field.order();
        if x >= q || y >= q {
            return None;
        }
        match self.index[(x * q + y) as usize] {
            NO_POINT => None,
            i => Some(i as usize),
        }
    }

    pub fn vector(&self, i: usize) -> [u32; 3] {
        if i == self.infinity() {
            [0, 1, 0]
        } else {
            let (x, y) = self.points[i];
            [x, y, 1]
        }
    }

    /// Index of the projective point `(X:Y:Z)`, if it lies on the unital.
    pub fn projective_index(&self, v: [u32; 3]) -> Option<usize> {
        let f = &self.field;
        if v[2] != 0 {
            let z = f.inv(v[2]).ok()?;
            self.index_of(f.mul(v[0], z), f.mul(v[1], z))
        } else if v[0] == 0 && v[1] != 0 {
            Some(self.infinity())
        } else {
            None
        }
    }

    pub fn matrix_perm(&self, m: &Mat3) -> Result<Permutation> {
        let mut images = Vec::with_capacity(self.degree());
        for i in 0..self.degree() {
            let w = m.apply(self.vector(i));
            let j = self.projective_index(w).ok_or_else(|| {
                Error::Mismatch(format!("matrix maps unital point {i} off the unital"))
            })?;
            images.push(j as u32);
        }
        Permutation::new(images)
    }

    /// Some `b` with `b^n + b = a^(n+1)`, the smallest by encoding.
    pub fn translation_b(&self, a: u32) -> u32 {
        let f = &self.field;
        let rhs = f.pow(a, self.n + 1);
        f.elements()
            .find(|&b| f.pow(b, self.n) ^ b == rhs)
            .expect("relative trace is onto F_n")
    }

    /// `Psi_{a,b}: (X,Y,Z) -> (X + aZ, Y + a^n X + bZ, Z)`.
    pub fn psi(&self, a: u32, b: u32) -> Mat3 {
        let an = self.field.pow(a, self.n);
        Mat3::new(self.field, [[1, 0, a], [an, 1, b], [0, 0, 1]])
    }

    /// `M_c: (x, y) -> (cx, c^(n+1) y)`.
    pub fn scaling(&self, c: u32) -> Mat3 {
        Mat3::new(
            self.field,
            [[c, 0, 0], [0, self.field.pow(c, self.n + 1), 0], [0, 0, 1]],
        )
    }

    /// Swaps `Y` and `Z`.
    pub fn phi(&self) -> Mat3 {
        Mat3::new(self.field, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    }

    /// Generators `Psi_{a,b(a)}` over an F_2-basis of F_(n^2) and `Psi_{0,b}` over a basis of F_n.
    pub fn translation_generators(&self) -> Vec<Mat3> {
        let f = &self.field;
        let mut out: Vec<Mat3> = (0..f.degree())
            .map(|k| self.psi(1 << k, self.translation_b(1 << k)))
            .collect();
        let sub = f
            .subfield_elements(f.degree() / 2)
            .expect("half degree divides");
        for b in f2_basis(sub.into_iter().filter(|&b| b != 0)) {
            out.push(self.psi(0, b));
        }
        out
    }
}

fn build_unital_group(n: u64, name: Family) -> Result<NaturalAction> {
    let family = FamilyId::new(name, n)?;
    let u = Unital::new(n)?;
    let c = u.field.primitive_element();
    let c = if name == Family::PSU3 {
        u.field.pow(c, family.mu())
    } else {
        c
    };
    let gens = vec![
        u.matrix_perm(&u.psi(1, u.translation_b(1)))?,
        u.matrix_perm(&u.scaling(c))?,
        u.matrix_perm(&u.phi())?,
    ];
    let sylow2 = u
        .translation_generators()
        .iter()
        .map(|m| u.matrix_perm(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(NaturalAction {
        family,
        group: PermGroup::new(u.degree(), gens)?,
        labels: u.labels(),
        infinity: u.infinity(),
        sylow2,
        complement: vec![u.matrix_perm(&u.scaling(c))?],
    })
}

pub fn build_pgu3(n: u64) -> Result<NaturalAction> {
    build_unital_group(n, Family::PGU3)
}

/// The index-`mu` subgroup of PGU(3,n), generated with `M_(c^mu)` in place of `M_c`.
pub fn build_psu3(n: u64) -> Result<NaturalAction> {
    build_unital_group(n, Family::PSU3)
}

/// Points `(a, b)` of F_n^2 and infinity, the affine part of the Tits ovoid.
#[derive(Clone, Copy, Debug)]
pub struct Ovoid {
    pub field: FieldSpec,
}

impl Ovoid {
    pub fn new(n: u64) -> Result<Self> {
        let family = FamilyId::new(Family::SZ, n)?;
        Ok(Ovoid {
            field: FieldSpec::new(family.r())?,
        })
    }

    pub fn n(&self) -> u32 {
        self.field.order()
    }

    pub fn degree(&self) -> usize {
        (self.n() * self.n()) as usize + 1
    }

    pub fn infinity(&self) -> usize {
        (self.n() * self.n()) as usize
    }

    pub fn index(&self, a: u32, b: u32) -> usize {
        (a * self.n() + b) as usize
    }

    pub fn pair(&self, i: usize) -> Option<(u32, u32)> {
        (i < self.infinity()).then(|| (i as u32 / self.n(), i as u32 % self.n()))
    }

    fn theta(&self, x: u32) -> u32 {
        self.field
            .tits_power(x)
            .expect("odd degree checked at construction")
    }

    /// Fourth ovoid coordinate `z = ab + a^(theta+2) + b^theta`.
    pub fn z(&self, a: u32, b: u32) -> u32 {
        let f = &self.field;
        f.mul(a, b) ^ f.mul(self.theta(a), f.square(a)) ^ self.theta(b)
    }

    fn perm(&self, map: impl Fn(usize) -> Result<usize>) -> Result<Permutation> {
        let images = (0..self.degree())
            .map(|i| map(i).map(|j| j as u32))
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }

    /// `T_{alpha,beta}: (a, b) -> (a + alpha, b + beta + a theta(alpha))`.
    pub fn translation(&self, alpha: u32, beta: u32) -> Result<Permutation> {
        let t = self.theta(alpha);
        self.perm(|i| {
            Ok(match self.pair(i) {
                None => i,
                Some((a, b)) => self.index(a ^ alpha, b ^ beta ^ self.field.mul(a, t)),
            })
        })
    }

    /// `(a, b) -> (k a, theta(k) k b)`.
    pub fn scaling(&self, k: u32) -> Result<Permutation> {
        let kb = self.field.mul(self.theta(k), k);
        self.perm(|i| {
            Ok(match self.pair(i) {
                None => i,
                Some((a, b)) => self.index(self.field.mul(k, a), self.field.mul(kb, b)),
            })
        })
    }

    /// The involution `(x0, x1, x2, x3) -> (x3, x2, x1, x0)` on ovoid vectors
    /// `(1, a, b, z)` and `(0, 0, 0, 1)`; swaps infinity and `(0, 0)`.
    pub fn involution(&self) -> Result<Permutation> {
        let f = &self.field;
        self.perm(|i| match self.pair(i) {
            None => Ok(self.index(0, 0)),
            Some((a, b)) => {
                let z = self.z(a, b);
                if z == 0 {
                    if a == 0 && b == 0 {
                        Ok(self.infinity())
                    } else {
                        Err(Error::Mismatch(format!("ovoid point ({a},{b}) has z = 0")))
                    }
                } else {
                    Ok(self.index(f.div(b, z), f.div(a, z)))
                }
            }
        })
    }

    pub fn labels(&self) -> Vec<PointLabel> {
        let mut labels: Vec<PointLabel> = (0..self.infinity())
            .map(|i| self.pair(i).map(|(a, b)| PointLabel::Pair(a, b)).unwrap())
            .collect();
        labels.push(PointLabel::Infinity);
        labels
    }
}

pub fn build_sz(n: u64) -> Result<NaturalAction> {
    let family = FamilyId::new(Family::SZ, n)?;
    let o = Ovoid::new(n)?;
    let k = o.field.primitive_element();
    let gens = vec![o.translation(1, 0)?, o.scaling(k)?, o.involution()?];
    let mut sylow2 = Vec::new();
    for e in 0..family.r() {
        sylow2.push(o.translation(1 << e, 0)?);
    }
    for e in 0..family.r() {
        sylow2.push(o.translation(0, 1 << e)?);
    }
    Ok(NaturalAction {
        family,
        group: PermGroup::new(o.degree(), gens)?,
        labels: o.labels(),
        infinity: o.infinity(),
        sylow2,
        complement: vec![o.scaling(k)?],
    })
}

/// 3x3 matrix over F_(n^2), acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3 {
    field: FieldSpec,
    m: [[u32; 3]; 3],
}

impl Mat3 {
    pub fn new(field: FieldSpec, m: [[u32; 3]; 3]) -> Self {
        Mat3 { field, m }
    }

    pub fn identity(field: FieldSpec) -> Self {
        Mat3::scalar(field, 1)
    }

    pub fn scalar(field: FieldSpec, w: u32) -> Self {
        Mat3::new(field, [[w, 0, 0], [0, w, 0], [0, 0, w]])
    }

    pub fn entries(&self) -> &[[u32; 3]; 3] {
        &self.m
    }

    pub fn apply(&self, v: [u32; 3]) -> [u32; 3] {
        let f = &self.field;
        let mut out = [0u32; 3];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = f.mul(row[0], v[0]) ^ f.mul(row[1], v[1]) ^ f.mul(row[2], v[2]);
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let f = &self.field;
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(0, |acc, k| acc ^ f.mul(self.m[i][k], other.m[k][j]))
            })
        });
        Mat3::new(self.field, m)
    }

    pub fn det(&self) -> u32 {
        let f = &self.field;
        let m = &self.m;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            f.mul(m[1][a], m[2][b]) ^ f.mul(m[1][c], m[2][d])
        };
        f.mul(m[0][0], minor(1, 2, 2, 1))
            ^ f.mul(m[0][1], minor(0, 2, 2, 0))
            ^ f.mul(m[0][2], minor(0, 1, 1, 0))
    }

    pub fn inverse_checked(&self) -> Result<Mat3> {
        let f = &self.field;
        let d = f.inv(self.det())?;
        let m = &self.m;
        let mut out = [[0u32; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                // cofactor of m[j][i]; signs vanish in characteristic 2
                let (r0, r1) = match j {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (c0, c1) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let cof = f.mul(m[r0][c0], m[r1][c1]) ^ f.mul(m[r0][c1], m[r1][c0]);
                *cell = f.mul(cof, d);
            }
        }
        Ok(Mat3::new(self.field, out))
    }

    /// `H(u, v) = u_X v_X^n + u_Y v_Z^n + u_Z v_Y^n` for `n = sqrt(|F|)`.
    pub fn hermitian(field: &FieldSpec, u: [u32; 3], v: [u32; 3]) -> u32 {
        let e = field.degree() / 2;
        let c = |x| field.frobenius(x, e);
        field.mul(u[0], c(v[0])) ^ field.mul(u[1], c(v[2])) ^ field.mul(u[2], c(v[1]))
    }

    /// Whether the matrix preserves the Hermitian form on basis vectors.
    pub fn is_unitary(&self) -> bool {
        let cols: Vec<[u32; 3]> = (0..3)
            .map(|j| [self.m[0][j], self.m[1][j], self.m[2][j]])
            .collect();
        let mut basis = [[0u32; 3]; 3];
        for (k, b) in basis.iter_mut().enumerate() {
            b[k] = 1;
        }
        (0..3).all(|i| {
            (0..3).all(|j| {
                Mat3::hermitian(&self.field, cols[i], cols[j])
                    == Mat3::hermitian(&self.field, basis[i], basis[j])
            })
        })
    }

    fn decode(&self, label: usize) -> [u32; 3] {
        let q = self.field.order() as usize;
        let x = label + 1;
        [(x % q) as u32, ((x / q) % q) as u32, (x / (q * q)) as u32]
    }

    fn encode(&self, v: [u32; 3]) -> usize {
        let q = self.field.order() as usize;
        v[0] as usize + v[1] as usize * q + v[2] as usize * q * q - 1
    }
}

impl Action for Mat3 {
    fn image(&self, point: usize) -> usize {
        self.encode(self.apply(self.decode(point)))
    }

    fn then(&self, other: &Self) -> Self {
        other.mul(self)
    }

    fn inverse(&self) -> Self {
        self.inverse_checked()
            .expect("group elements are invertible")
    }

    fn is_identity(&self) -> bool {
        self.m == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    }

    fn size_bytes(&self) -> usize {
        std::mem::size_of::<Self>()
    }
}

/// SU(3,n) acting on the non-zero vectors of F_(n^2)^3.
#[derive(Clone, Debug)]
pub struct Su3Group {
    pub family: FamilyId,
    pub generators: Vec<Mat3>,
    pub chain: StabChain<Mat3>,
    pub center_order: u64,
}

/// Largest n for the vector action (degree (n^2)^3 - 1).
pub const SU3_MAX_N: u64 = 8;

pub fn su3_generators(u: &Unital) -> Vec<Mat3> {
    let f = u.field;
    let n = u.n;
    let c = f.primitive_element();
    let d = Mat3::new(
        f,
        [
            [f.pow(c, n - 1), 0, 0],
            [0, c, 0],
            [0, 0, f.inv(f.pow(c, n)).expect("non-zero")],
        ],
    );
    vec![u.psi(1, u.translation_b(1)), d, u.phi()]
}

pub fn build_su3_matrix(n: u64) -> Result<Su3Group> {
    let family = FamilyId::new(Family::SU3, n)?;
    if n > SU3_MAX_N {
        return Err(Error::Unsupported(format!(
            "SU(3,{n}) vector action exceeds the n <= {SU3_MAX_N} cap"
        )));
    }
    let u = Unital::new(n)?;
    let f = u.field;
    let generators = su3_generators(&u);
    let degree = (f.order() as usize).pow(3) - 1;
    let chain = StabChain::build(
        degree,
        Mat3::identity(f),
        &generators,
        &ChainOptions::default(),
    )?;
    let center_order = f
        .elements()
        .filter(|&w| w != 0 && chain.contains(&Mat3::scalar(f, w)))
        .count() as u64;
    Ok(Su3Group {
        family,
        generators,
        chain,
        center_order,
    })
}

impl Su3Group {
    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// Induced action on the unital points; its kernel is the centre.
    pub fn projective_action(&self) -> Result<PermGroup> {
        let u = Unital::new(self.family.n)?;
        let gens = self
            .generators
            .iter()
            .map(|m| u.matrix_perm(m))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(u.degree(), gens)
    }
}

/// Orders of cyclic subgroups acting without fixed points.
pub fn fpf_cyclic_divisors(f: &FamilyId) -> Result<Vec<u64>> {
    let n = f.n;
    let moduli = match f.name {
        Family::PSL2 => vec![n + 1],
        Family::PSU3 => vec![n + 1, (n * n - n + 1) / f.mu()],
        Family::SU3 => {
            if f.mu() != 3 {
                return Err(Error::Unsupported("SU3 entries need 3 | n+1".into()));
            }
            vec![n + 1, (n * n - n + 1) / 3]
        }
        Family::SZ => {
            let n0 = f.n0().expect("validated Suzuki parameter");
            vec![n - 2 * n0 + 1, n + 2 * n0 + 1]
        }
        Family::PGU3 => return Err(Error::Unsupported("PGU3 is not a spectrum family".into())),
    };
    let mut out: Vec<u64> = moduli.into_iter().flat_map(divisors).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// An element of order `c` all of whose non-trivial powers are fixed-point-free,
/// found by seeded random search.
pub fn fpf_witness(g: &PermGroup, c: u64, seed: u64, tries: usize) -> Result<Option<Permutation>> {
    if c == 1 {
        return Ok(Some(Permutation::identity(g.degree())));
    }
    let chain = g.chain()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let x = chain.random_element(&mut rng);
        let ord = x.order();
        if ord % c as u128 != 0 {
            continue;
        }
        let y = x.pow((ord / c as u128) as u64);
        let mut p = y.clone();
        let mut ok = true;
        for _ in 1..c {
            if !p.fixed_points().is_empty() {
                ok = false;
                break;
            }
            p = p.then(&y);
        }
        if ok {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_validation() {
        assert!(FamilyId::new(Family::PSL2, 2).is_err());
        assert!(FamilyId::new(Family::PSL2, 6).is_err());
        assert!(FamilyId::new(Family::SZ, 16).is_err());
        assert!(FamilyId::new(Family::SZ, 8).is_ok());
        assert_eq!(FamilyId::new(Family::SZ, 32).unwrap().n0(), Some(4));
        assert_eq!(FamilyId::new(Family::PSU3, 8).unwrap().mu(), 3);
        assert_eq!("psu3".parse::<Family>().unwrap(), Family::PSU3);
    }

    #[test]
    fn order_formulas() {
        let id = |name, n| FamilyId::new(name, n).unwrap();
        assert_eq!(expected_order(&id(Family::PSL2, 8)), 504);
        assert_eq!(expected_order(&id(Family::SZ, 8)), 29120);
        assert_eq!(expected_order(&id(Family::PGU3, 4)), 62400);
        assert_eq!(expected_order(&id(Family::PSU3, 8)), 5_515_776);
        assert_eq!(expected_order(&id(Family::SZ, 32)), 32_537_600);
        let c = stabilizer_constants(&id(Family::PSL2, 8));
        assert_eq!((c.sp, c.sp1, c.h, c.degree), (56, 8, 7, 9));
        let c = stabilizer_constants(&id(Family::SZ, 8));
        assert_eq!((c.sp, c.sp1, c.degree), (448, 64, 65));
    }

    #[test]
    fn mat3_inverse_and_unitarity() {
        let u = Unital::new(4).unwrap();
        for m in su3_generators(&u) {
            assert!(m.is_unitary());
            assert_eq!(m.det(), 1);
            assert!(m.mul(&m.inverse_checked().unwrap()).is_identity());
        }
        // M_c scales the form, so it is not unitary
        assert!(!u.scaling(u.field.primitive_element()).is_unitary());
    }

    #[test]
    fn labels_serialize() {
        let v = serde_json::to_string(&[
            PointLabel::Elem(3),
            PointLabel::Pair(1, 2),
            PointLabel::Infinity,
        ])
        .unwrap();
        assert_eq!(v, r#"[3,[1,2],"inf"]"#);
        let back: Vec<PointLabel> = serde_json::from_str(&v).unwrap();
        assert_eq!(back[2], PointLabel::Infinity);
    }

    #[test]
    fn fpf_divisor_lists() {
        let id = |name, n| FamilyId::new(name, n).unwrap();
        assert_eq!(
            fpf_cyclic_divisors(&id(Family::SZ, 8)).unwrap(),
            vec![1, 5, 13]
        );
        assert_eq!(
            fpf_cyclic_divisors(&id(Family::PSU3, 4)).unwrap(),
            vec![1, 5, 13]
        );
        assert_eq!(
            fpf_cyclic_divisors(&id(Family::PSL2, 8)).unwrap(),
            vec![1, 3, 9]
        );
        assert!(fpf_cyclic_divisors(&id(Family::PGU3, 4)).is_err());
    }
}
