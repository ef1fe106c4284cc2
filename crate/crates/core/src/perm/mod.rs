//! Permutation groups on `0..degree` with a lazily built stabilizer chain.

mod analysis;
pub mod chain;

use std::collections::VecDeque;
use std::path::Path;

use once_cell::sync::OnceCell;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use analysis::{
    classify_theorem1, is_ti_subgroup, normal_closure, omega_of, sample_involutions,
    sylow2_generic, sylow2_in_point_stabilizer, two_part, Case, ClassificationReport, FamilyGuess,
    SEED,
};
pub use chain::{Action, ChainOptions, StabChain};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {i} out of range for degree {n}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds the permutation `i -> f(i)`; `f` must be a bijection.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Permutation::new((0..degree).map(|i| f(i) as u32).collect())
    }

    /// Product of disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                let q = c[(k + 1) % c.len()];
                if p >= degree || q >= degree {
                    return Err(Error::PointOutOfRange {
                        point: p.max(q),
                        degree,
                    });
                }
                images[p] = q as u32;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        result
    }

    /// `self^g = g^-1 self g` (apply `g^-1`, then `self`, then `g`).
    pub fn conjugate(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree())
            .filter(|&i| self.images[i] as usize == i)
            .collect()
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> u128 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u128, |acc, l| lcm(acc, l as u128))
    }
}

pub fn fixed_points(x: &Permutation) -> Vec<usize> {
    x.fixed_points()
}

pub fn element_order(x: &Permutation) -> u128 {
    x.order()
}

pub(crate) fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

impl Action for Permutation {
    fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    fn then(&self, other: &Self) -> Self {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    fn size_bytes(&self) -> usize {
        self.images.len() * 4 + std::mem::size_of::<Self>()
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    known_order: Option<u128>,
    chain: OnceCell<StabChain<Permutation>>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    degree: usize,
    generators: Vec<Permutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<serde_json::Value>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            known_order: None,
            chain: OnceCell::new(),
        })
    }

    pub(crate) fn from_chain(generators: Vec<Permutation>, chain: StabChain<Permutation>) -> Self {
        let degree = chain.degree();
        let known_order = Some(chain.order());
        PermGroup {
            degree,
            generators,
            known_order,
            chain: OnceCell::with_value(chain),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            known_order: Some(1),
            chain: OnceCell::new(),
        }
    }

    /// Declares the order in advance so the chain can stop early. A wrong
    /// value yields a chain for a proper subgroup, so only pass proven orders.
    pub fn with_known_order(mut self, order: u128) -> Self {
        self.known_order = Some(order);
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> Result<&StabChain<Permutation>> {
        self.chain.get_or_try_init(|| {
            let opts = ChainOptions {
                known_order: self.known_order,
                ..Default::default()
            };
            StabChain::build(
                self.degree,
                Permutation::identity(self.degree),
                &self.generators,
                &opts,
            )
        })
    }

    fn chain_with_prefix(&self, prefix: &[usize]) -> Result<StabChain<Permutation>> {
        for &p in prefix {
            self.check_point(p)?;
        }
        let order = self.order()?;
        let opts = ChainOptions {
            prefix: prefix.to_vec(),
            known_order: Some(order),
            ..Default::default()
        };
        StabChain::build(
            self.degree,
            Permutation::identity(self.degree),
            &self.generators,
            &opts,
        )
    }

    fn at_chain_level(&self, chain: &StabChain<Permutation>, level: usize) -> PermGroup {
        let order = chain.order_from(level);
        let gens = chain.strong_generators(level).to_vec();
        PermGroup {
            degree: self.degree,
            generators: gens,
            known_order: Some(order),
            chain: OnceCell::new(),
        }
    }

    fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.degree {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> Result<u128> {
        Ok(self.chain()?.order())
    }

    pub fn contains(&self, x: &Permutation) -> Result<bool> {
        if x.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, x.degree()));
        }
        Ok(self.chain()?.contains(x))
    }

    pub fn orbit(&self, p: usize) -> Result<Vec<usize>> {
        self.check_point(p)?;
        let mut seen = vec![false; self.degree];
        seen[p] = true;
        let mut out = vec![p];
        let mut queue = VecDeque::from([p]);
        while let Some(q) = queue.pop_front() {
            for g in &self.generators {
                let r = g.image(q);
                if !seen[r] {
                    seen[r] = true;
                    out.push(r);
                    queue.push_back(r);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let orb = self.orbit(p).expect("point in range");
                for &q in &orb {
                    seen[q] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1
            || self
                .orbit(0)
                .map(|o| o.len() == self.degree)
                .unwrap_or(false)
    }

    pub fn stabilizer(&self, p: usize) -> Result<PermGroup> {
        let chain = self.chain_with_prefix(&[p])?;
        Ok(self.at_chain_level(&chain, 1))
    }

    /// Subgroup fixing every point of `pts`.
    pub fn pointwise_kernel(&self, pts: &[usize]) -> Result<PermGroup> {
        let mut prefix: Vec<usize> = Vec::new();
        for &p in pts {
            self.check_point(p)?;
            if !prefix.contains(&p) {
                prefix.push(p);
            }
        }
        if prefix.is_empty() {
            return Ok(self.clone());
        }
        let chain = self.chain_with_prefix(&prefix)?;
        Ok(self.at_chain_level(&chain, prefix.len()))
    }

    pub fn is_two_transitive(&self) -> Result<bool> {
        if self.degree < 2 || !self.is_transitive() {
            return Ok(false);
        }
        let chain = self.chain_with_prefix(&[0])?;
        let n = self.degree;
        Ok(n < 2 || (chain.len() > 1 && chain.basic_orbit(1).len() == n - 1))
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Result<Permutation> {
        Ok(self.chain()?.random_element(rng))
    }

    pub fn elements(&self, limit: u128) -> Result<Vec<Permutation>> {
        self.chain()?.elements(limit)
    }

    /// Subgroup generated by `gens`, which must lie in `self`.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(Error::NotSubgroup(
                    "generator outside the ambient group".into(),
                ));
            }
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, metadata: Option<serde_json::Value>) -> Result<String> {
        let file = GroupFile {
            degree: self.degree,
            generators: self.generators.clone(),
            metadata,
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<PermGroup> {
        let file: GroupFile = serde_json::from_str(text)?;
        PermGroup::new(file.degree, file.generators)
    }

    pub fn read(path: &Path) -> Result<PermGroup> {
        PermGroup::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path, metadata: Option<serde_json::Value>) -> Result<()> {
        std::fs::write(path, self.to_json(metadata)?)?;
        Ok(())
    }
}
