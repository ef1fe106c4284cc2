//! Deterministic Schreier-Sims over any faithful action on `0..degree`.
//!
//! Base points are taken in ascending order (the smallest point moved by the
//! element that forces a new level), after an optional caller-supplied prefix.
//! When the group order is known in advance the construction stops as soon as
//! the product of the basic orbit lengths reaches it.

use rand::Rng;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Group elements acting on the points `0..degree`, composed left to right.
pub trait Action: Clone + Send + Sync {
    fn image(&self, point: usize) -> usize;
    /// `self` followed by `other`.
    fn then(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
    /// Approximate heap footprint, for the transversal budget.
    fn size_bytes(&self) -> usize;

    fn first_moved(&self, degree: usize) -> Option<usize> {
        (0..degree).find(|&p| self.image(p) != p)
    }
}

/// Memory cap for transversals, from `PZERO_BUDGET_MB` (default 2048 MB).
pub fn default_budget_bytes() -> usize {
    std::env::var("PZERO_BUDGET_MB")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(2048)
        .saturating_mul(1 << 20)
}

#[derive(Clone, Debug, Default)]
pub struct ChainOptions {
    pub prefix: Vec<usize>,
    pub known_order: Option<u128>,
    pub budget_bytes: Option<usize>,
}

#[derive(Clone, Debug)]
struct Level<E> {
    base: usize,
    gens: Vec<E>,
    gens_inv: Vec<E>,
    orbit: Vec<usize>,
    pos: Vec<u32>,
    reps: Vec<E>,
    rep_invs: Vec<E>,
    // for orbit point a, generators 0..checked[a] have had their Schreier generator sifted
    checked: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct StabChain<E> {
    degree: usize,
    identity: E,
    levels: Vec<Level<E>>,
    budget: usize,
    used: usize,
}

impl<E: Action> StabChain<E> {
    pub fn build(degree: usize, identity: E, gens: &[E], opts: &ChainOptions) -> Result<Self> {
        let mut chain = StabChain {
            degree,
            identity,
            levels: Vec::new(),
            budget: opts.budget_bytes.unwrap_or_else(default_budget_bytes),
            used: 0,
        };
        for &p in &opts.prefix {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            chain.push_level(p)?;
        }
        let gens: Vec<E> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return Ok(chain);
        }
        if chain.levels.is_empty() {
            let b = gens[0]
                .first_moved(degree)
                .expect("non-identity element moves a point");
            chain.push_level(b)?;
        }
        for g in gens {
            chain.levels[0].gens_inv.push(g.inverse());
            chain.levels[0].gens.push(g);
        }
        chain.extend_orbit(0)?;
        chain.complete(opts.known_order)?;
        Ok(chain)
    }

    fn push_level(&mut self, base: usize) -> Result<()> {
        let mut pos = vec![NONE; self.degree];
        pos[base] = 0;
        self.used += self.degree * 4 + 2 * self.identity.size_bytes();
        self.check_budget()?;
        self.levels.push(Level {
            base,
            gens: Vec::new(),
            gens_inv: Vec::new(),
            orbit: vec![base],
            pos,
            reps: vec![self.identity.clone()],
            rep_invs: vec![self.identity.clone()],
            checked: vec![0],
        });
        Ok(())
    }

    fn check_budget(&self) -> Result<()> {
        if self.used > self.budget {
            return Err(Error::Budget(format!(
                "stabilizer chain transversals need more than {} MB",
                self.budget >> 20
            )));
        }
        Ok(())
    }

    fn extend_orbit(&mut self, li: usize) -> Result<()> {
        let elem_bytes = self.identity.size_bytes();
        let lvl = &mut self.levels[li];
        let mut idx = 0;
        let mut added = 0usize;
        while idx < lvl.orbit.len() {
            let beta = lvl.orbit[idx];
            for s in 0..lvl.gens.len() {
                let gamma = lvl.gens[s].image(beta);
                if lvl.pos[gamma] == NONE {
                    lvl.pos[gamma] = lvl.orbit.len() as u32;
                    lvl.orbit.push(gamma);
                    let rep = lvl.reps[idx].then(&lvl.gens[s]);
                    let rep_inv = lvl.gens_inv[s].then(&lvl.rep_invs[idx]);
                    lvl.reps.push(rep);
                    lvl.rep_invs.push(rep_inv);
                    lvl.checked.push(0);
                    added += 1;
                }
            }
            idx += 1;
        }
        self.used += added * 2 * elem_bytes;
        self.check_budget()
    }

    fn add_strong(&mut self, h: E, from: usize, to: usize) -> Result<()> {
        if to == self.levels.len() {
            let b = h
                .first_moved(self.degree)
                .expect("sift residue is not the identity");
            self.push_level(b)?;
        }
        let h_inv = h.inverse();
        for l in from..=to {
            self.levels[l].gens.push(h.clone());
            self.levels[l].gens_inv.push(h_inv.clone());
            self.extend_orbit(l)?;
        }
        Ok(())
    }

    /// Sifts the next unchecked Schreier generator of level `i`; returns the
    /// first one that does not reduce to the identity, with its drop-out level.
    fn next_failure(&mut self, i: usize) -> Option<(E, usize)> {
        let mut a = 0;
        while a < self.levels[i].orbit.len() {
            while (self.levels[i].checked[a] as usize) < self.levels[i].gens.len() {
                let s = self.levels[i].checked[a] as usize;
                self.levels[i].checked[a] += 1;
                let lvl = &self.levels[i];
                let gamma = lvl.gens[s].image(lvl.orbit[a]);
                let g = lvl.reps[a]
                    .then(&lvl.gens[s])
                    .then(&lvl.rep_invs[lvl.pos[gamma] as usize]);
                let (h, j) = self.strip(g, i + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
            a += 1;
        }
        None
    }

    fn complete(&mut self, known_order: Option<u128>) -> Result<()> {
        if self.levels.is_empty() {
            return Ok(());
        }
        let mut i = self.levels.len() - 1;
        loop {
            if known_order.is_some_and(|k| self.order() >= k) {
                return Ok(());
            }
            match self.next_failure(i) {
                Some((h, j)) => {
                    self.add_strong(h, i + 1, j)?;
                    i = j;
                }
                None if i == 0 => return Ok(()),
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`len()` when it passed every level).
    pub fn strip(&self, g: E, from: usize) -> (E, usize) {
        let mut g = g;
        for j in from..self.levels.len() {
            let lvl = &self.levels[j];
            let p = lvl.pos[g.image(lvl.base)];
            if p == NONE {
                return (g, j);
            }
            g = g.then(&lvl.rep_invs[p as usize]);
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &E) -> bool {
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Adds `g` to the group; returns `false` if it was already a member.
    pub fn extend(&mut self, g: E) -> Result<bool> {
        if self.contains(&g) {
            return Ok(false);
        }
        if self.levels.is_empty() {
            let b = g
                .first_moved(self.degree)
                .expect("non-member is not the identity");
            self.push_level(b)?;
        }
        self.levels[0].gens_inv.push(g.inverse());
        self.levels[0].gens.push(g);
        self.extend_orbit(0)?;
        self.complete(None)?;
        Ok(true)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Order of the pointwise stabilizer of the first `k` base points.
    pub fn order_from(&self, k: usize) -> u128 {
        self.levels
            .iter()
            .skip(k)
            .map(|l| l.orbit.len() as u128)
            .product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Strong generators fixing the first `level` base points.
    pub fn strong_generators(&self, level: usize) -> &[E] {
        self.levels
            .get(level)
            .map(|l| l.gens.as_slice())
            .unwrap_or(&[])
    }

    /// Coset representative mapping the base point of `level` to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<&E> {
        let lvl = self.levels.get(level)?;
        match lvl.pos.get(point) {
            Some(&p) if p != NONE => Some(&lvl.reps[p as usize]),
            _ => None,
        }
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    /// Uniformly random group element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> E {
        let mut acc = self.identity.clone();
        for lvl in self.levels.iter().rev() {
            let k = rng.gen_range(0..lvl.reps.len());
            acc = acc.then(&lvl.reps[k]);
        }
        acc
    }

    /// Every element, for groups of order at most `limit`.
    pub fn elements(&self, limit: u128) -> Result<Vec<E>> {
        let order = self.order();
        if order > limit {
            return Err(Error::TooLarge { order, limit });
        }
        let mut acc = vec![self.identity.clone()];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * lvl.reps.len());
            for a in &acc {
                for u in &lvl.reps {
                    next.push(a.then(u));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Visits every element without storing them; `f` returns `false` to stop.
    pub fn for_each_element(&self, limit: u128, mut f: impl FnMut(&E) -> bool) -> Result<()> {
        let order = self.order();
        if order > limit {
            return Err(Error::TooLarge { order, limit });
        }
        self.visit(self.levels.len(), self.identity.clone(), &mut f);
        Ok(())
    }

    fn visit(&self, depth: usize, acc: E, f: &mut impl FnMut(&E) -> bool) -> bool {
        if depth == 0 {
            return f(&acc);
        }
        for u in &self.levels[depth - 1].reps {
            if !self.visit(depth - 1, acc.then(u), f) {
                return false;
            }
        }
        true
    }
}
