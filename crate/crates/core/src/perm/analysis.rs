use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Action, ChainOptions, PermGroup, Permutation, StabChain};
use crate::error::{Error, Result};

/// Seed for every randomized sampling step.
pub const SEED: u64 = 0x5A5A;
/// Random elements drawn when hunting for involutions.
pub const INVOLUTION_SAMPLES: usize = 1000;
/// Largest subgroup the TI test enumerates.
pub const TI_LIMIT: u128 = 1 << 12;
/// Largest group searched exhaustively (generic Sylow and TI fallbacks).
pub const ENUM_LIMIT: u128 = 1_000_000;

/// The 2-power part `x^m` of `x`, where `m` is the odd part of its order.
pub fn two_part(x: &Permutation) -> Permutation {
    let mut m = x.order();
    while m.is_multiple_of(2) {
        m /= 2;
    }
    x.pow(m as u64)
}

fn involution_of(x: &Permutation) -> Option<Permutation> {
    let y = two_part(x);
    if y.is_identity() {
        return None;
    }
    Some(y.pow((y.order() / 2) as u64))
}

/// Involutions from the 2-parts of the generators and of `samples` random elements.
pub fn sample_involutions(g: &PermGroup, samples: usize, seed: u64) -> Result<Vec<Permutation>> {
    let mut out: Vec<Permutation> = g.generators().iter().filter_map(involution_of).collect();
    let chain = g.chain()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        if let Some(t) = involution_of(&chain.random_element(&mut rng)) {
            out.push(t);
        }
    }
    Ok(out)
}

fn check_condition_four(involutions: &[Permutation]) -> Result<()> {
    for t in involutions {
        let fixed = t.fixed_points().len();
        if fixed != 1 {
            return Err(Error::ConditionFour {
                involution: t.images().to_vec(),
                fixed,
            });
        }
    }
    Ok(())
}

/// Points fixed by some involution, assuming each involution fixes exactly one point.
pub fn omega_of(g: &PermGroup) -> Result<Vec<usize>> {
    if g.order()? % 2 == 1 {
        return Err(Error::OddOrder);
    }
    let invs = sample_involutions(g, INVOLUTION_SAMPLES, SEED)?;
    check_condition_four(&invs)?;
    let mut omega: Vec<usize> = Vec::new();
    for t in &invs {
        let p = t.fixed_points()[0];
        if omega.binary_search(&p).is_err() {
            omega.extend(g.orbit(p)?);
            omega.sort_unstable();
            omega.dedup();
        }
    }
    if omega.is_empty() {
        return Err(Error::SearchFailed(
            "no involution found by sampling".into(),
        ));
    }
    Ok(omega)
}

fn element_set(v: &PermGroup) -> Result<(Vec<Permutation>, HashSet<Permutation>)> {
    let elems = v.elements(TI_LIMIT)?;
    let set = elems.iter().cloned().collect();
    Ok((elems, set))
}

fn normalizes(gens: &[Permutation], v_gens: &[Permutation], v: &StabChain<Permutation>) -> bool {
    gens.iter()
        .all(|s| v_gens.iter().all(|x| v.contains(&x.conjugate(s))))
}

/// True iff `v` meets each of its conjugates in `g` trivially or entirely.
pub fn is_ti_subgroup(g: &PermGroup, v: &PermGroup) -> Result<bool> {
    if v.degree() != g.degree() {
        return Err(Error::DegreeMismatch(g.degree(), v.degree()));
    }
    if !v.is_subgroup_of(g)? {
        return Err(Error::NotSubgroup("v is not contained in g".into()));
    }
    let (elems, set) = element_set(v)?;
    if elems.len() == 1 {
        return Ok(true);
    }
    let v_chain = v.chain()?;
    if normalizes(g.generators(), v.generators(), v_chain) {
        return Ok(true);
    }
    // elements of v ∩ v^x, where v^x = x^-1 v x
    let meets = |x: &Permutation, candidates: &mut dyn Iterator<Item = &Permutation>| -> usize {
        let x_inv = x.inverse();
        candidates
            .filter(|y| set.contains(&x.then(y).then(&x_inv)))
            .count()
    };

    let common: Vec<usize> = (0..g.degree())
        .filter(|&p| v.generators().iter().all(|s| s.image(p) == p))
        .collect();
    if common.len() == 1 {
        let p = common[0];
        let gp = g.stabilizer(p)?;
        if normalizes(gp.generators(), v.generators(), v_chain) {
            // conjugates of v correspond to the cosets of G_p, one per orbit point
            let chain = StabChain::build(
                g.degree(),
                Permutation::identity(g.degree()),
                g.generators(),
                &ChainOptions {
                    prefix: vec![p],
                    known_order: Some(g.order()?),
                    ..Default::default()
                },
            )?;
            for &q in chain.basic_orbit(0) {
                if q == p {
                    continue;
                }
                let u = chain
                    .transversal(0, q)
                    .expect("orbit point has a representative");
                // v ∩ v^u fixes both p and q
                let mut fixing_q = elems.iter().filter(|y| y.image(q) == q);
                if meets(u, &mut fixing_q) != 1 {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
    }

    let order = g.order()?;
    if order > ENUM_LIMIT {
        return Err(Error::TooLarge {
            order,
            limit: ENUM_LIMIT,
        });
    }
    let mut ok = true;
    g.chain()?.for_each_element(ENUM_LIMIT, |x| {
        let k = meets(x, &mut elems.iter());
        if k != 1 && k != elems.len() {
            ok = false;
        }
        ok
    })?;
    Ok(ok)
}

/// Smallest normal subgroup of `g` containing `v`.
pub fn normal_closure(g: &PermGroup, v: &PermGroup) -> Result<PermGroup> {
    if v.degree() != g.degree() {
        return Err(Error::DegreeMismatch(g.degree(), v.degree()));
    }
    let n = g.degree();
    let mut chain = StabChain::build(n, Permutation::identity(n), &[], &ChainOptions::default())?;
    let mut gens = Vec::new();
    let mut queue: Vec<Permutation> = Vec::new();
    for x in v.generators() {
        if chain.extend(x.clone())? {
            gens.push(x.clone());
            queue.push(x.clone());
        }
    }
    while let Some(x) = queue.pop() {
        for s in g.generators() {
            let y = x.conjugate(s);
            if chain.extend(y.clone())? {
                gens.push(y.clone());
                queue.push(y);
            }
        }
    }
    Ok(PermGroup::from_chain(gens, chain))
}

fn two_power_part(order: u128) -> u128 {
    1u128 << order.trailing_zeros()
}

/// Grows a 2-subgroup of `G_p` from 2-parts of random elements until it reaches
/// order `target`. Succeeds when the Sylow 2-subgroup of `G_p` is normal in it,
/// which holds for stabilizers of points fixed by involutions of zero 2-rank actions.
pub fn sylow2_in_point_stabilizer(g: &PermGroup, p: usize, target: u128) -> Result<PermGroup> {
    let gp = g.stabilizer(p)?;
    let n = g.degree();
    let mut chain = StabChain::build(n, Permutation::identity(n), &[], &ChainOptions::default())?;
    let mut gens = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gp_chain = gp.chain()?;
    let mut candidates: Vec<Permutation> = gp.generators().iter().map(two_part).collect();
    let mut tries = 0;
    while chain.order() < target {
        let y = match candidates.pop() {
            Some(y) => y,
            None => {
                tries += 1;
                if tries > 20_000 {
                    return Err(Error::SearchFailed(format!(
                        "2-subgroup of the stabilizer of {p} stuck at order {}",
                        chain.order()
                    )));
                }
                two_part(&gp_chain.random_element(&mut rng))
            }
        };
        if y.is_identity() || chain.contains(&y) {
            continue;
        }
        let mut trial = chain.clone();
        trial.extend(y.clone())?;
        if trial.order().is_power_of_two() {
            chain = trial;
            gens.push(y);
        }
    }
    Ok(PermGroup::from_chain(gens, chain))
}

/// Sylow 2-subgroup by normalizer growth; only for `|g| <= 10^6`.
pub fn sylow2_generic(g: &PermGroup) -> Result<PermGroup> {
    let order = g.order()?;
    if order > ENUM_LIMIT {
        return Err(Error::TooLarge {
            order,
            limit: ENUM_LIMIT,
        });
    }
    let n = g.degree();
    let target = two_power_part(order);
    let mut chain = StabChain::build(n, Permutation::identity(n), &[], &ChainOptions::default())?;
    let mut gens: Vec<Permutation> = Vec::new();
    let g_chain = g.chain()?;
    while chain.order() < target {
        let mut found = None;
        g_chain.for_each_element(ENUM_LIMIT, |x| {
            let y = two_part(x);
            if y.is_identity() || chain.contains(&y) {
                return true;
            }
            if gens.iter().all(|s| chain.contains(&s.conjugate(&y))) {
                found = Some(y);
                return false;
            }
            true
        })?;
        let y = found.ok_or_else(|| Error::SearchFailed("normalizer growth stalled".into()))?;
        chain.extend(y.clone())?;
        gens.push(y);
    }
    Ok(PermGroup::from_chain(gens, chain))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    FixedPoint,
    LinearFamily,
    #[serde(rename = "odd_times_2group")]
    OddTimes2group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyGuess {
    pub name: String,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub case: Case,
    pub family_guess: Option<FamilyGuess>,
    pub omega_size: usize,
    pub group_order: u128,
    pub s2_order: u128,
    pub s_order: u128,
    pub kernel_order: u128,
    pub unique_involution: bool,
}

fn as_power_of_two(x: u128) -> Option<u32> {
    (x.is_power_of_two()).then(|| x.trailing_zeros())
}

fn match_family(omega: u128, s: u128, kernel: u128) -> Option<FamilyGuess> {
    let guess = |name: &str, n: u128| {
        Some(FamilyGuess {
            name: name.into(),
            n: n as u64,
        })
    };
    if let Some(e) = as_power_of_two(omega - 1) {
        let n = 1u128 << e;
        if e >= 2 && kernel == 1 && s == n * n * n - n {
            return guess("PSL2", n);
        }
    }
    // n^2 + 1
    let r = (omega - 1) as f64;
    let n2 = r.sqrt().round() as u128;
    if n2 * n2 == omega - 1 {
        if let Some(e) = as_power_of_two(n2) {
            if e >= 3 && e % 2 == 1 && kernel == 1 && s == (n2 * n2 + 1) * n2 * n2 * (n2 - 1) {
                return guess("SZ", n2);
            }
        }
    }
    let n3 = r.cbrt().round() as u128;
    if n3 * n3 * n3 == omega - 1 {
        if let Some(e) = as_power_of_two(n3) {
            if e >= 2 {
                let full = (n3 * n3 * n3 + 1) * n3 * n3 * n3 * (n3 * n3 - 1);
                let mu = if (n3 + 1).is_multiple_of(3) { 3 } else { 1 };
                if kernel == 1 && s == full / mu {
                    return guess("PSU3", n3);
                }
                if mu == 3 && kernel == 3 && s == full {
                    return guess("SU3", n3);
                }
            }
        }
    }
    None
}

/// Structural classification of a group whose involutions each fix exactly one point.
pub fn classify_theorem1(g: &PermGroup) -> Result<ClassificationReport> {
    let order = g.order()?;
    if order % 2 == 1 {
        return Err(Error::OddOrder);
    }
    let omega = omega_of(g)?;
    let target = two_power_part(order);
    let p = omega[0];
    let s2 = match sylow2_in_point_stabilizer(g, p, target) {
        Ok(t) => t,
        Err(Error::SearchFailed(_)) if order <= ENUM_LIMIT => sylow2_generic(g)?,
        Err(e) => return Err(e),
    };
    let s = normal_closure(g, &s2)?;
    let s_order = s.order()?;
    let kernel_order = s.pointwise_kernel(&omega)?.order()?;
    let involutions = match s2.elements(1 << 20) {
        Ok(elems) => elems
            .iter()
            .filter(|x| !x.is_identity() && x.then(x).is_identity())
            .count(),
        Err(Error::TooLarge { .. }) => usize::MAX,
        Err(e) => return Err(e),
    };
    let fixes_point = (0..g.degree()).any(|q| g.generators().iter().all(|x| x.image(q) == q));
    let family_guess = if fixes_point {
        None
    } else {
        match_family(omega.len() as u128, s_order, kernel_order)
    };
    let case = if fixes_point {
        Case::FixedPoint
    } else if family_guess.is_some() {
        Case::LinearFamily
    } else {
        Case::OddTimes2group
    };
    Ok(ClassificationReport {
        case,
        family_guess,
        omega_size: omega.len(),
        group_order: order,
        s2_order: s2.order()?,
        s_order,
        kernel_order,
        unique_involution: involutions == 1,
    })
}
