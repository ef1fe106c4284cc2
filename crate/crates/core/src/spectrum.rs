//! Admissible genera for zero 2-rank curves whose automorphism group contains
//! one of the 2-transitive linear families, with an independent cross-check,
//! the classical order bounds, and the quotient comparison with the (IV) curve.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::curves::{genus, section7_quotient_genus, CurveSpec};
use crate::error::{Error, Result};
use crate::lingrp::{expected_order, stabilizer_constants, Family, FamilyId};
use crate::ramify::{different_exponent, hurwitz_genus, RamificationProfile, ShortOrbit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "PSL2")]
    Psl2,
    #[serde(rename = "PSU3-first")]
    Psu3First,
    #[serde(rename = "PSU3-second")]
    Psu3Second,
    #[serde(rename = "SZ-A")]
    SzA,
    #[serde(rename = "SZ-B")]
    SzB,
    #[serde(rename = "SU3-first")]
    Su3First,
    #[serde(rename = "SU3-second")]
    Su3Second,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Psl2 => "PSL2",
            CaseTag::Psu3First => "PSU3-first",
            CaseTag::Psu3Second => "PSU3-second",
            CaseTag::SzA => "SZ-A",
            CaseTag::SzB => "SZ-B",
            CaseTag::Su3First => "SU3-first",
            CaseTag::Su3Second => "SU3-second",
        };
        f.write_str(s)
    }
}

/// A curve known to realize the entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    #[serde(rename = "II")]
    Hermitian,
    #[serde(rename = "III")]
    Dls,
    #[serde(rename = "IV")]
    CurveIV,
    #[serde(rename = "7.1")]
    Stich,
    #[serde(rename = "7.2")]
    UnitaryQuotient,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Witness::Hermitian => "II",
            Witness::Dls => "III",
            Witness::CurveIV => "IV",
            Witness::Stich => "7.1",
            Witness::UnitaryQuotient => "7.2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFlags {
    pub genus_at_least_2: bool,
    pub s_gt_6g_minus_6: bool,
    /// `|S_P| > 3g`, standing in for the even-stabilizer condition, which
    /// needs the curve itself.
    pub sp_gt_3g: bool,
    pub s_gt_24g2: bool,
}

impl EntryFlags {
    fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.genus_at_least_2 {
            v.push("g>=2");
        }
        if self.s_gt_6g_minus_6 {
            v.push("S>6(g-1)");
        }
        if self.sp_gt_3g {
            v.push("SP>3g");
        }
        if self.s_gt_24g2 {
            v.push("S>24g^2");
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub family: FamilyId,
    pub case_tag: CaseTag,
    pub t: u64,
    pub genus: i128,
    pub s_order: u128,
    pub sp_order: u128,
    pub sp1_order: u128,
    pub sq_order: u128,
    pub witness: Option<Witness>,
    pub flags: EntryFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub family: FamilyId,
    pub entries: Vec<SpectrumEntry>,
    /// Entries with genus below 2, kept for reference.
    pub filtered: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn genera(&self) -> Vec<i128> {
        self.entries.iter().map(|e| e.genus).collect()
    }
}

fn cases(f: &FamilyId) -> Result<Vec<(CaseTag, u64)>> {
    let n = f.n;
    Ok(match f.name {
        Family::PSL2 => vec![(CaseTag::Psl2, n + 1)],
        Family::PSU3 => vec![
            (CaseTag::Psu3First, (n * n - n + 1) / f.mu()),
            (CaseTag::Psu3Second, n + 1),
        ],
        Family::SZ => {
            let n0 = f.n0().expect("validated Suzuki parameter");
            vec![
                (CaseTag::SzA, n + 2 * n0 + 1),
                (CaseTag::SzB, n - 2 * n0 + 1),
            ]
        }
        Family::SU3 => {
            if f.mu() != 3 {
                return Err(Error::InvalidFamily(format!(
                    "SU(3,{n}) entries need 3 | n + 1"
                )));
            }
            vec![
                (CaseTag::Su3First, (n * n - n + 1) / 3),
                (CaseTag::Su3Second, n + 1),
            ]
        }
        Family::PGU3 => {
            return Err(Error::Unsupported(
                "PGU3 is not a spectrum family; use PSU3".into(),
            ))
        }
    })
}

/// Closed-form genus of a case at divisor `t`.
fn closed_genus(f: &FamilyId, case: CaseTag, t: u64) -> i128 {
    let n = f.n as i128;
    let t = t as i128;
    let mu = f.mu() as i128;
    let twice = match case {
        CaseTag::Psl2 => (t - 1) * (n - 1),
        CaseTag::Psu3First => (n - 1) * (t * (n + 1) * (n + 1) - (n * n + n + 1)),
        CaseTag::Psu3Second => (n - 1) * (t * (n * n * n + 1) / mu - (n * n + n + 1)),
        CaseTag::Su3First => (n - 1) * (3 * t * (n + 1) * (n + 1) - (n * n + n + 1)),
        CaseTag::Su3Second => (n - 1) * (t * (n * n * n + 1) - (n * n + n + 1)),
        CaseTag::SzA | CaseTag::SzB => {
            let n0 = f.n0().unwrap() as i128;
            let sign = if case == CaseTag::SzA { -1 } else { 1 };
            (t - 1) * (n * n - 1) + sign * 2 * t * n0 * (n - 1)
        }
    };
    twice / 2
}

fn witness(f: &FamilyId, case: CaseTag, t: u64) -> Option<Witness> {
    let n = f.n;
    match case {
        CaseTag::Psu3First if t == 1 => Some(Witness::Hermitian),
        CaseTag::SzB if t == 1 => Some(Witness::Dls),
        CaseTag::Su3Second if t == n + 1 => Some(Witness::CurveIV),
        // Y^(2^r) + Y + X^t with t | 2^r + 1
        CaseTag::Psl2 if t >= 3 && t < n => Some(Witness::Stich),
        CaseTag::Su3First => Some(Witness::UnitaryQuotient),
        CaseTag::Psu3First if f.mu() == 3 => Some(Witness::UnitaryQuotient),
        _ => None,
    }
}

pub fn enumerate_spectrum(f: &FamilyId) -> Result<Spectrum> {
    let c = stabilizer_constants(f);
    let s = expected_order(f);
    let mut entries = Vec::new();
    let mut filtered = Vec::new();
    for (case, modulus) in cases(f)? {
        for t in divisors(modulus) {
            let g = closed_genus(f, case, t);
            let sq = (modulus / t) as u128;
            let gu = g.max(0) as u128;
            let e = SpectrumEntry {
                family: *f,
                case_tag: case,
                t,
                genus: g,
                s_order: s,
                sp_order: c.sp,
                sp1_order: c.sp1,
                sq_order: sq,
                witness: witness(f, case, t),
                flags: EntryFlags {
                    genus_at_least_2: g >= 2,
                    s_gt_6g_minus_6: g >= 2 && s > 6 * (gu - 1),
                    sp_gt_3g: c.sp > 3 * gu,
                    s_gt_24g2: s > 24 * gu * gu,
                },
            };
            if g >= 2 {
                entries.push(e);
            } else {
                filtered.push(e);
            }
        }
    }
    Ok(Spectrum {
        family: *f,
        entries,
        filtered,
    })
}

/// `2g - 2` from the orders of `S`, `S_P`, `S_P^(1)` and `S_Q` alone.
pub fn gqfpf_twice_genus_minus_two(e: &SpectrumEntry) -> Option<i128> {
    let (s, sp, sp1, sq) = (
        e.s_order as i128,
        e.sp_order as i128,
        e.sp1_order as i128,
        e.sq_order as i128,
    );
    // |S| = deg |S_P|; cancelling |S_P| keeps the products in range
    if s % sp != 0 {
        return None;
    }
    let deg = s / sp;
    let num = deg.checked_mul(sp - sp1 * sq)?;
    let den = sq * (deg - 1);
    (num % den == 0).then(|| num / den)
}

/// `[|S_P|, |S_P^(1)|, ...]` with different exponent `2g - 2 + |S_P^(1)| + |S_P|`,
/// the tail filled greedily with powers of 2.
pub fn point_filtration(e: &SpectrumEntry) -> Option<Vec<u128>> {
    if e.genus < 0 {
        return None;
    }
    let d_p = 2 * e.genus as u128 - 2 + e.sp1_order + e.sp_order;
    let mut out = vec![e.sp_order, e.sp1_order];
    let mut rem = d_p.checked_sub(e.sp_order - 1 + e.sp1_order - 1)?;
    let mut cap = e.sp1_order;
    while rem > 0 {
        while cap > 2 && cap - 1 > rem {
            cap /= 2;
        }
        out.push(cap);
        rem -= cap - 1;
    }
    out.push(1);
    debug_assert_eq!(different_exponent(&out), d_p);
    Some(out)
}

/// Ramification data of `S` over the quotient line: one wild orbit and one tame orbit.
pub fn entry_profile(e: &SpectrumEntry) -> Option<RamificationProfile> {
    let mut orbits = vec![ShortOrbit {
        size: e.s_order / e.sp_order,
        filtration: point_filtration(e)?,
    }];
    if e.sq_order > 1 {
        orbits.push(ShortOrbit {
            size: e.s_order / e.sq_order,
            filtration: vec![e.sq_order, 1],
        });
    }
    Some(RamificationProfile {
        group_order: e.s_order,
        quotient_genus: 0,
        orbits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub closed_genus: i128,
    pub lemma_twice_genus_minus_two: Option<i128>,
    pub hurwitz_genus: Option<u64>,
    pub ok: bool,
}

pub fn crosscheck_details(e: &SpectrumEntry) -> CrossCheck {
    let lemma = gqfpf_twice_genus_minus_two(e);
    let hurwitz = entry_profile(e).and_then(|p| hurwitz_genus(&p).ok());
    let ok = lemma == Some(2 * e.genus - 2) && hurwitz.map(|g| g as i128) == Some(e.genus);
    CrossCheck {
        closed_genus: e.genus,
        lemma_twice_genus_minus_two: lemma,
        hurwitz_genus: hurwitz,
        ok,
    }
}

pub fn crosscheck_gqfpf(e: &SpectrumEntry) -> bool {
    crosscheck_details(e).ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: u128,
    /// `false` when the hypothesis of the bound does not hold for the input.
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `|G| <= 24 g^2`: nothing to classify.
    BelowThreshold,
    FixedPoint,
    /// A solvable group above the threshold without a fixed point breaks the solvable bound.
    SolvableContradiction,
    TwoTransitive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub g: u64,
    pub group_order: u128,
    pub trigger: bool,
    pub route: Route,
    pub checks: Vec<BoundCheck>,
}

pub fn bound_checks(
    group_order: u128,
    g: u64,
    abelian: bool,
    solvable: bool,
    fixes_point: bool,
) -> Result<BoundReport> {
    if g < 2 {
        return Err(Error::InvalidProfile(format!(
            "bounds need g >= 2, got {g}"
        )));
    }
    let gg = g as u128;
    let check = |name: &str, bound: u128, applicable: bool| BoundCheck {
        name: name.into(),
        bound,
        applicable,
        holds: group_order <= bound,
    };
    let checks = vec![
        check("order_le_24g^2", 24 * gg * gg, true),
        check("order_le_24g(g-1)", 24 * gg * (gg - 1), true),
        check("order_le_84(g-1)", 84 * (gg - 1), true),
        check("abelian_le_4g+2", 4 * gg + 2, abelian),
        check(
            "solvable_no_fixed_point_le_24g^2",
            24 * gg * gg,
            solvable && !fixes_point,
        ),
        check("tame_complement_le_4g+2", 4 * gg + 2, false),
        BoundCheck {
            name: "sylow_gt_8g".into(),
            bound: 8 * gg,
            applicable: true,
            holds: group_order > 8 * gg,
        },
    ];
    let trigger = group_order > 24 * gg * gg;
    let route = match (trigger, fixes_point, solvable) {
        (false, _, _) => Route::BelowThreshold,
        (true, true, _) => Route::FixedPoint,
        (true, false, true) => Route::SolvableContradiction,
        (true, false, false) => Route::TwoTransitive,
    };
    Ok(BoundReport {
        g,
        group_order,
        trigger,
        route,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRow {
    pub h: u64,
    pub genus: Option<u64>,
    pub error: Option<String>,
    pub in_spectrum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub n: u64,
    pub iv_genus: u64,
    pub rows: Vec<QuotientRow>,
    /// Genera of the PSU(3,n) spectrum, together with SU(3,n) when `3 | n + 1`.
    pub spectrum_genera: Vec<u64>,
    pub quotient_genera: Vec<u64>,
    pub matches: bool,
}

pub fn quotient_consistency(n: u64) -> Result<QuotientReport> {
    let psu = FamilyId::new(Family::PSU3, n)?;
    let mut spec: BTreeSet<u64> = enumerate_spectrum(&psu)?
        .entries
        .iter()
        .map(|e| e.genus as u64)
        .collect();
    if psu.mu() == 3 {
        let su = FamilyId::new(Family::SU3, n)?;
        spec.extend(
            enumerate_spectrum(&su)?
                .entries
                .iter()
                .map(|e| e.genus as u64),
        );
    }
    let iv_genus = genus(&CurveSpec::curve_iv(n)?);
    let mut rows = Vec::new();
    let mut quotient = BTreeSet::new();
    for h in divisors(n * n * n + 1) {
        let row = match section7_quotient_genus(n, h) {
            Ok(g) if g >= 2 => {
                quotient.insert(g);
                QuotientRow {
                    h,
                    genus: Some(g),
                    error: None,
                    in_spectrum: spec.contains(&g),
                }
            }
            Ok(g) => QuotientRow {
                h,
                genus: Some(g),
                error: Some("genus below 2".into()),
                in_spectrum: false,
            },
            Err(e) => QuotientRow {
                h,
                genus: None,
                error: Some(e.to_string()),
                in_spectrum: false,
            },
        };
        rows.push(row);
    }
    Ok(QuotientReport {
        n,
        iv_genus,
        rows,
        matches: quotient == spec,
        spectrum_genera: spec.into_iter().collect(),
        quotient_genera: quotient.into_iter().collect(),
    })
}

pub const CSV_HEADER: &str = "family,n,case,t,genus,s_order,sq_order,witness,flags";

pub fn to_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            e.family.name,
            e.family.n,
            e.case_tag,
            e.t,
            e.genus,
            e.s_order,
            e.sq_order,
            e.witness.map(|w| w.to_string()).unwrap_or_default(),
            e.flags.names().join(";")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(name: Family, n: u64) -> FamilyId {
        FamilyId::new(name, n).unwrap()
    }

    #[test]
    fn psl2_examples() {
        let s = enumerate_spectrum(&fam(Family::PSL2, 4)).unwrap();
        assert_eq!(s.genera(), vec![6]);
        assert_eq!(s.filtered[0].genus, 0);
        assert_eq!(
            enumerate_spectrum(&fam(Family::PSL2, 8)).unwrap().genera(),
            vec![7, 28]
        );
    }

    #[test]
    fn filtration_total() {
        let s = enumerate_spectrum(&fam(Family::SZ, 8)).unwrap();
        for e in &s.entries {
            let f = point_filtration(e).unwrap();
            assert_eq!(
                different_exponent(&f) as i128,
                2 * e.genus - 2 + (e.sp1_order + e.sp_order) as i128
            );
            assert!(f.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn bounds_route() {
        let r = bound_checks(1152, 4, false, true, true).unwrap();
        assert!(r.trigger);
        assert_eq!(r.route, Route::FixedPoint);
        assert!(bound_checks(10, 1, false, false, false).is_err());
    }
}
